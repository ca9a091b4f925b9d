//! Exhaustive first-cohomology computation for `SL(n, F_q)` at small scale.
//!
//! The group is enumerated as a breadth-first closure of the generating set
//! under right multiplication (generators and their inverses), with packed
//! byte matrices and lookup-table arithmetic. Each element carries a linear
//! expression of its cochain value in the generator-value unknowns over the
//! prime field; every closed (non-tree) edge contributes rows equating the
//! two expressions of the same value, which cuts the unknowns down to the
//! cocycle space. Coboundary dimension comes from the fixed subspace and is
//! cross-checked against the rank of explicitly materialized coboundaries.

use crate::adjmod::{
    coords_to_dual, dual_act, dual_action_fp, dual_dim_fp, dual_to_coords, fixed_subspace_dim,
    AdjError, DualClass, ModuleSide,
};
use crate::cocycle::{CocycleError, CocycleSpec};
use crate::field::{FieldDescriptor, FieldError, FieldValue};
use crate::linalg::{FpMat, FpRow, RowEchelon};
use crate::matgroup::{elementary, GeneratorSymbol, MatError, SquareMatrix, Word};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::time::Instant;
use thiserror::Error;

/// Default cap on enumerated elements; the environment variable `H1_BUDGET`
/// overrides it in the command-line tool.
pub const DEFAULT_ELEMENT_CAP: usize = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum H1Error {
    #[error("closure found {found} elements but the order formula gives {expected}; the generators do not generate the full group")]
    OrderMismatch { expected: u64, found: u64 },
    #[error("enumeration exceeded the element cap of {cap}")]
    BudgetExceeded { cap: usize },
    #[error("generator list is empty")]
    EmptyGenerators,
    #[error("generator has determinant != 1: {0}")]
    NotUnimodular(String),
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    #[error("{0}")]
    Field(#[from] FieldError),
    #[error("{0}")]
    Mat(#[from] MatError),
    #[error("{0}")]
    Adj(#[from] AdjError),
    #[error("{0}")]
    Cocycle(#[from] CocycleError),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

/// `|SL(n, q)| = q^(n(n-1)/2) * prod_{i=2..n} (q^i - 1)`.
pub fn sl_group_order(n: usize, q: u64) -> u64 {
    let mut order: u128 = (q as u128).pow((n * (n - 1) / 2) as u32);
    for i in 2..=n {
        order = order.saturating_mul((q as u128).pow(i as u32) - 1);
    }
    u64::try_from(order).unwrap_or(u64::MAX)
}

// --- packed matrices with table arithmetic -------------------------------

#[derive(Debug, Clone)]
struct FqTables {
    q: usize,
    add: Vec<u8>,
    mul: Vec<u8>,
}

impl FqTables {
    fn new(desc: &FieldDescriptor) -> Result<Self, H1Error> {
        let elems = crate::field::enumerate_field(desc)?;
        let q = elems.len();
        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        for (i, a) in elems.iter().enumerate() {
            for (j, b) in elems.iter().enumerate() {
                add[i * q + j] = a.add(b).enum_index()? as u8;
                mul[i * q + j] = a.mul(b).enum_index()? as u8;
            }
        }
        Ok(FqTables { q, add, mul })
    }

    #[inline]
    fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q + b as usize]
    }

    #[inline]
    fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q + b as usize]
    }
}

/// Matrix of field-element enumeration indices; one byte per entry.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct PackedMat {
    n: usize,
    e: Vec<u8>,
}

impl PackedMat {
    fn identity(n: usize) -> Self {
        let mut e = vec![0u8; n * n];
        for i in 0..n {
            e[i * n + i] = 1;
        }
        PackedMat { n, e }
    }

    fn mul(&self, other: &PackedMat, t: &FqTables) -> PackedMat {
        let n = self.n;
        let mut out = vec![0u8; n * n];
        for i in 0..n {
            for l in 0..n {
                let a = self.e[i * n + l];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let b = other.e[l * n + j];
                    if b != 0 {
                        out[i * n + j] = t.add(out[i * n + j], t.mul(a, b));
                    }
                }
            }
        }
        PackedMat { n, e: out }
    }

    fn key(&self, bits: u32) -> u64 {
        let mut key = 0u64;
        for (pos, &idx) in self.e.iter().enumerate() {
            key |= (idx as u64) << (bits as usize * pos);
        }
        key
    }

    fn from_square(m: &SquareMatrix) -> Result<Self, H1Error> {
        let n = m.dim();
        let mut e = Vec::with_capacity(n * n);
        for v in m.entries() {
            e.push(v.enum_index()? as u8);
        }
        Ok(PackedMat { n, e })
    }

    fn to_square(&self, desc: &FieldDescriptor) -> Result<SquareMatrix, H1Error> {
        let mut entries = Vec::with_capacity(self.n * self.n);
        for &idx in &self.e {
            entries.push(FieldValue::from_enum_index(desc, idx as u64)?);
        }
        Ok(SquareMatrix::from_entries(desc, self.n, entries)?)
    }
}

// --- generating sets ------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorSetChoice {
    /// `u(k,k+1;b)` and `u(k+1,k;b)` for adjacent k and b over a prime-field
    /// basis of the coefficient field.
    Elementary,
    /// The two-generator set for SL(4, F_2): `u(1,2;1)` and the 4-cycle
    /// permutation matrix.
    Paper42,
}

impl GeneratorSetChoice {
    pub fn label(&self) -> &'static str {
        match self {
            GeneratorSetChoice::Elementary => "elementary",
            GeneratorSetChoice::Paper42 => "paper42",
        }
    }

    pub fn parse(s: &str) -> Result<Self, H1Error> {
        match s {
            "elementary" => Ok(GeneratorSetChoice::Elementary),
            "paper42" => Ok(GeneratorSetChoice::Paper42),
            other => Err(H1Error::Unsupported(format!(
                "unknown generator set `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct GroupGenerator {
    pub matrix: SquareMatrix,
    /// Present when the generator is an elementary symbol, which is what
    /// allows materializing solution vectors as cocycle specs.
    pub symbol: Option<GeneratorSymbol>,
}

#[derive(Debug, Clone)]
pub struct GroupGenerators {
    pub label: String,
    pub members: Vec<GroupGenerator>,
}

/// Adjacent-transvection generating set: for each k < n the symbols
/// `u(k,k+1;b)` and `u(k+1,k;b)`, with b running over the power basis of the
/// field over its prime subfield.
pub fn elementary_generators(desc: &FieldDescriptor, n: usize) -> Result<GroupGenerators, H1Error> {
    let e = desc.extension_degree();
    let mut basis = Vec::with_capacity(e);
    let mut acc = FieldValue::one(desc);
    let y = if e > 1 {
        FieldValue::from_coeffs(desc, &[0, 1]).map_err(H1Error::Field)?
    } else {
        FieldValue::one(desc)
    };
    for _ in 0..e {
        basis.push(acc.clone());
        acc = acc.mul(&y);
    }
    let mut members = Vec::new();
    for k in 1..n {
        for (row, col) in [(k, k + 1), (k + 1, k)] {
            for b in &basis {
                let sym = GeneratorSymbol::new(row, col, b.clone());
                members.push(GroupGenerator {
                    matrix: elementary(desc, n, row, col, b)?,
                    symbol: Some(sym),
                });
            }
        }
    }
    Ok(GroupGenerators {
        label: "elementary".into(),
        members,
    })
}

/// The two-generator set for SL(4, F_2).
pub fn paper42_generators(desc: &FieldDescriptor) -> Result<GroupGenerators, H1Error> {
    if desc.order() != Some(2) {
        return Err(H1Error::Unsupported(
            "the paper42 generator set is specific to F_2".into(),
        ));
    }
    let n = 4;
    let one = FieldValue::one(desc);
    let g1 = elementary(desc, n, 1, 2, &one)?;
    let g2 = SquareMatrix::parse(desc, n, "0,0,0,1;1,0,0,0;0,1,0,0;0,0,1,0")?;
    Ok(GroupGenerators {
        label: "paper42".into(),
        members: vec![
            GroupGenerator {
                matrix: g1,
                symbol: Some(GeneratorSymbol::new(1, 2, one)),
            },
            GroupGenerator {
                matrix: g2,
                symbol: None,
            },
        ],
    })
}

pub fn generators_for(
    desc: &FieldDescriptor,
    n: usize,
    choice: GeneratorSetChoice,
) -> Result<GroupGenerators, H1Error> {
    match choice {
        GeneratorSetChoice::Elementary => elementary_generators(desc, n),
        GeneratorSetChoice::Paper42 => {
            if n != 4 {
                return Err(H1Error::Unsupported(
                    "the paper42 generator set requires n = 4".into(),
                ));
            }
            paper42_generators(desc)
        }
    }
}

/// The relator words (over generator indices 1 and 2, negatives meaning
/// inverses) of the two-generator presentation of SL(4, F_2); retained as a
/// fast pre-filter fixture for computed cocycles.
pub fn paper42_relators() -> Vec<Vec<i32>> {
    fn rep(block: &[i32], times: usize) -> Vec<i32> {
        let mut out = Vec::with_capacity(block.len() * times);
        for _ in 0..times {
            out.extend_from_slice(block);
        }
        out
    }
    let mut rels = vec![
        rep(&[1], 2),
        rep(&[2], 4),
        rep(&[1, -2, -2], 4),
        rep(&[1, 2, 1, -2], 4),
        rep(&[1, 2], 15),
    ];
    let mut r6 = vec![1, 2, 1, -2, 1, 2, 2, 1, -2];
    r6.extend(rep(&[1, 2, 1, -2, -2, 1, 2], 2));
    r6.extend([1, 2, 1, -2, -2]);
    rels.push(r6);
    let mut r7 = vec![1, -2, 1, 2, 2, 1, -2];
    r7.extend(rep(&[1, -2, -2, 1, 2], 4));
    r7.extend([1, -2, -2]);
    rels.push(r7);
    let mut r8 = vec![-2, 1, -2];
    r8.extend(rep(&[1, 2], 4));
    r8.extend(rep(&[1, -2], 4));
    r8.extend(rep(&[1, 2], 3));
    r8.extend(rep(&[2, 1, -2, 1], 2));
    r8.extend([-2, 1]);
    rels.push(r8);
    rels
}

// --- group table ----------------------------------------------------------

#[derive(Debug, Clone)]
struct Multiplier {
    gen_idx: usize,
    inverted: bool,
    packed: PackedMat,
    matrix: SquareMatrix,
}

/// The enumerated group: packed elements in breadth-first order, a key
/// index, and the spanning-tree links that give every element a witness
/// word in the generators.
#[derive(Debug, Clone)]
pub struct GroupTable {
    desc: FieldDescriptor,
    n: usize,
    q: u64,
    gens: GroupGenerators,
    multipliers: Vec<Multiplier>,
    bits: u32,
    elems: Vec<PackedMat>,
    index: HashMap<u64, u32>,
    parents: Vec<Option<(u32, u16)>>,
    /// Flat edge targets: `edges[i * multipliers.len() + m]` is the index of
    /// `elems[i] * multiplier[m]`.
    edges: Vec<u32>,
}

/// Breadth-first closure of the generators and their inverses, in the fixed
/// order (distance, multiplier index, parent order). The element count is
/// validated against the group-order formula.
pub fn enumerate_group(
    desc: &FieldDescriptor,
    n: usize,
    gens: GroupGenerators,
    element_cap: usize,
) -> Result<GroupTable, H1Error> {
    if gens.members.is_empty() {
        return Err(H1Error::EmptyGenerators);
    }
    let q = desc
        .order()
        .ok_or_else(|| H1Error::Unsupported("group enumeration needs a finite field".into()))?;
    for g in &gens.members {
        if !g.matrix.det().is_one() {
            return Err(H1Error::NotUnimodular(g.matrix.to_string()));
        }
        if g.matrix.dim() != n {
            return Err(H1Error::Mat(MatError::DimensionMismatch));
        }
    }
    let tables = FqTables::new(desc)?;
    let bits = 64 - (q - 1).max(1).leading_zeros();
    if bits as usize * n * n > 64 {
        return Err(H1Error::Unsupported(format!(
            "cannot pack {n}x{n} matrices over q={q} into 64-bit keys"
        )));
    }

    // multipliers: the generators, then those inverses not already present
    let mut multipliers: Vec<Multiplier> = Vec::new();
    for (gi, g) in gens.members.iter().enumerate() {
        multipliers.push(Multiplier {
            gen_idx: gi,
            inverted: false,
            packed: PackedMat::from_square(&g.matrix)?,
            matrix: g.matrix.clone(),
        });
    }
    for (gi, g) in gens.members.iter().enumerate() {
        let inv = g.matrix.inverse()?;
        let packed = PackedMat::from_square(&inv)?;
        if multipliers.iter().all(|m| m.packed != packed) {
            multipliers.push(Multiplier {
                gen_idx: gi,
                inverted: true,
                packed,
                matrix: inv,
            });
        }
    }

    let nmult = multipliers.len();
    let id = PackedMat::identity(n);
    let mut elems = vec![id.clone()];
    let mut index = HashMap::new();
    index.insert(id.key(bits), 0u32);
    let mut parents: Vec<Option<(u32, u16)>> = vec![None];
    // element-major flat edge targets, slots allocated as elements appear
    let mut edges: Vec<u32> = vec![u32::MAX; nmult];
    let mut frontier: Vec<u32> = vec![0];

    while !frontier.is_empty() {
        let mut next: Vec<u32> = Vec::new();
        for mi in 0..nmult {
            for &pi in &frontier {
                let child = elems[pi as usize].mul(&multipliers[mi].packed, &tables);
                let key = child.key(bits);
                let ci = match index.get(&key) {
                    Some(&ci) => ci,
                    None => {
                        let ci = elems.len() as u32;
                        if elems.len() >= element_cap {
                            return Err(H1Error::BudgetExceeded { cap: element_cap });
                        }
                        index.insert(key, ci);
                        parents.push(Some((pi, mi as u16)));
                        elems.push(child);
                        edges.extend(std::iter::repeat_n(u32::MAX, nmult));
                        next.push(ci);
                        ci
                    }
                };
                edges[pi as usize * nmult + mi] = ci;
            }
        }
        frontier = next;
    }

    let expected = sl_group_order(n, q);
    if elems.len() as u64 != expected {
        return Err(H1Error::OrderMismatch {
            expected,
            found: elems.len() as u64,
        });
    }

    Ok(GroupTable {
        desc: desc.clone(),
        n,
        q,
        gens,
        multipliers,
        bits,
        elems,
        index,
        parents,
        edges,
    })
}

impl GroupTable {
    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn field_order(&self) -> u64 {
        self.q
    }

    pub fn descriptor(&self) -> &FieldDescriptor {
        &self.desc
    }

    pub fn generators(&self) -> &GroupGenerators {
        &self.gens
    }

    pub fn element_matrix(&self, i: usize) -> Result<SquareMatrix, H1Error> {
        self.elems[i].to_square(&self.desc)
    }

    pub fn find(&self, m: &SquareMatrix) -> Option<usize> {
        let packed = PackedMat::from_square(m).ok()?;
        self.index.get(&packed.key(self.bits)).map(|&i| i as usize)
    }

    /// Witness word of an element as (generator index, inverted) steps.
    pub fn witness_steps(&self, i: usize) -> Vec<(usize, bool)> {
        let mut steps = Vec::new();
        let mut cur = i;
        while let Some((p, mi)) = self.parents[cur] {
            let m = &self.multipliers[mi as usize];
            steps.push((m.gen_idx, m.inverted));
            cur = p as usize;
        }
        steps.reverse();
        steps
    }

    /// Witness word as generator symbols; `None` when some generator on the
    /// path is not an elementary symbol.
    pub fn witness_word(&self, i: usize) -> Option<Word> {
        let mut syms = Vec::new();
        for (gi, inv) in self.witness_steps(i) {
            let mut sym = self.gens.members[gi].symbol.clone()?;
            sym.inverted = inv;
            syms.push(sym);
        }
        Some(Word(syms))
    }

    /// A word in the generating set equal to the given elementary symbol,
    /// from the breadth-first spanning tree.
    pub fn resolve_symbol(&self, sym: &GeneratorSymbol) -> Result<Option<Word>, H1Error> {
        let m = sym.base().matrix(&self.desc, self.n)?;
        match self.find(&m) {
            None => Ok(None),
            Some(i) => Ok(self.witness_word(i)),
        }
    }
}

// --- constraint harvesting -------------------------------------------------

/// Linear rows over the prime field accumulated from closed Cayley edges;
/// the unknowns are the generator values in dual coordinates.
#[derive(Debug)]
pub struct ConstraintSystem {
    pub prime: u32,
    pub unknowns: usize,
    pub rows_emitted: usize,
    echelon: RowEchelon,
}

impl ConstraintSystem {
    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    pub fn nullspace_basis(&self) -> Vec<FpRow> {
        self.echelon.nullspace_basis()
    }
}

pub fn harvest_constraints(table: &GroupTable) -> Result<ConstraintSystem, H1Error> {
    harvest_constraints_threaded(table, 1)
}

/// Same result as [`harvest_constraints`] for any thread count: workers only
/// generate rows per element chunk; rows are eliminated in the fixed
/// element-major, multiplier-major order.
pub fn harvest_constraints_threaded(
    table: &GroupTable,
    threads: usize,
) -> Result<ConstraintSystem, H1Error> {
    let desc = &table.desc;
    let n = table.n;
    let p = desc.characteristic();
    let d = dual_dim_fp(desc, n);
    let ngens = table.gens.members.len();
    let unknowns = ngens * d;
    let nmult = table.multipliers.len();

    // action matrix and value expression per multiplier
    let mut rho = Vec::with_capacity(nmult);
    let mut val = Vec::with_capacity(nmult);
    for m in &table.multipliers {
        let action = dual_action_fp(&m.matrix)?;
        let mut sel = FpMat::zero(p, d, unknowns);
        for r in 0..d {
            sel.rows[r].set(m.gen_idx * d + r, 1);
        }
        let v = if m.inverted {
            neg_mat(&action.mul(&sel), p)
        } else {
            sel
        };
        rho.push(action);
        val.push(v);
    }

    // spanning-tree pass: the expression of f at every element
    let total = table.elems.len();
    let mut exprs: Vec<FpMat> = Vec::with_capacity(total);
    exprs.push(FpMat::zero(p, d, unknowns));
    for i in 1..total {
        let (pi, mi) = table.parents[i].expect("only the identity is parentless");
        let e = rho[mi as usize]
            .mul(&exprs[pi as usize])
            .add(&val[mi as usize]);
        exprs.push(e);
    }

    // closed-edge rows, in deterministic order
    let mut echelon = RowEchelon::new(p, unknowns);
    let mut rows_emitted = 0usize;

    let make_rows = |i: usize, out: &mut Vec<FpRow>| {
        for (mi, _) in table.multipliers.iter().enumerate() {
            let child = table.edges[i * nmult + mi] as usize;
            if table.parents[child] == Some((i as u32, mi as u16)) {
                continue; // tree edge
            }
            let lhs = rho[mi].mul(&exprs[i]).add(&val[mi]);
            for r in 0..d {
                let mut row = lhs.rows[r].clone();
                row.add_scaled(&exprs[child].rows[r], p - 1, p);
                out.push(row);
            }
        }
    };

    if threads <= 1 {
        let mut buf = Vec::new();
        for i in 0..total {
            buf.clear();
            make_rows(i, &mut buf);
            for row in buf.drain(..) {
                rows_emitted += 1;
                echelon.insert(row);
            }
        }
    } else {
        let chunk = total.div_ceil(threads);
        let mut chunks: Vec<Vec<FpRow>> = Vec::new();
        std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for w in 0..threads {
                let lo = w * chunk;
                let hi = ((w + 1) * chunk).min(total);
                let make_rows = &make_rows;
                handles.push(scope.spawn(move || {
                    let mut out = Vec::new();
                    for i in lo..hi {
                        make_rows(i, &mut out);
                    }
                    out
                }));
            }
            for h in handles {
                chunks.push(h.join().expect("harvest worker panicked"));
            }
        });
        for rows in chunks {
            for row in rows {
                rows_emitted += 1;
                echelon.insert(row);
            }
        }
    }

    Ok(ConstraintSystem {
        prime: p,
        unknowns,
        rows_emitted,
        echelon,
    })
}

fn neg_mat(m: &FpMat, p: u32) -> FpMat {
    let mut out = m.clone();
    for row in out.rows.iter_mut() {
        row.scale(p - 1, p);
    }
    out
}

/// Cocycle-space dimension over the prime field.
pub fn z1_dimension(cs: &ConstraintSystem) -> usize {
    cs.unknowns - cs.rank()
}

/// Coboundary-space dimension over the prime field, computed as module
/// dimension minus fixed-subspace dimension and cross-checked against the
/// rank of the materialized coboundary vectors.
pub fn b1_dimension(table: &GroupTable) -> Result<usize, H1Error> {
    let desc = &table.desc;
    let n = table.n;
    let p = desc.characteristic();
    let d = dual_dim_fp(desc, n);
    let gen_mats: Vec<SquareMatrix> = table
        .gens
        .members
        .iter()
        .map(|g| g.matrix.clone())
        .collect();
    let fixed = fixed_subspace_dim(desc, n, &gen_mats, ModuleSide::DualAdjoint)?;
    let via_fixed = d - fixed;

    let unknowns = table.gens.members.len() * d;
    let mut ech = RowEchelon::new(p, unknowns);
    for j in 0..d {
        let mut coords = vec![0u32; d];
        coords[j] = 1;
        let beta = coords_to_dual(desc, n, &coords)?;
        let mut row = FpRow::zero(p, unknowns);
        for (gi, g) in table.gens.members.iter().enumerate() {
            let value = beta.sub(&dual_act(&beta, &g.matrix)?);
            for (r, &c) in dual_to_coords(&value)?.iter().enumerate() {
                row.set(gi * d + r, c);
            }
        }
        ech.insert(row);
    }
    let via_rank = ech.rank();

    if via_fixed != via_rank {
        return Err(H1Error::Internal(format!(
            "coboundary dimension mismatch: {via_fixed} from the fixed subspace, {via_rank} from materialized vectors"
        )));
    }
    Ok(via_fixed)
}

/// Materializes a solution vector of the constraint system as a cocycle
/// spec; requires every generator to be an elementary symbol.
pub fn materialize_cocycle(
    table: &GroupTable,
    vector: &FpRow,
) -> Result<Option<CocycleSpec>, H1Error> {
    let desc = &table.desc;
    let n = table.n;
    let d = dual_dim_fp(desc, n);
    let mut pairs = Vec::with_capacity(table.gens.members.len());
    for (gi, g) in table.gens.members.iter().enumerate() {
        let sym = match &g.symbol {
            Some(s) => s.clone(),
            None => return Ok(None),
        };
        let coords: Vec<u32> = (0..d).map(|r| vector.get(gi * d + r)).collect();
        pairs.push((sym, coords_to_dual(desc, n, &coords)?));
    }
    Ok(Some(CocycleSpec::new(desc, n, pairs)?))
}

/// Generator values of a solution vector, independent of symbol availability.
pub fn vector_values(table: &GroupTable, vector: &FpRow) -> Result<Vec<DualClass>, H1Error> {
    let desc = &table.desc;
    let n = table.n;
    let d = dual_dim_fp(desc, n);
    (0..table.gens.members.len())
        .map(|gi| {
            let coords: Vec<u32> = (0..d).map(|r| vector.get(gi * d + r)).collect();
            coords_to_dual(desc, n, &coords).map_err(H1Error::Adj)
        })
        .collect()
}

/// Evaluates a cochain, given by its generator values, on an index word
/// (1-based indices, negatives for inverses) via the cocycle identity.
pub fn word_value(
    gens: &GroupGenerators,
    values: &[DualClass],
    word: &[i32],
) -> Result<DualClass, H1Error> {
    assert_eq!(gens.members.len(), values.len());
    let first = gens.members.first().ok_or(H1Error::EmptyGenerators)?;
    let desc = first.matrix.descriptor().clone();
    let n = first.matrix.dim();
    let mut acc = DualClass::zero(&desc, n);
    for &letter in word {
        let gi = letter.unsigned_abs() as usize - 1;
        let g = &gens.members[gi];
        let (mat, val) = if letter > 0 {
            (g.matrix.clone(), values[gi].clone())
        } else {
            let inv = g.matrix.inverse()?;
            let v = dual_act(&values[gi], &inv)?.neg();
            (inv, v)
        };
        acc = dual_act(&acc, &mat)?.add(&val);
    }
    Ok(acc)
}

// --- the report -------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CohomologyReport {
    pub n: usize,
    pub q: u64,
    pub generators: String,
    #[serde(rename = "dim_Z1")]
    pub dim_z1: usize,
    #[serde(rename = "dim_B1")]
    pub dim_b1: usize,
    #[serde(rename = "dim_H1")]
    pub dim_h1: usize,
    pub group_order: u64,
    pub elapsed_ms: u64,
    pub config_hash: String,
}

#[derive(Debug, Clone)]
pub struct H1Config {
    pub n: usize,
    pub q: u64,
    pub choice: GeneratorSetChoice,
    pub element_cap: usize,
    pub threads: usize,
}

impl H1Config {
    pub fn new(n: usize, q: u64, choice: GeneratorSetChoice) -> Self {
        H1Config {
            n,
            q,
            choice,
            element_cap: DEFAULT_ELEMENT_CAP,
            threads: 1,
        }
    }
}

/// Splits `q` as `p^e` with p prime.
pub fn field_for_order(q: u64) -> Result<FieldDescriptor, H1Error> {
    let mut p = 2u64;
    while p * p <= q {
        if q.is_multiple_of(p) {
            break;
        }
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q; // q itself is prime
    }
    let mut e = 0usize;
    let mut rest = q;
    while rest > 1 {
        if !rest.is_multiple_of(p) {
            return Err(H1Error::Unsupported(format!("{q} is not a prime power")));
        }
        rest /= p;
        e += 1;
    }
    if e == 0 {
        return Err(H1Error::Unsupported("q must be at least 2".into()));
    }
    Ok(FieldDescriptor::finite(p as u32, e, None)?)
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf29ce484222325u64;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

/// Runs the full pipeline and emits the dimension report.
pub fn h1_report(cfg: &H1Config) -> Result<CohomologyReport, H1Error> {
    let start = Instant::now();
    let desc = field_for_order(cfg.q)?;
    let gens = generators_for(&desc, cfg.n, cfg.choice)?;
    let label = gens.label.clone();
    let table = enumerate_group(&desc, cfg.n, gens, cfg.element_cap)?;
    let cs = harvest_constraints_threaded(&table, cfg.threads.max(1))?;
    let dim_z1 = z1_dimension(&cs);
    let dim_b1 = b1_dimension(&table)?;
    if dim_z1 < dim_b1 {
        return Err(H1Error::Internal(format!(
            "dim Z1 = {dim_z1} smaller than dim B1 = {dim_b1}"
        )));
    }
    let config = format!(
        "v1|n={}|q={}|field={}|gens={}|mults=gens-then-new-inverses|cap={}",
        cfg.n, cfg.q, desc, label, cfg.element_cap
    );
    Ok(CohomologyReport {
        n: cfg.n,
        q: cfg.q,
        generators: label,
        dim_z1,
        dim_b1,
        dim_h1: dim_z1 - dim_b1,
        group_order: table.order() as u64,
        elapsed_ms: start.elapsed().as_millis() as u64,
        config_hash: format!("{:016x}", fnv1a64(config.as_bytes())),
    })
}
