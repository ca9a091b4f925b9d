//! The traceless module `A_n`, its dual modeled as matrices modulo the
//! scalar line with a canonical representative, the trace pairing, and the
//! prime-field coordinate bridge used by the linear-algebra pipeline.
//!
//! The canonical representative of a class fixes the (n,n) entry at zero:
//! every class contains exactly one such matrix (subtract `x_nn * I`), and
//! this choice works in both divisibility modes, unlike trace normalization.

use crate::field::{FieldDescriptor, FieldValue};
use crate::linalg::{FpMat, FpRow, RowEchelon};
use crate::matgroup::{MatError, SquareMatrix};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AdjError {
    #[error("matrix has nonzero trace")]
    NotTraceless,
    #[error("no traceless projection exists when the characteristic divides n (p={p}, n={n})")]
    CharDividesDimension { p: u32, n: usize },
    #[error("prime-field coordinates require a finite field")]
    InfiniteField,
    #[error("{0}")]
    Mat(#[from] MatError),
}

/// Whether the field characteristic divides the matrix dimension; the two
/// regimes need different representative handling throughout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DivisibilityMode {
    CharPrimeToN,
    CharDividesN,
}

impl DivisibilityMode {
    pub fn of(desc: &FieldDescriptor, n: usize) -> Self {
        if (n as u32).is_multiple_of(desc.characteristic()) {
            DivisibilityMode::CharDividesN
        } else {
            DivisibilityMode::CharPrimeToN
        }
    }
}

/// A matrix with trace exactly zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TracelessMatrix {
    mat: SquareMatrix,
}

impl TracelessMatrix {
    pub fn new(mat: SquareMatrix) -> Result<Self, AdjError> {
        if !mat.trace().is_zero() {
            return Err(AdjError::NotTraceless);
        }
        Ok(TracelessMatrix { mat })
    }

    pub fn matrix(&self) -> &SquareMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> SquareMatrix {
        self.mat
    }
}

/// A coset of the scalar line, stored by its canonical representative
/// (the one whose (n,n) entry is zero). Two classes are equal exactly when
/// their canonical representatives are equal entrywise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualClass {
    rep: SquareMatrix,
}

/// Canonical representative of the class of `x`: subtracts `x_nn * I`.
pub fn canonicalize(x: &SquareMatrix) -> DualClass {
    let n = x.dim();
    let corner = x.entry(n, n).clone();
    let rep = if corner.is_zero() {
        x.clone()
    } else {
        let shift = SquareMatrix::identity(x.descriptor(), n).scale(&corner);
        x.sub(&shift)
    };
    DualClass { rep }
}

impl DualClass {
    pub fn zero(desc: &FieldDescriptor, n: usize) -> Self {
        DualClass {
            rep: SquareMatrix::zero(desc, n),
        }
    }

    pub fn from_matrix(x: &SquareMatrix) -> Self {
        canonicalize(x)
    }

    /// The canonical representative.
    pub fn rep(&self) -> &SquareMatrix {
        &self.rep
    }

    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    pub fn descriptor(&self) -> &FieldDescriptor {
        self.rep.descriptor()
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        canonicalize(&self.rep.add(&other.rep))
    }

    pub fn sub(&self, other: &Self) -> Self {
        canonicalize(&self.rep.sub(&other.rep))
    }

    pub fn neg(&self) -> Self {
        canonicalize(&self.rep.neg())
    }

    pub fn scale(&self, c: &FieldValue) -> Self {
        canonicalize(&self.rep.scale(c))
    }

    /// The unique traceless representative; requires p not dividing n.
    pub fn traceless_rep(&self) -> Result<TracelessMatrix, AdjError> {
        project_traceless(&self.rep)
    }
}

/// The trace pairing `([x], a) -> Tr(x a)`; independent of the representative
/// because `a` is traceless.
pub fn pairing(alpha: &DualClass, a: &TracelessMatrix) -> Result<FieldValue, AdjError> {
    if alpha.dim() != a.matrix().dim() || alpha.descriptor() != a.matrix().descriptor() {
        return Err(AdjError::Mat(MatError::DimensionMismatch));
    }
    Ok(alpha.rep.mul(a.matrix()).trace())
}

/// Right action of the group on dual classes: `[x] . g = [g^{-1} x g]`.
pub fn dual_act(alpha: &DualClass, g: &SquareMatrix) -> Result<DualClass, AdjError> {
    let acted = crate::matgroup::adjoint_act(&alpha.rep, g)?;
    Ok(canonicalize(&acted))
}

/// The unique traceless matrix in the class of `x`, namely
/// `x - (Tr(x)/n) * I`. Fails when the characteristic divides n.
pub fn project_traceless(x: &SquareMatrix) -> Result<TracelessMatrix, AdjError> {
    let desc = x.descriptor().clone();
    let n = x.dim();
    if DivisibilityMode::of(&desc, n) == DivisibilityMode::CharDividesN {
        return Err(AdjError::CharDividesDimension {
            p: desc.characteristic(),
            n,
        });
    }
    let n_inv = FieldValue::from_int(&desc, n as i64)
        .inv()
        .expect("n invertible since p does not divide n");
    let shift = SquareMatrix::identity(&desc, n).scale(&x.trace().mul(&n_inv));
    TracelessMatrix::new(x.sub(&shift))
}

/// Dimension of the dual module over the prime field: `(n^2 - 1) * e`.
pub fn dual_dim_fp(desc: &FieldDescriptor, n: usize) -> usize {
    (n * n - 1) * desc.extension_degree()
}

fn fq_basis(desc: &FieldDescriptor) -> Vec<FieldValue> {
    let e = desc.extension_degree();
    let mut base = Vec::with_capacity(e);
    let mut acc = FieldValue::one(desc);
    let y = if e > 1 {
        FieldValue::from_coeffs(desc, &[0, 1]).unwrap()
    } else {
        FieldValue::one(desc)
    };
    for _ in 0..e {
        base.push(acc.clone());
        acc = acc.mul(&y);
    }
    base
}

/// Positions of the dual-module basis classes `[E_kh]`, row-major with the
/// (n,n) corner omitted.
fn dual_positions(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(n * n - 1);
    for k in 1..=n {
        for h in 1..=n {
            if (k, h) != (n, n) {
                out.push((k, h));
            }
        }
    }
    out
}

/// Prime-field coordinates of a dual class: canonical-representative entries
/// at every position except (n,n), each expanded into its `e` coefficients.
pub fn dual_to_coords(alpha: &DualClass) -> Result<Vec<u32>, AdjError> {
    let desc = alpha.descriptor();
    if !desc.is_finite() {
        return Err(AdjError::InfiniteField);
    }
    let n = alpha.dim();
    let e = desc.extension_degree();
    let mut out = Vec::with_capacity((n * n - 1) * e);
    for (k, h) in dual_positions(n) {
        let coeffs = alpha.rep.entry(k, h).coeffs().expect("finite field value");
        out.extend_from_slice(coeffs);
    }
    Ok(out)
}

/// Inverse of [`dual_to_coords`].
pub fn coords_to_dual(
    desc: &FieldDescriptor,
    n: usize,
    coords: &[u32],
) -> Result<DualClass, AdjError> {
    let e = desc.extension_degree();
    assert_eq!(coords.len(), (n * n - 1) * e);
    let mut rep = SquareMatrix::zero(desc, n);
    for (i, (k, h)) in dual_positions(n).into_iter().enumerate() {
        let v = FieldValue::from_coeffs(desc, &coords[i * e..(i + 1) * e])
            .map_err(|err| AdjError::Mat(MatError::Field(err)))?;
        rep.set(k, h, v);
    }
    Ok(DualClass { rep })
}

/// The matrix over `F_p` of the right action `alpha -> alpha . g` on dual
/// coordinates.
pub fn dual_action_fp(g: &SquareMatrix) -> Result<FpMat, AdjError> {
    let desc = g.descriptor();
    if !desc.is_finite() {
        return Err(AdjError::InfiniteField);
    }
    let n = g.dim();
    let p = desc.characteristic();
    let e = desc.extension_degree();
    let dim = dual_dim_fp(desc, n);
    let mut mat = FpMat::zero(p, dim, dim);
    let basis_scalars = fq_basis(desc);
    let g_inv = g.inverse()?;
    for (pos_idx, (k, h)) in dual_positions(n).into_iter().enumerate() {
        let unit = SquareMatrix::unit(desc, n, k, h);
        for (m, scalar) in basis_scalars.iter().enumerate() {
            let col = pos_idx * e + m;
            let basis_mat = unit.scale(scalar);
            let acted = canonicalize(&g_inv.mul(&basis_mat).mul(g));
            let coords = dual_to_coords(&acted)?;
            for (row, &c) in coords.iter().enumerate() {
                if c != 0 {
                    mat.set(row, col, c);
                }
            }
        }
    }
    Ok(mat)
}

/// Basis matrices of the traceless module over `F_q`: off-diagonal units
/// row-major, then `E_ii - E_nn` for i < n.
fn traceless_basis(desc: &FieldDescriptor, n: usize) -> Vec<SquareMatrix> {
    let mut out = Vec::with_capacity(n * n - 1);
    for k in 1..=n {
        for h in 1..=n {
            if k != h {
                out.push(SquareMatrix::unit(desc, n, k, h));
            }
        }
    }
    for i in 1..n {
        let m = SquareMatrix::unit(desc, n, i, i).sub(&SquareMatrix::unit(desc, n, n, n));
        out.push(m);
    }
    out
}

fn traceless_to_coords(a: &SquareMatrix) -> Result<Vec<u32>, AdjError> {
    let desc = a.descriptor();
    if !desc.is_finite() {
        return Err(AdjError::InfiniteField);
    }
    let n = a.dim();
    let mut out = Vec::new();
    for k in 1..=n {
        for h in 1..=n {
            if k != h {
                out.extend_from_slice(a.entry(k, h).coeffs().unwrap());
            }
        }
    }
    for i in 1..n {
        out.extend_from_slice(a.entry(i, i).coeffs().unwrap());
    }
    Ok(out)
}

/// Which module the generators act on in [`fixed_subspace_dim`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModuleSide {
    /// Traceless matrices with the conjugation action.
    Adjoint,
    /// Matrices modulo scalars with the conjugation action.
    DualAdjoint,
}

/// Dimension over `F_p` of the joint fixed subspace
/// `{v : v . g = v for all generators}`, via the nullspace of the stacked
/// `action - identity` maps. An empty generator list fixes everything.
pub fn fixed_subspace_dim(
    desc: &FieldDescriptor,
    n: usize,
    generators: &[SquareMatrix],
    side: ModuleSide,
) -> Result<usize, AdjError> {
    if !desc.is_finite() {
        return Err(AdjError::InfiniteField);
    }
    let p = desc.characteristic();
    let dim = dual_dim_fp(desc, n); // both modules have dimension (n^2-1)e
    let mut ech = RowEchelon::new(p, dim);
    for g in generators {
        let action = match side {
            ModuleSide::DualAdjoint => dual_action_fp(g)?,
            ModuleSide::Adjoint => adjoint_action_fp(g)?,
        };
        for (i, row) in action.rows.iter().enumerate() {
            let mut r = row.clone();
            // subtract the identity row
            let mut id_row = FpRow::zero(p, dim);
            id_row.set(i, 1);
            r.add_scaled(&id_row, p - 1, p);
            ech.insert(r);
        }
    }
    Ok(dim - ech.rank())
}

/// The matrix over `F_p` of conjugation on traceless coordinates.
pub fn adjoint_action_fp(g: &SquareMatrix) -> Result<FpMat, AdjError> {
    let desc = g.descriptor();
    if !desc.is_finite() {
        return Err(AdjError::InfiniteField);
    }
    let n = g.dim();
    let p = desc.characteristic();
    let e = desc.extension_degree();
    let dim = dual_dim_fp(desc, n);
    let mut mat = FpMat::zero(p, dim, dim);
    let scalars = fq_basis(desc);
    let g_inv = g.inverse()?;
    for (j, base) in traceless_basis(desc, n).into_iter().enumerate() {
        for (m, scalar) in scalars.iter().enumerate() {
            let col = j * e + m;
            let acted = g_inv.mul(&base.scale(scalar)).mul(g);
            let coords = traceless_to_coords(&acted)?;
            for (row, &c) in coords.iter().enumerate() {
                if c != 0 {
                    mat.set(row, col, c);
                }
            }
        }
    }
    Ok(mat)
}
