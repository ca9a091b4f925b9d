//! Exact linear algebra over prime fields and over arbitrary field values.
//!
//! Rows over `F_p` are bit-packed for p = 2 and byte-packed otherwise; the
//! incremental [`RowEchelon`] accumulator streams rows into a reduced basis,
//! which is how the large constraint systems stay small in memory.

use crate::field::{FieldError, FieldValue};

/// A dense row vector over `F_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FpRow {
    /// One bit per entry, 64 entries per word (p = 2).
    Bits(Vec<u64>),
    /// One byte per entry, values in `0..p`.
    Bytes(Vec<u8>),
}

impl FpRow {
    pub fn zero(p: u32, ncols: usize) -> Self {
        if p == 2 {
            FpRow::Bits(vec![0u64; ncols.div_ceil(64)])
        } else {
            FpRow::Bytes(vec![0u8; ncols])
        }
    }

    pub fn get(&self, i: usize) -> u32 {
        match self {
            FpRow::Bits(w) => ((w[i / 64] >> (i % 64)) & 1) as u32,
            FpRow::Bytes(b) => b[i] as u32,
        }
    }

    pub fn set(&mut self, i: usize, v: u32) {
        match self {
            FpRow::Bits(w) => {
                if v & 1 == 1 {
                    w[i / 64] |= 1 << (i % 64);
                } else {
                    w[i / 64] &= !(1 << (i % 64));
                }
            }
            FpRow::Bytes(b) => b[i] = v as u8,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FpRow::Bits(w) => w.iter().all(|&x| x == 0),
            FpRow::Bytes(b) => b.iter().all(|&x| x == 0),
        }
    }

    /// Column of the first nonzero entry.
    pub fn leading(&self) -> Option<usize> {
        match self {
            FpRow::Bits(w) => w
                .iter()
                .position(|&x| x != 0)
                .map(|i| i * 64 + w[i].trailing_zeros() as usize),
            FpRow::Bytes(b) => b.iter().position(|&x| x != 0),
        }
    }

    /// `self += c * other` (mod p).
    pub fn add_scaled(&mut self, other: &FpRow, c: u32, p: u32) {
        if c == 0 {
            return;
        }
        match (self, other) {
            (FpRow::Bits(a), FpRow::Bits(b)) => {
                for (x, y) in a.iter_mut().zip(b.iter()) {
                    *x ^= y;
                }
            }
            (FpRow::Bytes(a), FpRow::Bytes(b)) => {
                for (x, y) in a.iter_mut().zip(b.iter()) {
                    *x = ((*x as u32 + c * *y as u32) % p) as u8;
                }
            }
            _ => panic!("mixed row representations"),
        }
    }

    /// `self *= c` (mod p).
    pub fn scale(&mut self, c: u32, p: u32) {
        match self {
            FpRow::Bits(w) => {
                if c & 1 == 0 {
                    w.iter_mut().for_each(|x| *x = 0);
                }
            }
            FpRow::Bytes(b) => {
                for x in b.iter_mut() {
                    *x = ((*x as u32 * c) % p) as u8;
                }
            }
        }
    }
}

fn inv_mod_p(p: u32, a: u32) -> u32 {
    crate::poly::inv_scalar(p, a)
}

/// Incremental Gaussian elimination over `F_p`: rows are reduced against the
/// accumulated basis as they arrive, so only independent rows are kept.
#[derive(Debug, Clone)]
pub struct RowEchelon {
    p: u32,
    ncols: usize,
    rows: Vec<FpRow>,
    pivots: Vec<usize>, // pivot column of rows[i]; pivot coefficient is 1
    pivot_of_col: Vec<Option<u32>>, // column -> row index
}

impl RowEchelon {
    pub fn new(p: u32, ncols: usize) -> Self {
        RowEchelon {
            p,
            ncols,
            rows: Vec::new(),
            pivots: Vec::new(),
            pivot_of_col: vec![None; ncols],
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `row` against the basis and inserts the remainder if nonzero.
    /// Returns true when the rank grew.
    pub fn insert(&mut self, mut row: FpRow) -> bool {
        loop {
            let lead = match row.leading() {
                None => return false,
                Some(l) => l,
            };
            match self.pivot_of_col[lead] {
                Some(i) => {
                    let c = row.get(lead);
                    row.add_scaled(&self.rows[i as usize], (self.p - c) % self.p, self.p);
                }
                None => {
                    let c = row.get(lead);
                    if c != 1 {
                        row.scale(inv_mod_p(self.p, c), self.p);
                    }
                    self.pivot_of_col[lead] = Some(self.rows.len() as u32);
                    self.rows.push(row);
                    self.pivots.push(lead);
                    return true;
                }
            }
        }
    }

    /// A basis of `{x : r · x = 0 for every inserted row r}`.
    pub fn nullspace_basis(&self) -> Vec<FpRow> {
        // bring to reduced row echelon form first
        let mut rows = self.rows.clone();
        let mut pivots = self.pivots.clone();
        let mut order: Vec<usize> = (0..rows.len()).collect();
        order.sort_by_key(|&i| pivots[i]);
        let rows_sorted: Vec<FpRow> = order.iter().map(|&i| rows[i].clone()).collect();
        let pivots_sorted: Vec<usize> = order.iter().map(|&i| pivots[i]).collect();
        rows = rows_sorted;
        pivots = pivots_sorted;
        for i in (0..rows.len()).rev() {
            for j in 0..i {
                let c = rows[j].get(pivots[i]);
                if c != 0 {
                    let (head, tail) = rows.split_at_mut(i);
                    head[j].add_scaled(&tail[0], (self.p - c) % self.p, self.p);
                }
            }
        }

        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..self.ncols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = FpRow::zero(self.p, self.ncols);
            v.set(free, 1);
            for (i, &pc) in pivots.iter().enumerate() {
                let c = rows[i].get(free);
                if c != 0 {
                    // pivot coefficient is 1, so x_pc = -c * x_free
                    v.set(pc, (self.p - c) % self.p);
                }
            }
            basis.push(v);
        }
        basis
    }
}

/// Dense matrix over `F_p` stored as rows; used for module action matrices
/// and the per-element linear expressions of the Cayley closure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpMat {
    pub p: u32,
    pub ncols: usize,
    pub rows: Vec<FpRow>,
}

impl FpMat {
    pub fn zero(p: u32, nrows: usize, ncols: usize) -> Self {
        FpMat {
            p,
            ncols,
            rows: vec![FpRow::zero(p, ncols); nrows],
        }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = Self::zero(p, n, n);
        for i in 0..n {
            m.rows[i].set(i, 1);
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.rows[i].set(j, v);
    }

    /// `self * other`; the rows of the product are `F_p`-combinations of
    /// `other`'s rows, which keeps the bit-packed case fast.
    pub fn mul(&self, other: &FpMat) -> FpMat {
        assert_eq!(self.ncols, other.nrows());
        let mut out = FpMat::zero(self.p, self.nrows(), other.ncols);
        for (i, out_row) in out.rows.iter_mut().enumerate() {
            for j in 0..self.ncols {
                let c = self.get(i, j);
                if c != 0 {
                    out_row.add_scaled(&other.rows[j], c, self.p);
                }
            }
        }
        out
    }

    /// `self + other`.
    pub fn add(&self, other: &FpMat) -> FpMat {
        assert_eq!(self.ncols, other.ncols);
        assert_eq!(self.nrows(), other.nrows());
        let mut out = self.clone();
        for (r, o) in out.rows.iter_mut().zip(other.rows.iter()) {
            r.add_scaled(o, 1, self.p);
        }
        out
    }

    /// Matrix-vector product (vector given as an `FpRow`).
    pub fn apply(&self, v: &FpRow) -> FpRow {
        let mut out = FpRow::zero(self.p, self.nrows());
        for (i, row) in self.rows.iter().enumerate() {
            let mut acc = 0u32;
            for j in 0..self.ncols {
                acc = (acc + row.get(j) * v.get(j)) % self.p;
            }
            out.set(i, acc);
        }
        out
    }
}

/// Solves `A x = b` exactly over an arbitrary field, returning one solution
/// (free variables set to zero) or `None` when inconsistent.
pub fn solve_dense(
    a: &[Vec<FieldValue>],
    b: &[FieldValue],
) -> Result<Option<Vec<FieldValue>>, FieldError> {
    assert_eq!(a.len(), b.len());
    if a.is_empty() {
        return Ok(Some(Vec::new()));
    }
    let ncols = a[0].len();
    let desc = if ncols > 0 {
        a[0][0].descriptor().clone()
    } else {
        b[0].descriptor().clone()
    };
    let zero = FieldValue::zero(&desc);

    let mut rows: Vec<(Vec<FieldValue>, FieldValue)> = a
        .iter()
        .zip(b.iter())
        .map(|(r, rhs)| (r.clone(), rhs.clone()))
        .collect();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; ncols];
    let mut echelon: Vec<(Vec<FieldValue>, FieldValue, usize)> = Vec::new();

    for (mut row, mut rhs) in rows.drain(..) {
        loop {
            let lead = row.iter().position(|v| !v.is_zero());
            match lead {
                None => {
                    if !rhs.is_zero() {
                        return Ok(None); // 0 = nonzero: inconsistent
                    }
                    break;
                }
                Some(col) => match pivot_of_col[col] {
                    Some(idx) => {
                        let (erow, erhs, _) = &echelon[idx];
                        let c = row[col].clone();
                        for (x, y) in row.iter_mut().zip(erow.iter()) {
                            *x = x.sub(&c.mul(y));
                        }
                        rhs = rhs.sub(&c.mul(erhs));
                    }
                    None => {
                        let inv = row[col].inv()?;
                        for x in row.iter_mut() {
                            *x = x.mul(&inv);
                        }
                        rhs = rhs.mul(&inv);
                        pivot_of_col[col] = Some(echelon.len());
                        echelon.push((row, rhs, col));
                        break;
                    }
                },
            }
        }
    }

    // back-substitute: free variables are zero
    let mut solution = vec![zero; ncols];
    echelon.sort_by_key(|&(_, _, col)| std::cmp::Reverse(col));
    for (row, rhs, col) in echelon {
        let mut acc = rhs;
        for (j, coeff) in row.iter().enumerate().skip(col + 1) {
            if !coeff.is_zero() {
                acc = acc.sub(&coeff.mul(&solution[j]));
            }
        }
        solution[col] = acc;
    }
    Ok(Some(solution))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldDescriptor;

    #[test]
    fn rank_and_nullspace_gf2() {
        let mut ech = RowEchelon::new(2, 4);
        let mut r1 = FpRow::zero(2, 4);
        r1.set(0, 1);
        r1.set(1, 1);
        let mut r2 = FpRow::zero(2, 4);
        r2.set(1, 1);
        r2.set(2, 1);
        assert!(ech.insert(r1.clone()));
        assert!(ech.insert(r2));
        assert!(!ech.insert(r1)); // dependent
        assert_eq!(ech.rank(), 2);
        let ns = ech.nullspace_basis();
        assert_eq!(ns.len(), 2);
        // every basis vector is orthogonal to the inserted rows
        for v in &ns {
            assert_eq!((v.get(0) + v.get(1)) % 2, 0);
            assert_eq!((v.get(1) + v.get(2)) % 2, 0);
        }
    }

    #[test]
    fn rank_gf3() {
        let mut ech = RowEchelon::new(3, 3);
        let mut r1 = FpRow::zero(3, 3);
        r1.set(0, 2);
        r1.set(2, 1);
        let mut r2 = FpRow::zero(3, 3);
        r2.set(0, 1);
        r2.set(2, 2);
        // r2 = 2 * r1 over F_3
        assert!(ech.insert(r1));
        assert!(!ech.insert(r2));
        assert_eq!(ech.rank(), 1);
        assert_eq!(ech.nullspace_basis().len(), 2);
    }

    #[test]
    fn nullspace_vectors_annihilate_random_rows() {
        let mut rng = crate::rng::SplitMix64::new(3);
        for &p in &[2u32, 3] {
            let ncols = 17;
            let mut ech = RowEchelon::new(p, ncols);
            let mut inserted = Vec::new();
            for _ in 0..10 {
                let mut row = FpRow::zero(p, ncols);
                for j in 0..ncols {
                    row.set(j, rng.below(p as u64) as u32);
                }
                inserted.push(row.clone());
                ech.insert(row);
            }
            for v in ech.nullspace_basis() {
                for row in &inserted {
                    let dot: u32 = (0..ncols).map(|j| row.get(j) * v.get(j)).sum();
                    assert_eq!(dot % p, 0);
                }
            }
            assert_eq!(ech.rank() + ech.nullspace_basis().len(), ncols);
        }
    }

    #[test]
    fn dense_solver_over_rational_functions() {
        let desc = FieldDescriptor::rational_function(2).unwrap();
        let x = FieldValue::var_x(&desc).unwrap();
        let one = FieldValue::one(&desc);
        let zero = FieldValue::zero(&desc);
        // [x 1; 0 x] * [a b]^T = [x^2+1, x] has solution a = x, b = 1... check: x*a + b = x^2+1, x*b = x
        let a = vec![vec![x.clone(), one.clone()], vec![zero.clone(), x.clone()]];
        let b = vec![x.mul(&x).add(&one), x.clone()];
        let sol = solve_dense(&a, &b).unwrap().unwrap();
        assert_eq!(sol[0], x);
        assert_eq!(sol[1], one);

        // inconsistent system
        let a2 = vec![vec![x.clone()], vec![x.clone()]];
        let b2 = vec![one.clone(), zero];
        assert!(solve_dense(&a2, &b2).unwrap().is_none());
    }
}
