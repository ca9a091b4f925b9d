//! Dense `n x n` matrices over a field, the elementary / Weyl / torus
//! generators of `SL(n)`, and words in those generators.
//!
//! All row/column indices in the public interface are 1-based, matching the
//! usual notation for the generators `u(k,h;t)`.

use crate::field::{FieldDescriptor, FieldError, FieldValue};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatError {
    #[error("matrix dimensions do not match")]
    DimensionMismatch,
    #[error("index ({k},{h}) out of range for n={n}")]
    IndexOutOfRange { k: usize, h: usize, n: usize },
    #[error("row and column index coincide (k=h={0})")]
    EqualIndices(usize),
    #[error("parameter t must be nonzero")]
    ZeroParameter,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("{0}")]
    Field(#[from] FieldError),
    #[error("parse error: {0}")]
    Parse(String),
}

/// A square matrix with entries in one field, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SquareMatrix {
    desc: FieldDescriptor,
    n: usize,
    entries: Vec<FieldValue>,
}

impl SquareMatrix {
    pub fn zero(desc: &FieldDescriptor, n: usize) -> Self {
        SquareMatrix {
            desc: desc.clone(),
            n,
            entries: vec![FieldValue::zero(desc); n * n],
        }
    }

    pub fn identity(desc: &FieldDescriptor, n: usize) -> Self {
        let mut m = Self::zero(desc, n);
        for i in 1..=n {
            m.set(i, i, FieldValue::one(desc));
        }
        m
    }

    /// The matrix unit with 1 in entry (k, h), zero elsewhere.
    pub fn unit(desc: &FieldDescriptor, n: usize, k: usize, h: usize) -> Self {
        assert!(k >= 1 && h >= 1 && k <= n && h <= n);
        let mut m = Self::zero(desc, n);
        m.set(k, h, FieldValue::one(desc));
        m
    }

    pub fn from_entries(
        desc: &FieldDescriptor,
        n: usize,
        entries: Vec<FieldValue>,
    ) -> Result<Self, MatError> {
        if entries.len() != n * n {
            return Err(MatError::DimensionMismatch);
        }
        if entries.iter().any(|v| v.descriptor() != desc) {
            return Err(MatError::Field(FieldError::DescriptorMismatch));
        }
        Ok(SquareMatrix {
            desc: desc.clone(),
            n,
            entries,
        })
    }

    pub fn descriptor(&self) -> &FieldDescriptor {
        &self.desc
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Entry at 1-based (k, h).
    pub fn entry(&self, k: usize, h: usize) -> &FieldValue {
        &self.entries[(k - 1) * self.n + (h - 1)]
    }

    pub fn set(&mut self, k: usize, h: usize, v: FieldValue) {
        self.entries[(k - 1) * self.n + (h - 1)] = v;
    }

    pub fn entries(&self) -> &[FieldValue] {
        &self.entries
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(&self.desc, self.n)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|v| v.is_zero())
    }

    fn check_same(&self, other: &Self) -> Result<(), MatError> {
        if self.n != other.n || self.desc != other.desc {
            return Err(MatError::DimensionMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_same(other).expect("matrix addition");
        let entries = self
            .entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| a.add(b))
            .collect();
        SquareMatrix {
            desc: self.desc.clone(),
            n: self.n,
            entries,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_same(other).expect("matrix subtraction");
        let entries = self
            .entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| a.sub(b))
            .collect();
        SquareMatrix {
            desc: self.desc.clone(),
            n: self.n,
            entries,
        }
    }

    pub fn neg(&self) -> Self {
        SquareMatrix {
            desc: self.desc.clone(),
            n: self.n,
            entries: self.entries.iter().map(|a| a.neg()).collect(),
        }
    }

    pub fn scale(&self, c: &FieldValue) -> Self {
        SquareMatrix {
            desc: self.desc.clone(),
            n: self.n,
            entries: self.entries.iter().map(|a| a.mul(c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_same(other).expect("matrix multiplication");
        let n = self.n;
        let mut out = Self::zero(&self.desc, n);
        for i in 0..n {
            for l in 0..n {
                let a = &self.entries[i * n + l];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other.entries[l * n + j];
                    if b.is_zero() {
                        continue;
                    }
                    let cur = &out.entries[i * n + j];
                    out.entries[i * n + j] = cur.add(&a.mul(b));
                }
            }
        }
        out
    }

    pub fn trace(&self) -> FieldValue {
        let mut acc = FieldValue::zero(&self.desc);
        for i in 1..=self.n {
            acc = acc.add(self.entry(i, i));
        }
        acc
    }

    pub fn det(&self) -> FieldValue {
        let n = self.n;
        let mut m = self.clone();
        let mut det = FieldValue::one(&self.desc);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m.entries[r * n + col].is_zero());
            let pivot = match pivot {
                None => return FieldValue::zero(&self.desc),
                Some(p) => p,
            };
            if pivot != col {
                for j in 0..n {
                    m.entries.swap(pivot * n + j, col * n + j);
                }
                det = det.neg();
            }
            let d = m.entries[col * n + col].clone();
            det = det.mul(&d);
            let dinv = d.inv().expect("pivot nonzero");
            for r in col + 1..n {
                let factor = m.entries[r * n + col].mul(&dinv);
                if factor.is_zero() {
                    continue;
                }
                for j in col..n {
                    let s = factor.mul(&m.entries[col * n + j]);
                    m.entries[r * n + j] = m.entries[r * n + j].sub(&s);
                }
            }
        }
        det
    }

    /// Inverse via Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<Self, MatError> {
        let n = self.n;
        let mut m = self.clone();
        let mut inv = Self::identity(&self.desc, n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m.entries[r * n + col].is_zero());
            let pivot = pivot.ok_or(MatError::SingularMatrix)?;
            if pivot != col {
                for j in 0..n {
                    m.entries.swap(pivot * n + j, col * n + j);
                    inv.entries.swap(pivot * n + j, col * n + j);
                }
            }
            let dinv = m.entries[col * n + col].inv().expect("pivot nonzero");
            for j in 0..n {
                m.entries[col * n + j] = m.entries[col * n + j].mul(&dinv);
                inv.entries[col * n + j] = inv.entries[col * n + j].mul(&dinv);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = m.entries[r * n + col].clone();
                if factor.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let s = factor.mul(&m.entries[col * n + j]);
                    m.entries[r * n + j] = m.entries[r * n + j].sub(&s);
                    let s = factor.mul(&inv.entries[col * n + j]);
                    inv.entries[r * n + j] = inv.entries[r * n + j].sub(&s);
                }
            }
        }
        Ok(inv)
    }

    /// Packed hash key for finite fields: ceil(log2 q) bits per entry in
    /// row-major order, each entry encoded by its enumeration index.
    pub fn packed_key(&self) -> Result<u64, MatError> {
        let q = self
            .desc
            .order()
            .ok_or(MatError::Field(FieldError::InfiniteField))?;
        let bits = bits_per_entry(q) as usize;
        assert!(bits * self.n * self.n <= 64, "matrix too large to pack");
        let mut key = 0u64;
        for (pos, v) in self.entries.iter().enumerate() {
            let idx = v.enum_index().map_err(MatError::Field)?;
            key |= idx << (bits * pos);
        }
        Ok(key)
    }

    /// Inverse of [`SquareMatrix::packed_key`].
    pub fn from_packed_key(desc: &FieldDescriptor, n: usize, key: u64) -> Result<Self, MatError> {
        let q = desc
            .order()
            .ok_or(MatError::Field(FieldError::InfiniteField))?;
        let bits = bits_per_entry(q) as usize;
        let mask = (1u64 << bits) - 1;
        let mut entries = Vec::with_capacity(n * n);
        for pos in 0..n * n {
            let idx = (key >> (bits * pos)) & mask;
            entries.push(FieldValue::from_enum_index(desc, idx).map_err(MatError::Field)?);
        }
        Self::from_entries(desc, n, entries)
    }

    /// Parses the `row;row;...` text format. Rows are comma-separated; for an
    /// extension field each entry is a flattened run of `e` coefficients.
    pub fn parse(desc: &FieldDescriptor, n: usize, s: &str) -> Result<Self, MatError> {
        let e = desc.extension_degree();
        let rows: Vec<&str> = s.trim().split(';').collect();
        if rows.len() != n {
            return Err(MatError::Parse(format!(
                "expected {n} rows, found {}",
                rows.len()
            )));
        }
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            let cells: Vec<&str> = row.split(',').map(str::trim).collect();
            if desc.is_finite() {
                if cells.len() != n * e {
                    return Err(MatError::Parse(format!(
                        "expected {} coefficients per row, found {}",
                        n * e,
                        cells.len()
                    )));
                }
                for chunk in cells.chunks(e) {
                    entries
                        .push(FieldValue::parse(desc, &chunk.join(",")).map_err(MatError::Field)?);
                }
            } else {
                if cells.len() != n {
                    return Err(MatError::Parse(format!(
                        "expected {n} entries per row, found {}",
                        cells.len()
                    )));
                }
                for cell in cells {
                    entries.push(FieldValue::parse(desc, cell).map_err(MatError::Field)?);
                }
            }
        }
        Self::from_entries(desc, n, entries)
    }
}

fn bits_per_entry(q: u64) -> u32 {
    if q <= 1 {
        1
    } else {
        64 - (q - 1).leading_zeros()
    }
}

impl fmt::Display for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (1..=self.n)
            .map(|i| {
                (1..=self.n)
                    .map(|j| self.entry(i, j).to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        write!(f, "{}", rows.join(";"))
    }
}

fn check_index(n: usize, k: usize, h: usize) -> Result<(), MatError> {
    if k == 0 || h == 0 || k > n || h > n {
        return Err(MatError::IndexOutOfRange { k, h, n });
    }
    if k == h {
        return Err(MatError::EqualIndices(k));
    }
    Ok(())
}

/// The elementary generator `u(k,h;t) = I + t E_kh`, k != h.
pub fn elementary(
    desc: &FieldDescriptor,
    n: usize,
    k: usize,
    h: usize,
    t: &FieldValue,
) -> Result<SquareMatrix, MatError> {
    check_index(n, k, h)?;
    let mut m = SquareMatrix::identity(desc, n);
    m.set(k, h, t.clone());
    Ok(m)
}

/// The monomial element `w(k,h;t) = u(k,h;t) u(h,k;-1/t) u(k,h;t)`, t != 0,
/// returned via its closed form `I - E_kk - E_hh + t E_kh - t^{-1} E_hk`.
/// Agreement with the defining product is a debug-mode self-check.
pub fn weyl(
    desc: &FieldDescriptor,
    n: usize,
    k: usize,
    h: usize,
    t: &FieldValue,
) -> Result<SquareMatrix, MatError> {
    check_index(n, k, h)?;
    if t.is_zero() {
        return Err(MatError::ZeroParameter);
    }
    let t_inv = t.inv().map_err(MatError::Field)?;
    let mut m = SquareMatrix::identity(desc, n);
    m.set(k, k, FieldValue::zero(desc));
    m.set(h, h, FieldValue::zero(desc));
    m.set(k, h, t.clone());
    m.set(h, k, t_inv.neg());
    debug_assert_eq!(m, weyl_product_form(desc, n, k, h, t).unwrap());
    Ok(m)
}

/// The defining product for [`weyl`]; the relation suite compares the two.
pub fn weyl_product_form(
    desc: &FieldDescriptor,
    n: usize,
    k: usize,
    h: usize,
    t: &FieldValue,
) -> Result<SquareMatrix, MatError> {
    check_index(n, k, h)?;
    if t.is_zero() {
        return Err(MatError::ZeroParameter);
    }
    let t_inv = t.inv().map_err(MatError::Field)?;
    let a = elementary(desc, n, k, h, t)?;
    let b = elementary(desc, n, h, k, &t_inv.neg())?;
    Ok(a.mul(&b).mul(&a))
}

/// The diagonal element `h(k,h;t) = I + (t-1) E_kk + (1/t - 1) E_hh`, t != 0.
pub fn torus(
    desc: &FieldDescriptor,
    n: usize,
    k: usize,
    h: usize,
    t: &FieldValue,
) -> Result<SquareMatrix, MatError> {
    check_index(n, k, h)?;
    if t.is_zero() {
        return Err(MatError::ZeroParameter);
    }
    let t_inv = t.inv().map_err(MatError::Field)?;
    let mut m = SquareMatrix::identity(desc, n);
    m.set(k, k, t.clone());
    m.set(h, h, t_inv);
    debug_assert_eq!(m, torus_product_form(desc, n, k, h, t).unwrap());
    Ok(m)
}

/// The defining product `w(k,h;t) w(k,h;1)^{-1}` for [`torus`].
pub fn torus_product_form(
    desc: &FieldDescriptor,
    n: usize,
    k: usize,
    h: usize,
    t: &FieldValue,
) -> Result<SquareMatrix, MatError> {
    let w_t = weyl_product_form(desc, n, k, h, t)?;
    let w_1 = weyl_product_form(desc, n, k, h, &FieldValue::one(desc))?;
    Ok(w_t.mul(&w_1.inverse()?))
}

/// Conjugation action `x . g = g^{-1} x g`; preserves traces.
pub fn adjoint_act(x: &SquareMatrix, g: &SquareMatrix) -> Result<SquareMatrix, MatError> {
    if x.dim() != g.dim() || x.descriptor() != g.descriptor() {
        return Err(MatError::DimensionMismatch);
    }
    let g_inv = g.inverse()?;
    Ok(g_inv.mul(x).mul(g))
}

/// A generator symbol `u(k,h;t)`, possibly marked as inverted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeneratorSymbol {
    pub k: usize,
    pub h: usize,
    pub t: FieldValue,
    pub inverted: bool,
}

impl GeneratorSymbol {
    pub fn new(k: usize, h: usize, t: FieldValue) -> Self {
        GeneratorSymbol {
            k,
            h,
            t,
            inverted: false,
        }
    }

    pub fn inverse(&self) -> Self {
        let mut s = self.clone();
        s.inverted = !s.inverted;
        s
    }

    /// The same symbol with the inversion flag cleared.
    pub fn base(&self) -> Self {
        let mut s = self.clone();
        s.inverted = false;
        s
    }

    /// The matrix of this symbol; `U(k,h;t)` contributes `u(k,h;-t)`.
    pub fn matrix(&self, desc: &FieldDescriptor, n: usize) -> Result<SquareMatrix, MatError> {
        let t = if self.inverted {
            self.t.neg()
        } else {
            self.t.clone()
        };
        elementary(desc, n, self.k, self.h, &t)
    }

    pub fn parse(desc: &FieldDescriptor, s: &str) -> Result<Self, MatError> {
        let s = s.trim();
        let inverted = match s.chars().next() {
            Some('u') => false,
            Some('U') => true,
            _ => return Err(MatError::Parse(format!("expected u(...) or U(...): `{s}`"))),
        };
        let body = s[1..]
            .strip_prefix('(')
            .and_then(|b| b.strip_suffix(')'))
            .ok_or_else(|| MatError::Parse(format!("malformed symbol `{s}`")))?;
        let (kh, t_s) = body
            .split_once(';')
            .ok_or_else(|| MatError::Parse(format!("missing `;` in `{s}`")))?;
        let (k_s, h_s) = kh
            .split_once(',')
            .ok_or_else(|| MatError::Parse(format!("missing `,` in `{s}`")))?;
        let k: usize = k_s
            .trim()
            .parse()
            .map_err(|_| MatError::Parse(format!("bad row index in `{s}`")))?;
        let h: usize = h_s
            .trim()
            .parse()
            .map_err(|_| MatError::Parse(format!("bad column index in `{s}`")))?;
        let t = FieldValue::parse(desc, t_s).map_err(MatError::Field)?;
        Ok(GeneratorSymbol { k, h, t, inverted })
    }
}

impl fmt::Display for GeneratorSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.inverted { 'U' } else { 'u' };
        write!(f, "{}({},{};{})", tag, self.k, self.h, self.t)
    }
}

/// A word in generator symbols; the empty word is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<GeneratorSymbol>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn single(sym: GeneratorSymbol) -> Self {
        Word(vec![sym])
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut syms = self.0.clone();
        syms.extend(other.0.iter().cloned());
        Word(syms)
    }

    /// The formal inverse: reversed symbols with inversion flags toggled.
    pub fn formal_inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|s| s.inverse()).collect())
    }

    /// Left-to-right product of the symbol matrices.
    pub fn to_matrix(&self, desc: &FieldDescriptor, n: usize) -> Result<SquareMatrix, MatError> {
        let mut acc = SquareMatrix::identity(desc, n);
        for sym in &self.0 {
            acc = acc.mul(&sym.matrix(desc, n)?);
        }
        Ok(acc)
    }

    pub fn parse(desc: &FieldDescriptor, s: &str) -> Result<Self, MatError> {
        let mut syms = Vec::new();
        for tok in s.split_whitespace() {
            syms.push(GeneratorSymbol::parse(desc, tok)?);
        }
        Ok(Word(syms))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Module-level name for evaluating a word to its matrix.
pub fn word_to_matrix(
    w: &Word,
    desc: &FieldDescriptor,
    n: usize,
) -> Result<SquareMatrix, MatError> {
    w.to_matrix(desc, n)
}
