//! Exact arithmetic for small finite fields `F_q` (q = p^e <= 81) and the
//! rational function field `F_p(x)`, together with derivations on them.
//!
//! Finite elements are coefficient vectors modulo a fixed irreducible
//! polynomial. Rational elements are reduced fractions of `F_p[x]`
//! polynomials with a monic denominator, which gives decidable equality.
//!
//! Every supported field has positive characteristic; characteristic zero is
//! outside this crate's scope. Finite fields are perfect and therefore admit
//! only the zero derivation, so nonzero derivations exist here only on
//! `F_p(x)` (constant multiples of the formal derivative).

use crate::poly;
use crate::rng::SplitMix64;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("values belong to different fields")]
    DescriptorMismatch,
    #[error("cannot enumerate an infinite field")]
    InfiniteField,
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("extension degree {0} outside 1..=4")]
    DegreeOutOfRange(usize),
    #[error("field order {0} exceeds the supported cap of 81")]
    OrderTooLarge(u64),
    #[error("modulus polynomial is reducible over F_{0}")]
    ReducibleModulus(u32),
    #[error("modulus polynomial must be monic of degree {expected}, got degree {got:?}")]
    BadModulusDegree { expected: usize, got: Option<usize> },
    #[error("nonzero derivations only exist on the rational function field here")]
    NoSuchDerivation,
    #[error("parse error: {0}")]
    Parse(String),
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldKind {
    /// `F_{p^e}` as `F_p[y]` modulo an irreducible polynomial of degree `e`
    /// (coefficients stored constant term first).
    Finite { p: u32, e: usize, modulus: Vec<u32> },
    /// `F_p(x)`, fractions of polynomials over the prime field.
    RationalFunction { p: u32 },
}

/// Shared, immutable description of a concrete field.
#[derive(Debug, Clone, Eq)]
pub struct FieldDescriptor {
    inner: Arc<FieldKind>,
}

impl PartialEq for FieldDescriptor {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || *self.inner == *other.inner
    }
}

impl std::hash::Hash for FieldDescriptor {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.inner.hash(state);
    }
}

impl FieldDescriptor {
    /// Finite field `F_{p^e}`. When `modulus` is `None` the lexicographically
    /// first monic irreducible of degree `e` is used. The modulus is checked
    /// for irreducibility by exhaustive factor search.
    pub fn finite(p: u32, e: usize, modulus: Option<Vec<u32>>) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if !(1..=4).contains(&e) {
            return Err(FieldError::DegreeOutOfRange(e));
        }
        let q = (p as u64).pow(e as u32);
        if q > 81 {
            return Err(FieldError::OrderTooLarge(q));
        }
        let modulus = match modulus {
            Some(mut m) => {
                for c in m.iter_mut() {
                    *c %= p;
                }
                poly::trim(&mut m);
                if poly::deg(&m) != Some(e) {
                    return Err(FieldError::BadModulusDegree {
                        expected: e,
                        got: poly::deg(&m),
                    });
                }
                let m = poly::monic(p, &m);
                if !poly::is_irreducible(p, &m) {
                    return Err(FieldError::ReducibleModulus(p));
                }
                m
            }
            None => poly::first_irreducible(p, e),
        };
        Ok(FieldDescriptor {
            inner: Arc::new(FieldKind::Finite { p, e, modulus }),
        })
    }

    /// The rational function field `F_p(x)`.
    pub fn rational_function(p: u32) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(FieldDescriptor {
            inner: Arc::new(FieldKind::RationalFunction { p }),
        })
    }

    pub fn kind(&self) -> &FieldKind {
        &self.inner
    }

    pub fn characteristic(&self) -> u32 {
        match *self.inner {
            FieldKind::Finite { p, .. } => p,
            FieldKind::RationalFunction { p } => p,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(*self.inner, FieldKind::Finite { .. })
    }

    /// Number of elements for finite fields.
    pub fn order(&self) -> Option<u64> {
        match *self.inner {
            FieldKind::Finite { p, e, .. } => Some((p as u64).pow(e as u32)),
            FieldKind::RationalFunction { .. } => None,
        }
    }

    /// Extension degree over the prime field (1 for `F_p(x)`; its prime-field
    /// linear algebra is never used).
    pub fn extension_degree(&self) -> usize {
        match *self.inner {
            FieldKind::Finite { e, .. } => e,
            FieldKind::RationalFunction { .. } => 1,
        }
    }

    /// Parses `fq:p=3,e=2,mod=1,0,1` or `fpx:p=2`.
    pub fn parse(s: &str) -> Result<Self, FieldError> {
        let bad = |m: &str| FieldError::Parse(format!("{m}: `{s}`"));
        if let Some(rest) = s.strip_prefix("fq:") {
            let mut p = None;
            let mut e = None;
            let mut modulus: Option<Vec<u32>> = None;
            // `mod=` consumes the remainder of the string (its value contains commas)
            let mut parts = rest.split(',').peekable();
            while let Some(part) = parts.next() {
                if let Some(v) = part.strip_prefix("p=") {
                    p = Some(v.parse::<u32>().map_err(|_| bad("bad p"))?);
                } else if let Some(v) = part.strip_prefix("e=") {
                    e = Some(v.parse::<usize>().map_err(|_| bad("bad e"))?);
                } else if let Some(v) = part.strip_prefix("mod=") {
                    let mut coeffs = vec![v.parse::<u32>().map_err(|_| bad("bad modulus"))?];
                    for c in parts.by_ref() {
                        coeffs.push(c.parse::<u32>().map_err(|_| bad("bad modulus"))?);
                    }
                    modulus = Some(coeffs);
                } else {
                    return Err(bad("unknown field parameter"));
                }
            }
            let p = p.ok_or_else(|| bad("missing p"))?;
            let e = e.unwrap_or(1);
            Self::finite(p, e, modulus)
        } else if let Some(rest) = s.strip_prefix("fpx:") {
            let v = rest
                .strip_prefix("p=")
                .ok_or_else(|| bad("expected p=<prime>"))?;
            let p = v.parse::<u32>().map_err(|_| bad("bad p"))?;
            Self::rational_function(p)
        } else {
            Err(bad("expected `fq:` or `fpx:` prefix"))
        }
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.inner {
            FieldKind::Finite { p, e, modulus } => {
                write!(f, "fq:p={p},e={e}")?;
                if *e > 1 {
                    let coeffs: Vec<String> = modulus.iter().map(|c| c.to_string()).collect();
                    write!(f, ",mod={}", coeffs.join(","))?;
                }
                Ok(())
            }
            FieldKind::RationalFunction { p } => write!(f, "fpx:p={p}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Payload {
    /// Exactly `e` coefficients in `Z_p`, lowest power first.
    Finite(Vec<u32>),
    /// Reduced fraction: gcd(num, den) = 1, den monic and nonzero.
    Ratio { num: Vec<u32>, den: Vec<u32> },
}

/// An element of a concrete field, carrying its descriptor.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldValue {
    desc: FieldDescriptor,
    payload: Payload,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl FieldValue {
    pub fn descriptor(&self) -> &FieldDescriptor {
        &self.desc
    }

    pub fn zero(desc: &FieldDescriptor) -> Self {
        match desc.kind() {
            FieldKind::Finite { e, .. } => FieldValue {
                desc: desc.clone(),
                payload: Payload::Finite(vec![0; *e]),
            },
            FieldKind::RationalFunction { .. } => FieldValue {
                desc: desc.clone(),
                payload: Payload::Ratio {
                    num: Vec::new(),
                    den: vec![1],
                },
            },
        }
    }

    pub fn one(desc: &FieldDescriptor) -> Self {
        Self::from_int(desc, 1)
    }

    /// The image of an integer in the prime subfield.
    pub fn from_int(desc: &FieldDescriptor, k: i64) -> Self {
        let p = desc.characteristic() as i64;
        let c = k.rem_euclid(p) as u32;
        match desc.kind() {
            FieldKind::Finite { e, .. } => {
                let mut coeffs = vec![0; *e];
                coeffs[0] = c;
                FieldValue {
                    desc: desc.clone(),
                    payload: Payload::Finite(coeffs),
                }
            }
            FieldKind::RationalFunction { .. } => {
                let num = if c == 0 { Vec::new() } else { vec![c] };
                FieldValue {
                    desc: desc.clone(),
                    payload: Payload::Ratio { num, den: vec![1] },
                }
            }
        }
    }

    /// Finite-field element from its coefficient vector (length at most `e`).
    pub fn from_coeffs(desc: &FieldDescriptor, coeffs: &[u32]) -> Result<Self, FieldError> {
        match desc.kind() {
            FieldKind::Finite { p, e, .. } => {
                if coeffs.len() > *e {
                    return Err(FieldError::Parse(format!(
                        "{} coefficients for an extension of degree {e}",
                        coeffs.len()
                    )));
                }
                let mut cs = vec![0u32; *e];
                for (i, &c) in coeffs.iter().enumerate() {
                    cs[i] = c % p;
                }
                Ok(FieldValue {
                    desc: desc.clone(),
                    payload: Payload::Finite(cs),
                })
            }
            FieldKind::RationalFunction { .. } => Err(FieldError::Parse(
                "coefficient form is only for finite fields".into(),
            )),
        }
    }

    /// The transcendental `x` of `F_p(x)`.
    pub fn var_x(desc: &FieldDescriptor) -> Result<Self, FieldError> {
        match desc.kind() {
            FieldKind::RationalFunction { .. } => Ok(FieldValue {
                desc: desc.clone(),
                payload: Payload::Ratio {
                    num: vec![0, 1],
                    den: vec![1],
                },
            }),
            FieldKind::Finite { .. } => Err(FieldError::Parse(
                "`x` only exists in the rational function field".into(),
            )),
        }
    }

    /// Rational function from numerator and denominator polynomials; reduces
    /// to canonical form (coprime, monic denominator).
    pub fn from_num_den(
        desc: &FieldDescriptor,
        num: &[u32],
        den: &[u32],
    ) -> Result<Self, FieldError> {
        let p = match desc.kind() {
            FieldKind::RationalFunction { p } => *p,
            FieldKind::Finite { .. } => {
                return Err(FieldError::Parse(
                    "fractions are only for the rational function field".into(),
                ))
            }
        };
        let mut num: Vec<u32> = num.iter().map(|&c| c % p).collect();
        let mut den: Vec<u32> = den.iter().map(|&c| c % p).collect();
        poly::trim(&mut num);
        poly::trim(&mut den);
        if den.is_empty() {
            return Err(FieldError::DivisionByZero);
        }
        if num.is_empty() {
            return Ok(Self::zero(desc));
        }
        let g = poly::gcd(p, &num, &den);
        if poly::deg(&g) > Some(0) {
            num = poly::divrem(p, &num, &g).0;
            den = poly::divrem(p, &den, &g).0;
        }
        let lead_inv = poly::inv_scalar(p, *den.last().unwrap());
        num = poly::scale(p, &num, lead_inv);
        den = poly::scale(p, &den, lead_inv);
        Ok(FieldValue {
            desc: desc.clone(),
            payload: Payload::Ratio { num, den },
        })
    }

    pub fn is_zero(&self) -> bool {
        match &self.payload {
            Payload::Finite(cs) => cs.iter().all(|&c| c == 0),
            Payload::Ratio { num, .. } => num.is_empty(),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one(&self.desc)
    }

    fn require_same(&self, other: &Self) -> Result<(), FieldError> {
        if self.desc == other.desc {
            Ok(())
        } else {
            Err(FieldError::DescriptorMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        field_arith(self, other, FieldOp::Add).expect("field addition")
    }

    pub fn sub(&self, other: &Self) -> Self {
        field_arith(self, other, FieldOp::Sub).expect("field subtraction")
    }

    pub fn mul(&self, other: &Self) -> Self {
        field_arith(self, other, FieldOp::Mul).expect("field multiplication")
    }

    pub fn neg(&self) -> Self {
        Self::zero(&self.desc).sub(self)
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, FieldError> {
        field_arith(self, other, FieldOp::Div)
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        Self::one(&self.desc).checked_div(self)
    }

    /// Index of a finite-field element in the canonical enumeration:
    /// the base-`p` value of its coefficient vector.
    pub fn enum_index(&self) -> Result<u64, FieldError> {
        match (&self.payload, self.desc.kind()) {
            (Payload::Finite(cs), FieldKind::Finite { p, .. }) => {
                let mut idx = 0u64;
                for &c in cs.iter().rev() {
                    idx = idx * *p as u64 + c as u64;
                }
                Ok(idx)
            }
            _ => Err(FieldError::InfiniteField),
        }
    }

    /// Inverse of [`FieldValue::enum_index`].
    pub fn from_enum_index(desc: &FieldDescriptor, mut idx: u64) -> Result<Self, FieldError> {
        match desc.kind() {
            FieldKind::Finite { p, e, .. } => {
                let mut coeffs = vec![0u32; *e];
                for c in coeffs.iter_mut() {
                    *c = (idx % *p as u64) as u32;
                    idx /= *p as u64;
                }
                debug_assert_eq!(idx, 0, "index out of range for this field");
                Self::from_coeffs(desc, &coeffs)
            }
            _ => Err(FieldError::InfiniteField),
        }
    }

    /// Numerator / denominator coefficient vectors of a rational value.
    pub fn as_fraction(&self) -> Option<(&[u32], &[u32])> {
        match &self.payload {
            Payload::Ratio { num, den } => Some((num, den)),
            Payload::Finite(_) => None,
        }
    }

    pub fn coeffs(&self) -> Option<&[u32]> {
        match &self.payload {
            Payload::Finite(cs) => Some(cs),
            Payload::Ratio { .. } => None,
        }
    }

    /// Parses a value in the printed format for the given field.
    pub fn parse(desc: &FieldDescriptor, s: &str) -> Result<Self, FieldError> {
        let s = s.trim();
        match desc.kind() {
            FieldKind::Finite { .. } => {
                let mut coeffs = Vec::new();
                for part in s.split(',') {
                    let c: u32 = part
                        .trim()
                        .parse()
                        .map_err(|_| FieldError::Parse(format!("bad coefficient `{part}`")))?;
                    coeffs.push(c);
                }
                Self::from_coeffs(desc, &coeffs)
            }
            FieldKind::RationalFunction { p } => {
                let (num_s, den_s) = match s.find('/') {
                    Some(pos) => (&s[..pos], &s[pos + 1..]),
                    None => (s, "1"),
                };
                let num = parse_poly(*p, num_s)?;
                let den = parse_poly(*p, den_s)?;
                Self::from_num_den(desc, &num, &den)
            }
        }
    }
}

/// Exact field arithmetic; both operands must share one descriptor.
pub fn field_arith(a: &FieldValue, b: &FieldValue, op: FieldOp) -> Result<FieldValue, FieldError> {
    a.require_same(b)?;
    let desc = a.desc.clone();
    match (&a.payload, &b.payload, desc.kind()) {
        (Payload::Finite(ca), Payload::Finite(cb), FieldKind::Finite { p, e, modulus }) => {
            let (p, e) = (*p, *e);
            let reduce = |v: Vec<u32>| -> Vec<u32> {
                let mut r = poly::rem(p, &v, modulus);
                r.resize(e, 0);
                r
            };
            let cs = match op {
                FieldOp::Add => reduce(poly::add(p, ca, cb)),
                FieldOp::Sub => reduce(poly::sub(p, ca, cb)),
                FieldOp::Mul => reduce(poly::mul(p, ca, cb)),
                FieldOp::Div => {
                    if b.is_zero() {
                        return Err(FieldError::DivisionByZero);
                    }
                    let mut bb = cb.clone();
                    poly::trim(&mut bb);
                    let inv = poly::inv_mod(p, &bb, modulus).ok_or(FieldError::DivisionByZero)?;
                    reduce(poly::mul(p, ca, &inv))
                }
            };
            Ok(FieldValue {
                desc,
                payload: Payload::Finite(cs),
            })
        }
        (
            Payload::Ratio { num: na, den: da },
            Payload::Ratio { num: nb, den: db },
            FieldKind::RationalFunction { p },
        ) => {
            let p = *p;
            let (num, den) = match op {
                FieldOp::Add => (
                    poly::add(p, &poly::mul(p, na, db), &poly::mul(p, nb, da)),
                    poly::mul(p, da, db),
                ),
                FieldOp::Sub => (
                    poly::sub(p, &poly::mul(p, na, db), &poly::mul(p, nb, da)),
                    poly::mul(p, da, db),
                ),
                FieldOp::Mul => (poly::mul(p, na, nb), poly::mul(p, da, db)),
                FieldOp::Div => {
                    if nb.is_empty() {
                        return Err(FieldError::DivisionByZero);
                    }
                    (poly::mul(p, na, db), poly::mul(p, da, nb))
                }
            };
            FieldValue::from_num_den(&desc, &num, &den)
        }
        _ => Err(FieldError::DescriptorMismatch),
    }
}

/// All `q` elements of a finite field, in enumeration-index order:
/// 0 first, 1 second.
pub fn enumerate_field(desc: &FieldDescriptor) -> Result<Vec<FieldValue>, FieldError> {
    let q = desc.order().ok_or(FieldError::InfiniteField)?;
    (0..q)
        .map(|i| FieldValue::from_enum_index(desc, i))
        .collect()
}

/// Deterministic pseudorandom elements. For `F_p(x)` the numerator and
/// denominator degrees are bounded by `degree_cap`.
pub fn sample_field_with_cap(
    desc: &FieldDescriptor,
    seed: u64,
    count: usize,
    degree_cap: usize,
) -> Vec<FieldValue> {
    let mut rng = SplitMix64::new(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        out.push(sample_one(desc, &mut rng, degree_cap));
    }
    out
}

/// [`sample_field_with_cap`] with the default degree cap of 4.
pub fn sample_field(desc: &FieldDescriptor, seed: u64, count: usize) -> Vec<FieldValue> {
    sample_field_with_cap(desc, seed, count, 4)
}

pub(crate) fn sample_one(
    desc: &FieldDescriptor,
    rng: &mut SplitMix64,
    degree_cap: usize,
) -> FieldValue {
    match desc.kind() {
        FieldKind::Finite { .. } => {
            let q = desc.order().unwrap();
            FieldValue::from_enum_index(desc, rng.below(q)).unwrap()
        }
        FieldKind::RationalFunction { p } => {
            let p = *p;
            let rand_poly = |rng: &mut SplitMix64, nonzero: bool| loop {
                let d = rng.below(degree_cap as u64 + 1) as usize;
                let mut coeffs: Vec<u32> = (0..=d).map(|_| rng.below(p as u64) as u32).collect();
                poly::trim(&mut coeffs);
                if !nonzero || !coeffs.is_empty() {
                    return coeffs;
                }
            };
            let num = rand_poly(rng, false);
            let den = rand_poly(rng, true);
            FieldValue::from_num_den(desc, &num, &den).unwrap()
        }
    }
}

/// A derivation of the field: the zero map, or a constant multiple of the
/// formal derivative `d/dx` on `F_p(x)`. Finite fields only admit zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationSpec {
    desc: FieldDescriptor,
    kind: DerivationKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum DerivationKind {
    Zero,
    Ddx { scale: FieldValue },
}

impl DerivationSpec {
    pub fn zero(desc: &FieldDescriptor) -> Self {
        DerivationSpec {
            desc: desc.clone(),
            kind: DerivationKind::Zero,
        }
    }

    /// `scale * d/dx`; only constructible on `F_p(x)`.
    pub fn ddx(scale: FieldValue) -> Result<Self, FieldError> {
        match scale.descriptor().kind() {
            FieldKind::RationalFunction { .. } => Ok(DerivationSpec {
                desc: scale.descriptor().clone(),
                kind: DerivationKind::Ddx { scale },
            }),
            FieldKind::Finite { .. } => Err(FieldError::NoSuchDerivation),
        }
    }

    pub fn descriptor(&self) -> &FieldDescriptor {
        &self.desc
    }

    pub fn is_zero(&self) -> bool {
        match &self.kind {
            DerivationKind::Zero => true,
            DerivationKind::Ddx { scale } => scale.is_zero(),
        }
    }

    /// Applies the derivation to `t`.
    pub fn derive(&self, t: &FieldValue) -> Result<FieldValue, FieldError> {
        if *t.descriptor() != self.desc {
            return Err(FieldError::DescriptorMismatch);
        }
        match &self.kind {
            DerivationKind::Zero => Ok(FieldValue::zero(&self.desc)),
            DerivationKind::Ddx { scale } => {
                let (num, den) = t.as_fraction().expect("ddx lives on F_p(x)");
                let p = self.desc.characteristic();
                // (n/d)' = (n'd - nd') / d^2
                let n1 = poly::derivative(p, num);
                let d1 = poly::derivative(p, den);
                let top = poly::sub(p, &poly::mul(p, &n1, den), &poly::mul(p, num, &d1));
                let bot = poly::mul(p, den, den);
                let raw = FieldValue::from_num_den(&self.desc, &top, &bot)?;
                Ok(raw.mul(scale))
            }
        }
    }
}

fn fmt_poly(a: &[u32]) -> String {
    if a.is_empty() {
        return "0".into();
    }
    let mut terms = Vec::new();
    for (d, &c) in a.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let term = match (d, c) {
            (0, c) => c.to_string(),
            (1, 1) => "x".into(),
            (1, c) => format!("{c}*x"),
            (d, 1) => format!("x^{d}"),
            (d, c) => format!("{c}*x^{d}"),
        };
        terms.push(term);
    }
    terms.join("+")
}

pub(crate) fn parse_poly(p: u32, s: &str) -> Result<Vec<u32>, FieldError> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(FieldError::Parse("empty polynomial".into()));
    }
    let bad = |m: &str| FieldError::Parse(format!("{m} in `{s}`"));
    let mut out: Vec<u32> = Vec::new();
    // terms split on +/-; a leading sign is allowed
    let mut term = String::new();
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut negated = false;
    for (i, ch) in s.chars().enumerate() {
        if (ch == '+' || ch == '-') && i > 0 {
            terms.push((negated, std::mem::take(&mut term)));
            negated = ch == '-';
        } else if ch == '-' {
            negated = true;
        } else if ch == '+' {
        } else {
            term.push(ch);
        }
    }
    terms.push((negated, term));
    for (neg, t) in terms {
        if t.is_empty() {
            return Err(bad("empty term"));
        }
        let (coeff_s, degree) = match t.find('x') {
            None => (t.as_str(), 0usize),
            Some(pos) => {
                let deg = match t[pos + 1..].strip_prefix('^') {
                    Some(e) => e.parse::<usize>().map_err(|_| bad("bad exponent"))?,
                    None if t[pos + 1..].is_empty() => 1,
                    None => return Err(bad("malformed term")),
                };
                (t[..pos].trim_end_matches('*'), deg)
            }
        };
        let c: u32 = if coeff_s.is_empty() {
            1
        } else {
            coeff_s.parse().map_err(|_| bad("bad coefficient"))?
        };
        let c = if neg { (p - c % p) % p } else { c % p };
        if out.len() <= degree {
            out.resize(degree + 1, 0);
        }
        out[degree] = (out[degree] + c) % p;
    }
    poly::trim(&mut out);
    Ok(out)
}

impl fmt::Display for FieldValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.payload {
            Payload::Finite(cs) => {
                let parts: Vec<String> = cs.iter().map(|c| c.to_string()).collect();
                write!(f, "{}", parts.join(","))
            }
            Payload::Ratio { num, den } => {
                if poly::is_one(den) {
                    write!(f, "{}", fmt_poly(num))
                } else {
                    write!(f, "{}/{}", fmt_poly(num), fmt_poly(den))
                }
            }
        }
    }
}
