//! 1-cochains, 1-cocycles and 1-coboundaries of the matrix group over the
//! dual module, given by their values on a finite set of elementary
//! generators and extended to arbitrary words through the cocycle identity
//! `f(g1 g2) = f(g1) . g2 + f(g2)` (right-action convention).

mod canon;
mod recognize;
mod table1;

pub use canon::{canonicalize_cocycle, extract_derivation, CanonError, DerivationExtract};
pub use recognize::{recognize_coboundary, CoboundaryDecision, CoboundaryWitness};
pub use table1::{
    table1_audit, table1_audit_matrices, ConditionOutcome, TableOneIndices, TableOneReport,
};

use crate::adjmod::{dual_act, AdjError, DualClass};
use crate::field::{DerivationSpec, FieldDescriptor, FieldError, FieldValue};
use crate::matgroup::{GeneratorSymbol, MatError, SquareMatrix, Word};
use crate::rng::SplitMix64;
use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CocycleError {
    #[error("no value stored or derivable for generator {0}")]
    UnknownGenerator(String),
    #[error("generator lists do not match")]
    GeneratorMismatch,
    #[error("generator parameters must be nonzero")]
    ZeroParameter,
    #[error("inverted symbols cannot carry values directly")]
    InvertedGenerator,
    #[error("indices must be four distinct values in 1..=n, got ({0})")]
    IndexError(String),
    #[error("the word table does not contain a product element")]
    IncompleteWordTable,
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error("{0}")]
    Mat(#[from] MatError),
    #[error("{0}")]
    Adj(#[from] AdjError),
    #[error("{0}")]
    Field(#[from] FieldError),
    #[error("parse error: {0}")]
    Parse(String),
}

type GenKey = (usize, usize, FieldValue);

/// Values of a 1-cochain on a finite generating set of elementary symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CocycleSpec {
    n: usize,
    desc: FieldDescriptor,
    gens: Vec<GeneratorSymbol>,
    values: Vec<DualClass>,
    index: HashMap<GenKey, usize>,
}

impl CocycleSpec {
    pub fn new(
        desc: &FieldDescriptor,
        n: usize,
        pairs: Vec<(GeneratorSymbol, DualClass)>,
    ) -> Result<Self, CocycleError> {
        let mut gens = Vec::with_capacity(pairs.len());
        let mut values = Vec::with_capacity(pairs.len());
        let mut index = HashMap::new();
        for (sym, val) in pairs {
            if sym.inverted {
                return Err(CocycleError::InvertedGenerator);
            }
            if sym.t.is_zero() {
                return Err(CocycleError::ZeroParameter);
            }
            if val.dim() != n || val.descriptor() != desc {
                return Err(CocycleError::Mat(MatError::DimensionMismatch));
            }
            index.insert((sym.k, sym.h, sym.t.clone()), gens.len());
            gens.push(sym);
            values.push(val);
        }
        Ok(CocycleSpec {
            n,
            desc: desc.clone(),
            gens,
            values,
            index,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn descriptor(&self) -> &FieldDescriptor {
        &self.desc
    }

    pub fn generators(&self) -> &[GeneratorSymbol] {
        &self.gens
    }

    pub fn values(&self) -> &[DualClass] {
        &self.values
    }

    /// Stored value of a non-inverted generator symbol.
    pub fn value_of(&self, sym: &GeneratorSymbol) -> Option<&DualClass> {
        self.index
            .get(&(sym.k, sym.h, sym.t.clone()))
            .map(|&i| &self.values[i])
    }

    /// Pointwise sum; both specs must carry the same generator list.
    pub fn add(&self, other: &CocycleSpec) -> Result<CocycleSpec, CocycleError> {
        if self.gens != other.gens || self.n != other.n || self.desc != other.desc {
            return Err(CocycleError::GeneratorMismatch);
        }
        let pairs = self
            .gens
            .iter()
            .cloned()
            .zip(
                self.values
                    .iter()
                    .zip(other.values.iter())
                    .map(|(a, b)| a.add(b)),
            )
            .collect();
        CocycleSpec::new(&self.desc, self.n, pairs)
    }

    /// Serializes as the spec file format, one generator per line.
    pub fn to_spec_file(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# field: {}\n", self.desc));
        out.push_str(&format!("# n: {}\n", self.n));
        for (sym, val) in self.gens.iter().zip(self.values.iter()) {
            out.push_str(&format!("{} := {}\n", sym, val.rep()));
        }
        out
    }

    /// Parses the spec file format. Header lines carry the field and n;
    /// explicit arguments override them.
    pub fn parse_spec_file(
        text: &str,
        desc: Option<FieldDescriptor>,
        n: Option<usize>,
    ) -> Result<Self, CocycleError> {
        let mut desc = desc;
        let mut n = n;
        let mut pairs = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                let rest = rest.trim();
                if let Some(v) = rest.strip_prefix("field:") {
                    if desc.is_none() {
                        desc = Some(FieldDescriptor::parse(v.trim()).map_err(CocycleError::Field)?);
                    }
                } else if let Some(v) = rest.strip_prefix("n:") {
                    if n.is_none() {
                        n = Some(
                            v.trim()
                                .parse()
                                .map_err(|_| CocycleError::Parse("bad n header".into()))?,
                        );
                    }
                }
                continue;
            }
            let (lhs, rhs) = line
                .split_once(":=")
                .ok_or_else(|| CocycleError::Parse(format!("missing `:=` in `{line}`")))?;
            let desc_ref = desc
                .as_ref()
                .ok_or_else(|| CocycleError::Parse("field not specified".into()))?;
            let n_val = n.ok_or_else(|| CocycleError::Parse("n not specified".into()))?;
            let sym = GeneratorSymbol::parse(desc_ref, lhs.trim()).map_err(CocycleError::Mat)?;
            let mat =
                SquareMatrix::parse(desc_ref, n_val, rhs.trim()).map_err(CocycleError::Mat)?;
            pairs.push((sym, crate::adjmod::canonicalize(&mat)));
        }
        let desc = desc.ok_or_else(|| CocycleError::Parse("field not specified".into()))?;
        let n = n.ok_or_else(|| CocycleError::Parse("n not specified".into()))?;
        CocycleSpec::new(&desc, n, pairs)
    }
}

/// All elementary symbols `u(k,h;t)` for k != h and t in `params`,
/// pair-major then parameter order. Zero parameters are skipped.
pub fn elementary_symbols(n: usize, params: &[FieldValue]) -> Vec<GeneratorSymbol> {
    let mut out = Vec::new();
    for k in 1..=n {
        for h in 1..=n {
            if k == h {
                continue;
            }
            for t in params {
                if !t.is_zero() {
                    out.push(GeneratorSymbol::new(k, h, t.clone()));
                }
            }
        }
    }
    out
}

/// The cochain `u(k,h;t) -> [d(t) E_kh]` induced by a derivation; it is the
/// restriction of `g -> [g^{-1} dg]` (entrywise derivative) to the given
/// generating set.
pub fn derivation_cocycle(
    d: &DerivationSpec,
    n: usize,
    gens: &[GeneratorSymbol],
) -> Result<CocycleSpec, CocycleError> {
    let desc = d.descriptor().clone();
    let mut pairs = Vec::with_capacity(gens.len());
    for sym in gens {
        let dv = d.derive(&sym.t).map_err(CocycleError::Field)?;
        let rep = SquareMatrix::unit(&desc, n, sym.k, sym.h).scale(&dv);
        pairs.push((sym.clone(), crate::adjmod::canonicalize(&rep)));
    }
    CocycleSpec::new(&desc, n, pairs)
}

/// Applies a derivation entrywise to a matrix.
pub fn matrix_derivative(
    d: &DerivationSpec,
    g: &SquareMatrix,
) -> Result<SquareMatrix, CocycleError> {
    let desc = g.descriptor().clone();
    let n = g.dim();
    let mut out = SquareMatrix::zero(&desc, n);
    for i in 1..=n {
        for j in 1..=n {
            out.set(i, j, d.derive(g.entry(i, j)).map_err(CocycleError::Field)?);
        }
    }
    Ok(out)
}

/// The coboundary of a class: `g -> [M - g^{-1} M g]`, restricted to the
/// generating set. Independent of the representative of `M`.
pub fn coboundary(m: &DualClass, gens: &[GeneratorSymbol]) -> Result<CocycleSpec, CocycleError> {
    let desc = m.descriptor().clone();
    let n = m.dim();
    let mut pairs = Vec::with_capacity(gens.len());
    for sym in gens {
        let u = sym.matrix(&desc, n).map_err(CocycleError::Mat)?;
        let acted = dual_act(m, &u).map_err(CocycleError::Adj)?;
        pairs.push((sym.clone(), m.sub(&acted)));
    }
    CocycleSpec::new(&desc, n, pairs)
}

/// The zero cochain on a generating set.
pub fn zero_cocycle(
    desc: &FieldDescriptor,
    n: usize,
    gens: &[GeneratorSymbol],
) -> Result<CocycleSpec, CocycleError> {
    let pairs = gens
        .iter()
        .cloned()
        .map(|s| (s, DualClass::zero(desc, n)))
        .collect();
    CocycleSpec::new(desc, n, pairs)
}

/// A cochain with a memo table for word evaluations. The cache is the only
/// mutable state and sits behind a lock; entries always agree with
/// re-derivation from the spec.
///
/// Values of elementary symbols outside the stored generating set can be
/// obtained by registering a resolution word (a word in the stored
/// generators with the same matrix), which the evaluator then folds.
#[derive(Debug)]
pub struct EvaluatedCochain {
    spec: CocycleSpec,
    resolutions: HashMap<GenKey, Word>,
    cache: Mutex<HashMap<Word, DualClass>>,
}

impl EvaluatedCochain {
    pub fn new(spec: CocycleSpec) -> Self {
        EvaluatedCochain {
            spec,
            resolutions: HashMap::new(),
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn spec(&self) -> &CocycleSpec {
        &self.spec
    }

    /// Registers a word in the stored generators that equals `sym` as a
    /// matrix, making `sym` evaluable. The matrix equality is checked.
    pub fn add_resolution(
        &mut self,
        sym: &GeneratorSymbol,
        word: Word,
    ) -> Result<(), CocycleError> {
        let base = sym.base();
        for s in &word.0 {
            if self.spec.value_of(&s.base()).is_none() {
                return Err(CocycleError::UnknownGenerator(s.base().to_string()));
            }
        }
        let target = base.matrix(&self.spec.desc, self.spec.n)?;
        if word.to_matrix(&self.spec.desc, self.spec.n)? != target {
            return Err(CocycleError::Internal(format!(
                "resolution word does not multiply to {base}"
            )));
        }
        self.resolutions
            .insert((base.k, base.h, base.t.clone()), word);
        Ok(())
    }

    /// The same resolutions attached to a different value assignment on the
    /// identical generating set.
    pub(crate) fn with_values_of(&self, spec: CocycleSpec) -> Result<Self, CocycleError> {
        if spec.gens != self.spec.gens {
            return Err(CocycleError::GeneratorMismatch);
        }
        Ok(EvaluatedCochain {
            spec,
            resolutions: self.resolutions.clone(),
            cache: Mutex::new(HashMap::new()),
        })
    }

    fn base_value(&self, base: &GeneratorSymbol) -> Result<DualClass, CocycleError> {
        if let Some(v) = self.spec.value_of(base) {
            return Ok(v.clone());
        }
        if let Some(word) = self.resolutions.get(&(base.k, base.h, base.t.clone())) {
            // resolution words only contain stored symbols, so this does not
            // recurse further
            return self.evaluate(word);
        }
        Err(CocycleError::UnknownGenerator(base.to_string()))
    }

    /// Value on a single symbol; the inverse rule is
    /// `f(u^{-1}) = -f(u) . u^{-1}`.
    pub fn symbol_value(&self, sym: &GeneratorSymbol) -> Result<DualClass, CocycleError> {
        let stored = self.base_value(&sym.base())?;
        if !sym.inverted {
            return Ok(stored);
        }
        let u_inv = sym.matrix(&self.spec.desc, self.spec.n)?; // matrix of the inverse
        Ok(dual_act(&stored, &u_inv)?.neg())
    }

    /// Evaluates the cochain on a word by folding the cocycle identity
    /// left to right; the empty word maps to zero.
    pub fn evaluate(&self, w: &Word) -> Result<DualClass, CocycleError> {
        if let Some(hit) = self.cache.lock().unwrap().get(w) {
            return Ok(hit.clone());
        }
        let mut value = DualClass::zero(&self.spec.desc, self.spec.n);
        for sym in &w.0 {
            let sv = self.symbol_value(sym)?;
            let m = sym.matrix(&self.spec.desc, self.spec.n)?;
            value = dual_act(&value, &m)?.add(&sv);
        }
        self.cache.lock().unwrap().insert(w.clone(), value.clone());
        Ok(value)
    }

    /// Re-derives a word's value bypassing the cache (used by audits).
    pub fn evaluate_uncached(&self, w: &Word) -> Result<DualClass, CocycleError> {
        let mut value = DualClass::zero(&self.spec.desc, self.spec.n);
        for sym in &w.0 {
            let sv = self.symbol_value(sym)?;
            let m = sym.matrix(&self.spec.desc, self.spec.n)?;
            value = dual_act(&value, &m)?.add(&sv);
        }
        Ok(value)
    }
}

/// How [`verify_cocycle`] picks the pairs it checks.
///
/// The word-fold extension satisfies the pair identity on free words by
/// construction, so meaningful verification always pits two different
/// expressions of the same group element against each other: either through
/// a table of element words, or through rewrite relations among the
/// generators.
#[derive(Debug, Clone)]
pub enum VerifyTrials<'a> {
    /// Every ordered element pair from the given word table; the product's
    /// value is evaluated through the table's own word for that element.
    /// Requires a word per group element (finite groups).
    ExhaustivePairs { words: &'a [Word] },
    /// Deterministic random pairs. With a word table, random element pairs
    /// from it; without one, random rewrite-relation instances (parameter
    /// merges, commuting swaps, commutator contractions) over the stored
    /// generating set.
    Sampled {
        seed: u64,
        count: usize,
        element_words: Option<&'a [Word]>,
    },
    /// Checks `f(r) = 0` for each supplied relator word.
    RelatorWords { relators: &'a [Word] },
}

/// One failed check: either a pair violating the cocycle identity or a
/// relator with nonzero value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub left: Word,
    pub right: Option<Word>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.right {
            Some(r) => write!(f, "pair ({}) , ({})", self.left, r),
            None => write!(f, "relator ({})", self.left),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub checked: usize,
    pub violations: Vec<Violation>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

struct PairChecker<'a> {
    f: &'a EvaluatedCochain,
    words: &'a [Word],
    mats: Vec<SquareMatrix>,
    lookup: HashMap<SquareMatrix, usize>,
    checked: usize,
    violations: Vec<Violation>,
}

impl<'a> PairChecker<'a> {
    fn new(f: &'a EvaluatedCochain, words: &'a [Word]) -> Result<Self, CocycleError> {
        let desc = f.spec().descriptor().clone();
        let n = f.spec().dim();
        let mut mats = Vec::with_capacity(words.len());
        let mut lookup = HashMap::new();
        for (i, w) in words.iter().enumerate() {
            let m = w.to_matrix(&desc, n)?;
            lookup.insert(m.clone(), i);
            mats.push(m);
        }
        Ok(PairChecker {
            f,
            words,
            mats,
            lookup,
            checked: 0,
            violations: Vec::new(),
        })
    }

    /// `f(g1 g2) = f(g1) . g2 + f(g2)`, with the product's value evaluated
    /// through the table's own word for that element.
    fn check(&mut self, i: usize, j: usize) -> Result<(), CocycleError> {
        let prod = self.mats[i].mul(&self.mats[j]);
        let pi = *self
            .lookup
            .get(&prod)
            .ok_or(CocycleError::IncompleteWordTable)?;
        let lhs = self.f.evaluate(&self.words[pi])?;
        let rhs = dual_act(&self.f.evaluate(&self.words[i])?, &self.mats[j])?
            .add(&self.f.evaluate(&self.words[j])?);
        self.checked += 1;
        if lhs != rhs {
            self.violations.push(Violation {
                left: self.words[i].clone(),
                right: Some(self.words[j].clone()),
            });
        }
        Ok(())
    }
}

/// Draws rewrite-relation instances over the stored generating set: two
/// words with equal matrices whose values must agree for a well-defined
/// cochain. Parameter merges, commuting swaps and commutator contractions
/// are used, skipping instances whose parameters are not stored.
fn sample_relation_pair(
    f: &EvaluatedCochain,
    rng: &mut SplitMix64,
) -> Result<Option<(Word, Word)>, CocycleError> {
    let spec = f.spec();
    let desc = spec.descriptor().clone();
    let n = spec.dim();
    let gens = spec.generators();
    let pick = |rng: &mut SplitMix64| gens[rng.below(gens.len() as u64) as usize].clone();
    let stored = |k: usize, h: usize, t: &FieldValue| {
        !t.is_zero()
            && spec
                .value_of(&GeneratorSymbol::new(k, h, t.clone()))
                .is_some()
    };
    let pair = match rng.below(3) {
        // parameter merge: u(k,h;s) u(k,h;t) = u(k,h;s+t)
        0 => {
            let a = pick(rng);
            let b = pick(rng);
            if (a.k, a.h) != (b.k, b.h) {
                return Ok(None);
            }
            let sum = a.t.add(&b.t);
            let right = if sum.is_zero() {
                Word::empty()
            } else if stored(a.k, a.h, &sum) {
                Word::single(GeneratorSymbol::new(a.k, a.h, sum))
            } else {
                return Ok(None);
            };
            (Word(vec![a, b]), right)
        }
        // commuting swap: positions (k,h), (p,q) with q != k and h != p
        1 => {
            let a = pick(rng);
            let b = pick(rng);
            if b.h == a.k || a.h == b.k {
                return Ok(None);
            }
            (Word(vec![a.clone(), b.clone()]), Word(vec![b, a]))
        }
        // commutator contraction: [u(k,h;s), u(h,l;t)] = u(k,l;st), k != l
        _ => {
            let a = pick(rng);
            let b = pick(rng);
            if a.h != b.k || a.k == b.h {
                return Ok(None);
            }
            let prod = a.t.mul(&b.t);
            if !stored(a.k, b.h, &prod) {
                return Ok(None);
            }
            let left = Word(vec![a.clone(), b.clone(), a.inverse(), b.inverse()]);
            let right = Word::single(GeneratorSymbol::new(a.k, b.h, prod));
            (left, right)
        }
    };
    debug_assert_eq!(
        pair.0.to_matrix(&desc, n).unwrap(),
        pair.1.to_matrix(&desc, n).unwrap()
    );
    Ok(Some(pair))
}

/// Checks the pair identity `f(g1 g2) = f(g1) . g2 + f(g2)` over the chosen
/// trials. Violations are report content, not errors.
pub fn verify_cocycle(
    f: &EvaluatedCochain,
    trials: &VerifyTrials,
) -> Result<VerifyReport, CocycleError> {
    let mut checked = 0;
    let mut violations = Vec::new();

    match trials {
        VerifyTrials::ExhaustivePairs { words } => {
            let mut pc = PairChecker::new(f, words)?;
            for i in 0..words.len() {
                for j in 0..words.len() {
                    pc.check(i, j)?;
                }
            }
            checked = pc.checked;
            violations = pc.violations;
        }
        VerifyTrials::Sampled {
            seed,
            count,
            element_words,
        } => {
            let mut rng = SplitMix64::new(*seed);
            match element_words {
                Some(words) => {
                    let mut pc = PairChecker::new(f, words)?;
                    for _ in 0..*count {
                        let i = rng.below(words.len() as u64) as usize;
                        let j = rng.below(words.len() as u64) as usize;
                        pc.check(i, j)?;
                    }
                    checked = pc.checked;
                    violations = pc.violations;
                }
                None => {
                    let mut attempts = 0usize;
                    while checked < *count {
                        attempts += 1;
                        if attempts > 200 * *count {
                            return Err(CocycleError::Internal(
                                "generating set admits too few rewrite relations to sample".into(),
                            ));
                        }
                        let (left, right) = match sample_relation_pair(f, &mut rng)? {
                            None => continue,
                            Some(p) => p,
                        };
                        checked += 1;
                        if f.evaluate(&left)? != f.evaluate(&right)? {
                            violations.push(Violation {
                                left,
                                right: Some(right.clone()),
                            });
                        }
                    }
                }
            }
        }
        VerifyTrials::RelatorWords { relators } => {
            for r in relators.iter() {
                let val = f.evaluate(r)?;
                checked += 1;
                if !val.is_zero() {
                    violations.push(Violation {
                        left: r.clone(),
                        right: None,
                    });
                }
            }
        }
    }
    Ok(VerifyReport {
        checked,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adjmod::canonicalize;
    use crate::field::{enumerate_field, sample_field};
    use crate::matgroup::elementary;

    fn f2x() -> FieldDescriptor {
        FieldDescriptor::rational_function(2).unwrap()
    }
    fn f2() -> FieldDescriptor {
        FieldDescriptor::finite(2, 1, None).unwrap()
    }

    fn probe_params(desc: &FieldDescriptor) -> Vec<FieldValue> {
        let one = FieldValue::one(desc);
        let x = FieldValue::var_x(desc).unwrap();
        let x1 = x.add(&one);
        let x2 = x.mul(&x);
        vec![one, x, x1, x2]
    }

    #[test]
    fn derivation_cocycle_generator_values() {
        let desc = f2x();
        let d = DerivationSpec::ddx(FieldValue::one(&desc)).unwrap();
        let gens = elementary_symbols(4, &probe_params(&desc));
        let spec = derivation_cocycle(&d, 4, &gens).unwrap();
        let x = FieldValue::var_x(&desc).unwrap();
        let sym = GeneratorSymbol::new(1, 2, x.clone());
        let val = spec.value_of(&sym).unwrap();
        // f(u(1,2;x)) = [d(x) E_12] = [E_12]
        assert_eq!(*val, canonicalize(&SquareMatrix::unit(&desc, 4, 1, 2)));
        // d(x^2) = 0 in characteristic 2
        let sym2 = GeneratorSymbol::new(1, 2, x.mul(&x));
        assert!(spec.value_of(&sym2).unwrap().is_zero());
    }

    #[test]
    fn zero_derivation_gives_zero_cochain() {
        let desc = f2x();
        let d = DerivationSpec::zero(&desc);
        let gens = elementary_symbols(4, &probe_params(&desc));
        let spec = derivation_cocycle(&d, 4, &gens).unwrap();
        assert!(spec.values().iter().all(|v| v.is_zero()));
    }

    #[test]
    fn derivation_cocycle_matches_formula_on_words() {
        // [g^{-1} dg] computed via entrywise differentiation and matrix
        // multiplication is the oracle for word evaluation
        let desc = f2x();
        let d = DerivationSpec::ddx(FieldValue::one(&desc)).unwrap();
        let gens = elementary_symbols(4, &probe_params(&desc));
        let f = EvaluatedCochain::new(derivation_cocycle(&d, 4, &gens).unwrap());
        let x = FieldValue::var_x(&desc).unwrap();
        let w = Word(vec![
            GeneratorSymbol::new(1, 2, x.clone()),
            GeneratorSymbol::new(2, 3, x.clone()),
        ]);
        let g = w.to_matrix(&desc, 4).unwrap();
        let oracle = canonicalize(
            &g.inverse()
                .unwrap()
                .mul(&matrix_derivative(&d, &g).unwrap()),
        );
        assert_eq!(f.evaluate(&w).unwrap(), oracle);
    }

    #[test]
    fn coboundary_values_and_special_cases() {
        let desc = f2x();
        let n = 4;
        let gens = elementary_symbols(n, &probe_params(&desc));
        let one = FieldValue::one(&desc);

        // M = [E_11]: value at u(1,k;1) is [-E_1k] for k > 1
        let m = canonicalize(&SquareMatrix::unit(&desc, n, 1, 1));
        let w = coboundary(&m, &gens).unwrap();
        for k in 2..=n {
            let sym = GeneratorSymbol::new(1, k, one.clone());
            let expect = canonicalize(&SquareMatrix::unit(&desc, n, 1, k).neg());
            assert_eq!(*w.value_of(&sym).unwrap(), expect);
        }

        // zero class and the scalar line both give the zero cochain
        let z = coboundary(&DualClass::zero(&desc, n), &gens).unwrap();
        assert!(z.values().iter().all(|v| v.is_zero()));
        let id_class = canonicalize(&SquareMatrix::identity(&desc, n));
        let zi = coboundary(&id_class, &gens).unwrap();
        assert!(zi.values().iter().all(|v| v.is_zero()));
    }

    #[test]
    fn coboundary_independent_of_representative() {
        let desc = f2();
        let n = 3;
        let one = FieldValue::one(&desc);
        let gens = elementary_symbols(n, std::slice::from_ref(&one));
        let x = SquareMatrix::unit(&desc, n, 1, 2).add(&SquareMatrix::unit(&desc, n, 2, 2));
        let shifted = x.add(&SquareMatrix::identity(&desc, n));
        let a = coboundary(&canonicalize(&x), &gens).unwrap();
        let b = coboundary(&canonicalize(&shifted), &gens).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn evaluate_cancels_inverse_pairs() {
        let desc = f2x();
        let gens = elementary_symbols(4, &probe_params(&desc));
        let d = DerivationSpec::ddx(FieldValue::one(&desc)).unwrap();
        let f = EvaluatedCochain::new(derivation_cocycle(&d, 4, &gens).unwrap());
        for sym in &gens[..6] {
            let w = Word(vec![sym.clone(), sym.inverse()]);
            assert!(f.evaluate(&w).unwrap().is_zero());
        }
        assert!(f.evaluate(&Word::empty()).unwrap().is_zero());
    }

    #[test]
    fn evaluate_on_commutator_word_gives_product_rule() {
        // the commutator of u(k,h;s) and u(h,l;t) equals u(k,l;st), and a
        // derivation cochain takes the value [d(st) E_kl] there
        let desc = f2x();
        let d = DerivationSpec::ddx(FieldValue::one(&desc)).unwrap();
        let x = FieldValue::var_x(&desc).unwrap();
        let one = FieldValue::one(&desc);
        let s = x.clone();
        let t = x.add(&one);
        let params = vec![s.clone(), t.clone()];
        let gens = elementary_symbols(4, &params);
        let f = EvaluatedCochain::new(derivation_cocycle(&d, 4, &gens).unwrap());
        let w = Word(vec![
            GeneratorSymbol::new(1, 2, s.clone()),
            GeneratorSymbol::new(2, 3, t.clone()),
            GeneratorSymbol::new(1, 2, s.clone()).inverse(),
            GeneratorSymbol::new(2, 3, t.clone()).inverse(),
        ]);
        let got = f.evaluate(&w).unwrap();
        let dst = d.derive(&s.mul(&t)).unwrap();
        let expect = canonicalize(&SquareMatrix::unit(&desc, 4, 1, 3).scale(&dst));
        assert_eq!(got, expect);
        // cross-check the matrix identity backing the word
        assert_eq!(
            w.to_matrix(&desc, 4).unwrap(),
            elementary(&desc, 4, 1, 3, &s.mul(&t)).unwrap()
        );
    }

    #[test]
    fn coboundary_evaluation_matches_direct_conjugation() {
        let desc = f2x();
        let n = 4;
        let gens = elementary_symbols(n, &probe_params(&desc));
        let x = FieldValue::var_x(&desc).unwrap();
        let mut mrep = SquareMatrix::unit(&desc, n, 1, 3);
        mrep.set(2, 1, x.clone());
        let m = canonicalize(&mrep);
        let f = EvaluatedCochain::new(coboundary(&m, &gens).unwrap());
        let w = Word(vec![
            GeneratorSymbol::new(1, 2, x.clone()),
            GeneratorSymbol::new(3, 4, FieldValue::one(&desc)).inverse(),
            GeneratorSymbol::new(2, 3, x.clone()),
        ]);
        let g = w.to_matrix(&desc, n).unwrap();
        let oracle = m.sub(&dual_act(&m, &g).unwrap());
        assert_eq!(f.evaluate(&w).unwrap(), oracle);
    }

    #[test]
    fn verify_cocycle_sampled_accepts_derivation_cochain() {
        let desc = f2x();
        let d = DerivationSpec::ddx(FieldValue::one(&desc)).unwrap();
        let gens = elementary_symbols(4, &probe_params(&desc));
        let f = EvaluatedCochain::new(derivation_cocycle(&d, 4, &gens).unwrap());
        let report = verify_cocycle(
            &f,
            &VerifyTrials::Sampled {
                seed: 3,
                count: 200,
                element_words: None,
            },
        )
        .unwrap();
        assert_eq!(report.checked, 200);
        assert!(report.passed(), "violations: {:?}", report.violations);
    }

    #[test]
    fn verify_cocycle_flags_perturbed_cochain() {
        let desc = f2();
        let n = 3;
        let one = FieldValue::one(&desc);
        let gens = elementary_symbols(n, std::slice::from_ref(&one));
        let m = canonicalize(&SquareMatrix::unit(&desc, n, 1, 1));
        let mut spec = coboundary(&m, &gens).unwrap();
        // perturb one generator value by [E_12]
        let pairs: Vec<(GeneratorSymbol, DualClass)> = spec
            .generators()
            .iter()
            .cloned()
            .zip(spec.values().iter().cloned())
            .enumerate()
            .map(|(i, (g, v))| {
                if i == 0 {
                    let bump = canonicalize(&SquareMatrix::unit(&desc, n, 1, 2));
                    (g, v.add(&bump))
                } else {
                    (g, v)
                }
            })
            .collect();
        spec = CocycleSpec::new(&desc, n, pairs).unwrap();
        let f = EvaluatedCochain::new(spec);
        let report = verify_cocycle(
            &f,
            &VerifyTrials::Sampled {
                seed: 1,
                count: 300,
                element_words: None,
            },
        )
        .unwrap();
        assert!(!report.passed(), "perturbation must violate the identity");
    }

    #[test]
    fn zero_cochain_verifies() {
        let desc = f2();
        let gens = elementary_symbols(3, &[FieldValue::one(&desc)]);
        let f = EvaluatedCochain::new(zero_cocycle(&desc, 3, &gens).unwrap());
        let report = verify_cocycle(
            &f,
            &VerifyTrials::Sampled {
                seed: 9,
                count: 50,
                element_words: None,
            },
        )
        .unwrap();
        assert!(report.passed());
    }

    #[test]
    fn well_definedness_on_rewrite_pairs() {
        // words equal as matrices get equal values: additivity rewrite
        // u(s) u(t) vs u(s+t), and the commutator rewrite
        let desc = f2x();
        let d = DerivationSpec::ddx(FieldValue::one(&desc)).unwrap();
        let x = FieldValue::var_x(&desc).unwrap();
        let one = FieldValue::one(&desc);
        let params = vec![
            x.clone(),
            one.clone(),
            x.add(&one),
            x.mul(&x),
            x.mul(&x).add(&x), // x^2 + x = x(x+1)
        ];
        let gens = elementary_symbols(4, &params);
        let f = EvaluatedCochain::new(derivation_cocycle(&d, 4, &gens).unwrap());

        let w_split = Word(vec![
            GeneratorSymbol::new(1, 2, x.clone()),
            GeneratorSymbol::new(1, 2, x.mul(&x)),
        ]);
        let w_sum = Word(vec![GeneratorSymbol::new(1, 2, x.add(&x.mul(&x)))]);
        assert_eq!(
            w_split.to_matrix(&desc, 4).unwrap(),
            w_sum.to_matrix(&desc, 4).unwrap()
        );
        assert_eq!(f.evaluate(&w_split).unwrap(), f.evaluate(&w_sum).unwrap());

        let w_comm = Word(vec![
            GeneratorSymbol::new(1, 2, x.clone()),
            GeneratorSymbol::new(2, 3, x.add(&one)),
            GeneratorSymbol::new(1, 2, x.clone()).inverse(),
            GeneratorSymbol::new(2, 3, x.add(&one)).inverse(),
        ]);
        let w_single = Word(vec![GeneratorSymbol::new(1, 3, x.mul(&x.add(&one)))]);
        assert_eq!(
            w_comm.to_matrix(&desc, 4).unwrap(),
            w_single.to_matrix(&desc, 4).unwrap()
        );
        assert_eq!(f.evaluate(&w_comm).unwrap(), f.evaluate(&w_single).unwrap());
    }

    #[test]
    fn evaluated_values_have_traceless_representatives_when_p_divides_n() {
        // trace of the canonical representative vanishes on every evaluated
        // element when p | n (here p = 2, n = 4)
        let desc = f2x();
        let d = DerivationSpec::ddx(FieldValue::one(&desc)).unwrap();
        let gens = elementary_symbols(4, &probe_params(&desc));
        let f = EvaluatedCochain::new(derivation_cocycle(&d, 4, &gens).unwrap());
        let mut rng = SplitMix64::new(77);
        for _ in 0..50 {
            let len = 1 + rng.below(5) as usize;
            let syms: Vec<GeneratorSymbol> = (0..len)
                .map(|_| {
                    let mut s = gens[rng.below(gens.len() as u64) as usize].clone();
                    s.inverted = rng.below(2) == 1;
                    s
                })
                .collect();
            let val = f.evaluate(&Word(syms)).unwrap();
            assert!(val.rep().trace().is_zero());
        }
    }

    #[test]
    fn fold_extension_satisfies_the_pair_identity_on_words() {
        // internal consistency of the word fold: concatenation, action and
        // the inverse rule compose the way the identity demands
        let desc = f2x();
        let d = DerivationSpec::ddx(FieldValue::one(&desc)).unwrap();
        let gens = elementary_symbols(4, &probe_params(&desc));
        let f = EvaluatedCochain::new(derivation_cocycle(&d, 4, &gens).unwrap());
        let mut rng = SplitMix64::new(13);
        let random_word = |rng: &mut SplitMix64| {
            let len = 1 + rng.below(5) as usize;
            Word(
                (0..len)
                    .map(|_| {
                        let mut s = gens[rng.below(gens.len() as u64) as usize].clone();
                        s.inverted = rng.below(2) == 1;
                        s
                    })
                    .collect(),
            )
        };
        for _ in 0..100 {
            let w1 = random_word(&mut rng);
            let w2 = random_word(&mut rng);
            let lhs = f.evaluate(&w1.concat(&w2)).unwrap();
            let m2 = w2.to_matrix(&desc, 4).unwrap();
            let rhs = dual_act(&f.evaluate(&w1).unwrap(), &m2)
                .unwrap()
                .add(&f.evaluate(&w2).unwrap());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn resolution_words_extend_the_evaluable_symbols() {
        // adjacent-only generating set over F_2, n = 3: the value at the
        // non-adjacent u(1,3;1) comes from a registered word and must match
        // the direct conjugation formula of the backing coboundary
        let desc = f2();
        let one = FieldValue::one(&desc);
        let gens: Vec<GeneratorSymbol> = vec![
            GeneratorSymbol::new(1, 2, one.clone()),
            GeneratorSymbol::new(2, 1, one.clone()),
            GeneratorSymbol::new(2, 3, one.clone()),
            GeneratorSymbol::new(3, 2, one.clone()),
        ];
        let m = canonicalize(&SquareMatrix::unit(&desc, 3, 2, 1));
        let mut f = EvaluatedCochain::new(coboundary(&m, &gens).unwrap());
        let target = GeneratorSymbol::new(1, 3, one.clone());
        assert!(matches!(
            f.symbol_value(&target),
            Err(CocycleError::UnknownGenerator(_))
        ));
        // u(1,3;1) = [u(1,2;1), u(2,3;1)] by the commutator contraction
        let word = Word(vec![
            gens[0].clone(),
            gens[2].clone(),
            gens[0].inverse(),
            gens[2].inverse(),
        ]);
        f.add_resolution(&target, word).unwrap();
        let got = f.symbol_value(&target).unwrap();
        let u13 = elementary(&desc, 3, 1, 3, &one).unwrap();
        let oracle = m.sub(&dual_act(&m, &u13).unwrap());
        assert_eq!(got, oracle);

        // a wrong resolution word is rejected
        let mut f2c = EvaluatedCochain::new(coboundary(&m, &gens).unwrap());
        assert!(f2c
            .add_resolution(&target, Word(vec![gens[0].clone()]))
            .is_err());
    }

    #[test]
    fn cache_agrees_with_rederivation() {
        let desc = f2();
        let one = FieldValue::one(&desc);
        let gens = elementary_symbols(3, std::slice::from_ref(&one));
        let m = canonicalize(&SquareMatrix::unit(&desc, 3, 2, 1));
        let f = EvaluatedCochain::new(coboundary(&m, &gens).unwrap());
        let w = Word(vec![gens[0].clone(), gens[1].inverse(), gens[2].clone()]);
        let cached = f.evaluate(&w).unwrap();
        let again = f.evaluate(&w).unwrap();
        let fresh = f.evaluate_uncached(&w).unwrap();
        assert_eq!(cached, again);
        assert_eq!(cached, fresh);
    }

    #[test]
    fn spec_file_roundtrip() {
        let desc = f2x();
        let d = DerivationSpec::ddx(FieldValue::one(&desc)).unwrap();
        let gens = elementary_symbols(4, &probe_params(&desc));
        let spec = derivation_cocycle(&d, 4, &gens).unwrap();
        let text = spec.to_spec_file();
        let parsed = CocycleSpec::parse_spec_file(&text, None, None).unwrap();
        assert_eq!(parsed, spec);
    }

    #[test]
    fn pair_identity_over_finite_fields_sampled() {
        let desc = FieldDescriptor::finite(3, 1, None).unwrap();
        let params: Vec<FieldValue> = enumerate_field(&desc)
            .unwrap()
            .into_iter()
            .filter(|v| !v.is_zero())
            .collect();
        let gens = elementary_symbols(3, &params);
        let vals = sample_field(&desc, 4, 9);
        let m = canonicalize(&SquareMatrix::from_entries(&desc, 3, vals).unwrap());
        let f = EvaluatedCochain::new(coboundary(&m, &gens).unwrap());
        let report = verify_cocycle(
            &f,
            &VerifyTrials::Sampled {
                seed: 5,
                count: 150,
                element_words: None,
            },
        )
        .unwrap();
        assert!(report.passed());
    }
}
