//! Coboundary recognition: decides whether a cochain given on generators is
//! of the form `g -> [m - g^{-1} m g]` by solving the induced linear system
//! in the entries of `m`, exactly, over the coefficient field.
//!
//! When the characteristic is prime to n the system is solved inside the
//! traceless module with no slack; when it divides n a scalar slack unknown
//! per generator absorbs the ambiguity of representatives.

use super::{CocycleError, CocycleSpec, EvaluatedCochain};
use crate::adjmod::{canonicalize, DivisibilityMode, DualClass};
use crate::field::FieldValue;
use crate::linalg::solve_dense;
use crate::matgroup::SquareMatrix;

/// A class `M` whose coboundary reproduces the recognized cochain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoboundaryWitness {
    pub class: DualClass,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoboundaryDecision {
    Coboundary(CoboundaryWitness),
    NotACoboundary,
}

/// Runs the recognition solver on the cochain's stored generator values.
pub fn recognize_coboundary(f: &EvaluatedCochain) -> Result<CoboundaryDecision, CocycleError> {
    recognize_spec(f.spec())
}

pub(crate) fn recognize_spec(spec: &CocycleSpec) -> Result<CoboundaryDecision, CocycleError> {
    let desc = spec.descriptor().clone();
    let n = spec.dim();
    let mode = DivisibilityMode::of(&desc, n);
    let gens = spec.generators();
    let zero = FieldValue::zero(&desc);
    let one = FieldValue::one(&desc);

    let n2 = n * n;
    let slack = match mode {
        DivisibilityMode::CharDividesN => gens.len(),
        DivisibilityMode::CharPrimeToN => 0,
    };
    let unknowns = n2 + slack;

    let mut rows: Vec<Vec<FieldValue>> = Vec::new();
    let mut rhs: Vec<FieldValue> = Vec::new();

    for (gi, sym) in gens.iter().enumerate() {
        let u = sym.matrix(&desc, n)?;
        let u_inv = u.inverse()?;

        // column maps: unknown (a,b) contributes E_ab - u^{-1} E_ab u
        let mut columns = Vec::with_capacity(n2);
        for a in 1..=n {
            for b in 1..=n {
                let e_ab = SquareMatrix::unit(&desc, n, a, b);
                columns.push(e_ab.sub(&u_inv.mul(&e_ab).mul(&u)));
            }
        }

        let value = spec.value_of(sym).expect("generator is stored");
        let target = match mode {
            DivisibilityMode::CharPrimeToN => value.traceless_rep()?.into_matrix(),
            DivisibilityMode::CharDividesN => value.rep().clone(),
        };

        for i in 1..=n {
            for j in 1..=n {
                let mut row = vec![zero.clone(); unknowns];
                for (col, cm) in columns.iter().enumerate() {
                    let c = cm.entry(i, j);
                    if !c.is_zero() {
                        row[col] = c.clone();
                    }
                }
                if slack > 0 && i == j {
                    row[n2 + gi] = one.clone();
                }
                rows.push(row);
                rhs.push(target.entry(i, j).clone());
            }
        }
    }

    if matches!(mode, DivisibilityMode::CharPrimeToN) {
        // constrain the witness to the traceless module
        let mut row = vec![zero.clone(); unknowns];
        for i in 1..=n {
            row[(i - 1) * n + (i - 1)] = one.clone();
        }
        rows.push(row);
        rhs.push(zero.clone());
    }

    let solution = match solve_dense(&rows, &rhs).map_err(CocycleError::Field)? {
        None => return Ok(CoboundaryDecision::NotACoboundary),
        Some(s) => s,
    };

    let mut m = SquareMatrix::zero(&desc, n);
    for a in 1..=n {
        for b in 1..=n {
            m.set(a, b, solution[(a - 1) * n + (b - 1)].clone());
        }
    }
    let witness = canonicalize(&m);

    // round-trip guard: the witness must reproduce every generator value
    let back = super::coboundary(&witness, gens)?;
    for (sym, want) in gens.iter().zip(spec.values().iter()) {
        if back.value_of(sym) != Some(want) {
            return Err(CocycleError::Internal(format!(
                "recognized witness fails to reproduce {sym}"
            )));
        }
    }
    Ok(CoboundaryDecision::Coboundary(CoboundaryWitness {
        class: witness,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::{coboundary, derivation_cocycle, elementary_symbols, zero_cocycle};
    use crate::field::{DerivationSpec, FieldDescriptor};

    fn f2x() -> FieldDescriptor {
        FieldDescriptor::rational_function(2).unwrap()
    }

    fn probe_params(desc: &FieldDescriptor) -> Vec<FieldValue> {
        let one = FieldValue::one(desc);
        let x = FieldValue::var_x(desc).unwrap();
        vec![one.clone(), x.clone(), x.add(&one), x.mul(&x)]
    }

    #[test]
    fn roundtrip_on_a_coboundary() {
        let desc = f2x();
        let n = 4;
        let gens = elementary_symbols(n, &probe_params(&desc));
        let m = canonicalize(&SquareMatrix::unit(&desc, n, 1, 1));
        let spec = coboundary(&m, &gens).unwrap();
        let f = EvaluatedCochain::new(spec);
        match recognize_coboundary(&f).unwrap() {
            CoboundaryDecision::Coboundary(w) => {
                let back = coboundary(&w.class, &gens).unwrap();
                assert_eq!(back, *f.spec());
            }
            CoboundaryDecision::NotACoboundary => panic!("coboundary not recognized"),
        }
    }

    #[test]
    fn zero_cochain_has_zero_witness() {
        let desc = f2x();
        let gens = elementary_symbols(4, &probe_params(&desc));
        let f = EvaluatedCochain::new(zero_cocycle(&desc, 4, &gens).unwrap());
        match recognize_coboundary(&f).unwrap() {
            CoboundaryDecision::Coboundary(w) => assert!(w.class.is_zero()),
            CoboundaryDecision::NotACoboundary => panic!("zero cochain is a coboundary"),
        }
    }

    #[test]
    fn derivation_cochain_is_not_a_coboundary() {
        let desc = f2x();
        for n in [4usize, 5] {
            let d = DerivationSpec::ddx(FieldValue::one(&desc)).unwrap();
            let gens = elementary_symbols(n, &probe_params(&desc));
            let f = EvaluatedCochain::new(derivation_cocycle(&d, n, &gens).unwrap());
            assert_eq!(
                recognize_coboundary(&f).unwrap(),
                CoboundaryDecision::NotACoboundary
            );
        }
    }

    #[test]
    fn dichotomy_tracks_zero_derivation() {
        let desc = f2x();
        let gens = elementary_symbols(4, &probe_params(&desc));
        let dz = DerivationSpec::zero(&desc);
        let f = EvaluatedCochain::new(derivation_cocycle(&dz, 4, &gens).unwrap());
        assert!(matches!(
            recognize_coboundary(&f).unwrap(),
            CoboundaryDecision::Coboundary(_)
        ));
    }

    #[test]
    fn recognition_in_prime_to_n_mode() {
        // n = 4 over F_5: p prime to n, traceless-module route
        let desc = FieldDescriptor::finite(5, 1, None).unwrap();
        let n = 4;
        let params: Vec<FieldValue> = (1..5).map(|i| FieldValue::from_int(&desc, i)).collect();
        let gens = elementary_symbols(n, &params);
        let mut mrep = SquareMatrix::unit(&desc, n, 2, 3);
        mrep.set(1, 1, FieldValue::from_int(&desc, 2));
        let m = canonicalize(&mrep);
        let f = EvaluatedCochain::new(coboundary(&m, &gens).unwrap());
        match recognize_coboundary(&f).unwrap() {
            CoboundaryDecision::Coboundary(w) => {
                assert_eq!(coboundary(&w.class, &gens).unwrap(), *f.spec());
            }
            CoboundaryDecision::NotACoboundary => panic!("coboundary not recognized"),
        }
    }
}
