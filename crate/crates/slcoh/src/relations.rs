//! The generator-relation self-test suite: the closed multiplication laws of
//! the elementary, monomial and diagonal generators, checked exhaustively
//! over small finite fields and on sampled parameters otherwise.

use crate::field::{enumerate_field, sample_one, FieldDescriptor, FieldValue};
use crate::matgroup::{
    elementary, torus, torus_product_form, weyl, weyl_product_form, MatError, SquareMatrix,
};
use crate::rng::SplitMix64;

#[derive(Debug, Clone)]
pub enum RelationTrials {
    /// All index combinations and all field parameters; finite fields only.
    Exhaustive,
    /// Deterministic random parameter draws, all index combinations each.
    Sampled { seed: u64, count: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Ctx<'a> {
    desc: &'a FieldDescriptor,
    n: usize,
    checked: usize,
    failures: Vec<String>,
}

impl Ctx<'_> {
    fn expect_eq(&mut self, lhs: &SquareMatrix, rhs: &SquareMatrix, what: impl Fn() -> String) {
        self.checked += 1;
        if lhs != rhs {
            self.failures.push(what());
        }
    }

    fn expect(&mut self, ok: bool, what: impl Fn() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

/// One pass over all nine relation families for a fixed parameter pair.
fn check_params(ctx: &mut Ctx, s: &FieldValue, t: &FieldValue) -> Result<(), MatError> {
    let desc = ctx.desc;
    let n = ctx.n;
    let id = SquareMatrix::identity(desc, n);

    // additivity in the parameter and the inverse law
    for k in 1..=n {
        for h in 1..=n {
            if k == h {
                continue;
            }
            let u_s = elementary(desc, n, k, h, s)?;
            let u_t = elementary(desc, n, k, h, t)?;
            ctx.expect_eq(
                &u_s.mul(&u_t),
                &elementary(desc, n, k, h, &s.add(t))?,
                || format!("parameter additivity at ({k},{h}) s={s} t={t}"),
            );
            ctx.expect_eq(
                &u_t.inverse()?,
                &elementary(desc, n, k, h, &t.neg())?,
                || format!("inverse law at ({k},{h}) t={t}"),
            );
        }
    }

    // closed product form for two elementaries, both index cases
    for i in 1..=n {
        for j in 1..=n {
            if i == j {
                continue;
            }
            for h in 1..=n {
                for k in 1..=n {
                    if h == k {
                        continue;
                    }
                    let prod = elementary(desc, n, i, j, t)?.mul(&elementary(desc, n, h, k, s)?);
                    let mut expect = SquareMatrix::identity(desc, n);
                    expect.set(i, j, expect.entry(i, j).add(t));
                    expect.set(h, k, expect.entry(h, k).add(s));
                    if j == h {
                        expect.set(i, k, expect.entry(i, k).add(&t.mul(s)));
                    }
                    ctx.expect_eq(&prod, &expect, || {
                        format!("two-term product form at ({i},{j}),({h},{k}) t={t} s={s}")
                    });
                }
            }
        }
    }

    if !s.is_zero() && !t.is_zero() {
        // commutation holds exactly when the positions do not chain
        for p in 1..=n {
            for q in 1..=n {
                if p == q {
                    continue;
                }
                for k in 1..=n {
                    for h in 1..=n {
                        if k == h {
                            continue;
                        }
                        let a = elementary(desc, n, p, q, s)?;
                        let b = elementary(desc, n, k, h, t)?;
                        let commutes = a.mul(&b) == b.mul(&a);
                        let should = q != k && h != p;
                        ctx.expect(commutes == should, || {
                            format!(
                                "commutation at ({p},{q}),({k},{h}) s={s} t={t}: got {commutes}, expected {should}"
                            )
                        });
                    }
                }
            }
        }

        // commutator contraction
        for k in 1..=n {
            for h in 1..=n {
                if k == h {
                    continue;
                }
                for q in 1..=n {
                    if q == k || q == h {
                        continue;
                    }
                    let a = elementary(desc, n, k, h, s)?;
                    let b = elementary(desc, n, h, q, t)?;
                    let comm = a.mul(&b).mul(&a.inverse()?).mul(&b.inverse()?);
                    ctx.expect_eq(&comm, &elementary(desc, n, k, q, &s.mul(t))?, || {
                        format!("commutator at ({k},{h},{q}) s={s} t={t}")
                    });
                }
            }
        }

        // monomial and diagonal generators
        for k in 1..=n {
            for h in 1..=n {
                if k == h {
                    continue;
                }
                let w_t = weyl(desc, n, k, h, t)?;
                let w_s = weyl(desc, n, k, h, s)?;
                ctx.expect_eq(&w_t, &weyl_product_form(desc, n, k, h, t)?, || {
                    format!("monomial closed form at ({k},{h}) t={t}")
                });
                ctx.expect_eq(&w_t.mul(&weyl(desc, n, k, h, &t.neg())?), &id, || {
                    format!("monomial inverse at ({k},{h}) t={t}")
                });
                let h_t = torus(desc, n, k, h, t)?;
                let h_s = torus(desc, n, k, h, s)?;
                ctx.expect_eq(&h_t, &torus_product_form(desc, n, k, h, t)?, || {
                    format!("diagonal closed form at ({k},{h}) t={t}")
                });
                ctx.expect_eq(&h_t.mul(&h_s), &torus(desc, n, k, h, &t.mul(s))?, || {
                    format!("diagonal multiplicativity at ({k},{h}) t={t} s={s}")
                });
                let quot = t.checked_div(s).map_err(MatError::Field)?.neg();
                ctx.expect_eq(&w_t.mul(&w_s), &torus(desc, n, k, h, &quot)?, || {
                    format!("monomial product to diagonal at ({k},{h}) t={t} s={s}")
                });
            }
        }
    }

    Ok(())
}

/// Runs the relation suite; failures are report content.
pub fn verify_relations(
    desc: &FieldDescriptor,
    n: usize,
    trials: &RelationTrials,
) -> Result<RelationReport, MatError> {
    let mut ctx = Ctx {
        desc,
        n,
        checked: 0,
        failures: Vec::new(),
    };
    match trials {
        RelationTrials::Exhaustive => {
            let elems = enumerate_field(desc)?;
            for s in &elems {
                for t in &elems {
                    check_params(&mut ctx, s, t)?;
                }
            }
        }
        RelationTrials::Sampled { seed, count } => {
            let mut rng = SplitMix64::new(*seed);
            for _ in 0..*count {
                let mut s = sample_one(desc, &mut rng, 4);
                while s.is_zero() {
                    s = sample_one(desc, &mut rng, 4);
                }
                let mut t = sample_one(desc, &mut rng, 4);
                while t.is_zero() {
                    t = sample_one(desc, &mut rng, 4);
                }
                check_params(&mut ctx, &s, &t)?;
            }
        }
    }
    Ok(RelationReport {
        checked: ctx.checked,
        failures: ctx.failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exhaustive_f2_n3() {
        let desc = FieldDescriptor::finite(2, 1, None).unwrap();
        let report = verify_relations(&desc, 3, &RelationTrials::Exhaustive).unwrap();
        assert!(report.passed(), "{:?}", report.failures);
        assert!(report.checked > 0);
    }

    #[test]
    fn exhaustive_f4_n4() {
        let desc = FieldDescriptor::finite(2, 2, None).unwrap();
        let report = verify_relations(&desc, 4, &RelationTrials::Exhaustive).unwrap();
        assert!(report.passed(), "{:?}", report.failures);
    }

    #[test]
    fn exhaustive_up_to_q9() {
        for (p, e) in [(7u32, 1usize), (2, 3), (3, 2)] {
            let desc = FieldDescriptor::finite(p, e, None).unwrap();
            let report = verify_relations(&desc, 3, &RelationTrials::Exhaustive).unwrap();
            assert!(
                report.passed(),
                "q={}: {:?}",
                p.pow(e as u32),
                report.failures.first()
            );
        }
    }

    #[test]
    fn sampled_rational_n3() {
        let desc = FieldDescriptor::rational_function(2).unwrap();
        let report =
            verify_relations(&desc, 3, &RelationTrials::Sampled { seed: 1, count: 25 }).unwrap();
        assert!(report.passed(), "{:?}", report.failures);
    }
}
