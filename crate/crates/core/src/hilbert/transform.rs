//! Necessitation and the deduction theorem as proof-to-proof maps.

use thiserror::Error;

use super::proof::{check_proof, Justification, Proof, ProofError};
use crate::formula::{kernel_eq, Formula};
use crate::schema::{match_schema, Meta, SchemaId, Substitution};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("input proof does not check: {0}")]
    Invalid(#[from] ProofError),
    #[error("necessitation needs a proof without hypotheses")]
    HasHypotheses,
    #[error("proof has no hypothesis {0} to discharge")]
    NoSuchHypothesis(usize),
}

pub(crate) fn sub(pairs: &[(Meta, &Formula)]) -> Substitution {
    pairs.iter().map(|(m, f)| (*m, (*f).clone())).collect()
}

fn axiom(schema: SchemaId, sub: Substitution) -> Justification {
    Justification::Axiom { schema, sub }
}

/// Proof of `+C` from a hypothesis-free proof of `C`.
///
/// Axioms of Ax1.1–Ax2.3 become Ax2.4 instances. An Ax2.4 step `+A` goes to
/// `++A` through Ax2.3, since `+A` is alternate. An MP step goes through
/// Ax2.1 and two MP steps.
pub fn necessitate(p: &Proof) -> Result<Proof, TransformError> {
    check_proof(p)?;
    if !p.hypotheses.is_empty() {
        return Err(TransformError::HasHypotheses);
    }
    let mut out = Proof::new(Vec::new());
    let mut lifted = Vec::with_capacity(p.steps.len());
    for step in &p.steps {
        let c = &step.conclusion;
        let plus_c = Formula::plus(c.clone());
        let at = match &step.by {
            Justification::Axiom { schema: SchemaId::Ax2_4, sub: s } => {
                let orig = out.push(c.clone(), axiom(SchemaId::Ax2_4, s.clone()));
                let t = out.push(
                    Formula::implies(c.clone(), plus_c.clone()),
                    axiom(SchemaId::Ax2_3, sub(&[(Meta::X, c)])),
                );
                out.push(plus_c, Justification::Mp { minor: orig, major: t })
            }
            Justification::Axiom { schema, sub: s } => {
                let s = if s.is_empty() { match_schema(*schema, c).expect("checked") } else { s.clone() };
                out.push(plus_c, axiom(SchemaId::Ax2_4, s))
            }
            Justification::Hypothesis(_) => unreachable!("no hypotheses"),
            Justification::Mp { minor, major } => {
                let a = &p.steps[*minor].conclusion;
                let dist = out.push(
                    Formula::implies(
                        Formula::plus(Formula::implies(a.clone(), c.clone())),
                        Formula::implies(Formula::plus(a.clone()), plus_c.clone()),
                    ),
                    axiom(SchemaId::Ax2_1, sub(&[(Meta::X, a), (Meta::Y, c)])),
                );
                let mid = out.push(
                    Formula::implies(Formula::plus(a.clone()), plus_c.clone()),
                    Justification::Mp { minor: lifted[*major], major: dist },
                );
                out.push(plus_c, Justification::Mp { minor: lifted[*minor], major: mid })
            }
        };
        lifted.push(at);
    }
    Ok(out)
}

/// Discharges the last hypothesis.
pub fn deduction(p: &Proof) -> Result<Proof, TransformError> {
    match p.hypotheses.len() {
        0 => Err(TransformError::NoSuchHypothesis(0)),
        n => deduction_at(p, n - 1),
    }
}

/// Proof of `X ⊃ C` from the hypotheses other than `X = hypotheses[k]`,
/// using only Ax1.1, Ax1.2 and MP. Remaining hypotheses keep their order.
pub fn deduction_at(p: &Proof, k: usize) -> Result<Proof, TransformError> {
    check_proof(p)?;
    let x = p.hypotheses.get(k).ok_or(TransformError::NoSuchHypothesis(k))?.clone();
    let mut hypotheses = p.hypotheses.clone();
    hypotheses.remove(k);
    let renumber = |j: usize| if j > k { j - 1 } else { j };
    let mut out = Proof::new(hypotheses);

    let uses_x = p.steps.iter().any(|s| s.by == Justification::Hypothesis(k));
    if !uses_x {
        for s in &p.steps {
            let by = match &s.by {
                Justification::Hypothesis(j) => Justification::Hypothesis(renumber(*j)),
                other => other.clone(),
            };
            out.push(s.conclusion.clone(), by);
        }
        let c = p.conclusion().expect("checked proofs are nonempty").clone();
        weaken(&mut out, p.steps.len() - 1, &c, &x);
        return Ok(out);
    }

    let mut moved = Vec::with_capacity(p.steps.len());
    for step in &p.steps {
        let c = &step.conclusion;
        let at = match &step.by {
            Justification::Hypothesis(j) if *j == k => identity(&mut out, &x),
            Justification::Hypothesis(j) => {
                let h = out.push(c.clone(), Justification::Hypothesis(renumber(*j)));
                weaken(&mut out, h, c, &x)
            }
            Justification::Axiom { .. } => {
                let h = out.push(c.clone(), step.by.clone());
                weaken(&mut out, h, c, &x)
            }
            Justification::Mp { minor, major } => {
                let a = &p.steps[*minor].conclusion;
                let x_a = Formula::implies(x.clone(), a.clone());
                let x_c = Formula::implies(x.clone(), c.clone());
                let x_ac = Formula::implies(x.clone(), Formula::implies(a.clone(), c.clone()));
                let dist = out.push(
                    Formula::implies(x_ac, Formula::implies(x_a.clone(), x_c.clone())),
                    axiom(SchemaId::Ax1_2, sub(&[(Meta::X, &x), (Meta::Y, a), (Meta::Z, c)])),
                );
                let mid = out.push(
                    Formula::implies(x_a, x_c.clone()),
                    Justification::Mp { minor: moved[*major], major: dist },
                );
                out.push(x_c, Justification::Mp { minor: moved[*minor], major: mid })
            }
        };
        moved.push(at);
    }
    Ok(out)
}

/// From step `at` concluding `c`, adds `x ⊃ c` by Ax1.1 and MP.
fn weaken(out: &mut Proof, at: usize, c: &Formula, x: &Formula) -> usize {
    let x_c = Formula::implies(x.clone(), c.clone());
    let k = out.push(
        Formula::implies(c.clone(), x_c.clone()),
        axiom(SchemaId::Ax1_1, sub(&[(Meta::X, c), (Meta::Y, x)])),
    );
    out.push(x_c, Justification::Mp { minor: at, major: k })
}

/// The five-step proof of `x ⊃ x`.
fn identity(out: &mut Proof, x: &Formula) -> usize {
    let xx = Formula::implies(x.clone(), x.clone());
    let x_xx_x = Formula::implies(x.clone(), Formula::implies(xx.clone(), x.clone()));
    let x_xx = Formula::implies(x.clone(), xx.clone());
    let s1 = out.push(x_xx_x.clone(), axiom(SchemaId::Ax1_1, sub(&[(Meta::X, x), (Meta::Y, &xx)])));
    let s2 = out.push(
        Formula::implies(x_xx_x, Formula::implies(x_xx.clone(), xx.clone())),
        axiom(SchemaId::Ax1_2, sub(&[(Meta::X, x), (Meta::Y, &xx), (Meta::Z, x)])),
    );
    let s3 = out.push(Formula::implies(x_xx.clone(), xx.clone()), Justification::Mp { minor: s1, major: s2 });
    let s4 = out.push(x_xx, axiom(SchemaId::Ax1_1, sub(&[(Meta::X, x), (Meta::Y, x)])));
    out.push(xx, Justification::Mp { minor: s4, major: s3 })
}

/// Hypothesis-free proof of `x ⊃ x`.
pub fn identity_proof(x: &Formula) -> Proof {
    let mut p = Proof::new(Vec::new());
    identity(&mut p, x);
    p
}

/// Whether `p` proves `goal` (modulo kernel form) and checks.
pub fn proves(p: &Proof, goal: &Formula) -> bool {
    check_proof(p).is_ok() && p.conclusion().is_some_and(|c| kernel_eq(c, goal))
}
