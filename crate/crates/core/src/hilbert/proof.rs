use std::fmt;

use thiserror::Error;

use crate::formula::{kernel_eq, BinOp, Formula};
use crate::schema::{is_instance_under, match_schema, SchemaId, Substitution};

/// Why a step is in the proof. Step indices are 0-based here; text forms
/// print them 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Justification {
    /// An instance of `schema`. An empty substitution means "find one".
    Axiom { schema: SchemaId, sub: Substitution },
    Hypothesis(usize),
    /// Modus ponens from `minor: A` and `major: A ⊃ C`.
    Mp { minor: usize, major: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofStep {
    pub conclusion: Formula,
    pub by: Justification,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Proof {
    pub hypotheses: Vec<Formula>,
    pub steps: Vec<ProofStep>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum StepFault {
    #[error("not an instance of {schema}")]
    NotAnInstance { schema: SchemaId },
    #[error("not an instance of {schema} under the given substitution")]
    SubstitutionMismatch { schema: SchemaId },
    #[error("hypothesis {0} does not exist")]
    NoSuchHypothesis(usize),
    #[error("conclusion differs from hypothesis {0}")]
    HypothesisMismatch(usize),
    #[error("MP cites step {0}, which is not an earlier step")]
    ForwardReference(usize),
    #[error("MP premises do not have the shape A and A => C")]
    MpShape,
}

/// The earliest step that fails to check. `step` is 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ProofError {
    #[error("proof has no steps")]
    Empty,
    #[error("step {step}: {fault}")]
    Step { step: usize, fault: StepFault },
}

impl ProofError {
    pub fn step(&self) -> Option<usize> {
        match self {
            ProofError::Empty => None,
            ProofError::Step { step, .. } => Some(*step),
        }
    }
}

impl Proof {
    pub fn new(hypotheses: Vec<Formula>) -> Proof {
        Proof { hypotheses, steps: Vec::new() }
    }

    pub fn conclusion(&self) -> Option<&Formula> {
        self.steps.last().map(|s| &s.conclusion)
    }

    /// Number of steps.
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn push(&mut self, conclusion: Formula, by: Justification) -> usize {
        self.steps.push(ProofStep { conclusion, by });
        self.steps.len() - 1
    }
}

/// Checks every step; reports the first failure.
pub fn check_proof(p: &Proof) -> Result<(), ProofError> {
    if p.steps.is_empty() {
        return Err(ProofError::Empty);
    }
    for (i, step) in p.steps.iter().enumerate() {
        check_step(p, i, step).map_err(|fault| ProofError::Step { step: i + 1, fault })?;
    }
    Ok(())
}

fn check_step(p: &Proof, i: usize, step: &ProofStep) -> Result<(), StepFault> {
    match &step.by {
        Justification::Axiom { schema, sub } => {
            if sub.is_empty() {
                if match_schema(*schema, &step.conclusion).is_none() {
                    return Err(StepFault::NotAnInstance { schema: *schema });
                }
            } else if !is_instance_under(*schema, sub, &step.conclusion) {
                return Err(StepFault::SubstitutionMismatch { schema: *schema });
            }
        }
        Justification::Hypothesis(k) => {
            let h = p.hypotheses.get(*k).ok_or(StepFault::NoSuchHypothesis(*k))?;
            if !kernel_eq(h, &step.conclusion) {
                return Err(StepFault::HypothesisMismatch(*k));
            }
        }
        Justification::Mp { minor, major } => {
            for &j in [minor, major] {
                if j >= i {
                    return Err(StepFault::ForwardReference(j + 1));
                }
            }
            let (a, c) = (&p.steps[*minor].conclusion, &step.conclusion);
            let literal = matches!(&p.steps[*major].conclusion,
                Formula::CBin(BinOp::Impl, l, r) if **l == *a && **r == *c);
            if !literal && !kernel_eq(&p.steps[*major].conclusion, &Formula::implies(a.clone(), c.clone())) {
                return Err(StepFault::MpShape);
            }
        }
    }
    Ok(())
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Justification::Axiom { schema, .. } => write!(f, "{schema}"),
            Justification::Hypothesis(k) => write!(f, "HYP {k}"),
            Justification::Mp { minor, major } => write!(f, "MP {} {}", minor + 1, major + 1),
        }
    }
}

impl fmt::Display for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, h) in self.hypotheses.iter().enumerate() {
            writeln!(f, "H{k}. {h}")?;
        }
        for (i, s) in self.steps.iter().enumerate() {
            writeln!(f, "{:>3}. {}    [{}]", i + 1, s.conclusion, s.by)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn axiom(schema: SchemaId) -> Justification {
        Justification::Axiom { schema, sub: Substitution::new() }
    }

    #[test]
    fn single_axiom() {
        let mut proof = Proof::new(vec![]);
        proof.push(p("a => b => a"), axiom(SchemaId::Ax1_1));
        assert_eq!(check_proof(&proof), Ok(()));
    }

    #[test]
    fn single_mp_from_hypotheses() {
        let mut proof = Proof::new(vec![p("a"), p("a => b")]);
        proof.push(p("a"), Justification::Hypothesis(0));
        proof.push(p("a => b"), Justification::Hypothesis(1));
        proof.push(p("b"), Justification::Mp { minor: 0, major: 1 });
        assert_eq!(check_proof(&proof), Ok(()));
    }

    #[test]
    fn reports_bad_mp() {
        let mut proof = Proof::new(vec![p("a"), p("b => c")]);
        proof.push(p("a"), Justification::Hypothesis(0));
        proof.push(p("b => c"), Justification::Hypothesis(1));
        proof.push(p("c"), Justification::Mp { minor: 0, major: 1 });
        assert_eq!(check_proof(&proof), Err(ProofError::Step { step: 3, fault: StepFault::MpShape }));
    }

    #[test]
    fn reports_earliest_failure() {
        let mut proof = Proof::new(vec![]);
        proof.push(p("a => a"), axiom(SchemaId::Ax1_1));
        proof.push(p("a"), Justification::Hypothesis(0));
        assert_eq!(check_proof(&proof).unwrap_err().step(), Some(1));
    }

    #[test]
    fn mp_cannot_cite_itself() {
        let mut proof = Proof::new(vec![]);
        proof.push(p("a"), Justification::Mp { minor: 0, major: 0 });
        assert_eq!(check_proof(&proof), Err(ProofError::Step { step: 1, fault: StepFault::ForwardReference(1) }));
    }

    #[test]
    fn mp_modulo_desugaring() {
        // +a written as !~a in the major premise
        let mut proof = Proof::new(vec![p("+a"), p("!~a => b")]);
        proof.push(p("+a"), Justification::Hypothesis(0));
        proof.push(p("!~a => b"), Justification::Hypothesis(1));
        proof.push(p("b"), Justification::Mp { minor: 0, major: 1 });
        assert_eq!(check_proof(&proof), Ok(()));
    }

    #[test]
    fn empty_proof_is_rejected() {
        assert_eq!(check_proof(&Proof::new(vec![])), Err(ProofError::Empty));
    }
}
