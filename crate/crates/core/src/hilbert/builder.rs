//! Forward proof construction and a few classical lemmas built from it.
//!
//! Lemmas are derived here from axioms, MP and the deduction transformer,
//! then spliced into larger proofs with [`ProofBuilder::inline`]. The
//! kernel only ever sees axioms, hypotheses and MP.

use super::proof::{Justification, Proof};
use super::transform::{deduction, identity_proof, necessitate, sub};
use crate::formula::{kernel_eq, kernel_form, BinOp, Formula};
use crate::schema::{instantiate, instantiate_ax_plus, Meta, SchemaId};

/// Appends steps to a proof. Misuse (a wrong premise shape) panics: the
/// builder is for writing proofs in code, and results are checked anyway.
#[derive(Clone, Debug)]
pub struct ProofBuilder {
    proof: Proof,
}

/// `(A, C)` for a formula of the form `A ⊃ C`, keeping surface syntax where
/// possible.
pub fn split_implication(f: &Formula) -> Option<(Formula, Formula)> {
    match f {
        Formula::CBin(BinOp::Impl, a, c) => Some((a.as_ref().clone(), c.as_ref().clone())),
        _ => match kernel_form(f) {
            Formula::CBin(BinOp::Impl, a, c) => Some((*a, *c)),
            _ => None,
        },
    }
}

fn split(f: &Formula) -> (Formula, Formula) {
    split_implication(f).unwrap_or_else(|| panic!("{f} is not an implication"))
}

impl ProofBuilder {
    pub fn new(hypotheses: Vec<Formula>) -> ProofBuilder {
        ProofBuilder { proof: Proof::new(hypotheses) }
    }

    pub fn conclusion(&self, step: usize) -> &Formula {
        &self.proof.steps[step].conclusion
    }

    pub fn hyp(&mut self, k: usize) -> usize {
        let h = self.proof.hypotheses[k].clone();
        self.proof.push(h, Justification::Hypothesis(k))
    }

    pub fn axiom(&mut self, schema: SchemaId, pairs: &[(Meta, &Formula)]) -> usize {
        let s = sub(pairs);
        let f = instantiate(schema, &s).expect("substitution binds the schema");
        self.proof.push(f, Justification::Axiom { schema, sub: s })
    }

    /// `+A` by Ax2.4, with `A` an instance of `inner`.
    pub fn ax_plus(&mut self, inner: SchemaId, pairs: &[(Meta, &Formula)]) -> usize {
        let s = sub(pairs);
        let f = instantiate_ax_plus(inner, &s).expect("substitution binds the schema");
        self.proof.push(f, Justification::Axiom { schema: SchemaId::Ax2_4, sub: s })
    }

    /// From `minor: A` and `major: A ⊃ C`, concludes `C`.
    pub fn mp(&mut self, minor: usize, major: usize) -> usize {
        let (a, c) = split(self.conclusion(major));
        assert!(kernel_eq(&a, self.conclusion(minor)), "MP premise mismatch: {a} vs {}", self.conclusion(minor));
        self.proof.push(c, Justification::Mp { minor, major })
    }

    /// Copies `p`'s steps. Each hypothesis of `p` must be one of ours.
    pub fn inline(&mut self, p: &Proof) -> usize {
        let offset = self.proof.steps.len();
        for step in &p.steps {
            let by = match &step.by {
                Justification::Hypothesis(k) => {
                    let h = &p.hypotheses[*k];
                    let ours = self.proof.hypotheses.iter().position(|g| kernel_eq(g, h));
                    Justification::Hypothesis(ours.unwrap_or_else(|| panic!("hypothesis {h} not available")))
                }
                Justification::Mp { minor, major } => Justification::Mp { minor: minor + offset, major: major + offset },
                other => other.clone(),
            };
            self.proof.push(step.conclusion.clone(), by);
        }
        self.proof.steps.len() - 1
    }

    /// `A ⊃ C` from `A ⊃ B` and `B ⊃ C`.
    pub fn chain(&mut self, ab: usize, bc: usize) -> usize {
        let (a, b) = split(self.conclusion(ab));
        let (_, c) = split(self.conclusion(bc));
        let lemma = self.inline(&syllogism(&a, &b, &c));
        let step = self.mp(ab, lemma);
        self.mp(bc, step)
    }

    /// `A • B` from `A` and `B`.
    pub fn conj(&mut self, a: usize, b: usize) -> usize {
        let (fa, fb) = (self.conclusion(a).clone(), self.conclusion(b).clone());
        let lemma = self.inline(&conjunction_intro(&fa, &fb));
        let step = self.mp(a, lemma);
        self.mp(b, step)
    }

    /// `(A ∪ B) ⊃ C` from `A ⊃ C` and `B ⊃ C`, stated with the given
    /// formulas (which must agree with the premises up to kernel form).
    pub fn cases_with(&mut self, ac: usize, bc: usize, a: &Formula, b: &Formula, c: &Formula) -> usize {
        let ax = self.axiom(SchemaId::Ax1_5, &[(Meta::X, a), (Meta::Y, b), (Meta::Z, c)]);
        let step = self.mp(ac, ax);
        self.mp(bc, step)
    }

    /// `C` from `A ∪ B`, `A ⊃ C` and `B ⊃ C`.
    pub fn cases(&mut self, or: usize, ac: usize, bc: usize) -> usize {
        let (a, c) = split(self.conclusion(ac));
        let (b, _) = split(self.conclusion(bc));
        let step = self.cases_with(ac, bc, &a, &b, &c);
        self.mp(or, step)
    }

    /// `A ≡ B` from `A ⊃ B` and `B ⊃ A`, stated with the given formulas.
    pub fn iff_with(&mut self, ab: usize, ba: usize, a: &Formula, b: &Formula) -> usize {
        let ax = self.axiom(SchemaId::Ax1_13, &[(Meta::X, a), (Meta::Y, b)]);
        let step = self.mp(ab, ax);
        self.mp(ba, step)
    }

    /// `A ⊃ B` from `A ≡ B`.
    pub fn iff_forward(&mut self, iff: usize) -> usize {
        let (a, b) = split_iff(self.conclusion(iff));
        let ax = self.axiom(SchemaId::Ax1_11, &[(Meta::X, &a), (Meta::Y, &b)]);
        self.mp(iff, ax)
    }

    /// `B ⊃ A` from `A ≡ B`.
    pub fn iff_backward(&mut self, iff: usize) -> usize {
        let (a, b) = split_iff(self.conclusion(iff));
        let ax = self.axiom(SchemaId::Ax1_12, &[(Meta::X, &a), (Meta::Y, &b)]);
        self.mp(iff, ax)
    }

    pub fn finish(self) -> Proof {
        self.proof
    }
}

fn split_iff(f: &Formula) -> (Formula, Formula) {
    match f {
        Formula::CBin(BinOp::Iff, a, b) => (a.as_ref().clone(), b.as_ref().clone()),
        _ => match kernel_form(f) {
            Formula::CBin(BinOp::Iff, a, b) => (*a, *b),
            _ => panic!("{f} is not an equivalence"),
        },
    }
}

fn discharge(p: Proof, times: usize) -> Proof {
    (0..times).fold(p, |p, _| deduction(&p).expect("builder proofs check"))
}

/// A proof of the single axiom instance.
pub fn axiom_proof(schema: SchemaId, pairs: &[(Meta, &Formula)]) -> Proof {
    let mut b = ProofBuilder::new(Vec::new());
    b.axiom(schema, pairs);
    b.finish()
}

/// `(A ⊃ B) ⊃ ((B ⊃ C) ⊃ (A ⊃ C))`.
pub fn syllogism(a: &Formula, b: &Formula, c: &Formula) -> Proof {
    let ab = Formula::implies(a.clone(), b.clone());
    let bc = Formula::implies(b.clone(), c.clone());
    let mut pb = ProofBuilder::new(vec![ab, bc, a.clone()]);
    let x = pb.hyp(2);
    let xy = pb.hyp(0);
    let y = pb.mp(x, xy);
    let yz = pb.hyp(1);
    pb.mp(y, yz);
    discharge(pb.finish(), 3)
}

/// `A ⊃ (B ⊃ (A • B))`.
pub fn conjunction_intro(a: &Formula, b: &Formula) -> Proof {
    let mut pb = ProofBuilder::new(vec![a.clone(), b.clone()]);
    let aa = pb.inline(&identity_proof(a));
    let hb = pb.hyp(1);
    let w = pb.axiom(SchemaId::Ax1_1, &[(Meta::X, b), (Meta::Y, a)]);
    let ab = pb.mp(hb, w);
    let k = pb.axiom(SchemaId::Ax1_8, &[(Meta::X, a), (Meta::Y, a), (Meta::Z, b)]);
    let s = pb.mp(aa, k);
    let s = pb.mp(ab, s);
    let ha = pb.hyp(0);
    pb.mp(ha, s);
    discharge(pb.finish(), 2)
}

/// `(A ⊃ (B ⊃ C)) ⊃ ((A • B) ⊃ C)`.
pub fn importation(a: &Formula, b: &Formula, c: &Formula) -> Proof {
    let abc = Formula::implies(a.clone(), Formula::implies(b.clone(), c.clone()));
    let mut pb = ProofBuilder::new(vec![abc, Formula::and(a.clone(), b.clone())]);
    let both = pb.hyp(1);
    let left = pb.axiom(SchemaId::Ax1_6, &[(Meta::X, a), (Meta::Y, b)]);
    let fa = pb.mp(both, left);
    let right = pb.axiom(SchemaId::Ax1_7, &[(Meta::X, a), (Meta::Y, b)]);
    let fb = pb.mp(both, right);
    let h = pb.hyp(0);
    let s = pb.mp(fa, h);
    pb.mp(fb, s);
    discharge(pb.finish(), 2)
}

/// `(A ⊃ B) ⊃ (∼B ⊃ ∼A)`, by cases on `A ∪ ∼A`.
pub fn transposition(a: &Formula, b: &Formula) -> Proof {
    let ab = Formula::implies(a.clone(), b.clone());
    let not_a = Formula::cneg(a.clone());
    let not_b = Formula::cneg(b.clone());

    let mut pb = ProofBuilder::new(vec![ab.clone(), not_b.clone(), a.clone()]);
    let ha = pb.hyp(2);
    let hab = pb.hyp(0);
    let fb = pb.mp(ha, hab);
    let hnb = pb.hyp(1);
    let ex = pb.axiom(SchemaId::Ax1_9, &[(Meta::X, b), (Meta::Y, &not_a)]);
    let s = pb.mp(fb, ex);
    pb.mp(hnb, s);
    let a_to_not_a = discharge(pb.finish(), 1);

    let mut pb = ProofBuilder::new(vec![ab, not_b]);
    let left = pb.inline(&a_to_not_a);
    let right = pb.inline(&identity_proof(&not_a));
    let em = pb.axiom(SchemaId::Ax1_10, &[(Meta::X, a)]);
    pb.cases(em, left, right);
    discharge(pb.finish(), 2)
}

/// `+A ⊃ +B` from a hypothesis-free proof of `A ⊃ B`.
pub fn plus_monotone(thm: &Proof) -> Proof {
    let (a, b) = split(thm.conclusion().expect("nonempty proof"));
    let mut pb = ProofBuilder::new(Vec::new());
    let lifted = pb.inline(&necessitate(thm).expect("theorem without hypotheses"));
    let dist = pb.axiom(SchemaId::Ax2_1, &[(Meta::X, &a), (Meta::Y, &b)]);
    pb.mp(lifted, dist);
    pb.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::transform::proves;
    use crate::parser::parse;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn lemmas_check() {
        let (a, b, c) = (p("a"), p("_b"), p("~c"));
        assert!(proves(&syllogism(&a, &b, &c), &p("(a => _b) => (_b => ~c) => a => ~c")));
        assert!(proves(&conjunction_intro(&a, &b), &p("a => _b => a & _b")));
        assert!(proves(&importation(&a, &b, &c), &p("(a => _b => ~c) => a & _b => ~c")));
        assert!(proves(&transposition(&a, &b), &p("(a => _b) => ~_b => ~a")));
    }

    #[test]
    fn monotonicity_of_plus() {
        let thm = axiom_proof(SchemaId::Ax1_6, &[(Meta::X, &p("a")), (Meta::Y, &p("b"))]);
        assert!(proves(&plus_monotone(&thm), &p("+(a & b) => +a")));
    }

    #[test]
    #[should_panic(expected = "MP premise mismatch")]
    fn builder_rejects_bad_mp() {
        let mut pb = ProofBuilder::new(vec![p("a"), p("b => c")]);
        let x = pb.hyp(0);
        let y = pb.hyp(1);
        pb.mp(x, y);
    }
}
