//! Generators for the shipped proof corpus. Each takes the formulas to
//! instantiate the schematic letters with; the corpus uses `a` and `b`.

use super::builder::{axiom_proof, conjunction_intro, importation, plus_monotone, transposition, ProofBuilder};
use super::format::write_proof;
use super::proof::{Justification, Proof};
use super::transform::{deduction, identity_proof, necessitate};
use crate::formula::{DerivedOp, Formula};
use crate::schema::{Meta, SchemaId};

fn plus(f: &Formula) -> Formula {
    Formula::plus(f.clone())
}

fn not(f: &Formula) -> Formula {
    Formula::cneg(f.clone())
}

fn alt_not(f: &Formula) -> Formula {
    Formula::aneg(f.clone())
}

fn star(f: &Formula) -> Formula {
    Formula::derived(DerivedOp::Star, f.clone())
}

/// `+(X • Y) ≡ (+X • +Y)`.
pub fn plus_over_and(x: &Formula, y: &Formula) -> Proof {
    let xy = Formula::and(x.clone(), y.clone());
    let (px, py, pxy) = (plus(x), plus(y), plus(&xy));
    let mut b = ProofBuilder::new(Vec::new());

    let to_x = b.inline(&plus_monotone(&axiom_proof(SchemaId::Ax1_6, &[(Meta::X, x), (Meta::Y, y)])));
    let to_y = b.inline(&plus_monotone(&axiom_proof(SchemaId::Ax1_7, &[(Meta::X, x), (Meta::Y, y)])));
    let ax = b.axiom(SchemaId::Ax1_8, &[(Meta::X, &pxy), (Meta::Y, &px), (Meta::Z, &py)]);
    let s = b.mp(to_x, ax);
    let forward = b.mp(to_y, s);

    let y_to_xy = Formula::implies(y.clone(), xy.clone());
    let lifted = b.inline(&necessitate(&conjunction_intro(x, y)).expect("theorem"));
    let d1 = b.axiom(SchemaId::Ax2_1, &[(Meta::X, x), (Meta::Y, &y_to_xy)]);
    let s1 = b.mp(lifted, d1);
    let d2 = b.axiom(SchemaId::Ax2_1, &[(Meta::X, y), (Meta::Y, &xy)]);
    let curried = b.chain(s1, d2);
    let imp = b.inline(&importation(&px, &py, &pxy));
    let backward = b.mp(curried, imp);

    let both = Formula::and(px, py);
    b.iff_with(forward, backward, &pxy, &both);
    b.finish()
}

/// `¬(X ∪ Y) ≡ (¬X • ¬Y)`, through `∼(X ∪ Y) ≡ (∼X • ∼Y)` lifted by `+`.
pub fn alt_neg_over_or(x: &Formula, y: &Formula) -> Proof {
    let x_or_y = Formula::or(x.clone(), y.clone());
    let (nx, ny, nxy) = (not(x), not(y), not(&x_or_y));
    let nx_and_ny = Formula::and(nx.clone(), ny.clone());

    // ∼(X ∪ Y) ⊃ (∼X • ∼Y)
    let mut b = ProofBuilder::new(vec![nxy.clone()]);
    let h = b.hyp(0);
    let tx = b.inline(&transposition(x, &x_or_y));
    let a3 = b.axiom(SchemaId::Ax1_3, &[(Meta::X, x), (Meta::Y, y)]);
    let s = b.mp(a3, tx);
    let fx = b.mp(h, s);
    let ty = b.inline(&transposition(y, &x_or_y));
    let a4 = b.axiom(SchemaId::Ax1_4, &[(Meta::X, x), (Meta::Y, y)]);
    let s = b.mp(a4, ty);
    let fy = b.mp(h, s);
    b.conj(fx, fy);
    let classical_fwd = deduction(&b.finish()).expect("checks");

    // (∼X • ∼Y) ⊃ ∼(X ∪ Y)
    let refute = |side: &Formula, left: bool| {
        let mut b = ProofBuilder::new(vec![nx_and_ny.clone(), side.clone()]);
        let h = b.hyp(0);
        let schema = if left { SchemaId::Ax1_6 } else { SchemaId::Ax1_7 };
        let e = b.axiom(schema, &[(Meta::X, &nx), (Meta::Y, &ny)]);
        let n_side = b.mp(h, e);
        let hs = b.hyp(1);
        let ex = b.axiom(SchemaId::Ax1_9, &[(Meta::X, side), (Meta::Y, &nxy)]);
        let s = b.mp(hs, ex);
        b.mp(n_side, s);
        deduction(&b.finish()).expect("checks")
    };
    let mut b = ProofBuilder::new(vec![nx_and_ny.clone()]);
    let from_x = b.inline(&refute(x, true));
    let from_y = b.inline(&refute(y, false));
    let from_or = b.cases_with(from_x, from_y, x, y, &nxy);
    let from_not = b.inline(&identity_proof(&nxy));
    let em = b.axiom(SchemaId::Ax1_10, &[(Meta::X, &x_or_y)]);
    b.cases(em, from_or, from_not);
    let classical_bwd = deduction(&b.finish()).expect("checks");

    let mut b = ProofBuilder::new(Vec::new());
    let lifted_fwd = b.inline(&plus_monotone(&classical_fwd));
    let distrib = b.inline(&plus_over_and(&nx, &ny));
    let split = b.iff_forward(distrib);
    let forward = b.chain(lifted_fwd, split);
    let join = b.iff_backward(distrib);
    let lifted_bwd = b.inline(&plus_monotone(&classical_bwd));
    let backward = b.chain(join, lifted_bwd);
    let left = alt_not(&x_or_y);
    let right = Formula::and(alt_not(x), alt_not(y));
    b.iff_with(forward, backward, &left, &right);
    b.finish()
}

/// `(¬X ∪ ¬Y) ⊃ ¬(X • Y)`.
pub fn alt_neg_or_to_and(x: &Formula, y: &Formula) -> Proof {
    let xy = Formula::and(x.clone(), y.clone());
    let side = |schema: SchemaId, z: &Formula| {
        let mut b = ProofBuilder::new(Vec::new());
        let t = b.inline(&transposition(&xy, z));
        let e = b.axiom(schema, &[(Meta::X, x), (Meta::Y, y)]);
        b.mp(e, t);
        plus_monotone(&b.finish())
    };
    let mut b = ProofBuilder::new(Vec::new());
    let from_x = b.inline(&side(SchemaId::Ax1_6, x));
    let from_y = b.inline(&side(SchemaId::Ax1_7, y));
    b.cases_with(from_x, from_y, &alt_not(x), &alt_not(y), &alt_not(&xy));
    b.finish()
}

/// `(X • *X) ≡ +X`.
pub fn star_and_truth(x: &Formula) -> Proof {
    let (px, sx, nx, ax) = (plus(x), star(x), not(x), alt_not(x));
    let x_and_sx = Formula::and(x.clone(), sx.clone());

    // under X • *X: ¬X ⊃ +X
    let mut b = ProofBuilder::new(vec![x_and_sx.clone(), ax.clone()]);
    let h = b.hyp(0);
    let e = b.axiom(SchemaId::Ax1_6, &[(Meta::X, x), (Meta::Y, &sx)]);
    let fx = b.mp(h, e);
    let hn = b.hyp(1);
    let r = b.axiom(SchemaId::Ax2_2, &[(Meta::X, x)]);
    let fnx = b.mp(hn, r);
    let ex = b.axiom(SchemaId::Ax1_9, &[(Meta::X, x), (Meta::Y, &px)]);
    let s = b.mp(fx, ex);
    b.mp(fnx, s);
    let neg_case = deduction(&b.finish()).expect("checks");

    let mut b = ProofBuilder::new(vec![x_and_sx.clone()]);
    let left = b.inline(&neg_case);
    let right = b.inline(&identity_proof(&px));
    let h = b.hyp(0);
    let e = b.axiom(SchemaId::Ax1_7, &[(Meta::X, x), (Meta::Y, &sx)]);
    let fs = b.mp(h, e);
    b.cases(fs, left, right);
    let forward_proof = deduction(&b.finish()).expect("checks");

    let mut b = ProofBuilder::new(Vec::new());
    let forward = b.inline(&forward_proof);
    let to_star = b.axiom(SchemaId::Ax1_4, &[(Meta::X, &ax), (Meta::Y, &px)]);
    let reflect = b.axiom(SchemaId::Ax2_2, &[(Meta::X, &nx)]);
    let k = b.axiom(SchemaId::Ax1_8, &[(Meta::X, &px), (Meta::Y, x), (Meta::Z, &sx)]);
    let s = b.mp(reflect, k);
    let backward = b.mp(to_star, s);
    b.iff_with(forward, backward, &x_and_sx, &px);
    b.finish()
}

/// `(∼X • *X) ≡ ¬X`.
pub fn star_and_falsity(x: &Formula) -> Proof {
    let (px, sx, nx, ax) = (plus(x), star(x), not(x), alt_not(x));
    let nx_and_sx = Formula::and(nx.clone(), sx.clone());

    // under ∼X • *X: +X ⊃ ¬X
    let mut b = ProofBuilder::new(vec![nx_and_sx.clone(), px.clone()]);
    let hp = b.hyp(1);
    let r = b.axiom(SchemaId::Ax2_2, &[(Meta::X, &nx)]);
    let fx = b.mp(hp, r);
    let h = b.hyp(0);
    let e = b.axiom(SchemaId::Ax1_6, &[(Meta::X, &nx), (Meta::Y, &sx)]);
    let fnx = b.mp(h, e);
    let ex = b.axiom(SchemaId::Ax1_9, &[(Meta::X, x), (Meta::Y, &ax)]);
    let s = b.mp(fx, ex);
    b.mp(fnx, s);
    let plus_case = deduction(&b.finish()).expect("checks");

    let mut b = ProofBuilder::new(vec![nx_and_sx.clone()]);
    let left = b.inline(&identity_proof(&ax));
    let right = b.inline(&plus_case);
    let h = b.hyp(0);
    let e = b.axiom(SchemaId::Ax1_7, &[(Meta::X, &nx), (Meta::Y, &sx)]);
    let fs = b.mp(h, e);
    b.cases(fs, left, right);
    let forward_proof = deduction(&b.finish()).expect("checks");

    let mut b = ProofBuilder::new(Vec::new());
    let forward = b.inline(&forward_proof);
    let to_star = b.axiom(SchemaId::Ax1_3, &[(Meta::X, &ax), (Meta::Y, &px)]);
    let reflect = b.axiom(SchemaId::Ax2_2, &[(Meta::X, x)]);
    let k = b.axiom(SchemaId::Ax1_8, &[(Meta::X, &ax), (Meta::Y, &nx), (Meta::Z, &sx)]);
    let s = b.mp(reflect, k);
    let backward = b.mp(to_star, s);
    b.iff_with(forward, backward, &nx_and_sx, &ax);
    b.finish()
}

/// One shipped proof: file stem, claimed conclusion, and the proof.
pub struct GoldenProof {
    pub name: &'static str,
    pub goal: Formula,
    pub proof: Proof,
}

/// The corpus, at `X = a`, `Y = b`.
pub fn corpus() -> Vec<GoldenProof> {
    let (a, b) = (Formula::classical("a"), Formula::classical("b"));
    let parse = |s: &str| crate::parser::parse(s).expect("goal parses");
    vec![
        GoldenProof { name: "plus_over_and", goal: parse("+(a & b) <=> +a & +b"), proof: plus_over_and(&a, &b) },
        GoldenProof { name: "alt_neg_over_or", goal: parse("!(a | b) <=> !a & !b"), proof: alt_neg_over_or(&a, &b) },
        GoldenProof { name: "alt_neg_or_to_and", goal: parse("!a | !b => !(a & b)"), proof: alt_neg_or_to_and(&a, &b) },
        GoldenProof { name: "star_and_truth", goal: parse("a & *a <=> +a"), proof: star_and_truth(&a) },
        GoldenProof { name: "star_and_falsity", goal: parse("~a & *a <=> !a"), proof: star_and_falsity(&a) },
    ]
}

/// From `a ⊃ b`, `b ⊃ c` and `a`, a proof of `c`. Ships as a deduction
/// theorem input.
pub fn hypothetical_chain() -> Proof {
    let parse = |s: &str| crate::parser::parse(s).expect("formula parses");
    let mut p = Proof::new(vec![parse("a => b"), parse("b => c"), parse("a")]);
    p.push(parse("a"), Justification::Hypothesis(2));
    p.push(parse("a => b"), Justification::Hypothesis(0));
    p.push(parse("b"), Justification::Mp { minor: 0, major: 1 });
    p.push(parse("b => c"), Justification::Hypothesis(1));
    p.push(parse("c"), Justification::Mp { minor: 2, major: 3 });
    p
}

/// File names and contents of the shipped proof files.
pub fn render_corpus() -> Vec<(String, String)> {
    let mut files: Vec<(String, String)> = corpus()
        .into_iter()
        .map(|g| (format!("{}.jsonl", g.name), format!("# proves {}\n{}", g.goal, write_proof(&g.proof))))
        .collect();
    files.push((
        "hypothetical_chain.jsonl".to_string(),
        format!("# c from a => b, b => c and a\n{}", write_proof(&hypothetical_chain())),
    ));
    files
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::transform::proves;
    use crate::parser::parse;

    #[test]
    fn corpus_proves_its_goals() {
        for g in corpus() {
            assert!(proves(&g.proof, &g.goal), "{} fails", g.name);
        }
    }

    #[test]
    fn generators_work_at_other_instances() {
        let (x, y) = (parse("_a").unwrap(), parse("~b => c").unwrap());
        assert!(proves(&plus_over_and(&x, &y), &parse("+(_a & (~b => c)) <=> +_a & +(~b => c)").unwrap()));
        assert!(proves(&alt_neg_over_or(&x, &y), &parse("!(_a | (~b => c)) <=> !_a & !(~b => c)").unwrap()));
        assert!(proves(&alt_neg_or_to_and(&x, &y), &parse("!_a | !(~b => c) => !(_a & (~b => c))").unwrap()));
        assert!(proves(&star_and_truth(&y), &parse("(~b => c) & *(~b => c) <=> +(~b => c)").unwrap()));
        assert!(proves(&star_and_falsity(&x), &parse("~_a & *_a <=> !_a").unwrap()));
    }
}
