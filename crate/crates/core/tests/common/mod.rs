#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use ld_core::formula::{BinOp, DerivedOp, BIN_OPS};
use ld_core::graph::rules::Direction;
use ld_core::graph::{CutKind, Graph, Node};
use ld_core::{RuleId, ScriptStep};
use ld_core::validity::enumerate_models;
use ld_core::{Atom, Formula, Model};
use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::TestRunner;

pub fn p(s: &str) -> Formula {
    ld_core::parse(s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

pub fn atom(s: &str) -> Formula {
    Formula::Atom(Atom::from_display(s).expect("atom"))
}

/// Unary constructors: `∼ ¬ + ⊗ − *`.
pub fn unary(k: usize, f: Formula) -> Formula {
    match k {
        0 => Formula::cneg(f),
        1 => Formula::aneg(f),
        2 => Formula::derived(DerivedOp::Plus, f),
        3 => Formula::derived(DerivedOp::Circ, f),
        4 => Formula::derived(DerivedOp::Minus, f),
        _ => Formula::derived(DerivedOp::Star, f),
    }
}

pub const UNARY: usize = 6;
pub const BINARY: usize = 8;

/// Binary constructors: the classical four, then the alternate four.
pub fn binary(k: usize, l: Formula, r: Formula) -> Formula {
    if k < 4 {
        Formula::cbin(BIN_OPS[k], l, r)
    } else {
        Formula::abin(BIN_OPS[k - 4], l, r)
    }
}

fn leaf(atoms: &'static [&'static str]) -> BoxedStrategy<Formula> {
    prop::sample::select(atoms.to_vec()).prop_map(atom).boxed()
}

/// Any surface formula of depth at most `depth`.
pub fn formula(depth: u32, atoms: &'static [&'static str]) -> BoxedStrategy<Formula> {
    if depth == 0 {
        return leaf(atoms);
    }
    let sub = formula(depth - 1, atoms);
    prop_oneof![
        1 => leaf(atoms),
        3 => (sub.clone(), 0..UNARY).prop_map(|(f, k)| unary(k, f)),
        4 => (sub.clone(), sub, 0..BINARY).prop_map(|(l, r, k)| binary(k, l, r)),
    ]
    .boxed()
}

/// Classical atoms with `∼ ⊃ ∪ • ≡`.
pub fn fc_formula(depth: u32, atoms: &'static [&'static str]) -> BoxedStrategy<Formula> {
    if depth == 0 {
        return leaf(atoms);
    }
    let sub = fc_formula(depth - 1, atoms);
    prop_oneof![
        1 => leaf(atoms),
        2 => sub.clone().prop_map(Formula::cneg),
        4 => (sub.clone(), sub, 0..4usize).prop_map(|(l, r, k)| Formula::cbin(BIN_OPS[k], l, r)),
    ]
    .boxed()
}

/// Alternate atoms with `¬ → ∨ ∧ ↔`.
pub fn fi_formula(depth: u32, atoms: &'static [&'static str]) -> BoxedStrategy<Formula> {
    if depth == 0 {
        return leaf(atoms);
    }
    let sub = fi_formula(depth - 1, atoms);
    prop_oneof![
        1 => leaf(atoms),
        2 => sub.clone().prop_map(Formula::aneg),
        4 => (sub.clone(), sub, 0..4usize).prop_map(|(l, r, k)| Formula::abin(BIN_OPS[k], l, r)),
    ]
    .boxed()
}

pub fn graph(depth: u32, atoms: &'static [&'static str]) -> BoxedStrategy<Graph> {
    let node_leaf = prop::sample::select(atoms.to_vec()).prop_map(|s| Node::Atom(Atom::from_display(s).unwrap()));
    if depth == 0 {
        return prop::collection::vec(node_leaf, 0..3).prop_map(Graph::new).boxed();
    }
    let inner = graph(depth - 1, atoms);
    let node = prop_oneof![
        2 => node_leaf,
        1 => inner.clone().prop_map(|g| Node::Cut(CutKind::Classical, g)),
        1 => inner.prop_map(|g| Node::Cut(CutKind::Paracomplete, g)),
    ];
    prop::collection::vec(node, 0..3).prop_map(Graph::new).boxed()
}

/// `n` deterministic draws from a strategy.
pub fn sample<T: std::fmt::Debug>(s: impl Strategy<Value = T>, n: usize) -> Vec<T> {
    let mut runner = TestRunner::deterministic();
    (0..n).map(|_| s.new_tree(&mut runner).expect("strategy").current()).collect()
}

pub fn models(atoms: &[&str], max_worlds: usize) -> Vec<Model> {
    let set: BTreeSet<Atom> = atoms.iter().map(|s| Atom::from_display(s).unwrap()).collect();
    enumerate_models(&set, max_worlds).expect("within cap")
}

pub fn truth(m: &Model, f: &Formula) -> u64 {
    m.truth_set(f).expect("atoms in model")
}

/// Constructor used to grow formulas level by level.
#[derive(Clone, Copy, Debug)]
pub enum Op {
    Unary(fn(Formula) -> Formula),
    Binary(fn(Formula, Formula) -> Formula),
}

pub fn all_ops() -> Vec<Op> {
    vec![
        Op::Unary(Formula::cneg),
        Op::Unary(Formula::aneg),
        Op::Unary(|f| Formula::derived(DerivedOp::Plus, f)),
        Op::Unary(|f| Formula::derived(DerivedOp::Circ, f)),
        Op::Unary(|f| Formula::derived(DerivedOp::Minus, f)),
        Op::Unary(|f| Formula::derived(DerivedOp::Star, f)),
        Op::Binary(|l, r| Formula::cbin(BinOp::Impl, l, r)),
        Op::Binary(|l, r| Formula::cbin(BinOp::Or, l, r)),
        Op::Binary(|l, r| Formula::cbin(BinOp::And, l, r)),
        Op::Binary(|l, r| Formula::cbin(BinOp::Iff, l, r)),
        Op::Binary(|l, r| Formula::abin(BinOp::Impl, l, r)),
        Op::Binary(|l, r| Formula::abin(BinOp::Or, l, r)),
        Op::Binary(|l, r| Formula::abin(BinOp::And, l, r)),
        Op::Binary(|l, r| Formula::abin(BinOp::Iff, l, r)),
    ]
}

pub fn fi_ops() -> Vec<Op> {
    vec![
        Op::Unary(Formula::aneg),
        Op::Binary(|l, r| Formula::abin(BinOp::Impl, l, r)),
        Op::Binary(|l, r| Formula::abin(BinOp::Or, l, r)),
        Op::Binary(|l, r| Formula::abin(BinOp::And, l, r)),
        Op::Binary(|l, r| Formula::abin(BinOp::Iff, l, r)),
    ]
}

/// Walks every formula of depth at most `depth` over `atoms` in model `m`,
/// up to truth set: level k applies each constructor to one representative
/// per truth set reached below level k. `visit` sees every built formula and
/// returns whether it passes. When the property checked by `visit` depends
/// only on the truth sets of the immediate subformulas, passing here means
/// it holds for every formula of that depth. Returns the number of visits.
pub fn walk_by_truth_set(
    m: &Model,
    atoms: &[Formula],
    ops: &[Op],
    depth: usize,
    mut visit: impl FnMut(&Formula) -> bool,
) -> Result<usize, Formula> {
    let mut reps: BTreeMap<u64, Formula> = BTreeMap::new();
    let mut visits = 0;
    for a in atoms {
        visits += 1;
        if !visit(a) {
            return Err(a.clone());
        }
        reps.entry(truth(m, a)).or_insert_with(|| a.clone());
    }
    for _ in 0..depth {
        let below: Vec<Formula> = reps.values().cloned().collect();
        let mut built = Vec::new();
        for op in ops {
            match op {
                Op::Unary(u) => built.extend(below.iter().map(|f| u(f.clone()))),
                Op::Binary(b) => {
                    for l in &below {
                        built.extend(below.iter().map(|r| b(l.clone(), r.clone())));
                    }
                }
            }
        }
        for f in built {
            visits += 1;
            if !visit(&f) {
                return Err(f);
            }
            let s = truth(m, &f);
            reps.entry(s).or_insert(f);
        }
    }
    Ok(visits)
}

/// Every formula of depth at most `depth` built with `ops` over `atoms`,
/// literally.
pub fn all_formulas(atoms: &[Formula], ops: &[Op], depth: usize) -> Vec<Formula> {
    let mut levels: Vec<Vec<Formula>> = vec![atoms.to_vec()];
    for d in 1..=depth {
        let below: Vec<Formula> = levels.iter().flatten().cloned().collect();
        let top = &levels[d - 1];
        let mut next = Vec::new();
        for op in ops {
            match op {
                Op::Unary(u) => next.extend(top.iter().map(|f| u(f.clone()))),
                Op::Binary(b) => {
                    for l in &below {
                        for r in &below {
                            if l.depth() == d - 1 || r.depth() == d - 1 {
                                next.push(b(l.clone(), r.clone()));
                            }
                        }
                    }
                }
            }
        }
        levels.push(next);
    }
    levels.into_iter().flatten().collect()
}

/// Area addresses of `g`, sheet first.
pub fn areas(g: &Graph) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut i = 0;
    while i < out.len() {
        let a = out[i].clone();
        for (j, n) in g.area(&a).expect("listed").nodes.iter().enumerate() {
            if let Node::Cut(..) = n {
                let mut c = a.clone();
                c.push(j);
                out.push(c);
            }
        }
        i += 1;
    }
    out
}

pub const WRITE_PAYLOADS: [&str; 4] = ["a", "_a", "(a)", "[_a]"];

/// Every step worth trying on `g`, most of which will not apply. DCMGEV is
/// left out since it needs a witness.
pub fn candidate_steps(g: &Graph) -> Vec<ScriptStep> {
    let mut out = Vec::new();
    if g.is_empty() {
        out.push(ScriptStep::new(RuleId::Lambda, vec![]));
    }
    let all = areas(g);
    for area in &all {
        let len = g.area(area).expect("listed").nodes.len();
        for p in WRITE_PAYLOADS {
            out.push(ScriptStep::new(RuleId::Write, area.clone()).with_payload(ld_core::parse_graph(p).unwrap()));
        }
        out.push(ScriptStep::new(RuleId::Dcc(Direction::In), area.clone()).with_sel(vec![]));
        out.push(ScriptStep::new(RuleId::DccLambda, area.clone()));
        out.push(ScriptStep::new(RuleId::DcmLambda, area.clone()));
        if len >= 2 {
            let every: Vec<usize> = (0..len).collect();
            for rule in [RuleId::Erase, RuleId::Dcc(Direction::In), RuleId::Iterate, RuleId::Deiterate] {
                out.push(ScriptStep::new(rule, area.clone()).with_sel(every.clone()));
            }
        }
        for i in 0..len {
            let mut node = area.clone();
            node.push(i);
            for &rule in RuleId::PRIMITIVE.iter().chain(RuleId::DERIVED.iter()) {
                match rule {
                    RuleId::Lambda | RuleId::Write | RuleId::Dcmgev(_) | RuleId::DccLambda | RuleId::DcmLambda => {}
                    RuleId::IterateClassical
                    | RuleId::IterateStrong
                    | RuleId::DeiterateClassical
                    | RuleId::DeiterateStrong => {
                        for target in &all {
                            if target.len() > area.len() && target[..area.len()] == area[..] && target[area.len()] != i {
                                out.push(ScriptStep::new(rule, node.clone()).with_target(target.clone()));
                            }
                        }
                    }
                    _ => out.push(ScriptStep::new(rule, node.clone())),
                }
            }
        }
    }
    out
}

/// Every step from `candidate_steps` that applies, with its result.
pub fn applications(g: &Graph) -> Vec<(ScriptStep, Graph)> {
    candidate_steps(g)
        .into_iter()
        .filter_map(|s| ld_core::apply_rule(g, &s).ok().map(|h| (s, h)))
        .collect()
}
