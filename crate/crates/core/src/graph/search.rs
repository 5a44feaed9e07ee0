//! Breadth-first search for λ-derivations. Best effort: the move set is a
//! small fragment of the rules and payloads are drawn from the goal.

use std::collections::{HashSet, VecDeque};

use super::rules::{apply_rule, Direction, RuleId, Script, ScriptStep};
use super::{Address, Graph, Node};

#[derive(Clone, Copy, Debug)]
pub struct SearchLimits {
    pub max_steps: usize,
    pub max_states: usize,
    /// Graphs larger than the goal by more than this are pruned.
    pub slack: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { max_steps: 8, max_states: 50_000, slack: 4 }
    }
}

fn areas(g: &Graph) -> Vec<Address> {
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

/// Every subgraph of `g` that is a single node, plus its atoms.
fn pieces(g: &Graph) -> Vec<Graph> {
    let mut out: Vec<Graph> = Vec::new();
    for a in areas(g) {
        for n in &g.area(&a).expect("listed").nodes {
            let piece = Graph::single(n.clone());
            if !out.contains(&piece) {
                out.push(piece);
            }
        }
    }
    out
}

fn moves(g: &Graph, payloads: &[Graph]) -> Vec<ScriptStep> {
    let mut out = Vec::new();
    for area in areas(g) {
        let len = g.area(&area).expect("listed").nodes.len();
        out.push(ScriptStep::new(RuleId::Dcc(Direction::In), area.clone()).with_sel(vec![]));
        for p in payloads {
            out.push(ScriptStep::new(RuleId::Write, area.clone()).with_payload(p.clone()));
        }
        for i in 0..len {
            let mut node = area.clone();
            node.push(i);
            for rule in [
                RuleId::Dcc(Direction::In),
                RuleId::Dcc(Direction::Out),
                RuleId::CutChange,
                RuleId::Dcmf,
                RuleId::Deiterate,
            ] {
                out.push(ScriptStep::new(rule, node.clone()));
            }
            for target in areas(g) {
                if target.len() > area.len() && target[..area.len()] == area[..] && target[area.len()] != i {
                    for rule in [
                        RuleId::IterateClassical,
                        RuleId::IterateStrong,
                        RuleId::DeiterateClassical,
                        RuleId::DeiterateStrong,
                    ] {
                        out.push(ScriptStep::new(rule, node.clone()).with_target(target.clone()));
                    }
                }
            }
        }
    }
    out
}

/// Looks for a script from λ to `goal`.
pub fn search_gev(goal: &Graph, limits: SearchLimits) -> Option<Script> {
    let goal_key = goal.canonical_string();
    let cap = goal.size() + limits.slack;
    let payloads = pieces(goal);
    let mut seen: HashSet<String> = HashSet::new();
    let mut queue: VecDeque<(Graph, Vec<ScriptStep>)> = VecDeque::new();
    seen.insert(String::new());
    queue.push_back((Graph::empty(), Vec::new()));
    while let Some((g, path)) = queue.pop_front() {
        if g.canonical_string() == goal_key {
            return Some(Script::from_lambda(path));
        }
        if path.len() >= limits.max_steps {
            continue;
        }
        for step in moves(&g, &payloads) {
            let Ok(next) = apply_rule(&g, &step) else { continue };
            if next.size() > cap || !seen.insert(next.canonical_string()) {
                continue;
            }
            if seen.len() > limits.max_states {
                return None;
            }
            let mut p = path.clone();
            p.push(step);
            queue.push_back((next, p));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;
    use crate::graph::rules::check_script;

    #[test]
    fn finds_short_derivations() {
        for goal in ["(())", "(a(a))", "((a)a)"] {
            let goal = parse_graph(goal).unwrap();
            let s = search_gev(&goal, SearchLimits::default()).expect("derivation");
            assert_eq!(check_script(&s).unwrap(), goal);
        }
    }

    #[test]
    fn respects_limits() {
        let goal = parse_graph("a").unwrap();
        let tight = SearchLimits { max_steps: 6, max_states: 2_000, slack: 2 };
        assert!(search_gev(&goal, tight).is_none());
    }
}
