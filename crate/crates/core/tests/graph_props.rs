mod common;

use std::path::Path;
use std::sync::OnceLock;

use common::*;
use ld_core::graph::script_io::load_script;
use ld_core::graph::graph_truth_set;
use ld_core::{
    apply_rule, check_rule_soundness, check_script, decide, expand_derived, parse_graph, read, translate, Formula,
    Graph, Model, Node,
};
use proptest::prelude::*;

const MIXED: &[&str] = &["a", "_a"];

fn models_with_verum() -> &'static [Model] {
    static MODELS: OnceLock<Vec<Model>> = OnceLock::new();
    MODELS.get_or_init(|| models(&["a", "_a", "a0"], 3))
}

fn mixed_models() -> &'static [Model] {
    static MODELS: OnceLock<Vec<Model>> = OnceLock::new();
    MODELS.get_or_init(|| models(MIXED, 3))
}

fn reverse_areas(g: &Graph) -> Graph {
    let nodes = g
        .nodes
        .iter()
        .rev()
        .map(|n| match n {
            Node::Atom(_) => n.clone(),
            Node::Cut(k, inner) => Node::Cut(*k, reverse_areas(inner)),
        })
        .collect();
    Graph::new(nodes)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn text_and_json_round_trip(g in graph(3, &["a", "b", "_a"])) {
        prop_assert_eq!(parse_graph(&g.to_string()).unwrap(), g.clone());
        let json = serde_json::to_string(&g).unwrap();
        prop_assert_eq!(serde_json::from_str::<Graph>(&json).unwrap(), g);
    }

    #[test]
    fn juxtaposition_commutes(g in graph(3, &["a", "_a"])) {
        let r = reverse_areas(&g);
        prop_assert_eq!(&r, &g);
        prop_assert_eq!(r.canonical_string(), g.canonical_string());
        for m in mixed_models() {
            prop_assert_eq!(graph_truth_set(m, &r).unwrap(), graph_truth_set(m, &g).unwrap());
        }
    }

    #[test]
    fn reading_preserves_truth(g in graph(3, MIXED)) {
        let f = read(&g);
        let back = translate(&f);
        for m in models_with_verum() {
            let s = graph_truth_set(m, &g).unwrap();
            prop_assert_eq!(truth(m, &f), s, "{} read as {}", g, f);
            prop_assert_eq!(graph_truth_set(m, &back).unwrap(), s);
        }
    }

    #[test]
    fn translation_preserves_truth(f in formula(3, MIXED)) {
        let g = translate(&f);
        for m in mixed_models() {
            prop_assert_eq!(graph_truth_set(m, &g).unwrap(), truth(m, &f), "{} as {}", f, g);
        }
    }

    #[test]
    fn rule_applications_are_sound(g in graph(2, MIXED)) {
        for (step, h) in applications(&g) {
            prop_assert!(check_rule_soundness(&g, &h, 3).unwrap(), "{} to {} by {}", g, h, step.rule.name());
        }
    }

    #[test]
    fn derived_rules_replay_through_primitives(g in graph(2, MIXED)) {
        for (step, h) in applications(&g) {
            if step.rule.is_primitive() {
                continue;
            }
            let prims = expand_derived(&g, &step).unwrap();
            prop_assert!(prims.iter().all(|s| s.rule.is_primitive()));
            let replayed = prims.iter().try_fold(g.clone(), |cur, s| apply_rule(&cur, s)).unwrap();
            prop_assert_eq!(replayed, h);
        }
    }
}

#[test]
fn applications_revert_under_negation() {
    for g in sample(graph(2, MIXED), 40) {
        for (step, h) in applications(&g) {
            let reverted = Formula::implies(Formula::cneg(read(&h)), Formula::cneg(read(&g)));
            assert!(decide(&reverted, 3).is_valid(), "{g} to {h} by {}", step.rule.name());
        }
    }
}

#[test]
fn shipped_scripts_replay_to_valid_readings() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus/scripts");
    let mut n = 0;
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        let script = load_script(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert!(script.start.is_empty(), "{}", path.display());
        let last = check_script(&script).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert!(decide(&read(&last), 3).is_valid(), "{}", path.display());
        n += 1;
    }
    assert!(n >= 5);
}
