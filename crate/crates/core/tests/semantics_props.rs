mod common;

use std::sync::OnceLock;

use common::*;
use ld_core::formula::DERIVED_OPS;
use ld_core::validity::intuitionistic_eval;
use ld_core::{
    classical_oracle, decide, desugar, eval, eval_derived, is_persistent, validate_model, Formula, Model, Verdict,
};
use proptest::prelude::*;

const MIXED: &[&str] = &["a", "_a"];

fn mixed_models() -> &'static [Model] {
    static MODELS: OnceLock<Vec<Model>> = OnceLock::new();
    MODELS.get_or_init(|| models(MIXED, 3))
}

fn fi_models() -> &'static [Model] {
    static MODELS: OnceLock<Vec<Model>> = OnceLock::new();
    MODELS.get_or_init(|| models(&["_a", "_b"], 3))
}

fn worlds(m: &Model) -> std::ops::Range<usize> {
    0..m.frame().size()
}

/// Replaces every occurrence of atom `z` in `ctx` by `by`.
fn plug(ctx: &Formula, z: &Formula, by: &Formula) -> Formula {
    match ctx {
        f if f == z => by.clone(),
        Formula::Atom(_) => ctx.clone(),
        Formula::CNeg(f) => Formula::cneg(plug(f, z, by)),
        Formula::ANeg(f) => Formula::aneg(plug(f, z, by)),
        Formula::Derived(op, f) => Formula::derived(*op, plug(f, z, by)),
        Formula::CBin(op, l, r) => Formula::cbin(*op, plug(l, z, by), plug(r, z, by)),
        Formula::ABin(op, l, r) => Formula::abin(*op, plug(l, z, by), plug(r, z, by)),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn derived_operators_match_their_definitions(f in formula(3, MIXED)) {
        for m in mixed_models() {
            for w in worlds(m) {
                for op in DERIVED_OPS {
                    let direct = eval_derived(m, w, op, &f).unwrap();
                    let via_definition = eval(m, w, &desugar(&Formula::derived(op, f.clone()))).unwrap();
                    prop_assert_eq!(direct, via_definition, "{:?} {} at world {}", op, f, w);
                }
            }
        }
    }

    #[test]
    fn intuitionistic_and_alternate_forms_are_persistent(f in fi_formula(3, &["_a", "_b"]), g in formula(2, MIXED)) {
        for m in fi_models() {
            prop_assert!(is_persistent(m, &f).unwrap(), "{} in {}", f, m);
        }
        for m in mixed_models() {
            prop_assert!(is_persistent(m, &Formula::aneg(g.clone())).unwrap());
            prop_assert!(is_persistent(m, &Formula::plus(g.clone())).unwrap());
        }
    }

    #[test]
    fn intuitionistic_reading_agrees(f in fi_formula(3, &["_a", "_b"])) {
        for m in fi_models() {
            for w in worlds(m) {
                prop_assert_eq!(intuitionistic_eval(m, w, &f).unwrap(), eval(m, w, &f).unwrap());
            }
        }
    }

    #[test]
    fn one_world_decides_classical_formulas(f in fc_formula(5, &["a", "b", "c"])) {
        prop_assert_eq!(decide(&f, 1).is_valid(), classical_oracle(&f).unwrap());
    }

    #[test]
    fn countermodels_are_genuine(f in formula(3, &["a", "b", "_a"])) {
        if let Verdict::CounterModel { model, .. } = decide(&f, 3) {
            prop_assert!(validate_model(&model).is_ok());
            prop_assert!(!eval(&model, model.frame().actual(), &f).unwrap());
        }
    }

    #[test]
    fn necessitation_preserves_validity(x in formula(2, MIXED), k in 0..4usize) {
        // Valid formulas of several shapes built around x.
        let f = match k {
            0 => Formula::implies(x.clone(), x.clone()),
            1 => Formula::or(x.clone(), Formula::cneg(x.clone())),
            2 => Formula::implies(Formula::aneg(x.clone()), Formula::cneg(x.clone())),
            _ => x.clone(),
        };
        for bound in 1..=3 {
            if decide(&f, bound).is_valid() {
                prop_assert!(decide(&Formula::plus(f.clone()), bound).is_valid(), "+({})", f);
            }
        }
    }

    #[test]
    fn modus_ponens_preserves_validity(x in formula(2, MIXED), y in formula(2, MIXED)) {
        let f = Formula::implies(x.clone(), x.clone());
        for g in [Formula::or(f.clone(), y.clone()), Formula::implies(y.clone(), f.clone()), y.clone()] {
            let fg = Formula::implies(f.clone(), g.clone());
            if decide(&f, 3).is_valid() && decide(&fg, 3).is_valid() {
                prop_assert!(decide(&g, 3).is_valid(), "{}", g);
            }
        }
    }

    #[test]
    fn equivalents_substitute(ctx in formula(2, &["a", "z"]), k in 0..5usize) {
        let pairs = [
            ("+a", "!~a"),
            ("a", "~~a"),
            ("?a", "~!a"),
            ("*a", "#a => !a"),
            ("a & _b", "~(a => ~_b)"),
        ];
        let (x, y) = (p(pairs[k].0), p(pairs[k].1));
        prop_assert!(decide(&Formula::iff(x.clone(), y.clone()), 3).is_valid());
        let z = atom("z");
        let goal = Formula::iff(plug(&ctx, &z, &x), plug(&ctx, &z, &y));
        prop_assert!(decide(&goal, 3).is_valid(), "{}", goal);
    }
}

#[test]
fn models_from_search_respect_heredity() {
    for f in ["_a \\/ !_a", "!+x => !x", "~(_a & _b) => ~_a | ~_b", "!!_a => _a"] {
        if let Some(m) = decide(&p(f), 3).countermodel() {
            assert!(validate_model(m).is_ok(), "{f}");
        }
    }
    for m in models(&["_a", "b"], 3) {
        assert!(validate_model(&m).is_ok());
    }
}
