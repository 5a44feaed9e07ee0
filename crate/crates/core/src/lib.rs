//! Double Logic LD: formulas over classical and alternate connectives,
//! finite Kripke models, bounded validity, Hilbert proofs and Gamma-LD
//! existential graphs.

pub mod formula;
pub mod graph;
pub mod hilbert;
pub mod kripke;
pub mod model_io;
pub mod parser;
pub mod schema;
pub mod validity;

pub use formula::{desugar, fragment_of, kernel_form, Atom, AtomKind, BinOp, DerivedOp, Formula, Fragments};
pub use kripke::{eval, eval_derived, is_persistent, validate_model, EvalError, Frame, Model, ModelViolation};
pub use parser::{parse, print, ParseError, SourceSpan};
pub use schema::{match_schema, Meta, SchemaId, Substitution};
pub use validity::{classical_oracle, decide, enumerate_posets, intuitionistic_eval, Limits, Verdict};
pub use graph::{eval_graph, is_alternate_graph, parse_graph, read, region_info, translate, Graph, Node, RegionInfo};
pub use graph::rules::{apply_rule, check_rule_soundness, check_script, expand_derived, RuleId, Script, ScriptStep};
