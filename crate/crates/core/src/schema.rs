//! Axiom schemas of the LD Hilbert system and matching of formulas against them.
//!
//! Matching compares [`kernel_form`]s, so `+X` written out as `¬∼X`, or `¬X`
//! written as `+∼X`, still matches.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{in_fa, kernel_form, BinOp, Formula};
use crate::parser::parse;

/// Schema metavariable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Meta {
    X,
    Y,
    Z,
}

impl Meta {
    pub const ALL: [Meta; 3] = [Meta::X, Meta::Y, Meta::Z];

    fn placeholder(self) -> &'static str {
        match self {
            Meta::X => "x",
            Meta::Y => "y",
            Meta::Z => "z",
        }
    }
}

impl fmt::Display for Meta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Meta {
    type Err = SchemaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "X" => Ok(Meta::X),
            "Y" => Ok(Meta::Y),
            "Z" => Ok(Meta::Z),
            _ => Err(SchemaError::UnknownMeta(s.to_string())),
        }
    }
}

pub type Substitution = BTreeMap<Meta, Formula>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SchemaId {
    Ax1_1,
    Ax1_2,
    Ax1_3,
    Ax1_4,
    Ax1_5,
    Ax1_6,
    Ax1_7,
    Ax1_8,
    Ax1_9,
    Ax1_10,
    Ax1_11,
    Ax1_12,
    Ax1_13,
    /// AxMP+: `+(X ⊃ Y) ⊃ (+X ⊃ +Y)`.
    Ax2_1,
    /// AxR: `¬X ⊃ ∼X`.
    Ax2_2,
    /// AxT: `X ⊃ +X` for alternate `X`.
    Ax2_3,
    /// Ax+: `+A` for any instance `A` of Ax1.1–Ax2.3.
    Ax2_4,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SchemaError {
    #[error("unknown schema {0:?}")]
    UnknownSchema(String),
    #[error("unknown metavariable {0:?}")]
    UnknownMeta(String),
    #[error("substitution does not bind {0}")]
    Unbound(Meta),
    #[error("Ax2.4 instances are built with `instantiate_ax_plus`")]
    NeedsInnerSchema,
}

impl SchemaId {
    pub const ALL: [SchemaId; 17] = [
        SchemaId::Ax1_1,
        SchemaId::Ax1_2,
        SchemaId::Ax1_3,
        SchemaId::Ax1_4,
        SchemaId::Ax1_5,
        SchemaId::Ax1_6,
        SchemaId::Ax1_7,
        SchemaId::Ax1_8,
        SchemaId::Ax1_9,
        SchemaId::Ax1_10,
        SchemaId::Ax1_11,
        SchemaId::Ax1_12,
        SchemaId::Ax1_13,
        SchemaId::Ax2_1,
        SchemaId::Ax2_2,
        SchemaId::Ax2_3,
        SchemaId::Ax2_4,
    ];

    /// The schemas Ax+ lifts: Ax1.1 through Ax2.3.
    pub fn liftable() -> &'static [SchemaId] {
        &SchemaId::ALL[..16]
    }

    pub fn name(self) -> &'static str {
        match self {
            SchemaId::Ax1_1 => "Ax1.1",
            SchemaId::Ax1_2 => "Ax1.2",
            SchemaId::Ax1_3 => "Ax1.3",
            SchemaId::Ax1_4 => "Ax1.4",
            SchemaId::Ax1_5 => "Ax1.5",
            SchemaId::Ax1_6 => "Ax1.6",
            SchemaId::Ax1_7 => "Ax1.7",
            SchemaId::Ax1_8 => "Ax1.8",
            SchemaId::Ax1_9 => "Ax1.9",
            SchemaId::Ax1_10 => "Ax1.10",
            SchemaId::Ax1_11 => "Ax1.11",
            SchemaId::Ax1_12 => "Ax1.12",
            SchemaId::Ax1_13 => "Ax1.13",
            SchemaId::Ax2_1 => "Ax2.1",
            SchemaId::Ax2_2 => "Ax2.2",
            SchemaId::Ax2_3 => "Ax2.3",
            SchemaId::Ax2_4 => "Ax2.4",
        }
    }

    /// Template text with `x y z` standing for `X Y Z`. `None` for Ax2.4.
    fn template(self) -> Option<&'static str> {
        Some(match self {
            SchemaId::Ax1_1 => "x => y => x",
            SchemaId::Ax1_2 => "(x => y => z) => (x => y) => x => z",
            SchemaId::Ax1_3 => "x => x | y",
            SchemaId::Ax1_4 => "y => x | y",
            SchemaId::Ax1_5 => "(x => z) => (y => z) => x | y => z",
            SchemaId::Ax1_6 => "x & y => x",
            SchemaId::Ax1_7 => "x & y => y",
            SchemaId::Ax1_8 => "(x => y) => (x => z) => x => y & z",
            SchemaId::Ax1_9 => "x => ~x => y",
            SchemaId::Ax1_10 => "x | ~x",
            SchemaId::Ax1_11 => "(x <=> y) => x => y",
            SchemaId::Ax1_12 => "(x <=> y) => y => x",
            SchemaId::Ax1_13 => "(x => y) => (y => x) => (x <=> y)",
            SchemaId::Ax2_1 => "+(x => y) => +x => +y",
            SchemaId::Ax2_2 => "!x => ~x",
            SchemaId::Ax2_3 => "x => +x",
            SchemaId::Ax2_4 => return None,
        })
    }

    /// Metavariables occurring in the schema.
    pub fn metas(self) -> Vec<Meta> {
        let Some(text) = self.template() else { return Vec::new() };
        Meta::ALL.into_iter().filter(|m| text.contains(m.placeholder())).collect()
    }

    /// Surface template with metavariables rendered as `X Y Z`.
    pub fn display_template(self) -> String {
        match self.template() {
            Some(t) => t.replace('x', "X").replace('y', "Y").replace('z', "Z"),
            None => "+A, A an instance of Ax1.1..Ax2.3".to_string(),
        }
    }

    fn pattern(self) -> Option<Pattern> {
        let text = self.template()?;
        Some(Pattern::from_template(&kernel_form(&parse(text).expect("schema template parses"))))
    }
}

impl fmt::Display for SchemaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemaId {
    type Err = SchemaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SchemaId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| SchemaError::UnknownSchema(s.to_string()))
    }
}

/// Core-connective pattern over metavariables.
#[derive(Clone, Debug)]
enum Pattern {
    Meta(Meta),
    CNeg(Box<Pattern>),
    ANeg(Box<Pattern>),
    CBin(BinOp, Box<Pattern>, Box<Pattern>),
}

impl Pattern {
    fn from_template(f: &Formula) -> Pattern {
        match f {
            Formula::Atom(a) => Pattern::Meta(match a.name() {
                "x" => Meta::X,
                "y" => Meta::Y,
                "z" => Meta::Z,
                other => unreachable!("template atom {other}"),
            }),
            Formula::CNeg(g) => Pattern::CNeg(Box::new(Pattern::from_template(g))),
            Formula::ANeg(g) => Pattern::ANeg(Box::new(Pattern::from_template(g))),
            Formula::CBin(op, l, r) => {
                Pattern::CBin(*op, Box::new(Pattern::from_template(l)), Box::new(Pattern::from_template(r)))
            }
            _ => unreachable!("templates are in kernel form"),
        }
    }

    /// Matches against a formula in kernel form. Bindings are kept in kernel form.
    fn bind(&self, target: &Formula, sub: &mut Substitution) -> bool {
        match (self, target) {
            (Pattern::Meta(m), _) => match sub.get(m) {
                Some(bound) => bound == target,
                None => {
                    sub.insert(*m, target.clone());
                    true
                }
            },
            (Pattern::CNeg(p), Formula::CNeg(t)) => p.bind(t, sub),
            // `∼P` also denotes `t` when `P` denotes `∼t`.
            (Pattern::CNeg(p), _) => p.bind(&Formula::cneg(target.clone()), sub),
            (Pattern::ANeg(p), Formula::ANeg(t)) => p.bind(t, sub),
            (Pattern::CBin(op, pl, pr), Formula::CBin(top, tl, tr)) if op == top => {
                pl.bind(tl, sub) && pr.bind(tr, sub)
            }
            _ => false,
        }
    }
}

fn substitute(template: &Formula, sub: &Substitution) -> Result<Formula, SchemaError> {
    Ok(match template {
        Formula::Atom(a) => {
            let meta = Meta::from_str(&a.name().to_uppercase()).expect("template atoms are metas");
            sub.get(&meta).cloned().ok_or(SchemaError::Unbound(meta))?
        }
        Formula::CNeg(g) => Formula::cneg(substitute(g, sub)?),
        Formula::ANeg(g) => Formula::aneg(substitute(g, sub)?),
        Formula::Derived(op, g) => Formula::derived(*op, substitute(g, sub)?),
        Formula::CBin(op, l, r) => Formula::cbin(*op, substitute(l, sub)?, substitute(r, sub)?),
        Formula::ABin(op, l, r) => Formula::abin(*op, substitute(l, sub)?, substitute(r, sub)?),
    })
}

/// Builds the surface instance of `schema` under `sub`.
///
/// The side condition of Ax2.3 is not checked here; use [`match_schema`] on
/// the result for that.
pub fn instantiate(schema: SchemaId, sub: &Substitution) -> Result<Formula, SchemaError> {
    let text = schema.template().ok_or(SchemaError::NeedsInnerSchema)?;
    substitute(&parse(text).expect("schema template parses"), sub)
}

/// `+A` where `A` instantiates `inner`.
pub fn instantiate_ax_plus(inner: SchemaId, sub: &Substitution) -> Result<Formula, SchemaError> {
    Ok(Formula::plus(instantiate(inner, sub)?))
}

fn match_kernel(schema: SchemaId, target: &Formula) -> Option<Substitution> {
    match schema {
        SchemaId::Ax2_4 => match_ax_plus_kernel(target).map(|(_, sub)| sub),
        _ => {
            let mut sub = Substitution::new();
            if !schema.pattern()?.bind(target, &mut sub) {
                return None;
            }
            if schema == SchemaId::Ax2_3 && !in_fa(&sub[&Meta::X]) {
                return None;
            }
            Some(sub)
        }
    }
}

fn match_ax_plus_kernel(target: &Formula) -> Option<(SchemaId, Substitution)> {
    // +A has kernel form ¬∼A, or ¬A' when A = ∼A' collapsed.
    let Formula::ANeg(body) = target else { return None };
    let inner = match body.as_ref() {
        Formula::CNeg(a) => a.as_ref().clone(),
        other => Formula::cneg(other.clone()),
    };
    SchemaId::liftable()
        .iter()
        .find_map(|&id| match_kernel(id, &inner).map(|sub| (id, sub)))
}

/// Returns a substitution witnessing that `f` is an instance of `schema`,
/// honoring the side conditions of Ax2.3 (alternate formula) and Ax2.4
/// (exactly one `+` over an instance of Ax1.1–Ax2.3). Bindings are in kernel form.
pub fn match_schema(schema: SchemaId, f: &Formula) -> Option<Substitution> {
    match_kernel(schema, &kernel_form(f))
}

/// Matches Ax2.4 and reports which schema the lifted instance belongs to.
pub fn match_ax_plus(f: &Formula) -> Option<(SchemaId, Substitution)> {
    match_ax_plus_kernel(&kernel_form(f))
}

/// Checks `f` against `schema` under a given substitution (kernel equality).
/// For Ax2.4 any liftable schema may serve as the inner one.
pub fn is_instance_under(schema: SchemaId, sub: &Substitution, f: &Formula) -> bool {
    let target = std::cell::OnceCell::new();
    let check = |id: SchemaId, wrap: bool| -> bool {
        let Ok(inst) = instantiate(id, sub) else { return false };
        let lifted = if wrap { Formula::plus(inst.clone()) } else { inst.clone() };
        (lifted == *f || kernel_form(&lifted) == *target.get_or_init(|| kernel_form(f)))
            && match_schema(id, &inst).is_some()
    };
    match schema {
        SchemaId::Ax2_4 => SchemaId::liftable().iter().any(|&id| check(id, true)),
        _ => check(schema, false),
    }
}

/// Every schema `f` instantiates.
pub fn matching_schemas(f: &Formula) -> Vec<SchemaId> {
    let target = kernel_form(f);
    SchemaId::ALL.into_iter().filter(|&id| match_kernel(id, &target).is_some()).collect()
}
