//! Formula AST for the full LD language, its fragments, and the desugaring of
//! the derived truth operators into the core connectives.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Whether an atom is valued freely per world or hereditarily.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum AtomKind {
    Classical,
    Alternate,
}

/// A propositional atom. Alternate atoms print with a leading underscore.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    name: String,
    kind: AtomKind,
}

impl Atom {
    /// Panics if `name` is not a lowercase identifier `[a-z][a-z0-9]*`.
    pub fn new(name: impl Into<String>, kind: AtomKind) -> Atom {
        let name = name.into();
        assert!(is_atom_name(&name), "invalid atom name {name:?}");
        Atom { name, kind }
    }

    pub fn classical(name: impl Into<String>) -> Atom {
        Atom::new(name, AtomKind::Classical)
    }

    pub fn alternate(name: impl Into<String>) -> Atom {
        Atom::new(name, AtomKind::Alternate)
    }

    /// Parses the printed form: `a` is classical, `_a` alternate.
    pub fn from_display(text: &str) -> Option<Atom> {
        match text.strip_prefix('_') {
            Some(rest) if is_atom_name(rest) => Some(Atom::alternate(rest)),
            None if is_atom_name(text) => Some(Atom::classical(text)),
            _ => None,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> AtomKind {
        self.kind
    }

    pub fn is_alternate(&self) -> bool {
        self.kind == AtomKind::Alternate
    }
}

pub(crate) fn is_atom_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit())
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            AtomKind::Classical => f.write_str(&self.name),
            AtomKind::Alternate => write!(f, "_{}", self.name),
        }
    }
}

/// Binary connective shape, shared by the classical family (⊃ ∪ • ≡) and the
/// alternate family (→ ∨ ∧ ↔).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BinOp {
    Impl,
    Or,
    And,
    Iff,
}

pub const BIN_OPS: [BinOp; 4] = [BinOp::Impl, BinOp::Or, BinOp::And, BinOp::Iff];

/// Unary truth operators defined from alternate negation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DerivedOp {
    /// `+X = ¬∼X`, alternate truth.
    Plus,
    /// `⊗X = ∼¬X`, refutable alternate falsity.
    Circ,
    /// `−X = ∼+X`, refutable alternate truth.
    Minus,
    /// `*X = ¬X ∪ +X`, well-foundedness.
    Star,
}

pub const DERIVED_OPS: [DerivedOp; 4] =
    [DerivedOp::Plus, DerivedOp::Circ, DerivedOp::Minus, DerivedOp::Star];

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(Atom),
    /// Classical negation `∼`.
    CNeg(Box<Formula>),
    /// Alternate negation `¬`.
    ANeg(Box<Formula>),
    CBin(BinOp, Box<Formula>, Box<Formula>),
    ABin(BinOp, Box<Formula>, Box<Formula>),
    Derived(DerivedOp, Box<Formula>),
}

/// Fragment membership of a surface formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fragments {
    #[serde(rename = "in_FC")]
    pub in_fc: bool,
    #[serde(rename = "in_FI")]
    pub in_fi: bool,
    #[serde(rename = "in_FA")]
    pub in_fa: bool,
}

impl Formula {
    pub fn atom(a: Atom) -> Formula {
        Formula::Atom(a)
    }

    pub fn classical(name: &str) -> Formula {
        Formula::Atom(Atom::classical(name))
    }

    pub fn alternate(name: &str) -> Formula {
        Formula::Atom(Atom::alternate(name))
    }

    pub fn cneg(f: Formula) -> Formula {
        Formula::CNeg(Box::new(f))
    }

    pub fn aneg(f: Formula) -> Formula {
        Formula::ANeg(Box::new(f))
    }

    pub fn cbin(op: BinOp, l: Formula, r: Formula) -> Formula {
        Formula::CBin(op, Box::new(l), Box::new(r))
    }

    pub fn abin(op: BinOp, l: Formula, r: Formula) -> Formula {
        Formula::ABin(op, Box::new(l), Box::new(r))
    }

    pub fn derived(op: DerivedOp, f: Formula) -> Formula {
        Formula::Derived(op, Box::new(f))
    }

    pub fn implies(l: Formula, r: Formula) -> Formula {
        Formula::cbin(BinOp::Impl, l, r)
    }

    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::cbin(BinOp::Or, l, r)
    }

    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::cbin(BinOp::And, l, r)
    }

    pub fn iff(l: Formula, r: Formula) -> Formula {
        Formula::cbin(BinOp::Iff, l, r)
    }

    pub fn plus(f: Formula) -> Formula {
        Formula::derived(DerivedOp::Plus, f)
    }

    /// Whether the formula uses only `∼ ¬ ⊃ ∪ • ≡`.
    pub fn is_core(&self) -> bool {
        match self {
            Formula::Atom(_) => true,
            Formula::CNeg(f) | Formula::ANeg(f) => f.is_core(),
            Formula::CBin(_, l, r) => l.is_core() && r.is_core(),
            Formula::ABin(..) | Formula::Derived(..) => false,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::CNeg(f) | Formula::ANeg(f) | Formula::Derived(_, f) => 1 + f.depth(),
            Formula::CBin(_, l, r) | Formula::ABin(_, l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) => 1,
            Formula::CNeg(f) | Formula::ANeg(f) | Formula::Derived(_, f) => 1 + f.size(),
            Formula::CBin(_, l, r) | Formula::ABin(_, l, r) => 1 + l.size() + r.size(),
        }
    }

    /// Distinct atoms, sorted.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<Atom>) {
        match self {
            Formula::Atom(a) => {
                out.insert(a.clone());
            }
            Formula::CNeg(f) | Formula::ANeg(f) | Formula::Derived(_, f) => f.collect_atoms(out),
            Formula::CBin(_, l, r) | Formula::ABin(_, l, r) => {
                l.collect_atoms(out);
                r.collect_atoms(out);
            }
        }
    }

    pub fn fragments(&self) -> Fragments {
        fragment_of(self)
    }
}

/// Rewrites every derived operator and alternate binary connective into the
/// core connectives `∼ ¬ ⊃ ∪ • ≡`.
pub fn desugar(f: &Formula) -> Formula {
    match f {
        Formula::Atom(a) => Formula::Atom(a.clone()),
        Formula::CNeg(g) => Formula::cneg(desugar(g)),
        Formula::ANeg(g) => Formula::aneg(desugar(g)),
        Formula::CBin(op, l, r) => Formula::cbin(*op, desugar(l), desugar(r)),
        Formula::ABin(op, l, r) => plus_core(Formula::cbin(*op, desugar(l), desugar(r))),
        Formula::Derived(op, g) => {
            let g = desugar(g);
            match op {
                DerivedOp::Plus => plus_core(g),
                DerivedOp::Circ => Formula::cneg(Formula::aneg(g)),
                DerivedOp::Minus => Formula::cneg(plus_core(g)),
                DerivedOp::Star => Formula::or(Formula::aneg(g.clone()), plus_core(g)),
            }
        }
    }
}

fn plus_core(g: Formula) -> Formula {
    Formula::aneg(Formula::cneg(g))
}

/// The form under which the proof kernel and schema matcher compare formulas:
/// desugared, with double classical negations `∼∼X` collapsed to `X`.
///
/// Collapsing is sound because `∼∼X` and `X` agree at every world of every
/// model, and it identifies `¬X` with `+∼X = ¬∼∼X`.
pub fn kernel_form(f: &Formula) -> Formula {
    collapse_double_negation(desugar(f))
}

fn collapse_double_negation(f: Formula) -> Formula {
    match f {
        Formula::Atom(_) => f,
        Formula::CNeg(g) => match collapse_double_negation(*g) {
            Formula::CNeg(inner) => *inner,
            other => Formula::cneg(other),
        },
        Formula::ANeg(g) => Formula::aneg(collapse_double_negation(*g)),
        Formula::CBin(op, l, r) => {
            Formula::cbin(op, collapse_double_negation(*l), collapse_double_negation(*r))
        }
        Formula::ABin(..) | Formula::Derived(..) => unreachable!("desugared input"),
    }
}

/// Equality modulo [`kernel_form`].
pub fn kernel_eq(a: &Formula, b: &Formula) -> bool {
    a == b || kernel_form(a) == kernel_form(b)
}

/// Fragment flags of the surface formula.
///
/// FC: classical atoms with `∼ ⊃ ∪ • ≡` only. FI: alternate atoms with
/// `¬ → ∨ ∧ ↔` only. FA: `¬Y` for any `Y`, or an alternate atom.
pub fn fragment_of(f: &Formula) -> Fragments {
    Fragments {
        in_fc: in_fc(f),
        in_fi: in_fi(f),
        in_fa: in_fa(f),
    }
}

fn in_fc(f: &Formula) -> bool {
    match f {
        Formula::Atom(a) => !a.is_alternate(),
        Formula::CNeg(g) => in_fc(g),
        Formula::CBin(_, l, r) => in_fc(l) && in_fc(r),
        _ => false,
    }
}

fn in_fi(f: &Formula) -> bool {
    match f {
        Formula::Atom(a) => a.is_alternate(),
        Formula::ANeg(g) => in_fi(g),
        Formula::ABin(_, l, r) => in_fi(l) && in_fi(r),
        _ => false,
    }
}

pub fn in_fa(f: &Formula) -> bool {
    match f {
        Formula::Atom(a) => a.is_alternate(),
        Formula::ANeg(_) => true,
        _ => false,
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::print(self))
    }
}

impl std::str::FromStr for Formula {
    type Err = crate::parser::ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        crate::parser::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn desugar_plus() {
        assert_eq!(desugar(&p("+a")), p("!~a"));
    }

    #[test]
    fn desugar_core_is_identity() {
        assert_eq!(desugar(&p("a => b")), p("a => b"));
    }

    #[test]
    fn desugar_alternate_or() {
        assert_eq!(desugar(&p("a \\/ b")), p("!~(a | b)"));
    }

    #[test]
    fn desugar_remaining_operators() {
        assert_eq!(desugar(&p("?a")), p("~!a"));
        assert_eq!(desugar(&p("#a")), p("~!~a"));
        assert_eq!(desugar(&p("*a")), p("!a | !~a"));
        assert_eq!(desugar(&p("a -> b")), p("!~(a => b)"));
        assert_eq!(desugar(&p("a /\\ b")), p("!~(a & b)"));
        assert_eq!(desugar(&p("a <-> b")), p("!~(a <=> b)"));
    }

    #[test]
    fn fragments_of_examples() {
        let f = fragment_of(&p("a => b"));
        assert_eq!((f.in_fc, f.in_fi, f.in_fa), (true, false, false));
        assert!(fragment_of(&p("!(x & y)")).in_fa);
        let f = fragment_of(&p("_a"));
        assert!(f.in_fa && f.in_fi && !f.in_fc);
        assert!(fragment_of(&p("!_a -> _b")).in_fi);
        assert!(!fragment_of(&p("_a => _b")).in_fi);
        assert!(!fragment_of(&p("+_a")).in_fi);
    }

    #[test]
    fn kernel_form_collapses_double_negation() {
        assert_eq!(kernel_form(&p("+~a")), p("!a"));
        assert_eq!(kernel_form(&p("~~~a")), p("~a"));
        assert!(kernel_eq(&p("!~~(a | b)"), &p("!(a | b)")));
        assert!(!kernel_eq(&p("+a"), &p("a")));
    }

    #[test]
    fn atoms_are_sorted_and_distinct() {
        let atoms: Vec<String> = p("_b & a | b => a").atoms().iter().map(|a| a.to_string()).collect();
        assert_eq!(atoms, ["a", "b", "_b"]);
    }
}
