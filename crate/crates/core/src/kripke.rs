//! Finite Kripke models of LD.
//!
//! Worlds are dense indices `0..n` (`n ≤ 64`) and every set of worlds is a
//! `u64` bitmask. A formula is evaluated by computing its truth set once per
//! subformula, which memoizes the accessibility quantifiers of `¬` and `+`.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::formula::{desugar, Atom, AtomKind, BinOp, DerivedOp, Formula};

pub type WorldId = usize;

/// Largest frame a [`Model`] can hold.
pub const MAX_WORLDS: usize = 64;

/// Worlds, actual world, and accessibility relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    names: Vec<String>,
    actual: WorldId,
    /// `succ[w]` is the set of worlds accessible from `w`.
    succ: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FrameError {
    #[error("a frame needs between 1 and {MAX_WORLDS} worlds, got {0}")]
    Size(usize),
    #[error("world index {0} out of range")]
    WorldOutOfRange(WorldId),
    #[error("duplicate world name {0:?}")]
    DuplicateName(String),
}

/// First restriction a model breaks, with witnessing worlds.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ModelViolation {
    #[error("RR: world {world} does not access itself")]
    Reflexivity { world: String },
    #[error("RT: {from} -> {via} -> {to} but not {from} -> {to}")]
    Transitivity { from: String, via: String, to: String },
    #[error("RA: {a} -> {b} and {b} -> {a} with {a} != {b}")]
    Antisymmetry { a: String, b: String },
    #[error("heredity: {atom} holds at {from} but not at its successor {to}")]
    Heredity { atom: String, from: String, to: String },
}

impl ModelViolation {
    /// Short restriction tag: `RR`, `RT`, `RA` or `heredity`.
    pub fn restriction(&self) -> &'static str {
        match self {
            ModelViolation::Reflexivity { .. } => "RR",
            ModelViolation::Transitivity { .. } => "RT",
            ModelViolation::Antisymmetry { .. } => "RA",
            ModelViolation::Heredity { .. } => "heredity",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unknown world {0}")]
    UnknownWorld(String),
    #[error("atom {0} has no valuation in this model")]
    UnknownAtom(String),
}

pub(crate) fn mask_of(worlds: usize) -> u64 {
    if worlds == 64 {
        u64::MAX
    } else {
        (1u64 << worlds) - 1
    }
}

pub(crate) fn bits(mut set: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if set == 0 {
            None
        } else {
            let w = set.trailing_zeros() as usize;
            set &= set - 1;
            Some(w)
        }
    })
}

impl Frame {
    /// Builds a frame from explicit pairs `(from, to)`. Nothing is implied or
    /// checked beyond index ranges; see [`Frame::validate`].
    pub fn new(names: Vec<String>, actual: WorldId, pairs: &[(WorldId, WorldId)]) -> Result<Frame, FrameError> {
        let n = names.len();
        if n == 0 || n > MAX_WORLDS {
            return Err(FrameError::Size(n));
        }
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(FrameError::DuplicateName(name.clone()));
            }
        }
        if actual >= n {
            return Err(FrameError::WorldOutOfRange(actual));
        }
        let mut succ = vec![0u64; n];
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(FrameError::WorldOutOfRange(a.max(b)));
            }
            succ[a] |= 1 << b;
        }
        Ok(Frame { names, actual, succ })
    }

    /// Like [`Frame::new`] but adds every reflexive pair.
    pub fn reflexive(names: Vec<String>, actual: WorldId, pairs: &[(WorldId, WorldId)]) -> Result<Frame, FrameError> {
        let mut frame = Frame::new(names, actual, pairs)?;
        for w in 0..frame.size() {
            frame.succ[w] |= 1 << w;
        }
        Ok(frame)
    }

    /// Frame on worlds `MA, M1, M2, ...` from successor masks; actual world 0.
    pub(crate) fn from_successors(succ: Vec<u64>) -> Frame {
        let names = default_world_names(succ.len());
        Frame { names, actual: 0, succ }
    }

    pub fn size(&self) -> usize {
        self.succ.len()
    }

    pub fn actual(&self) -> WorldId {
        self.actual
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, w: WorldId) -> &str {
        &self.names[w]
    }

    pub fn world(&self, name: &str) -> Option<WorldId> {
        self.names.iter().position(|n| n == name)
    }

    pub fn related(&self, from: WorldId, to: WorldId) -> bool {
        self.succ[from] >> to & 1 == 1
    }

    /// Worlds accessible from `w`, as a bitmask.
    pub fn successors(&self, w: WorldId) -> u64 {
        self.succ[w]
    }

    pub fn all_worlds(&self) -> u64 {
        mask_of(self.size())
    }

    /// Checks RR, RT and RA in that order.
    pub fn validate(&self) -> Result<(), ModelViolation> {
        let n = self.size();
        for w in 0..n {
            if !self.related(w, w) {
                return Err(ModelViolation::Reflexivity { world: self.names[w].clone() });
            }
        }
        for m in 0..n {
            for k in bits(self.succ[m]) {
                for f in bits(self.succ[k]) {
                    if !self.related(m, f) {
                        return Err(ModelViolation::Transitivity {
                            from: self.names[m].clone(),
                            via: self.names[k].clone(),
                            to: self.names[f].clone(),
                        });
                    }
                }
            }
        }
        for m in 0..n {
            for k in bits(self.succ[m]) {
                if k != m && self.related(k, m) {
                    return Err(ModelViolation::Antisymmetry { a: self.names[m].clone(), b: self.names[k].clone() });
                }
            }
        }
        Ok(())
    }

    /// Worlds where `¬X` holds, given the worlds where `X` holds.
    pub(crate) fn alt_neg(&self, set: u64) -> u64 {
        (0..self.size())
            .filter(|&w| self.succ[w] & set == 0)
            .fold(0, |acc, w| acc | 1 << w)
    }

    /// Is `set` closed under accessibility.
    pub fn is_up_closed(&self, set: u64) -> bool {
        bits(set).all(|w| self.succ[w] & !set == 0)
    }
}

pub(crate) fn default_world_names(n: usize) -> Vec<String> {
    (0..n).map(|i| if i == 0 { "MA".to_string() } else { format!("M{i}") }).collect()
}

/// A frame with a total valuation of finitely many atoms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    frame: Frame,
    valuation: BTreeMap<Atom, u64>,
}

impl Model {
    /// Builds a model and runs [`validate_model`] on it.
    pub fn new(frame: Frame, valuation: BTreeMap<Atom, u64>) -> Result<Model, ModelViolation> {
        let model = Model::new_unchecked(frame, valuation);
        validate_model(&model)?;
        Ok(model)
    }

    /// Builds a model without checking the frame restrictions or heredity.
    /// Bits above the frame size are dropped.
    pub fn new_unchecked(frame: Frame, mut valuation: BTreeMap<Atom, u64>) -> Model {
        let all = frame.all_worlds();
        for set in valuation.values_mut() {
            *set &= all;
        }
        Model { frame, valuation }
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn valuation(&self) -> &BTreeMap<Atom, u64> {
        &self.valuation
    }

    /// Worlds where the atom holds.
    pub fn atom_set(&self, atom: &Atom) -> Option<u64> {
        self.valuation.get(atom).copied()
    }

    pub fn value(&self, w: WorldId, atom: &Atom) -> Option<bool> {
        self.atom_set(atom).map(|s| s >> w & 1 == 1)
    }

    pub fn world(&self, name: &str) -> Option<WorldId> {
        self.frame.world(name)
    }

    /// Set of worlds at which `f` holds.
    pub fn truth_set(&self, f: &Formula) -> Result<u64, EvalError> {
        self.core_truth_set(&desugar(f))
    }

    fn core_truth_set(&self, f: &Formula) -> Result<u64, EvalError> {
        let all = self.frame.all_worlds();
        Ok(match f {
            Formula::Atom(a) => self.atom_set(a).ok_or_else(|| EvalError::UnknownAtom(a.to_string()))?,
            Formula::CNeg(g) => !self.core_truth_set(g)? & all,
            Formula::ANeg(g) => self.frame.alt_neg(self.core_truth_set(g)?),
            Formula::CBin(op, l, r) => {
                let (l, r) = (self.core_truth_set(l)?, self.core_truth_set(r)?);
                match op {
                    BinOp::And => l & r,
                    BinOp::Or => l | r,
                    BinOp::Impl => (!l | r) & all,
                    BinOp::Iff => !(l ^ r) & all,
                }
            }
            Formula::ABin(..) | Formula::Derived(..) => unreachable!("desugared"),
        })
    }

    fn check_world(&self, w: WorldId) -> Result<(), EvalError> {
        if w < self.frame.size() {
            Ok(())
        } else {
            Err(EvalError::UnknownWorld(w.to_string()))
        }
    }
}

/// Checks RR, RT, RA, then heredity of every alternate atom, reporting the
/// first violation found.
pub fn validate_model(m: &Model) -> Result<(), ModelViolation> {
    m.frame.validate()?;
    for (atom, &set) in &m.valuation {
        if atom.kind() != AtomKind::Alternate {
            continue;
        }
        for w in bits(set) {
            if let Some(to) = bits(m.frame.succ[w] & !set).next() {
                return Err(ModelViolation::Heredity {
                    atom: atom.to_string(),
                    from: m.frame.names[w].clone(),
                    to: m.frame.names[to].clone(),
                });
            }
        }
    }
    Ok(())
}

/// Truth value of `f` at world `w`.
pub fn eval(m: &Model, w: WorldId, f: &Formula) -> Result<bool, EvalError> {
    m.check_world(w)?;
    Ok(m.truth_set(f)? >> w & 1 == 1)
}

/// Evaluates `op f` at `w` through the accessibility quantifiers directly:
/// `+` all successors satisfy `f`, `⊗` some does, `−` some does not, `*`
/// not both some does and some does not.
pub fn eval_derived(m: &Model, w: WorldId, op: DerivedOp, f: &Formula) -> Result<bool, EvalError> {
    m.check_world(w)?;
    let truth = m.truth_set(f)?;
    let succ = m.frame.successors(w);
    let some_true = succ & truth != 0;
    let some_false = succ & !truth != 0;
    Ok(match op {
        DerivedOp::Plus => !some_false,
        DerivedOp::Circ => some_true,
        DerivedOp::Minus => some_false,
        DerivedOp::Star => !(some_true && some_false),
    })
}

/// Whether truth of `f` is preserved along every accessible pair.
pub fn is_persistent(m: &Model, f: &Formula) -> Result<bool, EvalError> {
    let truth = m.truth_set(f)?;
    Ok(m.frame.is_up_closed(truth))
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::model_io::to_json_string(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn names(ns: &[&str]) -> Vec<String> {
        ns.iter().map(|s| s.to_string()).collect()
    }

    fn val(pairs: &[(&str, u64)]) -> BTreeMap<Atom, u64> {
        pairs.iter().map(|(a, s)| (Atom::from_display(a).unwrap(), *s)).collect()
    }

    /// MA -> M1, x false at MA and true at M1.
    fn paradox_model() -> Model {
        let frame = Frame::reflexive(names(&["MA", "M1"]), 0, &[(0, 1)]).unwrap();
        Model::new(frame, val(&[("x", 0b10)])).unwrap()
    }

    /// MA -> M1, MA -> M2; x false at M1, true at M2. `extra` adds M2 -> M1.
    fn fork_model(extra: bool) -> Model {
        let mut pairs = vec![(0, 1), (0, 2)];
        if extra {
            pairs.push((2, 1));
        }
        let frame = Frame::reflexive(names(&["MA", "M1", "M2"]), 0, &pairs).unwrap();
        Model::new(frame, val(&[("x", 0b100)])).unwrap()
    }

    #[test]
    fn single_world_any_valuation_is_ok() {
        let frame = Frame::reflexive(names(&["w"]), 0, &[]).unwrap();
        for s in 0..2 {
            assert!(Model::new(frame.clone(), val(&[("a", s), ("_b", s)])).is_ok());
        }
    }

    #[test]
    fn symmetric_pair_violates_antisymmetry() {
        let frame = Frame::reflexive(names(&["M", "N"]), 0, &[(0, 1), (1, 0)]).unwrap();
        let err = Model::new(frame, BTreeMap::new()).unwrap_err();
        assert_eq!(err, ModelViolation::Antisymmetry { a: "M".into(), b: "N".into() });
        assert_eq!(err.restriction(), "RA");
    }

    #[test]
    fn heredity_violation_on_chain() {
        let frame = Frame::reflexive(names(&["MA", "M1"]), 0, &[(0, 1)]).unwrap();
        let err = Model::new(frame, val(&[("_a", 0b01)])).unwrap_err();
        assert_eq!(err, ModelViolation::Heredity { atom: "_a".into(), from: "MA".into(), to: "M1".into() });
    }

    #[test]
    fn scan_order_is_rr_rt_ra() {
        let frame = Frame::new(names(&["a", "b"]), 0, &[(0, 1), (1, 0)]).unwrap();
        assert_eq!(frame.validate().unwrap_err().restriction(), "RR");
        let frame = Frame::reflexive(names(&["a", "b", "c"]), 0, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(frame.validate().unwrap_err().restriction(), "RT");
    }

    #[test]
    fn paradox_model_satisfies_liar() {
        let m = paradox_model();
        assert!(eval(&m, 0, &p("x <=> !x")).unwrap());
        assert!(!eval(&m, 0, &p("!x")).unwrap());
        assert!(!eval(&m, 0, &p("+x")).unwrap());
        assert!(!eval(&m, 0, &p("x")).unwrap());
    }

    #[test]
    fn fork_refutes_plus_negation() {
        let m = fork_model(false);
        assert!(!eval(&m, 0, &p("~+x => !+x")).unwrap());
        assert!(eval(&m, 2, &p("+x")).unwrap());
        assert!(!eval_derived(&m, 0, DerivedOp::Star, &p("x")).unwrap());
    }

    #[test]
    fn chain_values() {
        let m = fork_model(true);
        assert!(!eval_derived(&m, 0, DerivedOp::Plus, &p("x")).unwrap());
        assert!(eval(&m, 0, &p("!+x")).unwrap());
        assert!(!eval(&m, 0, &p("!+x => !x")).unwrap());
    }

    #[test]
    fn plus_on_single_reflexive_world() {
        let frame = Frame::reflexive(names(&["w"]), 0, &[]).unwrap();
        let m = Model::new(frame, val(&[("x", 1)])).unwrap();
        assert!(eval(&m, 0, &p("+x")).unwrap());
    }

    #[test]
    fn circ_sees_an_accessible_witness() {
        let m = paradox_model();
        assert!(eval_derived(&m, 0, DerivedOp::Circ, &p("x")).unwrap());
        assert!(eval(&m, 0, &p("?x")).unwrap());
    }

    #[test]
    fn persistence_examples() {
        let m = paradox_model();
        // x only ever turns from false to true along MA -> M1
        assert!(is_persistent(&m, &p("x")).unwrap());
        assert!(!is_persistent(&m, &p("~x")).unwrap());
        assert!(is_persistent(&m, &p("+x")).unwrap());
        assert!(is_persistent(&m, &p("!x")).unwrap());
    }

    #[test]
    fn errors_on_unknown_world_and_atom() {
        let m = paradox_model();
        assert_eq!(eval(&m, 5, &p("x")), Err(EvalError::UnknownWorld("5".into())));
        assert_eq!(eval(&m, 0, &p("y")), Err(EvalError::UnknownAtom("y".into())));
    }
}
