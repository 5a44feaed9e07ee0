//! Bounded validity by exhaustive countermodel search over finite posets,
//! plus the classical and intuitionistic fragment oracles.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use thiserror::Error;

use crate::formula::{desugar, fragment_of, Atom, BinOp, Formula};
use crate::kripke::{bits, mask_of, EvalError, Frame, Model, WorldId};

/// Largest frame size [`enumerate_posets`] will produce.
pub const POSET_CAP: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ValidityError {
    #[error("poset enumeration is capped at {cap} worlds, asked for {asked}")]
    CapExceeded { asked: usize, cap: usize },
    #[error("frame size must be at least 1")]
    Empty,
    #[error("formula {0} is not in the classical fragment")]
    NotClassical(String),
    #[error("formula {0} is not in the intuitionistic fragment")]
    NotIntuitionistic(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Every reflexive, transitive, antisymmetric relation on `n` labeled
/// worlds, once each, ordered by the off-diagonal relation bitmask (row
/// major, `(0,1)` is the least significant bit). The actual world is 0.
pub fn enumerate_posets(n: usize) -> Result<Vec<Frame>, ValidityError> {
    if n == 0 {
        return Err(ValidityError::Empty);
    }
    if n > POSET_CAP {
        return Err(ValidityError::CapExceeded { asked: n, cap: POSET_CAP });
    }
    let cells: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect();
    let mut frames = Vec::new();
    for code in 0u64..1 << cells.len() {
        let mut succ: Vec<u64> = (0..n).map(|w| 1 << w).collect();
        for (i, &(a, b)) in cells.iter().enumerate() {
            if code >> i & 1 == 1 {
                succ[a] |= 1 << b;
            }
        }
        let transitive = (0..n).all(|a| bits(succ[a]).all(|b| succ[b] & !succ[a] == 0));
        let antisymmetric = (0..n).all(|a| bits(succ[a] & !(1 << a)).all(|b| succ[b] >> a & 1 == 0));
        if transitive && antisymmetric {
            frames.push(Frame::from_successors(succ));
        }
    }
    Ok(frames)
}

/// Up-closed world sets of a frame, ascending as bitmasks.
pub fn up_sets(frame: &Frame) -> Vec<u64> {
    (0..=frame.all_worlds()).filter(|&s| frame.is_up_closed(s)).collect()
}

/// Search limits for [`decide_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_worlds: usize,
    /// Largest number of distinct atoms of each kind the search accepts.
    pub max_atoms: Option<usize>,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_worlds: 3, max_atoms: Some(2) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// No countermodel with at most `bound` worlds.
    Valid { bound: usize },
    /// The first countermodel in enumeration order.
    CounterModel { bound: usize, model: Model },
    /// The search stopped at a resource cap; frames up to `bound` worlds
    /// were searched without finding a countermodel.
    Unknown { bound: usize },
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid { .. })
    }

    pub fn countermodel(&self) -> Option<&Model> {
        match self {
            Verdict::CounterModel { model, .. } => Some(model),
            _ => None,
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Verdict::Valid { .. } => "Valid",
            Verdict::CounterModel { .. } => "CounterModel",
            Verdict::Unknown { .. } => "Unknown",
        }
    }

    pub fn bound(&self) -> usize {
        match self {
            Verdict::Valid { bound } | Verdict::CounterModel { bound, .. } | Verdict::Unknown { bound } => *bound,
        }
    }
}

/// Bounded validity with no atom cap.
pub fn decide(f: &Formula, max_worlds: usize) -> Verdict {
    decide_with(f, &Limits { max_worlds, max_atoms: None })
}

pub fn decide_with(f: &Formula, limits: &Limits) -> Verdict {
    let atoms = search_atoms(f);
    if let Some(cap) = limits.max_atoms {
        let alternates = atoms.iter().filter(|a| a.is_alternate()).count();
        if alternates > cap || atoms.len() - alternates > cap {
            return Verdict::Unknown { bound: 0 };
        }
    }
    let program = Program::compile(&desugar(f), &atoms);
    let top = limits.max_worlds.min(POSET_CAP);
    for n in 1..=top {
        let frames = enumerate_posets(n).expect("within cap");
        let hit = frames
            .par_iter()
            .find_map_first(|frame| first_failure(&program, frame));
        if let Some((frame, valuation)) = hit {
            let valuation = atoms.iter().cloned().zip(valuation).collect();
            let model = Model::new(frame, valuation).expect("generated models satisfy the restrictions");
            return Verdict::CounterModel { bound: limits.max_worlds, model };
        }
    }
    if limits.max_worlds > top {
        Verdict::Unknown { bound: top }
    } else {
        Verdict::Valid { bound: limits.max_worlds }
    }
}

/// Atoms in odometer order: classical by name, then alternate by name.
fn search_atoms(f: &Formula) -> Vec<Atom> {
    let mut atoms: Vec<Atom> = f.atoms().into_iter().collect();
    atoms.sort_by(|a, b| (a.is_alternate(), a.name()).cmp(&(b.is_alternate(), b.name())));
    atoms
}

fn first_failure(program: &Program, frame: &Frame) -> Option<(Frame, Vec<u64>)> {
    let neg = neg_table(frame);
    let choices: Vec<Vec<u64>> = program
        .atom_kinds
        .iter()
        .map(|&alt| if alt { up_sets(frame) } else { (0..=frame.all_worlds()).collect() })
        .collect();
    let mut digits = vec![0usize; choices.len()];
    let mut regs = Vec::with_capacity(program.ops.len());
    loop {
        let valuation: Vec<u64> = digits.iter().zip(&choices).map(|(&d, c)| c[d]).collect();
        if program.run(&valuation, &neg, frame.all_worlds(), &mut regs) & 1 == 0 {
            return Some((frame.clone(), valuation));
        }
        // Last atom varies fastest.
        let mut i = digits.len();
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < choices[i].len() {
                break;
            }
            digits[i] = 0;
        }
    }
}

/// `neg[s]` is the set where `¬X` holds when `X` holds on `s`.
fn neg_table(frame: &Frame) -> Vec<u64> {
    (0..=frame.all_worlds()).map(|s| frame.alt_neg(s)).collect()
}

#[derive(Clone, Copy, Debug)]
enum Op {
    Atom(usize),
    CNeg,
    ANeg,
    Bin(BinOp),
}

/// Postfix form of a core formula over world bitmasks.
struct Program {
    ops: Vec<Op>,
    atom_kinds: Vec<bool>,
}

impl Program {
    fn compile(core: &Formula, atoms: &[Atom]) -> Program {
        let mut ops = Vec::new();
        emit(core, atoms, &mut ops);
        Program { ops, atom_kinds: atoms.iter().map(|a| a.is_alternate()).collect() }
    }

    fn run(&self, valuation: &[u64], neg: &[u64], all: u64, stack: &mut Vec<u64>) -> u64 {
        stack.clear();
        for op in &self.ops {
            match *op {
                Op::Atom(i) => stack.push(valuation[i]),
                Op::CNeg => {
                    let x = stack.pop().unwrap();
                    stack.push(!x & all);
                }
                Op::ANeg => {
                    let x = stack.pop().unwrap();
                    stack.push(neg[x as usize]);
                }
                Op::Bin(op) => {
                    let r = stack.pop().unwrap();
                    let l = stack.pop().unwrap();
                    stack.push(match op {
                        BinOp::And => l & r,
                        BinOp::Or => l | r,
                        BinOp::Impl => (!l | r) & all,
                        BinOp::Iff => !(l ^ r) & all,
                    });
                }
            }
        }
        stack.pop().unwrap()
    }
}

fn emit(f: &Formula, atoms: &[Atom], ops: &mut Vec<Op>) {
    match f {
        Formula::Atom(a) => ops.push(Op::Atom(atoms.iter().position(|b| b == a).expect("atom listed"))),
        Formula::CNeg(g) => {
            emit(g, atoms, ops);
            ops.push(Op::CNeg);
        }
        Formula::ANeg(g) => {
            emit(g, atoms, ops);
            ops.push(Op::ANeg);
        }
        Formula::CBin(op, l, r) => {
            emit(l, atoms, ops);
            emit(r, atoms, ops);
            ops.push(Op::Bin(*op));
        }
        Formula::ABin(..) | Formula::Derived(..) => unreachable!("desugared"),
    }
}

/// Every model over `atoms` with at most `max_worlds` worlds, in the search
/// order used by [`decide`].
pub fn enumerate_models(atoms: &BTreeSet<Atom>, max_worlds: usize) -> Result<Vec<Model>, ValidityError> {
    let mut atoms: Vec<Atom> = atoms.iter().cloned().collect();
    atoms.sort_by(|a, b| (a.is_alternate(), a.name()).cmp(&(b.is_alternate(), b.name())));
    let mut out = Vec::new();
    for n in 1..=max_worlds {
        for frame in enumerate_posets(n)? {
            let choices: Vec<Vec<u64>> = atoms
                .iter()
                .map(|a| if a.is_alternate() { up_sets(&frame) } else { (0..=frame.all_worlds()).collect() })
                .collect();
            let mut digits = vec![0usize; atoms.len()];
            'models: loop {
                let valuation: BTreeMap<Atom, u64> =
                    atoms.iter().cloned().zip(digits.iter().zip(&choices).map(|(&d, c)| c[d])).collect();
                out.push(Model::new_unchecked(frame.clone(), valuation));
                let mut i = digits.len();
                loop {
                    if i == 0 {
                        break 'models;
                    }
                    i -= 1;
                    digits[i] += 1;
                    if digits[i] < choices[i].len() {
                        break;
                    }
                    digits[i] = 0;
                }
            }
        }
    }
    Ok(out)
}

/// Truth-table tautology check for a formula of the classical fragment.
pub fn classical_oracle(f: &Formula) -> Result<bool, ValidityError> {
    if !fragment_of(f).in_fc {
        return Err(ValidityError::NotClassical(f.to_string()));
    }
    let atoms: Vec<Atom> = f.atoms().into_iter().collect();
    let rows = 1u64 << atoms.len();
    Ok((0..rows).all(|row| {
        let assignment: BTreeMap<&Atom, bool> =
            atoms.iter().enumerate().map(|(i, a)| (a, row >> i & 1 == 1)).collect();
        truth_table(f, &assignment)
    }))
}

fn truth_table(f: &Formula, v: &BTreeMap<&Atom, bool>) -> bool {
    match f {
        Formula::Atom(a) => v[a],
        Formula::CNeg(g) => !truth_table(g, v),
        Formula::CBin(op, l, r) => {
            let (l, r) = (truth_table(l, v), truth_table(r, v));
            match op {
                BinOp::Impl => !l || r,
                BinOp::Or => l || r,
                BinOp::And => l && r,
                BinOp::Iff => l == r,
            }
        }
        _ => unreachable!("checked classical"),
    }
}

/// Standard intuitionistic Kripke evaluation of a formula of the
/// intuitionistic fragment, one world at a time.
pub fn intuitionistic_eval(m: &Model, w: WorldId, f: &Formula) -> Result<bool, ValidityError> {
    if !fragment_of(f).in_fi {
        return Err(ValidityError::NotIntuitionistic(f.to_string()));
    }
    if w >= m.frame().size() {
        return Err(EvalError::UnknownWorld(w.to_string()).into());
    }
    int_eval(m, w, f)
}

fn int_eval(m: &Model, w: WorldId, f: &Formula) -> Result<bool, ValidityError> {
    let later = |w: WorldId| bits(m.frame().successors(w) & mask_of(m.frame().size()));
    Ok(match f {
        Formula::Atom(a) => m.value(w, a).ok_or_else(|| EvalError::UnknownAtom(a.to_string()))?,
        Formula::ANeg(g) => {
            for n in later(w) {
                if int_eval(m, n, g)? {
                    return Ok(false);
                }
            }
            true
        }
        Formula::ABin(op, l, r) => match op {
            BinOp::And => int_eval(m, w, l)? && int_eval(m, w, r)?,
            BinOp::Or => int_eval(m, w, l)? || int_eval(m, w, r)?,
            BinOp::Impl => int_implies(m, w, l, r)?,
            BinOp::Iff => int_implies(m, w, l, r)? && int_implies(m, w, r, l)?,
        },
        _ => unreachable!("checked intuitionistic"),
    })
}

fn int_implies(m: &Model, w: WorldId, l: &Formula, r: &Formula) -> Result<bool, ValidityError> {
    for n in bits(m.frame().successors(w)) {
        if int_eval(m, n, l)? && !int_eval(m, n, r)? {
            return Ok(false);
        }
    }
    Ok(true)
}
