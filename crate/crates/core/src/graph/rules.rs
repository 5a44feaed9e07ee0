//! Transformation rules on Gamma-LD graphs.
//!
//! A step names its object in one of three ways:
//! - `sel` present: `addr` is an area address and `sel` lists child indices
//!   in that area;
//! - `sel` absent, `addr` nonempty: the single node at `addr`;
//! - `sel` absent, `addr` empty: every node on the sheet.
//!
//! Rules that insert into an area (`E`, `DCCλ`, `DCMλ`) read `addr` as an
//! area address. `IC`, `IF`, `DC` and `DF` also take a `target` area, which
//! must lie strictly inside the source area and outside the selected nodes.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::{graph_truth_set, Address, CutKind, Graph, GraphError, Node, Parity};
use crate::validity::{enumerate_models, ValidityError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    In,
    Out,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RuleId {
    Lambda,
    Erase,
    Write,
    Dcc(Direction),
    CutChange,
    Dcmgev(Direction),
    Dcmf,
    Iterate,
    Deiterate,
    IterateClassical,
    DeiterateClassical,
    IterateStrong,
    DeiterateStrong,
    // derived
    DccLambda,
    Dcm,
    DcmLambda,
    Cce,
    Dcmf1(Direction),
    Tcm(Direction),
    Dcaf,
    Tca,
    Tcaf,
    Tcaf1(Direction),
    Cca(Direction),
}

impl RuleId {
    pub const PRIMITIVE: [RuleId; 15] = [
        RuleId::Lambda,
        RuleId::Erase,
        RuleId::Write,
        RuleId::Dcc(Direction::In),
        RuleId::Dcc(Direction::Out),
        RuleId::CutChange,
        RuleId::Dcmgev(Direction::In),
        RuleId::Dcmgev(Direction::Out),
        RuleId::Dcmf,
        RuleId::Iterate,
        RuleId::Deiterate,
        RuleId::IterateClassical,
        RuleId::DeiterateClassical,
        RuleId::IterateStrong,
        RuleId::DeiterateStrong,
    ];

    pub const DERIVED: [RuleId; 15] = [
        RuleId::DccLambda,
        RuleId::Dcm,
        RuleId::DcmLambda,
        RuleId::Cce,
        RuleId::Dcmf1(Direction::In),
        RuleId::Dcmf1(Direction::Out),
        RuleId::Tcm(Direction::In),
        RuleId::Tcm(Direction::Out),
        RuleId::Dcaf,
        RuleId::Tca,
        RuleId::Tcaf,
        RuleId::Tcaf1(Direction::In),
        RuleId::Tcaf1(Direction::Out),
        RuleId::Cca(Direction::In),
        RuleId::Cca(Direction::Out),
    ];

    pub fn is_primitive(self) -> bool {
        Self::PRIMITIVE.contains(&self)
    }

    /// Rules whose `addr` is an area address rather than a node selection.
    pub fn inserts_into_area(self) -> bool {
        matches!(self, RuleId::Write | RuleId::DccLambda | RuleId::DcmLambda)
    }

    pub fn name(self) -> String {
        let dir = |base: &str, d: Direction| match d {
            Direction::In => format!("{base}-in"),
            Direction::Out => format!("{base}-out"),
        };
        match self {
            RuleId::Lambda => "Rλ".into(),
            RuleId::Erase => "B".into(),
            RuleId::Write => "E".into(),
            RuleId::Dcc(d) => dir("DCC", d),
            RuleId::CutChange => "CC".into(),
            RuleId::Dcmgev(d) => dir("DCMGEV", d),
            RuleId::Dcmf => "DCMF".into(),
            RuleId::Iterate => "I".into(),
            RuleId::Deiterate => "D".into(),
            RuleId::IterateClassical => "IC".into(),
            RuleId::DeiterateClassical => "DC".into(),
            RuleId::IterateStrong => "IF".into(),
            RuleId::DeiterateStrong => "DF".into(),
            RuleId::DccLambda => "DCCλ".into(),
            RuleId::Dcm => "DCM".into(),
            RuleId::DcmLambda => "DCMλ".into(),
            RuleId::Cce => "CCE".into(),
            RuleId::Dcmf1(d) => dir("DCMF.1", d),
            RuleId::Tcm(d) => dir("TCM", d),
            RuleId::Dcaf => "DCAF".into(),
            RuleId::Tca => "TCA".into(),
            RuleId::Tcaf => "TCAF".into(),
            RuleId::Tcaf1(d) => dir("TCAF.1", d),
            RuleId::Cca(d) => dir("CCA", d),
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("unknown rule {0:?}")]
pub struct UnknownRule(pub String);

/// Accepts the printed names, `lambda` for `λ`, and bare names of two-way
/// rules, which mean the `-out` direction.
impl FromStr for RuleId {
    type Err = UnknownRule;

    fn from_str(s: &str) -> Result<RuleId, UnknownRule> {
        let text = s.trim().replace("lambda", "λ");
        let (base, dir) = if let Some(b) = text.strip_suffix("-in") {
            (b, Some(Direction::In))
        } else if let Some(b) = text.strip_suffix("-out") {
            (b, Some(Direction::Out))
        } else {
            (text.as_str(), None)
        };
        let d = dir.unwrap_or(Direction::Out);
        let one_way = |r: RuleId| if dir.is_none() { Ok(r) } else { Err(UnknownRule(s.to_string())) };
        match base {
            "Rλ" => one_way(RuleId::Lambda),
            "B" => one_way(RuleId::Erase),
            "E" => one_way(RuleId::Write),
            "DCC" => Ok(RuleId::Dcc(d)),
            "CC" => one_way(RuleId::CutChange),
            "DCMGEV" => Ok(RuleId::Dcmgev(d)),
            "DCMF" => one_way(RuleId::Dcmf),
            "I" => one_way(RuleId::Iterate),
            "D" => one_way(RuleId::Deiterate),
            "IC" => one_way(RuleId::IterateClassical),
            "DC" => one_way(RuleId::DeiterateClassical),
            "IF" => one_way(RuleId::IterateStrong),
            "DF" => one_way(RuleId::DeiterateStrong),
            "DCCλ" => one_way(RuleId::DccLambda),
            "DCM" => one_way(RuleId::Dcm),
            "DCMλ" => one_way(RuleId::DcmLambda),
            "CCE" => one_way(RuleId::Cce),
            "DCMF.1" => Ok(RuleId::Dcmf1(d)),
            "TCM" => Ok(RuleId::Tcm(d)),
            "DCAF" => one_way(RuleId::Dcaf),
            "TCA" => one_way(RuleId::Tca),
            "TCAF" => one_way(RuleId::Tcaf),
            "TCAF.1" => Ok(RuleId::Tcaf1(d)),
            "CCA" => Ok(RuleId::Cca(d)),
            _ => Err(UnknownRule(s.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScriptStep {
    pub rule: RuleId,
    pub addr: Address,
    pub sel: Option<Vec<usize>>,
    pub payload: Option<Graph>,
    pub target: Option<Address>,
    pub witness: Option<Box<Script>>,
}

impl ScriptStep {
    pub fn new(rule: RuleId, addr: Address) -> ScriptStep {
        ScriptStep { rule, addr, sel: None, payload: None, target: None, witness: None }
    }

    pub fn with_sel(mut self, sel: Vec<usize>) -> ScriptStep {
        self.sel = Some(sel);
        self
    }

    pub fn with_payload(mut self, payload: Graph) -> ScriptStep {
        self.payload = Some(payload);
        self
    }

    pub fn with_target(mut self, target: Address) -> ScriptStep {
        self.target = Some(target);
        self
    }

    pub fn with_witness(mut self, witness: Script) -> ScriptStep {
        self.witness = Some(Box::new(witness));
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Script {
    pub start: Graph,
    pub steps: Vec<ScriptStep>,
}

impl Script {
    pub fn new(start: Graph, steps: Vec<ScriptStep>) -> Script {
        Script { start, steps }
    }

    pub fn from_lambda(steps: Vec<ScriptStep>) -> Script {
        Script { start: Graph::empty(), steps }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error(transparent)]
    Address(#[from] GraphError),
    #[error("selection {0:?} repeats or exceeds the area")]
    Selection(Vec<usize>),
    #[error("{rule} needs an {required} region, found {found}")]
    Parity { rule: RuleId, required: Parity, found: Parity },
    #[error("{rule}: {reason}")]
    Region { rule: RuleId, reason: String },
    #[error("{rule}: {graph:?} is not an alternate graph")]
    NotAlternate { rule: RuleId, graph: String },
    #[error("{rule}: {reason}")]
    Shape { rule: RuleId, reason: String },
    #[error("{rule}: {reason}")]
    Payload { rule: RuleId, reason: String },
    #[error("GEV witness: {reason}")]
    Witness { reason: String },
}

/// First failing step of a script, 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("step {step} ({rule} at {addr:?}): {error}")]
pub struct ScriptFailure {
    pub step: usize,
    pub rule: RuleId,
    pub addr: Address,
    pub error: RuleError,
}

struct Selection {
    area: Address,
    idx: Vec<usize>,
}

impl Selection {
    fn graph(&self, g: &Graph) -> Graph {
        let area = g.area(&self.area).expect("resolved");
        Graph::new(self.idx.iter().map(|&i| area.nodes[i].clone()).collect())
    }

    fn parity(&self, g: &Graph) -> Parity {
        g.area_info(&self.area).expect("resolved").parity
    }

    fn first(&self, g: &Graph) -> usize {
        self.idx.first().copied().unwrap_or_else(|| g.area(&self.area).expect("resolved").nodes.len())
    }
}

fn resolve(g: &Graph, step: &ScriptStep) -> Result<Selection, RuleError> {
    match &step.sel {
        Some(sel) => {
            let area = g.area(&step.addr)?;
            let idx: BTreeSet<usize> = sel.iter().copied().collect();
            if idx.len() != sel.len() || idx.iter().any(|&i| i >= area.nodes.len()) {
                return Err(RuleError::Selection(sel.clone()));
            }
            Ok(Selection { area: step.addr.clone(), idx: idx.into_iter().collect() })
        }
        None => match step.addr.split_last() {
            None => Ok(Selection { area: Vec::new(), idx: (0..g.nodes.len()).collect() }),
            Some((&last, prefix)) => {
                g.node(&step.addr)?;
                Ok(Selection { area: prefix.to_vec(), idx: vec![last] })
            }
        },
    }
}

fn single<'g>(g: &'g Graph, sel: &Selection, rule: RuleId) -> Result<&'g Node, RuleError> {
    match sel.idx.as_slice() {
        [i] => Ok(&g.area(&sel.area).expect("resolved").nodes[*i]),
        _ => Err(RuleError::Shape { rule, reason: "needs exactly one selected node".into() }),
    }
}

fn need_parity(rule: RuleId, required: Parity, found: Parity) -> Result<(), RuleError> {
    if required == found {
        Ok(())
    } else {
        Err(RuleError::Parity { rule, required, found })
    }
}

fn shape(rule: RuleId, reason: &str) -> RuleError {
    RuleError::Shape { rule, reason: reason.to_string() }
}

/// `[(X)]` gives `X`.
fn mixed_double_cut(n: &Node) -> Option<&Graph> {
    match n {
        Node::Cut(CutKind::Paracomplete, outer) => match outer.nodes.as_slice() {
            [Node::Cut(CutKind::Classical, inner)] => Some(inner),
            _ => None,
        },
        _ => None,
    }
}

fn wrap(kind_outer: CutKind, kind_inner: CutKind, g: Graph) -> Node {
    Node::Cut(kind_outer, Graph::single(Node::Cut(kind_inner, g)))
}

/// Replaces the selected nodes by `with`, placed where the first one was.
fn replace_selection(g: &Graph, sel: &Selection, with: Vec<Node>) -> Graph {
    let at = sel.first(g);
    let mut out = g.clone();
    let area = out.area_mut(&sel.area).expect("resolved");
    let mut kept = Vec::with_capacity(area.nodes.len());
    let mut insert_at = None;
    for (i, n) in std::mem::take(&mut area.nodes).into_iter().enumerate() {
        if i == at {
            insert_at = Some(kept.len());
        }
        if !sel.idx.contains(&i) {
            kept.push(n);
        }
    }
    let pos = insert_at.unwrap_or(kept.len());
    kept.splice(pos..pos, with);
    area.nodes = kept;
    out
}

/// Indices in `area` of a copy of `x`, avoiding `exclude`.
fn find_copy(area: &Graph, x: &Graph, exclude: &[usize]) -> Option<Vec<usize>> {
    let mut used: Vec<usize> = Vec::with_capacity(x.nodes.len());
    for want in &x.nodes {
        let hit = (0..area.nodes.len())
            .find(|i| !exclude.contains(i) && !used.contains(i) && area.nodes[*i] == *want)?;
        used.push(hit);
    }
    Some(used)
}

/// Checks the iteration path from the selection's area into `target`.
fn iteration_target(g: &Graph, sel: &Selection, step: &ScriptStep) -> Result<Address, RuleError> {
    let rule = step.rule;
    let target = step.target.clone().ok_or_else(|| shape(rule, "needs a target area"))?;
    let kinds = g.cuts_on_path(&target)?;
    if target.len() <= sel.area.len() || target[..sel.area.len()] != sel.area[..] {
        return Err(shape(rule, "target must lie strictly inside the source area"));
    }
    if sel.idx.contains(&target[sel.area.len()]) {
        return Err(shape(rule, "target lies inside the iterated graph"));
    }
    let classical_only = matches!(rule, RuleId::IterateClassical | RuleId::DeiterateClassical);
    if classical_only && kinds[sel.area.len()..].contains(&CutKind::Paracomplete) {
        return Err(RuleError::Region { rule, reason: "the path crosses a paracomplete cut".into() });
    }
    Ok(target)
}

fn check_payload(rule: RuleId, payload: &Option<Graph>, x: &Graph) -> Result<(), RuleError> {
    match payload {
        Some(p) if p != x => Err(RuleError::Payload { rule, reason: format!("payload {p} differs from selection {x}") }),
        _ => Ok(()),
    }
}

fn need_alternate(rule: RuleId, x: &Graph) -> Result<(), RuleError> {
    if super::is_alternate_graph(x) {
        Ok(())
    } else {
        Err(RuleError::NotAlternate { rule, graph: x.to_string() })
    }
}

fn check_witness(step: &ScriptStep, x: &Graph) -> Result<(), RuleError> {
    let w = step.witness.as_ref().ok_or_else(|| RuleError::Witness { reason: "missing".into() })?;
    if !w.start.is_empty() {
        return Err(RuleError::Witness { reason: "does not start from λ".into() });
    }
    let last = check_script(w).map_err(|e| RuleError::Witness { reason: e.to_string() })?;
    if &last != x {
        return Err(RuleError::Witness { reason: format!("derives {last}, not {x}") });
    }
    Ok(())
}

fn apply_primitive(g: &Graph, step: &ScriptStep) -> Result<Graph, RuleError> {
    let rule = step.rule;
    if rule == RuleId::Write {
        if step.sel.is_some() {
            return Err(shape(rule, "writes into an area; drop the selection"));
        }
        let info = g.area_info(&step.addr)?;
        need_parity(rule, Parity::Odd, info.parity)?;
        let payload = step.payload.as_ref().ok_or_else(|| RuleError::Payload { rule, reason: "missing".into() })?;
        let mut out = g.clone();
        out.area_mut(&step.addr)?.nodes.extend(payload.nodes.iter().cloned());
        return Ok(out);
    }
    if rule == RuleId::Lambda {
        return if g.is_empty() { Ok(Graph::empty()) } else { Err(shape(rule, "the sheet is not empty")) };
    }

    let sel = resolve(g, step)?;
    let parity = sel.parity(g);
    let x = sel.graph(g);
    match rule {
        RuleId::Erase => {
            need_parity(rule, Parity::Even, parity)?;
            Ok(replace_selection(g, &sel, Vec::new()))
        }
        RuleId::Dcc(Direction::In) => {
            Ok(replace_selection(g, &sel, vec![wrap(CutKind::Classical, CutKind::Classical, x)]))
        }
        RuleId::Dcc(Direction::Out) => match single(g, &sel, rule)? {
            Node::Cut(CutKind::Classical, outer) => match outer.nodes.as_slice() {
                [Node::Cut(CutKind::Classical, inner)] => Ok(replace_selection(g, &sel, inner.nodes.clone())),
                _ => Err(shape(rule, "not a double classical cut")),
            },
            _ => Err(shape(rule, "not a double classical cut")),
        },
        RuleId::CutChange => {
            let (from, to) = match parity {
                Parity::Even => (CutKind::Paracomplete, CutKind::Classical),
                Parity::Odd => (CutKind::Classical, CutKind::Paracomplete),
            };
            match single(g, &sel, rule)? {
                Node::Cut(k, inner) if *k == from => Ok(replace_selection(g, &sel, vec![Node::Cut(to, inner.clone())])),
                _ => Err(shape(
                    rule,
                    match parity {
                        Parity::Even => "in an even region only [X] changes, to (X)",
                        Parity::Odd => "in an odd region only (X) changes, to [X]",
                    },
                )),
            }
        }
        RuleId::Dcmgev(Direction::In) => {
            check_witness(step, &x)?;
            Ok(replace_selection(g, &sel, vec![wrap(CutKind::Paracomplete, CutKind::Classical, x)]))
        }
        RuleId::Dcmgev(Direction::Out) => {
            let inner = mixed_double_cut(single(g, &sel, rule)?).ok_or_else(|| shape(rule, "not of the form [(X)]"))?;
            check_witness(step, inner)?;
            Ok(replace_selection(g, &sel, inner.nodes.clone()))
        }
        RuleId::Dcmf => {
            let n = single(g, &sel, rule)?;
            match parity {
                Parity::Even => {
                    need_alternate(rule, &x)?;
                    Ok(replace_selection(g, &sel, vec![wrap(CutKind::Paracomplete, CutKind::Classical, x)]))
                }
                Parity::Odd => {
                    let inner = mixed_double_cut(n).ok_or_else(|| shape(rule, "not of the form [(X)]"))?;
                    need_alternate(rule, inner)?;
                    Ok(replace_selection(g, &sel, inner.nodes.clone()))
                }
            }
        }
        RuleId::Iterate => {
            check_payload(rule, &step.payload, &x)?;
            let mut out = g.clone();
            let area = out.area_mut(&sel.area)?;
            let after = sel.idx.last().map_or(area.nodes.len(), |i| i + 1);
            area.nodes.splice(after..after, x.nodes);
            Ok(out)
        }
        RuleId::Deiterate => {
            let area = g.area(&sel.area)?;
            find_copy(area, &x, &sel.idx).ok_or_else(|| shape(rule, "no other copy in the same area"))?;
            Ok(replace_selection(g, &sel, Vec::new()))
        }
        RuleId::IterateClassical | RuleId::IterateStrong => {
            if rule == RuleId::IterateStrong {
                need_alternate(rule, &x)?;
            }
            check_payload(rule, &step.payload, &x)?;
            let target = iteration_target(g, &sel, step)?;
            let mut out = g.clone();
            out.area_mut(&target)?.nodes.extend(x.nodes);
            Ok(out)
        }
        RuleId::DeiterateClassical | RuleId::DeiterateStrong => {
            if rule == RuleId::DeiterateStrong {
                need_alternate(rule, &x)?;
            }
            let target = iteration_target(g, &sel, step)?;
            let copy = find_copy(g.area(&target)?, &x, &[]).ok_or_else(|| shape(rule, "target holds no copy"))?;
            let mut out = g.clone();
            let area = out.area_mut(&target)?;
            area.nodes = std::mem::take(&mut area.nodes)
                .into_iter()
                .enumerate()
                .filter(|(i, _)| !copy.contains(i))
                .map(|(_, n)| n)
                .collect();
            Ok(out)
        }
        _ => unreachable!("derived rules are expanded first"),
    }
}

/// Applies one step. Derived rules run through their expansion.
pub fn apply_rule(g: &Graph, step: &ScriptStep) -> Result<Graph, RuleError> {
    if step.rule.is_primitive() {
        return apply_primitive(g, step);
    }
    let mut cur = g.clone();
    for s in expand_derived(g, step)? {
        cur = apply_primitive(&cur, &s)?;
    }
    Ok(cur)
}

/// Replays a script and returns its final graph.
pub fn check_script(s: &Script) -> Result<Graph, ScriptFailure> {
    s.steps.iter().enumerate().try_fold(s.start.clone(), |g, (i, step)| {
        apply_rule(&g, step).map_err(|error| ScriptFailure {
            step: i + 1,
            rule: step.rule,
            addr: step.addr.clone(),
            error,
        })
    })
}

fn node_step(rule: RuleId, addr: &[usize]) -> ScriptStep {
    ScriptStep::new(rule, addr.to_vec())
}

fn child(addr: &[usize], i: usize) -> Address {
    let mut a = addr.to_vec();
    a.push(i);
    a
}

/// One level of a derived rule in terms of other rules. Every emitted step
/// keeps the rewritten node at the same address.
fn expand_once(g: &Graph, step: &ScriptStep) -> Result<Vec<ScriptStep>, RuleError> {
    let rule = step.rule;
    match rule {
        RuleId::DccLambda => {
            g.area(&step.addr)?;
            return Ok(vec![ScriptStep::new(RuleId::Dcc(Direction::In), step.addr.clone()).with_sel(vec![])]);
        }
        RuleId::DcmLambda => {
            g.area(&step.addr)?;
            return Ok(vec![ScriptStep::new(RuleId::Dcmgev(Direction::In), step.addr.clone())
                .with_sel(vec![])
                .with_witness(Script::default())]);
        }
        _ => {}
    }

    let sel = resolve(g, step)?;
    let parity = sel.parity(g);
    if rule == RuleId::Dcm && parity == Parity::Odd {
        let at = child(&sel.area, sel.first(g));
        let mut wrap = ScriptStep::new(RuleId::Dcc(Direction::In), step.addr.clone());
        wrap.sel = step.sel.clone();
        return Ok(vec![wrap, node_step(RuleId::CutChange, &at)]);
    }
    let node = single(g, &sel, rule)?;
    let a = child(&sel.area, sel.idx[0]);
    let pcut_inner = |n: &Node| match n {
        Node::Cut(CutKind::Paracomplete, inner) => Some(inner.clone()),
        _ => None,
    };
    // [[ ... ]] nesting of paracomplete cuts around a node, `depth` deep.
    let peel = |n: &Node, depth: usize| -> Option<Graph> {
        let mut cur = Graph::single(n.clone());
        for _ in 0..depth {
            match cur.nodes.as_slice() {
                [m] => cur = pcut_inner(m)?,
                _ => return None,
            }
        }
        Some(cur)
    };
    let is_pcut = |x: &Graph| matches!(x.nodes.as_slice(), [Node::Cut(CutKind::Paracomplete, _)]);

    let dcm_even = || vec![node_step(RuleId::CutChange, &a), node_step(RuleId::Dcc(Direction::Out), &a)];
    let dcm_odd = || vec![node_step(RuleId::Dcc(Direction::In), &a), node_step(RuleId::CutChange, &a)];
    let dcaf_even = |at: &Address| vec![node_step(RuleId::Dcmf, at), node_step(RuleId::CutChange, &child(at, 0))];
    let dcaf_odd = |at: &Address| vec![node_step(RuleId::CutChange, &child(at, 0)), node_step(RuleId::Dcmf, at)];

    let steps = match rule {
        RuleId::Dcm => {
            mixed_double_cut(node).ok_or_else(|| shape(rule, "not of the form [(X)]"))?;
            dcm_even()
        }
        RuleId::Cce => {
            let parent_is_pcut = sel.area.split_last().is_some_and(|(&last, prefix)| {
                matches!(g.area(prefix).map(|p| &p.nodes[last]), Ok(Node::Cut(CutKind::Paracomplete, _)))
            });
            if !parent_is_pcut || !matches!(node, Node::Cut(..)) {
                return Err(shape(rule, "needs a cut directly inside a paracomplete cut"));
            }
            vec![node_step(RuleId::CutChange, &a)]
        }
        RuleId::Dcmf1(dir) | RuleId::Tcm(dir) => {
            let x = match dir {
                Direction::Out => mixed_double_cut(node).cloned().ok_or_else(|| shape(rule, "not of the form [(X)]"))?,
                Direction::In => Graph::single(node.clone()),
            };
            need_alternate(rule, &x)?;
            if matches!(rule, RuleId::Tcm(_)) && !is_pcut(&x) {
                return Err(shape(rule, "needs [X] inside the mixed double cut"));
            }
            match (dir, parity) {
                (Direction::Out, Parity::Even) => dcm_even(),
                (Direction::Out, Parity::Odd) => vec![node_step(RuleId::Dcmf, &a)],
                (Direction::In, Parity::Even) => vec![node_step(RuleId::Dcmf, &a)],
                (Direction::In, Parity::Odd) => dcm_odd(),
            }
        }
        RuleId::Dcaf | RuleId::Tca => {
            let x = match parity {
                Parity::Even => Graph::single(node.clone()),
                Parity::Odd => peel(node, 2).ok_or_else(|| shape(rule, "not of the form [[X]]"))?,
            };
            need_alternate(rule, &x)?;
            if rule == RuleId::Tca && !is_pcut(&x) {
                return Err(shape(rule, "needs a paracomplete cut [X]"));
            }
            match parity {
                Parity::Even => dcaf_even(&a),
                Parity::Odd => dcaf_odd(&a),
            }
        }
        RuleId::Tcaf => {
            // [[[X]]] at even and [X] at odd; the innermost X must be alternate.
            let depth = if parity == Parity::Even { 3 } else { 1 };
            let x = peel(node, depth).ok_or_else(|| shape(rule, "wrong number of paracomplete cuts"))?;
            need_alternate(rule, &x)?;
            match parity {
                Parity::Even => dcaf_odd(&child(&a, 0)),
                Parity::Odd => dcaf_even(&child(&a, 0)),
            }
        }
        RuleId::Tcaf1(dir) => {
            let sub = match (dir, parity) {
                (Direction::Out, Parity::Even) | (Direction::In, Parity::Odd) => RuleId::Tcaf,
                _ => RuleId::Tca,
            };
            let depth = if dir == Direction::Out { 3 } else { 1 };
            peel(node, depth).ok_or_else(|| shape(rule, "wrong number of paracomplete cuts"))?;
            vec![node_step(sub, &a)]
        }
        RuleId::Cca(dir) => {
            let depth = if dir == Direction::Out { 4 } else { 2 };
            peel(node, depth).ok_or_else(|| shape(rule, "wrong number of paracomplete cuts"))?;
            vec![node_step(RuleId::Tcaf1(dir), &a)]
        }
        _ => unreachable!("primitive"),
    };
    Ok(steps)
}

/// Primitive steps realizing a derived step on `g`. Primitive steps come
/// back unchanged.
pub fn expand_derived(g: &Graph, step: &ScriptStep) -> Result<Vec<ScriptStep>, RuleError> {
    if step.rule.is_primitive() {
        return Ok(vec![step.clone()]);
    }
    let mut out = Vec::new();
    let mut cur = g.clone();
    for s in expand_once(g, step)? {
        for p in expand_derived(&cur, &s)? {
            cur = apply_primitive(&cur, &p)?;
            out.push(p);
        }
    }
    Ok(out)
}

/// Replaces every derived step of a script by its primitives.
pub fn expand_script(s: &Script) -> Result<Script, ScriptFailure> {
    let mut cur = s.start.clone();
    let mut steps = Vec::new();
    for (i, step) in s.steps.iter().enumerate() {
        let fail = |error| ScriptFailure { step: i + 1, rule: step.rule, addr: step.addr.clone(), error };
        for p in expand_derived(&cur, step).map_err(fail)? {
            cur = apply_primitive(&cur, &p).map_err(fail)?;
            steps.push(p);
        }
    }
    Ok(Script { start: s.start.clone(), steps })
}

/// Whether `after` holds at the actual world of every model up to `bound`
/// worlds where `before` does.
pub fn check_rule_soundness(before: &Graph, after: &Graph, bound: usize) -> Result<bool, ValidityError> {
    let mut atoms = before.atoms();
    atoms.extend(after.atoms());
    for m in enumerate_models(&atoms, bound)? {
        let actual = m.frame().actual();
        let holds = |g: &Graph| graph_truth_set(&m, g).map(|s| s >> actual & 1 == 1).expect("atoms enumerated");
        if holds(before) && !holds(after) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;

    fn g(s: &str) -> Graph {
        parse_graph(s).unwrap()
    }

    fn at(rule: &str, addr: &[usize]) -> ScriptStep {
        ScriptStep::new(rule.parse().unwrap(), addr.to_vec())
    }

    fn apply(graph: &str, step: ScriptStep) -> Result<String, RuleError> {
        apply_rule(&g(graph), &step).map(|x| x.to_string())
    }

    #[test]
    fn rule_names_round_trip() {
        for r in RuleId::PRIMITIVE.iter().chain(RuleId::DERIVED.iter()) {
            assert_eq!(r.name().parse::<RuleId>().unwrap(), *r);
        }
        assert_eq!("DCMF.1".parse::<RuleId>().unwrap(), RuleId::Dcmf1(Direction::Out));
        assert_eq!("DCMlambda".parse::<RuleId>().unwrap(), RuleId::DcmLambda);
        assert!("B-in".parse::<RuleId>().is_err());
        assert!("XYZ".parse::<RuleId>().is_err());
    }

    #[test]
    fn documented_primitive_examples() {
        assert_eq!(apply("a", at("DCC-in", &[0])).unwrap(), "((a))");
        assert_eq!(apply("[a]", at("CC", &[0])).unwrap(), "(a)");
        assert_eq!(apply("a", at("I", &[0])).unwrap(), "a a");
        assert_eq!(apply("((a)) b", at("DCC-out", &[0])).unwrap(), "a b");
    }

    #[test]
    fn parity_guards() {
        assert!(matches!(apply("(a b)", at("B", &[0, 1])), Err(RuleError::Parity { required: Parity::Even, .. })));
        assert_eq!(apply("a b", at("B", &[1])).unwrap(), "a");
        let e = ScriptStep::new(RuleId::Write, vec![]).with_payload(g("b"));
        assert!(matches!(apply("a", e.clone()), Err(RuleError::Parity { required: Parity::Odd, .. })));
        let e = ScriptStep::new(RuleId::Write, vec![0]).with_payload(g("b"));
        assert_eq!(apply("(a)", e).unwrap(), "(a b)");
        assert!(apply("(a)", at("CC", &[0])).is_err());
        assert_eq!(apply("((a))", at("CC", &[0, 0])).unwrap(), "([a])");
    }

    #[test]
    fn dcmf_needs_alternate() {
        assert_eq!(apply("_a", at("DCMF", &[0])).unwrap(), "[(_a)]");
        assert!(matches!(apply("a", at("DCMF", &[0])), Err(RuleError::NotAlternate { .. })));
        assert_eq!(apply("([([b])])", at("DCMF", &[0, 0])).unwrap(), "([b])");
    }

    #[test]
    fn classical_iteration_respects_paracomplete_cuts() {
        let ic = at("IC", &[0]).with_target(vec![1]);
        assert_eq!(apply("a (b)", ic.clone()).unwrap(), "a(b a)");
        assert!(matches!(apply("a [b]", ic), Err(RuleError::Region { .. })));
        let iff = at("IF", &[0]).with_target(vec![1]);
        assert_eq!(apply("_a [b]", iff.clone()).unwrap(), "_a[b _a]");
        assert!(matches!(apply("a [b]", iff), Err(RuleError::NotAlternate { .. })));
        let dc = at("DC", &[0]).with_target(vec![1]);
        assert_eq!(apply("a(b a)", dc).unwrap(), "a(b)");
        let df = at("DF", &[0]).with_target(vec![1]);
        assert_eq!(apply("[c] ([c] b)", df).unwrap(), "[c](b)");
        // target inside the iterated node
        assert!(apply("(b)", at("IC", &[0]).with_target(vec![0])).is_err());
    }

    #[test]
    fn deiteration_needs_a_second_copy() {
        assert_eq!(apply("a b a", at("D", &[2])).unwrap(), "a b");
        assert!(apply("a b", at("D", &[0])).is_err());
    }

    #[test]
    fn dcmgev_checks_witness() {
        let witness = Script::from_lambda(vec![at("DCC-in", &[]).with_sel(vec![])]);
        let step = ScriptStep::new(RuleId::Dcmgev(Direction::In), vec![]).with_sel(vec![]);
        assert!(matches!(apply("a", step.clone()), Err(RuleError::Witness { .. })));
        let step = ScriptStep::new(RuleId::Dcmgev(Direction::In), vec![0]).with_witness(witness.clone());
        assert!(matches!(apply("a", step), Err(RuleError::Witness { .. })));
        let step = ScriptStep::new(RuleId::Dcmgev(Direction::In), vec![0]).with_witness(witness.clone());
        assert_eq!(apply("(())", step).unwrap(), "[((()))]");
        let out = ScriptStep::new(RuleId::Dcmgev(Direction::Out), vec![0]).with_witness(witness);
        assert_eq!(apply("[((()))] a", out).unwrap(), "(())a");
    }

    #[test]
    fn derived_examples() {
        assert_eq!(apply("[([a])]", at("DCMF.1-out", &[0])).unwrap(), "[a]");
        assert_eq!(apply("[a]", at("DCMF.1-in", &[0])).unwrap(), "[([a])]");
        assert_eq!(apply("[[[[a]]]]", at("CCA-out", &[0])).unwrap(), "[[a]]");
        assert_eq!(apply("[[a]]", at("CCA-in", &[0])).unwrap(), "[[[[a]]]]");
        assert_eq!(apply("[(b)]", at("DCM", &[0])).unwrap(), "b");
        assert_eq!(apply("(b)", at("DCM", &[0, 0])).unwrap(), "([(b)])");
        assert_eq!(apply("", at("DCCλ", &[])).unwrap(), "(())");
        assert_eq!(apply("", at("DCMλ", &[])).unwrap(), "[()]");
        assert_eq!(apply("[a(b)]", at("CCE", &[0, 1])).unwrap(), "[a[b]]");
        assert_eq!(apply("[a]", at("TCA", &[0])).unwrap(), "[[[a]]]");
        assert_eq!(apply("[[[_a]]]", at("TCAF", &[0])).unwrap(), "[_a]");
        assert!(apply("[[[a]]]", at("TCAF", &[0])).is_err());
        assert_eq!(apply("([[[b]]])", at("TCA", &[0, 0])).unwrap(), "([b])");
        assert_eq!(apply("_a", at("DCAF", &[0])).unwrap(), "[[_a]]");
        assert_eq!(apply("[([b])]", at("TCM-out", &[0])).unwrap(), "[b]");
    }

    #[test]
    fn derived_rules_expand_to_primitives() {
        let cases = [
            ("[([a])]", at("DCMF.1-out", &[0])),
            ("[[[[a]]]]", at("CCA-out", &[0])),
            ("[[a]]", at("CCA-in", &[0])),
            ("([_a])", at("TCAF.1-in", &[0, 0])),
            ("[(b)]", at("DCM", &[0])),
        ];
        for (graph, step) in cases {
            let g0 = g(graph);
            let prims = expand_derived(&g0, &step).unwrap();
            assert!(prims.iter().all(|s| s.rule.is_primitive()));
            let replay = check_script(&Script::new(g0.clone(), prims)).unwrap();
            assert_eq!(replay, apply_rule(&g0, &step).unwrap());
        }
    }

    #[test]
    fn script_reports_first_bad_step() {
        let s = Script::new(g("(a b)"), vec![at("DCC-in", &[0]), at("B", &[0, 0, 0, 0])]);
        let err = check_script(&s).unwrap_err();
        assert_eq!(err.step, 2);
        assert!(matches!(err.error, RuleError::Parity { .. }));
    }

    #[test]
    fn soundness_examples() {
        assert!(check_rule_soundness(&g("[a]"), &g("(a)"), 3).unwrap());
        assert!(check_rule_soundness(&g("a b"), &g("a"), 3).unwrap());
        assert!(!check_rule_soundness(&g("(a)"), &g("[a]"), 3).unwrap());
    }

    #[test]
    fn triple_cut_needs_alternate_inside() {
        // Two-world chain, x true only at the root: [[[x]]] holds, [x] fails.
        assert!(!check_rule_soundness(&g("[[[x]]]"), &g("[x]"), 2).unwrap());
        assert!(check_rule_soundness(&g("[[[_x]]]"), &g("[_x]"), 3).unwrap());
    }
}
