//! Gamma-LD existential graphs.
//!
//! Text form: `( )` is a classical cut, `[ ]` a paracomplete cut,
//! juxtaposition is whitespace, and the empty string is the empty graph λ.

pub mod rules;
pub mod script_io;
pub mod search;

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{desugar, Atom, BinOp, DerivedOp, Formula};
use crate::kripke::{EvalError, Model, WorldId};
use crate::parser::SourceSpan;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CutKind {
    Classical,
    Paracomplete,
}

#[derive(Clone, Debug)]
pub enum Node {
    Atom(Atom),
    Cut(CutKind, Graph),
}

/// An area: the juxtaposition of its nodes. Stored order is what addresses
/// refer to; equality ignores it.
#[derive(Clone, Debug, Default)]
pub struct Graph {
    pub nodes: Vec<Node>,
}

/// Path of child indices from the sheet. As a node address it names the
/// node reached; as an area address every step must pass through a cut and
/// it names that cut's area (the empty path is the sheet).
pub type Address = Vec<usize>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Classicality {
    Classical,
    Alternate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionInfo {
    pub parity: Parity,
    pub classicality: Classicality,
    pub classical_cuts: usize,
    pub paracomplete_cuts: usize,
}

impl RegionInfo {
    fn from_counts(classical_cuts: usize, paracomplete_cuts: usize) -> RegionInfo {
        RegionInfo {
            parity: if (classical_cuts + paracomplete_cuts).is_multiple_of(2) { Parity::Even } else { Parity::Odd },
            classicality: if paracomplete_cuts == 0 { Classicality::Classical } else { Classicality::Alternate },
            classical_cuts,
            paracomplete_cuts,
        }
    }

    pub fn depth(&self) -> usize {
        self.classical_cuts + self.paracomplete_cuts
    }

    pub fn is_even(&self) -> bool {
        self.parity == Parity::Even
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph syntax error at {}..{}: {message}", .span.start, .span.end)]
    Syntax { span: SourceSpan, message: String },
    #[error("address {0:?} does not name a node")]
    BadNode(Address),
    #[error("address {0:?} does not name an area")]
    BadArea(Address),
}

impl Node {
    pub fn atom(a: Atom) -> Node {
        Node::Atom(a)
    }

    pub fn cut(g: Graph) -> Node {
        Node::Cut(CutKind::Classical, g)
    }

    pub fn pcut(g: Graph) -> Node {
        Node::Cut(CutKind::Paracomplete, g)
    }

    fn canonical(&self) -> Node {
        match self {
            Node::Atom(a) => Node::Atom(a.clone()),
            Node::Cut(k, g) => Node::Cut(*k, g.canonical()),
        }
    }

    /// A single alternate atom or a paracomplete cut.
    pub fn is_alternate(&self) -> bool {
        match self {
            Node::Atom(a) => a.is_alternate(),
            Node::Cut(k, _) => *k == CutKind::Paracomplete,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Node::Atom(_) => 1,
            Node::Cut(_, g) => 1 + g.size(),
        }
    }
}

impl Graph {
    pub fn empty() -> Graph {
        Graph::default()
    }

    pub fn new(nodes: Vec<Node>) -> Graph {
        Graph { nodes }
    }

    pub fn single(node: Node) -> Graph {
        Graph { nodes: vec![node] }
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Total number of atoms and cuts.
    pub fn size(&self) -> usize {
        self.nodes.iter().map(Node::size).sum()
    }

    /// Children sorted by their canonical print, recursively.
    pub fn canonical(&self) -> Graph {
        let mut nodes: Vec<(String, Node)> = self
            .nodes
            .iter()
            .map(|n| {
                let c = n.canonical();
                (print_node(&c), c)
            })
            .collect();
        nodes.sort_by(|a, b| a.0.cmp(&b.0));
        Graph { nodes: nodes.into_iter().map(|(_, n)| n).collect() }
    }

    pub fn canonical_string(&self) -> String {
        self.canonical().to_string()
    }

    pub fn node(&self, addr: &[usize]) -> Result<&Node, GraphError> {
        let bad = || GraphError::BadNode(addr.to_vec());
        let (&last, prefix) = addr.split_last().ok_or_else(bad)?;
        let area = self.area(prefix).map_err(|_| bad())?;
        area.nodes.get(last).ok_or_else(bad)
    }

    pub fn area(&self, addr: &[usize]) -> Result<&Graph, GraphError> {
        let mut g = self;
        for &i in addr {
            match g.nodes.get(i) {
                Some(Node::Cut(_, inner)) => g = inner,
                _ => return Err(GraphError::BadArea(addr.to_vec())),
            }
        }
        Ok(g)
    }

    pub fn area_mut(&mut self, addr: &[usize]) -> Result<&mut Graph, GraphError> {
        let mut g = self;
        for &i in addr {
            match g.nodes.get_mut(i) {
                Some(Node::Cut(_, inner)) => g = inner,
                _ => return Err(GraphError::BadArea(addr.to_vec())),
            }
        }
        Ok(g)
    }

    /// Kinds of the cuts passed through by an area address, outermost first.
    pub fn cuts_on_path(&self, addr: &[usize]) -> Result<Vec<CutKind>, GraphError> {
        let mut g = self;
        let mut kinds = Vec::with_capacity(addr.len());
        for &i in addr {
            match g.nodes.get(i) {
                Some(Node::Cut(k, inner)) => {
                    kinds.push(*k);
                    g = inner;
                }
                _ => return Err(GraphError::BadArea(addr.to_vec())),
            }
        }
        Ok(kinds)
    }

    /// Region of the area at an area address.
    pub fn area_info(&self, addr: &[usize]) -> Result<RegionInfo, GraphError> {
        let kinds = self.cuts_on_path(addr)?;
        let p = kinds.iter().filter(|k| **k == CutKind::Paracomplete).count();
        Ok(RegionInfo::from_counts(kinds.len() - p, p))
    }

    /// Every atom occurring in the graph.
    pub fn atoms(&self) -> std::collections::BTreeSet<Atom> {
        let mut out = std::collections::BTreeSet::new();
        fn walk(g: &Graph, out: &mut std::collections::BTreeSet<Atom>) {
            for n in &g.nodes {
                match n {
                    Node::Atom(a) => {
                        out.insert(a.clone());
                    }
                    Node::Cut(_, inner) => walk(inner, out),
                }
            }
        }
        walk(self, &mut out);
        out
    }
}

impl PartialEq for Node {
    fn eq(&self, other: &Node) -> bool {
        print_node(&self.canonical()) == print_node(&other.canonical())
    }
}

impl Eq for Node {}

impl Hash for Node {
    fn hash<H: Hasher>(&self, state: &mut H) {
        print_node(&self.canonical()).hash(state);
    }
}

impl PartialEq for Graph {
    fn eq(&self, other: &Graph) -> bool {
        self.canonical_string() == other.canonical_string()
    }
}

impl Eq for Graph {}

impl Hash for Graph {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.canonical_string().hash(state);
    }
}

impl PartialOrd for Graph {
    fn partial_cmp(&self, other: &Graph) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Graph {
    fn cmp(&self, other: &Graph) -> Ordering {
        self.canonical_string().cmp(&other.canonical_string())
    }
}

/// Region of the node at a node address: the cuts strictly enclosing it.
/// The empty address is the sheet itself.
pub fn region_info(g: &Graph, addr: &[usize]) -> Result<RegionInfo, GraphError> {
    match addr.split_last() {
        None => Ok(RegionInfo::from_counts(0, 0)),
        Some((_, prefix)) => {
            g.node(addr)?;
            g.area_info(prefix)
        }
    }
}

/// A single paracomplete cut or a single alternate atom.
pub fn is_alternate_graph(g: &Graph) -> bool {
    matches!(g.nodes.as_slice(), [n] if n.is_alternate())
}

fn print_node(n: &Node) -> String {
    let mut s = String::new();
    write_nodes(std::slice::from_ref(n), &mut s);
    s
}

fn write_nodes(nodes: &[Node], out: &mut String) {
    let mut prev_atom = false;
    for n in nodes {
        match n {
            Node::Atom(a) => {
                if prev_atom {
                    out.push(' ');
                }
                out.push_str(&a.to_string());
                prev_atom = true;
            }
            Node::Cut(kind, g) => {
                let (open, close) = match kind {
                    CutKind::Classical => ('(', ')'),
                    CutKind::Paracomplete => ('[', ']'),
                };
                out.push(open);
                write_nodes(&g.nodes, out);
                out.push(close);
                prev_atom = false;
            }
        }
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_nodes(&self.nodes, &mut s);
        f.write_str(&s)
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_node(self))
    }
}

/// Parses the text form. `λ` alone (or the empty string) is the empty graph.
pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    let mut stack: Vec<(CutKind, usize, Vec<Node>)> = Vec::new();
    let mut current: Vec<Node> = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    let syntax = |start: usize, end: usize, message: &str| GraphError::Syntax {
        span: SourceSpan { start, end },
        message: message.to_string(),
    };
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'(' | b'[' => {
                let kind = if c == b'(' { CutKind::Classical } else { CutKind::Paracomplete };
                stack.push((kind, i, std::mem::take(&mut current)));
                i += 1;
            }
            b')' | b']' => {
                let kind = if c == b')' { CutKind::Classical } else { CutKind::Paracomplete };
                let Some((open_kind, start, mut outer)) = stack.pop() else {
                    return Err(syntax(i, i + 1, "unmatched closing bracket"));
                };
                if open_kind != kind {
                    return Err(syntax(start, i + 1, "mismatched brackets"));
                }
                outer.push(Node::Cut(kind, Graph { nodes: std::mem::take(&mut current) }));
                current = outer;
                i += 1;
            }
            _ if text[i..].starts_with('λ') => i += 'λ'.len_utf8(),
            b'_' | b'a'..=b'z' => {
                let start = i;
                i += 1;
                while i < bytes.len() && (bytes[i].is_ascii_lowercase() || bytes[i].is_ascii_digit()) {
                    i += 1;
                }
                let word = &text[start..i];
                let atom = Atom::from_display(word).ok_or_else(|| syntax(start, i, "malformed atom"))?;
                current.push(Node::Atom(atom));
            }
            _ => {
                let len = text[i..].chars().next().map_or(1, char::len_utf8);
                return Err(syntax(i, i + len, "unexpected character"));
            }
        }
    }
    if let Some((_, start, _)) = stack.pop() {
        return Err(syntax(start, text.len(), "unclosed cut"));
    }
    Ok(Graph { nodes: current })
}

impl std::str::FromStr for Graph {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_graph(s)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum NodeJson {
    Atom(String),
    Cut(Vec<NodeJson>),
    Pcut(Vec<NodeJson>),
}

impl From<&Node> for NodeJson {
    fn from(n: &Node) -> NodeJson {
        match n {
            Node::Atom(a) => NodeJson::Atom(a.to_string()),
            Node::Cut(CutKind::Classical, g) => NodeJson::Cut(g.nodes.iter().map(NodeJson::from).collect()),
            Node::Cut(CutKind::Paracomplete, g) => NodeJson::Pcut(g.nodes.iter().map(NodeJson::from).collect()),
        }
    }
}

impl TryFrom<NodeJson> for Node {
    type Error = String;

    fn try_from(n: NodeJson) -> Result<Node, String> {
        let area = |v: Vec<NodeJson>| -> Result<Graph, String> {
            Ok(Graph { nodes: v.into_iter().map(Node::try_from).collect::<Result<_, _>>()? })
        };
        Ok(match n {
            NodeJson::Atom(s) => Node::Atom(Atom::from_display(&s).ok_or_else(|| format!("invalid atom {s:?}"))?),
            NodeJson::Cut(v) => Node::Cut(CutKind::Classical, area(v)?),
            NodeJson::Pcut(v) => Node::Cut(CutKind::Paracomplete, area(v)?),
        })
    }
}

/// Nested JSON arrays: `[{"atom": "a"}, {"cut": [...]}, {"pcut": [...]}]`.
impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let nodes: Vec<NodeJson> = self.nodes.iter().map(NodeJson::from).collect();
        nodes.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Graph, D::Error> {
        let nodes = Vec::<NodeJson>::deserialize(d)?;
        Ok(Graph {
            nodes: nodes.into_iter().map(Node::try_from).collect::<Result<_, _>>().map_err(serde::de::Error::custom)?,
        })
    }
}

/// Formula to graph, clause by clause. `⊗`, `−` and `*` go through their
/// definitions first.
pub fn translate(f: &Formula) -> Graph {
    Graph { nodes: translate_nodes(f) }
}

fn translate_nodes(f: &Formula) -> Vec<Node> {
    let g = |f: &Formula| Graph { nodes: translate_nodes(f) };
    let cut = |nodes: Vec<Node>| Node::cut(Graph { nodes });
    let pcut = |nodes: Vec<Node>| Node::pcut(Graph { nodes });
    // X'(Y')
    let implication = |x: &Formula, y: &Formula| {
        let mut v = translate_nodes(x);
        v.push(Node::cut(g(y)));
        v
    };
    match f {
        Formula::Atom(a) => vec![Node::Atom(a.clone())],
        Formula::CNeg(x) => vec![Node::cut(g(x))],
        Formula::ANeg(x) => vec![Node::pcut(g(x))],
        Formula::CBin(op, x, y) => match op {
            BinOp::And => {
                let mut v = translate_nodes(x);
                v.extend(translate_nodes(y));
                v
            }
            BinOp::Impl => vec![cut(implication(x, y))],
            BinOp::Iff => vec![cut(implication(x, y)), cut(implication(y, x))],
            BinOp::Or => vec![cut(vec![Node::cut(g(x)), Node::cut(g(y))])],
        },
        Formula::ABin(op, x, y) => match op {
            BinOp::Impl => vec![pcut(implication(x, y))],
            BinOp::Or => vec![pcut(vec![Node::cut(g(x)), Node::cut(g(y))])],
            BinOp::And => {
                let mut v = translate_nodes(x);
                v.extend(translate_nodes(y));
                vec![pcut(vec![cut(v)])]
            }
            BinOp::Iff => vec![pcut(implication(x, y)), pcut(implication(y, x))],
        },
        Formula::Derived(DerivedOp::Plus, x) => vec![pcut(vec![Node::cut(g(x))])],
        Formula::Derived(..) => translate_nodes(&desugar(f)),
    }
}

/// Name of the atom `read` uses for the empty area.
pub const VERUM_ATOM: &str = "a0";

/// Graph to formula: the empty area reads as `a0 ⊃ a0`, juxtaposition as a
/// right-nested `•`, `( )` as `∼` and `[ ]` as `¬`.
pub fn read(g: &Graph) -> Formula {
    match g.nodes.split_last() {
        None => {
            let t = Formula::classical(VERUM_ATOM);
            Formula::implies(t.clone(), t)
        }
        Some((last, rest)) => rest
            .iter()
            .rev()
            .fold(read_node(last), |acc, n| Formula::and(read_node(n), acc)),
    }
}

fn read_node(n: &Node) -> Formula {
    match n {
        Node::Atom(a) => Formula::Atom(a.clone()),
        Node::Cut(CutKind::Classical, g) => Formula::cneg(read(g)),
        Node::Cut(CutKind::Paracomplete, g) => Formula::aneg(read(g)),
    }
}

/// Worlds where the graph holds. Atoms missing from the model are an error.
pub fn graph_truth_set(m: &Model, g: &Graph) -> Result<u64, EvalError> {
    let all = m.frame().all_worlds();
    g.nodes.iter().try_fold(all, |acc, n| {
        Ok(acc
            & match n {
                Node::Atom(a) => m.atom_set(a).ok_or_else(|| EvalError::UnknownAtom(a.to_string()))?,
                Node::Cut(CutKind::Classical, inner) => !graph_truth_set(m, inner)? & all,
                Node::Cut(CutKind::Paracomplete, inner) => m.frame().alt_neg(graph_truth_set(m, inner)?),
            })
    })
}

pub fn eval_graph(m: &Model, w: WorldId, g: &Graph) -> Result<bool, EvalError> {
    if w >= m.frame().size() {
        return Err(EvalError::UnknownWorld(w.to_string()));
    }
    Ok(graph_truth_set(m, g)? >> w & 1 == 1)
}
