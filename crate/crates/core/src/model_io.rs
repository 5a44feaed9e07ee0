//! JSON and DOT forms of models.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::Atom;
use crate::kripke::{Frame, FrameError, Model, ModelViolation};

/// Serialized model. Reflexive pairs may be omitted from `rel`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelJson {
    pub worlds: Vec<String>,
    pub actual: String,
    pub rel: Vec<(String, String)>,
    pub val: BTreeMap<String, BTreeMap<String, u8>>,
}

#[derive(Debug, Error)]
pub enum ModelIoError {
    #[error("malformed model JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error("unknown world {0:?}")]
    UnknownWorld(String),
    #[error("invalid atom name {0:?}")]
    BadAtom(String),
    #[error("truth value for {atom} at {world} must be 0 or 1")]
    BadValue { world: String, atom: String },
    #[error("atom {atom} has no value at world {world}")]
    Missing { world: String, atom: String },
    #[error("model violates {kind}: {0}", kind = .0.restriction())]
    Violation(#[from] ModelViolation),
}

impl ModelJson {
    pub fn from_model(m: &Model) -> ModelJson {
        let frame = m.frame();
        let n = frame.size();
        let mut rel = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b && frame.related(a, b) {
                    rel.push((frame.name(a).to_string(), frame.name(b).to_string()));
                }
            }
        }
        let val = (0..n)
            .map(|w| {
                let row = m
                    .valuation()
                    .iter()
                    .map(|(atom, set)| (atom.to_string(), (set >> w & 1) as u8))
                    .collect();
                (frame.name(w).to_string(), row)
            })
            .collect();
        ModelJson {
            worlds: frame.names().to_vec(),
            actual: frame.name(frame.actual()).to_string(),
            rel,
            val,
        }
    }

    /// Builds and validates the model. Every atom mentioned at any world
    /// must have a value at every world.
    pub fn to_model(&self) -> Result<Model, ModelIoError> {
        let index = |name: &str| {
            self.worlds
                .iter()
                .position(|w| w == name)
                .ok_or_else(|| ModelIoError::UnknownWorld(name.to_string()))
        };
        let actual = index(&self.actual)?;
        let pairs = self
            .rel
            .iter()
            .map(|(a, b)| Ok((index(a)?, index(b)?)))
            .collect::<Result<Vec<_>, ModelIoError>>()?;
        let frame = Frame::reflexive(self.worlds.clone(), actual, &pairs)?;

        let mut valuation: BTreeMap<Atom, u64> = BTreeMap::new();
        for (world, row) in &self.val {
            index(world)?;
            for name in row.keys() {
                let atom = Atom::from_display(name).ok_or_else(|| ModelIoError::BadAtom(name.clone()))?;
                valuation.insert(atom, 0);
            }
        }
        for (atom, set) in valuation.iter_mut() {
            for (w, world) in self.worlds.iter().enumerate() {
                let key = atom.to_string();
                let value = self.val.get(world).and_then(|row| row.get(&key)).ok_or_else(|| {
                    ModelIoError::Missing { world: world.clone(), atom: key.clone() }
                })?;
                match value {
                    0 => {}
                    1 => *set |= 1 << w,
                    _ => return Err(ModelIoError::BadValue { world: world.clone(), atom: key }),
                }
            }
        }
        Ok(Model::new(frame, valuation)?)
    }
}

pub fn from_json_str(text: &str) -> Result<Model, ModelIoError> {
    serde_json::from_str::<ModelJson>(text)?.to_model()
}

pub fn to_json_value(m: &Model) -> serde_json::Value {
    serde_json::to_value(ModelJson::from_model(m)).expect("model JSON is always serializable")
}

pub fn to_json_string(m: &Model) -> String {
    to_json_value(m).to_string()
}

pub fn to_json_pretty(m: &Model) -> String {
    serde_json::to_string_pretty(&ModelJson::from_model(m)).expect("model JSON is always serializable")
}

/// DOT digraph: one node per world labeled with its atom values, the actual
/// world drawn as a double circle, non-reflexive edges only.
pub fn to_dot(m: &Model) -> String {
    let frame = m.frame();
    let mut out = String::from("digraph model {\n");
    for w in 0..frame.size() {
        let values: Vec<String> = m
            .valuation()
            .iter()
            .map(|(atom, set)| format!("{atom}={}", set >> w & 1))
            .collect();
        let label = if values.is_empty() {
            frame.name(w).to_string()
        } else {
            format!("{}\\n{}", frame.name(w), values.join(" "))
        };
        let shape = if w == frame.actual() { "doublecircle" } else { "circle" };
        out.push_str(&format!("  \"{}\" [label=\"{}\", shape={}];\n", frame.name(w), label, shape));
    }
    for a in 0..frame.size() {
        for b in 0..frame.size() {
            if a != b && frame.related(a, b) {
                out.push_str(&format!("  \"{}\" -> \"{}\";\n", frame.name(a), frame.name(b)));
            }
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const PARADOX: &str = r#"{"worlds":["MA","M1"],"actual":"MA","rel":[["MA","M1"]],
        "val":{"MA":{"x":0},"M1":{"x":1}}}"#;

    #[test]
    fn round_trip() {
        let m = from_json_str(PARADOX).unwrap();
        let again = from_json_str(&to_json_string(&m)).unwrap();
        assert_eq!(m, again);
        assert!(m.frame().related(0, 0));
    }

    #[test]
    fn rejects_cycle() {
        let text = r#"{"worlds":["M","N"],"actual":"M","rel":[["M","N"],["N","M"]],"val":{}}"#;
        assert!(matches!(from_json_str(text), Err(ModelIoError::Violation(ModelViolation::Antisymmetry { .. }))));
    }

    #[test]
    fn rejects_partial_valuation() {
        let text = r#"{"worlds":["M","N"],"actual":"M","rel":[],"val":{"M":{"x":1}}}"#;
        assert!(matches!(from_json_str(text), Err(ModelIoError::Missing { .. })));
    }

    #[test]
    fn rejects_broken_heredity() {
        let text = r#"{"worlds":["M","N"],"actual":"M","rel":[["M","N"]],
            "val":{"M":{"_a":1},"N":{"_a":0}}}"#;
        assert!(matches!(from_json_str(text), Err(ModelIoError::Violation(ModelViolation::Heredity { .. }))));
    }

    #[test]
    fn dot_marks_actual_world() {
        let dot = to_dot(&from_json_str(PARADOX).unwrap());
        assert!(dot.contains("\"MA\" [label=\"MA\\nx=0\", shape=doublecircle]"));
        assert!(dot.contains("\"MA\" -> \"M1\""));
        assert!(!dot.contains("\"MA\" -> \"MA\""));
    }
}
