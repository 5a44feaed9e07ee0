//! JSON-lines scripts.
//!
//! ```text
//! {"start": ""}
//! {"rule": "DCC-in", "addr": [], "sel": []}
//! {"rule": "E", "addr": [0], "payload": "a"}
//! {"rule": "IC", "addr": [0, 0], "target": [0, 1]}
//! ```
//!
//! The header is optional and defaults to λ. Graphs are in text form. A
//! `witness` is either an inline object `{"start": ..., "steps": [...]}` or
//! the name of another script file, resolved by the caller.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::rules::{RuleId, Script, ScriptStep, UnknownRule};
use super::{parse_graph, Address, Graph, GraphError};

#[derive(Debug, Error)]
pub enum ScriptFormatError {
    #[error("line {line}: {source}")]
    Json { line: usize, source: serde_json::Error },
    #[error("line {line}: {source}")]
    Graph { line: usize, source: GraphError },
    #[error("line {line}: {source}")]
    Rule { line: usize, source: UnknownRule },
    #[error("line {line}: the start header must come first")]
    LateHeader { line: usize },
    #[error("line {line}: witness {name:?}: {reason}")]
    Witness { line: usize, name: String, reason: String },
}

#[derive(Serialize, Deserialize)]
struct Header {
    start: String,
}

#[derive(Serialize, Deserialize)]
struct StepLine {
    rule: String,
    #[serde(default)]
    addr: Address,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sel: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    payload: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    target: Option<Address>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    witness: Option<WitnessJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum WitnessJson {
    File(String),
    Inline { start: String, steps: Vec<StepLine> },
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Line {
    Step(StepLine),
    Header(Header),
}

type Resolver<'a> = dyn FnMut(&str) -> Result<Script, String> + 'a;

/// Parses a script; file witnesses are an error.
pub fn parse_script(text: &str) -> Result<Script, ScriptFormatError> {
    parse_script_with(text, &mut |_| Err("file witnesses need a base directory".to_string()))
}

/// Reads a script file, resolving witness files next to it.
pub fn load_script(path: &Path) -> Result<Script, ScriptFormatError> {
    let text = std::fs::read_to_string(path).map_err(|e| ScriptFormatError::Witness {
        line: 0,
        name: path.display().to_string(),
        reason: e.to_string(),
    })?;
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    parse_script_with(&text, &mut |name| load_script(&dir.join(name)).map_err(|e| e.to_string()))
}

pub fn parse_script_with(text: &str, resolve: &mut Resolver<'_>) -> Result<Script, ScriptFormatError> {
    let mut script = Script::default();
    let mut seen = false;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let raw = raw.trim();
        if raw.is_empty() || raw.starts_with('#') {
            continue;
        }
        match serde_json::from_str::<Line>(raw).map_err(|source| ScriptFormatError::Json { line, source })? {
            Line::Header(h) => {
                if seen {
                    return Err(ScriptFormatError::LateHeader { line });
                }
                seen = true;
                script.start = graph(&h.start, line)?;
            }
            Line::Step(s) => {
                seen = true;
                script.steps.push(step(s, line, resolve)?);
            }
        }
    }
    Ok(script)
}

fn graph(text: &str, line: usize) -> Result<Graph, ScriptFormatError> {
    parse_graph(text).map_err(|source| ScriptFormatError::Graph { line, source })
}

fn step(s: StepLine, line: usize, resolve: &mut Resolver<'_>) -> Result<ScriptStep, ScriptFormatError> {
    let rule: RuleId = s.rule.parse().map_err(|source| ScriptFormatError::Rule { line, source })?;
    let payload = s.payload.as_deref().map(|p| graph(p, line)).transpose()?;
    let witness = match s.witness {
        None => None,
        Some(WitnessJson::File(name)) => Some(
            resolve(&name).map_err(|reason| ScriptFormatError::Witness { line, name: name.clone(), reason })?,
        ),
        Some(WitnessJson::Inline { start, steps }) => Some(Script {
            start: graph(&start, line)?,
            steps: steps.into_iter().map(|s| step(s, line, resolve)).collect::<Result<_, _>>()?,
        }),
    };
    Ok(ScriptStep { rule, addr: s.addr, sel: s.sel, payload, target: s.target, witness: witness.map(Box::new) })
}

fn step_line(s: &ScriptStep) -> StepLine {
    StepLine {
        rule: s.rule.name(),
        addr: s.addr.clone(),
        sel: s.sel.clone(),
        payload: s.payload.as_ref().map(Graph::to_string),
        target: s.target.clone(),
        witness: s.witness.as_ref().map(|w| WitnessJson::Inline {
            start: w.start.to_string(),
            steps: w.steps.iter().map(step_line).collect(),
        }),
    }
}

/// Writes a script with inline witnesses.
pub fn write_script(s: &Script) -> String {
    let mut out = serde_json::to_string(&Header { start: s.start.to_string() }).expect("serializable");
    out.push('\n');
    for st in &s.steps {
        out.push_str(&serde_json::to_string(&step_line(st)).expect("serializable"));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::rules::check_script;

    #[test]
    fn reads_and_replays() {
        let text = r#"
# (()) then write a into the outer cut
{"start": ""}
{"rule": "DCC-in", "addr": [], "sel": []}
{"rule": "E", "addr": [0], "payload": "a"}
"#;
        let s = parse_script(text).unwrap();
        assert_eq!(check_script(&s).unwrap().to_string(), "(()a)");
        assert_eq!(parse_script(&write_script(&s)).unwrap(), s);
    }

    #[test]
    fn inline_witness_round_trip() {
        let text = r#"{"rule": "DCMGEV-in", "addr": [], "sel": [], "witness": {"start": "", "steps": []}}"#;
        let s = parse_script(text).unwrap();
        assert_eq!(check_script(&s).unwrap().to_string(), "[()]");
        assert_eq!(parse_script(&write_script(&s)).unwrap(), s);
    }

    #[test]
    fn errors_carry_lines() {
        assert!(matches!(parse_script("{\"rule\": \"Q\"}"), Err(ScriptFormatError::Rule { line: 1, .. })));
        assert!(matches!(
            parse_script("\n{\"rule\": \"E\", \"payload\": \"(\"}"),
            Err(ScriptFormatError::Graph { line: 2, .. })
        ));
        assert!(matches!(
            parse_script(r#"{"rule": "DCMGEV-in", "witness": "other.jsonl"}"#),
            Err(ScriptFormatError::Witness { line: 1, .. })
        ));
        assert!(matches!(
            parse_script("{\"rule\": \"B\"}\n{\"start\": \"a\"}"),
            Err(ScriptFormatError::LateHeader { line: 2 })
        ));
    }
}
