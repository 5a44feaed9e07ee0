//! JSON-lines proof files.
//!
//! ```text
//! {"hypotheses": ["a", "a => b"]}
//! {"concl": "a", "by": "HYP 0"}
//! {"concl": "a => b", "by": "HYP 1"}
//! {"concl": "b", "by": "MP 1 2"}
//! ```
//!
//! `MP i j` cites 1-based steps: `i` proves `A`, `j` proves `A => C`.
//! Hypotheses are 0-based. Blank lines and lines starting with `#` are
//! skipped. The header is optional when there are no hypotheses.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::proof::{Justification, Proof, ProofStep};
use crate::formula::Formula;
use crate::parser::{parse, ParseError};
use crate::schema::{Meta, SchemaError, SchemaId, Substitution};

#[derive(Debug, Error)]
pub enum ProofFormatError {
    #[error("line {line}: {source}")]
    Json { line: usize, source: serde_json::Error },
    #[error("line {line}: {source}")]
    Formula { line: usize, source: ParseError },
    #[error("line {line}: {source}")]
    Schema { line: usize, source: SchemaError },
    #[error("line {line}: cannot read justification {text:?}")]
    Justification { line: usize, text: String },
    #[error("line {line}: the hypotheses header must come first")]
    LateHeader { line: usize },
}

#[derive(Serialize, Deserialize)]
struct Header {
    hypotheses: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct StepLine {
    concl: String,
    by: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    sub: BTreeMap<String, String>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Line {
    Header(Header),
    Step(StepLine),
}

pub fn parse_proof(text: &str) -> Result<Proof, ProofFormatError> {
    let mut proof = Proof::default();
    let mut seen_step = false;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let raw = raw.trim();
        if raw.is_empty() || raw.starts_with('#') {
            continue;
        }
        let record: Line = serde_json::from_str(raw).map_err(|source| ProofFormatError::Json { line, source })?;
        match record {
            Line::Header(h) => {
                if seen_step || !proof.hypotheses.is_empty() {
                    return Err(ProofFormatError::LateHeader { line });
                }
                proof.hypotheses = h
                    .hypotheses
                    .iter()
                    .map(|t| parse(t).map_err(|source| ProofFormatError::Formula { line, source }))
                    .collect::<Result<_, _>>()?;
            }
            Line::Step(s) => {
                seen_step = true;
                let conclusion = parse(&s.concl).map_err(|source| ProofFormatError::Formula { line, source })?;
                let by = parse_by(&s.by, &s.sub, line)?;
                proof.steps.push(ProofStep { conclusion, by });
            }
        }
    }
    Ok(proof)
}

fn parse_by(text: &str, sub: &BTreeMap<String, String>, line: usize) -> Result<Justification, ProofFormatError> {
    let bad = || ProofFormatError::Justification { line, text: text.to_string() };
    let words: Vec<&str> = text.split_whitespace().collect();
    match words.as_slice() {
        ["HYP", k] => Ok(Justification::Hypothesis(k.parse().map_err(|_| bad())?)),
        ["MP", i, j] => {
            let i: usize = i.parse().map_err(|_| bad())?;
            let j: usize = j.parse().map_err(|_| bad())?;
            if i == 0 || j == 0 {
                return Err(bad());
            }
            Ok(Justification::Mp { minor: i - 1, major: j - 1 })
        }
        [name] => {
            let schema: SchemaId = name.parse().map_err(|source| ProofFormatError::Schema { line, source })?;
            let mut map = Substitution::new();
            for (k, v) in sub {
                let meta: Meta = k.parse().map_err(|source| ProofFormatError::Schema { line, source })?;
                let f = parse(v).map_err(|source| ProofFormatError::Formula { line, source })?;
                map.insert(meta, f);
            }
            Ok(Justification::Axiom { schema, sub: map })
        }
        _ => Err(bad()),
    }
}

pub fn write_proof(p: &Proof) -> String {
    let mut out = String::new();
    if !p.hypotheses.is_empty() {
        let header = Header { hypotheses: p.hypotheses.iter().map(Formula::to_string).collect() };
        out.push_str(&serde_json::to_string(&header).expect("serializable"));
        out.push('\n');
    }
    for s in &p.steps {
        let sub = match &s.by {
            Justification::Axiom { sub, .. } => sub.iter().map(|(m, f)| (m.to_string(), f.to_string())).collect(),
            _ => BTreeMap::new(),
        };
        let line = StepLine { concl: s.conclusion.to_string(), by: s.by.to_string(), sub };
        out.push_str(&serde_json::to_string(&line).expect("serializable"));
        out.push('\n');
    }
    out
}
