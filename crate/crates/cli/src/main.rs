use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ld_core::graph::script_io::load_script;
use ld_core::hilbert::{check_proof, deduction_at, necessitate, parse_proof, write_proof, Proof, TransformError};
use ld_core::validity::decide_with;
use ld_core::{
    check_script, eval, fragment_of, kernel_form, model_io, parse, parse_graph, print, read, translate, Formula,
    Graph, Limits, Model, Verdict,
};
use serde_json::{json, Value};

const PARADOX_MODEL: &str = include_str!("../../core/corpus/models/liar_paradox.json");

#[derive(Parser)]
#[command(name = "ldcheck", version, about = "Check formulas, proofs and graphs of the Double Logic LD")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Bounds {
    /// Largest frame searched
    #[arg(long, env = "LD_MAX_WORLDS", default_value_t = 3)]
    max_worlds: usize,
    /// Largest number of atoms of each kind; 0 lifts the cap
    #[arg(long, env = "LD_MAX_ATOMS", default_value_t = 2)]
    max_atoms: usize,
}

impl Bounds {
    fn limits(&self) -> Limits {
        Limits { max_worlds: self.max_worlds, max_atoms: (self.max_atoms > 0).then_some(self.max_atoms) }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the canonical form and fragment flags
    Parse { formula: String },
    /// Evaluate a formula at a world of a model file
    Eval {
        #[arg(long)]
        model: PathBuf,
        /// World name; defaults to the actual world
        #[arg(long)]
        world: Option<String>,
        formula: String,
    },
    /// Bounded validity with a countermodel on failure
    Valid {
        formula: String,
        #[command(flatten)]
        bounds: Bounds,
        /// Also write the countermodel as DOT
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Check a proof file
    CheckProof { file: PathBuf },
    /// Proof of +C from a hypothesis-free proof of C
    Necessitate { file: PathBuf },
    /// Discharge a hypothesis by the deduction theorem
    Deduce {
        file: PathBuf,
        /// 0-based hypothesis index; defaults to the last one
        #[arg(long)]
        discharge: Option<usize>,
    },
    #[command(subcommand)]
    Graph(GraphCommand),
    #[command(subcommand)]
    Demo(Demo),
}

#[derive(Subcommand)]
enum GraphCommand {
    /// Formula to graph
    Translate { formula: String },
    /// Graph to formula
    Read { graph: String },
    /// Replay a script's steps from the given graph
    Apply {
        graph: String,
        #[arg(long)]
        script: PathBuf,
    },
    /// Replay a script from the empty sheet
    CheckGev {
        #[arg(long)]
        script: PathBuf,
        #[command(flatten)]
        bounds: Bounds,
    },
}

#[derive(Subcommand)]
enum Demo {
    /// The two-world model of x <=> !x and its consequences
    Paradox,
}

/// Result tag of a command, mapped onto the exit code.
enum Status {
    Yes,
    No,
    Unknown,
}

struct Failure(String);

impl<E: Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Run = Result<Status, Failure>;

fn emit(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn load_proof(path: &Path) -> Result<Proof, Failure> {
    parse_proof(&read_file(path)?).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn verdict_json(v: &Verdict) -> Value {
    let mut out = json!({"verdict": v.tag(), "bound": v.bound()});
    if let Some(m) = v.countermodel() {
        out["model"] = model_io::to_json_value(m);
    }
    out
}

fn status_of(v: &Verdict) -> Status {
    match v {
        Verdict::Valid { .. } => Status::Yes,
        Verdict::CounterModel { .. } => Status::No,
        Verdict::Unknown { .. } => Status::Unknown,
    }
}

fn cmd_parse(text: &str) -> Run {
    let f = parse(text)?;
    let fr = fragment_of(&f);
    emit(&json!({
        "formula": print(&f),
        "kernel": print(&kernel_form(&f)),
        "fragments": {"fc": fr.in_fc, "fi": fr.in_fi, "fa": fr.in_fa},
    }));
    Ok(Status::Yes)
}

fn cmd_eval(model: &Path, world: Option<&str>, text: &str) -> Run {
    let m = model_io::from_json_str(&read_file(model)?)?;
    let w = match world {
        Some(name) => m.world(name).ok_or_else(|| Failure(format!("no world named {name:?}")))?,
        None => m.frame().actual(),
    };
    let value = eval(&m, w, &parse(text)?)?;
    println!("{}", u8::from(value));
    Ok(if value { Status::Yes } else { Status::No })
}

fn cmd_valid(text: &str, bounds: &Bounds, dot: Option<&Path>) -> Run {
    let f = parse(text)?;
    let v = decide_with(&f, &bounds.limits());
    emit(&verdict_json(&v));
    match &v {
        Verdict::Unknown { .. } => eprintln!("Unknown (atom cap {} per kind)", bounds.max_atoms),
        _ => eprintln!("{} (bound {})", v.tag(), v.bound()),
    }
    if let (Some(path), Some(m)) = (dot, v.countermodel()) {
        std::fs::write(path, model_io::to_dot(m)).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    }
    Ok(status_of(&v))
}

fn cmd_check_proof(path: &Path) -> Run {
    let p = load_proof(path)?;
    match check_proof(&p) {
        Ok(()) => {
            let c = p.conclusion().expect("checked proofs are nonempty");
            emit(&json!({"ok": true, "steps": p.steps.len(), "hypotheses": p.hypotheses.len(), "conclusion": print(c)}));
            eprintln!("ok: {} steps prove {c}", p.steps.len());
            Ok(Status::Yes)
        }
        Err(e) => {
            emit(&json!({"ok": false, "step": e.step(), "error": e.to_string()}));
            eprintln!("{e}");
            Ok(Status::No)
        }
    }
}

fn emit_transformed(r: Result<Proof, TransformError>) -> Run {
    match r {
        Ok(p) => {
            print!("{}", write_proof(&p));
            eprintln!("{} steps", p.steps.len());
            Ok(Status::Yes)
        }
        Err(TransformError::Invalid(e)) => {
            eprintln!("input proof does not check: {e}");
            Ok(Status::No)
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_deduce(path: &Path, k: Option<usize>) -> Run {
    let p = load_proof(path)?;
    let k = match k {
        Some(k) => k,
        None => p.hypotheses.len().checked_sub(1).ok_or_else(|| Failure("proof has no hypotheses".into()))?,
    };
    emit_transformed(deduction_at(&p, k))
}

fn graph_arg(text: &str) -> Result<Graph, Failure> {
    let text = if text == "λ" { "" } else { text };
    Ok(parse_graph(text)?)
}

fn replay(start: Graph, script: &Path) -> Result<Result<Graph, Value>, Failure> {
    let mut s = load_script(script)?;
    s.start = start;
    Ok(check_script(&s).map_err(|e| {
        eprintln!("{e}");
        json!({"ok": false, "step": e.step, "rule": e.rule.name(), "addr": e.addr, "error": e.error.to_string()})
    }))
}

fn cmd_graph(cmd: &GraphCommand) -> Run {
    match cmd {
        GraphCommand::Translate { formula } => {
            let g = translate(&parse(formula)?);
            emit(&json!({"graph": g.to_string(), "nodes": serde_json::to_value(&g)?}));
            Ok(Status::Yes)
        }
        GraphCommand::Read { graph } => {
            let f = read(&graph_arg(graph)?);
            emit(&json!({"formula": print(&f)}));
            Ok(Status::Yes)
        }
        GraphCommand::Apply { graph, script } => match replay(graph_arg(graph)?, script)? {
            Ok(g) => {
                emit(&json!({"ok": true, "graph": g.to_string()}));
                Ok(Status::Yes)
            }
            Err(report) => {
                emit(&report);
                Ok(Status::No)
            }
        },
        GraphCommand::CheckGev { script, bounds } => {
            let s = load_script(script)?;
            if !s.start.is_empty() {
                emit(&json!({"ok": false, "error": format!("script starts at {}, not the empty sheet", s.start)}));
                eprintln!("not a derivation from the empty sheet");
                return Ok(Status::No);
            }
            match replay(Graph::empty(), script)? {
                Ok(g) => {
                    let f = read(&g);
                    let v = decide_with(&f, &bounds.limits());
                    emit(&json!({"ok": true, "graph": g.to_string(), "reading": print(&f), "reading_validity": verdict_json(&v)}));
                    eprintln!("{g} is derivable from the empty sheet");
                    Ok(Status::Yes)
                }
                Err(report) => {
                    emit(&report);
                    Ok(Status::No)
                }
            }
        }
    }
}

fn paradox() -> Run {
    let m: Model = model_io::from_json_str(PARADOX_MODEL)?;
    let z = parse("x <=> !x")?;
    let actual = m.frame().actual();
    let value = eval(&m, actual, &z)?;
    let mut all = value;
    let mut consequences = Vec::new();
    for rhs in ["~+x", "~!x", "~x", "~*x"] {
        let f = Formula::implies(z.clone(), parse(rhs)?);
        let v = ld_core::decide(&f, 3);
        eprintln!("{f}: {}", v.tag());
        all &= v.is_valid();
        consequences.push(json!({"formula": print(&f), "verdict": v.tag(), "bound": v.bound()}));
    }
    eprintln!("{m}");
    eprintln!("x <=> !x at {}: {}", m.frame().name(actual), u8::from(value));
    emit(&json!({
        "model": model_io::to_json_value(&m),
        "world": m.frame().name(actual),
        "formula": print(&z),
        "value": u8::from(value),
        "consequences": consequences,
    }));
    Ok(if all { Status::Yes } else { Status::No })
}

fn run(cli: Cli) -> Run {
    match cli.command {
        Command::Parse { formula } => cmd_parse(&formula),
        Command::Eval { model, world, formula } => cmd_eval(&model, world.as_deref(), &formula),
        Command::Valid { formula, bounds, dot } => cmd_valid(&formula, &bounds, dot.as_deref()),
        Command::CheckProof { file } => cmd_check_proof(&file),
        Command::Necessitate { file } => emit_transformed(necessitate(&load_proof(&file)?)),
        Command::Deduce { file, discharge } => cmd_deduce(&file, discharge),
        Command::Graph(g) => cmd_graph(&g),
        Command::Demo(Demo::Paradox) => paradox(),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Status::Yes) => ExitCode::SUCCESS,
        Ok(Status::No) => ExitCode::from(1),
        Ok(Status::Unknown) => ExitCode::from(3),
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
