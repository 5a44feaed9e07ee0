use ld_core::graph::script_io::parse_script;
use ld_core::hilbert::{check_proof as check, deduction_at, necessitate as lift, parse_proof, write_proof};
use ld_core::validity::decide_with;
use ld_core::{model_io, parse_graph, print, Limits, Verdict};
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(ldlogic, LdError, PyException);

fn err(e: impl std::fmt::Display) -> PyErr {
    LdError::new_err(e.to_string())
}

fn formula(text: &str) -> PyResult<ld_core::Formula> {
    ld_core::parse(text).map_err(err)
}

/// Canonical text of a formula.
#[pyfunction]
fn parse(text: &str) -> PyResult<String> {
    Ok(print(&formula(text)?))
}

/// Fragment flags as a dict with keys fc, fi, fa.
#[pyfunction]
fn fragments<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyDict>> {
    let fr = ld_core::fragment_of(&formula(text)?);
    let d = PyDict::new(py);
    d.set_item("fc", fr.in_fc)?;
    d.set_item("fi", fr.in_fi)?;
    d.set_item("fa", fr.in_fa)?;
    Ok(d)
}

/// Truth value at a world of a model given as JSON; the actual world by
/// default.
#[pyfunction]
#[pyo3(signature = (model_json, text, world=None))]
fn evaluate(model_json: &str, text: &str, world: Option<&str>) -> PyResult<bool> {
    let m = model_io::from_json_str(model_json).map_err(err)?;
    let w = match world {
        Some(name) => m.world(name).ok_or_else(|| err(format!("no world named {name:?}")))?,
        None => m.frame().actual(),
    };
    ld_core::eval(&m, w, &formula(text)?).map_err(err)
}

/// Bounded validity. Returns a dict with `verdict`, `bound` and, for a
/// countermodel, `model` as JSON text.
#[pyfunction]
#[pyo3(signature = (text, max_worlds=3, max_atoms=None))]
fn decide<'py>(py: Python<'py>, text: &str, max_worlds: usize, max_atoms: Option<usize>) -> PyResult<Bound<'py, PyDict>> {
    let f = formula(text)?;
    let v = py.detach(|| decide_with(&f, &Limits { max_worlds, max_atoms }));
    let d = PyDict::new(py);
    d.set_item("verdict", v.tag())?;
    d.set_item("bound", v.bound())?;
    if let Verdict::CounterModel { model, .. } = &v {
        d.set_item("model", model_io::to_json_string(model))?;
    }
    Ok(d)
}

/// `None` if the proof checks, else the 1-based failing step and reason.
#[pyfunction]
fn check_proof(text: &str) -> PyResult<Option<(Option<usize>, String)>> {
    let p = parse_proof(text).map_err(err)?;
    Ok(check(&p).err().map(|e| (e.step(), e.to_string())))
}

#[pyfunction]
fn necessitate(text: &str) -> PyResult<String> {
    let p = parse_proof(text).map_err(err)?;
    Ok(write_proof(&lift(&p).map_err(err)?))
}

/// Discharges hypothesis `k`, the last one by default.
#[pyfunction]
#[pyo3(signature = (text, k=None))]
fn deduce(text: &str, k: Option<usize>) -> PyResult<String> {
    let p = parse_proof(text).map_err(err)?;
    let k = match k {
        Some(k) => k,
        None => p.hypotheses.len().checked_sub(1).ok_or_else(|| err("proof has no hypotheses"))?,
    };
    Ok(write_proof(&deduction_at(&p, k).map_err(err)?))
}

#[pyfunction]
fn translate(text: &str) -> PyResult<String> {
    Ok(ld_core::translate(&formula(text)?).to_string())
}

#[pyfunction]
fn read_graph(text: &str) -> PyResult<String> {
    Ok(print(&ld_core::read(&parse_graph(text).map_err(err)?)))
}

/// Replays a script given as JSON lines and returns the final graph.
/// Witnesses must be inline.
#[pyfunction]
#[pyo3(signature = (text, start=None))]
fn replay_script(text: &str, start: Option<&str>) -> PyResult<String> {
    let mut s = parse_script(text).map_err(err)?;
    if let Some(g) = start {
        s.start = parse_graph(g).map_err(err)?;
    }
    Ok(ld_core::check_script(&s).map_err(err)?.to_string())
}

/// Labeled posets on `n` worlds, each as its successor lists.
#[pyfunction]
fn posets(n: usize) -> PyResult<Vec<Vec<Vec<usize>>>> {
    let frames = ld_core::enumerate_posets(n).map_err(err)?;
    Ok(frames
        .iter()
        .map(|f| (0..n).map(|a| (0..n).filter(|&b| f.related(a, b)).collect()).collect())
        .collect())
}

#[pymodule]
pub fn ldlogic(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("LdError", m.py().get_type::<LdError>())?;
    m.add_function(wrap_pyfunction!(parse, m)?)?;
    m.add_function(wrap_pyfunction!(fragments, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(decide, m)?)?;
    m.add_function(wrap_pyfunction!(check_proof, m)?)?;
    m.add_function(wrap_pyfunction!(necessitate, m)?)?;
    m.add_function(wrap_pyfunction!(deduce, m)?)?;
    m.add_function(wrap_pyfunction!(translate, m)?)?;
    m.add_function(wrap_pyfunction!(read_graph, m)?)?;
    m.add_function(wrap_pyfunction!(replay_script, m)?)?;
    m.add_function(wrap_pyfunction!(posets, m)?)?;
    Ok(())
}
