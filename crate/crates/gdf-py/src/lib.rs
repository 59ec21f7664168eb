//! Python bindings: a thin string-in/string-out layer over the gdf crate.
//! Diagrams travel as canonical codes, formal sums as lists of
//! (key, coefficient) pairs, and tables and reports as JSON strings.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use gdf::braid;
use gdf::diagram::{GaussDiagram, PlanarDiagram};
use gdf::expansion::{self, FormulaTable};
use gdf::formal::FormalSum;
use gdf::oracle::{alexander, c2_invariant, eval_singular_pd};
use gdf::projection::{Pipeline, Routing};
use gdf::tree;
use gdf::verify;
use gdf::words;

fn err(e: gdf::error::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn jerr(e: serde_json::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn pairs(x: &FormalSum<String>) -> Vec<(String, i64)> {
    x.iter().map(|(k, c)| (k.clone(), c)).collect()
}

fn routing(name: &str) -> PyResult<Routing> {
    match name {
        "standard" => Ok(Routing::Standard),
        "reverse" => Ok(Routing::Reverse),
        other => Err(PyValueError::new_err(format!(
            "unknown routing {other:?}; expected standard or reverse"
        ))),
    }
}

fn braid_word(word: Vec<i64>) -> Vec<(usize, i8)> {
    word.iter()
        .map(|&v| (v.unsigned_abs() as usize, if v < 0 { -1 } else { 1 }))
        .collect()
}

/// Canonical code of a diagram (also validates the input).
#[pyfunction]
fn canonical(code: &str) -> PyResult<String> {
    Ok(GaussDiagram::parse(code).map_err(err)?.canonical_key())
}

/// Sum over all subdiagrams, as (code, coefficient) pairs.
#[pyfunction]
fn s(code: &str) -> PyResult<Vec<(String, i64)>> {
    let d = GaussDiagram::parse(code).map_err(err)?;
    Ok(pairs(&expansion::s_diagram(&d)))
}

/// Signed inverse of the subdiagram sum.
#[pyfunction]
fn s_inv(code: &str) -> PyResult<Vec<(String, i64)>> {
    let d = GaussDiagram::parse(code).map_err(err)?;
    Ok(pairs(&expansion::s_inv_diagram(&d)))
}

/// Snip-tree serialization of a diagram.
#[pyfunction]
fn tree_text(code: &str) -> PyResult<String> {
    let d = GaussDiagram::parse(code).map_err(err)?;
    Ok(tree::c(&d).to_string())
}

/// Whether the diagram's snip tree is descending.
#[pyfunction]
fn is_descending(code: &str) -> PyResult<bool> {
    let d = GaussDiagram::parse(code).map_err(err)?;
    Ok(tree::c(&d).is_descending())
}

/// Projection to a signed sum of descending planar diagrams; keys are
/// planar diagram codes.
#[pyfunction]
#[pyo3(signature = (code, degree=2, route="standard"))]
fn project(code: &str, degree: usize, route: &str) -> PyResult<Vec<(String, i64)>> {
    let d = GaussDiagram::parse(code).map_err(err)?;
    let mut pipe = Pipeline::new(c2_invariant(), degree).with_routing(routing(route)?);
    Ok(pairs(&pipe.p_diagram(&d).map_err(err)?))
}

/// Formula table of the degree-2 invariant, as JSON.
#[pyfunction]
#[pyo3(signature = (degree=2))]
fn omega_table(degree: usize) -> PyResult<String> {
    let table = Pipeline::new(c2_invariant(), degree)
        .omega_table()
        .map_err(err)?;
    serde_json::to_string(&table).map_err(jerr)
}

/// Evaluate a formula table (JSON) on a diagram code.
#[pyfunction]
fn eval_table(table_json: &str, code: &str) -> PyResult<i64> {
    let table: FormulaTable = serde_json::from_str(table_json).map_err(jerr)?;
    let d = GaussDiagram::parse(code).map_err(err)?;
    Ok(expansion::eval_formula(&table, &d))
}

/// Close a braid word (signed generator indices) and return the
/// (diagram code, planar code) of the resulting long knot.
#[pyfunction]
fn braid_close(strands: usize, word: Vec<i64>) -> PyResult<(String, String)> {
    let (g, pd) = braid::braid_closure(strands, &braid_word(word)).map_err(err)?;
    Ok((g.canonical_key(), pd.canonical_key()))
}

/// Degree-2 coefficient of a planar diagram (doubles resolved by the
/// difference relation).
#[pyfunction]
fn c2(pd_code: &str) -> PyResult<i64> {
    let pd = PlanarDiagram::from_key(pd_code).map_err(err)?;
    eval_singular_pd(&pd, &c2_invariant()).map_err(err)
}

/// Alexander polynomial of a planar diagram, pretty-printed.
#[pyfunction]
fn alexander_poly(pd_code: &str) -> PyResult<String> {
    let pd = PlanarDiagram::from_key(pd_code).map_err(err)?;
    Ok(alexander(&pd).map_err(err)?.to_string_pretty())
}

/// Signed subword expansion of a word like "a b a'".
#[pyfunction]
fn word_s_inv(code: &str) -> PyResult<Vec<(String, i64)>> {
    let w = words::Word::parse(code).map_err(err)?;
    Ok(pairs(&words::s_inv_word_one(&w)))
}

/// Subword formula table for a named invariant (exp_<g>, products with
/// `*`, or lk_<i>_<j>), as JSON.
#[pyfunction]
#[pyo3(signature = (invariant, alphabet=None, strands=3))]
fn word_omega_table(
    invariant: &str,
    alphabet: Option<Vec<String>>,
    strands: usize,
) -> PyResult<String> {
    let nu = words::named_invariant(invariant, strands).map_err(err)?;
    let alphabet = alphabet.unwrap_or_else(|| {
        if invariant.starts_with("lk_") {
            words::pure_braid_alphabet(strands)
        } else {
            vec!["a".to_string(), "b".to_string()]
        }
    });
    let table = words::omega_word_table(&nu, nu.degree, &alphabet).map_err(err)?;
    serde_json::to_string(&table).map_err(jerr)
}

/// Evaluate a word formula table (JSON) on a word.
#[pyfunction]
fn word_eval_table(table_json: &str, code: &str) -> PyResult<i64> {
    let table: words::WordFormulaTable = serde_json::from_str(table_json).map_err(jerr)?;
    let w = words::Word::parse(code).map_err(err)?;
    Ok(words::eval_word_formula(&table, &w))
}

/// Exponent sum of a pure-braid band generator: the linking number of two
/// strands.
#[pyfunction]
fn braid_linking(code: &str, strands: usize, i: usize, j: usize) -> PyResult<i64> {
    let w = words::Word::parse(code).map_err(err)?;
    words::braid_linking(&w, strands, (i, j)).map_err(err)
}

/// Run a verification suite (lemma1, lemma2, lemma3, main, words) and
/// return its JSON report.
#[pyfunction]
#[pyo3(signature = (suite, seed=7))]
fn verify_suite(suite: &str, seed: u64) -> PyResult<String> {
    let report = verify::run_suite(suite, seed).map_err(err)?;
    serde_json::to_string(&report).map_err(jerr)
}

#[pymodule]
fn gdf_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(canonical, m)?)?;
    m.add_function(wrap_pyfunction!(s, m)?)?;
    m.add_function(wrap_pyfunction!(s_inv, m)?)?;
    m.add_function(wrap_pyfunction!(tree_text, m)?)?;
    m.add_function(wrap_pyfunction!(is_descending, m)?)?;
    m.add_function(wrap_pyfunction!(project, m)?)?;
    m.add_function(wrap_pyfunction!(omega_table, m)?)?;
    m.add_function(wrap_pyfunction!(eval_table, m)?)?;
    m.add_function(wrap_pyfunction!(braid_close, m)?)?;
    m.add_function(wrap_pyfunction!(c2, m)?)?;
    m.add_function(wrap_pyfunction!(alexander_poly, m)?)?;
    m.add_function(wrap_pyfunction!(word_s_inv, m)?)?;
    m.add_function(wrap_pyfunction!(word_omega_table, m)?)?;
    m.add_function(wrap_pyfunction!(word_eval_table, m)?)?;
    m.add_function(wrap_pyfunction!(braid_linking, m)?)?;
    m.add_function(wrap_pyfunction!(verify_suite, m)?)?;
    Ok(())
}
