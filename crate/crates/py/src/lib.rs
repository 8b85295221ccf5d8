//! Python bindings for `fibrep`.
//!
//! Digit strings cross the boundary in machine form (`"10-1001"`); `ī` is
//! accepted on input.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use fibrep::automata::format::{to_dot, to_text};
use fibrep::catalog;
use fibrep::dict_order::{self, Fallback};
use fibrep::fib::{self, Anchor, RepString};
use fibrep::perfection::{self, Domain, PerfectionReport, SystemSpec};
use fibrep::search::{self, Pruning, SearchConfig};

fn err(e: fibrep::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, v: &impl serde::Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn parse_rep(s: &str) -> PyResult<RepString> {
    RepString::parse(s).map_err(err)
}

fn parse_anchor(s: &str) -> PyResult<Anchor> {
    s.parse().map_err(err)
}

fn parse_domain(s: &str) -> PyResult<Domain> {
    match s {
        "naturals" | "N" => Ok(Domain::Naturals),
        "integers" | "Z" => Ok(Domain::Integers),
        _ => Err(PyValueError::new_err(format!("unknown domain {s:?}"))),
    }
}

/// Result of a perfection check.
#[pyclass(frozen, module = "fibrep_py")]
struct Report {
    inner: PerfectionReport,
}

#[pymethods]
impl Report {
    #[getter]
    fn perfect(&self) -> bool {
        self.inner.perfect
    }

    #[getter]
    fn complete(&self) -> bool {
        self.inner.complete()
    }

    #[getter]
    fn unambiguous(&self) -> bool {
        self.inner.unambiguous()
    }

    /// The full report as nested dicts and lists.
    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.inner)
    }

    fn __repr__(&self) -> String {
        format!(
            "Report(system={:?}, complete={}, unambiguous={})",
            self.inner.system,
            self.inner.complete(),
            self.inner.unambiguous()
        )
    }
}

/// A numeration system: a rule language and how its strings are valued.
#[pyclass(frozen, module = "fibrep_py")]
struct System {
    inner: SystemSpec,
}

#[pymethods]
impl System {
    /// A named system from the catalog.
    #[staticmethod]
    fn catalog(name: &str) -> PyResult<Self> {
        Ok(System {
            inner: catalog::get_system(name).map_err(err)?,
        })
    }

    #[staticmethod]
    #[pyo3(signature = (regex, digits = vec![0, 1], anchor = "f2", domain = "naturals", offsets = None))]
    fn from_regex(regex: &str, digits: Vec<i8>, anchor: &str, domain: &str, offsets: Option<Vec<i64>>) -> PyResult<Self> {
        let mut sys = SystemSpec::from_regex(regex, regex, &digits, parse_anchor(anchor)?, parse_domain(domain)?)
            .map_err(err)?;
        if let Some(o) = offsets {
            sys = sys.with_offsets(&o).map_err(err)?;
        }
        Ok(System { inner: sys })
    }

    /// Largest representations in dictionary order.
    #[staticmethod]
    fn max_dict() -> PyResult<Self> {
        Ok(System {
            inner: dict_order::build_max_dict_system().map_err(err)?,
        })
    }

    /// The `t`-th largest representations, for `t` in 1..=3.
    #[staticmethod]
    #[pyo3(signature = (t, fallback = "smallest"))]
    fn rank(t: usize, fallback: &str) -> PyResult<Self> {
        let fallback = match fallback {
            "smallest" => Fallback::Smallest,
            "largest" => Fallback::Largest,
            _ => return Err(PyValueError::new_err(format!("unknown fallback {fallback:?}"))),
        };
        Ok(System {
            inner: dict_order::build_rank_t_system(t, fallback).map_err(err)?,
        })
    }

    /// Same rule with other completeness offsets.
    fn with_offsets(&self, offsets: Vec<i64>) -> PyResult<Self> {
        Ok(System {
            inner: self.inner.clone().with_offsets(&offsets).map_err(err)?,
        })
    }

    #[getter]
    fn name(&self) -> &str {
        &self.inner.name
    }

    #[getter]
    fn domain(&self) -> &'static str {
        match self.inner.domain {
            Domain::Naturals => "naturals",
            Domain::Integers => "integers",
        }
    }

    #[getter]
    fn digits(&self) -> Vec<i8> {
        self.inner.digits().to_vec()
    }

    #[getter]
    fn offsets(&self) -> Vec<i64> {
        self.inner.completeness_offsets.clone()
    }

    /// (complete, trimmed) state counts of the rule automaton.
    #[getter]
    fn rule_states(&self) -> (usize, usize) {
        let c = self.inner.state_counts();
        (c.complete, c.trimmed)
    }

    fn check(&self, py: Python<'_>) -> PyResult<Report> {
        let r = py.detach(|| perfection::check_perfect(&self.inner)).map_err(err)?;
        Ok(Report { inner: r })
    }

    /// Representation of `n`, or `ValueError` when there is none.
    fn rep(&self, n: i64) -> PyResult<String> {
        Ok(perfection::find_representation(&self.inner, n).map_err(err)?.machine())
    }

    fn table(&self, lo: i64, hi: i64) -> PyResult<Vec<(i64, String)>> {
        (lo..=hi).map(|n| Ok((n, self.rep(n)?))).collect()
    }

    fn accepts(&self, rep: &str) -> PyResult<bool> {
        Ok(self.inner.accepts(parse_rep(rep)?.digits()))
    }

    fn value(&self, rep: &str) -> PyResult<i64> {
        Ok(self.inner.value_of(parse_rep(rep)?.digits()))
    }

    /// All valid representations of length at most `max_len`, by value.
    fn enumerate(&self, max_len: usize) -> Vec<(i64, Vec<String>)> {
        let mut v: Vec<(i64, Vec<String>)> = perfection::enumerate_representations(&self.inner, max_len)
            .into_iter()
            .map(|(n, reps)| (n, reps.iter().map(|r| r.machine()).collect()))
            .collect();
        v.sort();
        v
    }

    fn rule_text(&self) -> String {
        to_text(&self.inner.rule)
    }

    #[pyo3(signature = (trim = true))]
    fn rule_dot(&self, trim: bool) -> String {
        to_dot(&self.inner.rule, &self.inner.name, trim)
    }

    fn __repr__(&self) -> String {
        format!("System({:?})", self.inner.name)
    }
}

/// Names of the catalog systems.
#[pyfunction]
fn list_systems() -> Vec<&'static str> {
    catalog::list_systems().iter().map(|e| e.name).collect()
}

#[pyfunction]
#[pyo3(signature = (rep, anchor = "f2"))]
fn eval_rep(rep: &str, anchor: &str) -> PyResult<i64> {
    Ok(fib::eval_rep(parse_rep(rep)?.digits(), parse_anchor(anchor)?))
}

#[pyfunction]
fn zeckendorf(n: u64) -> String {
    fib::zeckendorf_encode(n).machine()
}

/// Whether `s` comes after `t` in dictionary order.
#[pyfunction]
fn dict_greater(s: &str, t: &str) -> PyResult<bool> {
    Ok(dict_order::dict_greater(parse_rep(s)?.digits(), parse_rep(t)?.digits()))
}

/// Perfect systems among automata with at most `max_states` states.
#[pyfunction]
#[pyo3(signature = (max_states, heuristic = false))]
fn search_perfect<'py>(py: Python<'py>, max_states: usize, heuristic: bool) -> PyResult<Bound<'py, PyAny>> {
    let mut cfg = SearchConfig::new(max_states);
    if heuristic {
        cfg.pruning = Pruning::MonotoneHeuristic;
    }
    let out = py.detach(|| search::search_perfect(&cfg)).map_err(err)?;
    to_py(py, &out)
}

#[pymodule]
pub fn fibrep_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<System>()?;
    m.add_class::<Report>()?;
    m.add_function(wrap_pyfunction!(list_systems, m)?)?;
    m.add_function(wrap_pyfunction!(eval_rep, m)?)?;
    m.add_function(wrap_pyfunction!(zeckendorf, m)?)?;
    m.add_function(wrap_pyfunction!(dict_greater, m)?)?;
    m.add_function(wrap_pyfunction!(search_perfect, m)?)?;
    Ok(())
}
