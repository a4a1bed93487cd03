//! Python module `keyrecycle`. Probabilities cross the boundary as exact
//! "num/den" strings, ready for `fractions.Fraction`.

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyBytes, PyDict};

use keyrecycle::attack::{posterior_entropy, run_attack_exact, run_attack_montecarlo};
use keyrecycle::compose::{compose_run, compose_simulate_exact, ComposeEnv, ToyQkdFunctionality};
use keyrecycle::hashfam::{measure_asu2, measure_axu2, EpsilonReport, UniversalKind};
use keyrecycle::ratio::{format_ratio, parse_ratio};
use keyrecycle::ucsim::{impersonation_distance, worst_case_distance};
use keyrecycle::wcauth::{self, AuthKey, TaggedMessage, Verdict};
use keyrecycle::{Error, FieldCtx, FieldElem, HashFamily};

create_exception!(keyrecycle, BudgetExceededError, PyException);

fn err(e: Error) -> PyErr {
    match e {
        Error::BudgetExceeded { .. } => BudgetExceededError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

#[pyclass(name = "HashFamily", frozen)]
struct PyHashFamily {
    inner: HashFamily,
}

fn wrap(r: keyrecycle::Result<HashFamily>) -> PyResult<PyHashFamily> {
    r.map(|inner| PyHashFamily { inner }).map_err(err)
}

fn epsilon_dict<'py>(py: Python<'py>, rep: &EpsilonReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("epsilon", format_ratio(&rep.epsilon))?;
    let witness = rep.witness.as_ref().map(|w| match *w {
        keyrecycle::hashfam::Witness::Xor { x1, x2, t } => vec![x1, x2, t as u64],
        keyrecycle::hashfam::Witness::Strong { x1, x2, t1, t2 } => vec![x1, x2, t1 as u64, t2 as u64],
    });
    d.set_item("witness", witness)?;
    Ok(d)
}

#[pymethods]
impl PyHashFamily {
    /// Parses a descriptor such as "mul:m=4" or "toeplitz:n=8,m=3".
    #[new]
    fn new(descriptor: &str) -> PyResult<Self> {
        wrap(HashFamily::parse(descriptor))
    }

    #[staticmethod]
    fn mul(m: u32) -> PyResult<Self> {
        wrap(HashFamily::mul(m))
    }

    #[staticmethod]
    fn poly(m: u32, blocks: u32) -> PyResult<Self> {
        wrap(HashFamily::poly(m, blocks))
    }

    #[staticmethod]
    fn toeplitz(n: u32, m: u32) -> PyResult<Self> {
        wrap(HashFamily::toeplitz(n, m))
    }

    #[staticmethod]
    fn counterexample(m: u32) -> PyResult<Self> {
        wrap(HashFamily::counterexample(m))
    }

    #[staticmethod]
    fn from_table_json(json: &str) -> PyResult<Self> {
        wrap(HashFamily::table_from_json(json))
    }

    fn lift(&self) -> Self {
        PyHashFamily { inner: self.inner.lift() }
    }

    fn to_table_json(&self) -> String {
        self.inner.to_table_json()
    }

    #[getter]
    fn descriptor(&self) -> String {
        self.inner.descriptor()
    }

    #[getter]
    fn key_count(&self) -> u64 {
        self.inner.key_count()
    }

    #[getter]
    fn message_count(&self) -> u64 {
        self.inner.message_count()
    }

    #[getter]
    fn tag_count(&self) -> u64 {
        self.inner.tag_count()
    }

    #[getter]
    fn tag_bits(&self) -> u32 {
        self.inner.tag_bits()
    }

    fn eval(&self, k: u64, x: u64) -> PyResult<u32> {
        self.inner.eval(k, x).map(|t| t.value()).map_err(err)
    }

    /// Exact epsilon; `kind` is "axu2" or "asu2".
    #[pyo3(signature = (kind = "axu2"))]
    fn epsilon<'py>(&self, py: Python<'py>, kind: &str) -> PyResult<Bound<'py, PyDict>> {
        let kind: UniversalKind = kind.parse().map_err(err)?;
        let rep = match kind {
            UniversalKind::Axu2 => measure_axu2(&self.inner),
            UniversalKind::Asu2 => measure_asu2(&self.inner),
        }
        .map_err(err)?;
        epsilon_dict(py, &rep)
    }

    fn __repr__(&self) -> String {
        format!("HashFamily({:?})", self.inner.descriptor())
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }
}

#[pyclass(name = "KeyStream")]
struct PyKeyStream {
    inner: wcauth::KeyStream,
}

#[pymethods]
impl PyKeyStream {
    #[new]
    fn new(family: &PyHashFamily, k1: u64, pads: Vec<u64>) -> PyResult<Self> {
        let inner = wcauth::KeyStream::new(&family.inner, k1, pads).map_err(err)?;
        Ok(PyKeyStream { inner })
    }

    /// The next (k1, pad) pair.
    fn next_key(&mut self) -> PyResult<(u64, u32)> {
        let key = self.inner.next_key().map_err(err)?;
        Ok((key.k1, key.k2.value()))
    }

    #[getter]
    fn remaining(&self) -> usize {
        self.inner.remaining()
    }

    #[getter]
    fn consumed_bits(&self) -> u64 {
        self.inner.consumed_bits()
    }
}

fn auth_key(fam: &HashFamily, k1: u64, k2: u64) -> PyResult<AuthKey> {
    AuthKey::new(fam, k1, k2).map_err(err)
}

/// Returns the tag for x under (k1, pad).
#[pyfunction]
fn authenticate(family: &PyHashFamily, k1: u64, k2: u64, x: u64) -> PyResult<u32> {
    let key = auth_key(&family.inner, k1, k2)?;
    Ok(wcauth::authenticate(&family.inner, key, x).map_err(err)?.t.value())
}

/// The accepted message, or None on rejection.
#[pyfunction]
fn verify(family: &PyHashFamily, k1: u64, k2: u64, x: u64, t: u64) -> PyResult<Option<u64>> {
    let key = auth_key(&family.inner, k1, k2)?;
    let t = family.inner.field().elem(t).map_err(err)?;
    Ok(match wcauth::verify(&family.inner, key, &TaggedMessage::new(x, t)) {
        Verdict::Accept(x) => Some(x),
        Verdict::Reject => None,
    })
}

#[pyfunction]
fn encode_wire<'py>(py: Python<'py>, family: &PyHashFamily, x: u64, t: u64) -> PyResult<Bound<'py, PyBytes>> {
    let t = family.inner.field().elem(t).map_err(err)?;
    let bytes = wcauth::encode_wire(&family.inner, &TaggedMessage::new(x, t)).map_err(err)?;
    Ok(PyBytes::new(py, &bytes))
}

#[pyfunction]
fn decode_wire(family: &PyHashFamily, data: &[u8]) -> PyResult<(u64, u32)> {
    let y = wcauth::decode_wire(&family.inner, data).map_err(err)?;
    Ok((y.x, y.t.value()))
}

#[pyfunction]
#[pyo3(signature = (family, recycle = true))]
fn uc_worst_case<'py>(py: Python<'py>, family: &PyHashFamily, recycle: bool) -> PyResult<Bound<'py, PyDict>> {
    let wc = worst_case_distance(&family.inner, recycle).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("distance", format_ratio(&wc.distance))?;
    d.set_item("substitution_distance", format_ratio(&wc.substitution_distance))?;
    d.set_item("impersonation_distance", format_ratio(&wc.impersonation_distance))?;
    d.set_item("witness", wc.witness.to_json().to_string())?;
    Ok(d)
}

#[pyfunction(name = "impersonation_distance")]
#[pyo3(signature = (family, x, t, recycle = true))]
fn py_impersonation_distance(family: &PyHashFamily, x: u64, t: u64, recycle: bool) -> PyResult<String> {
    let t = family.inner.field().elem(t).map_err(err)?;
    let d = impersonation_distance(&family.inner, TaggedMessage::new(x, t), recycle).map_err(err)?;
    Ok(format_ratio(&d))
}

#[pyfunction]
fn attack<'py>(py: Python<'py>, family: &PyHashFamily, rounds: u64) -> PyResult<Bound<'py, PyDict>> {
    let rep = run_attack_exact(&family.inner, rounds).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("success", format_ratio(&rep.success_prob))?;
    d.set_item("per_round", rep.per_round_conditional.iter().map(format_ratio).collect::<Vec<_>>())?;
    d.set_item("entropy_bits", rep.entropy_bits)?;
    d.set_item("entropy_formula_bits", rep.entropy_formula_bits)?;
    d.set_item("entropy_matches_formula", rep.entropy.matches())?;
    Ok(d)
}

/// (computed bits, closed-form bits, exactly equal).
#[pyfunction]
fn key_entropy(family: &PyHashFamily, rounds: u64) -> PyResult<(f64, f64, bool)> {
    let h = posterior_entropy(&family.inner, rounds).map_err(err)?;
    Ok((h.computed.to_f64(), h.formula.to_f64(), h.matches()))
}

/// (successes, rate, inside the 3-sigma interval).
#[pyfunction]
#[pyo3(signature = (family, rounds, trials, seed = 0))]
fn attack_montecarlo(family: &PyHashFamily, rounds: u64, trials: u64, seed: u64) -> PyResult<(u64, f64, bool)> {
    let r = run_attack_montecarlo(&family.inner, rounds, trials, seed).map_err(err)?;
    Ok((r.successes, r.rate, r.within_interval))
}

/// Returns (bound, ledger as CSV).
#[pyfunction]
#[pyo3(signature = (family, r, rounds, qkd_eps = "0"))]
fn compose(family: &PyHashFamily, r: u64, rounds: u64, qkd_eps: &str) -> PyResult<(String, String)> {
    let eps = parse_ratio(qkd_eps).map_err(err)?;
    let qkd = ToyQkdFunctionality::new(rounds as u32 * family.inner.tag_bits(), eps).map_err(err)?;
    let rep = compose_run(&family.inner, r, rounds, &qkd).map_err(err)?;
    Ok((format_ratio(&rep.bound), rep.ledger.to_csv()))
}

/// Exact multi-round distance; `env` is "identity" or "list-elimination".
#[pyfunction]
#[pyo3(signature = (family, r, rounds, env = "list-elimination"))]
fn compose_distance(family: &PyHashFamily, r: u64, rounds: u64, env: &str) -> PyResult<String> {
    let env: ComposeEnv = env.parse().map_err(err)?;
    let sim = compose_simulate_exact(&family.inner, r, rounds, env).map_err(err)?;
    Ok(format_ratio(&sim.distance))
}

#[pyfunction]
fn field_mul(m: u32, a: u64, b: u64) -> PyResult<u32> {
    let f = FieldCtx::new(m).map_err(err)?;
    let (a, b): (FieldElem, FieldElem) = (f.elem(a).map_err(err)?, f.elem(b).map_err(err)?);
    Ok(f.mul(a, b).value())
}

#[pymodule(name = "keyrecycle")]
fn keyrecycle_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyHashFamily>()?;
    m.add_class::<PyKeyStream>()?;
    m.add("BudgetExceededError", m.py().get_type::<BudgetExceededError>())?;
    m.add_function(wrap_pyfunction!(authenticate, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(encode_wire, m)?)?;
    m.add_function(wrap_pyfunction!(decode_wire, m)?)?;
    m.add_function(wrap_pyfunction!(uc_worst_case, m)?)?;
    m.add_function(wrap_pyfunction!(py_impersonation_distance, m)?)?;
    m.add_function(wrap_pyfunction!(attack, m)?)?;
    m.add_function(wrap_pyfunction!(key_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(attack_montecarlo, m)?)?;
    m.add_function(wrap_pyfunction!(compose, m)?)?;
    m.add_function(wrap_pyfunction!(compose_distance, m)?)?;
    m.add_function(wrap_pyfunction!(field_mul, m)?)?;
    Ok(())
}
