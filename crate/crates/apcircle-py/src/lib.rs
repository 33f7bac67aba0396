//! Python bindings: the main types and operations of the apcircle crate.
//!
//! Build with `cargo build --release -p apcircle-py` and import the
//! resulting `libapcircle_py.so` as `apcircle_py` (see python/smoke_test.py).

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use apcircle::counting::EtaMethod;
use apcircle::expsums::{HBoundMode, HSumQuery};
use apcircle::{arith, bounds, counting, decomposition, expsums, verify};

fn pyerr(e: apcircle::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_eta_method(method: &str) -> PyResult<EtaMethod> {
    match method {
        "convolution" => Ok(EtaMethod::Convolution),
        "brute" => Ok(EtaMethod::Brute),
        "multiplicative" => Ok(EtaMethod::Multiplicative),
        other => Err(PyValueError::new_err(format!(
            "unknown eta method {other:?}; expected convolution|brute|multiplicative"
        ))),
    }
}

// --------------------------------------------------------------------------
// arith
// --------------------------------------------------------------------------

#[pyfunction]
fn gcd(u: u64, v: u64) -> u64 {
    arith::gcd(u, v)
}

#[pyfunction]
fn gcd3(u: u64, v: u64, w: u64) -> u64 {
    arith::gcd3(u, v, w)
}

#[pyfunction]
fn mod_inverse(a: i64, q: u64) -> PyResult<u64> {
    arith::mod_inverse(a, q).map_err(pyerr)
}

/// Prime factorization as a list of (prime, exponent) pairs.
#[pyfunction]
fn factorize(n: u64) -> Vec<(u64, u32)> {
    arith::factorize(n).factors().to_vec()
}

#[pyfunction]
fn tau(n: u64) -> u64 {
    arith::tau(n)
}

#[pyfunction]
fn euler_phi(n: u64) -> u64 {
    arith::euler_phi(n)
}

#[pyfunction]
fn radical(q: u64) -> u64 {
    arith::radical(q)
}

#[pyfunction]
fn jacobi(k: i64, q: u64) -> PyResult<i32> {
    arith::jacobi(k, q).map_err(pyerr)
}

#[pyfunction]
fn is_prime(n: u64) -> bool {
    arith::is_prime(n)
}

// --------------------------------------------------------------------------
// counting
// --------------------------------------------------------------------------

/// One exact lattice count with its symmetry classes.
#[pyclass(frozen, get_all)]
struct CountResult {
    x: u64,
    q: u64,
    a: i64,
    total: u64,
    quadrant: u64,
    axis: u64,
    origin: u64,
}

#[pymethods]
impl CountResult {
    fn __repr__(&self) -> String {
        format!(
            "CountResult(x={}, q={}, a={}, total={}, quadrant={}, axis={}, origin={})",
            self.x, self.q, self.a, self.total, self.quadrant, self.axis, self.origin
        )
    }
}

impl From<counting::CountResult> for CountResult {
    fn from(c: counting::CountResult) -> Self {
        CountResult {
            x: c.x,
            q: c.q,
            a: c.a,
            total: c.total,
            quadrant: c.quadrant,
            axis: c.axis,
            origin: c.origin,
        }
    }
}

#[pyfunction]
fn omega(q: u64, a: i64) -> u64 {
    counting::omega(q, a)
}

#[pyfunction]
#[pyo3(signature = (q, a, method="convolution"))]
fn eta(q: u64, a: i64, method: &str) -> PyResult<u64> {
    counting::eta(q, a, parse_eta_method(method)?).map_err(pyerr)
}

/// Exact S_{q,a}(x) via the root-table counter (or the O(x) oracle).
#[pyfunction]
#[pyo3(signature = (x, q, a, brute=false))]
fn count(x: u64, q: u64, a: i64, brute: bool) -> PyResult<CountResult> {
    let c = if brute {
        counting::count_brute(x, q, a)
    } else {
        counting::count_progression(x, q, a)
    };
    c.map(Into::into).map_err(pyerr)
}

#[pyfunction]
fn main_term(x: u64, q: u64, a: i64) -> PyResult<f64> {
    counting::main_term(x, q, a).map_err(pyerr)
}

#[pyfunction]
fn remainder_value(x: u64, q: u64, a: i64) -> PyResult<f64> {
    counting::remainder_value(x, q, a).map_err(pyerr)
}

// --------------------------------------------------------------------------
// expsums
// --------------------------------------------------------------------------

#[pyfunction]
fn gauss_direct(q: u64, k: i64, m: i64) -> Complex64 {
    expsums::gauss_direct(q, k, m)
}

#[pyfunction]
fn gauss_closed(q: u64, k: i64, m: i64) -> Complex64 {
    expsums::gauss_closed(q, k, m)
}

#[pyfunction]
fn kloosterman(q: u64, k: i64, n: i64) -> Complex64 {
    expsums::kloosterman_direct(q, k, n)
}

#[pyfunction]
fn weil_bound_value(q: u64, k: i64, n: i64) -> f64 {
    expsums::weil_bound_value(q, k, n)
}

#[pyfunction]
fn h_direct(q: u64, a: i64, h: i64, n: i64) -> Complex64 {
    expsums::h_direct(HSumQuery::new(q, a, h, n))
}

#[pyfunction]
fn h_fast(q: u64, a: i64, h: i64, n: i64) -> Complex64 {
    expsums::h_fast(HSumQuery::new(q, a, h, n))
}

#[pyfunction]
#[pyo3(signature = (q, a, h, n, mode="full"))]
fn h_bound_value(q: u64, a: i64, h: i64, n: i64, mode: &str) -> PyResult<f64> {
    let mode = match mode {
        "full" => HBoundMode::Full,
        "simplified" => HBoundMode::Simplified,
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown bound mode {other:?}; expected full|simplified"
            )))
        }
    };
    Ok(expsums::h_bound_value(HSumQuery::new(q, a, h, n), mode))
}

#[pyfunction]
fn b_sum(d: u64, a: i64, m: i64, t: i64) -> Complex64 {
    expsums::b_sum(d, a, m, t)
}

// --------------------------------------------------------------------------
// decomposition
// --------------------------------------------------------------------------

#[pyfunction]
fn rho(y: f64) -> f64 {
    decomposition::rho(y)
}

#[pyfunction]
fn rho_truncated(y: f64, m: u32) -> f64 {
    decomposition::rho_truncated(y, m)
}

#[pyfunction]
fn ap_interval_count(y: f64, q: u64, gamma: u64) -> (u64, f64) {
    decomposition::ap_interval_count(y, q, gamma)
}

#[pyfunction]
fn t_sum(x: u64, q: u64, h: i64, n: i64) -> PyResult<Complex64> {
    decomposition::t_sum(x, q, h, n).map_err(pyerr)
}

#[pyfunction]
fn f_sum(x: u64, q: u64, a: i64, n: i64) -> PyResult<Complex64> {
    decomposition::f_sum(x, q, a, n).map_err(pyerr)
}

/// All intermediate sums and identity residuals for one (x, q, a).
#[pyclass(frozen, get_all)]
struct DecompositionReport {
    x: u64,
    q: u64,
    a: i64,
    s1: u64,
    s2: u64,
    s1_0: f64,
    s1_1: f64,
    s1_2: f64,
    s2_0: f64,
    s2_1: f64,
    frak_n: f64,
    frak_n0: f64,
    frak_d: f64,
    gamma_sum: f64,
    gamma_error: f64,
    residuals: std::collections::BTreeMap<String, f64>,
}

#[pymethods]
impl DecompositionReport {
    fn __repr__(&self) -> String {
        format!(
            "DecompositionReport(x={}, q={}, a={}, s1={}, s2={}, gamma_sum={})",
            self.x, self.q, self.a, self.s1, self.s2, self.gamma_sum
        )
    }
}

#[pyfunction]
#[pyo3(signature = (x, q, a, quadrature_tol=None))]
fn decompose(x: u64, q: u64, a: i64, quadrature_tol: Option<f64>) -> PyResult<DecompositionReport> {
    let tol = quadrature_tol.unwrap_or_else(|| decomposition::default_quadrature_tol(x));
    let rep = decomposition::decompose(x, q, a, tol).map_err(pyerr)?;
    Ok(DecompositionReport {
        x: rep.x,
        q: rep.q,
        a: rep.a,
        s1: rep.s1,
        s2: rep.s2,
        s1_0: rep.s1_0,
        s1_1: rep.s1_1,
        s1_2: rep.s1_2,
        s2_0: rep.s2_0,
        s2_1: rep.s2_1,
        frak_n: rep.frak_n,
        frak_n0: rep.frak_n0,
        frak_d: rep.frak_d,
        gamma_sum: rep.gamma_sum,
        gamma_error: rep.gamma_error,
        residuals: rep
            .residuals
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect(),
    })
}

#[pyfunction]
fn verify_gamma_series(x: u64, q: u64, a: i64, n_terms: u32) -> PyResult<f64> {
    decomposition::verify_gamma_series(x, q, a, n_terms).map_err(pyerr)
}

// --------------------------------------------------------------------------
// bounds
// --------------------------------------------------------------------------

#[pyfunction]
fn bound_tolev(x: u64, q: u64, a: i64) -> PyResult<f64> {
    bounds::bound_tolev(x, q, a).map_err(pyerr)
}

#[pyfunction]
fn bound_smith(x: u64, q: u64, a: i64, xi: f64) -> PyResult<f64> {
    bounds::bound_smith(x, q, a, xi).map_err(pyerr)
}

/// The conditional bounds; returns None where the validity conditions fail.
#[pyfunction]
#[pyo3(signature = (x, q, a, variant="mid"))]
fn bound_varbanets(x: u64, q: u64, a: i64, variant: &str) -> PyResult<Option<f64>> {
    let variant = match variant {
        "mid" => bounds::VarbanetsVariant::Mid,
        "strong" => bounds::VarbanetsVariant::Strong,
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown variant {other:?}; expected mid|strong"
            )))
        }
    };
    Ok(bounds::bound_varbanets(x, q, a, variant))
}

#[pyfunction]
fn dominance_mid_holds(x: u64, q: u64, a: i64) -> Option<bool> {
    bounds::dominance_mid_holds(x, q, a)
}

/// One sweep row; inapplicable bounds are None.
#[pyclass(frozen, get_all)]
struct SweepRecord {
    x: u64,
    q: u64,
    a: i64,
    s_total: u64,
    quadrant: u64,
    axis: u64,
    origin: u64,
    eta: u64,
    omega: u64,
    main: f64,
    r: f64,
    bound_tolev: Option<f64>,
    ratio_tolev: f64,
    bound_smith: Option<f64>,
    ratio_smith: f64,
    bound_v_mid: Option<f64>,
    ratio_v_mid: f64,
    bound_v_strong: Option<f64>,
    ratio_v_strong: f64,
    regime: String,
    error: Option<String>,
}

fn finite_or_none(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

/// Run a sweep from a JSON config string (same schema as the CLI) and
/// return the records; writes the CSV when the config names one.
#[pyfunction]
fn run_sweep(config_json: &str) -> PyResult<Vec<SweepRecord>> {
    let config: bounds::SweepConfig = serde_json::from_str(config_json)
        .map_err(|e| PyValueError::new_err(format!("bad sweep config: {e}")))?;
    let records = bounds::run_sweep(&config).map_err(pyerr)?;
    Ok(records
        .into_iter()
        .map(|r| SweepRecord {
            x: r.x,
            q: r.q,
            a: r.a,
            s_total: r.s_total,
            quadrant: r.quadrant,
            axis: r.axis,
            origin: r.origin,
            eta: r.eta,
            omega: r.omega,
            main: r.main,
            r: r.r,
            bound_tolev: finite_or_none(r.bound_tolev),
            ratio_tolev: r.ratio_tolev,
            bound_smith: finite_or_none(r.bound_smith),
            ratio_smith: r.ratio_smith,
            bound_v_mid: finite_or_none(r.bound_v_mid),
            ratio_v_mid: r.ratio_v_mid,
            bound_v_strong: finite_or_none(r.bound_v_strong),
            ratio_v_strong: r.ratio_v_strong,
            regime: r.regime.to_string(),
            error: r.error,
        })
        .collect())
}

/// Run one module's property suite; returns (passed, lines).
#[pyfunction]
#[pyo3(signature = (module, seed=2718281828))]
fn verify_module(module: &str, seed: u64) -> PyResult<(bool, Vec<String>)> {
    let report = verify::run_module(module, seed).map_err(pyerr)?;
    let lines = report
        .checks
        .iter()
        .map(|c| {
            format!(
                "[{}] {}::{}: {}",
                if c.passed { "PASS" } else { "FAIL" },
                report.module,
                c.name,
                c.detail
            )
        })
        .collect();
    Ok((report.passed(), lines))
}

#[pymodule]
fn apcircle_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<CountResult>()?;
    m.add_class::<DecompositionReport>()?;
    m.add_class::<SweepRecord>()?;
    m.add_function(wrap_pyfunction!(gcd, m)?)?;
    m.add_function(wrap_pyfunction!(gcd3, m)?)?;
    m.add_function(wrap_pyfunction!(mod_inverse, m)?)?;
    m.add_function(wrap_pyfunction!(factorize, m)?)?;
    m.add_function(wrap_pyfunction!(tau, m)?)?;
    m.add_function(wrap_pyfunction!(euler_phi, m)?)?;
    m.add_function(wrap_pyfunction!(radical, m)?)?;
    m.add_function(wrap_pyfunction!(jacobi, m)?)?;
    m.add_function(wrap_pyfunction!(is_prime, m)?)?;
    m.add_function(wrap_pyfunction!(omega, m)?)?;
    m.add_function(wrap_pyfunction!(eta, m)?)?;
    m.add_function(wrap_pyfunction!(count, m)?)?;
    m.add_function(wrap_pyfunction!(main_term, m)?)?;
    m.add_function(wrap_pyfunction!(remainder_value, m)?)?;
    m.add_function(wrap_pyfunction!(gauss_direct, m)?)?;
    m.add_function(wrap_pyfunction!(gauss_closed, m)?)?;
    m.add_function(wrap_pyfunction!(kloosterman, m)?)?;
    m.add_function(wrap_pyfunction!(weil_bound_value, m)?)?;
    m.add_function(wrap_pyfunction!(h_direct, m)?)?;
    m.add_function(wrap_pyfunction!(h_fast, m)?)?;
    m.add_function(wrap_pyfunction!(h_bound_value, m)?)?;
    m.add_function(wrap_pyfunction!(b_sum, m)?)?;
    m.add_function(wrap_pyfunction!(rho, m)?)?;
    m.add_function(wrap_pyfunction!(rho_truncated, m)?)?;
    m.add_function(wrap_pyfunction!(ap_interval_count, m)?)?;
    m.add_function(wrap_pyfunction!(t_sum, m)?)?;
    m.add_function(wrap_pyfunction!(f_sum, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(verify_gamma_series, m)?)?;
    m.add_function(wrap_pyfunction!(bound_tolev, m)?)?;
    m.add_function(wrap_pyfunction!(bound_smith, m)?)?;
    m.add_function(wrap_pyfunction!(bound_varbanets, m)?)?;
    m.add_function(wrap_pyfunction!(dominance_mid_holds, m)?)?;
    m.add_function(wrap_pyfunction!(run_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(verify_module, m)?)?;
    Ok(())
}
