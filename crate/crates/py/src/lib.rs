//! Python bindings for the `risfd` simulator and analysis routines.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use risfd::analytic::{self, MomentSet};
use risfd::montecarlo::{MonteCarlo, SweepPoint};

fn to_py<T>(r: risfd::Result<T>) -> PyResult<T> {
    r.map_err(|e| PyValueError::new_err(e.to_string()))
}

/// System configuration; every field can be read and assigned.
#[pyclass(name = "SystemParams", module = "pyrisfd", get_all, set_all, skip_from_py_object)]
#[derive(Clone)]
struct PySystemParams {
    elements: usize,
    tx_antennas: usize,
    kappa: f64,
    omega_i: f64,
    snr_db: f64,
    trials: u64,
    seed: u64,
    gcq_order: usize,
}

impl From<&PySystemParams> for risfd::SystemParams {
    fn from(p: &PySystemParams) -> Self {
        risfd::SystemParams {
            elements: p.elements,
            tx_antennas: p.tx_antennas,
            kappa: p.kappa,
            omega_i: p.omega_i,
            snr_db: p.snr_db,
            trials: p.trials,
            seed: p.seed,
            gcq_order: p.gcq_order,
        }
    }
}

impl From<risfd::SystemParams> for PySystemParams {
    fn from(p: risfd::SystemParams) -> Self {
        Self {
            elements: p.elements,
            tx_antennas: p.tx_antennas,
            kappa: p.kappa,
            omega_i: p.omega_i,
            snr_db: p.snr_db,
            trials: p.trials,
            seed: p.seed,
            gcq_order: p.gcq_order,
        }
    }
}

impl PySystemParams {
    fn core(&self) -> risfd::SystemParams {
        self.into()
    }
}

#[pymethods]
impl PySystemParams {
    #[new]
    #[pyo3(signature = (
        elements = 100,
        tx_antennas = 2,
        kappa = 0.1,
        omega_i = 0.1,
        snr_db = 20.0,
        trials = 10_000_000,
        seed = 1,
        gcq_order = 5,
    ))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        elements: usize,
        tx_antennas: usize,
        kappa: f64,
        omega_i: f64,
        snr_db: f64,
        trials: u64,
        seed: u64,
        gcq_order: usize,
    ) -> PyResult<Self> {
        let p = risfd::SystemParams {
            elements,
            tx_antennas,
            kappa,
            omega_i,
            snr_db,
            trials,
            seed,
            gcq_order,
        };
        Ok(to_py(p.validate())?.into())
    }

    /// Raises ValueError if the current field values are inconsistent.
    fn validate(&self) -> PyResult<()> {
        to_py(self.core().validate()).map(|_| ())
    }

    fn rho_linear(&self) -> f64 {
        self.core().rho_linear()
    }

    fn bits_per_symbol(&self) -> u32 {
        self.core().bits_per_symbol()
    }

    fn with_snr_db(&self, snr_db: f64) -> Self {
        self.core().with_snr_db(snr_db).into()
    }

    fn __repr__(&self) -> String {
        format!(
            "SystemParams(elements={}, tx_antennas={}, kappa={}, omega_i={}, snr_db={}, \
             trials={}, seed={}, gcq_order={})",
            self.elements,
            self.tx_antennas,
            self.kappa,
            self.omega_i,
            self.snr_db,
            self.trials,
            self.seed,
            self.gcq_order
        )
    }
}

/// Monte Carlo estimate at one SNR.
#[pyclass(name = "SweepPoint", module = "pyrisfd", get_all, frozen)]
struct PySweepPoint {
    snr_db: f64,
    ber: f64,
    ci_low: f64,
    ci_high: f64,
    trials: u64,
    bit_errors_total: u64,
    bits_total: u64,
}

impl From<SweepPoint> for PySweepPoint {
    fn from(p: SweepPoint) -> Self {
        Self {
            snr_db: p.snr_db,
            ber: p.ber,
            ci_low: p.ci_low,
            ci_high: p.ci_high,
            trials: p.trials,
            bit_errors_total: p.bit_errors_total,
            bits_total: p.bits_total,
        }
    }
}

#[pymethods]
impl PySweepPoint {
    fn __repr__(&self) -> String {
        format!(
            "SweepPoint(snr_db={}, ber={:e}, ci=({:e}, {:e}), trials={})",
            self.snr_db, self.ber, self.ci_low, self.ci_high, self.trials
        )
    }
}

fn moments(mu_r: f64, sigma2_r: f64) -> MomentSet {
    MomentSet { mu_r, sigma2_r }
}

/// (μ_R, σ²_R) of the composite statistic for `elements` RIS elements.
#[pyfunction]
fn moments_r(elements: usize) -> PyResult<(f64, f64)> {
    let m = to_py(analytic::moments_r(elements))?;
    Ok((m.mu_r, m.sigma2_r))
}

/// Effective noise-plus-interference variance ς.
#[pyfunction]
fn effective_noise(params: PyRef<'_, PySystemParams>) -> f64 {
    analytic::effective_noise(&params.core()).varsigma
}

#[pyfunction]
fn cpep(gain_diff_sq: f64, interference_power: f64, omega_i: f64, rho: f64) -> f64 {
    analytic::cpep(gain_diff_sq, interference_power, omega_i, rho)
}

#[pyfunction]
fn upep_gcq(mu_r: f64, sigma2_r: f64, varsigma: f64, order: usize) -> PyResult<f64> {
    to_py(analytic::upep_gcq(&moments(mu_r, sigma2_r), varsigma, order))
}

#[pyfunction]
#[pyo3(signature = (mu_r, sigma2_r, varsigma, tolerance = 1e-9))]
fn upep_reference(mu_r: f64, sigma2_r: f64, varsigma: f64, tolerance: f64) -> PyResult<f64> {
    to_py(analytic::upep_reference(&moments(mu_r, sigma2_r), varsigma, tolerance))
}

/// High-SNR limit; `order` defaults to the params' GCQ order.
#[pyfunction]
#[pyo3(signature = (params, order = None))]
fn upep_asymptotic(params: PyRef<'_, PySystemParams>, order: Option<usize>) -> PyResult<f64> {
    let p = params.core();
    let order = order.unwrap_or(p.gcq_order);
    to_py(analytic::upep_asymptotic(&p, order))
}

#[pyfunction]
fn abep_union_bound(upep: f64, tx_antennas: usize) -> PyResult<f64> {
    to_py(analytic::abep_union_bound(upep, tx_antennas))
}

#[pyfunction]
fn abep(params: PyRef<'_, PySystemParams>) -> PyResult<f64> {
    to_py(analytic::abep(&params.core()))
}

#[pyfunction]
fn abep_asymptotic(params: PyRef<'_, PySystemParams>) -> PyResult<f64> {
    to_py(analytic::abep_asymptotic(&params.core()))
}

#[pyfunction]
#[pyo3(signature = (params, tolerance = 1e-9))]
fn abep_reference(params: PyRef<'_, PySystemParams>, tolerance: f64) -> PyResult<f64> {
    to_py(analytic::abep_reference(&params.core(), tolerance))
}

/// Monte Carlo BER at `params.snr_db`. Releases the GIL while running.
#[pyfunction]
#[pyo3(signature = (params, workers = None))]
fn estimate_ber(
    py: Python<'_>,
    params: PyRef<'_, PySystemParams>,
    workers: Option<usize>,
) -> PyResult<PySweepPoint> {
    let p = params.core();
    let engine = MonteCarlo { workers };
    let pt = py.detach(|| engine.estimate_ber(&p));
    to_py(pt).map(Into::into)
}

/// Monte Carlo BER at each SNR in `snr_grid` (dB).
#[pyfunction]
#[pyo3(signature = (params, snr_grid, workers = None))]
fn run_sweep(
    py: Python<'_>,
    params: PyRef<'_, PySystemParams>,
    snr_grid: Vec<f64>,
    workers: Option<usize>,
) -> PyResult<Vec<PySweepPoint>> {
    let p = params.core();
    let engine = MonteCarlo { workers };
    let sweep = py.detach(|| engine.run_sweep(&p, &snr_grid));
    Ok(to_py(sweep)?.into_iter().map(Into::into).collect())
}

/// Sampled (mean, variance, std_error) of the composite statistic.
#[pyfunction]
fn sample_r_moments(py: Python<'_>, elements: usize, samples: usize, seed: u64) -> PyResult<(f64, f64, f64)> {
    let o = to_py(py.detach(|| risfd::oracle::sample_r_moments(elements, samples, seed)))?;
    Ok((o.estimate.mean, o.estimate.variance, o.estimate.std_error))
}

#[pymodule]
fn pyrisfd(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySystemParams>()?;
    m.add_class::<PySweepPoint>()?;
    m.add_function(wrap_pyfunction!(moments_r, m)?)?;
    m.add_function(wrap_pyfunction!(effective_noise, m)?)?;
    m.add_function(wrap_pyfunction!(cpep, m)?)?;
    m.add_function(wrap_pyfunction!(upep_gcq, m)?)?;
    m.add_function(wrap_pyfunction!(upep_reference, m)?)?;
    m.add_function(wrap_pyfunction!(upep_asymptotic, m)?)?;
    m.add_function(wrap_pyfunction!(abep_union_bound, m)?)?;
    m.add_function(wrap_pyfunction!(abep, m)?)?;
    m.add_function(wrap_pyfunction!(abep_asymptotic, m)?)?;
    m.add_function(wrap_pyfunction!(abep_reference, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_ber, m)?)?;
    m.add_function(wrap_pyfunction!(run_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(sample_r_moments, m)?)?;
    Ok(())
}
