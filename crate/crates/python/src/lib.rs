//! Python bindings. Build with `maturin develop` from this directory; the
//! module imports as `selfsim_ot`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use ::selfsim_ot as ot;
use ot::discrete::DiscreteMeasure;
use ot::verify::{self, VerifyOptions};

fn err(e: ot::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Two-map IFS `S_i(x) = c x + t_i` on `[0, 1]`.
#[pyclass(name = "IfsSystem", frozen, from_py_object)]
#[derive(Clone, Copy)]
pub struct PyIfsSystem {
    inner: ot::IfsSystem,
}

#[pymethods]
impl PyIfsSystem {
    #[new]
    fn new(c: f64, t1: f64, t2: f64) -> PyResult<Self> {
        Ok(Self {
            inner: ot::IfsSystem::new(c, t1, t2).map_err(err)?,
        })
    }

    /// Middle-(1 - 2c) Cantor system, `t1 = 0`, `t2 = 1 - c`.
    #[staticmethod]
    fn cantor(c: f64) -> PyResult<Self> {
        Ok(Self {
            inner: ot::IfsSystem::cantor(c).map_err(err)?,
        })
    }

    #[getter]
    fn c(&self) -> f64 {
        self.inner.c()
    }

    #[getter]
    fn t1(&self) -> f64 {
        self.inner.t1()
    }

    #[getter]
    fn t2(&self) -> f64 {
        self.inner.t2()
    }

    fn __repr__(&self) -> String {
        format!(
            "IfsSystem(c={}, t1={}, t2={})",
            self.inner.c(),
            self.inner.t1(),
            self.inner.t2()
        )
    }
}

/// `phi1` and `phi2` as functions of `r` for fixed `(system, p, q)`.
#[pyclass(name = "MomentCurve", frozen)]
pub struct PyMomentCurve {
    inner: ot::MomentCurve,
}

#[pymethods]
impl PyMomentCurve {
    #[new]
    fn new(system: PyIfsSystem, p: f64, q: f64) -> PyResult<Self> {
        Ok(Self {
            inner: ot::MomentCurve::new(system.inner, p, q).map_err(err)?,
        })
    }

    /// Closed region `(lo, hi)` of admissible `r`.
    fn region(&self) -> (f64, f64) {
        let reg = self.inner.region();
        (reg.lo, reg.hi)
    }

    #[getter]
    fn pole(&self) -> f64 {
        self.inner.pole()
    }

    #[getter]
    fn phi1_root(&self) -> f64 {
        self.inner.phi1_root()
    }

    #[getter]
    fn phi2_root(&self) -> f64 {
        self.inner.phi2_root()
    }

    /// Rational formula for `phi1`, valid for any `r` away from the pole.
    fn phi1(&self, r: f64) -> PyResult<f64> {
        self.inner.phi1(r).map_err(err)
    }

    fn phi1_derivative(&self, r: f64) -> PyResult<f64> {
        self.inner.phi1_derivative(r).map_err(err)
    }

    fn phi2(&self, r: f64) -> PyResult<f64> {
        self.inner.phi2(r).map_err(err)
    }

    /// `phi1` and `phi2` at `n` uniform points of the closed region.
    fn sweep(&self, n: usize) -> PyResult<Vec<(f64, f64, f64)>> {
        self.inner
            .region()
            .grid(n)
            .into_iter()
            .map(|r| {
                let input = self.inner.at(r).map_err(err)?;
                Ok((r, ot::phi1(&input), ot::phi2(&input)))
            })
            .collect()
    }
}

#[pyfunction]
fn coupling_region(p: f64, q: f64) -> PyResult<(f64, f64)> {
    let reg = ot::coupling_region(p, q).map_err(err)?;
    Ok((reg.lo, reg.hi))
}

fn input(system: &PyIfsSystem, p: f64, q: f64, r: f64) -> PyResult<ot::MomentFormulaInput> {
    ot::MomentFormulaInput::new(system.inner, p, q, r).map_err(err)
}

/// First moment of the self-similar coupling `gamma_r`.
#[pyfunction]
fn phi1(system: PyIfsSystem, p: f64, q: f64, r: f64) -> PyResult<f64> {
    Ok(ot::phi1(&input(&system, p, q, r)?))
}

/// Root mean square of `|x - y|` under `gamma_r`.
#[pyfunction]
fn phi2(system: PyIfsSystem, p: f64, q: f64, r: f64) -> PyResult<f64> {
    Ok(ot::phi2(&input(&system, p, q, r)?))
}

#[pyfunction]
fn phi1_derivative(system: PyIfsSystem, p: f64, q: f64, r: f64) -> PyResult<f64> {
    Ok(ot::phi1_derivative(&input(&system, p, q, r)?))
}

#[pyfunction]
fn w1_exact(system: PyIfsSystem, p: f64, q: f64) -> PyResult<f64> {
    ot::w1_exact(&system.inner, p, q).map_err(err)
}

#[pyfunction]
fn kr_lower_bound(system: PyIfsSystem, p: f64, q: f64) -> PyResult<f64> {
    ot::kr_lower_bound(&system.inner, p, q).map_err(err)
}

/// `(lower, upper)` bounds on `W_2`.
#[pyfunction]
fn w2_bounds(system: PyIfsSystem, p: f64, q: f64) -> PyResult<(f64, f64)> {
    let b = ot::w2_bounds(&system.inner, p, q).map_err(err)?;
    Ok((b.lower, b.upper))
}

#[pyfunction]
fn measure_mean(system: PyIfsSystem, p: f64) -> PyResult<f64> {
    Ok(ot::measure_mean(
        &ot::SelfSimilarMeasure::new(system.inner, p).map_err(err)?,
    ))
}

/// Lower bound on `W_1` for an `N`-map IFS given as `[(c_i, t_i)]`.
#[pyfunction]
fn general_lower_bound(maps: Vec<(f64, f64)>, p: Vec<f64>, q: Vec<f64>) -> PyResult<f64> {
    let spec = ot::GeneralIfsSpec::new(maps, p, q).map_err(err)?;
    ot::general_lower_bound(&spec).map_err(err)
}

#[pyfunction]
fn two_map_distinct_ratio_bound(c1: f64, c2: f64, t1: f64, t2: f64, p: f64, q: f64) -> PyResult<f64> {
    ot::two_map_distinct_ratio_bound(c1, c2, t1, t2, p, q).map_err(err)
}

/// Depth-`depth` atoms `[(position, weight)]` of `mu_p`, sorted by position.
#[pyfunction]
fn discretize_measure(system: PyIfsSystem, p: f64, depth: u32) -> PyResult<Vec<(f64, f64)>> {
    let m = ot::SelfSimilarMeasure::new(system.inner, p).map_err(err)?;
    let d = ot::discretize_measure(&m, depth).map_err(err)?;
    Ok(d.atoms().iter().map(|a| (a.position, a.weight)).collect())
}

/// `rho`-th moment (root) of `|x - y|` over the depth-`depth` coupling atoms.
#[pyfunction]
#[pyo3(signature = (system, p, q, r, depth, rho = 1))]
fn coupling_moment(system: PyIfsSystem, p: f64, q: f64, r: f64, depth: u32, rho: u32) -> PyResult<f64> {
    let cp = ot::CouplingParam::new(p, q, r).map_err(err)?;
    let dc = ot::discretize_coupling(&system.inner, &cp, depth).map_err(err)?;
    ot::coupling_moment(&dc, rho).map_err(err)
}

/// `(W_1, W_2)` between two atomic measures given as `[(position, weight)]`.
#[pyfunction]
fn transport_cost(a: Vec<(f64, f64)>, b: Vec<(f64, f64)>) -> PyResult<(f64, f64)> {
    let a = DiscreteMeasure::from_atoms(a).map_err(err)?;
    let b = DiscreteMeasure::from_atoms(b).map_err(err)?;
    let plan = ot::monotone_transport(&a, &b).map_err(err)?;
    Ok((plan.cost_rho1, plan.cost_rho2))
}

/// `(W_1, W_2)` between depth-`depth` discretizations of `mu_p` and `mu_q`.
#[pyfunction]
#[pyo3(signature = (system, p, q, depth = 14))]
fn oracle_distances(system: PyIfsSystem, p: f64, q: f64, depth: u32) -> PyResult<(f64, f64)> {
    let a = ot::discretize_measure(&ot::SelfSimilarMeasure::new(system.inner, p).map_err(err)?, depth).map_err(err)?;
    let b = ot::discretize_measure(&ot::SelfSimilarMeasure::new(system.inner, q).map_err(err)?, depth).map_err(err)?;
    let plan = ot::monotone_transport(&a, &b).map_err(err)?;
    Ok((plan.cost_rho1, plan.cost_rho2))
}

#[pyfunction]
fn techlem_residual(system: PyIfsSystem, p: f64, q: f64, r: f64, depth: u32) -> PyResult<f64> {
    ot::techlem_residual(&system.inner, p, q, r, depth).map_err(err)
}

/// Runs the cross-check suite; one dict per check.
#[pyfunction]
#[pyo3(signature = (depth = 10, configs = 50, seed = 42))]
fn run_verify(py: Python<'_>, depth: u32, configs: usize, seed: u64) -> PyResult<Vec<Bound<'_, PyDict>>> {
    let checks = py
        .detach(|| verify::run(&VerifyOptions { depth, configs, seed }))
        .map_err(err)?;
    checks
        .into_iter()
        .map(|c| {
            let d = PyDict::new(py);
            d.set_item("name", c.name)?;
            d.set_item("passed", c.passed)?;
            d.set_item("measured", c.measured)?;
            d.set_item("tolerance", c.tolerance)?;
            d.set_item("detail", c.detail)?;
            Ok(d)
        })
        .collect()
}

#[pymodule]
#[pyo3(name = "selfsim_ot")]
pub fn python_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyIfsSystem>()?;
    m.add_class::<PyMomentCurve>()?;
    m.add_function(wrap_pyfunction!(coupling_region, m)?)?;
    m.add_function(wrap_pyfunction!(phi1, m)?)?;
    m.add_function(wrap_pyfunction!(phi2, m)?)?;
    m.add_function(wrap_pyfunction!(phi1_derivative, m)?)?;
    m.add_function(wrap_pyfunction!(w1_exact, m)?)?;
    m.add_function(wrap_pyfunction!(kr_lower_bound, m)?)?;
    m.add_function(wrap_pyfunction!(w2_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(measure_mean, m)?)?;
    m.add_function(wrap_pyfunction!(general_lower_bound, m)?)?;
    m.add_function(wrap_pyfunction!(two_map_distinct_ratio_bound, m)?)?;
    m.add_function(wrap_pyfunction!(discretize_measure, m)?)?;
    m.add_function(wrap_pyfunction!(coupling_moment, m)?)?;
    m.add_function(wrap_pyfunction!(transport_cost, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_distances, m)?)?;
    m.add_function(wrap_pyfunction!(techlem_residual, m)?)?;
    m.add_function(wrap_pyfunction!(run_verify, m)?)?;
    Ok(())
}
