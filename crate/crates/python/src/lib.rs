//! Python bindings: the cubic Hénon map, its periodic orbits, bifurcation curves and scans,
//! 1:4 normal forms, rescaled return maps and phase portraits.

use biflab::curves::{curve_m1 as core_curve_m1, CurveId};
use biflab::maps::{iterate, CubicHenonMap, PlanarMap, PlanePoint, Sign};
use biflab::orbit::{fixed_points, find_orbits_in_box, scan_bifurcations, PeriodicOrbit, ScanConfig, SeedBox};
use biflab::portrait::{sample, PortraitSpec, Seeds};
use biflab::resonance::{classify_resonant_point, flow_equilibria as core_flow_equilibria, resonance_coefficients, FlowNF};
use biflab::return_map::{conjugated_return, ModelFamily};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn py_err(e: biflab::Error) -> PyErr {
    if e.is_usage() {
        PyValueError::new_err(e.to_string())
    } else {
        PyRuntimeError::new_err(e.to_string())
    }
}

fn sign(nu: i32) -> PyResult<Sign> {
    Sign::from_i32(nu).map_err(py_err)
}

fn pt(p: (f64, f64)) -> PlanePoint {
    PlanePoint::new(p.0, p.1)
}

#[pyclass(name = "PeriodicOrbit", frozen, get_all, skip_from_py_object, module = "pybiflab")]
#[derive(Clone)]
struct PyOrbit {
    points: Vec<(f64, f64)>,
    trace: f64,
    determinant: f64,
    stability: String,
    rotation_angle: Option<f64>,
    symmetric: bool,
    reversible: bool,
}

impl From<&PeriodicOrbit> for PyOrbit {
    fn from(o: &PeriodicOrbit) -> Self {
        Self {
            points: o.points.iter().map(|p| (p.x, p.y)).collect(),
            trace: o.trace,
            determinant: o.determinant,
            stability: o.stability.name().to_string(),
            rotation_angle: o.rotation_angle,
            symmetric: o.symmetric,
            reversible: o.reversible,
        }
    }
}

#[pymethods]
impl PyOrbit {
    #[getter]
    fn period(&self) -> usize {
        self.points.len()
    }

    fn __repr__(&self) -> String {
        format!("PeriodicOrbit(period={}, stability='{}', trace={})", self.points.len(), self.stability, self.trace)
    }
}

/// x' = y, y' = M1 + M2 y - J x + nu y^3
#[pyclass(name = "CubicHenonMap", frozen, module = "pybiflab")]
struct PyMap {
    inner: CubicHenonMap,
}

#[pymethods]
impl PyMap {
    #[new]
    #[pyo3(signature = (nu, m1, m2, jacobian = 1.0))]
    fn new(nu: i32, m1: f64, m2: f64, jacobian: f64) -> PyResult<Self> {
        let inner = CubicHenonMap::with_jacobian(sign(nu)?, m1, m2, jacobian).map_err(py_err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn nu(&self) -> i32 {
        self.inner.nu().as_i32()
    }

    #[getter]
    fn m1(&self) -> f64 {
        self.inner.m1()
    }

    #[getter]
    fn m2(&self) -> f64 {
        self.inner.m2()
    }

    #[getter]
    fn jacobian(&self) -> f64 {
        self.inner.jacobian()
    }

    fn apply(&self, point: (f64, f64)) -> (f64, f64) {
        let p = self.inner.apply(pt(point));
        (p.x, p.y)
    }

    fn invert(&self, point: (f64, f64)) -> (f64, f64) {
        let p = self.inner.invert(pt(point));
        (p.x, p.y)
    }

    fn iterate(&self, point: (f64, f64), n: usize) -> (f64, f64) {
        let p = iterate(&self.inner, pt(point), n);
        (p.x, p.y)
    }

    /// Derivative matrix at a point, as nested rows.
    fn differential(&self, point: (f64, f64)) -> [[f64; 2]; 2] {
        let d = self.inner.differential(pt(point));
        [[d[(0, 0)], d[(0, 1)]], [d[(1, 0)], d[(1, 1)]]]
    }

    fn fixed_points(&self) -> Vec<PyOrbit> {
        fixed_points(&self.inner).iter().map(PyOrbit::from).collect()
    }

    /// Orbits of minimal period `period` reached by Newton from a square grid of seeds.
    #[pyo3(signature = (period, radius = 3.0, grid = 48))]
    fn periodic_orbits(&self, py: Python<'_>, period: usize, radius: f64, grid: usize) -> PyResult<Vec<PyOrbit>> {
        if period == 0 || !(radius > 0.0) || grid == 0 {
            return Err(PyValueError::new_err("period and grid must be at least 1 and radius positive"));
        }
        let map = self.inner;
        let found = py.detach(|| find_orbits_in_box(&map, period, &SeedBox::square(radius, grid)));
        Ok(found.iter().map(PyOrbit::from).collect())
    }

    fn __repr__(&self) -> String {
        format!(
            "CubicHenonMap(nu={}, m1={}, m2={}, jacobian={})",
            self.inner.nu().as_i32(),
            self.inner.m1(),
            self.inner.m2(),
            self.inner.jacobian()
        )
    }
}

/// M1 values (ascending) of a bifurcation curve at one M2.
#[pyfunction]
#[pyo3(signature = (tag, m2, nu = None, index = None, phi = None))]
fn curve_m1(tag: &str, m2: f64, nu: Option<i32>, index: Option<u8>, phi: Option<f64>) -> PyResult<Vec<f64>> {
    let nu = nu.map(sign).transpose()?;
    let curve = CurveId::parse(tag, nu, index, phi).map_err(py_err)?;
    core_curve_m1(curve, m2).map_err(py_err)
}

#[pyfunction]
fn resonance<'py>(py: Python<'py>, nu: i32, m2: f64) -> PyResult<Bound<'py, PyDict>> {
    let nu = sign(nu)?;
    let r = resonance_coefficients(nu, m2);
    let d = PyDict::new(py);
    d.set_item("b1", r.b1)?;
    d.set_item("b03", r.b03)?;
    d.set_item("a_ratio", r.a_ratio)?;
    d.set_item("degeneracy", format!("{:?}", r.degeneracy))?;
    d.set_item("classification", format!("{:?}", classify_resonant_point(nu, m2)))?;
    Ok(d)
}

type ScanResult = (Vec<(f64, String, usize)>, Vec<String>);

/// Bifurcations of period-`period` orbits as `parameter` ("m1" or "m2") runs over `[start, end]`.
///
/// Returns `(events, warnings)`; each event is a `(value, kind, period)` tuple.
#[pyfunction]
#[pyo3(signature = (nu, parameter, fixed, start, end, period, steps = 101, symmetric = false))]
#[allow(clippy::too_many_arguments)]
fn scan(
    py: Python<'_>,
    nu: i32,
    parameter: &str,
    fixed: f64,
    start: f64,
    end: f64,
    period: usize,
    steps: usize,
    symmetric: bool,
) -> PyResult<ScanResult> {
    let nu = sign(nu)?;
    let mut cfg = ScanConfig::new(period, (start, end), steps);
    if symmetric {
        cfg = cfg.symmetric();
    }
    let report = match parameter {
        "m1" => py.detach(|| scan_bifurcations(move |m1| CubicHenonMap::new(nu, m1, fixed), &cfg)),
        "m2" => py.detach(|| scan_bifurcations(move |m2| CubicHenonMap::new(nu, fixed, m2), &cfg)),
        other => return Err(PyValueError::new_err(format!("parameter must be 'm1' or 'm2', got '{other}'"))),
    }
    .map_err(py_err)?;
    let events = report.events.iter().map(|e| (e.parameter_value, e.kind.name().to_string(), e.period)).collect();
    Ok((events, report.warnings))
}

/// Equilibria `(x, y, kind)` of a truncated 1:4 flow normal form, origin first.
#[pyfunction]
#[pyo3(signature = (variant, beta, mu, b1 = 0.0, b2 = 0.0, c = None, radius = biflab::resonance::DEFAULT_FLOW_RADIUS))]
fn flow_equilibria(
    variant: &str,
    beta: f64,
    mu: f64,
    b1: f64,
    b2: f64,
    c: Option<f64>,
    radius: f64,
) -> PyResult<Vec<(f64, f64, String)>> {
    let nf = match variant {
        "eq11" => FlowNF::eq11(beta, mu, b1, b2, c.unwrap_or(0.0)),
        "eq12" => FlowNF::eq12(beta, mu, b2, c.unwrap_or(0.5)),
        other => return Err(PyValueError::new_err(format!("variant must be 'eq11' or 'eq12', got '{other}'"))),
    }
    .map_err(py_err)?;
    let found = core_flow_equilibria(&nf, radius).map_err(py_err)?;
    Ok(found
        .iter()
        .map(|e| (e.position.x, e.position.y, format!("{:?}", e.kind).to_lowercase()))
        .collect())
}

/// Sup-norm distance between the rescaled k-th return map and its cubic Hénon limit on a grid.
#[pyfunction]
#[pyo3(signature = (lam, beta1, b, d, x_plus, y_minus, k, m1, m2, half_width = 2.0, grid = 21))]
#[allow(clippy::too_many_arguments)]
fn rescale_error(
    lam: f64,
    beta1: f64,
    b: f64,
    d: f64,
    x_plus: f64,
    y_minus: f64,
    k: u32,
    m1: f64,
    m2: f64,
    half_width: f64,
    grid: usize,
) -> PyResult<f64> {
    let model = ModelFamily::simplified(lam, beta1, 0.0, 0.0, b, d, x_plus, y_minus).map_err(py_err)?;
    let r = conjugated_return(&model.with_rescaled(k, m1, m2), k).map_err(py_err)?;
    r.sup_error(half_width, grid).map_err(py_err)
}

/// Forward orbits of each seed; an orbit stops at the first iterate outside the escape radius.
#[pyfunction]
#[pyo3(signature = (nu, m1, m2, seeds, iterations = biflab::portrait::DEFAULT_ITERATIONS, escape_radius = biflab::portrait::DEFAULT_ESCAPE_RADIUS))]
fn portrait(
    py: Python<'_>,
    nu: i32,
    m1: f64,
    m2: f64,
    seeds: Vec<(f64, f64)>,
    iterations: usize,
    escape_radius: f64,
) -> PyResult<Vec<Vec<(f64, f64)>>> {
    let map = CubicHenonMap::new(sign(nu)?, m1, m2);
    let mut spec = PortraitSpec::new(map, Seeds::List(seeds.into_iter().map(pt).collect()));
    spec.iterations = iterations;
    spec.escape_radius = escape_radius;
    let result = py.detach(|| sample(&spec)).map_err(py_err)?;
    Ok(result.orbits.iter().map(|o| o.points.iter().map(|p| (p.x, p.y)).collect()).collect())
}

#[pymodule]
fn pybiflab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMap>()?;
    m.add_class::<PyOrbit>()?;
    m.add_function(wrap_pyfunction!(curve_m1, m)?)?;
    m.add_function(wrap_pyfunction!(resonance, m)?)?;
    m.add_function(wrap_pyfunction!(scan, m)?)?;
    m.add_function(wrap_pyfunction!(flow_equilibria, m)?)?;
    m.add_function(wrap_pyfunction!(rescale_error, m)?)?;
    m.add_function(wrap_pyfunction!(portrait, m)?)?;
    Ok(())
}
