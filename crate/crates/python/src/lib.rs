//! Python module `geolab`: plane curves and their shortening flow, torsion
//! fields and their evolution, geodesics and periods on `G_α`, and the
//! acceptance checks. Sequences cross the boundary as Python lists.

use pyo3::create_exception;
use pyo3::exceptions::PyRuntimeError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use geolab::acceptance;
use geolab::csf::{self, CsfError, EightFamily, EvolveOptions, FramePolicy, StopRule};
use geolab::geoflow::{self, Alpha, Direction, GeoError, UnitTangent};
use geolab::torsionflow::{self, CurvatureProfile, StationarySign, TorsionError};

create_exception!(geolab, GeolabError, PyRuntimeError, "Numerical or domain failure inside geolab.");

fn fail(e: impl std::fmt::Display) -> PyErr {
    GeolabError::new_err(e.to_string())
}

fn csf_err(e: CsfError) -> PyErr {
    fail(e)
}

fn geo_err(e: GeoError) -> PyErr {
    fail(e)
}

fn tor_err(e: TorsionError) -> PyErr {
    fail(e)
}

/// Closed polygonal plane curve.
#[pyclass(module = "geolab", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PlaneCurve {
    inner: csf::PlaneCurve,
}

#[pymethods]
impl PlaneCurve {
    #[new]
    fn new(points: Vec<[f64; 2]>) -> PyResult<Self> {
        Ok(Self { inner: csf::PlaneCurve::new(points).map_err(csf_err)? })
    }

    #[staticmethod]
    #[pyo3(signature = (radius = 1.0, n = 256))]
    fn circle(radius: f64, n: usize) -> PyResult<Self> {
        Ok(Self { inner: csf::PlaneCurve::circle(radius, n).map_err(csf_err)? })
    }

    /// Lemniscate of Bernoulli with half-width `scale`, point 0 at the crossing.
    #[staticmethod]
    #[pyo3(signature = (n = 1024, scale = 1.0))]
    fn lemniscate(n: usize, scale: f64) -> PyResult<Self> {
        Ok(Self { inner: csf::make_concinnous_eight(scale, EightFamily::Lemniscate, n).map_err(csf_err)? })
    }

    #[getter]
    fn points(&self) -> Vec<[f64; 2]> {
        self.inner.points().to_vec()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn length(&self) -> f64 {
        self.inner.length()
    }

    fn signed_area(&self) -> f64 {
        self.inner.signed_area()
    }

    fn curvature(&self) -> Vec<f64> {
        self.inner.curvature()
    }

    fn diagnostics<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        diagnostics_dict(py, &csf::curve_geometry(&self.inner, 0.0).map_err(csf_err)?)
    }

    fn __repr__(&self) -> String {
        format!("PlaneCurve(n={}, length={:.6})", self.inner.len(), self.inner.length())
    }
}

fn diagnostics_dict<'py>(py: Python<'py>, d: &csf::EightDiagnostics) -> PyResult<Bound<'py, PyDict>> {
    let out = PyDict::new(py);
    for (k, v) in csf::EightDiagnostics::CSV_HEADER.iter().zip(d.csv_row()) {
        out.set_item(*k, v)?;
    }
    out.set_item("lobe_areas", d.lobe_areas.clone())?;
    out.set_item("double_point", d.double_point)?;
    Ok(out)
}

/// One recorded state of a curve-shortening run.
#[pyclass(module = "geolab", frozen)]
struct CsfFrame {
    #[pyo3(get)]
    time: f64,
    #[pyo3(get)]
    curve: PlaneCurve,
    diagnostics: csf::EightDiagnostics,
}

#[pymethods]
impl CsfFrame {
    #[getter]
    fn diagnostics<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        diagnostics_dict(py, &self.diagnostics)
    }

    /// `(x*/x_max, bowtie distance)` after per-quadrant rescaling.
    fn bowtie(&self) -> PyResult<(f64, f64)> {
        let b = csf::affine_rescale_and_bowtie(&self.curve.inner).map_err(csf_err)?;
        Ok((b.ratio_xstar, b.bowtie_distance))
    }

    fn tip_products(&self) -> PyResult<(f64, f64)> {
        csf::tip_products(&self.curve.inner).map_err(csf_err)
    }
}

/// Evolves `curve` by curve shortening. Frames are taken every `frame_dt` of
/// flow time, or at each drop of the area by `area_ratio` when that is given.
#[pyfunction]
#[pyo3(signature = (curve, t_end = None, area_floor = None, frame_dt = 0.01, area_ratio = None, symmetric = false))]
fn csf_evolve(
    py: Python<'_>,
    curve: &PlaneCurve,
    t_end: Option<f64>,
    area_floor: Option<f64>,
    frame_dt: f64,
    area_ratio: Option<f64>,
    symmetric: bool,
) -> PyResult<(Vec<CsfFrame>, String)> {
    let policy = match area_ratio {
        Some(r) => FramePolicy::AreaRatio(r),
        None => FramePolicy::Interval(frame_dt),
    };
    let mut opts = EvolveOptions::new(policy);
    if symmetric {
        opts = opts.symmetric();
    }
    let stop = StopRule { t_end, area_floor, ..StopRule::default() };
    let c = curve.inner.clone();
    let run = py.detach(move || csf::csf_evolve(&c, stop, &opts)).map_err(csf_err)?;
    let reason = run.reason.as_str().to_string();
    let frames = run
        .frames
        .into_iter()
        .map(|f| CsfFrame { time: f.diagnostics.time, curve: PlaneCurve { inner: f.curve }, diagnostics: f.diagnostics })
        .collect();
    Ok((frames, reason))
}

/// Comparison solution of the heat equation used for the lobe estimates.
#[pyfunction]
fn comparison_solution(x: f64, t: f64, m: f64) -> PyResult<f64> {
    csf::comparison_solution(x, t, m).map_err(csf_err)
}

fn field(samples: Vec<f64>) -> PyResult<torsionflow::TorsionField> {
    torsionflow::TorsionField::new(samples).map_err(tor_err)
}

/// Method-of-lines torsion evolution with `κ ≡ kappa`; returns `(times, frames)`.
#[pyfunction]
#[pyo3(signature = (tau0, t_end, output_times, kappa = 1.0))]
fn torsion_evolve(
    py: Python<'_>,
    tau0: Vec<f64>,
    t_end: f64,
    output_times: Vec<f64>,
    kappa: f64,
) -> PyResult<(Vec<f64>, Vec<Vec<f64>>)> {
    let tau0 = field(tau0)?;
    let k = CurvatureProfile::constant(kappa).map_err(tor_err)?;
    let run = py.detach(|| torsionflow::torsion_evolve(&tau0, &k, t_end, &output_times)).map_err(tor_err)?;
    Ok((run.times, run.frames.into_iter().map(|f| f.into_samples()).collect()))
}

#[pyfunction]
#[pyo3(signature = (tau, kappa = 1.0))]
fn torsion_rhs(tau: Vec<f64>, kappa: f64) -> PyResult<Vec<f64>> {
    let k = CurvatureProfile::constant(kappa).map_err(tor_err)?;
    torsionflow::torsion_rhs(&field(tau)?, &k).map_err(tor_err)
}

/// `(∫√τ, ∫τ)` over one period.
#[pyfunction]
fn torsion_invariants(tau: Vec<f64>) -> PyResult<(f64, f64)> {
    Ok(torsionflow::torsion_invariants(&field(tau)?))
}

/// `τ(s) = 2/(C ± √(C² − 4)·sin 2(s + shift))` on `n` points.
#[pyfunction]
#[pyo3(signature = (n, c = 3.0, shift = 0.0, minus = false))]
fn stationary_torsion(n: usize, c: f64, shift: f64, minus: bool) -> PyResult<Vec<f64>> {
    let sign = if minus { StationarySign::Minus } else { StationarySign::Plus };
    Ok(torsionflow::stationary_torsion(n, c, shift, sign).map_err(tor_err)?.into_samples())
}

/// `(times, S)` for the helix perturbed by `amplitude·sin s`.
#[pyfunction]
#[pyo3(signature = (amplitude = 0.01, t_end = 50.0, n = 32, dt_out = 0.5))]
fn helix_stability(py: Python<'_>, amplitude: f64, t_end: f64, n: usize, dt_out: f64) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let s = py.detach(|| torsionflow::helix_stability(amplitude, t_end, n, dt_out)).map_err(tor_err)?;
    Ok((s.times, s.s))
}

/// First return time of the torsion profile after `window_start`.
#[pyfunction]
#[pyo3(signature = (times, frames, window_start = 0.5))]
fn quasi_period(times: Vec<f64>, frames: Vec<Vec<f64>>, window_start: f64) -> PyResult<f64> {
    let frames = frames.into_iter().map(field).collect::<PyResult<Vec<_>>>()?;
    Ok(torsionflow::quasi_period(&times, &frames, window_start).map_err(tor_err)?.t_star)
}

/// Fourier solution of the linearized flow at time `t`.
#[pyfunction]
fn linearized_solution(w0: Vec<f64>, t: f64) -> PyResult<Vec<f64>> {
    torsionflow::linearized_solution(&w0, t).map_err(tor_err)
}

/// Transform chain of `tau`; returns `(record, round-trip error)`.
#[pyfunction]
fn cdf_transform<'py>(py: Python<'py>, tau: Vec<f64>) -> PyResult<(Bound<'py, PyDict>, f64)> {
    let (r, err) = torsionflow::cdf_transform_roundtrip(&field(tau)?).map_err(tor_err)?;
    let d = PyDict::new(py);
    d.set_item("v", r.v)?;
    d.set_item("w", r.w)?;
    d.set_item("m", r.m)?;
    d.set_item("eta", r.eta)?;
    d.set_item("z", r.z)?;
    d.set_item("u", r.u)?;
    d.set_item("q", r.q)?;
    d.set_item("u_periodicity", r.u_periodicity)?;
    Ok((d, err))
}

/// Space curve with curvature `kappa` and torsion `tau` over `turns` periods,
/// starting from the standard frame at the origin.
#[pyfunction]
#[pyo3(signature = (tau, kappa = 1.0, turns = 1.0))]
fn frenet_reconstruct(tau: Vec<f64>, kappa: f64, turns: f64) -> PyResult<(Vec<f64>, Vec<[f64; 3]>)> {
    let k = CurvatureProfile::constant(kappa).map_err(tor_err)?;
    let init = torsionflow::FrenetState::STANDARD;
    let c = torsionflow::frenet_reconstruct(&k, &field(tau)?, &init, (0.0, std::f64::consts::TAU * turns))
        .map_err(tor_err)?;
    Ok((c.s, c.points))
}

fn alpha(a: f64) -> PyResult<Alpha> {
    Alpha::new(a).map_err(geo_err)
}

/// Period of the loop level set through `V_β`; `closed` selects the
/// elliptic closed form, available for `α ∈ {1/2, 1}`.
#[pyfunction]
#[pyo3(signature = (alpha_value, beta, closed = false))]
fn period(alpha_value: f64, beta: f64, closed: bool) -> PyResult<(f64, f64, f64)> {
    let a = alpha(alpha_value)?;
    let r = if closed { geoflow::period_closed_form(a, beta) } else { geoflow::period_numeric(a, beta) }
        .map_err(geo_err)?;
    Ok((r.period, r.t0, r.t1))
}

/// Geodesic from the identity; returns `(times, positions, tangents)`.
type Trajectory = (Vec<f64>, Vec<[f64; 3]>, Vec<[f64; 3]>);

#[pyfunction]
fn geodesic(
    py: Python<'_>,
    alpha_value: f64,
    v0: [f64; 3],
    t_end: f64,
) -> PyResult<Trajectory> {
    let a = alpha(alpha_value)?;
    let v = UnitTangent::normalized(v0[0], v0[1], v0[2]).map_err(geo_err)?;
    let g = py.detach(|| geoflow::geodesic(v, a, t_end)).map_err(geo_err)?;
    let pos = g.positions.iter().map(|p| [p.x, p.y, p.z]).collect();
    let tan = g.tangents.iter().map(|v| v.to_array()).collect();
    Ok((g.times, pos, tan))
}

/// Structure-field flowline; returns `(times, tangents, max H drift)`.
#[pyfunction]
#[pyo3(signature = (alpha_value, v0, t_end, backward = false))]
fn flowline(alpha_value: f64, v0: [f64; 3], t_end: f64, backward: bool) -> PyResult<(Vec<f64>, Vec<[f64; 3]>, f64)> {
    let a = alpha(alpha_value)?;
    let v = UnitTangent::normalized(v0[0], v0[1], v0[2]).map_err(geo_err)?;
    let dir = if backward { Direction::Backward } else { Direction::Forward };
    let f = geoflow::flow_tangent(v, a, t_end, dir).map_err(geo_err)?;
    let drift = f.max_h_drift();
    Ok((f.times, f.tangents.iter().map(|v| v.to_array()).collect(), drift))
}

/// Cylinder function along the geodesic with tangent `V_β`; returns
/// `(predicted value, samples, max relative drift)`.
#[pyfunction]
fn cylinder_invariant(alpha_value: f64, beta: f64, t_end: f64) -> PyResult<(f64, Vec<f64>, f64)> {
    let a = alpha(alpha_value)?;
    let g = geoflow::geodesic(geoflow::loop_vector(a, beta).map_err(geo_err)?, a, t_end).map_err(geo_err)?;
    let c = geoflow::cylinder_invariant(&g, a, beta).map_err(geo_err)?;
    Ok((c.predicted, c.q, c.max_relative_drift))
}

/// Endpoints `(x0, a, b)` of perfect symmetric flowlines.
#[pyfunction]
fn boundary_curve(py: Python<'_>, alpha_value: f64, x0_grid: Vec<f64>) -> PyResult<Vec<(f64, f64, f64)>> {
    let a = alpha(alpha_value)?;
    let c = py.detach(|| geoflow::boundary_curve(a, &x0_grid)).map_err(geo_err)?;
    Ok(c.points.iter().map(|p| (p.x0, p.a, p.b)).collect())
}

/// Sectional, intrinsic, extrinsic and mean curvature of the coordinate
/// planes, keyed by plane name, plus the scalar curvature.
#[pyfunction]
fn curvature_data<'py>(py: Python<'py>, alpha_value: f64) -> PyResult<Bound<'py, PyDict>> {
    let c = geoflow::curvature_data(alpha(alpha_value)?);
    let d = PyDict::new(py);
    for p in &c.planes {
        d.set_item(p.plane, (p.sectional, p.intrinsic, p.extrinsic, p.mean))?;
    }
    d.set_item("scalar", c.scalar)?;
    Ok(d)
}

/// Runs acceptance check `id` (1 to 19); returns `(status, detail)`.
#[pyfunction]
fn run_criterion(py: Python<'_>, id: u8) -> PyResult<(String, String)> {
    if !(1..=19).contains(&id) {
        return Err(pyo3::exceptions::PyValueError::new_err(format!("criterion id {id} not in 1..=19")));
    }
    let r = py.detach(|| acceptance::run_criterion(id));
    Ok((r.status.as_str().to_string(), r.detail))
}

#[pymodule]
#[pyo3(name = "geolab")]
fn geolab_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("GeolabError", m.py().get_type::<GeolabError>())?;
    m.add_class::<PlaneCurve>()?;
    m.add_class::<CsfFrame>()?;
    m.add_function(wrap_pyfunction!(csf_evolve, m)?)?;
    m.add_function(wrap_pyfunction!(comparison_solution, m)?)?;
    m.add_function(wrap_pyfunction!(torsion_evolve, m)?)?;
    m.add_function(wrap_pyfunction!(torsion_rhs, m)?)?;
    m.add_function(wrap_pyfunction!(torsion_invariants, m)?)?;
    m.add_function(wrap_pyfunction!(stationary_torsion, m)?)?;
    m.add_function(wrap_pyfunction!(helix_stability, m)?)?;
    m.add_function(wrap_pyfunction!(quasi_period, m)?)?;
    m.add_function(wrap_pyfunction!(linearized_solution, m)?)?;
    m.add_function(wrap_pyfunction!(cdf_transform, m)?)?;
    m.add_function(wrap_pyfunction!(frenet_reconstruct, m)?)?;
    m.add_function(wrap_pyfunction!(period, m)?)?;
    m.add_function(wrap_pyfunction!(geodesic, m)?)?;
    m.add_function(wrap_pyfunction!(flowline, m)?)?;
    m.add_function(wrap_pyfunction!(cylinder_invariant, m)?)?;
    m.add_function(wrap_pyfunction!(boundary_curve, m)?)?;
    m.add_function(wrap_pyfunction!(curvature_data, m)?)?;
    m.add_function(wrap_pyfunction!(run_criterion, m)?)?;
    Ok(())
}
