use std::f64::consts::{PI, SQRT_2};

use clap::{Args, Subcommand, ValueEnum};
use geolab::export::sphere_obj;
use geolab::geoflow::{
    boundary_curve, bounding_box_scan, curvature_data, cylinder_invariant, flow_tangent, g_function_check, geodesic,
    geodesic_sphere, lobe_asymmetry, loop_vector, metric_speed_defect, period_closed_form, period_numeric, Alpha,
    Direction, GeoError, PeriodRecord, UnitTangent,
};
use serde::Serialize;
use serde_json::json;

use crate::output::{Dataset, Report};

#[derive(Debug, Subcommand)]
pub enum GeoCommand {
    /// Period of the loop level set through V_beta.
    Period(PeriodArgs),
    /// Periods at fixed beta over alpha = 0.1, ..., 1.0.
    PeriodTable(PeriodTableArgs),
    /// Structure-field flowline of a unit tangent.
    Flowline(FlowlineArgs),
    /// Geodesic from the identity.
    Geodesic(GeodesicArgs),
    /// Cylinder function along the geodesic with tangent V_beta.
    Cylinder(CylinderArgs),
    /// Endpoints of perfect symmetric flowlines over an x0 grid.
    Boundary(GridArgs),
    /// Minima of a' and b' along symmetric flowlines.
    Boundingbox(GridArgs),
    /// Sign check of G(x0) at alpha = 1/2.
    Gcheck(GcheckArgs),
    /// Geodesic sphere point cloud.
    Sphere(SphereArgs),
    /// Connection, plane curvatures and scalar curvature.
    Curvature(CurvatureArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PeriodMethod {
    Numeric,
    Closed,
}

#[derive(Debug, Args, Serialize)]
pub struct PeriodArgs {
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.999)]
    pub beta: f64,
    #[arg(long, value_enum, default_value_t = PeriodMethod::Numeric)]
    pub method: PeriodMethod,
}

#[derive(Debug, Args, Serialize)]
pub struct PeriodTableArgs {
    #[arg(long, default_value_t = 0.999)]
    pub beta: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct TangentArgs {
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    /// Initial tangent, normalized before use.
    #[arg(long, default_value_t = 0.5)]
    pub vx: f64,
    #[arg(long, default_value_t = 0.6)]
    pub vy: f64,
    #[arg(long, default_value_t = 0.3)]
    pub vz: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct FlowlineArgs {
    #[command(flatten)]
    pub tangent: TangentArgs,
    #[arg(long = "T", default_value_t = 50.0)]
    pub t_end: f64,
    #[arg(long)]
    pub backward: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct GeodesicArgs {
    #[command(flatten)]
    pub tangent: TangentArgs,
    #[arg(long = "T", default_value_t = 10.0)]
    pub t_end: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct CylinderArgs {
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.5)]
    pub beta: f64,
    #[arg(long = "T", default_value_t = 10.0)]
    pub t_end: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct GridArgs {
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.6)]
    pub x0_min: f64,
    #[arg(long, default_value_t = 0.98)]
    pub x0_max: f64,
    #[arg(long, default_value_t = 0.02)]
    pub x0_step: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct GcheckArgs {
    #[arg(long, default_value_t = 0.59)]
    pub x0_min: f64,
    #[arg(long, default_value_t = 0.995)]
    pub x0_max: f64,
    #[arg(long, default_value_t = 0.005)]
    pub x0_step: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct SphereArgs {
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    #[arg(long, default_value_t = 5.0)]
    pub radius: f64,
    #[arg(long, default_value_t = 2000)]
    pub n_dirs: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct CurvatureArgs {
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
}

fn grid(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>, String> {
    if !(step > 0.0 && hi >= lo) {
        return Err(format!("empty grid [{lo}, {hi}] step {step}"));
    }
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| lo + step * i as f64).collect())
}

fn tangent(t: &TangentArgs) -> Result<(Alpha, UnitTangent), GeoError> {
    Ok((Alpha::new(t.alpha)?, UnitTangent::normalized(t.vx, t.vy, t.vz)?))
}

fn period_row(d: &mut Dataset, r: &PeriodRecord) {
    d.push(vec![r.alpha.into(), r.beta.into(), r.t0.into(), r.t1.into(), r.period.into(), r.source.as_str().into()]);
}

const PERIOD_HEADER: [&str; 6] = ["alpha", "beta", "t0", "t1", "P", "source"];

pub fn run(cmd: &GeoCommand) -> Result<Report, String> {
    let e = |e: GeoError| e.to_string();
    match cmd {
        GeoCommand::Period(a) => {
            let alpha = Alpha::new(a.alpha).map_err(e)?;
            let r = match a.method {
                PeriodMethod::Numeric => period_numeric(alpha, a.beta),
                PeriodMethod::Closed => period_closed_form(alpha, a.beta),
            }
            .map_err(e)?;
            let mut rep = Report::new("geo period", a, json!({"quadrature_tol": 1e-13}));
            let mut d = Dataset::new("period", &PERIOD_HEADER);
            period_row(&mut d, &r);
            rep.summary("period", r.period);
            rep.datasets.push(d);
            Ok(rep)
        }
        GeoCommand::PeriodTable(a) => {
            let mut rep = Report::new("geo period-table", a, json!({"quadrature_tol": 1e-13}));
            let mut d = Dataset::new("period_table", &["alpha", "P", "pi_sqrt2_over_sqrt_alpha"]);
            for i in 1..=10 {
                let alpha = i as f64 / 10.0;
                let r = period_numeric(Alpha::new(alpha).map_err(e)?, a.beta).map_err(e)?;
                d.push(vec![alpha.into(), r.period.into(), (PI * SQRT_2 / alpha.sqrt()).into()]);
            }
            rep.datasets.push(d);
            Ok(rep)
        }
        GeoCommand::Flowline(a) => {
            let (alpha, v) = tangent(&a.tangent).map_err(e)?;
            let dir = if a.backward { Direction::Backward } else { Direction::Forward };
            let f = flow_tangent(v, alpha, a.t_end, dir).map_err(e)?;
            let mut rep = Report::new("geo flowline", a, json!({"ode_tol": 1e-12}));
            rep.summary("max_h_drift", f.max_h_drift());
            rep.summary("max_norm_drift", f.max_norm_drift());
            let mut d = Dataset::new("flowline", &["t", "x", "y", "z", "h_drift"]);
            for ((t, v), h) in f.times.iter().zip(&f.tangents).zip(&f.h_drift) {
                d.push(vec![(*t).into(), v.x.into(), v.y.into(), v.z.into(), (*h).into()]);
            }
            rep.datasets.push(d);
            Ok(rep)
        }
        GeoCommand::Geodesic(a) => {
            let (alpha, v) = tangent(&a.tangent).map_err(e)?;
            let g = geodesic(v, alpha, a.t_end).map_err(e)?;
            let mut rep = Report::new("geo geodesic", a, json!({"ode_tol": 1e-12}));
            rep.summary("endpoint", [g.endpoint().x, g.endpoint().y, g.endpoint().z]);
            rep.summary("speed_defect", metric_speed_defect(&g, alpha));
            let mut d = Dataset::new("geodesic", &["t", "x", "y", "z", "vx", "vy", "vz"]);
            for ((t, p), v) in g.times.iter().zip(&g.positions).zip(&g.tangents) {
                d.push(vec![(*t).into(), p.x.into(), p.y.into(), p.z.into(), v.x.into(), v.y.into(), v.z.into()]);
            }
            rep.datasets.push(d);
            Ok(rep)
        }
        GeoCommand::Cylinder(a) => {
            let alpha = Alpha::new(a.alpha).map_err(e)?;
            let g = geodesic(loop_vector(alpha, a.beta).map_err(e)?, alpha, a.t_end).map_err(e)?;
            let c = cylinder_invariant(&g, alpha, a.beta).map_err(e)?;
            let mut rep = Report::new("geo cylinder", a, json!({"ode_tol": 1e-12}));
            rep.summary("predicted", c.predicted);
            rep.summary("max_relative_drift", c.max_relative_drift);
            let mut d = Dataset::new("cylinder", &["t", "q"]);
            for (t, q) in g.times.iter().zip(&c.q) {
                d.push(vec![(*t).into(), (*q).into()]);
            }
            rep.datasets.push(d);
            Ok(rep)
        }
        GeoCommand::Boundary(a) => {
            let alpha = Alpha::new(a.alpha).map_err(e)?;
            let c = boundary_curve(alpha, &grid(a.x0_min, a.x0_max, a.x0_step)?).map_err(e)?;
            let mut rep = Report::new("geo boundary", a, json!({"ode_tol": 1e-12}));
            rep.summary("a_increasing", c.a_increasing);
            rep.summary("b_nonincreasing", c.b_nonincreasing);
            let mut d = Dataset::new("boundary", &["x0", "a", "b", "da_dx0", "db_dx0"]);
            for p in &c.points {
                d.push(vec![p.x0.into(), p.a.into(), p.b.into(), p.da_dx0.into(), p.db_dx0.into()]);
            }
            rep.datasets.push(d);
            Ok(rep)
        }
        GeoCommand::Boundingbox(a) => {
            let alpha = Alpha::new(a.alpha).map_err(e)?;
            let v = bounding_box_scan(alpha, &grid(a.x0_min, a.x0_max, a.x0_step)?).map_err(e)?;
            let mut rep = Report::new("geo boundingbox", a, json!({"derivative_floor": -1e-10}));
            rep.summary("all_pass", v.iter().all(|r| r.pass));
            let mut d = Dataset::new("boundingbox", &["x0", "rho", "min_a_prime", "min_b_prime", "pass"]);
            for r in &v {
                d.push(vec![r.x0.into(), r.rho.into(), r.min_a_prime.into(), r.min_b_prime.into(), r.pass.into()]);
            }
            rep.datasets.push(d);
            Ok(rep)
        }
        GeoCommand::Gcheck(a) => {
            let g = g_function_check(&grid(a.x0_min, a.x0_max, a.x0_step)?).map_err(e)?;
            let mut rep = Report::new("geo gcheck", a, json!({"difference_step": 1e-5}));
            rep.summary("all_negative", g.all_negative);
            rep.summary("all_dp_positive", g.all_dp_positive);
            rep.summary("any_inconclusive", g.any_inconclusive);
            let mut d = Dataset::new("gcheck", &["x0", "dp_dx0", "g", "inconclusive"]);
            for p in &g.points {
                d.push(vec![p.x0.into(), p.dp_dx0.into(), p.g.into(), p.inconclusive.into()]);
            }
            rep.datasets.push(d);
            Ok(rep)
        }
        GeoCommand::Sphere(a) => {
            let cloud = geodesic_sphere(Alpha::new(a.alpha).map_err(e)?, a.radius, a.n_dirs).map_err(e)?;
            let mut rep = Report::new("geo sphere", a, json!({"ode_tol": 1e-11}));
            rep.summary("lobe_asymmetry", lobe_asymmetry(&cloud));
            let mut d = Dataset::new("sphere", &["dir_x", "dir_y", "dir_z", "end_x", "end_y", "end_z"]);
            for p in &cloud {
                let (v, q) = (p.direction, p.endpoint);
                d.push(vec![v.x.into(), v.y.into(), v.z.into(), q.x.into(), q.y.into(), q.z.into()]);
            }
            rep.datasets.push(d);
            rep.raw.push(("sphere.obj".into(), sphere_obj(&cloud)));
            Ok(rep)
        }
        GeoCommand::Curvature(a) => {
            let c = curvature_data(Alpha::new(a.alpha).map_err(e)?);
            let mut rep = Report::new("geo curvature", a, json!({}));
            rep.summary("scalar", c.scalar);
            rep.summary("scalar_formula", c.scalar_formula);
            rep.summary("connection", c.connection);
            rep.summary("structure_field_defect", c.structure_field_defect);
            let mut d = Dataset::new("curvature", &["plane", "sectional", "intrinsic", "extrinsic", "mean"]);
            for p in &c.planes {
                d.push(vec![p.plane.into(), p.sectional.into(), p.intrinsic.into(), p.extrinsic.into(), p.mean.into()]);
            }
            rep.datasets.push(d);
            Ok(rep)
        }
    }
}
