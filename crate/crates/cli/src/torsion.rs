use std::f64::consts::TAU;

use clap::{Args, Subcommand, ValueEnum};
use geolab::torsionflow::{
    cdf_transform_roundtrip, frenet_reconstruct, helix_stability, quasi_period, stationary_torsion,
    stationary_torsion_general, torsion_evolve, torsion_invariants, torsion_rhs, CurvatureProfile, FrenetState,
    StationarySign, TorsionError, TorsionField,
};
use serde::Serialize;
use serde_json::json;

use crate::output::{Dataset, Report};

#[derive(Debug, Subcommand)]
pub enum TorsionCommand {
    /// Method-of-lines evolution of an initial torsion profile.
    Evolve(EvolveArgs),
    /// Stationary profile and its residual.
    Stationary(StationaryArgs),
    /// Distance S(t) of a perturbed helix from the helix.
    Stability(StabilityArgs),
    /// Hodograph transform chain and its round-trip error.
    Transform(ProfileArgs),
    /// Space curve from curvature and torsion by Frenet integration.
    Reconstruct(ReconstructArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    /// base + amplitude·sin s
    Sin,
    /// base + amplitude·(sin s + cos s)
    Sincos,
    /// 2/(3 + √5·sin 2s)
    Tau1,
    /// base
    Constant,
}

#[derive(Debug, Args, Serialize)]
pub struct ProfileArgs {
    #[arg(long, value_enum, default_value_t = Profile::Sin)]
    pub profile: Profile,
    #[arg(long, default_value_t = 10.0)]
    pub base: f64,
    #[arg(long, default_value_t = 0.5)]
    pub amplitude: f64,
    #[arg(long, default_value_t = 128)]
    pub n: usize,
}

impl ProfileArgs {
    fn field(&self) -> Result<TorsionField, TorsionError> {
        let (b, a) = (self.base, self.amplitude);
        match self.profile {
            Profile::Sin => TorsionField::from_fn(self.n, |s| b + a * s.sin()),
            Profile::Sincos => TorsionField::from_fn(self.n, |s| b + a * (s.sin() + s.cos())),
            Profile::Tau1 => stationary_torsion(self.n, 3.0, 0.0, StationarySign::Plus),
            Profile::Constant => TorsionField::constant(self.n, b),
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub profile: ProfileArgs,
    #[arg(long = "T", default_value_t = 3.0)]
    pub t_end: f64,
    #[arg(long, default_value_t = 0.01)]
    pub dt_out: f64,
    /// Start of the quasi-period search window; negative disables the search.
    #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
    pub window: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct StationaryArgs {
    #[arg(long, default_value_t = 256)]
    pub n: usize,
    /// Orbit constant C; 3 gives tau1.
    #[arg(long, default_value_t = 3.0)]
    pub c: f64,
    /// Linear coefficient A; nonzero selects the general orbit.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub a: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub shift: f64,
    #[arg(long)]
    pub minus: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct StabilityArgs {
    #[arg(long, default_value_t = 0.01)]
    pub amplitude: f64,
    #[arg(long = "T", default_value_t = 50.0)]
    pub t_end: f64,
    #[arg(long, default_value_t = 32)]
    pub n: usize,
    #[arg(long, default_value_t = 0.5)]
    pub dt_out: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct ReconstructArgs {
    #[command(flatten)]
    pub profile: ProfileArgs,
    #[arg(long, default_value_t = 1.0)]
    pub kappa: f64,
    /// Arclength span in units of 2π.
    #[arg(long, default_value_t = 1.0)]
    pub turns: f64,
}

fn mesh(n: usize) -> Vec<f64> {
    (0..n).map(|j| TAU * j as f64 / n as f64).collect()
}

fn ode_tolerances() -> serde_json::Value {
    json!({"abs_tol": 1e-10, "rel_tol": 1e-10})
}

pub fn run(cmd: &TorsionCommand) -> Result<Report, String> {
    let e = |e: TorsionError| e.to_string();
    let unit = CurvatureProfile::Constant(1.0);
    match cmd {
        TorsionCommand::Evolve(a) => {
            if !(a.dt_out > 0.0 && a.t_end > 0.0) {
                return Err(format!("need T > 0 and dt-out > 0, got {} and {}", a.t_end, a.dt_out));
            }
            let tau0 = a.profile.field().map_err(e)?;
            let count = (a.t_end / a.dt_out).round() as usize;
            let times: Vec<f64> = (0..=count).map(|i| (i as f64 * a.dt_out).min(a.t_end)).collect();
            let run = torsion_evolve(&tau0, &unit, a.t_end, &times).map_err(e)?;
            let mut rep = Report::new("torsion evolve", a, ode_tolerances());
            rep.summary("accepted_steps", run.stats.accepted);
            rep.summary("rejected_steps", run.stats.rejected);
            if a.window >= 0.0 && a.window < a.t_end {
                let q = quasi_period(&run.times, &run.frames, a.window).map_err(e)?;
                rep.summary("quasi_period", q);
            }
            let s = mesh(tau0.n());
            let mut fields = Dataset::new("torsion", &["t", "j", "s", "tau"]);
            let mut inv = Dataset::new("invariants", &["t", "int_sqrt_tau", "int_tau"]);
            for (t, f) in run.times.iter().zip(&run.frames) {
                for (j, v) in f.samples().iter().enumerate() {
                    fields.push(vec![(*t).into(), j.into(), s[j].into(), (*v).into()]);
                }
                let (p, q) = torsion_invariants(f);
                inv.push(vec![(*t).into(), p.into(), q.into()]);
            }
            rep.datasets.extend([fields, inv]);
            Ok(rep)
        }
        TorsionCommand::Stationary(a) => {
            let tau = if a.a == 0.0 {
                let sign = if a.minus { StationarySign::Minus } else { StationarySign::Plus };
                stationary_torsion(a.n, a.c, a.shift, sign)
            } else {
                stationary_torsion_general(a.n, a.a, a.c)
            }
            .map_err(e)?;
            let rhs = torsion_rhs(&tau, &unit).map_err(e)?;
            let mut rep = Report::new("torsion stationary", a, json!({}));
            rep.summary("rhs_sup", rhs.iter().fold(0.0f64, |m, v| m.max(v.abs())));
            let mut d = Dataset::new("stationary", &["s", "tau", "rhs"]);
            for ((s, t), r) in mesh(a.n).iter().zip(tau.samples()).zip(&rhs) {
                d.push(vec![(*s).into(), (*t).into(), (*r).into()]);
            }
            rep.datasets.push(d);
            Ok(rep)
        }
        TorsionCommand::Stability(a) => {
            let series = helix_stability(a.amplitude, a.t_end, a.n, a.dt_out).map_err(e)?;
            let mut rep = Report::new("torsion stability", a, ode_tolerances());
            rep.summary("s0", series.s.first().copied());
            rep.summary("s_max", series.max());
            let mut d = Dataset::new("stability", &["t", "S"]);
            for (t, s) in series.times.iter().zip(&series.s) {
                d.push(vec![(*t).into(), (*s).into()]);
            }
            rep.datasets.push(d);
            Ok(rep)
        }
        TorsionCommand::Transform(a) => {
            let tau = a.field().map_err(e)?;
            let (rec, err) = cdf_transform_roundtrip(&tau).map_err(e)?;
            let mut rep = Report::new("torsion transform", a, json!({"newton_tol": 1e-14}));
            rep.summary("roundtrip_error", err);
            rep.summary("u_periodicity", rec.u_periodicity);
            rep.summary("m", rec.m);
            let mut by_s = Dataset::new("transform_s", &["s", "tau", "v", "w"]);
            for (j, s) in mesh(a.n).iter().enumerate() {
                by_s.push(vec![(*s).into(), tau.samples()[j].into(), rec.v[j].into(), rec.w[j].into()]);
            }
            let mut by_xi = Dataset::new("transform_xi", &["xi", "eta", "z", "u", "q"]);
            for j in 0..rec.eta.len() {
                let xi = rec.m * j as f64 / rec.eta.len() as f64;
                by_xi.push(vec![xi.into(), rec.eta[j].into(), rec.z[j].into(), rec.u[j].into(), rec.q[j].into()]);
            }
            rep.datasets.extend([by_s, by_xi]);
            Ok(rep)
        }
        TorsionCommand::Reconstruct(a) => {
            let tau = a.profile.field().map_err(e)?;
            let kappa = CurvatureProfile::constant(a.kappa).map_err(e)?;
            let c = frenet_reconstruct(&kappa, &tau, &FrenetState::STANDARD, (0.0, TAU * a.turns)).map_err(e)?;
            let mut rep = Report::new("torsion reconstruct", a, json!({"ode_tol": 1e-13}));
            rep.summary("max_frame_drift", c.max_drift);
            rep.summary("max_radius", c.max_radius());
            let mut d = Dataset::new("curve", &["s", "x", "y", "z"]);
            for (s, p) in c.s.iter().zip(&c.points) {
                d.push(vec![(*s).into(), p[0].into(), p[1].into(), p[2].into()]);
            }
            rep.datasets.push(d);
            Ok(rep)
        }
    }
}
