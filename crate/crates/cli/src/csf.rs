use clap::{Args, Subcommand, ValueEnum};
use geolab::csf::{
    affine_rescale_and_bowtie, csf_evolve, grim_reaper_check, lobe_angle_profile, make_concinnous_eight, tip_products,
    CsfError, CsfRun, EightFamily, EvolveOptions, FramePolicy, PlaneCurve, StopRule,
};
use serde::Serialize;
use serde_json::json;

use crate::output::{Dataset, Report};

#[derive(Debug, Subcommand)]
pub enum CsfCommand {
    /// Evolve a curve and record frames and diagnostics.
    Run(RunArgs),
    /// Symmetric eight toward the singularity with bowtie diagnostics.
    Bowtie(TailArgs),
    /// Grim-reaper profile error of the lobes near the singularity.
    Grimreaper(TailArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveKind {
    /// Lemniscate of Bernoulli.
    Bernoulli,
    /// Lemniscate of Gerono, x = sin t, y = sin t cos t.
    Gerono,
    Circle,
}

#[derive(Debug, Args, Serialize)]
pub struct CurveArgs {
    #[arg(long, value_enum, default_value_t = CurveKind::Bernoulli)]
    pub curve: CurveKind,
    #[arg(long, default_value_t = 1024)]
    pub n: usize,
    /// Half-width of the initial curve.
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
}

impl CurveArgs {
    fn build(&self) -> Result<PlaneCurve, CsfError> {
        match self.curve {
            CurveKind::Bernoulli => make_concinnous_eight(self.scale, EightFamily::Lemniscate, self.n),
            CurveKind::Gerono => make_concinnous_eight(
                self.scale,
                EightFamily::Parametric(Box::new(|t: f64| [t.sin(), t.sin() * t.cos()])),
                self.n,
            ),
            CurveKind::Circle => PlaneCurve::circle(self.scale, self.n),
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct RunArgs {
    #[command(flatten)]
    pub curve: CurveArgs,
    #[arg(long = "T")]
    pub t_end: Option<f64>,
    #[arg(long, default_value_t = 1e-2)]
    pub area_floor: f64,
    /// Flow time between frames.
    #[arg(long, default_value_t = 0.002)]
    pub frame_dt: f64,
    /// Project onto the two reflection symmetries after every step.
    #[arg(long)]
    pub symmetric: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct TailArgs {
    #[command(flatten)]
    pub curve: CurveArgs,
    #[arg(long, default_value_t = 1e-40)]
    pub area_floor: f64,
    /// Area ratio between consecutive frames.
    #[arg(long, default_value_t = 0.1)]
    pub area_ratio: f64,
}

fn tolerances() -> serde_json::Value {
    json!({"cfl": 0.4, "singularity_kh": 0.5})
}

fn frames_and_diagnostics(run: &CsfRun) -> [Dataset; 2] {
    let mut frames = Dataset::new("frames", &["t", "point_index", "x", "y"]);
    let mut diag = Dataset::new("diagnostics", &geolab::csf::EightDiagnostics::CSV_HEADER);
    for f in &run.frames {
        let t = f.diagnostics.time;
        for (i, p) in f.curve.points().iter().enumerate() {
            frames.push(vec![t.into(), i.into(), p[0].into(), p[1].into()]);
        }
        diag.push(f.diagnostics.csv_row().iter().map(|&v| v.into()).collect());
    }
    [frames, diag]
}

fn tail_run(a: &TailArgs) -> Result<CsfRun, CsfError> {
    let stop = StopRule { area_floor: Some(a.area_floor), ..StopRule::default() };
    csf_evolve(&a.curve.build()?, stop, &EvolveOptions::new(FramePolicy::AreaRatio(a.area_ratio)).symmetric())
}

pub fn run(cmd: &CsfCommand) -> Result<Report, String> {
    let e = |e: CsfError| e.to_string();
    match cmd {
        CsfCommand::Run(a) => {
            let stop = StopRule { t_end: a.t_end, area_floor: Some(a.area_floor), ..StopRule::default() };
            let mut opts = EvolveOptions::new(FramePolicy::Interval(a.frame_dt));
            if a.symmetric {
                opts = opts.symmetric();
            }
            let run = csf_evolve(&a.curve.build().map_err(e)?, stop, &opts).map_err(e)?;
            let mut rep = Report::new("csf run", a, tolerances());
            rep.summary("stop_reason", run.reason.as_str());
            rep.summary("steps", run.steps);
            rep.datasets.extend(frames_and_diagnostics(&run));
            Ok(rep)
        }
        CsfCommand::Bowtie(a) => {
            let run = tail_run(a).map_err(e)?;
            let mut rep = Report::new("csf bowtie", a, tolerances());
            rep.summary("stop_reason", run.reason.as_str());
            rep.summary("steps", run.steps);
            let mut bow = Dataset::new(
                "bowtie",
                &["t", "total_area", "x_star_over_x_max", "bowtie_distance", "tip_product_x", "tip_product_y"],
            );
            for f in &run.frames {
                let b = affine_rescale_and_bowtie(&f.curve).map_err(e)?;
                let (px, py) = tip_products(&f.curve).map_err(e)?;
                let d = &f.diagnostics;
                bow.push(vec![
                    d.time.into(),
                    d.total_area.into(),
                    b.ratio_xstar.into(),
                    b.bowtie_distance.into(),
                    px.into(),
                    py.into(),
                ]);
            }
            rep.datasets.extend(frames_and_diagnostics(&run));
            rep.datasets.push(bow);
            Ok(rep)
        }
        CsfCommand::Grimreaper(a) => {
            let run = tail_run(a).map_err(e)?;
            let mut rep = Report::new("csf grimreaper", a, json!({"cfl": 0.4, "tip_points": 16}));
            let mut series = Dataset::new("grimreaper", &["t", "total_area", "error"]);
            let mut resolved = None;
            for f in &run.frames {
                if let Ok(err) = grim_reaper_check(std::slice::from_ref(f)) {
                    series.push(vec![f.diagnostics.time.into(), f.diagnostics.total_area.into(), err[0].into()]);
                    resolved = Some(f);
                }
            }
            let last = resolved.ok_or("no frame resolves the tip")?;
            let (phi, k) = lobe_angle_profile(&last.curve).map_err(e)?;
            let kmax = k.iter().copied().fold(0.0, f64::max);
            let mut profile = Dataset::new("profile", &["phi", "k_over_kmax", "sin_phi"]);
            for (p, kv) in phi.iter().zip(&k) {
                profile.push(vec![(*p).into(), (kv / kmax).into(), p.sin().into()]);
            }
            rep.summary("profile_time", last.diagnostics.time);
            rep.datasets.extend([series, profile]);
            Ok(rep)
        }
    }
}
