use crate::args::{Format, SourceArgs};
use belltest::lhv::TheoremReport;
use belltest::montecarlo::EstimatedReport;
use belltest::optimizer::{ScanOptions, ScanResult, SurfacePoint};
use belltest::predict::Source;
use belltest::{InequalityId, InequalityReport, SettingsQuad};
use serde::Serialize;
use std::fmt::Write;

#[derive(Serialize)]
pub struct Axes {
    a: f64,
    b: f64,
    a_prime: f64,
    b_prime: f64,
}

impl From<&SettingsQuad> for Axes {
    fn from(q: &SettingsQuad) -> Self {
        let [a, b, a_prime, b_prime] = q.axes();
        Axes {
            a,
            b,
            a_prime,
            b_prime,
        }
    }
}

#[derive(Serialize)]
pub struct Inputs {
    source: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    eta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    phi: Option<f64>,
    #[serde(rename = "F", skip_serializing_if = "Option::is_none")]
    f: Option<f64>,
    #[serde(rename = "F_forced", skip_serializing_if = "Option::is_none")]
    f_forced: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    model: Option<String>,
    angles: Axes,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pairs_per_setting: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Inputs {
    pub fn new(args: &SourceArgs, source: &Source, quad: &SettingsQuad) -> Self {
        let mut inputs = Inputs {
            source: "qm-ideal",
            eta: None,
            phi: None,
            f: None,
            f_forced: None,
            model: None,
            angles: Axes::from(quad),
            pairs_per_setting: None,
            seed: None,
        };
        match source {
            Source::QmIdeal => {}
            Source::QmReal(g) => {
                inputs.source = "qm-real";
                inputs.eta = Some(g.eta());
                inputs.phi = Some(g.phi_deg());
                inputs.f = Some(g.depolarization());
                inputs.f_forced = Some(g.f_override().is_some());
            }
            Source::Lhv(_) => {
                inputs.source = "lhv";
                inputs.model = args.model.as_ref().map(|p| p.display().to_string());
            }
        }
        inputs
    }
}

#[derive(Serialize)]
pub struct ReportOut {
    name: InequalityId,
    lhs: f64,
    bound: f64,
    margin: f64,
    violation_factor: f64,
    violated: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    std_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sigma_distance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bootstrap_std_error: Option<f64>,
    inputs: Inputs,
}

impl ReportOut {
    pub fn new(r: InequalityReport, estimate: Option<&EstimatedReport>, inputs: Inputs) -> Self {
        ReportOut {
            name: r.name,
            lhs: r.lhs,
            bound: r.bound,
            margin: r.margin,
            violation_factor: r.violation_factor,
            violated: r.violated,
            std_error: estimate.map(|e| e.std_error),
            sigma_distance: estimate.and_then(|e| e.sigma_distance),
            bootstrap_std_error: None,
            inputs,
        }
    }
}

#[derive(Serialize)]
pub struct ScanOut {
    name: InequalityId,
    best_angles: Axes,
    best_separations: [f64; 4],
    best_lhs: f64,
    best_factor: f64,
    bound: f64,
    margin: f64,
    violated: bool,
    evaluations: u64,
    step: f64,
    refine_rounds: u32,
    parameterization: &'static str,
    inputs: Inputs,
}

impl ScanOut {
    pub fn new(r: &ScanResult, options: ScanOptions, inputs: Inputs) -> Self {
        ScanOut {
            name: r.best_report.name,
            best_angles: Axes::from(&r.best_quad),
            best_separations: r.best_quad.separations(),
            best_lhs: r.best_lhs,
            best_factor: r.best_factor,
            bound: r.best_report.bound,
            margin: r.best_report.margin,
            violated: r.best_report.violated,
            evaluations: r.evaluations,
            step: options.step_deg,
            refine_rounds: options.refine_rounds,
            parameterization: match options.parameterization {
                belltest::optimizer::Parameterization::PrimesAligned => "primes-aligned",
                belltest::optimizer::Parameterization::Free => "free",
            },
            inputs,
        }
    }
}

pub fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub fn render_report(out: &ReportOut, format: Format) -> String {
    match format {
        Format::Json => json(out),
        Format::Csv => format!(
            "name,lhs,bound,margin,violation_factor,violated,std_error,sigma_distance\n{},{},{},{},{},{},{},{}\n",
            out.name,
            out.lhs,
            out.bound,
            out.margin,
            out.violation_factor,
            out.violated,
            opt(out.std_error),
            opt(out.sigma_distance),
        ),
    }
}

pub fn render_scan(out: &ScanOut, format: Format) -> String {
    match format {
        Format::Json => json(out),
        Format::Csv => format!(
            "name,a,b,a_prime,b_prime,lhs,violation_factor,evaluations\n{},{},{},{},{},{},{},{}\n",
            out.name,
            out.best_angles.a,
            out.best_angles.b,
            out.best_angles.a_prime,
            out.best_angles.b_prime,
            out.best_lhs,
            out.best_factor,
            out.evaluations,
        ),
    }
}

pub fn theorem_csv(report: &TheoremReport) -> String {
    let mut s = String::from("assignment,value\n");
    for v in &report.values {
        let _ = writeln!(s, "{},{}", v.assignment, v.value);
    }
    s
}

pub fn surface_csv(surface: &[SurfacePoint]) -> String {
    let mut s = String::from("a,b,a_prime,b_prime,lhs\n");
    for p in surface {
        let [a, b, ap, bp] = p.quad.axes();
        let _ = writeln!(s, "{a},{b},{ap},{bp},{}", p.lhs);
    }
    s
}
