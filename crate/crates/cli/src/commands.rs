use crate::args::{
    Cli, Command, EvalArgs, Format, Ineq, McArgs, ScanArgs, SettingsArgs, SourceArgs, SourceKind,
};
use crate::output::{self, Inputs, ReportOut};
use crate::Failure;
use belltest::montecarlo::{
    self, bootstrap_std_error, counters_csv, evaluate_measurable_from_counts,
    evaluate_measurable_symmetric_from_counts, run_manifest, EstimatedReport, RunPlan, Source,
};
use belltest::optimizer::{self, Parameterization, ScanOptions};
use belltest::{predict, CascadeGeometry, FourAxisModel, InequalityId, SettingPair, SettingsQuad};
use std::path::Path;

const DIFF_TOLERANCE_DEG: f64 = 1e-9;

pub fn run(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::VerifyTheorem { format } => verify_theorem(format),
        Command::Eval(args) => eval(args),
        Command::Mc(args) => mc(args),
        Command::Scan(args) => scan(args),
    }
}

fn verify_theorem(format: Format) -> Result<String, Failure> {
    let report = belltest::lhv::verify_theorem();
    let text = match format {
        Format::Json => output::json(&report),
        Format::Csv => output::theorem_csv(&report),
    };
    if report.all_satisfied && report.case_bounds_match {
        Ok(text)
    } else {
        Err(Failure::internal(format!(
            "local bound check failed (minimum {})\n{text}",
            report.min_functional_value
        )))
    }
}

fn eval(args: EvalArgs) -> Result<String, Failure> {
    let ineq = InequalityId::from(args.ineq);
    let source = build_source(&args.source)?;
    let quad = build_quad(&args.settings, args.ineq)?;
    let report = predict::predict(ineq, &quad, &source)?;
    let out = ReportOut::new(report, None, Inputs::new(&args.source, &source, &quad));
    Ok(output::render_report(&out, args.format))
}

fn mc(args: McArgs) -> Result<String, Failure> {
    if args.pairs == 0 {
        return Err(Failure::invalid("--pairs must be at least 1"));
    }
    if args.workers == Some(0) {
        return Err(Failure::invalid("--workers must be at least 1"));
    }
    if !matches!(args.ineq, Ineq::Measurable | Ineq::MeasurableSymmetric) {
        return Err(Failure::invalid(
            "--ineq for mc must be measurable or measurable-symmetric",
        ));
    }
    let source = build_source(&args.source)?;
    let quad = build_quad(&args.settings, args.ineq)?;
    let plan = RunPlan {
        quad,
        pairs_per_setting: args.pairs,
        seed: args.seed,
        source,
    };
    let runs = match args.workers {
        Some(w) => montecarlo::run_experiment_with_workers(&plan, w)?,
        None => montecarlo::run_experiment(&plan)?,
    };
    if let Some(path) = &args.counters {
        write_file(path, &counters_csv(&runs), "--counters")?;
    }
    if let Some(path) = &args.manifest {
        write_file(path, &run_manifest(&plan, &runs), "--manifest")?;
    }

    let estimated: EstimatedReport = match args.ineq {
        Ineq::MeasurableSymmetric => {
            let seps = quad.separations();
            if (seps[0] - seps[1]).abs() > DIFF_TOLERANCE_DEG
                || (seps[0] - seps[2]).abs() > DIFF_TOLERANCE_DEG
            {
                return Err(Failure::invalid(
                    "measurable-symmetric needs equal separations for ab, bpa and bap",
                ));
            }
            evaluate_measurable_symmetric_from_counts(
                &runs[&SettingPair::Ab],
                &runs[&SettingPair::ApBp],
            )?
        }
        _ => evaluate_measurable_from_counts(&runs)?,
    };
    let bootstrap = if args.bootstrap {
        if args.ineq != Ineq::MeasurableSymmetric {
            return Err(Failure::invalid(
                "--bootstrap is available for measurable-symmetric only",
            ));
        }
        Some(bootstrap_std_error(
            &runs[&SettingPair::Ab],
            &runs[&SettingPair::ApBp],
            montecarlo::BOOTSTRAP_RESAMPLES,
            args.seed,
        )?)
    } else {
        None
    };

    let mut inputs = Inputs::new(&args.source, &plan.source, &quad);
    inputs.pairs_per_setting = Some(args.pairs);
    inputs.seed = Some(args.seed);
    let mut out = ReportOut::new(estimated.report, Some(&estimated), inputs);
    out.bootstrap_std_error = bootstrap;
    Ok(output::render_report(&out, args.format))
}

fn scan(args: ScanArgs) -> Result<String, Failure> {
    if !(args.step > 0.0 && args.step <= 45.0) {
        return Err(Failure::invalid(format!(
            "--step must lie in (0, 45] degrees, got {}",
            args.step
        )));
    }
    let ineq = InequalityId::from(args.ineq);
    let source = build_source(&args.source)?;
    let options = ScanOptions {
        step_deg: args.step,
        refine_rounds: args.rounds,
        parameterization: if args.free {
            Parameterization::Free
        } else {
            Parameterization::PrimesAligned
        },
        keep_surface: args.surface.is_some(),
    };
    let result = optimizer::grid_scan(ineq, &source, &options)?;
    if let (Some(path), Some(surface)) = (&args.surface, &result.surface) {
        write_file(path, &output::surface_csv(surface), "--surface")?;
    }
    let out = output::ScanOut::new(
        &result,
        options,
        Inputs::new(&args.source, &source, &result.best_quad),
    );
    Ok(output::render_scan(&out, args.format))
}

fn build_source(args: &SourceArgs) -> Result<Source, Failure> {
    match args.source {
        SourceKind::QmIdeal => Ok(Source::QmIdeal),
        SourceKind::QmReal => {
            let geometry = CascadeGeometry::new(args.eta, args.phi)
                .map_err(|e| Failure::invalid(format!("--eta/--phi: {e}")))?;
            let geometry = match args.force_f {
                Some(f) => geometry
                    .with_depolarization(f)
                    .map_err(|e| Failure::invalid(format!("--force-F: {e}")))?,
                None => geometry,
            };
            Ok(Source::QmReal(geometry))
        }
        SourceKind::Lhv => {
            let path = args
                .model
                .as_ref()
                .ok_or_else(|| Failure::invalid("--model is required with --source lhv"))?;
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::invalid(format!("--model {}: {e}", path.display())))?;
            let model = FourAxisModel::from_text(&text)
                .map_err(|e| Failure::invalid(format!("--model {}: {e}", path.display())))?;
            Ok(Source::Lhv(Box::new(model)))
        }
    }
}

fn default_quad(ineq: Ineq) -> SettingsQuad {
    match ineq {
        Ineq::Chsh => SettingsQuad::new(0.0, 22.5, 45.0, 67.5),
        _ => SettingsQuad::from_differences(120.0, 120.0, 0.0),
    }
}

fn build_quad(args: &SettingsArgs, ineq: Ineq) -> Result<SettingsQuad, Failure> {
    if let Some(angles) = &args.angles {
        if angles.len() != 4 || angles.iter().any(|x| !x.is_finite()) {
            return Err(Failure::invalid(
                "--angles takes four finite values a,b,a',b'",
            ));
        }
        return Ok(SettingsQuad::new(
            angles[0], angles[1], angles[2], angles[3],
        ));
    }
    let Some(diffs) = &args.diffs else {
        return Ok(default_quad(ineq));
    };
    if !(3..=4).contains(&diffs.len()) || diffs.iter().any(|x| !x.is_finite() || *x < 0.0) {
        return Err(Failure::invalid(
            "--diffs takes three or four finite nonnegative values",
        ));
    }
    let d4 = diffs.get(3).copied().unwrap_or(0.0);
    let quad = SettingsQuad::from_differences(diffs[0], diffs[2], d4);
    let implied = quad.separations()[SettingPair::BpA.index()];
    if (implied - fold(diffs[1])).abs() > DIFF_TOLERANCE_DEG {
        return Err(Failure::invalid(format!(
            "--diffs: |b'-a| = {} is not realizable with the other differences (implied {})",
            diffs[1], implied
        )));
    }
    Ok(quad)
}

/// Separation of two polarizer lines, in [0, 90].
fn fold(d: f64) -> f64 {
    let r = d.rem_euclid(180.0);
    r.min(180.0 - r)
}

fn write_file(path: &Path, contents: &str, flag: &str) -> Result<(), Failure> {
    std::fs::write(path, contents)
        .map_err(|e| Failure::invalid(format!("{flag} {}: {e}", path.display())))
}
