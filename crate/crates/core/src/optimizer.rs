//! Grid search with local refinement over polarizer settings.
//!
//! By default the scan searches `a`, `b` and `a'` with `b' = a'`, the
//! family that contains the 120°/0° configuration. Allowing `b'` to move
//! independently ([`Parameterization::Free`]) opens up CHSH-like settings:
//! with ideal quantum inputs the ternary left-hand side then reaches
//! `1 - 2√2` rather than `-1.5`.

use crate::error::{Error, Result};
use crate::inequalities::{InequalityId, InequalityReport, SettingsQuad};
use crate::predict::{predict, Source};
use rayon::prelude::*;
use serde::Serialize;
use std::cmp::Ordering;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum Parameterization {
    /// Search `(a, b, a')` with `b' = a'`.
    #[default]
    PrimesAligned,
    /// Search all four axes.
    Free,
}

impl Parameterization {
    fn dims(self) -> usize {
        match self {
            Parameterization::PrimesAligned => 3,
            Parameterization::Free => 4,
        }
    }

    fn quad(self, x: &[f64]) -> SettingsQuad {
        match self {
            Parameterization::PrimesAligned => SettingsQuad::new(x[0], x[1], x[2], x[2]),
            Parameterization::Free => SettingsQuad::new(x[0], x[1], x[2], x[3]),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions {
    /// Coarse grid spacing in degrees, in (0, 45].
    pub step_deg: f64,
    /// Number of refinement rounds; each halves the step.
    pub refine_rounds: u32,
    pub parameterization: Parameterization,
    /// Keep every coarse-grid sample in the result.
    pub keep_surface: bool,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            step_deg: 1.0,
            refine_rounds: 6,
            parameterization: Parameterization::PrimesAligned,
            keep_surface: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SurfacePoint {
    pub quad: SettingsQuad,
    pub lhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanResult {
    pub best_quad: SettingsQuad,
    pub best_lhs: f64,
    pub best_factor: f64,
    pub best_report: InequalityReport,
    pub evaluations: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub surface: Option<Vec<SurfacePoint>>,
}

/// Left-hand side of `ineq` predicted by `source` at `quad`.
pub fn objective(quad: &SettingsQuad, ineq: InequalityId, source: &Source) -> Result<f64> {
    predict(ineq, quad, source).map(|r| r.lhs)
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    margin: f64,
    quad: SettingsQuad,
    report: InequalityReport,
}

/// Smaller margin first, then lexicographically smaller axes.
fn order(x: &Candidate, y: &Candidate) -> Ordering {
    x.margin.total_cmp(&y.margin).then_with(|| {
        x.quad
            .axes()
            .iter()
            .zip(y.quad.axes().iter())
            .map(|(p, q)| p.total_cmp(q))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    })
}

fn better(x: Candidate, y: Candidate) -> Candidate {
    if order(&y, &x).is_lt() {
        y
    } else {
        x
    }
}

fn evaluate(quad: SettingsQuad, ineq: InequalityId, source: &Source) -> Result<Candidate> {
    let report = predict(ineq, &quad, source)?;
    Ok(Candidate {
        margin: report.margin,
        quad,
        report,
    })
}

fn check_scan(ineq: InequalityId, options: &ScanOptions) -> Result<()> {
    if !(options.step_deg.is_finite() && options.step_deg > 0.0 && options.step_deg <= 45.0) {
        return Err(Error::InvalidParameter {
            name: "step",
            value: options.step_deg,
            reason: "must lie in (0, 45] degrees",
        });
    }
    if matches!(
        ineq,
        InequalityId::TernarySymmetric | InequalityId::MeasurableSymmetric
    ) {
        return Err(Error::Unsupported(format!(
            "{ineq} is fixed to one configuration and cannot be scanned"
        )));
    }
    Ok(())
}

/// Minimizes the margin of `ineq` (the left-hand side, for lower-bound
/// inequalities) over a grid of axes, then refines around the incumbent.
///
/// Each refinement round halves the step and moves to the best point of the
/// surrounding `3^d` neighbourhood until no neighbour improves. Ties are
/// broken towards the lexicographically smallest `(a, b, a', b')`, so the
/// result does not depend on evaluation order.
pub fn grid_scan(ineq: InequalityId, source: &Source, options: &ScanOptions) -> Result<ScanResult> {
    check_scan(ineq, options)?;
    let param = options.parameterization;
    let dims = param.dims();
    let per_axis = (180.0 / options.step_deg).ceil() as usize;
    let total = per_axis.pow(dims as u32);

    let point = |mut k: usize| -> SettingsQuad {
        let mut x = [0.0; 4];
        for slot in x[..dims].iter_mut().rev() {
            *slot = (k % per_axis) as f64 * options.step_deg;
            k /= per_axis;
        }
        param.quad(&x[..dims])
    };

    let coarse: Vec<Candidate> = (0..total)
        .into_par_iter()
        .map(|k| evaluate(point(k), ineq, source))
        .collect::<Result<_>>()?;
    let mut best = coarse
        .par_iter()
        .copied()
        .reduce_with(better)
        .expect("grid has at least one point");
    let surface = options.keep_surface.then(|| {
        coarse
            .iter()
            .map(|c| SurfacePoint {
                quad: c.quad,
                lhs: c.report.lhs,
            })
            .collect()
    });
    drop(coarse);
    let mut evaluations = total as u64;

    let offsets: Vec<Vec<f64>> = (0..3usize.pow(dims as u32))
        .map(|mut k| {
            (0..dims)
                .map(|_| {
                    let o = (k % 3) as f64 - 1.0;
                    k /= 3;
                    o
                })
                .collect()
        })
        .collect();

    let mut h = options.step_deg;
    for _ in 0..options.refine_rounds {
        h /= 2.0;
        // every move is a strict decrease in a total order on a finite grid
        for _ in 0..10_000 {
            let centre: Vec<f64> = match param {
                Parameterization::PrimesAligned => best.quad.axes()[..3].to_vec(),
                Parameterization::Free => best.quad.axes().to_vec(),
            };
            let next = offsets
                .par_iter()
                .map(|off| {
                    let x: Vec<f64> = centre.iter().zip(off).map(|(c, o)| c + o * h).collect();
                    evaluate(param.quad(&x), ineq, source)
                })
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .fold(best, better);
            evaluations += offsets.len() as u64;
            if order(&next, &best).is_eq() {
                break;
            }
            best = next;
        }
    }

    Ok(ScanResult {
        best_quad: best.quad,
        best_lhs: best.report.lhs,
        best_factor: best.report.violation_factor,
        best_report: best.report,
        evaluations,
        surface,
    })
}

/// Whether `quad` realizes the given axis differences for `(a,b)`,
/// `(a,b')`, `(a',b)`, `(a',b')`, comparing line separations (a difference
/// `d` and `180 - d` describe the same pair of axes) within `tol_deg`.
pub fn matches_differences(quad: &SettingsQuad, differences: [f64; 4], tol_deg: f64) -> bool {
    let fold = |d: f64| {
        let n = crate::angle::normalize(d);
        n.min(180.0 - n)
    };
    quad.separations()
        .iter()
        .zip(differences)
        .all(|(s, d)| (s - fold(d)).abs() <= tol_deg)
}
