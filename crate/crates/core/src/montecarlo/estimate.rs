//! Frequency estimators for detection rates and inequality left-hand sides,
//! with first-order (delta-method) standard errors that treat the nine
//! outcome counts of each run as one multinomial draw.

use super::counters::CoincidenceCounters;
use super::{chunk_rng, sample_multinomial, RunCounters};
use crate::error::{Error, Result};
use crate::inequalities::{
    measurable, measurable_symmetric, InequalityReport, SettingPair, SymmetricRates,
};
use crate::outcome::Outcome;
use crate::rates::DetectionRates;
use serde::Serialize;

/// Resample count for the parametric bootstrap cross-check.
pub const BOOTSTRAP_RESAMPLES: usize = 1000;

/// Stream offset reserved for bootstrap resampling.
const BOOTSTRAP_STREAM: u64 = 0x100;

/// Binomial standard errors matching the layout of [`DetectionRates`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateErrors {
    pub doubles: [[f64; 2]; 2],
    pub first: [f64; 2],
    pub second: [f64; 2],
}

/// `D̂ = count / N` for every detected cell and single, with binomial
/// standard errors `sqrt(p̂(1 - p̂)/N)`.
pub fn estimate_rates(counters: &CoincidenceCounters) -> Result<(DetectionRates, RateErrors)> {
    let n = counters.n_emitted();
    if n == 0 {
        return Err(Error::InsufficientStatistics("no emitted pairs".into()));
    }
    let nf = n as f64;
    let freq = |c: u64| c as f64 / nf;
    let se = |p: f64| (p * (1.0 - p) / nf).sqrt();
    let det = Outcome::DETECTED;
    let doubles = det.map(|i| det.map(|j| freq(counters.get(i, j))));
    let first = det.map(|o| freq(counters.first_singles(o)));
    let second = det.map(|o| freq(counters.second_singles(o)));
    let rates = DetectionRates::new(doubles, first, second)?;
    let errors = RateErrors {
        doubles: doubles.map(|row| row.map(se)),
        first: first.map(se),
        second: second.map(se),
    };
    Ok((rates, errors))
}

/// Delta-method variance of `f(p̂)` for multinomial frequencies `p̂` from
/// `n` trials, given the gradient of `f` at `p`:
/// `(Σ g_k² p_k - (Σ g_k p_k)²) / n`.
pub fn multinomial_delta_variance(gradient: &[[f64; 3]; 3], probs: &[[f64; 3]; 3], n: u64) -> f64 {
    let mut second_moment = 0.0;
    let mut mean = 0.0;
    for (grow, prow) in gradient.iter().zip(probs) {
        for (&g, &p) in grow.iter().zip(prow) {
            second_moment += g * g * p;
            mean += g * p;
        }
    }
    ((second_moment - mean * mean) / n as f64).max(0.0)
}

fn frequencies(c: &CoincidenceCounters) -> [[f64; 3]; 3] {
    let n = c.n_emitted() as f64;
    c.cells().map(|row| row.map(|x| x as f64 / n))
}

const P: usize = 0;
const M: usize = 2;

/// Like (`++`, `--`) and unlike (`+-`, `-+`) coincidence frequencies.
fn like_unlike(p: &[[f64; 3]; 3]) -> (f64, f64) {
    (p[P][P] + p[M][M], p[P][M] + p[M][P])
}

/// Value and gradient of `E/T0 = (L - U)/(L + U)`.
fn correlation_ratio(p: &[[f64; 3]; 3]) -> (f64, [[f64; 3]; 3]) {
    let (l, u) = like_unlike(p);
    let t = l + u;
    let mut g = [[0.0; 3]; 3];
    let d_like = 2.0 * u / (t * t);
    let d_unlike = -2.0 * l / (t * t);
    g[P][P] = d_like;
    g[M][M] = d_like;
    g[P][M] = d_unlike;
    g[M][P] = d_unlike;
    ((l - u) / t, g)
}

/// Value and gradient of `(D++ + D--)/T0 = L/(L + U)`.
fn like_fraction(p: &[[f64; 3]; 3]) -> (f64, [[f64; 3]; 3]) {
    let (l, u) = like_unlike(p);
    let t = l + u;
    let mut g = [[0.0; 3]; 3];
    let d_like = u / (t * t);
    let d_unlike = -l / (t * t);
    g[P][P] = d_like;
    g[M][M] = d_like;
    g[P][M] = d_unlike;
    g[M][P] = d_unlike;
    (l / t, g)
}

fn scale(g: [[f64; 3]; 3], k: f64) -> [[f64; 3]; 3] {
    g.map(|row| row.map(|x| x * k))
}

fn require_coincidences(c: &CoincidenceCounters, what: &str) -> Result<()> {
    if c.coincidences() == 0 {
        return Err(Error::InsufficientStatistics(format!(
            "no coincidences recorded at {what}"
        )));
    }
    Ok(())
}

fn require_singles(c: &CoincidenceCounters, what: &str) -> Result<()> {
    if c.first_singles(Outcome::Plus) + c.first_singles(Outcome::Minus) == 0
        || c.second_singles(Outcome::Plus) + c.second_singles(Outcome::Minus) == 0
    {
        return Err(Error::InsufficientStatistics(format!(
            "no single detections recorded at {what}"
        )));
    }
    Ok(())
}

/// An inequality report computed from estimated rates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EstimatedReport {
    pub report: InequalityReport,
    pub std_error: f64,
    /// `margin / std_error`; absent when the standard error is zero.
    pub sigma_distance: Option<f64>,
}

impl EstimatedReport {
    fn new(report: InequalityReport, variance: f64) -> Self {
        let std_error = variance.max(0.0).sqrt();
        EstimatedReport {
            report,
            std_error,
            sigma_distance: (std_error > 0.0).then(|| report.margin / std_error),
        }
    }
}

/// Symmetric measurable inequality from the runs at 120° and at 0°.
pub fn evaluate_measurable_symmetric_from_counts(
    at_120: &CoincidenceCounters,
    at_0: &CoincidenceCounters,
) -> Result<EstimatedReport> {
    require_coincidences(at_120, "120°")?;
    require_coincidences(at_0, "0°")?;
    require_singles(at_0, "0°")?;
    let (rates_120, _) = estimate_rates(at_120)?;
    let (rates_0, _) = estimate_rates(at_0)?;
    let report = measurable_symmetric(&SymmetricRates::from_rates(&rates_120, &rates_0))?;

    // singles enter as D+/t0 + D-/t0 = 1 and carry no variance
    let p120 = frequencies(at_120);
    let p0 = frequencies(at_0);
    let (_, g_corr) = correlation_ratio(&p120);
    let (_, g_like) = like_fraction(&p0);
    let variance = multinomial_delta_variance(&scale(g_corr, 3.0), &p120, at_120.n_emitted())
        + multinomial_delta_variance(&scale(g_like, -4.0), &p0, at_0.n_emitted());
    Ok(EstimatedReport::new(report, variance))
}

/// General measurable inequality from the four runs of a plan; singles of
/// `a'` and `b'` are read from the `(a', b')` run.
pub fn evaluate_measurable_from_counts(runs: &RunCounters) -> Result<EstimatedReport> {
    let get = |p: SettingPair| {
        runs.get(&p).ok_or_else(|| {
            Error::InsufficientStatistics(format!("missing run for setting pair {p}"))
        })
    };
    let mut rates = Vec::with_capacity(4);
    for p in SettingPair::ALL {
        let c = get(p)?;
        require_coincidences(c, p.label())?;
        rates.push(estimate_rates(c)?.0);
    }
    let apbp = get(SettingPair::ApBp)?;
    require_singles(apbp, SettingPair::ApBp.label())?;
    let rates: [DetectionRates; 4] = rates.try_into().expect("four setting pairs");
    let r = &rates[SettingPair::ApBp.index()];
    let report = measurable(
        &rates,
        (
            r.single_first(Outcome::Plus),
            r.single_first(Outcome::Minus),
        ),
        (
            r.single_second(Outcome::Plus),
            r.single_second(Outcome::Minus),
        ),
    )?;

    let mut variance = 0.0;
    for p in [SettingPair::Ab, SettingPair::BpA, SettingPair::BAp] {
        let c = get(p)?;
        let freq = frequencies(c);
        let (_, g) = correlation_ratio(&freq);
        variance += multinomial_delta_variance(&g, &freq, c.n_emitted());
    }
    let freq = frequencies(apbp);
    let (_, g) = like_fraction(&freq);
    variance += multinomial_delta_variance(&scale(g, -2.0), &freq, apbp.n_emitted());
    Ok(EstimatedReport::new(report, variance))
}

/// Parametric-bootstrap standard error of the symmetric measurable
/// inequality: each run is redrawn from its own observed frequencies with
/// the same number of emissions. Resamples without coincidences are skipped.
pub fn bootstrap_std_error(
    at_120: &CoincidenceCounters,
    at_0: &CoincidenceCounters,
    resamples: usize,
    seed: u64,
) -> Result<f64> {
    evaluate_measurable_symmetric_from_counts(at_120, at_0)?;
    let redraw = |c: &CoincidenceCounters, stream: u64, k: usize| {
        let probs: Vec<f64> = frequencies(c).iter().flatten().copied().collect();
        let mut rng = chunk_rng(seed, BOOTSTRAP_STREAM + stream, k as u64);
        let mut counts = [0u64; 9];
        sample_multinomial(&mut rng, c.n_emitted(), &probs, &mut counts);
        let mut cells = [[0u64; 3]; 3];
        for (i, x) in counts.into_iter().enumerate() {
            cells[i / 3][i % 3] = x;
        }
        CoincidenceCounters::new(cells)
    };
    let values: Vec<f64> = (0..resamples)
        .filter_map(|k| {
            let a = redraw(at_120, 0, k);
            let b = redraw(at_0, 1, k);
            evaluate_measurable_symmetric_from_counts(&a, &b)
                .ok()
                .map(|r| r.report.lhs)
        })
        .collect();
    if values.len() < 2 {
        return Err(Error::InsufficientStatistics(
            "too few usable bootstrap resamples".into(),
        ));
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (values.len() - 1) as f64;
    Ok(var.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn counters(entries: &[((Outcome, Outcome), u64)]) -> CoincidenceCounters {
        let mut cells = [[0u64; 3]; 3];
        for &((i, j), c) in entries {
            cells[i.index()][j.index()] = c;
        }
        CoincidenceCounters::new(cells)
    }

    #[test]
    fn binomial_rate_errors() {
        let c = counters(&[
            ((Outcome::Plus, Outcome::Plus), 250),
            ((Outcome::Zero, Outcome::Zero), 750),
        ]);
        let (r, e) = estimate_rates(&c).unwrap();
        assert_eq!(r.pp(), 0.25);
        assert_relative_eq!(e.doubles[0][0], 0.01369, epsilon = 1e-5);
    }

    #[test]
    fn all_absorbed_gives_zero_rates() {
        let c = counters(&[((Outcome::Zero, Outcome::Zero), 1000)]);
        let (r, _) = estimate_rates(&c).unwrap();
        assert_eq!((r.pp(), r.pm(), r.mp(), r.mm()), (0.0, 0.0, 0.0, 0.0));
        assert_eq!(r.single_first(Outcome::Plus), 0.0);
        assert!(estimate_rates(&CoincidenceCounters::default()).is_err());
    }

    #[test]
    fn delta_variance_of_a_single_cell_is_binomial() {
        let mut g = [[0.0; 3]; 3];
        g[0][0] = 1.0;
        let mut p = [[0.0; 3]; 3];
        p[0][0] = 0.3;
        p[1][1] = 0.7;
        assert_relative_eq!(
            multinomial_delta_variance(&g, &p, 100),
            0.3 * 0.7 / 100.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn gradients_match_finite_differences() {
        let p = [[0.02, 0.01, 0.05], [0.015, 0.8, 0.02], [0.04, 0.01, 0.035]];
        for f in [correlation_ratio, like_fraction] {
            let (_, g) = f(&p);
            for i in [0, 2] {
                for j in [0, 2] {
                    let h = 1e-7;
                    let mut up = p;
                    up[i][j] += h;
                    let mut down = p;
                    down[i][j] -= h;
                    let fd = (f(&up).0 - f(&down).0) / (2.0 * h);
                    assert_relative_eq!(g[i][j], fd, max_relative = 1e-6);
                }
            }
        }
    }

    #[test]
    fn missing_coincidences_are_reported() {
        let none = counters(&[
            ((Outcome::Plus, Outcome::Zero), 10),
            ((Outcome::Zero, Outcome::Zero), 90),
        ]);
        let some = counters(&[
            ((Outcome::Plus, Outcome::Plus), 10),
            ((Outcome::Zero, Outcome::Zero), 90),
        ]);
        assert!(matches!(
            evaluate_measurable_symmetric_from_counts(&none, &some),
            Err(Error::InsufficientStatistics(_))
        ));
        assert!(matches!(
            evaluate_measurable_symmetric_from_counts(&some, &none),
            Err(Error::InsufficientStatistics(_))
        ));
    }
}
