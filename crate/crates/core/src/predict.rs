//! Closed-form left-hand sides of every inequality at arbitrary settings.
//!
//! Each source yields, for a pair of polarizer axes, the full per-emission
//! outcome distribution. The probability forms (ternary, its symmetric
//! reduction, Bell's 1965 inequality) read that distribution directly. The
//! ratio forms (measurable, its symmetric reduction, CHSH) treat the
//! distribution as detection rates and use coincidence-normalized ratios.

use crate::angle::AngleDeg;
use crate::error::{Error, Result};
use crate::inequalities::{
    bell_1965, chsh, measurable_from_rates, measurable_symmetric, ternary, ternary_symmetric,
    InequalityId, InequalityReport, SettingPair, SettingsQuad, SymmetricRates,
};
use crate::lhv::{pair_probabilities, FourAxisModel};
use crate::outcome::Outcome;
use crate::probability::PairProbabilities;
use crate::qm::{self, CascadeGeometry, EventDistribution};
use crate::rates::{coincidence_total, detection_expectation, DetectionRates};
use std::fmt;

/// Where emitted pairs come from.
#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    /// Ideal polarizers and detectors.
    QmIdeal,
    /// Cascade with finite detector efficiency and aperture.
    QmReal(CascadeGeometry),
    /// Local model: each emission draws one deterministic assignment and the
    /// active settings read their outcomes from it.
    Lhv(Box<FourAxisModel>),
}

impl Source {
    /// Per-emission outcome distribution at one setting pair.
    pub fn pair_distribution(
        &self,
        pair: SettingPair,
        quad: &SettingsQuad,
    ) -> Result<EventDistribution> {
        let (x, y) = pair.axes(quad);
        self.distribution_at(pair, x, y)
    }

    fn distribution_at(
        &self,
        pair: SettingPair,
        x: AngleDeg,
        y: AngleDeg,
    ) -> Result<EventDistribution> {
        match self {
            Source::QmIdeal => Ok(EventDistribution::new(qm::ideal_pair_probabilities(
                x.degrees() - y.degrees(),
            ))),
            Source::QmReal(g) => qm::event_distribution(x, y, g),
            Source::Lhv(model) => {
                let (first, second) = pair.settings();
                Ok(EventDistribution::new(pair_probabilities(
                    model, first, second,
                )))
            }
        }
    }

    /// Detection rates at one setting pair. The real-cascade rates come
    /// straight from the detection model; other sources read their
    /// per-emission distribution as rates.
    pub fn pair_rates(&self, pair: SettingPair, quad: &SettingsQuad) -> Result<DetectionRates> {
        match self {
            Source::QmReal(g) => {
                let (x, y) = pair.axes(quad);
                Ok(qm::detection_rates(x, y, g))
            }
            _ => Ok(rates_of(
                self.pair_distribution(pair, quad)?.probabilities(),
            )),
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::QmIdeal => write!(f, "qm-ideal"),
            Source::QmReal(g) => {
                write!(f, "qm-real eta={} phi={}", g.eta(), g.phi_deg())?;
                match g.f_override() {
                    Some(v) => write!(f, " F={v} (forced)"),
                    None => write!(f, " F={}", g.depolarization()),
                }
            }
            Source::Lhv(_) => write!(f, "lhv"),
        }
    }
}

/// Reads a per-emission distribution as detection rates: detected cells are
/// coincidences, row and column sums of detected outcomes are singles.
pub fn rates_of(p: &PairProbabilities) -> DetectionRates {
    let det = Outcome::DETECTED;
    let (s1, s2) = p.marginals();
    DetectionRates::new(
        det.map(|i| det.map(|j| p.get(i, j))),
        det.map(|o| s1.get(o)),
        det.map(|o| s2.get(o)),
    )
    .expect("cells of a distribution never exceed its marginals")
}

/// Maximum spread between the three cross-pair separations for a quad to
/// count as symmetric.
pub const SYMMETRY_TOLERANCE_DEG: f64 = 1e-9;

fn require_symmetric(quad: &SettingsQuad) -> Result<()> {
    let s = quad.separations();
    let cross = &s[..3];
    let spread = cross.iter().cloned().fold(f64::MIN, f64::max)
        - cross.iter().cloned().fold(f64::MAX, f64::min);
    if spread > SYMMETRY_TOLERANCE_DEG {
        return Err(Error::Unsupported(format!(
            "symmetric forms need equal separations for (a,b), (a,b'), (a',b); got {:?}",
            cross
        )));
    }
    Ok(())
}

fn normalized_correlation(r: &DetectionRates) -> Result<f64> {
    let t0 = coincidence_total(r);
    if t0 <= 0.0 {
        return Err(Error::DivisionUndefined("coincidence total T0"));
    }
    Ok(detection_expectation(r) / t0)
}

/// Left-hand side of `ineq` predicted by `source` at `quad`.
///
/// The symmetric forms take their correlation from `(a, b)` and their
/// zero-angle terms from `(a', b')`, and require the three cross pairs to
/// share one separation.
pub fn predict(
    ineq: InequalityId,
    quad: &SettingsQuad,
    source: &Source,
) -> Result<InequalityReport> {
    let dist = |p: SettingPair| -> Result<PairProbabilities> {
        Ok(*source.pair_distribution(p, quad)?.probabilities())
    };
    let rates = |p: SettingPair| source.pair_rates(p, quad);
    match ineq {
        InequalityId::Ternary => {
            let apbp = dist(SettingPair::ApBp)?;
            let (s1, s2) = apbp.marginals();
            ternary(
                dist(SettingPair::Ab)?.expectation(),
                dist(SettingPair::BpA)?.expectation(),
                dist(SettingPair::BAp)?.expectation(),
                &apbp,
                &s1,
                &s2,
            )
        }
        InequalityId::TernarySymmetric => {
            require_symmetric(quad)?;
            let apbp = dist(SettingPair::ApBp)?;
            let (s1, s2) = apbp.marginals();
            ternary_symmetric(
                dist(SettingPair::Ab)?.expectation(),
                apbp.get(Outcome::Plus, Outcome::Plus),
                apbp.get(Outcome::Minus, Outcome::Minus),
                [s1.p_plus, s1.p_minus, s2.p_plus, s2.p_minus],
            )
        }
        InequalityId::Bell65 => bell_1965(
            dist(SettingPair::Ab)?.expectation(),
            dist(SettingPair::BpA)?.expectation(),
            dist(SettingPair::BAp)?.expectation(),
        ),
        InequalityId::Measurable => {
            let all = [
                rates(SettingPair::Ab)?,
                rates(SettingPair::BpA)?,
                rates(SettingPair::BAp)?,
                rates(SettingPair::ApBp)?,
            ];
            measurable_from_rates(&all)
        }
        InequalityId::MeasurableSymmetric => {
            require_symmetric(quad)?;
            measurable_symmetric(&SymmetricRates::from_rates(
                &rates(SettingPair::Ab)?,
                &rates(SettingPair::ApBp)?,
            ))
        }
        InequalityId::Chsh => chsh(
            normalized_correlation(&rates(SettingPair::Ab)?)?,
            normalized_correlation(&rates(SettingPair::BpA)?)?,
            normalized_correlation(&rates(SettingPair::BAp)?)?,
            normalized_correlation(&rates(SettingPair::ApBp)?)?,
        ),
    }
}
