//! Quantum predictions for photon pairs from a J=1 → J=0 atomic cascade,
//! with ideal apparatus and with finite detector efficiency and aperture.
//!
//! Detectors are back to back (angle π between their axes), the only
//! geometry for which the angular correlation and depolarization factors
//! are available in closed form.

use crate::angle::{cos_double, AngleDeg};
use crate::error::{check_range, Error, Result};
use crate::outcome::Outcome;
use crate::probability::PairProbabilities;
use crate::rates::{coincidence_total, DetectionRates};
use serde::Serialize;
use std::f64::consts::PI;

/// Angle between the two detector axes, fixed at π.
pub const DETECTOR_AXIS_ANGLE: f64 = PI;

/// Detector efficiency and acceptance for a cascade source.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CascadeGeometry {
    eta: f64,
    phi_deg: f64,
    f_override: Option<f64>,
}

impl CascadeGeometry {
    /// `eta` in (0, 1]; `phi_deg` (detector half-aperture) in (0°, 90°].
    pub fn new(eta: f64, phi_deg: f64) -> Result<Self> {
        check_range("eta", eta, 0.0, 1.0)?;
        check_range("phi", phi_deg, 0.0, 90.0)?;
        Ok(CascadeGeometry {
            eta,
            phi_deg,
            f_override: None,
        })
    }

    /// Replaces the aperture-derived depolarization factor.
    pub fn with_depolarization(mut self, f: f64) -> Result<Self> {
        if !(f.is_finite() && (0.0..=1.0).contains(&f)) {
            return Err(Error::InvalidParameter {
                name: "F",
                value: f,
                reason: "must lie in [0, 1]",
            });
        }
        self.f_override = Some(f);
        Ok(self)
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn phi_deg(&self) -> f64 {
        self.phi_deg
    }

    pub fn f_override(&self) -> Option<f64> {
        self.f_override
    }

    pub fn solid_angle(&self) -> f64 {
        solid_angle_unchecked(self.phi_deg)
    }

    pub fn angular_correlation(&self) -> f64 {
        angular_correlation_unchecked(self.phi_deg)
    }

    /// The override if set, else the aperture formula.
    pub fn depolarization(&self) -> f64 {
        self.f_override
            .unwrap_or_else(|| depolarization_unchecked(self.phi_deg))
    }

    /// Single-photon detection probability per output channel, `ηΩ/8π`.
    pub fn single_channel_rate(&self) -> f64 {
        self.eta * self.solid_angle() / (8.0 * PI)
    }
}

fn solid_angle_unchecked(phi_deg: f64) -> f64 {
    2.0 * PI * (1.0 - phi_deg.to_radians().cos())
}

fn angular_correlation_unchecked(phi_deg: f64) -> f64 {
    let c = phi_deg.to_radians().cos();
    1.0 + c * c * (1.0 + c) * (1.0 + c) / 8.0
}

fn depolarization_unchecked(phi_deg: f64) -> f64 {
    let d = 1.0 - phi_deg.to_radians().cos();
    1.0 - 2.0 / 3.0 * d * d
}

/// Solid angle `Ω = 2π(1 - cos φ)` of a cone with half-aperture φ ∈ (0°, 180°].
pub fn solid_angle(phi_deg: f64) -> Result<f64> {
    check_range("phi", phi_deg, 0.0, 180.0)?;
    Ok(solid_angle_unchecked(phi_deg))
}

/// Angular correlation `g(π, φ) = 1 + cos²φ (1 + cos φ)² / 8`, φ ∈ (0°, 90°].
pub fn angular_correlation(phi_deg: f64) -> Result<f64> {
    check_range("phi", phi_deg, 0.0, 90.0)?;
    Ok(angular_correlation_unchecked(phi_deg))
}

/// Depolarization factor `F(π, φ) = 1 - (2/3)(1 - cos φ)²`, φ ∈ (0°, 90°].
pub fn depolarization(phi_deg: f64) -> Result<f64> {
    check_range("phi", phi_deg, 0.0, 90.0)?;
    Ok(depolarization_unchecked(phi_deg))
}

/// Ideal polarizers and detectors: `p++ = p-- = cos²θ/2`,
/// `p+- = p-+ = sin²θ/2`, nothing absorbed.
pub fn ideal_pair_probabilities(theta_diff_deg: f64) -> PairProbabilities {
    // cos²θ = (1 + cos 2θ)/2 keeps the result consistent with cos_double
    let c2 = cos_double(theta_diff_deg);
    let like = (1.0 + c2) / 4.0;
    let unlike = (1.0 - c2) / 4.0;
    PairProbabilities::from_detected(like, unlike, unlike, like)
        .expect("ideal cascade probabilities are valid")
}

/// Single and double detection rates per emitted pair for polarizers at
/// `a` and `b`.
pub fn detection_rates(a: AngleDeg, b: AngleDeg, geom: &CascadeGeometry) -> DetectionRates {
    let single = geom.single_channel_rate();
    let base = single * single * geom.angular_correlation();
    let fringe = geom.depolarization() * a.cos_double_difference(b);
    let like = base * (1.0 + fringe);
    let unlike = base * (1.0 - fringe);
    DetectionRates::new([[like, unlike], [unlike, like]], [single; 2], [single; 2])
        .expect("cascade rates satisfy the coincidence bounds for valid geometry")
}

/// Predicted coincidence total `T0 = η²(Ω/4π)² g(π, φ)`.
pub fn qm_coincidence_total(geom: &CascadeGeometry) -> f64 {
    let t0 = qm_singles_total(geom);
    t0 * t0 * geom.angular_correlation()
}

/// Predicted singles total per side `t0 = ηΩ/4π`.
pub fn qm_singles_total(geom: &CascadeGeometry) -> f64 {
    geom.eta * geom.solid_angle() / (4.0 * PI)
}

/// Full nine-cell distribution of what happens to one emitted pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EventDistribution(PairProbabilities);

impl EventDistribution {
    pub fn new(p: PairProbabilities) -> Self {
        EventDistribution(p)
    }

    /// Completes per-emission detection rates to a sample space: detected
    /// cells are the double rates, `(i, 0)` and `(0, j)` cells carry the
    /// singles not accounted for by coincidences, and `(0, 0)` takes the
    /// remaining mass.
    pub fn from_rates(rates: &DetectionRates) -> Result<Self> {
        let mut cells = [[0.0; 3]; 3];
        for i in Outcome::DETECTED {
            for j in Outcome::DETECTED {
                cells[i.index()][j.index()] = rates.double(i, j);
            }
        }
        let z = Outcome::Zero.index();
        for k in Outcome::DETECTED {
            let row: f64 = Outcome::DETECTED.iter().map(|&j| rates.double(k, j)).sum();
            let col: f64 = Outcome::DETECTED.iter().map(|&i| rates.double(i, k)).sum();
            cells[k.index()][z] = rates.single_first(k) - row;
            cells[z][k.index()] = rates.single_second(k) - col;
        }
        let assigned: f64 = cells.iter().flatten().sum();
        cells[z][z] = 1.0 - assigned;
        for (i, row) in cells.iter().enumerate() {
            for (j, &p) in row.iter().enumerate() {
                if p < 0.0 {
                    return Err(Error::Infeasible(format!(
                        "completion cell ({}, {}) = {p} is negative",
                        Outcome::ALL[i],
                        Outcome::ALL[j]
                    )));
                }
            }
        }
        PairProbabilities::new(cells)
            .map(EventDistribution)
            .map_err(|e| Error::Infeasible(e.to_string()))
    }

    pub fn probabilities(&self) -> &PairProbabilities {
        &self.0
    }
}

/// Per-emission outcome distribution of the cascade at settings `a`, `b`.
pub fn event_distribution(
    a: AngleDeg,
    b: AngleDeg,
    geom: &CascadeGeometry,
) -> Result<EventDistribution> {
    EventDistribution::from_rates(&detection_rates(a, b, geom))
}

/// `T0` summed from [`detection_rates`]; equals [`qm_coincidence_total`].
pub fn coincidence_total_from_rates(a: AngleDeg, b: AngleDeg, geom: &CascadeGeometry) -> f64 {
    coincidence_total(&detection_rates(a, b, geom))
}
