//! Measurable transmission-and-detection rates and the normalizations that
//! turn them into conditional probabilities.

use crate::error::{Error, Result};
use crate::outcome::Outcome;
use crate::probability::PairProbabilities;
use serde::Serialize;

/// Single and double transmission-and-detection rates for one setting pair.
///
/// Values are usually per emitted pair, but any common scale (counts,
/// counts per second) is accepted: every quantity built from these rates
/// is a ratio in which the scale cancels. Use [`DetectionRates::is_per_emission`]
/// where a probability interpretation is required.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DetectionRates {
    /// `[[D++, D+-], [D-+, D--]]`
    doubles: [[f64; 2]; 2],
    /// `[D+(m), D-(m)]` for the first photon.
    first: [f64; 2],
    /// `[D+(n), D-(n)]` for the second photon.
    second: [f64; 2],
}

fn detected_index(o: Outcome) -> Option<usize> {
    match o {
        Outcome::Plus => Some(0),
        Outcome::Minus => Some(1),
        Outcome::Zero => None,
    }
}

impl DetectionRates {
    pub fn new(doubles: [[f64; 2]; 2], first: [f64; 2], second: [f64; 2]) -> Result<Self> {
        let all = doubles.iter().flatten().chain(&first).chain(&second);
        for &x in all {
            if !x.is_finite() || x < 0.0 {
                return Err(Error::InvalidDistribution(format!(
                    "detection rate {x} is not a finite nonnegative number"
                )));
            }
        }
        let slack = |x: f64| x * 1e-12;
        for k in 0..2 {
            let row = doubles[k][0] + doubles[k][1];
            let col = doubles[0][k] + doubles[1][k];
            if row > first[k] + slack(first[k]) {
                return Err(Error::InvalidDistribution(format!(
                    "coincidences {row} exceed first-side singles {}",
                    first[k]
                )));
            }
            if col > second[k] + slack(second[k]) {
                return Err(Error::InvalidDistribution(format!(
                    "coincidences {col} exceed second-side singles {}",
                    second[k]
                )));
            }
        }
        Ok(DetectionRates {
            doubles,
            first,
            second,
        })
    }

    /// Double rate for two detected outcomes; zero if either is `Zero`.
    pub fn double(&self, first: Outcome, second: Outcome) -> f64 {
        match (detected_index(first), detected_index(second)) {
            (Some(i), Some(j)) => self.doubles[i][j],
            _ => 0.0,
        }
    }

    pub fn single_first(&self, o: Outcome) -> f64 {
        detected_index(o).map_or(0.0, |i| self.first[i])
    }

    pub fn single_second(&self, o: Outcome) -> f64 {
        detected_index(o).map_or(0.0, |i| self.second[i])
    }

    pub fn pp(&self) -> f64 {
        self.doubles[0][0]
    }
    pub fn pm(&self) -> f64 {
        self.doubles[0][1]
    }
    pub fn mp(&self) -> f64 {
        self.doubles[1][0]
    }
    pub fn mm(&self) -> f64 {
        self.doubles[1][1]
    }

    /// Every rate multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(Error::InvalidParameter {
                name: "scale factor",
                value: factor,
                reason: "must be positive and finite",
            });
        }
        let s2 = |a: [f64; 2]| [a[0] * factor, a[1] * factor];
        DetectionRates::new(
            [s2(self.doubles[0]), s2(self.doubles[1])],
            s2(self.first),
            s2(self.second),
        )
    }

    /// True when the rates can be read as probabilities per emitted pair.
    pub fn is_per_emission(&self) -> bool {
        let side_ok = |s: [f64; 2]| s[0] + s[1] <= 1.0 + 1e-12;
        self.doubles.iter().flatten().sum::<f64>() <= 1.0 + 1e-12
            && side_ok(self.first)
            && side_ok(self.second)
    }
}

/// `T0 = D++ + D+- + D-+ + D--`.
pub fn coincidence_total(rates: &DetectionRates) -> f64 {
    rates.pp() + rates.pm() + rates.mp() + rates.mm()
}

/// `t0 = D+ + D-` for one side.
pub fn singles_total(d_plus: f64, d_minus: f64) -> f64 {
    d_plus + d_minus
}

/// `E = D++ - D+- - D-+ + D--`.
pub fn detection_expectation(rates: &DetectionRates) -> f64 {
    rates.pp() - rates.pm() - rates.mp() + rates.mm()
}

/// Distribution of outcomes conditioned on a double detection:
/// `p^{ij} = D^{ij} / T0` for detected cells, zero elsewhere.
pub fn normalize_coincidences(rates: &DetectionRates) -> Result<PairProbabilities> {
    let t0 = coincidence_total(rates);
    if t0 <= 0.0 {
        return Err(Error::DivisionUndefined("coincidence total T0"));
    }
    PairProbabilities::from_detected(
        rates.pp() / t0,
        rates.pm() / t0,
        rates.mp() / t0,
        rates.mm() / t0,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn symmetric(pp: f64, pm: f64, single: f64) -> DetectionRates {
        DetectionRates::new([[pp, pm], [pm, pp]], [single; 2], [single; 2]).unwrap()
    }

    #[test]
    fn totals() {
        let r = symmetric(0.25, 0.25, 0.5);
        assert_eq!(coincidence_total(&r), 1.0);
        assert_eq!(detection_expectation(&r), 0.0);
        assert_eq!(singles_total(0.5, 0.5), 1.0);
        assert_eq!(singles_total(0.0, 0.0), 0.0);
        let zero = symmetric(0.0, 0.0, 0.0);
        assert_eq!(coincidence_total(&zero), 0.0);
    }

    #[test]
    fn normalization_of_symmetric_doubles() {
        let r = symmetric(2e-4, 0.0, 1e-2);
        let p = normalize_coincidences(&r).unwrap();
        assert_eq!(p.get(Outcome::Plus, Outcome::Plus), 0.5);
        assert_eq!(p.get(Outcome::Minus, Outcome::Minus), 0.5);
        assert_eq!(p.get(Outcome::Plus, Outcome::Zero), 0.0);
    }

    #[test]
    fn normalization_requires_coincidences() {
        let r = symmetric(0.0, 0.0, 0.1);
        assert_eq!(
            normalize_coincidences(&r),
            Err(Error::DivisionUndefined("coincidence total T0"))
        );
    }

    #[test]
    fn rejects_coincidences_above_singles() {
        assert!(DetectionRates::new([[0.3, 0.3], [0.0, 0.0]], [0.5, 0.5], [0.5, 0.5]).is_err());
        assert!(DetectionRates::new([[0.3, 0.0], [0.3, 0.0]], [0.5, 0.5], [0.5, 0.5]).is_err());
        assert!(DetectionRates::new([[-0.1, 0.0], [0.0, 0.0]], [0.5, 0.5], [0.5, 0.5]).is_err());
    }

    #[test]
    fn zero_outcome_has_no_rate() {
        let r = symmetric(0.1, 0.2, 0.4);
        assert_eq!(r.double(Outcome::Zero, Outcome::Plus), 0.0);
        assert_eq!(r.single_first(Outcome::Zero), 0.0);
        assert_eq!(r.double(Outcome::Plus, Outcome::Minus), 0.2);
    }

    proptest! {
        #[test]
        fn normalization_is_scale_invariant(
            pp in 1e-6f64..1e-2, pm in 0.0f64..1e-2, mp in 0.0f64..1e-2, mm in 0.0f64..1e-2,
            c in 1e-3f64..1e3,
        ) {
            let single = 0.05;
            let r = DetectionRates::new([[pp, pm], [mp, mm]], [single; 2], [single; 2]).unwrap();
            let a = normalize_coincidences(&r).unwrap();
            let b = normalize_coincidences(&r.scaled(c).unwrap()).unwrap();
            for o1 in Outcome::ALL {
                for o2 in Outcome::ALL {
                    prop_assert!((a.get(o1, o2) - b.get(o1, o2)).abs() <= 1e-12);
                }
            }
        }
    }
}
