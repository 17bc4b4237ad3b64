//! Joint and single-side outcome distributions for one pair of settings.

use crate::error::{Error, Result};
use crate::outcome::Outcome;
use serde::Serialize;

/// Absolute tolerance on the total mass of a distribution.
pub const SUM_TOLERANCE: f64 = 1e-9;

/// Joint outcome distribution `p^{ij}(m, n)` over the nine cells
/// `(i, j) ∈ {+, 0, -}²`. Indexed by [`Outcome::index`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairProbabilities {
    cells: [[f64; 3]; 3],
}

impl PairProbabilities {
    pub fn new(cells: [[f64; 3]; 3]) -> Result<Self> {
        let mut sum = 0.0;
        for (i, row) in cells.iter().enumerate() {
            for (j, &p) in row.iter().enumerate() {
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::InvalidDistribution(format!(
                        "cell ({}, {}) = {p} outside [0, 1]",
                        Outcome::ALL[i],
                        Outcome::ALL[j]
                    )));
                }
                sum += p;
            }
        }
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "cells sum to {sum}, expected 1"
            )));
        }
        Ok(PairProbabilities { cells })
    }

    /// Builds a distribution from the four detected cells, leaving every
    /// zero-outcome cell at 0.
    pub fn from_detected(pp: f64, pm: f64, mp: f64, mm: f64) -> Result<Self> {
        let mut cells = [[0.0; 3]; 3];
        cells[0][0] = pp;
        cells[0][2] = pm;
        cells[2][0] = mp;
        cells[2][2] = mm;
        Self::new(cells)
    }

    pub fn get(&self, first: Outcome, second: Outcome) -> f64 {
        self.cells[first.index()][second.index()]
    }

    pub fn cells(&self) -> &[[f64; 3]; 3] {
        &self.cells
    }

    /// Total mass of the four cells where both photons emerged.
    pub fn detected_mass(&self) -> f64 {
        Outcome::DETECTED
            .iter()
            .flat_map(|&i| Outcome::DETECTED.iter().map(move |&j| (i, j)))
            .map(|(i, j)| self.get(i, j))
            .sum()
    }

    /// Correlation `e = p++ - p+- - p-+ + p--`.
    pub fn expectation(&self) -> f64 {
        expectation(self)
    }

    pub fn marginals(&self) -> (SinglesProbabilities, SinglesProbabilities) {
        marginals(self)
    }
}

/// Single-side outcome distribution `(p+, p0, p-)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SinglesProbabilities {
    pub p_plus: f64,
    pub p_zero: f64,
    pub p_minus: f64,
}

impl SinglesProbabilities {
    pub fn new(p_plus: f64, p_zero: f64, p_minus: f64) -> Result<Self> {
        for p in [p_plus, p_zero, p_minus] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidDistribution(format!(
                    "single probability {p} outside [0, 1]"
                )));
            }
        }
        let sum = p_plus + p_zero + p_minus;
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "singles sum to {sum}, expected 1"
            )));
        }
        Ok(SinglesProbabilities {
            p_plus,
            p_zero,
            p_minus,
        })
    }

    pub fn get(&self, o: Outcome) -> f64 {
        match o {
            Outcome::Plus => self.p_plus,
            Outcome::Zero => self.p_zero,
            Outcome::Minus => self.p_minus,
        }
    }

    /// `p+ + p-`, the probability that the photon emerged at all.
    pub fn emerged(&self) -> f64 {
        self.p_plus + self.p_minus
    }
}

pub fn expectation(pair: &PairProbabilities) -> f64 {
    pair.get(Outcome::Plus, Outcome::Plus)
        - pair.get(Outcome::Plus, Outcome::Minus)
        - pair.get(Outcome::Minus, Outcome::Plus)
        + pair.get(Outcome::Minus, Outcome::Minus)
}

/// Row and column sums: the first and second photon's single distributions.
pub fn marginals(pair: &PairProbabilities) -> (SinglesProbabilities, SinglesProbabilities) {
    let mut first = [0.0; 3];
    let mut second = [0.0; 3];
    for (i, row) in pair.cells.iter().enumerate() {
        for (j, &p) in row.iter().enumerate() {
            first[i] += p;
            second[j] += p;
        }
    }
    // sums of cells already validated to lie in [0, 1] up to rounding
    let side = |s: [f64; 3]| SinglesProbabilities {
        p_plus: s[0].min(1.0),
        p_zero: s[1].min(1.0),
        p_minus: s[2].min(1.0),
    };
    (side(first), side(second))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cells_with(entries: &[((Outcome, Outcome), f64)]) -> [[f64; 3]; 3] {
        let mut c = [[0.0; 3]; 3];
        for &((i, j), p) in entries {
            c[i.index()][j.index()] = p;
        }
        c
    }

    #[test]
    fn perfect_correlation() {
        let p = PairProbabilities::from_detected(0.5, 0.0, 0.0, 0.5).unwrap();
        assert_eq!(expectation(&p), 1.0);
    }

    #[test]
    fn ideal_pair_at_120_degrees() {
        let p = PairProbabilities::from_detected(0.125, 0.375, 0.375, 0.125).unwrap();
        assert!((expectation(&p) + 0.5).abs() < 1e-15);
        let (s1, s2) = marginals(&p);
        assert_eq!((s1.p_plus, s1.p_zero, s1.p_minus), (0.5, 0.0, 0.5));
        assert_eq!((s2.p_plus, s2.p_zero, s2.p_minus), (0.5, 0.0, 0.5));
    }

    #[test]
    fn uniform_has_zero_correlation() {
        let p = PairProbabilities::new([[1.0 / 9.0; 3]; 3]).unwrap();
        assert!(expectation(&p).abs() < 1e-15);
    }

    #[test]
    fn all_absorbed_marginals() {
        let p =
            PairProbabilities::new(cells_with(&[((Outcome::Zero, Outcome::Zero), 1.0)])).unwrap();
        let (s1, s2) = marginals(&p);
        assert_eq!((s1.p_plus, s1.p_zero, s1.p_minus), (0.0, 1.0, 0.0));
        assert_eq!((s2.p_plus, s2.p_zero, s2.p_minus), (0.0, 1.0, 0.0));
    }

    #[test]
    fn one_sided_absorption_marginals() {
        let p = PairProbabilities::new(cells_with(&[
            ((Outcome::Plus, Outcome::Zero), 0.3),
            ((Outcome::Zero, Outcome::Zero), 0.7),
        ]))
        .unwrap();
        let (s1, s2) = marginals(&p);
        assert_eq!((s1.p_plus, s1.p_zero, s1.p_minus), (0.3, 0.7, 0.0));
        assert_eq!((s2.p_plus, s2.p_zero, s2.p_minus), (0.0, 1.0, 0.0));
    }

    #[test]
    fn rejects_invalid() {
        assert!(PairProbabilities::new([[0.2; 3]; 3]).is_err());
        let mut c = [[0.0; 3]; 3];
        c[0][0] = 1.1;
        c[1][1] = -0.1;
        assert!(PairProbabilities::new(c).is_err());
        assert!(PairProbabilities::new([[f64::NAN; 3]; 3]).is_err());
        assert!(SinglesProbabilities::new(0.5, 0.5, 0.5).is_err());
    }

    fn arb_pair() -> impl Strategy<Value = PairProbabilities> {
        prop::array::uniform9(0.0f64..1.0).prop_filter_map("zero mass", |w| {
            let s: f64 = w.iter().sum();
            if s < 1e-6 {
                return None;
            }
            let mut c = [[0.0; 3]; 3];
            for (k, x) in w.iter().enumerate() {
                c[k / 3][k % 3] = x / s;
            }
            PairProbabilities::new(c).ok()
        })
    }

    proptest! {
        #[test]
        fn expectation_bounded_by_detected_mass(p in arb_pair()) {
            prop_assert!(expectation(&p).abs() <= p.detected_mass() + 1e-15);
        }

        #[test]
        fn marginals_are_valid(p in arb_pair()) {
            let (s1, s2) = marginals(&p);
            prop_assert!(SinglesProbabilities::new(s1.p_plus, s1.p_zero, s1.p_minus).is_ok());
            prop_assert!(SinglesProbabilities::new(s2.p_plus, s2.p_zero, s2.p_minus).is_ok());
        }
    }
}
