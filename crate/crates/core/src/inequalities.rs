//! Left-hand sides of the ternary-outcome inequality and its reductions,
//! the measurable (detection-rate) forms, Bell's original inequality and
//! the CHSH comparator.

use crate::angle::AngleDeg;
use crate::error::{Error, Result};
use crate::lhv::{pair_probabilities, FirstSetting, FourAxisModel, SecondSetting};
use crate::outcome::Outcome;
use crate::probability::{PairProbabilities, SinglesProbabilities};
use crate::rates::{coincidence_total, detection_expectation, singles_total, DetectionRates};
use serde::{Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

/// Margins below `-VIOLATION_TOLERANCE` count as violations.
pub const VIOLATION_TOLERANCE: f64 = 1e-12;

/// Lower bound shared by every local inequality in this module except CHSH.
pub const LOCAL_BOUND: f64 = -1.0;

pub const CHSH_BOUND: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InequalityId {
    /// General ternary-outcome inequality over four settings.
    Ternary,
    /// Ternary inequality at the symmetric 120°/0° configuration.
    TernarySymmetric,
    /// Bell's 1965 inequality `e(a,b) + e(a,b') + e(a',b) >= -1`.
    Bell65,
    /// Ternary inequality with probabilities replaced by detection-rate ratios.
    Measurable,
    /// Measurable inequality at the symmetric 120°/0° configuration.
    MeasurableSymmetric,
    Chsh,
}

impl InequalityId {
    pub const ALL: [InequalityId; 6] = [
        InequalityId::Ternary,
        InequalityId::TernarySymmetric,
        InequalityId::Bell65,
        InequalityId::Measurable,
        InequalityId::MeasurableSymmetric,
        InequalityId::Chsh,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            InequalityId::Ternary => "ternary",
            InequalityId::TernarySymmetric => "ternary-symmetric",
            InequalityId::Bell65 => "bell65",
            InequalityId::Measurable => "measurable",
            InequalityId::MeasurableSymmetric => "measurable-symmetric",
            InequalityId::Chsh => "chsh",
        }
    }
}

impl fmt::Display for InequalityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for InequalityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        InequalityId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::Unsupported(format!("unknown inequality {s:?}")))
    }
}

impl Serialize for InequalityId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

/// Value of one inequality's left-hand side against its local bound.
///
/// `margin` is signed so that a negative margin always means a violation:
/// `lhs - bound` for lower bounds, `bound - lhs` for the CHSH upper bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InequalityReport {
    pub name: InequalityId,
    pub lhs: f64,
    pub bound: f64,
    pub margin: f64,
    pub violated: bool,
    pub violation_factor: f64,
}

impl InequalityReport {
    /// Report for an inequality of the form `lhs >= bound`.
    pub fn lower(name: InequalityId, lhs: f64, bound: f64) -> Self {
        let margin = lhs - bound;
        let ratio = if bound != 0.0 { lhs / bound } else { 1.0 };
        InequalityReport {
            name,
            lhs,
            bound,
            margin,
            violated: margin < -VIOLATION_TOLERANCE,
            violation_factor: if ratio > 1.0 { ratio } else { 1.0 },
        }
    }

    /// Report for an inequality of the form `lhs <= bound` with `bound > 0`.
    pub fn upper(name: InequalityId, lhs: f64, bound: f64) -> Self {
        let margin = bound - lhs;
        let ratio = lhs / bound;
        InequalityReport {
            name,
            lhs,
            bound,
            margin,
            violated: margin < -VIOLATION_TOLERANCE,
            violation_factor: if ratio > 1.0 { ratio } else { 1.0 },
        }
    }
}

/// Four polarizer settings: `a`, `a'` for the first photon, `b`, `b'` for
/// the second.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SettingsQuad {
    pub a: AngleDeg,
    pub b: AngleDeg,
    pub a_prime: AngleDeg,
    pub b_prime: AngleDeg,
}

impl SettingsQuad {
    pub fn new(a: f64, b: f64, a_prime: f64, b_prime: f64) -> Self {
        SettingsQuad {
            a: AngleDeg::new(a),
            b: AngleDeg::new(b),
            a_prime: AngleDeg::new(a_prime),
            b_prime: AngleDeg::new(b_prime),
        }
    }

    /// Expands axis differences into axes: `a = 0`, `b = d_ab`,
    /// `a' = d_ab + d_bap`, `b' = a' - d_apbp`. The separation between `a`
    /// and `b'` follows from the other three; this is the layout of three
    /// coplanar axes at mutual 120° when the differences are `(120, 120, 0)`.
    pub fn from_differences(d_ab: f64, d_bap: f64, d_apbp: f64) -> Self {
        let a_prime = d_ab + d_bap;
        SettingsQuad::new(0.0, d_ab, a_prime, a_prime - d_apbp)
    }

    pub fn axes(&self) -> [f64; 4] {
        [
            self.a.degrees(),
            self.b.degrees(),
            self.a_prime.degrees(),
            self.b_prime.degrees(),
        ]
    }

    /// Line separations in `[0°, 90°]` for the pairs in [`SettingPair::ALL`]
    /// order. `cos 2θ` depends on a difference only through this value.
    pub fn separations(&self) -> [f64; 4] {
        SettingPair::ALL.map(|p| {
            let (x, y) = p.axes(self);
            x.separation(y)
        })
    }
}

/// The four setting combinations a measurement run must cover.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SettingPair {
    /// First photon at `a`, second at `b`.
    Ab,
    /// First photon at `a`, second at `b'`.
    BpA,
    /// First photon at `a'`, second at `b`.
    BAp,
    /// First photon at `a'`, second at `b'`.
    ApBp,
}

impl SettingPair {
    pub const ALL: [SettingPair; 4] = [
        SettingPair::Ab,
        SettingPair::BpA,
        SettingPair::BAp,
        SettingPair::ApBp,
    ];

    pub fn label(self) -> &'static str {
        match self {
            SettingPair::Ab => "ab",
            SettingPair::BpA => "bpa",
            SettingPair::BAp => "bap",
            SettingPair::ApBp => "apbp",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// Polarizer angles `(first photon, second photon)`.
    pub fn axes(self, quad: &SettingsQuad) -> (AngleDeg, AngleDeg) {
        match self {
            SettingPair::Ab => (quad.a, quad.b),
            SettingPair::BpA => (quad.a, quad.b_prime),
            SettingPair::BAp => (quad.a_prime, quad.b),
            SettingPair::ApBp => (quad.a_prime, quad.b_prime),
        }
    }

    pub fn settings(self) -> (FirstSetting, SecondSetting) {
        match self {
            SettingPair::Ab => (FirstSetting::A, SecondSetting::B),
            SettingPair::BpA => (FirstSetting::A, SecondSetting::BPrime),
            SettingPair::BAp => (FirstSetting::APrime, SecondSetting::B),
            SettingPair::ApBp => (FirstSetting::APrime, SecondSetting::BPrime),
        }
    }
}

impl fmt::Display for SettingPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

fn check_correlation(name: &'static str, e: f64) -> Result<()> {
    if e.is_finite() && e.abs() <= 1.0 + 1e-12 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value: e,
            reason: "correlation must lie in [-1, 1]",
        })
    }
}

fn check_probability(name: &'static str, p: f64) -> Result<()> {
    if p.is_finite() && (-1e-12..=1.0 + 1e-12).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value: p,
            reason: "probability must lie in [0, 1]",
        })
    }
}

/// `e(a,b) + e(a,b') + e(a',b) - 2p++(a',b') - 2p--(a',b')
///  + p+(a') + p-(a') + p+(b') + p-(b') >= -1`
pub fn ternary(
    e_ab: f64,
    e_bpa: f64,
    e_bap: f64,
    pair_apbp: &PairProbabilities,
    singles_ap: &SinglesProbabilities,
    singles_bp: &SinglesProbabilities,
) -> Result<InequalityReport> {
    check_correlation("e(a,b)", e_ab)?;
    check_correlation("e(a,b')", e_bpa)?;
    check_correlation("e(a',b)", e_bap)?;
    let lhs = e_ab + e_bpa + e_bap
        - 2.0 * pair_apbp.get(Outcome::Plus, Outcome::Plus)
        - 2.0 * pair_apbp.get(Outcome::Minus, Outcome::Minus)
        + singles_ap.p_plus
        + singles_ap.p_minus
        + singles_bp.p_plus
        + singles_bp.p_minus;
    Ok(InequalityReport::lower(
        InequalityId::Ternary,
        lhs,
        LOCAL_BOUND,
    ))
}

/// Ternary inequality evaluated from the marginals of a local model.
pub fn ternary_from_model(model: &FourAxisModel) -> InequalityReport {
    let pair = |p: SettingPair| {
        let (f, s) = p.settings();
        pair_probabilities(model, f, s)
    };
    let apbp = pair(SettingPair::ApBp);
    let (singles_ap, singles_bp) = apbp.marginals();
    ternary(
        pair(SettingPair::Ab).expectation(),
        pair(SettingPair::BpA).expectation(),
        pair(SettingPair::BAp).expectation(),
        &apbp,
        &singles_ap,
        &singles_bp,
    )
    .expect("model marginals are valid inputs")
}

/// `3e(120°) - 2p++(0°) - 2p--(0°) + p+(a') + p-(a') + p+(b') + p-(b') >= -1`.
/// `singles` is `[p+(a'), p-(a'), p+(b'), p-(b')]`.
pub fn ternary_symmetric(
    e_120: f64,
    p_pp_0: f64,
    p_mm_0: f64,
    singles: [f64; 4],
) -> Result<InequalityReport> {
    check_correlation("e(120)", e_120)?;
    check_probability("p++(0)", p_pp_0)?;
    check_probability("p--(0)", p_mm_0)?;
    for s in singles {
        check_probability("single probability", s)?;
    }
    let lhs = 3.0 * e_120 - 2.0 * p_pp_0 - 2.0 * p_mm_0 + singles.iter().sum::<f64>();
    Ok(InequalityReport::lower(
        InequalityId::TernarySymmetric,
        lhs,
        LOCAL_BOUND,
    ))
}

/// `e(a,b) + e(a,b') + e(a',b) >= -1`.
pub fn bell_1965(e_ab: f64, e_bpa: f64, e_apb: f64) -> Result<InequalityReport> {
    check_correlation("e(a,b)", e_ab)?;
    check_correlation("e(a,b')", e_bpa)?;
    check_correlation("e(a',b)", e_apb)?;
    Ok(InequalityReport::lower(
        InequalityId::Bell65,
        e_ab + e_bpa + e_apb,
        LOCAL_BOUND,
    ))
}

/// Ternary inequality with each probability replaced by a detection-rate
/// ratio: correlations by `E/T0`, joint probabilities by `D/T0`, single
/// probabilities by `D/t0`. `rates` is indexed by [`SettingPair::index`];
/// `singles_ap` and `singles_bp` are `(D+, D-)` for `a'` and `b'`.
///
/// Only ratios enter, so a common rescaling of all rates leaves the result
/// unchanged.
pub fn measurable(
    rates: &[DetectionRates; 4],
    singles_ap: (f64, f64),
    singles_bp: (f64, f64),
) -> Result<InequalityReport> {
    let ratio_e = |p: SettingPair| -> Result<f64> {
        let r = &rates[p.index()];
        let t0 = coincidence_total(r);
        if t0 <= 0.0 {
            return Err(Error::DivisionUndefined("coincidence total T0"));
        }
        Ok(detection_expectation(r) / t0)
    };
    let apbp = &rates[SettingPair::ApBp.index()];
    let t0_apbp = coincidence_total(apbp);
    if t0_apbp <= 0.0 {
        return Err(Error::DivisionUndefined("coincidence total T0"));
    }
    let single_ratio = |(plus, minus): (f64, f64)| -> Result<f64> {
        let t = singles_total(plus, minus);
        if t <= 0.0 {
            return Err(Error::DivisionUndefined("singles total t0"));
        }
        Ok(plus / t + minus / t)
    };
    let lhs = ratio_e(SettingPair::Ab)? + ratio_e(SettingPair::BpA)? + ratio_e(SettingPair::BAp)?
        - 2.0 * apbp.pp() / t0_apbp
        - 2.0 * apbp.mm() / t0_apbp
        + single_ratio(singles_ap)?
        + single_ratio(singles_bp)?;
    Ok(InequalityReport::lower(
        InequalityId::Measurable,
        lhs,
        LOCAL_BOUND,
    ))
}

/// [`measurable`] with the singles of `a'` and `b'` read from the `(a', b')`
/// run.
pub fn measurable_from_rates(rates: &[DetectionRates; 4]) -> Result<InequalityReport> {
    let apbp = &rates[SettingPair::ApBp.index()];
    measurable(
        rates,
        (
            apbp.single_first(Outcome::Plus),
            apbp.single_first(Outcome::Minus),
        ),
        (
            apbp.single_second(Outcome::Plus),
            apbp.single_second(Outcome::Minus),
        ),
    )
}

/// Inputs of the measurable inequality at the symmetric configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymmetricRates {
    /// `E(120°)`.
    pub e_120: f64,
    /// `T0(120°)`.
    pub coincidences_120: f64,
    pub d_pp_0: f64,
    pub d_mm_0: f64,
    /// `T0(0°)`.
    pub coincidences_0: f64,
    pub d_plus_0: f64,
    pub d_minus_0: f64,
    /// `t0(0°)`.
    pub singles_0: f64,
}

impl SymmetricRates {
    /// Reads the inputs from the rates at 120° and at 0°; singles come from
    /// the first photon at 0°.
    pub fn from_rates(at_120: &DetectionRates, at_0: &DetectionRates) -> Self {
        let d_plus_0 = at_0.single_first(Outcome::Plus);
        let d_minus_0 = at_0.single_first(Outcome::Minus);
        SymmetricRates {
            e_120: detection_expectation(at_120),
            coincidences_120: coincidence_total(at_120),
            d_pp_0: at_0.pp(),
            d_mm_0: at_0.mm(),
            coincidences_0: coincidence_total(at_0),
            d_plus_0,
            d_minus_0,
            singles_0: singles_total(d_plus_0, d_minus_0),
        }
    }
}

/// `3E(120°)/T0(120°) - 2D++(0°)/T0(0°) - 2D--(0°)/T0(0°)
///  + 2D+(0°)/t0(0°) + 2D-(0°)/t0(0°) >= -1`
pub fn measurable_symmetric(r: &SymmetricRates) -> Result<InequalityReport> {
    if r.coincidences_120 <= 0.0 {
        return Err(Error::DivisionUndefined("coincidence total T0(120)"));
    }
    if r.coincidences_0 <= 0.0 {
        return Err(Error::DivisionUndefined("coincidence total T0(0)"));
    }
    if r.singles_0 <= 0.0 {
        return Err(Error::DivisionUndefined("singles total t0(0)"));
    }
    let lhs = 3.0 * r.e_120 / r.coincidences_120
        - 2.0 * r.d_pp_0 / r.coincidences_0
        - 2.0 * r.d_mm_0 / r.coincidences_0
        + 2.0 * r.d_plus_0 / r.singles_0
        + 2.0 * r.d_minus_0 / r.singles_0;
    Ok(InequalityReport::lower(
        InequalityId::MeasurableSymmetric,
        lhs,
        LOCAL_BOUND,
    ))
}

/// CHSH comparator `|S| <= 2`. `S` takes the four correlations with one of
/// them subtracted; the largest `|S|` over the four choices of the
/// subtracted term is reported, which covers every CHSH inequality for
/// these settings.
pub fn chsh(e_ab: f64, e_abp: f64, e_apb: f64, e_apbp: f64) -> Result<InequalityReport> {
    let es = [e_ab, e_abp, e_apb, e_apbp];
    for e in es {
        check_correlation("e", e)?;
    }
    let total: f64 = es.iter().sum();
    let lhs = es
        .iter()
        .map(|&e| (total - 2.0 * e).abs())
        .fold(0.0, f64::max);
    Ok(InequalityReport::upper(InequalityId::Chsh, lhs, CHSH_BOUND))
}

/// How much larger one violation is than a reference, measured on the
/// excess over the local bound: `(f - 1) / (f_ref - 1)`.
pub fn excess_violation_ratio(factor_new: f64, factor_ref: f64) -> Result<f64> {
    if !(factor_ref.is_finite() && factor_ref > 1.0) {
        return Err(Error::InvalidParameter {
            name: "reference violation factor",
            value: factor_ref,
            reason: "must exceed 1",
        });
    }
    if !(factor_new.is_finite() && factor_new >= 1.0) {
        return Err(Error::InvalidParameter {
            name: "violation factor",
            value: factor_new,
            reason: "must be at least 1",
        });
    }
    Ok((factor_new - 1.0) / (factor_ref - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qm::{detection_rates, ideal_pair_probabilities, CascadeGeometry};
    use approx::assert_relative_eq;

    fn ideal_ternary(quad: &SettingsQuad) -> InequalityReport {
        let e = |p: SettingPair| {
            let (x, y) = p.axes(quad);
            ideal_pair_probabilities(x.degrees() - y.degrees()).expectation()
        };
        let (x, y) = SettingPair::ApBp.axes(quad);
        let apbp = ideal_pair_probabilities(x.degrees() - y.degrees());
        let (s1, s2) = apbp.marginals();
        ternary(
            e(SettingPair::Ab),
            e(SettingPair::BpA),
            e(SettingPair::BAp),
            &apbp,
            &s1,
            &s2,
        )
        .unwrap()
    }

    #[test]
    fn ideal_violation_at_symmetric_configuration() {
        let quad = SettingsQuad::from_differences(120.0, 120.0, 0.0);
        assert_eq!(quad.axes(), [0.0, 120.0, 60.0, 60.0]);
        let r = ideal_ternary(&quad);
        assert_relative_eq!(r.lhs, -1.5, epsilon = 1e-12);
        assert!(r.violated);
        assert_relative_eq!(r.violation_factor, 1.5, epsilon = 1e-12);
    }

    #[test]
    fn all_absorbed_is_not_violated() {
        let mut cells = [[0.0; 3]; 3];
        cells[1][1] = 1.0;
        let p = PairProbabilities::new(cells).unwrap();
        let (s1, s2) = p.marginals();
        let r = ternary(0.0, 0.0, 0.0, &p, &s1, &s2).unwrap();
        assert_eq!(r.lhs, 0.0);
        assert!(!r.violated);
        assert_eq!(r.violation_factor, 1.0);
    }

    #[test]
    fn symmetric_form() {
        let p0 = ideal_pair_probabilities(0.0);
        let e120 = ideal_pair_probabilities(120.0).expectation();
        let r = ternary_symmetric(
            e120,
            p0.get(Outcome::Plus, Outcome::Plus),
            p0.get(Outcome::Minus, Outcome::Minus),
            [0.5; 4],
        )
        .unwrap();
        assert_relative_eq!(r.lhs, -1.5, epsilon = 1e-12);
        assert_eq!(ternary_symmetric(0.0, 0.0, 0.0, [0.0; 4]).unwrap().lhs, 0.0);
        assert!(ternary_symmetric(1.5, 0.0, 0.0, [0.0; 4]).is_err());
    }

    #[test]
    fn bell_1965_examples() {
        let e = ideal_pair_probabilities(120.0).expectation();
        assert_relative_eq!(bell_1965(e, e, e).unwrap().lhs, -1.5, epsilon = 1e-12);
        let r = bell_1965(1.0, 1.0, 1.0).unwrap();
        assert_eq!(r.lhs, 3.0);
        assert!(!r.violated);
    }

    fn rates_at(quad: &SettingsQuad, g: &CascadeGeometry) -> [DetectionRates; 4] {
        SettingPair::ALL.map(|p| {
            let (x, y) = p.axes(quad);
            detection_rates(x, y, g)
        })
    }

    #[test]
    fn measurable_forms_at_real_geometry() {
        let quad = SettingsQuad::from_differences(120.0, 120.0, 0.0);
        let forced = CascadeGeometry::new(0.2, 30.0)
            .unwrap()
            .with_depolarization(1.0)
            .unwrap();
        let rates = rates_at(&quad, &forced);
        let r = measurable_from_rates(&rates).unwrap();
        assert_relative_eq!(r.lhs, -1.5, epsilon = 1e-12);
        assert_relative_eq!(r.violation_factor, 1.5, epsilon = 1e-12);

        let scaled = rates.map(|x| x.scaled(7.3).unwrap());
        let s = measurable_from_rates(&scaled).unwrap();
        assert_relative_eq!(s.lhs, r.lhs, epsilon = 1e-12);

        let natural = CascadeGeometry::new(0.2, 30.0).unwrap();
        let n = measurable_from_rates(&rates_at(&quad, &natural)).unwrap();
        assert_relative_eq!(n.lhs, -1.470085, epsilon = 1e-6);
        assert_relative_eq!(n.lhs, 1.0 - 2.5 * natural.depolarization(), epsilon = 1e-12);

        let sym = SymmetricRates::from_rates(
            &rates[SettingPair::Ab.index()],
            &rates[SettingPair::ApBp.index()],
        );
        assert_relative_eq!(
            measurable_symmetric(&sym).unwrap().lhs,
            -1.5,
            epsilon = 1e-12
        );
    }

    #[test]
    fn measurable_symmetric_without_fringe() {
        let r = SymmetricRates {
            e_120: 0.0,
            coincidences_120: 4e-4,
            d_pp_0: 1e-4,
            d_mm_0: 1e-4,
            coincidences_0: 4e-4,
            d_plus_0: 5e-3,
            d_minus_0: 5e-3,
            singles_0: 1e-2,
        };
        assert_relative_eq!(measurable_symmetric(&r).unwrap().lhs, 1.0, epsilon = 1e-15);
        let zero = SymmetricRates {
            coincidences_0: 0.0,
            ..r
        };
        assert!(matches!(
            measurable_symmetric(&zero),
            Err(Error::DivisionUndefined(_))
        ));
    }

    #[test]
    fn measurable_rejects_empty_runs() {
        let empty = DetectionRates::new([[0.0; 2]; 2], [0.1; 2], [0.1; 2]).unwrap();
        assert!(matches!(
            measurable_from_rates(&[empty; 4]),
            Err(Error::DivisionUndefined(_))
        ));
    }

    #[test]
    fn chsh_examples() {
        let e = |d: f64| ideal_pair_probabilities(d).expectation();
        let r = chsh(e(22.5), e(67.5), e(22.5), e(22.5)).unwrap();
        assert_relative_eq!(r.lhs, 2.0 * 2f64.sqrt(), epsilon = 1e-12);
        assert_relative_eq!(r.violation_factor, 2f64.sqrt(), epsilon = 1e-12);
        assert!(r.violated);
        let zero = chsh(0.0, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(
            (zero.lhs, zero.violation_factor, zero.violated),
            (0.0, 1.0, false)
        );
        let max = chsh(1.0, 1.0, 1.0, -1.0).unwrap();
        assert_eq!((max.lhs, max.violation_factor), (4.0, 2.0));
    }

    #[test]
    fn excess_ratio() {
        assert_relative_eq!(
            excess_violation_ratio(1.5, 2f64.sqrt()).unwrap(),
            1.207107,
            epsilon = 1e-6
        );
        assert_eq!(excess_violation_ratio(1.3, 1.3).unwrap(), 1.0);
        assert_eq!(excess_violation_ratio(1.0, 1.5).unwrap(), 0.0);
        assert!(excess_violation_ratio(1.5, 1.0).is_err());
    }

    #[test]
    fn local_models_never_violate() {
        for asg in crate::lhv::enumerate_assignments() {
            let r = ternary_from_model(&FourAxisModel::point_mass(asg));
            assert!(r.margin >= -1e-12, "{asg}: {}", r.lhs);
        }
        for seed in 0..200 {
            let m = crate::lhv::random_model(seed);
            let r = ternary_from_model(&m);
            assert!(r.margin >= -1e-12);
            assert_relative_eq!(r.lhs, crate::lhv::mixture_functional(&m), epsilon = 1e-12);
        }
    }

    #[test]
    fn ids_parse() {
        for id in InequalityId::ALL {
            assert_eq!(id.as_str().parse::<InequalityId>().unwrap(), id);
        }
        assert!("nope".parse::<InequalityId>().is_err());
    }
}
