//! Local realistic theories as joint distributions over predetermined
//! outcomes for both settings on both sides, and an exhaustive check that
//! every such theory satisfies the ternary-outcome inequality.
//!
//! A deterministic assignment fixes `A(a), A(a'), B(b), B(b')`. The
//! inequality's left-hand side is linear in the distribution, so checking its
//! value on each of the 3⁴ = 81 assignments proves it for every mixture.

use crate::error::{Error, Result};
use crate::outcome::Outcome;
use crate::probability::PairProbabilities;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

pub const ASSIGNMENT_COUNT: usize = 81;

/// Tolerance the model-file loader allows on the total weight.
pub const FILE_SUM_TOLERANCE: f64 = 1e-6;

/// Predetermined results for settings `a`, `a'` of the first photon and
/// `b`, `b'` of the second.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DeterministicAssignment {
    pub a: Outcome,
    pub a_prime: Outcome,
    pub b: Outcome,
    pub b_prime: Outcome,
}

impl DeterministicAssignment {
    pub fn new(a: Outcome, a_prime: Outcome, b: Outcome, b_prime: Outcome) -> Self {
        DeterministicAssignment {
            a,
            a_prime,
            b,
            b_prime,
        }
    }

    /// Position in the canonical enumeration.
    pub fn index(&self) -> usize {
        27 * self.a.index() + 9 * self.a_prime.index() + 3 * self.b.index() + self.b_prime.index()
    }

    pub fn from_index(i: usize) -> Option<Self> {
        if i >= ASSIGNMENT_COUNT {
            return None;
        }
        let o = |k: usize| Outcome::ALL[k % 3];
        Some(DeterministicAssignment::new(
            o(i / 27),
            o(i / 9),
            o(i / 3),
            o(i),
        ))
    }

    pub fn first(&self, setting: FirstSetting) -> Outcome {
        match setting {
            FirstSetting::A => self.a,
            FirstSetting::APrime => self.a_prime,
        }
    }

    pub fn second(&self, setting: SecondSetting) -> Outcome {
        match setting {
            SecondSetting::B => self.b,
            SecondSetting::BPrime => self.b_prime,
        }
    }

    /// `A(a)B(b) + A(a)B(b') + A(a')B(b)`.
    pub fn three_term_sum(&self) -> i32 {
        let (a, ap, b, bp) = (
            self.a.value(),
            self.a_prime.value(),
            self.b.value(),
            self.b_prime.value(),
        );
        a * b + a * bp + ap * b
    }
}

impl fmt::Display for DeterministicAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}{}", self.a, self.a_prime, self.b, self.b_prime)
    }
}

impl FromStr for DeterministicAssignment {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let outcomes: Vec<Outcome> = s
            .chars()
            .map(|c| Outcome::from_symbol(c).ok_or_else(|| format!("bad outcome symbol {c:?}")))
            .collect::<std::result::Result<_, _>>()?;
        match outcomes.as_slice() {
            &[a, ap, b, bp] => Ok(DeterministicAssignment::new(a, ap, b, bp)),
            _ => Err(format!("key {s:?} must have exactly four symbols")),
        }
    }
}

impl Serialize for DeterministicAssignment {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FirstSetting {
    A,
    APrime,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SecondSetting {
    B,
    BPrime,
}

/// All 81 assignments in lexicographic order over `(A(a), A(a'), B(b), B(b'))`
/// with `+ < 0 < -`.
pub fn enumerate_assignments() -> Vec<DeterministicAssignment> {
    (0..ASSIGNMENT_COUNT)
        .map(|i| DeterministicAssignment::from_index(i).expect("index in range"))
        .collect()
}

/// Probability distribution over the 81 deterministic assignments.
#[derive(Debug, Clone, PartialEq)]
pub struct FourAxisModel {
    weights: [f64; ASSIGNMENT_COUNT],
}

impl FourAxisModel {
    pub fn new(weights: [f64; ASSIGNMENT_COUNT]) -> Result<Self> {
        let mut sum = 0.0;
        for (i, &w) in weights.iter().enumerate() {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidDistribution(format!(
                    "weight {w} of assignment {} is negative or not finite",
                    DeterministicAssignment::from_index(i).unwrap()
                )));
            }
            sum += w;
        }
        if (sum - 1.0).abs() > crate::probability::SUM_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "weights sum to {sum}, expected 1"
            )));
        }
        Ok(FourAxisModel { weights })
    }

    pub fn point_mass(assignment: DeterministicAssignment) -> Self {
        let mut weights = [0.0; ASSIGNMENT_COUNT];
        weights[assignment.index()] = 1.0;
        FourAxisModel { weights }
    }

    pub fn uniform() -> Self {
        FourAxisModel {
            weights: [1.0 / ASSIGNMENT_COUNT as f64; ASSIGNMENT_COUNT],
        }
    }

    pub fn weight(&self, assignment: DeterministicAssignment) -> f64 {
        self.weights[assignment.index()]
    }

    pub fn weights(&self) -> &[f64; ASSIGNMENT_COUNT] {
        &self.weights
    }

    /// Weighted assignments with nonzero weight, in canonical order.
    pub fn support(&self) -> impl Iterator<Item = (DeterministicAssignment, f64)> + '_ {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, &w)| w > 0.0)
            .map(|(i, &w)| (DeterministicAssignment::from_index(i).unwrap(), w))
    }

    /// Parses the text model format: one `KEY WEIGHT` entry per line, where
    /// `KEY` is four symbols over `+ 0 -` in the order `A(a) A(a') B(b) B(b')`.
    /// Blank lines and `#` comments are ignored. All 81 keys must be present
    /// exactly once and the weights must sum to 1 within 1e-6; the weights are
    /// then rescaled to sum to 1.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut weights = [f64::NAN; ASSIGNMENT_COUNT];
        for (n, raw) in text.lines().enumerate() {
            let line_no = n + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |message: String| Error::Parse {
                line: line_no,
                message,
            };
            let mut fields = line.split_whitespace();
            let (key, value) = match (fields.next(), fields.next(), fields.next()) {
                (Some(k), Some(v), None) => (k, v),
                _ => return Err(parse_err("expected `KEY WEIGHT`".into())),
            };
            let assignment: DeterministicAssignment = key.parse().map_err(parse_err)?;
            let w: f64 = value
                .parse()
                .map_err(|_| parse_err(format!("bad weight {value:?}")))?;
            if !w.is_finite() || w < 0.0 {
                return Err(parse_err(format!("weight {w} must be nonnegative")));
            }
            let slot = &mut weights[assignment.index()];
            if !slot.is_nan() {
                return Err(parse_err(format!("duplicate key {assignment}")));
            }
            *slot = w;
        }
        if let Some(i) = weights.iter().position(|w| w.is_nan()) {
            return Err(Error::Parse {
                line: text.lines().count(),
                message: format!(
                    "missing key {}",
                    DeterministicAssignment::from_index(i).unwrap()
                ),
            });
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > FILE_SUM_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "weights sum to {sum}, expected 1 ± {FILE_SUM_TOLERANCE}"
            )));
        }
        weights.iter_mut().for_each(|w| *w /= sum);
        FourAxisModel::new(weights)
    }

    /// Writes the model in the format read by [`FourAxisModel::from_text`].
    pub fn to_text(&self) -> String {
        let mut out = String::from("# A(a) A(a') B(b) B(b')  weight\n");
        for (i, w) in self.weights.iter().enumerate() {
            let key = DeterministicAssignment::from_index(i).unwrap();
            out.push_str(&format!("{key} {w:e}\n"));
        }
        out
    }
}

/// Joint distribution of the selected settings, obtained by summing the
/// weights of every assignment that produces each outcome pair.
pub fn pair_probabilities(
    model: &FourAxisModel,
    first: FirstSetting,
    second: SecondSetting,
) -> PairProbabilities {
    let mut cells = [[0.0; 3]; 3];
    for (i, &w) in model.weights.iter().enumerate() {
        let asg = DeterministicAssignment::from_index(i).unwrap();
        cells[asg.first(first).index()][asg.second(second).index()] += w;
    }
    for c in cells.iter_mut().flatten() {
        *c = c.min(1.0);
    }
    PairProbabilities::new(cells).expect("marginal of a valid model is valid")
}

/// Per-assignment value of the inequality's left-hand side:
///
/// `A(a)B(b) + A(a)B(b') + A(a')B(b) - 2[A(a')=B(b')=+] - 2[A(a')=B(b')=-]
///  + [A(a')≠0] + [B(b')≠0]`
///
/// Its expectation under a model is the inequality's left-hand side; the
/// bound is -1.
pub fn bell_functional(asg: &DeterministicAssignment) -> i32 {
    let both = |o: Outcome| asg.a_prime == o && asg.b_prime == o;
    asg.three_term_sum() - 2 * i32::from(both(Outcome::Plus)) - 2 * i32::from(both(Outcome::Minus))
        + i32::from(asg.a_prime.is_detected())
        + i32::from(asg.b_prime.is_detected())
}

/// Expectation of [`bell_functional`] under the model.
pub fn mixture_functional(model: &FourAxisModel) -> f64 {
    model
        .weights
        .iter()
        .enumerate()
        .map(|(i, &w)| {
            w * f64::from(bell_functional(
                &DeterministicAssignment::from_index(i).unwrap(),
            ))
        })
        .sum()
}

/// Dirichlet(1, …, 1) model: 81 independent unit-exponential variates
/// divided by their sum, drawn from ChaCha8 seeded with `seed`.
pub fn random_model(seed: u64) -> FourAxisModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut weights = [0.0; ASSIGNMENT_COUNT];
    for w in weights.iter_mut() {
        *w = Exp1.sample(&mut rng);
    }
    let sum: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= sum);
    FourAxisModel::new(weights).expect("normalized exponential weights")
}

/// Minimum of the three-term sum for one `(A(a'), B(b'))` case.
#[derive(Debug, Clone, Serialize)]
pub struct CaseBound {
    /// Roman numeral of the case, `i` through `ix`.
    pub case: &'static str,
    pub a_prime: Outcome,
    pub b_prime: Outcome,
    /// Minimum over `A(a), B(b)` of `A(a)B(b) + A(a)B(b') + A(a')B(b)`.
    pub min_three_term: i32,
    pub expected_bound: i32,
    pub matches: bool,
}

/// The nine cases, with the lower bound on the three-term sum each one
/// carries in the hand proof.
pub const CASES: [(&str, Outcome, Outcome, i32); 9] = [
    ("i", Outcome::Plus, Outcome::Plus, -1),
    ("ii", Outcome::Minus, Outcome::Minus, -1),
    ("iii", Outcome::Plus, Outcome::Minus, -3),
    ("iv", Outcome::Minus, Outcome::Plus, -3),
    ("v", Outcome::Plus, Outcome::Zero, -2),
    ("vi", Outcome::Minus, Outcome::Zero, -2),
    ("vii", Outcome::Zero, Outcome::Plus, -2),
    ("viii", Outcome::Zero, Outcome::Minus, -2),
    ("ix", Outcome::Zero, Outcome::Zero, -1),
];

/// Lower bound of the ternary-outcome inequality.
pub const LOCAL_BOUND: i32 = -1;

#[derive(Debug, Clone, Serialize)]
pub struct AssignmentValue {
    pub assignment: DeterministicAssignment,
    pub value: i32,
}

#[derive(Debug, Clone, Serialize)]
pub struct TheoremReport {
    pub values: Vec<AssignmentValue>,
    pub min_functional_value: i32,
    pub argmin_assignments: Vec<DeterministicAssignment>,
    pub case_bounds: Vec<CaseBound>,
    pub case_bounds_match: bool,
    pub all_satisfied: bool,
}

/// Evaluates the functional on all 81 assignments and tabulates the case
/// minima. Evaluation is split across the rayon pool; results are collected
/// in canonical order, so the report does not depend on the split.
pub fn verify_theorem() -> TheoremReport {
    verify_theorem_with_chunk(ASSIGNMENT_COUNT)
}

/// As [`verify_theorem`], evaluating the assignments in chunks of the given
/// size and merging the partial minima.
pub fn verify_theorem_with_chunk(chunk: usize) -> TheoremReport {
    let chunk = chunk.max(1);
    let assignments = enumerate_assignments();
    let partials: Vec<(Vec<AssignmentValue>, i32)> = assignments
        .par_chunks(chunk)
        .map(|part| {
            let vals: Vec<AssignmentValue> = part
                .iter()
                .map(|&assignment| AssignmentValue {
                    assignment,
                    value: bell_functional(&assignment),
                })
                .collect();
            let min = vals.iter().map(|v| v.value).min().unwrap_or(i32::MAX);
            (vals, min)
        })
        .collect();

    let min_functional_value = partials.iter().map(|(_, m)| *m).min().unwrap_or(i32::MAX);
    let values: Vec<AssignmentValue> = partials.into_iter().flat_map(|(v, _)| v).collect();
    let argmin_assignments = values
        .iter()
        .filter(|v| v.value == min_functional_value)
        .map(|v| v.assignment)
        .collect();

    let case_bounds: Vec<CaseBound> = CASES
        .iter()
        .map(|&(case, a_prime, b_prime, expected_bound)| {
            let min_three_term = values
                .iter()
                .filter(|v| v.assignment.a_prime == a_prime && v.assignment.b_prime == b_prime)
                .map(|v| v.assignment.three_term_sum())
                .min()
                .expect("nine assignments per case");
            CaseBound {
                case,
                a_prime,
                b_prime,
                min_three_term,
                expected_bound,
                matches: min_three_term == expected_bound,
            }
        })
        .collect();
    let case_bounds_match = case_bounds.iter().all(|c| c.matches);

    TheoremReport {
        values,
        min_functional_value,
        argmin_assignments,
        case_bounds,
        case_bounds_match,
        all_satisfied: min_functional_value >= LOCAL_BOUND,
    }
}
