//! Ternary-outcome Bell inequalities for photon pairs from atomic cascades.
//!
//! Each photon either emerges along the ordinary axis (`+`), emerges along
//! the extraordinary axis (`-`), or is absorbed (`0`). The crate provides
//!
//! * the outcome and probability algebra ([`outcome`], [`probability`], [`rates`]),
//! * local realistic models and an exhaustive proof of the local bound ([`lhv`]),
//! * closed-form quantum predictions for ideal and real apparatus ([`qm`]),
//! * the inequalities and their reports ([`inequalities`]),
//! * seeded, parallel Monte Carlo coincidence experiments ([`montecarlo`]),
//! * a grid-and-refine search for the most violating settings ([`optimizer`]).

pub mod angle;
pub mod error;
pub mod inequalities;
pub mod lhv;
pub mod montecarlo;
pub mod optimizer;
pub mod outcome;
pub mod predict;
pub mod probability;
pub mod qm;
pub mod rates;

pub use angle::AngleDeg;
pub use error::{Error, Result};
pub use inequalities::{InequalityId, InequalityReport, SettingPair, SettingsQuad};
pub use lhv::{DeterministicAssignment, FourAxisModel, TheoremReport};
pub use outcome::Outcome;
pub use probability::{PairProbabilities, SinglesProbabilities};
pub use qm::{CascadeGeometry, EventDistribution};
pub use rates::DetectionRates;
