use belltest::InequalityId;
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(
    name = "belltest",
    version,
    about = "Ternary-outcome Bell inequalities for atomic-cascade photon pairs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the local bound on all 81 deterministic assignments.
    VerifyTheorem {
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Evaluate an inequality from closed-form predictions.
    Eval(EvalArgs),
    /// Run a Monte Carlo coincidence experiment and evaluate a measurable inequality.
    Mc(McArgs),
    /// Search polarizer settings for the largest violation.
    Scan(ScanArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ineq {
    #[value(alias = "ardehali10")]
    Ternary,
    #[value(alias = "ardehali14")]
    TernarySymmetric,
    Bell65,
    #[value(alias = "ardehali28")]
    Measurable,
    #[value(alias = "ardehali31")]
    MeasurableSymmetric,
    Chsh,
}

impl From<Ineq> for InequalityId {
    fn from(i: Ineq) -> Self {
        match i {
            Ineq::Ternary => InequalityId::Ternary,
            Ineq::TernarySymmetric => InequalityId::TernarySymmetric,
            Ineq::Bell65 => InequalityId::Bell65,
            Ineq::Measurable => InequalityId::Measurable,
            Ineq::MeasurableSymmetric => InequalityId::MeasurableSymmetric,
            Ineq::Chsh => InequalityId::Chsh,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SourceKind {
    QmIdeal,
    QmReal,
    Lhv,
}

/// Source of emitted pairs. The physical defaults (eta 0.2, phi 30°) are
/// illustrative values for a small-aperture cascade experiment.
#[derive(Args, Debug, Clone)]
pub struct SourceArgs {
    #[arg(long, value_enum, default_value_t = SourceKind::QmIdeal)]
    pub source: SourceKind,
    /// Detector quantum efficiency, in (0, 1] (qm-real; illustrative default).
    #[arg(long, default_value_t = 0.2)]
    pub eta: f64,
    /// Detector half-aperture in degrees, in (0, 90] (qm-real; illustrative default).
    #[arg(long, default_value_t = 30.0)]
    pub phi: f64,
    /// Replace the aperture-derived depolarization factor (qm-real).
    #[arg(long = "force-F", value_name = "F")]
    pub force_f: Option<f64>,
    /// Local model file: 81 lines `KEY WEIGHT` (lhv).
    #[arg(long)]
    pub model: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct SettingsArgs {
    /// Four axes `a,b,a',b'` in degrees.
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        conflicts_with = "diffs"
    )]
    pub angles: Option<Vec<f64>>,
    /// Axis differences `|a-b|,|b'-a|,|b-a'|[,|a'-b'|]` in degrees, expanded
    /// to `a=0, b=d1, a'=d1+d3, b'=a'-d4`; d2 must agree with that layout.
    #[arg(long, value_delimiter = ',')]
    pub diffs: Option<Vec<f64>>,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[arg(long, value_enum)]
    pub ineq: Ineq,
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub settings: SettingsArgs,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct McArgs {
    /// measurable-symmetric uses the (a,b) run at 120° and the (a',b') run at 0°.
    #[arg(long, value_enum, default_value_t = Ineq::MeasurableSymmetric)]
    pub ineq: Ineq,
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub settings: SettingsArgs,
    /// Emitted pairs per setting pair.
    #[arg(long, default_value_t = 10_000_000)]
    pub pairs: u64,
    /// Master seed; falls back to BELLTEST_SEED, then 42.
    #[arg(long, env = "BELLTEST_SEED", default_value_t = 42)]
    pub seed: u64,
    /// Worker threads (results do not depend on this).
    #[arg(long)]
    pub workers: Option<usize>,
    /// Write counters as `pair,cell,count` CSV.
    #[arg(long)]
    pub counters: Option<PathBuf>,
    /// Write a plain-text run manifest.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Add a parametric-bootstrap standard error (1000 resamples).
    #[arg(long)]
    pub bootstrap: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    #[arg(long, value_enum, default_value_t = Ineq::Ternary)]
    pub ineq: Ineq,
    #[command(flatten)]
    pub source: SourceArgs,
    /// Coarse grid step in degrees, in (0, 45].
    #[arg(long, default_value_t = 1.0)]
    pub step: f64,
    /// Refinement rounds; each halves the step.
    #[arg(long, default_value_t = 6)]
    pub rounds: u32,
    /// Let b' move independently of a' (default keeps b' = a').
    #[arg(long)]
    pub free: bool,
    /// Write the coarse grid as `a,b,a_prime,b_prime,lhs` CSV.
    #[arg(long)]
    pub surface: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}
