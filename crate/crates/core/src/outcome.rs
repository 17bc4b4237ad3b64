use serde::{Deserialize, Serialize};
use std::fmt;

/// Result of sending one photon through a two-channel polarizer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Outcome {
    /// Emerged along the ordinary axis.
    Plus,
    /// Absorbed (or otherwise not analyzed).
    Zero,
    /// Emerged along the extraordinary axis.
    Minus,
}

impl Outcome {
    /// Canonical order used for every table and enumeration: `+`, `0`, `-`.
    pub const ALL: [Outcome; 3] = [Outcome::Plus, Outcome::Zero, Outcome::Minus];

    /// The two detected outcomes.
    pub const DETECTED: [Outcome; 2] = [Outcome::Plus, Outcome::Minus];

    pub fn value(self) -> i32 {
        match self {
            Outcome::Plus => 1,
            Outcome::Zero => 0,
            Outcome::Minus => -1,
        }
    }

    /// Position in [`Outcome::ALL`].
    pub fn index(self) -> usize {
        match self {
            Outcome::Plus => 0,
            Outcome::Zero => 1,
            Outcome::Minus => 2,
        }
    }

    pub fn from_index(i: usize) -> Option<Outcome> {
        Outcome::ALL.get(i).copied()
    }

    pub fn symbol(self) -> char {
        match self {
            Outcome::Plus => '+',
            Outcome::Zero => '0',
            Outcome::Minus => '-',
        }
    }

    pub fn from_symbol(c: char) -> Option<Outcome> {
        match c {
            '+' => Some(Outcome::Plus),
            '0' => Some(Outcome::Zero),
            '-' => Some(Outcome::Minus),
            _ => None,
        }
    }

    /// Short name used in counter dumps: `p`, `0`, `m`.
    pub fn cell_letter(self) -> char {
        match self {
            Outcome::Plus => 'p',
            Outcome::Zero => '0',
            Outcome::Minus => 'm',
        }
    }

    pub fn is_detected(self) -> bool {
        self != Outcome::Zero
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}
