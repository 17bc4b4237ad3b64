use serde::{Serialize, Serializer};
use std::fmt;

/// Polarizer axis orientation in degrees, normalized to `[0, 180)`.
///
/// Polarizer axes are lines, so `d` and `d + 180` describe the same setting.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct AngleDeg(f64);

impl AngleDeg {
    pub fn new(degrees: f64) -> AngleDeg {
        AngleDeg(normalize(degrees))
    }

    pub fn degrees(self) -> f64 {
        self.0
    }

    pub fn radians(self) -> f64 {
        self.0.to_radians()
    }

    /// `cos 2(self - other)`, the fringe factor of a polarization correlation.
    pub fn cos_double_difference(self, other: AngleDeg) -> f64 {
        cos_double(self.0 - other.0)
    }

    /// Angle between the two axes as lines, in `[0, 90]`.
    pub fn separation(self, other: AngleDeg) -> f64 {
        let d = normalize(self.0 - other.0);
        d.min(180.0 - d)
    }
}

impl From<f64> for AngleDeg {
    fn from(d: f64) -> Self {
        AngleDeg::new(d)
    }
}

impl fmt::Display for AngleDeg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for AngleDeg {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(self.0)
    }
}

/// Reduce an angle in degrees to `[0, 180)`.
pub fn normalize(degrees: f64) -> f64 {
    let r = degrees.rem_euclid(180.0);
    // rem_euclid can round up to the modulus for tiny negative inputs
    if r >= 180.0 || r == 0.0 {
        0.0
    } else {
        r
    }
}

/// `cos 2θ` for a difference given in degrees. The difference is reduced
/// to the line separation in [0, 90] first so that equivalent and reversed
/// differences give bit-identical values.
pub fn cos_double(theta_deg: f64) -> f64 {
    let d = normalize(theta_deg);
    (2.0 * d.min(180.0 - d)).to_radians().cos()
}
