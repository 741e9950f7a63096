//! Distance-dependent user weights for the barycenter iteration.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default inner breakpoint in meters.
pub const DEFAULT_R_MIN: f64 = 40.0;
/// Default outer breakpoint in meters.
pub const DEFAULT_R_MAX: f64 = 126.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityKind {
    Uniform,
    AscendingTrapezoid,
    DescendingTrapezoid,
    Triangular,
}

impl DensityKind {
    pub const ALL: [DensityKind; 4] = [
        DensityKind::Uniform,
        DensityKind::AscendingTrapezoid,
        DensityKind::DescendingTrapezoid,
        DensityKind::Triangular,
    ];

    pub fn short_name(self) -> &'static str {
        match self {
            DensityKind::Uniform => "uniform",
            DensityKind::AscendingTrapezoid => "asc",
            DensityKind::DescendingTrapezoid => "desc",
            DensityKind::Triangular => "tri",
        }
    }
}

impl FromStr for DensityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "uniform" => Ok(DensityKind::Uniform),
            "asc" | "ascending" | "ascending_trapezoid" => Ok(DensityKind::AscendingTrapezoid),
            "desc" | "descending" | "descending_trapezoid" => Ok(DensityKind::DescendingTrapezoid),
            "tri" | "triangular" => Ok(DensityKind::Triangular),
            other => Err(Error::config(format!("unknown mass density `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MassDensity {
    pub kind: DensityKind,
    pub r_min: f64,
    pub r_max: f64,
    /// UAV altitude the density was designed for.
    pub h: f64,
}

impl MassDensity {
    pub fn new(kind: DensityKind, r_min: f64, r_max: f64, h: f64) -> Result<Self> {
        if !(r_min >= 0.0 && r_min < r_max && r_max.is_finite()) {
            return Err(Error::config(format!(
                "need 0 <= r_min < r_max, got r_min={r_min}, r_max={r_max}"
            )));
        }
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::config(format!("altitude must be > 0, got {h}")));
        }
        Ok(Self { kind, r_min, r_max, h })
    }

    pub fn with_defaults(kind: DensityKind, h: f64) -> Result<Self> {
        Self::new(kind, DEFAULT_R_MIN, DEFAULT_R_MAX, h)
    }

    /// Distance where the inner and outer pieces meet.
    pub fn breakpoint(&self) -> f64 {
        0.5 * (self.r_max * self.r_max + 3.0 * self.h * self.h).sqrt()
    }

    /// Weight of a user at 3-D distance `r`.
    pub fn weight(&self, r: f64) -> f64 {
        if self.kind == DensityKind::Uniform {
            return 1.0;
        }
        let h2 = self.h * self.h;
        if r <= self.h.max(self.r_min) || r > self.r_max {
            return 0.0;
        }
        let ground = (r * r - h2).max(0.0).sqrt();
        let full = (self.r_max * self.r_max - h2).max(0.0).sqrt();
        let inner = r <= self.breakpoint();
        match (self.kind, inner) {
            (DensityKind::AscendingTrapezoid, true) | (DensityKind::Triangular, true) => ground,
            (DensityKind::AscendingTrapezoid, false) => 0.5 * full,
            (DensityKind::DescendingTrapezoid, true) => 0.5 * full,
            (DensityKind::DescendingTrapezoid, false) | (DensityKind::Triangular, false) => {
                full - ground
            }
            (DensityKind::Uniform, _) => unreachable!(),
        }
    }
}
