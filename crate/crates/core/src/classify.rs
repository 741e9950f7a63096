//! Three-way user classification by coverage probability: definitely
//! covered (C1), probably covered (C2) and cannot be covered (C3).
//!
//! Non-terrain mode thresholds the conditional coverages: a user whose NLoS
//! coverage already exceeds `1 - eps` is C1, a user whose LoS coverage is
//! below `eps` is C3. Terrain mode thresholds the LoS-averaged coverage at
//! both ends. Values exactly on a threshold fall into C2.

use serde::{Deserialize, Serialize};

use crate::channel::{conditional_coverage, coverage_probability, ChannelParams, LinkState};
use crate::error::{Error, Result};
use crate::losmodel::LosModel;
use crate::terrain::{Point2, Point3};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum UserClass {
    C1,
    C2,
    C3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassificationMode {
    NonTerrain,
    Terrain,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassificationConfig {
    pub epsilon: f64,
    pub mode: ClassificationMode,
}

impl ClassificationConfig {
    pub fn new(epsilon: f64, mode: ClassificationMode) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 0.5) {
            return Err(Error::config(format!(
                "classification degree must lie in (0, 0.5), got {epsilon}"
            )));
        }
        Ok(Self { epsilon, mode })
    }

    pub fn non_terrain(epsilon: f64) -> Result<Self> {
        Self::new(epsilon, ClassificationMode::NonTerrain)
    }

    pub fn terrain(epsilon: f64) -> Result<Self> {
        Self::new(epsilon, ClassificationMode::Terrain)
    }
}

/// `(upper-threshold quantity, lower-threshold quantity)` for one user.
fn scores(
    params: &ChannelParams,
    los_model: &LosModel,
    mode: ClassificationMode,
    h: f64,
    r: f64,
) -> Result<(f64, f64)> {
    match mode {
        ClassificationMode::NonTerrain => Ok((
            conditional_coverage(params, LinkState::Nlos, r)?,
            conditional_coverage(params, LinkState::Los, r)?,
        )),
        ClassificationMode::Terrain => {
            let c = coverage_probability(params, los_model, h, r)?;
            Ok((c, c))
        }
    }
}

/// Class of a user at 3-D distance `r` from a UAV at altitude `h`.
pub fn classify_user(
    params: &ChannelParams,
    los_model: &LosModel,
    cfg: &ClassificationConfig,
    h: f64,
    r: f64,
) -> Result<UserClass> {
    if !(h > 0.0 && h <= r) {
        return Err(Error::domain(format!("need 0 < h <= r, got h={h}, r={r}")));
    }
    let (upper, lower) = scores(params, los_model, cfg.mode, h, r)?;
    Ok(if upper > 1.0 - cfg.epsilon {
        UserClass::C1
    } else if lower < cfg.epsilon {
        UserClass::C3
    } else {
        UserClass::C2
    })
}

/// Classifies every ground user with respect to a reference UAV position.
pub fn classify_users(
    params: &ChannelParams,
    los_model: &LosModel,
    cfg: &ClassificationConfig,
    center: Point3,
    users: &[Point2],
) -> Result<Vec<UserClass>> {
    users
        .iter()
        .map(|u| {
            let r = center.dist(u.on_ground()).max(center.z);
            classify_user(params, los_model, cfg, center.z, r)
        })
        .collect()
}

/// Class boundary distance, or `Unbounded` when the threshold is never
/// crossed within reach.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    At(f64),
    Unbounded,
}

impl Boundary {
    pub fn value(self) -> f64 {
        match self {
            Boundary::At(r) => r,
            Boundary::Unbounded => f64::INFINITY,
        }
    }
}

/// Largest distance considered when bracketing a boundary.
const REACH: f64 = 1.0e7;
const BOUNDARY_TOL: f64 = 0.01;

/// Distance where the decreasing function `f` crosses `threshold`, searched
/// on `[h, REACH]`.
fn crossing(h: f64, threshold: f64, f: impl Fn(f64) -> Result<f64>) -> Result<Boundary> {
    if f(h)? <= threshold {
        return Ok(Boundary::At(h));
    }
    let mut lo = h;
    let mut hi = (2.0 * h).max(h + 1.0);
    while f(hi)? > threshold {
        lo = hi;
        hi *= 2.0;
        if hi > REACH {
            return Ok(Boundary::Unbounded);
        }
    }
    while hi - lo > BOUNDARY_TOL {
        let mid = 0.5 * (lo + hi);
        if f(mid)? > threshold {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Boundary::At(0.5 * (lo + hi)))
}

/// `(R_min, R_max)`: the C1/C2 and C2/C3 boundary distances for a UAV at
/// altitude `h`. Assumes coverage decreases with distance.
pub fn class_boundaries(
    params: &ChannelParams,
    los_model: &LosModel,
    cfg: &ClassificationConfig,
    h: f64,
) -> Result<(Boundary, Boundary)> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::domain(format!("altitude must be positive, got {h}")));
    }
    let eps = cfg.epsilon;
    let upper = |r: f64| scores(params, los_model, cfg.mode, h, r).map(|s| s.0);
    let lower = |r: f64| scores(params, los_model, cfg.mode, h, r).map(|s| s.1);
    let r_min = crossing(h, 1.0 - eps, upper)?;
    let r_max = crossing(h, eps, lower)?;
    Ok((r_min, r_max))
}
