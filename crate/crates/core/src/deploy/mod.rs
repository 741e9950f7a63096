//! Placement algorithms and the geometric primitives they share.
//!
//! | prior LoS model | real-time search | algorithm |
//! |---|---|---|
//! | no | no | [`bia`] |
//! | yes | no | [`scpa`] |
//! | no | yes | [`mrsa`] |
//! | yes | yes | [`hda`] |
//!
//! [`brute_force`] evaluates the true objective on a grid and serves as the
//! reference.

mod bia;
mod brute;
mod circle;
mod density;
mod median;
mod pipeline;
mod scpa;
mod search;

use serde::{Deserialize, Serialize};

use crate::classify::UserClass;
use crate::terrain::Point3;

pub use bia::{bia, BiaOptions};
pub use brute::{brute_force, brute_force_naive, BlockageMode, BruteOptions, GridSpec};
pub use circle::{min_enclosing_circle, Circle};
pub use density::{DensityKind, MassDensity, DEFAULT_R_MAX, DEFAULT_R_MIN};
pub use median::fermat_weber;
pub use pipeline::{hda, mrsa, PipelineOptions};
pub use scpa::{scpa, ScpaOptions};
pub use scpa::expected_coverage;
pub use search::{frame_search, min_average_snr, two_user_search, SearchFrame, SearchOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Bia,
    Scpa,
    Mrsa,
    Hda,
    Brute,
    TwoUser,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Bia => "bia",
            Algorithm::Scpa => "scpa",
            Algorithm::Mrsa => "mrsa",
            Algorithm::Hda => "hda",
            Algorithm::Brute => "brute",
            Algorithm::TwoUser => "two_user",
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Algorithm {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bia" => Ok(Algorithm::Bia),
            "scpa" => Ok(Algorithm::Scpa),
            "mrsa" => Ok(Algorithm::Mrsa),
            "hda" => Ok(Algorithm::Hda),
            "brute" => Ok(Algorithm::Brute),
            "two_user" | "two-user" => Ok(Algorithm::TwoUser),
            other => Err(crate::Error::config(format!("unknown algorithm `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchOutcome {
    /// A position with LoS to every searched user was found.
    LosFound,
    /// The NLoS candidate at `h_min` beat the best LoS position.
    FallbackNadir,
    /// Expansion exceeded the radius cap before LoS was reached.
    AltitudeCapped,
    /// A branch gave up after a full turn without reaching the floor.
    RotationCapped,
}

/// Flight path of a real-time search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchTrajectory {
    pub waypoints: Vec<Point3>,
    pub total_length: f64,
    pub outcome: SearchOutcome,
}

impl SearchTrajectory {
    pub(crate) fn new(start: Point3) -> Self {
        Self {
            waypoints: vec![start],
            total_length: 0.0,
            outcome: SearchOutcome::LosFound,
        }
    }

    pub fn last(&self) -> Point3 {
        *self.waypoints.last().expect("trajectory has a start")
    }

    pub(crate) fn push(&mut self, p: Point3) {
        let d = self.last().dist(p);
        if d > 0.0 {
            self.total_length += d;
            self.waypoints.push(p);
        }
    }

    /// Straight flight to `to`, split into legs no longer than `step`.
    pub(crate) fn fly_to(&mut self, to: Point3, step: f64) {
        let from = self.last();
        let d = from.dist(to);
        if d == 0.0 {
            return;
        }
        let n = (d / step).ceil().max(1.0) as usize;
        for i in 1..=n {
            let t = i as f64 / n as f64;
            self.push(if i == n {
                to
            } else {
                Point3::new(
                    from.x + t * (to.x - from.x),
                    from.y + t * (to.y - from.y),
                    from.z + t * (to.z - from.z),
                )
            });
        }
    }

    /// Appends another trajectory, flying to its start first.
    pub(crate) fn extend(&mut self, other: &SearchTrajectory, step: f64) {
        self.fly_to(other.waypoints[0], step);
        for &p in &other.waypoints[1..] {
            self.push(p);
        }
        self.outcome = other.outcome;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeploymentResult {
    pub uav_position: Point3,
    pub algorithm: Algorithm,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trajectory: Option<SearchTrajectory>,
    /// Worst average SNR (linear) over the users the search served.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_achieved: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub classes: Vec<UserClass>,
    /// Mean coverage at the output, for algorithms that compute it.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub objective: Option<f64>,
}

impl DeploymentResult {
    pub(crate) fn at(algorithm: Algorithm, uav_position: Point3) -> Self {
        Self {
            uav_position,
            algorithm,
            trajectory: None,
            gamma_achieved: None,
            classes: Vec::new(),
            objective: None,
        }
    }

    pub fn search_length(&self) -> f64 {
        self.trajectory.as_ref().map_or(0.0, |t| t.total_length)
    }
}

/// Deterministic ordering key for grid ties: lower altitude first, then
/// lexicographic `(x, y)`.
pub(crate) fn tie_key_less(a: Point3, b: Point3) -> bool {
    (a.z, a.x, a.y) < (b.z, b.x, b.y)
}

pub(crate) fn check_delta(delta: f64) -> crate::Result<()> {
    if delta > 0.0 && delta.is_finite() {
        Ok(())
    } else {
        Err(crate::Error::config(format!("granularity must be > 0, got {delta}")))
    }
}
