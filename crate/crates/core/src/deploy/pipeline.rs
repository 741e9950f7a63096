//! Multi-user real-time search: pick a classification center, classify the
//! users, then search for a position with LoS to every probably-covered
//! (C2) user.

use serde::{Deserialize, Serialize};

use super::search::{frame_search, min_average_snr, SearchFrame, SearchOptions};
use super::{
    bia, min_enclosing_circle, scpa, Algorithm, BiaOptions, DeploymentResult, MassDensity,
    ScpaOptions, SearchTrajectory,
};
use crate::channel::ChannelParams;
use crate::classify::{classify_users, ClassificationConfig, ClassificationMode, UserClass};
use crate::error::{Error, Result};
use crate::losmodel::LosModel;
use crate::terrain::{Point2, Point3, TerrainMap};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PipelineOptions {
    pub delta: f64,
    pub h_min: f64,
    /// Expansion limit of the search; defaults to `4 * h_min`.
    pub rho_cap: Option<f64>,
    pub epsilon: f64,
}

impl PipelineOptions {
    pub fn new(h_min: f64) -> Self {
        Self {
            delta: 1.0,
            h_min,
            rho_cap: None,
            epsilon: 0.1,
        }
    }
}

fn farthest_pair(points: &[Point2]) -> (Point2, Point2) {
    let mut best = (points[0], points[0], -1.0);
    for (i, &a) in points.iter().enumerate() {
        for &b in &points[i + 1..] {
            let d = a.dist(b);
            if d > best.2 {
                best = (a, b, d);
            }
        }
    }
    (best.0, best.1)
}

fn search_stage(
    map: &TerrainMap,
    params: &ChannelParams,
    algorithm: Algorithm,
    center: Point3,
    users: &[Point2],
    classes: Vec<UserClass>,
    opts: &PipelineOptions,
) -> Result<DeploymentResult> {
    let c2: Vec<Point2> = users
        .iter()
        .zip(&classes)
        .filter(|(_, &c)| c == UserClass::C2)
        .map(|(&u, _)| u)
        .collect();
    let h_min = opts.h_min;
    let mut out = match c2.len() {
        0 | 1 => {
            let xy = c2.first().copied().unwrap_or(center.xy());
            let pos = xy.at(h_min);
            let mut r = DeploymentResult::at(algorithm, pos);
            if !c2.is_empty() {
                r.gamma_achieved = Some(min_average_snr(map, params, &c2, pos)?);
            }
            r
        }
        n => {
            let frame = if n == 2 {
                SearchFrame::for_pair(c2[0], c2[1])?
            } else {
                let (a, b) = farthest_pair(&c2);
                SearchFrame::centered(min_enclosing_circle(&c2).center, a, b)?
            };
            let search = SearchOptions {
                delta: opts.delta,
                h_min,
                rho_cap: opts.rho_cap,
                start_rho: Some(center.z.max(h_min)),
                start_theta: 0.0,
            };
            let found = frame_search(map, params, frame, &c2, &search)?;
            let mut traj = SearchTrajectory::new(center);
            traj.extend(found.trajectory.as_ref().expect("search records a path"), opts.delta);
            DeploymentResult {
                algorithm,
                trajectory: Some(traj),
                ..found
            }
        }
    };
    out.classes = classes;
    Ok(out)
}

fn check(users: &[Point2], cfg: &ClassificationConfig, mode: ClassificationMode) -> Result<()> {
    if users.is_empty() {
        return Err(Error::domain("placement needs at least one user"));
    }
    if cfg.mode != mode {
        return Err(Error::config(format!("expected {mode:?} classification, got {:?}", cfg.mode)));
    }
    Ok(())
}

/// Terrain-agnostic variant: BIA center, non-terrain classification.
pub fn mrsa(
    map: &TerrainMap,
    users: &[Point2],
    params: &ChannelParams,
    md: &MassDensity,
    bia_opts: &BiaOptions,
    opts: &PipelineOptions,
) -> Result<DeploymentResult> {
    let cfg = ClassificationConfig::non_terrain(opts.epsilon)?;
    check(users, &cfg, ClassificationMode::NonTerrain)?;
    let center = bia(users, md, bia_opts)?.uav_position;
    // The LoS model is unused in non-terrain mode.
    let classes = classify_users(params, &LosModel::always_los(), &cfg, center, users)?;
    search_stage(map, params, Algorithm::Mrsa, center, users, classes, opts)
}

/// LoS-model-aware variant: SCPA center, terrain classification.
pub fn hda(
    map: &TerrainMap,
    users: &[Point2],
    params: &ChannelParams,
    model: &LosModel,
    scpa_opts: &ScpaOptions,
    opts: &PipelineOptions,
) -> Result<DeploymentResult> {
    let cfg = ClassificationConfig::terrain(opts.epsilon)?;
    check(users, &cfg, ClassificationMode::Terrain)?;
    let center = scpa(users, params, model, None, scpa_opts)?.uav_position;
    let classes = classify_users(params, model, &cfg, center, users)?;
    search_stage(map, params, Algorithm::Hda, center, users, classes, opts)
}
