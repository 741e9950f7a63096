//! Exhaustive grid search of the true (terrain-aware) mean coverage.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::scpa::axis;
use super::{check_delta, tie_key_less, Algorithm, DeploymentResult};
use crate::channel::{conditional_coverage, ChannelParams, LinkState};
use crate::error::{Error, Result};
use crate::terrain::{Area, Point2, Point3, TerrainMap};

/// How the number of blocking buildings maps to a link state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockageMode {
    /// Any blockage means NLoS.
    #[default]
    Basic,
    /// One blocking building means NLoS, two or more kill the link.
    Multiple,
}

impl BlockageMode {
    pub fn state(self, blockages: usize) -> LinkState {
        match (self, blockages) {
            (_, 0) => LinkState::Los,
            (BlockageMode::Basic, _) | (BlockageMode::Multiple, 1) => LinkState::Nlos,
            (BlockageMode::Multiple, _) => LinkState::DeepBlocked,
        }
    }
}

impl std::str::FromStr for BlockageMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "basic" => Ok(BlockageMode::Basic),
            "multiple" => Ok(BlockageMode::Multiple),
            other => Err(Error::config(format!("unknown blockage mode `{other}`"))),
        }
    }
}

/// Candidate nodes: `region` sampled every `step` meters from its lower
/// corner, altitudes `h_min, h_min + h_step, ...` up to `h_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub region: Area,
    pub step: f64,
    pub h_min: f64,
    pub h_max: f64,
    pub h_step: f64,
}

impl GridSpec {
    fn axes(&self) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
        check_delta(self.step)?;
        check_delta(self.h_step)?;
        if !(self.h_min > 0.0 && self.h_min <= self.h_max && self.h_max.is_finite()) {
            return Err(Error::config(format!(
                "invalid altitude range [{}, {}]",
                self.h_min, self.h_max
            )));
        }
        let r = &self.region;
        Ok((
            axis(r.x_min, r.x_max, self.step),
            axis(r.y_min, r.y_max, self.step),
            axis(self.h_min, self.h_max, self.h_step),
        ))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BruteOptions {
    pub grid: GridSpec,
    pub mode: BlockageMode,
}

fn pick(best: &mut Option<(f64, Point3)>, value: f64, p: Point3) {
    match best {
        Some((v, q)) if value < *v || (value == *v && !tie_key_less(p, *q)) => {}
        _ => *best = Some((value, p)),
    }
}

fn finish(best: Option<(f64, Point3)>, k: usize) -> Result<DeploymentResult> {
    let (sum, pos) = best.ok_or_else(|| Error::config("brute-force grid is empty"))?;
    let mut r = DeploymentResult::at(Algorithm::Brute, pos);
    r.objective = Some(sum / k as f64);
    Ok(r)
}

/// Grid argmax of the summed coverage. Blockage counts come from per-column
/// clearance altitudes, so each user and column costs one terrain query.
pub fn brute_force(
    map: &TerrainMap,
    users: &[Point2],
    params: &ChannelParams,
    opts: &BruteOptions,
) -> Result<DeploymentResult> {
    if users.is_empty() {
        return Err(Error::domain("brute force needs at least one user"));
    }
    let (xs, ys, hs) = opts.grid.axes()?;
    let columns: Vec<Point2> = xs
        .iter()
        .flat_map(|&x| ys.iter().map(move |&y| Point2::new(x, y)))
        .collect();
    let per_column = columns
        .par_iter()
        .map(|&c| {
            let clearances: Vec<Vec<f64>> = users
                .iter()
                .map(|&u| {
                    let mut v = Vec::new();
                    map.clearance_altitudes(u, c, &mut v);
                    v
                })
                .collect();
            let mut best = None;
            for &z in &hs {
                let p = c.at(z);
                let mut sum = 0.0;
                for (u, cl) in users.iter().zip(&clearances) {
                    let n = cl.iter().filter(|&&h| h > z).count();
                    sum += conditional_coverage(params, opts.mode.state(n), p.dist(u.on_ground()))?;
                }
                pick(&mut best, sum, p);
            }
            Ok(best)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut best = None;
    for (v, p) in per_column.into_iter().flatten() {
        pick(&mut best, v, p);
    }
    finish(best, users.len())
}

/// Reference implementation: one blockage query per node and user.
pub fn brute_force_naive(
    map: &TerrainMap,
    users: &[Point2],
    params: &ChannelParams,
    opts: &BruteOptions,
) -> Result<DeploymentResult> {
    if users.is_empty() {
        return Err(Error::domain("brute force needs at least one user"));
    }
    let (xs, ys, hs) = opts.grid.axes()?;
    let mut best = None;
    for &x in &xs {
        for &y in &ys {
            for &z in &hs {
                let p = Point3::new(x, y, z);
                let mut sum = 0.0;
                for u in users {
                    let g = u.on_ground();
                    let state = opts.mode.state(map.blockage_count(g, p));
                    sum += conditional_coverage(params, state, p.dist(g))?;
                }
                pick(&mut best, sum, p);
            }
        }
    }
    finish(best, users.len())
}
