//! Stochastic channel-based placement: exhaustive search of the expected
//! total coverage around an initial point.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{check_delta, tie_key_less, Algorithm, DeploymentResult};
use crate::channel::{coverage_probability, ChannelParams};
use crate::error::{Error, Result};
use crate::losmodel::LosModel;
use crate::terrain::{Point2, Point3};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScpaOptions {
    /// Side length of the square horizontal search window, in meters.
    pub window: f64,
    pub delta: f64,
    pub h_min: f64,
    pub h_max: f64,
}

impl ScpaOptions {
    pub fn new(h_min: f64, h_max: f64) -> Self {
        Self {
            window: 30.0,
            delta: 1.0,
            h_min,
            h_max,
        }
    }
}

/// Expected number of covered users for a UAV at `pos`.
pub fn expected_coverage(
    params: &ChannelParams,
    model: &LosModel,
    users: &[Point2],
    pos: Point3,
) -> Result<f64> {
    users
        .iter()
        .map(|u| {
            let r = pos.dist(u.on_ground()).max(pos.z);
            coverage_probability(params, model, pos.z, r)
        })
        .sum()
}

pub(crate) fn axis(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step + 1e-9).floor().max(0.0) as usize;
    (0..=n).map(|i| lo + i as f64 * step).collect()
}

/// Grid search around `center` (default: the mean user position).
pub fn scpa(
    users: &[Point2],
    params: &ChannelParams,
    model: &LosModel,
    center: Option<Point2>,
    opts: &ScpaOptions,
) -> Result<DeploymentResult> {
    if users.is_empty() {
        return Err(Error::domain("SCPA needs at least one user"));
    }
    check_delta(opts.delta)?;
    if !(opts.window >= opts.delta) {
        return Err(Error::config(format!(
            "search window {} is smaller than the granularity {}",
            opts.window, opts.delta
        )));
    }
    if !(opts.h_min > 0.0 && opts.h_min <= opts.h_max && opts.h_max.is_finite()) {
        return Err(Error::config(format!(
            "invalid altitude range [{}, {}]",
            opts.h_min, opts.h_max
        )));
    }
    let c = center.unwrap_or_else(|| {
        let k = users.len() as f64;
        Point2::new(
            users.iter().map(|u| u.x).sum::<f64>() / k,
            users.iter().map(|u| u.y).sum::<f64>() / k,
        )
    });
    let half = (0.5 * opts.window / opts.delta + 1e-9).floor() as i64;
    let offsets: Vec<f64> = (-half..=half).map(|i| i as f64 * opts.delta).collect();
    let heights = axis(opts.h_min, opts.h_max, opts.delta);
    let mut nodes = Vec::with_capacity(offsets.len() * offsets.len() * heights.len());
    for &z in &heights {
        for &dx in &offsets {
            for &dy in &offsets {
                nodes.push(Point3::new(c.x + dx, c.y + dy, z));
            }
        }
    }
    if nodes.is_empty() {
        return Err(Error::config("SCPA grid is empty"));
    }
    let values = nodes
        .par_iter()
        .map(|&p| expected_coverage(params, model, users, p))
        .collect::<Result<Vec<f64>>>()?;
    let mut best = 0;
    for i in 1..nodes.len() {
        if values[i] > values[best] || (values[i] == values[best] && tie_key_less(nodes[i], nodes[best])) {
            best = i;
        }
    }
    Ok(DeploymentResult::at(Algorithm::Scpa, nodes[best]))
}
