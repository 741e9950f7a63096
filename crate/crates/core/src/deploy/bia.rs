//! Barycenter-inspired placement: a weighted centroid iteration at fixed
//! altitude.

use serde::{Deserialize, Serialize};

use super::{check_delta, Algorithm, DeploymentResult, MassDensity};
use crate::error::{Error, Result};
use crate::terrain::{Point2, Point3};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BiaOptions {
    pub max_iter: usize,
    pub delta: f64,
}

impl Default for BiaOptions {
    fn default() -> Self {
        Self {
            max_iter: 100,
            delta: 1.0,
        }
    }
}

fn centroid(users: &[Point2]) -> Point2 {
    let k = users.len() as f64;
    Point2::new(
        users.iter().map(|u| u.x).sum::<f64>() / k,
        users.iter().map(|u| u.y).sum::<f64>() / k,
    )
}

/// Runs the iteration at altitude `md.h`. Stops after `max_iter` iterations,
/// when a step moves at most `delta`, or when every weight vanishes (the UAV
/// then holds its position).
pub fn bia(users: &[Point2], md: &MassDensity, opts: &BiaOptions) -> Result<DeploymentResult> {
    if users.is_empty() {
        return Err(Error::domain("BIA needs at least one user"));
    }
    check_delta(opts.delta)?;
    let h = md.h;
    let mut pos = centroid(users);
    let mut n = 1;
    loop {
        let mut wsum = 0.0;
        let (mut sx, mut sy) = (0.0, 0.0);
        for u in users {
            let r = ((pos.x - u.x).powi(2) + (pos.y - u.y).powi(2) + h * h).sqrt();
            let w = md.weight(r);
            wsum += w;
            sx += w * u.x;
            sy += w * u.y;
        }
        if wsum <= 0.0 {
            break;
        }
        let next = Point2::new(sx / wsum, sy / wsum);
        let moved = next.dist(pos);
        pos = next;
        n += 1;
        if n >= opts.max_iter || moved <= opts.delta {
            break;
        }
    }
    Ok(DeploymentResult::at(Algorithm::Bia, Point3::new(pos.x, pos.y, h)))
}
