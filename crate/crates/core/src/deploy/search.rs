//! Real-time search in the perpendicular bisector plane of two users.
//!
//! Positions are cylindrical `(rho, theta)` about the ground point `origin`:
//! altitude `rho * cos(theta)`, horizontal offset `rho * sin(theta)` along
//! `perp`. For a user pair, `origin` is their midpoint and `perp` is
//! orthogonal to the line through them, so every position in the plane is
//! equidistant from both users.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::{check_delta, Algorithm, DeploymentResult, SearchOutcome, SearchTrajectory};
use crate::channel::{average_snr, ChannelParams, LinkState};
use crate::error::{Error, Result};
use crate::terrain::{Point2, Point3, TerrainMap};

/// Slack for comparisons against the altitude floor.
const FLOOR_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchFrame {
    pub origin: Point2,
    /// Unit horizontal vector of positive `theta`.
    pub perp: Point2,
}

impl SearchFrame {
    /// Frame of the bisector plane between `u1` and `u2`.
    pub fn for_pair(u1: Point2, u2: Point2) -> Result<Self> {
        Self::centered(Point2::new(0.5 * (u1.x + u2.x), 0.5 * (u1.y + u2.y)), u1, u2)
    }

    /// Frame at `origin` whose plane is orthogonal to the line `u1 u2`.
    pub fn centered(origin: Point2, u1: Point2, u2: Point2) -> Result<Self> {
        let d = u1.dist(u2);
        if !(d > 0.0) {
            return Err(Error::domain("search users must be distinct"));
        }
        let (ax, ay) = ((u2.x - u1.x) / d, (u2.y - u1.y) / d);
        Ok(Self {
            origin,
            perp: Point2::new(-ay, ax),
        })
    }

    pub fn position(&self, rho: f64, theta: f64) -> Point3 {
        let s = rho * theta.sin();
        Point3::new(
            self.origin.x + s * self.perp.x,
            self.origin.y + s * self.perp.y,
            rho * theta.cos(),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchOptions {
    pub delta: f64,
    pub h_min: f64,
    /// Largest radius the expansion may reach; defaults to `4 * h_min`.
    pub rho_cap: Option<f64>,
    /// Starting radius; defaults to `h_min`.
    pub start_rho: Option<f64>,
    pub start_theta: f64,
}

impl SearchOptions {
    pub fn new(h_min: f64) -> Self {
        Self {
            delta: 1.0,
            h_min,
            rho_cap: None,
            start_rho: None,
            start_theta: 0.0,
        }
    }
}

/// Smallest average SNR over `users` for a UAV at `pos`, with each link in
/// its actual state (any blockage means NLoS).
pub fn min_average_snr(
    map: &TerrainMap,
    params: &ChannelParams,
    users: &[Point2],
    pos: Point3,
) -> Result<f64> {
    let mut worst = f64::INFINITY;
    for u in users {
        let g = u.on_ground();
        let state = if map.is_los(g, pos) { LinkState::Los } else { LinkState::Nlos };
        worst = worst.min(average_snr(params, state, pos.dist(g))?);
    }
    Ok(worst)
}

struct Searcher<'a> {
    map: &'a TerrainMap,
    frame: SearchFrame,
    users: &'a [Point2],
    delta: f64,
    h_min: f64,
    traj: SearchTrajectory,
    best: (f64, f64),
    rotation_capped: bool,
}

impl Searcher<'_> {
    fn los(&self, rho: f64, theta: f64) -> bool {
        let p = self.frame.position(rho, theta);
        self.users.iter().all(|u| self.map.is_los(u.on_ground(), p))
    }

    fn visit(&mut self, rho: f64, theta: f64) {
        self.traj.push(self.frame.position(rho, theta));
    }

    /// One descent branch: shrink `rho` while every link is clear, turn by
    /// one chord of length `delta` in direction `sign` while any is blocked.
    fn branch(&mut self, sign: f64) {
        let (mut rho, mut theta) = self.best;
        let mut turned = 0.0;
        loop {
            let z = rho * theta.cos();
            if z < self.h_min - FLOOR_TOL {
                break;
            }
            if self.los(rho, theta) {
                self.best = (rho, theta);
                if z <= self.h_min + FLOOR_TOL {
                    break;
                }
                // Land exactly on the floor instead of stepping past it.
                rho = (rho - self.delta).max(self.h_min / theta.cos());
            } else {
                let step = 2.0 * (self.delta / (2.0 * rho)).min(1.0).asin();
                theta += sign * step;
                turned += step;
                if turned > TAU {
                    self.rotation_capped = true;
                    break;
                }
            }
            self.visit(rho, theta);
        }
    }
}

/// Searches the plane of `frame` for the lowest position with LoS to every
/// user in `users`, then compares it with the NLoS position at `h_min` over
/// the origin.
pub fn frame_search(
    map: &TerrainMap,
    params: &ChannelParams,
    frame: SearchFrame,
    users: &[Point2],
    opts: &SearchOptions,
) -> Result<DeploymentResult> {
    check_delta(opts.delta)?;
    if users.is_empty() {
        return Err(Error::domain("search needs at least one user"));
    }
    let h_min = opts.h_min;
    if !(h_min > 0.0 && h_min.is_finite()) {
        return Err(Error::domain(format!("h_min must be > 0, got {h_min}")));
    }
    let theta0 = opts.start_theta;
    let mut rho = opts.start_rho.unwrap_or(h_min);
    if !(theta0.abs() < std::f64::consts::FRAC_PI_2) || rho * theta0.cos() < h_min - FLOOR_TOL {
        return Err(Error::domain(format!(
            "start (rho={rho}, theta={theta0}) lies below h_min={h_min}"
        )));
    }
    let rho_cap = opts.rho_cap.unwrap_or(4.0 * h_min);
    let mut s = Searcher {
        map,
        frame,
        users,
        delta: opts.delta,
        h_min,
        traj: SearchTrajectory::new(frame.position(rho, theta0)),
        best: (rho, theta0),
        rotation_capped: false,
    };

    while !s.los(rho, theta0) {
        rho += opts.delta;
        if rho > rho_cap {
            let out = frame.position(h_min / theta0.cos(), theta0);
            s.traj.fly_to(out, opts.delta);
            s.traj.outcome = SearchOutcome::AltitudeCapped;
            return Ok(DeploymentResult {
                uav_position: out,
                algorithm: Algorithm::TwoUser,
                gamma_achieved: Some(min_average_snr(map, params, users, out)?),
                trajectory: Some(s.traj),
                classes: Vec::new(),
                objective: None,
            });
        }
        s.visit(rho, theta0);
    }
    s.best = (rho, theta0);

    s.branch(-1.0);
    let (rb, tb) = s.best;
    s.traj.fly_to(frame.position(rb, tb), opts.delta);
    s.branch(1.0);

    let (rb, tb) = s.best;
    let los_pos = frame.position(rb, tb);
    let nadir = frame.position(h_min, 0.0);
    let los_snr = min_average_snr(map, params, users, los_pos)?;
    let nadir_snr = min_average_snr(map, params, users, nadir)?;
    let (out, gamma) = if nadir_snr > los_snr {
        s.traj.outcome = if s.los(h_min, 0.0) {
            SearchOutcome::LosFound
        } else {
            SearchOutcome::FallbackNadir
        };
        (nadir, nadir_snr)
    } else {
        s.traj.outcome = if s.rotation_capped {
            SearchOutcome::RotationCapped
        } else {
            SearchOutcome::LosFound
        };
        (los_pos, los_snr)
    };
    s.traj.fly_to(out, opts.delta);
    Ok(DeploymentResult {
        uav_position: out,
        algorithm: Algorithm::TwoUser,
        trajectory: Some(s.traj),
        gamma_achieved: Some(gamma),
        classes: Vec::new(),
        objective: None,
    })
}

/// Real-time search for two users in their bisector plane.
pub fn two_user_search(
    map: &TerrainMap,
    params: &ChannelParams,
    u1: Point2,
    u2: Point2,
    opts: &SearchOptions,
) -> Result<DeploymentResult> {
    let frame = SearchFrame::for_pair(u1, u2)?;
    frame_search(map, params, frame, &[u1, u2], opts)
}
