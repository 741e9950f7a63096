//! Scenario generation, coverage evaluation and the Monte-Carlo harness.

mod campaign;

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::channel::{conditional_coverage, mean_received_power, ChannelParams};
use crate::error::{Error, Result};
use crate::rng;
use crate::terrain::{sample_buildings, Area, FootprintSpec, Point2, Point3, TerrainMap};

pub use crate::deploy::BlockageMode;
pub use campaign::{
    fit_round_model, run_algorithm, run_campaign, run_campaign_with_workers, sample_terrain,
    AlgoSettings, AlgorithmReport, CampaignConfig, CampaignReport, LengthStats, LosSource,
    RoundFailure, RoundRecord,
};

/// Random building layout parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BuildingConfig {
    /// Building centers per square meter.
    pub density: f64,
    /// Rayleigh scale of building heights, in meters.
    pub rayleigh_scale: f64,
    pub footprint: FootprintSpec,
}

impl Default for BuildingConfig {
    fn default() -> Self {
        Self {
            density: 7.5e-4,
            rayleigh_scale: 15.0,
            footprint: FootprintSpec::default(),
        }
    }
}

/// Everything needed to draw one scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    /// Side of the square area, in meters.
    pub area_side: f64,
    /// Users per square meter.
    pub user_intensity: f64,
    pub buildings: BuildingConfig,
    /// Minimum flight altitude; one meter above the tallest roof when unset.
    pub h_min: Option<f64>,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            area_side: 300.0,
            user_intensity: 10.0 / (300.0 * 300.0),
            buildings: BuildingConfig::default(),
            h_min: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub map: TerrainMap,
    pub users: Vec<Point2>,
    pub h_min: f64,
    pub seed: u64,
}

const USER_ATTEMPTS: usize = 10_000;

fn outdoor_point<R: Rng + ?Sized>(map: &TerrainMap, area: &Area, rng: &mut R) -> Result<Point2> {
    for _ in 0..USER_ATTEMPTS {
        let p = area.sample_point(rng);
        if !map.is_indoor(p) {
            return Ok(p);
        }
    }
    Err(Error::Generation(format!(
        "no outdoor point found after {USER_ATTEMPTS} draws; the area looks fully built"
    )))
}

/// Draws terrain and a Poisson user population. Terrain and users use
/// separate streams derived from `seed`.
pub fn generate_scenario(cfg: &ScenarioConfig, seed: u64) -> Result<Scenario> {
    if !(cfg.user_intensity >= 0.0 && cfg.user_intensity.is_finite()) {
        return Err(Error::config(format!(
            "user intensity must be >= 0, got {}",
            cfg.user_intensity
        )));
    }
    let area = Area::new(0.0, 0.0, cfg.area_side, cfg.area_side)?;
    let b = &cfg.buildings;
    let mut trng = rng::stream(seed, "terrain", 0);
    let map = sample_buildings(area, b.density, b.rayleigh_scale, b.footprint, &mut trng)?;
    let mut urng = rng::stream(seed, "users", 0);
    let mean = cfg.user_intensity * area.size();
    let count = if mean > 0.0 {
        Poisson::new(mean)
            .map_err(|e| Error::config(e.to_string()))?
            .sample(&mut urng) as usize
    } else {
        0
    };
    let users = (0..count)
        .map(|_| outdoor_point(&map, &area, &mut urng))
        .collect::<Result<Vec<_>>>()?;
    let h_min = match cfg.h_min {
        Some(h) if h > 0.0 && h >= map.max_height() => h,
        Some(h) => {
            return Err(Error::config(format!(
                "h_min {h} must be positive and clear the tallest building ({})",
                map.max_height()
            )))
        }
        None => map.default_h_min(),
    };
    Ok(Scenario {
        map,
        users,
        h_min,
        seed,
    })
}

/// Mean coverage over all users when every user associates with the UAV of
/// highest mean received power under its actual link state.
pub fn evaluate_deployment(
    scenario: &Scenario,
    params: &ChannelParams,
    uavs: &[Point3],
    mode: BlockageMode,
) -> Result<f64> {
    if uavs.is_empty() {
        return Err(Error::domain("no UAV to evaluate"));
    }
    if scenario.users.is_empty() {
        return Err(Error::domain("scenario has no users"));
    }
    if let Some(low) = uavs.iter().find(|p| p.z < scenario.h_min - 1e-9) {
        return Err(Error::domain(format!(
            "UAV at altitude {} is below h_min {}",
            low.z, scenario.h_min
        )));
    }
    let mut total = 0.0;
    for u in &scenario.users {
        let g = u.on_ground();
        let mut best: Option<(f64, f64)> = None;
        for &p in uavs {
            let state = mode.state(scenario.map.blockage_count(g, p));
            let r = p.dist(g);
            let power = mean_received_power(params, state, r)?;
            if best.is_none_or(|(bp, _)| power > bp) {
                best = Some((power, conditional_coverage(params, state, r)?));
            }
        }
        total += best.map_or(0.0, |(_, c)| c);
    }
    Ok(total / scenario.users.len() as f64)
}

/// Moves every user by a uniform distance in `[0, max_step]` in a uniform
/// direction. Moves that leave the area or end indoors are redrawn; a user
/// with no valid move after many draws stays put.
pub fn step_users<R: Rng + ?Sized>(scenario: &Scenario, max_step: f64, rng: &mut R) -> Scenario {
    let mut out = scenario.clone();
    if !(max_step > 0.0) {
        return out;
    }
    let area = *scenario.map.area();
    for u in &mut out.users {
        for _ in 0..1000 {
            let d = rng.random_range(0.0..=max_step);
            let phi = rng.random_range(0.0..std::f64::consts::TAU);
            let p = Point2::new(u.x + d * phi.cos(), u.y + d * phi.sin());
            if area.contains(p) && !scenario.map.is_indoor(p) {
                *u = p;
                break;
            }
        }
    }
    out
}

/// Splits `area` into `n` equal axis-aligned cells (1, 2 or 4) and assigns
/// each user index to the cell containing it. Cells are half-open on their
/// upper edges except at the area boundary.
pub fn partition_multi_uav(area: &Area, users: &[Point2], n: usize) -> Result<Vec<(Area, Vec<usize>)>> {
    let (mx, my) = (0.5 * (area.x_min + area.x_max), 0.5 * (area.y_min + area.y_max));
    let cells = match n {
        1 => vec![*area],
        2 => vec![
            Area::new(area.x_min, area.y_min, mx, area.y_max)?,
            Area::new(mx, area.y_min, area.x_max, area.y_max)?,
        ],
        4 => vec![
            Area::new(area.x_min, area.y_min, mx, my)?,
            Area::new(mx, area.y_min, area.x_max, my)?,
            Area::new(area.x_min, my, mx, area.y_max)?,
            Area::new(mx, my, area.x_max, area.y_max)?,
        ],
        other => {
            return Err(Error::config(format!(
                "unsupported UAV count {other}; use 1, 2 or 4"
            )))
        }
    };
    let index = |p: &Point2| -> usize {
        let right = usize::from(n >= 2 && p.x >= mx);
        let top = usize::from(n == 4 && p.y >= my);
        right + 2 * top
    };
    let mut out: Vec<(Area, Vec<usize>)> = cells.into_iter().map(|c| (c, Vec::new())).collect();
    for (i, u) in users.iter().enumerate() {
        out[index(u)].1.push(i);
    }
    Ok(out)
}
