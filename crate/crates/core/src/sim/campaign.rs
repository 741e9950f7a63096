//! Monte-Carlo campaigns: fresh scenario per round, every configured
//! algorithm on the same scenario, coverage and search-length statistics.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{evaluate_deployment, generate_scenario, partition_multi_uav, outdoor_point, BlockageMode, Scenario, ScenarioConfig};
use crate::channel::{ChannelConfig, ChannelParams};
use crate::classify::UserClass;
use crate::deploy::{
    bia, brute_force, hda, mrsa, scpa, two_user_search, Algorithm, BiaOptions, BruteOptions,
    DeploymentResult, DensityKind, GridSpec, MassDensity, PipelineOptions, ScpaOptions,
    SearchOptions, DEFAULT_R_MAX, DEFAULT_R_MIN,
};
use crate::error::{Error, Result};
use crate::losmodel::{collect_samples, default_thetas, fit, ElevationSample, FitOptions, LosFamily, LosModel, EMPIRICAL_SUBURBAN};
use crate::rng;
use crate::terrain::{Area, Point2, TerrainMap};

/// Knobs shared by every placement algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AlgoSettings {
    /// Search and grid granularity in meters.
    pub delta: f64,
    /// Highest altitude considered by the grid searches.
    pub h_max: f64,
    /// Classification degree.
    pub epsilon: f64,
    pub density: DensityKind,
    /// BIA flight altitude; raised to `h_min` when lower.
    pub bia_h: f64,
    pub r_min: f64,
    pub r_max: f64,
    pub bia_max_iter: usize,
    /// Side of the SCPA search window.
    pub scpa_window: f64,
    /// Expansion limit of the real-time search (default `4 * h_min`).
    pub rho_cap: Option<f64>,
    /// Horizontal and vertical spacing of the brute-force grid.
    pub brute_step: f64,
    pub brute_h_step: f64,
}

impl Default for AlgoSettings {
    fn default() -> Self {
        Self {
            delta: 1.0,
            h_max: 120.0,
            epsilon: 0.1,
            density: DensityKind::Triangular,
            bia_h: 20.0,
            r_min: DEFAULT_R_MIN,
            r_max: DEFAULT_R_MAX,
            bia_max_iter: 100,
            scpa_window: 30.0,
            rho_cap: None,
            brute_step: 1.0,
            brute_h_step: 1.0,
        }
    }
}

/// Where the LoS-probability model used by SCPA and HDA comes from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum LosSource {
    /// Fit a sigmoid to samples flown over each round's terrain.
    Fit { per_theta: u32 },
    /// The published suburban parameters.
    Empirical,
    Fixed { family: LosFamily, a: f64, b: f64 },
}

impl Default for LosSource {
    fn default() -> Self {
        LosSource::Fit { per_theta: 100 }
    }
}

/// Collects LoS samples over the scenario's terrain around 30 random
/// outdoor points, at altitudes `h_min..h_min + 10`. Elevations run from 5 to
/// 85 degrees, skipping angles whose ground offset at `h_min` exceeds 40% of
/// the area side.
pub fn sample_terrain(
    map: &TerrainMap,
    h_min: f64,
    per_theta: u32,
    seed: u64,
) -> Result<Vec<ElevationSample>> {
    let mut r = rng::stream(seed, "los", 0);
    let area = *map.area();
    let anchors = (0..30)
        .map(|_| outdoor_point(map, &area, &mut r))
        .collect::<Result<Vec<_>>>()?;
    let reach = 0.4 * area.width().min(area.height());
    let thetas: Vec<f64> = default_thetas()
        .into_iter()
        .filter(|t| h_min / t.to_radians().tan() <= reach)
        .collect();
    if thetas.len() < 3 {
        return Err(Error::Sampling(format!(
            "h_min {h_min} leaves fewer than 3 usable elevation angles"
        )));
    }
    collect_samples(map, &anchors, (h_min, h_min + 10.0), &thetas, per_theta, &mut r)
}

/// Regularized sigmoid fit to [`sample_terrain`] output.
pub fn fit_round_model(scenario: &Scenario, per_theta: u32, seed: u64) -> Result<LosModel> {
    let samples = sample_terrain(&scenario.map, scenario.h_min, per_theta, seed)?;
    Ok(fit(&samples, LosFamily::Sigmoid, &FitOptions::regularized(LosFamily::Sigmoid))?.model)
}

fn los_model(source: LosSource, scenario: &Scenario, seed: u64) -> Result<LosModel> {
    match source {
        LosSource::Fit { per_theta } => fit_round_model(scenario, per_theta, seed),
        LosSource::Empirical => Ok(EMPIRICAL_SUBURBAN),
        LosSource::Fixed { family, a, b } => LosModel::new(family, a, b),
    }
}

/// Runs one algorithm for the users listed in `subset`, searching inside
/// `region` where the algorithm uses a region. An empty subset hovers at
/// `h_min` over the region center.
pub fn run_algorithm(
    alg: Algorithm,
    scenario: &Scenario,
    params: &ChannelParams,
    model: &LosModel,
    region: &Area,
    subset: &[usize],
    settings: &AlgoSettings,
    mode: BlockageMode,
) -> Result<DeploymentResult> {
    let users: Vec<Point2> = subset.iter().map(|&i| scenario.users[i]).collect();
    let h_min = scenario.h_min;
    let h_max = settings.h_max.max(h_min);
    if users.is_empty() {
        return Ok(DeploymentResult {
            uav_position: region.center().at(h_min),
            algorithm: alg,
            trajectory: None,
            gamma_achieved: None,
            classes: Vec::new(),
            objective: None,
        });
    }
    let md = || {
        MassDensity::new(settings.density, settings.r_min, settings.r_max, settings.bia_h.max(h_min))
    };
    let bia_opts = BiaOptions {
        max_iter: settings.bia_max_iter,
        delta: settings.delta,
    };
    let scpa_opts = ScpaOptions {
        window: settings.scpa_window,
        delta: settings.delta,
        h_min,
        h_max,
    };
    let pipe = PipelineOptions {
        delta: settings.delta,
        h_min,
        rho_cap: settings.rho_cap,
        epsilon: settings.epsilon,
    };
    match alg {
        Algorithm::Bia => bia(&users, &md()?, &bia_opts),
        Algorithm::Scpa => scpa(&users, params, model, None, &scpa_opts),
        Algorithm::Mrsa => mrsa(&scenario.map, &users, params, &md()?, &bia_opts, &pipe),
        Algorithm::Hda => hda(&scenario.map, &users, params, model, &scpa_opts, &pipe),
        Algorithm::Brute => brute_force(
            &scenario.map,
            &users,
            params,
            &BruteOptions {
                grid: GridSpec {
                    region: *region,
                    step: settings.brute_step,
                    h_min,
                    h_max,
                    h_step: settings.brute_h_step,
                },
                mode,
            },
        ),
        Algorithm::TwoUser => {
            let [u1, u2] = users[..] else {
                return Err(Error::config(format!(
                    "two-user search needs exactly 2 users, got {}",
                    users.len()
                )));
            };
            let opts = SearchOptions {
                delta: settings.delta,
                rho_cap: settings.rho_cap,
                ..SearchOptions::new(h_min)
            };
            two_user_search(&scenario.map, params, u1, u2, &opts)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CampaignConfig {
    pub rounds: usize,
    pub seed: u64,
    pub scenario: ScenarioConfig,
    pub channel: ChannelConfig,
    pub algorithms: Vec<Algorithm>,
    pub settings: AlgoSettings,
    pub blockage_mode: BlockageMode,
    pub n_uavs: usize,
    pub los: LosSource,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        Self {
            rounds: 1000,
            seed: 1,
            scenario: ScenarioConfig::default(),
            channel: ChannelConfig::default(),
            algorithms: vec![
                Algorithm::Bia,
                Algorithm::Scpa,
                Algorithm::Mrsa,
                Algorithm::Hda,
                Algorithm::Brute,
            ],
            settings: AlgoSettings {
                brute_step: 3.0,
                brute_h_step: 3.0,
                ..AlgoSettings::default()
            },
            blockage_mode: BlockageMode::Basic,
            n_uavs: 1,
            los: LosSource::default(),
        }
    }
}

/// Outcome of one algorithm in one round.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub round: usize,
    pub users: usize,
    pub coverage: f64,
    /// Summed trajectory length over all UAVs.
    pub search_length: f64,
    /// Number of C2 users, for classifying algorithms.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c2_count: Option<usize>,
    /// Distance between the two farthest C2 users, when a search ran.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pair_distance: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LengthStats {
    pub mean: f64,
    /// Boundary of the shortest 20% of trajectories.
    pub shortest_20: f64,
    /// Boundary of the longest 20% of trajectories.
    pub longest_20: f64,
}

impl LengthStats {
    pub fn from_lengths(lengths: &[f64]) -> Self {
        if lengths.is_empty() {
            return Self {
                mean: 0.0,
                shortest_20: 0.0,
                longest_20: 0.0,
            };
        }
        let mut v = lengths.to_vec();
        v.sort_by(f64::total_cmp);
        let n = v.len();
        let rank = |q: f64| v[((q * n as f64).ceil() as usize).clamp(1, n) - 1];
        Self {
            mean: v.iter().sum::<f64>() / n as f64,
            shortest_20: rank(0.2),
            longest_20: rank(0.8),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmReport {
    pub algorithm: Algorithm,
    pub mean_coverage: f64,
    /// `(coverage, cumulative fraction)` over sorted round coverages.
    pub cdf: Vec<(f64, f64)>,
    pub search_length: LengthStats,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_c2: Option<f64>,
    pub rounds: Vec<RoundRecord>,
}

impl AlgorithmReport {
    pub fn coverages(&self) -> Vec<f64> {
        self.rounds.iter().map(|r| r.coverage).collect()
    }

    pub fn lengths(&self) -> Vec<f64> {
        self.rounds.iter().map(|r| r.search_length).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundFailure {
    pub round: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub seed: u64,
    pub rounds_requested: usize,
    pub rounds_completed: usize,
    pub failures: Vec<RoundFailure>,
    pub algorithms: Vec<AlgorithmReport>,
}

impl CampaignReport {
    pub fn get(&self, alg: Algorithm) -> Option<&AlgorithmReport> {
        self.algorithms.iter().find(|a| a.algorithm == alg)
    }
}

fn farthest_c2_distance(users: &[Point2], subset: &[usize], classes: &[UserClass]) -> Option<f64> {
    let c2: Vec<Point2> = subset
        .iter()
        .zip(classes)
        .filter(|(_, &c)| c == UserClass::C2)
        .map(|(&i, _)| users[i])
        .collect();
    if c2.len() < 2 {
        return None;
    }
    let mut best: f64 = 0.0;
    for (i, a) in c2.iter().enumerate() {
        for b in &c2[i + 1..] {
            best = best.max(a.dist(*b));
        }
    }
    Some(best)
}

fn run_round(cfg: &CampaignConfig, params: &ChannelParams, round: usize) -> Result<Vec<RoundRecord>> {
    let seed = rng::derive_seed(cfg.seed, "round", round as u64);
    let scenario = generate_scenario(&cfg.scenario, seed)?;
    if scenario.users.is_empty() {
        return Err(Error::Generation("round drew no users".into()));
    }
    let needs_model = cfg.algorithms.iter().any(|a| matches!(a, Algorithm::Scpa | Algorithm::Hda));
    let model = if needs_model {
        los_model(cfg.los, &scenario, seed)?
    } else {
        EMPIRICAL_SUBURBAN
    };
    let cells = partition_multi_uav(scenario.map.area(), &scenario.users, cfg.n_uavs)?;
    cfg.algorithms
        .iter()
        .map(|&alg| {
            let mut uavs = Vec::with_capacity(cells.len());
            let mut length = 0.0;
            let mut c2: Option<usize> = None;
            let mut pair = None;
            for (region, subset) in &cells {
                let res = run_algorithm(alg, &scenario, params, &model, region, subset, &cfg.settings, cfg.blockage_mode)
                    .map_err(|e| Error::Generation(format!("{alg}: {e}")))?;
                uavs.push(res.uav_position);
                length += res.search_length();
                if !res.classes.is_empty() {
                    let n = res.classes.iter().filter(|&&c| c == UserClass::C2).count();
                    *c2.get_or_insert(0) += n;
                    if cells.len() == 1 {
                        pair = farthest_c2_distance(&scenario.users, subset, &res.classes);
                    }
                } else if matches!(alg, Algorithm::Mrsa | Algorithm::Hda) {
                    c2.get_or_insert(0);
                }
            }
            let coverage = evaluate_deployment(&scenario, params, &uavs, cfg.blockage_mode)?;
            Ok(RoundRecord {
                round,
                users: scenario.users.len(),
                coverage,
                search_length: length,
                c2_count: c2,
                pair_distance: pair,
            })
        })
        .collect()
}

fn validate(cfg: &CampaignConfig) -> Result<ChannelParams> {
    if cfg.rounds == 0 {
        return Err(Error::config("rounds must be >= 1"));
    }
    if cfg.algorithms.is_empty() {
        return Err(Error::config("no algorithms configured"));
    }
    if !matches!(cfg.n_uavs, 1 | 2 | 4) {
        return Err(Error::config(format!("unsupported UAV count {}; use 1, 2 or 4", cfg.n_uavs)));
    }
    cfg.channel.to_params()
}

/// Runs the campaign on the global thread pool.
pub fn run_campaign(cfg: &CampaignConfig) -> Result<CampaignReport> {
    let params = validate(cfg)?;
    let results: Vec<Result<Vec<RoundRecord>>> = (0..cfg.rounds)
        .into_par_iter()
        .map(|i| run_round(cfg, &params, i))
        .collect();
    Ok(assemble(cfg, results))
}

/// Runs the campaign on a dedicated pool of `workers` threads.
pub fn run_campaign_with_workers(cfg: &CampaignConfig, workers: usize) -> Result<CampaignReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::config(format!("cannot start worker pool: {e}")))?;
    pool.install(|| run_campaign(cfg))
}

fn assemble(cfg: &CampaignConfig, results: Vec<Result<Vec<RoundRecord>>>) -> CampaignReport {
    let mut failures = Vec::new();
    let mut per_alg: Vec<Vec<RoundRecord>> = vec![Vec::new(); cfg.algorithms.len()];
    for (round, r) in results.into_iter().enumerate() {
        match r {
            Ok(records) => {
                for (slot, rec) in per_alg.iter_mut().zip(records) {
                    slot.push(rec);
                }
            }
            Err(e) => failures.push(RoundFailure {
                round,
                message: e.to_string(),
            }),
        }
    }
    let completed = per_alg.first().map_or(0, Vec::len);
    let algorithms = cfg
        .algorithms
        .iter()
        .zip(per_alg)
        .map(|(&algorithm, rounds)| {
            let mut cov: Vec<f64> = rounds.iter().map(|r| r.coverage).collect();
            let n = cov.len();
            let mean_coverage = if n == 0 { 0.0 } else { cov.iter().sum::<f64>() / n as f64 };
            cov.sort_by(f64::total_cmp);
            let cdf = cov
                .iter()
                .enumerate()
                .map(|(i, &c)| (c, (i + 1) as f64 / n as f64))
                .collect();
            let lengths: Vec<f64> = rounds.iter().map(|r| r.search_length).collect();
            let c2: Vec<usize> = rounds.iter().filter_map(|r| r.c2_count).collect();
            let mean_c2 = (!c2.is_empty()).then(|| c2.iter().sum::<usize>() as f64 / c2.len() as f64);
            AlgorithmReport {
                algorithm,
                mean_coverage,
                cdf,
                search_length: LengthStats::from_lengths(&lengths),
                mean_c2,
                rounds,
            }
        })
        .collect();
    CampaignReport {
        seed: cfg.seed,
        rounds_requested: cfg.rounds,
        rounds_completed: completed,
        failures,
        algorithms,
    }
}
