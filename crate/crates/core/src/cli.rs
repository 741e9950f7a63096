//! Command-line front end of the `uav-terrain` binary.
//!
//! Exit codes: 0 on success, 2 for usage and configuration errors, 3 for
//! runtime failures.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::classify::{class_boundaries, classify_users, Boundary, ClassificationConfig, ClassificationMode, UserClass};
use crate::config::RunConfig;
use crate::deploy::{Algorithm, BlockageMode, DeploymentResult, DensityKind};
use crate::error::{Error, Result};
use crate::losmodel::{
    fit, mse, read_samples_csv, smooth, write_samples_csv, FitOptions, FitResult, LosFamily, LosModel,
    EMPIRICAL_SUBURBAN,
};
use crate::sim::{
    evaluate_deployment, fit_round_model, generate_scenario, run_algorithm, run_campaign_with_workers,
    sample_terrain, CampaignReport, LosSource, Scenario,
};
use crate::terrain::{Point2, Point3, TerrainMap};

#[derive(Debug, Parser)]
#[command(name = "uav-terrain", version, about = "Terrain-aware UAV base-station placement")]
pub struct Cli {
    /// Output directory (default: `output_dir` from the config, else `.`).
    #[arg(long, global = true, env = "UAV_TERRAIN_OUT")]
    pub out_dir: Option<PathBuf>,
    /// TOML or JSON run configuration; see `simulate --help` for the keys.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Root seed (overrides the config).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw a random terrain and user population.
    GenTerrain(GenTerrainArgs),
    /// Collect LoS samples over a terrain (or read them) and fit the model.
    FitLos(FitLosArgs),
    /// Classify users around a UAV position.
    Classify(ClassifyArgs),
    /// Place one UAV with a chosen algorithm.
    Deploy(DeployArgs),
    /// Run a Monte-Carlo campaign.
    Simulate(SimulateArgs),
    /// Run one campaign per value of a parameter.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct GenTerrainArgs {
    /// Side of the square area in meters.
    #[arg(long)]
    pub side: Option<f64>,
    /// Building centers per square meter.
    #[arg(long)]
    pub density: Option<f64>,
    /// Rayleigh scale of building heights in meters.
    #[arg(long)]
    pub rayleigh_scale: Option<f64>,
    /// Users per square meter.
    #[arg(long)]
    pub user_intensity: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Sigmoid,
    Tanh,
    Relu,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RegularizationArg {
    /// lambda1 = lambda2 = 0.01
    Standard,
    /// lambda1 = 0.001, lambda2 = 0.1
    Skewed,
    None,
}

#[derive(Debug, Args)]
pub struct FitLosArgs {
    /// Terrain JSON to fly over (default: generate one from the config).
    #[arg(long, conflicts_with = "samples")]
    pub terrain: Option<PathBuf>,
    /// Existing `theta_deg,t,n` sample CSV instead of flying.
    #[arg(long)]
    pub samples: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "all")]
    pub family: FamilyArg,
    #[arg(long, value_enum, default_value = "standard")]
    pub regularization: RegularizationArg,
    /// Samples per elevation angle.
    #[arg(long, default_value_t = 200)]
    pub per_theta: u32,
    /// Smooth the LoS fractions before fitting.
    #[arg(long)]
    pub smooth: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    NonTerrain,
    Terrain,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    /// Users JSON as written by `gen-terrain` (default: generate).
    #[arg(long)]
    pub users: Option<PathBuf>,
    /// UAV position `x,y,z` (default: user centroid at 20 m).
    #[arg(long, value_parser = parse_point3)]
    pub center: Option<Point3>,
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    #[arg(long, value_enum, default_value = "non-terrain")]
    pub mode: ModeArg,
    /// Sigmoid LoS parameter `a` for terrain mode.
    #[arg(long, default_value_t = EMPIRICAL_SUBURBAN.a)]
    pub los_a: f64,
    /// Sigmoid LoS parameter `b` for terrain mode.
    #[arg(long, default_value_t = EMPIRICAL_SUBURBAN.b)]
    pub los_b: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgoArg {
    Bia,
    Scpa,
    Mrsa,
    Hda,
    Brute,
}

impl From<AlgoArg> for Algorithm {
    fn from(a: AlgoArg) -> Self {
        match a {
            AlgoArg::Bia => Algorithm::Bia,
            AlgoArg::Scpa => Algorithm::Scpa,
            AlgoArg::Mrsa => Algorithm::Mrsa,
            AlgoArg::Hda => Algorithm::Hda,
            AlgoArg::Brute => Algorithm::Brute,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DensityArg {
    Uniform,
    Asc,
    Desc,
    Tri,
}

impl From<DensityArg> for DensityKind {
    fn from(d: DensityArg) -> Self {
        match d {
            DensityArg::Uniform => DensityKind::Uniform,
            DensityArg::Asc => DensityKind::AscendingTrapezoid,
            DensityArg::Desc => DensityKind::DescendingTrapezoid,
            DensityArg::Tri => DensityKind::Triangular,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LosArg {
    /// Fit a sigmoid to samples flown over the terrain.
    Fit,
    /// Published suburban parameters (a = 4.88, b = 0.43).
    Empirical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BlockageArg {
    Basic,
    Multiple,
}

impl From<BlockageArg> for BlockageMode {
    fn from(b: BlockageArg) -> Self {
        match b {
            BlockageArg::Basic => BlockageMode::Basic,
            BlockageArg::Multiple => BlockageMode::Multiple,
        }
    }
}

#[derive(Debug, Args)]
pub struct DeployArgs {
    #[arg(long, value_enum)]
    pub algo: AlgoArg,
    /// Terrain JSON (default: generate a scenario from the config).
    #[arg(long, requires = "users")]
    pub terrain: Option<PathBuf>,
    /// Users JSON.
    #[arg(long, requires = "terrain")]
    pub users: Option<PathBuf>,
    /// BIA mass density.
    #[arg(long, value_enum)]
    pub density: Option<DensityArg>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Granularity in meters.
    #[arg(long)]
    pub delta: Option<f64>,
    /// BIA altitude in meters.
    #[arg(long)]
    pub h: Option<f64>,
    /// Minimum altitude (default: one meter above the tallest building).
    #[arg(long)]
    pub h_min: Option<f64>,
    #[arg(long)]
    pub h_max: Option<f64>,
    /// Brute-force grid spacing (horizontal and vertical).
    #[arg(long)]
    pub brute_step: Option<f64>,
    #[arg(long, value_enum, default_value = "fit")]
    pub los: LosArg,
}

#[derive(Debug, Args)]
pub struct CampaignArgs {
    #[arg(long)]
    pub rounds: Option<usize>,
    /// Comma-separated algorithms.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub algo: Vec<AlgoArg>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long)]
    pub n_uavs: Option<usize>,
    #[arg(long, value_enum)]
    pub blockage_mode: Option<BlockageArg>,
    #[arg(long, value_enum)]
    pub los: Option<LosArg>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub campaign: CampaignArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepParam {
    Epsilon,
    BiaH,
    Density,
    NUavs,
    BlockageMode,
    BuildingDensity,
    RayleighScale,
    HMax,
    Delta,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub param: SweepParam,
    /// Comma-separated values.
    #[arg(long, value_delimiter = ',', required = true)]
    pub values: Vec<String>,
    #[command(flatten)]
    pub campaign: CampaignArgs,
}

fn parse_point3(s: &str) -> std::result::Result<Point3, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}")))
        .collect::<std::result::Result<_, _>>()?;
    match v[..] {
        [x, y, z] => Ok(Point3::new(x, y, z)),
        _ => Err(format!("expected x,y,z, got `{s}`")),
    }
}

/// Users file written by `gen-terrain`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UsersFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h_min: Option<f64>,
    pub users: Vec<Point2>,
}

impl UsersFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let de = &mut serde_json::Deserializer::from_str(&text);
        serde_path_to_error::deserialize(de).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            message: format!("at `{}`: {}", e.path(), e.inner()),
        })
    }
}

/// The clap command, with the configuration keys appended to the help of
/// the campaign subcommands.
pub fn command() -> clap::Command {
    let keys = format!(
        "Configuration keys (TOML shown; JSON uses the same names) and defaults:\n\n{}",
        RunConfig::default_toml()
    );
    Cli::command()
        .mut_subcommand("simulate", |c| c.after_long_help(keys.clone()))
        .mut_subcommand("sweep", |c| c.after_long_help(keys.clone()))
}

/// Parses the process arguments, runs the subcommand and returns the exit
/// code.
pub fn main() -> i32 {
    let cli = match command()
        .try_get_matches()
        .and_then(|m| Cli::from_arg_matches(&m))
    {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(&cli) {
        Ok(summary) => {
            print!("{summary}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::Parse { .. } | Error::Io { .. } | Error::InvalidTerrain(_) => 2,
        Error::Domain(_) | Error::Generation(_) | Error::Sampling(_) => 3,
    }
}

struct Ctx {
    cfg: RunConfig,
    out: PathBuf,
}

impl Ctx {
    fn new(cli: &Cli) -> Result<Self> {
        let mut cfg = match &cli.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        if let Some(s) = cli.seed {
            cfg.seed = s;
        }
        let out = cli
            .out_dir
            .clone()
            .or_else(|| cfg.output_dir.clone())
            .unwrap_or_else(|| PathBuf::from("."));
        fs::create_dir_all(&out).map_err(|e| Error::io(&out, e))?;
        Ok(Self { cfg, out })
    }

    fn write(&self, name: &str, contents: &str) -> Result<PathBuf> {
        let path = self.out.join(name);
        fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
        Ok(path)
    }

    fn write_json<T: Serialize>(&self, name: &str, value: &T) -> Result<PathBuf> {
        let text = serde_json::to_string_pretty(value).expect("output serializes");
        self.write(name, &(text + "\n"))
    }

    fn scenario(&self) -> Result<Scenario> {
        generate_scenario(&self.cfg.scenario, self.cfg.seed)
    }
}

/// Runs a parsed command line; returns the human-readable summary.
pub fn run(cli: &Cli) -> Result<String> {
    let ctx = Ctx::new(cli)?;
    match &cli.command {
        Command::GenTerrain(a) => gen_terrain(ctx, a),
        Command::FitLos(a) => fit_los(&ctx, a),
        Command::Classify(a) => classify(&ctx, a),
        Command::Deploy(a) => deploy(ctx, a),
        Command::Simulate(a) => simulate(ctx, a),
        Command::Sweep(a) => sweep(ctx, a),
    }
}

fn gen_terrain(mut ctx: Ctx, a: &GenTerrainArgs) -> Result<String> {
    let sc = &mut ctx.cfg.scenario;
    if let Some(v) = a.side {
        sc.area_side = v;
    }
    if let Some(v) = a.density {
        sc.buildings.density = v;
    }
    if let Some(v) = a.rayleigh_scale {
        sc.buildings.rayleigh_scale = v;
    }
    if let Some(v) = a.user_intensity {
        sc.user_intensity = v;
    }
    let s = ctx.scenario()?;
    let t = ctx.write("terrain.json", &(s.map.to_json() + "\n"))?;
    let u = ctx.write_json(
        "users.json",
        &UsersFile {
            seed: Some(s.seed),
            h_min: Some(s.h_min),
            users: s.users.clone(),
        },
    )?;
    Ok(format!(
        "seed {}: {} buildings (tallest {:.2} m, h_min {:.2} m), {} users\nwrote {}\nwrote {}\n",
        s.seed,
        s.map.buildings().len(),
        s.map.max_height(),
        s.h_min,
        s.users.len(),
        t.display(),
        u.display()
    ))
}

#[derive(Serialize)]
struct FitRecord {
    family: LosFamily,
    #[serde(flatten)]
    result: FitResult,
}

#[derive(Serialize)]
struct FitReport {
    seed: u64,
    source: String,
    samples: usize,
    regularization: String,
    smoothed: bool,
    empirical_mse: f64,
    fits: Vec<FitRecord>,
}

fn fit_los(ctx: &Ctx, a: &FitLosArgs) -> Result<String> {
    let seed = ctx.cfg.seed;
    let (mut samples, source) = if let Some(p) = &a.samples {
        let f = fs::File::open(p).map_err(|e| Error::io(p, e))?;
        (read_samples_csv(f)?, p.display().to_string())
    } else {
        let (map, source) = match &a.terrain {
            Some(p) => (TerrainMap::load(p)?, p.display().to_string()),
            None => (ctx.scenario()?.map, format!("generated terrain, seed {seed}")),
        };
        let s = sample_terrain(&map, map.default_h_min(), a.per_theta, seed)?;
        let mut buf = Vec::new();
        write_samples_csv(&mut buf, &s)?;
        ctx.write("samples.csv", &String::from_utf8(buf).expect("csv is utf-8"))?;
        (s, source)
    };
    if a.smooth {
        samples = smooth(&samples);
    }
    let families: Vec<LosFamily> = match a.family {
        FamilyArg::Sigmoid => vec![LosFamily::Sigmoid],
        FamilyArg::Tanh => vec![LosFamily::Tanh],
        FamilyArg::Relu => vec![LosFamily::Relu],
        FamilyArg::All => vec![LosFamily::Sigmoid, LosFamily::Tanh, LosFamily::Relu],
    };
    let fits = families
        .into_iter()
        .map(|family| {
            let opts = match a.regularization {
                RegularizationArg::Standard => FitOptions::regularized(family),
                RegularizationArg::Skewed => FitOptions::regularized_skewed(family),
                RegularizationArg::None => FitOptions::unregularized(family),
            };
            Ok(FitRecord {
                family,
                result: fit(&samples, family, &opts)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let report = FitReport {
        seed,
        source,
        samples: samples.len(),
        regularization: format!("{:?}", a.regularization).to_lowercase(),
        smoothed: a.smooth,
        empirical_mse: mse(&EMPIRICAL_SUBURBAN, &samples),
        fits,
    };
    let path = ctx.write_json("fit.json", &report)?;
    let mut out = format!("{} samples from {}\n", report.samples, report.source);
    let _ = writeln!(out, "empirical (4.88, 0.43): mse {:.6}", report.empirical_mse);
    for f in &report.fits {
        let _ = writeln!(
            out,
            "{:?}: a = {:.4}, b = {:.4}, mse {:.6}, converged {}",
            f.family, f.result.model.a, f.result.model.b, f.result.mse, f.result.converged
        );
    }
    let _ = writeln!(out, "wrote {}", path.display());
    Ok(out)
}

fn load_users(ctx: &Ctx, path: Option<&PathBuf>) -> Result<(Vec<Point2>, Option<f64>)> {
    match path {
        Some(p) => {
            let f = UsersFile::load(p)?;
            Ok((f.users, f.h_min))
        }
        None => {
            let s = ctx.scenario()?;
            Ok((s.users, Some(s.h_min)))
        }
    }
}

#[derive(Serialize)]
struct ClassifiedUser {
    position: Point2,
    distance: f64,
    class: UserClass,
}

#[derive(Serialize)]
struct ClassifyReport {
    seed: u64,
    center: Point3,
    epsilon: f64,
    mode: ClassificationMode,
    los_model: LosModel,
    r_min: Boundary,
    r_max: Boundary,
    counts: [usize; 3],
    users: Vec<ClassifiedUser>,
}

fn classify(ctx: &Ctx, a: &ClassifyArgs) -> Result<String> {
    let (users, _) = load_users(ctx, a.users.as_ref())?;
    if users.is_empty() {
        return Err(Error::domain("no users to classify"));
    }
    let params = ctx.cfg.channel.to_params()?;
    let mode = match a.mode {
        ModeArg::NonTerrain => ClassificationMode::NonTerrain,
        ModeArg::Terrain => ClassificationMode::Terrain,
    };
    let cfg = ClassificationConfig::new(a.epsilon, mode)?;
    let model = LosModel::new(LosFamily::Sigmoid, a.los_a, a.los_b)?;
    let center = a.center.unwrap_or_else(|| {
        let k = users.len() as f64;
        Point3::new(
            users.iter().map(|u| u.x).sum::<f64>() / k,
            users.iter().map(|u| u.y).sum::<f64>() / k,
            20.0,
        )
    });
    let classes = classify_users(&params, &model, &cfg, center, &users)?;
    let (r_min, r_max) = class_boundaries(&params, &model, &cfg, center.z)?;
    let mut counts = [0; 3];
    for c in &classes {
        counts[*c as usize] += 1;
    }
    let report = ClassifyReport {
        seed: ctx.cfg.seed,
        center,
        epsilon: a.epsilon,
        mode,
        los_model: model,
        r_min,
        r_max,
        counts,
        users: users
            .iter()
            .zip(&classes)
            .map(|(&u, &class)| ClassifiedUser {
                position: u,
                distance: center.dist(u.on_ground()),
                class,
            })
            .collect(),
    };
    let path = ctx.write_json("classes.json", &report)?;
    Ok(format!(
        "C1 {}, C2 {}, C3 {} (boundaries {} / {} m)\nwrote {}\n",
        counts[0],
        counts[1],
        counts[2],
        fmt_boundary(r_min),
        fmt_boundary(r_max),
        path.display()
    ))
}

fn fmt_boundary(b: Boundary) -> String {
    match b {
        Boundary::At(r) => format!("{r:.1}"),
        Boundary::Unbounded => "unbounded".into(),
    }
}

#[derive(Serialize)]
struct DeployReport {
    seed: u64,
    h_min: f64,
    los_model: LosModel,
    coverage_basic: f64,
    coverage_multiple: f64,
    result: DeploymentResult,
}

fn deploy(mut ctx: Ctx, a: &DeployArgs) -> Result<String> {
    let s = &mut ctx.cfg.settings;
    if let Some(d) = a.density {
        s.density = d.into();
    }
    if let Some(v) = a.epsilon {
        s.epsilon = v;
    }
    if let Some(v) = a.delta {
        s.delta = v;
    }
    if let Some(v) = a.h {
        s.bia_h = v;
    }
    if let Some(v) = a.h_max {
        s.h_max = v;
    }
    if let Some(v) = a.brute_step {
        s.brute_step = v;
        s.brute_h_step = v;
    }
    let seed = ctx.cfg.seed;
    let mut scenario = match (&a.terrain, &a.users) {
        (Some(t), Some(u)) => {
            let map = TerrainMap::load(t)?;
            let f = UsersFile::load(u)?;
            let h_min = f.h_min.unwrap_or_else(|| map.default_h_min());
            Scenario {
                map,
                users: f.users,
                h_min,
                seed,
            }
        }
        _ => ctx.scenario()?,
    };
    if let Some(h) = a.h_min {
        scenario.h_min = h;
    }
    if scenario.h_min < scenario.map.max_height() || scenario.h_min <= 0.0 {
        return Err(Error::config(format!(
            "h_min {} does not clear the tallest building ({})",
            scenario.h_min,
            scenario.map.max_height()
        )));
    }
    if scenario.users.is_empty() {
        return Err(Error::domain("no users to serve"));
    }
    let params = ctx.cfg.channel.to_params()?;
    let alg: Algorithm = a.algo.into();
    let model = match a.los {
        LosArg::Fit if matches!(alg, Algorithm::Scpa | Algorithm::Hda) => fit_round_model(&scenario, 100, seed)?,
        _ => EMPIRICAL_SUBURBAN,
    };
    let all: Vec<usize> = (0..scenario.users.len()).collect();
    let region = *scenario.map.area();
    let result = run_algorithm(alg, &scenario, &params, &model, &region, &all, &ctx.cfg.settings, BlockageMode::Basic)?;
    let report = DeployReport {
        seed,
        h_min: scenario.h_min,
        los_model: model,
        coverage_basic: evaluate_deployment(&scenario, &params, &[result.uav_position], BlockageMode::Basic)?,
        coverage_multiple: evaluate_deployment(&scenario, &params, &[result.uav_position], BlockageMode::Multiple)?,
        result,
    };
    let path = ctx.write_json("deployment.json", &report)?;
    let p = report.result.uav_position;
    Ok(format!(
        "{}: UAV at ({:.2}, {:.2}, {:.2}), coverage {:.4}, search length {:.1} m\nwrote {}\n",
        alg,
        p.x,
        p.y,
        p.z,
        report.coverage_basic,
        report.result.search_length(),
        path.display()
    ))
}

fn apply_campaign_args(cfg: &mut RunConfig, a: &CampaignArgs) {
    if let Some(r) = a.rounds {
        cfg.rounds = r;
    }
    if !a.algo.is_empty() {
        cfg.algorithms = a.algo.iter().map(|&x| x.into()).collect();
    }
    if let Some(n) = a.n_uavs {
        cfg.n_uavs = n;
    }
    if let Some(b) = a.blockage_mode {
        cfg.blockage_mode = b.into();
    }
    match a.los {
        Some(LosArg::Fit) if !matches!(cfg.los, LosSource::Fit { .. }) => cfg.los = LosSource::default(),
        Some(LosArg::Empirical) => cfg.los = LosSource::Empirical,
        _ => {}
    }
}

fn run_with(cfg: &RunConfig, workers: Option<usize>) -> Result<CampaignReport> {
    let threads = workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    run_campaign_with_workers(&cfg.campaign(), threads)
}

fn cdf_csv(report: &crate::sim::AlgorithmReport) -> String {
    let mut s = String::from("coverage,cdf\n");
    for (c, f) in &report.cdf {
        let _ = writeln!(s, "{c},{f}");
    }
    s
}

fn simulate(mut ctx: Ctx, a: &SimulateArgs) -> Result<String> {
    apply_campaign_args(&mut ctx.cfg, &a.campaign);
    let report = run_with(&ctx.cfg, a.campaign.workers)?;
    #[derive(Serialize)]
    struct Out<'a> {
        config: &'a RunConfig,
        report: &'a CampaignReport,
    }
    let path = ctx.write_json(
        "report.json",
        &Out {
            config: &ctx.cfg,
            report: &report,
        },
    )?;
    let mut out = format!(
        "seed {}: {} of {} rounds completed\n",
        report.seed, report.rounds_completed, report.rounds_requested
    );
    let mut used: Vec<String> = Vec::new();
    for alg in &report.algorithms {
        let mut name = format!("cdf_{}.csv", alg.algorithm);
        let mut k = 2;
        while used.contains(&name) {
            name = format!("cdf_{}_{k}.csv", alg.algorithm);
            k += 1;
        }
        ctx.write(&name, &cdf_csv(alg))?;
        used.push(name);
        let _ = writeln!(
            out,
            "{:>6}: mean coverage {:.4}, search length mean {:.1} m [{:.1}, {:.1}]",
            alg.algorithm.name(),
            alg.mean_coverage,
            alg.search_length.mean,
            alg.search_length.shortest_20,
            alg.search_length.longest_20
        );
    }
    for f in report.failures.iter().take(10) {
        let _ = writeln!(out, "round {} failed: {}", f.round, f.message);
    }
    let _ = writeln!(out, "wrote {} and {}", path.display(), used.join(", "));
    Ok(out)
}

fn parse_value<T: std::str::FromStr>(param: SweepParam, v: &str) -> Result<T> {
    v.trim()
        .parse()
        .map_err(|_| Error::config(format!("invalid value `{v}` for {param:?}")))
}

fn apply_sweep(cfg: &mut RunConfig, param: SweepParam, v: &str) -> Result<()> {
    match param {
        SweepParam::Epsilon => cfg.settings.epsilon = parse_value(param, v)?,
        SweepParam::BiaH => cfg.settings.bia_h = parse_value(param, v)?,
        SweepParam::Density => cfg.settings.density = v.parse()?,
        SweepParam::NUavs => cfg.n_uavs = parse_value(param, v)?,
        SweepParam::BlockageMode => cfg.blockage_mode = v.parse()?,
        SweepParam::BuildingDensity => cfg.scenario.buildings.density = parse_value(param, v)?,
        SweepParam::RayleighScale => cfg.scenario.buildings.rayleigh_scale = parse_value(param, v)?,
        SweepParam::HMax => cfg.settings.h_max = parse_value(param, v)?,
        SweepParam::Delta => cfg.settings.delta = parse_value(param, v)?,
    }
    Ok(())
}

#[derive(Serialize)]
struct SweepRow {
    value: String,
    algorithm: Algorithm,
    mean_coverage: f64,
    mean_search_length: f64,
    rounds_completed: usize,
}

fn sweep(mut ctx: Ctx, a: &SweepArgs) -> Result<String> {
    apply_campaign_args(&mut ctx.cfg, &a.campaign);
    let mut rows = Vec::new();
    for v in &a.values {
        let mut cfg = ctx.cfg.clone();
        apply_sweep(&mut cfg, a.param, v)?;
        let report = run_with(&cfg, a.campaign.workers)?;
        for alg in &report.algorithms {
            rows.push(SweepRow {
                value: v.trim().to_string(),
                algorithm: alg.algorithm,
                mean_coverage: alg.mean_coverage,
                mean_search_length: alg.search_length.mean,
                rounds_completed: report.rounds_completed,
            });
        }
    }
    #[derive(Serialize)]
    struct Out<'a> {
        seed: u64,
        param: String,
        config: &'a RunConfig,
        rows: &'a [SweepRow],
    }
    let param = format!("{:?}", a.param);
    let json = ctx.write_json(
        "sweep.json",
        &Out {
            seed: ctx.cfg.seed,
            param: param.clone(),
            config: &ctx.cfg,
            rows: &rows,
        },
    )?;
    let mut csv = String::from("value,algorithm,mean_coverage,mean_search_length\n");
    let mut out = format!("sweep over {param}, seed {}\n", ctx.cfg.seed);
    for r in &rows {
        let _ = writeln!(csv, "{},{},{},{}", r.value, r.algorithm, r.mean_coverage, r.mean_search_length);
        let _ = writeln!(
            out,
            "{:>10} {:>6}: mean coverage {:.4}, search length {:.1} m",
            r.value,
            r.algorithm.name(),
            r.mean_coverage,
            r.mean_search_length
        );
    }
    let path = ctx.write("sweep.csv", &csv)?;
    let _ = writeln!(out, "wrote {} and {}", json.display(), path.display());
    Ok(out)
}
