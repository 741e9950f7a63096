//! Elevation-angle LoS-probability models, the data-collection procedure
//! that produces `(theta, LoS fraction)` samples, and the regularized
//! least-squares fit of the two model parameters.
//!
//! Angles are in degrees everywhere in this module.

use std::io::{Read, Write};

use rand::seq::IndexedRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::terrain::{Point2, TerrainMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LosFamily {
    /// `1 / (1 + a exp(-b (theta - a)))`
    Sigmoid,
    /// `a tanh(b theta)`
    Tanh,
    /// `max(0, a theta + b)`
    Relu,
}

impl std::str::FromStr for LosFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sigmoid" => Ok(Self::Sigmoid),
            "tanh" => Ok(Self::Tanh),
            "relu" => Ok(Self::Relu),
            other => Err(Error::config(format!("unknown LoS model family `{other}`"))),
        }
    }
}

impl LosFamily {
    /// Starting point used when the caller has no prior for the family.
    pub fn default_start(self) -> (f64, f64) {
        match self {
            LosFamily::Sigmoid => (EMPIRICAL_SUBURBAN.a, EMPIRICAL_SUBURBAN.b),
            LosFamily::Tanh => (1.0, 0.05),
            LosFamily::Relu => (0.01, 0.5),
        }
    }
}

/// LoS probability as a function of the elevation angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LosModel {
    pub family: LosFamily,
    pub a: f64,
    pub b: f64,
}

/// Published suburban sigmoid parameters, used as the regularization
/// anchor and as the baseline the fitted model is compared against.
pub const EMPIRICAL_SUBURBAN: LosModel = LosModel {
    family: LosFamily::Sigmoid,
    a: 4.88,
    b: 0.43,
};

impl LosModel {
    pub fn new(family: LosFamily, a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::config("LoS model parameters must be finite"));
        }
        if family == LosFamily::Sigmoid && !(a > 0.0 && b > 0.0) {
            return Err(Error::config(format!(
                "sigmoid LoS model needs a > 0 and b > 0, got a={a}, b={b}"
            )));
        }
        Ok(Self { family, a, b })
    }

    /// A model that always predicts line of sight.
    pub fn always_los() -> Self {
        Self {
            family: LosFamily::Relu,
            a: 0.0,
            b: 1.0,
        }
    }

    /// LoS probability at elevation `theta` (degrees), clamped to `[0, 1]`.
    pub fn p_los(&self, theta: f64) -> f64 {
        self.eval(theta).0
    }

    /// Value and gradient with respect to `(a, b)`. The gradient is zero
    /// where the clamp is active.
    pub fn eval(&self, theta: f64) -> (f64, [f64; 2]) {
        let (a, b) = (self.a, self.b);
        match self.family {
            LosFamily::Sigmoid => {
                // g = a exp(-b (theta - a)), f = 1 / (1 + g)
                let ln_g = a.ln() - b * (theta - a);
                if ln_g > 700.0 {
                    return (0.0, [0.0, 0.0]);
                }
                let g = ln_g.exp();
                let f = 1.0 / (1.0 + g);
                let dg_da = g / a + g * b;
                let dg_db = -g * (theta - a);
                let s = -f * f;
                (f, [s * dg_da, s * dg_db])
            }
            LosFamily::Tanh => {
                let th = (b * theta).tanh();
                let raw = a * th;
                if !(0.0..=1.0).contains(&raw) {
                    return (raw.clamp(0.0, 1.0), [0.0, 0.0]);
                }
                (raw, [th, a * theta * (1.0 - th * th)])
            }
            LosFamily::Relu => {
                let raw = a * theta + b;
                if raw <= 0.0 {
                    (0.0, [0.0, 0.0])
                } else if raw >= 1.0 {
                    (1.0, [0.0, 0.0])
                } else {
                    (raw, [theta, 1.0])
                }
            }
        }
    }
}

/// Elevation angle in degrees of a UAV at altitude `h` seen from a ground
/// user at 3-D distance `r`.
pub fn elevation_angle(h: f64, r: f64) -> Result<f64> {
    if !(h > 0.0 && h.is_finite() && r.is_finite()) {
        return Err(Error::domain(format!("altitude must be positive, got {h}")));
    }
    if h > r {
        return Err(Error::domain(format!(
            "altitude {h} exceeds the 3-D distance {r}"
        )));
    }
    if h == r {
        return Ok(90.0);
    }
    let ground = (r * r - h * h).sqrt();
    Ok(h.atan2(ground).to_degrees())
}

/// Empirical LoS fraction observed at one elevation angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElevationSample {
    #[serde(rename = "theta_deg")]
    pub theta: f64,
    pub t: f64,
    pub n: u32,
}

/// Default elevation angles for data collection: 5, 10, ..., 85 degrees.
pub fn default_thetas() -> Vec<f64> {
    (1..=17).map(|i| 5.0 * f64::from(i)).collect()
}

pub const DEFAULT_PER_THETA: u32 = 200;

const PLACEMENT_ATTEMPTS: usize = 10_000;

/// Flies the UAV around `users` at fixed elevation angles and records the
/// fraction of links in LoS.
///
/// For each angle, every sample picks a random user and a random altitude in
/// `h_range`, then places the UAV at horizontal distance `h / tan(theta)` in a
/// random direction. Positions outside the map area are redrawn.
pub fn collect_samples<R: Rng + ?Sized>(
    map: &TerrainMap,
    users: &[Point2],
    h_range: (f64, f64),
    thetas: &[f64],
    per_theta_count: u32,
    rng: &mut R,
) -> Result<Vec<ElevationSample>> {
    let (h_lo, h_hi) = h_range;
    if users.is_empty() {
        return Err(Error::Sampling("no users to associate with".into()));
    }
    if !(h_lo > 0.0 && h_lo <= h_hi) {
        return Err(Error::Sampling(format!("invalid altitude range {h_range:?}")));
    }
    if per_theta_count == 0 {
        return Err(Error::Sampling("per-angle sample count must be positive".into()));
    }
    let area = map.area();
    thetas
        .iter()
        .map(|&theta| {
            if !(theta > 0.0 && theta <= 90.0) {
                return Err(Error::Sampling(format!("elevation {theta} outside (0, 90]")));
            }
            let cot = 1.0 / theta.to_radians().tan();
            let mut los = 0u32;
            for _ in 0..per_theta_count {
                let placed = (0..PLACEMENT_ATTEMPTS).find_map(|_| {
                    let user = *users.choose(rng).expect("users is non-empty");
                    let h = if h_hi > h_lo { rng.random_range(h_lo..=h_hi) } else { h_lo };
                    let phi = rng.random_range(0.0..std::f64::consts::TAU);
                    let ground = h * cot;
                    let uav = Point2::new(user.x + ground * phi.cos(), user.y + ground * phi.sin());
                    area.contains(uav).then_some((user, uav.at(h)))
                });
                let Some((user, uav)) = placed else {
                    return Err(Error::Sampling(format!(
                        "no in-area UAV position found for elevation {theta} deg"
                    )));
                };
                if map.is_los(user.on_ground(), uav) {
                    los += 1;
                }
            }
            Ok(ElevationSample {
                theta,
                t: f64::from(los) / f64::from(per_theta_count),
                n: per_theta_count,
            })
        })
        .collect()
}

/// Three-point moving average of the LoS fractions over angle-sorted
/// samples; end points average with their single neighbor.
pub fn smooth(samples: &[ElevationSample]) -> Vec<ElevationSample> {
    let mut sorted = samples.to_vec();
    sorted.sort_by(|x, y| x.theta.total_cmp(&y.theta));
    let n = sorted.len();
    (0..n)
        .map(|i| {
            let lo = i.saturating_sub(1);
            let hi = (i + 1).min(n - 1);
            let window = &sorted[lo..=hi];
            ElevationSample {
                t: window.iter().map(|s| s.t).sum::<f64>() / window.len() as f64,
                ..sorted[i]
            }
        })
        .collect()
}

pub fn read_samples_csv<R: Read>(reader: R) -> Result<Vec<ElevationSample>> {
    let mut rdr = csv::Reader::from_reader(reader);
    let mut out = Vec::new();
    for (i, rec) in rdr.deserialize::<ElevationSample>().enumerate() {
        let s = rec.map_err(|e| Error::Parse {
            path: "<csv>".into(),
            message: format!("row {}: {e}", i + 1),
        })?;
        if !(s.theta > 0.0 && s.theta <= 90.0 && (0.0..=1.0).contains(&s.t) && s.n > 0) {
            return Err(Error::Parse {
                path: "<csv>".into(),
                message: format!("row {}: sample out of range: {s:?}", i + 1),
            });
        }
        out.push(s);
    }
    Ok(out)
}

pub fn write_samples_csv<W: Write>(writer: W, samples: &[ElevationSample]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for s in samples {
        w.serialize(s).map_err(|e| Error::config(e.to_string()))?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))
}

/// Mean squared residual of a model over a sample set.
pub fn mse(model: &LosModel, samples: &[ElevationSample]) -> f64 {
    if samples.is_empty() {
        return 0.0;
    }
    samples
        .iter()
        .map(|s| (s.t - model.p_los(s.theta)).powi(2))
        .sum::<f64>()
        / samples.len() as f64
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    pub lambda1: f64,
    pub lambda2: f64,
    /// Regularization anchor and starting point.
    pub a_hat: f64,
    pub b_hat: f64,
    pub max_iter: usize,
    pub step_tol: f64,
}

impl FitOptions {
    /// Equal ridge weights of 0.01 on both parameters.
    pub fn regularized(family: LosFamily) -> Self {
        let (a_hat, b_hat) = family.default_start();
        Self {
            lambda1: 0.01,
            lambda2: 0.01,
            a_hat,
            b_hat,
            max_iter: 200,
            step_tol: 1e-10,
        }
    }

    /// Light weight on `a`, heavier weight on `b` (0.001 / 0.1).
    pub fn regularized_skewed(family: LosFamily) -> Self {
        Self {
            lambda1: 0.001,
            lambda2: 0.1,
            ..Self::regularized(family)
        }
    }

    pub fn unregularized(family: LosFamily) -> Self {
        Self {
            lambda1: 0.0,
            lambda2: 0.0,
            ..Self::regularized(family)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    #[serde(flatten)]
    pub model: LosModel,
    /// Unregularized mean squared residual.
    pub mse: f64,
    pub converged: bool,
    #[serde(skip)]
    pub iterations: usize,
    /// Regularized objective after each accepted step, starting point first.
    #[serde(skip)]
    pub objective_trace: Vec<f64>,
}

/// Regularized objective `sum (t - f)^2 + l1 (a - a_hat)^2 + l2 (b - b_hat)^2`.
pub fn objective(model: &LosModel, samples: &[ElevationSample], opts: &FitOptions) -> f64 {
    samples
        .iter()
        .map(|s| (s.t - model.p_los(s.theta)).powi(2))
        .sum::<f64>()
        + opts.lambda1 * (model.a - opts.a_hat).powi(2)
        + opts.lambda2 * (model.b - opts.b_hat).powi(2)
}

fn project(family: LosFamily, a: f64, b: f64) -> (f64, f64) {
    match family {
        LosFamily::Sigmoid => (a.max(1e-9), b.max(1e-9)),
        _ => (a, b),
    }
}

/// Fits `(a, b)` by damped Gauss-Newton (Levenberg-Marquardt) on the
/// ridge-augmented residuals, starting from `(a_hat, b_hat)`. Sigmoid
/// parameters are kept positive by projection.
///
/// When the iteration budget runs out the best iterate is returned with
/// `converged = false`.
pub fn fit(samples: &[ElevationSample], family: LosFamily, opts: &FitOptions) -> Result<FitResult> {
    let mut distinct: Vec<f64> = samples.iter().map(|s| s.theta).collect();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 2 {
        return Err(Error::domain("fitting needs samples at two or more distinct angles"));
    }
    if !(opts.lambda1 >= 0.0 && opts.lambda2 >= 0.0) {
        return Err(Error::domain("regularization weights must be non-negative"));
    }
    let (a0, b0) = project(family, opts.a_hat, opts.b_hat);
    let mut model = LosModel { family, a: a0, b: b0 };
    let mut cost = objective(&model, samples, opts);
    let mut trace = vec![cost];
    let mut damping = 1e-3;
    let mut converged = false;
    let mut iterations = 0;

    while iterations < opts.max_iter {
        iterations += 1;
        // Normal equations of the augmented least-squares problem.
        let (mut jtj, mut jtr) = ([[0.0; 2]; 2], [0.0; 2]);
        for s in samples {
            let (f, grad) = model.eval(s.theta);
            let res = s.t - f;
            // d(res)/dp = -grad
            for i in 0..2 {
                jtr[i] += -grad[i] * res;
                for j in 0..2 {
                    jtj[i][j] += grad[i] * grad[j];
                }
            }
        }
        jtj[0][0] += opts.lambda1;
        jtj[1][1] += opts.lambda2;
        jtr[0] += opts.lambda1 * (model.a - opts.a_hat);
        jtr[1] += opts.lambda2 * (model.b - opts.b_hat);
        let grad_norm = jtr[0].hypot(jtr[1]);
        if grad_norm < 1e-14 {
            converged = true;
            break;
        }

        let mut accepted = false;
        while damping < 1e16 {
            let m00 = jtj[0][0] + damping * jtj[0][0].max(1e-12);
            let m11 = jtj[1][1] + damping * jtj[1][1].max(1e-12);
            let m01 = jtj[0][1];
            let det = m00 * m11 - m01 * m01;
            if det.abs() < f64::MIN_POSITIVE {
                damping *= 10.0;
                continue;
            }
            let da = -(m11 * jtr[0] - m01 * jtr[1]) / det;
            let db = -(m00 * jtr[1] - m01 * jtr[0]) / det;
            let (a, b) = project(family, model.a + da, model.b + db);
            let trial = LosModel { family, a, b };
            let trial_cost = objective(&trial, samples, opts);
            if trial_cost <= cost {
                let step = (a - model.a).hypot(b - model.b);
                let rel_drop = (cost - trial_cost) / cost.max(f64::MIN_POSITIVE);
                model = trial;
                cost = trial_cost;
                trace.push(cost);
                damping = (damping / 3.0).max(1e-12);
                accepted = true;
                if step <= opts.step_tol * (1.0 + model.a.hypot(model.b)) || rel_drop < 1e-15 {
                    converged = true;
                }
                break;
            }
            damping *= 4.0;
        }
        if !accepted {
            // No descent direction left at any damping: stationary point.
            converged = true;
            break;
        }
        if converged {
            break;
        }
    }

    Ok(FitResult {
        model,
        mse: mse(&model, samples),
        converged,
        iterations,
        objective_trace: trace,
    })
}
