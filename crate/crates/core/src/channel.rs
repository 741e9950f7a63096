//! Air-to-ground link budget with Nakagami-m small-scale fading.
//!
//! All quantities are linear (watts, ratios). Decibel values only appear in
//! [`ChannelConfig`], which converts once into [`ChannelParams`].

use rand::Rng;
use rand_distr::{Distribution, Gamma};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::losmodel::{elevation_angle, LosModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkState {
    Los,
    Nlos,
    /// Two or more buildings in the way; nothing is received.
    DeepBlocked,
}

/// Large-scale and fading parameters of one link state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateParams {
    /// Path-loss exponent.
    pub alpha: f64,
    /// Nakagami shape; the fading power gain is Gamma(m, 1/m).
    pub m: u32,
    /// Mean additional loss, linear.
    pub eta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    /// Transmit power, watts.
    pub zeta: f64,
    /// Noise power, watts.
    pub sigma2: f64,
    /// SNR threshold, linear.
    pub gamma: f64,
    pub los: StateParams,
    pub nlos: StateParams,
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    db_to_linear(dbm - 30.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Radio configuration as written in config files. Defaults are the
/// suburban system configuration used throughout the toolkit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChannelConfig {
    pub tx_power_dbm: f64,
    pub noise_dbm: f64,
    pub snr_threshold_db: f64,
    pub alpha_los: f64,
    pub alpha_nlos: f64,
    pub m_los: u32,
    pub m_nlos: u32,
    pub eta_los_db: f64,
    pub eta_nlos_db: f64,
}

impl Default for ChannelConfig {
    fn default() -> Self {
        Self {
            tx_power_dbm: 30.0,
            noise_dbm: -98.0,
            snr_threshold_db: 22.0,
            alpha_los: 2.0,
            alpha_nlos: 2.3,
            m_los: 2,
            m_nlos: 1,
            eta_los_db: -35.0,
            eta_nlos_db: -48.0,
        }
    }
}

impl ChannelConfig {
    pub fn to_params(&self) -> Result<ChannelParams> {
        ChannelParams::new(
            dbm_to_watts(self.tx_power_dbm),
            dbm_to_watts(self.noise_dbm),
            db_to_linear(self.snr_threshold_db),
            StateParams {
                alpha: self.alpha_los,
                m: self.m_los,
                eta: db_to_linear(self.eta_los_db),
            },
            StateParams {
                alpha: self.alpha_nlos,
                m: self.m_nlos,
                eta: db_to_linear(self.eta_nlos_db),
            },
        )
    }
}

impl Default for ChannelParams {
    fn default() -> Self {
        ChannelConfig::default()
            .to_params()
            .expect("default channel configuration is valid")
    }
}

impl ChannelParams {
    pub fn new(
        zeta: f64,
        sigma2: f64,
        gamma: f64,
        los: StateParams,
        nlos: StateParams,
    ) -> Result<Self> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::config(format!("{name} must be positive and finite, got {v}")))
            }
        };
        positive("transmit power", zeta)?;
        positive("noise power", sigma2)?;
        positive("SNR threshold", gamma)?;
        for (tag, s) in [("LoS", los), ("NLoS", nlos)] {
            positive(&format!("{tag} path-loss exponent"), s.alpha)?;
            positive(&format!("{tag} additional loss"), s.eta)?;
            if s.m == 0 {
                return Err(Error::config(format!("{tag} Nakagami shape must be >= 1")));
            }
        }
        if nlos.alpha < los.alpha {
            return Err(Error::config(
                "NLoS path-loss exponent must not be below the LoS exponent",
            ));
        }
        Ok(Self {
            zeta,
            sigma2,
            gamma,
            los,
            nlos,
        })
    }

    /// Parameters of a receivable state; `None` for [`LinkState::DeepBlocked`].
    pub fn state(&self, state: LinkState) -> Option<&StateParams> {
        match state {
            LinkState::Los => Some(&self.los),
            LinkState::Nlos => Some(&self.nlos),
            LinkState::DeepBlocked => None,
        }
    }

    /// Same channel with a different SNR threshold.
    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }
}

fn check_distance(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("link distance must be positive, got {r}")))
    }
}

/// Mean received power `eta * zeta * r^-alpha` in watts (fading averaged out).
pub fn mean_received_power(params: &ChannelParams, state: LinkState, r: f64) -> Result<f64> {
    check_distance(r)?;
    Ok(params
        .state(state)
        .map_or(0.0, |s| s.eta * params.zeta * r.powf(-s.alpha)))
}

/// Draws the fading power gain of one link, `Gamma(m, 1/m)` with unit mean.
/// Deep-blocked links have zero gain.
pub fn sample_fading_gain<R: Rng + ?Sized>(
    params: &ChannelParams,
    state: LinkState,
    rng: &mut R,
) -> f64 {
    match params.state(state) {
        None => 0.0,
        Some(s) => {
            let m = f64::from(s.m);
            Gamma::new(m, 1.0 / m)
                .expect("shape is a positive integer")
                .sample(rng)
        }
    }
}

/// Average SNR `eta * zeta * r^-alpha / sigma2`.
pub fn average_snr(params: &ChannelParams, state: LinkState, r: f64) -> Result<f64> {
    Ok(mean_received_power(params, state, r)? / params.sigma2)
}

/// Normalized threshold `gamma * sigma2 * r^alpha / (eta * zeta)`, i.e. the
/// fading gain a link needs to reach the SNR threshold.
pub fn mu(params: &ChannelParams, state: LinkState, r: f64) -> Result<f64> {
    check_distance(r)?;
    Ok(params.state(state).map_or(f64::INFINITY, |s| {
        params.gamma * params.sigma2 * r.powf(s.alpha) / (s.eta * params.zeta)
    }))
}

/// `P[G > x]` for `G ~ Gamma(m, 1/m)`, via the finite Erlang sum.
pub fn gamma_ccdf_unit_mean(m: u32, x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if !x.is_finite() {
        return 0.0;
    }
    let y = f64::from(m) * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 1..m {
        term *= y / f64::from(n);
        sum += term;
    }
    ((-y).exp() * sum).clamp(0.0, 1.0)
}

/// Probability that the instantaneous SNR exceeds the threshold given the
/// link state.
pub fn conditional_coverage(params: &ChannelParams, state: LinkState, r: f64) -> Result<f64> {
    let mu = mu(params, state, r)?;
    Ok(params
        .state(state)
        .map_or(0.0, |s| gamma_ccdf_unit_mean(s.m, mu)))
}

/// Coverage probability of a user at 3-D distance `r` from a UAV at altitude
/// `h`, averaging over the LoS probability of the elevation angle.
pub fn coverage_probability(params: &ChannelParams, model: &LosModel, h: f64, r: f64) -> Result<f64> {
    let theta = elevation_angle(h, r)?;
    let p_los = model.p_los(theta);
    let c_los = conditional_coverage(params, LinkState::Los, r)?;
    let c_nlos = conditional_coverage(params, LinkState::Nlos, r)?;
    Ok((p_los * c_los + (1.0 - p_los) * c_nlos).clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::losmodel::LosFamily;
    use crate::rng;

    fn table() -> ChannelParams {
        ChannelParams::default()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn unit_distance_power() {
        let p = table();
        let v = mean_received_power(&p, LinkState::Los, 1.0).unwrap();
        assert!(rel(v, p.los.eta * p.zeta) < 1e-15);
    }

    #[test]
    fn los_power_and_snr_at_100m() {
        let p = table();
        let s = mean_received_power(&p, LinkState::Los, 100.0).unwrap();
        assert!(rel(s, 3.1623e-8) < 1e-4, "{s}");
        let snr = average_snr(&p, LinkState::Los, 100.0).unwrap();
        assert!(rel(snr, 1.9953e5) < 1e-4, "{snr}");
        assert!(mean_received_power(&p, LinkState::Nlos, 100.0).unwrap() < s);
    }

    #[test]
    fn mu_values() {
        let p = table();
        let nlos = mu(&p, LinkState::Nlos, 126.0).unwrap();
        assert!((nlos - 0.107).abs() < 5e-4, "{nlos}");
        let los = mu(&p, LinkState::Los, 100.0).unwrap();
        assert!(rel(los, 7.944e-4) < 1e-3, "{los}");
        let snr = average_snr(&p, LinkState::Los, 80.0).unwrap();
        let q = p.with_gamma(snr);
        assert!((mu(&q, LinkState::Los, 80.0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn conditional_coverage_values() {
        let p = table();
        let c = conditional_coverage(&p, LinkState::Nlos, 126.0).unwrap();
        assert!((c - 0.898).abs() < 1e-3, "{c}");
        let m = mu(&p, LinkState::Nlos, 300.0).unwrap();
        let c = conditional_coverage(&p, LinkState::Nlos, 300.0).unwrap();
        assert!((c - (-m).exp()).abs() < 1e-15);
        assert_eq!(conditional_coverage(&p, LinkState::DeepBlocked, 10.0).unwrap(), 0.0);
    }

    #[test]
    fn rejects_bad_distances() {
        let p = table();
        for r in [0.0, -1.0, f64::NAN] {
            assert!(mean_received_power(&p, LinkState::Los, r).is_err());
            assert!(average_snr(&p, LinkState::Los, r).is_err());
            assert!(mu(&p, LinkState::Los, r).is_err());
            assert!(conditional_coverage(&p, LinkState::Los, r).is_err());
        }
        let model = LosModel::new(LosFamily::Sigmoid, 4.88, 0.43).unwrap();
        assert!(coverage_probability(&p, &model, 50.0, 40.0).is_err());
    }

    #[test]
    fn rejects_invalid_parameters() {
        let mut cfg = ChannelConfig::default();
        cfg.m_los = 0;
        assert!(cfg.to_params().is_err());
        let mut cfg = ChannelConfig::default();
        cfg.alpha_nlos = 1.5;
        assert!(cfg.to_params().is_err());
        let non_integer: std::result::Result<ChannelConfig, _> = toml::from_str("m_los = 2.5");
        assert!(non_integer.is_err());
    }

    #[test]
    fn fading_moments() {
        let p = table();
        let mut r = rng::from_seed(42);
        let n = 1_000_000;
        let draws: Vec<f64> = (0..n).map(|_| sample_fading_gain(&p, LinkState::Nlos, &mut r)).collect();
        let mean = draws.iter().sum::<f64>() / n as f64;
        assert!((mean - 1.0).abs() < 0.01, "{mean}");
        let draws: Vec<f64> = (0..n).map(|_| sample_fading_gain(&p, LinkState::Los, &mut r)).collect();
        let mean = draws.iter().sum::<f64>() / n as f64;
        let var = draws.iter().map(|g| (g - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!((var - 0.5).abs() < 0.01, "{var}");
    }

    #[test]
    fn fading_is_reproducible() {
        let p = table();
        let seq = |seed| {
            let mut r = rng::from_seed(seed);
            (0..8).map(|_| sample_fading_gain(&p, LinkState::Los, &mut r)).collect::<Vec<_>>()
        };
        assert_eq!(seq(9), seq(9));
    }

    #[test]
    fn conditional_coverage_matches_fading_monte_carlo() {
        let p = table();
        let mut r = rng::from_seed(2024);
        for (state, dist) in [(LinkState::Nlos, 200.0), (LinkState::Los, 2500.0)] {
            let snr = average_snr(&p, state, dist).unwrap();
            let n = 1_000_000;
            let hits = (0..n)
                .filter(|_| sample_fading_gain(&p, state, &mut r) * snr > p.gamma)
                .count();
            let mc = hits as f64 / n as f64;
            let exact = conditional_coverage(&p, state, dist).unwrap();
            assert!((mc - exact).abs() < 0.002, "{state:?}: {mc} vs {exact}");
        }
    }

    #[test]
    fn mixture_degenerates_to_los() {
        let p = table();
        let steep = LosModel::new(LosFamily::Sigmoid, 1.0, 5.0).unwrap();
        let c = coverage_probability(&p, &steep, 100.0, 100.5).unwrap();
        let los = conditional_coverage(&p, LinkState::Los, 100.5).unwrap();
        assert!((c - los).abs() < 1e-6);
    }
}
