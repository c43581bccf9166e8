//! Flat key-value configuration files.
//!
//! The format is `key = value` lines with `#` comments. Times are given in
//! nanoseconds, rates in 1/ns, and sampling rates in GHz; everything is
//! converted to SI units on load. Unknown keys are rejected so typos fail
//! loudly instead of silently running the defaults.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::path::Path;

use crate::channel::{ChannelParams, FadingLaw};
use crate::error::{Error, Result};
use crate::harness::{EstimatorId, ExperimentConfig};
use crate::signal::FrameConfig;

const NS: f64 = 1e-9;
const GHZ: f64 = 1e9;

/// The CM1 residential line-of-sight parameter file shipped with the crate;
/// the numeric channel defaults come from here, not from code.
pub const CM1_LOS_CONF: &str = include_str!("../configs/cm1_los.conf");

/// Parsed key-value file with consumption tracking.
#[derive(Debug, Clone)]
pub struct Settings {
    values: BTreeMap<String, String>,
    consumed: BTreeSet<String>,
}

impl Settings {
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(i) => &raw[..i],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Config(format!(
                    "line {}: expected 'key = value', got '{raw}'",
                    lineno + 1
                )));
            };
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if key.is_empty() || value.is_empty() {
                return Err(Error::Config(format!(
                    "line {}: empty key or value",
                    lineno + 1
                )));
            }
            if values.insert(key.clone(), value).is_some() {
                return Err(Error::Config(format!(
                    "line {}: duplicate key '{key}'",
                    lineno + 1
                )));
            }
        }
        Ok(Settings {
            values,
            consumed: BTreeSet::new(),
        })
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    fn raw(&mut self, key: &str) -> Option<&str> {
        if self.values.contains_key(key) {
            self.consumed.insert(key.to_string());
            self.values.get(key).map(|s| s.as_str())
        } else {
            None
        }
    }

    pub fn f64(&mut self, key: &str) -> Result<Option<f64>> {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v
                .parse::<f64>()
                .map(Some)
                .map_err(|_| Error::Config(format!("key '{key}': '{v}' is not a number"))),
        }
    }

    pub fn usize(&mut self, key: &str) -> Result<Option<usize>> {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v
                .parse::<usize>()
                .map(Some)
                .map_err(|_| Error::Config(format!("key '{key}': '{v}' is not a whole number"))),
        }
    }

    pub fn u64(&mut self, key: &str) -> Result<Option<u64>> {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v
                .parse::<u64>()
                .map(Some)
                .map_err(|_| Error::Config(format!("key '{key}': '{v}' is not a whole number"))),
        }
    }

    pub fn bool(&mut self, key: &str) -> Result<Option<bool>> {
        match self.raw(key) {
            None => Ok(None),
            Some("on") | Some("true") | Some("yes") | Some("1") => Ok(Some(true)),
            Some("off") | Some("false") | Some("no") | Some("0") => Ok(Some(false)),
            Some(v) => Err(Error::Config(format!("key '{key}': '{v}' is not on/off"))),
        }
    }

    pub fn string(&mut self, key: &str) -> Option<String> {
        self.raw(key).map(|s| s.to_string())
    }

    pub fn f64_list(&mut self, key: &str) -> Result<Option<Vec<f64>>> {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v
                .split(',')
                .map(|p| {
                    p.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::Config(format!("key '{key}': '{p}' is not a number")))
                })
                .collect::<Result<Vec<_>>>()
                .map(Some),
        }
    }

    /// Error out on any key that was never consumed.
    pub fn finish(self) -> Result<()> {
        let leftover: Vec<&String> = self
            .values
            .keys()
            .filter(|k| !self.consumed.contains(*k))
            .collect();
        if leftover.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(format!(
                "unknown key(s): {}",
                leftover
                    .iter()
                    .map(|s| s.as_str())
                    .collect::<Vec<_>>()
                    .join(", ")
            )))
        }
    }
}

/// Read the channel keys out of a settings block, filling gaps from the
/// supplied defaults.
pub fn channel_params(settings: &mut Settings, defaults: &ChannelParams) -> Result<ChannelParams> {
    let default_m = match defaults.fading {
        FadingLaw::Nakagami { m } => m,
        FadingLaw::None => 1.0,
    };
    let m = settings.f64("fading_m")?.unwrap_or(default_m);
    let fading = match settings.string("fading").as_deref() {
        None => match defaults.fading {
            FadingLaw::Nakagami { .. } => FadingLaw::Nakagami { m },
            FadingLaw::None => FadingLaw::None,
        },
        Some("nakagami") => FadingLaw::Nakagami { m },
        Some("none") => FadingLaw::None,
        Some(other) => {
            return Err(Error::Config(format!(
                "fading must be 'nakagami' or 'none', got '{other}'"
            )))
        }
    };
    let params = ChannelParams {
        cluster_rate: settings
            .f64("cluster_rate")?
            .map(|v| v / NS)
            .unwrap_or(defaults.cluster_rate),
        ray_rate_1: settings
            .f64("ray_rate_1")?
            .map(|v| v / NS)
            .unwrap_or(defaults.ray_rate_1),
        ray_rate_2: settings
            .f64("ray_rate_2")?
            .map(|v| v / NS)
            .unwrap_or(defaults.ray_rate_2),
        mixture_beta: settings
            .f64("mixture_beta")?
            .unwrap_or(defaults.mixture_beta),
        cluster_decay: settings
            .f64("cluster_decay")?
            .map(|v| v * NS)
            .unwrap_or(defaults.cluster_decay),
        ray_decay: settings
            .f64("ray_decay")?
            .map(|v| v * NS)
            .unwrap_or(defaults.ray_decay),
        max_delay: settings
            .f64("max_delay")?
            .map(|v| v * NS)
            .unwrap_or(defaults.max_delay),
        fading,
        rng_seed: settings.u64("rng_seed")?.unwrap_or(defaults.rng_seed),
    };
    params.validate()?;
    Ok(params)
}

/// The channel described by the embedded CM1 file.
pub fn default_channel() -> ChannelParams {
    let mut settings = Settings::parse(CM1_LOS_CONF).expect("embedded CM1 file parses");
    // bootstrap defaults are placeholders; every field is present in the file
    let bootstrap = ChannelParams {
        cluster_rate: 1.0,
        ray_rate_1: 1.0,
        ray_rate_2: 1.0,
        mixture_beta: 0.5,
        cluster_decay: 1.0,
        ray_decay: 1.0,
        max_delay: 0.0,
        fading: FadingLaw::None,
        rng_seed: 0,
    };
    let params = channel_params(&mut settings, &bootstrap).expect("embedded CM1 file is valid");
    settings
        .finish()
        .expect("embedded CM1 file has no stray keys");
    params
}

/// The reference operating point: 200 ns frames at 8 GHz, a 1 ns pulse,
/// U = 4, unit-sample dictionary, K = 5, L = 10, TOA uniform over
/// [0, 50] ns, CM1 channel, 24 dB, 200 trials.
pub fn experiment_defaults() -> ExperimentConfig {
    let channel = default_channel();
    let frame = FrameConfig::new(200.0 * NS, 8.0 * GHZ, 1.0, channel.max_delay)
        .expect("reference frame is valid");
    ExperimentConfig {
        frame,
        pulse_width: 1.0 * NS,
        channel,
        ml_paths: 10,
        ml_exclusion: None,
        paths_searched: 5,
        undersampling: 4,
        dict_stride: 1,
        toa_max: 50.0 * NS,
        pld_max: 20.0 * NS,
        window_anchor: Default::default(),
        snr_db: vec![24.0],
        noise: true,
        n_trials: 200,
        toa_range: (0.0, 50.0 * NS),
        master_seed: 1,
        estimators: vec![
            EstimatorId::Ml,
            EstimatorId::Greedy,
            EstimatorId::GreedyApriori,
        ],
        phi_per_trial: false,
        phi_identity: false,
        phi_file: None,
    }
}

/// Build an experiment from a settings block layered over the defaults.
pub fn experiment_from_settings(mut settings: Settings) -> Result<ExperimentConfig> {
    let base = experiment_defaults();
    let channel = channel_params(&mut settings, &base.channel)?;

    let t_f = settings
        .f64("t_f_ns")?
        .map(|v| v * NS)
        .unwrap_or(base.frame.t_f);
    let f_s = settings
        .f64("f_s_ghz")?
        .map(|v| v * GHZ)
        .unwrap_or(base.frame.f_s);
    let e_b = settings.f64("e_b")?.unwrap_or(base.frame.e_b);
    let frame = FrameConfig::new(t_f, f_s, e_b, channel.max_delay)?;

    let ml_exclusion = match settings.usize("ml_exclusion")? {
        None | Some(0) => None, // 0 selects the pulse support
        Some(v) => Some(v),
    };
    let estimators = match settings.string("estimators") {
        None => base.estimators.clone(),
        Some(list) => list
            .split(',')
            .map(|p| p.parse::<EstimatorId>())
            .collect::<Result<Vec<_>>>()?,
    };
    let window_anchor = match settings.string("window_anchor") {
        None => base.window_anchor,
        Some(v) => match v.as_str() {
            "peak" => crate::estimator::WindowAnchor::Peak,
            "running" => crate::estimator::WindowAnchor::Running,
            other => {
                return Err(Error::Config(format!(
                    "window_anchor must be 'peak' or 'running', got '{other}'"
                )))
            }
        },
    };

    let cfg = ExperimentConfig {
        pulse_width: settings
            .f64("pulse_width_ns")?
            .map(|v| v * NS)
            .unwrap_or(base.pulse_width),
        ml_paths: settings.usize("ml_paths")?.unwrap_or(base.ml_paths),
        ml_exclusion,
        paths_searched: settings.usize("k")?.unwrap_or(base.paths_searched),
        undersampling: settings.usize("u")?.unwrap_or(base.undersampling),
        dict_stride: settings.usize("n0")?.unwrap_or(base.dict_stride),
        toa_max: settings
            .f64("tau_toa_max_ns")?
            .map(|v| v * NS)
            .unwrap_or(base.toa_max),
        pld_max: settings
            .f64("tau_pld_max_ns")?
            .map(|v| v * NS)
            .unwrap_or(base.pld_max),
        window_anchor,
        snr_db: settings.f64_list("snr_db")?.unwrap_or(base.snr_db.clone()),
        noise: settings.bool("noise")?.unwrap_or(base.noise),
        n_trials: settings.usize("n_trials")?.unwrap_or(base.n_trials),
        toa_range: (
            settings
                .f64("toa_min_ns")?
                .map(|v| v * NS)
                .unwrap_or(base.toa_range.0),
            settings
                .f64("toa_max_ns")?
                .map(|v| v * NS)
                .unwrap_or(base.toa_range.1),
        ),
        master_seed: settings.u64("master_seed")?.unwrap_or(base.master_seed),
        estimators,
        phi_per_trial: settings
            .bool("phi_per_trial")?
            .unwrap_or(base.phi_per_trial),
        phi_identity: settings.bool("phi_identity")?.unwrap_or(base.phi_identity),
        phi_file: None,
        frame,
        channel,
    };
    settings.finish()?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn experiment_from_file(path: &Path) -> Result<ExperimentConfig> {
    experiment_from_settings(Settings::from_file(path)?)
}
