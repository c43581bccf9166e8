//! Monte-Carlo experiment runner.
//!
//! A run is a pure function of the experiment configuration and the master
//! seed: every trial draws its TOA, channel, and noise from dedicated
//! substreams keyed by the trial index, so parallel and sequential
//! execution agree bit for bit and repeated runs emit identical CSV.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use rand::RngExt;
use rayon::prelude::*;

use crate::acquisition::{awgn, project, MeasurementMatrix};
use crate::channel::{sample_channel, ChannelParams};
use crate::dictionary::{build_dictionary, holographic, HolographicDictionary, ShiftDictionary};
use crate::error::{Error, Result};
use crate::estimator::{
    greedy_toa, greedy_toa_apriori, ml_toa, AprioriConfig, GreedyConfig, MlConfig, WindowAnchor,
};
use crate::rng::{substream, Stream};
use crate::signal::{gaussian2_pulse, synthesize_received, FrameConfig, PulseSamples};

/// Estimators the harness can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimatorId {
    /// Nyquist-rate matched-filter baseline.
    Ml,
    /// Sub-Nyquist greedy pursuit.
    Greedy,
    /// Greedy pursuit with range and peak-lead priors.
    GreedyApriori,
}

impl fmt::Display for EstimatorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EstimatorId::Ml => "ml",
            EstimatorId::Greedy => "greedy",
            EstimatorId::GreedyApriori => "greedy-apriori",
        })
    }
}

impl FromStr for EstimatorId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "ml" => Ok(EstimatorId::Ml),
            "greedy" => Ok(EstimatorId::Greedy),
            "greedy-apriori" => Ok(EstimatorId::GreedyApriori),
            other => Err(Error::Config(format!("unknown estimator '{other}'"))),
        }
    }
}

/// Swept experiment axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    Snr,
    K,
    U,
    Delta,
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepAxis::Snr => "snr",
            SweepAxis::K => "k",
            SweepAxis::U => "u",
            SweepAxis::Delta => "delta",
        })
    }
}

impl FromStr for SweepAxis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "snr" => Ok(SweepAxis::Snr),
            "k" => Ok(SweepAxis::K),
            "u" => Ok(SweepAxis::U),
            "delta" => Ok(SweepAxis::Delta),
            other => Err(Error::Config(format!("unknown sweep axis '{other}'"))),
        }
    }
}

/// Full experiment description.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub frame: FrameConfig,
    /// Transmit pulse width, seconds.
    pub pulse_width: f64,
    pub channel: ChannelParams,
    /// Delays searched by the ML baseline.
    pub ml_paths: usize,
    /// ML pick spacing in samples; `None` means one pulse support.
    pub ml_exclusion: Option<usize>,
    /// Paths searched by the greedy estimators (K).
    pub paths_searched: usize,
    /// Under-sampling ratio N/M.
    pub undersampling: usize,
    /// Dictionary stride in samples; atom spacing is `stride / f_s`.
    pub dict_stride: usize,
    /// Range prior for the a-priori estimator, seconds.
    pub toa_max: f64,
    /// Peak-lead prior for the a-priori estimator, seconds.
    pub pld_max: f64,
    pub window_anchor: WindowAnchor,
    /// SNR grid, dB. Non-SNR sweeps run every listed value per axis point.
    pub snr_db: Vec<f64>,
    /// AWGN on/off.
    pub noise: bool,
    pub n_trials: usize,
    /// Uniform true-TOA range, seconds.
    pub toa_range: (f64, f64),
    pub master_seed: u64,
    pub estimators: Vec<EstimatorId>,
    /// Redraw the measurement matrix every trial instead of per point.
    pub phi_per_trial: bool,
    /// Force the identity matrix (requires U = 1).
    pub phi_identity: bool,
    /// Load the measurement matrix from a dump instead of drawing it.
    pub phi_file: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        self.channel.validate()?;
        if !self.frame.n.is_multiple_of(self.undersampling) {
            return Err(Error::Config(format!(
                "under-sampling ratio {} must divide the frame length {}",
                self.undersampling, self.frame.n
            )));
        }
        if self.frame.delay_spread + 1e-15 < self.channel.max_delay {
            return Err(Error::Config(
                "frame delay-spread budget is smaller than the channel delay cap".into(),
            ));
        }
        let (lo, hi) = self.toa_range;
        if !(lo >= 0.0 && hi >= lo) {
            return Err(Error::Config(format!("bad TOA range [{lo}, {hi}]")));
        }
        if hi + self.channel.max_delay + self.pulse_width > self.frame.t_f {
            return Err(Error::Config(
                "TOA range plus channel delay spread plus pulse support exceeds the frame".into(),
            ));
        }
        if self.snr_db.is_empty() {
            return Err(Error::Config("need at least one SNR value".into()));
        }
        if self.n_trials == 0 {
            return Err(Error::Config("need at least one trial".into()));
        }
        if self.estimators.is_empty() {
            return Err(Error::Config("no estimator enabled".into()));
        }
        if self.phi_identity && self.undersampling != 1 {
            return Err(Error::Config(
                "identity measurement matrix requires u = 1".into(),
            ));
        }
        Ok(())
    }
}

/// Shared per-point structures: pulse, dictionary, measurement matrix, and
/// the holographic dictionary, plus the resolved estimator configurations.
pub struct Bench {
    pub pulse: PulseSamples,
    pub dict: ShiftDictionary,
    pub phi: MeasurementMatrix,
    pub holo: HolographicDictionary,
    pub snr_db: f64,
    pub ml: MlConfig,
    pub greedy: GreedyConfig,
    pub apriori: AprioriConfig,
}

impl Bench {
    /// Build the structures for one grid point. `snr_db`, `k`, `u` and
    /// `stride` are the point-resolved values (the config carries the
    /// defaults for whichever axes are not being swept).
    pub fn build(
        cfg: &ExperimentConfig,
        snr_db: f64,
        k: usize,
        u: usize,
        stride: usize,
    ) -> Result<Self> {
        let pulse = gaussian2_pulse(cfg.pulse_width, cfg.frame.f_s)?;
        let dict = build_dictionary(&pulse, &cfg.frame, stride)?;
        let n = cfg.frame.n;
        if !n.is_multiple_of(u) {
            return Err(Error::Config(format!(
                "under-sampling ratio {u} must divide the frame length {n}"
            )));
        }
        let phi = if let Some(path) = &cfg.phi_file {
            let phi = MeasurementMatrix::load(path)?;
            if phi.n() != n || phi.m() != n / u {
                return Err(Error::Config(format!(
                    "loaded matrix is {} x {}, expected {} x {n}",
                    phi.m(),
                    phi.n(),
                    n / u
                )));
            }
            phi
        } else if cfg.phi_identity {
            if u != 1 {
                return Err(Error::Config(
                    "identity measurement matrix requires u = 1".into(),
                ));
            }
            MeasurementMatrix::identity(n)
        } else {
            // keyed by the ratio, so an SNR or K sweep reuses one draw while
            // every U point gets its own
            let mut rng = substream(cfg.master_seed, u as u64, Stream::Measurement);
            let mut phi = MeasurementMatrix::gaussian(n / u, n, &mut rng)?;
            phi.seed = cfg.master_seed;
            phi
        };
        let holo = holographic(&phi, &dict)?;
        let ml = MlConfig::new(cfg.ml_paths, cfg.ml_exclusion.unwrap_or(pulse.len()))?;
        let greedy = GreedyConfig::new(k, dict.offset())?;
        let apriori =
            AprioriConfig::new(greedy, cfg.toa_max, cfg.pld_max)?.with_anchor(cfg.window_anchor);
        Ok(Bench {
            pulse,
            dict,
            phi,
            holo,
            snr_db,
            ml,
            greedy,
            apriori,
        })
    }
}

/// One trial's ground truth and per-estimator estimates, seconds.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub true_toa: f64,
    pub estimates: Vec<(EstimatorId, f64)>,
}

/// Run a single trial, deterministic in `(master_seed, trial)`.
pub fn run_trial(cfg: &ExperimentConfig, bench: &Bench, trial: u64) -> Result<TrialOutcome> {
    run_trial_inner(cfg, bench, trial).map_err(|e| e.in_trial(trial as usize))
}

fn run_trial_inner(cfg: &ExperimentConfig, bench: &Bench, trial: u64) -> Result<TrialOutcome> {
    let (lo, hi) = cfg.toa_range;
    let toa = {
        let mut rng = substream(cfg.master_seed, trial, Stream::Toa);
        lo + (hi - lo) * rng.random::<f64>()
    };
    let ch = {
        let mut rng = substream(cfg.master_seed, trial, Stream::Channel);
        sample_channel(&cfg.channel, &mut rng)?
    };
    let wave = synthesize_received(&bench.pulse, &ch.shifted(toa), &cfg.frame)?;
    let noisy = if cfg.noise {
        let mut rng = substream(cfg.master_seed, trial, Stream::Noise);
        awgn(&wave, bench.snr_db, &mut rng)
    } else {
        wave
    };

    // opt-in robustness mode: a fresh projection per trial
    let per_trial;
    let (phi, holo) = if cfg.phi_per_trial {
        let mut rng = substream(cfg.master_seed, trial, Stream::MeasurementPerTrial);
        let phi = MeasurementMatrix::gaussian(bench.phi.m(), bench.phi.n(), &mut rng)?;
        let holo = holographic(&phi, &bench.dict)?;
        per_trial = (phi, holo);
        (&per_trial.0, &per_trial.1)
    } else {
        (&bench.phi, &bench.holo)
    };

    let mut y = project(phi, &noisy)?;
    y.snr_db = if cfg.noise {
        bench.snr_db
    } else {
        f64::INFINITY
    };
    y.seed = trial;

    let mut estimates = Vec::with_capacity(cfg.estimators.len());
    for est in &cfg.estimators {
        let value = match est {
            EstimatorId::Ml => ml_toa(&noisy, &bench.pulse, &bench.ml)?.toa,
            EstimatorId::Greedy => greedy_toa(&y, holo, &bench.greedy)?.toa,
            EstimatorId::GreedyApriori => greedy_toa_apriori(&y, holo, &bench.apriori)?.toa,
        };
        estimates.push((*est, value));
    }
    Ok(TrialOutcome {
        true_toa: noisy.true_toa,
        estimates,
    })
}

/// All trials of one grid point.
#[derive(Debug, Clone)]
pub struct PointResult {
    pub outcomes: Vec<TrialOutcome>,
    pub runtime_ms: u64,
}

impl PointResult {
    /// `(truths, estimates)` for one estimator, in trial order.
    pub fn series(&self, id: EstimatorId) -> (Vec<f64>, Vec<f64>) {
        let mut truths = Vec::with_capacity(self.outcomes.len());
        let mut ests = Vec::with_capacity(self.outcomes.len());
        for o in &self.outcomes {
            if let Some((_, v)) = o.estimates.iter().find(|(e, _)| *e == id) {
                truths.push(o.true_toa);
                ests.push(*v);
            }
        }
        (truths, ests)
    }

    pub fn mse_for(&self, id: EstimatorId) -> Result<f64> {
        let (truths, ests) = self.series(id);
        mse(&truths, &ests)
    }
}

/// Run the configured number of trials in parallel; trial order (and hence
/// every aggregate) is independent of the scheduling.
pub fn run_point(cfg: &ExperimentConfig, bench: &Bench) -> Result<PointResult> {
    let start = Instant::now();
    let outcomes: Vec<TrialOutcome> = (0..cfg.n_trials as u64)
        .into_par_iter()
        .map(|trial| run_trial(cfg, bench, trial))
        .collect::<Result<_>>()?;
    Ok(PointResult {
        outcomes,
        runtime_ms: start.elapsed().as_millis() as u64,
    })
}

/// Mean squared error in seconds squared.
pub fn mse(truths: &[f64], estimates: &[f64]) -> Result<f64> {
    if truths.is_empty() {
        return Err(Error::Parameter("MSE of an empty series".into()));
    }
    if truths.len() != estimates.len() {
        return Err(Error::Dimension(format!(
            "{} truths vs {} estimates",
            truths.len(),
            estimates.len()
        )));
    }
    let sum: f64 = truths
        .iter()
        .zip(estimates)
        .map(|(t, e)| (t - e) * (t - e))
        .sum();
    Ok(sum / truths.len() as f64)
}

/// One aggregated sweep row.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub axis: SweepAxis,
    pub axis_value: f64,
    pub snr_db: f64,
    pub estimator: EstimatorId,
    pub mse_s2: f64,
    pub n_trials: usize,
    pub runtime_ms: u64,
}

/// Aggregated sweep results, rows ordered by axis value.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
}

pub const CSV_HEADER: &str = "axis,axis_value,snr_db,estimator,mse_s2,rmse_ns,n_trials,runtime_ms";

impl SweepTable {
    /// Render the table as CSV. Runtimes are reported as zero unless
    /// requested, because wall-clock values would break the byte-for-byte
    /// reproducibility contract; real timings always land in the run
    /// metadata.
    pub fn to_csv(&self, include_runtime: bool) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let rmse_ns = r.mse_s2.sqrt() * 1e9;
            let runtime = if include_runtime { r.runtime_ms } else { 0 };
            out.push_str(&format!(
                "{},{},{},{},{:e},{},{},{}\n",
                r.axis, r.axis_value, r.snr_db, r.estimator, r.mse_s2, rmse_ns, r.n_trials, runtime
            ));
        }
        out
    }
}

/// Sweep one axis over the given grid. The grid is sorted ascending; for
/// the integer axes (k, u, delta-stride) values must be whole numbers.
pub fn run_sweep(cfg: &ExperimentConfig, axis: SweepAxis, grid: &[f64]) -> Result<SweepTable> {
    cfg.validate()?;
    if grid.is_empty() {
        return Err(Error::Config("empty sweep grid".into()));
    }
    let mut grid: Vec<f64> = grid.to_vec();
    grid.sort_by(|a, b| a.total_cmp(b));

    let mut rows = Vec::new();
    for &g in &grid {
        let (snrs, k, u, stride, axis_value) = match axis {
            SweepAxis::Snr => (
                vec![g],
                cfg.paths_searched,
                cfg.undersampling,
                cfg.dict_stride,
                g,
            ),
            SweepAxis::K => {
                let k = int_grid_value(axis, g)?;
                (cfg.snr_db.clone(), k, cfg.undersampling, cfg.dict_stride, g)
            }
            SweepAxis::U => {
                let u = int_grid_value(axis, g)?;
                (
                    cfg.snr_db.clone(),
                    cfg.paths_searched,
                    u,
                    cfg.dict_stride,
                    g,
                )
            }
            SweepAxis::Delta => {
                let stride = int_grid_value(axis, g)?;
                // report the atom spacing in nanoseconds
                let delta_ns = stride as f64 / cfg.frame.f_s * 1e9;
                (
                    cfg.snr_db.clone(),
                    cfg.paths_searched,
                    cfg.undersampling,
                    stride,
                    delta_ns,
                )
            }
        };
        for &snr in &snrs {
            let point = (|| -> Result<(Bench, PointResult)> {
                let bench = Bench::build(cfg, snr, k, u, stride)?;
                let result = run_point(cfg, &bench)?;
                Ok((bench, result))
            })()
            .map_err(|e| {
                Error::Config(format!("sweep point {axis}={g} snr={snr} dB failed: {e}"))
            })?;
            let (_, result) = point;
            for est in &cfg.estimators {
                rows.push(SweepRow {
                    axis,
                    axis_value,
                    snr_db: snr,
                    estimator: *est,
                    mse_s2: result.mse_for(*est)?,
                    n_trials: cfg.n_trials,
                    runtime_ms: result.runtime_ms,
                });
            }
        }
    }
    Ok(SweepTable { rows })
}

fn int_grid_value(axis: SweepAxis, g: f64) -> Result<usize> {
    if g < 1.0 || g.fract() != 0.0 {
        return Err(Error::Config(format!(
            "axis {axis} needs whole grid values >= 1, got {g}"
        )));
    }
    Ok(g as usize)
}

/// Human-readable run metadata: everything nondeterministic (timestamps,
/// wall-clock runtimes) lives here, not in the CSV.
pub fn run_metadata(cfg: &ExperimentConfig, table: &SweepTable, elapsed_ms: u64) -> String {
    let unix = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let mut out = String::new();
    out.push_str("# run metadata; excluded from the determinism contract\n");
    out.push_str(&format!("finished_unix = {unix}\n"));
    out.push_str(&format!("elapsed_ms = {elapsed_ms}\n"));
    out.push_str(&format!("master_seed = {}\n", cfg.master_seed));
    out.push_str(&format!("n = {}\n", cfg.frame.n));
    out.push_str(&format!("n_trials = {}\n", cfg.n_trials));
    out.push_str(&format!(
        "estimators = {}\n",
        cfg.estimators
            .iter()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join(",")
    ));
    for r in &table.rows {
        out.push_str(&format!(
            "point axis={} value={} snr_db={} estimator={} runtime_ms={}\n",
            r.axis, r.axis_value, r.snr_db, r.estimator, r.runtime_ms
        ));
    }
    out
}
