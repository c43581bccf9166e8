//! Stochastic multipath channel: Poisson cluster arrivals, Poisson ray
//! arrivals inside each cluster, double-exponential mean power decay, and
//! configurable small-scale fading. Also derives the a-priori statistics
//! (how many significant paths precede the strongest one, and how far the
//! peak lags the first arrival) that the windowed estimator exploits.
//!
//! All times are in seconds; the config layer converts from the
//! nanosecond-denominated parameter files.

use std::collections::BTreeMap;

use rand::{Rng, RngExt};
use rand_distr::{Distribution, Exp, Gamma};

use crate::error::{Error, Result};
use crate::rng::{substream, Stream};

/// Relative power floor: taps weaker than this fraction of the strongest
/// tap are discarded before normalization.
const TAP_POWER_FLOOR: f64 = 1e-6;

const MAX_SAMPLE_RETRIES: usize = 8;

/// Small-scale fading law for tap powers about the mean profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FadingLaw {
    /// Power ~ Gamma(m, mean/m); `m = 1` is the Rayleigh-equivalent
    /// exponential-power case, larger `m` fades less.
    Nakagami { m: f64 },
    /// Deterministic powers equal to the mean profile.
    None,
}

/// Cluster/ray arrival and decay parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelParams {
    /// Poisson cluster arrival rate, 1/s.
    pub cluster_rate: f64,
    /// First ray-arrival rate of the two-rate mixture, 1/s.
    pub ray_rate_1: f64,
    /// Second ray-arrival rate of the mixture, 1/s.
    pub ray_rate_2: f64,
    /// Probability of drawing a ray inter-arrival from `ray_rate_1`.
    pub mixture_beta: f64,
    /// Inter-cluster power decay constant, s.
    pub cluster_decay: f64,
    /// Intra-cluster power decay constant, s.
    pub ray_decay: f64,
    /// Excess-delay cap: no tap is generated beyond this, s.
    pub max_delay: f64,
    /// Small-scale fading law.
    pub fading: FadingLaw,
    /// Seed for standalone statistics runs (the Monte-Carlo harness keys
    /// streams off its own master seed instead).
    pub rng_seed: u64,
}

impl ChannelParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("cluster_rate", self.cluster_rate),
            ("ray_rate_1", self.ray_rate_1),
            ("ray_rate_2", self.ray_rate_2),
            ("cluster_decay", self.cluster_decay),
            ("ray_decay", self.ray_decay),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Parameter(format!(
                    "channel parameter {name} must be positive and finite, got {v}"
                )));
            }
        }
        if !(0.0..=1.0).contains(&self.mixture_beta) {
            return Err(Error::Parameter(format!(
                "mixture_beta must lie in [0, 1], got {}",
                self.mixture_beta
            )));
        }
        if !(self.max_delay.is_finite() && self.max_delay >= 0.0) {
            return Err(Error::Parameter(format!(
                "max_delay must be non-negative and finite, got {}",
                self.max_delay
            )));
        }
        if let FadingLaw::Nakagami { m } = self.fading {
            if !(m.is_finite() && m > 0.0) {
                return Err(Error::Parameter(format!(
                    "Nakagami m must be positive and finite, got {m}"
                )));
            }
        }
        Ok(())
    }
}

/// One multipath tap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tap {
    /// Delay in seconds.
    pub delay: f64,
    /// Real gain; the tap power is `gain^2`.
    pub gain: f64,
}

/// A channel realization: taps sorted by strictly increasing delay, gains
/// normalized to unit total power, TOA equal to the first tap's delay.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    taps: Vec<Tap>,
    toa: f64,
}

impl ChannelRealization {
    /// Build a realization from `(delay_s, gain)` pairs. Delays must be
    /// non-negative and strictly increasing; gains are rescaled to unit
    /// total power.
    pub fn from_taps(taps: Vec<(f64, f64)>) -> Result<Self> {
        if taps.is_empty() {
            return Err(Error::Degenerate(
                "realization needs at least one tap".into(),
            ));
        }
        for w in taps.windows(2) {
            let increasing = w[1].0.is_finite() && w[1].0 > w[0].0;
            if !increasing {
                return Err(Error::Parameter(format!(
                    "tap delays must be strictly increasing ({} then {})",
                    w[0].0, w[1].0
                )));
            }
        }
        if taps[0].0 < 0.0 {
            return Err(Error::Parameter("tap delays must be non-negative".into()));
        }
        let total: f64 = taps.iter().map(|(_, g)| g * g).sum();
        if !(total.is_finite() && total > 0.0) {
            return Err(Error::Degenerate("taps carry no energy".into()));
        }
        let scale = total.sqrt().recip();
        let taps: Vec<Tap> = taps
            .into_iter()
            .map(|(delay, gain)| Tap {
                delay,
                gain: gain * scale,
            })
            .collect();
        let toa = taps[0].delay;
        Ok(ChannelRealization { taps, toa })
    }

    pub fn taps(&self) -> &[Tap] {
        &self.taps
    }

    /// Tap count L.
    pub fn len(&self) -> usize {
        self.taps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taps.is_empty()
    }

    /// First-arrival delay, seconds.
    pub fn toa(&self) -> f64 {
        self.toa
    }

    /// Total power, unity after construction.
    pub fn energy(&self) -> f64 {
        self.taps.iter().map(|t| t.gain * t.gain).sum()
    }

    /// The same realization delayed by `offset` seconds.
    pub fn shifted(&self, offset: f64) -> Self {
        ChannelRealization {
            taps: self
                .taps
                .iter()
                .map(|t| Tap {
                    delay: t.delay + offset,
                    gain: t.gain,
                })
                .collect(),
            toa: self.toa + offset,
        }
    }

    /// Index of the strongest tap; earlier tap wins a tie.
    pub fn peak_index(&self) -> usize {
        let mut best = 0;
        let mut best_p = f64::NEG_INFINITY;
        for (i, t) in self.taps.iter().enumerate() {
            let p = t.gain * t.gain;
            if p > best_p {
                best_p = p;
                best = i;
            }
        }
        best
    }
}

/// Cluster arrival times: the first cluster at t = 0 (it carries the
/// line-of-sight ray), later ones from a Poisson process truncated at the
/// delay cap.
pub fn sample_cluster_times(params: &ChannelParams, rng: &mut impl Rng) -> Vec<f64> {
    let exp = Exp::new(params.cluster_rate).expect("validated rate");
    let mut times = Vec::new();
    let mut t = 0.0;
    while t <= params.max_delay {
        times.push(t);
        t += exp.sample(rng);
    }
    times
}

/// Draw one channel realization.
pub fn sample_channel(params: &ChannelParams, rng: &mut impl Rng) -> Result<ChannelRealization> {
    params.validate()?;
    for _ in 0..MAX_SAMPLE_RETRIES {
        if let Some(real) = try_sample(params, rng) {
            return Ok(real);
        }
    }
    Err(Error::Degenerate(format!(
        "channel sampling produced no usable taps after {MAX_SAMPLE_RETRIES} attempts"
    )))
}

fn try_sample(params: &ChannelParams, rng: &mut impl Rng) -> Option<ChannelRealization> {
    let ray_1 = Exp::new(params.ray_rate_1).expect("validated rate");
    let ray_2 = Exp::new(params.ray_rate_2).expect("validated rate");

    let clusters = sample_cluster_times(params, rng);
    let mut raw: Vec<(f64, f64)> = Vec::new();
    for &t_c in &clusters {
        let mut gamma = 0.0; // first ray rides the cluster front
        while t_c + gamma <= params.max_delay {
            let mean_power = (-t_c / params.cluster_decay - gamma / params.ray_decay).exp();
            let power = match params.fading {
                FadingLaw::Nakagami { m } => Gamma::new(m, mean_power / m)
                    .expect("validated shape")
                    .sample(rng),
                FadingLaw::None => mean_power,
            };
            let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
            raw.push((t_c + gamma, sign * power.sqrt()));
            let step = if rng.random::<f64>() < params.mixture_beta {
                ray_1.sample(rng)
            } else {
                ray_2.sample(rng)
            };
            gamma += step;
        }
    }

    raw.sort_by(|a, b| a.0.total_cmp(&b.0));
    // merge any exact-duplicate delays so the sort invariant is strict
    let mut merged: Vec<(f64, f64)> = Vec::with_capacity(raw.len());
    for (delay, gain) in raw {
        match merged.last_mut() {
            Some(last) if last.0 == delay => last.1 += gain,
            _ => merged.push((delay, gain)),
        }
    }

    let peak = merged.iter().map(|(_, g)| g * g).fold(0.0f64, f64::max);
    if !(peak.is_finite() && peak > 0.0) {
        return None;
    }
    let kept: Vec<(f64, f64)> = merged
        .into_iter()
        .filter(|(_, g)| g * g >= TAP_POWER_FLOOR * peak)
        .collect();
    ChannelRealization::from_taps(kept).ok()
}

/// Smallest set of taps, greedy by descending power, whose cumulative power
/// reaches the requested fraction of the total. Returned indices ascend.
pub fn significant_paths(ch: &ChannelRealization, energy_fraction: f64) -> Result<Vec<usize>> {
    if !(energy_fraction > 0.0 && energy_fraction <= 1.0) {
        return Err(Error::Parameter(format!(
            "energy fraction must lie in (0, 1], got {energy_fraction}"
        )));
    }
    let total: f64 = ch.taps.iter().map(|t| t.gain * t.gain).sum();
    let mut order: Vec<usize> = (0..ch.len()).collect();
    // stable sort: equal powers keep delay order, so ties break earlier
    order.sort_by(|&a, &b| {
        (ch.taps[b].gain * ch.taps[b].gain).total_cmp(&(ch.taps[a].gain * ch.taps[a].gain))
    });
    let mut cum = 0.0;
    let mut picked = Vec::new();
    for &i in &order {
        picked.push(i);
        cum += ch.taps[i].gain * ch.taps[i].gain;
        if cum >= energy_fraction * total {
            break;
        }
    }
    picked.sort_unstable();
    Ok(picked)
}

/// Histogram with uniform bins over `[0, n_bins * bin_width)`, normalized
/// so the densities integrate to one.
#[derive(Debug, Clone, PartialEq)]
pub struct DelayHistogram {
    pub bin_width: f64,
    pub densities: Vec<f64>,
}

impl DelayHistogram {
    pub fn integral(&self) -> f64 {
        self.densities.iter().sum::<f64>() * self.bin_width
    }

    /// Probability mass at delays strictly greater than `threshold` seconds,
    /// counting whole bins at or beyond it.
    pub fn mass_above(&self, threshold: f64) -> f64 {
        self.densities
            .iter()
            .enumerate()
            .filter(|(i, _)| *i as f64 * self.bin_width >= threshold)
            .map(|(_, d)| d * self.bin_width)
            .sum()
    }
}

/// Aggregated a-priori statistics over many realizations.
#[derive(Debug, Clone, PartialEq)]
pub struct AprioriStats {
    /// PMF of the number of significant paths arriving before the peak.
    pub lambda_pmf: BTreeMap<usize, f64>,
    /// Density of the peak-to-first-path delay.
    pub pld_histogram: DelayHistogram,
    /// Energy fraction defining path significance.
    pub energy_fraction: f64,
}

impl AprioriStats {
    pub fn lambda_probability(&self, lambda: usize) -> f64 {
        self.lambda_pmf.get(&lambda).copied().unwrap_or(0.0)
    }
}

/// Estimate the a-priori statistics from `n_realizations` fresh channel
/// draws, seeded from `params.rng_seed`. Histogram bins are one sample of
/// the supplied grid rate wide, so pass a scaled rate for coarser bins.
pub fn apriori_stats(
    params: &ChannelParams,
    n_realizations: usize,
    energy_fraction: f64,
    f_s: f64,
) -> Result<AprioriStats> {
    params.validate()?;
    if n_realizations == 0 {
        return Err(Error::Parameter("need at least one realization".into()));
    }
    if !(f_s.is_finite() && f_s > 0.0) {
        return Err(Error::Parameter("grid rate must be positive".into()));
    }
    let bin_width = 1.0 / f_s;
    let n_bins = (params.max_delay / bin_width).floor() as usize + 1;
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    let mut bins = vec![0usize; n_bins];

    for i in 0..n_realizations {
        let mut rng = substream(params.rng_seed, i as u64, Stream::Channel);
        let ch = sample_channel(params, &mut rng)?;
        let peak = ch.peak_index();
        let peak_delay = ch.taps()[peak].delay;
        let significant = significant_paths(&ch, energy_fraction)?;
        let lambda = significant
            .iter()
            .filter(|&&i| ch.taps()[i].delay < peak_delay)
            .count();
        *counts.entry(lambda).or_insert(0) += 1;
        let pld = peak_delay - ch.toa();
        let bin = ((pld / bin_width).floor() as usize).min(n_bins - 1);
        bins[bin] += 1;
    }

    let n = n_realizations as f64;
    Ok(AprioriStats {
        lambda_pmf: counts.into_iter().map(|(k, c)| (k, c as f64 / n)).collect(),
        pld_histogram: DelayHistogram {
            bin_width,
            densities: bins.iter().map(|&c| c as f64 / (n * bin_width)).collect(),
        },
        energy_fraction,
    })
}
