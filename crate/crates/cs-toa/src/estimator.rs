//! TOA estimators.
//!
//! Three estimators share the job of finding the first-arrival delay:
//!
//! * [`ml_toa`] — the Nyquist-rate baseline. Separable maximum likelihood:
//!   matched-filter the received frame with the pulse, pick the strongest
//!   delays with a spacing guard, report the earliest.
//! * [`greedy_toa`] — sub-Nyquist greedy pursuit over the holographic
//!   dictionary. Each iteration selects the column best correlated with the
//!   residual, then re-projects the measurement onto everything selected so
//!   far; the earliest selected column index, scaled by the atom spacing,
//!   is the estimate.
//! * [`greedy_toa_apriori`] — the same pursuit with two priors: a range cap
//!   that truncates the searched columns, and a window that only accepts an
//!   earlier column when it stays within a bounded lead of the peak.

use crate::acquisition::Measurements;
use crate::dictionary::HolographicDictionary;
use crate::error::{Error, Result};
use crate::linalg::{dot, ls_residual, norm};
use crate::signal::{PulseSamples, ReceivedWaveform};

/// Relative residual level treated as numerically zero by the pursuit.
const RESIDUAL_FLOOR: f64 = 1e-12;

/// Matched-filter baseline configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlConfig {
    /// Number of delays to pick (L).
    pub paths: usize,
    /// Minimum spacing between picked delays, in samples. The natural
    /// choice is one pulse support.
    pub exclusion: usize,
}

impl MlConfig {
    pub fn new(paths: usize, exclusion: usize) -> Result<Self> {
        if paths == 0 || exclusion == 0 {
            return Err(Error::Parameter(
                "ML needs at least one path and a positive exclusion window".into(),
            ));
        }
        Ok(MlConfig { paths, exclusion })
    }
}

/// Greedy pursuit configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreedyConfig {
    /// Number of paths searched (K).
    pub paths: usize,
    /// Dictionary atom spacing in seconds; converts column index to time.
    pub atom_offset: f64,
}

impl GreedyConfig {
    pub fn new(paths: usize, atom_offset: f64) -> Result<Self> {
        if paths == 0 {
            return Err(Error::Parameter("must search at least one path".into()));
        }
        if !(atom_offset.is_finite() && atom_offset > 0.0) {
            return Err(Error::Parameter("atom offset must be positive".into()));
        }
        Ok(GreedyConfig { paths, atom_offset })
    }
}

/// Where the pre-peak acceptance window is anchored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WindowAnchor {
    /// Relative to the first-iteration (peak) selection.
    #[default]
    Peak,
    /// Relative to the running earliest selection.
    Running,
}

/// A-priori-constrained pursuit configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AprioriConfig {
    pub greedy: GreedyConfig,
    /// Range prior: the TOA cannot exceed this, seconds.
    pub toa_max: f64,
    /// Channel prior: the first path leads the peak by at most this, seconds.
    pub pld_max: f64,
    pub anchor: WindowAnchor,
}

impl AprioriConfig {
    pub fn new(greedy: GreedyConfig, toa_max: f64, pld_max: f64) -> Result<Self> {
        if !(toa_max.is_finite() && toa_max > 0.0) {
            return Err(Error::Parameter("toa_max must be positive".into()));
        }
        if !(pld_max.is_finite() && pld_max >= 0.0) {
            return Err(Error::Parameter("pld_max must be non-negative".into()));
        }
        Ok(AprioriConfig {
            greedy,
            toa_max,
            pld_max,
            anchor: WindowAnchor::default(),
        })
    }

    pub fn with_anchor(mut self, anchor: WindowAnchor) -> Self {
        self.anchor = anchor;
        self
    }

    /// Column cap derived from the range prior.
    pub fn column_cap(&self) -> usize {
        grid_floor(self.toa_max, self.greedy.atom_offset)
    }

    /// Acceptance window width in atoms.
    pub fn window_atoms(&self) -> usize {
        grid_floor(self.pld_max, self.greedy.atom_offset)
    }
}

// floor(x / step) with a small slack so exact grid multiples stored in f64
// do not land one bin short
fn grid_floor(x: f64, step: f64) -> usize {
    (x / step + 1e-6).floor().max(0.0) as usize
}

/// Matched-filter estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct MlEstimate {
    /// Earliest selected delay, seconds.
    pub toa: f64,
    /// Selected delays, ascending, seconds.
    pub delays: Vec<f64>,
    /// Matched-filter gains aligned with `delays`.
    pub gains: Vec<f64>,
}

/// Greedy pursuit estimate with per-iteration diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct GreedyEstimate {
    /// Earliest accepted atom index scaled by the atom spacing, seconds.
    pub toa: f64,
    /// The earliest accepted atom index.
    pub lowest_atom: usize,
    /// Atom selected at each iteration, in selection order.
    pub selected: Vec<usize>,
    /// Residual norms: entry 0 is the measurement norm, entry k the norm
    /// after the k-th projection. Never increasing.
    pub residual_norms: Vec<f64>,
}

/// Separable maximum-likelihood TOA estimation at the Nyquist rate.
///
/// Correlates the frame with the pulse at every admissible delay, greedily
/// keeps the `paths` strongest magnitudes subject to the exclusion spacing
/// (ties go to the earlier delay), and reads the gains straight off the
/// matched filter.
pub fn ml_toa(r: &ReceivedWaveform, pulse: &PulseSamples, cfg: &MlConfig) -> Result<MlEstimate> {
    let n = r.len();
    let p = pulse.len();
    if n < p {
        return Err(Error::Dimension(format!(
            "waveform of {n} samples is shorter than the pulse ({p})"
        )));
    }
    let t_s = pulse.sample_period();
    let positions = n - p + 1;
    let mf: Vec<f64> = (0..positions)
        .map(|d| dot(&r.samples[d..d + p], pulse.samples()))
        .collect();

    let mut blocked = vec![false; positions];
    let mut picks: Vec<usize> = Vec::with_capacity(cfg.paths);
    for _ in 0..cfg.paths {
        let mut best: Option<(f64, usize)> = None;
        for (d, &v) in mf.iter().enumerate() {
            if blocked[d] {
                continue;
            }
            let score = v * v;
            if best.is_none_or(|(b, _)| score > b) {
                best = Some((score, d));
            }
        }
        // a zero matched-filter output carries no path evidence; picking
        // it would only pollute the min-delay estimate on clean input
        let Some((score, d)) = best else { break };
        if score == 0.0 {
            break;
        }
        picks.push(d);
        let lo = d.saturating_sub(cfg.exclusion - 1);
        let hi = (d + cfg.exclusion).min(positions);
        for b in &mut blocked[lo..hi] {
            *b = true;
        }
    }
    if picks.is_empty() {
        return Err(Error::Degenerate(
            "no delay survived the exclusion rule".into(),
        ));
    }
    picks.sort_unstable();
    let delays: Vec<f64> = picks.iter().map(|&d| d as f64 * t_s).collect();
    let gains: Vec<f64> = picks.iter().map(|&d| mf[d]).collect();
    Ok(MlEstimate {
        toa: delays[0],
        delays,
        gains,
    })
}

/// Greedy sub-Nyquist pursuit over the full dictionary.
pub fn greedy_toa(
    y: &Measurements,
    h: &HolographicDictionary,
    cfg: &GreedyConfig,
) -> Result<GreedyEstimate> {
    let (estimate, _) = pursue(y, h, cfg.paths, cfg.atom_offset, h.len(), None, false)?;
    Ok(estimate)
}

/// [`greedy_toa`] that also returns the residual vector after every
/// iteration, for diagnostics and invariant checks.
pub fn greedy_toa_traced(
    y: &Measurements,
    h: &HolographicDictionary,
    cfg: &GreedyConfig,
) -> Result<(GreedyEstimate, Vec<Vec<f64>>)> {
    pursue(y, h, cfg.paths, cfg.atom_offset, h.len(), None, true)
}

/// Greedy pursuit constrained by the range and peak-lead priors.
///
/// Only the first `column_cap` columns are searched, and after the peak
/// iteration an earlier atom is accepted only if it does not lead the
/// anchor by more than the window. A prior that exceeds the frame reduces
/// this to [`greedy_toa`] exactly.
pub fn greedy_toa_apriori(
    y: &Measurements,
    h: &HolographicDictionary,
    cfg: &AprioriConfig,
) -> Result<GreedyEstimate> {
    let cap = cfg.column_cap().min(h.len());
    if cap == 0 {
        return Err(Error::Parameter(format!(
            "range prior {} s admits no dictionary column",
            cfg.toa_max
        )));
    }
    let window = Some((cfg.window_atoms(), cfg.anchor));
    let (estimate, _) = pursue(
        y,
        h,
        cfg.greedy.paths,
        cfg.greedy.atom_offset,
        cap,
        window,
        false,
    )?;
    Ok(estimate)
}

fn pursue(
    y: &Measurements,
    h: &HolographicDictionary,
    paths: usize,
    atom_offset: f64,
    column_cap: usize,
    window: Option<(usize, WindowAnchor)>,
    keep_residuals: bool,
) -> Result<(GreedyEstimate, Vec<Vec<f64>>)> {
    if paths == 0 {
        return Err(Error::Parameter("must search at least one path".into()));
    }
    if y.len() != h.m() {
        return Err(Error::Dimension(format!(
            "measurement has {} entries, dictionary columns have {}",
            y.len(),
            h.m()
        )));
    }
    if paths > h.m() {
        return Err(Error::Parameter(format!(
            "cannot search {paths} paths with only {} measurements",
            h.m()
        )));
    }
    if paths > column_cap {
        return Err(Error::Parameter(format!(
            "cannot select {paths} distinct atoms from {column_cap} columns"
        )));
    }

    let mut residual = y.y.clone();
    let mut residual_norms = vec![norm(&residual)];
    let mut residuals: Vec<Vec<f64>> = Vec::new();
    let mut selected: Vec<usize> = Vec::with_capacity(paths);
    let mut lowest = 0usize;
    let mut peak = 0usize;

    for iter in 0..paths {
        // once the measurement is fully explained the residual is rounding
        // dust; in exact arithmetic every further correlation would be zero,
        // so selecting from the dust would only corrupt the estimate
        if iter > 0 && residual_norms[iter] <= RESIDUAL_FLOOR * residual_norms[0] {
            break;
        }
        // strongest correlation among unselected columns; earlier column
        // wins ties via the strict comparison
        let mut best: Option<(f64, usize)> = None;
        for i in 0..column_cap {
            if selected.contains(&i) {
                continue;
            }
            let c = dot(h.col(i), &residual).abs();
            if best.is_none_or(|(b, _)| c > b) {
                best = Some((c, i));
            }
        }
        let t = best.expect("paths <= column_cap leaves a candidate").1;

        if iter == 0 {
            lowest = t;
            peak = t;
        } else if t < lowest {
            let accepted = match window {
                None => true,
                Some((omega, WindowAnchor::Peak)) => t + omega >= peak,
                Some((omega, WindowAnchor::Running)) => t + omega >= lowest,
            };
            if accepted {
                lowest = t;
            }
        }

        selected.push(t);
        let cols: Vec<&[f64]> = selected.iter().map(|&i| h.col(i)).collect();
        residual = ls_residual(&cols, &y.y);
        residual_norms.push(norm(&residual));
        if keep_residuals {
            residuals.push(residual.clone());
        }
    }

    Ok((
        GreedyEstimate {
            toa: lowest as f64 * atom_offset,
            lowest_atom: lowest,
            selected,
            residual_norms,
        },
        residuals,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::acquisition::{awgn, project, MeasurementMatrix};
    use crate::channel::ChannelRealization;
    use crate::dictionary::{build_dictionary, holographic, HolographicDictionary};
    use crate::rng::{substream, Stream};
    use crate::signal::{gaussian2_pulse, synthesize_received, FrameConfig};

    const GHZ8: f64 = 8.0e9;
    const NS: f64 = 1e-9;

    fn small_frame() -> FrameConfig {
        FrameConfig::new(32.0 * NS, GHZ8, 1.0, 0.0).unwrap() // N = 256
    }

    fn single_path_wave(cfg: &FrameConfig, d: usize, gain: f64) -> ReceivedWaveform {
        let pulse = gaussian2_pulse(NS, GHZ8).unwrap();
        let ch =
            ChannelRealization::from_taps(vec![(d as f64 * cfg.sample_period(), gain)]).unwrap();
        synthesize_received(&pulse, &ch, cfg).unwrap()
    }

    #[test]
    fn ml_finds_a_clean_single_path_exactly() {
        let cfg = small_frame();
        let pulse = gaussian2_pulse(NS, GHZ8).unwrap();
        let wave = single_path_wave(&cfg, 40, 1.0);
        let est = ml_toa(&wave, &pulse, &MlConfig::new(1, pulse.len()).unwrap()).unwrap();
        assert_eq!(est.toa, 40.0 * cfg.sample_period());
        assert_eq!(est.delays.len(), 1);
    }

    #[test]
    fn ml_two_paths_match_exhaustive_pair_search() {
        let cfg = small_frame();
        let pulse = gaussian2_pulse(NS, GHZ8).unwrap();
        let t_s = cfg.sample_period();
        let g = 0.5f64.sqrt();
        let ch = ChannelRealization::from_taps(vec![(40.0 * t_s, g), (100.0 * t_s, g)]).unwrap();
        let wave = synthesize_received(&pulse, &ch, &cfg).unwrap();
        let p = pulse.len();
        let est = ml_toa(&wave, &pulse, &MlConfig::new(2, p).unwrap()).unwrap();

        // exhaustive oracle over all spaced delay pairs on this small frame
        let positions = wave.len() - p + 1;
        let mf: Vec<f64> = (0..positions)
            .map(|d| dot(&wave.samples[d..d + p], pulse.samples()))
            .collect();
        let mut best = (f64::NEG_INFINITY, 0usize, 0usize);
        for d1 in 0..positions {
            for d2 in d1 + p..positions {
                let score = mf[d1] * mf[d1] + mf[d2] * mf[d2];
                if score > best.0 {
                    best = (score, d1, d2);
                }
            }
        }
        assert_eq!(est.delays[0], best.1 as f64 * t_s);
        assert_eq!(est.delays[1], best.2 as f64 * t_s);
        assert_eq!(est.toa, 40.0 * t_s);
        // matched-filter gains recover both path gains on clean input
        for gain in &est.gains {
            assert!((gain - g).abs() < 1e-10, "gain {gain}");
        }
    }

    #[test]
    fn ml_accepts_the_reference_operating_point() {
        let cfg = FrameConfig::new(200.0 * NS, GHZ8, 1.0, 80.0 * NS).unwrap();
        let pulse = gaussian2_pulse(NS, GHZ8).unwrap();
        let wave = single_path_wave(&cfg, 300, 1.0);
        let est = ml_toa(&wave, &pulse, &MlConfig::new(10, pulse.len()).unwrap()).unwrap();
        assert_eq!(est.toa, 300.0 * cfg.sample_period());
    }

    #[test]
    fn ml_recovers_every_separable_path_exactly() {
        // noiseless, non-overlapping pulses on the grid: the matched filter
        // must hand back all five delays and gains untouched
        let cfg = FrameConfig::new(200.0 * NS, GHZ8, 1.0, 80.0 * NS).unwrap();
        let pulse = gaussian2_pulse(NS, GHZ8).unwrap();
        let t_s = cfg.sample_period();
        let delays = [30usize, 100, 340, 900, 1500];
        let gains = [0.9, -0.2, 0.25, -0.15, 0.17];
        let taps: Vec<(f64, f64)> = delays
            .iter()
            .zip(&gains)
            .map(|(&d, &g)| (d as f64 * t_s, g))
            .collect();
        let scale = gains.iter().map(|g| g * g).sum::<f64>().sqrt();
        let ch = ChannelRealization::from_taps(taps).unwrap();
        let wave = synthesize_received(&pulse, &ch, &cfg).unwrap();

        let est = ml_toa(&wave, &pulse, &MlConfig::new(5, pulse.len()).unwrap()).unwrap();
        let expect: Vec<f64> = delays.iter().map(|&d| d as f64 * t_s).collect();
        assert_eq!(est.delays, expect);
        assert_eq!(est.toa, expect[0]);
        for (gain, g) in est.gains.iter().zip(&gains) {
            assert!((gain - g / scale).abs() < 1e-10);
        }
    }

    #[test]
    fn ml_rejects_short_waveforms() {
        let pulse = gaussian2_pulse(NS, GHZ8).unwrap();
        let short = ReceivedWaveform {
            samples: vec![0.0; 4],
            true_toa: 0.0,
        };
        assert!(ml_toa(&short, &pulse, &MlConfig::new(1, 8).unwrap()).is_err());
    }

    fn nyquist_setup(cfg: &FrameConfig) -> (HolographicDictionary, f64) {
        let pulse = gaussian2_pulse(NS, GHZ8).unwrap();
        let dict = build_dictionary(&pulse, cfg, 1).unwrap();
        let phi = MeasurementMatrix::identity(cfg.n);
        let h = holographic(&phi, &dict).unwrap();
        let offset = dict.offset();
        (h, offset)
    }

    #[test]
    fn greedy_single_path_nyquist_is_exact() {
        let cfg = small_frame();
        let (h, offset) = nyquist_setup(&cfg);
        let wave = single_path_wave(&cfg, 25, 1.0);
        let y = project(&MeasurementMatrix::identity(cfg.n), &wave).unwrap();
        let est = greedy_toa(&y, &h, &GreedyConfig::new(1, offset).unwrap()).unwrap();
        assert_eq!(est.toa, 25.0 * cfg.sample_period());
        assert_eq!(est.selected, vec![25]);
    }

    #[test]
    fn greedy_second_iteration_recovers_the_weak_early_path() {
        let cfg = small_frame();
        let pulse = gaussian2_pulse(NS, GHZ8).unwrap();
        let t_s = cfg.sample_period();
        let ch = ChannelRealization::from_taps(vec![(30.0 * t_s, 0.4), (90.0 * t_s, 0.9)]).unwrap();
        let wave = synthesize_received(&pulse, &ch, &cfg).unwrap();

        let dict = build_dictionary(&pulse, &cfg, 1).unwrap();
        let mut rng = substream(31, 0, Stream::Measurement);
        let phi = MeasurementMatrix::gaussian(cfg.n / 2, cfg.n, &mut rng).unwrap();
        let h = holographic(&phi, &dict).unwrap();
        let y = project(&phi, &wave).unwrap();

        let est = greedy_toa(&y, &h, &GreedyConfig::new(2, dict.offset()).unwrap()).unwrap();
        assert_eq!(est.lowest_atom, 30);
        assert_eq!(est.toa, 30.0 * dict.offset());

        // brute-force 2-sparse least squares over all atom pairs agrees on
        // the selected support
        let mut best = (f64::INFINITY, 0usize, 0usize);
        for i in 0..h.len() {
            for j in i + 1..h.len() {
                let e = crate::linalg::ls_residual(&[h.col(i), h.col(j)], &y.y);
                let r = norm(&e);
                if r < best.0 {
                    best = (r, i, j);
                }
            }
        }
        let mut sel = est.selected.clone();
        sel.sort_unstable();
        assert_eq!(sel, vec![best.1, best.2]);
    }

    #[test]
    fn greedy_reference_operating_point_runs() {
        let cfg = FrameConfig::new(200.0 * NS, GHZ8, 1.0, 80.0 * NS).unwrap();
        let pulse = gaussian2_pulse(NS, GHZ8).unwrap();
        let dict = build_dictionary(&pulse, &cfg, 1).unwrap();
        let mut rng = substream(32, 0, Stream::Measurement);
        let phi = MeasurementMatrix::gaussian(400, 1600, &mut rng).unwrap(); // U = 4
        let h = holographic(&phi, &dict).unwrap();
        let wave = single_path_wave(&cfg, 200, 1.0);
        let y = project(&phi, &wave).unwrap();
        let est = greedy_toa(&y, &h, &GreedyConfig::new(5, dict.offset()).unwrap()).unwrap();
        // a clean single path is fully explained by one atom, so the pursuit
        // hits its numerical-zero floor instead of burning all five picks
        assert_eq!(est.lowest_atom, 200);
        assert_eq!(est.toa, 200.0 * dict.offset());
        assert_eq!(est.lowest_atom, *est.selected.iter().min().unwrap());
    }

    #[test]
    fn greedy_selections_are_distinct_and_residuals_monotone() {
        let cfg = small_frame();
        let pulse = gaussian2_pulse(NS, GHZ8).unwrap();
        let dict = build_dictionary(&pulse, &cfg, 1).unwrap();
        let mut rng = substream(33, 0, Stream::Measurement);
        let phi = MeasurementMatrix::gaussian(64, 256, &mut rng).unwrap();
        let h = holographic(&phi, &dict).unwrap();

        for trial in 0..20u64 {
            let t_s = cfg.sample_period();
            let ch =
                ChannelRealization::from_taps(vec![(12.0 * t_s, 0.7), (60.0 * t_s, 0.7)]).unwrap();
            let wave = synthesize_received(&pulse, &ch, &cfg).unwrap();
            let noisy = awgn(&wave, 8.0, &mut substream(33, trial, Stream::Noise));
            let y = project(&phi, &noisy).unwrap();
            let (est, residuals) =
                greedy_toa_traced(&y, &h, &GreedyConfig::new(6, dict.offset()).unwrap()).unwrap();

            let mut sorted = est.selected.clone();
            sorted.sort_unstable();
            sorted.dedup();
            assert_eq!(sorted.len(), est.selected.len(), "duplicate selection");

            for w in est.residual_norms.windows(2) {
                assert!(w[1] <= w[0] + 1e-12, "residual grew: {} -> {}", w[0], w[1]);
            }
            // orthogonality of each residual to everything selected so far
            for (k, e_k) in residuals.iter().enumerate() {
                for &i in &est.selected[..=k] {
                    assert!(dot(h.col(i), e_k).abs() < 1e-9);
                }
            }
            assert_eq!(est.lowest_atom, *est.selected.iter().min().unwrap());
        }
    }

    #[test]
    fn greedy_is_scale_invariant() {
        let cfg = small_frame();
        let (h, offset) = nyquist_setup(&cfg);
        let wave = single_path_wave(&cfg, 77, 1.0);
        let noisy = awgn(&wave, 12.0, &mut substream(34, 0, Stream::Noise));
        let y = project(&MeasurementMatrix::identity(cfg.n), &noisy).unwrap();
        let base = greedy_toa(&y, &h, &GreedyConfig::new(3, offset).unwrap()).unwrap();
        for scale in [1e-3, 0.5, 42.0, 1e6] {
            let scaled = Measurements {
                y: y.y.iter().map(|v| v * scale).collect(),
                snr_db: y.snr_db,
                seed: y.seed,
            };
            let est = greedy_toa(&scaled, &h, &GreedyConfig::new(3, offset).unwrap()).unwrap();
            assert_eq!(est.selected, base.selected, "scale {scale}");
            assert_eq!(est.toa, base.toa);
        }
    }

    #[test]
    fn apriori_window_rejects_paths_leading_the_peak_too_far() {
        // paths at atoms 30 (weak) and 90 (strong); a 10-atom window about
        // the peak must refuse the early path even though it is earlier
        let cfg = small_frame();
        let pulse = gaussian2_pulse(NS, GHZ8).unwrap();
        let t_s = cfg.sample_period();
        let ch = ChannelRealization::from_taps(vec![(30.0 * t_s, 0.4), (90.0 * t_s, 0.9)]).unwrap();
        let wave = synthesize_received(&pulse, &ch, &cfg).unwrap();
        let dict = build_dictionary(&pulse, &cfg, 1).unwrap();
        let mut rng = substream(35, 0, Stream::Measurement);
        let phi = MeasurementMatrix::gaussian(128, 256, &mut rng).unwrap();
        let h = holographic(&phi, &dict).unwrap();
        let y = project(&phi, &wave).unwrap();

        let greedy = GreedyConfig::new(2, dict.offset()).unwrap();
        let cfg_apr = AprioriConfig::new(greedy, cfg.t_f, 10.0 * dict.offset()).unwrap();
        let est = greedy_toa_apriori(&y, &h, &cfg_apr).unwrap();
        assert_eq!(est.lowest_atom, 90);
        assert_eq!(est.toa, 90.0 * dict.offset());

        // and with a window wide enough the early path is accepted again
        let wide = AprioriConfig::new(greedy, cfg.t_f, 70.0 * dict.offset()).unwrap();
        let est = greedy_toa_apriori(&y, &h, &wide).unwrap();
        assert_eq!(est.lowest_atom, 30);
    }

    #[test]
    fn range_prior_caps_the_searched_columns() {
        let cfg = small_frame();
        let (h, offset) = nyquist_setup(&cfg);
        // true path beyond the prior: the estimate stays inside the cap
        let wave = single_path_wave(&cfg, 120, 1.0);
        let y = project(&MeasurementMatrix::identity(cfg.n), &wave).unwrap();
        let greedy = GreedyConfig::new(2, offset).unwrap();
        let cap = AprioriConfig::new(greedy, 50.0 * offset, 20.0 * offset).unwrap();
        assert_eq!(cap.column_cap(), 50);
        let est = greedy_toa_apriori(&y, &h, &cap).unwrap();
        assert!(est.toa <= 50.0 * offset);
        for &i in &est.selected {
            assert!(i < 50);
        }
    }

    #[test]
    fn unbounded_priors_reduce_to_the_plain_pursuit() {
        let cfg = small_frame();
        let pulse = gaussian2_pulse(NS, GHZ8).unwrap();
        let dict = build_dictionary(&pulse, &cfg, 1).unwrap();
        let mut rng = substream(36, 0, Stream::Measurement);
        let phi = MeasurementMatrix::gaussian(64, 256, &mut rng).unwrap();
        let h = holographic(&phi, &dict).unwrap();
        let t_s = cfg.sample_period();
        for trial in 0..10u64 {
            let ch =
                ChannelRealization::from_taps(vec![(9.0 * t_s, 0.5), (50.0 * t_s, 0.86)]).unwrap();
            let wave = synthesize_received(&pulse, &ch, &cfg).unwrap();
            let noisy = awgn(&wave, 10.0, &mut substream(36, trial, Stream::Noise));
            let y = project(&phi, &noisy).unwrap();
            let greedy_cfg = GreedyConfig::new(4, dict.offset()).unwrap();
            let plain = greedy_toa(&y, &h, &greedy_cfg).unwrap();
            let apriori = greedy_toa_apriori(
                &y,
                &h,
                &AprioriConfig::new(greedy_cfg, cfg.t_f, cfg.t_f).unwrap(),
            )
            .unwrap();
            assert_eq!(plain.selected, apriori.selected);
            assert_eq!(plain.toa, apriori.toa);
        }
    }

    #[test]
    fn running_anchor_is_available_behind_the_flag() {
        let cfg = small_frame();
        let (h, offset) = nyquist_setup(&cfg);
        let wave = single_path_wave(&cfg, 42, 1.0);
        let y = project(&MeasurementMatrix::identity(cfg.n), &wave).unwrap();
        let greedy = GreedyConfig::new(1, offset).unwrap();
        let cfg_apr = AprioriConfig::new(greedy, cfg.t_f, 5.0 * offset)
            .unwrap()
            .with_anchor(WindowAnchor::Running);
        let est = greedy_toa_apriori(&y, &h, &cfg_apr).unwrap();
        assert_eq!(est.lowest_atom, 42);
    }

    #[test]
    fn pursuit_validates_preconditions() {
        let cfg = small_frame();
        let (h, offset) = nyquist_setup(&cfg);
        let wave = single_path_wave(&cfg, 10, 1.0);
        let y = project(&MeasurementMatrix::identity(cfg.n), &wave).unwrap();
        // more paths than measurements
        assert!(greedy_toa(
            &y,
            &h,
            &GreedyConfig {
                paths: cfg.n + 1,
                atom_offset: offset
            }
        )
        .is_err());
        // zero-width range prior
        let greedy = GreedyConfig::new(1, offset).unwrap();
        let too_small = AprioriConfig::new(greedy, 0.1 * offset, offset).unwrap();
        assert!(greedy_toa_apriori(&y, &h, &too_small).is_err());
        // mismatched measurement length
        let short = Measurements {
            y: vec![0.0; 8],
            snr_db: f64::INFINITY,
            seed: 0,
        };
        assert!(greedy_toa(&short, &h, &greedy).is_err());
    }
}
