//! Randomized property checks for the core invariants.

use proptest::prelude::*;

use cs_toa::acquisition::{project, MeasurementMatrix, Measurements};
use cs_toa::channel::{significant_paths, ChannelRealization};
use cs_toa::dictionary::{build_dictionary, holographic};
use cs_toa::estimator::{greedy_toa, GreedyConfig};
use cs_toa::harness::mse;
use cs_toa::linalg::{dot, ls_residual, norm};
use cs_toa::rng::{substream, Stream};
use cs_toa::signal::{gaussian2_pulse, synthesize_received, FrameConfig, ReceivedWaveform};

fn randn_vec(seed: u64, ctx: u64, n: usize) -> Vec<f64> {
    use rand_distr::{Distribution, StandardNormal};
    let mut rng = substream(seed, ctx, Stream::Noise);
    (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pulse_has_unit_energy_and_symmetry(
        width_ps in 250u32..4000,
        f_s_mhz in 2_000u32..20_000,
    ) {
        let width = width_ps as f64 * 1e-12;
        let f_s = f_s_mhz as f64 * 1e6;
        prop_assume!(width * f_s >= 2.0);
        prop_assume!(width * f_s <= 256.0);
        let pulse = gaussian2_pulse(width, f_s).unwrap();
        prop_assert!((pulse.energy() - 1.0).abs() < 1e-12);
        let w = pulse.samples();
        for i in 0..w.len() {
            prop_assert!((w[i] - w[w.len() - 1 - i]).abs() < 1e-12);
        }
    }

    #[test]
    fn mse_matches_independent_accumulation(
        pairs in prop::collection::vec((-100.0f64..100.0, -100.0f64..100.0), 1..200)
    ) {
        let truths: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let ests: Vec<f64> = pairs.iter().map(|p| p.1).collect();
        let fast = mse(&truths, &ests).unwrap();
        let mut acc = 0.0;
        for i in (0..pairs.len()).rev() {
            acc += (truths[i] - ests[i]) * (truths[i] - ests[i]);
        }
        let slow = acc / pairs.len() as f64;
        let scale = fast.abs().max(slow.abs()).max(1e-300);
        prop_assert!((fast - slow).abs() / scale < 1e-12);
    }

    #[test]
    fn projection_is_linear(seed in 0u64..1000, a in -5.0f64..5.0, b in -5.0f64..5.0) {
        let phi = MeasurementMatrix::gaussian(
            8,
            24,
            &mut substream(seed, 0, Stream::Measurement),
        )
        .unwrap();
        let r1 = randn_vec(seed, 1, 24);
        let r2 = randn_vec(seed, 2, 24);
        let combo: Vec<f64> = r1.iter().zip(&r2).map(|(x, y)| a * x + b * y).collect();
        let wave = |samples: Vec<f64>| ReceivedWaveform { samples, true_toa: 0.0 };
        let y1 = project(&phi, &wave(r1)).unwrap();
        let y2 = project(&phi, &wave(r2)).unwrap();
        let yc = project(&phi, &wave(combo)).unwrap();
        for i in 0..8 {
            let expect = a * y1.y[i] + b * y2.y[i];
            prop_assert!((yc.y[i] - expect).abs() <= 1e-10 * expect.abs().max(1.0));
        }
    }

    #[test]
    fn residual_is_orthogonal_and_no_longer_than_input(
        seed in 0u64..1000,
        k in 1usize..5,
    ) {
        let m = 16usize;
        let cols: Vec<Vec<f64>> = (0..k).map(|i| randn_vec(seed, 10 + i as u64, m)).collect();
        let refs: Vec<&[f64]> = cols.iter().map(|c| c.as_slice()).collect();
        let y = randn_vec(seed, 99, m);
        let e = ls_residual(&refs, &y);
        prop_assert!(norm(&e) <= norm(&y) * (1.0 + 1e-12));
        for c in &refs {
            prop_assert!(dot(c, &e).abs() < 1e-9);
        }
    }

    #[test]
    fn greedy_estimate_is_scale_invariant(seed in 0u64..300, scale in 1e-6f64..1e6) {
        let f_s = 8.0e9;
        let frame = FrameConfig::new(8.0e-9, f_s, 1.0, 0.0).unwrap(); // N = 64
        let pulse = gaussian2_pulse(1e-9, f_s).unwrap();
        let dict = build_dictionary(&pulse, &frame, 1).unwrap();
        let phi = MeasurementMatrix::gaussian(
            32,
            64,
            &mut substream(seed, 0, Stream::Measurement),
        )
        .unwrap();
        let holo = holographic(&phi, &dict).unwrap();
        let ch = ChannelRealization::from_taps(vec![(10.0 / f_s, 0.6), (41.0 / f_s, 0.8)]).unwrap();
        let wave = synthesize_received(&pulse, &ch, &frame).unwrap();
        let noisy = ReceivedWaveform {
            samples: wave
                .samples
                .iter()
                .zip(randn_vec(seed, 1, 64))
                .map(|(s, n)| s + 0.05 * n)
                .collect(),
            true_toa: wave.true_toa,
        };
        let y = project(&phi, &noisy).unwrap();
        let cfg = GreedyConfig::new(3, dict.offset()).unwrap();
        let base = greedy_toa(&y, &holo, &cfg).unwrap();
        let scaled = Measurements {
            y: y.y.iter().map(|v| v * scale).collect(),
            snr_db: y.snr_db,
            seed: y.seed,
        };
        let est = greedy_toa(&scaled, &holo, &cfg).unwrap();
        prop_assert_eq!(est.selected, base.selected);
        prop_assert_eq!(est.toa, base.toa);
    }

    #[test]
    fn significant_path_sets_are_minimal_prefixes_of_energy(
        powers in prop::collection::vec(1e-4f64..1.0, 1..20),
        fraction in 0.05f64..1.0,
    ) {
        let taps: Vec<(f64, f64)> = powers
            .iter()
            .enumerate()
            .map(|(i, p)| (i as f64 * 2e-9, p.sqrt()))
            .collect();
        let ch = ChannelRealization::from_taps(taps).unwrap();
        let picked = significant_paths(&ch, fraction).unwrap();
        let total: f64 = ch.taps().iter().map(|t| t.gain * t.gain).sum();
        let picked_energy: f64 = picked.iter().map(|&i| {
            let g = ch.taps()[i].gain;
            g * g
        }).sum();
        prop_assert!(picked_energy >= fraction * total - 1e-12);
        // greedy minimality: dropping the weakest selected tap dips below
        if picked.len() > 1 {
            let weakest: f64 = picked
                .iter()
                .map(|&i| ch.taps()[i].gain.powi(2))
                .fold(f64::INFINITY, f64::min);
            prop_assert!(picked_energy - weakest < fraction * total);
        }
    }
}
