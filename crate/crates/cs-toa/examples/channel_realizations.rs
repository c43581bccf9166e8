//! Draw CM1 channel realizations, print one, and estimate the first-path
//! statistics that motivate the windowed estimator: how often no
//! significant path precedes the strongest one, and how far the peak can
//! lag the first arrival.
//!
//! ```bash
//! cargo run -p cs-toa --example channel_realizations
//! ```

use cs_toa::channel::{apriori_stats, sample_channel, significant_paths};
use cs_toa::config::default_channel;
use cs_toa::rng::{substream, Stream};

fn main() {
    let params = default_channel();

    let mut rng = substream(params.rng_seed, 0, Stream::Channel);
    let ch = sample_channel(&params, &mut rng).unwrap();
    println!(
        "one realization: {} taps, toa = {:.2} ns, total power {:.6}",
        ch.len(),
        ch.toa() * 1e9,
        ch.energy()
    );
    let significant = significant_paths(&ch, 0.8).unwrap();
    println!(
        "  strongest tap at {:.2} ns",
        ch.taps()[ch.peak_index()].delay * 1e9
    );
    println!("  {} taps carry 80% of the energy", significant.len());
    for &i in significant.iter().take(6) {
        let t = ch.taps()[i];
        println!(
            "    tap {i}: delay {:7.2} ns, gain {:+.4}",
            t.delay * 1e9,
            t.gain
        );
    }

    println!();
    println!("aggregating 1000 realizations at the 8 GHz grid...");
    let stats = apriori_stats(&params, 1000, 0.8, 8.0e9).unwrap();
    println!("  P(no significant path before the peak):");
    for (lambda, p) in stats.lambda_pmf.iter().take(6) {
        println!("    lambda = {lambda}: {p:.3}");
    }
    println!(
        "  P(peak-to-first delay > 20 ns) = {:.4}",
        stats.pld_histogram.mass_above(20e-9)
    );
}
