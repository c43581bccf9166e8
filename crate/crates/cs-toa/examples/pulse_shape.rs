//! Generate the second-derivative Gaussian transmit pulse at two sampling
//! rates and show its samples, energy and symmetry.
//!
//! ```bash
//! cargo run -p cs-toa --example pulse_shape
//! ```

use cs_toa::signal::gaussian2_pulse;

fn main() {
    for f_s_ghz in [8.0, 16.0] {
        let pulse = gaussian2_pulse(1.0e-9, f_s_ghz * 1e9).unwrap();
        println!(
            "1 ns pulse at {f_s_ghz} GHz: {} samples, energy {:.15}",
            pulse.len(),
            pulse.energy()
        );
        print!("  samples:");
        for s in pulse.samples() {
            print!(" {s:+.4}");
        }
        println!();
        let w = pulse.samples();
        let asym: f64 = (0..w.len())
            .map(|i| (w[i] - w[w.len() - 1 - i]).abs())
            .fold(0.0, f64::max);
        println!("  worst symmetry defect: {asym:.2e}");
        println!();
    }
}
