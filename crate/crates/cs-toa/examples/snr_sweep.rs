//! Run a small SNR sweep through the Monte-Carlo harness and print the
//! CSV it would write, demonstrating the reproducible sweep machinery the
//! `cs-toa` binary wraps.
//!
//! ```bash
//! cargo run --release -p cs-toa --example snr_sweep
//! ```

use cs_toa::config::experiment_defaults;
use cs_toa::harness::{run_sweep, SweepAxis};

fn main() {
    let mut cfg = experiment_defaults();
    cfg.n_trials = 150;

    let grid = [10.0, 18.0, 26.0];
    let table = run_sweep(&cfg, SweepAxis::Snr, &grid).unwrap();
    print!("{}", table.to_csv(false));

    // identical seed, identical bytes
    let again = run_sweep(&cfg, SweepAxis::Snr, &grid).unwrap();
    assert_eq!(table.to_csv(false), again.to_csv(false));
    eprintln!("re-run produced byte-identical CSV");
}
