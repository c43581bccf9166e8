//! What the a-priori information buys: the range cap throws away columns
//! the target cannot occupy and the pre-peak window refuses implausibly
//! early picks, which mostly matters when noise is strong.
//!
//! ```bash
//! cargo run --release -p cs-toa --example apriori_window
//! ```

use cs_toa::config::experiment_defaults;
use cs_toa::harness::{run_point, Bench, EstimatorId};

fn main() {
    let mut cfg = experiment_defaults();
    cfg.n_trials = 400;
    cfg.estimators = vec![EstimatorId::Greedy, EstimatorId::GreedyApriori];

    println!(
        "range prior {:.0} ns, peak-lead prior {:.0} ns, {} trials per point",
        cfg.toa_max * 1e9,
        cfg.pld_max * 1e9,
        cfg.n_trials
    );
    println!(
        "{:>8} {:>18} {:>18} {:>12}",
        "snr_db", "plain mse [s^2]", "a-priori mse [s^2]", "gain"
    );
    for snr in [5.0, 10.0, 15.0, 20.0, 25.0] {
        let bench = Bench::build(&cfg, snr, cfg.paths_searched, cfg.undersampling, 1).unwrap();
        let point = run_point(&cfg, &bench).unwrap();
        let plain = point.mse_for(EstimatorId::Greedy).unwrap();
        let apriori = point.mse_for(EstimatorId::GreedyApriori).unwrap();
        println!(
            "{snr:>8} {plain:>18.3e} {apriori:>18.3e} {:>11.2}x",
            plain / apriori
        );
    }
}
