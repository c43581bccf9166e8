use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cs_toa::acquisition::MeasurementMatrix;
use cs_toa::channel::apriori_stats;
use cs_toa::config;
use cs_toa::harness::{self, run_metadata, run_sweep, SweepAxis, SweepTable};
use cs_toa::rng::{substream, Stream};
use cs_toa::Result;

/// Sub-Nyquist UWB TOA estimation: simulate, sweep, and inspect.
#[derive(Parser)]
#[command(name = "cs-toa", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one configuration point and report per-estimator MSE.
    Simulate(RunArgs),
    /// Sweep one axis (snr, k, u, delta) and aggregate MSE per point.
    Sweep(SweepArgs),
    /// Sample channels and emit the first-path a-priori statistics as CSV.
    ChannelStats(ChannelStatsArgs),
    /// Draw a measurement matrix and write it as a binary dump.
    DumpPhi(DumpPhiArgs),
    /// Validate a measurement-matrix dump and print its header.
    LoadPhi(LoadPhiArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Experiment config file (flat key = value lines).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override the master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the trial count.
    #[arg(long)]
    trials: Option<usize>,
    /// Run the full-protocol trial count (1000) instead of desk scale.
    #[arg(long, conflicts_with = "trials")]
    paper_scale: bool,
    /// Use a dumped measurement matrix instead of drawing one.
    #[arg(long)]
    phi: Option<PathBuf>,
    /// Write CSV here (also written to stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Put wall-clock runtimes into the CSV (breaks byte-for-byte
    /// reproducibility; timings always land in the metadata file).
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Override the SNR in dB for this run.
    #[arg(long)]
    snr: Option<f64>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Swept axis: snr | k | u | delta.
    #[arg(long)]
    axis: String,
    /// Comma-separated grid; defaults depend on the axis
    /// (snr: 5..30 by 5; k: 1..10; u: 1,2,4,8; delta: 1,2,4,8 samples).
    #[arg(long, value_delimiter = ',')]
    grid: Option<Vec<f64>>,
}

#[derive(Args)]
struct ChannelStatsArgs {
    /// Experiment/channel config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Number of channel realizations.
    #[arg(long, default_value_t = 1000)]
    realizations: usize,
    /// Fraction of total energy defining a significant path.
    #[arg(long, default_value_t = 0.8)]
    energy_fraction: f64,
    /// Override the channel stats seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Write CSV here (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DumpPhiArgs {
    /// Measurement count (rows).
    #[arg(long)]
    m: usize,
    /// Nyquist sample count (columns); m must divide n.
    #[arg(long)]
    n: usize,
    /// Seed for the entries.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct LoadPhiArgs {
    /// Dump file to validate.
    #[arg(long = "in")]
    input: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(args) => simulate(args),
        Command::Sweep(args) => sweep(args),
        Command::ChannelStats(args) => channel_stats(args),
        Command::DumpPhi(args) => dump_phi(args),
        Command::LoadPhi(args) => load_phi(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn load_experiment(common: &CommonArgs) -> Result<harness::ExperimentConfig> {
    let mut cfg = match &common.config {
        Some(path) => config::experiment_from_file(path)?,
        None => config::experiment_defaults(),
    };
    if let Some(seed) = common.seed {
        cfg.master_seed = seed;
    }
    if common.paper_scale {
        cfg.n_trials = 1000;
    }
    if let Some(trials) = common.trials {
        cfg.n_trials = trials;
    }
    cfg.phi_file = common.phi.clone();
    cfg.validate()?;
    Ok(cfg)
}

fn emit_table(
    common: &CommonArgs,
    cfg: &harness::ExperimentConfig,
    table: &SweepTable,
    elapsed_ms: u64,
) -> Result<()> {
    let csv = table.to_csv(common.timing);
    match &common.out {
        Some(path) => {
            std::fs::write(path, &csv)?;
            let meta_path = path.with_extension("meta");
            std::fs::write(&meta_path, run_metadata(cfg, table, elapsed_ms))?;
            eprintln!(
                "wrote {} rows to {} (metadata in {})",
                table.rows.len(),
                path.display(),
                meta_path.display()
            );
        }
        None => print!("{csv}"),
    }
    Ok(())
}

fn simulate(args: RunArgs) -> Result<()> {
    let mut cfg = load_experiment(&args.common)?;
    if let Some(snr) = args.snr {
        cfg.snr_db = vec![snr];
    }
    let started = std::time::Instant::now();
    let grid = cfg.snr_db.clone();
    let table = run_sweep(&cfg, SweepAxis::Snr, &grid)?;
    let elapsed = started.elapsed().as_millis() as u64;

    eprintln!(
        "{} trial(s) per point, N = {}, U = {}, K = {}, seed = {}",
        cfg.n_trials, cfg.frame.n, cfg.undersampling, cfg.paths_searched, cfg.master_seed
    );
    eprintln!(
        "{:>8} {:>16} {:>14} {:>12}",
        "snr_db", "estimator", "mse_s2", "rmse_ns"
    );
    for row in &table.rows {
        eprintln!(
            "{:>8} {:>16} {:>14.4e} {:>12.4}",
            row.snr_db,
            row.estimator.to_string(),
            row.mse_s2,
            row.mse_s2.sqrt() * 1e9
        );
    }
    emit_table(&args.common, &cfg, &table, elapsed)
}

fn sweep(args: SweepArgs) -> Result<()> {
    let cfg = load_experiment(&args.common)?;
    let axis: SweepAxis = args.axis.parse()?;
    let grid = args.grid.unwrap_or_else(|| default_grid(axis));
    let started = std::time::Instant::now();
    let table = run_sweep(&cfg, axis, &grid)?;
    let elapsed = started.elapsed().as_millis() as u64;
    emit_table(&args.common, &cfg, &table, elapsed)
}

fn default_grid(axis: SweepAxis) -> Vec<f64> {
    match axis {
        SweepAxis::Snr => vec![5.0, 10.0, 15.0, 20.0, 25.0, 30.0],
        SweepAxis::K => (1..=10).map(|k| k as f64).collect(),
        SweepAxis::U => vec![1.0, 2.0, 4.0, 8.0],
        SweepAxis::Delta => vec![1.0, 2.0, 4.0, 8.0],
    }
}

fn channel_stats(args: ChannelStatsArgs) -> Result<()> {
    // histogram bins follow the configured grid rate; 8 GHz by default
    let (mut channel, f_s) = match &args.config {
        Some(path) => {
            let cfg = config::experiment_from_file(path)?;
            (cfg.channel, cfg.frame.f_s)
        }
        None => (config::default_channel(), 8.0e9),
    };
    if let Some(seed) = args.seed {
        channel.rng_seed = seed;
    }
    let stats = apriori_stats(&channel, args.realizations, args.energy_fraction, f_s)?;

    let mut csv = String::from("stat,bin,value\n");
    for (lambda, p) in &stats.lambda_pmf {
        csv.push_str(&format!("paths_before_peak_pmf,{lambda},{p}\n"));
    }
    for (i, d) in stats.pld_histogram.densities.iter().enumerate() {
        if *d > 0.0 {
            let left_ns = i as f64 * stats.pld_histogram.bin_width * 1e9;
            // density per nanosecond
            csv.push_str(&format!("peak_to_first_delay_pdf,{left_ns},{}\n", d * 1e-9));
        }
    }
    match &args.out {
        Some(path) => {
            std::fs::write(path, &csv)?;
            eprintln!(
                "wrote statistics for {} realizations to {}",
                args.realizations,
                path.display()
            );
        }
        None => print!("{csv}"),
    }
    eprintln!(
        "P(no significant path before peak) = {:.3}, P(peak-to-first delay > 20 ns) = {:.4}",
        stats.lambda_probability(0),
        stats.pld_histogram.mass_above(20e-9),
    );
    Ok(())
}

fn dump_phi(args: DumpPhiArgs) -> Result<()> {
    let mut rng = substream(args.seed, 0, Stream::Measurement);
    let mut phi = MeasurementMatrix::gaussian(args.m, args.n, &mut rng)?;
    phi.seed = args.seed;
    phi.save(&args.out)?;
    eprintln!(
        "wrote {} x {} matrix (seed {}) to {}",
        phi.m(),
        phi.n(),
        phi.seed,
        args.out.display()
    );
    Ok(())
}

fn load_phi(args: LoadPhiArgs) -> Result<()> {
    let phi = MeasurementMatrix::load(&args.input)?;
    let sum_sq: f64 = (0..phi.m()).flat_map(|i| phi.row(i)).map(|v| v * v).sum();
    println!(
        "m = {}, n = {}, undersampling = {}, seed = {}, mean entry power = {:.6}",
        phi.m(),
        phi.n(),
        phi.undersampling(),
        phi.seed,
        sum_sq / (phi.m() * phi.n()) as f64
    );
    Ok(())
}
