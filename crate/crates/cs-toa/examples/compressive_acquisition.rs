//! The sub-Nyquist front end: add noise at a chosen SNR, project the frame
//! onto a random measurement matrix, and round-trip the matrix through its
//! binary dump so a run can be replayed exactly.
//!
//! ```bash
//! cargo run -p cs-toa --example compressive_acquisition
//! ```

use cs_toa::acquisition::{awgn, project, MeasurementMatrix};
use cs_toa::channel::ChannelRealization;
use cs_toa::rng::{substream, Stream};
use cs_toa::signal::{gaussian2_pulse, synthesize_received, FrameConfig};

fn main() {
    let frame = FrameConfig::new(200e-9, 8e9, 1.0, 80e-9).unwrap();
    let pulse = gaussian2_pulse(1e-9, frame.f_s).unwrap();
    let t_s = frame.sample_period();
    let ch = ChannelRealization::from_taps(vec![(40.0 * t_s, 0.8), (120.0 * t_s, 0.6)]).unwrap();
    let clean = synthesize_received(&pulse, &ch, &frame).unwrap();
    println!(
        "clean frame: {} samples, energy {:.6}, true toa {:.3} ns",
        clean.len(),
        clean.energy(),
        clean.true_toa * 1e9
    );

    let noisy = awgn(&clean, 20.0, &mut substream(1, 0, Stream::Noise));
    let noise_energy: f64 = noisy
        .samples
        .iter()
        .zip(&clean.samples)
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    println!("after 20 dB AWGN: noise energy per frame {noise_energy:.2}");

    // U = 4 projection
    let mut phi =
        MeasurementMatrix::gaussian(400, 1600, &mut substream(1, 4, Stream::Measurement)).unwrap();
    phi.seed = 1;
    let y = project(&phi, &noisy).unwrap();
    println!(
        "projected to {} measurements (undersampling {}x)",
        y.len(),
        phi.undersampling()
    );

    let path = std::env::temp_dir().join("cs_toa_example_phi.bin");
    phi.save(&path).unwrap();
    let reloaded = MeasurementMatrix::load(&path).unwrap();
    let y2 = project(&reloaded, &noisy).unwrap();
    println!(
        "dump/load round trip: {} bytes, projections identical = {}",
        std::fs::metadata(&path).unwrap().len(),
        y.y == y2.y
    );
    std::fs::remove_file(&path).ok();
}
