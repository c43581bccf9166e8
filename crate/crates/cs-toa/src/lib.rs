//! Sub-Nyquist time-of-arrival estimation for impulse-radio UWB.
//!
//! An impulse-radio receiver wants the delay of the first arriving
//! multipath. Sampling a multi-GHz waveform at the Nyquist rate just to
//! find that delay is expensive, so this crate implements the alternative:
//! project the waveform onto a small set of random waveforms, express the
//! projection in a dictionary of time-shifted pulses, and read the TOA off
//! the earliest dictionary atom a greedy pursuit selects. A Nyquist-rate
//! matched-filter estimator is included as the baseline, along with the
//! stochastic multipath channel and the Monte-Carlo machinery needed to
//! compare them.
//!
//! The pieces, in signal order:
//!
//! * [`signal`] — transmit pulse and noiseless waveform synthesis.
//! * [`channel`] — cluster/ray multipath realizations and their first-path
//!   statistics.
//! * [`acquisition`] — AWGN, the random measurement matrix, `y = Phi r`.
//! * [`dictionary`] — shifted-pulse dictionary and its projected,
//!   column-normalized form.
//! * [`estimator`] — the matched-filter baseline and the two greedy
//!   pursuits.
//! * [`harness`] — seeded, reproducible Monte-Carlo sweeps with CSV output.
//! * [`config`] — flat key-value experiment files.
//!
//! The `examples/` directory exercises each capability end to end, and the
//! `cs-toa` binary wraps the harness in a small CLI.

pub mod acquisition;
pub mod channel;
pub mod config;
pub mod dictionary;
pub mod error;
pub mod estimator;
pub mod harness;
pub mod linalg;
pub mod rng;
pub mod signal;

pub use error::{Error, Result};
