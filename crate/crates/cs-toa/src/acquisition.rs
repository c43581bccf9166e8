//! Sub-Nyquist front end: AWGN injection on the Nyquist-rate waveform,
//! a random Gaussian measurement matrix, and the projection `y = Phi r`.
//!
//! Noise is added before projection, matching a front end that mixes the
//! analog waveform with random waveforms and integrates. The SNR convention
//! is `snr_db = 10 log10(E_b / sigma^2)` with `E_b` the clean discrete
//! frame energy and `sigma^2` the per-sample noise variance, so a
//! unit-energy frame at 0 dB sees unit-variance noise.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{dot, Mat};
use crate::signal::ReceivedWaveform;

const PHI_MAGIC: &[u8; 8] = b"CSTOAPHI";
const PHI_VERSION: u32 = 1;

/// M x N random projection of the acquisition front end.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementMatrix {
    entries: Mat,
    m: usize,
    n: usize,
    /// Provenance label recorded in dumps; informational only.
    pub seed: u64,
    identity: bool,
}

impl MeasurementMatrix {
    /// Draw an `m x n` matrix of i.i.d. standard-normal entries.
    /// `m` must divide `n` so the under-sampling ratio is exact.
    pub fn gaussian(m: usize, n: usize, rng: &mut impl Rng) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::Parameter(
                "matrix dimensions must be positive".into(),
            ));
        }
        if m > n {
            return Err(Error::Parameter(format!(
                "oversampling not supported: m = {m} > n = {n}"
            )));
        }
        if !n.is_multiple_of(m) {
            return Err(Error::Parameter(format!(
                "under-sampling ratio must be integral: {m} does not divide {n}"
            )));
        }
        let data: Vec<f64> = (0..m * n).map(|_| StandardNormal.sample(rng)).collect();
        Ok(MeasurementMatrix {
            entries: Mat::from_vec(m, n, data),
            m,
            n,
            seed: 0,
            identity: false,
        })
    }

    /// Nyquist passthrough for testing: `Phi = I`, so `y = r` exactly.
    pub fn identity(n: usize) -> Self {
        let mut entries = Mat::zeros(n, n);
        for i in 0..n {
            entries[(i, i)] = 1.0;
        }
        MeasurementMatrix {
            entries,
            m: n,
            n,
            seed: 0,
            identity: true,
        }
    }

    /// Wrap explicit row-major entries (used by the binary loader and by
    /// tests that need handcrafted matrices).
    pub fn from_entries(m: usize, n: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != m * n {
            return Err(Error::Dimension(format!(
                "expected {} entries for a {m} x {n} matrix, got {}",
                m * n,
                entries.len()
            )));
        }
        if m == 0 || m > n {
            return Err(Error::Parameter(format!("invalid dimensions {m} x {n}")));
        }
        Ok(MeasurementMatrix {
            entries: Mat::from_vec(m, n, entries),
            m,
            n,
            seed: 0,
            identity: false,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Under-sampling ratio N/M.
    pub fn undersampling(&self) -> usize {
        self.n / self.m
    }

    pub fn is_identity(&self) -> bool {
        self.identity
    }

    pub fn row(&self, i: usize) -> &[f64] {
        self.entries.row(i)
    }

    /// Write the binary dump: magic, version, M, N, seed, then row-major
    /// little-endian f64 entries.
    pub fn write_to(&self, w: &mut impl Write) -> Result<()> {
        w.write_all(PHI_MAGIC)?;
        w.write_all(&PHI_VERSION.to_le_bytes())?;
        w.write_all(&(self.m as u64).to_le_bytes())?;
        w.write_all(&(self.n as u64).to_le_bytes())?;
        w.write_all(&self.seed.to_le_bytes())?;
        for v in self.entries.data() {
            w.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_from(r: &mut impl Read) -> Result<Self> {
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != PHI_MAGIC {
            return Err(Error::PhiFormat("bad magic".into()));
        }
        let mut u32buf = [0u8; 4];
        r.read_exact(&mut u32buf)?;
        let version = u32::from_le_bytes(u32buf);
        if version != PHI_VERSION {
            return Err(Error::PhiFormat(format!("unsupported version {version}")));
        }
        let mut u64buf = [0u8; 8];
        r.read_exact(&mut u64buf)?;
        let m = u64::from_le_bytes(u64buf) as usize;
        r.read_exact(&mut u64buf)?;
        let n = u64::from_le_bytes(u64buf) as usize;
        r.read_exact(&mut u64buf)?;
        let seed = u64::from_le_bytes(u64buf);
        if m == 0 || n == 0 || m > n {
            return Err(Error::PhiFormat(format!("invalid dimensions {m} x {n}")));
        }
        let mut data = vec![0.0f64; m * n];
        let mut f64buf = [0u8; 8];
        for v in &mut data {
            r.read_exact(&mut f64buf)?;
            *v = f64::from_le_bytes(f64buf);
        }
        let mut trailer = [0u8; 1];
        if r.read(&mut trailer)? != 0 {
            return Err(Error::PhiFormat("trailing bytes after entries".into()));
        }
        let mut mat = MeasurementMatrix::from_entries(m, n, data)?;
        mat.seed = seed;
        Ok(mat)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        self.write_to(&mut w)?;
        w.flush()?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let mut r = BufReader::new(File::open(path)?);
        Self::read_from(&mut r)
    }
}

/// Sub-Nyquist measurement vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Measurements {
    pub y: Vec<f64>,
    /// SNR at which the projected waveform was generated; informational.
    pub snr_db: f64,
    /// Provenance label (e.g. the trial's noise-substream context).
    pub seed: u64,
}

impl Measurements {
    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }
}

/// Add white Gaussian noise at the given SNR. `f64::INFINITY` disables
/// noise and returns the input unchanged.
pub fn awgn(signal: &ReceivedWaveform, snr_db: f64, rng: &mut impl Rng) -> ReceivedWaveform {
    if signal.is_empty() || (snr_db.is_infinite() && snr_db > 0.0) {
        return signal.clone();
    }
    let e_b = signal.energy();
    let sigma = (e_b * 10f64.powf(-snr_db / 10.0)).sqrt();
    let samples = signal
        .samples
        .iter()
        .map(|s| {
            let z: f64 = StandardNormal.sample(rng);
            s + sigma * z
        })
        .collect();
    ReceivedWaveform {
        samples,
        true_toa: signal.true_toa,
    }
}

/// `y = Phi r`. The identity passthrough copies the waveform exactly.
pub fn project(phi: &MeasurementMatrix, r: &ReceivedWaveform) -> Result<Measurements> {
    if phi.n() != r.len() {
        return Err(Error::Dimension(format!(
            "matrix expects {} samples, waveform has {}",
            phi.n(),
            r.len()
        )));
    }
    let y = if phi.is_identity() {
        r.samples.clone()
    } else {
        (0..phi.m()).map(|i| dot(phi.row(i), &r.samples)).collect()
    };
    Ok(Measurements {
        y,
        snr_db: f64::INFINITY,
        seed: 0,
    })
}
