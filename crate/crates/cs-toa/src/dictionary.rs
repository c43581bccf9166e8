//! Shifted-pulse dictionary and its measurement-domain ("holographic")
//! counterpart.
//!
//! Atom `l` of the shift dictionary is the transmit pulse zero-padded into
//! an N-sample frame starting at sample `l * stride`; the atom spacing is
//! therefore `stride / f_s` seconds. The holographic dictionary is
//! `Phi * D^T` with every column rescaled to unit norm, which is what the
//! greedy estimators correlate against.

use crate::acquisition::MeasurementMatrix;
use crate::error::{Error, Result};
use crate::linalg::{dot, norm, Mat};
use crate::signal::{FrameConfig, PulseSamples};

/// Columns with a norm below this are reported as degenerate projections.
const COLUMN_NORM_FLOOR: f64 = 1e-12;

/// Z x N matrix of time-shifted pulse atoms (row per atom).
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftDictionary {
    atoms: Mat,
    stride: usize,
    offset: f64,
    pulse_len: usize,
}

impl ShiftDictionary {
    /// Number of atoms Z.
    pub fn len(&self) -> usize {
        self.atoms.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.rows() == 0
    }

    /// Frame length N every atom is padded to.
    pub fn frame_len(&self) -> usize {
        self.atoms.cols()
    }

    /// Atom spacing in samples.
    pub fn stride(&self) -> usize {
        self.stride
    }

    /// Atom spacing in seconds.
    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn pulse_len(&self) -> usize {
        self.pulse_len
    }

    /// Atom `l` as a full N-sample row.
    pub fn atom(&self, l: usize) -> &[f64] {
        self.atoms.row(l)
    }
}

/// Build the dictionary of `stride`-spaced pulse shifts covering the frame.
///
/// Atoms whose shift leaves fewer than the full pulse support are truncated
/// at the frame edge and deliberately not renormalized here; normalization
/// is the holographic dictionary's job.
pub fn build_dictionary(
    pulse: &PulseSamples,
    cfg: &FrameConfig,
    stride: usize,
) -> Result<ShiftDictionary> {
    if stride == 0 {
        return Err(Error::Parameter(
            "dictionary stride must be positive".into(),
        ));
    }
    let n = cfg.n;
    let z = n / stride;
    if z < 2 {
        return Err(Error::Parameter(format!(
            "stride {stride} leaves only {z} atoms in a {n}-sample frame"
        )));
    }
    let mut atoms = Mat::zeros(z, n);
    for l in 0..z {
        let start = l * stride;
        let len = pulse.len().min(n - start);
        atoms.row_mut(l)[start..start + len].copy_from_slice(&pulse.samples()[..len]);
    }
    Ok(ShiftDictionary {
        atoms,
        stride,
        offset: stride as f64 * cfg.sample_period(),
        pulse_len: pulse.len(),
    })
}

/// M x Z dictionary in the measurement domain, columns normalized to unit
/// norm. Stored column-contiguous because the pursuit scans columns.
#[derive(Debug, Clone, PartialEq)]
pub struct HolographicDictionary {
    /// Row `i` of this matrix is column `h_i`.
    cols: Mat,
    column_norms: Vec<f64>,
}

impl HolographicDictionary {
    /// Measurement dimension M.
    pub fn m(&self) -> usize {
        self.cols.cols()
    }

    /// Atom count Z.
    pub fn len(&self) -> usize {
        self.cols.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.cols.rows() == 0
    }

    /// Unit-norm column `i`.
    pub fn col(&self, i: usize) -> &[f64] {
        self.cols.row(i)
    }

    /// Norms the columns carried before normalization.
    pub fn column_norms(&self) -> &[f64] {
        &self.column_norms
    }
}

/// `Phi * D^T` with unit-norm columns.
pub fn holographic(
    phi: &MeasurementMatrix,
    dict: &ShiftDictionary,
) -> Result<HolographicDictionary> {
    if phi.n() != dict.frame_len() {
        return Err(Error::Dimension(format!(
            "matrix expects {} samples, dictionary frame is {}",
            phi.n(),
            dict.frame_len()
        )));
    }
    let m = phi.m();
    let z = dict.len();
    let mut cols = Mat::zeros(z, m);
    for l in 0..z {
        // the atom is zero outside its pulse support, so the dot product
        // only needs that slice of each matrix row
        let start = l * dict.stride();
        let len = dict.pulse_len().min(dict.frame_len() - start);
        let support = &dict.atom(l)[start..start + len];
        let out = cols.row_mut(l);
        if phi.is_identity() {
            out[start..start + len].copy_from_slice(support);
        } else {
            for (i, o) in out.iter_mut().enumerate() {
                *o = dot(&phi.row(i)[start..start + len], support);
            }
        }
    }
    let mut column_norms = Vec::with_capacity(z);
    for l in 0..z {
        let nrm = norm(cols.row(l));
        if nrm < COLUMN_NORM_FLOOR {
            return Err(Error::Degenerate(format!(
                "holographic column {l} has norm {nrm}; projection lost the atom"
            )));
        }
        column_norms.push(nrm);
        for v in cols.row_mut(l) {
            *v /= nrm;
        }
    }
    Ok(HolographicDictionary { cols, column_norms })
}
