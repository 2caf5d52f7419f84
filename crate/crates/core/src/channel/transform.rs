use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};
use serde::{Deserialize, Serialize};

use super::{BandConfig, CirTensor, CtfTensor, Dims};
use crate::error::{Error, Result};

/// Taper applied along the tone axis before the inverse transform.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum WindowKind {
    #[default]
    Rectangular,
    Hann,
}

impl WindowKind {
    fn coefficients(self, n: usize) -> Vec<f64> {
        match self {
            WindowKind::Rectangular => vec![1.0; n],
            // periodic Hann
            WindowKind::Hann => (0..n)
                .map(|k| 0.5 - 0.5 * (2.0 * PI * k as f64 / n as f64).cos())
                .collect(),
        }
    }
}

impl std::str::FromStr for WindowKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rect" | "rectangular" => Ok(WindowKind::Rectangular),
            "hann" => Ok(WindowKind::Hann),
            _ => Err(Error::Config(format!("unknown window {s:?}"))),
        }
    }
}

/// Runs a length-`n0` FFT down every (rx, tx) column of a `[n0][rx][tx]` array.
fn transform_columns(dims: Dims, values: &mut [Complex64], direction: FftDirection, pre: &[f64]) {
    let n = dims.n0;
    let fft = FftPlanner::<f64>::new().plan_fft(n, direction);
    let mut column = vec![Complex64::new(0.0, 0.0); n];
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    for rx in 0..dims.n_rx {
        for tx in 0..dims.n_tx {
            for (k, c) in column.iter_mut().enumerate() {
                *c = values[dims.index(k, rx, tx)] * pre[k];
            }
            fft.process_with_scratch(&mut column, &mut scratch);
            for (k, c) in column.iter().enumerate() {
                values[dims.index(k, rx, tx)] = *c;
            }
        }
    }
}

/// Inverse DFT along the tone axis with `1/N` scaling.
///
/// The delay bin width is `1 / (N_f * tone_spacing)`, which is `1 / bandwidth`
/// for a full-band tensor.
pub fn ctf_to_cir(ctf: &CtfTensor, band: &BandConfig, window: WindowKind) -> Result<CirTensor> {
    if band.band_id != ctf.band_id() {
        return Err(Error::ConfigMismatch(format!(
            "tensor is {}, band config is {}",
            ctf.band_id(),
            band.band_id
        )));
    }
    band.validate()?;
    let dims = ctf.dims();
    let n = dims.n0;
    let scale = 1.0 / n as f64;
    let pre: Vec<f64> = window.coefficients(n).into_iter().map(|w| w * scale).collect();
    let mut values = ctf.clone().into_values();
    transform_columns(dims, &mut values, FftDirection::Inverse, &pre);
    let delay_bin_width = 1.0 / (n as f64 * band.tone_spacing());
    CirTensor::new(ctf.band_id(), ctf.link_id(), dims, delay_bin_width, values)
}

/// Forward (unnormalized) DFT along the delay axis; exact inverse of the
/// rectangular-window [`ctf_to_cir`].
pub fn cir_to_ctf(cir: &CirTensor) -> Result<CtfTensor> {
    let dims = cir.dims();
    let ones = vec![1.0; dims.n0];
    let mut values = cir.clone().into_values();
    transform_columns(dims, &mut values, FftDirection::Forward, &ones);
    CtfTensor::new(cir.band_id(), cir.link_id(), dims, values)
}
