use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channel::{BandConfig, BandId};

/// Tone grid of one sounding waveform.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultitoneWaveform {
    pub band_id: BandId,
    /// Offsets from the band center in Hz, ascending.
    pub tone_frequencies: Vec<f64>,
    pub n_samples: usize,
    pub sample_rate: f64,
}

impl MultitoneWaveform {
    pub fn new(band: &BandConfig) -> Self {
        MultitoneWaveform {
            band_id: band.band_id,
            tone_frequencies: (0..band.n_tones).map(|k| band.tone_offset(k)).collect(),
            n_samples: band.n_waveform_samples,
            sample_rate: band.sample_rate,
        }
    }

    pub fn spacing(&self) -> f64 {
        self.tone_frequencies[1] - self.tone_frequencies[0]
    }

    /// Offset between the tone grid and the nearest exact DFT-bin grid of one period.
    pub fn baseband_shift(&self) -> f64 {
        let bin = self.sample_rate / self.n_samples as f64;
        let f0 = self.tone_frequencies[0];
        f0 - (f0 / bin).round() * bin
    }

    /// Baseband samples of one waveform period, unit total power.
    ///
    /// Newman phases `pi * k^2 / N` keep the crest factor low. The symmetric
    /// tone grid of an even tone count sits half a spacing off the DFT grid of
    /// one period, so the samples carry every tone shifted down by
    /// [`Self::baseband_shift`] (restored by the upconverter) and each tone lands
    /// on an exact bin of the `n_samples`-point period.
    pub fn samples(&self) -> Vec<Complex64> {
        let n_tones = self.tone_frequencies.len();
        let amp = 1.0 / (n_tones as f64).sqrt();
        let shift = self.baseband_shift();
        (0..self.n_samples)
            .map(|i| {
                let t = i as f64 / self.sample_rate;
                self.tone_frequencies
                    .iter()
                    .enumerate()
                    .map(|(k, f)| {
                        let phase = PI * (k * k) as f64 / n_tones as f64 + 2.0 * PI * (f - shift) * t;
                        Complex64::from_polar(amp, phase)
                    })
                    .sum()
            })
            .collect()
    }
}
