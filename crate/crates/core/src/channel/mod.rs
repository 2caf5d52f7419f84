//! Beam-space channel tensors and the delay/frequency transform between them.
//!
//! A [`CtfTensor`] holds the channel transfer function of one link in one band
//! as a dense `[tone][rx beam][tx beam]` array; a [`CirTensor`] holds its
//! impulse response `[delay bin][rx beam][tx beam]`. Both are row-major with the
//! tx beam index varying fastest.

mod fresnel;
mod io;
mod transform;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use fresnel::{first_fresnel_radius, point_in_first_fresnel, segment_foot};
pub use io::{
    decode_cir, decode_ctf, encode_cir, encode_ctf, read_cir, read_ctf, write_cir, write_ctf, CIR_MAGIC,
    CTF_MAGIC, FORMAT_VERSION,
};
pub use transform::{cir_to_ctf, ctf_to_cir, WindowKind};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

pub type Point3 = nalgebra::Point3<f64>;
pub type Vector3 = nalgebra::Vector3<f64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BandId {
    Band24,
    Band60,
}

impl BandId {
    pub const ALL: [BandId; 2] = [BandId::Band24, BandId::Band60];

    /// Wire code used in tensor files.
    pub fn code(self) -> u32 {
        match self {
            BandId::Band24 => 0,
            BandId::Band60 => 1,
        }
    }

    pub fn from_code(code: u32) -> Option<Self> {
        match code {
            0 => Some(BandId::Band24),
            1 => Some(BandId::Band60),
            _ => None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            BandId::Band24 => "24GHz",
            BandId::Band60 => "60GHz",
        }
    }

    /// Slot in per-band `[24, 60]` arrays.
    pub fn index(self) -> usize {
        self.code() as usize
    }
}

impl fmt::Display for BandId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for BandId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "24GHz" | "24" => Ok(BandId::Band24),
            "60GHz" | "60" => Ok(BandId::Band60),
            _ => Err(Error::Config(format!("unknown band {s:?}"))),
        }
    }
}

/// Transmitter site of the distributed 2x2 topology.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TxSite {
    Tx1,
    Tx2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RxSite {
    Rx1,
    Rx2,
}

/// One of the four Tx/Rx site pairings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LinkId {
    pub tx: TxSite,
    pub rx: RxSite,
}

impl LinkId {
    pub const TX1RX1: LinkId = LinkId::new(TxSite::Tx1, RxSite::Rx1);
    pub const TX1RX2: LinkId = LinkId::new(TxSite::Tx1, RxSite::Rx2);
    pub const TX2RX1: LinkId = LinkId::new(TxSite::Tx2, RxSite::Rx1);
    pub const TX2RX2: LinkId = LinkId::new(TxSite::Tx2, RxSite::Rx2);
    pub const ALL: [LinkId; 4] = [
        LinkId::TX1RX1,
        LinkId::TX1RX2,
        LinkId::TX2RX1,
        LinkId::TX2RX2,
    ];

    pub const fn new(tx: TxSite, rx: RxSite) -> Self {
        LinkId { tx, rx }
    }

    pub fn code(self) -> u32 {
        let t = match self.tx {
            TxSite::Tx1 => 0,
            TxSite::Tx2 => 2,
        };
        let r = match self.rx {
            RxSite::Rx1 => 0,
            RxSite::Rx2 => 1,
        };
        t + r
    }

    pub fn from_code(code: u32) -> Option<Self> {
        LinkId::ALL.get(code as usize).copied()
    }

    pub fn label(self) -> &'static str {
        match self.code() {
            0 => "Tx1Rx1",
            1 => "Tx1Rx2",
            2 => "Tx2Rx1",
            _ => "Tx2Rx2",
        }
    }
}

impl fmt::Display for LinkId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for LinkId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LinkId::ALL
            .into_iter()
            .find(|l| l.label() == s)
            .ok_or_else(|| Error::Config(format!("unknown link {s:?}")))
    }
}

/// Array side of a beam grid or beam-space axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Tx,
    Rx,
}

/// Per-band sounding parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandConfig {
    pub band_id: BandId,
    pub center_frequency: f64,
    pub bandwidth: f64,
    pub n_tones: usize,
    pub n_waveform_samples: usize,
    pub sample_rate: f64,
}

impl BandConfig {
    pub fn new(band_id: BandId) -> Self {
        let (center_frequency, bandwidth, n_tones) = match band_id {
            BandId::Band24 => (24.0e9, 200.0e6, 512),
            BandId::Band60 => (60.0e9, 400.0e6, 1024),
        };
        BandConfig {
            band_id,
            center_frequency,
            bandwidth,
            n_tones,
            n_waveform_samples: 2048,
            sample_rate: 800.0e6,
        }
    }

    pub fn tone_spacing(&self) -> f64 {
        self.bandwidth / self.n_tones as f64
    }

    /// Delay resolution, one CIR bin.
    pub fn delay_bin_width(&self) -> f64 {
        1.0 / self.bandwidth
    }

    pub fn max_delay(&self) -> f64 {
        1.0 / self.tone_spacing()
    }

    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.center_frequency
    }

    /// Tone offset from the band center, uniformly spaced and symmetric about zero.
    pub fn tone_offset(&self, k: usize) -> f64 {
        (k as f64 - (self.n_tones as f64 - 1.0) / 2.0) * self.tone_spacing()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.bandwidth > 0.0) || self.n_tones == 0 || !(self.center_frequency > 0.0) {
            return Err(Error::Config(format!(
                "band {} needs positive bandwidth, tone count and center frequency",
                self.band_id
            )));
        }
        Ok(())
    }
}

/// Dimensions shared by CTF and CIR tensors: (leading axis, rx beams, tx beams).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dims {
    pub n0: usize,
    pub n_rx: usize,
    pub n_tx: usize,
}

impl Dims {
    pub fn new(n0: usize, n_rx: usize, n_tx: usize) -> Self {
        Dims { n0, n_rx, n_tx }
    }

    pub fn len(&self) -> usize {
        self.n0 * self.n_rx * self.n_tx
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn index(&self, i0: usize, rx: usize, tx: usize) -> usize {
        (i0 * self.n_rx + rx) * self.n_tx + tx
    }
}

fn check_values(dims: Dims, values: &[Complex64]) -> Result<()> {
    if dims.len() != values.len() {
        return Err(Error::ConfigMismatch(format!(
            "tensor holds {} values, dims {}x{}x{} need {}",
            values.len(),
            dims.n0,
            dims.n_rx,
            dims.n_tx,
            dims.len()
        )));
    }
    if dims.is_empty() {
        return Err(Error::ConfigMismatch("tensor has a zero dimension".into()));
    }
    if let Some(i) = values.iter().position(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::Domain(format!("non-finite tensor entry at flat index {i}")));
    }
    Ok(())
}

/// Channel transfer function `H[f][rx][tx]` of one link in one band.
#[derive(Debug, Clone, PartialEq)]
pub struct CtfTensor {
    band_id: BandId,
    link_id: LinkId,
    dims: Dims,
    values: Vec<Complex64>,
}

impl CtfTensor {
    pub fn new(band_id: BandId, link_id: LinkId, dims: Dims, values: Vec<Complex64>) -> Result<Self> {
        check_values(dims, &values)?;
        Ok(CtfTensor {
            band_id,
            link_id,
            dims,
            values,
        })
    }

    pub fn zeros(band_id: BandId, link_id: LinkId, dims: Dims) -> Self {
        CtfTensor {
            band_id,
            link_id,
            dims,
            values: vec![Complex64::new(0.0, 0.0); dims.len()],
        }
    }

    pub fn band_id(&self) -> BandId {
        self.band_id
    }

    pub fn link_id(&self) -> LinkId {
        self.link_id
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn n_tones(&self) -> usize {
        self.dims.n0
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn get(&self, f: usize, rx: usize, tx: usize) -> Complex64 {
        self.values[self.dims.index(f, rx, tx)]
    }

    pub fn total_power(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum()
    }

    /// Checks tensor dimensions against a band's tone count and beam counts.
    pub fn check_against(&self, band: &BandConfig, n_rx: usize, n_tx: usize) -> Result<()> {
        let expected = Dims::new(band.n_tones, n_rx, n_tx);
        if band.band_id != self.band_id || expected != self.dims {
            return Err(Error::ConfigMismatch(format!(
                "{} {} tensor has dims {:?}, band config expects {:?}",
                self.link_id, self.band_id, self.dims, expected
            )));
        }
        Ok(())
    }

    pub(crate) fn into_values(self) -> Vec<Complex64> {
        self.values
    }
}

/// Channel impulse response `h[tau][rx][tx]` of one link in one band.
#[derive(Debug, Clone, PartialEq)]
pub struct CirTensor {
    band_id: BandId,
    link_id: LinkId,
    dims: Dims,
    delay_bin_width: f64,
    values: Vec<Complex64>,
}

impl CirTensor {
    pub fn new(
        band_id: BandId,
        link_id: LinkId,
        dims: Dims,
        delay_bin_width: f64,
        values: Vec<Complex64>,
    ) -> Result<Self> {
        check_values(dims, &values)?;
        if !(delay_bin_width > 0.0) || !delay_bin_width.is_finite() {
            return Err(Error::Domain(format!(
                "delay bin width must be positive, got {delay_bin_width}"
            )));
        }
        Ok(CirTensor {
            band_id,
            link_id,
            dims,
            delay_bin_width,
            values,
        })
    }

    pub fn band_id(&self) -> BandId {
        self.band_id
    }

    pub fn link_id(&self) -> LinkId {
        self.link_id
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn n_delays(&self) -> usize {
        self.dims.n0
    }

    pub fn delay_bin_width(&self) -> f64 {
        self.delay_bin_width
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn get(&self, tau: usize, rx: usize, tx: usize) -> Complex64 {
        self.values[self.dims.index(tau, rx, tx)]
    }

    pub fn total_power(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum()
    }

    pub(crate) fn into_values(self) -> Vec<Complex64> {
        self.values
    }
}
