//! Delay and angular characterization of beam-space impulse responses.
//!
//! Summation order is fixed so results are bitwise reproducible: every spectrum
//! loops delay outermost, then Rx beam, then Tx beam, accumulating in that
//! order. PAPs are delay sums of the matching ADPS.

use serde::{Deserialize, Serialize};

use crate::channel::{BandId, CirTensor, LinkId, Side, SPEED_OF_LIGHT};
use crate::error::{Error, Result};
use crate::sounder::BeamGrids;

/// Noise cut below the PDP peak applied before the delay spread.
pub const DEFAULT_THRESHOLD_DB: f64 = 30.0;

/// Heatmaps are truncated at this propagation distance.
pub const HEATMAP_MAX_DISTANCE_M: f64 = 30.0;

/// `PDP[tau] = sum_rx sum_tx |h[tau][rx][tx]|^2`.
pub fn compute_pdp(cir: &CirTensor) -> Vec<f64> {
    let d = cir.dims();
    let per = d.n_rx * d.n_tx;
    cir.values()
        .chunks(per.max(1))
        .take(d.n0)
        .map(|row| row.iter().map(|h| h.norm_sqr()).sum())
        .collect()
}

/// Angular-delay power spectrum `[tau][beam]` of one side, summing the other side.
pub fn compute_adps(cir: &CirTensor, side: Side) -> Vec<Vec<f64>> {
    let d = cir.dims();
    (0..d.n0)
        .map(|tau| match side {
            Side::Tx => {
                let mut row = vec![0.0; d.n_tx];
                for rx in 0..d.n_rx {
                    for (tx, acc) in row.iter_mut().enumerate() {
                        *acc += cir.get(tau, rx, tx).norm_sqr();
                    }
                }
                row
            }
            Side::Rx => (0..d.n_rx)
                .map(|rx| (0..d.n_tx).map(|tx| cir.get(tau, rx, tx).norm_sqr()).sum())
                .collect(),
        })
        .collect()
}

fn pap_from_adps(adps: &[Vec<f64>], n_beams: usize) -> Vec<f64> {
    let mut pap = vec![0.0; n_beams];
    for row in adps {
        for (acc, v) in pap.iter_mut().zip(row) {
            *acc += v;
        }
    }
    pap
}

/// Power angular profile of one side: delay sum of the ADPS.
pub fn compute_pap(cir: &CirTensor, side: Side) -> Vec<f64> {
    let d = cir.dims();
    let n = match side {
        Side::Tx => d.n_tx,
        Side::Rx => d.n_rx,
    };
    pap_from_adps(&compute_adps(cir, side), n)
}

/// RMS delay spread after zeroing every bin at or below `max * 10^(-threshold_db/10)`.
///
/// A threshold of 0 dB therefore removes everything, including the peak.
pub fn compute_rms_ds(pdp: &[f64], delay_bin_width: f64, threshold_db: f64) -> Result<f64> {
    if !(threshold_db >= 0.0) || !threshold_db.is_finite() {
        return Err(Error::Domain(format!("threshold must be a finite non-negative dB value, got {threshold_db}")));
    }
    if !(delay_bin_width > 0.0) {
        return Err(Error::Domain(format!("delay bin width must be positive, got {delay_bin_width}")));
    }
    if pdp.iter().any(|p| !(*p >= 0.0) || !p.is_finite()) {
        return Err(Error::Domain("PDP must be finite and non-negative".into()));
    }
    let peak = pdp.iter().copied().fold(0.0, f64::max);
    let cut = peak * 10f64.powf(-threshold_db / 10.0);
    // delays measured from the first kept bin: a single tap is exactly zero spread
    let first = pdp.iter().position(|&p| p > cut).unwrap_or(0);
    let kept: Vec<(f64, f64)> = pdp
        .iter()
        .enumerate()
        .filter(|(_, &p)| p > cut)
        .map(|(n, &p)| ((n - first) as f64 * delay_bin_width, p))
        .collect();
    let total: f64 = kept.iter().map(|(_, p)| p).sum();
    if kept.is_empty() || total <= 0.0 {
        return Err(Error::EmptyProfile(format!("no PDP bin survives a {threshold_db} dB threshold")));
    }
    let mean = kept.iter().map(|(t, p)| t * p).sum::<f64>() / total;
    let var = kept.iter().map(|(t, p)| p * (t - mean).powi(2)).sum::<f64>() / total;
    Ok(var.sqrt())
}

/// Circular azimuth spread `sqrt(-2 ln(|sum P e^{j phi}| / sum P))`.
///
/// Evaluated as `sqrt(-ln(1 - q))` with
/// `q = 1 - |R|^2/S^2 = sum_k sum_l P_k P_l 2 sin^2((phi_k - phi_l)/2) / S^2`,
/// which is exactly zero for a single occupied beam and keeps full relative
/// precision for small spreads.
pub fn compute_angular_spread(pap: &[f64], angles: &[f64]) -> Result<f64> {
    if pap.len() != angles.len() {
        return Err(Error::ConfigMismatch(format!(
            "{} PAP entries for {} angles",
            pap.len(),
            angles.len()
        )));
    }
    if pap.iter().any(|p| !(*p >= 0.0) || !p.is_finite()) {
        return Err(Error::Domain("PAP must be finite and non-negative".into()));
    }
    let total: f64 = pap.iter().sum();
    if total <= 0.0 {
        return Err(Error::EmptyProfile("angular profile carries no power".into()));
    }
    let mut q = 0.0;
    for (k, (&pk, &ak)) in pap.iter().zip(angles).enumerate() {
        for (&pl, &al) in pap[k + 1..].iter().zip(&angles[k + 1..]) {
            let s = ((ak - al) / 2.0).sin();
            q += 2.0 * pk * pl * 2.0 * s * s;
        }
    }
    q /= total * total;
    if q >= 1.0 {
        return Err(Error::Domain("angular profile has a zero resultant".into()));
    }
    Ok((-(-q).ln_1p()).sqrt())
}

/// All delay/angle metrics of one link in one band.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricSet {
    pub band_id: BandId,
    pub link_id: LinkId,
    pub delay_bin_width: f64,
    pub pdp: Vec<f64>,
    pub rms_ds: f64,
    pub adps_tx: Vec<Vec<f64>>,
    pub adps_rx: Vec<Vec<f64>>,
    pub pap_tx: Vec<f64>,
    pub pap_rx: Vec<f64>,
    pub tx_angles: Vec<f64>,
    pub rx_angles: Vec<f64>,
    pub asd: f64,
    pub asa: f64,
    pub threshold_db: f64,
}

pub fn compute_metric_set(cir: &CirTensor, grids: &BeamGrids, threshold_db: f64) -> Result<MetricSet> {
    let d = cir.dims();
    if grids.tx.band_id != cir.band_id() || d.n_tx != grids.tx.len() || d.n_rx != grids.rx.len() {
        return Err(Error::ConfigMismatch(format!(
            "{} CIR with {}x{} beams does not match {} grids of {}x{}",
            cir.band_id(),
            d.n_rx,
            d.n_tx,
            grids.tx.band_id,
            grids.rx.len(),
            grids.tx.len()
        )));
    }
    let pdp = compute_pdp(cir);
    let adps_tx = compute_adps(cir, Side::Tx);
    let adps_rx = compute_adps(cir, Side::Rx);
    let pap_tx = pap_from_adps(&adps_tx, d.n_tx);
    let pap_rx = pap_from_adps(&adps_rx, d.n_rx);
    Ok(MetricSet {
        band_id: cir.band_id(),
        link_id: cir.link_id(),
        delay_bin_width: cir.delay_bin_width(),
        rms_ds: compute_rms_ds(&pdp, cir.delay_bin_width(), threshold_db)?,
        asd: compute_angular_spread(&pap_tx, &grids.tx.steering_angles)?,
        asa: compute_angular_spread(&pap_rx, &grids.rx.steering_angles)?,
        pdp,
        adps_tx,
        adps_rx,
        pap_tx,
        pap_rx,
        tx_angles: grids.tx.steering_angles.clone(),
        rx_angles: grids.rx.steering_angles.clone(),
        threshold_db,
    })
}

/// With-person minus without-person changes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaMetrics {
    pub band_id: BandId,
    pub link_id: LinkId,
    pub d_rms_ds: f64,
    pub d_asd: f64,
    pub d_asa: f64,
    /// `10 log10((A + eps) / (B + eps))` per ADPS cell; positive where the person adds power.
    pub adps_delta_db_tx: Vec<Vec<f64>>,
    pub adps_delta_db_rx: Vec<Vec<f64>>,
}

/// Floor added to both ADPS before taking the dB ratio, relative to their joint maximum.
pub const ADPS_DELTA_EPSILON: f64 = 1e-12;

fn adps_delta_db(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let peak = a.iter().chain(b).flatten().copied().fold(0.0, f64::max);
    let eps = ADPS_DELTA_EPSILON * peak;
    a.iter()
        .zip(b)
        .map(|(ra, rb)| {
            ra.iter()
                .zip(rb)
                .map(|(x, y)| {
                    if peak == 0.0 {
                        0.0
                    } else {
                        10.0 * ((x + eps).log10() - (y + eps).log10())
                    }
                })
                .collect()
        })
        .collect()
}

pub fn delta_metrics(with_person: &MetricSet, without: &MetricSet) -> Result<DeltaMetrics> {
    let (a, b) = (with_person, without);
    let shape = |m: &MetricSet| (m.pdp.len(), m.pap_rx.len(), m.pap_tx.len());
    if a.band_id != b.band_id || a.link_id != b.link_id || shape(a) != shape(b) || a.threshold_db != b.threshold_db {
        return Err(Error::ConfigMismatch(format!(
            "cannot compare {} {} {:?} @{} dB with {} {} {:?} @{} dB",
            a.link_id,
            a.band_id,
            shape(a),
            a.threshold_db,
            b.link_id,
            b.band_id,
            shape(b),
            b.threshold_db
        )));
    }
    Ok(DeltaMetrics {
        band_id: a.band_id,
        link_id: a.link_id,
        d_rms_ds: a.rms_ds - b.rms_ds,
        d_asd: a.asd - b.asd,
        d_asa: a.asa - b.asa,
        adps_delta_db_tx: adps_delta_db(&a.adps_tx, &b.adps_tx),
        adps_delta_db_rx: adps_delta_db(&a.adps_rx, &b.adps_rx),
    })
}

/// Number of leading delay bins whose propagation distance `c * tau` is within `max_m`.
pub fn bins_within_distance(delay_bin_width: f64, n_bins: usize, max_m: f64) -> usize {
    let last = (max_m / (SPEED_OF_LIGHT * delay_bin_width)).floor() as usize;
    (last + 1).min(n_bins)
}
