use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use super::{enumerate_paths, PropagationPath, Scene};
use crate::channel::{BandConfig, BandId, CtfTensor, Dims, LinkId};
use crate::error::Result;
use crate::sounder::BeamGrids;

/// Complex white noise added to every CTF entry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    /// RMS magnitude per entry, `E|n|^2 = rms^2`.
    pub rms: f64,
    pub seed: u64,
}

/// Independent stream per (scene seed, link, band).
pub fn noise_stream_seed(seed: u64, link: LinkId, band: BandId) -> u64 {
    // splitmix64 finalizer over the packed inputs
    let mut z = seed ^ (((link.code() as u64) << 8 | band.code() as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Beam-space CTF of a fixed ray set:
/// `H[f][r][t] = sum_p gR(r) gT(t) a_p exp(-j 2 pi (f_c + f_k) tau_p)`, plus noise.
pub fn render_ctf(
    paths: &[PropagationPath],
    link: LinkId,
    band: &BandConfig,
    grids: &BeamGrids,
    tx_boresight: f64,
    rx_boresight: f64,
    noise: Option<NoiseSpec>,
) -> Result<CtfTensor> {
    let (n_f, n_rx, n_tx) = (band.n_tones, grids.rx.len(), grids.tx.len());
    let n_p = paths.len();

    // weights[(r * n_tx + t) * n_p + p]
    let mut weights = vec![Complex64::new(0.0, 0.0); n_rx * n_tx * n_p];
    for (p, path) in paths.iter().enumerate() {
        let el_t = grids.tx.elevation_gain(path.elevation_departure);
        let el_r = grids.rx.elevation_gain(path.elevation_arrival);
        let az_t = path.azimuth_departure - tx_boresight;
        let az_r = path.azimuth_arrival - rx_boresight;
        for r in 0..n_rx {
            let g_r = grids.rx.azimuth_pattern(r).gain(az_r) * el_r;
            for t in 0..n_tx {
                let g_t = grids.tx.azimuth_pattern(t).gain(az_t) * el_t;
                weights[(r * n_tx + t) * n_p + p] = path.amplitude * (g_r * g_t);
            }
        }
    }

    // phasors[k * n_p + p]
    let mut phasors = vec![Complex64::new(0.0, 0.0); n_f * n_p];
    for k in 0..n_f {
        let f = band.center_frequency + band.tone_offset(k);
        for (p, path) in paths.iter().enumerate() {
            phasors[k * n_p + p] = Complex64::from_polar(1.0, -2.0 * PI * f * path.delay);
        }
    }

    let dims = Dims::new(n_f, n_rx, n_tx);
    let per_tone = n_rx * n_tx;
    let mut values = vec![Complex64::new(0.0, 0.0); dims.len()];
    values
        .par_chunks_mut(per_tone)
        .enumerate()
        .for_each(|(k, row)| {
            let e = &phasors[k * n_p..(k + 1) * n_p];
            for (rt, out) in row.iter_mut().enumerate() {
                let w = &weights[rt * n_p..(rt + 1) * n_p];
                *out = w.iter().zip(e).map(|(a, b)| a * b).sum();
            }
        });

    if let Some(spec) = noise {
        let mut rng = ChaCha8Rng::seed_from_u64(noise_stream_seed(spec.seed, link, band.band_id));
        let sigma = spec.rms / 2f64.sqrt();
        for v in values.iter_mut() {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            *v += Complex64::new(re * sigma, im * sigma);
        }
    }
    CtfTensor::new(band.band_id, link, dims, values)
}

/// Noise RMS for `link`/`band`: the configured floor below the strongest ray of
/// the person-free scene, so that adding people leaves the noise level unchanged.
pub fn noise_spec(scene: &Scene, link: LinkId, band: &BandConfig) -> Result<Option<NoiseSpec>> {
    let Some(floor_db) = scene.noise_floor_db else {
        return Ok(None);
    };
    let reference = enumerate_paths(&scene.without_persons(), link, band)?
        .iter()
        .map(|p| p.amplitude.norm())
        .fold(0.0, f64::max);
    Ok(Some(NoiseSpec {
        rms: reference * 10f64.powf(floor_db / 20.0),
        seed: scene.seed,
    }))
}

/// Synthetic measurement of one link in one band.
pub fn synthesize_ctf(scene: &Scene, link: LinkId, band: &BandConfig, grids: &BeamGrids) -> Result<CtfTensor> {
    let paths = enumerate_paths(scene, link, band)?;
    let (tx, rx) = scene.link_sites(link);
    let noise = noise_spec(scene, link, band)?;
    render_ctf(&paths, link, band, grids, tx.boresight, rx.boresight, noise)
}

/// All four links in both bands, ordered link-major then 24 GHz before 60 GHz.
pub fn synthesize_all(scene: &Scene) -> Result<Vec<CtfTensor>> {
    scene.validate()?;
    let jobs: Vec<(LinkId, BandId)> = LinkId::ALL
        .iter()
        .flat_map(|&l| BandId::ALL.iter().map(move |&b| (l, b)))
        .collect();
    jobs.par_iter()
        .map(|&(link, band_id)| {
            let band = BandConfig::new(band_id);
            synthesize_ctf(scene, link, &band, &scene.beam_grids(&band))
        })
        .collect()
}
