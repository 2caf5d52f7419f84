//! Orientation-dependent bistatic scattering off a person.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::Person;
use crate::error::{Error, Result};

/// Equivalent bistatic cross-section in m^2.
///
/// `incident_azimuth` points from the person toward the transmitter and
/// `scattered_azimuth` from the person toward the receiver. The lobe follows the
/// angle between the facing direction and the bisector of those two directions;
/// in exact forward scatter the bisector vanishes and only the floor remains.
pub fn equivalent_cross_section(person: &Person, incident_azimuth: f64, scattered_azimuth: f64) -> f64 {
    let bx = incident_azimuth.cos() + scattered_azimuth.cos();
    let by = incident_azimuth.sin() + scattered_azimuth.sin();
    let norm = bx.hypot(by);
    let body = &person.body;
    let cos_beta = if norm < 1e-9 {
        0.0
    } else {
        (person.facing_azimuth.cos() * bx + person.facing_azimuth.sin() * by) / norm
    };
    body.sigma_max * cos_beta.max(0.0).powf(body.lobe_exponent) + body.sigma_floor
}

/// Amplitude of the Tx -> person -> Rx ray relative to unit transmit amplitude,
/// `sqrt(sigma / 4 pi) * lambda / (4 pi d_tx d_rx)`.
pub fn human_scatter_amplitude(
    person: &Person,
    incident_azimuth: f64,
    scattered_azimuth: f64,
    d_tx: f64,
    d_rx: f64,
    wavelength: f64,
) -> Result<Complex64> {
    if !(d_tx > 0.0 && d_rx > 0.0 && wavelength > 0.0) {
        return Err(Error::Domain(format!(
            "scatter distances must be positive, got d_tx={d_tx}, d_rx={d_rx}"
        )));
    }
    let sigma = equivalent_cross_section(person, incident_azimuth, scattered_azimuth);
    let amp = (sigma / (4.0 * PI)).sqrt() * wavelength / (4.0 * PI * d_tx * d_rx);
    Ok(Complex64::new(amp, 0.0))
}
