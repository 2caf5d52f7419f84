use std::f64::consts::{LN_10, PI};

use serde::{Deserialize, Serialize};

use crate::channel::{BandConfig, BandId, Side};

/// Total azimuth scan range of every grid, end to end.
pub const SCAN_SPAN: f64 = PI / 2.0;

pub const DEFAULT_SIDELOBE_FLOOR_DB: f64 = -25.0;

const EDGE_DB: f64 = 3.0;

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_angle(a: f64) -> f64 {
    let w = a.rem_euclid(2.0 * PI);
    if w > PI {
        w - 2.0 * PI
    } else {
        w
    }
}

/// Gaussian mainlobe clamped at a flat sidelobe floor.
///
/// The mainlobe is `-3 dB * (2 (theta - boresight) / hpbw)^2`, so the pattern is
/// exactly 3 dB down at `boresight +- hpbw / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeamPattern {
    pub hpbw: f64,
    pub boresight: f64,
    pub sidelobe_floor_db: f64,
}

impl BeamPattern {
    /// Linear amplitude gain toward `angle` (radians, same frame as `boresight`).
    pub fn gain(&self, angle: f64) -> f64 {
        let off = wrap_angle(angle - self.boresight);
        let x = 2.0 * off / self.hpbw;
        let g = (-EDGE_DB / 20.0 * LN_10 * x * x).exp();
        g.max(self.floor_amplitude())
    }

    pub fn floor_amplitude(&self) -> f64 {
        10f64.powf(self.sidelobe_floor_db / 20.0)
    }
}

/// Azimuth steering directions of one array side in one band, relative to the
/// array broadside.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BeamGrid {
    pub side: Side,
    pub band_id: BandId,
    pub steering_angles: Vec<f64>,
    pub hpbw_azimuth: f64,
    pub hpbw_elevation: f64,
    pub sidelobe_floor_db: f64,
}

impl BeamGrid {
    pub fn len(&self) -> usize {
        self.steering_angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steering_angles.is_empty()
    }

    pub fn azimuth_pattern(&self, beam: usize) -> BeamPattern {
        BeamPattern {
            hpbw: self.hpbw_azimuth,
            boresight: self.steering_angles[beam],
            sidelobe_floor_db: self.sidelobe_floor_db,
        }
    }

    /// Fixed elevation factor; elevation is not scanned, every beam points at the horizon.
    pub fn elevation_gain(&self, elevation: f64) -> f64 {
        BeamPattern {
            hpbw: self.hpbw_elevation,
            boresight: 0.0,
            sidelobe_floor_db: self.sidelobe_floor_db,
        }
        .gain(elevation)
    }

    pub fn spacing(&self) -> f64 {
        if self.len() < 2 {
            return 0.0;
        }
        (self.steering_angles[self.len() - 1] - self.steering_angles[0]) / (self.len() - 1) as f64
    }
}

/// Beam count, azimuth HPBW and elevation HPBW for one side of one band.
fn array_parameters(band: BandId, side: Side) -> (usize, f64, f64) {
    match (band, side) {
        (BandId::Band24, Side::Tx) | (BandId::Band24, Side::Rx) => (5, 15.0, 45.0),
        (BandId::Band60, Side::Tx) => (11, 6.0, 45.0),
        (BandId::Band60, Side::Rx) => (12, 6.0, 18.0),
    }
}

pub fn build_beam_grid(band: &BandConfig, side: Side) -> BeamGrid {
    build_beam_grid_with_floor(band, side, DEFAULT_SIDELOBE_FLOOR_DB)
}

/// Uniform grid centered on broadside with endpoints at +-45 degrees.
pub fn build_beam_grid_with_floor(band: &BandConfig, side: Side, sidelobe_floor_db: f64) -> BeamGrid {
    let (count, hpbw_az_deg, hpbw_el_deg) = array_parameters(band.band_id, side);
    let half = SCAN_SPAN / 2.0;
    let step = SCAN_SPAN / (count - 1) as f64;
    let steering_angles = (0..count)
        .map(|i| {
            if i == count - 1 {
                half
            } else {
                -half + step * i as f64
            }
        })
        .collect();
    BeamGrid {
        side,
        band_id: band.band_id,
        steering_angles,
        hpbw_azimuth: hpbw_az_deg.to_radians(),
        hpbw_elevation: hpbw_el_deg.to_radians(),
        sidelobe_floor_db,
    }
}

/// Tx and Rx grids of one band.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BeamGrids {
    pub tx: BeamGrid,
    pub rx: BeamGrid,
}

impl BeamGrids {
    pub fn for_band(band: &BandConfig) -> Self {
        BeamGrids {
            tx: build_beam_grid(band, Side::Tx),
            rx: build_beam_grid(band, Side::Rx),
        }
    }

    pub fn with_floor(band: &BandConfig, sidelobe_floor_db: f64) -> Self {
        BeamGrids {
            tx: build_beam_grid_with_floor(band, Side::Tx, sidelobe_floor_db),
            rx: build_beam_grid_with_floor(band, Side::Rx, sidelobe_floor_db),
        }
    }

    pub fn side(&self, side: Side) -> &BeamGrid {
        match side {
            Side::Tx => &self.tx,
            Side::Rx => &self.rx,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn deg(v: &[f64]) -> Vec<f64> {
        v.iter().map(|a| a.to_degrees()).collect()
    }

    #[test]
    fn band24_grids() {
        let b = BandConfig::new(BandId::Band24);
        for side in [Side::Tx, Side::Rx] {
            let g = build_beam_grid(&b, side);
            let d = deg(&g.steering_angles);
            let want = [-45.0, -22.5, 0.0, 22.5, 45.0];
            for (a, w) in d.iter().zip(want) {
                assert!((a - w).abs() < 1e-12, "{d:?}");
            }
        }
    }

    #[test]
    fn band60_grids() {
        let b = BandConfig::new(BandId::Band60);
        let tx = build_beam_grid(&b, Side::Tx);
        assert_eq!(tx.len(), 11);
        assert!((tx.steering_angles[0].to_degrees() + 45.0).abs() < 1e-12);
        assert!((tx.steering_angles[10].to_degrees() - 45.0).abs() < 1e-12);
        assert!((tx.spacing().to_degrees() - 9.0).abs() < 1e-12);

        let rx = build_beam_grid(&b, Side::Rx);
        assert_eq!(rx.len(), 12);
        assert!((rx.spacing().to_degrees() - 90.0 / 11.0).abs() < 1e-12);
        assert!((rx.hpbw_elevation.to_degrees() - 18.0).abs() < 1e-12);
    }

    #[test]
    fn grid_invariants() {
        for band in BandId::ALL {
            let b = BandConfig::new(band);
            for side in [Side::Tx, Side::Rx] {
                let g = build_beam_grid(&b, side);
                let step = g.spacing();
                for w in g.steering_angles.windows(2) {
                    assert!((w[1] - w[0] - step).abs() < 1e-12);
                }
                assert!(g
                    .steering_angles
                    .iter()
                    .all(|a| a.abs() <= SCAN_SPAN / 2.0 + 1e-15));
                let span = g.steering_angles[g.len() - 1] - g.steering_angles[0];
                assert!((span - SCAN_SPAN).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn pattern_reference_points() {
        let p = BeamPattern {
            hpbw: 15f64.to_radians(),
            boresight: 0.3,
            sidelobe_floor_db: -25.0,
        };
        assert_eq!(p.gain(0.3), 1.0);
        let edge = p.gain(0.3 + p.hpbw / 2.0);
        assert!((edge - 10f64.powf(-3.0 / 20.0)).abs() < 1e-12);
        assert!((20.0 * edge.log10() + 3.0).abs() < 0.01);
        assert_eq!(p.gain(0.3 + 1.5), 10f64.powf(-25.0 / 20.0));
        // wrap across +-pi
        let q = BeamPattern {
            boresight: PI - 0.01,
            ..p
        };
        assert!((q.gain(-PI + 0.01) - q.gain(PI - 0.03)).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn pattern_is_even_and_monotone(
            hpbw in 0.05f64..0.5, bore in -3.0f64..3.0, a in 0.0f64..3.0, b in 0.0f64..3.0
        ) {
            let p = BeamPattern { hpbw, boresight: bore, sidelobe_floor_db: -25.0 };
            prop_assert!((p.gain(bore + a) - p.gain(bore - a)).abs() < 1e-12);
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            prop_assert!(p.gain(bore + lo) >= p.gain(bore + hi));
        }
    }
}
