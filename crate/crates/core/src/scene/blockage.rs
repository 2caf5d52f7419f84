//! Human-body shadowing as diffraction over the two vertical silhouette edges
//! of a cylinder.

use super::Person;
use crate::channel::{first_fresnel_radius, Point3};

/// Paths whose clearance from the silhouette exceeds this many first-Fresnel
/// radii are not attenuated.
pub const CLEARANCE_CUTOFF_FRESNEL: f64 = 3.0;

/// Single knife-edge diffraction loss in dB for Fresnel parameter `v`.
pub fn knife_edge_loss_db(v: f64) -> f64 {
    if v <= -0.78 {
        return 0.0;
    }
    let a = v - 0.1;
    6.9 + 20.0 * ((a * a + 1.0).sqrt() + a).log10()
}

/// Fresnel-Kirchhoff parameter of an edge `h` meters into the path, `d1`/`d2`
/// meters from its ends.
pub fn fresnel_parameter(h: f64, d1: f64, d2: f64, wavelength: f64) -> f64 {
    h * (2.0 * (d1 + d2) / (wavelength * d1 * d2)).sqrt()
}

/// Where a straight leg passes a person, in the horizontal plane.
#[derive(Debug, Clone, Copy)]
pub struct EdgeGeometry {
    /// Horizontal distance from the body axis to the leg.
    pub offset: f64,
    /// Half-width of the silhouette as seen along the leg.
    pub half_width: f64,
    pub d1: f64,
    pub d2: f64,
}

impl EdgeGeometry {
    /// `None` when the body does not sit beside the interior of the leg or the
    /// leg passes above the head.
    pub fn new(a: &Point3, b: &Point3, person: &Person) -> Option<Self> {
        let (dx, dy) = (b.x - a.x, b.y - a.y);
        let horiz2 = dx * dx + dy * dy;
        if horiz2 < 1e-18 {
            return None;
        }
        let cx = person.center.x - a.x;
        let cy = person.center.y - a.y;
        let t = (cx * dx + cy * dy) / horiz2;
        if t <= 0.0 || t >= 1.0 {
            return None;
        }
        let z = a.z + t * (b.z - a.z);
        if z < person.center.z || z > person.center.z + person.body.height {
            return None;
        }
        let horiz = horiz2.sqrt();
        let offset = (cx * dy - cy * dx).abs() / horiz;
        // chest-on the silhouette is the full shoulder width, side-on only the torso depth
        let leg_azimuth = dy.atan2(dx);
        let alignment = (person.facing_azimuth - leg_azimuth).cos().abs();
        let f = person.body.depth_fraction;
        let half_width = person.body.radius * (f + (1.0 - f) * alignment);
        let len = (b - a).norm();
        Some(EdgeGeometry {
            offset,
            half_width,
            d1: t * len,
            d2: (1.0 - t) * len,
        })
    }

    /// Signed edge intrusions `(near, far)`: positive when the leg runs inside
    /// the silhouette, negative (clear) otherwise.
    pub fn edge_heights(&self) -> (f64, f64) {
        let near = self.half_width - self.offset;
        let far = self.half_width + self.offset;
        if near > 0.0 {
            (near, far)
        } else {
            (near, -far)
        }
    }

    pub fn loss_db(&self, wavelength: f64) -> f64 {
        let Ok(r1) = first_fresnel_radius(self.d1, self.d2, wavelength) else {
            return 0.0;
        };
        if self.offset - self.half_width > CLEARANCE_CUTOFF_FRESNEL * r1 {
            return 0.0;
        }
        let (near, far) = self.edge_heights();
        [near, far]
            .into_iter()
            .map(|h| knife_edge_loss_db(fresnel_parameter(h, self.d1, self.d2, wavelength)))
            .sum()
    }
}

/// Linear amplitude factor (at most 1) for one straight leg `a -> b` passing `person`.
pub fn blockage_attenuation(a: &Point3, b: &Point3, person: &Person, wavelength: f64) -> f64 {
    match EdgeGeometry::new(a, b, person) {
        Some(g) => 10f64.powf(-g.loss_db(wavelength) / 20.0),
        None => 1.0,
    }
}
