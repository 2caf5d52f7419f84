use super::{Point3, Vector3};
use crate::error::{Error, Result};

/// Radius of the first Fresnel zone at a point splitting the link into `d1` and `d2`.
pub fn first_fresnel_radius(d1: f64, d2: f64, wavelength: f64) -> Result<f64> {
    if !(d1 > 0.0 && d2 > 0.0 && wavelength > 0.0) {
        return Err(Error::Domain(format!(
            "Fresnel radius needs positive inputs, got d1={d1}, d2={d2}, wavelength={wavelength}"
        )));
    }
    Ok((wavelength * d1 * d2 / (d1 + d2)).sqrt())
}

/// Projection of `p` onto the line through `a` and `b`.
#[derive(Debug, Clone, Copy)]
pub struct SegmentFoot {
    /// Normalized position of the foot along `a -> b`.
    pub t: f64,
    pub foot: Point3,
    /// Distance from `p` to the foot.
    pub offset: f64,
    pub d1: f64,
    pub d2: f64,
}

impl SegmentFoot {
    pub fn is_interior(&self) -> bool {
        self.t > 0.0 && self.t < 1.0
    }
}

/// Returns `None` when `a` and `b` coincide.
pub fn segment_foot(a: &Point3, b: &Point3, p: &Point3) -> Option<SegmentFoot> {
    let ab: Vector3 = b - a;
    let len2 = ab.norm_squared();
    if len2 == 0.0 {
        return None;
    }
    let len = len2.sqrt();
    let t = (p - a).dot(&ab) / len2;
    let foot = a + ab * t;
    Some(SegmentFoot {
        t,
        foot,
        offset: (p - foot).norm(),
        d1: t * len,
        d2: (1.0 - t) * len,
    })
}

/// True iff `p` lies inside the first Fresnel ellipsoid of `tx -> rx`, with the
/// foot of its perpendicular strictly between the endpoints.
pub fn point_in_first_fresnel(tx: &Point3, rx: &Point3, p: &Point3, wavelength: f64) -> bool {
    let Some(foot) = segment_foot(tx, rx, p) else {
        return false;
    };
    if !foot.is_interior() {
        return false;
    }
    match first_fresnel_radius(foot.d1, foot.d2, wavelength) {
        Ok(r) => foot.offset < r,
        Err(_) => false,
    }
}
