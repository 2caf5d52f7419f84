//! Rigid registration of camera point clouds into the global frame defined by
//! the three marker spheres of a calibration square.
//!
//! Transforms map local to global coordinates: `p_global = R * p_local + t`.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::channel::Point3;
use crate::error::{Error, Result};

/// Minimum marker triangle area, m^2.
pub const MIN_TRIANGLE_AREA: f64 = 1e-9;

pub const TRANSFORM_SCHEMA: &str = "rigid/1";

/// Marker sphere centers, matched by index between frames.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarkerTriple {
    pub p1: Point3,
    pub p2: Point3,
    pub p3: Point3,
}

impl MarkerTriple {
    pub fn new(p1: Point3, p2: Point3, p3: Point3) -> Self {
        MarkerTriple { p1, p2, p3 }
    }

    /// Nominal global marker positions on a square of side `side`: the corner
    /// at the origin and its neighbors along +x and +y.
    pub fn calibration_square(side: f64) -> Self {
        MarkerTriple::new(
            Point3::origin(),
            Point3::new(side, 0.0, 0.0),
            Point3::new(0.0, side, 0.0),
        )
    }

    pub fn points(&self) -> [Point3; 3] {
        [self.p1, self.p2, self.p3]
    }

    pub fn area(&self) -> f64 {
        0.5 * (self.p2 - self.p1).cross(&(self.p3 - self.p1)).norm()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RigidTransform {
    pub rotation: Matrix3<f64>,
    pub translation: Vector3<f64>,
}

impl Default for RigidTransform {
    fn default() -> Self {
        RigidTransform::identity()
    }
}

impl RigidTransform {
    pub fn identity() -> Self {
        RigidTransform {
            rotation: Matrix3::identity(),
            translation: Vector3::zeros(),
        }
    }

    pub fn new(rotation: Matrix3<f64>, translation: Vector3<f64>) -> Self {
        RigidTransform { rotation, translation }
    }

    pub fn apply(&self, p: &Point3) -> Point3 {
        Point3::from(self.rotation * p.coords + self.translation)
    }

    /// `self` after `first`.
    pub fn compose(&self, first: &RigidTransform) -> RigidTransform {
        RigidTransform {
            rotation: self.rotation * first.rotation,
            translation: self.rotation * first.translation + self.translation,
        }
    }

    pub fn inverse(&self) -> RigidTransform {
        let rt = self.rotation.transpose();
        RigidTransform {
            rotation: rt,
            translation: -(rt * self.translation),
        }
    }

    /// Orthonormal with determinant +1 within `tol`.
    pub fn is_proper(&self, tol: f64) -> bool {
        (self.rotation.transpose() * self.rotation - Matrix3::identity()).abs().max() <= tol
            && (self.rotation.determinant() - 1.0).abs() <= tol
    }

    /// Text record: the schema line, three rotation rows, then the translation.
    pub fn to_text(&self) -> String {
        let mut s = format!("{TRANSFORM_SCHEMA}\n");
        for r in 0..3 {
            let row = self.rotation.row(r);
            let _ = writeln!(s, "{} {} {}", row[0], row[1], row[2]);
        }
        let t = &self.translation;
        let _ = writeln!(s, "{} {} {}", t.x, t.y, t.z);
        s
    }

    pub fn from_text(text: &str, origin: &Path) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty());
        if lines.next() != Some(TRANSFORM_SCHEMA) {
            return Err(Error::format(origin, format!("expected a {TRANSFORM_SCHEMA} header")));
        }
        let numbers: Vec<f64> = lines
            .flat_map(str::split_whitespace)
            .map(|w| w.parse::<f64>().map_err(|e| Error::format(origin, format!("{w:?}: {e}"))))
            .collect::<Result<_>>()?;
        if numbers.len() != 12 || numbers.iter().any(|v| !v.is_finite()) {
            return Err(Error::format(origin, format!("expected 12 finite numbers, got {}", numbers.len())));
        }
        let t = RigidTransform {
            rotation: Matrix3::from_row_slice(&numbers[..9]),
            translation: Vector3::new(numbers[9], numbers[10], numbers[11]),
        };
        if !t.is_proper(1e-6) {
            return Err(Error::format(origin, "rotation is not a proper rotation matrix"));
        }
        Ok(t)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_text(&text, path)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }
}

/// Estimated transform plus the RMS distance between mapped and reference markers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RigidFit {
    pub transform: RigidTransform,
    pub residual_rms: f64,
}

/// Least-squares rigid fit of index-matched point sets (Kabsch): centroid
/// alignment, SVD of the cross-covariance, and a sign flip on the weakest
/// singular direction when the unconstrained optimum is a reflection.
pub fn fit_rigid_points(local: &[Point3], global: &[Point3]) -> Result<RigidFit> {
    if local.len() != global.len() || local.len() < 3 {
        return Err(Error::DegenerateConfiguration(format!(
            "need at least 3 matched points, got {} and {}",
            local.len(),
            global.len()
        )));
    }
    let n = local.len() as f64;
    let cl = local.iter().fold(Vector3::zeros(), |a, p| a + p.coords) / n;
    let cg = global.iter().fold(Vector3::zeros(), |a, p| a + p.coords) / n;
    let h = local
        .iter()
        .zip(global)
        .fold(Matrix3::zeros(), |acc, (l, g)| acc + (l.coords - cl) * (g.coords - cg).transpose());
    let svd = h.svd(true, true);
    let (u, v_t) = (svd.u.expect("u requested"), svd.v_t.expect("v requested"));
    let mut d = Matrix3::identity();
    if (v_t.transpose() * u.transpose()).determinant() < 0.0 {
        // nalgebra sorts singular values descending; flip the smallest
        d[(2, 2)] = -1.0;
    }
    let rotation = v_t.transpose() * d * u.transpose();
    let transform = RigidTransform {
        rotation,
        translation: cg - rotation * cl,
    };
    let sq: f64 = local
        .iter()
        .zip(global)
        .map(|(l, g)| (transform.apply(l) - g).norm_squared())
        .sum();
    Ok(RigidFit {
        transform,
        residual_rms: (sq / n).sqrt(),
    })
}

/// Transform from a camera frame (`local` marker observations) to the global frame.
pub fn fit_rigid_transform(local: &MarkerTriple, global_ref: &MarkerTriple) -> Result<RigidFit> {
    for (name, m) in [("local", local), ("global", global_ref)] {
        if !(m.area() > MIN_TRIANGLE_AREA) {
            return Err(Error::DegenerateConfiguration(format!(
                "{name} markers are collinear (triangle area {} m^2)",
                m.area()
            )));
        }
    }
    fit_rigid_points(&local.points(), &global_ref.points())
}

pub fn apply_transform(t: &RigidTransform, cloud: &[Point3]) -> Vec<Point3> {
    cloud.iter().map(|p| t.apply(p)).collect()
}

/// Concatenates the transformed clouds in input order.
pub fn merge_clouds(clouds: &[(RigidTransform, Vec<Point3>)]) -> Vec<Point3> {
    clouds.iter().flat_map(|(t, c)| apply_transform(t, c)).collect()
}

/// ASCII XYZ: one `x y z` triple per line; blank lines and `#` comments ignored.
pub fn parse_xyz(text: &str, origin: &Path) -> Result<Vec<Point3>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let v: Vec<f64> = body
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::format(origin, format!("line {}: {e}", i + 1)))?;
        if v.len() != 3 {
            return Err(Error::format(origin, format!("line {}: expected 3 values, got {}", i + 1, v.len())));
        }
        out.push(Point3::new(v[0], v[1], v[2]));
    }
    Ok(out)
}

pub fn format_xyz(cloud: &[Point3]) -> String {
    let mut s = String::with_capacity(cloud.len() * 48);
    for p in cloud {
        let _ = writeln!(s, "{} {} {}", p.x, p.y, p.z);
    }
    s
}

pub fn read_xyz(path: &Path) -> Result<Vec<Point3>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_xyz(&text, path)
}

pub fn write_xyz(path: &Path, cloud: &[Point3]) -> Result<()> {
    std::fs::write(path, format_xyz(cloud)).map_err(|e| Error::io(path, e))
}
