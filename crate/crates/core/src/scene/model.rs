use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channel::{BandConfig, BandId, LinkId, Point3, RxSite, TxSite, Vector3};
use crate::error::{Error, Result};
use crate::sounder::{BeamGrids, DEFAULT_SIDELOBE_FLOOR_DB};

/// Plane rectangle `corner + a * edge_u + b * edge_v`, `a, b` in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reflector {
    pub name: String,
    pub corner: Point3,
    pub edge_u: Vector3,
    pub edge_v: Vector3,
    /// Amplitude reflection coefficient, `[24 GHz, 60 GHz]`.
    pub reflection: [f64; 2],
}

impl Reflector {
    pub fn normal(&self) -> Vector3 {
        self.edge_u.cross(&self.edge_v).normalize()
    }

    pub fn coefficient(&self, band: BandId) -> f64 {
        self.reflection[band.index()]
    }

    pub fn signed_distance(&self, p: &Point3) -> f64 {
        (p - self.corner).dot(&self.normal())
    }

    /// Mirror image of `p` in the reflector's plane.
    pub fn mirror(&self, p: &Point3) -> Point3 {
        let n = self.normal();
        p - n * (2.0 * self.signed_distance(p))
    }

    /// Intersection of the open segment `a -> b` with the rectangle.
    pub fn intersect(&self, a: &Point3, b: &Point3) -> Option<Point3> {
        let da = self.signed_distance(a);
        let db = self.signed_distance(b);
        if da * db >= 0.0 {
            return None;
        }
        let t = da / (da - db);
        if t <= 1e-12 || t >= 1.0 - 1e-12 {
            return None;
        }
        let p = a + (b - a) * t;
        self.contains_in_plane(&p).then_some(p)
    }

    fn contains_in_plane(&self, p: &Point3) -> bool {
        let rel = p - self.corner;
        let (u, v) = (self.edge_u, self.edge_v);
        // solve rel = a u + b v in the least-squares sense (u, v need not be orthogonal)
        let uu = u.dot(&u);
        let vv = v.dot(&v);
        let uv = u.dot(&v);
        let det = uu * vv - uv * uv;
        if det.abs() < 1e-18 {
            return false;
        }
        let ru = rel.dot(&u);
        let rv = rel.dot(&v);
        let a = (ru * vv - rv * uv) / det;
        let b = (rv * uu - ru * uv) / det;
        let tol = 1e-12;
        (-tol..=1.0 + tol).contains(&a) && (-tol..=1.0 + tol).contains(&b)
    }

    pub fn validate(&self) -> Result<()> {
        if self.edge_u.cross(&self.edge_v).norm() < 1e-9 {
            return Err(Error::Config(format!("panel {:?} has parallel edges", self.name)));
        }
        Ok(())
    }
}

/// Axis-aligned room; its six faces reflect with a common per-band coefficient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Room {
    pub min: Point3,
    pub max: Point3,
    pub wall_reflection: [f64; 2],
}

impl Room {
    pub fn contains(&self, p: &Point3) -> bool {
        (0..3).all(|i| p[i] > self.min[i] && p[i] < self.max[i])
    }

    pub fn walls(&self) -> Vec<Reflector> {
        let (lo, hi) = (self.min, self.max);
        let size = hi - lo;
        let x = Vector3::new(size.x, 0.0, 0.0);
        let y = Vector3::new(0.0, size.y, 0.0);
        let z = Vector3::new(0.0, 0.0, size.z);
        let wall = |name: &str, corner: Point3, u: Vector3, v: Vector3| Reflector {
            name: name.to_string(),
            corner,
            edge_u: u,
            edge_v: v,
            reflection: self.wall_reflection,
        };
        vec![
            wall("wall_y_min", lo, x, z),
            wall("wall_y_max", Point3::new(lo.x, hi.y, lo.z), x, z),
            wall("wall_x_min", lo, y, z),
            wall("wall_x_max", Point3::new(hi.x, lo.y, lo.z), y, z),
            wall("floor", lo, x, y),
            wall("ceiling", Point3::new(lo.x, lo.y, hi.z), x, y),
        ]
    }
}

/// Array placement; the 24 GHz front end sits above the 60 GHz one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Site {
    /// Array phase center per band, `[24 GHz, 60 GHz]`.
    pub positions: [Point3; 2],
    /// Broadside azimuth of the array, radians.
    pub boresight: f64,
}

impl Site {
    pub fn position(&self, band: BandId) -> Point3 {
        self.positions[band.index()]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sites {
    pub tx1: Site,
    pub tx2: Site,
    pub rx1: Site,
    pub rx2: Site,
}

impl Sites {
    pub fn tx(&self, s: TxSite) -> &Site {
        match s {
            TxSite::Tx1 => &self.tx1,
            TxSite::Tx2 => &self.tx2,
        }
    }

    pub fn rx(&self, s: RxSite) -> &Site {
        match s {
            RxSite::Rx1 => &self.rx1,
            RxSite::Rx2 => &self.rx2,
        }
    }

    pub fn all(&self) -> [(&'static str, &Site); 4] {
        [
            ("tx1", &self.tx1),
            ("tx2", &self.tx2),
            ("rx1", &self.rx1),
            ("rx2", &self.rx2),
        ]
    }
}

/// Shape and scattering parameters of a standing person.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BodyModel {
    pub radius: f64,
    pub height: f64,
    /// Height of the scattering point as a fraction of body height.
    pub torso_height_fraction: f64,
    /// Silhouette half-width seen side-on, as a fraction of `radius`.
    pub depth_fraction: f64,
    /// Peak equivalent radar cross-section, m^2.
    pub sigma_max: f64,
    pub sigma_floor: f64,
    pub lobe_exponent: f64,
}

impl Default for BodyModel {
    fn default() -> Self {
        BodyModel {
            radius: 0.15,
            height: 1.70,
            torso_height_fraction: 0.73,
            depth_fraction: 0.6,
            sigma_max: 0.6,
            sigma_floor: 0.05,
            lobe_exponent: 2.0,
        }
    }
}

impl BodyModel {
    pub fn validate(&self) -> Result<()> {
        let ok = self.radius > 0.0
            && self.height > 0.0
            && (0.0..=1.0).contains(&self.torso_height_fraction)
            && (0.0..=1.0).contains(&self.depth_fraction)
            && self.sigma_max >= 0.0
            && self.sigma_floor >= 0.0
            && self.lobe_exponent > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!("invalid body model {self:?}")))
        }
    }
}

/// A person modeled as a vertical cylinder standing on the floor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Person {
    pub label: char,
    pub location_index: u8,
    pub orientation_index: u8,
    /// Body axis at floor level.
    pub center: Point3,
    /// Direction the chest faces, radians.
    pub facing_azimuth: f64,
    pub body: BodyModel,
}

impl Person {
    pub fn scatter_point(&self) -> Point3 {
        Point3::new(
            self.center.x,
            self.center.y,
            self.center.z + self.body.height * self.body.torso_height_fraction,
        )
    }

    /// True when `p` lies inside the body cylinder.
    pub fn contains(&self, p: &Point3) -> bool {
        let dx = p.x - self.center.x;
        let dy = p.y - self.center.y;
        dx.hypot(dy) < self.body.radius && p.z >= self.center.z && p.z <= self.center.z + self.body.height
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PathKind {
    Los,
    Reflection(u8),
    HumanScatter(char),
}

/// One ray between the Tx and Rx of a link.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropagationPath {
    pub delay: f64,
    pub amplitude: Complex64,
    pub azimuth_departure: f64,
    pub azimuth_arrival: f64,
    pub elevation_departure: f64,
    pub elevation_arrival: f64,
    pub kind: PathKind,
    /// Tx, interaction points, Rx.
    pub vertices: Vec<Point3>,
}

impl PropagationPath {
    pub fn length(&self) -> f64 {
        self.vertices.windows(2).map(|w| (w[1] - w[0]).norm()).sum()
    }
}

/// Azimuth and elevation of the direction `from -> to`.
pub fn direction_angles(from: &Point3, to: &Point3) -> (f64, f64) {
    let d = to - from;
    (d.y.atan2(d.x), d.z.atan2(d.x.hypot(d.y)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scene {
    pub room: Room,
    pub panels: Vec<Reflector>,
    pub sites: Sites,
    pub persons: Vec<Person>,
    /// 0, 1 or 2.
    pub max_reflection_order: u8,
    /// Per-entry noise power relative to the strongest person-free path; `None` disables noise.
    pub noise_floor_db: Option<f64>,
    pub seed: u64,
    pub sidelobe_floor_db: f64,
    /// Body model given to persons placed from scenario codes.
    pub body: BodyModel,
}

impl Scene {
    /// An empty room of the given size with four sites and no panels.
    pub fn bare(room: Room, sites: Sites) -> Self {
        Scene {
            room,
            panels: Vec::new(),
            sites,
            persons: Vec::new(),
            max_reflection_order: 2,
            noise_floor_db: Some(-40.0),
            seed: 0,
            sidelobe_floor_db: DEFAULT_SIDELOBE_FLOOR_DB,
            body: BodyModel::default(),
        }
    }

    pub fn without_persons(&self) -> Scene {
        Scene {
            persons: Vec::new(),
            ..self.clone()
        }
    }

    /// Room faces followed by panels.
    pub fn reflectors(&self) -> Vec<Reflector> {
        let mut all = self.room.walls();
        all.extend(self.panels.iter().cloned());
        all
    }

    pub fn beam_grids(&self, band: &BandConfig) -> BeamGrids {
        BeamGrids::with_floor(band, self.sidelobe_floor_db)
    }

    pub fn link_sites(&self, link: LinkId) -> (&Site, &Site) {
        (self.sites.tx(link.tx), self.sites.rx(link.rx))
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_reflection_order > 2 {
            return Err(Error::Config(format!(
                "max_reflection_order must be 0, 1 or 2, got {}",
                self.max_reflection_order
            )));
        }
        if (0..3).any(|i| self.room.max[i] <= self.room.min[i]) {
            return Err(Error::Config("room max must exceed room min on every axis".into()));
        }
        for (name, site) in self.sites.all() {
            for band in BandId::ALL {
                if !self.room.contains(&site.position(band)) {
                    return Err(Error::Config(format!("site {name} ({band}) lies outside the room")));
                }
            }
        }
        for p in &self.panels {
            p.validate()?;
        }
        let mut labels: Vec<char> = self.persons.iter().map(|p| p.label).collect();
        labels.sort_unstable();
        if labels.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Config("duplicate person label in scene".into()));
        }
        self.body.validate()?;
        for person in &self.persons {
            person.body.validate()?;
        }
        if !(self.sidelobe_floor_db <= -15.0) {
            return Err(Error::Config(format!(
                "sidelobe floor must be at most -15 dB, got {}",
                self.sidelobe_floor_db
            )));
        }
        Ok(())
    }
}
