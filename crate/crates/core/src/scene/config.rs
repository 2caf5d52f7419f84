//! Scene configuration documents (schema `scene/1`, TOML) and the default
//! office scene.
//!
//! ```toml
//! schema = "scene/1"
//! seed = 7
//! max_reflection_order = 2
//! noise_floor_db = -40.0        # omit to disable noise
//!
//! [room]
//! min = [0.0, 0.0, 0.0]
//! max = [6.6, 7.8, 2.8]
//! wall_reflection = [0.35, 0.30] # [24 GHz, 60 GHz]
//!
//! [[panels]]
//! name = "cabinet"
//! corner = [3.0, 7.5, 0.0]
//! edge_u = [1.8, 0.0, 0.0]
//! edge_v = [0.0, 0.0, 2.0]
//! reflection = [0.9, 0.9]
//!
//! [sites]
//! stack_offset = 0.12            # 24 GHz arrays sit this far above the 60 GHz ones
//! tx1 = { position = [2.0, 6.2, 1.1] } # optional: position_24, boresight_deg
//!
//! [locations]
//! loc1 = [3.3, 3.9]
//! on_direct_path = [1, 2, 3, 4]
//!
//! [[persons]]
//! label = "A"
//! location = 1
//! orientation = 1
//! ```
//!
//! Unset boresights point each array at its diagonal partner (Tx1 at Rx2, Tx2 at Rx1).

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::model::{BodyModel, Reflector, Room, Scene, Site, Sites};
use crate::channel::{Point3, Vector3};
use crate::error::{Error, Result};
use crate::scenario::{bind_scenario, LocationMap, ScenarioCode, ScenarioEntry};
use crate::sounder::DEFAULT_SIDELOBE_FLOOR_DB;

pub const SCENE_SCHEMA: &str = "scene/1";
pub const DEFAULT_STACK_OFFSET: f64 = 0.12;

/// A scene plus the floor coordinates its scenario codes refer to.
#[derive(Debug, Clone, PartialEq)]
pub struct SceneSetup {
    pub scene: Scene,
    pub locations: LocationMap,
}

impl SceneSetup {
    /// Person-free copy of the scene with `code` bound into it.
    pub fn bind(&self, code: &ScenarioCode) -> Result<Scene> {
        bind_scenario(code, &self.scene.without_persons(), &self.locations)
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: SceneFile = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        file.into_setup()
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }
}

fn default_order() -> u8 {
    2
}

fn default_sidelobe() -> f64 {
    DEFAULT_SIDELOBE_FLOOR_DB
}

fn default_stack() -> f64 {
    DEFAULT_STACK_OFFSET
}

fn default_on_path() -> Vec<u8> {
    vec![1, 2, 3, 4]
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct SceneFile {
    schema: String,
    #[serde(default)]
    seed: u64,
    #[serde(default = "default_order")]
    max_reflection_order: u8,
    noise_floor_db: Option<f64>,
    #[serde(default = "default_sidelobe")]
    sidelobe_floor_db: f64,
    room: RoomSpec,
    #[serde(default)]
    panels: Vec<PanelSpec>,
    sites: SitesSpec,
    #[serde(default)]
    body: BodyModel,
    locations: LocationsSpec,
    #[serde(default)]
    persons: Vec<PersonSpec>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RoomSpec {
    min: [f64; 3],
    max: [f64; 3],
    wall_reflection: [f64; 2],
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct PanelSpec {
    name: String,
    corner: [f64; 3],
    edge_u: [f64; 3],
    edge_v: [f64; 3],
    reflection: [f64; 2],
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct SiteSpec {
    position: [f64; 3],
    position_24: Option<[f64; 3]>,
    boresight_deg: Option<f64>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct SitesSpec {
    #[serde(default = "default_stack")]
    stack_offset: f64,
    tx1: SiteSpec,
    tx2: SiteSpec,
    rx1: SiteSpec,
    rx2: SiteSpec,
}

#[derive(Debug, Deserialize, Serialize)]
struct LocationsSpec {
    #[serde(default = "default_on_path")]
    on_direct_path: Vec<u8>,
    #[serde(flatten)]
    coordinates: BTreeMap<String, [f64; 2]>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct PersonSpec {
    label: char,
    location: u8,
    orientation: u8,
}

fn pt(v: [f64; 3]) -> Point3 {
    Point3::new(v[0], v[1], v[2])
}

fn azimuth_to(from: &Point3, to: &Point3) -> f64 {
    (to.y - from.y).atan2(to.x - from.x)
}

impl SceneFile {
    fn into_setup(self) -> Result<SceneSetup> {
        if self.schema != SCENE_SCHEMA {
            return Err(Error::Config(format!(
                "unsupported schema {:?}, expected {SCENE_SCHEMA:?}",
                self.schema
            )));
        }
        let s = &self.sites;
        let p60 = [s.tx1.position, s.tx2.position, s.rx1.position, s.rx2.position].map(pt);
        // partner of tx1, tx2, rx1, rx2
        let partner = [p60[3], p60[2], p60[1], p60[0]];
        let specs = [&s.tx1, &s.tx2, &s.rx1, &s.rx2];
        let mut built = [None; 4];
        for (i, spec) in specs.iter().enumerate() {
            let p24 = spec
                .position_24
                .map(pt)
                .unwrap_or(p60[i] + Vector3::new(0.0, 0.0, s.stack_offset));
            let boresight = spec
                .boresight_deg
                .map(f64::to_radians)
                .unwrap_or_else(|| azimuth_to(&p60[i], &partner[i]));
            built[i] = Some(Site {
                positions: [p24, p60[i]],
                boresight,
            });
        }
        let [tx1, tx2, rx1, rx2] = built.map(Option::unwrap);

        let mut scene = Scene::bare(
            Room {
                min: pt(self.room.min),
                max: pt(self.room.max),
                wall_reflection: self.room.wall_reflection,
            },
            Sites { tx1, tx2, rx1, rx2 },
        );
        scene.seed = self.seed;
        scene.max_reflection_order = self.max_reflection_order;
        scene.noise_floor_db = self.noise_floor_db;
        scene.sidelobe_floor_db = self.sidelobe_floor_db;
        scene.body = self.body;
        scene.panels = self
            .panels
            .into_iter()
            .map(|p| Reflector {
                name: p.name,
                corner: pt(p.corner),
                edge_u: Vector3::from(p.edge_u),
                edge_v: Vector3::from(p.edge_v),
                reflection: p.reflection,
            })
            .collect();
        scene.validate()?;

        let mut coordinates = BTreeMap::new();
        for (key, xy) in self.locations.coordinates {
            let idx = key
                .strip_prefix("loc")
                .and_then(|d| d.parse::<u8>().ok())
                .filter(|i| (1..=8).contains(i))
                .ok_or_else(|| Error::Config(format!("unknown location key {key:?} (expected loc1..loc8)")))?;
            coordinates.insert(idx, Point3::new(xy[0], xy[1], scene.room.min.z));
        }
        let locations = LocationMap {
            coordinates,
            on_direct_path: self.locations.on_direct_path.into_iter().collect::<BTreeSet<_>>(),
        };
        locations.validate(&scene)?;

        let mut code = Vec::new();
        for p in self.persons {
            code.push(ScenarioEntry {
                label: p.label,
                location: p.location,
                orientation: p.orientation,
            });
        }
        let code: ScenarioCode = code
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join("_")
            .parse()?;
        let scene = bind_scenario(&code, &scene, &locations)?;
        Ok(SceneSetup { scene, locations })
    }
}

/// The built-in office scene.
///
/// A 6.6 x 7.8 x 2.8 m room with the window wall at `y = 7.8`. Tx1/Rx1 sit near
/// the window wall and Tx2/Rx2 near the opposite wall, so the Tx1-Rx2 and
/// Tx2-Rx1 links cross mid-room and Tx1-Rx1 / Tx2-Rx2 run parallel to the walls.
/// A metal cabinet stands against the window wall and a whiteboard hangs on the
/// wall near Tx2. Loc1-Loc4 lie on the Tx1-Rx2 line; Loc5-Loc8 surround Loc1 off
/// both diagonals. All coordinates are approximations of a sketched layout.
pub fn default_setup() -> SceneSetup {
    SceneSetup::from_toml_str(DEFAULT_SCENE_TOML).expect("built-in scene is valid")
}

pub const DEFAULT_SCENE_TOML: &str = r#"schema = "scene/1"
seed = 7
max_reflection_order = 2
noise_floor_db = -40.0
sidelobe_floor_db = -25.0

[room]
min = [0.0, 0.0, 0.0]
max = [6.6, 7.8, 2.8]
wall_reflection = [0.35, 0.30]

[[panels]]
name = "cabinet"
corner = [3.0, 7.5, 0.0]
edge_u = [1.8, 0.0, 0.0]
edge_v = [0.0, 0.0, 2.0]
reflection = [0.9, 0.9]

[[panels]]
name = "whiteboard"
corner = [0.6, 0.03, 0.8]
edge_u = [1.8, 0.0, 0.0]
edge_v = [0.0, 0.0, 1.2]
reflection = [0.7, 0.7]

[sites]
stack_offset = 0.12
tx1 = { position = [2.0, 6.2, 1.1] }
rx1 = { position = [4.6, 6.2, 1.1] }
tx2 = { position = [2.0, 1.6, 1.1] }
rx2 = { position = [4.6, 1.6, 1.1] }

[body]
radius = 0.15
height = 1.70
torso_height_fraction = 0.73
depth_fraction = 0.6
sigma_max = 0.6
sigma_floor = 0.05
lobe_exponent = 2.0

[locations]
on_direct_path = [1, 2, 3, 4]
loc1 = [3.3, 3.9]
loc2 = [2.78, 4.82]
loc3 = [3.82, 2.98]
loc4 = [4.21, 2.29]
loc5 = [2.4, 3.9]
loc6 = [3.3, 5.3]
loc7 = [4.2, 3.9]
loc8 = [3.3, 2.5]
"#;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::BandId;

    #[test]
    fn default_scene_shape() {
        let s = default_setup();
        assert_eq!(s.scene.panels.len(), 2);
        assert_eq!(s.locations.coordinates.len(), 8);
        assert!(s.scene.persons.is_empty());
        let tx1 = s.scene.sites.tx1;
        assert!((tx1.position(BandId::Band24).z - tx1.position(BandId::Band60).z - 0.12).abs() < 1e-12);
        // Tx1 looks at Rx2
        let rx2 = s.scene.sites.rx2.position(BandId::Band60);
        let p = tx1.position(BandId::Band60);
        assert!((tx1.boresight - (rx2.y - p.y).atan2(rx2.x - p.x)).abs() < 1e-12);
    }

    #[test]
    fn shipped_config_matches_builtin() {
        let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/default_scene.toml");
        assert_eq!(SceneSetup::load(&path).unwrap(), default_setup());
    }

    #[test]
    fn persons_and_overrides() {
        let text = DEFAULT_SCENE_TOML.to_string()
            + "\n[[persons]]\nlabel = \"B\"\nlocation = 5\norientation = 3\n";
        let s = SceneSetup::from_toml_str(&text).unwrap();
        assert_eq!(s.scene.persons.len(), 1);
        assert_eq!(s.scene.persons[0].label, 'B');
        assert_eq!(s.bind(&"A11".parse().unwrap()).unwrap().persons.len(), 1);

        let text = DEFAULT_SCENE_TOML.replace(
            "tx1 = { position = [2.0, 6.2, 1.1] }",
            "tx1 = { position = [2.0, 6.2, 1.1], position_24 = [2.0, 6.2, 1.5], boresight_deg = -90.0 }",
        );
        let s = SceneSetup::from_toml_str(&text).unwrap();
        assert_eq!(s.scene.sites.tx1.position(BandId::Band24).z, 1.5);
        assert!((s.scene.sites.tx1.boresight + std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_documents() {
        let bad = [
            DEFAULT_SCENE_TOML.replace("scene/1", "scene/2"),
            DEFAULT_SCENE_TOML.replace("seed = 7", "seed = 7\ncolour = 1"),
            DEFAULT_SCENE_TOML.replace("loc8", "loc9"),
            DEFAULT_SCENE_TOML.replace("max_reflection_order = 2", "max_reflection_order = 3"),
            DEFAULT_SCENE_TOML.replace("[4.6, 1.6, 1.1]", "[9.0, 1.6, 1.1]"),
            DEFAULT_SCENE_TOML.replace("on_direct_path = [1, 2, 3, 4]", "on_direct_path = [1, 2, 3]"),
            DEFAULT_SCENE_TOML.replace("[room]", "[rooom]"),
        ];
        for text in bad {
            assert!(matches!(SceneSetup::from_toml_str(&text), Err(Error::Config(_))), "{text}");
        }
    }
}
