//! Scenario codes such as `A21_C68`: underscore-separated entries of a person
//! label (`A`-`E`), a location digit (1-8) and an orientation digit (1-8).
//!
//! Orientation 1 faces Tx1; each further step turns the person 45 degrees
//! clockwise in the floor plan (x to the right, y up, window wall with Tx1 at the
//! top), i.e. toward decreasing math azimuth:
//!
//! ```text
//!            Tx1 side (top)
//!                 1
//!             8       2
//!           7    (P)    3
//!             6       4
//!                 5
//! ```
//!
//! The diagram is drawn for a person directly below Tx1.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::FRAC_PI_4;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channel::{segment_foot, BandId, Point3};
use crate::error::{Error, Result};
use crate::scene::{Person, Scene};

pub const MAX_ENTRIES: usize = 3;
pub const N_LOCATIONS: u8 = 8;
pub const N_ORIENTATIONS: u8 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("empty entry")]
    EmptyEntry,
    #[error("person label {0:?} is not one of A-E")]
    BadLabel(char),
    #[error("expected a digit, found {0:?}")]
    NotADigit(char),
    #[error("location {0} is outside 1-8")]
    LocationOutOfRange(u32),
    #[error("orientation {0} is outside 1-8")]
    OrientationOutOfRange(u32),
    #[error("entry ends early")]
    TooShort,
    #[error("unexpected trailing character {0:?}")]
    Trailing(char),
    #[error("person {0} appears twice")]
    DuplicateLabel(char),
    #[error("more than 3 persons")]
    TooManyEntries,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("scenario code {code:?}, byte {offset}: {kind}")]
pub struct ScenarioParseError {
    pub code: String,
    pub offset: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ScenarioEntry {
    pub label: char,
    pub location: u8,
    pub orientation: u8,
}

impl fmt::Display for ScenarioEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", self.label, self.location, self.orientation)
    }
}

/// Zero entries is the person-free baseline and formats as the empty string.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ScenarioCode {
    entries: Vec<ScenarioEntry>,
}

impl ScenarioCode {
    pub fn empty() -> Self {
        ScenarioCode::default()
    }

    pub fn entries(&self) -> &[ScenarioEntry] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn single(label: char, location: u8, orientation: u8) -> Self {
        ScenarioCode {
            entries: vec![ScenarioEntry {
                label,
                location,
                orientation,
            }],
        }
    }
}

impl fmt::Display for ScenarioCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str("_")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl FromStr for ScenarioCode {
    type Err = ScenarioParseError;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        parse_scenario_code(s)
    }
}

/// Next digit and its absolute byte offset.
fn parse_digit(
    chars: &mut std::iter::Peekable<std::str::CharIndices<'_>>,
    base: usize,
    end: usize,
) -> std::result::Result<(usize, u32), (usize, ParseErrorKind)> {
    match chars.next() {
        None => Err((end, ParseErrorKind::TooShort)),
        Some((at, c)) => c
            .to_digit(10)
            .map(|d| (base + at, d))
            .ok_or((base + at, ParseErrorKind::NotADigit(c))),
    }
}

fn parse_entry(token: &str, base: usize) -> std::result::Result<ScenarioEntry, (usize, ParseErrorKind)> {
    let mut chars = token.char_indices().peekable();
    let (_, label) = chars.next().ok_or((base, ParseErrorKind::EmptyEntry))?;
    if !('A'..='E').contains(&label) {
        return Err((base, ParseErrorKind::BadLabel(label)));
    }
    let end = base + token.len();
    let (at, loc) = parse_digit(&mut chars, base, end)?;
    if !(1..=N_LOCATIONS as u32).contains(&loc) {
        return Err((at, ParseErrorKind::LocationOutOfRange(loc)));
    }
    let (at, orient) = parse_digit(&mut chars, base, end)?;
    if !(1..=N_ORIENTATIONS as u32).contains(&orient) {
        return Err((at, ParseErrorKind::OrientationOutOfRange(orient)));
    }
    if let Some((at, c)) = chars.next() {
        return Err((base + at, ParseErrorKind::Trailing(c)));
    }
    Ok(ScenarioEntry {
        label,
        location: loc as u8,
        orientation: orient as u8,
    })
}

/// Parses a scenario code; the empty string is the person-free baseline.
pub fn parse_scenario_code(text: &str) -> std::result::Result<ScenarioCode, ScenarioParseError> {
    let fail = |offset, kind| ScenarioParseError {
        code: text.to_string(),
        offset,
        kind,
    };
    if text.is_empty() {
        return Ok(ScenarioCode::empty());
    }
    let mut entries: Vec<ScenarioEntry> = Vec::new();
    let mut base = 0;
    for token in text.split('_') {
        if entries.len() == MAX_ENTRIES {
            return Err(fail(base, ParseErrorKind::TooManyEntries));
        }
        let entry = parse_entry(token, base).map_err(|(o, k)| fail(o, k))?;
        if entries.iter().any(|e| e.label == entry.label) {
            return Err(fail(base, ParseErrorKind::DuplicateLabel(entry.label)));
        }
        entries.push(entry);
        base += token.len() + 1;
    }
    Ok(ScenarioCode { entries })
}

/// Person A at every location and orientation, location-major: `A11, A12, ... A88`.
pub fn enumerate_single_person_campaign() -> Vec<ScenarioCode> {
    (1..=N_LOCATIONS)
        .flat_map(|loc| (1..=N_ORIENTATIONS).map(move |o| ScenarioCode::single('A', loc, o)))
        .collect()
}

/// Two-person scenarios of the measurement catalog.
pub const TWO_PERSON_CATALOG: [&str; 56] = [
    "B21_C41", "B23_C43", "B25_C33", "B26_C37", "B26_C44", "B28_C38", "B32_C24", "B33_C28",
    "B38_C26", "B41_C24", "B43_C27", "B44_C27", "A21_C68", "A21_C71", "A22_C51", "A22_C71",
    "A23_C64", "A23_C72", "A23_C73", "A23_C76", "A25_C54", "A26_C56", "A26_C61", "A27_C73",
    "A51_C22", "A51_C24", "A51_C61", "A51_C71", "A52_C68", "A52_C78", "A53_C68", "A53_C72",
    "A53_C73", "A54_C62", "A54_C63", "A54_C73", "A55_C66", "A55_C75", "A56_C24", "A56_C78",
    "A61_C23", "A63_C21", "A68_C26", "A81_C21", "A81_C24", "A81_C71", "A82_C28", "A82_C72",
    "A83_C77", "A85_C27", "A86_C74", "A87_C23", "A87_C73", "A88_C26", "A88_C72", "A84_C77",
];

/// Three-person scenarios of the measurement catalog.
pub const THREE_PERSON_CATALOG: [&str; 30] = [
    "A22_D76_E88", "A23_D67_E58", "A23_D78_E81", "A24_D61_E52", "A51_D24_E66", "A52_D23_E62",
    "A52_D68_E88", "A53_D68_E71", "A53_D85_E72", "A54_D66_E78", "A55_D61_E82", "A56_D82_E75",
    "A61_D52_E23", "A61_D82_E56", "A63_D53_E73", "A66_D58_E27", "A67_D55_E77", "A68_D86_E52",
    "A71_D66_E58", "A71_D87_E26", "A72_D54_E81", "A73_D56_E86", "A73_D68_E54", "A73_D68_E22",
    "A81_D67_E52", "A81_D71_E52", "A82_D22_E72", "A86_D66_E54", "A86_D77_E54", "A87_D28_E74",
];

/// The full 150-scenario measurement catalog: single person, then two, then three.
pub fn catalog() -> Vec<String> {
    enumerate_single_person_campaign()
        .iter()
        .map(ToString::to_string)
        .chain(TWO_PERSON_CATALOG.iter().map(|s| s.to_string()))
        .chain(THREE_PERSON_CATALOG.iter().map(|s| s.to_string()))
        .collect()
}

/// Parses a campaign file: one code per line, `#` starts a comment, blank lines skipped.
pub fn parse_campaign(text: &str) -> Result<Vec<ScenarioCode>> {
    let mut codes = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let code = parse_scenario_code(body)
            .map_err(|e| Error::Config(format!("campaign line {}: {e}", i + 1)))?;
        codes.push(code);
    }
    Ok(codes)
}

/// Floor coordinates of the marked locations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocationMap {
    pub coordinates: BTreeMap<u8, Point3>,
    /// Locations on the Tx1-Rx2 line of sight.
    pub on_direct_path: BTreeSet<u8>,
}

/// Lateral tolerance for locations declared on the Tx1-Rx2 line.
pub const ON_PATH_TOLERANCE: f64 = 0.01;

impl LocationMap {
    pub fn get(&self, index: u8) -> Result<Point3> {
        self.coordinates
            .get(&index)
            .copied()
            .ok_or_else(|| Error::Config(format!("location {index} is not mapped")))
    }

    /// Checks on-path membership against the 60 GHz Tx1-Rx2 segment in the floor plane.
    pub fn validate(&self, scene: &Scene) -> Result<()> {
        let flat = |p: Point3| Point3::new(p.x, p.y, 0.0);
        let a = flat(scene.sites.tx1.position(BandId::Band60));
        let b = flat(scene.sites.rx2.position(BandId::Band60));
        for (&idx, p) in &self.coordinates {
            let foot = segment_foot(&a, &b, &flat(*p))
                .ok_or_else(|| Error::Config("Tx1 and Rx2 coincide".into()))?;
            let on_line = foot.is_interior() && foot.offset <= ON_PATH_TOLERANCE;
            if on_line != self.on_direct_path.contains(&idx) {
                return Err(Error::Config(format!(
                    "location {idx} is {} m from the Tx1-Rx2 line but is {}declared on it",
                    foot.offset,
                    if on_line { "not " } else { "" }
                )));
            }
        }
        Ok(())
    }
}

/// Facing azimuth for an orientation index: toward Tx1, then 45 degree clockwise steps.
pub fn facing_azimuth(center: &Point3, tx1: &Point3, orientation: u8) -> f64 {
    let to_tx1 = (tx1.y - center.y).atan2(tx1.x - center.x);
    crate::sounder::wrap_angle(to_tx1 - f64::from(orientation - 1) * FRAC_PI_4)
}

/// Adds the code's persons to `base` using the scene's body model.
pub fn bind_scenario(code: &ScenarioCode, base: &Scene, locations: &LocationMap) -> Result<Scene> {
    let mut scene = base.clone();
    let tx1 = base.sites.tx1.position(BandId::Band60);
    for e in code.entries() {
        if scene.persons.iter().any(|p| p.label == e.label) {
            return Err(Error::Config(format!("person {} is already in the scene", e.label)));
        }
        let center = locations.get(e.location)?;
        scene.persons.push(Person {
            label: e.label,
            location_index: e.location,
            orientation_index: e.orientation,
            center,
            facing_azimuth: facing_azimuth(&center, &tx1, e.orientation),
            body: base.body,
        });
    }
    Ok(scene)
}
