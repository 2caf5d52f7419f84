//! Ray enumeration: line of sight, specular images up to second order, and one
//! scatter ray per person.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::blockage::blockage_attenuation;
use super::model::direction_angles;
use super::scatter::human_scatter_amplitude;
use super::{PathKind, PropagationPath, Reflector, Scene};
use crate::channel::{BandConfig, BandId, LinkId, Point3, SPEED_OF_LIGHT};
use crate::error::{Error, Result};

/// Reflectors that contribute in `band`, with their scene index.
fn active_reflectors(scene: &Scene, band: BandId) -> Vec<(usize, Reflector)> {
    scene
        .reflectors()
        .into_iter()
        .enumerate()
        .filter(|(_, r)| r.coefficient(band) != 0.0)
        .collect()
}

/// True if a panel other than those in `skip` cuts the open segment `a -> b`.
fn occluded(panels: &[(usize, Reflector)], skip: &[usize], a: &Point3, b: &Point3) -> bool {
    panels
        .iter()
        .filter(|(i, _)| !skip.contains(i))
        .any(|(_, p)| p.intersect(a, b).is_some())
}

fn first_order(r: &Reflector, tx: &Point3, rx: &Point3) -> Option<Vec<Point3>> {
    let image = r.mirror(tx);
    let hit = r.intersect(&image, rx)?;
    Some(vec![*tx, hit, *rx])
}

fn second_order(r1: &Reflector, r2: &Reflector, tx: &Point3, rx: &Point3) -> Option<Vec<Point3>> {
    let image1 = r1.mirror(tx);
    let image2 = r2.mirror(&image1);
    let hit2 = r2.intersect(&image2, rx)?;
    let hit1 = r1.intersect(&image1, &hit2)?;
    // the first leg must not cross the second reflector and vice versa
    if r2.intersect(tx, &hit1).is_some() || r1.intersect(&hit2, rx).is_some() {
        return None;
    }
    Some(vec![*tx, hit1, hit2, *rx])
}

struct RayBuilder<'a> {
    scene: &'a Scene,
    wavelength: f64,
    panels: Vec<(usize, Reflector)>,
}

impl RayBuilder<'_> {
    fn attenuation(&self, vertices: &[Point3], skip_person: Option<char>) -> f64 {
        let mut factor = 1.0;
        for person in &self.scene.persons {
            if Some(person.label) == skip_person {
                continue;
            }
            for leg in vertices.windows(2) {
                factor *= blockage_attenuation(&leg[0], &leg[1], person, self.wavelength);
            }
        }
        factor
    }

    fn finish(&self, vertices: Vec<Point3>, amplitude: Complex64, kind: PathKind) -> PropagationPath {
        let n = vertices.len();
        let (az_d, el_d) = direction_angles(&vertices[0], &vertices[1]);
        let (az_a, el_a) = direction_angles(&vertices[n - 1], &vertices[n - 2]);
        let length: f64 = vertices.windows(2).map(|w| (w[1] - w[0]).norm()).sum();
        PropagationPath {
            delay: length / SPEED_OF_LIGHT,
            amplitude,
            azimuth_departure: az_d,
            azimuth_arrival: az_a,
            elevation_departure: el_d,
            elevation_arrival: el_a,
            kind,
            vertices,
        }
    }

    /// Free-space specular ray with its reflection coefficients and body shadowing.
    fn specular(&self, vertices: Vec<Point3>, coefficient: f64, skip: &[usize]) -> Option<PropagationPath> {
        for leg in vertices.windows(2) {
            if occluded(&self.panels, skip, &leg[0], &leg[1]) {
                return None;
            }
        }
        let length: f64 = vertices.windows(2).map(|w| (w[1] - w[0]).norm()).sum();
        let free_space = self.wavelength / (4.0 * PI * length);
        let amp = free_space * coefficient * self.attenuation(&vertices, None);
        let kind = match vertices.len() - 2 {
            0 => PathKind::Los,
            k => PathKind::Reflection(k as u8),
        };
        Some(self.finish(vertices, Complex64::new(amp, 0.0), kind))
    }
}

/// All rays of `link` in `band`, sorted by delay.
pub fn enumerate_paths(scene: &Scene, link: LinkId, band: &BandConfig) -> Result<Vec<PropagationPath>> {
    let (tx_site, rx_site) = scene.link_sites(link);
    let tx = tx_site.position(band.band_id);
    let rx = rx_site.position(band.band_id);
    if (tx - rx).norm() < 1e-9 {
        return Err(Error::Geometry(format!("{link}: Tx and Rx coincide")));
    }
    for person in &scene.persons {
        if person.contains(&tx) || person.contains(&rx) {
            return Err(Error::Geometry(format!(
                "{link}: person {} stands on an array",
                person.label
            )));
        }
    }
    let reflectors = active_reflectors(scene, band.band_id);
    for (_, r) in &reflectors {
        for (site, p) in [("Tx", &tx), ("Rx", &rx)] {
            if (r.mirror(p) - p).norm() < 1e-9 {
                return Err(Error::Geometry(format!(
                    "{link}: {site} lies in the plane of reflector {:?}",
                    r.name
                )));
            }
        }
    }
    let n_walls = scene.room.walls().len();
    let builder = RayBuilder {
        scene,
        wavelength: band.wavelength(),
        panels: reflectors.iter().filter(|(i, _)| *i >= n_walls).cloned().collect(),
    };
    let band_id = band.band_id;

    let mut paths = Vec::new();
    paths.extend(builder.specular(vec![tx, rx], 1.0, &[]));
    if scene.max_reflection_order >= 1 {
        for (i, r) in &reflectors {
            if let Some(v) = first_order(r, &tx, &rx) {
                paths.extend(builder.specular(v, r.coefficient(band_id), &[*i]));
            }
        }
    }
    if scene.max_reflection_order >= 2 {
        for (i, r1) in &reflectors {
            for (j, r2) in &reflectors {
                if i == j {
                    continue;
                }
                if let Some(v) = second_order(r1, r2, &tx, &rx) {
                    let c = r1.coefficient(band_id) * r2.coefficient(band_id);
                    paths.extend(builder.specular(v, c, &[*i, *j]));
                }
            }
        }
    }
    for person in &scene.persons {
        let s = person.scatter_point();
        let vertices = vec![tx, s, rx];
        if vertices
            .windows(2)
            .any(|leg| occluded(&builder.panels, &[], &leg[0], &leg[1]))
        {
            continue;
        }
        let (incident, _) = direction_angles(&s, &tx);
        let (scattered, _) = direction_angles(&s, &rx);
        let amp = human_scatter_amplitude(
            person,
            incident,
            scattered,
            (s - tx).norm(),
            (rx - s).norm(),
            builder.wavelength,
        )? * builder.attenuation(&vertices, Some(person.label));
        paths.push(builder.finish(vertices, amp, PathKind::HumanScatter(person.label)));
    }
    paths.sort_by(|a, b| a.delay.total_cmp(&b.delay));
    Ok(paths)
}
