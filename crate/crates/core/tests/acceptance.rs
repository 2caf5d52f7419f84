//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the test fails if any criterion does.
//!
//! The report is written straight to stdout, so it shows even under the
//! default output capture.

use std::collections::BTreeSet;
use std::io::Write;
use std::f64::consts::PI;
use std::time::{Duration, Instant};

use nalgebra::{Matrix3, Rotation3, Unit, Vector3};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use isac_sounder::channel::{
    cir_to_ctf, ctf_to_cir, BandConfig, BandId, CirTensor, CtfTensor, Dims, LinkId, Point3, Side, WindowKind,
};
use isac_sounder::characterization::{compute_adps, compute_angular_spread, compute_pap, compute_pdp, compute_rms_ds};
use isac_sounder::pipeline::{self, metrics_of};
use isac_sounder::registration::{fit_rigid_transform, MarkerTriple, RigidTransform};
use isac_sounder::scenario::{catalog, enumerate_single_person_campaign, parse_scenario_code, ScenarioCode};
use isac_sounder::scene::{default_setup, enumerate_paths, noise_spec, render_ctf, synthesize_all, PathKind, PropagationPath};
use isac_sounder::sounder::{build_scan_schedule, BeamGrids};

type Outcome = Result<String, String>;

fn check(ok: bool, what: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

fn random_values(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect()
}

// ---------------------------------------------------------------- criterion 1

fn oracle_pdp(c: &CirTensor) -> Vec<f64> {
    let d = c.dims();
    let mut out = vec![0.0; d.n0];
    for (tau, acc) in out.iter_mut().enumerate() {
        for rx in 0..d.n_rx {
            for tx in 0..d.n_tx {
                let h = c.values()[(tau * d.n_rx + rx) * d.n_tx + tx];
                *acc += h.re * h.re + h.im * h.im;
            }
        }
    }
    out
}

fn oracle_adps(c: &CirTensor, side: Side) -> Vec<Vec<f64>> {
    let d = c.dims();
    let (n_keep, n_sum) = match side {
        Side::Tx => (d.n_tx, d.n_rx),
        Side::Rx => (d.n_rx, d.n_tx),
    };
    let mut out = vec![vec![0.0; n_keep]; d.n0];
    for (tau, row) in out.iter_mut().enumerate() {
        for (k, acc) in row.iter_mut().enumerate() {
            for s in 0..n_sum {
                let (rx, tx) = match side {
                    Side::Tx => (s, k),
                    Side::Rx => (k, s),
                };
                let h = c.values()[(tau * d.n_rx + rx) * d.n_tx + tx];
                *acc += h.re * h.re + h.im * h.im;
            }
        }
    }
    out
}

fn oracle_pap(adps: &[Vec<f64>]) -> Vec<f64> {
    let mut out = vec![0.0; adps[0].len()];
    for row in adps {
        for (k, v) in row.iter().enumerate() {
            out[k] += v;
        }
    }
    out
}

fn all_close(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| rel_close(*x, *y, 1e-12))
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for trial in 0..100 {
        let dims = Dims::new(rng.random_range(1..=64), rng.random_range(1..=12), rng.random_range(1..=11));
        let cir = CirTensor::new(BandId::Band60, LinkId::TX1RX2, dims, 2.5e-9, random_values(&mut rng, dims.len()))
            .map_err(|e| e.to_string())?;
        check(all_close(&compute_pdp(&cir), &oracle_pdp(&cir)), format!("PDP trial {trial}"))?;
        for side in [Side::Tx, Side::Rx] {
            let adps = oracle_adps(&cir, side);
            let got = compute_adps(&cir, side);
            check(
                got.len() == adps.len() && got.iter().zip(&adps).all(|(a, b)| all_close(a, b)),
                format!("ADPS {side:?} trial {trial}"),
            )?;
            check(all_close(&compute_pap(&cir, side), &oracle_pap(&adps)), format!("PAP {side:?} trial {trial}"))?;
        }
    }
    let t = start.elapsed();
    check(t < Duration::from_secs(10), format!("took {t:?}"))?;
    Ok(format!("100 random tensors match the loop oracles in {:.2} s", t.as_secs_f64()))
}

// ---------------------------------------------------------------- criterion 2

fn single_path(delay: f64) -> PropagationPath {
    PropagationPath {
        delay,
        amplitude: Complex64::new(1.0, 0.0),
        azimuth_departure: 0.0,
        azimuth_arrival: PI,
        elevation_departure: 0.0,
        elevation_arrival: 0.0,
        kind: PathKind::Los,
        vertices: vec![Point3::origin(), Point3::new(delay * 3e8, 0.0, 0.0)],
    }
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst_rt: f64 = 0.0;
    let mut worst_parseval: f64 = 0.0;
    for band_id in BandId::ALL {
        let band = BandConfig::new(band_id);
        let dims = Dims::new(band.n_tones, 3, 2);
        let ctf = CtfTensor::new(band_id, LinkId::TX2RX1, dims, random_values(&mut rng, dims.len()))
            .map_err(|e| e.to_string())?;
        let cir = ctf_to_cir(&ctf, &band, WindowKind::Rectangular).map_err(|e| e.to_string())?;
        let back = cir_to_ctf(&cir).map_err(|e| e.to_string())?;
        let norm = ctf.values().iter().map(|v| v.norm()).fold(0.0, f64::max);
        let err = ctf.values().iter().zip(back.values()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        worst_rt = worst_rt.max(err / norm);
        // sum |H|^2 = N sum |h|^2 under the 1/N inverse
        let lhs = ctf.total_power();
        let rhs = band.n_tones as f64 * cir.total_power();
        worst_parseval = worst_parseval.max((lhs - rhs).abs() / lhs);

        let dt = band.delay_bin_width();
        let expected_dt = match band_id {
            BandId::Band24 => 5e-9,
            BandId::Band60 => 2.5e-9,
        };
        check(rel_close(dt, expected_dt, 1e-12), format!("{band_id} bin width {dt}"))?;
        check(rel_close(band.max_delay(), 2.56e-6, 1e-12), format!("{band_id} max delay {}", band.max_delay()))?;
        check(rel_close(cir.delay_bin_width(), dt, 1e-12), "CIR bin width differs from the band's")?;

        let grids = BeamGrids::for_band(&band);
        for tau in [0.0, 17.6e-9, 123.4e-9, 1.0037e-6, 2.4e-6] {
            let ctf = render_ctf(&[single_path(tau)], LinkId::TX1RX2, &band, &grids, 0.0, PI, None)
                .map_err(|e| e.to_string())?;
            let pdp = compute_pdp(&ctf_to_cir(&ctf, &band, WindowKind::Rectangular).map_err(|e| e.to_string())?);
            let peak = (0..pdp.len()).max_by(|&a, &b| pdp[a].total_cmp(&pdp[b])).unwrap();
            let want = (tau / dt).round() as usize % pdp.len();
            check(peak == want, format!("{band_id} delay {tau}: bin {peak}, expected {want}"))?;
        }
    }
    check(worst_rt <= 1e-10, format!("round trip error {worst_rt:e}"))?;
    check(worst_parseval <= 1e-10, format!("Parseval error {worst_parseval:e}"))?;
    Ok(format!(
        "round trip {worst_rt:.1e}, Parseval {worst_parseval:.1e}; bins 5 / 2.5 ns, max delay 2.56 us; single paths land in round(tau/dt)"
    ))
}

// ---------------------------------------------------------------- criterion 3

fn criterion_3() -> Outcome {
    let angles: Vec<f64> = (0..11).map(|i| (-45.0 + 9.0 * i as f64).to_radians()).collect();
    for k in 0..angles.len() {
        let mut pap = vec![0.0; angles.len()];
        pap[k] = 3.7;
        let s = compute_angular_spread(&pap, &angles).map_err(|e| e.to_string())?;
        check(s == 0.0, format!("one-hot beam {k} gives {s:e}"))?;
    }
    let two = compute_angular_spread(&[1.0, 1.0], &[0.3, 0.3 + PI / 2.0]).map_err(|e| e.to_string())?;
    let want = 2f64.ln().sqrt();
    check((two - want).abs() <= 1e-9, format!("two beams 90 deg apart: {two} vs {want}"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let pap: Vec<f64> = (0..angles.len()).map(|_| rng.random_range(0.0..1.0)).collect();
        let offset = rng.random_range(-PI..PI);
        let shifted: Vec<f64> = angles.iter().map(|a| a + offset).collect();
        let a = compute_angular_spread(&pap, &angles).map_err(|e| e.to_string())?;
        let b = compute_angular_spread(&pap, &shifted).map_err(|e| e.to_string())?;
        worst = worst.max((a - b).abs() / a);
    }
    check(worst <= 1e-12, format!("offset invariance error {worst:e}"))?;
    Ok(format!("one-hot 0 exactly, two beams {two:.12} rad, offset invariance {worst:.1e}"))
}

// ---------------------------------------------------------------- criterion 4

fn criterion_4() -> Outcome {
    let dt = 5e-9;
    let ds = compute_rms_ds(&[1.0, 0.0, 1.0], dt, 30.0).map_err(|e| e.to_string())?;
    check((ds - 5e-9).abs() <= 1e-12 * 5e-9 + 1e-24, format!("two taps 10 ns apart: {ds:e}"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let pdp: Vec<f64> = (0..40).map(|_| rng.random_range(0.01..1.0)).collect();
        let base = compute_rms_ds(&pdp, dt, 30.0).map_err(|e| e.to_string())?;
        let shift = rng.random_range(1..50);
        let mut shifted = vec![0.0; shift];
        shifted.extend(&pdp);
        let scale = rng.random_range(1e-6..1e6);
        let scaled: Vec<f64> = pdp.iter().map(|p| p * scale).collect();
        for other in [
            compute_rms_ds(&shifted, dt, 30.0).map_err(|e| e.to_string())?,
            compute_rms_ds(&scaled, dt, 30.0).map_err(|e| e.to_string())?,
        ] {
            worst = worst.max((other - base).abs() / base);
        }
    }
    check(worst <= 1e-12, format!("shift/scale invariance error {worst:e}"))?;
    Ok(format!("two taps give {:.12} ns; shift/scale invariance {worst:.1e}", ds * 1e9))
}

// ---------------------------------------------------------------- criterion 5

fn los_amplitude(paths: &[PropagationPath]) -> Option<f64> {
    paths.iter().find(|p| p.kind == PathKind::Los).map(|p| p.amplitude.norm())
}

fn criterion_5() -> Outcome {
    let setup = default_setup();
    let empty = setup.bind(&ScenarioCode::empty()).map_err(|e| e.to_string())?;
    let a11 = setup.bind(&"A11".parse().unwrap()).map_err(|e| e.to_string())?;

    let start = Instant::now();
    let with = synthesize_all(&a11).map_err(|e| e.to_string())?;
    let t_synth = start.elapsed();
    check(t_synth < Duration::from_secs(60), format!("8-tensor synthesis took {t_synth:?}"))?;
    let without = synthesize_all(&empty).map_err(|e| e.to_string())?;

    let mut report = Vec::new();
    for band_id in BandId::ALL {
        let band = BandConfig::new(band_id);
        let link = LinkId::TX1RX2;
        let before = los_amplitude(&enumerate_paths(&empty, link, &band).map_err(|e| e.to_string())?)
            .ok_or("person-free scene has no LOS ray")?;
        let after = los_amplitude(&enumerate_paths(&a11, link, &band).map_err(|e| e.to_string())?)
            .ok_or("A11 scene has no LOS ray")?;
        let drop_db = 20.0 * (before / after).log10();
        check(drop_db >= 10.0, format!("{band_id} LOS drop only {drop_db:.1} dB"))?;

        let idx = pipeline::link_bands().iter().position(|&lb| lb == (link, band_id)).unwrap();
        let m_with = metrics_of(&with[idx], 30.0).map_err(|e| e.to_string())?;
        let m_without = metrics_of(&without[idx], 30.0).map_err(|e| e.to_string())?;
        let d_ds = m_with.rms_ds - m_without.rms_ds;
        check(d_ds > 0.0, format!("{band_id} d_rms_ds = {d_ds:e}"))?;
        report.push(format!("{band_id}: LOS -{drop_db:.1} dB, d_rms_ds {:+.2} ns", d_ds * 1e9));

        // reflection-sensing link: the person's echo is a separate ray
        let link = LinkId::TX1RX1;
        let paths = enumerate_paths(&a11, link, &band).map_err(|e| e.to_string())?;
        let n_scatter = paths.iter().filter(|p| matches!(p.kind, PathKind::HumanScatter(_))).count();
        check(n_scatter > 0, format!("{band_id} Tx1Rx1 has no human scatter ray"))?;
        let rest: Vec<PropagationPath> =
            paths.iter().filter(|p| !matches!(p.kind, PathKind::HumanScatter(_))).cloned().collect();
        let (tx, rx) = a11.link_sites(link);
        let grids = a11.beam_grids(&band);
        let noise = noise_spec(&a11, link, &band).map_err(|e| e.to_string())?;
        let pdp_of = |p: &[PropagationPath]| -> Result<Vec<f64>, String> {
            let ctf = render_ctf(p, link, &band, &grids, tx.boresight, rx.boresight, noise).map_err(|e| e.to_string())?;
            Ok(compute_pdp(&ctf_to_cir(&ctf, &band, pipeline::ANALYSIS_WINDOW).map_err(|e| e.to_string())?))
        };
        let full = pdp_of(&paths)?;
        let removed = pdp_of(&rest)?;
        let change = full.iter().zip(&removed).map(|(a, b)| (a - b).abs()).sum::<f64>() / full.iter().sum::<f64>();
        check(change > 0.0, format!("{band_id} Tx1Rx1 PDP unchanged without the scatter ray"))?;
        report.push(format!("{band_id} Tx1Rx1 PDP change {:.2e}", change));
    }
    Ok(format!("{}; synthesis {:.2} s", report.join(", "), t_synth.as_secs_f64()))
}

// ---------------------------------------------------------------- criterion 6

fn criterion_6() -> Outcome {
    let setup = default_setup();
    let run = |o: u8| -> Result<Vec<(f64, f64)>, String> {
        let scene = setup.bind(&ScenarioCode::single('A', 5, o)).map_err(|e| e.to_string())?;
        synthesize_all(&scene)
            .map_err(|e| e.to_string())?
            .iter()
            .map(|c| metrics_of(c, 30.0).map(|m| (m.asd, m.asa)).map_err(|e| e.to_string()))
            .collect()
    };
    let per_orientation: Vec<Vec<(f64, f64)>> = (1..=8).map(run).collect::<Result<_, _>>()?;
    let again = run(3)?;
    check(
        again.iter().zip(&per_orientation[2]).all(|(a, b)| a.0.to_bits() == b.0.to_bits() && a.1.to_bits() == b.1.to_bits()),
        "rerun of A53 differs",
    )?;
    let mut varying = Vec::new();
    for (i, (link, band)) in pipeline::link_bands().into_iter().enumerate() {
        let range = |f: fn(&(f64, f64)) -> f64| {
            let v: Vec<f64> = per_orientation.iter().map(|m| f(&m[i])).collect();
            v.iter().copied().fold(f64::MIN, f64::max) - v.iter().copied().fold(f64::MAX, f64::min)
        };
        let (asd, asa) = (range(|m| m.0), range(|m| m.1));
        if asd > 0.0 || asa > 0.0 {
            varying.push(format!("{link} {band} ({:.2}/{:.2} deg)", asd.to_degrees(), asa.to_degrees()));
        }
    }
    check(!varying.is_empty(), "no link's asd/asa depends on orientation at Loc5")?;
    Ok(format!("asd/asa ranges over Orient1-8 at Loc5: {}; deterministic rerun", varying.join(", ")))
}

// ---------------------------------------------------------------- criterion 7

fn criterion_7() -> Outcome {
    let g24 = BeamGrids::for_band(&BandConfig::new(BandId::Band24));
    let g60 = BeamGrids::for_band(&BandConfig::new(BandId::Band60));
    let s = build_scan_schedule(&g24, &g60);
    check(s.n_blocks == 132, format!("{} blocks", s.n_blocks))?;
    let pairs = |band| -> (usize, BTreeSet<(usize, usize)>) {
        let v: Vec<(usize, usize)> = s.active(band).map(|e| (e.tx_beam.unwrap(), e.rx_beam.unwrap())).collect();
        (v.len(), v.into_iter().collect())
    };
    let full = |n_tx: usize, n_rx: usize| -> BTreeSet<(usize, usize)> {
        (0..n_tx).flat_map(|t| (0..n_rx).map(move |r| (t, r))).collect()
    };
    let (n60, set60) = pairs(BandId::Band60);
    check(n60 == 132 && set60 == full(11, 12), format!("60 GHz: {n60} active, {} distinct", set60.len()))?;
    let (n24, set24) = pairs(BandId::Band24);
    check(n24 == 25 && set24 == full(5, 5), format!("24 GHz: {n24} active, {} distinct", set24.len()))?;
    let blocks: BTreeSet<usize> = s.entries.iter().map(|e| e.block).collect();
    check(blocks.len() == 132 && s.entries.len() == 264, "blocks do not carry one slot per band")?;
    Ok("132 blocks; 11x12 and 5x5 bijections".into())
}

// ---------------------------------------------------------------- criterion 8

fn random_pose(rng: &mut ChaCha8Rng) -> RigidTransform {
    let axis = Unit::new_normalize(Vector3::new(
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
    ));
    let r: Matrix3<f64> = Rotation3::from_axis_angle(&axis, rng.random_range(-PI..PI)).into_inner();
    let t = Vector3::new(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
    RigidTransform::new(r, t)
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut worst_r, mut worst_t): (f64, f64) = (0.0, 0.0);
    for _ in 0..1000 {
        let truth = random_pose(&mut rng);
        let mut p = || Point3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let local = MarkerTriple::new(p(), p(), p());
        if local.area() < 1e-3 {
            continue;
        }
        let [a, b, c] = local.points().map(|q| truth.apply(&q));
        let fit = fit_rigid_transform(&local, &MarkerTriple::new(a, b, c)).map_err(|e| e.to_string())?;
        worst_r = worst_r.max((fit.transform.rotation - truth.rotation).norm());
        worst_t = worst_t.max((fit.transform.translation - truth.translation).norm());
    }
    check(worst_r < 1e-9 && worst_t < 1e-9, format!("exact recovery: rotation {worst_r:e}, translation {worst_t:e}"))?;

    let normal = Normal::new(0.0, 1e-3).unwrap();
    let global = MarkerTriple::calibration_square(0.5);
    let mut worst_res: f64 = 0.0;
    for _ in 0..1000 {
        let pose = random_pose(&mut rng);
        let inv = pose.inverse();
        let [a, b, c] = global
            .points()
            .map(|q| inv.apply(&q) + Vector3::from_fn(|_, _| normal.sample(&mut rng)));
        let fit = fit_rigid_transform(&MarkerTriple::new(a, b, c), &global).map_err(|e| e.to_string())?;
        worst_res = worst_res.max(fit.residual_rms);
    }
    check(worst_res <= 3e-3, format!("worst residual {:.3} mm", worst_res * 1e3))?;
    Ok(format!(
        "exact: rotation {worst_r:.1e}, translation {worst_t:.1e} m; 1 mm noise: worst residual {:.2} mm over 1000 trials",
        worst_res * 1e3
    ))
}

// ---------------------------------------------------------------- criterion 9

fn criterion_9() -> Outcome {
    let codes = catalog();
    check(codes.len() == 150, format!("catalog has {} codes", codes.len()))?;
    let counts = codes.iter().fold([0usize; 4], |mut acc, c| {
        acc[c.split('_').count()] += 1;
        acc
    });
    check(counts[1..] == [64, 56, 30], format!("group sizes {:?}", &counts[1..]))?;
    for c in &codes {
        let parsed = parse_scenario_code(c).map_err(|e| e.to_string())?;
        check(parsed.to_string() == *c, format!("{c} prints as {parsed}"))?;
    }
    let bad = [("A09", 1), ("A19", 2), ("A91", 1), ("a11", 0), ("A1", 2), ("A111", 3), ("A11_", 4), ("A11_A22", 4), ("A11__B22", 4), ("A11_B22_C33_D44", 12), ("A11_Bx2", 5)];
    for (code, offset) in bad {
        match parse_scenario_code(code) {
            Ok(_) => return Err(format!("{code:?} accepted")),
            Err(e) => check(e.offset == offset, format!("{code:?} rejected at {} ({}), expected {offset}", e.offset, e.kind))?,
        }
    }
    Ok(format!("150 codes round-trip; {} malformed codes rejected at the right byte", bad.len()))
}

// ---------------------------------------------------------------- criterion 10

fn criterion_10() -> Outcome {
    let setup = default_setup();
    let codes = enumerate_single_person_campaign();
    check(codes.len() == 64, format!("{} codes", codes.len()))?;
    let mut runs = Vec::new();
    let mut times = Vec::new();
    for _ in 0..2 {
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let start = Instant::now();
        let report = pipeline::campaign(&setup, &codes, 30.0, 0, dir.path()).map_err(|e| e.to_string())?;
        times.push(start.elapsed());
        check(report.failures.is_empty(), format!("{} scenarios failed", report.failures.len()))?;
        runs.push(std::fs::read(dir.path().join("aggregate.csv")).map_err(|e| e.to_string())?);
    }
    check(runs[0] == runs[1], "aggregate.csv differs between runs")?;
    let rows = String::from_utf8_lossy(&runs[0]).lines().count() - 1;
    check(rows == 8 * 4 * 2, format!("{rows} aggregate rows"))?;
    let slowest = times.iter().max().unwrap();
    check(*slowest < Duration::from_secs(600), format!("campaign took {slowest:?}"))?;
    Ok(format!(
        "two runs give byte-identical aggregate.csv ({} bytes, {rows} rows); slowest run {:.1} s",
        runs[0].len(),
        slowest.as_secs_f64()
    ))
}

#[test]
fn acceptance_criteria() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("power spectra match loop oracles", criterion_1),
        ("transform fidelity and delay grid", criterion_2),
        ("circular spread closed forms", criterion_3),
        ("delay spread closed forms", criterion_4),
        ("blockage and reflection-sensing trend", criterion_5),
        ("orientation sensitivity", criterion_6),
        ("scan schedule", criterion_7),
        ("rigid registration", criterion_8),
        ("scenario grammar", criterion_9),
        ("campaign determinism", criterion_10),
    ];
    let mut failed = Vec::new();
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out);
    for (i, (name, f)) in criteria.iter().enumerate() {
        let line = match f() {
            Ok(detail) => format!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed.push(i + 1);
                format!("criterion {:>2} FAIL  {name}: {why}", i + 1)
            }
        };
        let _ = writeln!(out, "{line}");
        let _ = out.flush();
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
