//! File-level workflows behind the CLI: synthesize, analyze, diff and
//! campaign runs with a deterministic artifact layout.
//!
//! ```text
//! synth/      Tx1Rx1_24GHz.ctf ... Tx2Rx2_60GHz.ctf, manifest.json
//! analyze/    {link}_{band}_profiles.csv, {link}_{band}_adps_{tx,rx}.csv, summary.json
//! diff/       delta_summary.csv, {link}_{band}_adps_delta_{tx,rx}.csv
//! campaign/   baseline/, scenarios/{code}/{ctf,analysis,diff}/, deltas.csv, aggregate.csv
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::channel::{
    ctf_to_cir, decode_ctf, encode_ctf, BandConfig, BandId, CtfTensor, LinkId, WindowKind, SPEED_OF_LIGHT,
};
use crate::characterization::{
    bins_within_distance, compute_metric_set, delta_metrics, DeltaMetrics, MetricSet, HEATMAP_MAX_DISTANCE_M,
};
use crate::error::{Error, Result};
use crate::scenario::ScenarioCode;
use crate::scene::{synthesize_all, Scene, SceneSetup};
use crate::sounder::BeamGrids;

pub const MANIFEST_FILE: &str = "manifest.json";
pub const MANIFEST_SCHEMA: &str = "manifest/1";

/// All (link, band) pairs in artifact order: link-major, 24 GHz first.
pub fn link_bands() -> Vec<(LinkId, BandId)> {
    LinkId::ALL
        .iter()
        .flat_map(|&l| BandId::ALL.iter().map(move |&b| (l, b)))
        .collect()
}

pub fn ctf_file_name(link: LinkId, band: BandId) -> String {
    format!("{link}_{band}.ctf")
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Digest of the person-free scene configuration.
pub fn scene_hash(scene: &Scene) -> String {
    let json = serde_json::to_vec(&scene.without_persons()).expect("scene serializes");
    sha256_hex(&json)
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn write_file(path: &Path, bytes: impl AsRef<[u8]>) -> Result<()> {
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Artifact {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub schema: String,
    pub tool_version: String,
    pub scene_hash: String,
    pub seed: u64,
    pub scenario: String,
    pub artifacts: Vec<Artifact>,
}

impl RunManifest {
    pub fn read(dir: &Path) -> Result<Self> {
        let path = dir.join(MANIFEST_FILE);
        let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::format(&path, e.to_string()))
    }

    /// Checks that every listed artifact exists in `dir` with the recorded digest.
    pub fn verify(&self, dir: &Path) -> Result<()> {
        for a in &self.artifacts {
            let path = dir.join(&a.path);
            let bytes = fs::read(&path).map_err(|e| Error::io(&path, e))?;
            if sha256_hex(&bytes) != a.sha256 {
                return Err(Error::format(&path, "content does not match the manifest digest"));
            }
        }
        Ok(())
    }
}

/// The eight CTFs as stored on disk (f32 samples), in [`link_bands`] order.
pub struct SynthOutput {
    pub manifest: RunManifest,
    pub tensors: Vec<CtfTensor>,
}

/// Binds `code` into the scene, synthesizes all links and bands and writes
/// them plus a manifest to `out_dir`.
pub fn synth(setup: &SceneSetup, code: &ScenarioCode, out_dir: &Path) -> Result<SynthOutput> {
    let scene = setup.bind(code)?;
    let tensors = synthesize_all(&scene)?;
    create_dir(out_dir)?;
    let mut artifacts = Vec::new();
    let mut stored = Vec::new();
    for ctf in &tensors {
        let name = ctf_file_name(ctf.link_id(), ctf.band_id());
        let path = out_dir.join(&name);
        let bytes = encode_ctf(ctf);
        write_file(&path, &bytes)?;
        artifacts.push(Artifact {
            path: name,
            sha256: sha256_hex(&bytes),
        });
        stored.push(decode_ctf(&bytes, &path)?);
    }
    let manifest = RunManifest {
        schema: MANIFEST_SCHEMA.into(),
        tool_version: env!("CARGO_PKG_VERSION").into(),
        scene_hash: scene_hash(&scene),
        seed: scene.seed,
        scenario: code.to_string(),
        artifacts,
    };
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    write_file(&out_dir.join(MANIFEST_FILE), json + "\n")?;
    Ok(SynthOutput {
        manifest,
        tensors: stored,
    })
}

/// Reads the eight CTF files of a synth directory, checking their headers.
pub fn read_ctf_dir(dir: &Path) -> Result<Vec<CtfTensor>> {
    link_bands()
        .into_iter()
        .map(|(link, band)| {
            let path = dir.join(ctf_file_name(link, band));
            let bytes = fs::read(&path).map_err(|e| Error::io(&path, e))?;
            let ctf = decode_ctf(&bytes, &path)?;
            if ctf.link_id() != link || ctf.band_id() != band {
                return Err(Error::format(
                    &path,
                    format!("holds {} {}", ctf.link_id(), ctf.band_id()),
                ));
            }
            Ok(ctf)
        })
        .collect()
}

/// Window applied before the delay transform. Off-grid delays leak through
/// rectangular sinc sidelobes (-13 dB, wrapping circularly) far above a 30 dB
/// noise cut; Hann sidelobes start at -31 dB and decay quickly.
pub const ANALYSIS_WINDOW: WindowKind = WindowKind::Hann;

pub fn metrics_of(ctf: &CtfTensor, threshold_db: f64) -> Result<MetricSet> {
    let band = BandConfig::new(ctf.band_id());
    let cir = ctf_to_cir(ctf, &band, ANALYSIS_WINDOW)?;
    compute_metric_set(&cir, &BeamGrids::for_band(&band), threshold_db)
}

pub fn metrics_all(tensors: &[CtfTensor], threshold_db: f64) -> Result<Vec<MetricSet>> {
    tensors.par_iter().map(|c| metrics_of(c, threshold_db)).collect()
}

fn stem(link: LinkId, band: BandId) -> String {
    format!("{link}_{band}")
}

/// Long-format profiles: `series,index,axis,unit,value` for the PDP (axis =
/// delay) and both PAPs (axis = steering angle).
pub fn profiles_csv(m: &MetricSet) -> String {
    let mut s = String::from("series,index,axis,unit,value\n");
    for (i, p) in m.pdp.iter().enumerate() {
        let _ = writeln!(s, "pdp,{i},{:e},s,{p:e}", i as f64 * m.delay_bin_width);
    }
    for (name, pap, angles) in [("pap_tx", &m.pap_tx, &m.tx_angles), ("pap_rx", &m.pap_rx, &m.rx_angles)] {
        for (i, (p, a)) in pap.iter().zip(angles).enumerate() {
            let _ = writeln!(s, "{name},{i},{},deg,{p:e}", a.to_degrees());
        }
    }
    s
}

/// Dense heatmap: one row per delay bin up to [`HEATMAP_MAX_DISTANCE_M`],
/// first column the propagation distance, then one column per beam.
pub fn heatmap_csv(rows: &[Vec<f64>], angles: &[f64], delay_bin_width: f64) -> String {
    let mut s = String::from("distance_m");
    for a in angles {
        let _ = write!(s, ",{}", a.to_degrees());
    }
    s.push('\n');
    let n = bins_within_distance(delay_bin_width, rows.len(), HEATMAP_MAX_DISTANCE_M);
    for (i, row) in rows.iter().take(n).enumerate() {
        let _ = write!(s, "{}", SPEED_OF_LIGHT * i as f64 * delay_bin_width);
        for v in row {
            let _ = write!(s, ",{v:e}");
        }
        s.push('\n');
    }
    s
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkSummary {
    pub link: String,
    pub band: String,
    pub rms_ds_s: f64,
    pub asd_rad: f64,
    pub asa_rad: f64,
    /// Delay of the strongest PDP bin.
    pub peak_delay_s: f64,
    /// Earliest local PDP maximum within 10 dB of the strongest bin.
    pub first_peak_delay_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisSummary {
    pub threshold_db: f64,
    pub links: Vec<LinkSummary>,
}

pub fn summarize(metrics: &[MetricSet], threshold_db: f64) -> AnalysisSummary {
    let links = metrics
        .iter()
        .map(|m| {
            let peak = m.pdp.iter().copied().fold(0.0, f64::max);
            let argmax = m.pdp.iter().position(|&p| p == peak).unwrap_or(0);
            let n = m.pdp.len();
            let first = (0..n)
                .find(|&i| {
                    let p = m.pdp[i];
                    p >= peak * 0.1 && p >= m.pdp[(i + n - 1) % n] && p >= m.pdp[(i + 1) % n]
                })
                .unwrap_or(argmax);
            LinkSummary {
                link: m.link_id.to_string(),
                band: m.band_id.to_string(),
                rms_ds_s: m.rms_ds,
                asd_rad: m.asd,
                asa_rad: m.asa,
                peak_delay_s: argmax as f64 * m.delay_bin_width,
                first_peak_delay_s: first as f64 * m.delay_bin_width,
            }
        })
        .collect();
    AnalysisSummary { threshold_db, links }
}

pub fn write_analysis(metrics: &[MetricSet], threshold_db: f64, out_dir: &Path) -> Result<AnalysisSummary> {
    create_dir(out_dir)?;
    for m in metrics {
        let stem = stem(m.link_id, m.band_id);
        write_file(&out_dir.join(format!("{stem}_profiles.csv")), profiles_csv(m))?;
        write_file(
            &out_dir.join(format!("{stem}_adps_tx.csv")),
            heatmap_csv(&m.adps_tx, &m.tx_angles, m.delay_bin_width),
        )?;
        write_file(
            &out_dir.join(format!("{stem}_adps_rx.csv")),
            heatmap_csv(&m.adps_rx, &m.rx_angles, m.delay_bin_width),
        )?;
    }
    let summary = summarize(metrics, threshold_db);
    let json = serde_json::to_string_pretty(&summary).expect("summary serializes");
    write_file(&out_dir.join("summary.json"), json + "\n")?;
    Ok(summary)
}

/// Metrics of every tensor in `in_dir`, exported to `out_dir`.
pub fn analyze(in_dir: &Path, threshold_db: f64, out_dir: &Path) -> Result<Vec<MetricSet>> {
    let metrics = metrics_all(&read_ctf_dir(in_dir)?, threshold_db)?;
    write_analysis(&metrics, threshold_db, out_dir)?;
    Ok(metrics)
}

pub fn deltas_all(with: &[MetricSet], without: &[MetricSet]) -> Result<Vec<DeltaMetrics>> {
    if with.len() != without.len() {
        return Err(Error::ConfigMismatch(format!(
            "{} metric sets against {}",
            with.len(),
            without.len()
        )));
    }
    with.iter().zip(without).map(|(a, b)| delta_metrics(a, b)).collect()
}

pub fn delta_summary_csv(deltas: &[DeltaMetrics]) -> String {
    let mut s = String::from("link,band,d_rms_ds_s,d_asd_rad,d_asa_rad\n");
    for d in deltas {
        let _ = writeln!(s, "{},{},{:e},{:e},{:e}", d.link_id, d.band_id, d.d_rms_ds, d.d_asd, d.d_asa);
    }
    s
}

pub fn write_deltas(deltas: &[DeltaMetrics], with: &[MetricSet], out_dir: &Path) -> Result<()> {
    create_dir(out_dir)?;
    write_file(&out_dir.join("delta_summary.csv"), delta_summary_csv(deltas))?;
    for (d, m) in deltas.iter().zip(with) {
        let stem = stem(d.link_id, d.band_id);
        write_file(
            &out_dir.join(format!("{stem}_adps_delta_tx.csv")),
            heatmap_csv(&d.adps_delta_db_tx, &m.tx_angles, m.delay_bin_width),
        )?;
        write_file(
            &out_dir.join(format!("{stem}_adps_delta_rx.csv")),
            heatmap_csv(&d.adps_delta_db_rx, &m.rx_angles, m.delay_bin_width),
        )?;
    }
    Ok(())
}

/// With-person minus without-person deltas of two synth directories.
pub fn diff(dir_with: &Path, dir_without: &Path, threshold_db: f64, out_dir: &Path) -> Result<Vec<DeltaMetrics>> {
    let with = metrics_all(&read_ctf_dir(dir_with)?, threshold_db)?;
    let without = metrics_all(&read_ctf_dir(dir_without)?, threshold_db)?;
    let deltas = deltas_all(&with, &without)?;
    write_deltas(&deltas, &with, out_dir)?;
    Ok(deltas)
}

/// Median with the even-count convention of averaging the two middle values.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    Some(if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioResult {
    pub code: ScenarioCode,
    pub deltas: Vec<DeltaMetrics>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub location: u8,
    pub link: String,
    pub band: String,
    pub n: usize,
    pub median_d_rms_ds_s: f64,
    pub median_d_asd_rad: f64,
    pub median_d_asa_rad: f64,
}

#[derive(Debug)]
pub struct CampaignReport {
    pub results: Vec<ScenarioResult>,
    pub failures: Vec<(String, Error)>,
    pub aggregate: Vec<AggregateRow>,
}

/// Per-location medians over the single-person scenarios, ordered by location, link, band.
pub fn aggregate(results: &[ScenarioResult]) -> Vec<AggregateRow> {
    let mut groups: BTreeMap<(u8, u32, u32), Vec<&DeltaMetrics>> = BTreeMap::new();
    for r in results {
        let [entry] = r.code.entries() else { continue };
        for d in &r.deltas {
            groups
                .entry((entry.location, d.link_id.code(), d.band_id.code()))
                .or_default()
                .push(d);
        }
    }
    groups
        .into_iter()
        .map(|((location, link, band), ds)| {
            let pick = |f: fn(&DeltaMetrics) -> f64| median(&ds.iter().map(|d| f(d)).collect::<Vec<_>>()).unwrap_or(0.0);
            AggregateRow {
                location,
                link: LinkId::from_code(link).expect("valid code").to_string(),
                band: BandId::from_code(band).expect("valid code").to_string(),
                n: ds.len(),
                median_d_rms_ds_s: pick(|d| d.d_rms_ds),
                median_d_asd_rad: pick(|d| d.d_asd),
                median_d_asa_rad: pick(|d| d.d_asa),
            }
        })
        .collect()
}

pub fn aggregate_csv(rows: &[AggregateRow]) -> String {
    let mut s = String::from("location,link,band,n,median_d_rms_ds_s,median_d_asd_rad,median_d_asa_rad\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{:e},{:e},{:e}",
            r.location, r.link, r.band, r.n, r.median_d_rms_ds_s, r.median_d_asd_rad, r.median_d_asa_rad
        );
    }
    s
}

fn scenario_dir_name(code: &ScenarioCode) -> String {
    if code.is_empty() {
        "baseline".into()
    } else {
        code.to_string()
    }
}

fn run_scenario(
    setup: &SceneSetup,
    code: &ScenarioCode,
    baseline: &[MetricSet],
    threshold_db: f64,
    dir: &Path,
) -> Result<ScenarioResult> {
    let out = synth(setup, code, &dir.join("ctf"))?;
    let metrics = out
        .tensors
        .iter()
        .map(|c| metrics_of(c, threshold_db))
        .collect::<Result<Vec<_>>>()?;
    write_analysis(&metrics, threshold_db, &dir.join("analysis"))?;
    let deltas = deltas_all(&metrics, baseline)?;
    write_deltas(&deltas, &metrics, &dir.join("diff"))?;
    Ok(ScenarioResult {
        code: code.clone(),
        deltas,
    })
}

/// Runs every code against a shared person-free baseline on `jobs` worker
/// threads (0 = all cores). Failing scenarios are collected, not fatal.
pub fn campaign(
    setup: &SceneSetup,
    codes: &[ScenarioCode],
    threshold_db: f64,
    jobs: usize,
    out_dir: &Path,
) -> Result<CampaignReport> {
    create_dir(out_dir)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Config(format!("worker pool: {e}")))?;

    let (results, failures) = pool.install(|| -> Result<_> {
        let base_dir = out_dir.join("baseline");
        let base = synth(setup, &ScenarioCode::empty(), &base_dir)?;
        base.manifest.verify(&base_dir)?;
        let baseline = metrics_all(&base.tensors, threshold_db)?;
        write_analysis(&baseline, threshold_db, &base_dir.join("analysis"))?;

        let outcomes: Vec<Result<ScenarioResult>> = codes
            .par_iter()
            .map(|code| {
                let dir = out_dir.join("scenarios").join(scenario_dir_name(code));
                run_scenario(setup, code, &baseline, threshold_db, &dir)
            })
            .collect();
        let mut results = Vec::new();
        let mut failures = Vec::new();
        for (code, outcome) in codes.iter().zip(outcomes) {
            match outcome {
                Ok(r) => results.push(r),
                Err(e) => failures.push((code.to_string(), e)),
            }
        }
        Ok((results, failures))
    })?;

    let mut rows = String::from("scenario,link,band,d_rms_ds_s,d_asd_rad,d_asa_rad\n");
    for r in &results {
        for d in &r.deltas {
            let _ = writeln!(rows, "{},{},{},{:e},{:e},{:e}", r.code, d.link_id, d.band_id, d.d_rms_ds, d.d_asd, d.d_asa);
        }
    }
    write_file(&out_dir.join("deltas.csv"), rows)?;
    let aggregate = aggregate(&results);
    write_file(&out_dir.join("aggregate.csv"), aggregate_csv(&aggregate))?;
    let mut fail_text = String::new();
    for (code, e) in &failures {
        let _ = writeln!(fail_text, "{code}\t{e}");
    }
    write_file(&out_dir.join("failures.txt"), fail_text)?;
    Ok(CampaignReport {
        results,
        failures,
        aggregate,
    })
}

/// Output path helper for CLI subcommands that write a single file.
pub fn output_file(out_dir: &Path, name: &str) -> Result<PathBuf> {
    create_dir(out_dir)?;
    Ok(out_dir.join(name))
}
