use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use isac_sounder::channel::{BandConfig, BandId};
use isac_sounder::characterization::DEFAULT_THRESHOLD_DB;
use isac_sounder::pipeline;
use isac_sounder::registration::{
    apply_transform, fit_rigid_transform, merge_clouds, read_xyz, write_xyz, MarkerTriple, RigidTransform,
};
use isac_sounder::scenario::{catalog, enumerate_single_person_campaign, parse_campaign, parse_scenario_code};
use isac_sounder::scene::{default_setup, SceneSetup};
use isac_sounder::sounder::build_scan_schedule;
use isac_sounder::{Error, Result};

/// Exit code when some campaign scenarios failed.
const EXIT_PARTIAL: u8 = 5;

#[derive(Parser)]
#[command(name = "isac", version, about = "Dual-band beam-scanning channel sounder emulator and ISAC analysis")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Scene configuration (scene/1 TOML); the built-in office scene if omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the scene's noise seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// PDP cut below the peak before the delay spread, dB.
    #[arg(long, global = true, default_value_t = DEFAULT_THRESHOLD_DB)]
    threshold_db: f64,
    /// Worker threads for campaigns (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize the eight CTF tensors of one scenario.
    Synth {
        /// Scenario code, e.g. A11 or A21_C68; empty for the person-free room.
        #[arg(long, default_value = "")]
        scenario: String,
    },
    /// Compute PDP, delay spread, ADPS, PAP and azimuth spreads of a synth directory.
    Analyze {
        #[arg(long)]
        input: PathBuf,
    },
    /// With-person minus without-person metric changes.
    Diff {
        #[arg(long = "with")]
        with_person: PathBuf,
        #[arg(long)]
        without: PathBuf,
    },
    /// Run a list of scenarios against a shared person-free baseline.
    Campaign {
        /// Newline-separated scenario codes, `#` comments allowed.
        #[arg(long, conflicts_with = "single_person")]
        campaign: Option<PathBuf>,
        /// Use the 64-scenario single-person campaign A11..A88.
        #[arg(long)]
        single_person: bool,
    },
    /// Write the dual-band TDM beam-scan schedule as CSV.
    Schedule,
    /// Rigid registration of camera point clouds.
    #[command(subcommand)]
    Register(RegisterCommand),
    /// Validate scenario codes and print them in canonical form.
    ParseScenarios {
        /// Campaign-style file; reads the built-in catalog with --catalog.
        file: Option<PathBuf>,
        #[arg(long)]
        catalog: bool,
    },
}

#[derive(Subcommand)]
enum RegisterCommand {
    /// Fit the camera-to-global transform from marker observations.
    Fit {
        /// XYZ file with the three marker centers in the camera frame.
        #[arg(long)]
        local: PathBuf,
        /// XYZ file with the three nominal global marker positions.
        #[arg(long, required_unless_present = "square")]
        global: Option<PathBuf>,
        /// Side length of the calibration square instead of --global.
        #[arg(long)]
        square: Option<f64>,
    },
    /// Map a point cloud into the global frame.
    Apply {
        #[arg(long)]
        transform: PathBuf,
        #[arg(long)]
        cloud: PathBuf,
    },
    /// Merge clouds given as TRANSFORM=CLOUD pairs.
    Merge {
        #[arg(long = "view", required = true)]
        views: Vec<String>,
    },
}

fn load_setup(g: &Global) -> Result<SceneSetup> {
    let mut setup = match &g.config {
        Some(path) => SceneSetup::load(path)?,
        None => default_setup(),
    };
    if let Some(seed) = g.seed {
        setup.scene.seed = seed;
    }
    Ok(setup)
}

fn read_markers(path: &Path) -> Result<MarkerTriple> {
    match read_xyz(path)?.as_slice() {
        [a, b, c] => Ok(MarkerTriple::new(*a, *b, *c)),
        other => Err(Error::format(path, format!("expected 3 marker centers, found {}", other.len()))),
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let g = &cli.global;
    match cli.command {
        Command::Synth { scenario } => {
            let code = parse_scenario_code(&scenario)?;
            let out = pipeline::synth(&load_setup(g)?, &code, &g.out)?;
            for a in &out.manifest.artifacts {
                println!("{}  {}", a.sha256, g.out.join(&a.path).display());
            }
        }
        Command::Analyze { input } => {
            let metrics = pipeline::analyze(&input, g.threshold_db, &g.out)?;
            for m in &metrics {
                println!(
                    "{} {}  rms_ds {:.3} ns  asd {:.3} deg  asa {:.3} deg",
                    m.link_id,
                    m.band_id,
                    m.rms_ds * 1e9,
                    m.asd.to_degrees(),
                    m.asa.to_degrees()
                );
            }
        }
        Command::Diff { with_person, without } => {
            let deltas = pipeline::diff(&with_person, &without, g.threshold_db, &g.out)?;
            for d in &deltas {
                println!(
                    "{} {}  d_rms_ds {:+.3} ns  d_asd {:+.3} deg  d_asa {:+.3} deg",
                    d.link_id,
                    d.band_id,
                    d.d_rms_ds * 1e9,
                    d.d_asd.to_degrees(),
                    d.d_asa.to_degrees()
                );
            }
        }
        Command::Campaign { campaign, single_person } => {
            let codes = match campaign {
                Some(path) => {
                    let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
                    parse_campaign(&text)?
                }
                None if single_person => enumerate_single_person_campaign(),
                None => return Err(Error::Config("give --campaign FILE or --single-person".into())),
            };
            let report = pipeline::campaign(&load_setup(g)?, &codes, g.threshold_db, g.jobs, &g.out)?;
            println!(
                "{} scenarios ok, {} failed; aggregate in {}",
                report.results.len(),
                report.failures.len(),
                g.out.join("aggregate.csv").display()
            );
            if !report.failures.is_empty() {
                for (code, e) in &report.failures {
                    eprintln!("{code}: {e}");
                }
                return Ok(ExitCode::from(EXIT_PARTIAL));
            }
        }
        Command::Schedule => {
            let setup = load_setup(g)?;
            let grids = |b| setup.scene.beam_grids(&BandConfig::new(b));
            let schedule = build_scan_schedule(&grids(BandId::Band24), &grids(BandId::Band60));
            let path = pipeline::output_file(&g.out, "schedule.csv")?;
            std::fs::write(&path, schedule.to_csv()).map_err(|e| Error::io(&path, e))?;
            println!("{} blocks -> {}", schedule.n_blocks, path.display());
        }
        Command::Register(cmd) => register(cmd, &g.out)?,
        Command::ParseScenarios { file, catalog: use_catalog } => {
            let text = match (&file, use_catalog) {
                (Some(path), _) => std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?,
                (None, true) => catalog().join("\n"),
                (None, false) => return Err(Error::Config("give a campaign file or --catalog".into())),
            };
            for code in parse_campaign(&text)? {
                println!("{code}");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn register(cmd: RegisterCommand, out: &Path) -> Result<()> {
    match cmd {
        RegisterCommand::Fit { local, global, square } => {
            let local = read_markers(&local)?;
            let global = match (global, square) {
                (Some(path), _) => read_markers(&path)?,
                (None, Some(side)) => MarkerTriple::calibration_square(side),
                (None, None) => unreachable!("clap requires one of --global/--square"),
            };
            let fit = fit_rigid_transform(&local, &global)?;
            let path = pipeline::output_file(out, "transform.txt")?;
            fit.transform.write(&path)?;
            println!("residual rms {:.6} m -> {}", fit.residual_rms, path.display());
        }
        RegisterCommand::Apply { transform, cloud } => {
            let t = RigidTransform::read(&transform)?;
            let points = apply_transform(&t, &read_xyz(&cloud)?);
            let stem = cloud.file_stem().and_then(|s| s.to_str()).unwrap_or("cloud");
            let path = pipeline::output_file(out, &format!("{stem}_global.xyz"))?;
            write_xyz(&path, &points)?;
            println!("{} points -> {}", points.len(), path.display());
        }
        RegisterCommand::Merge { views } => {
            let mut clouds = Vec::new();
            for v in &views {
                let (t, c) = v
                    .split_once('=')
                    .ok_or_else(|| Error::Config(format!("view {v:?} is not TRANSFORM=CLOUD")))?;
                clouds.push((RigidTransform::read(Path::new(t))?, read_xyz(Path::new(c))?));
            }
            let merged = merge_clouds(&clouds);
            let path = pipeline::output_file(out, "merged.xyz")?;
            write_xyz(&path, &merged)?;
            println!("{} points -> {}", merged.len(), path.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
