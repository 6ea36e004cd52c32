//! Command-line front end: `rackray simulate` sweeps one coverage
//! scenario and writes CSV / PPM maps; `rackray list-scenarios` prints
//! the named presets.
//!
//! Exit codes: 0 success, 2 configuration error, 1 I/O error.

use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rackray::antenna::Polarization;
use rackray::field::{LinkBudget, Waveform};
use rackray::geom::Vec3;
use rackray::runner::{
    default_scene, run_scenario, scenario_preset, scenario_presets, write_grid_csv,
    write_heatmap, Cell, Scenario,
};
use rackray::scene::{scene_from_json, Scene};
use rackray::tracer::TraceBudget;

#[derive(Parser)]
#[command(name = "rackray", version, about = "Ray-traced UWB coverage maps for rack warehouses")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
#[allow(clippy::large_enum_variant)]
enum Command {
    /// Run one coverage sweep and write the grid as CSV and/or PPM.
    Simulate(SimulateArgs),
    /// Print the named scenario presets.
    ListScenarios,
}

#[derive(Args)]
struct SimulateArgs {
    /// Scene config: a JSON file path or "preset:paper-default".
    #[arg(long, default_value = "preset:paper-default")]
    scene: String,
    /// Scenario preset name (fig4 .. fig13) or "custom".
    #[arg(long, default_value = "custom")]
    scenario: String,
    /// Transmitter position "x,y,z" in meters.
    #[arg(long, allow_hyphen_values = true)]
    tx: Option<String>,
    /// vertical | horizontal-x | horizontal-y
    #[arg(long)]
    tx_pol: Option<String>,
    /// vertical | horizontal-x | horizontal-y
    #[arg(long)]
    rx_pol: Option<String>,
    /// Receiver grid height in meters.
    #[arg(long)]
    grid_height: Option<f64>,
    /// Receiver grid spacing in meters.
    #[arg(long)]
    grid_spacing: Option<f64>,
    /// Maximum specular reflections per path.
    #[arg(long)]
    max_reflections: Option<u32>,
    /// on | off
    #[arg(long)]
    diffraction: Option<String>,
    /// Rack-wall roughness standard deviation in meters.
    #[arg(long)]
    roughness_dh: Option<f64>,
    /// Frequency samples across the UWB band (1 = narrowband).
    #[arg(long)]
    band_samples: Option<u32>,
    /// Launch-lattice size for the ray sweep.
    #[arg(long)]
    launch_rays: Option<u32>,
    #[arg(long)]
    out_csv: Option<PathBuf>,
    #[arg(long)]
    out_ppm: Option<PathBuf>,
    /// Heatmap color scale "min:max" in dBm.
    #[arg(long, default_value = "-110:-40", allow_hyphen_values = true)]
    scale: String,
    /// Worker threads (default: all cores).
    #[arg(long)]
    workers: Option<usize>,
}

enum AppError {
    Config(String),
    Io(io::Error),
}

impl fmt::Display for AppError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AppError::Config(msg) => write!(f, "configuration error: {msg}"),
            AppError::Io(err) => write!(f, "i/o error: {err}"),
        }
    }
}

impl From<io::Error> for AppError {
    fn from(err: io::Error) -> Self {
        AppError::Io(err)
    }
}

fn config<T: fmt::Display>(msg: T) -> AppError {
    AppError::Config(msg.to_string())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                AppError::Config(_) => ExitCode::from(2),
                AppError::Io(_) => ExitCode::from(1),
            }
        }
    }
}

fn run(cli: Cli) -> Result<(), AppError> {
    match cli.command {
        Command::ListScenarios => {
            println!(
                "{:<6} {:>6} {:>6} {:>4}  {:<13} {:<13} {:>6}",
                "name", "tx_x", "tx_y", "tx_z", "tx_pol", "rx_pol", "dh_m"
            );
            for s in scenario_presets() {
                println!(
                    "{:<6} {:>6.2} {:>6.2} {:>4.1}  {:<13} {:<13} {:>6.2}",
                    s.name,
                    s.tx_position.x,
                    s.tx_position.y,
                    s.tx_position.z,
                    s.tx_polarization.to_string(),
                    s.rx_polarization.to_string(),
                    s.roughness_dh
                );
            }
            Ok(())
        }
        Command::Simulate(args) => simulate(args),
    }
}

fn load_scene(source: &str) -> Result<Scene, AppError> {
    if let Some(preset) = source.strip_prefix("preset:") {
        if preset == "paper-default" {
            return Ok(default_scene());
        }
        return Err(config(format!("unknown scene preset {preset:?}")));
    }
    let text = std::fs::read_to_string(source)?;
    scene_from_json(&text).map_err(config)
}

fn parse_vec3(text: &str) -> Result<Vec3, AppError> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err(config(format!("expected \"x,y,z\", got {text:?}")));
    }
    let coord = |s: &str| s.trim().parse::<f64>().map_err(|e| config(format!("{e} in {text:?}")));
    Ok(Vec3::new(coord(parts[0])?, coord(parts[1])?, coord(parts[2])?))
}

fn parse_pol(text: &str) -> Result<Polarization, AppError> {
    text.parse::<Polarization>().map_err(config)
}

fn parse_scale(text: &str) -> Result<(f64, f64), AppError> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 2 {
        return Err(config(format!("expected \"min:max\", got {text:?}")));
    }
    let min: f64 = parts[0].trim().parse().map_err(|e| config(format!("scale: {e}")))?;
    let max: f64 = parts[1].trim().parse().map_err(|e| config(format!("scale: {e}")))?;
    if min >= max {
        return Err(config("scale min must be below max"));
    }
    Ok((min, max))
}

fn simulate(args: SimulateArgs) -> Result<(), AppError> {
    let scene = load_scene(&args.scene)?;

    let mut scenario: Scenario = if args.scenario == "custom" {
        let tx = args
            .tx
            .as_deref()
            .ok_or_else(|| config("custom scenario requires --tx x,y,z"))?;
        Scenario::custom(parse_vec3(tx)?, Polarization::Vertical, Polarization::Vertical)
    } else {
        scenario_preset(&args.scenario)
            .ok_or_else(|| config(format!("unknown scenario {:?}", args.scenario)))?
    };

    if let Some(tx) = args.tx.as_deref() {
        scenario.tx_position = parse_vec3(tx)?;
    }
    if let Some(p) = args.tx_pol.as_deref() {
        scenario.tx_polarization = parse_pol(p)?;
    }
    if let Some(p) = args.rx_pol.as_deref() {
        scenario.rx_polarization = parse_pol(p)?;
    }
    if let Some(h) = args.grid_height {
        scenario.grid_height = h;
    }
    if let Some(s) = args.grid_spacing {
        if s <= 0.0 {
            return Err(config("grid spacing must be positive"));
        }
        scenario.grid_spacing = s;
    }
    if let Some(dh) = args.roughness_dh {
        if dh < 0.0 {
            return Err(config("roughness must be non-negative"));
        }
        scenario.roughness_dh = dh;
    }

    let mut budget = TraceBudget::default();
    if let Some(n) = args.max_reflections {
        budget.max_reflections = n;
    }
    if let Some(d) = args.diffraction.as_deref() {
        budget.enable_diffraction = match d {
            "on" => true,
            "off" => false,
            other => return Err(config(format!("--diffraction expects on|off, got {other:?}"))),
        };
    }
    if let Some(n) = args.launch_rays {
        budget.launch_rays = n;
    }

    let mut waveform = Waveform::default();
    if let Some(k) = args.band_samples {
        if k == 0 {
            return Err(config("band samples must be at least 1"));
        }
        waveform.band_samples = k;
    }
    let link = LinkBudget::default();
    let scale = parse_scale(&args.scale)?;

    let run_it = || run_scenario(&scene, &scenario, &budget, &waveform, &link).map_err(config);
    let grid = match args.workers {
        Some(n) if n > 0 => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| config(format!("worker pool: {e}")))?
            .install(run_it),
        _ => run_it(),
    }?;

    if let Some(path) = &args.out_csv {
        let mut out = BufWriter::new(File::create(path)?);
        write_grid_csv(&grid, &mut out)?;
        out.flush()?;
    }
    if let Some(path) = &args.out_ppm {
        let mut out = BufWriter::new(File::create(path)?);
        write_heatmap(&grid, &mut out, scale)?;
        out.flush()?;
    }

    let mut computed = 0usize;
    let mut safe = 0usize;
    let mut best = f64::NEG_INFINITY;
    for (_, _, cell) in grid.indexed_cells() {
        if let Cell::Value { power_dbm, safe: s, .. } = cell {
            computed += 1;
            safe += s as usize;
            best = best.max(power_dbm);
        }
    }
    println!(
        "scenario {} on {}x{} grid: {} cells computed, {} safe, peak {:.2} dBm",
        scenario.name, grid.nx, grid.ny, computed, safe, best
    );
    Ok(())
}
