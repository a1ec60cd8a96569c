//! Command-line front end.
//!
//! Exit codes: 0 success, 1 configuration or usage error, 2 runtime error,
//! 3 load fixed point not converged while `--strict` is set.

pub mod config_file;
pub mod presets;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::antenna::pattern_csv;
use crate::engine::{aggregate_drops, run_drop_with, run_sweep, sir_map, DropOptions, ScenarioConfig, SweepResult};
use crate::error::{Result, SimError};
use crate::metrics::{
    events_csv, sir_percentile_svg, sirmap_csv, sweep_csv, sweep_metric_svg, trace_csv, trace_svg, MobilityMetrics,
    SWEEP_SVG_METRICS,
};

pub use config_file::{dump_config, load_config, parse_config};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_RUNTIME: i32 = 2;
pub const EXIT_NOT_CONVERGED: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Svg,
    Both,
}

impl Format {
    fn csv(self) -> bool {
        self != Format::Svg
    }

    fn svg(self) -> bool {
        self != Format::Csv
    }
}

#[derive(Debug, Parser)]
#[command(name = "uavsim", version, about = "Drop-based system-level simulator of UAV cellular mobility")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Base scenario: uma-fullbuffer, rma-ftp or rma-ftp-lowq.
    #[arg(long, global = true)]
    preset: Option<String>,
    /// Scenario file applied on top of the preset.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides sim.seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory, created when missing.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    #[arg(long, global = true, value_enum, default_value_t = Format::Both)]
    format: Format,
    /// Treat a non-converged load fixed point as an error.
    #[arg(long, global = true)]
    strict: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// One drop; writes events.csv and optionally a UE trace.
    Run {
        /// UE whose RSRP/SINR trace is exported.
        #[arg(long)]
        trace: Option<usize>,
    },
    /// Drops over a height × speed grid; writes sweep.csv and charts.
    Sweep {
        #[arg(long, value_delimiter = ',', default_value = "0,50,100,300")]
        heights: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "3,30,60,160")]
        speeds: Vec<f64>,
        #[arg(long, default_value_t = 5)]
        drops: usize,
    },
    /// Shadowing-free SIR over a grid covering the UE disc.
    Sirmap {
        /// One or more UE heights, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "100")]
        height: Vec<f64>,
        #[arg(long, default_value_t = 25.0)]
        resolution: f64,
    },
    /// Composite antenna gain over a zenith × azimuth grid.
    Pattern {
        #[arg(long, default_value_t = 1.0)]
        zenith_step: f64,
        #[arg(long, default_value_t = 1.0)]
        azimuth_step: f64,
    },
    /// Checks the effective configuration without simulating.
    Validate {
        /// Print the effective configuration as a scenario file.
        #[arg(long)]
        dump: bool,
    },
}

enum Failure {
    Sim(SimError),
    NotConverged(String),
}

impl From<SimError> for Failure {
    fn from(e: SimError) -> Self {
        Failure::Sim(e)
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code. Diagnostics go to stderr.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(()) => EXIT_OK,
        Err(Failure::NotConverged(msg)) => {
            eprintln!("error: {msg}");
            EXIT_NOT_CONVERGED
        }
        Err(Failure::Sim(e)) => {
            eprintln!("error: {e}");
            if e.is_config_error() {
                EXIT_CONFIG
            } else {
                EXIT_RUNTIME
            }
        }
    }
}

fn effective_config(g: &GlobalArgs) -> Result<ScenarioConfig> {
    let base = presets::preset(g.preset.as_deref().unwrap_or("uma-fullbuffer"))?;
    let mut cfg = match &g.config {
        Some(path) => {
            // An unreadable scenario file is a usage error, not a runtime failure.
            let text = fs::read_to_string(path)
                .map_err(|e| SimError::invalid("config", format!("cannot read {}: {e}", path.display())))?;
            let doc = config_file::parse_document(&text)?;
            if let (Some(flag), Some(file)) = (&g.preset, &doc.preset) {
                if flag != file {
                    return Err(SimError::invalid(
                        "preset",
                        format!("--preset {flag} conflicts with `preset = {file}` in {}", path.display()),
                    ));
                }
            }
            doc.apply(&base)?
        }
        None => base,
    };
    if let Some(seed) = g.seed {
        cfg.sim.seed = seed;
    }
    Ok(cfg)
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| SimError::io(dir, e))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| SimError::io(&path, e))
}

fn warn_or_fail(strict: bool, converged: bool, what: &str) -> std::result::Result<(), Failure> {
    if converged {
        return Ok(());
    }
    let msg = format!("load fixed point did not converge ({what})");
    if strict {
        return Err(Failure::NotConverged(msg));
    }
    eprintln!("warning: {msg}");
    Ok(())
}

fn print_metrics(m: &MobilityMetrics) {
    println!(
        "ho_rate={:.4}/min rlf_rate={:.4}/min hof_ratio={:.4} pp_ratio={:.4} sir_p10={:.2}dB sir_p50={:.2}dB \
         sir_p90={:.2}dB outage={:.4} utilization={:.4}",
        m.ho_rate,
        m.rlf_rate,
        m.hof_ratio,
        m.pp_ratio,
        m.sir_p10,
        m.sir_p50,
        m.sir_p90,
        m.outage_fraction,
        m.resource_utilization
    );
}

/// Height label used in file names: `100`, `12.5`.
fn height_label(h: f64) -> String {
    format!("{h}")
}

fn write_sweep(dir: &Path, format: Format, sweep: &SweepResult) -> Result<()> {
    if format.csv() {
        write_file(dir, "sweep.csv", &sweep_csv(sweep))?;
    }
    if format.svg() {
        for (name, label, metric) in SWEEP_SVG_METRICS {
            write_file(dir, &format!("sweep_{name}.svg"), &sweep_metric_svg(sweep, label, metric))?;
        }
        // Percentiles per height at the first listed speed.
        let first_speed = sweep.points[0].speed;
        let rows: Vec<_> = sweep
            .points
            .iter()
            .filter(|p| p.speed == first_speed)
            .map(|p| (p.height, p.metrics.sir_p10, p.metrics.sir_p50, p.metrics.sir_p90))
            .collect();
        write_file(dir, "sweep_sir_percentiles.svg", &sir_percentile_svg(&rows))?;
    }
    Ok(())
}

fn execute(cli: &Cli) -> std::result::Result<(), Failure> {
    let g = &cli.global;
    let cfg = effective_config(g)?;
    cfg.validate()?;
    match &cli.command {
        Command::Validate { dump } => {
            if *dump {
                print!("{}", dump_config(&cfg));
            } else {
                println!("configuration ok");
            }
        }
        Command::Run { trace } => {
            let result = run_drop_with(&cfg, &DropOptions { trace_ue: *trace })?;
            let metrics = aggregate_drops(std::slice::from_ref(&result))?;
            print_metrics(&metrics);
            if g.format.csv() {
                write_file(&g.out, "events.csv", &events_csv(&result.events))?;
            }
            if let Some(tr) = &result.trace {
                if g.format.csv() {
                    write_file(&g.out, &format!("trace_{}.csv", tr.ue_id), &trace_csv(tr))?;
                }
                if g.format.svg() {
                    write_file(&g.out, &format!("trace_{}.svg", tr.ue_id), &trace_svg(tr))?;
                }
            }
            warn_or_fail(g.strict, result.load_converged, &format!("seed {}", result.seed))?;
        }
        Command::Sweep { heights, speeds, drops } => {
            let sweep = run_sweep(&cfg, heights, speeds, *drops)?;
            for p in &sweep.points {
                print!("height={} speed={} ", p.height, p.speed);
                print_metrics(&p.metrics);
            }
            write_sweep(&g.out, g.format, &sweep)?;
            if g.format.csv() {
                let events: Vec<_> =
                    sweep.points.iter().flat_map(|p| p.drops.iter().flat_map(|d| d.events.iter().copied())).collect();
                write_file(&g.out, "events.csv", &events_csv(&events))?;
            }
            warn_or_fail(g.strict, sweep.load_converged(), "one or more sweep drops")?;
        }
        Command::Sirmap { height, resolution } => {
            let mut rows = Vec::new();
            for &h in height {
                let map = sir_map(&cfg, h, *resolution)?;
                let (p10, p50, p90) = (map.percentile(10.0), map.percentile(50.0), map.percentile(90.0));
                println!("height={h} points={} sir_p10={p10:.2}dB sir_p50={p50:.2}dB sir_p90={p90:.2}dB", map.points.len());
                if g.format.csv() {
                    write_file(&g.out, &format!("sirmap_{}.csv", height_label(h)), &sirmap_csv(&map))?;
                }
                rows.push((h, p10, p50, p90));
            }
            if g.format.svg() {
                write_file(&g.out, "sirmap_percentiles.svg", &sir_percentile_svg(&rows))?;
            }
        }
        Command::Pattern { zenith_step, azimuth_step } => {
            for (name, step) in [("zenith_step", *zenith_step), ("azimuth_step", *azimuth_step)] {
                if !(step > 0.0 && step <= 180.0) {
                    return Err(SimError::invalid(name, "must be in (0, 180]").into());
                }
            }
            write_file(&g.out, "pattern.csv", &pattern_csv(&cfg.antenna, *zenith_step, *azimuth_step))?;
        }
    }
    Ok(())
}
