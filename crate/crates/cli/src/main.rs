use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use biphoton::experiment::{
    sweep, sweep_values, write_hom, write_phase, write_sweep, write_tilt, write_tsi, Experiment,
    ExperimentConfig, OutputFormat, PhaseReport, SweepParam, TiltReport,
};
use biphoton::state::{phase_from_tilt, unwrapped_phase};
use biphoton::units::parse_phase;
use biphoton::{Error, Result};
use clap::{Args, Parser, Subcommand};

/// Simulate a bidirectionally pumped type-II PPKTP biphoton source.
#[derive(Parser)]
#[command(name = "biphoton", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Experiment config (TOML); defaults are used when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or structured; overrides the config.
    #[arg(long)]
    format: Option<String>,
    /// Noise seed; overrides the config.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Two-photon spectral intensity.
    Tsi(Common),
    /// HOM coincidence trace and fringe summary.
    Hom(Common),
    /// Mode separation, beat period and visibility against one parameter.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// temperature (°C), phi (rad), or tilt (degrees).
        #[arg(long)]
        param: String,
        #[arg(long, allow_negative_numbers = true)]
        from: Option<String>,
        #[arg(long, allow_negative_numbers = true)]
        to: Option<String>,
        #[arg(long)]
        steps: Option<usize>,
        /// Comma-separated values instead of from/to/steps.
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
        values: Option<Vec<String>>,
    },
    /// Plate phase at the configured tilt, or the tilt for --target.
    Phase {
        #[command(flatten)]
        common: Common,
        /// Target phase, e.g. 1.1pi.
        #[arg(long, allow_hyphen_values = true)]
        target: Option<String>,
    },
}

fn load(common: &Common) -> Result<(Experiment, OutputFormat)> {
    let exp = match &common.config {
        Some(path) => Experiment::from_path(path)?,
        None => Experiment::resolve(&ExperimentConfig::default(), Path::new("."))?,
    };
    let format = match &common.format {
        Some(f) => f.parse()?,
        None => exp.config.output.format,
    };
    Ok((exp, format))
}

fn with_output(common: &Common, f: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match &common.out {
        Some(path) => {
            let file = File::create(path).map_err(|e| Error::Io {
                path: path.display().to_string(),
                source: e,
            })?;
            let mut w = BufWriter::new(file);
            f(&mut w)?;
            w.flush().map_err(|e| Error::Io {
                path: path.display().to_string(),
                source: e,
            })
        }
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            f(&mut w)?;
            w.flush().map_err(|e| Error::Io {
                path: "<stdout>".into(),
                source: e,
            })
        }
    }
}

fn number(param: SweepParam, text: &str) -> Result<f64> {
    match param {
        SweepParam::Phi => parse_phase(text),
        _ => text
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| Error::Config(format!("not a number: {text:?}"))),
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Tsi(common) => {
            let (exp, format) = load(&common)?;
            let sim = exp.simulate()?;
            with_output(&common, |w| write_tsi(w, &exp, &sim, format))
        }
        Command::Hom(common) => {
            let (exp, format) = load(&common)?;
            let (sim, trace, stats) = exp.measure(common.seed)?;
            with_output(&common, |w| {
                write_hom(w, &exp, &sim, &trace, &stats, format)
            })
        }
        Command::Sweep {
            common,
            param,
            from,
            to,
            steps,
            values,
        } => {
            let (exp, format) = load(&common)?;
            let param: SweepParam = param.parse()?;
            let values = match (values, from, to, steps) {
                (Some(list), None, None, None) => list
                    .iter()
                    .map(|v| number(param, v))
                    .collect::<Result<Vec<_>>>()?,
                (None, Some(from), Some(to), Some(steps)) => {
                    sweep_values(number(param, &from)?, number(param, &to)?, steps)?
                }
                _ => {
                    return Err(Error::Config(
                        "sweep needs either --values or all of --from, --to, --steps".into(),
                    ))
                }
            };
            let rows = sweep(&exp, param, &values, common.seed)?;
            with_output(&common, |w| write_sweep(w, &exp, param, &rows, format))
        }
        Command::Phase { common, target } => {
            let (exp, format) = load(&common)?;
            match target {
                None => {
                    let sp = exp.single_pass()?;
                    let wl = exp.mode_wavelengths(&sp);
                    let report = PhaseReport::new(
                        exp.plate.tilt.to_degrees(),
                        phase_from_tilt(&exp.plate, &wl)?,
                        unwrapped_phase(&exp.plate, &wl)?,
                        &wl,
                    );
                    with_output(&common, |w| write_phase(w, &exp, &report, format))
                }
                Some(t) => {
                    let target = parse_phase(&t)?;
                    let (tilt, wl) = exp.tilt_for(target)?;
                    let achieved = phase_from_tilt(&exp.plate.with_tilt(tilt), &wl)?;
                    let report = TiltReport::new(target, tilt.to_degrees(), achieved, &wl);
                    with_output(&common, |w| write_tilt(w, &exp, &report, format))
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("biphoton: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
