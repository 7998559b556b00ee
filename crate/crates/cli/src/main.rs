use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cvtele_cli::analyze::{self, StateSpec};
use cvtele_cli::axis::Axis;
use cvtele_cli::columns::{parse_columns, Column};
use cvtele_cli::config::{Format, Settings, SweepConfig};
use cvtele_cli::figures::Preset;
use cvtele_cli::verify::{self, Density, Suite};
use cvtele_cli::{sweep, CliError, Result};

#[derive(Parser)]
#[command(name = "cvtele", version, about = "Teleportation fidelity and steering analysis for two-mode Gaussian resources")]
#[command(allow_negative_numbers = true)]
struct Cli {
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Output format (default: csv for sweeps, json for single reports).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Flat `key = value` file; keys mirror the long flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report witnesses, protocol fidelities and closed-form checks for one state.
    Analyze {
        /// Squeezing parameter of the source.
        #[arg(long, conflicts_with_all = ["n", "m", "c"])]
        r: Option<f64>,
        /// Alice's channel efficiency.
        #[arg(long, default_value_t = 1.0, conflicts_with_all = ["n", "m", "c"])]
        eta_a: f64,
        /// Bob's channel efficiency.
        #[arg(long, default_value_t = 1.0, conflicts_with_all = ["n", "m", "c"])]
        eta_b: f64,
        /// Alice's quadrature variance (raw state, needs --m and --c).
        #[arg(long, requires_all = ["m", "c"])]
        n: Option<f64>,
        #[arg(long, requires_all = ["n", "c"])]
        m: Option<f64>,
        #[arg(long, requires_all = ["n", "m"])]
        c: Option<f64>,
    },
    /// Evaluate columns over a (r, eta_A, eta_B[, gain]) grid.
    Sweep {
        /// Squeezing values: `a,b,c` or `start:stop:step`.
        #[arg(long)]
        r: Option<Axis>,
        #[arg(long)]
        eta_a: Option<Axis>,
        #[arg(long)]
        eta_b: Option<Axis>,
        /// Classical gain axis; needed by gain-dependent columns.
        #[arg(long)]
        gain: Option<Axis>,
        /// Comma-separated column names.
        #[arg(long)]
        columns: Option<String>,
        /// Print the column registry and exit.
        #[arg(long)]
        list_columns: bool,
    },
    /// Regenerate the data behind a plot.
    Figure {
        #[arg(value_enum)]
        preset: Preset,
    },
    /// Run the property suite; exits 1 if any property fails.
    Verify {
        #[arg(long, value_enum, default_value_t = Density::Medium)]
        grid_density: Density,
    },
}

fn open_output(path: Option<&PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| CliError::io(format!("creating {}", p.display()), e))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json(value: &impl serde::Serialize, out: &mut dyn Write) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    out.write_all(b"\n")
        .and_then(|_| out.flush())
        .map_err(|e| CliError::io("writing output", e))
}

fn run(cli: Cli) -> Result<u8> {
    let settings = match &cli.config {
        Some(p) => Settings::load(p)?,
        None => Settings::default(),
    };
    let format = cli.format.or(settings.format()?);
    let output = cli.output.clone().or_else(|| settings.output());

    match cli.command {
        Command::Analyze { r, eta_a, eta_b, n, m, c } => {
            let spec = match (n, m, c, r) {
                (Some(n), Some(m), Some(c), _) => StateSpec::Raw { n, m, c },
                (_, _, _, Some(r)) => StateSpec::Lossy { r, eta_a, eta_b },
                _ => return Err(CliError::usage("analyze needs --r [--eta-a --eta-b] or --n --m --c")),
            };
            let report = analyze::report(spec)?;
            let mut out = open_output(output.as_ref())?;
            match format.unwrap_or(Format::Json) {
                Format::Json => write_json(&report, &mut out)?,
                Format::Csv => sweep::write_csv(&analyze::row(spec)?, out)?,
            }
            Ok(0)
        }
        Command::Sweep { r, eta_a, eta_b, gain, columns, list_columns } => {
            if list_columns {
                let mut out = open_output(output.as_ref())?;
                for c in Column::ALL {
                    let gain = if c.needs_gain() { " (needs --gain)" } else { "" };
                    writeln!(out, "{:<12} {}{gain}", c.name(), c.description())
                        .map_err(|e| CliError::io("writing output", e))?;
                }
                out.flush().map_err(|e| CliError::io("writing output", e))?;
                return Ok(0);
            }
            let mut cfg = SweepConfig::default();
            cfg.apply(&settings)?;
            if let Some(v) = r {
                cfg.r = v;
            }
            if let Some(v) = eta_a {
                cfg.eta_a = v;
            }
            if let Some(v) = eta_b {
                cfg.eta_b = v;
            }
            if gain.is_some() {
                cfg.gain = gain;
            }
            if let Some(cols) = columns {
                cfg.columns = parse_columns(&cols)?;
            }
            let table = sweep::run(&cfg)?;
            sweep::write_table(&table, format.unwrap_or_default(), open_output(output.as_ref())?)?;
            Ok(0)
        }
        Command::Figure { preset } => {
            let table = sweep::run(&preset.config())?;
            sweep::write_table(&table, format.unwrap_or_default(), open_output(output.as_ref())?)?;
            Ok(0)
        }
        Command::Verify { grid_density } => {
            if format == Some(Format::Csv) {
                return Err(CliError::usage("verify reports JSON only"));
            }
            let report = verify::run(&Suite::new(grid_density));
            write_json(&report, &mut open_output(output.as_ref())?)?;
            if report.all_pass {
                return Ok(0);
            }
            for p in report.properties.iter().filter(|p| !p.pass) {
                eprintln!("FAILED {} ({} of {})", p.name, p.failures, p.checked);
                for [n, m, c] in &p.counterexamples {
                    eprintln!("  (n, m, c) = ({n}, {m}, {c})");
                }
            }
            Err(CliError::VerificationFailed)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            if !matches!(e, CliError::VerificationFailed) {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.exit_code())
        }
    }
}
