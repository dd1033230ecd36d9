use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dirac_barrier_cli::input::{resolve, ConfigFile, Input, Overrides};
use dirac_barrier_cli::output::Format;
use dirac_barrier_cli::{
    cmd_bands, cmd_resonances, cmd_scan, cmd_supercritical, cmd_sweep, make_grid, oracle_check, render_oracle_report,
    CliError, SweepRequest,
};

/// Dirac scattering off square barriers with vector and scalar coupling
/// (natural units, ħ = c = 1).
#[derive(Parser)]
#[command(name = "dirac-barrier", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Params {
    /// JSON config: {"V","S","a","m"} or {"segments":[{"x0","x1","V","S"}],"m"}
    #[arg(long)]
    config: Option<PathBuf>,
    /// Vector barrier height
    #[arg(long = "V", allow_negative_numbers = true)]
    v: Option<f64>,
    /// Scalar barrier height
    #[arg(long = "S", allow_negative_numbers = true)]
    s: Option<f64>,
    /// Barrier width
    #[arg(long)]
    a: Option<f64>,
    /// Rest mass [default: 1]
    #[arg(long)]
    m: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct GridArgs {
    /// Lower end of the half-open grid (emin, emax] [default: m]
    #[arg(long, allow_negative_numbers = true)]
    emin: Option<f64>,
    #[arg(long, default_value_t = 10.0)]
    emax: f64,
    #[arg(long, default_value_t = 4096)]
    points: usize,
}

#[derive(Subcommand)]
enum Command {
    /// |T|², |R|² and |μ|² on a uniform energy grid
    Scan {
        #[command(flatten)]
        params: Params,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Analytic resonance energies, each confirmed numerically
    Resonances {
        #[command(flatten)]
        params: Params,
        #[arg(long, default_value_t = 10.0)]
        emax: f64,
    },
    /// Scalar strengths giving full transmission at zero momentum
    Supercritical {
        #[arg(long = "V", allow_negative_numbers = true)]
        v: f64,
        #[arg(long)]
        a: f64,
        #[arg(long, default_value_t = 1.0)]
        m: f64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Contiguous energy ranges with |T|² above a threshold
    Bands {
        #[command(flatten)]
        params: Params,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value_t = 0.9)]
        threshold: f64,
    },
    /// One scan per scalar strength S; frames and index.csv go to --out
    Sweep {
        #[arg(long = "V", allow_negative_numbers = true)]
        v: f64,
        #[arg(long)]
        a: f64,
        #[arg(long, default_value_t = 1.0)]
        m: f64,
        #[arg(long, allow_negative_numbers = true)]
        s_from: f64,
        #[arg(long, allow_negative_numbers = true)]
        s_to: f64,
        #[arg(long, default_value_t = 101)]
        s_steps: usize,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Output directory
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare the closed form against the interface-matching solver
    OracleCheck {
        #[command(flatten)]
        params: Params,
        #[command(flatten)]
        grid: GridArgs,
    },
}

fn load(params: &Params) -> Result<Input, CliError> {
    let file = params.config.as_deref().map(ConfigFile::load).transpose()?;
    resolve(file, Overrides { v: params.v, s: params.s, a: params.a, m: params.m })
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Scan { params, grid } => {
            let input = load(&params)?;
            let grid = make_grid(input.mass(), grid.emin, grid.emax, grid.points)?;
            let (text, notes) = cmd_scan(&input, &grid, params.format)?;
            for note in notes {
                eprintln!("note: {note}");
            }
            emit(params.out.as_ref(), &text)
        }
        Command::Resonances { params, emax } => {
            let cfg = load(&params)?.barrier()?;
            if emax <= cfg.m {
                return Err(CliError::Usage(format!("--emax {emax} must exceed m = {}", cfg.m)));
            }
            emit(params.out.as_ref(), &cmd_resonances(&cfg, emax, params.format))
        }
        Command::Supercritical { v, a, m, format, out } => emit(out.as_ref(), &cmd_supercritical(v, a, m, format)?),
        Command::Bands { params, grid, threshold } => {
            let cfg = load(&params)?.barrier()?;
            let grid = make_grid(cfg.m, grid.emin, grid.emax, grid.points)?;
            emit(params.out.as_ref(), &cmd_bands(&cfg, &grid, threshold, params.format)?)
        }
        Command::Sweep { v, a, m, s_from, s_to, s_steps, grid, format, out } => {
            let req = SweepRequest { v, a, m, s_from, s_to, s_steps };
            let frames = cmd_sweep(&req, grid.emin, grid.emax, grid.points, format, &out)?;
            eprintln!("wrote {} frames and index.csv to {}", frames.len(), out.display());
            Ok(())
        }
        Command::OracleCheck { params, grid } => {
            let input = load(&params)?;
            let grid = make_grid(input.mass(), grid.emin, grid.emax, grid.points)?;
            let report = oracle_check(&input, &grid)?;
            emit(params.out.as_ref(), &render_oracle_report(&report, params.format))?;
            if report.passed {
                Ok(())
            } else {
                Err(CliError::OracleFailed(format!(
                    "deviation {:?} / unitarity error {:e} above tolerance",
                    report.max_delta_sum, report.max_unitarity_error
                )))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
