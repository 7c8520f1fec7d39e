use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use mps_cli::{parse_config, run_command, CliError, Command, Options};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cmd {
    Green,
    Amplitude,
    Smatrix,
    StrongTev,
    InteriorTev,
    ReportAll,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Green => Command::Green,
            Cmd::Amplitude => Command::Amplitude,
            Cmd::Smatrix => Command::Smatrix,
            Cmd::StrongTev => Command::StrongTev,
            Cmd::InteriorTev => Command::InteriorTev,
            Cmd::ReportAll => Command::ReportAll,
        }
    }
}

/// Multipoint point scatterers and transmission eigenfunctions.
///
/// Exit codes: 0 success, 1 invalid input, 2 numerical failure, 3 failed check.
#[derive(Debug, Parser)]
#[command(name = "mps", version, allow_negative_numbers = true)]
struct Args {
    command: Cmd,

    /// Scatterer configuration (JSON)
    #[arg(long, value_name = "PATH")]
    config: PathBuf,

    /// Real part of the energy; overrides the config
    #[arg(long)]
    energy_re: Option<f64>,

    /// Imaginary part of the energy; overrides the config
    #[arg(long)]
    energy_im: Option<f64>,

    /// Quadrature node count M
    #[arg(long)]
    nodes: Option<usize>,

    /// Plane-wave count N for the interior problem
    #[arg(long)]
    waves: Option<usize>,

    /// Relative rank tolerance
    #[arg(long)]
    tol: Option<f64>,

    #[arg(long)]
    seed: Option<u64>,

    /// Report path; stdout when absent
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Also write the check table next to the report as <out>.csv
    #[arg(long, requires = "out")]
    csv: bool,

    /// Include full matrices as [re, im] pairs
    #[arg(long)]
    emit_matrices: bool,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&args) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("mps: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(args: &Args) -> Result<u8, CliError> {
    let text = fs::read_to_string(&args.config)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", args.config.display())))?;
    let mut cfg = parse_config(&text)?;
    if let Some(re) = args.energy_re {
        cfg.energy.re = re;
    }
    if let Some(im) = args.energy_im {
        cfg.energy.im = im;
    }
    if !(cfg.energy.re.is_finite() && cfg.energy.im.is_finite()) {
        return Err(CliError::Input("energy must be finite".into()));
    }
    if let Some(n) = args.nodes {
        if n == 0 {
            return Err(CliError::Input("--nodes must be positive".into()));
        }
        cfg.nodes = n;
    }
    if let Some(n) = args.waves {
        if n == 0 {
            return Err(CliError::Input("--waves must be positive".into()));
        }
        cfg.waves = n;
    }
    if let Some(t) = args.tol {
        if !(t > 0.0 && t < 1.0) {
            return Err(CliError::Input("--tol must lie in (0, 1)".into()));
        }
        cfg.tol = t;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }

    let opts = Options {
        emit_matrices: args.emit_matrices,
    };
    let report = run_command(args.command.into(), &cfg, opts)?;
    let json = report.to_json();
    match &args.out {
        Some(path) => {
            fs::write(path, &json)
                .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
            if args.csv {
                let csv_path = path.with_extension("csv");
                fs::write(&csv_path, report.to_csv()).map_err(|e| {
                    CliError::Io(format!("cannot write {}: {e}", csv_path.display()))
                })?;
            }
        }
        None => print!("{json}"),
    }
    if let Some(f) = &report.error {
        eprintln!("mps: {}: {}", f.command, f.message);
    }
    Ok(report.exit_code() as u8)
}
