use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mustafin::cli::{dispatch, Command, Report, RunConfig, EXIT_INVALID};

#[derive(Parser)]
#[command(name = "mustafin", version, about = "Mustafin models of plane curves and syzygy bundle certificates")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct Common {
    /// Residue characteristic.
    #[arg(long)]
    prime: Option<u32>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Sampled matrix entries lie in 0..bound.
    #[arg(long)]
    bound: Option<u64>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Special fiber of a random Mustafin variety against the component catalog.
    MustafinFiber {
        /// Number of lattices.
        #[arg(long = "n", alias = "n-plus-1")]
        n_plus_1: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Curve model for one random configuration, with single projections and star-like check.
    CurveModel {
        #[arg(long)]
        curve: String,
        #[arg(long = "n", alias = "n-plus-1")]
        n_plus_1: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Star-like reduction over seeded random configurations.
    StarLike {
        #[arg(long)]
        curve: String,
        #[arg(long = "n", alias = "n-plus-1")]
        n_plus_1: Option<usize>,
        #[arg(long)]
        trials: Option<usize>,
        /// Success ratio needed for a passing verdict.
        #[arg(long)]
        min_ratio: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Triviality certificate for an example syzygy tuple.
    SyzygyCheck {
        #[arg(long)]
        rho: u32,
        /// Comma-separated degrees d_1,...,d_{n+1}.
        #[arg(long, value_delimiter = ',')]
        degrees: Vec<u32>,
        /// Forms h_i in t, x1, x2, x3 (repeat once per degree); sampled when omitted.
        #[arg(long = "form")]
        forms: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Degree-two covering of the Fermat curve, every stage per trial.
    Fermat {
        #[arg(long)]
        d: Option<u32>,
        #[arg(long)]
        trials: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Runs every JSON configuration in a directory.
    Corpus {
        path: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Runs a JSON configuration file.
    Run { config: PathBuf },
}

fn with_common(mut cfg: RunConfig, common: Common) -> RunConfig {
    cfg.prime = common.prime;
    cfg.seed = common.seed;
    cfg.bound = common.bound;
    cfg.output = common.output;
    cfg
}

fn build(cmd: Cmd) -> Result<RunConfig, String> {
    Ok(match cmd {
        Cmd::MustafinFiber { n_plus_1, common } => {
            let mut c = RunConfig::new(Command::MustafinFiber);
            c.n_plus_1 = n_plus_1;
            with_common(c, common)
        }
        Cmd::CurveModel { curve, n_plus_1, common } => {
            let mut c = RunConfig::new(Command::CurveModel);
            c.curve = Some(curve);
            c.n_plus_1 = n_plus_1;
            with_common(c, common)
        }
        Cmd::StarLike { curve, n_plus_1, trials, min_ratio, common } => {
            let mut c = RunConfig::new(Command::StarLike);
            c.curve = Some(curve);
            c.n_plus_1 = n_plus_1;
            c.trials = trials;
            c.min_ratio = min_ratio;
            with_common(c, common)
        }
        Cmd::SyzygyCheck { rho, degrees, forms, common } => {
            let mut c = RunConfig::new(Command::SyzygyCheck);
            c.rho = Some(rho);
            c.degrees = Some(degrees);
            c.forms = (!forms.is_empty()).then_some(forms);
            with_common(c, common)
        }
        Cmd::Fermat { d, trials, common } => {
            let mut c = RunConfig::new(Command::Fermat);
            c.d = d;
            c.trials = trials;
            with_common(c, common)
        }
        Cmd::Corpus { path, output } => {
            let mut c = RunConfig::new(Command::Corpus);
            c.path = Some(path);
            c.output = output;
            c
        }
        Cmd::Run { config } => {
            let text = std::fs::read_to_string(&config).map_err(|e| format!("{}: {e}", config.display()))?;
            RunConfig::from_json(&text).map_err(|e| e.to_string())?
        }
    })
}

fn emit(report: &Report) -> Result<(), String> {
    let text = report.to_json().map_err(|e| e.to_string())?;
    match &report.config.output {
        Some(path) => std::fs::write(path, text + "\n").map_err(|e| format!("{}: {e}", path.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = build(cli.command).and_then(|cfg| dispatch(&cfg).map_err(|e| e.to_string()));
    match report.and_then(|r| emit(&r).map(|_| r)) {
        Ok(r) => {
            if let Some(e) = &r.error {
                eprintln!("error: {e}");
            }
            ExitCode::from(r.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INVALID as u8)
        }
    }
}
