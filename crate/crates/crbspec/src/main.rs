use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use crbspec::commands::{self, Command, TraceInput};
use crbspec::config::{parse_wnr_list, Overrides, RunConfig, Wnr};
use crbspec::CliError;

/// Cramér-Rao bounds and noise spectra for inverse source problems in
/// spherically isotropic noise.
#[derive(Parser)]
#[command(name = "crbspec", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Per-(tau, l) singular values and noise eigenvalues.
    Spectrum(Common),
    /// CRB(L) curves for isotropic noise and each WNR level.
    Crb(Common),
    /// Fisher trace and CRB partial sums with the regime verdict.
    Trace {
        #[command(flatten)]
        common: Common,
        /// Singular values as `index,tau,l,value,multiplicity`.
        #[arg(long, requires = "lambda_csv")]
        sigma_csv: Option<PathBuf>,
        /// Noise eigenvalues in the same format.
        #[arg(long, requires = "sigma_csv")]
        lambda_csv: Option<PathBuf>,
    },
    /// Monte Carlo noise covariance and estimator efficiency checks.
    Mc {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Plane-wave directions per noise realization.
        #[arg(long)]
        directions: Option<usize>,
        #[arg(long)]
        realizations: Option<usize>,
    },
    /// Mode sum against closed form of the isotropic covariance dyadic.
    GreenCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        pairs: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Points are drawn with k|r| up to this value.
        #[arg(long)]
        kr_max: Option<f64>,
    },
}

#[derive(Args)]
struct Common {
    /// JSON run configuration; defaults apply without one.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    lmax: Option<usize>,
    /// Comma-separated dB levels or `none`.
    #[arg(long, value_parser = wnr_list, allow_hyphen_values = true)]
    wnr_db: Option<WnrList>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone)]
struct WnrList(Vec<Wnr>);

fn wnr_list(s: &str) -> Result<WnrList, String> {
    parse_wnr_list(s).map(WnrList)
}

impl Common {
    fn overrides(&self) -> Overrides {
        Overrides {
            lmax: self.lmax,
            wnr_db: self.wnr_db.clone().map(|w| w.0),
            out: self.out.clone(),
            ..Default::default()
        }
    }
}

fn prepare(cli: Cli) -> Result<(Command, RunConfig), CliError> {
    let (command, ov, common) = match cli.command {
        Cmd::Spectrum(c) => (Command::Spectrum, c.overrides(), c),
        Cmd::Crb(c) => (Command::Crb, c.overrides(), c),
        Cmd::Trace {
            common,
            sigma_csv,
            lambda_csv,
        } => {
            let input = match (sigma_csv, lambda_csv) {
                (Some(sigma), Some(lambda)) => TraceInput::Files { sigma, lambda },
                _ => TraceInput::Config,
            };
            (Command::Trace(input), common.overrides(), common)
        }
        Cmd::Mc {
            common,
            trials,
            seed,
            directions,
            realizations,
        } => {
            let ov = Overrides {
                trials,
                seed,
                n_directions: directions,
                realizations,
                ..common.overrides()
            };
            (Command::Mc, ov, common)
        }
        Cmd::GreenCheck {
            common,
            pairs,
            seed,
            kr_max,
        } => {
            let ov = Overrides {
                n_pairs: pairs,
                seed,
                green_kr_max: kr_max,
                ..common.overrides()
            };
            (Command::GreenCheck, ov, common)
        }
    };
    let mut cfg = match &common.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    cfg.apply(&ov, command == Command::Crb)?;
    Ok((command, cfg))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = prepare(cli).and_then(|(cmd, cfg)| commands::run(&cmd, &cfg));
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("crbspec: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
