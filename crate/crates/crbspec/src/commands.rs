//! The five subcommands. Each one computes everything first and returns an
//! [`Outcome`]; [`run`] then performs all output at once.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use crbspec_core::emsource::{crb_l, mode_table, noise_spectrum, singular_values, WhiteNoise};
use crbspec_core::fisher::{regime_classify, Convergence, Label, ModalSpectrum, Regime};
use crbspec_core::mcsim::{em_estimation_setup, green_identity_check, random_point_pairs, RngSpec};
use crbspec_core::sum::KahanSum;
use crbspec_core::Complex64;

use crate::config::{RunConfig, Wnr};
use crate::csvio;
use crate::mc::{self, fraction};
use crate::CliError;

/// Band width, in standard errors, of the Monte Carlo checks.
pub const SE_BAND: f64 = 3.0;

/// Largest relative error accepted by `green-check`.
pub const GREEN_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub enum TraceInput {
    Config,
    Files { sigma: PathBuf, lambda: PathBuf },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Spectrum,
    Crb,
    Trace(TraceInput),
    Mc,
    GreenCheck,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Crb => "crb",
            Command::Trace(_) => "trace",
            Command::Mc => "mc",
            Command::GreenCheck => "green-check",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Outcome {
    /// CSV artifact, written to the configured path or standard output.
    pub csv: Option<String>,
    /// Human-readable report.
    pub report: String,
    pub warnings: Vec<String>,
    pub passed: bool,
}

fn header(cmd: &str, cfg: &RunConfig) -> String {
    format!("crbspec {} {cmd} {}", env!("CARGO_PKG_VERSION"), cfg.to_json())
}

fn csv_string(f: impl FnOnce(&mut Vec<u8>) -> Result<(), CliError>) -> Result<String, CliError> {
    let mut buf = Vec::new();
    f(&mut buf)?;
    Ok(String::from_utf8(buf).expect("CSV output is UTF-8"))
}

pub fn spectrum(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let table = mode_table(&cfg.source())?;
    let csv = csv_string(|b| csvio::write_mode_table(b, &table, Some(&header("spectrum", cfg))))?;
    let underflow = table.rows.iter().filter(|r| r.underflow()).count();
    let mut warnings = Vec::new();
    if underflow > 0 {
        warnings.push(format!(
            "{underflow} rows leave the f64 range; their linear columns read 0 and the dB columns hold the extended-range values"
        ));
    }
    Ok(Outcome {
        csv: Some(csv),
        report: format!("{} rows, sigma_w2 = {:e}\n", table.rows.len(), table.sigma_w2),
        warnings,
        passed: true,
    })
}

fn convergence_name(c: Convergence) -> &'static str {
    match c {
        Convergence::Converged => "converging",
        Convergence::Diverging => "diverging",
        Convergence::Undetermined => "undetermined",
    }
}

pub fn regime_name(r: Regime) -> &'static str {
    match r {
        Regime::TraceClassFim => "trace-class-FIM",
        Regime::TraceClassCrb => "trace-class-CRB",
        Regime::FiniteTruncationsOnly => "finite-truncations-only",
        Regime::Undetermined => "undetermined",
    }
}

pub fn crb(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let source = cfg.source();
    let mut warnings = Vec::new();
    if source.white != WhiteNoise::None {
        warnings.push("crb ignores sigma_w2/wnr_db; the curves follow wnr_db_list".into());
    }
    let mut levels = vec![Wnr::None];
    for w in &cfg.wnr_db_list {
        if !levels.contains(w) {
            levels.push(*w);
        }
    }
    let mut curves = Vec::with_capacity(levels.len());
    let mut report = String::new();
    for w in levels {
        let white = match w {
            Wnr::None => WhiteNoise::None,
            Wnr::Db(db) => WhiteNoise::WnrDb(db),
        };
        let curve = crb_l(&source.with_white(white), cfg.l_max())?;
        let n = curve.points.len();
        let last = curve.points[n - 1].1;
        let prev = if n > 1 { curve.points[n - 2].1 } else { 0.0 };
        let _ = writeln!(
            report,
            "wnr_db={w}: CRB({}) = {:e}, last increment/value = {:.3e}, {}",
            cfg.l_max(),
            last,
            (last - prev) / last,
            convergence_name(curve.convergence)
        );
        curves.push((w, curve));
    }
    let csv = csv_string(|b| csvio::write_crb_curves(b, &curves, Some(&header("crb", cfg))))?;
    Ok(Outcome {
        csv: Some(csv),
        report,
        warnings,
        passed: true,
    })
}

fn read_spectrum_file(path: &Path) -> Result<ModalSpectrum, CliError> {
    let f = File::open(path).map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    csvio::read_spectrum(f).map_err(|e| match e {
        CliError::Input(m) => CliError::Input(format!("{}: {m}", path.display())),
        other => other,
    })
}

/// Shell-by-shell partial sums of `Σ σ²/λ` and `Σ λ/σ²` and the regime.
pub fn trace_report(sigma: &ModalSpectrum, lambda: &ModalSpectrum) -> Result<String, CliError> {
    let regime = regime_classify(sigma, lambda)?;
    let mut shells: Vec<Label> = Vec::new();
    for e in sigma.entries().iter().filter(|e| e.value > 0.0) {
        if shells.last().map(Label::shell) != Some(e.label.shell()) {
            shells.push(e.label);
        }
    }
    let mut out = String::from("shell,fim_increment,fim_partial,crb_increment,crb_partial\n");
    let (mut fim, mut crb) = (KahanSum::new(), KahanSum::new());
    for ((label, f), c) in shells.iter().zip(&regime.fim_increments).zip(&regime.crb_increments) {
        fim.add(*f);
        crb.add(*c);
        let shell = match label {
            Label::Index(i) => i.to_string(),
            Label::Mode { l, .. } => l.to_string(),
        };
        let _ = writeln!(
            out,
            "{shell},{},{},{},{}",
            csvio::fmt_linear(*f),
            csvio::fmt_linear(fim.value()),
            csvio::fmt_linear(*c),
            csvio::fmt_linear(crb.value())
        );
    }
    let _ = writeln!(out, "fim: {}", convergence_name(regime.fim));
    let _ = writeln!(out, "crb: {}", convergence_name(regime.crb));
    let _ = writeln!(out, "regime: {}", regime_name(regime.regime));
    Ok(out)
}

pub fn trace(cfg: &RunConfig, input: &TraceInput) -> Result<Outcome, CliError> {
    let (sigma, lambda) = match input {
        TraceInput::Config => {
            let s = cfg.source();
            (singular_values(&s)?, noise_spectrum(&s)?)
        }
        TraceInput::Files { sigma, lambda } => (read_spectrum_file(sigma)?, read_spectrum_file(lambda)?),
    };
    Ok(Outcome {
        csv: None,
        report: trace_report(&sigma, &lambda)?,
        warnings: Vec::new(),
        passed: true,
    })
}

/// One pass/fail line of the `mc` summary.
#[derive(Debug, Clone, PartialEq)]
pub struct Band {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Bands pass when at least this fraction of their modes does; bands over
/// single quantities must pass outright.
pub const MODE_FRACTION: f64 = 0.95;

pub fn mc_bands(cfg: &RunConfig) -> Result<(Vec<Band>, String), CliError> {
    let source = cfg.source();
    let noise = mc::noise_covariance(
        &source,
        cfg.mc_lmax,
        cfg.n_directions,
        cfg.realizations,
        RngSpec { seed: cfg.seed, stream: 0 },
    )?;
    let truth = vec![Complex64::new(1.0, 0.0); cfg.estimation_modes];
    let setup = em_estimation_setup(&source, &truth, cfg.estimation_modes)?;
    let est = mc::estimation(&setup, cfg.trials, RngSpec { seed: cfg.seed, stream: 1 })?;

    let rows = &noise.report.rows;
    let n = rows.len();
    let mut bands = Vec::new();
    let mut band = |name, passed, detail: String| bands.push(Band { name, passed, detail });

    let f = fraction(rows.iter().map(|r| r.unbiased_within(SE_BAND)));
    band("noise-mean", f == 1.0, format!("{:.1}% of {n} modes", 100.0 * f));
    let f = fraction(rows.iter().map(|r| r.var_within(SE_BAND)));
    band("noise-variance", f >= MODE_FRACTION, format!("{:.1}% of {n} modes", 100.0 * f));
    let f = fraction(noise.report.pseudo.iter().map(|p| p.within(SE_BAND)));
    band("noise-pseudo-covariance", f >= MODE_FRACTION, format!("{:.1}% of {n} modes", 100.0 * f));
    let f = fraction(noise.report.cross.iter().map(|p| p.within(SE_BAND)));
    band(
        "noise-cross-covariance",
        f == 1.0,
        format!("{:.1}% of {} pairs", 100.0 * f, noise.report.cross.len()),
    );
    let f = fraction(noise.resolved.iter().map(|r| r.z_score().abs() < SE_BAND));
    band(
        "noise-resolved-variance",
        f >= MODE_FRACTION,
        format!("{:.1}% of {n} modes", 100.0 * f),
    );
    let erows = &est.report.rows;
    let r = erows.len();
    let f = fraction(erows.iter().map(|row| row.unbiased_within(SE_BAND)));
    band("estimator-bias", f == 1.0, format!("{:.1}% of {r} modes", 100.0 * f));
    let f = fraction(erows.iter().map(|row| row.var_within(SE_BAND)));
    band("estimator-variance", f >= MODE_FRACTION, format!("{:.1}% of {r} modes", 100.0 * f));
    let z = (est.mse_sum - est.crb) / est.mse_sum_se;
    band(
        "estimator-mse-sum",
        z.abs() < SE_BAND,
        format!("MSE sum / CRB({r}) = {:.5}, z = {z:.2}", est.mse_ratio()),
    );

    let csv = csv_string(|b| {
        csvio::write_trial_rows(
            b,
            [("noise", rows.as_slice()), ("est", erows.as_slice())],
            Some(&header("mc", cfg)),
        )
    })?;
    Ok((bands, csv))
}

pub fn monte_carlo(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let (bands, csv) = mc_bands(cfg)?;
    let mut report = String::new();
    for b in &bands {
        let _ = writeln!(report, "{} {}: {}", if b.passed { "PASS" } else { "FAIL" }, b.name, b.detail);
    }
    Ok(Outcome {
        csv: Some(csv),
        report,
        warnings: Vec::new(),
        passed: bands.iter().all(|b| b.passed),
    })
}

pub fn green_check(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let radius = cfg.green_kr_max / cfg.k;
    if radius > cfg.r1 {
        return Err(CliError::Input(format!(
            "green_kr_max = {} puts points beyond r1 = {}",
            cfg.green_kr_max, cfg.r1
        )));
    }
    let onset = std::f64::consts::E * cfg.green_kr_max / 2.0;
    if onset >= cfg.lmax as f64 {
        return Err(CliError::Input(format!(
            "lmax = {} too small for k|r| <= {} (need lmax > {onset:.2})",
            cfg.lmax, cfg.green_kr_max
        )));
    }
    let mut warnings = Vec::new();
    if cfg.n_pairs == 0 {
        warnings.push("no point pairs requested; the check passes vacuously".into());
    }
    let pairs = random_point_pairs(RngSpec::new(cfg.seed), cfg.n_pairs, radius);
    let check = green_identity_check(&cfg.source(), cfg.lmax, &pairs)?;
    let passed = check.max_rel_err < GREEN_TOLERANCE;
    let report = format!(
        "pairs: {}\nlmax: {}\nkr_max: {}\nmax_rel_err: {:e}\n{}\n",
        cfg.n_pairs,
        cfg.lmax,
        cfg.green_kr_max,
        check.max_rel_err,
        if passed { "PASS" } else { "FAIL" }
    );
    Ok(Outcome {
        csv: None,
        report,
        warnings,
        passed,
    })
}

pub fn execute(cmd: &Command, cfg: &RunConfig) -> Result<Outcome, CliError> {
    match cmd {
        Command::Spectrum => spectrum(cfg),
        Command::Crb => crb(cfg),
        Command::Trace(input) => trace(cfg, input),
        Command::Mc => monte_carlo(cfg),
        Command::GreenCheck => green_check(cfg),
    }
}

fn write_all(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => {
            let f = File::create(p).map_err(|e| CliError::Io(format!("cannot write {}: {e}", p.display())))?;
            let mut w = BufWriter::new(f);
            w.write_all(text.as_bytes())
                .and_then(|_| w.flush())
                .map_err(|e| CliError::Io(format!("cannot write {}: {e}", p.display())))
        }
        None => io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(format!("cannot write to standard output: {e}"))),
    }
}

/// Runs `cmd` and writes its output. Returns the exit code: 0 when all
/// checks pass, 3 otherwise.
///
/// The CSV goes to `cfg.out` or, without one, to standard output; the report
/// then moves to standard error so the CSV stays clean. `trace` and
/// `green-check` write their report to `cfg.out` if set.
pub fn run(cmd: &Command, cfg: &RunConfig) -> Result<u8, CliError> {
    let outcome = execute(cmd, cfg)?;
    for w in &outcome.warnings {
        eprintln!("warning: {w}");
    }
    match &outcome.csv {
        Some(csv) => {
            write_all(cfg.out.as_deref(), csv)?;
            if cfg.out.is_some() {
                write_all(None, &outcome.report)?;
            } else {
                eprint!("{}", outcome.report);
            }
        }
        None => {
            if let Some(p) = &cfg.out {
                write_all(Some(p), &outcome.report)?;
            }
            write_all(None, &outcome.report)?;
        }
    }
    Ok(if outcome.passed { 0 } else { 3 })
}
