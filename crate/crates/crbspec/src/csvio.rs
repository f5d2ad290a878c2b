//! CSV formats. Linear values use shortest round-trip scientific notation,
//! decibel values six significant digits. An optional first line starting
//! with `#` carries metadata.

use std::io::{Read, Write};

use crbspec_core::emsource::ModeTable;
use crbspec_core::fisher::{CrbCurve, Entry, Label, ModalSpectrum, Ordering};
use crbspec_core::mcsim::TrialRow;

use crate::config::Wnr;
use crate::CliError;

pub const SPECTRUM_TABLE_HEADER: [&str; 11] = [
    "tau",
    "l",
    "multiplicity",
    "sigma2",
    "lambda_iso",
    "lambda_total",
    "fisher_mu",
    "crb_increment",
    "sigma2_db",
    "lambda_iso_db",
    "lambda_total_db",
];
pub const SPECTRA_HEADER: [&str; 5] = ["index", "tau", "l", "value", "multiplicity"];
pub const CRB_HEADER: [&str; 4] = ["L", "wnr_db", "crb", "crb_db"];
pub const TRIAL_HEADER: [&str; 7] = ["index", "target", "emp_mean_re", "emp_mean_im", "emp_var", "stderr", "z_score"];

/// Full-precision scientific notation.
pub fn fmt_linear(x: f64) -> String {
    format!("{x:e}")
}

/// Six significant digits in positional notation, or `-inf`/`inf`/`nan`.
pub fn fmt_db(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (5 - mag).max(0) as usize;
    format!("{x:.decimals$}")
}

/// `10 log10 x`.
pub fn db(x: f64) -> f64 {
    10.0 * x.log10()
}

fn io_err(e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("write failed: {e}"))
}

fn writer<W: Write>(mut w: W, comment: Option<&str>) -> Result<csv::Writer<W>, CliError> {
    if let Some(c) = comment {
        writeln!(w, "# {}", c.replace('\n', " ")).map_err(io_err)?;
    }
    Ok(csv::Writer::from_writer(w))
}

/// One row per `(τ, l)` shell in table order. Underflowed linear values read
/// 0; their dB columns still carry the extended-range value.
pub fn write_mode_table<W: Write>(w: W, table: &ModeTable, comment: Option<&str>) -> Result<(), CliError> {
    let mut out = writer(w, comment)?;
    out.write_record(SPECTRUM_TABLE_HEADER).map_err(io_err)?;
    let c = table.config.field.factor();
    for r in &table.rows {
        let lin = |s: crbspec_core::specfun::Scaled| fmt_linear(s.checked().0);
        out.write_record([
            r.mode.tau.to_string(),
            r.mode.l.to_string(),
            r.mode.multiplicity().to_string(),
            lin(r.sigma2),
            lin(r.lambda_iso),
            lin(r.lambda_total),
            lin(r.fisher_mu(c)),
            lin(r.crb_increment(c)),
            fmt_db(r.sigma2.db()),
            fmt_db(r.lambda_iso.db()),
            fmt_db(r.lambda_total.db()),
        ])
        .map_err(io_err)?;
    }
    out.flush().map_err(io_err)
}

/// `L,wnr_db,crb,crb_db`, one block per curve.
pub fn write_crb_curves<W: Write>(w: W, curves: &[(Wnr, CrbCurve)], comment: Option<&str>) -> Result<(), CliError> {
    let mut out = writer(w, comment)?;
    out.write_record(CRB_HEADER).map_err(io_err)?;
    for (wnr, curve) in curves {
        for &(l, v) in &curve.points {
            out.write_record([l.to_string(), wnr.to_string(), fmt_linear(v), fmt_db(db(v))])
                .map_err(io_err)?;
        }
    }
    out.flush().map_err(io_err)
}

/// Trial rows; `prefix` is prepended to every index as `prefix:index`.
pub fn write_trial_rows<'a, W: Write>(
    w: W,
    blocks: impl IntoIterator<Item = (&'a str, &'a [TrialRow])>,
    comment: Option<&str>,
) -> Result<(), CliError> {
    let mut out = writer(w, comment)?;
    out.write_record(TRIAL_HEADER).map_err(io_err)?;
    for (prefix, rows) in blocks {
        for r in rows {
            let index = if prefix.is_empty() {
                r.index.to_string()
            } else {
                format!("{prefix}:{}", r.index)
            };
            out.write_record([
                index,
                fmt_linear(r.target),
                fmt_linear(r.mean.re),
                fmt_linear(r.mean.im),
                fmt_linear(r.var),
                fmt_linear(r.var_se),
                fmt_linear(r.z_score()),
            ])
            .map_err(io_err)?;
        }
    }
    out.flush().map_err(io_err)
}

/// `index,tau,l,value,multiplicity`: generic labels fill `index`, modal
/// labels fill `tau` and `l`.
pub fn write_spectrum<W: Write>(w: W, s: &ModalSpectrum, comment: Option<&str>) -> Result<(), CliError> {
    let mut out = writer(w, comment)?;
    out.write_record(SPECTRA_HEADER).map_err(io_err)?;
    for e in s.entries() {
        let (index, tau, l) = match e.label {
            Label::Index(i) => (i.to_string(), String::new(), String::new()),
            Label::Mode { tau, l } => (String::new(), tau.to_string(), l.to_string()),
        };
        out.write_record([index, tau, l, fmt_linear(e.value), e.multiplicity.to_string()])
            .map_err(io_err)?;
    }
    out.flush().map_err(io_err)
}

/// Reads the [`write_spectrum`] format. An empty `multiplicity` means 1.
/// Errors name the offending line of the file.
pub fn read_spectrum<R: Read>(r: R) -> Result<ModalSpectrum, CliError> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(r);
    let headers = rdr
        .headers()
        .map_err(|e| CliError::Input(format!("spectrum CSV header: {e}")))?
        .clone();
    if headers.iter().ne(SPECTRA_HEADER) {
        return Err(CliError::Input(format!(
            "spectrum CSV header must be {}, got {}",
            SPECTRA_HEADER.join(","),
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut entries = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            CliError::Input(format!("spectrum CSV line {line}: {e}"))
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        let bad = |msg: String| CliError::Input(format!("spectrum CSV line {line}: {msg}"));
        let field = |i: usize| rec.get(i).unwrap_or("");
        let label = match (field(0), field(1), field(2)) {
            (i, "", "") if !i.is_empty() => {
                Label::Index(i.parse().map_err(|_| bad(format!("invalid index {i:?}")))?)
            }
            ("", t, l) if !t.is_empty() && !l.is_empty() => Label::Mode {
                tau: t.parse().map_err(|_| bad(format!("invalid tau {t:?}")))?,
                l: l.parse().map_err(|_| bad(format!("invalid l {l:?}")))?,
            },
            _ => return Err(bad("give either index or both tau and l".into())),
        };
        let v = field(3);
        let value: f64 = v.parse().map_err(|_| bad(format!("invalid value {v:?}")))?;
        if !(value >= 0.0) || !value.is_finite() {
            return Err(bad(format!("value must be finite and >= 0, got {v}")));
        }
        let m = field(4);
        let multiplicity = if m.is_empty() {
            1
        } else {
            m.parse().map_err(|_| bad(format!("invalid multiplicity {m:?}")))?
        };
        if multiplicity == 0 {
            return Err(bad("multiplicity must be >= 1".into()));
        }
        entries.push(Entry::new(label, value, multiplicity));
    }
    Ok(ModalSpectrum::new(entries, Ordering::ByLabel)?)
}
