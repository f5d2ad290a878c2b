use alloc::vec::Vec;

use super::series::{diagnose, shell_increments, Convergence};
use super::spectrum::ModalSpectrum;
use crate::error::{Error, Result};

/// Which of the Fisher information and the Cramér–Rao bound is trace class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `Σ σ²/λ` converges; the bound grows without limit.
    TraceClassFim,
    /// `Σ λ/σ²` converges; the Fisher information is unbounded.
    TraceClassCrb,
    /// Both series diverge: only finite truncations are meaningful.
    FiniteTruncationsOnly,
    /// Too few modes, or a verdict the ratio test cannot separate.
    Undetermined,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegimeReport {
    /// Per-shell increments of `Σ m σ²/λ`.
    pub fim_increments: Vec<f64>,
    /// Per-shell increments of `Σ m λ/σ²`.
    pub crb_increments: Vec<f64>,
    pub fim: Convergence,
    pub crb: Convergence,
    pub regime: Regime,
}

/// Ratio-test both `Σ σ²/λ` and `Σ λ/σ²` over the provided truncation.
///
/// `sigma` holds singular values. Entries sharing a multipole order are
/// aggregated into one increment. Since the two series cannot both converge,
/// a double "converged" verdict is reported as undetermined.
pub fn regime_classify(sigma: &ModalSpectrum, lambda: &ModalSpectrum) -> Result<RegimeReport> {
    let pairs = sigma.pair_with(lambda)?;
    let mut ratios = Vec::with_capacity(pairs.len());
    for (s, l) in pairs {
        if s.value == 0.0 {
            continue;
        }
        if l.value == 0.0 {
            return Err(Error::SingularNoise(alloc::format!("lambda = 0 at {}", s.label)));
        }
        let mut e = *s;
        e.value = s.value * s.value / l.value;
        ratios.push(e);
    }
    let fim_increments = shell_increments(&ratios, |e| e.value);
    let crb_increments = shell_increments(&ratios, |e| 1.0 / e.value);
    let fim = diagnose(&fim_increments);
    let crb = diagnose(&crb_increments);
    let regime = match (fim, crb) {
        (Convergence::Converged, Convergence::Diverging) => Regime::TraceClassFim,
        (Convergence::Diverging, Convergence::Converged) => Regime::TraceClassCrb,
        (Convergence::Diverging, Convergence::Diverging) => Regime::FiniteTruncationsOnly,
        _ => Regime::Undetermined,
    };
    Ok(RegimeReport {
        fim_increments,
        crb_increments,
        fim,
        crb,
        regime,
    })
}
