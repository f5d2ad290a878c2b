use alloc::vec::Vec;

use super::spectrum::{Entry, FisherSpectrum};
use crate::error::{domain, Result};
use crate::sum::KahanSum;

/// Below this last-quartile increment ratio a series counts as converging.
pub const RATIO_THRESHOLD: f64 = 0.999;

/// Fewer increments than this cannot be diagnosed.
pub const MIN_TERMS: usize = 8;

/// Finite-data verdict on an infinite series of nonnegative terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convergence {
    Converged,
    Diverging,
    Undetermined,
}

fn ratio(prev: f64, next: f64) -> f64 {
    if prev > 0.0 {
        next / prev
    } else if next == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

/// Ratio test over the last quartile of `increments`.
///
/// Every successive ratio below [`RATIO_THRESHOLD`] means converged; every
/// ratio at or above one means diverging; anything else, or fewer than
/// [`MIN_TERMS`] increments, is undetermined.
pub fn diagnose(increments: &[f64]) -> Convergence {
    let n = increments.len();
    if n < MIN_TERMS {
        return Convergence::Undetermined;
    }
    let tail = &increments[n - (n / 4).max(2)..];
    let (lo, hi) = tail
        .windows(2)
        .map(|w| ratio(w[0], w[1]))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| (lo.min(r), hi.max(r)));
    if hi < RATIO_THRESHOLD {
        Convergence::Converged
    } else if lo >= 1.0 {
        Convergence::Diverging
    } else {
        Convergence::Undetermined
    }
}

/// Sums `term(e)·multiplicity` over consecutive entries sharing a
/// [`Label::shell`](super::Label::shell), so the `τ` modes of one multipole
/// order form a single increment.
pub fn shell_increments<'a>(
    entries: impl IntoIterator<Item = &'a Entry>,
    mut term: impl FnMut(&Entry) -> f64,
) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::new();
    let mut current: Option<(usize, KahanSum)> = None;
    for e in entries {
        let t = term(e) * e.multiplicity as f64;
        match &mut current {
            Some((shell, acc)) if *shell == e.label.shell() => acc.add(t),
            _ => {
                if let Some((_, acc)) = current.take() {
                    out.push(acc.value());
                }
                let mut acc = KahanSum::new();
                acc.add(t);
                current = Some((e.label.shell(), acc));
            }
        }
    }
    if let Some((_, acc)) = current {
        out.push(acc.value());
    }
    out
}

/// Partial sums of a bound against truncation.
#[derive(Debug, Clone, PartialEq)]
pub struct CrbCurve {
    /// `(r, CRB(r))` pairs.
    pub points: Vec<(usize, f64)>,
    /// Every increment is positive and no partial sum decreases. Increments
    /// below one ulp of the running sum leave the stored value unchanged.
    pub monotone: bool,
    pub convergence: Convergence,
}

impl CrbCurve {
    /// Accumulates `(r, increment)` pairs. `diagnostic` is the increment
    /// series handed to [`diagnose`]; it may be coarser than the points.
    pub fn from_increments(increments: impl IntoIterator<Item = (usize, f64)>, diagnostic: &[f64]) -> Self {
        let mut acc = KahanSum::new();
        let mut positive = true;
        let points: Vec<(usize, f64)> = increments
            .into_iter()
            .map(|(r, d)| {
                positive &= d > 0.0;
                acc.add(d);
                (r, acc.value())
            })
            .collect();
        let monotone = positive && points.windows(2).all(|w| w[1].1 >= w[0].1);
        Self {
            points,
            monotone,
            convergence: diagnose(diagnostic),
        }
    }

    pub fn last(&self) -> Option<(usize, f64)> {
        self.points.last().copied()
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.1)
    }

    /// `CRB(r)` for the given truncation, if present.
    pub fn at(&self, r: usize) -> Option<f64> {
        self.points.iter().find(|p| p.0 == r).map(|p| p.1)
    }
}

/// `CRB(r) = Σ_{i ≤ r} 1/μ̃ᵢ` for `r = 1..=r_max`, counting each mode of a
/// degenerate entry separately and following the spectrum's ordering.
pub fn crb_curve(mu: &FisherSpectrum, r_max: usize) -> Result<CrbCurve> {
    let total = mu.spectrum().total_multiplicity();
    if total == 0 {
        return Err(domain!("CRB curve of an empty Fisher spectrum"));
    }
    if r_max > total {
        return Err(domain!("r_max = {r_max} exceeds the {total} available modes"));
    }
    let incs = mu.spectrum().expanded().map(|m| 1.0 / m).take(r_max).enumerate().map(|(i, d)| (i + 1, d));
    let mut covered = 0usize;
    let used: Vec<&Entry> = mu
        .entries()
        .iter()
        .take_while(|e| {
            let keep = covered < r_max;
            covered += e.multiplicity as usize;
            keep
        })
        .collect();
    let diagnostic = shell_increments(used, |e| 1.0 / e.value);
    Ok(CrbCurve::from_increments(incs, &diagnostic))
}
