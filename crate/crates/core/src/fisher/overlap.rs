use alloc::vec::Vec;

use super::series::{diagnose, Convergence, MIN_TERMS};
use super::spectrum::{Entry, ModalSpectrum};
use crate::error::{domain, Error, Result};
use crate::sum::{partial_sums, KahanSum};

/// `G[j][i] = |⟨φⱼ, uᵢ⟩|²` between covariance eigenvectors `φⱼ` (rows, in
/// the order of the λ spectrum) and left singular vectors `uᵢ` (columns, in
/// the order of the σ spectrum).
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl OverlapMatrix {
    /// Row-major `rows × cols` data. Entries must lie in `[0, 1]` and each
    /// column may sum to at most one (Bessel's inequality).
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(domain!("overlap data has {} entries, expected {rows}x{cols}", data.len()));
        }
        if let Some(v) = data.iter().find(|v| !(**v >= 0.0 && **v <= 1.0)) {
            return Err(domain!("overlap entry {v} outside [0, 1]"));
        }
        for i in 0..cols {
            let col: f64 = (0..rows).map(|j| data[j * cols + i]).sum();
            if col > 1.0 + 1e-12 {
                return Err(domain!("overlap column {i} sums to {col} > 1"));
            }
        }
        Ok(Self { rows, cols, data })
    }

    /// Shared eigenvectors.
    pub fn identity(n: usize) -> Self {
        let mut data = alloc::vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        Self { rows: n, cols: n, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, j: usize, i: usize) -> f64 {
        self.data[j * self.cols + i]
    }
}

/// Partial sums of a Proposition-style overlap series with their
/// per-column increments.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceReport {
    pub increments: Vec<f64>,
    pub partial_sums: Vec<f64>,
    pub convergence: Convergence,
}

impl TraceReport {
    /// Last partial sum, or `+∞` when the series is diagnosed divergent.
    pub fn value(&self) -> f64 {
        match self.convergence {
            Convergence::Diverging => f64::INFINITY,
            _ => self.partial_sum(),
        }
    }

    /// Last partial sum regardless of diagnosis.
    pub fn partial_sum(&self) -> f64 {
        self.partial_sums.last().copied().unwrap_or(0.0)
    }
}

/// `cᵢ = mᵢ σᵢ² Σⱼ Gⱼᵢ / λⱼ^power` for each column `i` with `σᵢ > 0`.
fn overlap_increments(
    sigma: &ModalSpectrum,
    lambda: &ModalSpectrum,
    overlap: &OverlapMatrix,
    power: i32,
    truncation: usize,
) -> Result<Vec<f64>> {
    if overlap.rows() != lambda.len() || overlap.cols() != sigma.len() {
        return Err(Error::Pairing(alloc::format!(
            "overlap is {}x{}, spectra have {} noise and {} Jacobian entries",
            overlap.rows(),
            overlap.cols(),
            lambda.len(),
            sigma.len()
        )));
    }
    if truncation > sigma.len() {
        return Err(domain!("truncation {truncation} exceeds {} Jacobian entries", sigma.len()));
    }
    let noise: &[Entry] = lambda.entries();
    let mut out = Vec::with_capacity(truncation);
    for (i, s) in sigma.entries().iter().take(truncation).enumerate() {
        if s.value == 0.0 {
            continue;
        }
        let mut acc = KahanSum::new();
        for (j, l) in noise.iter().enumerate() {
            let g = overlap.get(j, i);
            if g == 0.0 {
                continue;
            }
            if l.value == 0.0 {
                return Err(Error::SingularNoise(alloc::format!(
                    "lambda = 0 at {} overlaps {}",
                    l.label,
                    s.label
                )));
            }
            acc.add(g / libm::pow(l.value, power as f64));
        }
        out.push(s.multiplicity as f64 * s.value * s.value * acc.value());
    }
    Ok(out)
}

/// Fisher trace `Σᵢ σᵢ² Σⱼ Gⱼᵢ/λⱼ` over the full provided truncation, with a
/// ratio-test diagnosis of the tail. `sigma` holds singular values.
pub fn fisher_trace(sigma: &ModalSpectrum, lambda: &ModalSpectrum, overlap: &OverlapMatrix) -> Result<TraceReport> {
    let increments = overlap_increments(sigma, lambda, overlap, 1, sigma.len())?;
    let convergence = diagnose(&increments);
    Ok(TraceReport {
        partial_sums: partial_sums(increments.iter().copied()),
        increments,
        convergence,
    })
}

/// Verdict on the Hilbert–Schmidt (range) condition at a finite truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RangeCondition {
    SatisfiedAtTruncation,
    Growing,
    Undetermined,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RangeReport {
    pub increments: Vec<f64>,
    pub partial_sums: Vec<f64>,
    /// Least-squares slope of `ln(increment)` per step over the second half
    /// of the positive increments.
    pub log_slope: f64,
    pub classification: RangeCondition,
}

/// Least-squares slope of `ln y` against position.
fn log_linear_slope(ys: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = ys
        .iter()
        .enumerate()
        .filter(|(_, y)| **y > 0.0)
        .map(|(i, y)| (i as f64, libm::log(*y)))
        .collect();
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return f64::NAN;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// Partial sums `S_N = Σ_{i ≤ N} σᵢ² Σⱼ Gⱼᵢ/λⱼ²`.
///
/// Increments decaying at least geometrically (fitted log-slope at or below
/// `ln 0.999`) classify as satisfied; a nonnegative slope as growing.
pub fn range_condition_diagnostic(
    sigma: &ModalSpectrum,
    lambda: &ModalSpectrum,
    overlap: &OverlapMatrix,
    truncation: usize,
) -> Result<RangeReport> {
    let increments = overlap_increments(sigma, lambda, overlap, 2, truncation)?;
    let tail = &increments[increments.len() / 2..];
    let log_slope = log_linear_slope(tail);
    let classification = if increments.len() < MIN_TERMS || log_slope.is_nan() {
        RangeCondition::Undetermined
    } else if log_slope <= libm::log(super::series::RATIO_THRESHOLD) {
        RangeCondition::SatisfiedAtTruncation
    } else if log_slope >= -1e-12 {
        RangeCondition::Growing
    } else {
        RangeCondition::Undetermined
    };
    Ok(RangeReport {
        partial_sums: partial_sums(increments.iter().copied()),
        increments,
        log_slope,
        classification,
    })
}

/// `λᵢ = σ_w²` for the first `q` entries and `√σᵢ` afterwards, so that the
/// Cameron–Martin singular values become `σᵢ²/σ_w²` and `σᵢ^{3/2}`.
///
/// `sigma` holds singular values and must be nonincreasing in iteration
/// order.
pub fn constructed_noise_spectrum(sigma: &ModalSpectrum, sigma_w2: f64, q: usize) -> Result<ModalSpectrum> {
    if q < 1 {
        return Err(domain!("q must be >= 1"));
    }
    if !(sigma_w2 > 0.0) || !sigma_w2.is_finite() {
        return Err(domain!("white-noise variance must be finite and > 0, got {sigma_w2}"));
    }
    if sigma.entries().windows(2).any(|w| w[1].value > w[0].value) {
        return Err(domain!("singular values must be sorted in decreasing order"));
    }
    let mut pos = 0usize;
    sigma.map_values(|e| {
        pos += 1;
        if pos <= q {
            sigma_w2
        } else {
            libm::sqrt(e.value)
        }
    })
}

/// One element of the Cameron–Martin singular system in the diagonal case:
/// `σ̃ᵢ = σᵢ/√λᵢ`, `ũᵢ = √λᵢ uᵢ`, `ṽᵢ = vᵢ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CameronMartinMode {
    pub label: super::Label,
    pub sigma_tilde: f64,
    /// Factor `√λᵢ` relating `ũᵢ` to `uᵢ`.
    pub u_scale: f64,
    /// Position of the mode in the original σ order.
    pub original_rank: usize,
    pub multiplicity: u32,
}

/// Cameron–Martin singular system sorted by decreasing `σ̃`; null-space modes
/// are omitted.
pub fn cameron_martin_system(sigma: &ModalSpectrum, lambda: &ModalSpectrum) -> Result<Vec<CameronMartinMode>> {
    let mut modes = Vec::with_capacity(sigma.len());
    for (rank, (s, l)) in sigma.pair_with(lambda)?.into_iter().enumerate() {
        if s.value == 0.0 {
            continue;
        }
        if l.value == 0.0 {
            return Err(Error::SingularNoise(alloc::format!("lambda = 0 at {}", s.label)));
        }
        let u_scale = libm::sqrt(l.value);
        modes.push(CameronMartinMode {
            label: s.label,
            sigma_tilde: s.value / u_scale,
            u_scale,
            original_rank: rank,
            multiplicity: s.multiplicity,
        });
    }
    modes.sort_by(|a, b| b.sigma_tilde.total_cmp(&a.sigma_tilde).then(a.original_rank.cmp(&b.original_rank)));
    Ok(modes)
}
