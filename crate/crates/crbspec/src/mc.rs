//! Parallel Monte Carlo drivers. Trial `t` always draws from
//! `spec.substream(t)` and results are reduced in trial order, so output is
//! independent of the thread count.

use crbspec_core::emsource::SourceConfig;
use crbspec_core::mcsim::{
    empirical_covariance, estimation_trial, mode_index, summarize_estimation, EstimationReport, EstimationSetup,
    NoiseModel, RngSpec, TrialIndex, TrialReport, TrialRow,
};
use crbspec_core::{Complex64, Result};
use rayon::prelude::*;

/// Across-realization mean of the per-realization resolved power, an
/// estimate of `Var(N)` that averages out the amplitude fluctuations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolvedVariance {
    pub index: TrialIndex,
    pub target: f64,
    pub estimate: f64,
    pub se: f64,
}

impl ResolvedVariance {
    pub fn ratio(&self) -> f64 {
        self.estimate / self.target
    }

    pub fn z_score(&self) -> f64 {
        (self.estimate - self.target) / self.se
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoiseRun {
    pub report: TrialReport,
    pub resolved: Vec<ResolvedVariance>,
}

impl NoiseRun {
    /// Fraction of modes whose sample variance lies within `band` of the
    /// target, relative.
    pub fn sample_fraction_within(&self, band: f64) -> f64 {
        fraction(self.report.rows.iter().map(|r| (r.var_ratio() - 1.0).abs() < band))
    }

    pub fn resolved_fraction_within(&self, band: f64) -> f64 {
        fraction(self.resolved.iter().map(|r| (r.ratio() - 1.0).abs() < band))
    }
}

pub fn fraction(flags: impl Iterator<Item = bool>) -> f64 {
    let (mut hit, mut n) = (0usize, 0usize);
    for f in flags {
        hit += f as usize;
        n += 1;
    }
    if n == 0 {
        1.0
    } else {
        hit as f64 / n as f64
    }
}

/// Cross-covariance pairs that exist for modes up to `lmax`.
pub fn default_pairs(lmax: usize) -> Vec<(usize, usize)> {
    let wanted = [((1, 1, 0), (2, 3, 1)), ((1, 1, -1), (1, 1, 1)), ((1, 2, 0), (2, 2, 0))];
    wanted
        .iter()
        .filter(|(a, b)| a.1 <= lmax && b.1 <= lmax)
        .map(|&(a, b)| (mode_index(a.0, a.1, a.2), mode_index(b.0, b.1, b.2)))
        .collect()
}

/// `realizations` draws of the observed isotropic (plus white) noise for
/// modes `l ≤ lmax`.
pub fn noise_covariance(
    config: &SourceConfig,
    lmax: usize,
    n_directions: usize,
    realizations: usize,
    spec: RngSpec,
) -> Result<NoiseRun> {
    let model = NoiseModel::new(config, lmax, n_directions)?;
    let draws = (0..realizations as u64)
        .into_par_iter()
        .map(|t| model.sample(spec.substream(t)))
        .collect::<Result<Vec<_>>>()?;
    let coeffs: Vec<Vec<Complex64>> = draws.iter().map(|d| d.coeffs.clone()).collect();
    let indices = model.indices();
    let report = empirical_covariance(&coeffs, &indices, &model.targets, &default_pairs(lmax))?;
    let resolved = indices
        .iter()
        .enumerate()
        .map(|(i, &index)| {
            let powers = draws.iter().map(|d| Complex64::new(d.resolved_power[i], 0.0));
            let row = TrialRow::from_samples(index, model.targets[i], powers);
            ResolvedVariance {
                index,
                target: model.targets[i],
                estimate: row.mean.re,
                se: row.mean_se,
            }
        })
        .collect();
    Ok(NoiseRun { report, resolved })
}

/// Parallel equivalent of `simulate_linear_estimation`, bit-identical to it.
pub fn estimation(setup: &EstimationSetup, trials: usize, spec: RngSpec) -> Result<EstimationReport> {
    let estimates = (0..trials as u64)
        .into_par_iter()
        .map(|t| estimation_trial(setup, spec.substream(t)))
        .collect::<Result<Vec<_>>>()?;
    summarize_estimation(setup, &estimates)
}
