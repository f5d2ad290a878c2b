use alloc::vec::Vec;

use num_complex::Complex64;

use super::stats::{TrialIndex, TrialReport, TrialRow, MIN_REALIZATIONS};
use super::{complex_gaussian, RngSpec};
use crate::emsource::{noise_spectrum, singular_values, SourceConfig};
use crate::error::{domain, Error, Result};
use crate::fisher::{crb_curve, fisher_eigenvalues, pseudo_inverse_estimate, Label, ModalSpectrum, ScalarField};
use crate::sum::KahanSum;

/// Linear model `ξᵢ = σᵢ ϑᵢ + wᵢ`, `wᵢ ~ CN(0, λᵢ)`, estimated by the
/// truncated pseudo-inverse over the first `r` modes.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimationSetup {
    pub sigma: ModalSpectrum,
    pub field: ScalarField,
    pub r: usize,
    /// True parameters of the first `r` modes.
    pub truth: Vec<Complex64>,
    sigma_exp: Vec<f64>,
    lambda_exp: Vec<f64>,
    pub indices: Vec<TrialIndex>,
    /// `1/μ̃ᵢ` per mode.
    pub targets: Vec<f64>,
    /// `CRB(r)`.
    pub crb: f64,
}

fn expanded_indices(s: &ModalSpectrum) -> Vec<TrialIndex> {
    let mut out = Vec::with_capacity(s.total_multiplicity());
    for e in s.entries() {
        for k in 0..e.multiplicity {
            out.push(match e.label {
                Label::Mode { tau, l } => TrialIndex::Mode {
                    tau,
                    l,
                    m: k as i32 - l as i32,
                },
                Label::Index(_) => TrialIndex::Generic(out.len() + 1),
            });
        }
    }
    out
}

impl EstimationSetup {
    /// `sigma` holds singular values; `truth` lists at least `r` parameters
    /// (real for a real field).
    pub fn new(
        sigma: &ModalSpectrum,
        lambda: &ModalSpectrum,
        field: ScalarField,
        truth: &[Complex64],
        r: usize,
    ) -> Result<Self> {
        let pairs = sigma.pair_with(lambda)?;
        let available = sigma.total_multiplicity();
        if r < 1 || r > available {
            return Err(domain!("truncation {r} outside 1..={available}"));
        }
        if truth.len() < r {
            return Err(domain!("{} true parameters for truncation {r}", truth.len()));
        }
        if field == ScalarField::Real && truth[..r].iter().any(|t| t.im != 0.0) {
            return Err(domain!("real field requires real parameters"));
        }
        let mut sigma_exp = Vec::with_capacity(available);
        let mut lambda_exp = Vec::with_capacity(available);
        for (s, l) in pairs {
            for _ in 0..s.multiplicity {
                sigma_exp.push(s.value);
                lambda_exp.push(l.value);
            }
        }
        if let Some(i) = sigma_exp[..r].iter().position(|s| *s == 0.0) {
            return Err(Error::Rank(alloc::format!("sigma = 0 at mode {}", i + 1)));
        }
        let c = field.factor();
        let targets: Vec<f64> = (0..r).map(|i| lambda_exp[i] / (c * sigma_exp[i] * sigma_exp[i])).collect();
        let mu = fisher_eigenvalues(sigma, lambda, field)?;
        let crb = crb_curve(&mu, r)?.last().map(|p| p.1).unwrap_or(0.0);
        let mut indices = expanded_indices(sigma);
        indices.truncate(r);
        Ok(Self {
            sigma: sigma.clone(),
            field,
            r,
            truth: truth[..r].to_vec(),
            sigma_exp,
            lambda_exp,
            indices,
            targets,
            crb,
        })
    }
}

/// Estimator output `ϑ̂` of one trial; deterministic in `spec`.
pub fn estimation_trial(setup: &EstimationSetup, spec: RngSpec) -> Result<Vec<Complex64>> {
    let mut rng = spec.rng();
    let mut meas = alloc::vec![Complex64::new(0.0, 0.0); setup.sigma_exp.len()];
    for i in 0..setup.r {
        meas[i] = setup.truth[i] * setup.sigma_exp[i] + complex_gaussian(&mut rng, setup.lambda_exp[i]);
    }
    pseudo_inverse_estimate(&meas, &setup.sigma, setup.field, setup.r)
}

/// Bias/variance report plus the summed mean squared error.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimationReport {
    /// Rows describe the error `ϑ̂ᵢ − ϑᵢ`: the mean is the bias and the
    /// target variance is `1/μ̃ᵢ`.
    pub report: TrialReport,
    pub mse_sum: f64,
    pub mse_sum_se: f64,
    pub crb: f64,
}

impl EstimationReport {
    pub fn mse_ratio(&self) -> f64 {
        self.mse_sum / self.crb
    }
}

/// Reduces per-trial estimates, given in trial order.
pub fn summarize_estimation(setup: &EstimationSetup, estimates: &[Vec<Complex64>]) -> Result<EstimationReport> {
    let n = estimates.len();
    if n < MIN_REALIZATIONS {
        return Err(Error::Samples(alloc::format!("{n} trials, need at least {MIN_REALIZATIONS}")));
    }
    if estimates.iter().any(|e| e.len() != setup.r) {
        return Err(Error::Pairing(alloc::format!("estimates must have {} entries", setup.r)));
    }
    let mut rows = Vec::with_capacity(setup.r);
    let mut mse_sum = KahanSum::new();
    let mut mse_var = KahanSum::new();
    for i in 0..setup.r {
        let errs = estimates.iter().map(|e| e[i] - setup.truth[i]);
        rows.push(TrialRow::from_samples(setup.indices[i], setup.targets[i], errs.clone()));
        let sq = errs.map(|e| Complex64::new(e.norm_sqr(), 0.0));
        let sq_row = TrialRow::from_samples(setup.indices[i], 0.0, sq);
        mse_sum.add(sq_row.mean.re);
        mse_var.add(sq_row.mean_se * sq_row.mean_se);
    }
    Ok(EstimationReport {
        report: TrialReport {
            trials: n,
            rows,
            cross: Vec::new(),
            pseudo: Vec::new(),
        },
        mse_sum: mse_sum.value(),
        mse_sum_se: libm::sqrt(mse_var.value()),
        crb: setup.crb,
    })
}

/// Runs `trials` trials sequentially, trial `t` on `spec.substream(t)`.
pub fn simulate_linear_estimation(setup: &EstimationSetup, trials: usize, spec: RngSpec) -> Result<EstimationReport> {
    if trials < MIN_REALIZATIONS {
        return Err(Error::Samples(alloc::format!("{trials} trials, need at least {MIN_REALIZATIONS}")));
    }
    let estimates = (0..trials)
        .map(|t| estimation_trial(setup, spec.substream(t as u64)))
        .collect::<Result<Vec<_>>>()?;
    summarize_estimation(setup, &estimates)
}

/// Estimation setup for the electromagnetic source problem, modes ordered by
/// `l`, then `τ`, then `m`.
pub fn em_estimation_setup(config: &SourceConfig, truth: &[Complex64], r: usize) -> Result<EstimationSetup> {
    EstimationSetup::new(&singular_values(config)?, &noise_spectrum(config)?, config.field, truth, r)
}
