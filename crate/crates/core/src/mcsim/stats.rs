use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sum::KahanSum;

/// Fewer realizations than this are rejected by [`empirical_covariance`].
pub const MIN_REALIZATIONS: usize = 100;

/// Row label of a [`TrialReport`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TrialIndex {
    /// Position in a multiplicity-expanded generic spectrum (1-based).
    Generic(usize),
    Mode { tau: u8, l: usize, m: i32 },
}

impl core::fmt::Display for TrialIndex {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            TrialIndex::Generic(i) => write!(f, "{i}"),
            TrialIndex::Mode { tau, l, m } => write!(f, "{tau}:{l}:{m}"),
        }
    }
}

/// Sample moments of one scalar across trials.
///
/// `mean_se = √(var/n)` is the root-mean-square error of the complex sample
/// mean; `var_se = √((m₄ − var²)/n)` with `m₄` the fourth central absolute
/// moment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialRow {
    pub index: TrialIndex,
    pub target: f64,
    pub mean: Complex64,
    pub var: f64,
    pub var_se: f64,
    pub mean_se: f64,
}

impl TrialRow {
    pub fn from_samples(index: TrialIndex, target: f64, samples: impl Iterator<Item = Complex64> + Clone) -> Self {
        let mut n = 0usize;
        let (mut re, mut im) = (KahanSum::new(), KahanSum::new());
        for z in samples.clone() {
            re.add(z.re);
            im.add(z.im);
            n += 1;
        }
        let nf = n as f64;
        let mean = Complex64::new(re.value() / nf, im.value() / nf);
        let (mut m2, mut m4) = (KahanSum::new(), KahanSum::new());
        for z in samples {
            let d = (z - mean).norm_sqr();
            m2.add(d);
            m4.add(d * d);
        }
        let var = m2.value() / (nf - 1.0);
        let m4 = m4.value() / nf;
        Self {
            index,
            target,
            mean,
            var,
            var_se: libm::sqrt(((m4 - var * var) / nf).max(0.0)),
            mean_se: libm::sqrt(var / nf),
        }
    }

    /// `(var − target)/var_se`.
    pub fn z_score(&self) -> f64 {
        (self.var - self.target) / self.var_se
    }

    pub fn var_within(&self, n_se: f64) -> bool {
        libm::fabs(self.z_score()) < n_se
    }

    /// `|mean| < n_se · mean_se`.
    pub fn unbiased_within(&self, n_se: f64) -> bool {
        self.mean.norm() < n_se * self.mean_se
    }

    pub fn var_ratio(&self) -> f64 {
        self.var / self.target
    }
}

/// Sample mean of a product of two modes with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairStat {
    pub a: TrialIndex,
    pub b: TrialIndex,
    pub value: Complex64,
    pub se: f64,
}

impl PairStat {
    fn from_products(a: TrialIndex, b: TrialIndex, products: &[Complex64]) -> Self {
        let row = TrialRow::from_samples(a, 0.0, products.iter().copied());
        Self {
            a,
            b,
            value: row.mean,
            se: row.mean_se,
        }
    }

    pub fn within(&self, n_se: f64) -> bool {
        self.value.norm() < n_se * self.se
    }
}

/// Per-index sample statistics plus cross- and pseudo-covariances.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialReport {
    pub trials: usize,
    pub rows: Vec<TrialRow>,
    /// `E{N_a N_b*}` for the requested pairs, target 0.
    pub cross: Vec<PairStat>,
    /// `E{N_a N_a}` for every row, target 0.
    pub pseudo: Vec<PairStat>,
}

/// Sample covariance of coefficient vectors.
///
/// `samples[t][i]` is coefficient `i` of realization `t`; `targets[i]` its
/// expected variance. `pairs` selects the cross-covariances to report.
pub fn empirical_covariance(
    samples: &[Vec<Complex64>],
    indices: &[TrialIndex],
    targets: &[f64],
    pairs: &[(usize, usize)],
) -> Result<TrialReport> {
    let n = samples.len();
    if n < MIN_REALIZATIONS {
        return Err(Error::Samples(alloc::format!("{n} realizations, need at least {MIN_REALIZATIONS}")));
    }
    let width = indices.len();
    if targets.len() != width || samples.iter().any(|s| s.len() != width) {
        return Err(Error::Pairing(alloc::format!("sample width differs from {width} indices")));
    }
    if let Some(&(a, b)) = pairs.iter().find(|(a, b)| *a >= width || *b >= width) {
        return Err(crate::error::domain!("pair ({a}, {b}) out of range"));
    }
    let rows = (0..width)
        .map(|i| TrialRow::from_samples(indices[i], targets[i], samples.iter().map(move |s| s[i])))
        .collect();
    let mut buf = Vec::with_capacity(n);
    let mut product = |a: usize, b: usize, conj: bool| {
        buf.clear();
        buf.extend(samples.iter().map(|s| if conj { s[a] * s[b].conj() } else { s[a] * s[b] }));
        PairStat::from_products(indices[a], indices[b], &buf)
    };
    let cross = pairs.iter().map(|&(a, b)| product(a, b, true)).collect();
    let pseudo = (0..width).map(|i| product(i, i, false)).collect();
    Ok(TrialReport {
        trials: n,
        rows,
        cross,
        pseudo,
    })
}
