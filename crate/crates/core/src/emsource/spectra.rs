use alloc::vec::Vec;

use num_complex::Complex64;

use super::{EmMode, SourceConfig, WhiteNoise};
use crate::error::{Error, Result};
use crate::fisher::{
    regime_classify, CrbCurve, Entry, ModalSpectrum, Ordering, RegimeReport,
};
use crate::specfun::{RadialKind, RadialTable, Scaled, ScaledComplex};

fn f_from(table: &RadialTable, mode: EmMode) -> ScaledComplex {
    match mode.tau {
        1 => table.h(mode.l),
        _ => table.riccati(RadialKind::Outgoing, mode.l),
    }
}

fn g_from(table: &RadialTable, mode: EmMode) -> Scaled {
    match mode.tau {
        1 => table.j(mode.l as i32),
        _ => table.riccati(RadialKind::Regular, mode.l).re,
    }
}

/// `f_1 = h_l(x)`, `f_2 = (x h_l(x))'/x` at `x = kr1`.
pub fn radial_factor_f(tau: u8, l: usize, kr1: f64) -> Result<Complex64> {
    let mode = EmMode::new(tau, l)?;
    Ok(f_from(&RadialTable::with_outgoing(l, kr1)?, mode).value())
}

/// `g_1 = j_l(x)`, `g_2 = (x j_l(x))'/x` at `x = kr1`.
pub fn radial_factor_g(tau: u8, l: usize, kr1: f64) -> Result<f64> {
    let mode = EmMode::new(tau, l)?;
    Ok(g_from(&RadialTable::regular(l, kr1)?, mode).value())
}

/// `(r0³/2)(j_l² − j_{l−1} j_{l+1})` at `kr0`; `l = 0` uses `j_{−1} = cos x/x`.
fn lommel(table: &RadialTable, l: usize, r0: f64) -> Scaled {
    let l = l as i32;
    (table.j(l).sqr() - table.j(l - 1) * table.j(l + 1)) * (0.5 * r0 * r0 * r0)
}

fn volume_norm_from(table: &RadialTable, mode: EmMode, r0: f64) -> Scaled {
    let l = mode.l;
    match mode.tau {
        1 => lommel(table, l, r0),
        _ => {
            let lf = l as f64;
            (lommel(table, l - 1, r0) * (lf + 1.0) + lommel(table, l + 1, r0) * lf) * (1.0 / (2.0 * lf + 1.0))
        }
    }
}

/// `σ̄²_τl = ∫_{r<r0} |v_τlm(kr)|² dv` from the Lommel closed forms.
pub fn mode_volume_norm_scaled(tau: u8, l: usize, config: &SourceConfig) -> Result<Scaled> {
    config.validate()?;
    let mode = EmMode::new(tau, l)?;
    let table = RadialTable::regular(l + 2, config.k * config.r0)?;
    Ok(volume_norm_from(&table, mode, config.r0))
}

pub fn mode_volume_norm(tau: u8, l: usize, config: &SourceConfig) -> Result<f64> {
    Ok(mode_volume_norm_scaled(tau, l, config)?.value())
}

/// All modal quantities of one `(τ, l)` shell, kept in extended range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeRow {
    pub mode: EmMode,
    pub f: ScaledComplex,
    pub g: Scaled,
    pub sigma_bar2: Scaled,
    /// Squared singular value.
    pub sigma2: Scaled,
    pub lambda_iso: Scaled,
    pub lambda_total: Scaled,
}

impl ModeRow {
    /// Whether a spectral value leaves the normal `f64` range.
    pub fn underflow(&self) -> bool {
        self.sigma2.is_underflow() || self.lambda_total.is_underflow()
    }

    /// Fisher eigenvalue `μ̃ = c σ²/λ`.
    pub fn fisher_mu(&self, c: f64) -> Scaled {
        self.sigma2 * c / self.lambda_total
    }

    /// Contribution `(2l+1) λ/(c σ²)` of the whole shell to the bound.
    pub fn crb_increment(&self, c: f64) -> Scaled {
        self.lambda_total * (self.mode.multiplicity() as f64 / c) / self.sigma2
    }
}

/// Modal quantities for `l = 1..=lmax`, ordered by `l` then `τ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeTable {
    pub config: SourceConfig,
    /// Resolved white-noise variance.
    pub sigma_w2: f64,
    pub rows: Vec<ModeRow>,
}

impl ModeTable {
    fn spectrum(&self, value: impl Fn(&ModeRow) -> f64) -> Result<ModalSpectrum> {
        let entries = self
            .rows
            .iter()
            .map(|r| Entry::new(r.mode.label(), value(r), r.mode.multiplicity()))
            .collect();
        ModalSpectrum::new(entries, Ordering::ByLabel)
    }

    pub fn row(&self, tau: u8, l: usize) -> Option<&ModeRow> {
        self.rows.iter().find(|r| r.mode.tau == tau && r.mode.l == l)
    }
}

pub fn mode_table(config: &SourceConfig) -> Result<ModeTable> {
    config.validate()?;
    let lmax = config.lmax;
    let at_r1 = RadialTable::with_outgoing(lmax, config.k * config.r1)?;
    let at_r0 = RadialTable::regular(lmax + 2, config.k * config.r0)?;
    let k2eta = config.k * config.k * config.eta0;
    let jac_scale = k2eta * k2eta * config.r1 * config.r1;
    let noise_scale = config.e0 * config.e0 * config.r1 * config.r1;
    let mut rows = Vec::with_capacity(2 * lmax);
    for l in 1..=lmax {
        for tau in 1..=2u8 {
            let mode = EmMode { tau, l };
            let f = f_from(&at_r1, mode);
            let g = g_from(&at_r1, mode);
            let sigma_bar2 = volume_norm_from(&at_r0, mode, config.r0);
            let lambda_iso = g.sqr() * noise_scale;
            rows.push(ModeRow {
                mode,
                f,
                g,
                sigma_bar2,
                sigma2: f.norm_sqr() * sigma_bar2 * jac_scale,
                lambda_iso,
                lambda_total: lambda_iso,
            });
        }
    }
    let sigma_w2 = match config.white {
        WhiteNoise::None => 0.0,
        WhiteNoise::Variance(v) => v,
        WhiteNoise::WnrDb(db) => {
            let max = rows.iter().map(|r| r.lambda_iso.value()).fold(0.0, f64::max);
            libm::pow(10.0, db / 10.0) * max
        }
    };
    if sigma_w2 > 0.0 {
        for r in &mut rows {
            r.lambda_total = r.lambda_iso + Scaled::from_f64(sigma_w2);
        }
    }
    Ok(ModeTable {
        config: *config,
        sigma_w2,
        rows,
    })
}

/// `σ_w²`, resolving a WNR against the largest isotropic eigenvalue with
/// `l ≤ lmax`.
pub fn white_noise_variance(config: &SourceConfig) -> Result<f64> {
    Ok(mode_table(config)?.sigma_w2)
}

/// Squared singular values `σ²_τl` with multiplicity `2l+1`.
pub fn jacobian_spectrum(config: &SourceConfig) -> Result<ModalSpectrum> {
    mode_table(config)?.spectrum(|r| r.sigma2.value())
}

/// Singular values `σ_τl`, the form consumed by [`crate::fisher`].
pub fn singular_values(config: &SourceConfig) -> Result<ModalSpectrum> {
    mode_table(config)?.spectrum(|r| r.sigma2.sqrt().value())
}

/// Noise eigenvalues `λ_τl = E0² r1² g²_τl + σ_w²` with multiplicity `2l+1`.
pub fn noise_spectrum(config: &SourceConfig) -> Result<ModalSpectrum> {
    mode_table(config)?.spectrum(|r| r.lambda_total.value())
}

/// `CRB(L) = Σ_{l ≤ L} Σ_τ (2l+1) λ_τl/(c σ²_τl)` for `L = 1..=l_max`,
/// `c = 2` for real and `1` for complex sources.
pub fn crb_l(config: &SourceConfig, l_max: usize) -> Result<CrbCurve> {
    if l_max > config.lmax || l_max < 1 {
        return Err(crate::error::domain!("L = {l_max} outside 1..={}", config.lmax));
    }
    let table = mode_table(&config.with_lmax(l_max))?;
    let c = config.field.factor();
    let mut incs = Vec::with_capacity(l_max);
    for pair in table.rows.chunks(2) {
        let mut shell = Scaled::ZERO;
        for r in pair {
            if r.sigma2.is_zero() {
                return Err(Error::Rank(alloc::format!("sigma = 0 at tau = {}, l = {}", r.mode.tau, r.mode.l)));
            }
            shell = shell + r.crb_increment(c);
        }
        incs.push((pair[0].mode.l, shell.value()));
    }
    let diagnostic: Vec<f64> = incs.iter().map(|p| p.1).collect();
    Ok(CrbCurve::from_increments(incs, &diagnostic))
}

/// Per-shell behaviour of `σ²/λ`.
#[derive(Debug, Clone, PartialEq)]
pub struct FisherRatioReport {
    /// `(l, [σ²_1l/λ_1l, σ²_2l/λ_2l])`.
    pub ratios: Vec<(usize, [f64; 2])>,
    /// `ln` of successive ratios of the shell sums `(2l+1) Σ_τ σ²/λ`.
    pub log_increments: Vec<f64>,
    /// Smallest `l` from which both `σ²_τl/λ_τl` increase up to `L`.
    pub growing_from: Option<usize>,
    pub regime: RegimeReport,
}

pub fn fisher_ratio_diagnostic(config: &SourceConfig, l_max: usize) -> Result<FisherRatioReport> {
    if l_max > config.lmax || l_max < 1 {
        return Err(crate::error::domain!("L = {l_max} outside 1..={}", config.lmax));
    }
    let cfg = config.with_lmax(l_max);
    let table = mode_table(&cfg)?;
    let ratios: Vec<(usize, [f64; 2])> = table
        .rows
        .chunks(2)
        .map(|p| (p[0].mode.l, [p[0].fisher_mu(1.0).value(), p[1].fisher_mu(1.0).value()]))
        .collect();
    let sigma = singular_values(&cfg)?;
    let lambda = noise_spectrum(&cfg)?;
    let sums: Vec<f64> = ratios
        .iter()
        .map(|(l, r)| (2 * l + 1) as f64 * (r[0] + r[1]))
        .collect();
    let log_increments = sums.windows(2).map(|w| libm::log(w[1] / w[0])).collect();
    let mut growing_from = None;
    for i in (0..ratios.len()).rev() {
        let up = i + 1 == ratios.len() || (0..2).all(|t| ratios[i + 1].1[t] > ratios[i].1[t]);
        if !up {
            break;
        }
        growing_from = Some(ratios[i].0);
    }
    if growing_from == Some(l_max) {
        growing_from = None;
    }
    Ok(FisherRatioReport {
        ratios,
        log_increments,
        growing_from,
        regime: regime_classify(&sigma, &lambda)?,
    })
}
