//! Inverse source problem for currents inside a sphere of radius `r0`,
//! observed through the tangential electric field on a sphere of radius
//! `r1 > r0` in spherically isotropic (plus optional white) noise.
//!
//! Jacobian and noise covariance are both diagonal in the vector spherical
//! harmonics `A_τlm`, `τ ∈ {1, 2}`, and no modal quantity depends on `m`, so
//! every `(τ, l)` shell carries multiplicity `2l+1`:
//!
//! ```text
//! σ²_τl = k⁴ η0² r1² |f_τl|² σ̄²_τl        f_1 = h_l(kr1),  f_2 = (x h_l)'/x
//! λ_τl  = E0² r1² g²_τl + σ_w²            g_1 = j_l(kr1),  g_2 = (x j_l)'/x
//! ```
//!
//! with mode volume norms `σ̄²_τl = ∫_{r<r0} |v_τlm(kr)|² dv`.

mod forward;
mod spectra;

pub use forward::{forward_project, nonradiating_source, SourceSampling};
pub use spectra::{
    crb_l, fisher_ratio_diagnostic, jacobian_spectrum, mode_table, mode_volume_norm, mode_volume_norm_scaled,
    noise_spectrum, radial_factor_f, radial_factor_g, singular_values, white_noise_variance, FisherRatioReport,
    ModeRow, ModeTable,
};

use crate::error::{domain, Result};
use crate::fisher::{Label, ScalarField};

/// Additive white noise on top of the isotropic field.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum WhiteNoise {
    #[default]
    None,
    /// Absolute variance `σ_w²`.
    Variance(f64),
    /// White-noise ratio in dB relative to the largest isotropic eigenvalue.
    WnrDb(f64),
}

/// Physical parameters of the source problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceConfig {
    /// Wavenumber.
    pub k: f64,
    /// Source radius.
    pub r0: f64,
    /// Measurement radius.
    pub r1: f64,
    /// Isotropic noise amplitude.
    pub e0: f64,
    /// Wave impedance.
    pub eta0: f64,
    pub field: ScalarField,
    pub white: WhiteNoise,
    /// Highest multipole order.
    pub lmax: usize,
}

impl Default for SourceConfig {
    /// `kr0 = 10`, `r0 = 1`, `r1 = 1.5`, `E0 = η0 = 1`, `lmax = 40`.
    fn default() -> Self {
        Self {
            k: 10.0,
            r0: 1.0,
            r1: 1.5,
            e0: 1.0,
            eta0: 1.0,
            field: ScalarField::Complex,
            white: WhiteNoise::None,
            lmax: 40,
        }
    }
}

impl SourceConfig {
    pub fn validate(&self) -> Result<()> {
        let finite_pos = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(domain!("{name} must be finite and > 0, got {v}"))
            }
        };
        finite_pos("k", self.k)?;
        finite_pos("r0", self.r0)?;
        finite_pos("r1", self.r1)?;
        finite_pos("E0", self.e0)?;
        finite_pos("eta0", self.eta0)?;
        if self.r0 >= self.r1 {
            return Err(domain!("source radius r0 = {} must be below r1 = {}", self.r0, self.r1));
        }
        if self.lmax < 1 {
            return Err(domain!("lmax must be >= 1"));
        }
        match self.white {
            WhiteNoise::Variance(v) if !(v >= 0.0) || !v.is_finite() => {
                Err(domain!("white-noise variance must be finite and >= 0, got {v}"))
            }
            WhiteNoise::WnrDb(db) if !db.is_finite() => Err(domain!("WNR must be finite, got {db}")),
            _ => Ok(()),
        }
    }

    pub fn with_white(mut self, white: WhiteNoise) -> Self {
        self.white = white;
        self
    }

    pub fn with_lmax(mut self, lmax: usize) -> Self {
        self.lmax = lmax;
        self
    }
}

/// A `(τ, l)` shell; the `m` index only enters through the multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EmMode {
    pub tau: u8,
    pub l: usize,
}

impl EmMode {
    pub fn new(tau: u8, l: usize) -> Result<Self> {
        if !(1..=2).contains(&tau) || l < 1 {
            return Err(domain!("invalid mode tau = {tau}, l = {l}"));
        }
        Ok(Self { tau, l })
    }

    pub fn multiplicity(&self) -> u32 {
        2 * self.l as u32 + 1
    }

    pub fn label(&self) -> Label {
        Label::Mode {
            tau: self.tau,
            l: self.l,
        }
    }
}
