//! Scalar and vector spherical harmonics.
//!
//! Conventions:
//!
//! ```text
//! Y_lm(θ,φ) = (-1)^m √((2l+1)/4π · (l-m)!/(l+m)!) P_l^m(cos θ) e^{imφ}
//! A_1lm = ∇×(r Y_lm)/√(l(l+1)) = [θ̂ (im/sinθ) Y_lm − φ̂ ∂_θ Y_lm]/√(l(l+1))
//! A_2lm = r̂ × A_1lm           = [θ̂ ∂_θ Y_lm + φ̂ (im/sinθ) Y_lm]/√(l(l+1))
//! A_3lm = r̂ Y_lm
//! ```
//!
//! with `P_l^m` carrying the Condon–Shortley phase and
//! `Y_{l,-m} = (-1)^m Y_lm*`. All derivatives are analytic; `m Y/sin θ`
//! comes from [`LegendreTable::p_over_sin`] and is finite at the poles.

use alloc::vec::Vec;

use num_complex::Complex64;

use super::geom::{ComplexVec3, Direction};
use super::legendre::LegendreTable;
use crate::error::{domain, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Every `Y_lm` and `A_τlm` for `l ≤ lmax` at one direction.
#[derive(Debug, Clone)]
pub struct HarmonicTable {
    dir: Direction,
    legendre: LegendreTable,
    phase: Vec<Complex64>,
}

impl HarmonicTable {
    pub fn new(lmax: usize, dir: Direction) -> Self {
        let (st, ct) = libm::sincos(dir.theta());
        Self::from_trig(lmax, dir, ct, st)
    }

    /// Builds the table from precomputed `cos θ`, `sin θ`.
    pub fn from_trig(lmax: usize, dir: Direction, cos_theta: f64, sin_theta: f64) -> Self {
        let legendre = LegendreTable::new(lmax, cos_theta, sin_theta);
        let (sp, cp) = libm::sincos(dir.phi());
        let step = Complex64::new(cp, sp);
        let mut phase = Vec::with_capacity(lmax + 1);
        let mut e = Complex64::new(1.0, 0.0);
        for m in 0..=lmax {
            if m > 0 && m % 16 == 0 {
                let (s, c) = libm::sincos(m as f64 * dir.phi());
                e = Complex64::new(c, s);
            }
            phase.push(e);
            e *= step;
        }
        Self {
            dir,
            legendre,
            phase,
        }
    }

    pub fn lmax(&self) -> usize {
        self.legendre.lmax()
    }

    pub fn direction(&self) -> Direction {
        self.dir
    }

    fn reflect(m: i32, z: Complex64) -> Complex64 {
        if m >= 0 {
            z
        } else if m % 2 == 0 {
            z.conj()
        } else {
            -z.conj()
        }
    }

    /// `Y_lm` for `|m| ≤ l ≤ lmax`.
    pub fn y(&self, l: usize, m: i32) -> Complex64 {
        let ma = m.unsigned_abs() as usize;
        Self::reflect(m, self.phase[ma] * self.legendre.p(l, ma))
    }

    /// `(θ, φ)` components of `A_τlm`, `τ ∈ {1, 2}`, `l ≥ 1`.
    pub fn tangential(&self, tau: u8, l: usize, m: i32) -> [Complex64; 2] {
        let ma = m.unsigned_abs() as usize;
        let lf = l as f64;
        let c = 1.0 / libm::sqrt(lf * (lf + 1.0));
        let e = self.phase[ma];
        let im_over_sin = I * (ma as f64 * self.legendre.p_over_sin(l, ma) * c) * e;
        let d_theta = e * (self.legendre.dp_dtheta(l, ma) * c);
        let (t, p) = match tau {
            1 => (im_over_sin, -d_theta),
            _ => (d_theta, im_over_sin),
        };
        [Self::reflect(m, t), Self::reflect(m, p)]
    }

    /// `A_τlm` in the local spherical frame.
    pub fn vector(&self, tau: u8, l: usize, m: i32) -> ComplexVec3 {
        let zero = Complex64::new(0.0, 0.0);
        let c = match tau {
            3 => [self.y(l, m), zero, zero],
            _ => {
                let [t, p] = self.tangential(tau, l, m);
                [zero, t, p]
            }
        };
        ComplexVec3::spherical(self.dir, c)
    }
}

fn check_lm(l: usize, m: i32) -> Result<()> {
    if m.unsigned_abs() as usize > l {
        return Err(domain!("|m| = {} exceeds l = {l}", m.unsigned_abs()));
    }
    Ok(())
}

/// Orthonormal scalar harmonic `Y_lm(θ, φ)`.
pub fn scalar_harmonic(l: usize, m: i32, dir: &Direction) -> Result<Complex64> {
    check_lm(l, m)?;
    Ok(HarmonicTable::new(l, *dir).y(l, m))
}

/// Vector spherical harmonic `A_τlm` in the spherical frame at `dir`.
pub fn vector_harmonic(tau: u8, l: usize, m: i32, dir: &Direction) -> Result<ComplexVec3> {
    if !(1..=3).contains(&tau) {
        return Err(domain!("vector harmonic type τ must be 1, 2 or 3, got {tau}"));
    }
    if l == 0 {
        return Err(domain!("vector harmonics start at l = 1"));
    }
    check_lm(l, m)?;
    Ok(HarmonicTable::new(l, *dir).vector(tau, l, m))
}
