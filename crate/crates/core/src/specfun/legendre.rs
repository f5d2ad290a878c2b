//! Associated Legendre functions.

use alloc::vec::Vec;
use core::f64::consts::PI;

use super::scaled::Scaled;
use crate::error::{domain, Result};

/// Unnormalized `P_l^m(x)` including the Condon–Shortley phase `(-1)^m`,
/// so that `P_1^1(x) = -√(1 - x²)`.
///
/// The sectoral seed `(2m-1)!! (1-x²)^{m/2}` is built as a [`Scaled`]
/// value and the `l`-recurrence runs on its mantissa, so neither the
/// double factorial nor high powers of `sin θ` overflow or underflow.
pub fn assoc_legendre(l: usize, m: usize, x: f64) -> Result<f64> {
    if m > l {
        return Err(domain!("associated Legendre order m = {m} exceeds degree l = {l}"));
    }
    if !(-1.0..=1.0).contains(&x) {
        return Err(domain!("associated Legendre argument must lie in [-1, 1], got {x}"));
    }
    let s = libm::sqrt((1.0 - x) * (1.0 + x));
    let mut pmm = Scaled::from_f64(1.0);
    for i in 1..=m {
        pmm = pmm * (-((2 * i - 1) as f64) * s);
    }
    if l == m {
        return Ok(pmm.value());
    }
    let (mant, exp) = (pmm.mantissa(), pmm.exp2());
    let mut lo = mant;
    let mut cur = x * (2 * m + 1) as f64 * mant;
    for ll in (m + 2)..=l {
        let next = (x * (2 * ll - 1) as f64 * cur - (ll + m - 1) as f64 * lo) / (ll - m) as f64;
        lo = cur;
        cur = next;
    }
    Ok(Scaled::new(cur, exp).value())
}

#[inline]
fn idx(l: usize, m: usize) -> usize {
    l * (l + 1) / 2 + m
}

/// Orthonormalized Legendre functions `P̂_lm(cos θ)` for `0 ≤ m ≤ l ≤ lmax`,
/// with `Y_lm(θ, φ) = P̂_lm(cos θ) e^{imφ}`.
///
/// The normalization absorbs `√((2l+1)/4π · (l-m)!/(l+m)!)` and cancels the
/// Condon–Shortley phase against the explicit `(-1)^m` of `Y_lm`. For
/// `m ≥ 1` the table also holds `P̂_lm / sin θ`, computed by the same
/// recurrence seeded one power of `sin θ` lower, which stays finite at the
/// poles.
#[derive(Debug, Clone)]
pub struct LegendreTable {
    lmax: usize,
    cos_theta: f64,
    sin_theta: f64,
    p: Vec<f64>,
    p_over_sin: Vec<f64>,
}

impl LegendreTable {
    pub fn new(lmax: usize, cos_theta: f64, sin_theta: f64) -> Self {
        let n = idx(lmax, lmax) + 1;
        let mut p = alloc::vec![0.0; n];
        let mut q = alloc::vec![0.0; n];
        let x = cos_theta;
        let p00 = 1.0 / libm::sqrt(4.0 * PI);

        // m = 0 column
        p[0] = p00;
        if lmax >= 1 {
            p[idx(1, 0)] = libm::sqrt(3.0) * x * p00;
        }
        for l in 2..=lmax {
            let (a, b) = coeffs(l, 0);
            p[idx(l, 0)] = a * (x * p[idx(l - 1, 0)] - b * p[idx(l - 2, 0)]);
        }

        // m ≥ 1 columns, carried as P̂/sin θ
        let mut qmm = 0.0;
        for m in 1..=lmax {
            let mf = m as f64;
            let c = libm::sqrt((2.0 * mf + 1.0) / (2.0 * mf));
            qmm = if m == 1 { c * p00 } else { c * sin_theta * qmm };
            q[idx(m, m)] = qmm;
            if m < lmax {
                q[idx(m + 1, m)] = libm::sqrt(2.0 * mf + 3.0) * x * qmm;
            }
            for l in (m + 2)..=lmax {
                let (a, b) = coeffs(l, m);
                q[idx(l, m)] = a * (x * q[idx(l - 1, m)] - b * q[idx(l - 2, m)]);
            }
            for l in m..=lmax {
                p[idx(l, m)] = sin_theta * q[idx(l, m)];
            }
        }
        Self {
            lmax,
            cos_theta,
            sin_theta,
            p,
            p_over_sin: q,
        }
    }

    pub fn lmax(&self) -> usize {
        self.lmax
    }

    /// `P̂_lm(cos θ)` for `0 ≤ m ≤ l`.
    pub fn p(&self, l: usize, m: usize) -> f64 {
        self.p[idx(l, m)]
    }

    /// `P̂_lm / sin θ` for `m ≥ 1` (0 for `m = 0`, where it is not needed).
    pub fn p_over_sin(&self, l: usize, m: usize) -> f64 {
        if m == 0 {
            0.0
        } else {
            self.p_over_sin[idx(l, m)]
        }
    }

    /// `d P̂_lm(cos θ) / dθ`.
    pub fn dp_dtheta(&self, l: usize, m: usize) -> f64 {
        let lf = l as f64;
        if m == 0 {
            if l == 0 {
                return 0.0;
            }
            return -libm::sqrt(lf * (lf + 1.0)) * self.sin_theta * self.p_over_sin[idx(l, 1)];
        }
        let mf = m as f64;
        let lower = if l > m {
            libm::sqrt((2.0 * lf + 1.0) / (2.0 * lf - 1.0) * (lf - mf) * (lf + mf))
                * self.p_over_sin[idx(l - 1, m)]
        } else {
            0.0
        };
        lf * self.cos_theta * self.p_over_sin[idx(l, m)] - lower
    }
}

fn coeffs(l: usize, m: usize) -> (f64, f64) {
    let (lf, mf) = (l as f64, m as f64);
    let a = libm::sqrt((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf));
    let lm1 = lf - 1.0;
    let b = libm::sqrt((lm1 * lm1 - mf * mf) / (4.0 * lm1 * lm1 - 1.0));
    (a, b)
}
