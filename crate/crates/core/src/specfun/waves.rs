//! Regular vector spherical waves
//!
//! ```text
//! v_1lm(kr) = j_l(kr) A_1lm(r̂)
//! v_2lm(kr) = (kr j_l(kr))'/(kr) A_2lm(r̂) + √(l(l+1)) j_l(kr)/(kr) A_3lm(r̂)
//! ```
//!
//! and their dyadic mode sum `Σ_τlm v_τlm(kr) v_τlm*(kr')`.

use alloc::vec::Vec;

use num_complex::Complex64;

use super::bessel::{RadialKind, RadialTable};
use super::geom::{CartesianVec3, ComplexVec3, Direction, Dyadic3};
use super::harmonics::HarmonicTable;
use crate::error::{domain, Result};

/// Radial amplitudes of `v_τlm` at `x = kr`: `(j_l, (x j_l)'/x, j_l/x)`.
/// At the origin the limits are taken exactly (only `l = 1` survives).
pub fn regular_radial(l: usize, x: f64) -> Result<(f64, f64, f64)> {
    if l == 0 {
        return Err(domain!("regular vector waves start at l = 1"));
    }
    if x == 0.0 {
        return Ok(if l == 1 {
            (0.0, 2.0 / 3.0, 1.0 / 3.0)
        } else {
            (0.0, 0.0, 0.0)
        });
    }
    let t = RadialTable::regular(l, x)?;
    let j = t.j(l as i32).value();
    let d = t.riccati(RadialKind::Regular, l).re.value();
    Ok((j, d, j / x))
}

fn direction_of(r: CartesianVec3) -> Result<(Direction, f64)> {
    let norm = libm::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
    if !norm.is_finite() {
        return Err(domain!("position must be finite"));
    }
    if norm == 0.0 {
        // any direction works: at the origin the surviving l = 1 field is constant
        return Ok((Direction::new(0.0, 0.0)?, 0.0));
    }
    Ok((Direction::from_cartesian(r)?, norm))
}

/// `v_τlm(k r)` in Cartesian components, `τ ∈ {1, 2}`.
pub fn regular_wave(tau: u8, l: usize, m: i32, k: f64, r: CartesianVec3) -> Result<ComplexVec3> {
    if !(1..=2).contains(&tau) {
        return Err(domain!("regular wave type must be 1 or 2, got {tau}"));
    }
    if m.unsigned_abs() as usize > l {
        return Err(domain!("|m| exceeds l"));
    }
    let set = RegularWaveSet::new(l, k, r)?;
    Ok(ComplexVec3::cartesian(*set.get(tau, l, m)))
}

/// All `v_τlm(kr)` with `τ ∈ {1,2}`, `1 ≤ l ≤ lmax`, in Cartesian components.
#[derive(Debug, Clone)]
pub struct RegularWaveSet {
    lmax: usize,
    waves: Vec<[Complex64; 3]>,
}

impl RegularWaveSet {
    pub fn new(lmax: usize, k: f64, r: CartesianVec3) -> Result<Self> {
        if !(k > 0.0) {
            return Err(domain!("wavenumber must be > 0"));
        }
        let (dir, dist) = direction_of(r)?;
        let x = k * dist;
        let table = HarmonicTable::new(lmax, dir);
        let basis = dir.basis();
        let radial = if x > 0.0 {
            Some(RadialTable::regular(lmax, x)?)
        } else {
            None
        };
        let mut waves = Vec::with_capacity(2 * (lmax + 1) * (lmax + 1));
        for l in 1..=lmax {
            let (j, d, jx) = match &radial {
                Some(t) => {
                    let j = t.j(l as i32).value();
                    (j, t.riccati(RadialKind::Regular, l).re.value(), j / x)
                }
                None => regular_radial(l, 0.0)?,
            };
            let lf = l as f64;
            let root = libm::sqrt(lf * (lf + 1.0));
            for tau in 1..=2u8 {
                for m in -(l as i32)..=l as i32 {
                    let sph = match tau {
                        1 => {
                            let [t, p] = table.tangential(1, l, m);
                            [Complex64::new(0.0, 0.0), t * j, p * j]
                        }
                        _ => {
                            let [t, p] = table.tangential(2, l, m);
                            [table.y(l, m) * (root * jx), t * d, p * d]
                        }
                    };
                    let mut cart = [Complex64::new(0.0, 0.0); 3];
                    for (c, out) in cart.iter_mut().enumerate() {
                        *out = sph[0] * basis[0][c] + sph[1] * basis[1][c] + sph[2] * basis[2][c];
                    }
                    waves.push(cart);
                }
            }
        }
        Ok(Self { lmax, waves })
    }

    pub fn lmax(&self) -> usize {
        self.lmax
    }

    fn offset(tau: u8, l: usize, m: i32) -> usize {
        // blocks of 2(2l'+1) for l' < l, then τ, then m
        let before = 2 * (l * l - 1);
        before + (tau as usize - 1) * (2 * l + 1) + (m + l as i32) as usize
    }

    pub fn get(&self, tau: u8, l: usize, m: i32) -> &[Complex64; 3] {
        &self.waves[Self::offset(tau, l, m)]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[Complex64; 3]> {
        self.waves.iter()
    }
}

/// `Σ_{τ=1,2} Σ_{l=1}^{lmax} Σ_m v_τlm(kr) v_τlm*(kr')`.
pub fn green_imag_mode_sum(k: f64, r: CartesianVec3, rp: CartesianVec3, lmax: usize) -> Result<Dyadic3> {
    let a = RegularWaveSet::new(lmax, k, r)?;
    let b = RegularWaveSet::new(lmax, k, rp)?;
    let mut d = Dyadic3::zero();
    for (va, vb) in a.iter().zip(b.iter()) {
        for i in 0..3 {
            for j in 0..3 {
                d.0[i][j] += va[i] * vb[j].conj();
            }
        }
    }
    Ok(d)
}
