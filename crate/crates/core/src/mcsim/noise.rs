use alloc::vec::Vec;

use num_complex::Complex64;
use rand::Rng;

use super::stats::TrialIndex;
use super::{complex_gaussian, RngSpec};
use crate::emsource::{mode_table, SourceConfig};
use crate::error::{domain, Result};
use crate::specfun::{CartesianVec3, Direction, HarmonicTable};

/// One plane wave `E e^{ik k̂·r}` with polarization components along the
/// spherical unit vectors `ê_θ(k̂)`, `ê_φ(k̂)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneWave {
    pub dir: Direction,
    pub amp: [Complex64; 2],
}

impl PlaneWave {
    /// Polarization vector in Cartesian components.
    pub fn field(&self) -> [Complex64; 3] {
        let [_, et, ep] = self.dir.basis();
        core::array::from_fn(|i| self.amp[0] * et[i] + self.amp[1] * ep[i])
    }

    /// The same wave after applying the rotation matrix `rot` to space.
    pub fn rotated(&self, rot: &[[f64; 3]; 3]) -> Result<Self> {
        let apply = |v: CartesianVec3| -> CartesianVec3 {
            core::array::from_fn(|i| rot[i][0] * v[0] + rot[i][1] * v[1] + rot[i][2] * v[2])
        };
        let dir = Direction::from_cartesian(apply(self.dir.unit()))?;
        let e = self.field();
        let re = apply([e[0].re, e[1].re, e[2].re]);
        let im = apply([e[0].im, e[1].im, e[2].im]);
        let [_, et, ep] = dir.basis();
        let proj = |b: CartesianVec3| {
            Complex64::new(
                re[0] * b[0] + re[1] * b[1] + re[2] * b[2],
                im[0] * b[0] + im[1] * b[1] + im[2] * b[2],
            )
        };
        Ok(Self {
            dir,
            amp: [proj(et), proj(ep)],
        })
    }
}

/// `n` directions uniform on the sphere with independent circular Gaussian
/// amplitudes of variance `variance` per polarization.
pub fn sample_plane_waves<R: Rng + ?Sized>(rng: &mut R, n: usize, variance: f64) -> Result<Vec<PlaneWave>> {
    (0..n)
        .map(|_| {
            let z = 2.0 * rng.random::<f64>() - 1.0;
            let phi = core::f64::consts::TAU * rng.random::<f64>();
            let dir = Direction::new(libm::acos(z), phi)?;
            let amp = [complex_gaussian(rng, variance), complex_gaussian(rng, variance)];
            Ok(PlaneWave { dir, amp })
        })
        .collect()
}

/// Position of `(τ, l, m)` in coefficient vectors: by `l`, then `τ`, then `m`.
pub fn mode_index(tau: u8, l: usize, m: i32) -> usize {
    2 * (l * l - 1) + (tau as usize - 1) * (2 * l + 1) + (m + l as i32) as usize
}

/// All `(τ, l, m)` with `1 ≤ l ≤ lmax` in [`mode_index`] order.
pub fn modes(lmax: usize) -> Vec<TrialIndex> {
    let mut out = Vec::with_capacity(2 * (lmax + 1) * (lmax + 1) - 2);
    for l in 1..=lmax {
        for tau in 1..=2u8 {
            for m in -(l as i32)..=l as i32 {
                out.push(TrialIndex::Mode { tau, l, m });
            }
        }
    }
    out
}

fn i_pow(n: i64) -> Complex64 {
    match n.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Regular-wave coefficients `c_τlm = Σ_k i^{l−τ−1} A*_τlm(k̂_k)·E_k` of a
/// plane-wave superposition, so that `Σ_k E_k e^{ik k̂_k·r} = Σ c_τlm v_τlm(kr)`.
///
/// The second vector holds `Σ_k |i^{l−τ−1} A*_τlm(k̂_k)·E_k|²`, the power
/// resolved by direction.
pub fn isotropic_coeffs(waves: &[PlaneWave], lmax: usize) -> (Vec<Complex64>, Vec<f64>) {
    let n = 2 * (lmax + 1) * (lmax + 1) - 2;
    let mut coeffs = alloc::vec![Complex64::new(0.0, 0.0); n];
    let mut power = alloc::vec![0.0; n];
    for w in waves {
        let table = HarmonicTable::new(lmax, w.dir);
        let mut idx = 0;
        for l in 1..=lmax {
            for tau in 1..=2u8 {
                let phase = i_pow(l as i64 - tau as i64 - 1);
                for m in -(l as i32)..=l as i32 {
                    let a = table.tangential(tau, l, m);
                    let term = phase * (a[0].conj() * w.amp[0] + a[1].conj() * w.amp[1]);
                    coeffs[idx] += term;
                    power[idx] += term.norm_sqr();
                    idx += 1;
                }
            }
        }
    }
    (coeffs, power)
}

/// One realization of the observed noise coefficients `N_τlm` against the
/// unit-norm eigenvectors `A_τlm/r1`.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseRealization {
    pub coeffs: Vec<Complex64>,
    /// Unbiased single-realization estimate of `Var(N_τlm)` from the
    /// independent per-direction (and white) contributions.
    pub resolved_power: Vec<f64>,
}

impl NoiseRealization {
    /// Coefficients divided by `√λ`.
    pub fn whitened(&self, targets: &[f64]) -> Vec<Complex64> {
        self.coeffs.iter().zip(targets).map(|(c, t)| c / libm::sqrt(*t)).collect()
    }
}

/// Discretized isotropic noise for one configuration: `K` random plane waves
/// with amplitude variance `E0² 4π/K` per polarization, observed on the
/// sphere `r1` as `N_τlm = r1 g_τl c_τlm`, plus white noise of variance
/// `σ_w²` per mode.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseModel {
    pub lmax: usize,
    pub n_directions: usize,
    pub amplitude_variance: f64,
    pub sigma_w2: f64,
    /// `r1 g_τl` per coefficient.
    pub scale: Vec<f64>,
    /// `λ_τl` per coefficient.
    pub targets: Vec<f64>,
}

impl NoiseModel {
    pub fn new(config: &SourceConfig, lmax: usize, n_directions: usize) -> Result<Self> {
        if n_directions < 1 || lmax < 1 {
            return Err(domain!("need at least one direction and lmax >= 1"));
        }
        let table = mode_table(&config.with_lmax(lmax))?;
        let (mut scale, mut targets) = (Vec::new(), Vec::new());
        for row in &table.rows {
            for _ in 0..row.mode.multiplicity() {
                scale.push(config.r1 * row.g.value());
                targets.push(row.lambda_total.value());
            }
        }
        Ok(Self {
            lmax,
            n_directions,
            amplitude_variance: config.e0 * config.e0 * 4.0 * core::f64::consts::PI / n_directions as f64,
            sigma_w2: table.sigma_w2,
            scale,
            targets,
        })
    }

    pub fn indices(&self) -> Vec<TrialIndex> {
        modes(self.lmax)
    }

    /// Observed coefficients for given plane waves; white noise is drawn
    /// from `rng`.
    pub fn observe<R: Rng + ?Sized>(&self, waves: &[PlaneWave], rng: &mut R) -> NoiseRealization {
        let (mut coeffs, mut power) = isotropic_coeffs(waves, self.lmax);
        for ((c, p), s) in coeffs.iter_mut().zip(&mut power).zip(&self.scale) {
            *c *= *s;
            *p *= s * s;
        }
        if self.sigma_w2 > 0.0 {
            for (c, p) in coeffs.iter_mut().zip(&mut power) {
                let w = complex_gaussian(rng, self.sigma_w2);
                *c += w;
                *p += w.norm_sqr();
            }
        }
        NoiseRealization {
            coeffs,
            resolved_power: power,
        }
    }

    pub fn sample(&self, spec: RngSpec) -> Result<NoiseRealization> {
        let mut rng = spec.rng();
        let waves = sample_plane_waves(&mut rng, self.n_directions, self.amplitude_variance)?;
        Ok(self.observe(&waves, &mut rng))
    }
}

/// One realization of the observed isotropic (plus white) noise for modes
/// `l ≤ lmax`, in [`mode_index`] order.
pub fn sample_isotropic_coeffs(
    config: &SourceConfig,
    lmax: usize,
    n_directions: usize,
    spec: RngSpec,
) -> Result<NoiseRealization> {
    NoiseModel::new(config, lmax, n_directions)?.sample(spec)
}
