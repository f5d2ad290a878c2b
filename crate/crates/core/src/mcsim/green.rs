use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::RngSpec;
use crate::emsource::SourceConfig;
use crate::error::{domain, Error, Result};
use crate::specfun::{green_imag_closed, green_imag_mode_sum, CartesianVec3};

/// Outcome of comparing the mode-sum and closed forms of the isotropic
/// covariance dyadic.
#[derive(Debug, Clone, PartialEq)]
pub struct GreenCheck {
    /// Per pair: largest entrywise deviation over the Frobenius norm of the
    /// closed form.
    pub errors: Vec<f64>,
    pub max_rel_err: f64,
}

/// `E0² Σ_{τ, l ≤ lmax, m} v_τlm(kr) v*_τlm(kr')` against
/// `E0² (1/4π)(I + ∇∇/k²) sinc(k|r − r'|)` for each pair.
///
/// Requires `e k max|r| / 2 < lmax`, beyond which the mode sum converges
/// faster than geometrically.
pub fn green_identity_check(
    config: &SourceConfig,
    lmax: usize,
    pairs: &[(CartesianVec3, CartesianVec3)],
) -> Result<GreenCheck> {
    config.validate()?;
    let norm = |v: &CartesianVec3| libm::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    let rmax = pairs.iter().flat_map(|(a, b)| [norm(a), norm(b)]).fold(0.0, f64::max);
    if !rmax.is_finite() {
        return Err(domain!("non-finite point"));
    }
    let onset = core::f64::consts::E * config.k * rmax / 2.0;
    if onset >= lmax as f64 {
        return Err(Error::Precondition(alloc::format!(
            "lmax = {lmax} too small for k|r| = {:.3} (need lmax > {onset:.2})",
            config.k * rmax
        )));
    }
    let e2 = config.e0 * config.e0;
    let mut errors = Vec::with_capacity(pairs.len());
    for (r, rp) in pairs {
        let closed = green_imag_closed(config.k, *r, *rp)?.scale(e2);
        let sum = green_imag_mode_sum(config.k, *r, *rp, lmax)?.scale(e2);
        errors.push(closed.max_abs_diff(&sum) / closed.frobenius());
    }
    let max_rel_err = errors.iter().copied().fold(0.0, f64::max);
    Ok(GreenCheck { errors, max_rel_err })
}

/// `n` pairs of points drawn uniformly from the ball `|r| ≤ radius`.
pub fn random_point_pairs(spec: RngSpec, n: usize, radius: f64) -> Vec<(CartesianVec3, CartesianVec3)> {
    let mut rng = spec.rng();
    let mut point = || {
        let mut v = [0.0f64; 3];
        let mut norm = 0.0;
        while norm == 0.0 {
            for c in &mut v {
                *c = StandardNormal.sample(&mut rng);
            }
            norm = libm::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
        }
        let u: f64 = rng.random();
        let s = radius * libm::cbrt(u) / norm;
        [v[0] * s, v[1] * s, v[2] * s]
    };
    (0..n).map(|_| (point(), point())).collect()
}
