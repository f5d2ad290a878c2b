use alloc::vec::Vec;

use num_complex::Complex64;

use super::{EmMode, SourceConfig};
use crate::error::{domain, Result};
use crate::quad::{GaussLegendre, SphereGrid};
use crate::specfun::{regular_radial, vector_harmonic, CartesianVec3, Direction, RadialTable, RadialKind, RegularWaveSet};

/// Tensor-product quadrature over the source ball: Gauss–Legendre in `r`
/// times a [`SphereGrid`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourceSampling {
    pub n_radial: usize,
    pub n_theta: usize,
    pub n_phi: usize,
}

impl SourceSampling {
    /// Exact angular integration for sources band-limited to `lmax` against
    /// waves up to `lmax`.
    pub fn for_degree(lmax: usize, n_radial: usize) -> Self {
        Self {
            n_radial,
            n_theta: lmax + 2,
            n_phi: 2 * lmax + 2,
        }
    }
}

/// Coefficients `c_τlm` of the observed field `Σ c_τlm A_τlm(r̂)` produced by
/// the current density `source` (Cartesian components):
///
/// ```text
/// c_τlm = −k² η0 f_τl ∫_{r<r0} v_τlm*(kr) · J(r) dv
/// ```
///
/// Returned in the order `l`, then `τ`, then `m = −l..=l`.
pub fn forward_project(
    config: &SourceConfig,
    lmax: usize,
    source: impl Fn(CartesianVec3) -> [Complex64; 3],
    sampling: SourceSampling,
) -> Result<Vec<(EmMode, i32, Complex64)>> {
    config.validate()?;
    if lmax < 1 || sampling.n_radial < 1 {
        return Err(domain!("forward projection needs lmax >= 1 and radial nodes"));
    }
    let gl = GaussLegendre::new(sampling.n_radial);
    let radial: Vec<(f64, f64)> = gl.on_interval(0.0, config.r0).collect();
    let grid = SphereGrid::new(sampling.n_theta, sampling.n_phi);
    let n_modes = 2 * (lmax + 1) * (lmax + 1) - 2;
    let mut acc = alloc::vec![Complex64::new(0.0, 0.0); n_modes];
    for &(r, wr) in &radial {
        for &(theta, phi, wa) in &grid.points {
            let d = Direction::new(theta, phi)?;
            let u = d.unit();
            let pos = [r * u[0], r * u[1], r * u[2]];
            let j = source(pos);
            let waves = RegularWaveSet::new(lmax, config.k, pos)?;
            let w = wr * wa * r * r;
            for (a, v) in acc.iter_mut().zip(waves.iter()) {
                *a += (v[0].conj() * j[0] + v[1].conj() * j[1] + v[2].conj() * j[2]) * w;
            }
        }
    }
    let at_r1 = RadialTable::with_outgoing(lmax, config.k * config.r1)?;
    let pre = -config.k * config.k * config.eta0;
    let mut out = Vec::with_capacity(n_modes);
    let mut it = acc.into_iter();
    for l in 1..=lmax {
        for tau in 1..=2u8 {
            let f = match tau {
                1 => at_r1.h(l),
                _ => at_r1.riccati(RadialKind::Outgoing, l),
            }
            .value();
            for m in -(l as i32)..=l as i32 {
                let a = it.next().expect("wave set size");
                out.push((EmMode { tau, l }, m, a * f * pre));
            }
        }
    }
    Ok(out)
}

/// `J(r) = w(r) (−b(r) A_2lm(r̂) + a(r) A_3lm(r̂))` where
/// `v_2lm(kr) = a(r) A_2lm + b(r) A_3lm`: a source in the null space of the
/// forward operator for any radial weight `w`.
pub fn nonradiating_source(
    k: f64,
    l: usize,
    m: i32,
    weight: impl Fn(f64) -> f64,
) -> impl Fn(CartesianVec3) -> [Complex64; 3] {
    move |pos: CartesianVec3| {
        let r = libm::sqrt(pos[0] * pos[0] + pos[1] * pos[1] + pos[2] * pos[2]);
        let zero = [Complex64::new(0.0, 0.0); 3];
        let Ok(d) = Direction::from_cartesian(pos) else {
            return zero;
        };
        let Ok((_, a, j_over_x)) = regular_radial(l, k * r) else {
            return zero;
        };
        let b = libm::sqrt((l * (l + 1)) as f64) * j_over_x;
        let (Ok(a2), Ok(a3)) = (vector_harmonic(2, l, m, &d), vector_harmonic(3, l, m, &d)) else {
            return zero;
        };
        let w = weight(r);
        let field = a2 * Complex64::new(-b * w, 0.0);
        let field = field.try_add(&(a3 * Complex64::new(a * w, 0.0))).expect("same frame");
        field.to_cartesian().c
    }
}
