//! Imaginary part of the free-space Green's dyadic in closed form,
//!
//! ```text
//! (1/k) Im G_e(k, r, r') = (1/4π) (I + k⁻² ∇∇) sin(kR)/(kR),   R = |r − r'|
//!                        = (1/4π) [ (S + S'/u) I + (S'' − S'/u) R̂R̂ ]
//! ```
//!
//! with `S(u) = sin u / u`, `u = kR`. The sinc derivatives are written out
//! directly and switch to their Taylor series for small `u`; nothing here
//! goes through the spherical Bessel code, so it can serve as an independent
//! check of the vector-wave mode sum.

use core::f64::consts::PI;

use num_complex::Complex64;

use super::geom::{CartesianVec3, Dyadic3};
use crate::error::{domain, Result};

const SERIES_BELOW: f64 = 1.0;

/// `(S + S'/u, S'' − S'/u)` for `S(u) = sin u / u`.
fn sinc_terms(u: f64) -> (f64, f64) {
    if u < SERIES_BELOW {
        //   S     = Σ (-1)^n u^{2n} / (2n+1)!
        //   S'/u  = Σ_{n≥1} (-1)^n 2n u^{2n-2} / (2n+1)!
        //   S''   = Σ_{n≥1} (-1)^n 2n(2n-1) u^{2n-2} / (2n+1)!
        let u2 = u * u;
        let mut s = 0.0;
        let mut sp_u = 0.0;
        let mut b = 0.0;
        let mut fact = 1.0; // (2n+1)!
        let mut pow = 1.0; // u^{2n}
        let mut pow_lo = 1.0 / u2; // u^{2n-2}
        for n in 0..30 {
            let nf = n as f64;
            if n > 0 {
                fact *= (2.0 * nf) * (2.0 * nf + 1.0);
                pow *= u2;
            }
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            s += sign * pow / fact;
            if n >= 1 {
                pow_lo = if n == 1 { 1.0 } else { pow_lo * u2 };
                sp_u += sign * 2.0 * nf * pow_lo / fact;
                if n >= 2 {
                    b += sign * 2.0 * nf * (2.0 * nf - 2.0) * pow_lo / fact;
                }
            }
            if n > 2 && pow / fact < 1e-18 {
                break;
            }
        }
        (s + sp_u, b)
    } else {
        let (sn, cs) = libm::sincos(u);
        let u2 = u * u;
        let u3 = u2 * u;
        let s = sn / u;
        let sp_u = (u * cs - sn) / u3;
        let spp = ((2.0 - u2) * sn - 2.0 * u * cs) / u3;
        (s + sp_u, spp - sp_u)
    }
}

/// `(1/k) Im G_e(k, r, r')`, real and symmetric; `(1/6π) I` at `r = r'`.
pub fn green_imag_closed(k: f64, r: CartesianVec3, rp: CartesianVec3) -> Result<Dyadic3> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(domain!("wavenumber must be finite and > 0"));
    }
    if r.iter().chain(rp.iter()).any(|c| !c.is_finite()) {
        return Err(domain!("positions must be finite"));
    }
    let dv = [r[0] - rp[0], r[1] - rp[1], r[2] - rp[2]];
    let dist = libm::sqrt(dv[0] * dv[0] + dv[1] * dv[1] + dv[2] * dv[2]);
    let (a, b) = sinc_terms(k * dist);
    let hat = if dist > 0.0 {
        [dv[0] / dist, dv[1] / dist, dv[2] / dist]
    } else {
        [0.0; 3]
    };
    let mut d = Dyadic3::zero();
    for i in 0..3 {
        for j in 0..3 {
            let delta = if i == j { 1.0 } else { 0.0 };
            d.0[i][j] = Complex64::new((a * delta + b * hat[i] * hat[j]) / (4.0 * PI), 0.0);
        }
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coincident_points() {
        let d = green_imag_closed(3.0, [0.1, 0.2, 0.3], [0.1, 0.2, 0.3]).unwrap();
        let expect = Dyadic3::identity().scale(1.0 / (6.0 * PI));
        assert!(d.max_abs_diff(&expect) < 1e-16);
    }

    #[test]
    fn series_and_closed_form_agree_at_switch() {
        let below = sinc_terms(SERIES_BELOW * (1.0 - 1e-12));
        // evaluate the closed form just above the switch point
        let u = SERIES_BELOW * (1.0 + 1e-12);
        let above = sinc_terms(u);
        assert!((below.0 - above.0).abs() < 1e-12);
        assert!((below.1 - above.1).abs() < 1e-12);
    }

    #[test]
    fn known_values_via_spherical_bessel_identities() {
        // S + S'/u = (2 j0 − j2)/3 and S'' − S'/u = j2
        for &u in &[0.05, 0.7, 2.0, 9.3] {
            let (a, b) = sinc_terms(u);
            let (s, c) = (u.sin(), u.cos());
            let j0 = s / u;
            let j2 = (3.0 / (u * u) - 1.0) * s / u - 3.0 * c / (u * u);
            let tol = if u < 0.1 { 1e-9 } else { 1e-13 };
            assert!((a - (2.0 * j0 - j2) / 3.0).abs() < tol, "u={u}");
            assert!((b - j2).abs() < tol, "u={u}");
        }
    }

    #[test]
    fn symmetric_and_real() {
        let r = [0.3, -0.4, 0.1];
        let rp = [-0.2, 0.25, 0.6];
        let a = green_imag_closed(4.0, r, rp).unwrap();
        let b = green_imag_closed(4.0, rp, r).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-16);
        assert!(a.max_abs_diff(&a.transpose()) < 1e-16);
        assert!(a.0.iter().flatten().all(|z| z.im == 0.0));
    }
}
