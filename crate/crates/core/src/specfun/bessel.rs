//! Spherical Bessel and Hankel functions of real positive argument.
//!
//! `j_l` comes from Miller's downward recurrence (upward recurrence is
//! unstable for the minimal solution), normalized against the closed form of
//! `j_0` or `j_1`, whichever is larger. `y_l` and hence `h_l^(1) = j_l + i y_l`
//! use upward recurrence, which is stable for the dominant solution. Both
//! recurrences rescale by powers of two and return [`Scaled`] values.

use alloc::vec::Vec;

use num_complex::Complex64;

use super::scaled::{Scaled, ScaledComplex};
use crate::error::{domain, Result};

const RESCALE_LIMIT: f64 = 3.273_390_607_896_142e150; // 2^500
const RESCALE_EXP: i32 = 500;

/// Which radial function enters a Riccati-type factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadialKind {
    /// `j_l`, regular at the origin.
    Regular,
    /// `h_l^(1)`, outgoing for the `e^{-iωt}` time convention.
    Outgoing,
}

fn check_arg(x: f64) -> Result<()> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain!("spherical Bessel argument must be finite and > 0, got {x}"));
    }
    Ok(())
}

/// `j_0(x)` closed form.
fn j0(x: f64) -> f64 {
    libm::sin(x) / x
}

/// `j_1(x)`; power series below 1 where the closed form cancels.
fn j1(x: f64) -> f64 {
    if x < 1.0 {
        let x2 = x * x;
        let mut term = x / 3.0;
        let mut sum = term;
        let mut k = 1.0;
        loop {
            term *= -x2 / (2.0 * k * (2.0 * k + 3.0));
            sum += term;
            if libm::fabs(term) < 1e-18 * libm::fabs(sum) {
                break;
            }
            k += 1.0;
        }
        sum
    } else {
        (libm::sin(x) / x - libm::cos(x)) / x
    }
}

/// `j_{-1}(x) = cos x / x`, the order that seeds the `l = 0` Lommel norm.
pub fn sph_bessel_j_minus1(x: f64) -> Result<f64> {
    check_arg(x)?;
    Ok(libm::cos(x) / x)
}

/// `j_0(x) ..= j_lmax(x)`.
pub fn sph_bessel_j_seq(lmax: usize, x: f64) -> Result<Vec<Scaled>> {
    check_arg(x)?;
    let top = lmax.max(1);
    let big = (top as f64).max(x);
    let start = top.max((big + 20.0 + libm::sqrt(40.0 * big)) as usize) + 1;

    // f_{n+1}, f_n; stored[n] = (mantissa, exponent) of f_n
    let mut hi = 0.0;
    let mut cur = 1.0;
    let mut exp = 0i32;
    let mut stored = alloc::vec![(0.0f64, 0i32); top + 1];
    let mut n = start;
    loop {
        if n <= top {
            stored[n] = (cur, exp);
        }
        if n == 0 {
            break;
        }
        let next = (2 * n + 1) as f64 / x * cur - hi;
        hi = cur;
        cur = next;
        n -= 1;
        if libm::fabs(cur) > RESCALE_LIMIT {
            cur = libm::scalbn(cur, -RESCALE_EXP);
            hi = libm::scalbn(hi, -RESCALE_EXP);
            exp += RESCALE_EXP;
        }
    }

    let (r0, r1) = (j0(x), j1(x));
    let (p, jp) = if x < 1.0 || libm::fabs(r0) >= libm::fabs(r1) {
        (0, r0)
    } else {
        (1, r1)
    };
    let (mp, ep) = stored[p];
    let norm = jp / mp;
    let mut out: Vec<Scaled> = stored
        .iter()
        .map(|&(m, e)| Scaled::new(m * norm, e - ep))
        .collect();
    out.truncate(lmax + 1);
    Ok(out)
}

/// `y_0(x) ..= y_lmax(x)` by upward recurrence.
pub fn sph_bessel_y_seq(lmax: usize, x: f64) -> Result<Vec<Scaled>> {
    check_arg(x)?;
    let (s, c) = (libm::sin(x), libm::cos(x));
    let y0 = -c / x;
    let y1 = -c / (x * x) - s / x;
    let mut out = Vec::with_capacity(lmax + 1);
    out.push(Scaled::from_f64(y0));
    if lmax == 0 {
        return Ok(out);
    }
    out.push(Scaled::from_f64(y1));
    let (mut lo, mut cur, mut exp) = (y0, y1, 0i32);
    for n in 1..lmax {
        let next = (2 * n + 1) as f64 / x * cur - lo;
        lo = cur;
        cur = next;
        if libm::fabs(cur) > RESCALE_LIMIT {
            cur = libm::scalbn(cur, -RESCALE_EXP);
            lo = libm::scalbn(lo, -RESCALE_EXP);
            exp += RESCALE_EXP;
        }
        out.push(Scaled::new(cur, exp));
    }
    Ok(out)
}

/// `j_l(x)` as a [`Scaled`] value; `l = -1` gives `cos x / x`.
pub fn sph_bessel_j_scaled(l: i32, x: f64) -> Result<Scaled> {
    if l < -1 {
        return Err(domain!("spherical Bessel order must be >= -1, got {l}"));
    }
    if l == -1 {
        return sph_bessel_j_minus1(x).map(Scaled::from_f64);
    }
    let seq = sph_bessel_j_seq(l as usize, x)?;
    Ok(seq[l as usize])
}

/// `j_l(x)` for `l ≥ -1`, `x > 0`. Values below
/// [`UNDERFLOW_THRESHOLD`](super::UNDERFLOW_THRESHOLD) read as 0.0; use
/// [`sph_bessel_j_checked`] to see the flag.
pub fn sph_bessel_j(l: i32, x: f64) -> Result<f64> {
    sph_bessel_j_checked(l, x).map(|(v, _)| v)
}

/// `j_l(x)` and whether it underflowed.
pub fn sph_bessel_j_checked(l: i32, x: f64) -> Result<(f64, bool)> {
    sph_bessel_j_scaled(l, x).map(Scaled::checked)
}

/// `y_l(x)`, the spherical Neumann function.
pub fn sph_bessel_y(l: usize, x: f64) -> Result<f64> {
    Ok(sph_bessel_y_seq(l, x)?[l].value())
}

/// `h_l^(1)(x) = j_l(x) + i y_l(x)`.
pub fn sph_hankel1(l: usize, x: f64) -> Result<Complex64> {
    Ok(sph_hankel1_scaled(l, x)?.value())
}

pub fn sph_hankel1_scaled(l: usize, x: f64) -> Result<ScaledComplex> {
    let j = sph_bessel_j_seq(l, x)?;
    let y = sph_bessel_y_seq(l, x)?;
    Ok(ScaledComplex::new(j[l], y[l]))
}

/// All radial functions needed for orders `0..=lmax` at one argument.
#[derive(Debug, Clone)]
pub struct RadialTable {
    x: f64,
    j_minus1: f64,
    j: Vec<Scaled>,
    y: Option<Vec<Scaled>>,
}

impl RadialTable {
    /// Regular functions only.
    pub fn regular(lmax: usize, x: f64) -> Result<Self> {
        Ok(Self {
            x,
            j_minus1: sph_bessel_j_minus1(x)?,
            j: sph_bessel_j_seq(lmax, x)?,
            y: None,
        })
    }

    /// Regular and outgoing functions.
    pub fn with_outgoing(lmax: usize, x: f64) -> Result<Self> {
        let mut t = Self::regular(lmax, x)?;
        t.y = Some(sph_bessel_y_seq(lmax, x)?);
        Ok(t)
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn lmax(&self) -> usize {
        self.j.len() - 1
    }

    /// `j_l` for `-1 ≤ l ≤ lmax`.
    pub fn j(&self, l: i32) -> Scaled {
        if l < 0 {
            Scaled::from_f64(self.j_minus1)
        } else {
            self.j[l as usize]
        }
    }

    fn y_seq(&self) -> &[Scaled] {
        self.y
            .as_deref()
            .expect("radial table built without outgoing functions")
    }

    pub fn h(&self, l: usize) -> ScaledComplex {
        ScaledComplex::new(self.j[l], self.y_seq()[l])
    }

    /// `(x z_l(x))' / x = z_{l-1}(x) - (l/x) z_l(x)` for `l ≥ 1`.
    pub fn riccati(&self, kind: RadialKind, l: usize) -> ScaledComplex {
        let c = l as f64 / self.x;
        let re = self.j(l as i32 - 1) - self.j[l] * c;
        let im = match kind {
            RadialKind::Regular => Scaled::ZERO,
            RadialKind::Outgoing => {
                let y = self.y_seq();
                y[l - 1] - y[l] * c
            }
        };
        ScaledComplex::new(re, im)
    }
}

/// `(x z_l(x))'/x` with `z = j_l` or `h_l^(1)`, for `l ≥ 1`.
pub fn riccati_factor(kind: RadialKind, l: usize, x: f64) -> Result<Complex64> {
    Ok(riccati_factor_scaled(kind, l, x)?.value())
}

pub fn riccati_factor_scaled(kind: RadialKind, l: usize, x: f64) -> Result<ScaledComplex> {
    if l < 1 {
        return Err(domain!("Riccati factor needs l >= 1, got {l}"));
    }
    let table = match kind {
        RadialKind::Regular => RadialTable::regular(l, x)?,
        RadialKind::Outgoing => RadialTable::with_outgoing(l, x)?,
    };
    Ok(table.riccati(kind, l))
}
