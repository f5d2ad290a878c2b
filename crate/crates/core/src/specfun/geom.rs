use core::f64::consts::PI;
use core::ops::{Add, Mul};

use num_complex::Complex64;

use crate::error::{domain, Result};

/// Cartesian point or real vector.
pub type CartesianVec3 = [f64; 3];

/// A direction on the unit sphere, `θ ∈ [0, π]`, `φ ∈ [0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction {
    theta: f64,
    phi: f64,
}

impl Direction {
    /// Validates `θ` and wraps `φ` into `[0, 2π)`.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !phi.is_finite() {
            return Err(domain!("direction angles must be finite"));
        }
        if !(0.0..=PI).contains(&theta) {
            return Err(domain!("polar angle {theta} outside [0, π]"));
        }
        let mut phi = libm::fmod(phi, 2.0 * PI);
        if phi < 0.0 {
            phi += 2.0 * PI;
        }
        if phi >= 2.0 * PI {
            phi = 0.0;
        }
        Ok(Self { theta, phi })
    }

    /// Direction of a nonzero Cartesian vector.
    pub fn from_cartesian(v: CartesianVec3) -> Result<Self> {
        let rho = libm::hypot(v[0], v[1]);
        if rho == 0.0 && v[2] == 0.0 {
            return Err(domain!("zero vector has no direction"));
        }
        Self::new(libm::atan2(rho, v[2]), libm::atan2(v[1], v[0]))
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// `(r̂, θ̂, φ̂)` expressed in Cartesian components.
    pub fn basis(&self) -> [CartesianVec3; 3] {
        let (st, ct) = libm::sincos(self.theta);
        let (sp, cp) = libm::sincos(self.phi);
        [
            [st * cp, st * sp, ct],
            [ct * cp, ct * sp, -st],
            [-sp, cp, 0.0],
        ]
    }

    pub fn unit(&self) -> CartesianVec3 {
        self.basis()[0]
    }
}

/// Coordinate frame of a [`ComplexVec3`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Frame {
    Cartesian,
    /// Components along `(r̂, θ̂, φ̂)` at the given direction.
    Spherical(Direction),
}

/// Complex 3-vector tagged with its frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexVec3 {
    pub frame: Frame,
    pub c: [Complex64; 3],
}

impl ComplexVec3 {
    pub fn cartesian(c: [Complex64; 3]) -> Self {
        Self {
            frame: Frame::Cartesian,
            c,
        }
    }

    pub fn spherical(dir: Direction, c: [Complex64; 3]) -> Self {
        Self {
            frame: Frame::Spherical(dir),
            c,
        }
    }

    pub fn zero(frame: Frame) -> Self {
        Self {
            frame,
            c: [Complex64::new(0.0, 0.0); 3],
        }
    }

    pub fn to_cartesian(&self) -> Self {
        match self.frame {
            Frame::Cartesian => *self,
            Frame::Spherical(dir) => {
                let b = dir.basis();
                let mut out = [Complex64::new(0.0, 0.0); 3];
                for (k, o) in out.iter_mut().enumerate() {
                    *o = self.c[0] * b[0][k] + self.c[1] * b[1][k] + self.c[2] * b[2][k];
                }
                Self::cartesian(out)
            }
        }
    }

    /// `u* · v`; both operands must share a frame.
    pub fn dot_conj(&self, other: &Self) -> Result<Complex64> {
        self.same_frame(other)?;
        Ok(self
            .c
            .iter()
            .zip(&other.c)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.c.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.c.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_frame(other)?;
        let mut c = self.c;
        for (a, b) in c.iter_mut().zip(&other.c) {
            *a += b;
        }
        Ok(Self { frame: self.frame, c })
    }

    pub fn conj(&self) -> Self {
        Self {
            frame: self.frame,
            c: self.c.map(|z| z.conj()),
        }
    }

    fn same_frame(&self, other: &Self) -> Result<()> {
        if self.frame != other.frame {
            return Err(domain!("vector frames differ: {:?} vs {:?}", self.frame, other.frame));
        }
        Ok(())
    }
}

impl Mul<Complex64> for ComplexVec3 {
    type Output = ComplexVec3;
    fn mul(self, s: Complex64) -> ComplexVec3 {
        ComplexVec3 {
            frame: self.frame,
            c: self.c.map(|z| z * s),
        }
    }
}

/// 3×3 complex dyadic in the Cartesian frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dyadic3(pub [[Complex64; 3]; 3]);

impl Dyadic3 {
    pub fn zero() -> Self {
        Self([[Complex64::new(0.0, 0.0); 3]; 3])
    }

    pub fn identity() -> Self {
        let mut d = Self::zero();
        for i in 0..3 {
            d.0[i][i] = Complex64::new(1.0, 0.0);
        }
        d
    }

    /// Outer product `a b*` of two Cartesian vectors.
    pub fn outer_conj(a: &[Complex64; 3], b: &[Complex64; 3]) -> Self {
        let mut d = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                d.0[i][j] = a[i] * b[j].conj();
            }
        }
        d
    }

    pub fn frobenius(&self) -> f64 {
        libm::sqrt(self.0.iter().flatten().map(|z| z.norm_sqr()).sum())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn transpose(&self) -> Self {
        let mut d = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                d.0[i][j] = self.0[j][i];
            }
        }
        d
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut d = *self;
        d.0.iter_mut().flatten().for_each(|z| *z *= s);
        d
    }

    pub fn is_finite(&self) -> bool {
        self.0
            .iter()
            .flatten()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl Add for Dyadic3 {
    type Output = Dyadic3;
    fn add(mut self, rhs: Dyadic3) -> Dyadic3 {
        for (a, b) in self.0.iter_mut().flatten().zip(rhs.0.iter().flatten()) {
            *a += b;
        }
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn direction_normalizes_azimuth() {
        let d = Direction::new(1.0, -0.5).unwrap();
        assert!((d.phi() - (2.0 * PI - 0.5)).abs() < 1e-15);
        let d = Direction::new(1.0, 7.0).unwrap();
        assert!((d.phi() - (7.0 - 2.0 * PI)).abs() < 1e-15);
        assert!(Direction::new(-0.1, 0.0).is_err());
        assert!(Direction::new(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn basis_is_orthonormal_and_right_handed() {
        let d = Direction::new(0.7, 2.3).unwrap();
        let [r, t, p] = d.basis();
        let dot = |a: [f64; 3], b: [f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
        assert!((dot(r, r) - 1.0).abs() < 1e-15);
        assert!(dot(r, t).abs() < 1e-15 && dot(t, p).abs() < 1e-15);
        // r̂ × θ̂ = φ̂
        let cross = [
            r[1] * t[2] - r[2] * t[1],
            r[2] * t[0] - r[0] * t[2],
            r[0] * t[1] - r[1] * t[0],
        ];
        for k in 0..3 {
            assert!((cross[k] - p[k]).abs() < 1e-15);
        }
        let back = Direction::from_cartesian([2.0 * r[0], 2.0 * r[1], 2.0 * r[2]]).unwrap();
        assert!((back.theta() - 0.7).abs() < 1e-14 && (back.phi() - 2.3).abs() < 1e-14);
    }

    #[test]
    fn frames_must_match() {
        let d = Direction::new(0.3, 0.1).unwrap();
        let a = ComplexVec3::spherical(d, [Complex64::new(1.0, 0.0); 3]);
        let b = ComplexVec3::cartesian([Complex64::new(1.0, 0.0); 3]);
        assert!(a.dot_conj(&b).is_err());
        let ac = a.to_cartesian();
        assert!((ac.norm_sqr() - a.norm_sqr()).abs() < 1e-14);
    }
}
