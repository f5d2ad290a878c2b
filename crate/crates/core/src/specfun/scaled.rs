use core::f64::consts::LN_2;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

/// Magnitudes below this are reported as underflow.
pub const UNDERFLOW_THRESHOLD: f64 = 1e-300;

/// A real number stored as `mantissa · 2^exp2`.
///
/// Recurrences rescale by exact powers of two, so carrying the exponent
/// separately loses no precision and keeps values like `j_l(x)` for large
/// `l` representable long after `f64` would underflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled {
    mantissa: f64,
    exp2: i32,
}

impl Scaled {
    pub const ZERO: Scaled = Scaled {
        mantissa: 0.0,
        exp2: 0,
    };

    pub fn new(mantissa: f64, exp2: i32) -> Self {
        if mantissa == 0.0 || !mantissa.is_finite() {
            return Self { mantissa, exp2: 0 };
        }
        let (m, e) = libm::frexp(mantissa);
        Self {
            mantissa: m,
            exp2: exp2 + e,
        }
    }

    pub fn from_f64(x: f64) -> Self {
        Self::new(x, 0)
    }

    pub fn mantissa(self) -> f64 {
        self.mantissa
    }

    pub fn exp2(self) -> i32 {
        self.exp2
    }

    /// Plain `f64` value (may be subnormal, zero or infinite).
    pub fn value(self) -> f64 {
        libm::scalbn(self.mantissa, self.exp2)
    }

    /// `ln |x|`; `-inf` for zero.
    pub fn ln_abs(self) -> f64 {
        if self.mantissa == 0.0 {
            return f64::NEG_INFINITY;
        }
        libm::log(libm::fabs(self.mantissa)) + self.exp2 as f64 * LN_2
    }

    /// `10 log10 |x|`, the decibel value of a power-like quantity.
    pub fn db(self) -> f64 {
        10.0 * self.ln_abs() / core::f64::consts::LN_10
    }

    pub fn is_zero(self) -> bool {
        self.mantissa == 0.0
    }

    pub fn is_underflow(self) -> bool {
        self.mantissa != 0.0 && self.ln_abs() < libm::log(UNDERFLOW_THRESHOLD)
    }

    /// Value together with an underflow flag; underflowed values read 0.0.
    pub fn checked(self) -> (f64, bool) {
        if self.is_underflow() {
            (0.0, true)
        } else {
            (self.value(), false)
        }
    }

    pub fn signum(self) -> f64 {
        if self.mantissa == 0.0 {
            0.0
        } else {
            libm::copysign(1.0, self.mantissa)
        }
    }

    pub fn abs(self) -> Self {
        Self {
            mantissa: libm::fabs(self.mantissa),
            exp2: self.exp2,
        }
    }

    pub fn sqr(self) -> Self {
        self * self
    }

    pub fn sqrt(self) -> Self {
        debug_assert!(self.mantissa >= 0.0);
        if self.exp2 % 2 == 0 {
            Self::new(libm::sqrt(self.mantissa), self.exp2 / 2)
        } else {
            Self::new(libm::sqrt(2.0 * self.mantissa), (self.exp2 - 1) / 2)
        }
    }
}

impl From<f64> for Scaled {
    fn from(x: f64) -> Self {
        Self::from_f64(x)
    }
}

impl Mul for Scaled {
    type Output = Scaled;
    fn mul(self, rhs: Scaled) -> Scaled {
        Scaled::new(self.mantissa * rhs.mantissa, self.exp2 + rhs.exp2)
    }
}

impl Mul<f64> for Scaled {
    type Output = Scaled;
    fn mul(self, rhs: f64) -> Scaled {
        Scaled::new(self.mantissa * rhs, self.exp2)
    }
}

impl Div for Scaled {
    type Output = Scaled;
    fn div(self, rhs: Scaled) -> Scaled {
        Scaled::new(self.mantissa / rhs.mantissa, self.exp2 - rhs.exp2)
    }
}

impl Add for Scaled {
    type Output = Scaled;
    fn add(self, rhs: Scaled) -> Scaled {
        if self.mantissa == 0.0 {
            return rhs;
        }
        if rhs.mantissa == 0.0 {
            return self;
        }
        let (big, small) = if self.exp2 >= rhs.exp2 {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let shifted = libm::scalbn(small.mantissa, small.exp2 - big.exp2);
        Scaled::new(big.mantissa + shifted, big.exp2)
    }
}

impl Neg for Scaled {
    type Output = Scaled;
    fn neg(self) -> Scaled {
        Scaled {
            mantissa: -self.mantissa,
            exp2: self.exp2,
        }
    }
}

impl Sub for Scaled {
    type Output = Scaled;
    fn sub(self, rhs: Scaled) -> Scaled {
        self + (-rhs)
    }
}

/// Complex counterpart of [`Scaled`], stored as independent real and
/// imaginary parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledComplex {
    pub re: Scaled,
    pub im: Scaled,
}

impl ScaledComplex {
    pub fn new(re: Scaled, im: Scaled) -> Self {
        Self { re, im }
    }

    pub fn value(self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }

    pub fn norm_sqr(self) -> Scaled {
        self.re.sqr() + self.im.sqr()
    }
}
