use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::Scalar;
use crate::error::{Error, Result};

/// Complex double tagged with its grid index.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FloatScalar {
    k: u32,
    pub value: Complex64,
}

impl FloatScalar {
    pub fn new(k: u32, value: Complex64) -> Self {
        FloatScalar { k, value }
    }
}

impl Scalar for FloatScalar {
    fn from_i64(k: u32, n: i64) -> Self {
        FloatScalar::new(k, Complex64::new(n as f64, 0.0))
    }

    fn zeta(k: u32, j: i64) -> Self {
        let order = 8 * k as i64;
        let t = j.rem_euclid(order);
        // exact values on the axes keep the Clifford constants clean
        let value = if (4 * t) % order == 0 {
            match (4 * t) / order {
                0 => Complex64::new(1.0, 0.0),
                1 => Complex64::new(0.0, 1.0),
                2 => Complex64::new(-1.0, 0.0),
                _ => Complex64::new(0.0, -1.0),
            }
        } else {
            Complex64::from_polar(1.0, std::f64::consts::PI * t as f64 / (4 * k) as f64)
        };
        FloatScalar::new(k, value)
    }

    fn is_zero(&self) -> bool {
        self.value == Complex64::new(0.0, 0.0)
    }

    fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Arithmetic("division by zero".into()));
        }
        let v = self.value.inv();
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::Arithmetic(format!("inverse of {} is not finite", self.value)));
        }
        Ok(FloatScalar::new(self.k, v))
    }

    fn to_complex(&self) -> Complex64 {
        self.value
    }

    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let scale = 1.0f64.max(self.value.norm()).max(other.value.norm());
        (self.value - other.value).norm() <= tol * scale
    }

    fn grid(&self) -> u32 {
        self.k
    }
}

macro_rules! binop {
    ($tr:ident, $f:ident, $op:tt) => {
        impl $tr for FloatScalar {
            type Output = FloatScalar;
            fn $f(self, rhs: FloatScalar) -> FloatScalar {
                FloatScalar::new(self.k, self.value $op rhs.value)
            }
        }
        impl<'a> $tr<&'a FloatScalar> for FloatScalar {
            type Output = FloatScalar;
            fn $f(self, rhs: &'a FloatScalar) -> FloatScalar {
                FloatScalar::new(self.k, self.value $op rhs.value)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl Neg for FloatScalar {
    type Output = FloatScalar;
    fn neg(self) -> FloatScalar {
        FloatScalar::new(self.k, -self.value)
    }
}

/// `re+im i` with 15 significant digits.
impl fmt::Display for FloatScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_complex(self.value))
    }
}

/// Shortest round-trip decimal form. Components below `1e-12 |z|` are
/// printed as zero; a zero imaginary part is omitted.
pub fn format_complex(z: Complex64) -> String {
    let cut = 1e-12 * z.norm();
    let clean = |x: f64| if x.abs() < cut { 0.0 } else { x };
    let (re, im) = (clean(z.re), clean(z.im));
    match (re == 0.0, im == 0.0) {
        (_, true) => format_real(re),
        (true, false) => format!("{}i", format_real(im)),
        (false, false) if im < 0.0 => format!("{}{}i", format_real(re), format_real(im)),
        (false, false) => format!("{}+{}i", format_real(re), format_real(im)),
    }
}

fn format_real(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if (1e-5..1e15).contains(&x.abs()) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}
