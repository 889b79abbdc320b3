//! Scalars for Tutte values and amplitudes at the quantum points
//! `x = -i cot(pi/4k)`, `y = e^{i pi/2k}`.
//!
//! Two backends implement [`Scalar`]: [`CycloScalar`], exact arithmetic in the
//! cyclotomic field generated by `zeta = e^{i pi/4k}`, and [`FloatScalar`], a
//! complex double. Both are parameterised by the grid index `k`.

mod cyclo;
mod float;

use std::fmt::{Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::Result;

pub use cyclo::CycloScalar;
pub use float::FloatScalar;

pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
    fn from_i64(k: u32, n: i64) -> Self;

    /// `zeta^j = e^{i pi j / 4k}`.
    fn zeta(k: u32, j: i64) -> Self;

    fn is_zero(&self) -> bool;

    fn inv(&self) -> Result<Self>;

    fn to_complex(&self) -> Complex64;

    /// Equality for the exact backend, closeness within `tol` (absolute, or
    /// relative for large magnitudes) for floats.
    fn approx_eq(&self, other: &Self, tol: f64) -> bool;

    fn zero(k: u32) -> Self {
        Self::from_i64(k, 0)
    }

    fn one(k: u32) -> Self {
        Self::from_i64(k, 1)
    }

    fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.clone() * &other.inv()?)
    }

    /// Integer power; negative exponents invert first.
    fn pow(&self, e: i64) -> Result<Self> {
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut n = e.unsigned_abs();
        let mut acc: Option<Self> = None;
        while n > 0 {
            if n & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a * &base,
                });
            }
            n >>= 1;
            if n > 0 {
                base = base.clone() * &base;
            }
        }
        Ok(acc.unwrap_or_else(|| Self::one(self.grid())))
    }

    /// The grid index `k` this scalar was built for.
    fn grid(&self) -> u32;

    fn i(k: u32) -> Self {
        Self::zeta(k, 2 * k as i64)
    }

    /// `sqrt(2) = zeta^k + zeta^{-k}`.
    fn sqrt2(k: u32) -> Self {
        Self::zeta(k, k as i64) + Self::zeta(k, -(k as i64))
    }

    /// `e^{i pi j / 4}`.
    fn eighth_root(k: u32, j: i64) -> Self {
        Self::zeta(k, j * k as i64)
    }
}

/// The evaluation point and the constants every reduction rule needs, built
/// once per grid index.
#[derive(Clone, Debug)]
pub struct QuantumPoint<S> {
    pub k: u32,
    /// `-i cot(pi/4k)`.
    pub x: S,
    /// `e^{i pi/2k}`.
    pub y: S,
    /// `e^{i theta}` with `theta = pi/4k`.
    pub phase: S,
    /// `i sin(theta)`.
    pub i_sin: S,
    /// `i e^{i theta} sin(theta) = (y - 1)/2`, the base of the modulo-4k
    /// simplification factor.
    pub mod_base: S,
    /// `sqrt(2) e^{i pi (1-k)/4k} sin(theta)`, the base of the Vertigan
    /// reduction factor.
    pub vertigan_base: S,
}

impl<S: Scalar> QuantumPoint<S> {
    pub fn new(k: u32) -> Result<Self> {
        assert!(k >= 1, "grid index must be positive");
        let z = |j: i64| S::zeta(k, j);
        let two = S::from_i64(k, 2);
        let half = two.inv()?;
        // i sin(theta) = (zeta - zeta^{-1}) / 2
        let i_sin = (z(1) - z(-1)) * &half;
        let y = z(2);
        let x = (y.clone() + &S::one(k)).div(&(y.clone() - &S::one(k)))?;
        let mod_base = (y.clone() - &S::one(k)) * &half;
        // sin(theta) = i_sin / i
        let sin = i_sin.div(&S::i(k))?;
        let vertigan_base = S::sqrt2(k) * &z(1 - k as i64) * &sin;
        Ok(QuantumPoint {
            k,
            x,
            y,
            phase: z(1),
            i_sin,
            mod_base,
            vertigan_base,
        })
    }

    /// `1 + y + ... + y^{m-1}`.
    pub fn y_sum(&self, m: u64) -> S {
        let mut acc = S::zero(self.k);
        let mut p = S::one(self.k);
        for _ in 0..m {
            acc = acc + &p;
            p = p * &self.y;
        }
        acc
    }

    /// `x + y + ... + y^{m-1}`, the coloop factor of a multiedge of
    /// multiplicity `m`.
    pub fn coloop_factor(&self, m: u64) -> S {
        self.y_sum(m) - &S::one(self.k) + &self.x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_point<S: Scalar>(k: u32) {
        let p = QuantumPoint::<S>::new(k).unwrap();
        let one = S::one(k);
        // (x - 1)(y - 1) = 2
        let lhs = (p.x.clone() - &one) * &(p.y.clone() - &one);
        assert!(lhs.approx_eq(&S::from_i64(k, 2), 1e-12), "k={k}: {lhs}");
        let theta = std::f64::consts::PI / (4.0 * k as f64);
        let want_x = Complex64::new(0.0, -1.0 / theta.tan());
        assert!((p.x.to_complex() - want_x).norm() < 1e-9);
        let want_y = Complex64::from_polar(1.0, 2.0 * theta);
        assert!((p.y.to_complex() - want_y).norm() < 1e-12);
    }

    #[test]
    fn point_identities_exact() {
        for k in 1..=8 {
            check_point::<CycloScalar>(k);
        }
    }

    #[test]
    fn point_identities_float() {
        for k in 1..=8 {
            check_point::<FloatScalar>(k);
        }
    }

    #[test]
    fn clifford_point() {
        let p = QuantumPoint::<CycloScalar>::new(1).unwrap();
        assert_eq!(p.x, -CycloScalar::i(1));
        assert_eq!(p.y, CycloScalar::i(1));
        // The Vertigan base is 1 at k = 1.
        assert_eq!(p.vertigan_base, CycloScalar::one(1));
    }

    #[test]
    fn k2_x_is_minus_i_times_one_plus_sqrt2() {
        let k = 2;
        let p = QuantumPoint::<CycloScalar>::new(k).unwrap();
        let want = -CycloScalar::i(k) * &(CycloScalar::one(k) + &CycloScalar::sqrt2(k));
        assert_eq!(p.x, want);
        // x * (-x) = cot^2(pi/8) = 3 + 2 sqrt 2
        let sq = p.x.clone() * &(-p.x.clone());
        let three_plus = CycloScalar::from_i64(k, 3) + &(CycloScalar::from_i64(k, 2) * &CycloScalar::sqrt2(k));
        assert_eq!(sq, three_plus);
        let cot = 1.0 / (std::f64::consts::PI / 8.0).tan();
        assert!((sq.to_complex().re - cot * cot).abs() < 1e-12);
    }

    #[test]
    fn pow_and_negative_pow() {
        let k = 3;
        let z = CycloScalar::zeta(k, 1);
        assert_eq!(z.pow(24).unwrap(), CycloScalar::one(k));
        assert_eq!(z.pow(-1).unwrap(), CycloScalar::zeta(k, -1));
        assert_eq!(z.pow(0).unwrap(), CycloScalar::one(k));
        assert!(CycloScalar::zero(k).pow(-1).is_err());
    }
}
