use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Scalar;
use crate::error::{Error, Result};

/// Per-grid data: the cyclotomic polynomial of order `8k` and the reduced
/// form of every power `zeta^t`, `0 <= t < 8k`.
#[derive(Debug)]
struct Field {
    k: u32,
    order: usize,
    degree: usize,
    /// `powers[t]` = coefficients of `zeta^t` in the basis `1, zeta, ..., zeta^{degree-1}`.
    powers: Vec<Vec<i64>>,
    /// Exponents coprime to the order other than 1; the nontrivial Galois
    /// automorphisms `zeta -> zeta^j`.
    conjugates: Vec<usize>,
}

fn field(k: u32) -> Arc<Field> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Field>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("field cache poisoned");
    guard.entry(k).or_insert_with(|| Arc::new(Field::new(k))).clone()
}

/// Integer coefficients of the `n`-th cyclotomic polynomial, lowest degree first.
fn cyclotomic_polynomial(n: usize) -> Vec<i64> {
    // x^n - 1 divided by the cyclotomic polynomials of the proper divisors.
    let mut p = vec![0i64; n + 1];
    p[0] = -1;
    p[n] = 1;
    for d in (1..n).filter(|d| n % d == 0) {
        let q = cyclotomic_polynomial(d);
        p = exact_div(&p, &q);
    }
    p
}

/// Quotient of integer polynomials where the divisor is monic and divides exactly.
fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![0i64; num.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        for (j, &d) in den.iter().enumerate() {
            rem[i + j] -= c * d;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

impl Field {
    fn new(k: u32) -> Self {
        let order = 8 * k as usize;
        let phi = cyclotomic_polynomial(order);
        let degree = phi.len() - 1;
        let mut powers = Vec::with_capacity(order);
        let mut cur = vec![0i64; degree];
        cur[0] = 1;
        for _ in 0..order {
            powers.push(cur.clone());
            // multiply by zeta and reduce with the monic relation
            let top = cur[degree - 1];
            for j in (1..degree).rev() {
                cur[j] = cur[j - 1] - top * phi[j];
            }
            cur[0] = -top * phi[0];
        }
        let conjugates = (2..order).filter(|j| j.gcd(&order) == 1).collect();
        Field {
            k,
            order,
            degree,
            powers,
            conjugates,
        }
    }
}

/// An element of `Q(zeta)`, `zeta = e^{i pi/4k}`, stored as integer
/// coefficients over a common positive denominator in the power basis
/// reduced modulo the cyclotomic polynomial of order `8k`.
#[derive(Clone)]
pub struct CycloScalar {
    field: Arc<Field>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl PartialEq for CycloScalar {
    fn eq(&self, other: &Self) -> bool {
        self.field.k == other.field.k && self.den == other.den && self.num == other.num
    }
}

impl Eq for CycloScalar {}

impl CycloScalar {
    fn from_parts(field: Arc<Field>, num: Vec<BigInt>, den: BigInt) -> Self {
        let mut s = CycloScalar { field, num, den };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        if self.num.iter().all(Zero::is_zero) {
            self.den = BigInt::one();
            return;
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if self.den.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for c in &mut self.num {
                *c = &*c / &g;
            }
            self.den = &self.den / &g;
        }
    }

    pub fn k(&self) -> u32 {
        self.field.k
    }

    /// Coefficients in the reduced power basis.
    pub fn coefficients(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|c| BigRational::new(c.clone(), self.den.clone()))
            .collect()
    }

    pub fn from_rational(k: u32, q: &BigRational) -> Self {
        let f = field(k);
        let mut num = vec![BigInt::zero(); f.degree];
        num[0] = q.numer().clone();
        CycloScalar::from_parts(f, num, q.denom().clone())
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.field.k != other.field.k {
            return Err(Error::Input(format!(
                "mixed grid indices {} and {}",
                self.field.k, other.field.k
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let num = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(a, b)| a * &other.den + b * &self.den)
            .collect();
        Ok(CycloScalar::from_parts(self.field.clone(), num, &self.den * &other.den))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let d = self.field.degree;
        let mut wide = vec![BigInt::zero(); 2 * d - 1];
        for (i, a) in self.num.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in other.num.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                wide[i + j] += a * b;
            }
        }
        let mut num = vec![BigInt::zero(); d];
        for (t, c) in wide.into_iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            if t < d {
                num[t] += c;
            } else {
                for (slot, &p) in num.iter_mut().zip(&self.field.powers[t]) {
                    if p != 0 {
                        *slot += &c * p;
                    }
                }
            }
        }
        Ok(CycloScalar::from_parts(self.field.clone(), num, &self.den * &other.den))
    }

    /// Image under the automorphism `zeta -> zeta^j`.
    fn conjugate(&self, j: usize) -> Self {
        let f = &self.field;
        let mut num = vec![BigInt::zero(); f.degree];
        for (t, c) in self.num.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (slot, &p) in num.iter_mut().zip(&f.powers[(t * j) % f.order]) {
                if p != 0 {
                    *slot += c * p;
                }
            }
        }
        CycloScalar::from_parts(f.clone(), num, self.den.clone())
    }
}

impl Scalar for CycloScalar {
    fn from_i64(k: u32, n: i64) -> Self {
        CycloScalar::from_rational(k, &BigRational::from_integer(BigInt::from(n)))
    }

    fn zeta(k: u32, j: i64) -> Self {
        let f = field(k);
        let t = j.rem_euclid(f.order as i64) as usize;
        let num = f.powers[t].iter().map(|&c| BigInt::from(c)).collect();
        CycloScalar::from_parts(f, num, BigInt::one())
    }

    fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    /// Multiplies by the product of all nontrivial Galois conjugates; the
    /// result times `self` is the rational field norm.
    fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Arithmetic("division by zero".into()));
        }
        let mut others = CycloScalar::one(self.k());
        for &j in &self.field.conjugates {
            others = others.try_mul(&self.conjugate(j))?;
        }
        let norm = self.try_mul(&others)?;
        debug_assert!(norm.num[1..].iter().all(Zero::is_zero));
        let n = BigRational::new(norm.num[0].clone(), norm.den.clone());
        let scale = CycloScalar::from_rational(self.k(), &n.recip());
        others.try_mul(&scale)
    }

    fn to_complex(&self) -> Complex64 {
        let order = self.field.order as f64;
        let den = self.den.to_f64().unwrap_or(f64::INFINITY);
        self.num
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| {
                let angle = 2.0 * std::f64::consts::PI * j as f64 / order;
                Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN) / den, angle)
            })
            .sum()
    }

    fn approx_eq(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }

    fn grid(&self) -> u32 {
        self.field.k
    }
}

impl Add for CycloScalar {
    type Output = CycloScalar;
    fn add(self, rhs: CycloScalar) -> CycloScalar {
        self.try_add(&rhs).expect("scalar addition")
    }
}

impl<'a> Add<&'a CycloScalar> for CycloScalar {
    type Output = CycloScalar;
    fn add(self, rhs: &'a CycloScalar) -> CycloScalar {
        self.try_add(rhs).expect("scalar addition")
    }
}

impl Sub for CycloScalar {
    type Output = CycloScalar;
    fn sub(self, rhs: CycloScalar) -> CycloScalar {
        self.try_add(&-rhs).expect("scalar subtraction")
    }
}

impl<'a> Sub<&'a CycloScalar> for CycloScalar {
    type Output = CycloScalar;
    fn sub(self, rhs: &'a CycloScalar) -> CycloScalar {
        self.try_add(&-rhs.clone()).expect("scalar subtraction")
    }
}

impl Mul for CycloScalar {
    type Output = CycloScalar;
    fn mul(self, rhs: CycloScalar) -> CycloScalar {
        self.try_mul(&rhs).expect("scalar multiplication")
    }
}

impl<'a> Mul<&'a CycloScalar> for CycloScalar {
    type Output = CycloScalar;
    fn mul(self, rhs: &'a CycloScalar) -> CycloScalar {
        self.try_mul(rhs).expect("scalar multiplication")
    }
}

impl Neg for CycloScalar {
    type Output = CycloScalar;
    fn neg(mut self) -> CycloScalar {
        for c in &mut self.num {
            *c = -&*c;
        }
        self
    }
}

impl fmt::Debug for CycloScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloScalar(k={}, {})", self.field.k, self)
    }
}

/// Canonical sum form `a/b * z^j + ...` in increasing powers of `z = zeta`;
/// `0` for zero.
impl fmt::Display for CycloScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coefficients()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| format!("{c} * z^{j}"))
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(8), vec![1, 0, 0, 0, 1]);
        assert_eq!(cyclotomic_polynomial(24), vec![1, 0, 0, 0, -1, 0, 0, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(field(3).degree, 8);
        assert_eq!(field(5).degree, 16);
    }

    #[test]
    fn i_squared_is_minus_one() {
        for k in 1..=6 {
            let i = CycloScalar::i(k);
            assert_eq!(i.clone() * &i, CycloScalar::from_i64(k, -1));
        }
    }

    #[test]
    fn one_plus_zeta_times_one_minus_zeta() {
        let k = 2;
        let one = CycloScalar::one(k);
        let z = CycloScalar::zeta(k, 1);
        let lhs = (one.clone() + &z) * &(one.clone() - &z);
        assert_eq!(lhs, one - &CycloScalar::zeta(k, 2));
    }

    #[test]
    fn zeta_order_and_negative_powers() {
        for k in 1..=5u32 {
            let order = 8 * k as i64;
            assert_eq!(CycloScalar::zeta(k, order), CycloScalar::one(k));
            assert_eq!(CycloScalar::zeta(k, order / 2), CycloScalar::from_i64(k, -1));
            assert_eq!(
                CycloScalar::zeta(k, -3) * &CycloScalar::zeta(k, 3),
                CycloScalar::one(k)
            );
        }
    }

    #[test]
    fn display_is_canonical() {
        let k = 2;
        let s = CycloScalar::sqrt2(k);
        assert_eq!(s.to_string(), "1 * z^2 + -1 * z^6");
        let half = CycloScalar::from_rational(k, &BigRational::new(1.into(), 2.into()));
        assert_eq!(half.to_string(), "1/2 * z^0");
        assert_eq!(CycloScalar::zero(k).to_string(), "0");
    }

    #[test]
    fn division_by_zero() {
        assert!(matches!(CycloScalar::zero(3).inv(), Err(Error::Arithmetic(_))));
    }

    #[test]
    fn mixed_grid_is_input_error() {
        let a = CycloScalar::one(1);
        let b = CycloScalar::one(2);
        assert!(matches!(a.try_add(&b), Err(Error::Input(_))));
        assert!(matches!(a.try_mul(&b), Err(Error::Input(_))));
    }

    fn element(k: u32, coeffs: &[(i64, i64)]) -> CycloScalar {
        let mut acc = CycloScalar::zero(k);
        for (j, &(p, q)) in coeffs.iter().enumerate() {
            let c = CycloScalar::from_rational(k, &BigRational::new(p.into(), q.into()));
            acc = acc + &(c * &CycloScalar::zeta(k, j as i64));
        }
        acc
    }

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() <= 1e-9 * (1.0 + a.norm().max(b.norm()))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn exact_ops_match_float(
            k in 1u32..=8,
            a in prop::collection::vec((-9i64..=9, 1i64..=5), 1..10),
            b in prop::collection::vec((-9i64..=9, 1i64..=5), 1..10),
        ) {
            let (x, y) = (element(k, &a), element(k, &b));
            let (fx, fy) = (x.to_complex(), y.to_complex());
            prop_assert!(close((x.clone() + &y).to_complex(), fx + fy));
            prop_assert!(close((x.clone() - &y).to_complex(), fx - fy));
            prop_assert!(close((x.clone() * &y).to_complex(), fx * fy));
            if !y.is_zero() {
                prop_assert!(close(x.div(&y).unwrap().to_complex(), fx / fy));
            }
        }

        #[test]
        fn inverse_is_exact(k in 1u32..=6, a in prop::collection::vec((-9i64..=9, 1i64..=5), 1..12)) {
            let x = element(k, &a);
            prop_assume!(!x.is_zero());
            prop_assert_eq!(x.clone() * &x.inv().unwrap(), CycloScalar::one(k));
        }
    }
}
