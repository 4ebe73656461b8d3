//! Exact arithmetic over the Gaussian rationals `Q(i)`: scalars, univariate
//! polynomials, and fraction-free determinants.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRat { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        GaussRat { re: BigRational::from_integer(n.into()), im: BigRational::zero() }
    }

    pub fn i() -> Self {
        GaussRat { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn zero() -> Self {
        GaussRat::from_int(0)
    }

    pub fn one() -> Self {
        GaussRat::from_int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRat { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Domain("division by zero".into()));
        }
        let n = self.norm_sqr();
        Ok(GaussRat { re: &self.re / &n, im: -(&self.im / &n) })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = GaussRat::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }

    /// Exact value of a finite binary double.
    pub fn from_complex(z: Complex64) -> Option<Self> {
        Some(GaussRat { re: BigRational::from_float(z.re)?, im: BigRational::from_float(z.im)? })
    }

    /// Parses an unsigned decimal literal such as `12`, `0.25` or `1e-3` exactly.
    pub fn parse_decimal(text: &str) -> Option<BigRational> {
        let (mant, exp) = match text.find(['e', 'E']) {
            Some(pos) => (&text[..pos], text[pos + 1..].parse::<i64>().ok()?),
            None => (text, 0),
        };
        let (int_part, frac_part) = match mant.find('.') {
            Some(pos) => (&mant[..pos], &mant[pos + 1..]),
            None => (mant, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return None;
        }
        if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
            return None;
        }
        let digits = format!("{int_part}{frac_part}");
        let n: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().ok()? };
        let shift = exp - frac_part.len() as i64;
        if shift.unsigned_abs() > 400 {
            return None;
        }
        let ten = BigInt::from(10);
        let scale = num_traits::pow(ten, shift.unsigned_abs() as usize);
        Some(if shift >= 0 {
            BigRational::from_integer(n * scale)
        } else {
            BigRational::new(n, scale)
        })
    }
}

/// Rational to `f64`, robust for huge numerators and denominators.
pub fn rat_to_f64(q: &BigRational) -> f64 {
    if let Some(v) = q.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    let n = q.numer();
    let d = q.denom();
    let shift = n.bits() as i64 - d.bits() as i64;
    let sh = shift.clamp(-60_000, 60_000);
    let (a, b) = if sh > 60 {
        (n.clone(), d.clone() << ((sh - 60) as usize))
    } else if sh < -60 {
        (n.clone() << ((-sh - 60) as usize), d.clone())
    } else {
        (n.clone(), d.clone())
    };
    let base = BigRational::new(a, b).to_f64().unwrap_or(0.0);
    let e = if sh > 60 { sh - 60 } else if sh < -60 { sh + 60 } else { 0 };
    base * 2f64.powi(e.clamp(-2000, 2000) as i32)
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else if self.im.is_negative() {
            write!(f, "{}-{}i", self.re, -self.im.clone())
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl<'a> Add<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn add(self, o: &GaussRat) -> GaussRat {
        GaussRat { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl<'a> Sub<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn sub(self, o: &GaussRat) -> GaussRat {
        GaussRat { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl<'a> Mul<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn mul(self, o: &GaussRat) -> GaussRat {
        GaussRat {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl<'a> Div<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn div(self, o: &GaussRat) -> GaussRat {
        self * &o.inv().expect("nonzero divisor")
    }
}

impl Neg for &GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat { re: -self.re.clone(), im: -self.im.clone() }
    }
}

/// Minimal exact ring interface for fraction-free elimination.
pub trait ExactRing: Clone {
    fn ring_zero() -> Self;
    fn ring_one() -> Self;
    fn ring_is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    /// Exact division; callers guarantee divisibility.
    fn div_exact(&self, o: &Self) -> Self;
}

impl ExactRing for GaussRat {
    fn ring_zero() -> Self {
        GaussRat::zero()
    }
    fn ring_one() -> Self {
        GaussRat::one()
    }
    fn ring_is_zero(&self) -> bool {
        GaussRat::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
}

impl ExactRing for BigRational {
    fn ring_zero() -> Self {
        Zero::zero()
    }
    fn ring_one() -> Self {
        One::one()
    }
    fn ring_is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
}

/// Determinant by Bareiss fraction-free elimination with row swaps.
pub fn bareiss_det<T: ExactRing>(mut m: Vec<Vec<T>>) -> T {
    let n = m.len();
    if n == 0 {
        return T::ring_one();
    }
    let mut sign_neg = false;
    let mut prev = T::ring_one();
    for k in 0..n - 1 {
        if m[k][k].ring_is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].ring_is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign_neg = !sign_neg;
                }
                None => return T::ring_zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = v.div_exact(&prev);
            }
            m[i][k] = T::ring_zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign_neg {
        T::ring_zero().sub(&det)
    } else {
        det
    }
}

/// Sylvester matrix of two binary forms of degree `d`, coefficients listed
/// from `X^d` down to `Y^d`; its determinant is the homogeneous resultant.
pub fn sylvester<T: ExactRing>(p: &[T], q: &[T]) -> Vec<Vec<T>> {
    let d = p.len() - 1;
    let n = 2 * d;
    let mut m = vec![vec![T::ring_zero(); n]; n];
    for r in 0..d {
        for (i, c) in p.iter().enumerate() {
            m[r][r + i] = c.clone();
        }
        for (i, c) in q.iter().enumerate() {
            m[d + r][r + i] = c.clone();
        }
    }
    m
}

/// Univariate polynomial over `Q(i)`, coefficients in ascending powers,
/// no trailing zeros (the zero polynomial is empty).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GPoly(pub Vec<GaussRat>);

impl GPoly {
    pub fn zero() -> Self {
        GPoly(Vec::new())
    }

    pub fn constant(c: GaussRat) -> Self {
        GPoly(vec![c]).trimmed()
    }

    pub fn x() -> Self {
        GPoly(vec![GaussRat::zero(), GaussRat::one()])
    }

    fn trimmed(mut self) -> Self {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with the zero polynomial at degree 0.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn lead(&self) -> GaussRat {
        self.0.last().cloned().unwrap_or_else(GaussRat::zero)
    }

    pub fn coeff(&self, i: usize) -> GaussRat {
        self.0.get(i).cloned().unwrap_or_else(GaussRat::zero)
    }

    pub fn add(&self, o: &GPoly) -> GPoly {
        let n = self.0.len().max(o.0.len());
        GPoly((0..n).map(|i| &self.coeff(i) + &o.coeff(i)).collect()).trimmed()
    }

    pub fn sub(&self, o: &GPoly) -> GPoly {
        let n = self.0.len().max(o.0.len());
        GPoly((0..n).map(|i| &self.coeff(i) - &o.coeff(i)).collect()).trimmed()
    }

    pub fn neg(&self) -> GPoly {
        GPoly(self.0.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, o: &GPoly) -> GPoly {
        if self.is_zero() || o.is_zero() {
            return GPoly::zero();
        }
        let mut out = vec![GaussRat::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        GPoly(out).trimmed()
    }

    pub fn scale(&self, c: &GaussRat) -> GPoly {
        GPoly(self.0.iter().map(|a| a * c).collect()).trimmed()
    }

    pub fn div_rem(&self, o: &GPoly) -> Result<(GPoly, GPoly)> {
        if o.is_zero() {
            return Err(Error::Domain("polynomial division by zero".into()));
        }
        let mut r = self.clone();
        let dl = o.degree();
        let inv_lead = o.lead().inv()?;
        let mut q = vec![GaussRat::zero(); self.0.len().saturating_sub(dl).max(1)];
        while !r.is_zero() && r.degree() >= dl {
            let shift = r.degree() - dl;
            let c = &r.lead() * &inv_lead;
            for (i, b) in o.0.iter().enumerate() {
                r.0[shift + i] = &r.0[shift + i] - &(&c * b);
            }
            q[shift] = c;
            r = r.trimmed();
        }
        Ok((GPoly(q).trimmed(), r))
    }

    /// Monic gcd by the Euclidean algorithm.
    pub fn gcd(&self, o: &GPoly) -> GPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let inv = a.lead().inv().expect("nonzero lead");
        a.scale(&inv)
    }

    pub fn pow(&self, e: u32) -> GPoly {
        let mut acc = GPoly::constant(GaussRat::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn g(re: i64, im: i64) -> GaussRat {
        GaussRat::new(q(re, 1), q(im, 1))
    }

    #[test]
    fn decimal_parsing() {
        assert_eq!(GaussRat::parse_decimal("0.25"), Some(q(1, 4)));
        assert_eq!(GaussRat::parse_decimal("12"), Some(q(12, 1)));
        assert_eq!(GaussRat::parse_decimal("1e-3"), Some(q(1, 1000)));
        assert_eq!(GaussRat::parse_decimal(".5"), Some(q(1, 2)));
        assert_eq!(GaussRat::parse_decimal("2.5E2"), Some(q(250, 1)));
        assert_eq!(GaussRat::parse_decimal("a"), None);
        assert_eq!(GaussRat::parse_decimal("."), None);
    }

    #[test]
    fn gaussian_arithmetic() {
        let a = g(1, 2);
        let b = g(3, -1);
        assert_eq!(&a * &b, g(5, 5));
        assert_eq!(&(&a * &b) / &b, a);
        assert_eq!(GaussRat::i().pow(2), g(-1, 0));
        assert!(g(0, 0).inv().is_err());
    }

    #[test]
    fn bareiss_matches_hand_values() {
        let m = vec![vec![q(2, 1), q(1, 1)], vec![q(1, 1), q(3, 1)]];
        assert_eq!(bareiss_det(m), q(5, 1));
        // zero pivot needs a swap
        let m = vec![
            vec![q(0, 1), q(1, 1), q(0, 1)],
            vec![q(1, 1), q(0, 1), q(0, 1)],
            vec![q(0, 1), q(0, 1), q(7, 1)],
        ];
        assert_eq!(bareiss_det(m), q(-7, 1));
    }

    #[test]
    fn sylvester_resultants() {
        let one = g(1, 0);
        let zero = g(0, 0);
        // X^2, Y^2
        let r = bareiss_det(sylvester(&[one.clone(), zero.clone(), zero.clone()], &[zero.clone(), zero.clone(), one.clone()]));
        assert_eq!(r, g(1, 0));
        // X^2 + Y^2, 2XY
        let r = bareiss_det(sylvester(&[one.clone(), zero.clone(), one.clone()], &[zero.clone(), g(2, 0), zero.clone()]));
        assert_eq!(r, g(4, 0));
        // common factor X: X^2 + XY, XY
        let r = bareiss_det(sylvester(&[one.clone(), one.clone(), zero.clone()], &[zero.clone(), one.clone(), zero.clone()]));
        assert!(r.is_zero());
    }

    #[test]
    fn poly_gcd_and_division() {
        // (x-1)(x+i) and (x-1)(x+2)
        let xm1 = GPoly(vec![g(-1, 0), g(1, 0)]);
        let a = xm1.mul(&GPoly(vec![g(0, 1), g(1, 0)]));
        let b = xm1.mul(&GPoly(vec![g(2, 0), g(1, 0)]));
        assert_eq!(a.gcd(&b), xm1);
        let (quo, rem) = a.div_rem(&xm1).unwrap();
        assert!(rem.is_zero());
        assert_eq!(quo, GPoly(vec![g(0, 1), g(1, 0)]));
    }

    #[test]
    fn huge_rational_to_float() {
        let big = BigRational::new(BigInt::from(10).pow(400), BigInt::from(10).pow(399));
        assert!((rat_to_f64(&big) - 10.0).abs() < 1e-12);
    }
}
