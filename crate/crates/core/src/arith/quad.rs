//! Imaginary quadratic fields of class number one and their rings of integers.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{format_rational, is_integer, rational_sqrt, BigRat};
use crate::error::{Error, Result};

/// The nine D with Q(sqrt(-D)) of class number one.
pub const CLASS_NUMBER_ONE: [u64; 9] = [1, 2, 3, 7, 11, 19, 43, 67, 163];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IntegralBasis {
    /// {1, sqrt(-D)}, for D = 1, 2 (mod 4).
    Sqrt,
    /// {1, (1 + sqrt(-D))/2}, for D = 3 (mod 4).
    HalfIntegral,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct QuadField {
    d: u64,
}

impl TryFrom<u64> for QuadField {
    type Error = Error;
    fn try_from(d: u64) -> Result<Self> {
        QuadField::new(d as i64)
    }
}

impl From<QuadField> for u64 {
    fn from(k: QuadField) -> u64 {
        k.d
    }
}

impl QuadField {
    pub fn new(d: i64) -> Result<Self> {
        if d > 0 && CLASS_NUMBER_ONE.contains(&(d as u64)) {
            Ok(QuadField { d: d as u64 })
        } else {
            Err(Error::UnsupportedD(d))
        }
    }

    pub fn all() -> impl Iterator<Item = QuadField> {
        CLASS_NUMBER_ONE.iter().map(|&d| QuadField { d })
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn basis(&self) -> IntegralBasis {
        if self.d % 4 == 3 {
            IntegralBasis::HalfIntegral
        } else {
            IntegralBasis::Sqrt
        }
    }

    pub fn unit_count(&self) -> u64 {
        match self.d {
            1 => 4,
            3 => 6,
            _ => 2,
        }
    }

    /// w = |O_K^x| / 2, the weight of the family parameter.
    pub fn weight(&self) -> u32 {
        (self.unit_count() / 2) as u32
    }

    /// Generator of O_K over Z besides 1.
    pub fn omega(&self) -> QuadInt {
        match self.basis() {
            IntegralBasis::Sqrt => QuadInt::from_half(*self, 0.into(), 2.into()),
            IntegralBasis::HalfIntegral => QuadInt::from_half(*self, 1.into(), 1.into()),
        }
        .expect("valid generator")
    }

    pub fn units(&self) -> Vec<QuadInt> {
        let one = QuadInt::from_int(*self, 1);
        let gen = match self.d {
            1 => self.omega(),
            // zeta_6 = (1 + sqrt(-3))/2
            3 => self.omega(),
            _ => -&one,
        };
        let mut out = vec![one.clone()];
        let mut cur = gen.clone();
        while cur != one {
            out.push(cur.clone());
            cur = &cur * &gen;
        }
        out
    }

    pub fn basis_label(&self) -> String {
        match self.basis() {
            IntegralBasis::Sqrt => format!("{{1, sqrt(-{})}}", self.d),
            IntegralBasis::HalfIntegral => format!("{{1, (1+sqrt(-{}))/2}}", self.d),
        }
    }
}

/// An element (s + t*sqrt(-D))/2 of O_K.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadInt {
    field: QuadField,
    s: BigInt,
    t: BigInt,
}

impl QuadInt {
    /// From half-coordinates; rejects pairs that are not integral.
    pub fn from_half(field: QuadField, s: BigInt, t: BigInt) -> Result<Self> {
        let ok = match field.basis() {
            IntegralBasis::Sqrt => s.is_even() && t.is_even(),
            IntegralBasis::HalfIntegral => s.is_even() == t.is_even(),
        };
        if !ok {
            return Err(Error::NotIntegral(format!(
                "({s} + {t}*sqrt(-{}))/2",
                field.d
            )));
        }
        Ok(QuadInt { field, s, t })
    }

    /// u + v*omega in the integral basis.
    pub fn from_basis(field: QuadField, u: BigInt, v: BigInt) -> Self {
        let (s, t) = match field.basis() {
            IntegralBasis::Sqrt => (u * 2, v * 2),
            IntegralBasis::HalfIntegral => (u * 2 + &v, v),
        };
        QuadInt { field, s, t }
    }

    pub fn from_int(field: QuadField, n: i64) -> Self {
        QuadInt {
            field,
            s: BigInt::from(2 * n),
            t: BigInt::zero(),
        }
    }

    pub fn field(&self) -> QuadField {
        self.field
    }

    /// Half-coordinates (s, t) with value (s + t*sqrt(-D))/2.
    pub fn half_coords(&self) -> (&BigInt, &BigInt) {
        (&self.s, &self.t)
    }

    /// Coordinates (u, v) in the integral basis {1, omega}.
    pub fn basis_coords(&self) -> (BigInt, BigInt) {
        match self.field.basis() {
            IntegralBasis::Sqrt => (&self.s / 2, &self.t / 2),
            IntegralBasis::HalfIntegral => ((&self.s - &self.t) / 2, self.t.clone()),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.s.is_zero() && self.t.is_zero()
    }

    pub fn conj(&self) -> Self {
        QuadInt {
            field: self.field,
            s: self.s.clone(),
            t: -&self.t,
        }
    }

    pub fn trace(&self) -> BigInt {
        self.s.clone()
    }

    pub fn norm(&self) -> BigInt {
        (&self.s * &self.s + BigInt::from(self.field.d) * &self.t * &self.t) / 4
    }

    pub fn to_quad_rat(&self) -> QuadRat {
        QuadRat {
            field: self.field,
            re: BigRat::new(self.s.clone(), 2.into()),
            im: BigRat::new(self.t.clone(), 2.into()),
        }
    }
}

impl Add for &QuadInt {
    type Output = QuadInt;
    fn add(self, o: &QuadInt) -> QuadInt {
        QuadInt {
            field: self.field,
            s: &self.s + &o.s,
            t: &self.t + &o.t,
        }
    }
}

impl Sub for &QuadInt {
    type Output = QuadInt;
    fn sub(self, o: &QuadInt) -> QuadInt {
        QuadInt {
            field: self.field,
            s: &self.s - &o.s,
            t: &self.t - &o.t,
        }
    }
}

impl Mul for &QuadInt {
    type Output = QuadInt;
    fn mul(self, o: &QuadInt) -> QuadInt {
        let d = BigInt::from(self.field.d);
        QuadInt {
            field: self.field,
            s: (&self.s * &o.s - d * &self.t * &o.t) / 2,
            t: (&self.s * &o.t + &o.s * &self.t) / 2,
        }
    }
}

impl Neg for &QuadInt {
    type Output = QuadInt;
    fn neg(self) -> QuadInt {
        QuadInt {
            field: self.field,
            s: -&self.s,
            t: -&self.t,
        }
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_quad_rat().fmt(f)
    }
}

/// An element re + im*sqrt(-D) of K.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadRat {
    field: QuadField,
    re: BigRat,
    im: BigRat,
}

impl QuadRat {
    pub fn new(field: QuadField, re: BigRat, im: BigRat) -> Self {
        QuadRat { field, re, im }
    }

    pub fn from_rational(field: QuadField, re: BigRat) -> Self {
        QuadRat {
            field,
            re,
            im: BigRat::zero(),
        }
    }

    pub fn from_int(field: QuadField, n: i64) -> Self {
        Self::from_rational(field, BigRat::from_integer(n.into()))
    }

    pub fn zero(field: QuadField) -> Self {
        Self::from_int(field, 0)
    }

    pub fn field(&self) -> QuadField {
        self.field
    }

    pub fn re(&self) -> &BigRat {
        &self.re
    }

    pub fn im(&self) -> &BigRat {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        QuadRat {
            field: self.field,
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    pub fn norm(&self) -> BigRat {
        &self.re * &self.re + BigRat::from_integer(self.field.d.into()) * &self.im * &self.im
    }

    pub fn trace(&self) -> BigRat {
        &self.re * BigRat::from_integer(2.into())
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm();
        Ok(QuadRat {
            field: self.field,
            re: &self.re / &n,
            im: -&self.im / &n,
        })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = QuadRat::from_int(self.field, 1);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// The element as a member of O_K, if it is integral.
    pub fn to_quad_int(&self) -> Option<QuadInt> {
        let two = BigRat::from_integer(2.into());
        let s = &self.re * &two;
        let t = &self.im * &two;
        if !is_integer(&s) || !is_integer(&t) {
            return None;
        }
        QuadInt::from_half(self.field, s.to_integer(), t.to_integer()).ok()
    }

    pub fn is_integral(&self) -> bool {
        self.to_quad_int().is_some()
    }

    /// Exact square root in K, if the element is a square there.
    pub fn sqrt_exact(&self) -> Option<QuadRat> {
        let field = self.field;
        if self.is_zero() {
            return Some(self.clone());
        }
        let d = BigRat::from_integer(field.d.into());
        let two = BigRat::from_integer(2.into());
        // (u + v sqrt(-D))^2 = u^2 - D v^2 + 2uv sqrt(-D); u^2 + D v^2 = sqrt(norm)
        let n = rational_sqrt(&self.norm())?;
        let u2 = (&self.re + &n) / &two;
        let v2 = (&n - &self.re) / (&two * &d);
        let u = rational_sqrt(&u2)?;
        let v = rational_sqrt(&v2)?;
        for (su, sv) in [(1, 1), (1, -1)] {
            let cand = QuadRat {
                field,
                re: &u * BigRat::from_integer(su.into()),
                im: &v * BigRat::from_integer(sv.into()),
            };
            if &cand * &cand == *self {
                return Some(cand);
            }
        }
        None
    }

    pub fn is_square(&self) -> bool {
        self.sqrt_exact().is_some()
    }

    /// Least positive integer m with m * self integral, using the denominators of re and im.
    pub fn common_denominator(&self) -> BigInt {
        self.re.denom().lcm(self.im.denom())
    }
}

impl From<&QuadInt> for QuadRat {
    fn from(q: &QuadInt) -> Self {
        q.to_quad_rat()
    }
}

impl Add for &QuadRat {
    type Output = QuadRat;
    fn add(self, o: &QuadRat) -> QuadRat {
        QuadRat {
            field: self.field,
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }
}

impl Sub for &QuadRat {
    type Output = QuadRat;
    fn sub(self, o: &QuadRat) -> QuadRat {
        QuadRat {
            field: self.field,
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }
}

impl Mul for &QuadRat {
    type Output = QuadRat;
    fn mul(self, o: &QuadRat) -> QuadRat {
        let d = BigRat::from_integer(self.field.d.into());
        QuadRat {
            field: self.field,
            re: &self.re * &o.re - d * &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl Div for &QuadRat {
    type Output = Result<QuadRat>;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: &QuadRat) -> Result<QuadRat> {
        Ok(self * &o.inv()?)
    }
}

impl Neg for &QuadRat {
    type Output = QuadRat;
    fn neg(self) -> QuadRat {
        QuadRat {
            field: self.field,
            re: -&self.re,
            im: -&self.im,
        }
    }
}

impl fmt::Display for QuadRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", format_rational(&self.re));
        }
        let im_abs = self.im.abs();
        let coef = if im_abs.is_one() {
            String::new()
        } else {
            format!("{}*", format_rational(&im_abs))
        };
        let sign = if self.im.is_negative() { "-" } else { "+" };
        if self.re.is_zero() {
            let lead = if self.im.is_negative() { "-" } else { "" };
            write!(f, "{lead}{coef}sqrt(-{})", self.field.d)
        } else {
            write!(
                f,
                "{} {sign} {coef}sqrt(-{})",
                format_rational(&self.re),
                self.field.d
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::rat;

    fn k(d: i64) -> QuadField {
        QuadField::new(d).unwrap()
    }

    #[test]
    fn field_construction() {
        assert_eq!(QuadField::all().count(), 9);
        assert_eq!(QuadField::new(10), Err(Error::UnsupportedD(10)));
        assert_eq!(QuadField::new(-1), Err(Error::UnsupportedD(-1)));
        for f in QuadField::all() {
            let half = f.d() % 4 == 3;
            assert_eq!(f.basis() == IntegralBasis::HalfIntegral, half);
            assert_eq!(f.units().len() as u64, f.unit_count());
        }
        assert_eq!(k(1).weight(), 2);
        assert_eq!(k(3).weight(), 3);
        assert_eq!(k(43).weight(), 1);
    }

    #[test]
    fn parity_invariant() {
        assert!(QuadInt::from_half(k(1), 1.into(), 1.into()).is_err());
        assert!(QuadInt::from_half(k(43), 1.into(), 1.into()).is_ok());
        assert!(QuadInt::from_half(k(43), 1.into(), 2.into()).is_err());
        let w = k(43).omega();
        assert_eq!(w.norm(), BigInt::from(11));
        assert_eq!(w.trace(), BigInt::from(1));
    }

    #[test]
    fn basis_roundtrip_and_products() {
        let f = k(7);
        let a = QuadInt::from_basis(f, 3.into(), (-2).into());
        let b = QuadInt::from_basis(f, (-1).into(), 5.into());
        assert_eq!(a.basis_coords(), (3.into(), (-2).into()));
        let prod = &a * &b;
        assert_eq!(prod.norm(), a.norm() * b.norm());
        let as_rat = &a.to_quad_rat() * &b.to_quad_rat();
        assert_eq!(as_rat.to_quad_int().unwrap(), prod);
    }

    #[test]
    fn exact_square_roots() {
        let f = k(43);
        let x = QuadRat::new(f, rat(3, 2), rat(-5, 7));
        let sq = &x * &x;
        let r = sq.sqrt_exact().unwrap();
        assert!(r == x || r == -&x);
        assert!(!QuadRat::from_int(f, 2).is_square());
        // -43 = (sqrt(-43))^2
        assert!(QuadRat::from_int(f, -43).is_square());
        assert!(QuadRat::from_int(f, 16).is_square());
    }

    #[test]
    fn display() {
        let f = k(43);
        assert_eq!(f.omega().to_string(), "1/2 + 1/2*sqrt(-43)");
        assert_eq!(
            QuadRat::new(f, rat(0, 1), rat(-1, 1)).to_string(),
            "-sqrt(-43)"
        );
    }
}
