//! Fixed-precision p-adic numbers in valuation-unit form.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use super::rational::{split_valuation, BigRat};
use super::zmod::{lift_sqrt, sqrt_mod_prime, Zmod};
use crate::error::{Error, Result};

/// Default relative precision in p-adic digits.
pub const DEFAULT_PRECISION: u32 = 4;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    /// Zero to absolute precision `abs`; `None` is an exact zero.
    Zero { abs: Option<i64> },
    /// p^val * unit, with the unit known modulo p^digits.
    Nonzero { val: i64, unit: u64, digits: u32 },
}

/// An element of Q_p known to finite precision.
///
/// Precision is tracked explicitly: sums of terms that cancel lose digits
/// and the result never claims more than is known.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PadicNum {
    p: u64,
    cap: u32,
    repr: Repr,
}

impl PadicNum {
    /// Exact zero.
    pub fn zero(p: u64, cap: u32) -> Self {
        PadicNum {
            p,
            cap,
            repr: Repr::Zero { abs: None },
        }
    }

    /// Zero known only modulo p^abs.
    pub fn zero_to(p: u64, cap: u32, abs: i64) -> Self {
        PadicNum {
            p,
            cap,
            repr: Repr::Zero { abs: Some(abs) },
        }
    }

    /// `p^val * unit` with the unit known modulo `p^digits`.
    pub fn from_parts(p: u64, cap: u32, val: i64, unit: u64, digits: u32) -> Result<Self> {
        Zmod::new(p, cap)?;
        let digits = digits.min(cap);
        if digits == 0 {
            return Ok(Self::zero_to(p, cap, val));
        }
        let ring = Zmod::new(p, digits)?;
        let unit = ring.reduce(unit);
        if !ring.is_unit(unit) {
            return Err(Error::ZeroDivisor { c: unit, p });
        }
        Ok(PadicNum {
            p,
            cap,
            repr: Repr::Nonzero { val, unit, digits },
        })
    }

    /// An integer residue known modulo p^abs.
    pub fn from_residue(p: u64, cap: u32, r: u64, abs: u32) -> Result<Self> {
        let ring = Zmod::new(p, abs)?;
        let r = ring.reduce(r);
        if r == 0 {
            return Ok(Self::zero_to(p, cap, abs as i64));
        }
        let v = ring.valuation(r);
        let unit = r / p.pow(v);
        Self::from_parts(p, cap, v as i64, unit, abs - v)
    }

    pub fn from_i64(n: i64, p: u64, cap: u32) -> Self {
        embed_rational(&BigRat::from_integer(n.into()), p, cap).expect("valid precision")
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    /// Valuation, or `None` when the number is zero to its precision.
    pub fn valuation(&self) -> Option<i64> {
        match self.repr {
            Repr::Zero { .. } => None,
            Repr::Nonzero { val, .. } => Some(val),
        }
    }

    pub fn unit(&self) -> Option<u64> {
        match self.repr {
            Repr::Zero { .. } => None,
            Repr::Nonzero { unit, .. } => Some(unit),
        }
    }

    /// Relative precision (0 for zero).
    pub fn digits(&self) -> u32 {
        match self.repr {
            Repr::Zero { .. } => 0,
            Repr::Nonzero { digits, .. } => digits,
        }
    }

    /// Absolute precision; `None` for an exact zero.
    pub fn abs_precision(&self) -> Option<i64> {
        match self.repr {
            Repr::Zero { abs } => abs,
            Repr::Nonzero { val, digits, .. } => Some(val + digits as i64),
        }
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero { abs: None })
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero { .. })
    }

    /// The value modulo p^k, for an element known to be integral to that precision.
    pub fn residue(&self, k: u32) -> Result<u64> {
        if k == 0 {
            return Ok(0);
        }
        let have = self.abs_precision().unwrap_or(i64::MAX);
        if have < k as i64 {
            return Err(Error::InsufficientPrecision {
                needed: k as i64,
                have,
            });
        }
        match self.repr {
            Repr::Zero { .. } => Ok(0),
            Repr::Nonzero { val, unit, .. } => {
                if val < 0 {
                    return Err(Error::NotIntegral(self.to_string()));
                }
                if val >= k as i64 {
                    return Ok(0);
                }
                let ring = Zmod::new(self.p, k)?;
                Ok(ring.mul(ring.reduce(unit), self.p.pow(val as u32)))
            }
        }
    }

    /// The coefficient of p^i in the expansion.
    pub fn digit(&self, i: i64) -> Result<u64> {
        let have = self.abs_precision().unwrap_or(i64::MAX);
        if i >= have {
            return Err(Error::InsufficientPrecision {
                needed: i + 1,
                have,
            });
        }
        match self.repr {
            Repr::Zero { .. } => Ok(0),
            Repr::Nonzero { val, unit, .. } => {
                if i < val {
                    Ok(0)
                } else {
                    Ok(unit / self.p.pow((i - val) as u32) % self.p)
                }
            }
        }
    }

    fn same_prime(&self, o: &Self) {
        assert_eq!(self.p, o.p, "mixing p-adic numbers at different primes");
    }

    fn normalize(p: u64, cap: u32, vmin: i64, sum: u64, width: u32) -> Self {
        if width == 0 {
            return Self::zero_to(p, cap, vmin);
        }
        let ring = Zmod::new(p, width).expect("width bounded by cap");
        let sum = ring.reduce(sum);
        if sum == 0 {
            return Self::zero_to(p, cap, vmin + width as i64);
        }
        let v = ring.valuation(sum);
        let digits = (width - v).min(cap);
        let unit = (sum / p.pow(v)) % p.pow(digits);
        PadicNum {
            p,
            cap,
            repr: Repr::Nonzero {
                val: vmin + v as i64,
                unit,
                digits,
            },
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.same_prime(o);
        let cap = self.cap.max(o.cap);
        let (p, a, b) = (self.p, &self.repr, &o.repr);
        match (a, b) {
            (Repr::Zero { abs: None }, _) => return o.clone(),
            (_, Repr::Zero { abs: None }) => return self.clone(),
            (Repr::Zero { abs: Some(x) }, Repr::Zero { abs: Some(y) }) => {
                return Self::zero_to(p, cap, *x.min(y));
            }
            _ => {}
        }
        let abs = self
            .abs_precision()
            .unwrap()
            .min(o.abs_precision().unwrap());
        let (va, ua) = self.parts_or(abs);
        let (vb, ub) = o.parts_or(abs);
        let vmin = va.min(vb);
        if abs <= vmin {
            return Self::zero_to(p, cap, abs);
        }
        let width = (abs - vmin) as u32;
        let ring = Zmod::new(p, width).expect("width bounded by cap");
        let sa = ring.mul(ring.reduce(ua), ring.pow(p, (va - vmin) as u64));
        let sb = ring.mul(ring.reduce(ub), ring.pow(p, (vb - vmin) as u64));
        Self::normalize(p, cap, vmin, ring.add(sa, sb), width)
    }

    /// (valuation, unit) with zero-to-precision mapped to (abs, 0).
    fn parts_or(&self, abs: i64) -> (i64, u64) {
        match self.repr {
            Repr::Zero { .. } => (abs, 0),
            Repr::Nonzero { val, unit, .. } => (val.min(abs), if val >= abs { 0 } else { unit }),
        }
    }

    pub fn neg(&self) -> Self {
        match self.repr {
            Repr::Zero { .. } => self.clone(),
            Repr::Nonzero { val, unit, digits } => {
                let ring = Zmod::new(self.p, digits).expect("valid digits");
                PadicNum {
                    p: self.p,
                    cap: self.cap,
                    repr: Repr::Nonzero {
                        val,
                        unit: ring.neg(unit),
                        digits,
                    },
                }
            }
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.same_prime(o);
        let (p, cap) = (self.p, self.cap.max(o.cap));
        match (&self.repr, &o.repr) {
            (Repr::Zero { abs: None }, _) | (_, Repr::Zero { abs: None }) => Self::zero(p, cap),
            (Repr::Zero { abs: Some(x) }, Repr::Zero { abs: Some(y) }) => {
                Self::zero_to(p, cap, x + y)
            }
            (Repr::Zero { abs: Some(x) }, Repr::Nonzero { val, .. })
            | (Repr::Nonzero { val, .. }, Repr::Zero { abs: Some(x) }) => {
                Self::zero_to(p, cap, x + val)
            }
            (
                Repr::Nonzero {
                    val: va,
                    unit: ua,
                    digits: da,
                },
                Repr::Nonzero {
                    val: vb,
                    unit: ub,
                    digits: db,
                },
            ) => {
                let digits = (*da).min(*db);
                let ring = Zmod::new(p, digits).expect("valid digits");
                PadicNum {
                    p,
                    cap,
                    repr: Repr::Nonzero {
                        val: va + vb,
                        unit: ring.mul(ring.reduce(*ua), ring.reduce(*ub)),
                        digits,
                    },
                }
            }
        }
    }

    pub fn inv(&self) -> Result<Self> {
        match self.repr {
            Repr::Zero { .. } => Err(Error::DivisionByZero),
            Repr::Nonzero { val, unit, digits } => {
                let ring = Zmod::new(self.p, digits)?;
                Ok(PadicNum {
                    p: self.p,
                    cap: self.cap,
                    repr: Repr::Nonzero {
                        val: -val,
                        unit: ring.inv(unit).expect("unit"),
                        digits,
                    },
                })
            }
        }
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::from_parts(self.p, self.cap, 0, 1, self.cap).expect("valid cap");
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Square root, when one exists in Q_p.
    pub fn sqrt(&self) -> Result<Self> {
        match self.repr {
            Repr::Zero { abs: None } => Ok(self.clone()),
            Repr::Zero { abs: Some(a) } => Ok(Self::zero_to(self.p, self.cap, a.div_euclid(2))),
            Repr::Nonzero { val, unit, digits } => {
                if val.rem_euclid(2) != 0 {
                    return Err(Error::NonResidue { c: unit, p: self.p });
                }
                let r0 = sqrt_mod_prime(unit % self.p, self.p)
                    .ok_or(Error::NonResidue { c: unit, p: self.p })?;
                let r0 = r0.min(self.p - r0);
                let ring = Zmod::new(self.p, digits)?;
                let r = lift_sqrt(&ring, unit, r0);
                Ok(PadicNum {
                    p: self.p,
                    cap: self.cap,
                    repr: Repr::Nonzero {
                        val: val / 2,
                        unit: r,
                        digits,
                    },
                })
            }
        }
    }

    /// Equality to the precision both sides carry.
    pub fn agrees_with(&self, o: &Self) -> bool {
        self.sub(o).is_zero()
    }
}

impl fmt::Display for PadicNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.repr {
            Repr::Zero { abs: None } => write!(f, "0"),
            Repr::Zero { abs: Some(a) } => write!(f, "O({}^{})", self.p, a),
            Repr::Nonzero { val, unit, digits } => {
                write!(
                    f,
                    "{}^{} * {} + O({}^{})",
                    self.p,
                    val,
                    unit,
                    self.p,
                    val + digits as i64
                )
            }
        }
    }
}

/// Embed an exact rational into Q_p with `cap` digits of relative precision.
pub fn embed_rational(x: &BigRat, p: u64, cap: u32) -> Result<PadicNum> {
    let ring = Zmod::new(p, cap)?;
    if x.is_zero() {
        return Ok(PadicNum::zero(p, cap));
    }
    let (vn, n) = split_valuation(x.numer(), p);
    let (vd, d) = split_valuation(x.denom(), p);
    let unit = ring.mul(
        ring.from_bigint(&n),
        ring.inv(ring.from_bigint(&d)).expect("cofactor is a unit"),
    );
    PadicNum::from_parts(p, cap, vn - vd, unit, cap)
}

/// Embed an integer residue class given as a `BigInt` known modulo `p^abs`.
pub(crate) fn embed_big_residue(r: &BigInt, p: u64, cap: u32, abs: u32) -> Result<PadicNum> {
    let modulus = BigInt::from(p).pow(abs);
    let r = ((r % &modulus) + &modulus) % &modulus;
    if r.is_zero() {
        return Ok(PadicNum::zero_to(p, cap, abs as i64));
    }
    let (v, u) = split_valuation(&r, p);
    let digits = (abs as i64 - v).min(cap as i64) as u32;
    let ring = Zmod::new(p, digits.max(1))?;
    PadicNum::from_parts(p, cap, v, ring.from_bigint(&u), digits)
}
