//! Split primes p = pi * conj(pi) and the embedding O_K -> Z_p.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::padic::{embed_big_residue, embed_rational, PadicNum};
use super::primes::{is_prime, legendre};
use super::quad::{QuadField, QuadInt, QuadRat};
use super::rational::{isqrt_exact, BigRat};
use super::zmod::{lift_sqrt_big, mod_inverse_big, Zmod};
use crate::error::{Error, Result};

/// Canonical generator of a prime above p: minimal t > 0, then minimal s >= 0,
/// with pi = (s + t*sqrt(-D))/2.
pub fn quad_split_prime(k: QuadField, p: u64) -> Result<QuadInt> {
    if p % 2 == 0 || !is_prime(p) {
        return Err(Error::BadPrime(p));
    }
    let d = k.d();
    if d % p == 0 {
        return Err(Error::RamifiedPrime { d, p });
    }
    let four_p = 4 * p as u128;
    let mut t: u128 = 1;
    while (d as u128) * t * t <= four_p {
        let rest = four_p - (d as u128) * t * t;
        if let Some(s) = isqrt_exact(&BigInt::from(rest)) {
            if let Ok(q) = QuadInt::from_half(k, s, BigInt::from(t)) {
                return Ok(q);
            }
        }
        t += 1;
    }
    debug_assert_ne!(legendre(-(d as i64), p), 1);
    Err(Error::InertPrime { d, p })
}

/// A split prime with a fixed embedding iota: O_K -> Z_p under which
/// `pi` has valuation 1 and `pi_bar` is a unit.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SplitPrime {
    field: QuadField,
    p: u64,
    pi: QuadInt,
    /// sqrt(-D) modulo p, the first digit of the embedding.
    root0: u64,
}

impl SplitPrime {
    pub fn new(field: QuadField, p: u64) -> Result<Self> {
        let pi = quad_split_prime(field, p)?;
        Self::with_pi(pi, p)
    }

    /// Use a given generator of norm p; the embedding is chosen so that it has valuation 1.
    pub fn with_pi(pi: QuadInt, p: u64) -> Result<Self> {
        let field = pi.field();
        if pi.norm() != BigInt::from(p) {
            return Err(Error::NonSplitPrime { d: field.d(), p });
        }
        let f = Zmod::new(p, 1)?;
        let (s, t) = pi.half_coords();
        // (s + t r)/2 = 0 mod p  =>  r = -s/t
        let r = f.mul(
            f.neg(f.from_bigint(s)),
            f.inv(f.from_bigint(t))
                .ok_or(Error::NonSplitPrime { d: field.d(), p })?,
        );
        Ok(SplitPrime {
            field,
            p,
            pi,
            root0: r,
        })
    }

    pub fn field(&self) -> QuadField {
        self.field
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// The formal generator (valuation 1 under the embedding).
    pub fn pi(&self) -> &QuadInt {
        &self.pi
    }

    /// The etale generator (a unit under the embedding).
    pub fn pi_bar(&self) -> QuadInt {
        self.pi.conj()
    }

    /// Same prime, the other place: pi and pi_bar swap roles.
    pub fn conjugate(&self) -> Self {
        Self::with_pi(self.pi.conj(), self.p).expect("conjugate has the same norm")
    }

    /// Replace pi by an associate `u * pi`; the embedding is unchanged.
    pub fn with_associate(&self, u: &QuadInt) -> Self {
        Self::with_pi(&self.pi * u, self.p).expect("associate has the same norm")
    }

    /// sqrt(-D) modulo p^k under the embedding.
    pub fn sqrt_minus_d(&self, k: u32) -> BigInt {
        let modulus = BigInt::from(self.p).pow(k);
        let c = -BigInt::from(self.field.d());
        lift_sqrt_big(&c, &BigInt::from(self.root0), &modulus)
    }

    /// sqrt(-D) mod p^k as a machine word.
    pub fn sqrt_minus_d_u64(&self, k: u32) -> Result<u64> {
        Zmod::new(self.p, k)?;
        Ok(self.sqrt_minus_d(k).to_u64().expect("fits"))
    }

    /// Embedded pi_bar as a residue mod p^k.
    pub fn pi_bar_unit(&self, k: u32) -> Result<u64> {
        let e = self.embed_quad(&self.pi_bar(), k)?;
        e.residue(k)
    }

    /// Embed (S + T sqrt(-D))/2 with integers S, T, to `cap` relative digits.
    fn embed_half(&self, s: &BigInt, t: &BigInt, cap: u32) -> Result<PadicNum> {
        if s.is_zero() && t.is_zero() {
            return Ok(PadicNum::zero(self.p, cap));
        }
        let p = BigInt::from(self.p);
        let mut k = cap + 2;
        loop {
            let modulus = p.pow(k);
            let r = self.sqrt_minus_d(k);
            let inv2 = mod_inverse_big(&BigInt::from(2), &modulus).expect("p odd");
            let v = ((s + t * r) * inv2).mod_floor(&modulus);
            let e = embed_big_residue(&v, self.p, cap, k)?;
            if e.digits() >= cap {
                return Ok(e);
            }
            k += cap;
        }
    }

    pub fn embed_quad(&self, q: &QuadInt, cap: u32) -> Result<PadicNum> {
        debug_assert_eq!(q.field(), self.field);
        let (s, t) = q.half_coords();
        self.embed_half(s, t, cap)
    }

    pub fn embed(&self, x: &QuadRat, cap: u32) -> Result<PadicNum> {
        debug_assert_eq!(x.field(), self.field);
        if x.is_zero() {
            return Ok(PadicNum::zero(self.p, cap));
        }
        let l = x.common_denominator();
        let lr = BigRat::from_integer(l.clone());
        let two = BigRat::from_integer(2.into());
        let s = (x.re() * &lr * &two).to_integer();
        let t = (x.im() * &lr * &two).to_integer();
        let num = self.embed_half(&s, &t, cap)?;
        let den = embed_rational(&lr, self.p, cap)?;
        num.div(&den)
    }

    pub fn embed_rational(&self, x: &BigRat, cap: u32) -> Result<PadicNum> {
        embed_rational(x, self.p, cap)
    }
}
