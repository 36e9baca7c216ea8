//! Residue arithmetic modulo p^n in a single machine word.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest modulus accepted; keeps every product inside a u128.
pub const MODULUS_LIMIT: u64 = 1 << 62;

/// The ring Z/p^n for an odd prime p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Zmod {
    p: u64,
    n: u32,
    m: u64,
}

impl Zmod {
    pub fn new(p: u64, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::PrecisionOverflow { p, n });
        }
        let mut m: u64 = 1;
        for _ in 0..n {
            m = m
                .checked_mul(p)
                .filter(|&v| v <= MODULUS_LIMIT)
                .ok_or(Error::PrecisionOverflow { p, n })?;
        }
        Ok(Zmod { p, n, m })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn exponent(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    /// Same prime, different exponent.
    pub fn with_exponent(&self, n: u32) -> Result<Self> {
        Zmod::new(self.p, n)
    }

    pub fn reduce(&self, a: u64) -> u64 {
        a % self.m
    }

    pub fn from_i64(&self, a: i64) -> u64 {
        (a as i128).rem_euclid(self.m as i128) as u64
    }

    pub fn from_bigint(&self, a: &BigInt) -> u64 {
        a.mod_floor(&BigInt::from(self.m))
            .to_u64()
            .expect("residue fits")
    }

    /// Symmetric representative in (-m/2, m/2].
    pub fn signed(&self, a: u64) -> i64 {
        let a = a % self.m;
        if a > self.m / 2 {
            a as i64 - self.m as i64
        } else {
            a as i64
        }
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a as u128 + b as u128;
        (s % self.m as u128) as u64
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        let (a, b) = (a % self.m, b % self.m);
        if a >= b {
            a - b
        } else {
            self.m - (b - a)
        }
    }

    pub fn neg(&self, a: u64) -> u64 {
        let a = a % self.m;
        if a == 0 {
            0
        } else {
            self.m - a
        }
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.m as u128) as u64
    }

    pub fn pow(&self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = 1 % self.m;
        base %= self.m;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn is_unit(&self, a: u64) -> bool {
        a % self.p != 0
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        if !self.is_unit(a) {
            return None;
        }
        let (mut r0, mut r1) = (self.m as i128, (a % self.m) as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Some(t0.rem_euclid(self.m as i128) as u64)
    }

    /// p-adic valuation of a residue, capped at n (0 is "divisible by p^n").
    pub fn valuation(&self, a: u64) -> u32 {
        let mut a = a % self.m;
        if a == 0 {
            return self.n;
        }
        let mut v = 0;
        while a % self.p == 0 {
            a /= self.p;
            v += 1;
        }
        v
    }

    /// Square root by Hensel lifting; see [`hensel_sqrt`].
    pub fn sqrt(&self, c: u64) -> Result<u64> {
        hensel_sqrt(c, self.p, self.n)
    }
}

/// Square root of a residue modulo p (Tonelli-Shanks). Returns `None` for non-residues.
pub fn sqrt_mod_prime(c: u64, p: u64) -> Option<u64> {
    let f = Zmod { p, n: 1, m: p };
    let c = c % p;
    if c == 0 {
        return Some(0);
    }
    if f.pow(c, (p - 1) / 2) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(f.pow(c, (p + 1) / 4));
    }
    let mut q = p - 1;
    let mut s = 0;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while f.pow(z, (p - 1) / 2) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut cc = f.pow(z, q);
    let mut t = f.pow(c, q);
    let mut r = f.pow(c, q.div_ceil(2));
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = f.mul(t2, t2);
            i += 1;
        }
        let mut b = cc;
        for _ in 0..(m - i - 1) {
            b = f.mul(b, b);
        }
        m = i;
        cc = f.mul(b, b);
        t = f.mul(t, cc);
        r = f.mul(r, b);
    }
    Some(r)
}

/// Square root of `c` modulo p^n.
///
/// The root returned is the one whose residue mod p lies in `1..=(p-1)/2`.
pub fn hensel_sqrt(c: u64, p: u64, n: u32) -> Result<u64> {
    let ring = Zmod::new(p, n)?;
    let c = c % ring.m;
    if c % p == 0 {
        return Err(Error::ZeroDivisor { c, p });
    }
    let r0 = sqrt_mod_prime(c % p, p).ok_or(Error::NonResidue { c, p })?;
    let r0 = r0.min(p - r0);
    Ok(lift_sqrt(&ring, c, r0))
}

/// Newton iteration r <- r - (r^2 - c) / 2r starting from a root mod p.
pub(crate) fn lift_sqrt(ring: &Zmod, c: u64, r0: u64) -> u64 {
    let mut r = r0 % ring.m;
    let mut prec = 1;
    while prec < ring.n {
        let err = ring.sub(ring.mul(r, r), c);
        let inv2r = ring.inv(ring.mul(2, r)).expect("root of a unit is a unit");
        r = ring.sub(r, ring.mul(err, inv2r));
        prec *= 2;
    }
    r
}

/// Same Newton iteration for arbitrary-precision residues.
pub(crate) fn lift_sqrt_big(c: &BigInt, r0: &BigInt, modulus: &BigInt) -> BigInt {
    let mut r = r0.mod_floor(modulus);
    loop {
        let err = (&r * &r - c).mod_floor(modulus);
        if err.is_zero() {
            return r;
        }
        let inv = mod_inverse_big(&(&r * 2), modulus).expect("root of a unit is a unit");
        r = (&r - err * inv).mod_floor(modulus);
    }
}

pub(crate) fn mod_inverse_big(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let g = a.extended_gcd(m);
    if !g.gcd.abs().eq(&BigInt::from(1)) {
        return None;
    }
    let x = if g.gcd.is_negative() { -g.x } else { g.x };
    Some(x.mod_floor(m))
}
