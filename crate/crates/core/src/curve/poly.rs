//! Dense univariate polynomials and division polynomials.

use std::collections::HashMap;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{BigRat, QuadField, QuadRat, Zmod};
use crate::error::{Error, Result};

/// A coefficient ring, with any parameters (such as a modulus) carried in `Ctx`.
pub trait Coeff: Clone + PartialEq + Debug {
    type Ctx: Clone + PartialEq + Debug;
    fn zero(ctx: &Self::Ctx) -> Self;
    fn from_i64(ctx: &Self::Ctx, n: i64) -> Self;
    fn is_zero(&self, ctx: &Self::Ctx) -> bool;
    fn add(&self, o: &Self, ctx: &Self::Ctx) -> Self;
    fn sub(&self, o: &Self, ctx: &Self::Ctx) -> Self;
    fn mul(&self, o: &Self, ctx: &Self::Ctx) -> Self;
    fn inv(&self, ctx: &Self::Ctx) -> Option<Self>;
}

impl Coeff for u64 {
    type Ctx = Zmod;
    fn zero(_: &Zmod) -> Self {
        0
    }
    fn from_i64(r: &Zmod, n: i64) -> Self {
        r.from_i64(n)
    }
    fn is_zero(&self, r: &Zmod) -> bool {
        r.reduce(*self) == 0
    }
    fn add(&self, o: &Self, r: &Zmod) -> Self {
        r.add(*self, *o)
    }
    fn sub(&self, o: &Self, r: &Zmod) -> Self {
        r.sub(*self, *o)
    }
    fn mul(&self, o: &Self, r: &Zmod) -> Self {
        r.mul(*self, *o)
    }
    fn inv(&self, r: &Zmod) -> Option<Self> {
        r.inv(*self)
    }
}

impl Coeff for BigInt {
    type Ctx = ();
    fn zero(_: &()) -> Self {
        <BigInt as Zero>::zero()
    }
    fn from_i64(_: &(), n: i64) -> Self {
        n.into()
    }
    fn is_zero(&self, _: &()) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self, _: &()) -> Self {
        self + o
    }
    fn sub(&self, o: &Self, _: &()) -> Self {
        self - o
    }
    fn mul(&self, o: &Self, _: &()) -> Self {
        self * o
    }
    fn inv(&self, _: &()) -> Option<Self> {
        (self.is_one() || (-self).is_one()).then(|| self.clone())
    }
}

impl Coeff for BigRat {
    type Ctx = ();
    fn zero(_: &()) -> Self {
        <BigRat as Zero>::zero()
    }
    fn from_i64(_: &(), n: i64) -> Self {
        BigRat::from_integer(n.into())
    }
    fn is_zero(&self, _: &()) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self, _: &()) -> Self {
        self + o
    }
    fn sub(&self, o: &Self, _: &()) -> Self {
        self - o
    }
    fn mul(&self, o: &Self, _: &()) -> Self {
        self * o
    }
    fn inv(&self, _: &()) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
}

impl Coeff for QuadRat {
    type Ctx = QuadField;
    fn zero(k: &QuadField) -> Self {
        QuadRat::zero(*k)
    }
    fn from_i64(k: &QuadField, n: i64) -> Self {
        QuadRat::from_int(*k, n)
    }
    fn is_zero(&self, _: &QuadField) -> bool {
        QuadRat::is_zero(self)
    }
    fn add(&self, o: &Self, _: &QuadField) -> Self {
        self + o
    }
    fn sub(&self, o: &Self, _: &QuadField) -> Self {
        self - o
    }
    fn mul(&self, o: &Self, _: &QuadField) -> Self {
        self * o
    }
    fn inv(&self, _: &QuadField) -> Option<Self> {
        QuadRat::inv(self).ok()
    }
}

/// Polynomial with coefficients in ascending degree, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<C: Coeff> {
    ctx: C::Ctx,
    coeffs: Vec<C>,
}

impl<C: Coeff> Poly<C> {
    pub fn new(ctx: C::Ctx, coeffs: Vec<C>) -> Self {
        let mut p = Poly { ctx, coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero(&self.ctx)) {
            self.coeffs.pop();
        }
    }

    pub fn zero(ctx: C::Ctx) -> Self {
        Poly {
            ctx,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(ctx: C::Ctx, c: C) -> Self {
        Self::new(ctx, vec![c])
    }

    pub fn from_i64(ctx: C::Ctx, n: i64) -> Self {
        let c = C::from_i64(&ctx, n);
        Self::constant(ctx, c)
    }

    /// The monomial x.
    pub fn x(ctx: C::Ctx) -> Self {
        let coeffs = vec![C::zero(&ctx), C::from_i64(&ctx, 1)];
        Self::new(ctx, coeffs)
    }

    /// prod (x - r).
    pub fn from_roots(ctx: C::Ctx, roots: &[C]) -> Self {
        let mut acc = Self::from_i64(ctx.clone(), 1);
        for r in roots {
            let lin = Self::new(
                ctx.clone(),
                vec![C::zero(&ctx).sub(r, &ctx), C::from_i64(&ctx, 1)],
            );
            acc = acc.mul(&lin);
        }
        acc
    }

    pub fn ctx(&self) -> &C::Ctx {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> C {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| C::zero(&self.ctx))
    }

    pub fn leading(&self) -> Option<&C> {
        self.coeffs.last()
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n)
            .map(|i| self.coeff(i).add(&o.coeff(i), &self.ctx))
            .collect();
        Self::new(self.ctx.clone(), c)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n)
            .map(|i| self.coeff(i).sub(&o.coeff(i), &self.ctx))
            .collect();
        Self::new(self.ctx.clone(), c)
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.ctx.clone());
        }
        let ctx = &self.ctx;
        let mut c = vec![C::zero(ctx); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero(ctx) {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] = c[i + j].add(&a.mul(b, ctx), ctx);
            }
        }
        Self::new(ctx.clone(), c)
    }

    pub fn scale(&self, s: &C) -> Self {
        let c = self.coeffs.iter().map(|a| a.mul(s, &self.ctx)).collect();
        Self::new(self.ctx.clone(), c)
    }

    pub fn eval(&self, x: &C) -> C {
        let ctx = &self.ctx;
        self.coeffs
            .iter()
            .rev()
            .fold(C::zero(ctx), |acc, c| acc.mul(x, ctx).add(c, ctx))
    }

    pub fn derivative(&self) -> Self {
        let ctx = &self.ctx;
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, a)| a.mul(&C::from_i64(ctx, i as i64), ctx))
            .collect();
        Self::new(ctx.clone(), c)
    }

    /// Quotient and remainder; the divisor's leading coefficient must be invertible.
    pub fn divrem(&self, d: &Self) -> Result<(Self, Self)> {
        let ctx = &self.ctx;
        let lead = d.leading().ok_or(Error::DivisionByZero)?;
        let inv = lead.inv(ctx).ok_or(Error::DivisionByZero)?;
        let dd = d.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Self::zero(ctx.clone()), self.clone()));
        }
        let mut q = vec![C::zero(ctx); r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = r[i].mul(&inv, ctx);
            if c.is_zero(ctx) {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                let k = i - dd + j;
                r[k] = r[k].sub(&c.mul(dc, ctx), ctx);
            }
            q[i - dd] = c;
        }
        r.truncate(dd);
        Ok((Self::new(ctx.clone(), q), Self::new(ctx.clone(), r)))
    }
}

/// Minimal ring interface for the division-polynomial recursion.
pub trait RingElem: Clone {
    fn r_add(&self, o: &Self) -> Self;
    fn r_sub(&self, o: &Self) -> Self;
    fn r_mul(&self, o: &Self) -> Self;
    /// The integer n in the same ring as `self`.
    fn r_int(&self, n: i64) -> Self;
}

impl<C: Coeff> RingElem for Poly<C> {
    fn r_add(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn r_sub(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn r_mul(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn r_int(&self, n: i64) -> Self {
        Poly::from_i64(self.ctx.clone(), n)
    }
}

impl RingElem for QuadRat {
    fn r_add(&self, o: &Self) -> Self {
        self + o
    }
    fn r_sub(&self, o: &Self) -> Self {
        self - o
    }
    fn r_mul(&self, o: &Self) -> Self {
        self * o
    }
    fn r_int(&self, n: i64) -> Self {
        QuadRat::from_int(self.field(), n)
    }
}

impl RingElem for crate::arith::PadicNum {
    fn r_add(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn r_sub(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn r_mul(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn r_int(&self, n: i64) -> Self {
        crate::arith::PadicNum::from_i64(n, self.prime(), self.cap())
    }
}

/// Ring elements that can also be divided.
pub trait FieldElem: RingElem {
    fn f_is_zero(&self) -> bool;
    fn f_div(&self, o: &Self) -> Option<Self>;
}

impl FieldElem for QuadRat {
    fn f_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn f_div(&self, o: &Self) -> Option<Self> {
        (self / o).ok()
    }
}

impl FieldElem for crate::arith::PadicNum {
    fn f_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn f_div(&self, o: &Self) -> Option<Self> {
        self.div(o).ok()
    }
}

/// x([d]P) from x(P) alone; `None` when [d]P = O (or the denominator vanishes to precision).
///
/// x([d]P) = x - psi_{d-1} psi_{d+1} / psi_d^2, written with the f_n.
pub fn x_multiple<R: FieldElem>(d: u64, x: &R, a: &R, b: &R) -> Option<R> {
    assert!(d >= 1);
    if d == 1 {
        return Some(x.clone());
    }
    let mut seq = DivisionSeq::new(x, a, b);
    let (fm, f, fp) = (seq.get(d - 1), seq.get(d), seq.get(d + 1));
    let (num, den) = if d % 2 == 0 {
        (fm.r_mul(&fp), seq.g.r_mul(&f.r_mul(&f)))
    } else {
        (seq.g.r_mul(&fm.r_mul(&fp)), f.r_mul(&f))
    };
    if den.f_is_zero() {
        return None;
    }
    Some(x.r_sub(&num.f_div(&den)?))
}

/// Division polynomials f_n in x alone: f_n = psi_n for odd n and
/// psi_n / (2y) for even n, with g = (2y)^2 = 4(x^3 + Ax + B).
struct DivisionSeq<R: RingElem> {
    g: R,
    memo: HashMap<u64, R>,
}

impl<R: RingElem> DivisionSeq<R> {
    fn new(x: &R, a: &R, b: &R) -> Self {
        let int = |n| x.r_int(n);
        let x2 = x.r_mul(x);
        let x3 = x2.r_mul(x);
        let a2 = a.r_mul(a);
        let g = int(4).r_mul(&x3.r_add(&a.r_mul(x)).r_add(b));
        // 3x^4 + 6Ax^2 + 12Bx - A^2
        let f3 = int(3)
            .r_mul(&x2.r_mul(&x2))
            .r_add(&int(6).r_mul(&a.r_mul(&x2)))
            .r_add(&int(12).r_mul(&b.r_mul(x)))
            .r_sub(&a2);
        // 2(x^6 + 5Ax^4 + 20Bx^3 - 5A^2x^2 - 4ABx - 8B^2 - A^3)
        let f4 = int(2).r_mul(
            &x3.r_mul(&x3)
                .r_add(&int(5).r_mul(&a.r_mul(&x2.r_mul(&x2))))
                .r_add(&int(20).r_mul(&b.r_mul(&x3)))
                .r_sub(&int(5).r_mul(&a2.r_mul(&x2)))
                .r_sub(&int(4).r_mul(&a.r_mul(&b.r_mul(x))))
                .r_sub(&int(8).r_mul(&b.r_mul(b)))
                .r_sub(&a2.r_mul(a)),
        );
        let mut memo = HashMap::new();
        memo.insert(0, int(0));
        memo.insert(1, int(1));
        memo.insert(2, int(1));
        memo.insert(3, f3);
        memo.insert(4, f4);
        DivisionSeq { g, memo }
    }

    fn get(&mut self, n: u64) -> R {
        if let Some(v) = self.memo.get(&n) {
            return v.clone();
        }
        let m = n / 2;
        let v = if n % 2 == 1 {
            let fm2 = self.get(m + 2);
            let fm1 = self.get(m + 1);
            let fm = self.get(m);
            let fmm1 = self.get(m - 1);
            let g2 = self.g.r_mul(&self.g);
            let t1 = fm2.r_mul(&fm.r_mul(&fm).r_mul(&fm));
            let t2 = fmm1.r_mul(&fm1.r_mul(&fm1).r_mul(&fm1));
            if m % 2 == 0 {
                g2.r_mul(&t1).r_sub(&t2)
            } else {
                t1.r_sub(&g2.r_mul(&t2))
            }
        } else {
            let fm2 = self.get(m + 2);
            let fm1 = self.get(m + 1);
            let fm = self.get(m);
            let fmm1 = self.get(m - 1);
            let fmm2 = self.get(m - 2);
            fm.r_mul(
                &fm2.r_mul(&fmm1.r_mul(&fmm1))
                    .r_sub(&fmm2.r_mul(&fm1.r_mul(&fm1))),
            )
        };
        self.memo.insert(n, v.clone());
        v
    }
}

/// f_n evaluated in any ring, with x, A, B given as ring elements.
pub fn division_value<R: RingElem>(n: u64, x: &R, a: &R, b: &R) -> R {
    DivisionSeq::new(x, a, b).get(n)
}

/// The odd division polynomial psi_m as a polynomial in x.
pub fn division_poly<C: Coeff>(m: u64, ctx: C::Ctx, a: C, b: C) -> Poly<C> {
    assert!(m % 2 == 1, "odd index expected");
    let x = Poly::x(ctx.clone());
    let a = Poly::constant(ctx.clone(), a);
    let b = Poly::constant(ctx, b);
    division_value(m, &x, &a, &b)
}
