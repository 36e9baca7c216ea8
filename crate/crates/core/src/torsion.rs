//! x-coordinates of the etale p-torsion to precision p^2, and the
//! weighted-homogeneous kernel polynomial of the family.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{SplitPrime, Zmod};
use crate::cm::CMFamily;
use crate::curve::{division_poly, AffinePointR, CurveRing, Poly};
use crate::error::{Error, Result};

/// Largest prime the brute-force oracle accepts.
pub const ORACLE_LIMIT: u64 = 13;

/// x(T) = x0 + x1 p (mod p^2) for a point T of the etale kernel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TorsionRoot {
    pub x0: u64,
    pub x1: u64,
}

impl TorsionRoot {
    pub fn value(&self, p: u64) -> u64 {
        self.x0 + self.x1 * p
    }

    pub fn from_value(v: u64, p: u64) -> Self {
        TorsionRoot {
            x0: v % p,
            x1: (v / p) % p,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionTable {
    pub p: u64,
    /// A and B modulo p^3.
    pub a: u64,
    pub b: u64,
    pub cofactor: u64,
    /// Embedded pi_bar modulo p^2.
    pub pi_bar: u64,
    pub roots: Vec<TorsionRoot>,
}

impl TorsionTable {
    pub fn root_above(&self, x0: u64) -> Option<&TorsionRoot> {
        self.roots.iter().find(|r| r.x0 == x0 % self.p)
    }

    pub fn values(&self) -> Vec<u64> {
        self.roots.iter().map(|r| r.value(self.p)).collect()
    }
}

fn check_admissible(c: &CurveRing, cofactor: u64) -> Result<crate::curve::CurveFp> {
    let p = c.p();
    let e = c.reduction()?;
    let order = e.count_points();
    if order != cofactor * p || cofactor % p == 0 {
        return Err(Error::NotAdmissible { p, order });
    }
    Ok(e)
}

/// Lifts above x0 with third digit zero that pass the order-p test.
fn accepted_second_digits(c3: &CurveRing, x0: u64, y0: u64) -> Result<Vec<u64>> {
    let p = c3.p();
    let mut out = Vec::new();
    for x1 in 0..p {
        let pt = c3.lift_x(x0 + x1 * p, y0)?;
        if c3.order_p_test(&pt)? {
            out.push(x1);
        }
    }
    Ok(out)
}

/// Compute the etale torsion x-coordinates mod p^2.
///
/// A point of exact order p on the reduction comes from [d]P for the first
/// point P with [d]P != O; its multiples give the (p-1)/2 residues x0. Above
/// each, the p candidate second digits are lifted to Z/p^3 and exactly one
/// must pass the order-p test.
pub fn etale_torsion_x(c: &CurveRing, sp: &SplitPrime, cofactor: u64) -> Result<TorsionTable> {
    let p = c.p();
    if c.ring().exponent() < 3 {
        return Err(Error::InsufficientPrecision {
            needed: 3,
            have: c.ring().exponent() as i64,
        });
    }
    let c3 = c.truncate(3)?;
    let e = check_admissible(&c3, cofactor)?;
    let gen = e
        .point_with_nontrivial_multiple(cofactor)
        .ok_or(Error::NotAdmissible {
            p,
            order: e.count_points(),
        })?;
    let q = e.scalar_mul(cofactor, &gen);
    let seeds: Vec<(u64, u64)> = (1..=(p - 1) / 2)
        .map(|k| {
            let pt = e.scalar_mul(k, &q);
            (pt.x().expect("order p"), pt.y().expect("order p"))
        })
        .collect();
    let mut roots = seeds
        .par_iter()
        .map(|&(x0, y0)| {
            let acc = accepted_second_digits(&c3, x0, y0)?;
            match acc.as_slice() {
                [x1] => Ok(TorsionRoot { x0, x1: *x1 }),
                _ => Err(Error::InternalAmbiguity {
                    x0,
                    accepted: acc.len(),
                }),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    roots.sort();
    Ok(TorsionTable {
        p,
        a: c3.a(),
        b: c3.b(),
        cofactor,
        pi_bar: sp.pi_bar_unit(2)?,
        roots,
    })
}

/// Independent oracle: every x mod p^3, both y-lifts, keep order-p reductions
/// that pass the order-p test, truncate to p^2.
pub fn brute_force_torsion_x(
    c: &CurveRing,
    sp: &SplitPrime,
    cofactor: u64,
) -> Result<TorsionTable> {
    let p = c.p();
    if p > ORACLE_LIMIT {
        return Err(Error::OracleTooLarge(p));
    }
    let c3 = c.truncate(3)?;
    let e = check_admissible(&c3, cofactor)?;
    let ring = c3.ring();
    let mut found = BTreeSet::new();
    for x in 0..ring.modulus() {
        let r = c3.rhs(x) % p;
        if r == 0 {
            continue;
        }
        let Some(y) = crate::arith::sqrt_mod_prime(r, p) else {
            continue;
        };
        for y0 in [y, p - y] {
            let pt = c3.lift_x(x, y0)?;
            let pb = c3.reduce(&pt);
            if !e.scalar_mul(p, &pb).is_infinity() {
                continue;
            }
            if c3.order_p_test(&pt)? {
                found.insert(TorsionRoot::from_value(x % (p * p), p));
            }
        }
    }
    Ok(TorsionTable {
        p,
        a: c3.a(),
        b: c3.b(),
        cofactor,
        pi_bar: sp.pi_bar_unit(2)?,
        roots: found.into_iter().collect(),
    })
}

/// Number of x in {x0 + kp : 0 <= k < p^2} whose lift passes the order-p test.
pub fn accepted_lift_count(c: &CurveRing, x0: u64, y0: u64) -> Result<usize> {
    let c3 = c.truncate(3)?;
    let p = c3.p();
    let mut n = 0;
    for k in 0..p * p {
        let pt = c3.lift_x(x0 + k * p, y0)?;
        if c3.order_p_test(&pt)? {
            n += 1;
        }
    }
    Ok(n)
}

/// Phi(x, a) = sum_k c_k x^{n - wk} a^k mod p^2 with n = (p-1)/2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelPoly {
    pub d: u64,
    pub p: u64,
    pub weight: u32,
    pub degree: u32,
    /// c_0 .. c_K modulo p^2; c_0 is the embedded pi_bar.
    pub coeffs: Vec<u64>,
    /// Parameter of the fiber the polynomial was reconstructed from, mod p^2.
    pub source_a: u64,
}

impl KernelPoly {
    fn ring(&self) -> Zmod {
        Zmod::new(self.p, 2).expect("p^2 fits")
    }

    pub fn leading(&self) -> u64 {
        self.coeffs[0]
    }

    /// Phi(x, a) mod p^2.
    pub fn eval(&self, x: u64, a: u64) -> u64 {
        let r = self.ring();
        let w = self.weight as u64;
        let n = self.degree as u64;
        self.coeffs.iter().enumerate().fold(0, |acc, (k, c)| {
            let k = k as u64;
            let term = r.mul(*c, r.mul(r.pow(x, n - w * k), r.pow(a, k)));
            r.add(acc, term)
        })
    }

    /// (dPhi/dx, dPhi/da) at (x, a), mod p^2.
    pub fn gradient(&self, x: u64, a: u64) -> (u64, u64) {
        let r = self.ring();
        let w = self.weight as u64;
        let n = self.degree as u64;
        let (mut dx, mut da) = (0, 0);
        for (k, c) in self.coeffs.iter().enumerate() {
            let k = k as u64;
            let ex = n - w * k;
            if ex > 0 {
                let t = r.mul(
                    r.mul(*c, ex % r.modulus()),
                    r.mul(r.pow(x, ex - 1), r.pow(a, k)),
                );
                dx = r.add(dx, t);
            }
            if k > 0 {
                let t = r.mul(r.mul(*c, k), r.mul(r.pow(x, ex), r.pow(a, k - 1)));
                da = r.add(da, t);
            }
        }
        (dx, da)
    }

    /// Phi(x, a) as a polynomial in x, mod p^2.
    pub fn specialize(&self, a: u64) -> Poly<u64> {
        let r = self.ring();
        let n = self.degree as usize;
        let w = self.weight as usize;
        let mut c = vec![0u64; n + 1];
        for (k, ck) in self.coeffs.iter().enumerate() {
            c[n - w * k] = r.mul(*ck, r.pow(a, k as u64));
        }
        Poly::new(r, c)
    }

    /// Human-readable form, e.g. `9*x^2 + 7*a`.
    pub fn render(&self) -> String {
        let n = self.degree as usize;
        let w = self.weight as usize;
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(k, c)| {
                let ex = n - w * k;
                let mut t = c.to_string();
                match ex {
                    0 => {}
                    1 => t.push_str("*x"),
                    _ => t.push_str(&format!("*x^{ex}")),
                }
                match k {
                    0 => {}
                    1 => t.push_str("*a"),
                    _ => t.push_str(&format!("*a^{k}")),
                }
                t
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

/// Rebuild Phi from one fiber's roots: c_k = pi_bar * s_{wk} / a^k, where
/// s_j = (-1)^j e_j(roots) is the coefficient of x^{n-j} in prod (x - r).
pub fn reconstruct_family_poly(
    t: &TorsionTable,
    a: u64,
    sp: &SplitPrime,
    fam: &CMFamily,
) -> Result<KernelPoly> {
    let p = t.p;
    let r = Zmod::new(p, 2)?;
    let a = r.reduce(a);
    let a_inv = r.inv(a).ok_or(Error::NonUnitParameter)?;
    let w = fam.weight as usize;
    let n = ((p - 1) / 2) as usize;
    let monic = Poly::<u64>::from_roots(r, &t.values());
    let s = |j: usize| monic.coeff(n - j);
    for j in 1..=n {
        if j % w != 0 && s(j) != 0 {
            return Err(Error::HomogeneityViolation(j));
        }
    }
    let pi_bar = sp.pi_bar_unit(2)?;
    let coeffs = (0..=n / w)
        .map(|k| r.mul(pi_bar, r.mul(s(w * k), r.pow(a_inv, k as u64))))
        .collect();
    Ok(KernelPoly {
        d: fam.d(),
        p,
        weight: fam.weight,
        degree: n as u32,
        coeffs,
        source_a: a,
    })
}

/// Remainder of psi_p mod p^2 on division by the specialized kernel polynomial.
pub fn kernel_divides_division_poly(k: &KernelPoly, c: &CurveRing) -> Result<bool> {
    let c2 = c.truncate(2)?;
    let psi = division_poly::<u64>(k.p, c2.ring(), c2.a(), c2.b());
    let phi = k.specialize(k.source_a);
    let (_, rem) = psi.divrem(&phi)?;
    Ok(rem.is_zero())
}

/// Phi(b0, a0)/p + b1 dPhi/dx(b0, a0) + a1 dPhi/da(b0, a0) mod p.
pub fn taylor_criterion_value(
    k: &KernelPoly,
    b0: u64,
    b1: u64,
    a0: u64,
    a1: Option<u64>,
) -> Result<u64> {
    let p = k.p;
    let a1 = a1.ok_or(Error::MissingSecondDigit)?;
    let (b0, a0) = (b0 % p, a0 % p);
    let phi = k.eval(b0, a0);
    if phi % p != 0 {
        return Err(Error::NotATorsionResidue(b0));
    }
    let (dx, da) = k.gradient(b0, a0);
    let f = Zmod::new(p, 1)?;
    Ok(f.add(phi / p, f.add(f.mul(b1 % p, dx % p), f.mul(a1 % p, da % p))))
}

/// The unique b1 making the Taylor value vanish above the root residue b0.
pub fn failing_second_digit(k: &KernelPoly, b0: u64, a0: u64, a1: u64) -> Result<u64> {
    let hits: Vec<u64> = (0..k.p)
        .map(|b1| taylor_criterion_value(k, b0, b1, a0, Some(a1)).map(|v| (b1, v)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|(_, v)| *v == 0)
        .map(|(b1, _)| b1)
        .collect();
    match hits.as_slice() {
        [b1] => Ok(*b1),
        _ => Err(Error::InternalAmbiguity {
            x0: b0,
            accepted: hits.len(),
        }),
    }
}

/// x([2]P) = (x^4 - 2Ax^2 - 8Bx + A^2) / (4(x^3 + Ax + B)) over Z/p^N, when the denominator is a unit.
pub fn double_x_mod(c: &CurveRing, x: u64) -> Result<u64> {
    let r = c.ring();
    let (a, b) = (c.a(), c.b());
    let num = r.add(
        r.sub(
            r.sub(r.pow(x, 4), r.mul(2, r.mul(a, r.mul(x, x)))),
            r.mul(8, r.mul(b, x)),
        ),
        r.mul(a, a),
    );
    let den = r.mul(4, c.rhs(x));
    Ok(r.mul(num, r.inv(den).ok_or(Error::NonUnitSlope)?))
}

/// For a cofactor-2 fiber: for each b0 with f(b0) a nonzero square mod p,
/// the unique b1 for which the point over x = b0 + b1 p has [2]P congruent
/// to an etale torsion point mod p^2.
pub fn epsilon_table(c: &CurveRing, t: &TorsionTable) -> Result<Vec<(u64, u64)>> {
    let p = t.p;
    if t.cofactor != 2 {
        return Err(Error::BranchMismatch(format!(
            "epsilon table needs cofactor 2, got {}",
            t.cofactor
        )));
    }
    let c2 = c.truncate(2)?;
    let mut out = Vec::new();
    for b0 in 1..p {
        let r = c2.rhs(b0) % p;
        if r == 0 || crate::arith::sqrt_mod_prime(r, p).is_none() {
            continue;
        }
        let mut fails = Vec::new();
        for b1 in 0..p {
            let x2 = double_x_mod(&c2, b0 + b1 * p)?;
            let root = t.root_above(x2 % p).ok_or(Error::NoMatchingRoot(x2 % p))?;
            if root.value(p) == x2 {
                fails.push(b1);
            }
        }
        match fails.as_slice() {
            [b1] => out.push((b0, *b1)),
            _ => {
                return Err(Error::InternalAmbiguity {
                    x0: b0,
                    accepted: fails.len(),
                })
            }
        }
    }
    Ok(out)
}

/// Lift of a reduction point for callers that hold only residues.
pub fn lift_root(c: &CurveRing, root: &TorsionRoot) -> Result<AffinePointR> {
    let p = c.p();
    let r = c.rhs(root.value(p)) % p;
    let y0 = crate::arith::sqrt_mod_prime(r, p).ok_or(Error::NotOnCurve)?;
    c.truncate(3)?.lift_x(root.value(p), y0)
}
