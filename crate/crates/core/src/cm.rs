//! The nine CM families, admissible tuples and Frobenius orientation.

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, legendre, primes_in, BigRat, QuadField, QuadInt, SplitPrime, Zmod};
use crate::curve::CurveFp;
use crate::error::{Error, Result};

/// Exhaustive residue scans back the shortcut up to this bound.
pub const EXHAUSTIVE_LIMIT: u64 = 1000;

/// Largest prime accepted by the machine-word residue code.
pub const MAX_PRIME: u64 = 8191;

/// j-invariant of the CM curve with End = O_K.
pub fn cm_j_invariant(k: QuadField) -> BigInt {
    let j: i128 = match k.d() {
        1 => 1728,
        2 => 8000,
        3 => 0,
        7 => -3375,
        11 => -32768,
        19 => -884_736,
        43 => -884_736_000,
        67 => -147_197_952_000,
        163 => -262_537_412_640_768_000,
        _ => unreachable!("QuadField restricts D"),
    };
    BigInt::from(j)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyShape {
    /// y^2 = x^3 + a x
    Quartic,
    /// y^2 = x^3 + a
    Sextic,
    /// y^2 = x^3 + n a^2 x + m a^3
    Quadratic,
}

/// y^2 = f_a(x), one fiber per parameter a, all with the same CM j-invariant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CMFamily {
    pub field: QuadField,
    pub weight: u32,
    pub shape: FamilyShape,
    #[serde(with = "crate::serde_str::bigint")]
    pub n: BigInt,
    #[serde(with = "crate::serde_str::bigint")]
    pub m: BigInt,
}

/// Strip q^2 from n and q^3 from m for every q dividing both that way.
fn reduce_twist(mut n: BigInt, mut m: BigInt) -> (BigInt, BigInt) {
    let mut q = BigInt::from(2);
    loop {
        let q2 = &q * &q;
        let q3 = &q2 * &q;
        if q2 > n.abs() {
            break;
        }
        while (&n % &q2).is_zero() && (&m % &q3).is_zero() {
            n /= &q2;
            m /= &q3;
        }
        q += 1;
    }
    if m.is_negative() {
        m = -m;
    }
    (n, m)
}

pub fn family(d: i64) -> Result<CMFamily> {
    let field = QuadField::new(d)?;
    let weight = field.weight();
    let (shape, n, m) = match field.d() {
        1 => (FamilyShape::Quartic, BigInt::one(), BigInt::zero()),
        3 => (FamilyShape::Sextic, BigInt::zero(), BigInt::one()),
        _ => {
            // y^2 = x^3 + 3k c^2 x + 2k c^3 has j = 1728 k/(k+1); k = j/(1728 - j), c = denominator
            let j = cm_j_invariant(field);
            let k = BigRat::new(j.clone(), BigInt::from(1728) - &j);
            let (p, q) = (k.numer().clone(), k.denom().clone());
            let n = BigInt::from(3) * &p * &q;
            let m = BigInt::from(2) * &p * &q * &q;
            let (n, m) = reduce_twist(n, m);
            (FamilyShape::Quadratic, n, m)
        }
    };
    Ok(CMFamily {
        field,
        weight,
        shape,
        n,
        m,
    })
}

impl CMFamily {
    pub fn d(&self) -> u64 {
        self.field.d()
    }

    /// (A, B) of the fiber at a.
    pub fn fiber(&self, a: &BigInt) -> (BigInt, BigInt) {
        match self.shape {
            FamilyShape::Quartic => (a.clone(), BigInt::zero()),
            FamilyShape::Sextic => (BigInt::zero(), a.clone()),
            FamilyShape::Quadratic => (&self.n * a * a, &self.m * a * a * a),
        }
    }

    /// (A, B) mod p of the fiber at a residue a0.
    pub fn fiber_mod(&self, a0: u64, p: u64) -> (u64, u64) {
        let f = Zmod::new(p, 1).expect("p fits");
        match self.shape {
            FamilyShape::Quartic => (f.reduce(a0), 0),
            FamilyShape::Sextic => (0, f.reduce(a0)),
            FamilyShape::Quadratic => (
                f.mul(f.from_bigint(&self.n), f.pow(a0, 2)),
                f.mul(f.from_bigint(&self.m), f.pow(a0, 3)),
            ),
        }
    }

    /// The parameter a with (A, B) = fiber(a), if the curve belongs to the family.
    pub fn parameter_of(&self, a: &BigInt, b: &BigInt) -> Result<BigRat> {
        let not_in = || Error::NotInFamily(self.d());
        let param = match self.shape {
            FamilyShape::Quartic => {
                if !b.is_zero() || a.is_zero() {
                    return Err(not_in());
                }
                BigRat::from_integer(a.clone())
            }
            FamilyShape::Sextic => {
                if !a.is_zero() || b.is_zero() {
                    return Err(not_in());
                }
                BigRat::from_integer(b.clone())
            }
            FamilyShape::Quadratic => {
                if a.is_zero() || b.is_zero() {
                    return Err(not_in());
                }
                BigRat::new(b * &self.n, a * &self.m)
            }
        };
        if self.shape == FamilyShape::Quadratic {
            let n = BigRat::from_integer(self.n.clone());
            let m = BigRat::from_integer(self.m.clone());
            let ok = &n * &param * &param == BigRat::from_integer(a.clone())
                && &m * &param * &param * &param == BigRat::from_integer(b.clone());
            if !ok {
                return Err(not_in());
            }
        }
        Ok(param)
    }

    /// j-invariant of the fiber (A, B), exact.
    pub fn j_of(a: &BigInt, b: &BigInt) -> Option<BigRat> {
        let a3 = BigInt::from(4) * a * a * a;
        let den = &a3 + BigInt::from(27) * b * b;
        (!den.is_zero()).then(|| BigRat::new(BigInt::from(1728) * a3, den))
    }
}

/// A fiber of a CM family whose reduction has order divisible by p.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibleTuple {
    pub d: u64,
    pub p: u64,
    pub a0: u64,
    pub order: u64,
    pub cofactor: u64,
}

fn check_split(k: QuadField, p: u64) -> Result<()> {
    if !(5..=MAX_PRIME).contains(&p) || !is_prime(p) {
        return Err(Error::BadPrime(p));
    }
    if legendre(-(k.d() as i64), p) != 1 {
        return Err(Error::NonSplitPrime { d: k.d(), p });
    }
    Ok(())
}

/// All a0 in F_p^x whose fiber has good reduction and order divisible by p.
pub fn admissible_residues(d: i64, p: u64) -> Result<Vec<AdmissibleTuple>> {
    let fam = family(d)?;
    check_split(fam.field, p)?;
    Ok(scan_residues(&fam, p))
}

fn scan_residues(fam: &CMFamily, p: u64) -> Vec<AdmissibleTuple> {
    (1..p)
        .filter_map(|a0| {
            let (a, b) = fam.fiber_mod(a0, p);
            let e = CurveFp::from_residues(p, a, b).ok()?;
            let order = e.count_points();
            (order % p == 0).then_some(AdmissibleTuple {
                d: fam.d(),
                p,
                a0,
                order,
                cofactor: order / p,
            })
        })
        .collect()
}

/// Norm-trace shortcut: a fiber of order exactly p needs trace 1, i.e.
/// 4p = 1 + Dc^2; a cofactor d >= 2 forces p - 1 <= 2 sqrt(p), leaving (D, p) = (1, 5).
fn shortcut_admissible(d: u64, p: u64) -> bool {
    if d == 1 && p == 5 {
        return true;
    }
    let rest = 4 * p - 1;
    if rest % d != 0 {
        return false;
    }
    let c2 = rest / d;
    let c = c2.sqrt();
    c * c == c2
}

/// Primes 5 <= p <= pmax admitting an admissible tuple, ascending.
///
/// Primes below [`EXHAUSTIVE_LIMIT`] are also decided by an exhaustive
/// residue scan, and any disagreement is an error.
pub fn admissible_primes(d: i64, pmax: u64) -> Result<Vec<u64>> {
    let fam = family(d)?;
    if pmax > MAX_PRIME {
        return Err(Error::BadPrime(pmax));
    }
    let k = fam.field;
    let split: Vec<u64> = primes_in(5, pmax + 1)
        .into_iter()
        .filter(|&p| legendre(-(k.d() as i64), p) == 1)
        .collect();
    let decided: Vec<Result<Option<u64>>> = split
        .par_iter()
        .map(|&p| {
            let fast = shortcut_admissible(k.d(), p);
            if p < EXHAUSTIVE_LIMIT {
                let slow = !scan_residues(&fam, p).is_empty();
                if fast != slow {
                    return Err(Error::CrossCheckMismatch(format!(
                        "D = {}, p = {p}: shortcut says {fast}, scan says {slow}",
                        k.d()
                    )));
                }
            }
            Ok(fast.then_some(p))
        })
        .collect();
    let mut out = Vec::new();
    for r in decided {
        if let Some(p) = r? {
            out.push(p);
        }
    }
    Ok(out)
}

/// The Frobenius of a fiber as an element of O_K, placed relative to the embedding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frobenius {
    /// alpha with norm p and trace t whose embedding has positive valuation.
    pub alpha: QuadInt,
    pub trace: i64,
    pub order: u64,
}

/// Find the element of trace p + 1 - #E(F_p) that the embedding sends into pZ_p.
///
/// Associates of pi and of pi_bar have the same traces, so such an element is
/// always an associate of pi; the conjugate one is the etale generator.
pub fn orient_frobenius(e: &CurveFp, sp: &SplitPrime) -> Result<Frobenius> {
    let p = sp.p();
    let order = e.count_points();
    let trace = p as i64 + 1 - order as i64;
    if trace.rem_euclid(p as i64) == 0 {
        return Err(Error::SupersingularFiber);
    }
    let units = sp.field().units();
    let mut candidates = Vec::new();
    for g in [sp.pi().clone(), sp.pi_bar()] {
        for u in &units {
            let c = &g * u;
            if c.trace() == BigInt::from(trace) {
                candidates.push(c);
            }
        }
    }
    for c in candidates {
        let v = sp.embed_quad(&c, 2)?.valuation();
        if v.is_some_and(|v| v >= 1) {
            return Ok(Frobenius {
                alpha: c,
                trace,
                order,
            });
        }
    }
    Err(Error::NoFrobenius(trace))
}

/// Classify a concrete curve y^2 = x^3 + Ax + B at p as an admissible fiber of the D family.
pub fn classify_curve(
    fam: &CMFamily,
    p: u64,
    a: &BigInt,
    b: &BigInt,
) -> Result<(AdmissibleTuple, BigRat)> {
    check_split(fam.field, p)?;
    let param = fam.parameter_of(a, b)?;
    let f = Zmod::new(p, 1)?;
    let e = CurveFp::from_residues(p, f.from_bigint(a), f.from_bigint(b))?;
    let order = e.count_points();
    if order % p != 0 {
        return Err(Error::NotAdmissible { p, order });
    }
    let (vn, _) = crate::arith::rational::split_valuation(param.numer(), p);
    let (vd, _) = crate::arith::rational::split_valuation(param.denom(), p);
    if vn != 0 || vd != 0 {
        return Err(Error::NonUnitParameter);
    }
    let a0 = f.mul(
        f.from_bigint(param.numer()),
        f.inv(f.from_bigint(param.denom())).expect("unit"),
    );
    Ok((
        AdmissibleTuple {
            d: fam.d(),
            p,
            a0,
            order,
            cofactor: order / p,
        },
        param,
    ))
}
