use serde::{Deserialize, Serialize};

use crate::arith::{QuadraticCharacter, Zmod};
use crate::error::{Error, Result};

/// y^2 = x^3 + Ax + B over F_p with good reduction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CurveFp {
    p: u64,
    a: u64,
    b: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PointFp {
    Infinity,
    Affine { x: u64, y: u64 },
}

impl PointFp {
    pub fn x(&self) -> Option<u64> {
        match self {
            PointFp::Infinity => None,
            PointFp::Affine { x, .. } => Some(*x),
        }
    }

    pub fn y(&self) -> Option<u64> {
        match self {
            PointFp::Infinity => None,
            PointFp::Affine { y, .. } => Some(*y),
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, PointFp::Infinity)
    }
}

impl CurveFp {
    pub fn new(p: u64, a: i64, b: i64) -> Result<Self> {
        let f = Zmod::new(p, 1)?;
        Self::from_residues(p, f.from_i64(a), f.from_i64(b))
    }

    pub fn from_residues(p: u64, a: u64, b: u64) -> Result<Self> {
        if p < 3 || p % 2 == 0 {
            return Err(Error::BadPrime(p));
        }
        let f = Zmod::new(p, 1)?;
        let (a, b) = (f.reduce(a), f.reduce(b));
        let disc = f.add(f.mul(4, f.pow(a, 3)), f.mul(27, f.mul(b, b)));
        if disc == 0 {
            return Err(Error::BadReduction(p));
        }
        Ok(CurveFp { p, a, b })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    fn field(&self) -> Zmod {
        Zmod::new(self.p, 1).expect("p fits")
    }

    /// x^3 + Ax + B.
    pub fn rhs(&self, x: u64) -> u64 {
        let f = self.field();
        f.add(f.add(f.pow(x, 3), f.mul(self.a, x)), self.b)
    }

    pub fn contains(&self, pt: &PointFp) -> bool {
        match *pt {
            PointFp::Infinity => true,
            PointFp::Affine { x, y } => {
                let f = self.field();
                x < self.p && y < self.p && f.mul(y, y) == self.rhs(x)
            }
        }
    }

    /// Point count by the character sum p + 1 + sum chi(x^3 + Ax + B).
    pub fn count_points(&self) -> u64 {
        let chi = QuadraticCharacter::new(self.p);
        let s: i64 = (0..self.p).map(|x| chi.chi(self.rhs(x))).sum();
        let m = self.p as i64 + 1 + s;
        let dev = (m - self.p as i64 - 1).unsigned_abs();
        assert!(dev * dev <= 4 * self.p, "Hasse bound violated");
        m as u64
    }

    /// Frobenius trace t = p + 1 - #E(F_p).
    pub fn trace(&self) -> i64 {
        self.p as i64 + 1 - self.count_points() as i64
    }

    pub fn neg(&self, pt: &PointFp) -> PointFp {
        match *pt {
            PointFp::Infinity => PointFp::Infinity,
            PointFp::Affine { x, y } => PointFp::Affine {
                x,
                y: self.field().neg(y),
            },
        }
    }

    pub fn add(&self, p1: &PointFp, p2: &PointFp) -> PointFp {
        let f = self.field();
        let (x1, y1, x2, y2) = match (*p1, *p2) {
            (PointFp::Infinity, q) | (q, PointFp::Infinity) => return q,
            (PointFp::Affine { x: x1, y: y1 }, PointFp::Affine { x: x2, y: y2 }) => {
                (x1, y1, x2, y2)
            }
        };
        let lambda = if x1 == x2 {
            if f.add(y1, y2) == 0 {
                return PointFp::Infinity;
            }
            let num = f.add(f.mul(3, f.mul(x1, x1)), self.a);
            f.mul(num, f.inv(f.mul(2, y1)).expect("nonzero"))
        } else {
            f.mul(f.sub(y2, y1), f.inv(f.sub(x2, x1)).expect("nonzero"))
        };
        let x3 = f.sub(f.sub(f.mul(lambda, lambda), x1), x2);
        let y3 = f.sub(f.mul(lambda, f.sub(x1, x3)), y1);
        PointFp::Affine { x: x3, y: y3 }
    }

    pub fn scalar_mul(&self, k: u64, pt: &PointFp) -> PointFp {
        let mut acc = PointFp::Infinity;
        let mut base = *pt;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            base = self.add(&base, &base);
            k >>= 1;
        }
        acc
    }

    /// Exact order of a point, given a multiple `m` of it (e.g. the group order).
    pub fn order_of(&self, pt: &PointFp, m: u64) -> u64 {
        let mut n = m;
        let mut q = 2;
        let mut rest = m;
        while rest > 1 {
            if rest % q == 0 {
                while rest % q == 0 {
                    rest /= q;
                }
                while n % q == 0 && self.scalar_mul(n / q, pt).is_infinity() {
                    n /= q;
                }
            }
            q += 1;
        }
        n
    }

    /// Every affine point, x ascending then y ascending.
    pub fn points(&self) -> Vec<PointFp> {
        let f = self.field();
        let mut out = Vec::new();
        for x in 0..self.p {
            let r = self.rhs(x);
            if r == 0 {
                out.push(PointFp::Affine { x, y: 0 });
                continue;
            }
            if let Some(y) = crate::arith::sqrt_mod_prime(r, self.p) {
                let (y0, y1) = (y.min(f.neg(y)), y.max(f.neg(y)));
                out.push(PointFp::Affine { x, y: y0 });
                out.push(PointFp::Affine { x, y: y1 });
            }
        }
        out
    }

    /// First point, in x order, whose `d`-multiple is not the identity.
    pub fn point_with_nontrivial_multiple(&self, d: u64) -> Option<PointFp> {
        self.points()
            .into_iter()
            .find(|pt| !self.scalar_mul(d, pt).is_infinity())
    }
}
