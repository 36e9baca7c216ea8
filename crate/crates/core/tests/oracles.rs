//! Library results against independent computations written here.

use std::collections::BTreeSet;

use cmcycles::arith::{QuadField, SplitPrime, Zmod};
use cmcycles::cm::{admissible_residues, family};
use cmcycles::curve::{division_poly, CurveFp, CurveRing, Poly};
use cmcycles::torsion::{
    accepted_lift_count, brute_force_torsion_x, etale_torsion_x, reconstruct_family_poly,
    TorsionRoot,
};
use num_bigint::BigInt;

/// Plain modular arithmetic on u128, no shared code with the library.
#[derive(Clone, Copy)]
struct M(u128);

impl M {
    fn add(self, a: u128, b: u128) -> u128 {
        (a + b) % self.0
    }
    fn sub(self, a: u128, b: u128) -> u128 {
        (a + self.0 - b % self.0) % self.0
    }
    fn mul(self, a: u128, b: u128) -> u128 {
        a * b % self.0
    }
    fn inv(self, a: u128) -> u128 {
        // extended Euclid; a must be a unit
        let (mut r0, mut r1) = (self.0 as i128, (a % self.0) as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        assert_eq!(r0, 1, "not a unit");
        t0.rem_euclid(self.0 as i128) as u128
    }
}

fn vp(mut n: u128, p: u128, cap: u32) -> u32 {
    if n == 0 {
        return cap;
    }
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// Jacobian coordinates: x = X/Z^2, y = Y/Z^3.
type Jac = (u128, u128, u128);

fn jdouble(m: M, a: u128, (x, y, z): Jac) -> Jac {
    let yy = m.mul(y, y);
    let s = m.mul(4, m.mul(x, yy));
    let z2 = m.mul(z, z);
    let mm = m.add(m.mul(3, m.mul(x, x)), m.mul(a, m.mul(z2, z2)));
    let x3 = m.sub(m.mul(mm, mm), m.mul(2, s));
    let y3 = m.sub(m.mul(mm, m.sub(s, x3)), m.mul(8, m.mul(yy, yy)));
    let z3 = m.mul(2, m.mul(y, z));
    (x3, y3, z3)
}

fn jadd(m: M, p1: Jac, p2: Jac) -> Jac {
    let (x1, y1, z1) = p1;
    let (x2, y2, z2) = p2;
    let z1z1 = m.mul(z1, z1);
    let z2z2 = m.mul(z2, z2);
    let u1 = m.mul(x1, z2z2);
    let u2 = m.mul(x2, z1z1);
    let s1 = m.mul(y1, m.mul(z2, z2z2));
    let s2 = m.mul(y2, m.mul(z1, z1z1));
    let h = m.sub(u2, u1);
    let r = m.sub(s2, s1);
    let hh = m.mul(h, h);
    let hhh = m.mul(h, hh);
    let v = m.mul(u1, hh);
    let x3 = m.sub(m.sub(m.mul(r, r), hhh), m.mul(2, v));
    let y3 = m.sub(m.mul(r, m.sub(v, x3)), m.mul(s1, hhh));
    let z3 = m.mul(h, m.mul(z1, z2));
    (x3, y3, z3)
}

/// [k]P by a fixed add chain P, 2P, 3P, ...; only the final step lands near O.
fn jmul(m: M, a: u128, k: u64, pt: Jac) -> Jac {
    let mut acc = jdouble(m, a, pt);
    for _ in 2..k {
        acc = jadd(m, acc, pt);
    }
    acc
}

/// y with y^2 = c mod p^n, lifting y0 by Newton steps.
fn hensel(m: M, c: u128, y0: u128, steps: u32) -> u128 {
    let mut y = y0;
    for _ in 0..steps {
        let f = m.sub(m.mul(y, y), c);
        y = m.sub(y, m.mul(f, m.inv(m.mul(2, y))));
    }
    y
}

/// Etale torsion x mod p^2: among lifts x0 + x1 p, keep those whose [p]-multiple
/// lies at formal-group depth >= 3, read from the Jacobian representative.
fn jacobian_oracle(p: u64, a: i64, b: i64) -> BTreeSet<TorsionRoot> {
    const N: u32 = 8;
    let pq = p as u128;
    let m = M(pq.pow(N));
    let a_m = (a as i128).rem_euclid(m.0 as i128) as u128;
    let b_m = (b as i128).rem_euclid(m.0 as i128) as u128;
    let e = CurveFp::new(p, a, b).unwrap();
    let mut out = BTreeSet::new();
    for x0 in 0..p {
        let fx = (x0.pow(3) + e.a() * x0 + e.b()) % p;
        let Some(y0) = (1..p).find(|y| y * y % p == fx) else {
            continue;
        };
        let pt = cmcycles::curve::PointFp::Affine { x: x0, y: y0 };
        if e.scalar_mul(p, &pt) != cmcycles::curve::PointFp::Infinity {
            continue;
        }
        for x1 in 0..p {
            let x = (x0 + x1 * p) as u128;
            let c = m.add(m.add(m.mul(x, m.mul(x, x)), m.mul(a_m, x)), b_m);
            let y = hensel(m, c, y0 as u128, N);
            let (xx, yy, zz) = jmul(m, a_m, p, (x, y, 1));
            // t = -x/y = -XZ/Y; u = v(X) + v(Z) - v(Y)
            let u = vp(xx, pq, N) as i64 + vp(zz, pq, N) as i64 - vp(yy, pq, N) as i64;
            assert!(vp(yy, pq, N) == 0, "Y stays a unit along this chain");
            if u >= 3 {
                out.insert(TorsionRoot { x0, x1 });
            }
        }
    }
    out
}

fn admissible_fiber(d: i64, p: u64) -> (i64, i64, u64) {
    let fam = family(d).unwrap();
    let t = &admissible_residues(d, p).unwrap()[0];
    let (a, b) = fam.fiber(&BigInt::from(t.a0));
    (a.try_into().unwrap(), b.try_into().unwrap(), t.cofactor)
}

#[test]
fn etale_torsion_matches_both_oracles() {
    for (d, p, a, b) in [
        (1, 5, 3, 0),
        (19, 5, 0, 0),
        (3, 7, 0, 0),
        (43, 11, -3440, 77658),
    ] {
        let (a, b, cof) = if a == 0 && b == 0 {
            admissible_fiber(d, p)
        } else {
            (a, b, 0)
        };
        let k = QuadField::new(d).unwrap();
        let sp = SplitPrime::new(k, p).unwrap();
        let c = CurveRing::from_i64(p, 3, a, b).unwrap();
        let cof = if cof == 0 {
            CurveFp::new(p, a, b).unwrap().count_points() / p
        } else {
            cof
        };
        let fast = etale_torsion_x(&c, &sp, cof).unwrap();
        let brute = brute_force_torsion_x(&c, &sp, cof).unwrap();
        let jac = jacobian_oracle(p, a, b);
        assert_eq!(fast.roots, brute.roots, "D = {d}, p = {p}");
        assert_eq!(
            fast.roots.iter().copied().collect::<BTreeSet<_>>(),
            jac,
            "D = {d}, p = {p}"
        );
        assert_eq!(fast.roots.len() as u64, (p - 1) / 2);
    }
}

#[test]
fn d1_roots_are_9_and_16() {
    let k = QuadField::new(1).unwrap();
    let sp = SplitPrime::new(k, 5).unwrap();
    let c = CurveRing::from_i64(5, 3, 3, 0).unwrap();
    let mut v = etale_torsion_x(&c, &sp, 2).unwrap().values();
    v.sort();
    assert_eq!(v, vec![9, 16]);
}

#[test]
fn example_roots_mod_121() {
    let k = QuadField::new(43).unwrap();
    let sp = SplitPrime::new(k, 11).unwrap();
    let c = CurveRing::from_i64(11, 3, -3440, 77658).unwrap();
    let t = etale_torsion_x(&c, &sp, 1).unwrap();
    let pairs: Vec<(u64, u64)> = t.roots.iter().map(|r| (r.x0, r.x1)).collect();
    assert_eq!(pairs, vec![(0, 5), (2, 4), (3, 6), (6, 0), (10, 7)]);
}

#[test]
fn lifts_accepted_by_the_order_p_test() {
    // above x0, the accepted x mod p^3 are exactly those with the right second digit: p of p^2
    for (p, a, b) in [(5u64, 3i64, 0i64), (11, -3440, 77658)] {
        let c = CurveRing::from_i64(p, 3, a, b).unwrap();
        let e = c.reduction().unwrap();
        let cof = e.count_points() / p;
        let g = e.point_with_nontrivial_multiple(cof).unwrap();
        let q = e.scalar_mul(cof, &g);
        let (x0, y0) = (q.x().unwrap(), q.y().unwrap());
        assert_eq!(accepted_lift_count(&c, x0, y0).unwrap(), p as usize);
    }
}

#[test]
fn division_poly_mod_p_is_kernel_power() {
    // psi_p = unit * Phi^p mod p for the D = 1, p = 5 fiber
    let p = 5;
    let k = QuadField::new(1).unwrap();
    let sp = SplitPrime::new(k, p).unwrap();
    let fam = family(1).unwrap();
    let c = CurveRing::from_i64(p, 3, 3, 0).unwrap();
    let t = etale_torsion_x(&c, &sp, 2).unwrap();
    let kp = reconstruct_family_poly(&t, 3, &sp, &fam).unwrap();
    let f = Zmod::new(p, 1).unwrap();
    let phi2 = kp.specialize(3);
    let phi = Poly::new(f, phi2.coeffs().iter().map(|c| c % p).collect());
    let mut pow = Poly::constant(f, 1);
    for _ in 0..p {
        pow = pow.mul(&phi);
    }
    let psi = division_poly::<u64>(p, f, 3, 0);
    let (q, r) = psi.divrem(&pow).unwrap();
    assert!(r.is_zero());
    assert_eq!(q.degree(), Some(0));
    assert_ne!(q.coeff(0), 0);
}
