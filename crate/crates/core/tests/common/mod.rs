//! Invariant sweeps shared by the property tests (small sizes) and the
//! acceptance suite (full sizes).
#![allow(dead_code)]

use cmcycles::arith::{legendre, primes_in, rat, BigRat, QuadRat, SplitPrime};
use cmcycles::cm::{admissible_primes, admissible_residues, family};
use cmcycles::criteria::{naive_quadratic_symbol, quadratic_split_test, Setting};
use cmcycles::curve::{CurveFp, CurveRing};
use cmcycles::families::{b_progression, revalidate, scan_b_candidates};
use cmcycles::torsion::{etale_torsion_x, kernel_divides_division_poly, reconstruct_family_poly};
use cmcycles::Error;
use num_bigint::BigInt;
use num_integer::Roots;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const DS: [i64; 9] = [1, 2, 3, 7, 11, 19, 43, 67, 163];

pub fn example() -> Setting {
    Setting::new(43, 11, (-3440).into(), 77658.into(), 4, false).unwrap()
}

pub fn example_generator(s: &Setting) -> (QuadRat, QuadRat) {
    let k = s.field();
    (
        QuadRat::from_rational(k, rat(129, 4)),
        QuadRat::from_rational(k, rat(129, 8)),
    )
}

/// (D, p, a0, cofactor) for every admissible tuple with p <= bound.
pub fn tuples_below(bound: u64) -> Vec<(i64, u64, u64, u64)> {
    let mut out = Vec::new();
    for d in DS {
        for p in admissible_primes(d, bound).unwrap() {
            for t in admissible_residues(d, p).unwrap() {
                out.push((d, p, t.a0, t.cofactor));
            }
        }
    }
    out
}

pub fn fiber_curve(d: i64, p: u64, a0: u64, n: u32) -> CurveRing {
    let fam = family(d).unwrap();
    let (a, b) = fam.fiber(&BigInt::from(a0));
    CurveRing::new(p, n, &a, &b).unwrap()
}

/// Hasse bound on random fibers, plus 4p = t^2 + D c^2 at split primes
/// (t = 0 mod p at inert ones).
pub fn hasse_on_random_fibers(count: usize, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let primes = primes_in(5, 1000);
    let mut done = 0;
    while done < count {
        let d = DS[rng.gen_range(0..9)];
        let p = primes[rng.gen_range(0..primes.len())];
        let fam = family(d).unwrap();
        let a = rng.gen_range(1..p);
        let (fa, fb) = fam.fiber_mod(a, p);
        let Ok(e) = CurveFp::from_residues(p, fa, fb) else {
            continue;
        };
        let t = e.trace();
        assert!(t * t <= 4 * p as i64);
        if legendre(-d, p) == 1 {
            let rest = 4 * p as i64 - t * t;
            assert_eq!(rest % d, 0, "D = {d}, p = {p}, t = {t}");
            let c2 = rest / d;
            assert_eq!(c2.sqrt() * c2.sqrt(), c2, "D = {d}, p = {p}, t = {t}");
        } else {
            assert_eq!(
                t % p as i64,
                0,
                "D = {d}, p = {p}: inert prime, ordinary fiber"
            );
        }
        done += 1;
    }
}

/// e_j of the roots mod m, straight from the product expansion.
pub fn elementary(roots: &[u64], m: u64) -> Vec<u64> {
    let mut e = vec![1u64];
    for &r in roots {
        let mut next = vec![0u64; e.len() + 1];
        for (j, &c) in e.iter().enumerate() {
            next[j] = (next[j] + c) % m;
            next[j + 1] = (next[j + 1] + c * r % m) % m;
        }
        e = next;
    }
    e
}

/// Every admissible tuple up to `bound`: (p-1)/2 roots with distinct residues,
/// and e_j = 0 mod p^2 unless the family weight divides j.
pub fn torsion_tables(bound: u64) -> usize {
    let tuples = tuples_below(bound);
    assert!(!tuples.is_empty());
    for &(d, p, a0, cof) in &tuples {
        let fam = family(d).unwrap();
        let c = fiber_curve(d, p, a0, 3);
        let sp = SplitPrime::new(fam.field, p).unwrap();
        let t = etale_torsion_x(&c, &sp, cof).unwrap();
        let mut x0s: Vec<u64> = t.roots.iter().map(|r| r.x0).collect();
        x0s.dedup();
        assert_eq!(x0s.len() as u64, (p - 1) / 2, "D = {d}, p = {p}, a0 = {a0}");
        let e = elementary(&t.values(), p * p);
        let w = fam.weight as usize;
        for (j, ej) in e.iter().enumerate() {
            if j % w != 0 {
                assert_eq!(*ej, 0, "D = {d}, p = {p}, a0 = {a0}, e_{j}");
            }
        }
    }
    tuples.len()
}

/// psi_p mod p^2 has zero remainder on division by the reconstructed kernel.
pub fn kernel_divides_psi(bound: u64) -> usize {
    let tuples = tuples_below(bound);
    for &(d, p, a0, cof) in &tuples {
        let fam = family(d).unwrap();
        let c = fiber_curve(d, p, a0, 3);
        let sp = SplitPrime::new(fam.field, p).unwrap();
        let t = etale_torsion_x(&c, &sp, cof).unwrap();
        let k = reconstruct_family_poly(&t, a0, &sp, &fam).unwrap();
        assert!(
            kernel_divides_division_poly(&k, &c).unwrap(),
            "D = {d}, p = {p}, a0 = {a0}"
        );
    }
    tuples.len()
}

fn random_b(rng: &mut ChaCha8Rng, s: &Setting) -> QuadRat {
    let p = s.p() as i64;
    let k = s.field();
    let x = if rng.gen_bool(0.3) {
        // close to a torsion root, where u(P^) >= 2 is possible
        let r = s.table.roots[rng.gen_range(0..s.table.roots.len())];
        rat(r.value(s.p()) as i64 + rng.gen_range(0..p) * p * p, 1)
    } else {
        let v = rng.gen_range(-3i32..=3);
        let mut u = rng.gen_range(1..p.pow(3));
        if u % p == 0 {
            u += 1;
        }
        let den = [1, 2, 3, 4, 7][rng.gen_range(0..5)];
        let scale = BigRat::from_integer(BigInt::from(p)).pow(v);
        rat(if rng.gen_bool(0.5) { u } else { -u }, den) * scale
    };
    QuadRat::from_rational(k, x)
}

/// Settings with a non-triviality theorem: the D = 1 fiber and every
/// cofactor-1 tuple with p <= bound.
pub fn small_settings(bound: u64) -> Vec<Setting> {
    let mut settings = vec![
        Setting::new(1, 5, 3.into(), 0.into(), 4, false).unwrap(),
        example(),
    ];
    for (d, p, a0, cof) in tuples_below(bound) {
        if cof != 1 || (d == 43 && p == 11) {
            continue;
        }
        let fam = family(d).unwrap();
        let (a, b) = fam.fiber(&BigInt::from(a0));
        settings.push(Setting::new(d, p, a, b, 4, false).unwrap());
    }
    settings
}

/// Random naive points: the branch rule and the formal valuation must agree,
/// and the split test must agree with the p-adic square test.
pub fn two_path_agreement(settings: &[Setting], per_setting: usize, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for s in settings {
        let mut evaluated = 0;
        for _ in 0..per_setting {
            let b = random_b(&mut rng, s);
            let split = quadratic_split_test(&b, s).unwrap();
            match naive_quadratic_symbol(&b, s) {
                Ok(r) => {
                    assert!(split.splits && !split.degenerate);
                    assert_eq!(r.nontrivial, r.formal_valuation.is_one());
                    evaluated += 1;
                }
                Err(Error::NotSplit) => assert!(!split.splits),
                Err(Error::DegenerateQuadratic) => assert!(split.degenerate),
                Err(e) => panic!("D = {}, p = {}, b = {b}: {e}", s.field().d(), s.p()),
            }
        }
        assert!(
            evaluated * 10 > per_setting,
            "too few split candidates for D = {}, p = {}",
            s.field().d(),
            s.p()
        );
    }
}

/// Certificates for b = start + 121k revalidate from JSON.
pub fn certificate_round_trip(count: usize) -> usize {
    let s = example();
    let (x, y) = example_generator(&s);
    let out = scan_b_candidates(
        &s,
        (&x, &y),
        b_progression(s.field(), 2.into(), 121.into()),
        count,
    )
    .unwrap();
    assert!(!out.certificates.is_empty());
    for c in &out.certificates {
        assert_eq!(&revalidate(&c.to_json()).unwrap(), c);
    }
    out.certificates.len()
}
