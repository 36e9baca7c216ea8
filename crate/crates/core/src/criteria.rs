//! Local non-triviality criteria for points and naive quadratic points.
//!
//! Every criterion reduces to the valuation of the formal component P^ of a
//! point: the symbol is non-trivial exactly when that valuation is 1. The
//! branch rules (negative valuation, Taylor linearization, epsilon table,
//! positive valuation) are evaluated on their own and always compared with a
//! direct computation of the formal valuation.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{legendre, BigRat, PadicNum, QuadField, QuadRat, SplitPrime, DEFAULT_PRECISION};
use crate::cm::{classify_curve, family, AdmissibleTuple, CMFamily};
use crate::curve::{division_value, x_multiple, AffinePointR, CurveRing};
use crate::error::{Error, Result};
use crate::torsion::{
    epsilon_table, etale_torsion_x, reconstruct_family_poly, taylor_criterion_value, KernelPoly,
    TorsionRoot, TorsionTable,
};

/// u(P^): exactly k, at least 2 (undecided beyond p^2), or infinite (P^ = O).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FormalValuation {
    Exact(i64),
    AtLeastTwo,
    Infinite,
}

impl FormalValuation {
    pub fn is_one(&self) -> bool {
        *self == FormalValuation::Exact(1)
    }
}

impl fmt::Display for FormalValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormalValuation::Exact(k) => write!(f, "{k}"),
            FormalValuation::AtLeastTwo => write!(f, ">=2"),
            FormalValuation::Infinite => write!(f, "inf"),
        }
    }
}

impl FromStr for FormalValuation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            ">=2" => Ok(FormalValuation::AtLeastTwo),
            "inf" => Ok(FormalValuation::Infinite),
            _ => s
                .parse()
                .map(FormalValuation::Exact)
                .map_err(|_| Error::Parse(format!("formal valuation {s:?}"))),
        }
    }
}

impl Serialize for FormalValuation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FormalValuation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    Identity,
    NegativeValuation,
    Taylor,
    EpsilonTable,
    PositiveValuation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolReport {
    pub rule: Rule,
    pub nontrivial: bool,
    pub formal_valuation: FormalValuation,
    pub matched_root: Option<TorsionRoot>,
    pub trace: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitBranch {
    /// v(b) < 0: splits iff b is a square in Q_p.
    NegativeValuation,
    /// cofactor 1, v(b) >= 0: splits iff f(b0) is a nonzero square mod p.
    EtaleResidue,
    /// (D, p) = (1, 5), v(b) = 0: always splits.
    UnitResidueD1,
    /// (D, p) = (1, 5), v(b) > 0: splits iff v(b) is even and b' is a non-square.
    PositiveValuationD1,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitReport {
    pub branch: SplitBranch,
    pub splits: bool,
    pub degenerate: bool,
    pub trace: Vec<String>,
}

/// A point with exact coordinates when known, and their p-adic images.
#[derive(Clone, Debug, PartialEq)]
pub struct PointData {
    pub infinity: bool,
    pub x: Option<QuadRat>,
    pub y: Option<QuadRat>,
    pub x_padic: Option<PadicNum>,
    pub y_padic: Option<PadicNum>,
}

/// Everything the criteria need about one curve at one split prime.
#[derive(Clone, Debug)]
pub struct Setting {
    pub family: CMFamily,
    pub a: BigInt,
    pub b: BigInt,
    pub sp: SplitPrime,
    pub tuple: AdmissibleTuple,
    /// The family parameter of this curve, exactly.
    pub param: BigRat,
    /// Its first two p-adic digits.
    pub a0: u64,
    pub a1: u64,
    pub curve: CurveRing,
    pub table: TorsionTable,
    /// Kernel polynomial reconstructed from the fiber at the integer a0.
    pub kernel: KernelPoly,
    /// Present for cofactor-2 tuples; computed on the fiber at a0.
    pub epsilon: Option<Vec<(u64, u64)>>,
    pub precision: u32,
}

impl Setting {
    pub fn new(
        d: i64,
        p: u64,
        a: BigInt,
        b: BigInt,
        precision: u32,
        conjugate: bool,
    ) -> Result<Self> {
        let fam = family(d)?;
        let mut sp = SplitPrime::new(fam.field, p)?;
        if conjugate {
            sp = sp.conjugate();
        }
        Self::with_split_prime(fam, sp, a, b, precision)
    }

    pub fn with_split_prime(
        fam: CMFamily,
        sp: SplitPrime,
        a: BigInt,
        b: BigInt,
        precision: u32,
    ) -> Result<Self> {
        if !(3..=8).contains(&precision) {
            return Err(Error::BadPrecision(precision));
        }
        let p = sp.p();
        let (tuple, param) = classify_curve(&fam, p, &a, &b)?;
        let curve = CurveRing::new(p, precision, &a, &b)?;
        let table = etale_torsion_x(&curve, &sp, tuple.cofactor)?;
        let digits = crate::arith::embed_rational(&param, p, precision)?.residue(2)?;
        let (a0, a1) = (digits % p, digits / p);
        let (sa, sb) = fam.fiber(&BigInt::from(a0));
        let source = CurveRing::new(p, 3, &sa, &sb)?;
        let source_table = etale_torsion_x(&source, &sp, tuple.cofactor)?;
        let kernel = reconstruct_family_poly(&source_table, a0, &sp, &fam)?;
        let epsilon = if tuple.cofactor == 2 {
            Some(epsilon_table(&source, &source_table)?)
        } else {
            None
        };
        Ok(Setting {
            family: fam,
            a,
            b,
            sp,
            tuple,
            param,
            a0,
            a1,
            curve,
            table,
            kernel,
            epsilon,
            precision,
        })
    }

    pub fn default_precision() -> u32 {
        DEFAULT_PRECISION
    }

    pub fn field(&self) -> QuadField {
        self.family.field
    }

    pub fn p(&self) -> u64 {
        self.sp.p()
    }

    fn k_a(&self) -> QuadRat {
        QuadRat::from_rational(self.field(), BigRat::from_integer(self.a.clone()))
    }

    fn k_b(&self) -> QuadRat {
        QuadRat::from_rational(self.field(), BigRat::from_integer(self.b.clone()))
    }

    /// x^3 + Ax + B, exactly in K.
    pub fn rhs(&self, x: &QuadRat) -> QuadRat {
        &(&(&(x * x) * x) + &(&self.k_a() * x)) + &self.k_b()
    }

    fn embed(&self, x: &QuadRat) -> Result<PadicNum> {
        self.sp.embed(x, self.precision)
    }

    fn is_epsilon_case(&self) -> bool {
        self.family.d() == 1 && self.p() == 5 && self.tuple.cofactor == 2 && self.a0 == 3
    }

    /// A point with exact coordinates in K.
    pub fn point_exact(&self, x: QuadRat, y: QuadRat) -> Result<PointData> {
        if &y * &y != self.rhs(&x) {
            return Err(Error::NotOnCurve);
        }
        Ok(PointData {
            infinity: false,
            x_padic: Some(self.embed(&x)?),
            y_padic: Some(self.embed(&y)?),
            x: Some(x),
            y: Some(y),
        })
    }

    /// (b, sqrt(f(b))) with the square root taken in Q_p only.
    pub fn point_naive(&self, b: QuadRat) -> Result<PointData> {
        let fb = self.embed(&self.rhs(&b))?;
        let y = fb.sqrt().map_err(|_| Error::NotSplit)?;
        Ok(PointData {
            infinity: false,
            x_padic: Some(self.embed(&b)?),
            y_padic: Some(y),
            x: Some(b),
            y: None,
        })
    }

    /// A point known only modulo p^N.
    pub fn point_residue(&self, pt: &AffinePointR) -> Result<PointData> {
        let n = self.curve.ring().exponent();
        let p = self.p();
        match *pt {
            AffinePointR::Infinity => Ok(PointData {
                infinity: true,
                x: None,
                y: None,
                x_padic: None,
                y_padic: None,
            }),
            AffinePointR::Affine { x, y } => Ok(PointData {
                infinity: false,
                x: None,
                y: None,
                x_padic: Some(PadicNum::from_residue(p, self.precision, x, n)?),
                y_padic: Some(PadicNum::from_residue(p, self.precision, y, n)?),
            }),
        }
    }
}

fn root_match(
    s: &Setting,
    xd: &PadicNum,
    exact: Option<&QuadRat>,
    trace: &mut Vec<String>,
) -> Result<(FormalValuation, Option<TorsionRoot>)> {
    let p = s.p();
    match xd.valuation() {
        Some(v) if v < 0 => {
            if v % 2 != 0 {
                return Err(Error::OddNegativeValuation(v));
            }
            trace.push(format!("v(x(dP)) = {v}, dP lies in the formal group"));
            return Ok((FormalValuation::Exact(-v / 2), None));
        }
        _ => {}
    }
    let r2 = xd.residue(2)?;
    let root = *s
        .table
        .root_above(r2 % p)
        .ok_or(Error::NoMatchingRoot(r2 % p))?;
    trace.push(format!(
        "x(dP) = {} + {}p mod p^2, torsion root above {} is {} + {}p",
        r2 % p,
        r2 / p,
        root.x0,
        root.x0,
        root.x1
    ));
    if root.value(p) != r2 {
        return Ok((FormalValuation::Exact(1), Some(root)));
    }
    if let Some(x) = exact {
        let psi = division_value(p, x, &s.k_a(), &s.k_b());
        if psi.is_zero() {
            trace.push("psi_p(x(dP)) = 0: dP is etale torsion".into());
            return Ok((FormalValuation::Infinite, Some(root)));
        }
    }
    Ok((FormalValuation::AtLeastTwo, Some(root)))
}

/// u(P^) and the torsion root matched by [d]P, following u(P^) = v(x(dP) - x(T)).
pub fn formal_valuation(
    pt: &PointData,
    s: &Setting,
) -> Result<(FormalValuation, Option<TorsionRoot>, Vec<String>)> {
    let mut trace = Vec::new();
    if pt.infinity {
        return Ok((FormalValuation::Infinite, None, trace));
    }
    let d = s.tuple.cofactor;
    let xp = pt.x_padic.as_ref().ok_or(Error::NotOnCurve)?;
    if let Some(v) = xp.valuation() {
        if v < 0 {
            if v % 2 != 0 {
                return Err(Error::OddNegativeValuation(v));
            }
            trace.push(format!("v(x(P)) = {v}"));
            return Ok((FormalValuation::Exact(-v / 2), None, trace));
        }
    }
    if let Some(x) = &pt.x {
        let Some(xd) = x_multiple(d, x, &s.k_a(), &s.k_b()) else {
            trace.push(format!("[{d}]P = O"));
            return Ok((FormalValuation::Infinite, None, trace));
        };
        let xd_p = s.embed(&xd)?;
        let (fv, root) = root_match(s, &xd_p, Some(&xd), &mut trace)?;
        return Ok((fv, root, trace));
    }
    let p = s.p();
    let cap = s.precision;
    let a = PadicNum::from_i64(0, p, cap).add(
        &s.sp
            .embed_rational(&BigRat::from_integer(s.a.clone()), cap)?,
    );
    let b =
        s.sp.embed_rational(&BigRat::from_integer(s.b.clone()), cap)?;
    let xd = x_multiple(d, xp, &a, &b).ok_or(Error::InsufficientPrecision {
        needed: 2,
        have: xp.abs_precision().unwrap_or(0),
    })?;
    let (fv, root) = root_match(s, &xd, None, &mut trace)?;
    Ok((fv, root, trace))
}

/// Evaluate the applicable non-triviality theorem and cross-check it
/// against the formal valuation.
pub fn check_symbol(pt: &PointData, s: &Setting) -> Result<SymbolReport> {
    let (fv, root, mut trace) = formal_valuation(pt, s)?;
    if pt.infinity {
        return Ok(SymbolReport {
            rule: Rule::Identity,
            nontrivial: false,
            formal_valuation: fv,
            matched_root: None,
            trace,
        });
    }
    let p = s.p();
    let xp = pt.x_padic.as_ref().ok_or(Error::NotOnCurve)?;
    let v = xp.valuation();
    let (rule, nontrivial) = match v {
        Some(v) if v < 0 => {
            trace.push(format!(
                "negative valuation rule: v(x) = {v}, non-trivial iff v = -2"
            ));
            (Rule::NegativeValuation, v == -2)
        }
        _ if s.tuple.cofactor == 1 => {
            let (b0, b1) = (xp.digit(0)?, xp.digit(1)?);
            let val = taylor_criterion_value(&s.kernel, b0, b1, s.a0, Some(s.a1))?;
            trace.push(format!(
                "Taylor rule: (b0, b1) = ({b0}, {b1}), (a0, a1) = ({}, {}), value = {val} mod {p}",
                s.a0, s.a1
            ));
            (Rule::Taylor, val != 0)
        }
        Some(0) if s.is_epsilon_case() => {
            let (b0, b1) = (xp.digit(0)?, xp.digit(1)?);
            let eps = s
                .epsilon
                .as_ref()
                .and_then(|t| t.iter().find(|(r, _)| *r == b0))
                .map(|(_, e)| *e)
                .ok_or(Error::NotATorsionResidue(b0))?;
            let target = (b0 * s.a1 + eps) % p;
            trace.push(format!(
                "epsilon rule: b1 = {b1}, b0*a1 + eps(b0) = {b0}*{} + {eps} = {target} mod {p}",
                s.a1
            ));
            (Rule::EpsilonTable, b1 != target)
        }
        _ if s.is_epsilon_case() => {
            let v = v.unwrap_or(i64::MAX);
            trace.push(format!(
                "positive valuation rule: v(x) = {v}, non-trivial iff v = 2"
            ));
            (Rule::PositiveValuation, v == 2)
        }
        _ => {
            return Err(Error::BranchMismatch(format!(
                "D = {}, p = {}, cofactor {}, a0 = {}",
                s.family.d(),
                p,
                s.tuple.cofactor,
                s.a0
            )))
        }
    };
    if nontrivial != fv.is_one() {
        return Err(Error::PathDisagreement(format!(
            "{rule:?} says non-trivial = {nontrivial}, formal valuation is {fv}"
        )));
    }
    trace.push(format!("formal valuation u(P^) = {fv}"));
    Ok(SymbolReport {
        rule,
        nontrivial,
        formal_valuation: fv,
        matched_root: root,
        trace,
    })
}

fn is_square_mod(u: u64, p: u64) -> bool {
    legendre((u % p) as i64, p) == 1
}

/// Whether v splits in K(sqrt(f(b)))/K, and whether that extension is trivial.
pub fn quadratic_split_test(b: &QuadRat, s: &Setting) -> Result<SplitReport> {
    let p = s.p();
    let fb = s.rhs(b);
    let degenerate = fb.is_square();
    let bp = s.embed(b)?;
    let v = bp.valuation();
    let mut trace = vec![format!(
        "v(b) = {}",
        v.map_or("inf".into(), |v| v.to_string())
    )];
    let (branch, splits) = match v {
        Some(v) if v < 0 => {
            let u = bp.unit().expect("nonzero");
            let sq = v % 2 == 0 && is_square_mod(u, p);
            trace.push(format!("b' = {} mod p, square: {sq}", u % p));
            (SplitBranch::NegativeValuation, sq)
        }
        _ if s.tuple.cofactor == 1 => {
            let b0 = bp.digit(0)?;
            let f0 = s.curve.reduction()?.rhs(b0);
            let sq = f0 != 0 && is_square_mod(f0, p);
            trace.push(format!(
                "f(b0) = f({b0}) = {f0} mod p, nonzero square: {sq}"
            ));
            (SplitBranch::EtaleResidue, sq)
        }
        Some(0) if s.is_epsilon_case() => (SplitBranch::UnitResidueD1, true),
        _ if s.is_epsilon_case() => {
            let v = v.unwrap_or(i64::MAX);
            let sq = v % 2 == 0 && bp.unit().is_some_and(|u| !is_square_mod(u, p));
            trace.push(format!("v(b) = {v} even with b' a non-square: {sq}"));
            (SplitBranch::PositiveValuationD1, sq)
        }
        _ => {
            return Err(Error::BranchMismatch(format!(
                "no splitting rule for cofactor {}",
                s.tuple.cofactor
            )))
        }
    };
    if !fb.is_zero() {
        let fp = s.embed(&fb)?;
        let direct = fp.sqrt().is_ok() && !fp.is_zero();
        if direct != splits {
            return Err(Error::PathDisagreement(format!(
                "{branch:?} says splits = {splits}, f(b) in Q_p is a square: {direct}"
            )));
        }
    }
    trace.push(format!("f(b) = {fb}, square in K: {degenerate}"));
    Ok(SplitReport {
        branch,
        splits,
        degenerate,
        trace,
    })
}

/// The symbol of the naive point (b, sqrt(f(b))), evaluated p-adically.
pub fn naive_quadratic_symbol(b: &QuadRat, s: &Setting) -> Result<SymbolReport> {
    let split = quadratic_split_test(b, s)?;
    if !split.splits {
        return Err(Error::NotSplit);
    }
    if split.degenerate {
        return Err(Error::DegenerateQuadratic);
    }
    let pt = s.point_naive(b.clone())?;
    check_symbol(&pt, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn example() -> Setting {
        Setting::new(43, 11, (-3440).into(), 77658.into(), 4, false).unwrap()
    }

    fn q(k: QuadField, n: i64, d: i64) -> QuadRat {
        QuadRat::from_rational(k, rat(n, d))
    }

    #[test]
    fn example_generator() {
        let s = example();
        let k = s.field();
        let pt = s.point_exact(q(k, 129, 4), q(k, 129, 8)).unwrap();
        let r = check_symbol(&pt, &s).unwrap();
        assert!(r.nontrivial);
        assert_eq!(r.rule, Rule::Taylor);
        assert_eq!(r.matched_root, Some(TorsionRoot { x0: 2, x1: 4 }));
    }

    #[test]
    fn example_naive_points() {
        let s = example();
        let k = s.field();
        for j in 0..5 {
            let b = q(k, 2 + 121 * j, 1);
            let split = quadratic_split_test(&b, &s).unwrap();
            assert!(split.splits && !split.degenerate);
            assert!(naive_quadratic_symbol(&b, &s).unwrap().nontrivial);
        }
    }

    #[test]
    fn negative_valuations() {
        let s = example();
        let k = s.field();
        // b = 4/121: b' = 4 is a square
        let r = naive_quadratic_symbol(&q(k, 4, 121), &s).unwrap();
        assert_eq!(r.rule, Rule::NegativeValuation);
        assert!(r.nontrivial);
        let r = naive_quadratic_symbol(&q(k, 4, 14641), &s).unwrap();
        assert!(!r.nontrivial);
        assert_eq!(r.formal_valuation, FormalValuation::Exact(2));
    }

    #[test]
    fn d1_epsilon_branch() {
        let s = Setting::new(1, 5, 3.into(), 0.into(), 4, false).unwrap();
        let k = s.field();
        // x = 4: b0 = 4, b1 = 0 against eps(4) = 1
        let r = naive_quadratic_symbol(&q(k, 4, 1), &s).unwrap();
        assert_eq!(r.rule, Rule::EpsilonTable);
        assert!(r.nontrivial);
        // x = 9 sits over the torsion root itself
        let r = naive_quadratic_symbol(&q(k, 9, 1), &s).unwrap();
        assert!(!r.nontrivial);
        // v(b) = 2 with b' = 2 a non-square mod 5
        let r = naive_quadratic_symbol(&q(k, 50, 1), &s).unwrap();
        assert_eq!(r.rule, Rule::PositiveValuation);
        assert!(r.nontrivial);
        let r = naive_quadratic_symbol(&q(k, 2 * 625, 1), &s).unwrap();
        assert!(!r.nontrivial);
    }

    #[test]
    fn torsion_point_is_infinite() {
        // (0, 0) on y^2 = x^3 + 3x is 2-torsion, so [2]P = O
        let s = Setting::new(1, 5, 3.into(), 0.into(), 4, false).unwrap();
        let k = s.field();
        let pt = s.point_exact(q(k, 0, 1), q(k, 0, 1)).unwrap();
        let (fv, _, _) = formal_valuation(&pt, &s).unwrap();
        assert_eq!(fv, FormalValuation::Infinite);
        assert!(!check_symbol(&pt, &s).unwrap().nontrivial);
    }

    #[test]
    fn degenerate_b() {
        let s = example();
        let k = s.field();
        // f(b) for the x-coordinate of an integral point is a square
        let x = q(k, 129, 4);
        let rep = quadratic_split_test(&x, &s).unwrap();
        assert!(rep.degenerate);
        assert_eq!(
            naive_quadratic_symbol(&x, &s),
            Err(Error::DegenerateQuadratic)
        );
    }

    #[test]
    fn formal_valuation_serde() {
        for fv in [
            FormalValuation::Exact(1),
            FormalValuation::AtLeastTwo,
            FormalValuation::Infinite,
        ] {
            let j = serde_json::to_string(&fv).unwrap();
            assert_eq!(serde_json::from_str::<FormalValuation>(&j).unwrap(), fv);
        }
    }
}
