//! Scanning quadratic parameters b and emitting independence certificates.

use std::fmt::Write as _;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{BigRat, QuadField, QuadInt, QuadRat, SplitPrime};
use crate::cm::family;
use crate::criteria::{
    check_symbol, naive_quadratic_symbol, quadratic_split_test, PointData, Setting, SplitReport,
    SymbolReport,
};
use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// How v decomposes in F/K: the degree [F:K] and the number of places above v.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitProfile {
    pub degree: u64,
    pub places: u64,
}

impl SplitProfile {
    pub const TRIVIAL: SplitProfile = SplitProfile {
        degree: 1,
        places: 1,
    };
    pub const SPLIT_QUADRATIC: SplitProfile = SplitProfile {
        degree: 2,
        places: 2,
    };
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdelicStructure {
    pub m: u64,
    pub group: String,
    pub description: String,
}

pub fn adelic_structure(profile: SplitProfile, p: u64) -> Result<AdelicStructure> {
    if profile.degree + 1 >= p {
        return Err(Error::ProfileTooLarge {
            degree: profile.degree,
            bound: p - 1,
        });
    }
    let m = profile.places;
    Ok(AdelicStructure {
        m,
        group: format!("(Z/{p})^{m}"),
        description: format!(
            "local symbol images over the {m} place(s) of F above v span (Z/{p})^{m}; \
             the Brauer obstruction term is taken to vanish under these hypotheses (cited, not recomputed)"
        ),
    })
}

/// re + im*sqrt(-D) with both parts exact.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactElement {
    #[serde(with = "crate::serde_str::bigrat")]
    pub re: BigRat,
    #[serde(with = "crate::serde_str::bigrat")]
    pub im: BigRat,
    pub display: String,
}

impl ExactElement {
    pub fn new(q: &QuadRat) -> Self {
        ExactElement {
            re: q.re().clone(),
            im: q.im().clone(),
            display: q.to_string(),
        }
    }

    pub fn to_quad(&self, k: QuadField) -> QuadRat {
        QuadRat::new(k, self.re.clone(), self.im.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateInputs {
    pub d: u64,
    pub p: u64,
    #[serde(with = "crate::serde_str::bigint")]
    pub curve_a: BigInt,
    #[serde(with = "crate::serde_str::bigint")]
    pub curve_b: BigInt,
    pub precision: u32,
    /// pi = (s + t*sqrt(-D))/2 as [s, t].
    pub pi: [String; 2],
    pub pi_display: String,
    pub pi_embedded: String,
    pub generator_x: ExactElement,
    pub generator_y: ExactElement,
    pub b: ExactElement,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateReports {
    pub generator: SymbolReport,
    pub split: SplitReport,
    pub naive: SymbolReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptions {
    /// F = K(sqrt(radicand)).
    pub f_radicand: ExactElement,
    pub l_definition: String,
    pub l_ramification: String,
    /// Etale pi-bar kernel polynomial of the fiber, mod p^2.
    pub etale_kernel_mod_p2: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypothesis {
    pub name: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conclusion {
    pub independent: bool,
    pub statement: String,
    pub licensed_by: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionCertificate {
    pub schema_version: u32,
    pub inputs: CertificateInputs,
    pub reports: CertificateReports,
    pub fields: FieldDescriptions,
    pub adelic: AdelicStructure,
    pub hypotheses: Vec<Hypothesis>,
    pub conclusion: Conclusion,
}

impl ExtensionCertificate {
    pub fn adelic_rank(&self) -> u64 {
        self.adelic.m
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn render_text(&self) -> String {
        let i = &self.inputs;
        let mut out = String::new();
        let _ = writeln!(out, "certificate (schema {})", self.schema_version);
        let _ = writeln!(
            out,
            "  curve   y^2 = x^3 + ({})x + ({}) over Q(sqrt(-{})), p = {}, N = {}",
            i.curve_a, i.curve_b, i.d, i.p, i.precision
        );
        let _ = writeln!(out, "  pi      {}  ->  {}", i.pi_display, i.pi_embedded);
        let _ = writeln!(
            out,
            "  P       ({}, {})  rule {:?}, u = {}, nontrivial {}",
            i.generator_x.display,
            i.generator_y.display,
            self.reports.generator.rule,
            self.reports.generator.formal_valuation,
            self.reports.generator.nontrivial
        );
        let _ = writeln!(
            out,
            "  b       {}  split {:?}: splits {}, degenerate {}",
            i.b.display,
            self.reports.split.branch,
            self.reports.split.splits,
            self.reports.split.degenerate
        );
        let _ = writeln!(
            out,
            "  Q       rule {:?}, u = {}, nontrivial {}",
            self.reports.naive.rule,
            self.reports.naive.formal_valuation,
            self.reports.naive.nontrivial
        );
        let _ = writeln!(out, "  F       K(sqrt({}))", self.fields.f_radicand.display);
        let _ = writeln!(
            out,
            "  L       {}; {}",
            self.fields.l_definition, self.fields.l_ramification
        );
        let _ = writeln!(
            out,
            "  adelic  m = {}, {}",
            self.adelic.m, self.adelic.group
        );
        for h in &self.hypotheses {
            let _ = writeln!(out, "  [{}] {}", if h.holds { "x" } else { " " }, h.name);
        }
        let _ = writeln!(
            out,
            "  => independent: {} ({})",
            self.conclusion.independent, self.conclusion.statement
        );
        out
    }
}

/// Why a candidate b produced no certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rejection {
    pub index: usize,
    pub b: ExactElement,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanOutcome {
    pub generator: Option<SymbolReport>,
    pub certificates: Vec<ExtensionCertificate>,
    pub rejections: Vec<Rejection>,
    pub diagnostic: Option<String>,
}

fn build_certificate(
    s: &Setting,
    gen: (&QuadRat, &QuadRat),
    gen_report: &SymbolReport,
    b: &QuadRat,
) -> Result<ExtensionCertificate> {
    let split = quadratic_split_test(b, s)?;
    let naive = naive_quadratic_symbol(b, s)?;
    let hypotheses = vec![
        Hypothesis {
            name: "generator symbol non-trivial".into(),
            holds: gen_report.nontrivial,
        },
        Hypothesis {
            name: "naive point symbol non-trivial".into(),
            holds: naive.nontrivial,
        },
        Hypothesis {
            name: "v splits in F".into(),
            holds: split.splits,
        },
        Hypothesis {
            name: "F != K".into(),
            holds: !split.degenerate,
        },
    ];
    let independent = hypotheses.iter().all(|h| h.holds);
    if !independent {
        let failed: Vec<_> = hypotheses
            .iter()
            .filter(|h| !h.holds)
            .map(|h| h.name.as_str())
            .collect();
        return Err(Error::BranchMismatch(format!(
            "hypotheses fail: {}",
            failed.join(", ")
        )));
    }
    let p = s.p();
    let pi = s.sp.pi();
    let (ps, pt) = pi.half_coords();
    let profile = SplitProfile::SPLIT_QUADRATIC;
    Ok(ExtensionCertificate {
        schema_version: SCHEMA_VERSION,
        inputs: CertificateInputs {
            d: s.field().d(),
            p,
            curve_a: s.a.clone(),
            curve_b: s.b.clone(),
            precision: s.precision,
            pi: [ps.to_string(), pt.to_string()],
            pi_display: pi.to_string(),
            pi_embedded: s.sp.embed_quad(pi, s.precision)?.to_string(),
            generator_x: ExactElement::new(gen.0),
            generator_y: ExactElement::new(gen.1),
            b: ExactElement::new(b),
        },
        fields: FieldDescriptions {
            f_radicand: ExactElement::new(&s.rhs(b)),
            l_definition:
                "F(E[pi]); E[pi] is the complex conjugate of the etale pi-bar kernel recorded below"
                    .into(),
            l_ramification: format!(
                "totally ramified of degree {} at each place above v, unramified elsewhere",
                p - 1
            ),
            etale_kernel_mod_p2: s.kernel.render(),
        },
        adelic: adelic_structure(profile, p)?,
        reports: CertificateReports {
            generator: gen_report.clone(),
            split,
            naive,
        },
        hypotheses,
        conclusion: Conclusion {
            independent,
            statement: format!(
                "the symbols of P and Q are Z/{p}-linearly independent at the places of F above v"
            ),
            licensed_by: "independence of two non-trivial symbols over a split quadratic extension"
                .into(),
        },
    })
}

/// Evaluate each candidate b and certify those meeting every hypothesis.
/// Candidates are processed in parallel; output follows the iterator order.
pub fn scan_b_candidates<I>(
    s: &Setting,
    gen: (&QuadRat, &QuadRat),
    bs: I,
    limit: usize,
) -> Result<ScanOutcome>
where
    I: IntoIterator<Item = QuadRat>,
{
    let pt: PointData = s.point_exact(gen.0.clone(), gen.1.clone())?;
    let gen_report = check_symbol(&pt, s)?;
    if !gen_report.nontrivial {
        let diag = Error::GeneratorFailsCriterion(gen_report.formal_valuation.to_string());
        return Ok(ScanOutcome {
            generator: Some(gen_report),
            certificates: Vec::new(),
            rejections: Vec::new(),
            diagnostic: Some(diag.to_string()),
        });
    }
    let candidates: Vec<QuadRat> = bs.into_iter().take(limit).collect();
    let results: Vec<_> = candidates
        .par_iter()
        .map(|b| build_certificate(s, gen, &gen_report, b))
        .collect();
    let mut certificates = Vec::new();
    let mut rejections = Vec::new();
    for (index, (b, r)) in candidates.iter().zip(results).enumerate() {
        match r {
            Ok(c) => certificates.push(c),
            Err(e) => rejections.push(Rejection {
                index,
                b: ExactElement::new(b),
                reason: e.to_string(),
            }),
        }
    }
    Ok(ScanOutcome {
        generator: Some(gen_report),
        certificates,
        rejections,
        diagnostic: None,
    })
}

/// The arithmetic progression start, start + step, ... of rational integers.
pub fn b_progression(k: QuadField, start: BigInt, step: BigInt) -> impl Iterator<Item = QuadRat> {
    (0u64..).map(move |i| {
        let v = &start + &step * BigInt::from(i);
        QuadRat::from_rational(k, BigRat::from_integer(v))
    })
}

/// Rebuild the setting from a certificate's inputs.
pub fn setting_for(inputs: &CertificateInputs) -> Result<Setting> {
    let fam = family(inputs.d as i64)?;
    let parse = |s: &str| -> Result<BigInt> {
        s.parse()
            .map_err(|_| Error::Parse(format!("integer {s:?}")))
    };
    let pi = QuadInt::from_half(fam.field, parse(&inputs.pi[0])?, parse(&inputs.pi[1])?)?;
    let sp = SplitPrime::with_pi(pi, inputs.p)?;
    Setting::with_split_prime(
        fam,
        sp,
        inputs.curve_a.clone(),
        inputs.curve_b.clone(),
        inputs.precision,
    )
}

/// Recompute a serialized certificate from its inputs and require the
/// result to serialize to the same bytes.
pub fn revalidate(json: &str) -> Result<ExtensionCertificate> {
    let cert = ExtensionCertificate::from_json(json)?;
    if cert.schema_version != SCHEMA_VERSION {
        return Err(Error::Revalidation(format!(
            "schema version {} (expected {SCHEMA_VERSION})",
            cert.schema_version
        )));
    }
    let s = setting_for(&cert.inputs)?;
    let k = s.field();
    let (x, y) = (
        cert.inputs.generator_x.to_quad(k),
        cert.inputs.generator_y.to_quad(k),
    );
    let b = cert.inputs.b.to_quad(k);
    let pt = s.point_exact(x.clone(), y.clone())?;
    let gen_report = check_symbol(&pt, &s)?;
    let fresh = build_certificate(&s, (&x, &y), &gen_report, &b)
        .map_err(|e| Error::Revalidation(e.to_string()))?;
    if fresh.to_json() != cert.to_json() {
        return Err(Error::Revalidation("recomputed certificate differs".into()));
    }
    Ok(cert)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityRow {
    pub b0: u64,
    pub failing_b1: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityReport {
    pub p: u64,
    pub rows: Vec<DensityRow>,
    pub nontrivial: u64,
    pub total: u64,
    #[serde(with = "crate::serde_str::bigrat")]
    pub density: BigRat,
}

/// For each torsion residue b0, scan every second digit b1 and record
/// the ones where the criterion reports a trivial symbol.
pub fn density_report(s: &Setting) -> Result<DensityReport> {
    let p = s.p();
    let criterion = |b0: u64, b1: u64| -> Result<bool> {
        if s.tuple.cofactor == 1 {
            let v = crate::torsion::taylor_criterion_value(&s.kernel, b0, b1, s.a0, Some(s.a1))?;
            return Ok(v != 0);
        }
        let eps = s
            .epsilon
            .as_ref()
            .and_then(|t| t.iter().find(|(r, _)| *r == b0))
            .map(|(_, e)| *e)
            .ok_or(Error::NotATorsionResidue(b0))?;
        Ok(b1 != (b0 * s.a1 + eps) % p)
    };
    if s.tuple.cofactor != 1 && s.epsilon.is_none() {
        return Err(Error::BranchMismatch(format!(
            "cofactor {}",
            s.tuple.cofactor
        )));
    }
    let mut rows = Vec::new();
    let (mut nontrivial, mut total) = (0u64, 0u64);
    for root in &s.table.roots {
        let mut failing = Vec::new();
        for b1 in 0..p {
            total += 1;
            if criterion(root.x0, b1)? {
                nontrivial += 1;
            } else {
                failing.push(b1);
            }
        }
        if failing.len() != 1 {
            return Err(Error::InternalAmbiguity {
                x0: root.x0,
                accepted: failing.len(),
            });
        }
        rows.push(DensityRow {
            b0: root.x0,
            failing_b1: failing[0],
        });
    }
    Ok(DensityReport {
        p,
        rows,
        nontrivial,
        total,
        density: BigRat::new(nontrivial.into(), total.into()),
    })
}
