use std::io::Read;

use anyhow::{Context, Result};
use cmcycles::arith::{format_rational, BigRat, QuadField, QuadRat, SplitPrime};
use cmcycles::cm::{admissible_residues, cm_j_invariant, family, AdmissibleTuple};
use cmcycles::criteria::{check_symbol, quadratic_split_test, Setting, SplitReport, SymbolReport};
use cmcycles::families::{b_progression, density_report, revalidate, scan_b_candidates};
use cmcycles::torsion::{KernelPoly, TorsionTable};
use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::args::{Cli, Command, CurveArgs};
use crate::cache::Cache;
use crate::config::{Config, Output};

const TORSION_SCHEMA: u32 = 1;

pub fn run(cli: Cli) -> Result<()> {
    let cfg = Config::from_cli(&cli);
    rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build_global()
        .context("configuring worker threads")?;
    match cli.command {
        Command::Fields => fields(&cfg),
        Command::Admissible { d, max_p } => admissible(&cfg, d, max_p),
        Command::Torsion { d, p, a, b } => torsion(&cfg, d, p, a, b),
        Command::CheckPoint { curve, x, y } => check_point(&cfg, &curve, x, y),
        Command::SplitTest { curve, b } => split_test(&cfg, &curve, b),
        Command::Family {
            curve,
            gen,
            b_start,
            b_step,
            count,
        } => family_scan(&cfg, &curve, gen, b_start, b_step, count),
        Command::Density { curve } => density(&cfg, &curve),
        Command::Revalidate { path } => {
            let mut s = String::new();
            if path.as_os_str() == "-" {
                std::io::stdin().read_to_string(&mut s)?;
            } else {
                s = std::fs::read_to_string(&path)
                    .with_context(|| format!("reading {}", path.display()))?;
            }
            // a family scan holds a list of certificates; anything else is one certificate
            let v: serde_json::Value = serde_json::from_str(&s)?;
            let certs = match v.get("certificates").and_then(|c| c.as_array()) {
                Some(list) => list
                    .iter()
                    .map(serde_json::to_string_pretty)
                    .collect::<Result<Vec<_>, _>>()?,
                None => vec![s],
            };
            for c in &certs {
                let cert = revalidate(c)?;
                println!("ok: b = {}", cert.inputs.b.display);
            }
            Ok(())
        }
    }
}

fn print_json<T: Serialize>(v: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

#[derive(Serialize)]
struct FieldRow {
    d: u64,
    basis: String,
    units: u64,
    weight: u32,
    j_invariant: String,
    family: String,
}

fn fields(cfg: &Config) -> Result<()> {
    let mut rows = Vec::new();
    for k in QuadField::all() {
        let fam = family(k.d() as i64)?;
        let eq = match fam.shape {
            cmcycles::cm::FamilyShape::Quartic => "y^2 = x^3 + a x".to_string(),
            cmcycles::cm::FamilyShape::Sextic => "y^2 = x^3 + a".to_string(),
            cmcycles::cm::FamilyShape::Quadratic => {
                format!("y^2 = x^3 + ({}) a^2 x + ({}) a^3", fam.n, fam.m)
            }
        };
        rows.push(FieldRow {
            d: k.d(),
            basis: k.basis_label(),
            units: k.unit_count(),
            weight: k.weight(),
            j_invariant: cm_j_invariant(k).to_string(),
            family: eq,
        });
    }
    if cfg.output == Output::Json {
        return print_json(&rows);
    }
    for r in rows {
        println!(
            "D = {:<3}  basis {:<22} units {}  weight {}  j = {}  {}",
            r.d, r.basis, r.units, r.weight, r.j_invariant, r.family
        );
    }
    Ok(())
}

#[derive(Serialize)]
struct AdmissibleRow {
    d: u64,
    max_p: u64,
    primes: Vec<u64>,
    tuples: Vec<AdmissibleTuple>,
}

fn admissible(cfg: &Config, d: i64, max_p: u64) -> Result<()> {
    let primes = cmcycles::cm::admissible_primes(d, max_p)?;
    let mut tuples = Vec::new();
    for &p in &primes {
        tuples.extend(admissible_residues(d, p)?);
    }
    let row = AdmissibleRow {
        d: family(d)?.d(),
        max_p,
        primes,
        tuples,
    };
    if cfg.output == Output::Json {
        return print_json(&row);
    }
    let list: Vec<String> = row.primes.iter().map(u64::to_string).collect();
    println!("{}", list.join(" "));
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct TorsionArtifact {
    schema_version: u32,
    /// sqrt(-D) mod p^2 under the chosen embedding.
    sqrt_minus_d: u64,
    tuple: AdmissibleTuple,
    table: TorsionTable,
    kernel: KernelPoly,
    kernel_rendered: String,
    epsilon: Option<Vec<(u64, u64)>>,
}

fn torsion_key(d: i64, p: u64, a: &BigInt, b: &BigInt, conjugate: bool) -> Result<String> {
    let fam = family(d)?;
    let mut sp = SplitPrime::new(fam.field, p)?;
    if conjugate {
        sp = sp.conjugate();
    }
    let p3 = BigInt::from(p).pow(3);
    Ok(format!(
        "torsion-D{}-p{p}-A{}-B{}-u{}-r{}",
        fam.d(),
        a.mod_floor(&p3),
        b.mod_floor(&p3),
        sp.pi_bar_unit(2)?,
        sp.sqrt_minus_d_u64(2)?
    ))
}

fn torsion(cfg: &Config, d: i64, p: u64, a: BigInt, b: BigInt) -> Result<()> {
    let key = torsion_key(d, p, &a, &b, cfg.conjugate)?;
    let cache = match &cfg.cache_dir {
        Some(dir) => {
            Some(Cache::open(dir).with_context(|| format!("opening cache {}", dir.display()))?)
        }
        None => None,
    };
    let cached = match &cache {
        Some(c) => c.get(&key)?,
        None => None,
    };
    let json = match cached {
        Some(s) => s,
        None => {
            let s = Setting::new(d, p, a, b, cfg.precision, cfg.conjugate)?;
            let art = TorsionArtifact {
                schema_version: TORSION_SCHEMA,
                sqrt_minus_d: s.sp.sqrt_minus_d_u64(2)?,
                tuple: s.tuple.clone(),
                kernel_rendered: s.kernel.render(),
                table: s.table,
                kernel: s.kernel,
                epsilon: s.epsilon,
            };
            let json = serde_json::to_string_pretty(&art)?;
            if let Some(c) = &cache {
                c.put(&key, &json)?;
            }
            json
        }
    };
    if cfg.output == Output::Json {
        println!("{json}");
        return Ok(());
    }
    let art: TorsionArtifact = serde_json::from_str(&json).context("corrupt cache entry")?;
    let p = art.table.p;
    let vals: Vec<String> = art.table.values().iter().map(u64::to_string).collect();
    println!(
        "tuple: D = {}, p = {p}, a0 = {}, order {}, cofactor {}",
        art.tuple.d, art.tuple.a0, art.tuple.order, art.tuple.cofactor
    );
    println!("embedding: sqrt(-D) = {} mod {}", art.sqrt_minus_d, p * p);
    println!("roots mod {}: {}", p * p, vals.join(" "));
    println!("kernel: {}", art.kernel_rendered);
    if let Some(eps) = &art.epsilon {
        let e: Vec<String> = eps.iter().map(|(b0, e)| format!("{b0}:{e}")).collect();
        println!("epsilon: {}", e.join(" "));
    }
    Ok(())
}

fn setting(cfg: &Config, c: &CurveArgs) -> Result<Setting> {
    Ok(Setting::new(
        c.d,
        c.p,
        c.curve.0.clone(),
        c.curve.1.clone(),
        cfg.precision,
        cfg.conjugate,
    )?)
}

fn print_symbol(r: &SymbolReport) {
    println!("nontrivial: {}", r.nontrivial);
    println!("rule: {:?}", r.rule);
    println!("formal valuation: {}", r.formal_valuation);
    if let Some(t) = r.matched_root {
        println!("matched root: {} + {}p", t.x0, t.x1);
    }
    for line in &r.trace {
        println!("  {line}");
    }
}

fn print_split(r: &SplitReport) {
    println!("splits: {}", r.splits);
    println!("degenerate: {}", r.degenerate);
    println!("branch: {:?}", r.branch);
    for line in &r.trace {
        println!("  {line}");
    }
}

fn check_point(cfg: &Config, c: &CurveArgs, x: BigRat, y: BigRat) -> Result<()> {
    let s = setting(cfg, c)?;
    let k = s.field();
    let pt = s.point_exact(QuadRat::from_rational(k, x), QuadRat::from_rational(k, y))?;
    let r = check_symbol(&pt, &s)?;
    if cfg.output == Output::Json {
        return print_json(&r);
    }
    print_symbol(&r);
    Ok(())
}

fn split_test(cfg: &Config, c: &CurveArgs, b: BigRat) -> Result<()> {
    let s = setting(cfg, c)?;
    let r = quadratic_split_test(&QuadRat::from_rational(s.field(), b), &s)?;
    if cfg.output == Output::Json {
        return print_json(&r);
    }
    print_split(&r);
    Ok(())
}

fn family_scan(
    cfg: &Config,
    c: &CurveArgs,
    gen: (BigRat, BigRat),
    start: BigInt,
    step: BigInt,
    count: usize,
) -> Result<()> {
    let s = setting(cfg, c)?;
    let k = s.field();
    let (x, y) = (
        QuadRat::from_rational(k, gen.0),
        QuadRat::from_rational(k, gen.1),
    );
    let out = scan_b_candidates(&s, (&x, &y), b_progression(k, start, step), count)?;
    if let Some(d) = &out.diagnostic {
        eprintln!("warning: {d}");
    }
    if cfg.output == Output::Json {
        return print_json(&out);
    }
    for cert in &out.certificates {
        print!("{}", cert.render_text());
    }
    for r in &out.rejections {
        println!("rejected b = {}: {}", r.b.display, r.reason);
    }
    println!("{} certificate(s)", out.certificates.len());
    Ok(())
}

fn density(cfg: &Config, c: &CurveArgs) -> Result<()> {
    let s = setting(cfg, c)?;
    let r = density_report(&s)?;
    if cfg.output == Output::Json {
        return print_json(&r);
    }
    for row in &r.rows {
        println!("b0 = {:<4} fails at b1 = {}", row.b0, row.failing_b1);
    }
    println!(
        "density: {} ({}/{})",
        format_rational(&r.density),
        r.nontrivial,
        r.total
    );
    Ok(())
}
