use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use cmcycles::arith::{parse_rational, BigRat};
use num_bigint::BigInt;

#[derive(Parser, Debug)]
#[command(
    name = "cmcycles",
    version,
    about = "Local symbols on self-products of CM elliptic curves"
)]
pub struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// p-adic precision N (digits), 3..=8.
    #[arg(long, global = true, default_value_t = 4, value_parser = clap::value_parser!(u32).range(3..=8))]
    pub precision: u32,
    /// Cache directory; overrides CMCYCLES_CACHE_DIR.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Recompute instead of reading the cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Worker threads.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub jobs: Option<u64>,
    /// Use the conjugate prime above p.
    #[arg(long, global = true)]
    pub conjugate: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// The nine imaginary quadratic fields of class number one.
    Fields,
    /// Admissible primes for one field.
    Admissible {
        #[arg(long = "D", alias = "d", allow_negative_numbers = true)]
        d: i64,
        #[arg(long, default_value_t = 1000)]
        max_p: u64,
    },
    /// Etale torsion x-coordinates mod p^2 and the kernel polynomial.
    Torsion {
        #[arg(long = "D", alias = "d")]
        d: i64,
        #[arg(long)]
        p: u64,
        #[arg(long = "A", allow_negative_numbers = true)]
        a: BigInt,
        #[arg(long = "B", allow_negative_numbers = true)]
        b: BigInt,
    },
    /// Non-triviality of the local symbol of a rational point.
    CheckPoint {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        x: BigRat,
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        y: BigRat,
    },
    /// Splitting of v in K(sqrt(f(b))).
    SplitTest {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        b: BigRat,
    },
    /// Scan b = start + k*step and certify the resulting quadratic extensions.
    Family {
        #[command(flatten)]
        curve: CurveArgs,
        /// Generator point as x,y with rational coordinates.
        #[arg(long, value_parser = rational_pair, allow_hyphen_values = true)]
        gen: (BigRat, BigRat),
        #[arg(long, allow_negative_numbers = true)]
        b_start: BigInt,
        #[arg(long, allow_negative_numbers = true)]
        b_step: BigInt,
        #[arg(long)]
        count: usize,
    },
    /// Failing second digits per torsion residue and the resulting density.
    Density {
        #[command(flatten)]
        curve: CurveArgs,
    },
    /// Recompute a certificate from its JSON and compare.
    Revalidate {
        /// Certificate or family scan JSON, or - for stdin.
        path: PathBuf,
    },
}

#[derive(Args, Debug)]
pub struct CurveArgs {
    /// A,B of y^2 = x^3 + Ax + B.
    #[arg(long, value_parser = integer_pair, allow_hyphen_values = true)]
    pub curve: (BigInt, BigInt),
    #[arg(long)]
    pub p: u64,
    #[arg(long = "D", alias = "d")]
    pub d: i64,
}

fn rational(s: &str) -> Result<BigRat, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn split_pair(s: &str) -> Result<(&str, &str), String> {
    s.split_once(',')
        .ok_or_else(|| format!("expected two comma-separated values, got {s:?}"))
}

fn rational_pair(s: &str) -> Result<(BigRat, BigRat), String> {
    let (x, y) = split_pair(s)?;
    Ok((rational(x.trim())?, rational(y.trim())?))
}

fn integer_pair(s: &str) -> Result<(BigInt, BigInt), String> {
    let (a, b) = split_pair(s)?;
    let int = |t: &str| {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| format!("bad integer {t:?}"))
    };
    Ok((int(a)?, int(b)?))
}
