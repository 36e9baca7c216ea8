//! Exact rationals, quadratic integers, residues mod p^n and p-adic numbers.

pub mod padic;
pub mod primes;
pub mod quad;
pub mod rational;
pub mod split;
pub mod zmod;

pub use padic::{embed_rational, PadicNum, DEFAULT_PRECISION};
pub use primes::{is_prime, legendre, primes_in, QuadraticCharacter};
pub use quad::{IntegralBasis, QuadField, QuadInt, QuadRat, CLASS_NUMBER_ONE};
pub use rational::{format_rational, int, parse_rational, rat, valuation, BigRat};
pub use split::{quad_split_prime, SplitPrime};
pub use zmod::{hensel_sqrt, sqrt_mod_prime, Zmod};
