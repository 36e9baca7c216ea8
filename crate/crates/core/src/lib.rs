//! Local symbols on self-products of CM elliptic curves: admissible primes,
//! etale torsion lifted p-adically, kernel polynomials, non-triviality
//! criteria and certified families of quadratic extensions.

pub mod arith;
pub mod cm;
pub mod criteria;
pub mod curve;
pub mod error;
pub mod families;
mod serde_str;
pub mod torsion;

pub use error::{Error, Result};
