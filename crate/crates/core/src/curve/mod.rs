//! Short Weierstrass curves over F_p and Z/p^N, and division polynomials.

pub mod fp;
pub mod poly;
pub mod ring;

pub use fp::{CurveFp, PointFp};
pub use poly::{division_poly, division_value, x_multiple, Coeff, FieldElem, Poly, RingElem};
pub use ring::{AffinePointR, CurveRing};
