use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("D = {0} is not one of the nine class-number-one discriminants")]
    UnsupportedD(i64),
    #[error("{0} is not an odd prime >= 5")]
    BadPrime(u64),
    #[error("p = {p} is inert in Q(sqrt(-{d}))")]
    InertPrime { d: u64, p: u64 },
    #[error("p = {p} ramifies in Q(sqrt(-{d}))")]
    RamifiedPrime { d: u64, p: u64 },
    #[error("p = {p} does not split in Q(sqrt(-{d}))")]
    NonSplitPrime { d: u64, p: u64 },
    #[error("{c} is not a square modulo {p}")]
    NonResidue { c: u64, p: u64 },
    #[error("{c} is divisible by {p}")]
    ZeroDivisor { c: u64, p: u64 },
    #[error("p^N = {p}^{n} does not fit machine-word residue arithmetic")]
    PrecisionOverflow { p: u64, n: u32 },
    #[error("precision {0} outside the supported range 3..=8")]
    BadPrecision(u32),
    #[error("not enough p-adic digits: needed {needed}, have {have}")]
    InsufficientPrecision { needed: i64, have: i64 },
    #[error("division by a p-adic zero")]
    DivisionByZero,
    #[error("{0} is not p-integral")]
    NotIntegral(String),

    #[error("curve has bad reduction at p = {0}")]
    BadReduction(u64),
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("slope denominator is not a unit (operands coincide modulo p)")]
    NonUnitSlope,
    #[error("point reduces to a 2-torsion point")]
    TwoTorsion,
    #[error("point does not reduce to a point of exact order p")]
    NotOrderP,

    #[error("curve is not a fiber of the CM family for D = {0}")]
    NotInFamily(u64),
    #[error("fiber has supersingular reduction (p divides the Frobenius trace)")]
    SupersingularFiber,
    #[error("no element of norm p has the required Frobenius trace {0}")]
    NoFrobenius(i64),
    #[error("admissible prime computation disagrees with the exhaustive scan: {0}")]
    CrossCheckMismatch(String),

    #[error("tuple is not admissible: p = {p} does not divide the fiber order {order}")]
    NotAdmissible { p: u64, order: u64 },
    #[error(
        "torsion lift above x0 = {x0} accepted {accepted} second digits (expected exactly one)"
    )]
    InternalAmbiguity { x0: u64, accepted: usize },
    #[error("brute-force oracle limited to p <= 13 (got {0})")]
    OracleTooLarge(u64),
    #[error("off-weight elementary symmetric function e_{0} does not vanish mod p^2")]
    HomogeneityViolation(usize),
    #[error("family parameter a is not a p-adic unit")]
    NonUnitParameter,
    #[error("b0 = {0} is not the residue of an etale torsion x-coordinate")]
    NotATorsionResidue(u64),
    #[error("second p-adic digit of the family parameter is unknown")]
    MissingSecondDigit,

    #[error("odd negative valuation {0} of x(P)")]
    OddNegativeValuation(i64),
    #[error("no torsion root lies above the residue {0}")]
    NoMatchingRoot(u64),
    #[error("inputs fit no non-triviality theorem: {0}")]
    BranchMismatch(String),
    #[error("criterion and formal valuation disagree: {0}")]
    PathDisagreement(String),
    #[error("v does not split in K(sqrt(f(b)))/K")]
    NotSplit,
    #[error("f(b) is a square in K, so K(sqrt(f(b))) = K")]
    DegenerateQuadratic,

    #[error("generator does not satisfy the non-triviality criterion (u(P^) = {0})")]
    GeneratorFailsCriterion(String),
    #[error("[F:K] = {degree} is not below p - 1 = {bound}")]
    ProfileTooLarge { degree: u64, bound: u64 },
    #[error("certificate does not revalidate: {0}")]
    Revalidation(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
