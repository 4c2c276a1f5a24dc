use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the library reports. Variants are grouped by the module
/// that raises them; the CLI maps them onto exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    // gf
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("modulus is reducible over F_{0}")]
    ReducibleModulus(u32),
    #[error("modulus must be monic of degree {expected}")]
    BadModulus { expected: usize },
    #[error("field of order {p}^{degree} exceeds the 2^20 element cap")]
    FieldTooLarge { p: u32, degree: u32 },
    #[error("invalid field parameters: {0}")]
    BadFieldParams(String),

    // fqlin
    #[error("basis is not F_q-linearly independent")]
    BasisNotIndependent,
    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),

    // skew
    #[error("sigma powers differ: {0} vs {1}")]
    SigmaMismatch(u32, u32),
    #[error("sigma power {s} does not generate Gal(F_q^{m}/F_q)")]
    BadSigma { s: u32, m: u32 },
    #[error("invalid evaluation pair: {0}")]
    InvalidPair(String),
    #[error("polynomial degree {deg} is not below {bound}")]
    DegreeTooLarge { deg: usize, bound: usize },
    #[error("the zero polynomial has no finite kernel dimension")]
    ZeroPolynomial,

    // srcode
    #[error("vector does not match block profile: {0}")]
    ProfileMismatch(String),
    #[error("invalid block profile: {0}")]
    BadProfile(String),
    #[error("invalid code: {0}")]
    InvalidCode(String),
    #[error("enumeration of {count} items exceeds budget {budget}")]
    TooLarge { count: u128, budget: u128 },
    #[error("code is the full space and has no nonzero dual")]
    FullSpace,
    #[error("permutation moves a block onto one of different length")]
    IllegalPermutation,
    #[error("isometry data invalid: {0}")]
    BadIsometry(String),

    // geometry
    #[error("code is degenerate: {0}")]
    DegenerateCode(String),
    #[error("invalid system: {0}")]
    InvalidSystem(String),
    #[error("operation requires k = {expected}, got {got}")]
    WrongDimension { expected: usize, got: usize },
    #[error("multi-linear set is not scattered")]
    NotScattered,

    // constructions
    #[error("bad dimension: {0}")]
    BadDimension(String),
    #[error("extension points gamma and delta must be nonzero")]
    ZeroExtension,
    #[error("construction requires characteristic {expected} with q = {expected}")]
    BadCharacteristic { expected: u32 },
    #[error("delta lies in H")]
    DeltaInH,
    #[error("norm subgroup condition violated: {0}")]
    NormSubgroupViolation(String),
    #[error("polynomial is reducible")]
    ReduciblePolynomial,
    #[error("polynomial is irreducible but not primitive (companion order {order})")]
    NotPrimitive { order: u128 },
    #[error("subspace is not closed under F_q^{r}")]
    NotFqrSubspace { r: u32 },

    // io
    #[error("parse error: {0}")]
    Parse(String),
}
