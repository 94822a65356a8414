use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} is below 5")]
    ModulusTooSmall(u64),
    #[error("{value} is not a unit modulo {p}")]
    NotAUnit { value: u64, p: u32 },
    #[error("prime list is empty")]
    EmptyPrimeList,
    #[error("prime {0} listed twice")]
    DuplicatePrime(u32),

    #[error("period {0} is below 2")]
    PeriodTooSmall(u64),
    #[error("signature {0} is not hyperbolic")]
    NotHyperbolic(String),
    #[error("{0} periods given, at least 3 required")]
    TooFewPeriods(usize),
    #[error("permutation representation is not transitive")]
    NonTransitive,
    #[error("images do not satisfy the product-one relation")]
    ProductNotIdentity,
    #[error("representation shape does not match the signature: {0}")]
    RepresentationShape(String),
    #[error("image of generator {index} has order {order}, which does not divide {period}")]
    ImageOrderMismatch { index: usize, order: u64, period: u64 },
    #[error("area equation has no non-negative integral genus (got {0})")]
    NoIntegralGenus(String),

    #[error("exponent {value} at position {index} is outside [1, {max}]")]
    ExponentOutOfRange { index: usize, value: i64, max: u32 },
    #[error("exponent sum {sum} is {residue} mod {p}, expected 0")]
    SumNotZero { sum: u64, residue: u32, p: u32 },
    #[error("{0} branch points given, at least 3 required")]
    TooFewPoints(usize),
    #[error("moduli differ: {0} vs {1}")]
    ModulusMismatch(u32, u32),
    #[error("enumeration exceeded the budget of {budget} nodes")]
    BudgetExceeded { budget: u64 },
    #[error("no isolated class exists for p = {p}, d = {d}")]
    NoIsolatedClass { p: u32, d: u64 },

    #[error("invalid extension parameters: n = {n}, u = {u} (need n >= 2 and u^n = 1 mod {p})")]
    InvalidExtension { p: u32, n: u32, u: u32 },
    #[error("extension witness rejected: {0}")]
    WitnessRejected(String),

    #[error("genus {0} is below 2")]
    GenusTooSmall(u64),

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
}
