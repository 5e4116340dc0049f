use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("cannot parse rational from {0:?}; expected num/den or an integer")]
pub struct ParseRatError(pub String);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoreError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("unknown place {0:?}; expected a prime or \"inf\"")]
    BadPlace(String),
    #[error("zero input has no canonical expansion")]
    ZeroInput,
    #[error("Legendre symbol requires an odd prime")]
    EvenPrime,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GaussError {
    #[error("quadratic coefficient alpha is zero")]
    ZeroAlpha,
    #[error("mesh p^{delta} is coarser than the local constancy scale p^{required}")]
    MeshTooCoarse { delta: i64, required: i64 },
    #[error("sum of {terms} terms exceeds the budget of {budget}")]
    SumTooLarge { terms: String, budget: u64 },
    #[error(
        "ball integrals did not stabilize before the term budget ran out (last gamma {gamma})"
    )]
    NoStabilization { gamma: i64 },
    #[error("brute-force integration requires a p-adic place")]
    ArchimedeanPlace,
    #[error("invalid ball: {0}")]
    InvalidBall(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ActionError {
    #[error("time interval has zero length")]
    ZeroInterval,
    #[error("mass is zero")]
    ZeroMass,
    #[error("argument {arg} lies outside the p-adic convergence disk (valuation {valuation}, need >= {required})")]
    OutsideDisk {
        arg: String,
        valuation: String,
        required: i64,
    },
    #[error("actions do not share the intermediate time: {left} vs {right}")]
    TimeMismatch { left: String, right: String },
    #[error(
        "composition is degenerate: quadratic coefficient of the intermediate variable vanishes"
    )]
    DegenerateComposition,
    #[error("mixed second derivative vanishes")]
    DegenerateAction,
    #[error("series-backed actions at different primes ({0} and {1}) cannot be combined")]
    PrimeMismatch(u64, u64),
    #[error("the oscillator action is only defined at a prime place")]
    ArchimedeanOscillator,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PropagatorError {
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error(transparent)]
    Gauss(#[from] GaussError),
    #[error("Planck constant h is zero")]
    ZeroPlanck,
    #[error("kernel specs disagree on {0}")]
    SpecMismatch(&'static str),
    #[error("series precision (error valuation {have}) is insufficient; need {need}")]
    InsufficientPrecision { have: String, need: String },
    #[error("relation between second derivatives is degenerate: {0}")]
    DegenerateRelation(&'static str),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
