use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial has non-real roots")]
    ComplexRoots,
    #[error("comparison undecided at the {bits}-bit precision cap")]
    Undecided { bits: u32 },
    #[error("empty coefficient range")]
    EmptyRange,
    #[error("obstruction value does not exceed the threshold")]
    ValueNotAboveT,
    #[error("cover system is not closed under translation by 1")]
    MissingTranslateClosure,
    #[error("witness is not certified: {0}")]
    NotCertified(String),
    #[error("alpha outside [0, ln 4 / ln 5]")]
    AlphaOutOfRange,
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded below")]
    UnboundedBelow,
    #[error("|Res(f, Q)| != 1 for factor {factor}")]
    ResultantFailed { factor: String },
    #[error("Q does not divide the critical-point numerator")]
    NotCritical,
    #[error("strict maximum check undecided at the {bits}-bit precision cap")]
    StrictMaxUndecided { bits: u32 },
    #[error("sup exceeds the obstruction value near x = {point}")]
    SupExceedsM { point: String },
    #[error("conjugate check failed: {0}")]
    ConjugateCheckFailed(String),
    #[error("interval contains an integer in its interior")]
    ContainsInteger,
    #[error("polynomial is reducible or has complex roots")]
    ReducibleOrComplex,
    #[error("no root of the defining equation")]
    NoRoot,
    #[error("input polynomial is monic")]
    MonicInput,
    #[error("Q does not divide R")]
    QNotDividingR,
    #[error("roots of Q are not contained in the interval")]
    RootsEscapeI,
    #[error("no nonmonic candidate factor")]
    NoCandidate,
    #[error("{0} candidate factors above the bound")]
    MultipleCandidates(usize),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse { pos, msg: msg.into() }
    }
}
