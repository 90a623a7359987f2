use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("zero operator")]
    ZeroOperator,
    #[error("operator has order zero; at least one derivative is required")]
    OrderZero,
    #[error("ell = 0: the operator only has polynomial solutions in this setting")]
    EllZero,
    #[error("irregular singularity: deg Q_{index} = {degree} differs from the order {mu}")]
    IrregularSingularity { index: usize, degree: usize, mu: usize },
    #[error("forbidden hypergeometric parameter b = {0} (a non-positive integer)")]
    ForbiddenParameter(String),
    #[error("hypergeometric parameters need len(a) = len(b) + 1")]
    ParameterCount,
    #[error("initial data inconsistent with the recurrence at index {0}")]
    InconsistentInitial(usize),
    #[error("too few initial coefficients: need at least {needed}, got {got}")]
    InsufficientInitial { needed: usize, got: usize },
    #[error("degenerate recurrence: Q_0({0}) = 0 beyond the initial data")]
    DegenerateRecurrence(usize),
    #[error("evaluation point outside the disk of convergence (|point| = {point}, radius = {radius})")]
    OutsideDisk { point: f64, radius: f64 },
    #[error("no finite nonzero singularity: the leading coefficient is a monomial")]
    NoFiniteSingularity,
    #[error("series did not stabilize within {0} terms")]
    NotStabilized(usize),
    #[error("indicial polynomial vanishes at n = {0}")]
    IndicialVanishing(i64),
    #[error("casoratian vanishes at n = {0}")]
    CasoratianZero(i64),
    #[error("Newton iteration failed: {0}")]
    NonConvergence(String),
    #[error("negative coefficient A_{0}: non-negative bounds do not apply")]
    NegativeCoefficient(usize),
    #[error("Padé condition violated: coefficient of w^{0} is nonzero")]
    PadeViolation(i64),
    #[error("saddle root has real part {0} ≤ 1/2")]
    WrongHalfPlane(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("malformed document: {0}")]
    Document(String),
}

pub type Result<T> = std::result::Result<T, Error>;
