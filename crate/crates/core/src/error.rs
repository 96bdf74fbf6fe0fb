use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("undefined resultant: zero polynomial argument")]
    UndefinedResultant,
    #[error("no elimination variable: both polynomials are constant in `{0}`")]
    NoEliminationVariable(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable lists differ between operands")]
    VariableMismatch,
    #[error("bad reduction: {prime} divides the leading coefficient")]
    BadReduction { prime: u64 },
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("constant polynomial has no factorization")]
    ConstantPolynomial,
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("polynomial is not primitive (content {0})")]
    NotPrimitive(String),
    #[error("polynomial must be monic with constant term +-1")]
    NotUnitMonic,
    #[error("oracle scale exceeded: {0}")]
    OracleScaleExceeded(String),
    #[error("endpoint {0} is a root; perturb it rationally")]
    EndpointIsRoot(String),
    #[error("empty interval: lower endpoint must be below upper endpoint")]
    EmptyInterval,
    #[error("polynomial has no real roots")]
    NoRealRoots,
    #[error("tolerance must be positive")]
    NonPositiveTolerance,
    #[error("k must be at least 2 (got {0})")]
    InvalidK(usize),
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("labels must be distinct")]
    SameLabel,
    #[error("malformed chord diagram: {0}")]
    MalformedDiagram(String),
    #[error("split l={l} out of range for degree {degree}")]
    SplitOutOfRange { l: usize, degree: usize },
    #[error("representation/root mismatch: {0}")]
    RepresentationMismatch(String),
    #[error("theorem contradiction: {0}")]
    TheoremContradiction(String),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
    #[error("parse error: {0}")]
    Parse(String),
}
