use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("field has {expected} generators but sigma lists {sigma} images and its inverse {inverse}")]
    Arity { expected: usize, sigma: usize, inverse: usize },
    #[error("generator `{0}` declared twice")]
    DuplicateGenerator(String),
    #[error("sigma image mentions a symbol that is not a field generator")]
    ForeignGenerator,
    #[error("the given inverse does not invert sigma on generator `{0}`")]
    NotInverse(String),
}

/// Errors raised by the symbolic kernel.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("resource limit: more than {budget} S-pair reductions")]
    ResourceLimit { budget: usize },
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable list clash: {0}")]
    VariableClash(String),
    #[error("the ideal of `{0}` contains 1")]
    EmptyVariety(String),
    #[error("map has {got} components but target has {expected} coordinates")]
    ComponentCount { expected: usize, got: usize },
    #[error("map does not land in its target: {0}")]
    ImageNotInTarget(String),
    #[error("a denominator of the map vanishes identically on the subvariety")]
    MapUndefinedOnX,
    #[error("composition undefined: {0}")]
    CompositionUndefined(String),
    #[error("map is not dominant onto the transformed carrier")]
    NotDominant,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("fibre undefined at the given parameter: {0}")]
    FibreUndefined(String),
    #[error("fibres differ: Y_e != Y_e'")]
    FibreMismatch,
    #[error("parameter is not in H0: {0}")]
    NotInH0(String),
    #[error("rho is not affine in the chart coordinates")]
    NonAffineRho,
    #[error("presentation incomplete: {0}")]
    PresentationIncomplete(String),
    #[error("identity fails ({what}): residual {residual}")]
    IdentityFails { what: String, residual: String },
    #[error("not found: {0}")]
    NotFound(String),
    #[error("orbit leaves the domain of the map at iterate {0}")]
    OrbitLeavesDomain(usize),
    #[error("search incomplete: {0}")]
    IncompleteSearch(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
