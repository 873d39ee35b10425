use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FesError {
    #[error("ambient dimension mismatch: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },

    #[error("quotient requested but the second space is not contained in the first")]
    NotSubspace,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("form degree {degree} is out of range for ambient dimension {dim}")]
    FormDegree { degree: usize, dim: usize },

    #[error("{op} is undefined on 0-forms")]
    ZeroFormOperator { op: &'static str },

    #[error("wedge product of a {left}-form and a {right}-form exceeds dimension {dim}")]
    DegreeOverflow { left: usize, right: usize, dim: usize },

    #[error("integration needs a form of top degree {dim}, got degree {degree}")]
    IntegrationDegree { degree: usize, dim: usize },

    #[error("form of polynomial degree {degree} exceeds the degree bound {bound}")]
    DegreeBound { degree: usize, bound: usize },

    #[error("face dimension {requested} out of range for a cell of dimension {dim}")]
    FaceOutOfRange { requested: usize, dim: usize },

    #[error("face is not incident to the cell")]
    NotIncident,

    #[error("tensor-product polynomial spaces are only defined on cubes")]
    QrOnSimplex,

    #[error("tensor product needs cube-type factors")]
    TensorNeedsCubes,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("sequence is not a complex at degree {degree}: d does not map into the next space")]
    NotAComplex { degree: usize },

    #[error("augmenting by constants needs constants in the degree-0 space")]
    MissingConstants,

    #[error("no extension exists for the given boundary data")]
    NoExtension,

    #[error("exactness precondition violated on cell {cell} in degree {degree}")]
    ExactnessViolated { cell: usize, degree: usize },

    #[error("containment violated on cell {cell} in degree {degree}")]
    NotContained { cell: usize, degree: usize },

    #[error("exterior derivative of boundary data is not a trace of the prescribed system")]
    DerivativeNotInTrace,

    #[error("construction check failed on cell {cell} in degree {degree}: {what}")]
    ConstructionCheck { cell: usize, degree: usize, what: String },

    #[error("inner product Gram matrix is not symmetric positive definite")]
    NotPositiveDefinite,

    #[error("serialization: {0}")]
    Serialization(String),
}

pub type Result<T> = std::result::Result<T, FesError>;
