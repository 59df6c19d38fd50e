use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("SingularMap: linear map has zero determinant")]
    SingularMap,
    #[error("OrderTooLow: rotation order {0} is below 3")]
    OrderTooLow(usize),
    #[error("TraceNotZero: matrix trace {0:e} is not zero")]
    TraceNotZero(f64),
    #[error("NotUnitVector: vector norm {0} differs from 1")]
    NotUnitVector(f64),
    #[error("DegenerateDomain: {0}")]
    DegenerateDomain(String),
    #[error("InvalidDomain: {0}")]
    InvalidDomain(String),
    #[error("NoEigenvalues: empty eigenvalue list")]
    NoEigenvalues,
    #[error("InvalidPlanck: hbar must be positive, got {0}")]
    InvalidPlanck(f64),
    #[error("InvalidParameter: {0}")]
    InvalidParameter(String),
    #[error("MeshTooCoarse: no interior degrees of freedom after Dirichlet elimination")]
    MeshTooCoarse,
    #[error("ZeroTrialFunction: trial vector has zero mass norm")]
    ZeroTrialFunction,
    #[error("TooManyEigenvalues: requested {requested}, only {available} available")]
    TooManyEigenvalues { requested: usize, available: usize },
    #[error("SolverDidNotConverge after {iterations} iterations (worst residual {worst_residual:e}, tolerance {tolerance:e})")]
    SolverDidNotConverge {
        iterations: usize,
        worst_residual: f64,
        tolerance: f64,
        partial_eigenvalues: Vec<f64>,
    },
    #[error("Factorization failed: {0}")]
    Factorization(String),
    #[error("SymmetryRequired: domain must declare rotational symmetry of order >= 3")]
    SymmetryRequired,
    #[error("Parse: {0}")]
    Parse(String),
}

impl Error {
    /// Solver-side failures, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::SolverDidNotConverge { .. } | Error::Factorization(_)
        )
    }
}
