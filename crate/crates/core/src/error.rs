use thiserror::Error;

/// Errors raised anywhere in the toolkit.
///
/// The variants are grouped by how a caller should react: bad input, a
/// theorem whose hypotheses do not hold, or a broken internal invariant.
/// [`Error::exit_code`] maps each group onto the CLI exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("operators {0} and {1} do not commute")]
    NotCommuting(usize, usize),
    #[error("operator {0} is not semisimple")]
    NotSemisimple(usize),
    #[error("eigenvalues outside the field: factor {factor} has no root in {field}")]
    EigenvalueOutsideField { factor: String, field: String },
    #[error("semisimple part is not a derivation: {0}")]
    NonSemisimpleDerivation(String),
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("character is not unitary: {0}")]
    NotUnitary(String),
    #[error("character outside the span of the declared characters: {0}")]
    CharacterOutsideSpan(String),
    #[error("explicit sublattice is not trivial on the lattice: {0}")]
    ExplicitSublatticeNotTrivialOnGamma(String),
    #[error("Jacobi identity fails: {0}")]
    JacobiFailure(String),
    #[error("weight additivity fails: {0}")]
    WeightAdditivityFailure(String),
    #[error("subcomplex not closed under the differential: {0}")]
    NotClosedUnderDifferential(String),
    #[error("hypothesis failure: {0}")]
    HypothesisFailure(String),
    #[error("mode hypothesis failure: {0}")]
    ModeHypothesisFailure(String),
    #[error("conjugation closure fails: {0}")]
    ConjugationClosureFailure(String),
    #[error("internal assertion failed: {0}")]
    Internal(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// CLI exit code: 1 hypothesis failure, 2 invalid input, 3 internal assertion.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::HypothesisFailure(_)
            | Error::ModeHypothesisFailure(_)
            | Error::EigenvalueOutsideField { .. }
            | Error::NotSemisimple(_)
            | Error::NotCommuting(..) => 1,
            Error::JacobiFailure(_)
            | Error::WeightAdditivityFailure(_)
            | Error::NotClosedUnderDifferential(_)
            | Error::ConjugationClosureFailure(_)
            | Error::Internal(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
