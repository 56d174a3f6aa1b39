use thiserror::Error;

use crate::dsl::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("line {line}: field `{field}`: {source}")]
    Expression {
        field: String,
        line: usize,
        #[source]
        source: ParseError,
    },

    #[error("missing field `{0}`")]
    MissingField(String),

    #[error("line {line}: {message}")]
    Document { line: usize, message: String },

    #[error("domain error: {what} at {at}")]
    Domain { what: String, at: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("causal type changes between t = {from} and t = {to}")]
    MixedCausalType { from: f64, to: f64 },

    #[error("degenerate curve near {at}: {reason}")]
    DegenerateCurve { reason: String, at: f64 },

    #[error("frame violates its Gram signature by {deviation:e} at s = {at}")]
    FrameClosure { deviation: f64, at: f64 },

    #[error("need at least {needed} valid points, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("branch discriminant changes sign between s = {from} and s = {to}")]
    BranchUndefined { from: f64, to: f64 },

    #[error("torsion changes sign between s = {from} and s = {to}")]
    SignChange { from: f64, to: f64 },

    #[error("fitted torsion has a pole at s = {at} inside the domain")]
    PoleInDomain { at: f64 },

    #[error("integration step fell below {step:e}")]
    StepUnderflow { step: f64 },

    #[error("discriminant left its branch at s = {reached}")]
    BranchExit { reached: f64 },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by malformed input text rather than by the
    /// geometry of a well-formed input.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Parse(_)
                | Error::Expression { .. }
                | Error::MissingField(_)
                | Error::Document { .. }
                | Error::InvalidInput(_)
                | Error::Csv(_)
                | Error::Io(_)
        )
    }
}
