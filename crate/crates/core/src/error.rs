use thiserror::Error;

/// Errors produced by constructors and operations in this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A value violates a structural invariant (bad label, bad sum, bad shape).
    #[error("validation: {0}")]
    Validation(String),

    /// Two values that must share a label set or compatible dimensions do not.
    #[error("alignment: {0}")]
    Alignment(String),

    /// An argument lies outside the domain of the operation.
    #[error("domain: {0}")]
    Domain(String),

    /// Explicit enumeration was refused because the letter count is too large.
    #[error("too large: {0}")]
    TooLarge(String),

    /// An operation needed codewords that the alphabet does not carry.
    #[error("missing codewords: {0}")]
    MissingCodewords(String),

    /// A bit string, CSV field, or record is malformed.
    #[error("format: {0}")]
    Format(String),

    /// One or more trial rows failed validation; one message per offending row.
    #[error("trial data: {}", .0.join("; "))]
    TrialData(Vec<String>),
}

pub type Result<T> = std::result::Result<T, Error>;
