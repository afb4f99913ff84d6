use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// An operation needed more p-adic digits than were available.
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("division by an element indistinguishable from zero")]
    DivisionByZero,
    #[error("invalid field parameters: {0}")]
    InvalidField(String),
    #[error("elements belong to different fields")]
    FieldMismatch,
    /// The requested root of unity does not live in the field. `suggested_f` is the
    /// smallest unramified degree that would contain it, when one exists.
    #[error("no primitive {n}-th root of unity in this field{}", match .suggested_f { Some(f) => format!(" (enlarge f to a multiple of {f})"), None => String::from(" (order divisible by p)") })]
    NoRootOfUnity { n: u64, suggested_f: Option<u32> },
    /// Fixed points or eigenvalues live in a proper extension of K.
    #[error("not K-rational: {0}; enlarge K")]
    NotRational(String),
    #[error("residue field of size {0} is too large to enumerate")]
    ResidueFieldTooLarge(u64),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("group error: {0}")]
    Group(String),
    /// A bounded audit found a witness against admissibility.
    #[error("embedding is not admissible: {0}")]
    NotAdmissible(String),
    #[error("enumeration exceeded the cap of {0} items")]
    Explosion(usize),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn precision(what: impl Into<String>) -> Self {
        Error::PrecisionExhausted(what.into())
    }
}
