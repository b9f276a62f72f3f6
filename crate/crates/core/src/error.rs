use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("unknown operation `{name}` at byte {offset}")]
    UnknownOperation { name: String, offset: usize },

    #[error("operation `{name}` expects {expected} argument(s), got {found} (at byte {offset})")]
    ArityMismatch {
        name: String,
        expected: usize,
        found: usize,
        offset: usize,
    },

    #[error("invalid signature: {0}")]
    InvalidSignature(String),

    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("signature mismatch between `{left}` and `{right}`")]
    SignatureMismatch { left: String, right: String },

    #[error("variable ${index} out of range (width {width})")]
    VariableOutOfRange { index: usize, width: usize },

    #[error("element {element} out of range for carrier of size {size}")]
    ElementOutOfRange { element: usize, size: usize },

    #[error("not a homomorphism: {0}")]
    NotHomomorphism(String),

    #[error("not a subuniverse: {0}")]
    NotSubuniverse(String),

    #[error("{what} exceeded cap of {cap} (found {found} so far)")]
    CapExceeded {
        what: &'static str,
        cap: usize,
        found: usize,
    },

    #[error("algebra `{0}` is not in the variety (an identity of the generator fails)")]
    NotInVariety(String),

    #[error("split epimorphism equations violated: {0}")]
    SplittingViolated(String),

    #[error("witness bundle shape error: {0}")]
    BundleShape(String),

    #[error("congruence-distributivity certification failed; use refute mode")]
    CdCertificationFailed,

    #[error("unknown builtin `{0}`")]
    UnknownBuiltin(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("json: {0}")]
    Json(String),
}

impl Error {
    pub fn is_cap(&self) -> bool {
        matches!(self, Error::CapExceeded { .. })
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
