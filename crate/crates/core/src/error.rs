use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: String,
        reason: &'static str,
    },

    #[error("stencil has no nonzero coefficient")]
    EmptyStencil,

    #[error("stencil is not conservative: coefficients sum to {sum}")]
    NonConservative { sum: String },

    #[error("scheme is not admissible: {0}")]
    Inadmissible(String),

    #[error("spectral transform needs {required} bytes, budget is {budget} bytes")]
    MemoryBudget { required: u64, budget: u64 },

    #[error("envelope with decay rate {c_used} underflows where the Green's function is nonzero")]
    EnvelopeUnderflow { c_used: String },

    #[error("no sign alternations detected in the Green's function")]
    NoOscillations,

    #[error("initial data must vanish at -infinity, declared left tail is {0}")]
    NonzeroLeftTail(String),

    #[error("unsupported: {0}")]
    Unsupported(&'static str),

    #[error("not enough samples to fit a decay rate ({0} points)")]
    InsufficientData(usize),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, value: impl ToString, reason: &'static str) -> Self {
        Error::InvalidParameter {
            name,
            value: value.to_string(),
            reason,
        }
    }
}
