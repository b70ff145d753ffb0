use dispersive_green::Error;

pub const EXIT_RUNTIME: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_INADMISSIBLE: u8 = 3;
pub const EXIT_MEMORY: u8 = 4;
pub const EXIT_STRICT: u8 = 5;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }

    pub fn invalid(message: impl Into<String>) -> Self {
        Self::new(EXIT_INVALID, message)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidParameter { .. }
            | Error::EmptyStencil
            | Error::NonzeroLeftTail(_)
            | Error::Unsupported(_) => EXIT_INVALID,
            Error::NonConservative { .. } | Error::Inadmissible(_) => EXIT_INADMISSIBLE,
            Error::MemoryBudget { .. } => EXIT_MEMORY,
            Error::EnvelopeUnderflow { .. } | Error::NoOscillations | Error::InsufficientData(_) => {
                EXIT_RUNTIME
            }
        };
        Self::new(code, e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self::new(EXIT_RUNTIME, format!("i/o error: {e}"))
    }
}
