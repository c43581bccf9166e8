use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument violates an operation's preconditions.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// An experiment or channel configuration is inconsistent.
    #[error("configuration error: {0}")]
    Config(String),

    /// Operand dimensions do not agree.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A numerically degenerate input (zero energy, zero column, ...).
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// A failure inside a Monte-Carlo trial, with the trial attached.
    #[error("trial {trial}: {source}")]
    Trial {
        trial: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("malformed measurement-matrix file: {0}")]
    PhiFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Attach a trial index to an error bubbling out of a trial.
    pub fn in_trial(self, trial: usize) -> Self {
        Error::Trial {
            trial,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
