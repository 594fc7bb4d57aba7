use thiserror::Error;

/// Errors produced by readers, tree transforms, scorers and decoders.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input text.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A sentence that parsed but violates a structural invariant
    /// (cycles, multiple roots, head outside span, ...).
    #[error("sentence {sentence}: {message}")]
    Structure { sentence: usize, message: String },

    /// A tree that was built in memory violates its invariants.
    #[error("invalid tree: {0}")]
    InvalidTree(String),

    /// Two treebanks that do not line up sentence by sentence.
    #[error("alignment error at sentence {sentence}{}: {message}", token.map(|t| format!(", token {t}")).unwrap_or_default())]
    Alignment {
        sentence: usize,
        token: Option<usize>,
        message: String,
    },

    /// A caller passed arguments outside an operation's contract.
    #[error("contract violation: {0}")]
    Contract(String),

    /// Invalid configuration value.
    #[error("configuration error: {0}")]
    Config(String),

    /// Exhaustive search refused because the sentence is too long.
    #[error("brute force refused: sentence length {n} exceeds the cap of {cap}")]
    TooLong { n: usize, cap: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn structure(sentence: usize, message: impl Into<String>) -> Self {
        Error::Structure {
            sentence,
            message: message.into(),
        }
    }

    pub(crate) fn contract(message: impl Into<String>) -> Self {
        Error::Contract(message.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
