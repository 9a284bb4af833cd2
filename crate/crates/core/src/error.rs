use thiserror::Error;

#[derive(Debug, Error)]
pub enum HanabiError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("illegal action {action} for player {player}: {reason}")]
    IllegalAction {
        player: usize,
        action: String,
        reason: String,
    },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("config key '{key}': {message}")]
    Config { key: String, message: String },
    #[error("unknown rule id {0}")]
    UnknownRule(u16),
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl HanabiError {
    pub fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        HanabiError::Config {
            key: key.into(),
            message: message.into(),
        }
    }

    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        HanabiError::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}

pub type Result<T, E = HanabiError> = std::result::Result<T, E>;
