use thiserror::Error;

/// Failure classes with stable exit codes.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Mismatch(String),
    #[error("{0}")]
    User(String),
    #[error("internal certification failure: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Mismatch(_) => 1,
            CliError::User(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl From<bgsplit::Error> for CliError {
    fn from(e: bgsplit::Error) -> Self {
        if e.is_internal() {
            CliError::Internal(e.to_string())
        } else {
            CliError::User(e.to_string())
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Mismatch(String::new()).exit_code(), 1);
        assert_eq!(CliError::User(String::new()).exit_code(), 2);
        assert_eq!(CliError::Internal(String::new()).exit_code(), 3);
        let cert = bgsplit::Error::Certification("x".into());
        assert_eq!(CliError::from(cert).exit_code(), 3);
        let user = bgsplit::Error::Precondition("x".into());
        assert_eq!(CliError::from(user).exit_code(), 2);
    }
}
