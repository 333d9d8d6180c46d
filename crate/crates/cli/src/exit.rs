use std::fmt;
use std::path::Path;

use cycleforge::Error;

/// Process outcome other than success, carrying its exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    /// Verification or guarantee failure (1).
    Check(String),
    /// Bad flags or parameter values (2).
    Usage(String),
    /// Input does not meet a command's precondition (3).
    Precondition(String),
    /// Unreadable, unwritable or malformed files (4).
    Io(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Check(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Precondition(_) => 3,
            Failure::Io(_) => 4,
        }
    }

    pub fn read(path: &Path, e: std::io::Error) -> Self {
        Failure::Io(format!("cannot read {}: {e}", path.display()))
    }

    pub fn write(path: &Path, e: std::io::Error) -> Self {
        Failure::Io(format!("cannot write {}: {e}", path.display()))
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Check(m) | Failure::Usage(m) | Failure::Precondition(m) | Failure::Io(m) => f.write_str(m),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::InvalidParameter(_) => Failure::Usage(msg),
            Error::Precondition(_) | Error::NoCycle | Error::BudgetExceeded(_) => Failure::Precondition(msg),
            Error::Parse(_) => Failure::Io(msg),
            Error::InvalidCycle(_)
            | Error::DeadEdge(_)
            | Error::VertexOutOfRange(_)
            | Error::Guarantee(_)
            | Error::Internal(_) => Failure::Check(msg),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codes() {
        assert_eq!(Failure::from(Error::Precondition("x".into())).code(), 3);
        assert_eq!(Failure::from(Error::InvalidParameter("x".into())).code(), 2);
        assert_eq!(Failure::from(Error::Guarantee("x".into())).code(), 1);
        assert_eq!(Failure::from(Error::NoCycle).code(), 3);
    }
}
