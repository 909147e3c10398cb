use std::fmt;

/// Errors surfaced by the solver library.
#[derive(Debug, Clone, PartialEq)]
pub enum BotError {
    /// A caller-supplied argument is out of range or inconsistent.
    InvalidArgument(String),
    /// A problem instance violates one of its invariants.
    InvalidProblem(Vec<String>),
    /// A topology is not a valid tree over the problem's terminals.
    InvalidTopology(String),
    /// A numeric argument lies outside the domain of a formula.
    DomainError(String),
    /// Input geometry is degenerate (coincident points, zero-length chord).
    DegenerateGeometry(String),
    /// File or JSON payload could not be parsed.
    Parse(String),
}

impl fmt::Display for BotError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BotError::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            BotError::InvalidProblem(violations) => {
                write!(f, "invalid problem: {}", violations.join("; "))
            }
            BotError::InvalidTopology(msg) => write!(f, "invalid topology: {msg}"),
            BotError::DomainError(msg) => write!(f, "domain error: {msg}"),
            BotError::DegenerateGeometry(msg) => write!(f, "degenerate geometry: {msg}"),
            BotError::Parse(msg) => write!(f, "parse error: {msg}"),
        }
    }
}

impl std::error::Error for BotError {}
