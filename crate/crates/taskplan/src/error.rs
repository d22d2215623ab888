use std::fmt;

use thiserror::Error;

/// A syntax or semantic error in `.kd-pddl` text, located at a token.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub expected: Vec<String>,
    pub found: String,
    pub context: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: expected ", self.line, self.col)?;
        match self.expected.as_slice() {
            [] => write!(f, "nothing")?,
            [one] => write!(f, "{one}")?,
            many => write!(f, "one of {}", many.join(", "))?,
        }
        write!(f, ", found {}", self.found)?;
        if !self.context.is_empty() {
            write!(f, " (in {})", self.context)?;
        }
        Ok(())
    }
}

/// A structural problem with a programmatically built domain or problem.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("unknown type `{0}`")]
    UnknownType(String),
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("predicate `{pred}` takes {expected} arguments, got {got}")]
    Arity { pred: String, expected: usize, got: usize },
    #[error("`{arg}` in operator `{op}` is not a parameter")]
    UnboundArgument { op: String, arg: String },
    #[error("operator `{op}` both adds and deletes {atom}")]
    AddDeleteOverlap { op: String, atom: String },
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("duplicate declaration of `{0}`")]
    Duplicate(String),
}
