use std::fmt;

use thiserror::Error;

/// 1-based line and column in program text.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("{pos}: {message}")]
pub struct SyntaxError {
    pub pos: Pos,
    pub message: String,
}

impl SyntaxError {
    pub fn new(pos: Pos, message: impl Into<String>) -> Self {
        SyntaxError { pos, message: message.into() }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("{pos}: malformed {what}: {detail}")]
    Malformed { pos: Pos, what: &'static str, detail: String },
    #[error("{pos}: unknown function or primitive `{name}`")]
    UnknownFunction { pos: Pos, name: String },
    #[error("{pos}: `{name}` expects {expected} argument(s), got {got}")]
    Arity { pos: Pos, name: String, expected: String, got: usize },
    #[error("{pos}: duplicate definition of `{name}`")]
    DuplicateDefinition { pos: Pos, name: String },
    #[error("{pos}: unbound variable `{name}`")]
    UnboundVariable { pos: Pos, name: String },
    #[error("{pos}: duplicate parameter `{name}`")]
    DuplicateParameter { pos: Pos, name: String },
    #[error("{pos}: `{name}` is reserved and cannot be defined or bound")]
    Reserved { pos: Pos, name: String },
    #[error("{pos}: unknown keyword `{key}`")]
    UnknownKeyword { pos: Pos, key: String },
    #[error("{pos}: totality form names undefined function `{name}`")]
    UndefinedTotalityTarget { pos: Pos, name: String },
}

/// A recursive call found where the construction requires an index-free test.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ValidationError {
    #[error("recursive call in test position at {path} of `{function}`")]
    RecursiveCallInTest { function: String, path: String },
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum TransformError {
    #[error(transparent)]
    Validation(#[from] ValidationError),
    #[error("`{function}` has no base case: its domain is empty at every index")]
    NoBaseCase { function: String },
    #[error("generated name `{name}` for `{function}` clashes with an existing definition")]
    NameClash { function: String, name: String },
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("type error in `{function}` at {path}: {message}")]
    DynamicType { function: String, path: String, message: String },
    #[error("recursion depth exceeded the safety cap of {cap}")]
    RecursionSafetyCap { cap: u64 },
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
    #[error("`{name}` expects {expected} argument(s), got {got}")]
    Arity { name: String, expected: usize, got: usize },
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("`{0}` is declared non-executable")]
    NotExecutable(String),
    #[error("`{0}` has indexed execution disabled")]
    IndexedExecutionDisabled(String),
    #[error("arguments to `{0}` are not in its domain")]
    GuardViolation(String),
}

/// A check plan that cannot be run against a function.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum PlanError {
    #[error("grid has {got} range(s) but `{function}` takes {expected} argument(s)")]
    GridArity { function: String, expected: usize, got: usize },
    #[error("empty grid range for argument {index}")]
    EmptyRange { index: usize },
    #[error("empty depth range")]
    EmptyDepthRange,
    #[error("big must be at least 1")]
    ZeroBig,
}

/// Tuples of different lengths under a lexicographic order.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("cannot compare tuples of arity {left} and {right}")]
pub struct TupleArityError {
    pub left: usize,
    pub right: usize,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Plan(#[from] PlanError),
}

impl From<SyntaxError> for Error {
    fn from(e: SyntaxError) -> Self {
        Error::Parse(ParseError::Syntax(e))
    }
}

impl From<ValidationError> for Error {
    fn from(e: ValidationError) -> Self {
        Error::Transform(TransformError::Validation(e))
    }
}
