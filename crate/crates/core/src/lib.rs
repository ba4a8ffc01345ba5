//! Step-indexed definitions of partial recursive functions.
//!
//! A recursive definition in a small first-order Lisp is turned into a
//! total step-indexed function and domain predicate, a family of
//! executable variants, and a set of equations that are checked by
//! evaluation over finite grids.

pub mod error;
pub mod exec;
pub mod interp;
pub mod surface;
pub mod totality;
pub mod transform;
pub mod value;
pub mod verify;

pub use error::{Error, EvalError, ParseError, PlanError, TransformError, TupleArityError, ValidationError};
