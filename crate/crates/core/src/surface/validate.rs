//! Shape check for the definitional transform.
//!
//! The decision spine of a body is the tree of `if`/`and`/`or` nodes reached
//! from the root through branch positions. Every test on the spine must be
//! free of recursive calls: the indexed domain replays these tests without an
//! index.

use super::ast::{Expr, FunctionDef};
use crate::error::ValidationError;

pub fn validate_transformability(def: &FunctionDef) -> Result<(), ValidationError> {
    check_spine(&def.name, &def.body, "body".to_string())
}

fn reject_test(fname: &str, test: &Expr, path: String) -> Result<(), ValidationError> {
    if test.contains_call_to(fname) {
        return Err(ValidationError::RecursiveCallInTest { function: fname.to_string(), path });
    }
    Ok(())
}

fn check_spine(fname: &str, e: &Expr, path: String) -> Result<(), ValidationError> {
    match e {
        Expr::If(c, t, f) => {
            reject_test(fname, c, format!("{path}.test"))?;
            check_spine(fname, t, format!("{path}.then"))?;
            check_spine(fname, f, format!("{path}.else"))
        }
        Expr::And(args) | Expr::Or(args) if !args.is_empty() => {
            let (last, tests) = args.split_last().unwrap();
            for (i, a) in tests.iter().enumerate() {
                reject_test(fname, a, format!("{path}.arg{i}"))?;
            }
            check_spine(fname, last, format!("{path}.arg{}", args.len() - 1))
        }
        _ => Ok(()),
    }
}
