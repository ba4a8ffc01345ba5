//! The s-expression surface language: reading, checking and printing.

pub mod ast;
pub mod parse;
pub mod print;
pub mod sexp;
pub mod validate;

pub use ast::{Definition, Expr, FunctionDef, Prim, Program, Relation, Signature, TotalitySpec};
pub use parse::{parse_definition, parse_expr, parse_program};
pub use print::{print_definition, print_flat, Printable};
pub use validate::validate_transformability;
