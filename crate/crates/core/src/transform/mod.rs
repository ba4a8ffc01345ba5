//! The definitional transform.
//!
//! From one recursive [`FunctionDef`] this synthesizes the step-indexed
//! function `iF(d, ...)`, the step-indexed domain `iF-dom(d, ...)`, the
//! executable family (`mF`, `F-domain`, `comp-F`, exported `F`), and the
//! equations over the logical-level functions `LF`, `LF-dom` and
//! `F-measure` that the verifier checks.

pub mod analysis;
pub mod equations;
pub mod generate;
pub mod mutate;

use std::collections::HashSet;

pub use analysis::{analyze_branches, build_base_predicate, infer_default, BranchAnalysis, Leaf, Literal};
pub use equations::{derive_equations, DerivedEquations, Equation};
pub use generate::{
    build_exec_definitions, build_indexed_dom, build_indexed_fn, exhaustion_value, index_var, ExecDefinitions,
    GeneratedNames, BIG,
};
pub use mutate::Mutation;

use crate::error::TransformError;
use crate::surface::{parse::RESERVED, Definition, Expr, FunctionDef, Prim, Program};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformResult {
    pub source: FunctionDef,
    pub names: GeneratedNames,
    pub analysis: BranchAnalysis,
    pub indexed_fn: Definition,
    pub indexed_dom: Definition,
    pub base_predicate: Expr,
    pub default_expr: Expr,
    /// What `indexed_fn` returns once the index is exhausted.
    pub exhausted_expr: Expr,
    pub derived: DerivedEquations,
    pub executable: Option<ExecDefinitions>,
}

impl TransformResult {
    /// Every printable generated definition, in dependency-friendly order.
    pub fn definitions(&self) -> Vec<&Definition> {
        let mut out = vec![&self.indexed_fn, &self.indexed_dom];
        if let Some(x) = &self.executable {
            out.push(&x.fast);
            out.push(&x.exec_domain);
            out.extend(x.comp.as_ref());
            out.extend(x.exported.as_ref());
            out.extend(x.wrapper.as_ref());
        }
        out
    }
}

pub fn transform_definition(def: &FunctionDef) -> Result<TransformResult, TransformError> {
    let analysis = analyze_branches(def)?;
    let names = GeneratedNames::for_function(def);
    let default_expr = infer_default(def, &analysis)?;
    let base_predicate = build_base_predicate(&analysis);
    let exhausted_expr = exhaustion_value(def, &default_expr);
    let indexed_fn = build_indexed_fn(def, &names, &exhausted_expr);
    let indexed_dom = build_indexed_dom(def, &names, &base_predicate);
    let derived = derive_equations(def, &names, &default_expr);
    let executable = build_exec_definitions(def, &names, &default_expr);
    Ok(TransformResult {
        source: def.clone(),
        names,
        analysis,
        indexed_fn,
        indexed_dom,
        base_predicate,
        default_expr,
        exhausted_expr,
        derived,
        executable,
    })
}

/// Transforms every definition and checks that generated names are unique
/// across the program.
pub fn transform_program(program: &Program) -> Result<Vec<TransformResult>, TransformError> {
    let mut taken: HashSet<String> = program.definitions.iter().map(|d| d.name.clone()).collect();
    taken.insert(BIG.to_string());
    let mut out = Vec::with_capacity(program.definitions.len());
    for def in &program.definitions {
        let result = transform_definition(def)?;
        for name in result.names.introduced() {
            if !taken.insert(name.to_string()) || RESERVED.contains(&name) || Prim::from_name(name).is_some() {
                return Err(TransformError::NameClash { function: def.name.clone(), name: name.to_string() });
            }
        }
        out.push(result);
    }
    Ok(out)
}
