//! Decision-spine analysis: leaves, their path conditions, and the
//! base/recursive split.

use crate::error::TransformError;
use crate::surface::{validate_transformability, Expr, FunctionDef};

/// One test on a path, with the branch taken.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Literal {
    pub test: Expr,
    pub polarity: bool,
}

impl Literal {
    pub fn to_expr(&self) -> Expr {
        if self.polarity {
            self.test.clone()
        } else {
            Expr::negate(self.test.clone())
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Leaf {
    pub path: Vec<Literal>,
    pub expr: Expr,
    /// No call to the defined function occurs in `expr`.
    pub is_base: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchAnalysis {
    /// Leaves in left-to-right spine order (then-branch before else-branch).
    pub leaves: Vec<Leaf>,
}

impl BranchAnalysis {
    pub fn base_leaves(&self) -> impl Iterator<Item = &Leaf> {
        self.leaves.iter().filter(|l| l.is_base)
    }

    pub fn recursive_leaves(&self) -> impl Iterator<Item = &Leaf> {
        self.leaves.iter().filter(|l| !l.is_base)
    }
}

/// A node of the decision spine. `and`/`or` on the spine are decisions:
/// `(and a b)` branches like `(if a b nil)` and `(or a b)` like `(if a a b)`.
pub(crate) enum Spine<'a> {
    Branch { test: &'a Expr, then: Box<Spine<'a>>, els: Box<Spine<'a>> },
    Leaf(Expr),
}

pub(crate) fn spine(e: &Expr) -> Spine<'_> {
    match e {
        Expr::If(c, t, f) => Spine::Branch { test: c, then: Box::new(spine(t)), els: Box::new(spine(f)) },
        Expr::And(args) => and_spine(args),
        Expr::Or(args) => or_spine(args),
        _ => Spine::Leaf(e.clone()),
    }
}

fn and_spine(args: &[Expr]) -> Spine<'_> {
    match args {
        [] => Spine::Leaf(Expr::t()),
        [only] => spine(only),
        [first, rest @ ..] => {
            Spine::Branch { test: first, then: Box::new(and_spine(rest)), els: Box::new(Spine::Leaf(Expr::NilLit)) }
        }
    }
}

fn or_spine(args: &[Expr]) -> Spine<'_> {
    match args {
        [] => Spine::Leaf(Expr::NilLit),
        [only] => spine(only),
        [first, rest @ ..] => {
            Spine::Branch { test: first, then: Box::new(Spine::Leaf(first.clone())), els: Box::new(or_spine(rest)) }
        }
    }
}

impl Spine<'_> {
    /// Folds the spine back into an expression, mapping each leaf and
    /// collapsing `(if c a a)` to `a`.
    pub(crate) fn fold(&self, leaf: &mut dyn FnMut(&Expr) -> Expr) -> Expr {
        match self {
            Spine::Leaf(e) => leaf(e),
            Spine::Branch { test, then, els } => {
                let t = then.fold(leaf);
                let f = els.fold(leaf);
                if t == f {
                    t
                } else {
                    Expr::if_((*test).clone(), t, f)
                }
            }
        }
    }

    /// Like [`Spine::fold`] but without collapsing equal branches.
    pub(crate) fn map(&self, leaf: &mut dyn FnMut(&Expr) -> Expr) -> Expr {
        match self {
            Spine::Leaf(e) => leaf(e),
            Spine::Branch { test, then, els } => {
                let t = then.map(leaf);
                let f = els.map(leaf);
                Expr::if_((*test).clone(), t, f)
            }
        }
    }

    fn collect(&self, fname: &str, path: &mut Vec<Literal>, out: &mut Vec<Leaf>) {
        match self {
            Spine::Leaf(e) => {
                out.push(Leaf { path: path.clone(), expr: e.clone(), is_base: !e.contains_call_to(fname) })
            }
            Spine::Branch { test, then, els } => {
                path.push(Literal { test: (*test).clone(), polarity: true });
                then.collect(fname, path, out);
                path.pop();
                path.push(Literal { test: (*test).clone(), polarity: false });
                els.collect(fname, path, out);
                path.pop();
            }
        }
    }
}

pub fn analyze_branches(def: &FunctionDef) -> Result<BranchAnalysis, TransformError> {
    validate_transformability(def)?;
    let mut leaves = Vec::new();
    spine(&def.body).collect(&def.name, &mut Vec::new(), &mut leaves);
    if !leaves.iter().any(|l| l.is_base) {
        return Err(TransformError::NoBaseCase { function: def.name.clone() });
    }
    Ok(BranchAnalysis { leaves })
}

/// The user's default if given, otherwise the first base leaf.
pub fn infer_default(def: &FunctionDef, analysis: &BranchAnalysis) -> Result<Expr, TransformError> {
    if let Some(dv) = &def.default_value {
        return Ok(dv.clone());
    }
    analysis
        .base_leaves()
        .next()
        .map(|l| l.expr.clone())
        .ok_or_else(|| TransformError::NoBaseCase { function: def.name.clone() })
}

fn conj(mut parts: Vec<Expr>) -> Expr {
    match parts.len() {
        0 => Expr::t(),
        1 => parts.pop().unwrap(),
        _ => Expr::And(parts),
    }
}

/// Disjunction over base leaves of the conjunction of their path literals.
pub fn build_base_predicate(analysis: &BranchAnalysis) -> Expr {
    let disjuncts: Vec<Expr> =
        analysis.base_leaves().map(|l| conj(l.path.iter().map(Literal::to_expr).collect())).collect();
    Expr::or_of(disjuncts)
}
