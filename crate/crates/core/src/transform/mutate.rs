//! Deliberate corruptions of a transform result.
//!
//! The verification suite must report at least one failure for each of
//! these; a suite that stays green under a mutation is checking nothing.

use super::TransformResult;
use crate::surface::{Expr, Prim};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mutation {
    /// The indexed function returns the plain default when the index runs
    /// out, even at base leaves.
    LiteralDefault,
    /// The first base leaf of the indexed function adds the index to its value.
    LeafPlusIndex,
    /// The indexed domain is true at index zero for every argument.
    BasePredicateTrue,
    /// The first multi-call domain obligation loses its last conjunct.
    DropLastObligation,
    /// The fast path's first base leaf is off by one.
    FastLeafOffByOne,
}

impl Mutation {
    pub const ALL: [Mutation; 5] = [
        Mutation::LiteralDefault,
        Mutation::LeafPlusIndex,
        Mutation::BasePredicateTrue,
        Mutation::DropLastObligation,
        Mutation::FastLeafOffByOne,
    ];

    /// Applies the mutation; returns false when the result has no site for it.
    pub fn apply(self, t: &mut TransformResult) -> bool {
        match self {
            Mutation::LiteralDefault => {
                let Expr::If(_, exhausted, _) = &mut t.indexed_fn.body else { return false };
                let changed = **exhausted != t.default_expr;
                **exhausted = t.default_expr.clone();
                changed
            }
            Mutation::LeafPlusIndex => {
                let index = t.indexed_fn.params[0].clone();
                let callee = t.indexed_fn.name.clone();
                let Expr::If(_, _, body) = &mut t.indexed_fn.body else { return false };
                map_first_base_leaf(body, &callee, &mut |leaf| {
                    Expr::prim(Prim::Add, vec![leaf, Expr::var(index.as_str())])
                })
            }
            Mutation::BasePredicateTrue => {
                let Expr::If(_, base, _) = &mut t.indexed_dom.body else { return false };
                let changed = !base.is_true_lit();
                **base = Expr::t();
                changed
            }
            Mutation::DropLastObligation => drop_last_conjunct(&mut t.indexed_dom.body),
            Mutation::FastLeafOffByOne => {
                let Some(exec) = &mut t.executable else { return false };
                let callee = exec.fast.name.clone();
                map_first_base_leaf(&mut exec.fast.body, &callee, &mut |leaf| Expr::prim(Prim::Inc, vec![leaf]))
            }
        }
    }
}

fn map_first_base_leaf(e: &mut Expr, callee: &str, f: &mut dyn FnMut(Expr) -> Expr) -> bool {
    match e {
        Expr::If(_, t, els) => map_first_base_leaf(t, callee, f) || map_first_base_leaf(els, callee, f),
        leaf if !leaf.contains_call_to(callee) => {
            *leaf = f(leaf.clone());
            true
        }
        _ => false,
    }
}

fn drop_last_conjunct(e: &mut Expr) -> bool {
    match e {
        Expr::And(parts) if parts.len() >= 2 => {
            parts.pop();
            if parts.len() == 1 {
                *e = parts.pop().unwrap();
            }
            true
        }
        Expr::If(c, t, f) => drop_last_conjunct(c) || drop_last_conjunct(t) || drop_last_conjunct(f),
        _ => false,
    }
}
