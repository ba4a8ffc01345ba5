//! Abstract syntax of the first-order language.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;

/// The fixed primitive table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Prim {
    Add,
    Sub,
    Mul,
    Inc,
    Dec,
    NumEq,
    Lt,
    Le,
    Zp,
    Nfix,
    Max,
    Not,
    Consp,
    Car,
    Cdr,
    Cons,
    Equal,
    Natp,
    Integerp,
}

impl Prim {
    pub const ALL: [Prim; 19] = [
        Prim::Add,
        Prim::Sub,
        Prim::Mul,
        Prim::Inc,
        Prim::Dec,
        Prim::NumEq,
        Prim::Lt,
        Prim::Le,
        Prim::Zp,
        Prim::Nfix,
        Prim::Max,
        Prim::Not,
        Prim::Consp,
        Prim::Car,
        Prim::Cdr,
        Prim::Cons,
        Prim::Equal,
        Prim::Natp,
        Prim::Integerp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Prim::Add => "+",
            Prim::Sub => "-",
            Prim::Mul => "*",
            Prim::Inc => "1+",
            Prim::Dec => "1-",
            Prim::NumEq => "=",
            Prim::Lt => "<",
            Prim::Le => "<=",
            Prim::Zp => "zp",
            Prim::Nfix => "nfix",
            Prim::Max => "max",
            Prim::Not => "not",
            Prim::Consp => "consp",
            Prim::Car => "car",
            Prim::Cdr => "cdr",
            Prim::Cons => "cons",
            Prim::Equal => "equal",
            Prim::Natp => "natp",
            Prim::Integerp => "integerp",
        }
    }

    pub fn from_name(name: &str) -> Option<Prim> {
        Prim::ALL.into_iter().find(|p| p.name() == name)
    }

    /// Accepted argument counts: `(min, max)`, `max = None` for variadic.
    pub fn arity(self) -> (usize, Option<usize>) {
        match self {
            Prim::Add | Prim::Mul => (0, None),
            Prim::Sub => (1, Some(2)),
            Prim::Inc
            | Prim::Dec
            | Prim::Zp
            | Prim::Nfix
            | Prim::Not
            | Prim::Consp
            | Prim::Car
            | Prim::Cdr
            | Prim::Natp
            | Prim::Integerp => (1, Some(1)),
            Prim::NumEq | Prim::Lt | Prim::Le | Prim::Max | Prim::Cons | Prim::Equal => (2, Some(2)),
        }
    }

    pub fn accepts(self, argc: usize) -> bool {
        let (lo, hi) = self.arity();
        argc >= lo && hi.is_none_or(|hi| argc <= hi)
    }

    pub fn arity_description(self) -> String {
        match self.arity() {
            (lo, None) => format!("at least {lo}"),
            (lo, Some(hi)) if lo == hi => lo.to_string(),
            (lo, Some(hi)) => format!("{lo} to {hi}"),
        }
    }

    /// Unary primitives usable as type predicates in a `:signature`.
    pub fn is_type_predicate(self) -> bool {
        matches!(self, Prim::Natp | Prim::Integerp | Prim::Consp | Prim::Zp | Prim::Not)
    }
}

impl fmt::Display for Prim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    IntLit(BigInt),
    BoolLit(bool),
    SymLit(String),
    NilLit,
    Var(String),
    Prim(Prim, Vec<Expr>),
    If(Box<Expr>, Box<Expr>, Box<Expr>),
    And(Vec<Expr>),
    Or(Vec<Expr>),
    Call(String, Vec<Expr>),
}

impl Expr {
    pub fn int(n: impl Into<BigInt>) -> Expr {
        Expr::IntLit(n.into())
    }

    pub fn var(name: impl Into<String>) -> Expr {
        Expr::Var(name.into())
    }

    pub fn prim(op: Prim, args: Vec<Expr>) -> Expr {
        Expr::Prim(op, args)
    }

    pub fn call(name: impl Into<String>, args: Vec<Expr>) -> Expr {
        Expr::Call(name.into(), args)
    }

    pub fn if_(test: Expr, then: Expr, els: Expr) -> Expr {
        Expr::If(Box::new(test), Box::new(then), Box::new(els))
    }

    pub fn negate(e: Expr) -> Expr {
        Expr::Prim(Prim::Not, vec![e])
    }

    pub fn t() -> Expr {
        Expr::BoolLit(true)
    }

    pub fn is_true_lit(&self) -> bool {
        matches!(self, Expr::BoolLit(true))
    }

    /// Conjunction with one-conjunct and constant-true simplification only.
    pub fn and_of(mut parts: Vec<Expr>) -> Expr {
        parts.retain(|p| !p.is_true_lit());
        match parts.len() {
            0 => Expr::t(),
            1 => parts.pop().unwrap(),
            _ => Expr::And(parts),
        }
    }

    /// Disjunction that only drops the wrapper around a single disjunct.
    pub fn or_of(mut parts: Vec<Expr>) -> Expr {
        match parts.len() {
            0 => Expr::NilLit,
            1 => parts.pop().unwrap(),
            _ => Expr::Or(parts),
        }
    }

    /// Direct subexpressions, left to right.
    pub fn children(&self) -> Vec<&Expr> {
        match self {
            Expr::IntLit(_) | Expr::BoolLit(_) | Expr::SymLit(_) | Expr::NilLit | Expr::Var(_) => Vec::new(),
            Expr::Prim(_, args) | Expr::And(args) | Expr::Or(args) | Expr::Call(_, args) => args.iter().collect(),
            Expr::If(c, t, e) => vec![c, t, e],
        }
    }

    pub fn contains_call_to(&self, fname: &str) -> bool {
        self.count_calls_to(fname) > 0
    }

    pub fn count_calls_to(&self, fname: &str) -> usize {
        let own = matches!(self, Expr::Call(n, _) if n == fname) as usize;
        own + self.children().into_iter().map(|c| c.count_calls_to(fname)).sum::<usize>()
    }

    /// Names of all called functions.
    pub fn callees(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_callees(&mut out);
        out
    }

    fn collect_callees(&self, out: &mut BTreeSet<String>) {
        if let Expr::Call(n, _) = self {
            out.insert(n.clone());
        }
        for c in self.children() {
            c.collect_callees(out);
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        if let Expr::Var(v) = self {
            out.insert(v.clone());
        }
        for c in self.children() {
            c.collect_vars(out);
        }
    }

    /// Rewrites every call to `fname`, innermost first: `f` receives the
    /// already-rewritten arguments.
    pub fn rewrite_calls(&self, fname: &str, f: &mut dyn FnMut(Vec<Expr>) -> Expr) -> Expr {
        let mut go = |e: &Expr| e.rewrite_calls(fname, f);
        match self {
            Expr::IntLit(_) | Expr::BoolLit(_) | Expr::SymLit(_) | Expr::NilLit | Expr::Var(_) => self.clone(),
            Expr::Prim(op, args) => Expr::Prim(*op, args.iter().map(&mut go).collect()),
            Expr::If(c, t, e) => Expr::if_(go(c), go(t), go(e)),
            Expr::And(args) => Expr::And(args.iter().map(&mut go).collect()),
            Expr::Or(args) => Expr::Or(args.iter().map(&mut go).collect()),
            Expr::Call(name, args) => {
                let args: Vec<Expr> = args.iter().map(&mut go).collect();
                if name == fname {
                    f(args)
                } else {
                    Expr::Call(name.clone(), args)
                }
            }
        }
    }

    /// Replaces variables by expressions.
    pub fn substitute(&self, subst: &dyn Fn(&str) -> Option<Expr>) -> Expr {
        let go = |e: &Expr| e.substitute(subst);
        match self {
            Expr::Var(v) => subst(v).unwrap_or_else(|| self.clone()),
            Expr::IntLit(_) | Expr::BoolLit(_) | Expr::SymLit(_) | Expr::NilLit => self.clone(),
            Expr::Prim(op, args) => Expr::Prim(*op, args.iter().map(go).collect()),
            Expr::If(c, t, e) => Expr::if_(go(c), go(t), go(e)),
            Expr::And(args) => Expr::And(args.iter().map(go).collect()),
            Expr::Or(args) => Expr::Or(args.iter().map(go).collect()),
            Expr::Call(name, args) => Expr::Call(name.clone(), args.iter().map(go).collect()),
        }
    }
}

/// Declared per-parameter and result type predicates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    pub params: Vec<Prim>,
    pub result: Prim,
}

/// A named partial-recursive definition and its options.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionDef {
    pub name: String,
    pub params: Vec<String>,
    pub body: Expr,
    pub default_value: Option<Expr>,
    pub indexed_execution: bool,
    pub non_executable: bool,
    pub wrapper_name: Option<String>,
    pub signature: Option<Signature>,
}

impl FunctionDef {
    pub fn new(name: impl Into<String>, params: Vec<String>, body: Expr) -> Self {
        FunctionDef {
            name: name.into(),
            params,
            body,
            default_value: None,
            indexed_execution: true,
            non_executable: false,
            wrapper_name: None,
            signature: None,
        }
    }

    pub fn is_recursive(&self) -> bool {
        self.body.contains_call_to(&self.name)
    }

    pub fn arity(&self) -> usize {
        self.params.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    /// `<` on naturals; the measure has a single component.
    NaturalLess,
    /// `l<`: strict lexicographic order on fixed-arity natural tuples.
    LexicographicLess,
}

impl Relation {
    pub fn name(self) -> &'static str {
        match self {
            Relation::NaturalLess => "<",
            Relation::LexicographicLess => "l<",
        }
    }
}

/// A `def::total` claim: under `predicate`, `measure` decreases under
/// `relation` across every recursive call.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TotalitySpec {
    pub fname: String,
    pub params: Vec<String>,
    /// Measure components. A single component unless the measure is an `llist`.
    pub measure: Vec<Expr>,
    pub relation: Relation,
    pub predicate: Expr,
    pub theorem_name: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Program {
    pub definitions: Vec<FunctionDef>,
    pub totality_specs: Vec<TotalitySpec>,
}

impl Program {
    pub fn get(&self, name: &str) -> Option<&FunctionDef> {
        self.definitions.iter().find(|d| d.name == name)
    }

    pub fn totality_specs_for<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a TotalitySpec> {
        self.totality_specs.iter().filter(move |t| t.fname == name)
    }
}

/// A plain generated definition, `(defun NAME (PARAMS) BODY)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Definition {
    pub name: String,
    pub params: Vec<String>,
    pub body: Expr,
}
