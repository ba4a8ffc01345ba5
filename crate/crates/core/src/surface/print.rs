//! Printing definitions back to surface syntax.

use super::ast::{Definition, Expr, FunctionDef, Relation, Signature, TotalitySpec};
use super::sexp::{Sexp, SexpKind};

const WIDTH: usize = 78;

fn sym(s: &str) -> Sexp {
    Sexp::symbol(s)
}

pub fn expr_to_sexp(e: &Expr) -> Sexp {
    match e {
        Expr::IntLit(n) => Sexp::int(n.clone()),
        Expr::BoolLit(true) => sym("t"),
        Expr::BoolLit(false) | Expr::NilLit => sym("nil"),
        Expr::SymLit(s) => Sexp::list(vec![sym("quote"), sym(s)]),
        Expr::Var(v) => sym(v),
        Expr::Prim(op, args) => apply(op.name(), args),
        Expr::If(c, t, f) => Sexp::list(vec![sym("if"), expr_to_sexp(c), expr_to_sexp(t), expr_to_sexp(f)]),
        Expr::And(args) => apply("and", args),
        Expr::Or(args) => apply("or", args),
        Expr::Call(name, args) => apply(name, args),
    }
}

fn apply(head: &str, args: &[Expr]) -> Sexp {
    let mut items = Vec::with_capacity(args.len() + 1);
    items.push(sym(head));
    items.extend(args.iter().map(expr_to_sexp));
    Sexp::list(items)
}

fn params_sexp(params: &[String]) -> Sexp {
    Sexp::list(params.iter().map(|p| sym(p)).collect())
}

fn signature_sexp(sig: &Signature) -> Sexp {
    Sexp::list(vec![Sexp::list(sig.params.iter().map(|p| sym(p.name())).collect()), sym(sig.result.name())])
}

fn flag(b: bool) -> Sexp {
    sym(if b { "t" } else { "nil" })
}

fn declare(xargs: Vec<Sexp>) -> Sexp {
    let mut inner = vec![sym("xargs")];
    inner.extend(xargs);
    Sexp::list(vec![sym("declare"), Sexp::list(inner)])
}

pub fn function_def_to_sexp(def: &FunctionDef) -> Sexp {
    let mut xargs = Vec::new();
    if let Some(sig) = &def.signature {
        xargs.extend([sym(":signature"), signature_sexp(sig)]);
    }
    if let Some(dv) = &def.default_value {
        xargs.extend([sym(":default-value"), expr_to_sexp(dv)]);
    }
    if !def.indexed_execution {
        xargs.extend([sym(":indexed-execution"), flag(false)]);
    }
    if def.non_executable {
        xargs.extend([sym(":non-executable"), flag(true)]);
    }
    if let Some(w) = &def.wrapper_name {
        xargs.extend([sym(":wrapper-macro"), sym(w)]);
    }
    let mut items = vec![sym("def::ung"), sym(&def.name), params_sexp(&def.params)];
    if !xargs.is_empty() {
        items.push(declare(xargs));
    }
    items.push(expr_to_sexp(&def.body));
    Sexp::list(items)
}

pub fn definition_to_sexp(def: &Definition) -> Sexp {
    Sexp::list(vec![sym("defun"), sym(&def.name), params_sexp(&def.params), expr_to_sexp(&def.body)])
}

pub fn totality_to_sexp(spec: &TotalitySpec) -> Sexp {
    let measure = if spec.measure.len() == 1 && spec.relation == Relation::NaturalLess {
        expr_to_sexp(&spec.measure[0])
    } else {
        let mut items = vec![sym("llist")];
        items.extend(spec.measure.iter().map(expr_to_sexp));
        Sexp::list(items)
    };
    Sexp::list(vec![
        sym("def::total"),
        sym(&spec.fname),
        params_sexp(&spec.params),
        declare(vec![
            sym(":measure"),
            measure,
            sym(":well-founded-relation"),
            sym(spec.relation.name()),
            sym(":totality-theorem"),
            sym(&spec.theorem_name),
        ]),
        expr_to_sexp(&spec.predicate),
    ])
}

/// Anything that prints as a top-level form.
pub trait Printable {
    fn to_sexp(&self) -> Sexp;
}

impl Printable for FunctionDef {
    fn to_sexp(&self) -> Sexp {
        function_def_to_sexp(self)
    }
}

impl Printable for Definition {
    fn to_sexp(&self) -> Sexp {
        definition_to_sexp(self)
    }
}

impl Printable for TotalitySpec {
    fn to_sexp(&self) -> Sexp {
        totality_to_sexp(self)
    }
}

impl Printable for Expr {
    fn to_sexp(&self) -> Sexp {
        expr_to_sexp(self)
    }
}

/// Pretty-printed text for a definition or expression.
pub fn print_definition(d: &dyn Printable) -> String {
    pretty(&d.to_sexp())
}

/// Single-line rendering.
pub fn print_flat(d: &dyn Printable) -> String {
    d.to_sexp().to_string()
}

/// Lisp-style layout: a form stays on one line if it fits, otherwise its
/// head and first argument share a line and the rest are aligned below.
pub fn pretty(s: &Sexp) -> String {
    let mut out = String::new();
    layout(s, 0, &mut out);
    out
}

fn layout(s: &Sexp, col: usize, out: &mut String) {
    let flat = s.to_string();
    let items = match &s.kind {
        SexpKind::List(items) if col + flat.len() > WIDTH && items.len() > 1 => items,
        _ => {
            out.push_str(&flat);
            return;
        }
    };
    if items[0].as_symbol() == Some("quote") {
        out.push_str(&flat);
        return;
    }
    out.push('(');
    let head = items[0].to_string();
    out.push_str(&head);
    // Definition forms keep their name and parameters on the first line and
    // indent the remainder by two.
    let is_def = matches!(head.as_str(), "defun" | "def::ung" | "def::total" | "defthm");
    let (inline, body_col) = if is_def { (items.len().min(3) - 1, col + 2) } else { (1, col + head.len() + 2) };
    for item in &items[1..=inline] {
        out.push(' ');
        let here = current_col(out);
        layout(item, here, out);
    }
    for item in &items[inline + 1..] {
        out.push('\n');
        out.push_str(&" ".repeat(body_col));
        layout(item, body_col, out);
    }
    out.push(')');
}

fn current_col(out: &str) -> usize {
    out.len() - out.rfind('\n').map_or(0, |i| i + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::parse::parse_program;
    use crate::surface::sexp::read_one;

    #[test]
    fn nil_prints_canonically() {
        assert_eq!(print_flat(&Expr::NilLit), "nil");
        assert_eq!(print_flat(&Expr::BoolLit(true)), "t");
        assert_eq!(print_flat(&Expr::SymLit("a".into())), "'a");
    }

    #[test]
    fn long_forms_break_but_read_back_identically() {
        let text = "(def::ung ack (x y) (declare (xargs :signature ((natp natp) natp) :default-value 0)) \
                    (if (= x 0) (1+ y) (if (= y 0) (ack (1- x) 1) (ack (1- x) (ack x (1- y))))))";
        let p = parse_program(text).unwrap();
        let printed = print_definition(&p.definitions[0]);
        assert!(printed.contains('\n'));
        assert!(printed.lines().all(|l| l.len() <= WIDTH + 10), "{printed}");
        assert_eq!(read_one(&printed).unwrap(), read_one(text).unwrap());
    }
}
