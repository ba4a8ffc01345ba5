//! Surface forms to [`Program`].
//!
//! ```text
//! (def::ung NAME (PARAM*) (declare (xargs KEY VAL ...))* BODY)
//! (def::total NAME (PARAM*) (declare (xargs KEY VAL ...))* PREDICATE)
//! ```

use std::collections::{HashMap, HashSet};

use super::ast::{Expr, FunctionDef, Prim, Program, Relation, Signature, TotalitySpec};
use super::sexp::{read_all, read_one, Sexp, SexpKind};
use crate::error::{ParseError, Pos};

/// Symbols that can never name a function or a variable.
pub const RESERVED: &[&str] =
    &["if", "and", "or", "quote", "t", "nil", "declare", "xargs", "llist", "def::ung", "def::total", "defun", "BIG"];

/// Proof-control keywords that carry no runtime meaning and are dropped.
const IGNORED_KEYS: &[&str] = &[":guard-hints", ":signature-hints", ":verify-guards"];

pub fn parse_program(text: &str) -> Result<Program, ParseError> {
    let forms = read_all(text)?;
    let mut program = Program::default();
    let mut arities: HashMap<String, usize> = HashMap::new();
    let mut pending_totality: Vec<(Pos, TotalitySpec)> = Vec::new();

    for form in &forms {
        let items = form.as_list().ok_or_else(|| malformed(form.pos, "form", "expected a list"))?;
        match items.first().and_then(Sexp::as_symbol) {
            Some("def::ung") => {
                let def = parse_ung(form.pos, items, &arities)?;
                if arities.contains_key(&def.name) {
                    return Err(ParseError::DuplicateDefinition { pos: form.pos, name: def.name });
                }
                arities.insert(def.name.clone(), def.arity());
                program.definitions.push(def);
            }
            Some("def::total") => {
                pending_totality.push((form.pos, parse_total(form.pos, items, &program)?));
            }
            _ => return Err(malformed(form.pos, "form", "expected (def::ung ...) or (def::total ...)")),
        }
    }
    for (pos, spec) in pending_totality {
        if program.get(&spec.fname).is_none() {
            return Err(ParseError::UndefinedTotalityTarget { pos, name: spec.fname });
        }
        program.totality_specs.push(spec);
    }
    Ok(program)
}

/// Parses a single `def::ung` form in isolation.
pub fn parse_definition(text: &str) -> Result<FunctionDef, ParseError> {
    let form = read_one(text)?;
    let items = form.as_list().ok_or_else(|| malformed(form.pos, "form", "expected a list"))?;
    if items.first().and_then(Sexp::as_symbol) != Some("def::ung") {
        return Err(malformed(form.pos, "form", "expected (def::ung ...)"));
    }
    parse_ung(form.pos, items, &HashMap::new())
}

/// Parses an expression over `params`; calls may target any function in
/// `functions` (name to arity).
pub fn parse_expr(text: &str, params: &[String], functions: &HashMap<String, usize>) -> Result<Expr, ParseError> {
    let form = read_one(text)?;
    let scope = Scope { params, self_fn: None, functions };
    scope.expr(&form)
}

fn malformed(pos: Pos, what: &'static str, detail: impl Into<String>) -> ParseError {
    ParseError::Malformed { pos, what, detail: detail.into() }
}

fn is_reserved(name: &str) -> bool {
    RESERVED.contains(&name) || Prim::from_name(name).is_some() || name.starts_with(':')
}

fn symbol_name(s: &Sexp, what: &'static str) -> Result<String, ParseError> {
    s.as_symbol().map(str::to_string).ok_or_else(|| malformed(s.pos, what, "expected a symbol"))
}

fn definable_name(s: &Sexp, what: &'static str) -> Result<String, ParseError> {
    let name = symbol_name(s, what)?;
    if is_reserved(&name) {
        return Err(ParseError::Reserved { pos: s.pos, name });
    }
    Ok(name)
}

fn parse_params(s: &Sexp) -> Result<Vec<String>, ParseError> {
    let items = s.as_list().ok_or_else(|| malformed(s.pos, "parameter list", "expected a list"))?;
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(items.len());
    for p in items {
        let name = definable_name(p, "parameter")?;
        if !seen.insert(name.clone()) {
            return Err(ParseError::DuplicateParameter { pos: p.pos, name });
        }
        out.push(name);
    }
    Ok(out)
}

/// Splits `NAME (PARAMS) DECLARE* BODY` and flattens the xargs key/value pairs.
#[allow(clippy::type_complexity)]
fn split_form<'a>(
    pos: Pos,
    items: &'a [Sexp],
    what: &'static str,
) -> Result<(String, Vec<String>, Vec<(&'a Sexp, &'a Sexp)>, &'a Sexp), ParseError> {
    if items.len() < 4 {
        return Err(malformed(pos, what, "expected NAME (PARAM*) [declarations] BODY"));
    }
    let name = definable_name(&items[1], "function name")?;
    let params = parse_params(&items[2])?;
    let body = &items[items.len() - 1];
    let mut xargs = Vec::new();
    for decl in &items[3..items.len() - 1] {
        let parts = decl
            .as_list()
            .filter(|l| l.first().and_then(Sexp::as_symbol) == Some("declare"))
            .ok_or_else(|| malformed(decl.pos, "declaration", "expected (declare (xargs ...))"))?;
        for clause in &parts[1..] {
            let kv = clause
                .as_list()
                .filter(|l| l.first().and_then(Sexp::as_symbol) == Some("xargs"))
                .ok_or_else(|| malformed(clause.pos, "declaration", "expected (xargs ...)"))?;
            let kv = &kv[1..];
            if kv.len() % 2 != 0 {
                return Err(malformed(clause.pos, "xargs", "keywords and values must pair up"));
            }
            for pair in kv.chunks(2) {
                xargs.push((&pair[0], &pair[1]));
            }
        }
    }
    Ok((name, params, xargs, body))
}

fn parse_flag(v: &Sexp) -> Result<bool, ParseError> {
    match v.as_symbol() {
        Some("t") => Ok(true),
        Some("nil") => Ok(false),
        _ => Err(malformed(v.pos, "flag", "expected t or nil")),
    }
}

fn parse_predicate_name(s: &Sexp) -> Result<Prim, ParseError> {
    let name = symbol_name(s, "signature")?;
    Prim::from_name(&name)
        .filter(|p| p.is_type_predicate())
        .ok_or_else(|| malformed(s.pos, "signature", format!("`{name}` is not a type predicate")))
}

fn parse_signature(v: &Sexp, arity: usize) -> Result<Signature, ParseError> {
    let parts =
        v.as_list().filter(|l| l.len() == 2).ok_or_else(|| malformed(v.pos, "signature", "expected ((PRED*) PRED)"))?;
    let params = parts[0].as_list().ok_or_else(|| malformed(parts[0].pos, "signature", "expected a predicate list"))?;
    if params.len() != arity {
        return Err(malformed(
            parts[0].pos,
            "signature",
            format!("{} predicates for {arity} parameters", params.len()),
        ));
    }
    Ok(Signature {
        params: params.iter().map(parse_predicate_name).collect::<Result<_, _>>()?,
        result: parse_predicate_name(&parts[1])?,
    })
}

fn parse_ung(pos: Pos, items: &[Sexp], earlier: &HashMap<String, usize>) -> Result<FunctionDef, ParseError> {
    let (name, params, xargs, body) = split_form(pos, items, "def::ung")?;
    let mut def = FunctionDef::new(name, params, Expr::NilLit);
    let scope = Scope { params: &def.params, self_fn: Some((&def.name, def.arity())), functions: earlier };
    def.body = scope.expr(body)?;

    let outer = Scope { params: &def.params, self_fn: None, functions: earlier };
    let mut default_value = None;
    let mut indexed_execution = true;
    let mut non_executable = false;
    let mut wrapper_name = None;
    let mut signature = None;
    for (k, v) in xargs {
        let key = k.as_symbol().unwrap_or("");
        match key {
            ":default-value" => default_value = Some(outer.expr(v)?),
            ":indexed-execution" => indexed_execution = parse_flag(v)?,
            ":non-executable" => non_executable = parse_flag(v)?,
            ":wrapper-macro" => wrapper_name = Some(definable_name(v, "wrapper name")?),
            ":signature" => signature = Some(parse_signature(v, def.arity())?),
            k if IGNORED_KEYS.contains(&k) => {}
            _ => return Err(ParseError::UnknownKeyword { pos: k.pos, key: k.to_string() }),
        }
    }
    def.default_value = default_value;
    def.indexed_execution = indexed_execution;
    def.non_executable = non_executable;
    def.wrapper_name = wrapper_name;
    def.signature = signature;
    Ok(def)
}

fn parse_relation(v: &Sexp) -> Result<Relation, ParseError> {
    match v.as_symbol() {
        Some("l<") => Ok(Relation::LexicographicLess),
        Some("<") | Some("o<") => Ok(Relation::NaturalLess),
        _ => Err(malformed(v.pos, "well-founded relation", "expected l< or <")),
    }
}

fn parse_total(pos: Pos, items: &[Sexp], program: &Program) -> Result<TotalitySpec, ParseError> {
    let (fname, params, xargs, predicate) = split_form(pos, items, "def::total")?;
    let functions: HashMap<String, usize> = program.definitions.iter().map(|d| (d.name.clone(), d.arity())).collect();
    if let Some(def) = program.get(&fname) {
        if def.params != params {
            return Err(malformed(
                items[2].pos,
                "def::total",
                format!("parameters must match the definition of `{fname}`"),
            ));
        }
    }
    let scope = Scope { params: &params, self_fn: None, functions: &functions };
    let mut measure = None;
    let mut relation = None;
    let mut theorem_name = None;
    for (k, v) in xargs {
        match k.as_symbol().unwrap_or("") {
            ":measure" => {
                let comps = match v.as_list() {
                    Some([head, rest @ ..]) if head.as_symbol() == Some("llist") => {
                        if rest.is_empty() {
                            return Err(malformed(v.pos, "measure", "empty llist"));
                        }
                        rest.iter().map(|c| scope.expr(c)).collect::<Result<Vec<_>, _>>()?
                    }
                    _ => vec![scope.expr(v)?],
                };
                measure = Some((v.pos, comps));
            }
            ":well-founded-relation" => relation = Some(parse_relation(v)?),
            ":totality-theorem" => theorem_name = Some(symbol_name(v, "theorem name")?),
            k if IGNORED_KEYS.contains(&k) => {}
            k => return Err(ParseError::UnknownKeyword { pos: items[0].pos, key: k.to_string() }),
        }
    }
    let (mpos, measure) = measure.ok_or_else(|| malformed(pos, "def::total", "missing :measure"))?;
    let relation =
        relation.unwrap_or(if measure.len() > 1 { Relation::LexicographicLess } else { Relation::NaturalLess });
    if relation == Relation::NaturalLess && measure.len() != 1 {
        return Err(malformed(mpos, "measure", "relation < needs a single-component measure"));
    }
    Ok(TotalitySpec {
        theorem_name: theorem_name.unwrap_or_else(|| format!("{fname}-total")),
        predicate: scope.expr(predicate)?,
        fname,
        params,
        measure,
        relation,
    })
}

struct Scope<'a> {
    params: &'a [String],
    self_fn: Option<(&'a str, usize)>,
    functions: &'a HashMap<String, usize>,
}

impl Scope<'_> {
    fn expr(&self, s: &Sexp) -> Result<Expr, ParseError> {
        match &s.kind {
            SexpKind::Int(n) => Ok(Expr::IntLit(n.clone())),
            SexpKind::Symbol(name) => match name.as_str() {
                "t" => Ok(Expr::BoolLit(true)),
                "nil" => Ok(Expr::NilLit),
                _ if self.params.iter().any(|p| p == name) => Ok(Expr::Var(name.clone())),
                _ => Err(ParseError::UnboundVariable { pos: s.pos, name: name.clone() }),
            },
            SexpKind::List(items) => self.compound(s.pos, items),
        }
    }

    fn args(&self, items: &[Sexp]) -> Result<Vec<Expr>, ParseError> {
        items.iter().map(|a| self.expr(a)).collect()
    }

    fn compound(&self, pos: Pos, items: &[Sexp]) -> Result<Expr, ParseError> {
        let Some((head, rest)) = items.split_first() else {
            return Ok(Expr::NilLit);
        };
        let name = head.as_symbol().ok_or_else(|| malformed(head.pos, "application", "head must be a symbol"))?;
        let arity_err = |expected: String| ParseError::Arity { pos, name: name.to_string(), expected, got: rest.len() };
        match name {
            "quote" => {
                let [q] = rest else { return Err(arity_err("1".into())) };
                match &q.kind {
                    SexpKind::Int(n) => Ok(Expr::IntLit(n.clone())),
                    SexpKind::Symbol(sym) if sym == "nil" => Ok(Expr::NilLit),
                    SexpKind::Symbol(sym) if sym == "t" => Ok(Expr::BoolLit(true)),
                    SexpKind::Symbol(sym) => Ok(Expr::SymLit(sym.clone())),
                    SexpKind::List(l) if l.is_empty() => Ok(Expr::NilLit),
                    SexpKind::List(_) => Err(malformed(q.pos, "quote", "quoted lists are not supported")),
                }
            }
            "if" => {
                let [c, t, e] = rest else { return Err(arity_err("3".into())) };
                Ok(Expr::if_(self.expr(c)?, self.expr(t)?, self.expr(e)?))
            }
            "and" => Ok(Expr::And(self.args(rest)?)),
            "or" => Ok(Expr::Or(self.args(rest)?)),
            _ => {
                if let Some((self_name, arity)) = self.self_fn {
                    if name == self_name {
                        if rest.len() != arity {
                            return Err(arity_err(arity.to_string()));
                        }
                        return Ok(Expr::Call(name.to_string(), self.args(rest)?));
                    }
                }
                if let Some(&arity) = self.functions.get(name) {
                    if rest.len() != arity {
                        return Err(arity_err(arity.to_string()));
                    }
                    return Ok(Expr::Call(name.to_string(), self.args(rest)?));
                }
                if let Some(op) = Prim::from_name(name) {
                    if !op.accepts(rest.len()) {
                        return Err(arity_err(op.arity_description()));
                    }
                    return Ok(Expr::Prim(op, self.args(rest)?));
                }
                Err(ParseError::UnknownFunction { pos: head.pos, name: name.to_string() })
            }
        }
    }
}
