//! Generated definitions: the indexed function and domain, the executable
//! family, and the lifting schemes they share.

use super::analysis::spine;
use crate::surface::{Definition, Expr, FunctionDef, Prim};

/// Names of everything generated for one source function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratedNames {
    pub source: String,
    pub indexed_fn: String,
    pub indexed_dom: String,
    pub fast: String,
    pub exec_domain: String,
    pub comp: String,
    /// The exported entry point. Same spelling as the source function.
    pub exported: String,
    pub logical_fn: String,
    pub logical_dom: String,
    pub measure: String,
    pub wrapper: Option<String>,
}

impl GeneratedNames {
    pub fn for_function(def: &FunctionDef) -> Self {
        let f = &def.name;
        GeneratedNames {
            source: f.clone(),
            indexed_fn: format!("i{f}"),
            indexed_dom: format!("i{f}-dom"),
            fast: format!("m{f}"),
            exec_domain: format!("{f}-domain"),
            comp: format!("comp-{f}"),
            exported: f.clone(),
            logical_fn: format!("L{f}"),
            logical_dom: format!("L{f}-dom"),
            measure: format!("{f}-measure"),
            wrapper: def.wrapper_name.clone(),
        }
    }

    /// Every introduced name except the exported one.
    pub fn introduced(&self) -> Vec<&str> {
        let mut v = vec![
            self.indexed_fn.as_str(),
            self.indexed_dom.as_str(),
            self.fast.as_str(),
            self.exec_domain.as_str(),
            self.comp.as_str(),
            self.logical_fn.as_str(),
            self.logical_dom.as_str(),
            self.measure.as_str(),
        ];
        v.extend(self.wrapper.as_deref());
        v
    }
}

/// The name of the nullary function that yields the fuel bound.
pub const BIG: &str = "BIG";

/// `d`, or a fresh variant when a parameter already uses that name.
pub fn index_var(params: &[String]) -> String {
    let mut name = "d".to_string();
    let mut k = 0;
    while params.contains(&name) {
        k += 1;
        name = format!("d{k}");
    }
    name
}

fn dec(v: &str) -> Expr {
    Expr::prim(Prim::Dec, vec![Expr::var(v)])
}

fn with_index(name: &str, index: Expr, args: Vec<Expr>) -> Expr {
    let mut all = Vec::with_capacity(args.len() + 1);
    all.push(index);
    all.extend(args);
    Expr::call(name, all)
}

fn conj(mut parts: Vec<Expr>) -> Expr {
    parts.retain(|p| !p.is_true_lit());
    match parts.len() {
        0 => Expr::t(),
        1 => parts.pop().unwrap(),
        _ => Expr::And(parts),
    }
}

fn max_of(mut parts: Vec<Expr>) -> Expr {
    match parts.len() {
        0 => Expr::int(0),
        1 => parts.pop().unwrap(),
        _ => {
            let first = parts.remove(0);
            Expr::prim(Prim::Max, vec![first, max_of(parts)])
        }
    }
}

fn is_zero_lit(e: &Expr) -> bool {
    matches!(e, Expr::IntLit(n) if *n == 0.into())
}

/// How recursive calls of one source function are re-targeted.
///
/// `value` replaces a call whose result is needed as a value, `domain`
/// produces the domain obligation of a call and `measure` its measure.
pub(crate) struct Lifting<'a> {
    pub fname: &'a str,
    pub value: &'a dyn Fn(Vec<Expr>) -> Expr,
    pub domain: &'a dyn Fn(Vec<Expr>) -> Expr,
    pub measure: &'a dyn Fn(Vec<Expr>) -> Expr,
}

impl Lifting<'_> {
    pub fn values(&self, e: &Expr) -> Expr {
        e.rewrite_calls(self.fname, &mut |args| (self.value)(args))
    }

    /// Domain obligations of the recursive calls evaluated by `e`, innermost
    /// first and left to right. Calls under a test are guarded by it.
    fn obligations(&self, e: &Expr) -> Vec<Expr> {
        match e {
            Expr::IntLit(_) | Expr::BoolLit(_) | Expr::SymLit(_) | Expr::NilLit | Expr::Var(_) => Vec::new(),
            Expr::Prim(_, args) => args.iter().flat_map(|a| self.obligations(a)).collect(),
            Expr::Call(name, args) => {
                let mut out: Vec<Expr> = args.iter().flat_map(|a| self.obligations(a)).collect();
                if name == self.fname {
                    out.push((self.domain)(args.iter().map(|a| self.values(a)).collect()));
                }
                out
            }
            Expr::If(c, t, f) => {
                let mut out = self.obligations(c);
                let (t, f) = (conj(self.obligations(t)), conj(self.obligations(f)));
                if !(t.is_true_lit() && f.is_true_lit()) {
                    out.push(Expr::if_(self.values(c), t, f));
                }
                out
            }
            Expr::And(args) => self.chain(args, true),
            Expr::Or(args) => self.chain(args, false),
        }
    }

    fn chain(&self, args: &[Expr], is_and: bool) -> Vec<Expr> {
        let Some((first, rest)) = args.split_first() else { return Vec::new() };
        let mut out = self.obligations(first);
        if rest.is_empty() {
            return out;
        }
        let later = conj(self.chain(rest, is_and));
        if !later.is_true_lit() {
            let test = self.values(first);
            out.push(if is_and { Expr::if_(test, later, Expr::t()) } else { Expr::if_(test, Expr::t(), later) });
        }
        out
    }

    /// Measures of the recursive calls evaluated by `e`.
    fn measures(&self, e: &Expr) -> Vec<Expr> {
        match e {
            Expr::IntLit(_) | Expr::BoolLit(_) | Expr::SymLit(_) | Expr::NilLit | Expr::Var(_) => Vec::new(),
            Expr::Prim(_, args) => args.iter().flat_map(|a| self.measures(a)).collect(),
            Expr::Call(name, args) => {
                let mut out: Vec<Expr> = args.iter().flat_map(|a| self.measures(a)).collect();
                if name == self.fname {
                    out.push((self.measure)(args.iter().map(|a| self.values(a)).collect()));
                }
                out
            }
            Expr::If(c, t, f) => {
                let mut out = self.measures(c);
                let (t, f) = (max_of(self.measures(t)), max_of(self.measures(f)));
                if !(is_zero_lit(&t) && is_zero_lit(&f)) {
                    out.push(Expr::if_(self.values(c), t, f));
                }
                out
            }
            Expr::And(args) | Expr::Or(args) => {
                let is_and = matches!(e, Expr::And(_));
                let Some((first, rest)) = args.split_first() else { return Vec::new() };
                let mut out = self.measures(first);
                if !rest.is_empty() {
                    let tail = if is_and { Expr::And(rest.to_vec()) } else { Expr::Or(rest.to_vec()) };
                    let later = max_of(self.measures(&tail));
                    if !is_zero_lit(&later) {
                        let test = self.values(first);
                        out.push(if is_and {
                            Expr::if_(test, later, Expr::int(0))
                        } else {
                            Expr::if_(test, Expr::int(0), later)
                        });
                    }
                }
                out
            }
        }
    }

    /// The domain predicate body: decision spine kept, each leaf replaced by
    /// the conjunction of its call obligations.
    pub fn domain_body(&self, body: &Expr) -> Expr {
        spine(body).map(&mut |leaf| conj(self.obligations(leaf)))
    }

    /// The measure body: zero at base leaves, one more than the largest call
    /// measure at recursive leaves.
    pub fn measure_body(&self, body: &Expr) -> Expr {
        spine(body).map(&mut |leaf| {
            if leaf.contains_call_to(self.fname) {
                Expr::prim(Prim::Inc, vec![max_of(self.measures(leaf))])
            } else {
                Expr::int(0)
            }
        })
    }
}

/// The value returned once the index is exhausted: base leaves keep their
/// value, recursive leaves yield the default.
pub fn exhaustion_value(def: &FunctionDef, default: &Expr) -> Expr {
    spine(&def.body).fold(&mut |leaf| {
        if leaf.contains_call_to(&def.name) {
            default.clone()
        } else {
            leaf.clone()
        }
    })
}

fn indexed_params(index: &str, params: &[String]) -> Vec<String> {
    let mut p = vec![index.to_string()];
    p.extend(params.iter().cloned());
    p
}

fn param_vars(params: &[String]) -> Vec<Expr> {
    params.iter().map(|p| Expr::var(p.as_str())).collect()
}

/// `iF(d, params) = (if (zp d) Z body')` with every recursive call moved to
/// `iF` at index `d-1`.
pub fn build_indexed_fn(def: &FunctionDef, names: &GeneratedNames, exhausted: &Expr) -> Definition {
    let d = index_var(&def.params);
    let body = def.body.rewrite_calls(&def.name, &mut |args| with_index(&names.indexed_fn, dec(&d), args));
    Definition {
        name: names.indexed_fn.clone(),
        params: indexed_params(&d, &def.params),
        body: Expr::if_(Expr::prim(Prim::Zp, vec![Expr::var(d.as_str())]), exhausted.clone(), body),
    }
}

/// `iDom(d, params) = (if (zp d) BASE D[body])` with nested calls lifted out
/// as arguments through `iF` at `d-1`.
pub fn build_indexed_dom(def: &FunctionDef, names: &GeneratedNames, base_predicate: &Expr) -> Definition {
    let d = index_var(&def.params);
    let value = |args| with_index(&names.indexed_fn, dec(&d), args);
    let domain = |args| with_index(&names.indexed_dom, dec(&d), args);
    let lifting = Lifting { fname: &def.name, value: &value, domain: &domain, measure: &domain };
    Definition {
        name: names.indexed_dom.clone(),
        params: indexed_params(&d, &def.params),
        body: Expr::if_(
            Expr::prim(Prim::Zp, vec![Expr::var(d.as_str())]),
            base_predicate.clone(),
            lifting.domain_body(&def.body),
        ),
    }
}

/// Executable definitions for a function that is not `:non-executable`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExecDefinitions {
    /// The source equations run directly, no index, no domain checks.
    pub fast: Definition,
    /// Index-free domain predicate; nested values come from `fast`.
    pub exec_domain: Definition,
    /// Indexed executable that checks the domain only when the index runs out.
    pub comp: Option<Definition>,
    /// `(F args) = (comp-F (BIG) args)`; absent without indexed execution.
    pub exported: Option<Definition>,
    /// Domain-checking entry point that falls back to the default.
    pub wrapper: Option<Definition>,
}

pub fn build_exec_definitions(def: &FunctionDef, names: &GeneratedNames, default: &Expr) -> Option<ExecDefinitions> {
    if def.non_executable {
        return None;
    }
    let params = param_vars(&def.params);
    let fast_call = |args: Vec<Expr>| Expr::call(names.fast.as_str(), args);
    let fast = Definition {
        name: names.fast.clone(),
        params: def.params.clone(),
        body: def.body.rewrite_calls(&def.name, &mut |args| fast_call(args)),
    };
    let dom_call = |args: Vec<Expr>| Expr::call(names.exec_domain.as_str(), args);
    let lifting = Lifting { fname: &def.name, value: &fast_call, domain: &dom_call, measure: &dom_call };
    let exec_domain = Definition {
        name: names.exec_domain.clone(),
        params: def.params.clone(),
        body: lifting.domain_body(&def.body),
    };
    let (comp, exported) = if def.indexed_execution {
        let d = index_var(&def.params);
        let comp_body = def.body.rewrite_calls(&def.name, &mut |args| with_index(&names.comp, dec(&d), args));
        let comp = Definition {
            name: names.comp.clone(),
            params: indexed_params(&d, &def.params),
            body: Expr::if_(
                Expr::prim(Prim::Zp, vec![Expr::var(d.as_str())]),
                Expr::if_(
                    Expr::call(names.logical_dom.as_str(), params.clone()),
                    fast_call(params.clone()),
                    default.clone(),
                ),
                comp_body,
            ),
        };
        let exported = Definition {
            name: names.exported.clone(),
            params: def.params.clone(),
            body: with_index(&names.comp, Expr::call(BIG, vec![]), params.clone()),
        };
        (Some(comp), Some(exported))
    } else {
        (None, None)
    };
    let wrapper = names.wrapper.as_ref().map(|w| Definition {
        name: w.clone(),
        params: def.params.clone(),
        body: Expr::if_(dom_call(params.clone()), fast_call(params.clone()), default.clone()),
    });
    Some(ExecDefinitions { fast, exec_domain, comp, exported, wrapper })
}
