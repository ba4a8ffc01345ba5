//! Evaluation of expressions and of the generated definitions.
//!
//! An [`Engine`] is a transformed program compiled to bytecode. It is
//! immutable; every evaluation owns its stacks and its [`EvalStats`].
//! The logical-level functions `LF`, `LF-dom` and `F-measure` are not
//! definitions but natives built on a bounded witness search.

mod compile;
mod machine;
pub mod prim;

use std::collections::HashMap;
use std::sync::Mutex;

use compile::{compile, Code, Resolve, Target};
use machine::{Machine, ENTRY};

use crate::error::{Error, EvalError};
use crate::exec::ExecConfig;
use crate::surface::{Expr, FunctionDef, Program};
use crate::transform::{transform_program, TransformResult};
use crate::value::Value;

/// Outcome of the bounded search for a domain witness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DomainVerdict {
    /// The least index at which the indexed domain holds.
    InDomain(u64),
    /// No index up to and including the cap works.
    NotInDomainUpTo(u64),
}

impl DomainVerdict {
    pub fn is_in_domain(self) -> bool {
        matches!(self, DomainVerdict::InDomain(_))
    }

    pub fn witness(self) -> Option<u64> {
        match self {
            DomainVerdict::InDomain(w) => Some(w),
            DomainVerdict::NotInDomainUpTo(_) => None,
        }
    }
}

impl std::fmt::Display for DomainVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DomainVerdict::InDomain(w) => write!(f, "in-domain (witness {w})"),
            DomainVerdict::NotInDomainUpTo(c) => write!(f, "no witness up to {c}"),
        }
    }
}

/// Cost counters for one evaluation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EvalStats {
    /// Function invocations, including the entry call and natives.
    pub call_count: u64,
    pub prim_count: u64,
    pub max_recursion_depth: u64,
    /// Bounded domain searches started by `LF-dom`.
    pub domain_checks: u64,
}

/// How a call to a source function name is resolved.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scope {
    /// Source names denote their logical-level function `LF`.
    Logical,
    /// Source names denote their exported executable.
    Exec,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Native {
    LogicalFn(usize),
    LogicalDom(usize),
    Measure(usize),
    /// Export of a function without indexed execution.
    Exported(usize),
    Wrapper(usize),
}

/// Compiled code ids for one function.
#[derive(Clone, Debug)]
pub(crate) struct FnCodes {
    pub indexed_fn: u32,
    pub indexed_dom: u32,
    pub default: u32,
    pub fast: Option<u32>,
    pub exec_domain: Option<u32>,
    pub comp: Option<u32>,
    pub exported: Option<u32>,
}

/// Results of the logical-level searches, keyed by function, cap and
/// arguments. Off by default: it makes step counts depend on history.
#[derive(Default)]
pub(crate) struct Memo {
    witness: Mutex<HashMap<MemoKey, DomainVerdict>>,
    measure: Mutex<HashMap<MemoKey, u64>>,
}

/// Function, cap, arguments.
type MemoKey = (usize, u64, Vec<Value>);

impl Memo {
    pub fn witness(&self, t: usize, cap: u64, args: &[Value]) -> Option<DomainVerdict> {
        self.witness.lock().unwrap().get(&(t, cap, args.to_vec())).copied()
    }

    pub fn put_witness(&self, t: usize, cap: u64, args: &[Value], v: DomainVerdict) {
        self.witness.lock().unwrap().insert((t, cap, args.to_vec()), v);
    }

    pub fn measure(&self, t: usize, cap: u64, args: &[Value]) -> Option<u64> {
        self.measure.lock().unwrap().get(&(t, cap, args.to_vec())).copied()
    }

    pub fn put_measure(&self, t: usize, cap: u64, args: &[Value], m: u64) {
        self.measure.lock().unwrap().insert((t, cap, args.to_vec()), m);
    }
}

pub struct Engine {
    program: Program,
    transforms: Vec<TransformResult>,
    by_name: HashMap<String, usize>,
    codes: Vec<Code>,
    natives: Vec<Native>,
    fns: Vec<FnCodes>,
    /// Generated names, wrappers and logical-level names.
    names: HashMap<String, (Target, usize)>,
    /// Source names in each scope.
    logical: HashMap<String, (Target, usize)>,
    exec: HashMap<String, (Target, usize)>,
    memo: Option<Memo>,
}

struct ScopedNames<'a> {
    names: &'a HashMap<String, (Target, usize)>,
    scoped: &'a HashMap<String, (Target, usize)>,
}

impl Resolve for ScopedNames<'_> {
    fn resolve(&self, name: &str) -> Option<(Target, usize)> {
        self.scoped.get(name).or_else(|| self.names.get(name)).copied()
    }
}

impl Engine {
    /// Transforms and compiles `program`.
    pub fn new(program: Program) -> Result<Engine, Error> {
        let transforms = transform_program(&program)?;
        Ok(Engine::from_transforms(program, transforms)?)
    }

    /// Compiles already transformed (possibly altered) definitions.
    pub fn from_transforms(program: Program, transforms: Vec<TransformResult>) -> Result<Engine, EvalError> {
        let mut names = HashMap::new();
        let mut logical = HashMap::new();
        let mut exec = HashMap::new();
        let mut natives = Vec::new();
        let native = |n: Native, natives: &mut Vec<Native>| {
            natives.push(n);
            Target::Native((natives.len() - 1) as u32)
        };

        // Every definition to compile: (name, params, body, scope).
        let mut pending: Vec<(String, Vec<String>, Expr, Scope)> = Vec::new();
        let mut fns = Vec::new();
        let add = |pending: &mut Vec<(String, Vec<String>, Expr, Scope)>,
                   names: &mut HashMap<String, (Target, usize)>,
                   name: &str,
                   params: &[String],
                   body: &Expr,
                   scope: Scope,
                   visible: bool| {
            let id = pending.len() as u32;
            pending.push((name.to_string(), params.to_vec(), body.clone(), scope));
            if visible {
                names.insert(name.to_string(), (Target::Code(id), params.len()));
            }
            id
        };

        for (t, tr) in transforms.iter().enumerate() {
            let arity = tr.source.params.len();
            let n = &tr.names;
            let indexed_fn = add(
                &mut pending,
                &mut names,
                &n.indexed_fn,
                &tr.indexed_fn.params,
                &tr.indexed_fn.body,
                Scope::Logical,
                true,
            );
            let indexed_dom = add(
                &mut pending,
                &mut names,
                &n.indexed_dom,
                &tr.indexed_dom.params,
                &tr.indexed_dom.body,
                Scope::Logical,
                true,
            );
            let default = add(
                &mut pending,
                &mut names,
                &format!("{}-default", tr.source.name),
                &tr.source.params,
                &tr.default_expr,
                Scope::Exec,
                false,
            );
            let mut codes =
                FnCodes { indexed_fn, indexed_dom, default, fast: None, exec_domain: None, comp: None, exported: None };
            if let Some(x) = &tr.executable {
                codes.fast =
                    Some(add(&mut pending, &mut names, &x.fast.name, &x.fast.params, &x.fast.body, Scope::Exec, true));
                codes.exec_domain = Some(add(
                    &mut pending,
                    &mut names,
                    &x.exec_domain.name,
                    &x.exec_domain.params,
                    &x.exec_domain.body,
                    Scope::Exec,
                    true,
                ));
                if let Some(c) = &x.comp {
                    codes.comp = Some(add(&mut pending, &mut names, &c.name, &c.params, &c.body, Scope::Exec, true));
                }
                if let Some(e) = &x.exported {
                    codes.exported =
                        Some(add(&mut pending, &mut names, &e.name, &e.params, &e.body, Scope::Exec, false));
                }
                if let Some(w) = &x.wrapper {
                    names.insert(w.name.clone(), (native(Native::Wrapper(t), &mut natives), arity));
                }
            }
            names.insert(n.logical_fn.clone(), (native(Native::LogicalFn(t), &mut natives), arity));
            names.insert(n.logical_dom.clone(), (native(Native::LogicalDom(t), &mut natives), arity));
            names.insert(n.measure.clone(), (native(Native::Measure(t), &mut natives), arity));
            logical.insert(tr.source.name.clone(), names[&n.logical_fn]);
            let export = match codes.exported {
                Some(id) => Target::Code(id),
                None => native(Native::Exported(t), &mut natives),
            };
            exec.insert(tr.source.name.clone(), (export, arity));
            fns.push(codes);
        }

        let codes = pending
            .iter()
            .map(|(name, params, body, scope)| {
                let scoped =
                    ScopedNames { names: &names, scoped: if *scope == Scope::Logical { &logical } else { &exec } };
                compile(name, params, body, &scoped)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let by_name = transforms.iter().enumerate().map(|(i, t)| (t.source.name.clone(), i)).collect();
        Ok(Engine { program, transforms, by_name, codes, natives, fns, names, logical, exec, memo: None })
    }

    /// Remembers witness and measure results across evaluations. Values are
    /// unaffected; step counts of later evaluations shrink.
    pub fn with_witness_memo(mut self) -> Engine {
        self.memo = Some(Memo::default());
        self
    }

    pub fn program(&self) -> &Program {
        &self.program
    }

    pub fn transforms(&self) -> &[TransformResult] {
        &self.transforms
    }

    pub fn transform(&self, fname: &str) -> Option<&TransformResult> {
        self.by_name.get(fname).map(|&i| &self.transforms[i])
    }

    pub fn function(&self, fname: &str) -> Option<&FunctionDef> {
        self.transform(fname).map(|t| &t.source)
    }

    pub(crate) fn native_arity(&self, n: Native) -> usize {
        let t = match n {
            Native::LogicalFn(t)
            | Native::LogicalDom(t)
            | Native::Measure(t)
            | Native::Exported(t)
            | Native::Wrapper(t) => t,
        };
        self.transforms[t].source.params.len()
    }

    /// Index of `fname` after checking the argument count.
    pub(crate) fn lookup(&self, fname: &str, argc: usize) -> Result<usize, EvalError> {
        let t = *self.by_name.get(fname).ok_or_else(|| EvalError::UnknownFunction(fname.to_string()))?;
        let expected = self.transforms[t].source.params.len();
        if expected != argc {
            return Err(EvalError::Arity { name: fname.to_string(), expected, got: argc });
        }
        Ok(t)
    }

    pub(crate) fn machine(&self, cfg: &ExecConfig) -> Machine<'_> {
        Machine::new(self, None, cfg)
    }

    /// Evaluates `expr` with `env` binding its free variables.
    pub fn eval_expr(
        &self,
        env: &[(String, Value)],
        expr: &Expr,
        scope: Scope,
        cfg: &ExecConfig,
    ) -> Result<(Value, EvalStats), EvalError> {
        let params: Vec<String> = env.iter().map(|(n, _)| n.clone()).collect();
        let args: Vec<Value> = env.iter().map(|(_, v)| v.clone()).collect();
        let scoped = ScopedNames {
            names: &self.names,
            scoped: if scope == Scope::Logical { &self.logical } else { &self.exec },
        };
        let code = compile("<expr>", &params, expr, &scoped)?;
        let mut m = Machine::new(self, Some(&code), cfg);
        let v = m.run(ENTRY, &args)?;
        Ok((v, m.stats))
    }

    /// `iF(d, args)`.
    pub fn eval_indexed_fn(&self, fname: &str, d: u64, args: &[Value]) -> Result<Value, EvalError> {
        let t = self.lookup(fname, args.len())?;
        self.machine(&ExecConfig::unbounded(0)).indexed_fn(t, d, args)
    }

    /// `iF-dom(d, args)`.
    pub fn eval_indexed_dom(&self, fname: &str, d: u64, args: &[Value]) -> Result<bool, EvalError> {
        let t = self.lookup(fname, args.len())?;
        self.machine(&ExecConfig::unbounded(0)).indexed_dom(t, d, args)
    }

    /// Least index `w <= cap` at which the indexed domain holds.
    pub fn find_witness_depth(&self, fname: &str, args: &[Value], cap: u64) -> Result<DomainVerdict, EvalError> {
        let t = self.lookup(fname, args.len())?;
        self.machine(&ExecConfig::unbounded(cap)).witness(t, args, cap)
    }

    /// [`Engine::find_witness_depth`] by plain ascending search, without the memo.
    pub fn find_witness_depth_linear(&self, fname: &str, args: &[Value], cap: u64) -> Result<DomainVerdict, EvalError> {
        let t = self.lookup(fname, args.len())?;
        self.machine(&ExecConfig::unbounded(cap)).witness_linear(t, args, cap)
    }

    /// The least-index recursion: 0 unless `iF-dom(d, args)`, otherwise the
    /// least `w <= d` with `iF-dom(w, args)`.
    pub fn min_index(&self, fname: &str, d: u64, args: &[Value]) -> Result<u64, EvalError> {
        let t = self.lookup(fname, args.len())?;
        self.machine(&ExecConfig::unbounded(0)).min_index(t, d, args)
    }

    /// The least index, or `None` when the search up to `cap` finds none.
    pub fn measure(&self, fname: &str, args: &[Value], cap: u64) -> Result<Option<u64>, EvalError> {
        let t = self.lookup(fname, args.len())?;
        let mut m = self.machine(&ExecConfig::unbounded(cap));
        match m.witness(t, args, cap)? {
            DomainVerdict::InDomain(_) => Ok(Some(m.measure(t, args)?)),
            DomainVerdict::NotInDomainUpTo(_) => Ok(None),
        }
    }

    /// `LF(args)`: `iF` at the measure, or at 0 without a witness.
    pub fn l_eval(&self, fname: &str, args: &[Value], cap: u64) -> Result<Value, EvalError> {
        let t = self.lookup(fname, args.len())?;
        self.machine(&ExecConfig::unbounded(cap)).logical_fn(t, args)
    }

    /// `LF-dom(args)` as a verdict.
    pub fn l_dom(&self, fname: &str, args: &[Value], cap: u64) -> Result<DomainVerdict, EvalError> {
        self.find_witness_depth(fname, args, cap)
    }
}

#[cfg(test)]
mod tests;
