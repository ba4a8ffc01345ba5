//! Checks of the generated definitions by evaluation over finite grids.
//!
//! Every property is checked pointwise over a [`CheckPlan`]: the basic
//! properties of the indexed layer, the derived equations, measure decrease
//! along recursive calls and agreement of the executable variants with the
//! logical function. Failures are data: each carries the full assignment
//! and both sides.

mod plan;
mod report;
mod walk;

use std::collections::{BTreeSet, HashMap};

pub use plan::CheckPlan;
pub use report::{CheckOutcome, CheckReport, Failure, Status};
pub use walk::recursive_calls;

use crate::error::{Error, EvalError};
use crate::exec::{self, ExecConfig};
use crate::interp::{DomainVerdict, Engine, Scope};
use crate::transform::{Mutation, TransformResult};
use crate::value::Value;

pub const DETERMINISM: &str = "determinism";
pub const STABILITY: &str = "stability";
pub const CANONICAL_MEASURE: &str = "canonical-measure";
pub const MEASURE_ORACLES: &str = "measure-oracles";
pub const MEASURE_DECREASE: &str = "measure-decrease";
pub const EXEC_EQUIVALENCE: &str = "exec-equivalence";

fn show(r: &Result<Value, EvalError>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => format!("error: {e}"),
    }
}

fn show_bool(r: &Result<bool, EvalError>) -> String {
    show(&r.clone().map(Value::bool))
}

fn show_opt(m: &Result<Option<u64>, EvalError>) -> String {
    match m {
        Ok(Some(m)) => m.to_string(),
        Ok(None) => "no witness".to_string(),
        Err(e) => format!("error: {e}"),
    }
}

/// Check state for one function: the points, and memo tables of the
/// indexed layer at those points.
pub struct Verifier<'p> {
    engine: Engine,
    fname: String,
    plan: &'p CheckPlan,
    cfg: ExecConfig,
    points: Vec<Vec<Value>>,
    witnesses: Option<Vec<Option<u64>>>,
    dom: HashMap<(usize, u64), Result<bool, EvalError>>,
    val: HashMap<(usize, u64), Result<Value, EvalError>>,
}

impl<'p> Verifier<'p> {
    /// Works on a private copy of `engine` that remembers witness searches.
    pub fn new(engine: &Engine, fname: &str, plan: &'p CheckPlan) -> Result<Self, Error> {
        let t = engine.transform(fname).ok_or_else(|| EvalError::UnknownFunction(fname.to_string()))?;
        plan.validate(fname, t.source.params.len())?;
        let engine =
            Engine::from_transforms(engine.program().clone(), engine.transforms().to_vec())?.with_witness_memo();
        Ok(Verifier {
            engine,
            fname: fname.to_string(),
            plan,
            cfg: plan.exec_config(),
            points: plan.points(),
            witnesses: None,
            dom: HashMap::new(),
            val: HashMap::new(),
        })
    }

    pub fn points(&self) -> &[Vec<Value>] {
        &self.points
    }

    fn transform(&self) -> &TransformResult {
        self.engine.transform(&self.fname).expect("checked in new")
    }

    fn assignment(&self, i: usize, extra: &[(&str, u64)]) -> Vec<(String, Value)> {
        let params = &self.transform().source.params;
        let mut out: Vec<(String, Value)> = params.iter().cloned().zip(self.points[i].iter().cloned()).collect();
        out.extend(extra.iter().map(|(n, d)| (n.to_string(), Value::from(*d))));
        out
    }

    fn call(&self, name: &str, args: &[Value]) -> String {
        let a: Vec<String> = args.iter().map(Value::to_string).collect();
        format!("({name} {})", a.join(" "))
    }

    /// Least witness per point; `None` without one or when the search fails.
    pub fn witnesses(&mut self) -> &[Option<u64>] {
        if self.witnesses.is_none() {
            let w = (0..self.points.len())
                .map(|i| {
                    let v = self.engine.find_witness_depth(&self.fname, &self.points[i], self.plan.domain_cap);
                    let w = v.ok().and_then(DomainVerdict::witness);
                    if let Some(w) = w {
                        // The search evaluated this instance.
                        self.dom.insert((i, w), Ok(true));
                    }
                    w
                })
                .collect();
            self.witnesses = Some(w);
        }
        self.witnesses.as_deref().unwrap()
    }

    fn dom(&mut self, i: usize, d: u64) -> Result<bool, EvalError> {
        if let Some(r) = self.dom.get(&(i, d)) {
            return r.clone();
        }
        let r = self.engine.eval_indexed_dom(&self.fname, d, &self.points[i]);
        self.dom.insert((i, d), r.clone());
        r
    }

    fn val(&mut self, i: usize, d: u64) -> Result<Value, EvalError> {
        if let Some(r) = self.val.get(&(i, d)) {
            return r.clone();
        }
        let r = self.engine.eval_indexed_fn(&self.fname, d, &self.points[i]);
        self.val.insert((i, d), r.clone());
        r
    }

    fn measure(&self, args: &[Value]) -> Result<Option<u64>, EvalError> {
        self.engine.measure(&self.fname, args, self.plan.domain_cap)
    }

    /// The depth range, plus `w` and `w + 1` for a point with witness `w`.
    fn indices(&mut self, i: usize) -> Vec<u64> {
        let mut set: BTreeSet<u64> = self.plan.depth_range.clone().collect();
        if let Some(w) = self.witnesses()[i] {
            set.insert(w);
            set.insert(w + 1);
        }
        set.into_iter().collect()
    }

    /// Index pairs `d1 < d2` for every point, then the random instances.
    fn index_pairs(&mut self) -> Vec<(usize, u64, u64)> {
        let mut out = Vec::new();
        for i in 0..self.points.len() {
            let ds = self.indices(i);
            for (a, &d1) in ds.iter().enumerate() {
                out.extend(ds[a + 1..].iter().map(|&d2| (i, d1, d2)));
            }
        }
        for (i, d1, d2) in self.plan.index_samples(self.points.len()) {
            if d1 != d2 {
                out.push((i, d1.min(d2), d1.max(d2)));
            }
        }
        out
    }

    /// `iF-dom(d1) & iF-dom(d2) => iF(d1) = iF(d2)`.
    pub fn check_determinism(&mut self) -> CheckOutcome {
        let mut out = CheckOutcome::new(DETERMINISM, &self.fname);
        let names = self.transform().names.clone();
        for (i, d1, d2) in self.index_pairs() {
            out.instances_checked += 1;
            let (a, b) = (self.dom(i, d1), self.dom(i, d2));
            let both = match (&a, &b) {
                (Ok(a), Ok(b)) => *a && *b,
                _ => {
                    let lhs = format!("{} = {}", self.dom_call(&names.indexed_dom, d1, i), show_bool(&a));
                    let rhs = format!("{} = {}", self.dom_call(&names.indexed_dom, d2, i), show_bool(&b));
                    out.fail(self.assignment(i, &[("d1", d1), ("d2", d2)]), lhs, rhs);
                    continue;
                }
            };
            if both {
                let (v1, v2) = (self.val(i, d1), self.val(i, d2));
                if v1 != v2 || v1.is_err() {
                    let lhs = format!("{} = {}", self.dom_call(&names.indexed_fn, d1, i), show(&v1));
                    let rhs = format!("{} = {}", self.dom_call(&names.indexed_fn, d2, i), show(&v2));
                    out.fail(self.assignment(i, &[("d1", d1), ("d2", d2)]), lhs, rhs);
                }
            }
        }
        out
    }

    fn dom_call(&self, name: &str, d: u64, i: usize) -> String {
        let mut args = vec![Value::from(d)];
        args.extend(self.points[i].iter().cloned());
        self.call(name, &args)
    }

    /// `iF-dom(d1) & d1 < d2 => iF-dom(d2)`.
    pub fn check_stability(&mut self) -> CheckOutcome {
        let mut out = CheckOutcome::new(STABILITY, &self.fname);
        let name = self.transform().names.indexed_dom.clone();
        for (i, d1, d2) in self.index_pairs() {
            out.instances_checked += 1;
            let a = self.dom(i, d1);
            if matches!(a, Ok(false)) {
                continue;
            }
            let b = self.dom(i, d2);
            if a.is_err() || b != Ok(true) {
                let lhs = format!("{} = {}", self.dom_call(&name, d1, i), show_bool(&a));
                let rhs = format!("{} = {}", self.dom_call(&name, d2, i), show_bool(&b));
                out.fail(self.assignment(i, &[("d1", d1), ("d2", d2)]), lhs, rhs);
            }
        }
        out
    }

    /// `iF-dom(d) => iF(d) = iF(F-measure)` at points with a witness.
    pub fn check_canonical_measure(&mut self) -> CheckOutcome {
        let mut out = CheckOutcome::new(CANONICAL_MEASURE, &self.fname);
        let names = self.transform().names.clone();
        let mut instances: Vec<(usize, u64)> = Vec::new();
        for i in 0..self.points.len() {
            instances.extend(self.indices(i).into_iter().map(|d| (i, d)));
        }
        for (i, d1, d2) in self.plan.index_samples(self.points.len()) {
            instances.push((i, d1));
            instances.push((i, d2));
        }
        for (i, d) in instances {
            if self.witnesses()[i].is_none() {
                continue;
            }
            out.instances_checked += 1;
            let m = self.measure(&self.points[i].clone());
            let dom = self.dom(i, d);
            let Ok(Some(m)) = m else {
                let lhs = format!("{} = {}", self.call(&names.measure, &self.points[i]), show_opt(&m));
                out.fail(self.assignment(i, &[("d", d)]), lhs, "a least index".into());
                continue;
            };
            match dom {
                Ok(false) => {}
                Ok(true) => {
                    let (a, b) = (self.val(i, d), self.val(i, m));
                    if a != b || a.is_err() {
                        let lhs = format!("{} = {}", self.dom_call(&names.indexed_fn, d, i), show(&a));
                        let rhs = format!("{} = {}", self.dom_call(&names.indexed_fn, m, i), show(&b));
                        out.fail(self.assignment(i, &[("d", d), ("measure", m)]), lhs, rhs);
                    }
                }
                Err(_) => {
                    let lhs = format!("{} = {}", self.dom_call(&names.indexed_dom, d, i), show_bool(&dom));
                    out.fail(self.assignment(i, &[("d", d)]), lhs, "a boolean".into());
                }
            }
        }
        out
    }

    /// Ascending witness search = `min-index` = the measure equation's right
    /// side, at points whose witness is at most the plan's linear limit.
    pub fn check_measure_oracles(&mut self) -> CheckOutcome {
        self.measure_oracles(self.plan.linear_oracle_limit)
    }

    /// [`Verifier::check_measure_oracles`] with an explicit limit.
    pub fn measure_oracles(&mut self, limit: u64) -> CheckOutcome {
        let mut out = CheckOutcome::new(MEASURE_ORACLES, &self.fname);
        let t = self.transform().clone();
        let env_names = t.source.params.clone();
        for i in 0..self.points.len() {
            let Some(w) = self.witnesses()[i] else { continue };
            if w > limit {
                continue;
            }
            out.instances_checked += 1;
            let args = self.points[i].clone();
            let linear = self.engine.find_witness_depth_linear(&self.fname, &args, self.plan.domain_cap);
            let Ok(DomainVerdict::InDomain(lw)) = linear else {
                let lhs = format!(
                    "ascending search = {}",
                    linear.map(|v| v.to_string()).unwrap_or_else(|e| format!("error: {e}"))
                );
                out.fail(self.assignment(i, &[]), lhs, format!("witness {w}"));
                continue;
            };
            let from_above = lw + 2;
            let mi = self.engine.min_index(&self.fname, from_above, &args);
            let env: Vec<(String, Value)> = env_names.iter().cloned().zip(args.iter().cloned()).collect();
            let eq = self.engine.eval_expr(&env, &t.derived.measure.rhs, Scope::Logical, &self.cfg).map(|(v, _)| v);
            if mi != Ok(lw) || eq != Ok(Value::from(lw)) || w != lw {
                let lhs = format!("ascending search = {lw}, search = {w}");
                let rhs = format!(
                    "min-index from {from_above} = {}, measure equation = {}",
                    show(&mi.map(Value::from)),
                    show(&eq)
                );
                out.fail(self.assignment(i, &[]), lhs, rhs);
            }
        }
        out
    }

    /// Both sides of every derived equation at every point.
    pub fn check_equations(&mut self) -> Vec<CheckOutcome> {
        let t = self.transform().clone();
        let exported = t.derived.exported.as_ref();
        let mut outs = Vec::new();
        for eq in t.derived.all() {
            let scope = if Some(eq) == exported { Scope::Exec } else { Scope::Logical };
            let mut out = CheckOutcome::new(eq.name.clone(), &self.fname);
            for i in 0..self.points.len() {
                out.instances_checked += 1;
                let env: Vec<(String, Value)> = eq.params.iter().cloned().zip(self.points[i].iter().cloned()).collect();
                let lhs = self.engine.eval_expr(&env, &eq.lhs, scope, &self.cfg).map(|(v, _)| v);
                let rhs = self.engine.eval_expr(&env, &eq.rhs, scope, &self.cfg).map(|(v, _)| v);
                if lhs != rhs {
                    out.fail(self.assignment(i, &[]), format!("lhs = {}", show(&lhs)), format!("rhs = {}", show(&rhs)));
                }
            }
            outs.push(out);
        }
        outs
    }

    /// At points with a witness, the measure of each recursive call's
    /// arguments is below the measure of the point.
    pub fn check_measure_decrease(&mut self) -> CheckOutcome {
        let mut out = CheckOutcome::new(MEASURE_DECREASE, &self.fname);
        let mname = self.transform().names.measure.clone();
        for i in 0..self.points.len() {
            if self.witnesses()[i].is_none() {
                continue;
            }
            let args = self.points[i].clone();
            let here = self.measure(&args);
            let calls = recursive_calls(&self.engine, &self.fname, &args, self.plan.domain_cap);
            let (Ok(Some(m)), Ok(calls)) = (&here, &calls) else {
                let lhs = format!("{} = {}", self.call(&mname, &args), show_opt(&here));
                let rhs = match &calls {
                    Ok(c) => format!("{} call(s)", c.len()),
                    Err(e) => format!("error: {e}"),
                };
                out.instances_checked += 1;
                out.fail(self.assignment(i, &[]), lhs, rhs);
                continue;
            };
            for q in calls {
                out.instances_checked += 1;
                let mq = self.measure(q);
                if !matches!(mq, Ok(Some(k)) if k < *m) {
                    let lhs = format!("{} = {}", self.call(&mname, q), show_opt(&mq));
                    let rhs = format!("{} = {m}", self.call(&mname, &args));
                    out.fail(self.assignment(i, &[]), lhs, rhs);
                }
            }
        }
        out
    }

    /// On the domain the exported function, the fast path, the wrapper and
    /// `LF` agree; off the domain the wrapper returns the default.
    pub fn check_exec_equivalence(&mut self) -> CheckOutcome {
        let mut out = CheckOutcome::new(EXEC_EQUIVALENCE, &self.fname);
        let t = self.transform().clone();
        if t.executable.is_none() {
            return out;
        }
        for i in 0..self.points.len() {
            out.instances_checked += 1;
            let args = self.points[i].clone();
            let wrapper = exec::run_wrapper(&self.engine, &self.fname, &args, &self.cfg);
            if self.witnesses()[i].is_some() {
                let logical = self.engine.l_eval(&self.fname, &args, self.plan.domain_cap);
                let run = exec::run(&self.engine, &self.fname, &args, &self.cfg);
                let fast = exec::fast_eval(&self.engine, &self.fname, &args, &self.cfg);
                if logical.is_err() || run != logical || fast != logical || wrapper != logical {
                    let lhs = format!("{} = {}", self.call(&t.names.logical_fn, &args), show(&logical));
                    let rhs = format!("run = {}, fast = {}, wrapper = {}", show(&run), show(&fast), show(&wrapper));
                    out.fail(self.assignment(i, &[]), lhs, rhs);
                }
            } else {
                let env: Vec<(String, Value)> = t.source.params.iter().cloned().zip(args.iter().cloned()).collect();
                let default = self.engine.eval_expr(&env, &t.default_expr, Scope::Exec, &self.cfg).map(|(v, _)| v);
                if wrapper != default || wrapper.is_err() {
                    out.fail(
                        self.assignment(i, &[]),
                        format!("wrapper = {}", show(&wrapper)),
                        format!("default = {}", show(&default)),
                    );
                }
            }
        }
        out
    }

    /// Every check, in a fixed order.
    pub fn check_all(&mut self) -> CheckReport {
        let mut checks = vec![
            self.check_determinism(),
            self.check_stability(),
            self.check_canonical_measure(),
            self.check_measure_oracles(),
        ];
        checks.extend(self.check_equations());
        checks.push(self.check_measure_decrease());
        checks.push(self.check_exec_equivalence());
        CheckReport { checks }
    }
}

pub fn check_determinism(engine: &Engine, fname: &str, plan: &CheckPlan) -> Result<CheckReport, Error> {
    Ok(Verifier::new(engine, fname, plan)?.check_determinism().into())
}

pub fn check_stability(engine: &Engine, fname: &str, plan: &CheckPlan) -> Result<CheckReport, Error> {
    Ok(Verifier::new(engine, fname, plan)?.check_stability().into())
}

pub fn check_canonical_measure(engine: &Engine, fname: &str, plan: &CheckPlan) -> Result<CheckReport, Error> {
    let mut v = Verifier::new(engine, fname, plan)?;
    Ok(CheckReport { checks: vec![v.check_canonical_measure(), v.check_measure_oracles()] })
}

pub fn check_defining_equations(engine: &Engine, fname: &str, plan: &CheckPlan) -> Result<CheckReport, Error> {
    Ok(CheckReport { checks: Verifier::new(engine, fname, plan)?.check_equations() })
}

pub fn check_measure_decrease(engine: &Engine, fname: &str, plan: &CheckPlan) -> Result<CheckReport, Error> {
    Ok(Verifier::new(engine, fname, plan)?.check_measure_decrease().into())
}

pub fn check_exec_equivalence(engine: &Engine, fname: &str, plan: &CheckPlan) -> Result<CheckReport, Error> {
    Ok(Verifier::new(engine, fname, plan)?.check_exec_equivalence().into())
}

pub fn check_all(engine: &Engine, fname: &str, plan: &CheckPlan) -> Result<CheckReport, Error> {
    Ok(Verifier::new(engine, fname, plan)?.check_all())
}

/// What the full suite reports once a mutation is applied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MutationOutcome {
    pub mutation: Mutation,
    /// False when the transform had no site for the mutation.
    pub applied: bool,
    pub failures: usize,
    pub failing_checks: Vec<String>,
}

/// Runs the full suite once per applicable mutation of `fname`'s transform.
pub fn mutation_sanity(engine: &Engine, fname: &str, plan: &CheckPlan) -> Result<Vec<MutationOutcome>, Error> {
    let t = engine
        .transforms()
        .iter()
        .position(|t| t.source.name == fname)
        .ok_or_else(|| EvalError::UnknownFunction(fname.to_string()))?;
    let mut outs = Vec::new();
    for mutation in Mutation::ALL {
        let mut transforms = engine.transforms().to_vec();
        if !mutation.apply(&mut transforms[t]) {
            outs.push(MutationOutcome { mutation, applied: false, failures: 0, failing_checks: Vec::new() });
            continue;
        }
        let mutated = Engine::from_transforms(engine.program().clone(), transforms)?;
        let report = check_all(&mutated, fname, plan)?;
        outs.push(MutationOutcome {
            mutation,
            applied: true,
            failures: report.failure_count(),
            failing_checks: report
                .checks
                .iter()
                .filter(|c| c.status() == Status::Fail)
                .map(|c| c.name.clone())
                .collect(),
        });
    }
    Ok(outs)
}

#[cfg(test)]
mod tests;
