//! Desk-scale totality claims: under a predicate, the recursion stays on
//! the domain and a measure decreases across every recursive call.

use std::cmp::Ordering;

use crate::error::{Error, EvalError, TupleArityError};
use crate::exec::ExecConfig;
use crate::interp::{Engine, Scope};
use crate::surface::{Expr, Relation, TotalitySpec};
use crate::value::Value;
use crate::verify::{recursive_calls, CheckOutcome, CheckPlan, CheckReport};

fn natural_cmp(a: &Value, b: &Value) -> Ordering {
    let (a, b) = (a.nfix(), b.nfix());
    match (&a, &b) {
        (Value::Int(x), Value::Int(y)) => x.cmp(y),
        _ => a.to_bigint().cmp(&b.to_bigint()),
    }
}

/// `l<`: strict lexicographic order on tuples, components read as
/// naturals through `nfix`.
pub fn lex_less(a: &[Value], b: &[Value]) -> Result<bool, TupleArityError> {
    if a.len() != b.len() {
        return Err(TupleArityError { left: a.len(), right: b.len() });
    }
    for (x, y) in a.iter().zip(b) {
        match natural_cmp(x, y) {
            Ordering::Less => return Ok(true),
            Ordering::Greater => return Ok(false),
            Ordering::Equal => {}
        }
    }
    Ok(false)
}

/// `relation(a, b)`: `a` is below `b`.
pub fn relation_holds(relation: Relation, a: &[Value], b: &[Value]) -> Result<bool, TupleArityError> {
    match relation {
        Relation::LexicographicLess => lex_less(a, b),
        Relation::NaturalLess => {
            if a.len() != 1 || b.len() != 1 {
                return Err(TupleArityError { left: a.len(), right: b.len() });
            }
            Ok(natural_cmp(&a[0], &b[0]) == Ordering::Less)
        }
    }
}

struct Claim<'a> {
    engine: &'a Engine,
    spec: &'a TotalitySpec,
    cfg: ExecConfig,
}

impl Claim<'_> {
    fn env(&self, args: &[Value]) -> Vec<(String, Value)> {
        self.spec.params.iter().cloned().zip(args.iter().cloned()).collect()
    }

    fn eval(&self, e: &Expr, args: &[Value]) -> Result<Value, EvalError> {
        self.engine.eval_expr(&self.env(args), e, Scope::Logical, &self.cfg).map(|(v, _)| v)
    }

    fn predicate(&self, args: &[Value]) -> Result<bool, EvalError> {
        Ok(self.eval(&self.spec.predicate, args)?.is_true())
    }

    fn measure(&self, args: &[Value]) -> Result<Vec<Value>, EvalError> {
        self.spec.measure.iter().map(|m| self.eval(m, args)).collect()
    }
}

fn show_tuple(t: &[Value]) -> String {
    let parts: Vec<String> = t.iter().map(Value::to_string).collect();
    format!("({})", parts.join(" "))
}

/// Checks `spec` at every grid point of `plan` that satisfies its predicate.
///
/// Two outcomes: `THEOREM:domain`, the point has a domain witness; and
/// `THEOREM:decrease`, every recursive call from the point satisfies the
/// predicate and has a smaller measure under the relation.
pub fn check_total(engine: &Engine, spec: &TotalitySpec, plan: &CheckPlan) -> Result<CheckReport, Error> {
    let def = engine.function(&spec.fname).ok_or_else(|| EvalError::UnknownFunction(spec.fname.clone()))?;
    plan.validate(&spec.fname, def.params.len())?;
    let engine = Engine::from_transforms(engine.program().clone(), engine.transforms().to_vec())?.with_witness_memo();
    let claim = Claim { engine: &engine, spec, cfg: plan.exec_config() };
    let mut domain = CheckOutcome::new(format!("{}:domain", spec.theorem_name), &spec.fname);
    let mut decrease = CheckOutcome::new(format!("{}:decrease", spec.theorem_name), &spec.fname);
    let assignment = |args: &[Value]| -> Vec<(String, Value)> { claim.env(args) };

    for p in plan.points() {
        match claim.predicate(&p) {
            Ok(false) => continue,
            Ok(true) => {}
            Err(e) => {
                domain.instances_checked += 1;
                domain.fail(assignment(&p), format!("predicate = error: {e}"), "a value".into());
                continue;
            }
        }
        domain.instances_checked += 1;
        let verdict = engine.l_dom(&spec.fname, &p, plan.domain_cap);
        if !matches!(verdict, Ok(v) if v.is_in_domain()) {
            let v = verdict.map(|v| v.to_string()).unwrap_or_else(|e| format!("error: {e}"));
            domain.fail(assignment(&p), format!("domain = {v}"), "in-domain".into());
        }

        let here = claim.measure(&p);
        let calls = recursive_calls(&engine, &spec.fname, &p, plan.domain_cap);
        let (Ok(here), Ok(calls)) = (here, calls) else {
            decrease.instances_checked += 1;
            decrease.fail(assignment(&p), "measure or call sites".into(), "an evaluation error".into());
            continue;
        };
        for q in calls {
            decrease.instances_checked += 1;
            let pred = claim.predicate(&q);
            let there = claim.measure(&q);
            let below = there.as_ref().ok().map(|m| relation_holds(spec.relation, m, &here));
            if pred != Ok(true) || !matches!(below, Some(Ok(true))) {
                let lhs = match &there {
                    Ok(m) => format!("measure{} = {}", show_tuple(&q), show_tuple(m)),
                    Err(e) => format!("measure{} = error: {e}", show_tuple(&q)),
                };
                let rhs = format!(
                    "measure{} = {}, {} predicate{} = {}",
                    show_tuple(&p),
                    show_tuple(&here),
                    spec.relation.name(),
                    show_tuple(&q),
                    pred.map(|b| b.to_string()).unwrap_or_else(|e| format!("error: {e}"))
                );
                decrease.fail(assignment(&p), lhs, rhs);
            }
        }
    }
    Ok(CheckReport { checks: vec![domain, decrease] })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::parse_program;

    fn ints(v: &[i64]) -> Vec<Value> {
        v.iter().map(|&n| Value::Int(n)).collect()
    }

    const ACK_TOTAL: &str = "(def::ung ack (x y)
      (if (= x 0) (1+ y) (if (= y 0) (ack (1- x) 1) (ack (1- x) (ack x (1- y))))))
    (def::total ack (x y)
      (declare (xargs :measure (llist x y) :well-founded-relation l< :totality-theorem natp-ack-terminates))
      (and (natp x) (natp y)))";

    #[test]
    fn lexicographic_order() {
        assert_eq!(lex_less(&ints(&[2, 9]), &ints(&[3, 0])), Ok(true));
        assert_eq!(lex_less(&ints(&[3, 1]), &ints(&[3, 2])), Ok(true));
        assert_eq!(lex_less(&ints(&[3, 2]), &ints(&[3, 2])), Ok(false));
        assert_eq!(lex_less(&ints(&[3, 0]), &ints(&[2, 9])), Ok(false));
        // Negative components read as 0.
        assert_eq!(lex_less(&ints(&[-4, 1]), &ints(&[0, 2])), Ok(true));
        assert_eq!(lex_less(&ints(&[1]), &ints(&[1, 2])), Err(TupleArityError { left: 1, right: 2 }));
    }

    #[test]
    fn natural_order() {
        assert_eq!(relation_holds(Relation::NaturalLess, &ints(&[2]), &ints(&[3])), Ok(true));
        assert_eq!(relation_holds(Relation::NaturalLess, &ints(&[-7]), &ints(&[0])), Ok(false));
    }

    fn plan() -> CheckPlan {
        CheckPlan { random_samples: 0, ..CheckPlan::with_grid(vec![-1..=2, -1..=4]) }
    }

    #[test]
    fn ackermann_claim_holds() {
        let p = parse_program(ACK_TOTAL).unwrap();
        let e = Engine::new(p.clone()).unwrap();
        let report = check_total(&e, &p.totality_specs[0], &plan()).unwrap();
        assert!(report.passed(), "{report:?}");
        // Natural points only: 3 x 5.
        assert_eq!(report.checks[0].instances_checked, 15);
        assert_eq!(report.checks[0].name, "natp-ack-terminates:domain");
    }

    #[test]
    fn swapped_measure_fails() {
        let p = parse_program(&ACK_TOTAL.replace("(llist x y)", "(llist y x)")).unwrap();
        let e = Engine::new(p.clone()).unwrap();
        let report = check_total(&e, &p.totality_specs[0], &plan()).unwrap();
        assert!(!report.passed());
        assert!(report.checks[1].status() == crate::verify::Status::Fail);
    }

    #[test]
    fn false_predicate_is_vacuous() {
        let p = parse_program(&ACK_TOTAL.replace("(and (natp x) (natp y))", "nil")).unwrap();
        let e = Engine::new(p.clone()).unwrap();
        let report = check_total(&e, &p.totality_specs[0], &plan()).unwrap();
        assert!(report.passed());
        assert_eq!(report.checks[0].instances_checked, 0);
    }

    #[test]
    fn a_predicate_admitting_off_domain_points_fails() {
        let p = parse_program(&ACK_TOTAL.replace("(and (natp x) (natp y))", "(natp y)")).unwrap();
        let e = Engine::new(p.clone()).unwrap();
        let report = check_total(&e, &p.totality_specs[0], &plan()).unwrap();
        assert_eq!(report.checks[0].status(), crate::verify::Status::Fail);
    }
}
