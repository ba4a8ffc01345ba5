use super::*;
use crate::surface::parse_program;

const ACK: &str = "(def::ung ack (x y)
  (if (= x 0) (1+ y) (if (= y 0) (ack (1- x) 1) (ack (1- x) (ack x (1- y))))))";

fn engine(src: &str) -> Engine {
    Engine::new(parse_program(src).unwrap()).unwrap()
}

fn small_plan() -> CheckPlan {
    let mut plan = CheckPlan::with_grid(vec![-1..=2, -1..=3]);
    plan.random_samples = 40;
    plan.safety_cap = 20_000;
    plan
}

/// Mutations can make the indexed domain exponential in the index.
fn mutation_plan() -> CheckPlan {
    CheckPlan { random_samples: 0, depth_range: 0..=6, ..small_plan() }
}

fn ints(v: &[i64]) -> Vec<Value> {
    v.iter().map(|&n| Value::Int(n)).collect()
}

fn mutated(src: &str, m: Mutation) -> Engine {
    let e = engine(src);
    let mut ts = e.transforms().to_vec();
    assert!(m.apply(&mut ts[0]), "{m:?}");
    Engine::from_transforms(e.program().clone(), ts).unwrap()
}

#[test]
fn full_suite_passes_on_a_small_grid() {
    let report = check_all(&engine(ACK), "ack", &small_plan()).unwrap();
    for c in &report.checks {
        assert_eq!(c.status(), Status::Pass, "{}: {:?}", c.name, c.failures.first());
        assert!(c.instances_checked > 0, "{}", c.name);
    }
    let names: Vec<&str> = report.checks.iter().map(|c| c.name.as_str()).collect();
    assert_eq!(
        names,
        [
            DETERMINISM,
            STABILITY,
            CANONICAL_MEASURE,
            MEASURE_ORACLES,
            "Lack-dom-definition",
            "Lack-definition",
            "ack-measure-definition",
            "ack-definition",
            MEASURE_DECREASE,
            EXEC_EQUIVALENCE
        ]
    );
}

#[test]
fn reports_are_deterministic() {
    let e = engine(ACK);
    let plan = small_plan();
    let m = Mutation::LeafPlusIndex;
    let bad = mutated(ACK, m);
    assert_eq!(check_all(&e, "ack", &plan).unwrap(), check_all(&e, "ack", &plan).unwrap());
    assert_eq!(check_determinism(&bad, "ack", &plan).unwrap(), check_determinism(&bad, "ack", &plan).unwrap());
}

#[test]
fn determinism_catches_an_index_dependent_leaf() {
    let bad = mutated(ACK, Mutation::LeafPlusIndex);
    let report = check_determinism(&bad, "ack", &small_plan()).unwrap();
    assert!(!report.passed());
    // Replay the first witness: the indexed function disagrees with itself.
    let f = &report.checks[0].failures[0];
    let get = |n: &str| f.assignment.iter().find(|(k, _)| k == n).unwrap().1.clone();
    let args = vec![get("x"), get("y")];
    let (d1, d2) = (get("d1").to_u64().unwrap(), get("d2").to_u64().unwrap());
    assert!(bad.eval_indexed_dom("ack", d1, &args).unwrap());
    assert!(bad.eval_indexed_dom("ack", d2, &args).unwrap());
    assert_ne!(bad.eval_indexed_fn("ack", d1, &args).unwrap(), bad.eval_indexed_fn("ack", d2, &args).unwrap());
}

#[test]
fn literal_default_breaks_the_base_points_with_a_user_default() {
    let src = "(def::ung ack (x y) (declare (xargs :default-value 0))
      (if (= x 0) (1+ y) (if (= y 0) (ack (1- x) 1) (ack (1- x) (ack x (1- y))))))";
    assert!(check_all(&engine(src), "ack", &small_plan()).unwrap().passed());
    let report = check_determinism(&mutated(src, Mutation::LiteralDefault), "ack", &small_plan()).unwrap();
    let f = &report.checks[0].failures[0];
    // iack(0, 0, y) = 0 but iack(d, 0, y) = y + 1 for d > 0.
    assert_eq!(f.assignment[0].1, Value::Int(0));
    assert_eq!(f.assignment[2], ("d1".to_string(), Value::Int(0)));
}

#[test]
fn equations_catch_a_weakened_domain() {
    let bad = mutated(ACK, Mutation::BasePredicateTrue);
    let report = check_all(&bad, "ack", &mutation_plan()).unwrap();
    assert_eq!(report.get(STABILITY).unwrap().status(), Status::Pass);
    // Everything is in the domain at index 0, which the domain equation
    // cannot see; the value and measure equations can.
    assert_eq!(report.get("Lack-dom-definition").unwrap().status(), Status::Pass);
    assert_eq!(report.get("Lack-definition").unwrap().status(), Status::Fail);
    assert_eq!(report.get("ack-measure-definition").unwrap().status(), Status::Fail);
    assert_eq!(report.get(MEASURE_DECREASE).unwrap().status(), Status::Fail);
    assert_eq!(report.get(EXEC_EQUIVALENCE).unwrap().status(), Status::Fail);
}

#[test]
fn exec_equivalence_catches_a_wrong_fast_path() {
    let report = check_exec_equivalence(&mutated(ACK, Mutation::FastLeafOffByOne), "ack", &small_plan()).unwrap();
    assert!(!report.passed());
}

#[test]
fn measure_decrease_instances_follow_the_call_sites() {
    let plan = CheckPlan { random_samples: 0, ..CheckPlan::with_grid(vec![2..=2, 2..=2]) };
    let report = check_measure_decrease(&engine(ACK), "ack", &plan).unwrap();
    // (2,1) and (1, ack(2,1)).
    assert_eq!(report.checks[0].instances_checked, 2);
    assert!(report.passed());
    let plan = CheckPlan { random_samples: 0, ..CheckPlan::with_grid(vec![0..=0, -1..=6]) };
    let report = check_measure_decrease(&engine(ACK), "ack", &plan).unwrap();
    assert_eq!(report.checks[0].instances_checked, 0);
}

#[test]
fn measure_equation_is_zero_on_the_base_row() {
    let e = engine(ACK);
    let t = e.transform("ack").unwrap();
    for y in -1..=6 {
        let env = vec![("x".to_string(), Value::Int(0)), ("y".to_string(), Value::Int(y))];
        let cfg = ExecConfig::default();
        let (l, _) = e.eval_expr(&env, &t.derived.measure.lhs, Scope::Logical, &cfg).unwrap();
        let (r, _) = e.eval_expr(&env, &t.derived.measure.rhs, Scope::Logical, &cfg).unwrap();
        assert_eq!((l, r), (Value::Int(0), Value::Int(0)));
    }
}

#[test]
fn exported_equation_off_domain_with_a_small_bound() {
    let e = engine(ACK);
    let plan = CheckPlan { big: 4, random_samples: 0, ..CheckPlan::with_grid(vec![-1..=-1, 0..=0]) };
    let report = check_defining_equations(&e, "ack", &plan).unwrap();
    assert!(report.passed(), "{report:?}");
    // Both sides are comp-ack at 4, which exhausts off the domain and takes
    // the default there.
    let v = exec::comp_eval(&e, "ack", 4, &ints(&[-1, 0]), &plan.exec_config()).unwrap();
    assert_eq!(exec::run(&e, "ack", &ints(&[-1, 0]), &plan.exec_config()).unwrap(), v);
    let t = e.transform("ack").unwrap();
    let env = vec![("x".to_string(), Value::Int(-1)), ("y".to_string(), Value::Int(0))];
    let (rhs, _) =
        e.eval_expr(&env, &t.derived.exported.as_ref().unwrap().rhs, Scope::Exec, &plan.exec_config()).unwrap();
    assert_eq!(rhs, v);
}

#[test]
fn off_domain_points_only_reach_the_wrapper_default() {
    let plan = CheckPlan { random_samples: 0, ..CheckPlan::with_grid(vec![-1..=-1, -1..=2]) };
    let mut plan = plan;
    plan.safety_cap = 5_000;
    let report = check_exec_equivalence(&engine(ACK), "ack", &plan).unwrap();
    assert!(report.passed());
    assert_eq!(report.checks[0].instances_checked, 4);
}

#[test]
fn halving_on_evens() {
    let src = "(def::ung half (x) (if (= x 0) 0 (1+ (half (- x 2)))))";
    let plan = CheckPlan { random_samples: 20, safety_cap: 20_000, ..CheckPlan::with_grid(vec![-3..=12]) };
    let report = check_all(&engine(src), "half", &plan).unwrap();
    assert!(report.passed(), "{:?}", report.checks.iter().find(|c| c.status() == Status::Fail));
}

#[test]
fn nested_self_application_is_checked_at_both_sites() {
    let src = "(def::ung g (x) (if (zp x) 0 (g (g (1- x)))))";
    let plan = CheckPlan { random_samples: 0, ..CheckPlan::with_grid(vec![3..=3]) };
    let report = check_measure_decrease(&engine(src), "g", &plan).unwrap();
    assert_eq!(report.checks[0].instances_checked, 2);
    assert!(report.passed());
}

#[test]
fn every_applicable_mutation_is_caught() {
    let outs = mutation_sanity(&engine(ACK), "ack", &mutation_plan()).unwrap();
    for o in &outs {
        if o.applied {
            assert!(o.failures > 0, "{:?} went unnoticed", o.mutation);
        }
    }
    assert!(outs.iter().filter(|o| o.applied).count() >= 4);
}

#[test]
fn plan_errors_surface() {
    let e = engine(ACK);
    assert!(matches!(check_all(&e, "ack", &CheckPlan::for_arity(1)), Err(Error::Plan(_))));
    assert!(matches!(check_all(&e, "nope", &CheckPlan::for_arity(2)), Err(Error::Eval(EvalError::UnknownFunction(_)))));
}
