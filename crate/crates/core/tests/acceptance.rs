//! Acceptance suite: one line per criterion, nonzero exit on any failure.
//!
//! Run alone with `cargo test --release -p stepwise-core --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use stepwise_core::exec::{self, ExecConfig, Mode};
use stepwise_core::interp::{DomainVerdict, Engine, Scope};
use stepwise_core::surface::sexp::read_one;
use stepwise_core::surface::{parse_program, print_definition, print_flat};
use stepwise_core::totality::check_total;
use stepwise_core::value::Value;
use stepwise_core::verify::{check_all, CheckPlan, Verifier};

const ACK: &str = include_str!("../../../programs/ack.lisp");
const ACK_DEFAULT: &str = include_str!("../../../programs/ack-default.lisp");
const F91: &str = include_str!("../../../programs/f91.lisp");
const HALF: &str = include_str!("../../../programs/half.lisp");

/// Wall-clock bounds, pinned.
const TRANSCRIPT_LIMIT: Duration = Duration::from_secs(10);
const SUITE_LIMIT: Duration = Duration::from_secs(60);

type Verdict = Result<String, String>;

/// Number, name and check.
type Criterion = (u8, &'static str, fn() -> Verdict);

fn engine(src: &str) -> Engine {
    Engine::new(parse_program(src).expect("program parses")).expect("program transforms")
}

fn ints(v: &[i64]) -> Vec<Value> {
    v.iter().map(|&n| Value::Int(n)).collect()
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn transcript_3_11() -> Verdict {
    let e = engine(ACK);
    let start = Instant::now();
    let v = exec::run(&e, "ack", &ints(&[3, 11]), &ExecConfig::default()).map_err(|e| e.to_string())?;
    let took = start.elapsed();
    ensure(v == Value::Int(16381), format!("run(ack, 3, 11) = {v}, want 16381"))?;
    ensure(took < TRANSCRIPT_LIMIT, format!("took {took:.2?}, limit {TRANSCRIPT_LIMIT:?}"))?;
    Ok(format!("run(ack, 3, 11) = 16381 in {took:.2?}"))
}

fn transcript_3_8() -> Verdict {
    let e = engine(ACK);
    let cfg = ExecConfig::default();
    let v = exec::run(&e, "ack", &ints(&[3, 8]), &cfg).map_err(|e| e.to_string())?;
    ensure(v == Value::Int(2045), format!("run(ack, 3, 8) = {v}, want 2045"))?;
    let dom = exec::exec_dom(&e, "ack", &ints(&[3, 8]), &cfg).map_err(|e| e.to_string())?;
    ensure(dom, "exec-dom(ack, 3, 8) = nil")?;
    Ok("run(ack, 3, 8) = 2045, exec-dom = t".into())
}

fn domain_dominates() -> Verdict {
    let e = engine(ACK);
    let cfg = ExecConfig::default();
    let mut rows = Vec::new();
    for k in 3..=5 {
        let steps =
            |mode| exec::count_steps(mode, &e, "ack", &ints(&[3, k]), &cfg).map(|(_, s)| s).map_err(|e| e.to_string());
        let (indexed, fast, domain, wrapper) =
            (steps(Mode::Indexed)?, steps(Mode::Fast)?, steps(Mode::Domain)?, steps(Mode::Wrapper)?);
        ensure(
            domain.call_count >= fast.call_count && domain.prim_count >= fast.prim_count,
            format!("(3,{k}): domain {domain:?} below fast {fast:?}"),
        )?;
        ensure(
            wrapper.call_count >= indexed.call_count && wrapper.prim_count >= indexed.prim_count,
            format!("(3,{k}): wrapper {wrapper:?} below indexed {indexed:?}"),
        )?;
        ensure(indexed.domain_checks == 0, format!("(3,{k}): indexed made {} domain checks", indexed.domain_checks))?;
        rows.push(format!(
            "k={k} calls fast {} domain {} indexed {} wrapper {}",
            fast.call_count, domain.call_count, indexed.call_count, wrapper.call_count
        ));
    }
    Ok(rows.join("; "))
}

fn golden_transform() -> Verdict {
    let e = engine(ACK);
    let t = e.transform("ack").ok_or("no transform for ack")?;
    let same = |printed: String, want: &str| -> Result<(), String> {
        let got = read_one(&printed).map_err(|e| e.to_string())?;
        ensure(got == read_one(want).expect("display parses"), format!("got {printed}\nwant {want}"))
    };
    same(
        print_definition(&t.indexed_fn),
        "(defun iack (d x y)
           (if (zp d) (1+ y)
             (if (= x 0) (1+ y)
               (if (= y 0) (iack (1- d) (1- x) 1)
                 (iack (1- d) (1- x) (iack (1- d) x (1- y)))))))",
    )?;
    same(
        print_definition(&t.indexed_dom),
        "(defun iack-dom (d x y)
           (if (zp d) (= x 0)
             (if (= x 0) t
               (if (= y 0) (iack-dom (1- d) (1- x) 1)
                 (and (iack-dom (1- d) x (1- y))
                      (iack-dom (1- d) (1- x) (iack (1- d) x (1- y))))))))",
    )?;
    let base = print_flat(&t.base_predicate);
    ensure(base == "(= x 0)", format!("base predicate {base}"))?;
    Ok("iack, iack-dom and base predicate (= x 0) match".into())
}

fn full_suite() -> Verdict {
    let e = engine(ACK);
    let plan = CheckPlan::for_arity(2);
    ensure(
        plan.grid == vec![-1..=3, -1..=6] && plan.depth_range == (0..=12) && plan.seed == 0,
        "unexpected default plan",
    )?;
    let start = Instant::now();
    let report = check_all(&e, "ack", &plan).map_err(|e| e.to_string())?;
    let took = start.elapsed();
    let names: Vec<&str> = report.checks.iter().map(|c| c.name.as_str()).collect();
    for want in [
        "determinism",
        "stability",
        "canonical-measure",
        "Lack-dom-definition",
        "Lack-definition",
        "ack-measure-definition",
        "ack-definition",
        "measure-decrease",
        "exec-equivalence",
    ] {
        ensure(names.contains(&want), format!("missing check {want}"))?;
    }
    for c in &report.checks {
        if let Some(f) = c.failures.first() {
            return Err(format!("{} failed: {f}", c.name));
        }
        ensure(c.instances_checked > 0, format!("{} checked nothing", c.name))?;
    }
    ensure(took < SUITE_LIMIT, format!("took {took:.2?}, limit {SUITE_LIMIT:?}"))?;
    Ok(format!("{} checks, 0 failures in {took:.2?}", report.checks.len()))
}

fn dual_oracle() -> Verdict {
    let e = engine(ACK);
    let plan = CheckPlan::for_arity(2);
    let mut v = Verifier::new(&e, "ack", &plan).map_err(|e| e.to_string())?;
    let out = v.measure_oracles(u64::MAX);
    if let Some(f) = out.failures.first() {
        return Err(f.to_string());
    }
    // Witnesses exist for x = 0 (8 points) and for x in 1..=3 with y >= 0 (21).
    ensure(out.instances_checked == 29, format!("{} points compared, want 29", out.instances_checked))?;
    Ok("29 grid points: ascending search = min-index = measure equation".into())
}

fn totality() -> Verdict {
    let plan = CheckPlan { random_samples: 0, ..CheckPlan::with_grid(vec![0..=3, 0..=8]) };
    let p = parse_program(ACK).map_err(|e| e.to_string())?;
    let e = Engine::new(p.clone()).map_err(|e| e.to_string())?;
    let report = check_total(&e, &p.totality_specs[0], &plan).map_err(|e| e.to_string())?;
    for c in &report.checks {
        if let Some(f) = c.failures.first() {
            return Err(format!("{} failed: {f}", c.name));
        }
    }
    ensure(
        report.checks[0].instances_checked == 36,
        format!("{} domain points, want 36", report.checks[0].instances_checked),
    )?;

    let swapped = parse_program(&ACK.replace("(llist x y)", "(llist y x)")).map_err(|e| e.to_string())?;
    let e = Engine::new(swapped.clone()).map_err(|e| e.to_string())?;
    let small = CheckPlan { random_samples: 0, ..CheckPlan::with_grid(vec![0..=2, 0..=4]) };
    let report = check_total(&e, &swapped.totality_specs[0], &small).map_err(|e| e.to_string())?;
    let failures = report.failure_count();
    ensure(failures > 0, "llist(y, x) produced no failure")?;
    let first = report.checks.iter().flat_map(|c| &c.failures).next().expect("a failure");
    Ok(format!("36 natural points pass; llist(y, x) fails {failures} times, first {first}"))
}

fn off_domain() -> Verdict {
    let e = engine(ACK_DEFAULT);
    let cfg = ExecConfig::new(4, exec::DEFAULT_SAFETY_CAP, exec::DEFAULT_DOMAIN_CAP).map_err(|e| e.to_string())?;
    let at = ints(&[-1, 0]);
    let w = exec::run_wrapper(&e, "ack", &at, &cfg).map_err(|e| e.to_string())?;
    ensure(w == Value::Int(0), format!("wrapper = {w}, want 0"))?;
    let dom = e.l_dom("ack", &at, cfg.domain_cap).map_err(|e| e.to_string())?;
    ensure(dom == DomainVerdict::NotInDomainUpTo(cfg.domain_cap), format!("l-dom = {dom}"))?;

    let comp = exec::comp_eval(&e, "ack", 4, &at, &cfg).map_err(|e| e.to_string())?;
    let t = e.transform("ack").ok_or("no transform for ack")?;
    let eq = t.derived.exported.as_ref().ok_or("no exported equation")?;
    let env: Vec<(String, Value)> = eq.params.iter().cloned().zip(at.iter().cloned()).collect();
    let side = |x| e.eval_expr(&env, x, Scope::Exec, &cfg).map(|(v, _)| v).map_err(|e| e.to_string());
    let (lhs, rhs) = (side(&eq.lhs)?, side(&eq.rhs)?);
    ensure(lhs == comp && rhs == comp, format!("lhs {lhs}, rhs {rhs}, comp-ack(4, -1, 0) {comp}"))?;

    let plan = CheckPlan { random_samples: 0, big: 4, ..CheckPlan::with_grid(vec![-1..=-1, 0..=0]) };
    let mut v = Verifier::new(&e, "ack", &plan).map_err(|e| e.to_string())?;
    let outs = v.check_equations();
    let exported = outs.iter().find(|o| o.name == eq.name).ok_or("exported equation not checked")?;
    ensure(exported.failures.is_empty() && exported.instances_checked == 1, format!("{exported:?}"))?;
    Ok(format!("wrapper 0, l-dom {dom}, exported equation holds with value {comp}"))
}

fn f91_oracle(n: i64) -> i64 {
    if n > 100 {
        n - 10
    } else {
        f91_oracle(f91_oracle(n + 11))
    }
}

fn corpus() -> Verdict {
    let e = engine(F91);
    let cfg = ExecConfig::default();
    for n in (0..=110).chain([-50, 500]) {
        let v = exec::run(&e, "f91", &ints(&[n]), &cfg).map_err(|e| e.to_string())?;
        let want = f91_oracle(n);
        ensure(v == Value::Int(want), format!("f91({n}) = {v}, want {want}"))?;
        ensure(n > 100 || want == 91, format!("oracle f91({n}) = {want}"))?;
    }
    let h = engine(HALF);
    let report = check_all(&h, "half", &CheckPlan::for_arity(1)).map_err(|e| e.to_string())?;
    for c in &report.checks {
        if let Some(f) = c.failures.first() {
            return Err(format!("half: {} failed: {f}", c.name));
        }
    }
    Ok(format!("f91 agrees with the direct oracle on 113 inputs; half passes {} checks", report.checks.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        (1, "transcript value (3,11)", transcript_3_11),
        (2, "transcript value (3,8)", transcript_3_8),
        (3, "domain computation dominates", domain_dominates),
        (4, "golden transform", golden_transform),
        (5, "full property suite", full_suite),
        (6, "dual-oracle measure", dual_oracle),
        (7, "totality", totality),
        (8, "off-domain behavior", off_domain),
        (9, "corpus breadth", corpus),
    ];
    let mut failed = 0;
    for (n, name, run) in criteria {
        let start = Instant::now();
        let verdict = run();
        let took = start.elapsed();
        match verdict {
            Ok(detail) => println!("criterion {n} PASS  {name}: {detail} [{took:.1?}]"),
            Err(why) => {
                failed += 1;
                println!("criterion {n} FAIL  {name}: {why} [{took:.1?}]");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
