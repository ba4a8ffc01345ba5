use proptest::prelude::*;

use super::*;
use crate::surface::{parse_expr, parse_program};

const ACK: &str = "(def::ung ack (x y)
  (if (= x 0) (1+ y) (if (= y 0) (ack (1- x) 1) (ack (1- x) (ack x (1- y))))))";

fn ack() -> Engine {
    Engine::new(parse_program(ACK).unwrap()).unwrap()
}

fn ints(v: &[i64]) -> Vec<Value> {
    v.iter().map(|&n| Value::Int(n)).collect()
}

/// Independent index-bounded Ackermann: `None` when the index runs out.
fn ack_oracle(d: u64, x: i64, y: i64) -> Option<i64> {
    if d == 0 {
        return (x == 0).then_some(y + 1);
    }
    if x == 0 {
        Some(y + 1)
    } else if y == 0 {
        ack_oracle(d - 1, x - 1, 1)
    } else {
        let inner = ack_oracle(d - 1, x, y - 1)?;
        ack_oracle(d - 1, x - 1, inner)
    }
}

#[test]
fn eval_expr_basics() {
    let e = ack();
    let cfg = ExecConfig::default();
    let eval = |src: &str, env: &[(&str, i64)]| {
        let names: Vec<String> = env.iter().map(|(n, _)| n.to_string()).collect();
        let expr = parse_expr(src, &names, &HashMap::new()).unwrap();
        let env: Vec<(String, Value)> = env.iter().map(|(n, v)| (n.to_string(), Value::Int(*v))).collect();
        e.eval_expr(&env, &expr, Scope::Exec, &cfg).map(|(v, _)| v)
    };
    assert_eq!(eval("(1+ y)", &[("x", 0), ("y", 5)]).unwrap(), Value::Int(6));
    assert_eq!(eval("(zp -3)", &[]).unwrap(), Value::True);
    assert_eq!(eval("(max 2 7)", &[]).unwrap(), Value::Int(7));
    assert_eq!(eval("(and 1 nil 2)", &[]).unwrap(), Value::Nil);
    assert_eq!(eval("(and 1 2)", &[]).unwrap(), Value::Int(2));
    assert_eq!(eval("(or nil 3)", &[]).unwrap(), Value::Int(3));
    assert_eq!(eval("(or)", &[]).unwrap(), Value::Nil);
    let err = eval("(if (= x 0) (car x) 1)", &[("x", 0)]).unwrap_err();
    assert!(matches!(&err, EvalError::DynamicType { path, .. } if path == "body.then"), "{err}");
}

#[test]
fn eval_expr_counts_calls_and_prims() {
    let e = ack();
    let expr = parse_expr("(ack 0 (+ 1 2))", &[], &HashMap::from([("ack".to_string(), 2)])).unwrap();
    let (v, s) = e.eval_expr(&[], &expr, Scope::Exec, &ExecConfig::default()).unwrap();
    assert_eq!(v, Value::Int(4));
    // entry, ack, comp-ack; `+`, `=` and `1+`; the zp test on the index.
    assert_eq!(s.call_count, 3);
    assert_eq!(s.prim_count, 4);
}

#[test]
fn indexed_function_examples() {
    let e = ack();
    for (x, y) in [(0, 0), (3, 4), (-2, 7)] {
        assert_eq!(e.eval_indexed_fn("ack", 0, &ints(&[x, y])).unwrap(), Value::Int(y + 1));
    }
    for d in 1..8 {
        assert_eq!(e.eval_indexed_fn("ack", d, &ints(&[0, 5])).unwrap(), Value::Int(6));
    }
    assert_eq!(e.eval_indexed_fn("ack", 4, &ints(&[1, 1])).unwrap(), Value::Int(3));
}

#[test]
fn indexed_domain_examples() {
    let e = ack();
    assert!(e.eval_indexed_dom("ack", 0, &ints(&[0, 9])).unwrap());
    assert!(!e.eval_indexed_dom("ack", 0, &ints(&[1, 0])).unwrap());
    assert!(e.eval_indexed_dom("ack", 1, &ints(&[1, 0])).unwrap());
    for d in 0..=64 {
        assert!(!e.eval_indexed_dom("ack", d, &ints(&[-1, 0])).unwrap());
    }
}

#[test]
fn indexed_layer_agrees_with_oracle() {
    let e = ack();
    for d in 0..=8 {
        for x in -1..=3 {
            for y in -1..=4 {
                let dom = e.eval_indexed_dom("ack", d, &ints(&[x, y])).unwrap();
                let oracle = ack_oracle(d, x, y);
                assert_eq!(dom, oracle.is_some(), "dom({d},{x},{y})");
                if let Some(v) = oracle {
                    assert_eq!(e.eval_indexed_fn("ack", d, &ints(&[x, y])).unwrap(), Value::Int(v));
                }
            }
        }
    }
}

#[test]
fn witness_examples() {
    let e = ack();
    assert_eq!(e.find_witness_depth("ack", &ints(&[0, 5]), 64).unwrap(), DomainVerdict::InDomain(0));
    assert_eq!(e.find_witness_depth("ack", &ints(&[1, 0]), 64).unwrap(), DomainVerdict::InDomain(1));
    assert_eq!(e.find_witness_depth("ack", &ints(&[-1, 0]), 64).unwrap(), DomainVerdict::NotInDomainUpTo(64));
    assert_eq!(e.l_dom("ack", &ints(&[0, -7]), 64).unwrap(), DomainVerdict::InDomain(0));
}

#[test]
fn min_index_examples() {
    let e = ack();
    assert_eq!(e.min_index("ack", 7, &ints(&[0, 5])).unwrap(), 0);
    assert_eq!(e.min_index("ack", 7, &ints(&[1, 0])).unwrap(), 1);
    assert_eq!(e.min_index("ack", 7, &ints(&[-1, 0])).unwrap(), 0);
}

#[test]
fn measure_examples() {
    let e = ack();
    for y in -2..5 {
        assert_eq!(e.measure("ack", &ints(&[0, y]), 64).unwrap(), Some(0));
    }
    assert_eq!(e.measure("ack", &ints(&[1, 0]), 64).unwrap(), Some(1));
    assert_eq!(e.measure("ack", &ints(&[-1, 0]), 64).unwrap(), None);
    let m = |x, y| e.measure("ack", &ints(&[x, y]), 4096).unwrap().unwrap();
    // ack(2,1) = 5.
    assert_eq!(m(2, 2), 1 + m(2, 1).max(m(1, 5)));
}

#[test]
fn logical_function_examples() {
    let e = ack();
    assert_eq!(e.l_eval("ack", &ints(&[0, 5]), 64).unwrap(), Value::Int(6));
    assert_eq!(e.l_eval("ack", &ints(&[1, 1]), 64).unwrap(), Value::Int(3));
    assert_eq!(e.l_eval("ack", &ints(&[-1, 0]), 64).unwrap(), Value::Int(1));
}

#[test]
fn l_dom_finds_the_least_witness() {
    let e = ack();
    let v = e.l_dom("ack", &ints(&[3, 4]), 1 << 12).unwrap();
    let DomainVerdict::InDomain(w) = v else { panic!("{v}") };
    assert!(e.eval_indexed_dom("ack", w, &ints(&[3, 4])).unwrap());
    assert!(!e.eval_indexed_dom("ack", w - 1, &ints(&[3, 4])).unwrap());
}

#[test]
fn lookup_errors() {
    let e = ack();
    assert_eq!(e.eval_indexed_fn("nope", 1, &[]), Err(EvalError::UnknownFunction("nope".into())));
    assert!(matches!(e.eval_indexed_fn("ack", 1, &ints(&[1])), Err(EvalError::Arity { .. })));
}

#[test]
fn other_functions_resolve_by_scope() {
    let p = parse_program(
        "(def::ung half (x) (declare (xargs :default-value 0)) (if (= x 0) 0 (1+ (half (- x 2)))))
         (def::ung quarter (x) (half (half x)))",
    )
    .unwrap();
    let e = Engine::new(p).unwrap();
    let cfg = ExecConfig::new(exec::DEFAULT_BIG, 10_000, 256).unwrap();
    assert_eq!(exec::run(&e, "quarter", &ints(&[8]), &cfg).unwrap(), Value::Int(2));
    assert_eq!(e.l_eval("quarter", &ints(&[8]), 256).unwrap(), Value::Int(2));
    // Odd input: half is off-domain, its logical value is the default.
    assert_eq!(e.l_eval("quarter", &ints(&[7]), 256).unwrap(), Value::Int(0));
}

use crate::exec;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn determinism(d1 in 0u64..10, d2 in 0u64..10, x in -1i64..4, y in -1i64..5) {
        let e = ack();
        let a = ints(&[x, y]);
        if e.eval_indexed_dom("ack", d1, &a).unwrap() && e.eval_indexed_dom("ack", d2, &a).unwrap() {
            prop_assert_eq!(e.eval_indexed_fn("ack", d1, &a).unwrap(), e.eval_indexed_fn("ack", d2, &a).unwrap());
        }
    }

    #[test]
    fn stability(d1 in 0u64..10, k in 0u64..4, x in -1i64..4, y in -1i64..5) {
        let e = ack();
        let a = ints(&[x, y]);
        if e.eval_indexed_dom("ack", d1, &a).unwrap() {
            prop_assert!(e.eval_indexed_dom("ack", d1 + k, &a).unwrap());
        }
    }

    #[test]
    fn least_index(x in -1i64..4, y in -1i64..5, extra in 0u64..5) {
        let e = ack();
        let a = ints(&[x, y]);
        if let DomainVerdict::InDomain(w) = e.find_witness_depth("ack", &a, 512).unwrap() {
            if w > 0 {
                prop_assert!(!e.eval_indexed_dom("ack", w - 1, &a).unwrap());
            }
            prop_assert_eq!(e.min_index("ack", w + extra, &a).unwrap(), w);
        }
    }
}
