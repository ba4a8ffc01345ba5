//! Text and JSON-lines output.

use std::io::{self, Write};

use serde_json::{json, Value as Json};

use stepwise_core::exec::Mode;
use stepwise_core::interp::EvalStats;
use stepwise_core::surface::{print_definition, print_flat};
use stepwise_core::transform::TransformResult;
use stepwise_core::value::Value;
use stepwise_core::verify::CheckReport;
use stepwise_core::EvalError;

/// One bench row: the mode and its value with counters, or the error.
pub type BenchRow = (Mode, Result<(Value, EvalStats), EvalError>);

pub struct Out {
    json: bool,
}

/// `println!` that exits quietly when stdout is closed.
macro_rules! say {
    ($($t:tt)*) => {
        if writeln!(io::stdout().lock(), $($t)*).is_err() {
            std::process::exit(0);
        }
    };
}

fn line(j: Json) {
    say!("{j}");
}

fn call_text(function: &str, args: &[Value]) -> String {
    let args: Vec<String> = args.iter().map(Value::to_string).collect();
    format!("({function}{}{})", if args.is_empty() { "" } else { " " }, args.join(" "))
}

impl Out {
    pub fn new(json: bool) -> Self {
        Out { json }
    }

    pub fn transform(&mut self, t: &TransformResult) {
        let defs = t.definitions();
        let eqs = t.derived.all();
        if self.json {
            for d in defs {
                line(json!({"kind": "definition", "function": t.source.name, "name": d.name, "text": print_flat(d)}));
            }
            for e in eqs {
                line(json!({"kind": "equation", "function": t.source.name, "name": e.name, "text": print_flat(e)}));
            }
            line(json!({
                "kind": "analysis",
                "function": t.source.name,
                "base_predicate": print_flat(&t.base_predicate),
                "default": print_flat(&t.default_expr),
            }));
            return;
        }
        say!(";; {}", t.source.name);
        say!(";; base predicate: {}", print_flat(&t.base_predicate));
        say!(";; default value: {}", print_flat(&t.default_expr));
        say!();
        for d in defs {
            say!("{}\n", print_definition(d));
        }
        for e in eqs {
            say!("{}\n", print_definition(e));
        }
    }

    pub fn value(&mut self, function: &str, args: &[Value], v: &Value) {
        if self.json {
            let args: Vec<String> = args.iter().map(Value::to_string).collect();
            line(json!({"kind": "value", "function": function, "args": args, "value": v.to_string()}));
        } else {
            say!("{v}");
        }
    }

    pub fn bench(&mut self, function: &str, args: &[Value], rows: &[BenchRow]) {
        if self.json {
            let args: Vec<String> = args.iter().map(Value::to_string).collect();
            for (mode, r) in rows {
                let mut j = json!({"kind": "bench", "function": function, "args": args, "mode": mode.name()});
                match r {
                    Ok((v, s)) => {
                        j["value"] = json!(v.to_string());
                        j["call_count"] = json!(s.call_count);
                        j["prim_count"] = json!(s.prim_count);
                        j["max_recursion_depth"] = json!(s.max_recursion_depth);
                        j["domain_checks"] = json!(s.domain_checks);
                    }
                    Err(e) => j["error"] = json!(e.to_string()),
                }
                line(j);
            }
            return;
        }
        say!("{}", call_text(function, args));
        say!("{:<8} {:>12} {:>12} {:>10} {:>8}  value", "mode", "calls", "prims", "depth", "checks");
        for (mode, r) in rows {
            match r {
                Ok((v, s)) => say!(
                    "{:<8} {:>12} {:>12} {:>10} {:>8}  {v}",
                    mode.name(),
                    s.call_count,
                    s.prim_count,
                    s.max_recursion_depth,
                    s.domain_checks
                ),
                Err(e) => say!("{:<8} error: {e}", mode.name()),
            }
        }
    }

    pub fn report(&mut self, report: &CheckReport) {
        for c in &report.checks {
            if self.json {
                let failures: Vec<Json> = c
                    .failures
                    .iter()
                    .map(|f| {
                        let assignment: serde_json::Map<String, Json> =
                            f.assignment.iter().map(|(k, v)| (k.clone(), json!(v.to_string()))).collect();
                        json!({"assignment": assignment, "lhs": f.lhs, "rhs": f.rhs})
                    })
                    .collect();
                line(json!({
                    "kind": "check",
                    "function": c.function,
                    "name": c.name,
                    "status": c.status().name(),
                    "instances": c.instances_checked,
                    "failures": failures,
                }));
            } else {
                say!("{:<6} {:<10} {:<32} {:>8} instances", c.status().name(), c.function, c.name, c.instances_checked);
                for f in c.failures.iter().take(5) {
                    say!("         {f}");
                }
                if c.failures.len() > 5 {
                    say!("         ... {} more", c.failures.len() - 5);
                }
            }
        }
        if !self.json {
            let failed = report.checks.iter().filter(|c| !c.failures.is_empty()).count();
            say!("{} checks, {failed} failed", report.checks.len());
        }
    }
}
