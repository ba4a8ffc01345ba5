//! One unfolding of a source body, recording the recursive calls it makes.

use crate::error::EvalError;
use crate::interp::{prim, Engine};
use crate::surface::Expr;
use crate::value::Value;

/// Argument vectors of the recursive calls made by one unfolding of the
/// body of `fname` at `args`, innermost first. The body is evaluated at the
/// logical level: calls, including nested ones, take their `LF` values.
pub fn recursive_calls(
    engine: &Engine,
    fname: &str,
    args: &[Value],
    domain_cap: u64,
) -> Result<Vec<Vec<Value>>, EvalError> {
    let def = engine.function(fname).ok_or_else(|| EvalError::UnknownFunction(fname.to_string()))?;
    if def.params.len() != args.len() {
        return Err(EvalError::Arity { name: fname.to_string(), expected: def.params.len(), got: args.len() });
    }
    let mut w = Walk { engine, fname, cap: domain_cap, params: &def.params, args, calls: Vec::new() };
    w.eval(&def.body, "body")?;
    Ok(w.calls)
}

struct Walk<'a> {
    engine: &'a Engine,
    fname: &'a str,
    cap: u64,
    params: &'a [String],
    args: &'a [Value],
    calls: Vec<Vec<Value>>,
}

impl Walk<'_> {
    fn eval(&mut self, e: &Expr, path: &str) -> Result<Value, EvalError> {
        Ok(match e {
            Expr::IntLit(n) => Value::from_bigint(n.clone()),
            Expr::BoolLit(b) => Value::bool(*b),
            Expr::SymLit(s) => Value::sym(s.as_str()),
            Expr::NilLit => Value::Nil,
            Expr::Var(v) => {
                let i =
                    self.params.iter().rposition(|p| p == v).ok_or_else(|| EvalError::UnboundVariable(v.clone()))?;
                self.args[i].clone()
            }
            Expr::Prim(p, args) => {
                let vals = self.eval_args(args, path)?;
                prim::apply(*p, &vals).map_err(|message| EvalError::DynamicType {
                    function: self.fname.to_string(),
                    path: path.to_string(),
                    message,
                })?
            }
            Expr::If(c, t, f) => {
                if self.eval(c, &format!("{path}.test"))?.is_true() {
                    self.eval(t, &format!("{path}.then"))?
                } else {
                    self.eval(f, &format!("{path}.else"))?
                }
            }
            Expr::And(parts) => {
                let mut v = Value::True;
                for (i, p) in parts.iter().enumerate() {
                    v = self.eval(p, &format!("{path}.arg{}", i + 1))?;
                    if !v.is_true() {
                        break;
                    }
                }
                v
            }
            Expr::Or(parts) => {
                let mut v = Value::Nil;
                for (i, p) in parts.iter().enumerate() {
                    v = self.eval(p, &format!("{path}.arg{}", i + 1))?;
                    if v.is_true() {
                        break;
                    }
                }
                v
            }
            Expr::Call(name, args) => {
                let vals = self.eval_args(args, path)?;
                if name == self.fname {
                    self.calls.push(vals.clone());
                }
                self.engine.l_eval(name, &vals, self.cap)?
            }
        })
    }

    fn eval_args(&mut self, args: &[Expr], path: &str) -> Result<Vec<Value>, EvalError> {
        args.iter().enumerate().map(|(i, a)| self.eval(a, &format!("{path}.arg{}", i + 1))).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::parse_program;

    fn ints(v: &[i64]) -> Vec<Value> {
        v.iter().map(|&n| Value::Int(n)).collect()
    }

    #[test]
    fn ackermann_call_sites() {
        let e = Engine::new(
            parse_program(
                "(def::ung ack (x y) (if (= x 0) (1+ y) (if (= y 0) (ack (1- x) 1) (ack (1- x) (ack x (1- y))))))",
            )
            .unwrap(),
        )
        .unwrap();
        assert_eq!(recursive_calls(&e, "ack", &ints(&[0, 4]), 64).unwrap(), Vec::<Vec<Value>>::new());
        assert_eq!(recursive_calls(&e, "ack", &ints(&[2, 0]), 64).unwrap(), vec![ints(&[1, 1])]);
        // ack(2,1) = 5.
        assert_eq!(recursive_calls(&e, "ack", &ints(&[2, 2]), 64).unwrap(), vec![ints(&[2, 1]), ints(&[1, 5])]);
    }

    #[test]
    fn nested_self_application() {
        let e = Engine::new(parse_program("(def::ung g (x) (if (zp x) 0 (g (g (1- x)))))").unwrap()).unwrap();
        assert_eq!(recursive_calls(&e, "g", &ints(&[3]), 64).unwrap(), vec![ints(&[2]), ints(&[0])]);
    }
}
