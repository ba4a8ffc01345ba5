//! Primitive operations.
//!
//! Arithmetic and comparisons are strict: a non-integer operand is a
//! dynamic type error. `zp`, `nfix`, `not`, the type recognizers, `cons`
//! and `equal` are total.

use std::cmp::Ordering;

use crate::surface::Prim;
use crate::value::{arith, Value};

fn int_operand(p: Prim, v: Option<Value>) -> Result<Value, String> {
    v.ok_or_else(|| format!("`{}` expects integer arguments", p.name()))
}

fn expect_int(p: Prim, v: &Value) -> Result<&Value, String> {
    if v.is_integer() {
        Ok(v)
    } else {
        Err(format!("`{}` expects an integer, got {} `{v}`", p.name(), v.kind()))
    }
}

fn compare(p: Prim, a: &Value, b: &Value) -> Result<Ordering, String> {
    Ok(arith::cmp(expect_int(p, a)?, expect_int(p, b)?).expect("operands are integers"))
}

/// Applies `p` to `args`. Arity has been checked at compile time.
pub fn apply(p: Prim, args: &[Value]) -> Result<Value, String> {
    match p {
        Prim::Add => {
            let mut acc = Value::Int(0);
            for a in args {
                acc = int_operand(p, arith::add(&acc, expect_int(p, a)?))?;
            }
            Ok(acc)
        }
        Prim::Mul => {
            let mut acc = Value::Int(1);
            for a in args {
                acc = int_operand(p, arith::mul(&acc, expect_int(p, a)?))?;
            }
            Ok(acc)
        }
        Prim::Sub => match args {
            [a] => int_operand(p, arith::neg(expect_int(p, a)?)),
            [a, b] => int_operand(p, arith::sub(expect_int(p, a)?, expect_int(p, b)?)),
            _ => Err(format!("`-` takes 1 or 2 arguments, got {}", args.len())),
        },
        Prim::Inc => int_operand(p, arith::inc(expect_int(p, &args[0])?)),
        Prim::Dec => int_operand(p, arith::dec(expect_int(p, &args[0])?)),
        Prim::NumEq => Ok(Value::bool(compare(p, &args[0], &args[1])? == Ordering::Equal)),
        Prim::Lt => Ok(Value::bool(compare(p, &args[0], &args[1])? == Ordering::Less)),
        Prim::Le => Ok(Value::bool(compare(p, &args[0], &args[1])? != Ordering::Greater)),
        Prim::Max => {
            let (a, b) = (&args[0], &args[1]);
            Ok(if compare(p, a, b)? == Ordering::Less { b.clone() } else { a.clone() })
        }
        Prim::Zp => Ok(Value::bool(args[0].zp())),
        Prim::Nfix => Ok(args[0].nfix()),
        Prim::Not => Ok(Value::bool(!args[0].is_true())),
        Prim::Consp => Ok(Value::bool(matches!(args[0], Value::Pair(_)))),
        Prim::Car | Prim::Cdr => match &args[0] {
            Value::Pair(cell) => Ok(if p == Prim::Car { cell.0.clone() } else { cell.1.clone() }),
            other => Err(format!("`{}` of non-pair {} `{other}`", p.name(), other.kind())),
        },
        Prim::Cons => Ok(Value::cons(args[0].clone(), args[1].clone())),
        Prim::Equal => Ok(Value::bool(args[0] == args[1])),
        Prim::Natp => Ok(Value::bool(args[0].is_natural())),
        Prim::Integerp => Ok(Value::bool(args[0].is_integer())),
    }
}
