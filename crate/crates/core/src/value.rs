//! Runtime values.
//!
//! Integers are arbitrary precision. Values that fit in an `i64` are kept
//! inline; everything else is promoted to a shared `BigInt`. The two
//! representations are normalized so that structural equality is exact.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};

/// A runtime value.
///
/// There is no separate boolean false: the canonical false is [`Value::Nil`]
/// and every other value is true in test position.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Value {
    Nil,
    /// The canonical true value, printed `t`.
    True,
    /// Integer that fits in a machine word.
    Int(i64),
    /// Integer outside the `i64` range. Never holds a value that fits in `Int`.
    Big(Arc<BigInt>),
    Sym(Arc<String>),
    Pair(Arc<(Value, Value)>),
}

impl Value {
    pub fn bool(b: bool) -> Value {
        if b {
            Value::True
        } else {
            Value::Nil
        }
    }

    #[inline]
    pub fn is_true(&self) -> bool {
        !matches!(self, Value::Nil)
    }

    pub fn sym(name: impl Into<String>) -> Value {
        Value::Sym(Arc::new(name.into()))
    }

    pub fn cons(car: Value, cdr: Value) -> Value {
        Value::Pair(Arc::new((car, cdr)))
    }

    pub fn from_bigint(n: BigInt) -> Value {
        match n.to_i64() {
            Some(small) => Value::Int(small),
            None => Value::Big(Arc::new(n)),
        }
    }

    pub fn is_integer(&self) -> bool {
        matches!(self, Value::Int(_) | Value::Big(_))
    }

    pub fn is_natural(&self) -> bool {
        match self {
            Value::Int(n) => *n >= 0,
            Value::Big(n) => !n.is_negative(),
            _ => false,
        }
    }

    pub fn to_bigint(&self) -> Option<BigInt> {
        match self {
            Value::Int(n) => Some(BigInt::from(*n)),
            Value::Big(n) => Some((**n).clone()),
            _ => None,
        }
    }

    /// The integer as a `u64`, if it is a natural that fits.
    pub fn to_u64(&self) -> Option<u64> {
        match self {
            Value::Int(n) => u64::try_from(*n).ok(),
            Value::Big(n) => n.to_u64(),
            _ => None,
        }
    }

    /// `nfix`: the value itself when it is a natural, otherwise zero.
    pub fn nfix(&self) -> Value {
        if self.is_natural() {
            self.clone()
        } else {
            Value::Int(0)
        }
    }

    /// `zp`: true iff the value is not a positive integer.
    #[inline]
    pub fn zp(&self) -> bool {
        match self {
            Value::Int(n) => *n <= 0,
            Value::Big(n) => !n.is_positive(),
            _ => true,
        }
    }

    /// Short human-readable name of the value's kind, for error messages.
    pub fn kind(&self) -> &'static str {
        match self {
            Value::Nil => "nil",
            Value::True => "t",
            Value::Int(_) | Value::Big(_) => "integer",
            Value::Sym(_) => "symbol",
            Value::Pair(_) => "pair",
        }
    }
}

impl From<i64> for Value {
    fn from(n: i64) -> Value {
        Value::Int(n)
    }
}

impl From<u64> for Value {
    fn from(n: u64) -> Value {
        match i64::try_from(n) {
            Ok(small) => Value::Int(small),
            Err(_) => Value::Big(Arc::new(BigInt::from(n))),
        }
    }
}

impl From<BigInt> for Value {
    fn from(n: BigInt) -> Value {
        Value::from_bigint(n)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Nil => f.write_str("nil"),
            Value::True => f.write_str("t"),
            Value::Int(n) => write!(f, "{n}"),
            Value::Big(n) => write!(f, "{n}"),
            Value::Sym(s) => write!(f, "{s}"),
            Value::Pair(_) => {
                f.write_str("(")?;
                let mut cur = self;
                let mut first = true;
                loop {
                    match cur {
                        Value::Pair(p) => {
                            if !first {
                                f.write_str(" ")?;
                            }
                            write!(f, "{}", p.0)?;
                            first = false;
                            cur = &p.1;
                        }
                        Value::Nil => break,
                        other => {
                            write!(f, " . {other}")?;
                            break;
                        }
                    }
                }
                f.write_str(")")
            }
        }
    }
}

/// Integer arithmetic with an inline fast path. `None` means an operand was
/// not an integer.
pub(crate) mod arith {
    use super::*;

    fn big(v: &Value) -> Option<BigInt> {
        v.to_bigint()
    }

    #[inline]
    pub fn add(a: &Value, b: &Value) -> Option<Value> {
        if let (Value::Int(x), Value::Int(y)) = (a, b) {
            if let Some(r) = x.checked_add(*y) {
                return Some(Value::Int(r));
            }
        }
        Some(Value::from_bigint(big(a)? + big(b)?))
    }

    #[inline]
    pub fn sub(a: &Value, b: &Value) -> Option<Value> {
        if let (Value::Int(x), Value::Int(y)) = (a, b) {
            if let Some(r) = x.checked_sub(*y) {
                return Some(Value::Int(r));
            }
        }
        Some(Value::from_bigint(big(a)? - big(b)?))
    }

    pub fn mul(a: &Value, b: &Value) -> Option<Value> {
        if let (Value::Int(x), Value::Int(y)) = (a, b) {
            if let Some(r) = x.checked_mul(*y) {
                return Some(Value::Int(r));
            }
        }
        Some(Value::from_bigint(big(a)? * big(b)?))
    }

    #[inline]
    pub fn inc(a: &Value) -> Option<Value> {
        if let Value::Int(x) = a {
            if let Some(r) = x.checked_add(1) {
                return Some(Value::Int(r));
            }
        }
        Some(Value::from_bigint(big(a)? + BigInt::one()))
    }

    #[inline]
    pub fn dec(a: &Value) -> Option<Value> {
        if let Value::Int(x) = a {
            if let Some(r) = x.checked_sub(1) {
                return Some(Value::Int(r));
            }
        }
        Some(Value::from_bigint(big(a)? - BigInt::one()))
    }

    pub fn neg(a: &Value) -> Option<Value> {
        sub(&Value::Int(0), a)
    }

    #[inline]
    pub fn cmp(a: &Value, b: &Value) -> Option<std::cmp::Ordering> {
        match (a, b) {
            (Value::Int(x), Value::Int(y)) => Some(x.cmp(y)),
            _ => Some(big(a)?.cmp(&big(b)?)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overflow_promotes_and_demotes() {
        let max = Value::Int(i64::MAX);
        let up = arith::inc(&max).unwrap();
        assert!(matches!(up, Value::Big(_)));
        let back = arith::dec(&up).unwrap();
        assert_eq!(back, max);
    }

    #[test]
    fn zp_and_nfix() {
        assert!(Value::Int(-3).zp());
        assert!(Value::Int(0).zp());
        assert!(!Value::Int(2).zp());
        assert!(Value::sym("a").zp());
        assert_eq!(Value::Int(-4).nfix(), Value::Int(0));
        assert_eq!(Value::Int(4).nfix(), Value::Int(4));
        assert_eq!(Value::Nil.nfix(), Value::Int(0));
    }

    #[test]
    fn display_lists() {
        let l = Value::cons(Value::Int(1), Value::cons(Value::Int(2), Value::Nil));
        assert_eq!(l.to_string(), "(1 2)");
        assert_eq!(Value::cons(Value::Int(1), Value::Int(2)).to_string(), "(1 . 2)");
    }
}
