//! Expression to bytecode.
//!
//! A frame's locals are its arguments, stored contiguously on the value
//! stack. Every op is one of a small set; the fused forms cover the test
//! and decrement patterns that dominate recursive definitions.

use num_bigint::BigInt;

use crate::error::EvalError;
use crate::surface::{Expr, Prim};
use crate::value::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Op {
    Local(u16),
    Const(u32),
    /// Pushes the configured exhaustion bound.
    Big,
    /// `(1- local)`.
    DecLocal(u16, u32),
    /// `(1+ local)`.
    IncLocal(u16, u32),
    Prim(Prim, u8, u32),
    Jump(u32),
    /// Pops; jumps when nil.
    JumpIfNil(u32),
    /// Falls through when `(zp local)`, otherwise jumps.
    JumpUnlessZpLocal(u16, u32),
    /// Falls through when `(= local const)`, otherwise jumps.
    JumpUnlessEqLocalConst(u16, u32, u32, u32),
    /// Jumps, keeping the top, when it is nil; otherwise pops.
    AndJump(u32),
    /// Jumps, keeping the top, when it is not nil; otherwise pops.
    OrJump(u32),
    Call(u32),
    Native(u32),
    Return,
}

/// A compiled definition.
#[derive(Clone, Debug)]
pub(crate) struct Code {
    pub name: String,
    pub arity: usize,
    pub ops: Vec<Op>,
    pub consts: Vec<Value>,
    /// Upper bound on operand-stack height above the arguments.
    pub max_stack: usize,
    /// Expression path of each primitive site, for error reports.
    pub sites: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Target {
    Code(u32),
    Native(u32),
}

pub(crate) trait Resolve {
    /// Target and arity for a called name.
    fn resolve(&self, name: &str) -> Option<(Target, usize)>;
}

/// Operand-stack slots needed to evaluate `e`, counting its result.
fn stack_need(e: &Expr) -> usize {
    let args = |args: &[Expr]| args.iter().enumerate().map(|(i, a)| i + stack_need(a)).max().unwrap_or(0).max(1);
    match e {
        Expr::IntLit(_) | Expr::BoolLit(_) | Expr::SymLit(_) | Expr::NilLit | Expr::Var(_) => 1,
        Expr::Prim(_, a) | Expr::Call(_, a) => args(a),
        Expr::If(t, a, b) => stack_need(t).max(stack_need(a)).max(stack_need(b)),
        Expr::And(parts) | Expr::Or(parts) => parts.iter().map(stack_need).max().unwrap_or(0).max(1),
    }
}

struct Compiler<'a> {
    params: &'a [String],
    resolver: &'a dyn Resolve,
    code: Code,
}

pub(crate) fn compile(name: &str, params: &[String], body: &Expr, resolver: &dyn Resolve) -> Result<Code, EvalError> {
    let mut c = Compiler {
        params,
        resolver,
        code: Code {
            name: name.to_string(),
            arity: params.len(),
            ops: Vec::new(),
            consts: Vec::new(),
            max_stack: stack_need(body),
            sites: Vec::new(),
        },
    };
    c.expr(body, "body")?;
    c.emit(Op::Return);
    thread_jumps(&mut c.code.ops);
    Ok(c.code)
}

/// Follows jump chains and turns jumps to `Return` into returns.
fn thread_jumps(ops: &mut [Op]) {
    for i in 0..ops.len() {
        if let Op::Jump(mut t) = ops[i] {
            while let Op::Jump(next) = ops[t as usize] {
                t = next;
            }
            ops[i] = if ops[t as usize] == Op::Return { Op::Return } else { Op::Jump(t) };
        }
    }
}

impl Compiler<'_> {
    fn emit(&mut self, op: Op) -> usize {
        self.code.ops.push(op);
        self.code.ops.len() - 1
    }

    fn here(&self) -> u32 {
        self.code.ops.len() as u32
    }

    fn patch(&mut self, at: usize, target: u32) {
        match &mut self.code.ops[at] {
            Op::Jump(t)
            | Op::JumpIfNil(t)
            | Op::AndJump(t)
            | Op::OrJump(t)
            | Op::JumpUnlessZpLocal(_, t)
            | Op::JumpUnlessEqLocalConst(_, _, _, t) => *t = target,
            other => unreachable!("patching {other:?}"),
        }
    }

    fn constant(&mut self, v: Value) -> u32 {
        if let Some(i) = self.code.consts.iter().position(|c| *c == v) {
            return i as u32;
        }
        self.code.consts.push(v);
        (self.code.consts.len() - 1) as u32
    }

    fn site(&mut self, path: &str) -> u32 {
        self.code.sites.push(path.to_string());
        (self.code.sites.len() - 1) as u32
    }

    fn local(&self, name: &str) -> Result<u16, EvalError> {
        // Later parameters shadow earlier ones of the same name.
        self.params
            .iter()
            .rposition(|p| p == name)
            .map(|i| i as u16)
            .ok_or_else(|| EvalError::UnboundVariable(name.to_string()))
    }

    fn local_var(&self, e: &Expr) -> Option<u16> {
        match e {
            Expr::Var(v) => self.local(v).ok(),
            _ => None,
        }
    }

    fn expr(&mut self, e: &Expr, path: &str) -> Result<(), EvalError> {
        match e {
            Expr::IntLit(n) => self.push_const(Value::from_bigint(n.clone())),
            Expr::BoolLit(b) => self.push_const(Value::bool(*b)),
            Expr::NilLit => self.push_const(Value::Nil),
            Expr::SymLit(s) => self.push_const(Value::sym(s.as_str())),
            Expr::Var(v) => {
                let slot = self.local(v)?;
                self.emit(Op::Local(slot));
            }
            Expr::Prim(p @ (Prim::Dec | Prim::Inc), args) if args.len() == 1 && self.local_var(&args[0]).is_some() => {
                let slot = self.local_var(&args[0]).unwrap();
                let site = self.site(path);
                self.emit(if *p == Prim::Dec { Op::DecLocal(slot, site) } else { Op::IncLocal(slot, site) });
            }
            Expr::Prim(p, args) => {
                self.args(args, path)?;
                let site = self.site(path);
                self.emit(Op::Prim(*p, args.len() as u8, site));
            }
            Expr::If(test, then, els) => self.if_(test, then, els, path)?,
            Expr::And(parts) => self.junction(parts, path, true)?,
            Expr::Or(parts) => self.junction(parts, path, false)?,
            Expr::Call(name, args) if name == crate::transform::BIG && args.is_empty() => {
                self.emit(Op::Big);
            }
            Expr::Call(name, args) => {
                let (target, arity) =
                    self.resolver.resolve(name).ok_or_else(|| EvalError::UnknownFunction(name.clone()))?;
                if arity != args.len() {
                    return Err(EvalError::Arity { name: name.clone(), expected: arity, got: args.len() });
                }
                self.args(args, path)?;
                self.emit(match target {
                    Target::Code(i) => Op::Call(i),
                    Target::Native(i) => Op::Native(i),
                });
            }
        }
        Ok(())
    }

    fn push_const(&mut self, v: Value) {
        let i = self.constant(v);
        self.emit(Op::Const(i));
    }

    fn args(&mut self, args: &[Expr], path: &str) -> Result<(), EvalError> {
        for (i, a) in args.iter().enumerate() {
            self.expr(a, &format!("{path}.arg{}", i + 1))?;
        }
        Ok(())
    }

    /// Emits the test and returns the jump to patch with the else target.
    fn test(&mut self, test: &Expr, path: &str) -> Result<usize, EvalError> {
        let tpath = format!("{path}.test");
        if let Expr::Prim(Prim::Zp, args) = test {
            if let Some(slot) = self.local_var(&args[0]) {
                return Ok(self.emit(Op::JumpUnlessZpLocal(slot, 0)));
            }
        }
        if let Expr::Prim(Prim::NumEq, args) = test {
            if let (Some(slot), Expr::IntLit(n)) = (self.local_var(&args[0]), &args[1]) {
                let c = self.constant(Value::from_bigint(BigInt::clone(n)));
                let site = self.site(&tpath);
                return Ok(self.emit(Op::JumpUnlessEqLocalConst(slot, c, site, 0)));
            }
        }
        self.expr(test, &tpath)?;
        Ok(self.emit(Op::JumpIfNil(0)))
    }

    fn if_(&mut self, test: &Expr, then: &Expr, els: &Expr, path: &str) -> Result<(), EvalError> {
        let to_else = self.test(test, path)?;
        self.expr(then, &format!("{path}.then"))?;
        let to_end = self.emit(Op::Jump(0));
        let else_at = self.here();
        self.patch(to_else, else_at);
        self.expr(els, &format!("{path}.else"))?;
        let end = self.here();
        self.patch(to_end, end);
        Ok(())
    }

    fn junction(&mut self, parts: &[Expr], path: &str, is_and: bool) -> Result<(), EvalError> {
        if parts.is_empty() {
            self.push_const(Value::bool(is_and));
            return Ok(());
        }
        let mut exits = Vec::new();
        for (i, p) in parts.iter().enumerate() {
            self.expr(p, &format!("{path}.arg{}", i + 1))?;
            if i + 1 < parts.len() {
                exits.push(self.emit(if is_and { Op::AndJump(0) } else { Op::OrJump(0) }));
            }
        }
        let end = self.here();
        for at in exits {
            self.patch(at, end);
        }
        Ok(())
    }
}
