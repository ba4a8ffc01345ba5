//! The evaluation loop.
//!
//! Frames live on the heap, so recursion depth is limited only by the
//! configured safety cap. Natives (the logical-level functions, guarded
//! exports and wrappers) re-enter the loop on the same stacks.

use std::slice;

use super::compile::{Code, Op};
use super::{prim, DomainVerdict, Engine, EvalStats, Native};
use crate::error::EvalError;
use crate::exec::ExecConfig;
use crate::surface::Prim;
use crate::value::Value;

/// Code id of the caller-supplied entry code.
pub(crate) const ENTRY: u32 = u32::MAX;

#[derive(Clone, Copy)]
struct Frame<'e> {
    code: &'e Code,
    pc: usize,
    base: usize,
}

pub(crate) struct Machine<'e> {
    engine: &'e Engine,
    entry: Option<&'e Code>,
    cfg: ExecConfig,
    stack: Vec<Value>,
    frames: Vec<Frame<'e>>,
    depth: u64,
    pub stats: EvalStats,
}

fn type_error(code: &Code, site: u32, message: String) -> EvalError {
    EvalError::DynamicType { function: code.name.clone(), path: code.sites[site as usize].clone(), message }
}

impl<'e> Machine<'e> {
    pub fn new(engine: &'e Engine, entry: Option<&'e Code>, cfg: &ExecConfig) -> Self {
        Machine {
            engine,
            entry,
            cfg: *cfg,
            stack: Vec::new(),
            frames: Vec::new(),
            depth: 0,
            stats: EvalStats::default(),
        }
    }

    fn code(&self, id: u32) -> &'e Code {
        if id == ENTRY {
            self.entry.expect("entry code")
        } else {
            &self.engine.codes[id as usize]
        }
    }

    fn enter(&mut self) -> Result<(), EvalError> {
        self.stats.call_count += 1;
        self.depth += 1;
        if self.depth > self.cfg.safety_cap {
            return Err(EvalError::RecursionSafetyCap { cap: self.cfg.safety_cap });
        }
        self.stats.max_recursion_depth = self.stats.max_recursion_depth.max(self.depth);
        Ok(())
    }

    /// Runs compiled code `id` on `args`. On error the machine is restored
    /// to its state before the call.
    pub fn run(&mut self, id: u32, args: &[Value]) -> Result<Value, EvalError> {
        let (frames, stack, depth) = (self.frames.len(), self.stack.len(), self.depth);
        let r = self.run_inner(id, args, frames);
        if r.is_err() {
            self.frames.truncate(frames);
            self.stack.truncate(stack);
            self.depth = depth;
        }
        r
    }

    fn run_inner(&mut self, id: u32, args: &[Value], floor: usize) -> Result<Value, EvalError> {
        self.enter()?;
        let mut code = self.code(id);
        debug_assert_eq!(code.arity, args.len());
        let mut pc = 0usize;
        let mut base = self.stack.len();
        self.stack.extend_from_slice(args);
        self.stack.reserve(code.max_stack);

        // The hot state lives in locals. Values in `buf[len..sp]` are owned
        // by the loop and handed back to the vector by `sync!`.
        let mut buf = self.stack.as_mut_ptr();
        let mut cap = self.stack.capacity();
        let mut sp = self.stack.len();
        let mut prims = 0u64;
        let mut calls = 0u64;
        let mut depth = self.depth;
        let mut max_depth = self.stats.max_recursion_depth;
        let big = Value::from(self.cfg.big);

        macro_rules! sync {
            () => {{
                // SAFETY: `buf[..sp]` are initialized values.
                unsafe { self.stack.set_len(sp) };
                self.stats.prim_count += prims;
                self.stats.call_count += calls;
                #[allow(unused_assignments)]
                {
                    prims = 0;
                    calls = 0;
                }
                self.depth = depth;
                self.stats.max_recursion_depth = max_depth;
            }};
        }
        macro_rules! resync {
            () => {{
                buf = self.stack.as_mut_ptr();
                cap = self.stack.capacity();
                sp = self.stack.len();
                depth = self.depth;
                max_depth = self.stats.max_recursion_depth;
            }};
        }
        macro_rules! bail {
            ($e:expr) => {{
                let e = $e;
                sync!();
                return Err(e);
            }};
        }
        // SAFETY (for the helpers below): `sp` never exceeds the space
        // reserved for the current frame, slots below `sp` are initialized,
        // and compiled code is stack-balanced.
        macro_rules! local {
            ($i:expr) => {
                unsafe { &*buf.add(base + $i as usize) }
            };
        }
        macro_rules! push {
            ($v:expr) => {{
                let v = $v;
                debug_assert!(sp < cap);
                unsafe { std::ptr::write(buf.add(sp), v) };
                sp += 1;
            }};
        }
        macro_rules! pop {
            () => {{
                sp -= 1;
                unsafe { std::ptr::read(buf.add(sp)) }
            }};
        }
        macro_rules! drop_to {
            ($len:expr) => {{
                let len = $len;
                while sp > len {
                    match pop!() {
                        Value::Int(_) | Value::Nil | Value::True => {}
                        other => drop(other),
                    }
                }
            }};
        }

        loop {
            debug_assert!(pc < code.ops.len());
            // SAFETY: every op sequence ends in `Return` and jump targets are
            // patched to positions inside the sequence.
            let op = unsafe { *code.ops.get_unchecked(pc) };
            pc += 1;
            match op {
                Op::Local(i) => {
                    let v = match local!(i) {
                        Value::Int(n) => Value::Int(*n),
                        other => other.clone(),
                    };
                    push!(v);
                }
                Op::Const(i) => push!(code.consts[i as usize].clone()),
                Op::Big => push!(big.clone()),
                Op::DecLocal(i, site) => {
                    prims += 1;
                    let r = match local!(i) {
                        Value::Int(n) if *n > i64::MIN => Value::Int(*n - 1),
                        v => match prim::apply(Prim::Dec, slice::from_ref(v)) {
                            Ok(r) => r,
                            Err(m) => bail!(type_error(code, site, m)),
                        },
                    };
                    push!(r);
                }
                Op::IncLocal(i, site) => {
                    prims += 1;
                    let r = match local!(i) {
                        Value::Int(n) if *n < i64::MAX => Value::Int(*n + 1),
                        v => match prim::apply(Prim::Inc, slice::from_ref(v)) {
                            Ok(r) => r,
                            Err(m) => bail!(type_error(code, site, m)),
                        },
                    };
                    push!(r);
                }
                Op::Prim(p, argc, site) => {
                    prims += 1;
                    let at = sp - argc as usize;
                    // SAFETY: the top `argc` slots are initialized.
                    let operands = unsafe { slice::from_raw_parts(buf.add(at), argc as usize) };
                    match prim::apply(p, operands) {
                        Ok(r) => {
                            drop_to!(at);
                            push!(r);
                        }
                        Err(m) => bail!(type_error(code, site, m)),
                    }
                }
                Op::Jump(t) => pc = t as usize,
                Op::JumpIfNil(t) => {
                    if !pop!().is_true() {
                        pc = t as usize;
                    }
                }
                Op::JumpUnlessZpLocal(i, t) => {
                    prims += 1;
                    let zp = match local!(i) {
                        Value::Int(n) => *n <= 0,
                        other => other.zp(),
                    };
                    if !zp {
                        pc = t as usize;
                    }
                }
                Op::JumpUnlessEqLocalConst(i, c, site, t) => {
                    prims += 1;
                    let (v, k) = (local!(i), &code.consts[c as usize]);
                    let eq = match (v, k) {
                        (Value::Int(a), Value::Int(b)) => a == b,
                        _ => match prim::apply(Prim::NumEq, &[v.clone(), k.clone()]) {
                            Ok(r) => r.is_true(),
                            Err(m) => bail!(type_error(code, site, m)),
                        },
                    };
                    if !eq {
                        pc = t as usize;
                    }
                }
                Op::AndJump(t) => {
                    if local!(sp - 1 - base).is_true() {
                        drop(pop!());
                    } else {
                        pc = t as usize;
                    }
                }
                Op::OrJump(t) => {
                    if local!(sp - 1 - base).is_true() {
                        pc = t as usize;
                    } else {
                        drop(pop!());
                    }
                }
                Op::Call(target) => {
                    calls += 1;
                    depth += 1;
                    if depth > self.cfg.safety_cap {
                        bail!(EvalError::RecursionSafetyCap { cap: self.cfg.safety_cap });
                    }
                    max_depth = max_depth.max(depth);
                    self.frames.push(Frame { code, pc, base });
                    debug_assert!((target as usize) < self.engine.codes.len());
                    // SAFETY: call targets are ids of compiled engine code.
                    code = unsafe { self.engine.codes.get_unchecked(target as usize) };
                    base = sp - code.arity;
                    pc = 0;
                    if cap - sp < code.max_stack {
                        sync!();
                        self.stack.reserve(code.max_stack);
                        resync!();
                    }
                }
                Op::Native(n) => {
                    sync!();
                    let native = self.engine.natives[n as usize];
                    let at = self.stack.len() - self.engine.native_arity(native);
                    let args = self.stack.split_off(at);
                    self.stats.call_count += 1;
                    let v = self.native(native, &args);
                    drop(args);
                    self.stack.push(v?);
                    resync!();
                }
                Op::Return => {
                    let v = pop!();
                    drop_to!(base);
                    depth -= 1;
                    if self.frames.len() == floor {
                        sync!();
                        return Ok(v);
                    }
                    let f = self.frames.pop().expect("caller frame");
                    code = f.code;
                    pc = f.pc;
                    base = f.base;
                    push!(v);
                }
            }
        }
    }

    fn with_index(d: u64, args: &[Value]) -> Vec<Value> {
        let mut v = Vec::with_capacity(args.len() + 1);
        v.push(Value::from(d));
        v.extend_from_slice(args);
        v
    }

    pub fn indexed_fn(&mut self, t: usize, d: u64, args: &[Value]) -> Result<Value, EvalError> {
        self.run(self.engine.fns[t].indexed_fn, &Self::with_index(d, args))
    }

    pub fn indexed_dom(&mut self, t: usize, d: u64, args: &[Value]) -> Result<bool, EvalError> {
        Ok(self.run(self.engine.fns[t].indexed_dom, &Self::with_index(d, args))?.is_true())
    }

    /// Least `w <= cap` with `iDom(w, args)`.
    ///
    /// Probes doubling indices, then bisects the last gap. Stability makes
    /// the domain monotone in the index, so this finds the same least
    /// witness as [`Machine::witness_linear`].
    pub fn witness(&mut self, t: usize, args: &[Value], cap: u64) -> Result<DomainVerdict, EvalError> {
        if let Some(v) = self.engine.memo.as_ref().and_then(|m| m.witness(t, cap, args)) {
            return Ok(v);
        }
        let v = self.gallop(t, args, cap)?;
        if let Some(m) = &self.engine.memo {
            m.put_witness(t, cap, args, v);
        }
        Ok(v)
    }

    /// Height of the fast path's call tree, when it finishes within `cap`.
    /// The least witness equals it for definitions whose only calls are
    /// to themselves.
    fn height_hint(&mut self, t: usize, args: &[Value], cap: u64) -> Option<u64> {
        let fast = self.engine.fns[t].fast?;
        let cfg = ExecConfig { safety_cap: cap.saturating_add(1), ..self.cfg };
        let mut sub = Machine::new(self.engine, None, &cfg);
        let r = sub.run(fast, args);
        self.stats.call_count += sub.stats.call_count;
        self.stats.prim_count += sub.stats.prim_count;
        r.ok()?;
        Some(sub.stats.max_recursion_depth.saturating_sub(1))
    }

    fn gallop(&mut self, t: usize, args: &[Value], cap: u64) -> Result<DomainVerdict, EvalError> {
        if let Some(h) = self.height_hint(t, args, cap) {
            // Confirmed hints are exact: iDom(h) and not iDom(h - 1).
            if self.indexed_dom(t, h, args)? && (h == 0 || !self.indexed_dom(t, h - 1, args)?) {
                return Ok(DomainVerdict::InDomain(h));
            }
        }
        if self.indexed_dom(t, 0, args)? {
            return Ok(DomainVerdict::InDomain(0));
        }
        // Invariant: not iDom(lo); iDom(hi) once found.
        let mut lo = 0;
        let mut hi = 1.min(cap);
        loop {
            if hi == lo {
                return Ok(DomainVerdict::NotInDomainUpTo(cap));
            }
            if self.indexed_dom(t, hi, args)? {
                break;
            }
            lo = hi;
            hi = hi.saturating_mul(2).min(cap);
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.indexed_dom(t, mid, args)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(DomainVerdict::InDomain(hi))
    }

    /// Least `w <= cap` with `iDom(w, args)`, by ascending search.
    pub fn witness_linear(&mut self, t: usize, args: &[Value], cap: u64) -> Result<DomainVerdict, EvalError> {
        for w in 0..=cap {
            if self.indexed_dom(t, w, args)? {
                return Ok(DomainVerdict::InDomain(w));
            }
        }
        Ok(DomainVerdict::NotInDomainUpTo(cap))
    }

    /// The least-index recursion, unrolled into a loop.
    pub fn min_index(&mut self, t: usize, d: u64, args: &[Value]) -> Result<u64, EvalError> {
        let mut d = d;
        loop {
            if d == 0 || !self.indexed_dom(t, d, args)? {
                return Ok(0);
            }
            if !self.indexed_dom(t, d - 1, args)? {
                return Ok(d);
            }
            d -= 1;
        }
    }

    pub fn measure(&mut self, t: usize, args: &[Value]) -> Result<u64, EvalError> {
        let cap = self.cfg.domain_cap;
        if let Some(m) = self.engine.memo.as_ref().and_then(|m| m.measure(t, cap, args)) {
            return Ok(m);
        }
        // The search returns the least witness, which is min-index(w, args);
        // the measure-oracles check compares the two independently.
        let m = match self.witness(t, args, cap)? {
            DomainVerdict::InDomain(w) => w,
            DomainVerdict::NotInDomainUpTo(_) => 0,
        };
        if let Some(memo) = &self.engine.memo {
            memo.put_measure(t, cap, args, m);
        }
        Ok(m)
    }

    pub fn logical_fn(&mut self, t: usize, args: &[Value]) -> Result<Value, EvalError> {
        let m = self.measure(t, args)?;
        self.indexed_fn(t, m, args)
    }

    pub fn default_value(&mut self, t: usize, args: &[Value]) -> Result<Value, EvalError> {
        self.run(self.engine.fns[t].default, args)
    }

    fn executable(&self, t: usize) -> Result<(u32, u32), EvalError> {
        let f = &self.engine.fns[t];
        match (f.fast, f.exec_domain) {
            (Some(fast), Some(dom)) => Ok((fast, dom)),
            _ => Err(EvalError::NotExecutable(self.engine.transforms[t].source.name.clone())),
        }
    }

    pub fn fast(&mut self, t: usize, args: &[Value]) -> Result<Value, EvalError> {
        let (fast, _) = self.executable(t)?;
        self.run(fast, args)
    }

    pub fn exec_dom(&mut self, t: usize, args: &[Value]) -> Result<bool, EvalError> {
        let (_, dom) = self.executable(t)?;
        Ok(self.run(dom, args)?.is_true())
    }

    pub fn comp(&mut self, t: usize, d: u64, args: &[Value]) -> Result<Value, EvalError> {
        self.executable(t)?;
        let comp = self.engine.fns[t]
            .comp
            .ok_or_else(|| EvalError::IndexedExecutionDisabled(self.engine.transforms[t].source.name.clone()))?;
        self.run(comp, &Self::with_index(d, args))
    }

    /// The exported entry point.
    pub fn exported(&mut self, t: usize, args: &[Value]) -> Result<Value, EvalError> {
        if let Some(id) = self.engine.fns[t].exported {
            return self.run(id, args);
        }
        // Without indexed execution the export is the guarded fast path.
        if self.exec_dom(t, args)? {
            self.fast(t, args)
        } else {
            Err(EvalError::GuardViolation(self.engine.transforms[t].source.name.clone()))
        }
    }

    /// Domain pass, then the fast path; the default when the pass fails.
    pub fn wrapper(&mut self, t: usize, args: &[Value]) -> Result<Value, EvalError> {
        self.executable(t)?;
        match self.exec_dom(t, args) {
            Ok(true) => self.fast(t, args),
            Ok(false) | Err(_) => self.default_value(t, args),
        }
    }

    fn native(&mut self, native: Native, args: &[Value]) -> Result<Value, EvalError> {
        match native {
            Native::LogicalDom(t) => {
                self.stats.domain_checks += 1;
                let v = self.witness(t, args, self.cfg.domain_cap)?;
                Ok(Value::bool(matches!(v, DomainVerdict::InDomain(_))))
            }
            Native::LogicalFn(t) => self.logical_fn(t, args),
            Native::Measure(t) => Ok(Value::from(self.measure(t, args)?)),
            Native::Exported(t) => self.exported(t, args),
            Native::Wrapper(t) => self.wrapper(t, args),
        }
    }
}
