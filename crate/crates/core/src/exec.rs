//! The executable layer: the fast path `mF`, the executable domain
//! `F-domain`, the deferred-check indexed executable `comp-F`, the exported
//! function and the wrapper, each with step counts.

use crate::error::EvalError;
use crate::interp::{Engine, EvalStats};
use crate::value::Value;

/// 2^61 - 1.
pub const DEFAULT_BIG: u64 = (1 << 61) - 1;
pub const DEFAULT_SAFETY_CAP: u64 = 10_000_000;
pub const DEFAULT_DOMAIN_CAP: u64 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExecConfig {
    /// Index handed to `comp-F` by the exported function.
    pub big: u64,
    /// Bound on recursion depth in every mode.
    pub safety_cap: u64,
    /// Cap of the witness search behind `LF-dom`.
    pub domain_cap: u64,
}

impl Default for ExecConfig {
    fn default() -> Self {
        ExecConfig { big: DEFAULT_BIG, safety_cap: DEFAULT_SAFETY_CAP, domain_cap: DEFAULT_DOMAIN_CAP }
    }
}

impl ExecConfig {
    pub fn new(big: u64, safety_cap: u64, domain_cap: u64) -> Result<Self, String> {
        if big < 1 {
            return Err("big must be at least 1".into());
        }
        Ok(ExecConfig { big, safety_cap, domain_cap })
    }

    /// No depth bound; for the index-bounded logical-level operations.
    pub(crate) fn unbounded(domain_cap: u64) -> Self {
        ExecConfig { big: DEFAULT_BIG, safety_cap: u64::MAX, domain_cap }
    }
}

/// `mF(args)`. Does not check the domain.
pub fn fast_eval(engine: &Engine, fname: &str, args: &[Value], cfg: &ExecConfig) -> Result<Value, EvalError> {
    let t = engine.lookup(fname, args.len())?;
    engine.machine(cfg).fast(t, args)
}

/// `F-domain(args)`.
pub fn exec_dom(engine: &Engine, fname: &str, args: &[Value], cfg: &ExecConfig) -> Result<bool, EvalError> {
    let t = engine.lookup(fname, args.len())?;
    engine.machine(cfg).exec_dom(t, args)
}

/// `comp-F(d, args)`.
pub fn comp_eval(engine: &Engine, fname: &str, d: u64, args: &[Value], cfg: &ExecConfig) -> Result<Value, EvalError> {
    let t = engine.lookup(fname, args.len())?;
    engine.machine(cfg).comp(t, d, args)
}

/// The exported function: `comp-F` at `big`, or the guarded fast path when
/// indexed execution is disabled.
pub fn run(engine: &Engine, fname: &str, args: &[Value], cfg: &ExecConfig) -> Result<Value, EvalError> {
    let t = engine.lookup(fname, args.len())?;
    engine.machine(cfg).exported(t, args)
}

/// Domain pass then fast path; the default value when the pass fails or
/// exceeds the safety cap.
pub fn run_wrapper(engine: &Engine, fname: &str, args: &[Value], cfg: &ExecConfig) -> Result<Value, EvalError> {
    let t = engine.lookup(fname, args.len())?;
    engine.machine(cfg).wrapper(t, args)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// `comp-F` at `big`.
    Indexed,
    Fast,
    Domain,
    Wrapper,
}

impl Mode {
    pub const ALL: [Mode; 4] = [Mode::Indexed, Mode::Fast, Mode::Domain, Mode::Wrapper];

    pub fn name(self) -> &'static str {
        match self {
            Mode::Indexed => "indexed",
            Mode::Fast => "fast",
            Mode::Domain => "domain",
            Mode::Wrapper => "wrapper",
        }
    }
}

/// Runs one evaluation in `mode` and returns its value and counters.
pub fn count_steps(
    mode: Mode,
    engine: &Engine,
    fname: &str,
    args: &[Value],
    cfg: &ExecConfig,
) -> Result<(Value, EvalStats), EvalError> {
    let t = engine.lookup(fname, args.len())?;
    let mut m = engine.machine(cfg);
    let v = match mode {
        Mode::Indexed => m.comp(t, cfg.big, args)?,
        Mode::Fast => m.fast(t, args)?,
        Mode::Domain => Value::bool(m.exec_dom(t, args)?),
        Mode::Wrapper => m.wrapper(t, args)?,
    };
    Ok((v, m.stats))
}
