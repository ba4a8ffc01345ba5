use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::PlanError;
use crate::exec::{ExecConfig, DEFAULT_BIG, DEFAULT_DOMAIN_CAP};
use crate::value::Value;

/// Which points and indices a check run covers, and the bounds it runs under.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckPlan {
    /// One inclusive range per parameter; every grid point is checked.
    pub grid: Vec<RangeInclusive<i64>>,
    /// Extra `(point, d1, d2)` instances for the index-quantified checks,
    /// with indices drawn from [`CheckPlan::sample_depths`].
    pub random_samples: usize,
    pub seed: u64,
    /// Indices for the index-quantified checks. Points with a witness `w`
    /// are also checked at `w` and `w + 1`.
    pub depth_range: RangeInclusive<u64>,
    pub domain_cap: u64,
    pub safety_cap: u64,
    pub big: u64,
    /// Largest witness at which the ascending witness search is replayed.
    pub linear_oracle_limit: u64,
}

impl CheckPlan {
    pub const DEFAULT_SAMPLES: usize = 200;
    pub const DEFAULT_DEPTHS: RangeInclusive<u64> = 0..=12;
    /// Deep enough for the default grids; a diverging run stops after this
    /// many nested calls.
    pub const DEFAULT_SAFETY_CAP: u64 = 1_000_000;
    pub const DEFAULT_LINEAR_ORACLE_LIMIT: u64 = 128;

    /// `[-1, 6]` for every parameter, except `[-1, 3]` for the first of
    /// several.
    pub fn default_grid(arity: usize) -> Vec<RangeInclusive<i64>> {
        (0..arity).map(|i| if i == 0 && arity > 1 { -1..=3 } else { -1..=6 }).collect()
    }

    pub fn for_arity(arity: usize) -> CheckPlan {
        CheckPlan::with_grid(CheckPlan::default_grid(arity))
    }

    pub fn with_grid(grid: Vec<RangeInclusive<i64>>) -> CheckPlan {
        CheckPlan {
            grid,
            random_samples: CheckPlan::DEFAULT_SAMPLES,
            seed: 0,
            depth_range: CheckPlan::DEFAULT_DEPTHS,
            domain_cap: DEFAULT_DOMAIN_CAP,
            safety_cap: CheckPlan::DEFAULT_SAFETY_CAP,
            big: DEFAULT_BIG,
            linear_oracle_limit: CheckPlan::DEFAULT_LINEAR_ORACLE_LIMIT,
        }
    }

    pub fn validate(&self, function: &str, arity: usize) -> Result<(), PlanError> {
        if self.grid.len() != arity {
            return Err(PlanError::GridArity { function: function.to_string(), expected: arity, got: self.grid.len() });
        }
        if let Some(index) = self.grid.iter().position(|r| r.is_empty()) {
            return Err(PlanError::EmptyRange { index });
        }
        if self.depth_range.is_empty() {
            return Err(PlanError::EmptyDepthRange);
        }
        if self.big == 0 {
            return Err(PlanError::ZeroBig);
        }
        Ok(())
    }

    pub fn exec_config(&self) -> ExecConfig {
        ExecConfig { big: self.big, safety_cap: self.safety_cap, domain_cap: self.domain_cap }
    }

    /// Grid points in row-major order.
    pub fn points(&self) -> Vec<Vec<Value>> {
        let mut out: Vec<Vec<Value>> = vec![vec![]];
        for r in &self.grid {
            out = out
                .into_iter()
                .flat_map(|p| r.clone().map(move |v| [p.as_slice(), &[Value::Int(v)]].concat()))
                .collect();
        }
        out
    }

    /// Range of the random indices: the depth range stretched to four times
    /// its upper end.
    pub fn sample_depths(&self) -> RangeInclusive<u64> {
        let (lo, hi) = (*self.depth_range.start(), *self.depth_range.end());
        lo..=hi.saturating_mul(4).saturating_add(4).max(lo)
    }

    /// `random_samples` draws of (point number, d1, d2) for `points` points.
    pub fn index_samples(&self, points: usize) -> Vec<(usize, u64, u64)> {
        if points == 0 {
            return Vec::new();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let depths = self.sample_depths();
        (0..self.random_samples)
            .map(|_| (rng.gen_range(0..points), rng.gen_range(depths.clone()), rng.gen_range(depths.clone())))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ackermann_default_grid() {
        let plan = CheckPlan::for_arity(2);
        assert_eq!(plan.grid, vec![-1..=3, -1..=6]);
        let pts = plan.points();
        assert_eq!(pts.len(), 40);
        assert_eq!(pts[0], vec![Value::Int(-1), Value::Int(-1)]);
        assert_eq!(pts[1], vec![Value::Int(-1), Value::Int(0)]);
    }

    #[test]
    fn random_draws_depend_only_on_the_seed() {
        let mut plan = CheckPlan::for_arity(2);
        let a = plan.index_samples(40);
        assert_eq!(a.len(), CheckPlan::DEFAULT_SAMPLES);
        assert_eq!(a, plan.index_samples(40));
        assert!(a.iter().all(|&(p, d1, d2)| p < 40 && d1 <= 52 && d2 <= 52));
        plan.seed = 1;
        assert_ne!(a, plan.index_samples(40));
    }

    #[test]
    fn validation() {
        let mut plan = CheckPlan::for_arity(2);
        assert!(plan.validate("ack", 2).is_ok());
        assert_eq!(plan.validate("f", 1), Err(PlanError::GridArity { function: "f".into(), expected: 1, got: 2 }));
        #[allow(clippy::reversed_empty_ranges)]
        {
            plan.grid[1] = 3..=2;
        }
        assert_eq!(plan.validate("ack", 2), Err(PlanError::EmptyRange { index: 1 }));
    }
}
