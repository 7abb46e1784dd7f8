//! Exhaustive enumeration of grid profiles.

use crate::domain::MultiBid;
use crate::error::{Error, Result};
use crate::money::{GridDomain, Money};

/// Default cap on mechanism evaluations per sweep.
pub const DEFAULT_SWEEP_BUDGET: u64 = 50_000_000;

/// Every grid type of every agent. A type is a valuation vector indexed by
/// personal allocation, entry 0 (the empty allocation) fixed at zero.
#[derive(Debug, Clone)]
pub struct TypeSpace {
    per_agent: Vec<Vec<Vec<Money>>>,
}

impl TypeSpace {
    /// Types for agents with `bundle_counts[i]` personal allocations each.
    pub fn new(bundle_counts: &[usize], grid: &GridDomain, budget: u64) -> Result<Self> {
        let values: Vec<Money> = grid.values().collect();
        let mut per_agent = Vec::with_capacity(bundle_counts.len());
        for &count in bundle_counts {
            let dims = count.saturating_sub(1) as u32;
            let size = (values.len() as u128).checked_pow(dims).unwrap_or(u128::MAX);
            if size > budget as u128 {
                return Err(Error::BudgetExceeded {
                    limit: budget,
                    required: size.min(u64::MAX as u128) as u64,
                    completed: vec![],
                });
            }
            let mut types = Vec::with_capacity(size as usize);
            for idx in MixedRadix::new(vec![values.len(); dims as usize]) {
                let mut t = Vec::with_capacity(count);
                t.push(Money::ZERO);
                t.extend(idx.iter().map(|&k| values[k]));
                types.push(t);
            }
            per_agent.push(types);
        }
        Ok(TypeSpace { per_agent })
    }

    /// Single-parameter agents.
    pub fn binary(n: usize, grid: &GridDomain) -> Self {
        TypeSpace::new(&vec![2; n], grid, u64::MAX).expect("binary type space always fits")
    }

    pub fn agents(&self) -> usize {
        self.per_agent.len()
    }

    pub fn types(&self, agent: usize) -> &[Vec<Money>] {
        &self.per_agent[agent]
    }

    pub fn radices(&self) -> Vec<usize> {
        self.per_agent.iter().map(Vec::len).collect()
    }

    pub fn profile_count(&self) -> u128 {
        self.per_agent.iter().map(|t| t.len() as u128).product()
    }

    /// Number of partial profiles `b_{-agent}`.
    pub fn others_count(&self, agent: usize) -> u128 {
        self.per_agent.iter().enumerate().filter(|(i, _)| *i != agent).map(|(_, t)| t.len() as u128).product()
    }

    pub fn profile(&self, idx: &[usize]) -> MultiBid {
        MultiBid { per_agent: idx.iter().enumerate().map(|(i, &k)| self.per_agent[i][k].clone()).collect() }
    }

    /// Every full profile, as type indices, in lexicographic order.
    pub fn all(&self) -> MixedRadix {
        MixedRadix::new(self.radices())
    }

    /// Every profile with `agent` fixed at type index `own`.
    pub fn with_fixed(&self, agent: usize, own: usize) -> MixedRadix {
        MixedRadix::with_fixed(self.radices(), agent, own)
    }
}

/// Odometer over a mixed-radix index vector; the last position varies fastest.
#[derive(Debug, Clone)]
pub struct MixedRadix {
    radices: Vec<usize>,
    fixed: Option<(usize, usize)>,
    current: Vec<usize>,
    done: bool,
}

impl MixedRadix {
    pub fn new(radices: Vec<usize>) -> Self {
        let done = radices.contains(&0);
        let current = vec![0; radices.len()];
        MixedRadix { radices, fixed: None, current, done }
    }

    pub fn with_fixed(radices: Vec<usize>, position: usize, value: usize) -> Self {
        let mut it = MixedRadix::new(radices);
        it.done |= value >= it.radices[position];
        it.current[position] = value;
        it.fixed = Some((position, value));
        it
    }
}

impl Iterator for MixedRadix {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        let mut pos = self.radices.len();
        loop {
            if pos == 0 {
                self.done = true;
                break;
            }
            pos -= 1;
            if self.fixed.is_some_and(|(p, _)| p == pos) {
                continue;
            }
            self.current[pos] += 1;
            if self.current[pos] < self.radices[pos] {
                break;
            }
            self.current[pos] = 0;
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odometer_counts() {
        assert_eq!(MixedRadix::new(vec![2, 3]).count(), 6);
        assert_eq!(MixedRadix::new(vec![]).count(), 1);
        assert_eq!(MixedRadix::new(vec![2, 0]).count(), 0);
        let fixed: Vec<_> = MixedRadix::with_fixed(vec![2, 3, 2], 1, 2).collect();
        assert_eq!(fixed.len(), 4);
        assert!(fixed.iter().all(|v| v[1] == 2));
        assert_eq!(fixed[0], vec![0, 2, 0]);
        assert_eq!(fixed[3], vec![1, 2, 1]);
    }

    #[test]
    fn type_space_sizes() {
        let g = GridDomain::parse("1", "0.5").unwrap();
        let ts = TypeSpace::new(&[3, 2], &g, 1000).unwrap();
        assert_eq!(ts.types(0).len(), 9);
        assert_eq!(ts.types(1).len(), 3);
        assert_eq!(ts.profile_count(), 27);
        assert_eq!(ts.others_count(0), 3);
        assert!(ts.types(0).iter().all(|t| t[0] == Money::ZERO && t.len() == 3));
        assert!(TypeSpace::new(&[30], &g, 1000).is_err());
    }
}
