//! Bids, allocations, outcomes and the welfare/cost/utility functions over them.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::money::{GridDomain, Money};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Setting {
    /// Agents value their allocation and pay the mechanism.
    Goods,
    /// Agents incur a cost for their allocation and are paid by the mechanism.
    Procurement,
}

/// Identifier of a personal allocation. `EMPTY` is the empty allocation; in
/// binary settings `WIN` is the only other one.
pub type Bundle = usize;
pub const EMPTY: Bundle = 0;
pub const WIN: Bundle = 1;

/// Single-parameter profile: one bid per agent.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BidProfile {
    pub bids: Vec<Money>,
}

impl BidProfile {
    pub fn new(bids: Vec<Money>) -> Self {
        BidProfile { bids }
    }

    pub fn from_ticks(ticks: &[i64]) -> Self {
        BidProfile { bids: ticks.iter().copied().map(Money).collect() }
    }

    pub fn len(&self) -> usize {
        self.bids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bids.is_empty()
    }

    pub fn check_grid(&self, grid: &GridDomain) -> Result<()> {
        for &b in &self.bids {
            if !grid.contains(b) {
                return Err(Error::OffGrid {
                    value: format!("{} ticks", b.0),
                    delta: grid.delta().to_string(),
                    h: grid.h_value().to_string(),
                });
            }
        }
        Ok(())
    }

    /// View as a multi-parameter profile over `{lose, win}`.
    pub fn to_multi(&self) -> MultiBid {
        MultiBid { per_agent: self.bids.iter().map(|&b| vec![Money::ZERO, b]).collect() }
    }
}

/// Multi-parameter profile. `per_agent[i][a]` is agent `i`'s bid for personal
/// allocation `a`; entry `EMPTY` is always zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiBid {
    pub per_agent: Vec<Vec<Money>>,
}

impl MultiBid {
    pub fn new(per_agent: Vec<Vec<Money>>) -> Result<Self> {
        for (i, row) in per_agent.iter().enumerate() {
            match row.first() {
                Some(m) if m.is_zero() => {}
                _ => {
                    return Err(Error::InvalidSpace(format!(
                        "agent {} must bid exactly 0 on the empty allocation",
                        i + 1
                    )))
                }
            }
        }
        Ok(MultiBid { per_agent })
    }

    pub fn len(&self) -> usize {
        self.per_agent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.per_agent.is_empty()
    }

    pub fn bid(&self, agent: usize, bundle: Bundle) -> Money {
        self.per_agent[agent][bundle]
    }

    /// Treat a profile over `{lose, win}` as a single-parameter profile.
    pub fn single_parameter(&self) -> Option<BidProfile> {
        self.per_agent
            .iter()
            .map(|row| (row.len() == 2).then(|| row[WIN]))
            .collect::<Option<Vec<_>>>()
            .map(BidProfile::new)
    }

    /// Sum of every reported tick; keys the rotating tie-break.
    pub fn tick_sum(&self) -> i64 {
        self.per_agent.iter().flatten().map(|m| m.0).sum()
    }
}

/// A global allocation: personal allocation per agent.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Allocation {
    pub assignment: Vec<Bundle>,
}

impl Allocation {
    pub fn new(assignment: Vec<Bundle>) -> Self {
        Allocation { assignment }
    }

    pub fn empty(n: usize) -> Self {
        Allocation { assignment: vec![EMPTY; n] }
    }

    /// Binary allocation from a set of winners (0-based agents).
    pub fn from_winners(n: usize, winners: impl IntoIterator<Item = usize>) -> Self {
        let mut a = Allocation::empty(n);
        for w in winners {
            a.assignment[w] = WIN;
        }
        a
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn bundle(&self, agent: usize) -> Bundle {
        self.assignment[agent]
    }

    pub fn wins(&self, agent: usize) -> bool {
        self.assignment[agent] != EMPTY
    }
}

/// mu(A): agents receiving a non-empty allocation.
pub fn winners(a: &Allocation) -> BTreeSet<usize> {
    a.assignment.iter().enumerate().filter(|(_, &b)| b != EMPTY).map(|(i, _)| i).collect()
}

/// Anything that assigns a value to (agent, personal allocation).
pub trait Bids {
    fn agents(&self) -> usize;
    fn value(&self, agent: usize, bundle: Bundle) -> Result<Money>;
}

impl Bids for BidProfile {
    fn agents(&self) -> usize {
        self.bids.len()
    }

    fn value(&self, agent: usize, bundle: Bundle) -> Result<Money> {
        match bundle {
            EMPTY => Ok(Money::ZERO),
            WIN => Ok(self.bids[agent]),
            _ => Err(Error::DimensionMismatch { expected: 2, actual: bundle + 1 }),
        }
    }
}

impl Bids for MultiBid {
    fn agents(&self) -> usize {
        self.per_agent.len()
    }

    fn value(&self, agent: usize, bundle: Bundle) -> Result<Money> {
        let row = &self.per_agent[agent];
        row.get(bundle).copied().ok_or(Error::DimensionMismatch { expected: row.len(), actual: bundle + 1 })
    }
}

fn total<B: Bids + ?Sized>(a: &Allocation, b: &B) -> Result<Money> {
    if a.len() != b.agents() {
        return Err(Error::DimensionMismatch { expected: a.len(), actual: b.agents() });
    }
    a.assignment.iter().enumerate().map(|(i, &bundle)| b.value(i, bundle)).sum()
}

/// SW(A, b) = sum over agents of b_i(A_i).
pub fn social_welfare<B: Bids + ?Sized>(a: &Allocation, b: &B) -> Result<Money> {
    total(a, b)
}

/// SC(A, c) = sum over agents of c_i(A_i).
pub fn social_cost<B: Bids + ?Sized>(a: &Allocation, c: &B) -> Result<Money> {
    total(a, c)
}

/// Result of running a mechanism on one profile.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Outcome {
    pub allocation: Allocation,
    pub payments: Vec<Money>,
    pub setting: Setting,
    /// Agent holding the golden ticket on this profile: the rebated winner in
    /// goods mode, the winner paid `h` in procurement mode.
    pub golden: Option<usize>,
    /// Agent excluded by a designated wooden spoon on this profile.
    pub spoon: Option<usize>,
}

impl Outcome {
    pub fn new(allocation: Allocation, payments: Vec<Money>, setting: Setting) -> Self {
        Outcome { allocation, payments, setting, golden: None, spoon: None }
    }

    pub fn revenue(&self) -> Money {
        self.payments.iter().sum()
    }

    pub fn winners(&self) -> BTreeSet<usize> {
        winners(&self.allocation)
    }
}

/// Utility of `agent` on `outcome` when her true type is `true_type`
/// (indexed by personal allocation, entry `EMPTY` is zero).
pub fn utility(agent: usize, outcome: &Outcome, true_type: &[Money]) -> Money {
    let own = true_type[outcome.allocation.bundle(agent)];
    let pay = outcome.payments[agent];
    match outcome.setting {
        Setting::Goods => own - pay,
        Setting::Procurement => pay - own,
    }
}

/// Single-parameter shorthand for [`utility`].
pub fn utility_single(agent: usize, outcome: &Outcome, true_type: Money) -> Money {
    utility(agent, outcome, &[Money::ZERO, true_type])
}
