//! Revenue and frugality benchmarks and the per-profile ratio sweeps built on them.

use std::fmt;

use rayon::prelude::*;

use crate::allocators::{min_cost_allocation, optimal_allocation};
use crate::domain::{social_welfare, BidProfile, MultiBid, Outcome};
use crate::error::{Error, Result};
use crate::feasible::{GeneralSpace, SetSystem, WinnerSet};
use crate::mechanisms::Mechanism;
use crate::money::{ratio, Money, Rational};
use crate::sweep::TypeSpace;

/// W*: the full surplus of a welfare-optimal set.
pub fn optimal_revenue_benchmark(space: &SetSystem, b: &BidProfile) -> Result<Money> {
    let set = optimal_allocation(space, b)?;
    Ok(set.members().map(|i| b.bids[i]).sum())
}

/// W* over every allocation of a general space, ignoring the range.
pub fn optimal_welfare_general(space: &GeneralSpace, b: &MultiBid) -> Result<Money> {
    let mut best = Money::ZERO;
    for a in space.allocations() {
        best = best.max(social_welfare(a, b)?);
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SecondBest {
    /// Smallest cost strictly above the optimum, or the optimum when every set ties.
    pub cost: Money,
    pub optimal: Money,
    pub degenerate: bool,
}

/// Cheapest feasible set whose cost strictly exceeds the optimal cost C*.
pub fn second_best_cost(space: &SetSystem, c: &BidProfile) -> Result<SecondBest> {
    if c.len() != space.n() {
        return Err(Error::DimensionMismatch { expected: space.n(), actual: c.len() });
    }
    if space.family().is_empty() {
        return Err(Error::Infeasible("empty feasible family".into()));
    }
    let cost = |s: &WinnerSet| -> Money { s.members().map(|i| c.bids[i]).sum() };
    let optimal = cost(&min_cost_allocation(space, c, None)?);
    let above = space.family().iter().map(cost).filter(|&x| x > optimal).min();
    Ok(match above {
        Some(cost) => SecondBest { cost, optimal, degenerate: false },
        None => SecondBest { cost: optimal, optimal, degenerate: true },
    })
}

/// Why a profile is left out of the aggregate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum RowStatus {
    Included,
    ZeroBenchmark,
    DesignatedSpoon,
    Degenerate,
}

impl fmt::Display for RowStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RowStatus::Included => "included",
            RowStatus::ZeroBenchmark => "zero_benchmark",
            RowStatus::DesignatedSpoon => "designated_spoon",
            RowStatus::Degenerate => "degenerate",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioRow {
    pub profile: MultiBid,
    /// Revenue (goods) or total payment (procurement).
    pub value: Money,
    pub benchmark: Money,
    /// `None` unless the row is included.
    pub ratio: Option<Rational>,
    pub status: RowStatus,
    pub golden: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Competitive ratio: the aggregate is a minimum and must reach the bound.
    AtLeast,
    /// Frugality ratio: the aggregate is a maximum and must stay under the bound.
    AtMost,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioReport {
    pub rows: Vec<RatioRow>,
    pub direction: Direction,
    /// Minimum (competitive) or maximum (frugality) over included rows.
    pub aggregate: Option<Rational>,
    /// Index into `rows` of the first row attaining the aggregate.
    pub attained_at: Option<usize>,
    /// Predicted bound, when the mechanism comes with one.
    pub bound: Option<Rational>,
    pub satisfied: bool,
}

impl RatioReport {
    fn new(rows: Vec<RatioRow>, direction: Direction, bound: Option<Rational>) -> Self {
        let mut attained_at: Option<usize> = None;
        for (i, row) in rows.iter().enumerate() {
            let Some(r) = row.ratio else { continue };
            let better = match (attained_at.and_then(|j| rows[j].ratio), direction) {
                (None, _) => true,
                (Some(cur), Direction::AtLeast) => r < cur,
                (Some(cur), Direction::AtMost) => r > cur,
            };
            if better {
                attained_at = Some(i);
            }
        }
        let aggregate = attained_at.and_then(|i| rows[i].ratio);
        let satisfied = match (aggregate, bound, direction) {
            (Some(a), Some(b), Direction::AtLeast) => a >= b,
            (Some(a), Some(b), Direction::AtMost) => a <= b,
            _ => true,
        };
        RatioReport { rows, direction, aggregate, attained_at, bound, satisfied }
    }

    pub fn count(&self, status: RowStatus) -> usize {
        self.rows.iter().filter(|r| r.status == status).count()
    }

    pub fn included(&self) -> usize {
        self.count(RowStatus::Included)
    }

    pub fn excluded(&self) -> usize {
        self.rows.len() - self.included()
    }

    pub fn attaining_row(&self) -> Option<&RatioRow> {
        self.attained_at.map(|i| &self.rows[i])
    }
}

fn sweep_rows<M, F>(mech: &M, budget: u64, row: F) -> Result<Vec<RatioRow>>
where
    M: Mechanism + ?Sized,
    F: Fn(MultiBid, Outcome) -> Result<RatioRow> + Sync,
{
    let types = TypeSpace::new(&mech.bundle_counts(), mech.grid(), budget)?;
    let total = types.profile_count();
    if total > budget as u128 {
        return Err(Error::BudgetExceeded {
            limit: budget,
            required: total.min(u64::MAX as u128) as u64,
            completed: vec![],
        });
    }
    let profiles: Vec<Vec<usize>> = types.all().collect();
    profiles
        .par_iter()
        .map(|idx| {
            let b = types.profile(idx);
            let out = mech.run(&b)?;
            row(b, out)
        })
        .collect()
}

/// Revenue over W* on every grid profile; the aggregate is the minimum over
/// profiles with positive W* that are not designated wooden spoons.
pub fn competitive_ratio<M, W>(mech: &M, benchmark: W, bound: Option<Rational>, budget: u64) -> Result<RatioReport>
where
    M: Mechanism + ?Sized,
    W: Fn(&MultiBid) -> Result<Money> + Sync,
{
    let rows = sweep_rows(mech, budget, |profile, out| {
        let benchmark = benchmark(&profile)?;
        let value = out.revenue();
        let status = if benchmark.is_zero() {
            RowStatus::ZeroBenchmark
        } else if out.spoon.is_some() {
            RowStatus::DesignatedSpoon
        } else {
            RowStatus::Included
        };
        let r = (status == RowStatus::Included).then(|| ratio(value, benchmark));
        Ok(RatioRow { profile, value, benchmark, ratio: r, status, golden: out.golden })
    })?;
    Ok(RatioReport::new(rows, Direction::AtLeast, bound))
}

/// Total payment over the second-best cost on every grid profile; the
/// aggregate is the maximum over non-degenerate profiles.
pub fn fr2<M: Mechanism + ?Sized>(
    mech: &M,
    space: &SetSystem,
    bound: Option<Rational>,
    budget: u64,
) -> Result<RatioReport> {
    let rows = sweep_rows(mech, budget, |profile, out| {
        let c = profile.single_parameter().ok_or(Error::DimensionMismatch { expected: 2, actual: 0 })?;
        let second = second_best_cost(space, &c)?;
        let value = out.revenue();
        let status = if second.degenerate {
            RowStatus::Degenerate
        } else if second.cost.is_zero() {
            RowStatus::ZeroBenchmark
        } else {
            RowStatus::Included
        };
        let r = (status == RowStatus::Included).then(|| ratio(value, second.cost));
        Ok(RatioRow { profile, value, benchmark: second.cost, ratio: r, status, golden: out.golden })
    })?;
    Ok(RatioReport::new(rows, Direction::AtMost, bound))
}

/// alpha * (1 - 1/tau); zero when tau is zero.
pub fn revenue_bound(alpha: Rational, tau: usize) -> Rational {
    if tau == 0 {
        return Rational::from_integer(0);
    }
    alpha * (Rational::from_integer(1) - Rational::new(1, tau as i64))
}

/// 2 when some agent shares a feasible set with another, 1 otherwise.
pub fn frugality_bound(space: &SetSystem) -> Rational {
    let shared = space.family().iter().any(|s| s.len() > 1);
    Rational::from_integer(if shared { 2 } else { 1 })
}
