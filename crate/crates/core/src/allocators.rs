//! Allocation functions consumed by the mechanisms.
//!
//! Exact allocators scan the canonically ordered family and apply a total
//! tie-break chain, so every allocator here is deterministic:
//!
//! * welfare: maximise welfare, then include as few zero-bidders as possible,
//!   then prefer the largest winner set, then the canonically first set;
//! * cost: minimise cost, then prefer the smallest winner set, then the
//!   canonically first set;
//! * maximal-in-range: maximise welfare over the range, ties to the first
//!   allocation in list order.

use crate::domain::{social_welfare, Allocation, BidProfile, Bids, MultiBid};
use crate::error::{Error, Result};
use crate::feasible::{GeneralSpace, SetSystem, WinnerSet};
use crate::money::{ratio, GridDomain, Money, Rational};
use crate::sweep::TypeSpace;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AllocatorKind {
    ExactWelfare,
    ExactCost,
    GreedyKnapsack,
    MaximalInRange,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AllocatorSpec {
    pub kind: AllocatorKind,
    /// `None` for maximal-in-range, whose alpha is measured.
    pub claimed_alpha: Option<Rational>,
    pub range_ref: Option<Vec<usize>>,
}

impl AllocatorSpec {
    pub fn exact_welfare() -> Self {
        AllocatorSpec {
            kind: AllocatorKind::ExactWelfare,
            claimed_alpha: Some(Rational::from_integer(1)),
            range_ref: None,
        }
    }

    pub fn exact_cost() -> Self {
        AllocatorSpec {
            kind: AllocatorKind::ExactCost,
            claimed_alpha: Some(Rational::from_integer(1)),
            range_ref: None,
        }
    }

    pub fn greedy_knapsack() -> Self {
        AllocatorSpec { kind: AllocatorKind::GreedyKnapsack, claimed_alpha: Some(Rational::new(1, 2)), range_ref: None }
    }

    pub fn maximal_in_range(range: Vec<usize>) -> Self {
        AllocatorSpec { kind: AllocatorKind::MaximalInRange, claimed_alpha: None, range_ref: Some(range) }
    }

    pub fn validate(&self) -> Result<()> {
        let one = Rational::from_integer(1);
        match (self.kind, self.claimed_alpha, &self.range_ref) {
            (AllocatorKind::MaximalInRange, _, None) => {
                Err(Error::Config("maximal_in_range allocator needs a range".into()))
            }
            (AllocatorKind::ExactCost, Some(a), _) if a < one => {
                Err(Error::Config(format!("cost approximation factor must be >= 1, got {a}")))
            }
            (AllocatorKind::ExactWelfare | AllocatorKind::GreedyKnapsack, Some(a), _)
                if a <= Rational::from_integer(0) || a > one =>
            {
                Err(Error::Config(format!("welfare approximation factor must be in (0, 1], got {a}")))
            }
            _ => Ok(()),
        }
    }
}

fn check_len(n: usize, b: &BidProfile) -> Result<()> {
    if b.len() != n {
        return Err(Error::DimensionMismatch { expected: n, actual: b.len() });
    }
    Ok(())
}

fn set_value(set: WinnerSet, b: &BidProfile) -> Money {
    set.members().map(|i| b.bids[i]).sum()
}

/// Welfare-maximal set of the family, optionally never allocating `excluded`.
pub fn optimal_allocation_excluding(space: &SetSystem, b: &BidProfile, excluded: Option<usize>) -> Result<WinnerSet> {
    check_len(space.n(), b)?;
    let key = |s: WinnerSet| {
        let zeros = s.members().filter(|&i| b.bids[i].is_zero()).count();
        (set_value(s, b), std::cmp::Reverse(zeros), s.len())
    };
    space
        .family()
        .iter()
        .copied()
        .filter(|s| excluded.is_none_or(|i| !s.contains(i)))
        // max_by keeps the last maximum; reverse to keep the canonically first
        .rev()
        .max_by(|a, b| key(*a).cmp(&key(*b)))
        .ok_or_else(|| Error::Infeasible("every feasible set contains the excluded agent".into()))
}

/// Exact welfare maximiser over a binary family.
pub fn optimal_allocation(space: &SetSystem, b: &BidProfile) -> Result<WinnerSet> {
    optimal_allocation_excluding(space, b, None)
}

/// Exact cost minimiser, restricted to sets containing `must_include` when given.
pub fn min_cost_allocation(space: &SetSystem, c: &BidProfile, must_include: Option<usize>) -> Result<WinnerSet> {
    check_len(space.n(), c)?;
    space
        .family()
        .iter()
        .copied()
        .filter(|s| must_include.is_none_or(|i| s.contains(i)))
        .min_by_key(|&s| (set_value(s, c), s.len()))
        .ok_or_else(|| match must_include {
            Some(i) => Error::Infeasible(format!("no feasible set contains agent {}", i + 1)),
            None => Error::Infeasible("feasible family is empty".into()),
        })
}

/// Better of the density-greedy prefix and the best single item.
pub fn greedy_knapsack_allocation(
    b: &BidProfile,
    weights: &[u64],
    capacity: u64,
    excluded: Option<usize>,
) -> Result<WinnerSet> {
    if weights.len() != b.len() {
        return Err(Error::DimensionMismatch { expected: b.len(), actual: weights.len() });
    }
    let mut items: Vec<usize> =
        (0..b.len()).filter(|&i| Some(i) != excluded && !b.bids[i].is_zero() && weights[i] <= capacity).collect();
    // density b_i / w_i descending, ties by index
    items.sort_by(|&i, &j| {
        let lhs = b.bids[i].0 as i128 * weights[j] as i128;
        let rhs = b.bids[j].0 as i128 * weights[i] as i128;
        rhs.cmp(&lhs).then(i.cmp(&j))
    });
    let mut prefix = WinnerSet::EMPTY;
    let mut used = 0u64;
    for &i in &items {
        if used + weights[i] > capacity {
            break;
        }
        used += weights[i];
        prefix = WinnerSet(prefix.0 | 1 << i);
    }
    let single = items
        .iter()
        .copied()
        .min_by(|&i, &j| b.bids[j].cmp(&b.bids[i]).then(i.cmp(&j)))
        .map(|i| WinnerSet::from_agents([i]))
        .unwrap_or_default();
    Ok(if set_value(prefix, b) >= set_value(single, b) { prefix } else { single })
}

/// Index (into the allocation list) of the welfare-maximal allocation of the range.
pub fn mir_index(space: &GeneralSpace, b: &MultiBid) -> Result<usize> {
    mir_index_excluding(space, b, None)
}

/// As [`mir_index`], restricted to range allocations leaving `excluded` empty.
pub fn mir_index_excluding(space: &GeneralSpace, b: &MultiBid, excluded: Option<usize>) -> Result<usize> {
    if b.len() != space.n() {
        return Err(Error::DimensionMismatch { expected: space.n(), actual: b.len() });
    }
    let mut best: Option<(Money, usize)> = None;
    for &r in space.range() {
        if excluded.is_some_and(|i| space.allocations()[r].wins(i)) {
            continue;
        }
        let sw = social_welfare(&space.allocations()[r], b)?;
        if best.is_none_or(|(w, _)| sw > w) {
            best = Some((sw, r));
        }
    }
    best.map(|(_, r)| r).ok_or_else(|| Error::Infeasible("no range allocation leaves the excluded agent empty".into()))
}

/// Maximal-in-range allocation.
pub fn mir_allocation(space: &GeneralSpace, b: &MultiBid) -> Result<Allocation> {
    Ok(space.allocations()[mir_index(space, b)?].clone())
}

fn max_welfare<'a, B: Bids>(allocs: impl Iterator<Item = &'a Allocation>, b: &B) -> Result<Money> {
    let mut best = Money::ZERO;
    for a in allocs {
        best = best.max(social_welfare(a, b)?);
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaReport {
    pub alpha: Rational,
    /// Set when alpha is zero or no profile had positive optimal welfare.
    pub degenerate: bool,
    pub worst_profile: Option<MultiBid>,
    pub profiles: u64,
    /// Profiles with zero optimal welfare (0/0), left out of the minimum.
    pub skipped: u64,
}

/// min over grid profiles of (max welfare over the range) / (max welfare overall).
pub fn measured_alpha(space: &GeneralSpace, grid: &GridDomain, budget: u64) -> Result<AlphaReport> {
    let counts: Vec<usize> = (0..space.n()).map(|i| space.bundle_count(i)).collect();
    let types = TypeSpace::new(&counts, grid, budget)?;
    let total = types.profile_count();
    if total > budget as u128 {
        return Err(Error::BudgetExceeded {
            limit: budget,
            required: total.min(u64::MAX as u128) as u64,
            completed: vec![],
        });
    }
    let mut best: Option<(Rational, MultiBid)> = None;
    let mut skipped = 0;
    for idx in types.all() {
        let b = types.profile(&idx);
        let opt = max_welfare(space.allocations().iter(), &b)?;
        if opt.is_zero() {
            skipped += 1;
            continue;
        }
        let in_range = max_welfare(space.range_allocations(), &b)?;
        let r = ratio(in_range, opt);
        if best.as_ref().is_none_or(|(w, _)| r < *w) {
            best = Some((r, b));
        }
    }
    let profiles = total as u64;
    Ok(match best {
        Some((alpha, worst)) => AlphaReport {
            degenerate: alpha == Rational::from_integer(0),
            alpha,
            worst_profile: Some(worst),
            profiles,
            skipped,
        },
        None => {
            AlphaReport { alpha: Rational::from_integer(1), degenerate: true, worst_profile: None, profiles, skipped }
        }
    })
}

/// Largest winner set over a binary family.
pub fn tau(space: &SetSystem) -> usize {
    space.family().iter().map(|s| s.len()).max().unwrap_or(0)
}

/// Largest winner set over the range of a general space.
pub fn tau_in_range(space: &GeneralSpace) -> usize {
    space.range_allocations().map(|a| a.assignment.iter().filter(|&&x| x != 0).count()).max().unwrap_or(0)
}

/// Canonically first largest feasible set containing `agent`.
pub fn witness_set_containing(family: &[WinnerSet], agent: usize) -> Result<WinnerSet> {
    family
        .iter()
        .copied()
        .filter(|s| s.contains(agent))
        .min_by(|a, b| a.canonical_cmp(b))
        .ok_or_else(|| Error::Infeasible(format!("agent {} is never allocated", agent + 1)))
}

/// k: cardinality of the largest feasible set containing `agent`.
pub fn max_winning_set_containing(family: &[WinnerSet], agent: usize) -> Result<usize> {
    witness_set_containing(family, agent).map(WinnerSet::len)
}
