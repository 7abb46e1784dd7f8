//! Golden-ticket auctions: binary goods, general outcome spaces (maximal in
//! range) and frugal procurement.

use crate::allocators::{
    greedy_knapsack_allocation, min_cost_allocation, mir_index_excluding, optimal_allocation_excluding, tau,
    tau_in_range, witness_set_containing,
};
use crate::domain::{Allocation, BidProfile, Bundle, MultiBid, Outcome, Setting, EMPTY};
use crate::error::{Error, Result};
use crate::feasible::{GeneralSpace, SetSystem, WinnerSet};
use crate::money::{GridDomain, Money};

use super::{argmax_bundles, Mechanism};

/// How agents that would otherwise always win are made to lose.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WoodenSpoonPolicy {
    /// Rely on the feasible space and the allocator.
    Feasibility,
    /// Agent `i` is excluded on every profile where she is the only agent not bidding `h`.
    Designated,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BinaryAllocator {
    Exact,
    Greedy { weights: Vec<u64>, capacity: u64 },
}

/// Pick one of `tied` (sorted by agent index). The key is the profile's tick
/// sum plus the index sum of the tied agents, taken mod the tie size.
fn rotate(tied: &[usize], tick_sum: i64) -> usize {
    let key = tick_sum + tied.iter().map(|&i| i as i64).sum::<i64>();
    tied[key.rem_euclid(tied.len() as i64) as usize]
}

pub(crate) fn as_single(bids: &MultiBid) -> Result<BidProfile> {
    bids.single_parameter().ok_or(Error::DimensionMismatch {
        expected: 2,
        actual: bids.per_agent.iter().map(Vec::len).find(|&l| l != 2).unwrap_or(0),
    })
}

pub(crate) fn check_profile(b: &BidProfile, n: usize, grid: &GridDomain) -> Result<()> {
    if b.len() != n {
        return Err(Error::DimensionMismatch { expected: n, actual: b.len() });
    }
    b.check_grid(grid)
}

/// Golden-ticket auction for binary allocation: first price for every winner,
/// except that one lowest-bidding winner pays nothing whenever the winner set
/// has maximum cardinality.
#[derive(Debug, Clone)]
pub struct WonkaBinary {
    space: SetSystem,
    allocator: BinaryAllocator,
    policy: WoodenSpoonPolicy,
    grid: GridDomain,
    tau: usize,
    // max cardinality over the family with agent i removed
    tau_without: Vec<usize>,
    rebate: bool,
}

impl WonkaBinary {
    pub fn new(
        space: SetSystem,
        allocator: BinaryAllocator,
        policy: WoodenSpoonPolicy,
        grid: GridDomain,
    ) -> Result<Self> {
        if let BinaryAllocator::Greedy { weights, .. } = &allocator {
            if weights.len() != space.n() {
                return Err(Error::DimensionMismatch { expected: space.n(), actual: weights.len() });
            }
        }
        let tau = tau(&space);
        let tau_without = (0..space.n())
            .map(|i| space.family().iter().filter(|s| !s.contains(i)).map(|s| s.len()).max().unwrap_or(0))
            .collect();
        Ok(WonkaBinary { space, allocator, policy, grid, tau, tau_without, rebate: true })
    }

    /// Disable the free allocation (leaves plain first-price payments).
    pub fn with_rebate(mut self, rebate: bool) -> Self {
        self.rebate = rebate;
        self
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    pub fn space(&self) -> &SetSystem {
        &self.space
    }

    pub fn policy(&self) -> WoodenSpoonPolicy {
        self.policy
    }

    /// The agent whose designated wooden spoon is `b`, if any.
    pub fn designated_spoon(&self, b: &BidProfile) -> Option<usize> {
        if self.policy != WoodenSpoonPolicy::Designated {
            return None;
        }
        let h = self.grid.h();
        let mut below = b.bids.iter().enumerate().filter(|(_, &x)| x != h).map(|(i, _)| i);
        match (below.next(), below.next()) {
            (Some(i), None) => Some(i),
            _ => None,
        }
    }

    fn allocate(&self, b: &BidProfile, excluded: Option<usize>) -> Result<WinnerSet> {
        match &self.allocator {
            BinaryAllocator::Exact => optimal_allocation_excluding(&self.space, b, excluded),
            BinaryAllocator::Greedy { weights, capacity } => {
                greedy_knapsack_allocation(b, weights, *capacity, excluded)
            }
        }
    }

    pub fn outcome(&self, b: &BidProfile) -> Result<Outcome> {
        let n = self.space.n();
        check_profile(b, n, &self.grid)?;
        let spoon = self.designated_spoon(b);
        let set = self.allocate(b, spoon)?;
        let max_card = match spoon {
            Some(i) => self.tau_without[i],
            None => self.tau,
        };
        let mut payments: Vec<Money> = (0..n).map(|i| if set.contains(i) { b.bids[i] } else { Money::ZERO }).collect();
        let mut golden = None;
        if self.rebate && !set.is_empty() && set.len() == max_card {
            let low = set.members().map(|i| b.bids[i]).min().expect("nonempty");
            let tied: Vec<usize> = set.members().filter(|&i| b.bids[i] == low).collect();
            let key = b.bids.iter().map(|m| m.0).sum();
            let lucky = rotate(&tied, key);
            payments[lucky] = Money::ZERO;
            golden = Some(lucky);
        }
        let mut out = Outcome::new(set.to_allocation(n), payments, Setting::Goods);
        out.golden = golden;
        out.spoon = spoon;
        Ok(out)
    }
}

impl Mechanism for WonkaBinary {
    fn name(&self) -> String {
        if self.rebate {
            "wonka_binary".into()
        } else {
            "wonka_binary_no_rebate".into()
        }
    }

    fn setting(&self) -> Setting {
        Setting::Goods
    }

    fn grid(&self) -> &GridDomain {
        &self.grid
    }

    fn bundle_counts(&self) -> Vec<usize> {
        vec![2; self.space.n()]
    }

    fn run(&self, bids: &MultiBid) -> Result<Outcome> {
        self.outcome(&as_single(bids)?)
    }
}

/// Golden-ticket auction for general outcome spaces over a maximal-in-range allocator.
#[derive(Debug, Clone)]
pub struct WonkaGeneral {
    space: GeneralSpace,
    grid: GridDomain,
    policy: WoodenSpoonPolicy,
    tau: usize,
    // max winner count over range allocations leaving agent i empty, if any
    tau_without: Vec<Option<usize>>,
}

impl WonkaGeneral {
    pub fn new(space: GeneralSpace, grid: GridDomain) -> Self {
        let tau = tau_in_range(&space);
        let tau_without = (0..space.n())
            .map(|i| {
                space
                    .range_allocations()
                    .filter(|a| !a.wins(i))
                    .map(|a| a.assignment.iter().filter(|&&x| x != EMPTY).count())
                    .max()
            })
            .collect();
        WonkaGeneral { space, grid, policy: WoodenSpoonPolicy::Feasibility, tau, tau_without }
    }

    pub fn with_policy(mut self, policy: WoodenSpoonPolicy) -> Self {
        self.policy = policy;
        self
    }

    pub fn policy(&self) -> WoodenSpoonPolicy {
        self.policy
    }

    /// The agent whose designated wooden spoon is `b`: the unique agent not
    /// bidding `h` on every bundle of the range, provided she can be left empty.
    pub fn designated_spoon(&self, b: &MultiBid) -> Option<usize> {
        if self.policy != WoodenSpoonPolicy::Designated {
            return None;
        }
        let h = self.grid.h();
        let all_h = |i: usize| self.space.range_bundles(i).iter().all(|&x| x == EMPTY || b.bid(i, x) == h);
        let mut below = (0..b.len()).filter(|&i| !all_h(i));
        match (below.next(), below.next()) {
            (Some(i), None) if self.tau_without[i].is_some() => Some(i),
            _ => None,
        }
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    pub fn space(&self) -> &GeneralSpace {
        &self.space
    }

    fn check(&self, b: &MultiBid) -> Result<()> {
        if b.len() != self.space.n() {
            return Err(Error::DimensionMismatch { expected: self.space.n(), actual: b.len() });
        }
        for (i, row) in b.per_agent.iter().enumerate() {
            if row.len() != self.space.bundle_count(i) {
                return Err(Error::DimensionMismatch { expected: self.space.bundle_count(i), actual: row.len() });
            }
            BidProfile::new(row.clone()).check_grid(&self.grid)?;
        }
        Ok(())
    }
}

impl Mechanism for WonkaGeneral {
    fn name(&self) -> String {
        "wonka_general".into()
    }

    fn setting(&self) -> Setting {
        Setting::Goods
    }

    fn grid(&self) -> &GridDomain {
        &self.grid
    }

    fn bundle_counts(&self) -> Vec<usize> {
        (0..self.space.n()).map(|i| self.space.bundle_count(i)).collect()
    }

    fn run(&self, b: &MultiBid) -> Result<Outcome> {
        self.check(b)?;
        let spoon = self.designated_spoon(b);
        let alloc: Allocation = self.space.allocations()[mir_index_excluding(&self.space, b, spoon)?].clone();
        let max_card = match spoon {
            Some(i) => self.tau_without[i].expect("checked by designated_spoon"),
            None => self.tau,
        };
        let n = self.space.n();
        let mut payments: Vec<Money> = (0..n).map(|i| b.bid(i, alloc.bundle(i))).collect();
        let winners: Vec<usize> = (0..n).filter(|&i| alloc.wins(i)).collect();
        let mut golden = None;
        if !winners.is_empty() && winners.len() == max_card {
            let low = winners.iter().map(|&i| payments[i]).min().expect("nonempty");
            let tied: Vec<usize> = winners.iter().copied().filter(|&i| payments[i] == low).collect();
            let lucky = rotate(&tied, b.tick_sum());
            payments[lucky] = Money::ZERO;
            golden = Some(lucky);
        }
        let mut out = Outcome::new(alloc, payments, Setting::Goods);
        out.golden = golden;
        out.spoon = spoon;
        Ok(out)
    }

    fn favourite_bundles(&self, agent: usize, bid: &[Money]) -> Vec<Bundle> {
        argmax_bundles(bid, self.space.range_bundles(agent))
    }
}

/// The designated procurement golden ticket of one agent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldenTicket {
    pub agent: usize,
    pub trigger_bid: Money,
    /// Bids of every other agent, in agent order with `agent` skipped.
    pub partner_profile: Vec<Money>,
}

impl GoldenTicket {
    pub fn full_profile(&self) -> BidProfile {
        let mut bids = self.partner_profile.clone();
        bids.insert(self.agent, self.trigger_bid);
        BidProfile::new(bids)
    }
}

/// gamma_i(b_i): the `k - 1` co-winners of the canonical largest set containing
/// `agent` bid `h / (k - 1)`, everyone else bids `h`.
pub fn golden_ticket_profile(agent: usize, bid: Money, space: &SetSystem, grid: &GridDomain) -> Result<GoldenTicket> {
    let witness = witness_set_containing(space.family(), agent)?;
    let k = witness.len();
    let h = grid.h();
    let partner_bid = if k > 1 {
        let parts = (k - 1) as i64;
        if h.0 % parts != 0 {
            return Err(Error::Config(format!(
                "grid step {} must divide h/(k-1) = {}/{} for agent {}",
                grid.delta(),
                grid.h_value(),
                parts,
                agent + 1
            )));
        }
        Money(h.0 / parts)
    } else {
        h
    };
    let partner_profile =
        (0..space.n()).filter(|&j| j != agent).map(|j| if witness.contains(j) { partner_bid } else { h }).collect();
    Ok(GoldenTicket { agent, trigger_bid: bid, partner_profile })
}

/// Frugal procurement auction: first price, except on an agent's designated
/// golden-ticket profile where she is allocated and paid `h`.
#[derive(Debug, Clone)]
pub struct WonkaProcurement {
    space: SetSystem,
    grid: GridDomain,
    // partner profile per agent (independent of the trigger bid)
    tickets: Vec<Vec<Money>>,
}

impl WonkaProcurement {
    pub fn new(space: SetSystem, grid: GridDomain) -> Result<Self> {
        let tickets = (0..space.n())
            .map(|i| golden_ticket_profile(i, Money::ZERO, &space, &grid).map(|t| t.partner_profile))
            .collect::<Result<Vec<_>>>()?;
        Ok(WonkaProcurement { space, grid, tickets })
    }

    pub fn space(&self) -> &SetSystem {
        &self.space
    }

    /// Lowest-indexed agent whose golden ticket matches `b`.
    pub fn golden_agent(&self, b: &BidProfile) -> Option<usize> {
        (0..b.len()).find(|&i| {
            b.bids.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, &x)| x).eq(self.tickets[i].iter().copied())
        })
    }

    pub fn outcome(&self, b: &BidProfile) -> Result<Outcome> {
        let n = self.space.n();
        check_profile(b, n, &self.grid)?;
        let golden = self.golden_agent(b);
        let set = min_cost_allocation(&self.space, b, golden)?;
        let mut payments: Vec<Money> = (0..n).map(|i| if set.contains(i) { b.bids[i] } else { Money::ZERO }).collect();
        if let Some(g) = golden {
            payments[g] = self.grid.h();
        }
        let mut out = Outcome::new(set.to_allocation(n), payments, Setting::Procurement);
        out.golden = golden;
        Ok(out)
    }
}

impl Mechanism for WonkaProcurement {
    fn name(&self) -> String {
        "wonka_procurement".into()
    }

    fn setting(&self) -> Setting {
        Setting::Procurement
    }

    fn grid(&self) -> &GridDomain {
        &self.grid
    }

    fn bundle_counts(&self) -> Vec<usize> {
        vec![2; self.space.n()]
    }

    fn run(&self, bids: &MultiBid) -> Result<Outcome> {
        self.outcome(&as_single(bids)?)
    }

    fn favourite_bundles(&self, _agent: usize, _bid: &[Money]) -> Vec<Bundle> {
        vec![EMPTY]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::feasible::SetSystemSpec;

    fn quarter() -> GridDomain {
        GridDomain::parse("1", "0.25").unwrap()
    }

    fn goods(spec: SetSystemSpec) -> SetSystem {
        SetSystem::from_spec(&spec, Setting::Goods, 1 << 20).unwrap()
    }

    fn proc(n: usize, sets: &[&[usize]]) -> SetSystem {
        SetSystem::from_spec(&SetSystemSpec::explicit(n, sets).unwrap(), Setting::Procurement, 1 << 20).unwrap()
    }

    fn p(t: &[i64]) -> BidProfile {
        BidProfile::from_ticks(t)
    }

    fn m(t: &[i64]) -> Vec<Money> {
        t.iter().copied().map(Money).collect()
    }

    fn k_unit() -> WonkaBinary {
        WonkaBinary::new(
            goods(SetSystemSpec::k_unit(3, 2).unwrap()),
            BinaryAllocator::Exact,
            WoodenSpoonPolicy::Feasibility,
            quarter(),
        )
        .unwrap()
    }

    #[test]
    fn binary_rebate_to_lowest_winner() {
        let o = k_unit().outcome(&p(&[2, 3, 4])).unwrap();
        assert_eq!(o.winners().into_iter().collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(o.payments, m(&[0, 0, 4]));
        assert_eq!(o.revenue(), Money(4));
        assert_eq!(o.golden, Some(1));
    }

    #[test]
    fn binary_rotating_tie_break() {
        // tie {1,2}: tick sum 12 plus index sum 0 + 1, odd, picks agent 2
        let o = k_unit().outcome(&p(&[4, 4, 4])).unwrap();
        assert_eq!(o.payments, m(&[4, 0, 0]));
        assert_eq!(o.revenue(), Money(4));
        // loser bid shifts the parity: 11 + 1 picks agent 1
        let o = k_unit().outcome(&p(&[4, 4, 3])).unwrap();
        assert_eq!(o.payments, m(&[0, 4, 0]));
    }

    #[test]
    fn binary_no_rebate_below_tau() {
        let dg = WonkaBinary::new(
            goods(SetSystemSpec::digital_goods(3).unwrap()),
            BinaryAllocator::Exact,
            WoodenSpoonPolicy::Feasibility,
            GridDomain::parse("1", "0.5").unwrap(),
        )
        .unwrap();
        assert_eq!(dg.tau(), 3);
        let o = dg.outcome(&p(&[1, 0, 0])).unwrap();
        assert_eq!(o.payments, m(&[1, 0, 0]));
        assert_eq!(o.golden, None);
    }

    #[test]
    fn designated_spoon_excludes_unique_non_h_bidder() {
        let dg = WonkaBinary::new(
            goods(SetSystemSpec::digital_goods(3).unwrap()),
            BinaryAllocator::Exact,
            WoodenSpoonPolicy::Designated,
            quarter(),
        )
        .unwrap();
        let o = dg.outcome(&p(&[2, 4, 4])).unwrap();
        assert_eq!(o.spoon, Some(0));
        assert!(!o.allocation.wins(0));
        // remaining winners form a maximum set of the restricted family, so one rides free
        assert_eq!(o.revenue(), Money(4));
        let o = dg.outcome(&p(&[4, 4, 4])).unwrap();
        assert_eq!(o.spoon, None);
        assert_eq!(dg.designated_spoon(&p(&[2, 3, 4])), None);
    }

    #[test]
    fn rejects_off_grid_and_wrong_length() {
        assert!(k_unit().outcome(&p(&[5, 0, 0])).is_err());
        assert!(k_unit().outcome(&p(&[1, 1])).is_err());
    }

    #[test]
    fn greedy_backed_binary() {
        let space = goods(SetSystemSpec::knapsack(vec![2, 1, 1], 2).unwrap());
        let mech = WonkaBinary::new(
            space,
            BinaryAllocator::Greedy { weights: vec![2, 1, 1], capacity: 2 },
            WoodenSpoonPolicy::Feasibility,
            GridDomain::unit(10).unwrap(),
        )
        .unwrap();
        let o = mech.outcome(&p(&[10, 9, 9])).unwrap();
        assert_eq!(o.winners().into_iter().collect::<Vec<_>>(), vec![1, 2]);
        // tie at 9: 28 + (1 + 2) is odd -> agent 3 free
        assert_eq!(o.payments, m(&[0, 9, 0]));
    }

    #[test]
    fn golden_ticket_profiles() {
        let g = GridDomain::unit(1).unwrap();
        let s = proc(3, &[&[0, 1], &[2]]);
        assert_eq!(golden_ticket_profile(0, Money(0), &s, &g).unwrap().partner_profile, m(&[1, 1]));
        let s = proc(3, &[&[0], &[1], &[2]]);
        assert_eq!(golden_ticket_profile(1, Money(0), &s, &g).unwrap().partner_profile, m(&[1, 1]));
        // n = 4, k = 3, h = 1, delta = 0.5: h' = 0.5
        let half = GridDomain::parse("1", "0.5").unwrap();
        let s = proc(4, &[&[0, 1, 2], &[3]]);
        let t = golden_ticket_profile(0, Money(1), &s, &half).unwrap();
        assert_eq!(t.partner_profile, m(&[1, 1, 2]));
        assert_eq!(t.full_profile(), p(&[1, 1, 1, 2]));
        // k = 4 needs delta | 1/3
        let s = proc(4, &[&[0, 1, 2, 3]]);
        assert!(matches!(golden_ticket_profile(0, Money(0), &s, &half), Err(Error::Config(_))));
    }

    #[test]
    fn procurement_golden_forces_inclusion() {
        let mech = WonkaProcurement::new(proc(3, &[&[0, 1], &[2]]), quarter()).unwrap();
        let o = mech.outcome(&p(&[1, 4, 4])).unwrap();
        assert_eq!(o.golden, Some(0));
        assert_eq!(o.payments, m(&[4, 4, 0]));
        assert_eq!(o.revenue(), Money(8));
    }

    #[test]
    fn procurement_singletons() {
        let mech = WonkaProcurement::new(proc(3, &[&[0], &[1], &[2]]), quarter()).unwrap();
        let o = mech.outcome(&p(&[1, 4, 4])).unwrap();
        assert_eq!(o.payments, m(&[4, 0, 0]));
        let o = mech.outcome(&p(&[1, 2, 2])).unwrap();
        assert_eq!(o.golden, None);
        assert_eq!(o.payments, m(&[1, 0, 0]));
    }

    #[test]
    fn general_lowest_winner_free() {
        let it = |s: &[&str]| s.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        let allocs = vec![vec![it(&["x"]), it(&["y"])], vec![it(&["x", "y"]), it(&[])], vec![it(&[]), it(&[])]];
        let space = GeneralSpace::new(2, &allocs, None).unwrap();
        let mech = WonkaGeneral::new(space, GridDomain::parse("1", "0.5").unwrap());
        assert_eq!(mech.tau(), 2);
        // agent 1: x = 1, xy = 1; agent 2: y = 0.5
        let b = MultiBid::new(vec![m(&[0, 2, 2]), m(&[0, 1])]).unwrap();
        let o = mech.run(&b).unwrap();
        assert_eq!(o.allocation.assignment, vec![1, 1]);
        assert_eq!(o.payments, m(&[2, 0]));
        // agent 1 alone: best bundle in range, no rebate since 1 < tau
        let b = MultiBid::new(vec![m(&[0, 1, 2]), m(&[0, 0])]).unwrap();
        let o = mech.run(&b).unwrap();
        assert_eq!(o.allocation.assignment, vec![2, 0]);
        assert_eq!(o.payments, m(&[2, 0]));
        let zero = MultiBid::new(vec![m(&[0, 0, 0]), m(&[0, 0])]).unwrap();
        assert_eq!(mech.run(&zero).unwrap().revenue(), Money(0));
    }

    #[test]
    fn general_designated_spoon() {
        let it = |s: &[&str]| s.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        let allocs = vec![
            vec![it(&[]), it(&[])],
            vec![it(&["x"]), it(&[])],
            vec![it(&["x"]), it(&["y"])],
            vec![it(&["y"]), it(&["x"])],
        ];
        let space = GeneralSpace::new(2, &allocs, None).unwrap();
        let mech =
            WonkaGeneral::new(space, GridDomain::parse("1", "0.5").unwrap()).with_policy(WoodenSpoonPolicy::Designated);
        // agent 1 at h everywhere, agent 2 below h: agent 2 is left empty and
        // agent 1, now a largest winner set on her own, gets the rebate
        let b = MultiBid::new(vec![m(&[0, 2, 2]), m(&[0, 1, 0])]).unwrap();
        let o = mech.run(&b).unwrap();
        assert_eq!(o.spoon, Some(1));
        assert!(o.allocation.wins(0) && !o.allocation.wins(1));
        assert_eq!(o.payments, m(&[0, 0]));
        // both below h: no designated spoon
        let b = MultiBid::new(vec![m(&[0, 1, 2]), m(&[0, 1, 0])]).unwrap();
        assert_eq!(mech.run(&b).unwrap().spoon, None);
    }
}
