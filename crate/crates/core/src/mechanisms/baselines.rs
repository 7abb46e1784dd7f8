//! Reference mechanisms: strategyproof baselines and deliberately manipulable
//! mutants used to exercise the verifier.

use crate::allocators::optimal_allocation;
use crate::domain::{BidProfile, Bundle, MultiBid, Outcome, Setting};
use crate::error::Result;
use crate::feasible::SetSystem;
use crate::money::{GridDomain, Money};

use super::wonka::{as_single, check_profile};
use super::Mechanism;

/// Exact welfare maximiser with every winner paying her bid.
#[derive(Debug, Clone)]
pub struct FirstPrice {
    space: SetSystem,
    grid: GridDomain,
}

impl FirstPrice {
    pub fn new(space: SetSystem, grid: GridDomain) -> Self {
        FirstPrice { space, grid }
    }

    pub fn outcome(&self, b: &BidProfile) -> Result<Outcome> {
        let n = self.space.n();
        check_profile(b, n, &self.grid)?;
        let set = optimal_allocation(&self.space, b)?;
        let payments = (0..n).map(|i| if set.contains(i) { b.bids[i] } else { Money::ZERO }).collect();
        Ok(Outcome::new(set.to_allocation(n), payments, Setting::Goods))
    }
}

impl Mechanism for FirstPrice {
    fn name(&self) -> String {
        "first_price".into()
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

/// k-unit Vickrey: the k highest positive bidders win (ties to lower index)
/// and each pays the (k+1)-th highest bid. `k = 1` is the single-item Vickrey auction.
#[derive(Debug, Clone)]
pub struct Vickrey {
    n: usize,
    k: usize,
    grid: GridDomain,
}

impl Vickrey {
    pub fn new(n: usize, k: usize, grid: GridDomain) -> Self {
        Vickrey { n, k, grid }
    }

    pub fn outcome(&self, b: &BidProfile) -> Result<Outcome> {
        check_profile(b, self.n, &self.grid)?;
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by(|&i, &j| b.bids[j].cmp(&b.bids[i]).then(i.cmp(&j)));
        let price = order.get(self.k).map_or(Money::ZERO, |&i| b.bids[i]);
        let winners: Vec<usize> = order.iter().copied().take(self.k).filter(|&i| !b.bids[i].is_zero()).collect();
        let mut payments = vec![Money::ZERO; self.n];
        for &w in &winners {
            payments[w] = price;
        }
        let allocation = crate::domain::Allocation::from_winners(self.n, winners);
        Ok(Outcome::new(allocation, payments, Setting::Goods))
    }
}

impl Mechanism for Vickrey {
    fn name(&self) -> String {
        "vickrey".into()
    }
    fn setting(&self) -> Setting {
        Setting::Goods
    }
    fn grid(&self) -> &GridDomain {
        &self.grid
    }
    fn bundle_counts(&self) -> Vec<usize> {
        vec![2; self.n]
    }
    fn run(&self, bids: &MultiBid) -> Result<Outcome> {
        self.outcome(&as_single(bids)?)
    }
}

/// Every agent always wins and pays her bid.
#[derive(Debug, Clone)]
pub struct AlwaysAllocate {
    n: usize,
    grid: GridDomain,
}

impl AlwaysAllocate {
    pub fn new(n: usize, grid: GridDomain) -> Self {
        AlwaysAllocate { n, grid }
    }
}

impl Mechanism for AlwaysAllocate {
    fn name(&self) -> String {
        "always_allocate".into()
    }
    fn setting(&self) -> Setting {
        Setting::Goods
    }
    fn grid(&self) -> &GridDomain {
        &self.grid
    }
    fn bundle_counts(&self) -> Vec<usize> {
        vec![2; self.n]
    }
    fn run(&self, bids: &MultiBid) -> Result<Outcome> {
        let b = as_single(bids)?;
        check_profile(&b, self.n, &self.grid)?;
        Ok(Outcome::new(crate::domain::Allocation::from_winners(self.n, 0..self.n), b.bids, Setting::Goods))
    }
}

/// Wraps a mechanism and charges every loser a fixed fee.
#[derive(Debug, Clone)]
pub struct ChargeLosers<M> {
    pub inner: M,
    pub fee: Money,
}

impl<M: Mechanism> Mechanism for ChargeLosers<M> {
    fn name(&self) -> String {
        format!("{}+loser_fee", self.inner.name())
    }
    fn setting(&self) -> Setting {
        self.inner.setting()
    }
    fn grid(&self) -> &GridDomain {
        self.inner.grid()
    }
    fn bundle_counts(&self) -> Vec<usize> {
        self.inner.bundle_counts()
    }
    fn run(&self, bids: &MultiBid) -> Result<Outcome> {
        let mut out = self.inner.run(bids)?;
        for i in 0..out.payments.len() {
            if !out.allocation.wins(i) {
                out.payments[i] += self.fee;
            }
        }
        Ok(out)
    }
    fn favourite_bundles(&self, agent: usize, bid: &[Money]) -> Vec<Bundle> {
        self.inner.favourite_bundles(agent, bid)
    }
}
