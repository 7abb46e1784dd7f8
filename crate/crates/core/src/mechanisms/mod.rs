//! Mechanisms: the golden-ticket/wooden-spoon auctions, baseline and mutant
//! mechanisms used as references, and the structural golden-ticket/wooden-spoon
//! report.

mod baselines;
mod structure;
mod wonka;

pub use baselines::{AlwaysAllocate, ChargeLosers, FirstPrice, Vickrey};
pub use structure::{is_willy_wonka, StructureReport, StructureRow};
pub use wonka::{
    golden_ticket_profile, BinaryAllocator, GoldenTicket, WonkaBinary, WonkaGeneral, WonkaProcurement,
    WoodenSpoonPolicy,
};

use crate::domain::{Bundle, MultiBid, Outcome, Setting, EMPTY};
use crate::error::Result;
use crate::money::{GridDomain, Money};

/// A direct mechanism over a finite grid of reports.
pub trait Mechanism: Sync {
    fn name(&self) -> String;

    fn setting(&self) -> Setting;

    fn grid(&self) -> &GridDomain;

    /// Number of personal allocations per agent, the empty one included.
    fn bundle_counts(&self) -> Vec<usize>;

    fn run(&self, bids: &MultiBid) -> Result<Outcome>;

    /// Personal allocations maximising `bid` among those `agent` can receive.
    /// Contains `EMPTY` when no bundle is valued above zero.
    fn favourite_bundles(&self, agent: usize, bid: &[Money]) -> Vec<Bundle> {
        let _ = agent;
        argmax_bundles(bid, 0..bid.len())
    }

    fn agents(&self) -> usize {
        self.bundle_counts().len()
    }
}

pub(crate) fn argmax_bundles(bid: &[Money], candidates: impl IntoIterator<Item = Bundle>) -> Vec<Bundle> {
    let mut cands: Vec<Bundle> = candidates.into_iter().collect();
    if !cands.contains(&EMPTY) {
        cands.push(EMPTY);
    }
    let best = cands.iter().map(|&a| bid[a]).max().unwrap_or(Money::ZERO);
    let mut out: Vec<Bundle> = cands.into_iter().filter(|&a| bid[a] == best).collect();
    out.sort_unstable();
    out
}

impl<M: Mechanism + ?Sized> Mechanism for &M {
    fn name(&self) -> String {
        (**self).name()
    }
    fn setting(&self) -> Setting {
        (**self).setting()
    }
    fn grid(&self) -> &GridDomain {
        (**self).grid()
    }
    fn bundle_counts(&self) -> Vec<usize> {
        (**self).bundle_counts()
    }
    fn run(&self, bids: &MultiBid) -> Result<Outcome> {
        (**self).run(bids)
    }
    fn favourite_bundles(&self, agent: usize, bid: &[Money]) -> Vec<Bundle> {
        (**self).favourite_bundles(agent, bid)
    }
}

impl<M: Mechanism + ?Sized> Mechanism for Box<M> {
    fn name(&self) -> String {
        (**self).name()
    }
    fn setting(&self) -> Setting {
        (**self).setting()
    }
    fn grid(&self) -> &GridDomain {
        (**self).grid()
    }
    fn bundle_counts(&self) -> Vec<usize> {
        (**self).bundle_counts()
    }
    fn run(&self, bids: &MultiBid) -> Result<Outcome> {
        (**self).run(bids)
    }
    fn favourite_bundles(&self, agent: usize, bid: &[Money]) -> Vec<Bundle> {
        (**self).favourite_bundles(agent, bid)
    }
}
