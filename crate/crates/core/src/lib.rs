//! Not-obviously-manipulable auctions built from golden tickets and wooden
//! spoons.
//!
//! * [`money`] and [`domain`]: exact tick arithmetic, bids, allocations, outcomes.
//! * [`feasible`]: set systems and general outcome spaces.
//! * [`allocators`]: exact, greedy and maximal-in-range allocation functions.
//! * [`mechanisms`]: the golden-ticket auctions plus reference mechanisms.
//! * [`verifier`]: exhaustive NOM, golden-ticket/wooden-spoon and IR checks.
//! * [`harness`]: revenue and frugality benchmarks, config files and CSV reports.

pub mod allocators;
pub mod domain;
pub mod error;
pub mod feasible;
pub mod harness;
pub mod mechanisms;
pub mod money;
pub mod sweep;
pub mod verifier;

pub use domain::{Allocation, BidProfile, MultiBid, Outcome, Setting};
pub use error::{Error, Result};
pub use feasible::{GeneralSpace, SetSystem, SetSystemSpec, WinnerSet};
pub use mechanisms::Mechanism;
pub use money::{GridDomain, Money, Rational};
