//! Fixtures shared by the criterion benches.

use wonka_core::feasible::SetSystemSpec;
use wonka_core::mechanisms::{BinaryAllocator, WonkaBinary, WonkaProcurement, WoodenSpoonPolicy};
use wonka_core::{GridDomain, Result, SetSystem, Setting};

pub const BUDGET: u64 = u64::MAX;

pub fn grid(delta: &str) -> Result<GridDomain> {
    GridDomain::parse("1", delta)
}

/// Golden-ticket auction on `k`-unit goods with the exact allocator.
pub fn k_unit(n: usize, k: usize, delta: &str) -> Result<WonkaBinary> {
    let space = SetSystem::from_spec(&SetSystemSpec::k_unit(n, k)?, Setting::Goods, 1 << 20)?;
    WonkaBinary::new(space, BinaryAllocator::Exact, WoodenSpoonPolicy::Feasibility, grid(delta)?)
}

/// Procurement over explicit sets (0-based agents).
pub fn procurement(n: usize, sets: &[&[usize]], delta: &str) -> Result<(SetSystem, WonkaProcurement)> {
    let space = SetSystem::from_spec(&SetSystemSpec::explicit(n, sets)?, Setting::Procurement, 1 << 20)?;
    let mech = WonkaProcurement::new(space.clone(), grid(delta)?)?;
    Ok((space, mech))
}

pub fn digital_goods(n: usize) -> Result<SetSystem> {
    SetSystem::from_spec(&SetSystemSpec::digital_goods(n)?, Setting::Goods, 1 << 20)
}
