use rayon::prelude::*;

use crate::domain::{utility, MultiBid};
use crate::error::{Error, Result};
use crate::money::Money;
use crate::verifier::{is_golden, others_profile, sweep_report, type_space};

use super::Mechanism;

/// Golden ticket, wooden spoon and zero-margin witnesses for one (agent, bid).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureRow {
    pub agent: usize,
    pub bid: Vec<Money>,
    pub golden: Option<MultiBid>,
    pub spoon: Option<MultiBid>,
    /// A profile where truthful utility at `bid` is exactly zero; stands in for
    /// a wooden spoon where the agent cannot be made to lose.
    pub zero_margin: Option<MultiBid>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureReport {
    pub rows: Vec<StructureRow>,
}

impl StructureReport {
    pub fn all_golden(&self) -> bool {
        self.rows.iter().all(|r| r.golden.is_some())
    }

    pub fn all_spoon_or_zero_margin(&self) -> bool {
        self.rows.iter().all(|r| r.spoon.is_some() || r.zero_margin.is_some())
    }

    pub fn is_willy_wonka(&self) -> bool {
        self.all_golden() && self.all_spoon_or_zero_margin()
    }

    pub fn rows_for(&self, agent: usize) -> impl Iterator<Item = &StructureRow> {
        self.rows.iter().filter(move |r| r.agent == agent)
    }
}

/// For every agent and every bid, search all partial profiles for a golden
/// ticket, a wooden spoon and a zero-margin profile.
pub fn is_willy_wonka<M: Mechanism + ?Sized>(mech: &M, budget: u64) -> Result<StructureReport> {
    let types = type_space(mech, budget)?;
    let required: u128 = (0..types.agents()).map(|i| types.types(i).len() as u128 * types.others_count(i)).sum();
    if required > budget as u128 {
        return Err(Error::BudgetExceeded {
            limit: budget,
            required: required.min(u64::MAX as u128) as u64,
            completed: vec![],
        });
    }
    let tasks: Vec<(usize, usize)> =
        (0..types.agents()).flat_map(|i| (0..types.types(i).len()).map(move |t| (i, t))).collect();
    let rows = tasks
        .par_iter()
        .map(|&(agent, t)| {
            let bid = types.types(agent)[t].clone();
            let mut row = StructureRow { agent, bid: bid.clone(), golden: None, spoon: None, zero_margin: None };
            sweep_report(mech, &types, agent, &bid, |idx, out| {
                let here = || Some(others_profile(&types, idx, agent, &bid));
                if row.golden.is_none() && is_golden(mech, agent, &bid, out) {
                    row.golden = here();
                }
                if row.spoon.is_none() && !out.allocation.wins(agent) {
                    row.spoon = here();
                }
                if row.zero_margin.is_none() && utility(agent, out, &bid).is_zero() {
                    row.zero_margin = here();
                }
                row.golden.is_some() && row.spoon.is_some() && row.zero_margin.is_some()
            })?;
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(StructureReport { rows })
}
