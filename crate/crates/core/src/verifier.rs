//! Brute-force verification of not-obvious-manipulability over the grid.
//!
//! For every agent, every true type and every report, the best-case and
//! worst-case utilities are exact max/min over all partial profiles of the
//! other agents. A misreport whose extreme beats the truthful extreme is an
//! obvious manipulation and is returned as a [`ManipulationWitness`].

use std::fmt;

use rayon::prelude::*;

use crate::domain::{utility, MultiBid, Outcome, Setting};
use crate::error::{Error, Result};
use crate::mechanisms::Mechanism;
use crate::money::Money;
use crate::sweep::{TypeSpace, DEFAULT_SWEEP_BUDGET};

pub const DEFAULT_WITNESS_CAP: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Maximum number of mechanism evaluations.
    pub budget: u64,
    /// Maximum number of witnesses kept; violations beyond it are only counted.
    pub witness_cap: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { budget: DEFAULT_SWEEP_BUDGET, witness_cap: DEFAULT_WITNESS_CAP }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ManipulationKind {
    /// Best case improves by lying.
    Bnom,
    /// Worst case improves by lying.
    Wnom,
}

impl fmt::Display for ManipulationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ManipulationKind::Bnom => "BNOM",
            ManipulationKind::Wnom => "WNOM",
        })
    }
}

/// An extreme utility and the first profile (in sweep order) attaining it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extreme {
    pub value: Money,
    pub profile: MultiBid,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManipulationWitness {
    pub agent: usize,
    pub true_type: Vec<Money>,
    pub misreport: Vec<Money>,
    pub kind: ManipulationKind,
    pub truthful_extreme: Money,
    pub dishonest_extreme: Money,
    pub truthful_profile: MultiBid,
    pub dishonest_profile: MultiBid,
}

impl ManipulationWitness {
    /// Re-run the mechanism on both attaining profiles and confirm the stated utilities.
    pub fn reevaluate<M: Mechanism + ?Sized>(&self, mech: &M) -> Result<bool> {
        let truthful = utility(self.agent, &mech.run(&self.truthful_profile)?, &self.true_type);
        let dishonest = utility(self.agent, &mech.run(&self.dishonest_profile)?, &self.true_type);
        Ok(truthful == self.truthful_extreme
            && dishonest == self.dishonest_extreme
            && self.dishonest_extreme > self.truthful_extreme
            && self.truthful_profile.per_agent[self.agent] == self.true_type
            && self.dishonest_profile.per_agent[self.agent] == self.misreport)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NomReport {
    pub witnesses: Vec<ManipulationWitness>,
    /// Violations found, including those beyond the witness cap.
    pub violations: usize,
    pub evaluations: u64,
}

impl NomReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

pub(crate) fn type_space<M: Mechanism + ?Sized>(mech: &M, budget: u64) -> Result<TypeSpace> {
    TypeSpace::new(&mech.bundle_counts(), mech.grid(), budget)
}

pub(crate) fn others_profile(types: &TypeSpace, idx: &[usize], agent: usize, report: &[Money]) -> MultiBid {
    let mut profile = types.profile(idx);
    profile.per_agent[agent] = report.to_vec();
    profile
}

/// Run `mech` on `(report, b_{-agent})` for every partial profile, stopping
/// early when `visit` returns true.
pub(crate) fn sweep_report<M, F>(
    mech: &M,
    types: &TypeSpace,
    agent: usize,
    report: &[Money],
    mut visit: F,
) -> Result<()>
where
    M: Mechanism + ?Sized,
    F: FnMut(&[usize], &Outcome) -> bool,
{
    for idx in types.with_fixed(agent, 0) {
        let out = mech.run(&others_profile(types, &idx, agent, report))?;
        if visit(&idx, &out) {
            break;
        }
    }
    Ok(())
}

fn check_budget(required: u128, budget: u64, completed: Vec<usize>) -> Result<()> {
    if required > budget as u128 {
        return Err(Error::BudgetExceeded {
            limit: budget,
            required: required.min(u64::MAX as u128) as u64,
            completed,
        });
    }
    Ok(())
}

#[derive(Debug, Clone)]
struct Extremes {
    best: (Money, Vec<usize>),
    worst: (Money, Vec<usize>),
}

/// Best and worst utility of every candidate true type when `agent` reports `report`.
fn extremes_for_report<M: Mechanism + ?Sized>(
    mech: &M,
    types: &TypeSpace,
    agent: usize,
    report: &[Money],
    true_types: &[Vec<Money>],
) -> Result<Vec<Extremes>> {
    let mut acc: Vec<Option<Extremes>> = vec![None; true_types.len()];
    sweep_report(mech, types, agent, report, |idx, out| {
        for (t, slot) in true_types.iter().zip(acc.iter_mut()) {
            let u = utility(agent, out, t);
            match slot {
                None => *slot = Some(Extremes { best: (u, idx.to_vec()), worst: (u, idx.to_vec()) }),
                Some(e) => {
                    if u > e.best.0 {
                        e.best = (u, idx.to_vec());
                    }
                    if u < e.worst.0 {
                        e.worst = (u, idx.to_vec());
                    }
                }
            }
        }
        false
    })?;
    Ok(acc.into_iter().map(|e| e.expect("at least one partial profile")).collect())
}

fn single_extreme<M: Mechanism + ?Sized>(
    mech: &M,
    agent: usize,
    true_type: &[Money],
    report: &[Money],
    budget: u64,
    best: bool,
) -> Result<Extreme> {
    let types = type_space(mech, budget)?;
    check_budget(types.others_count(agent), budget, vec![])?;
    let e = extremes_for_report(mech, &types, agent, report, &[true_type.to_vec()])?.remove(0);
    let (value, idx) = if best { e.best } else { e.worst };
    Ok(Extreme { value, profile: others_profile(&types, &idx, agent, report) })
}

/// sup over `b_{-i}` of `agent`'s utility at `true_type` when reporting `report`.
pub fn best_case_utility<M: Mechanism + ?Sized>(
    mech: &M,
    agent: usize,
    true_type: &[Money],
    report: &[Money],
    budget: u64,
) -> Result<Extreme> {
    single_extreme(mech, agent, true_type, report, budget, true)
}

/// inf over `b_{-i}` of `agent`'s utility at `true_type` when reporting `report`.
pub fn worst_case_utility<M: Mechanism + ?Sized>(
    mech: &M,
    agent: usize,
    true_type: &[Money],
    report: &[Money],
    budget: u64,
) -> Result<Extreme> {
    single_extreme(mech, agent, true_type, report, budget, false)
}

/// Exhaustive NOM check. Passes iff no report beats truth-telling in the best
/// or the worst case, for any agent and any true type on the grid.
pub fn check_nom<M: Mechanism + ?Sized>(mech: &M, opts: VerifyOptions) -> Result<NomReport> {
    let types = type_space(mech, opts.budget)?;
    let n = types.agents();
    let mut spent: u128 = 0;
    let mut witnesses = Vec::new();
    let mut violations = 0usize;
    for agent in 0..n {
        let own = types.types(agent);
        let cost = own.len() as u128 * types.others_count(agent);
        check_budget(spent + cost, opts.budget, (0..agent).collect())?;
        spent += cost;
        // ext[r][t]
        let ext: Vec<Vec<Extremes>> = (0..own.len())
            .into_par_iter()
            .map(|r| extremes_for_report(mech, &types, agent, &own[r], own))
            .collect::<Result<_>>()?;
        for t in 0..own.len() {
            let truthful = &ext[t][t];
            for (r, row) in ext.iter().enumerate() {
                if r == t {
                    continue;
                }
                let lie = &row[t];
                let checks = [
                    (ManipulationKind::Bnom, &truthful.best, &lie.best),
                    (ManipulationKind::Wnom, &truthful.worst, &lie.worst),
                ];
                for (kind, honest, dishonest) in checks {
                    if dishonest.0 > honest.0 {
                        violations += 1;
                        if witnesses.len() < opts.witness_cap {
                            witnesses.push(ManipulationWitness {
                                agent,
                                true_type: own[t].clone(),
                                misreport: own[r].clone(),
                                kind,
                                truthful_extreme: honest.0,
                                dishonest_extreme: dishonest.0,
                                truthful_profile: others_profile(&types, &honest.1, agent, &own[t]),
                                dishonest_profile: others_profile(&types, &dishonest.1, agent, &own[r]),
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(NomReport { witnesses, violations, evaluations: spent as u64 })
}

/// Does `agent` receive a bundle maximising `bid` at no charge (goods), or win
/// and get paid `h` (procurement)?
pub(crate) fn is_golden<M: Mechanism + ?Sized>(mech: &M, agent: usize, bid: &[Money], out: &Outcome) -> bool {
    match out.setting {
        Setting::Goods => {
            out.payments[agent].is_zero() && mech.favourite_bundles(agent, bid).contains(&out.allocation.bundle(agent))
        }
        Setting::Procurement => out.allocation.wins(agent) && out.payments[agent] == mech.grid().h(),
    }
}

fn find_profile<M, P>(mech: &M, agent: usize, bid: &[Money], budget: u64, pred: P) -> Result<Option<MultiBid>>
where
    M: Mechanism + ?Sized,
    P: Fn(&Outcome) -> bool,
{
    let types = type_space(mech, budget)?;
    check_budget(types.others_count(agent), budget, vec![])?;
    let mut found = None;
    sweep_report(mech, &types, agent, bid, |idx, out| {
        if pred(out) {
            found = Some(others_profile(&types, idx, agent, bid));
            true
        } else {
            false
        }
    })?;
    Ok(found)
}

/// First partial profile on which `agent` bidding `bid` holds a golden ticket.
pub fn golden_ticket_exists<M: Mechanism + ?Sized>(
    mech: &M,
    agent: usize,
    bid: &[Money],
    budget: u64,
) -> Result<Option<MultiBid>> {
    find_profile(mech, agent, bid, budget, |out| is_golden(mech, agent, bid, out))
}

/// First partial profile on which `agent` bidding `bid` loses.
pub fn wooden_spoon_exists<M: Mechanism + ?Sized>(
    mech: &M,
    agent: usize,
    bid: &[Money],
    budget: u64,
) -> Result<Option<MultiBid>> {
    find_profile(mech, agent, bid, budget, |out| !out.allocation.wins(agent))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum IrViolationKind {
    /// Negative utility at the reported type.
    IndividualRationality,
    /// Goods: the mechanism pays an agent. Procurement: an agent pays the mechanism.
    NegativePayment,
    /// A loser pays or is paid.
    LoserPayment,
}

impl fmt::Display for IrViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IrViolationKind::IndividualRationality => "individual_rationality",
            IrViolationKind::NegativePayment => "negative_payment",
            IrViolationKind::LoserPayment => "loser_payment",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IrViolation {
    pub profile: MultiBid,
    pub agent: usize,
    pub kind: IrViolationKind,
    pub payment: Money,
    pub utility: Money,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IrReport {
    pub violations: Vec<IrViolation>,
    pub total: usize,
    pub profiles: u64,
}

impl IrReport {
    pub fn passed(&self) -> bool {
        self.total == 0
    }
}

/// Individual rationality at reported types, non-negative payments and zero
/// payments for losers, on every grid profile.
pub fn check_ir_and_transfers<M: Mechanism + ?Sized>(mech: &M, opts: VerifyOptions) -> Result<IrReport> {
    let types = type_space(mech, opts.budget)?;
    let count = types.profile_count();
    check_budget(count, opts.budget, vec![])?;
    let profiles: Vec<Vec<usize>> = types.all().collect();
    let per_profile: Vec<Vec<IrViolation>> = profiles
        .par_iter()
        .map(|idx| {
            let profile = types.profile(idx);
            let out = mech.run(&profile)?;
            let mut found = Vec::new();
            for agent in 0..types.agents() {
                let pay = out.payments[agent];
                let u = utility(agent, &out, &profile.per_agent[agent]);
                let mut flag =
                    |kind| found.push(IrViolation { profile: profile.clone(), agent, kind, payment: pay, utility: u });
                if u < Money::ZERO {
                    flag(IrViolationKind::IndividualRationality);
                }
                if pay < Money::ZERO {
                    flag(IrViolationKind::NegativePayment);
                }
                if !out.allocation.wins(agent) && !pay.is_zero() {
                    flag(IrViolationKind::LoserPayment);
                }
            }
            Ok(found)
        })
        .collect::<Result<_>>()?;
    let total = per_profile.iter().map(Vec::len).sum();
    let violations = per_profile.into_iter().flatten().take(opts.witness_cap).collect();
    Ok(IrReport { violations, total, profiles: count as u64 })
}
