//! A configured experiment: the mechanism, its space and the checks run on it.

use crate::allocators::{measured_alpha, tau};
use crate::domain::{MultiBid, Outcome, Setting, EMPTY};
use crate::error::{Error, Result};
use crate::feasible::{GeneralSpace, SetSystem, SetSystemKind, SetSystemSpec, WinnerSet, DEFAULT_ENUMERATION_BUDGET};
use crate::mechanisms::{
    is_willy_wonka, BinaryAllocator, FirstPrice, Mechanism, StructureReport, Vickrey, WonkaBinary, WonkaGeneral,
    WonkaProcurement, WoodenSpoonPolicy,
};
use crate::money::{GridDomain, Money, Rational};
use crate::verifier::{check_ir_and_transfers, check_nom, IrReport, NomReport, VerifyOptions};

use super::benchmarks::{
    competitive_ratio, fr2, frugality_bound, optimal_revenue_benchmark, optimal_welfare_general, revenue_bound,
    RatioReport,
};
use super::config::{AllocatorKind, Config, Rule, SpaceKind, SpaceParams, SpoonPolicy};

#[derive(Debug, Clone)]
pub enum Space {
    Binary(SetSystem),
    General(GeneralSpace),
}

pub struct Experiment {
    config: Config,
    grid: GridDomain,
    space: Space,
    mechanism: Box<dyn Mechanism>,
    tau: usize,
}

fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn binary_spec(kind: SpaceKind, n: usize, params: SpaceParams) -> Result<SetSystemSpec> {
    match (kind, params) {
        (SpaceKind::DigitalGoods, _) => SetSystemSpec::digital_goods(n),
        (SpaceKind::SingleItem, _) => SetSystemSpec::single_item(n),
        (SpaceKind::KUnit, SpaceParams::KUnit(p)) => SetSystemSpec::k_unit(n, p.k),
        (SpaceKind::Knapsack, SpaceParams::Knapsack(p)) => {
            if p.weights.len() != n {
                return Err(config_err(format!("knapsack lists {} weights for n = {n}", p.weights.len())));
            }
            SetSystemSpec::knapsack(p.weights, p.capacity)
        }
        (SpaceKind::Explicit, SpaceParams::Explicit(p)) => {
            let mut sets = Vec::with_capacity(p.sets.len());
            for set in &p.sets {
                if let Some(&bad) = set.iter().find(|&&a| a == 0 || a > n) {
                    return Err(config_err(format!("explicit set mentions agent {bad}, expected 1..={n}")));
                }
                sets.push(WinnerSet::from_agents(set.iter().map(|a| a - 1)));
            }
            SetSystemSpec::new(n, SetSystemKind::Explicit { sets })
        }
        (kind, _) => Err(config_err(format!("space kind {kind:?} is not a set system"))),
    }
}

fn general_space(n: usize, params: SpaceParams, range: Option<&[usize]>) -> Result<GeneralSpace> {
    let SpaceParams::General(p) = params else {
        return Err(config_err("general space needs params.allocations"));
    };
    let range = match range {
        None => None,
        Some(r) => {
            if let Some(&bad) = r.iter().find(|&&a| a == 0 || a > p.allocations.len()) {
                return Err(config_err(format!(
                    "range index {bad} out of bounds, expected 1..={}",
                    p.allocations.len()
                )));
            }
            Some(r.iter().map(|a| a - 1).collect())
        }
    };
    GeneralSpace::new(n, &p.allocations, range)
}

impl Experiment {
    pub fn from_config(config: Config) -> Result<Experiment> {
        let grid = config.grid.domain()?;
        let params = config.space.params()?;
        let n = config.space.n;
        let rule = config.mechanism.rule;
        let policy = match config.mechanism.wooden_spoon_policy {
            SpoonPolicy::Feasibility => WoodenSpoonPolicy::Feasibility,
            SpoonPolicy::Designated => WoodenSpoonPolicy::Designated,
        };
        let procurement = config.setting == Setting::Procurement;
        if procurement != (rule == Rule::WonkaProcurement) {
            return Err(config_err(format!("rule {rule:?} does not match setting {:?}", config.setting)));
        }
        if policy == WoodenSpoonPolicy::Designated && !matches!(rule, Rule::WonkaBinary | Rule::WonkaGeneral) {
            return Err(config_err(format!("designated wooden spoons are not defined for rule {rule:?}")));
        }
        let alloc = &config.allocator;
        if alloc.range.is_some() && config.space.kind != SpaceKind::General {
            return Err(config_err("allocator.range applies to general spaces only"));
        }
        let general = config.space.kind == SpaceKind::General;
        if general != (rule == Rule::WonkaGeneral) {
            return Err(config_err(format!("rule {rule:?} does not apply to space kind {:?}", config.space.kind)));
        }
        let allowed = match rule {
            Rule::WonkaGeneral => matches!(alloc.kind, AllocatorKind::MaximalInRange | AllocatorKind::Exact),
            Rule::WonkaBinary => matches!(alloc.kind, AllocatorKind::Exact | AllocatorKind::GreedyKnapsack),
            _ => alloc.kind == AllocatorKind::Exact,
        };
        if !allowed {
            return Err(config_err(format!("allocator {:?} cannot drive rule {rule:?}", alloc.kind)));
        }
        if alloc.kind == AllocatorKind::Exact && alloc.range.is_some() {
            return Err(config_err("an exact allocator ranges over every allocation; drop allocator.range"));
        }

        if general {
            let space = general_space(n, params, alloc.range.as_deref())?;
            let mech = WonkaGeneral::new(space.clone(), grid.clone()).with_policy(policy);
            let tau = mech.tau();
            return Ok(Experiment { config, grid, space: Space::General(space), mechanism: Box::new(mech), tau });
        }

        let spec = binary_spec(config.space.kind, n, params)?;
        let space = SetSystem::from_spec(&spec, config.setting, DEFAULT_ENUMERATION_BUDGET)?;
        let mechanism: Box<dyn Mechanism> = match rule {
            Rule::WonkaBinary => {
                let allocator = match (alloc.kind, &spec.kind) {
                    (AllocatorKind::GreedyKnapsack, SetSystemKind::Knapsack { weights, capacity }) => {
                        BinaryAllocator::Greedy { weights: weights.clone(), capacity: *capacity }
                    }
                    (AllocatorKind::GreedyKnapsack, _) => {
                        return Err(config_err("greedy_knapsack allocator needs a knapsack space"));
                    }
                    _ => BinaryAllocator::Exact,
                };
                Box::new(WonkaBinary::new(space.clone(), allocator, policy, grid.clone())?)
            }
            Rule::WonkaProcurement => Box::new(WonkaProcurement::new(space.clone(), grid.clone())?),
            Rule::FirstPrice => Box::new(FirstPrice::new(space.clone(), grid.clone())),
            Rule::Vickrey => {
                let k = match &spec.kind {
                    SetSystemKind::SingleItem => 1,
                    SetSystemKind::KUnit { k } => *k,
                    _ => return Err(config_err("vickrey needs a single_item or k_unit space")),
                };
                Box::new(Vickrey::new(n, k, grid.clone()))
            }
            Rule::WonkaGeneral => unreachable!("handled above"),
        };
        let tau = tau(&space);
        Ok(Experiment { config, grid, space: Space::Binary(space), mechanism, tau })
    }

    pub fn config(&self) -> &Config {
        &self.config
    }

    pub fn grid(&self) -> &GridDomain {
        &self.grid
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn mechanism(&self) -> &dyn Mechanism {
        self.mechanism.as_ref()
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    /// Parse `--profile`: one value per agent separated by commas (binary
    /// spaces), or agents separated by `;` each listing values for her
    /// non-empty personal allocations separated by commas.
    pub fn parse_profile(&self, text: &str) -> Result<MultiBid> {
        let counts = self.mechanism.bundle_counts();
        let parse_row = |row: &str| -> Result<Vec<Money>> {
            let mut bids = vec![Money::ZERO];
            for v in row.split(',') {
                bids.push(self.grid.parse_money(v)?);
            }
            Ok(bids)
        };
        let rows: Vec<Vec<Money>> = if text.contains(';') {
            text.split(';').map(parse_row).collect::<Result<_>>()?
        } else if counts.iter().all(|&c| c == 2) {
            text.split(',').map(|v| Ok(vec![Money::ZERO, self.grid.parse_money(v)?])).collect::<Result<_>>()?
        } else {
            vec![parse_row(text)?]
        };
        if rows.len() != counts.len() {
            return Err(Error::DimensionMismatch { expected: counts.len(), actual: rows.len() });
        }
        for (row, &c) in rows.iter().zip(&counts) {
            if row.len() != c {
                return Err(Error::DimensionMismatch { expected: c - 1, actual: row.len() - 1 });
            }
        }
        MultiBid::new(rows)
    }

    pub fn run(&self, profile: &MultiBid) -> Result<Outcome> {
        self.mechanism.run(profile)
    }

    pub fn verify_nom(&self, opts: VerifyOptions) -> Result<NomReport> {
        check_nom(self.mechanism(), opts)
    }

    pub fn check_ir(&self, opts: VerifyOptions) -> Result<IrReport> {
        check_ir_and_transfers(self.mechanism(), opts)
    }

    pub fn structure(&self, opts: VerifyOptions) -> Result<StructureReport> {
        is_willy_wonka(self.mechanism(), opts.budget)
    }

    /// alpha of the allocator: 1 for exact, 1/2 for greedy knapsack, measured for a restricted range.
    pub fn alpha(&self, budget: u64) -> Result<Rational> {
        match (&self.space, self.config.allocator.kind) {
            (_, AllocatorKind::GreedyKnapsack) => Ok(Rational::new(1, 2)),
            (Space::General(g), AllocatorKind::MaximalInRange) => Ok(measured_alpha(g, &self.grid, budget)?.alpha),
            _ => Ok(Rational::from_integer(1)),
        }
    }

    /// Predicted revenue bound alpha (1 - 1/tau) for the golden-ticket rules.
    pub fn revenue_bound(&self, budget: u64) -> Result<Option<Rational>> {
        match self.config.mechanism.rule {
            Rule::WonkaBinary | Rule::WonkaGeneral => Ok(Some(revenue_bound(self.alpha(budget)?, self.tau))),
            _ => Ok(None),
        }
    }

    pub fn competitive_ratio(&self, opts: VerifyOptions) -> Result<RatioReport> {
        if self.config.setting != Setting::Goods {
            return Err(config_err("the competitive ratio is defined for goods auctions"));
        }
        let bound = self.revenue_bound(opts.budget)?;
        match &self.space {
            Space::Binary(s) => competitive_ratio(
                self.mechanism(),
                |b| {
                    let single = b.single_parameter().ok_or(Error::DimensionMismatch { expected: 2, actual: 0 })?;
                    optimal_revenue_benchmark(s, &single)
                },
                bound,
                opts.budget,
            ),
            Space::General(g) => {
                competitive_ratio(self.mechanism(), |b| optimal_welfare_general(g, b), bound, opts.budget)
            }
        }
    }

    pub fn frugality(&self, opts: VerifyOptions) -> Result<RatioReport> {
        match (&self.space, self.config.setting) {
            (Space::Binary(s), Setting::Procurement) => fr2(self.mechanism(), s, Some(frugality_bound(s)), opts.budget),
            _ => Err(config_err("the frugality ratio is defined for procurement auctions")),
        }
    }

    /// Human-readable personal allocation of `agent` in `outcome`.
    pub fn bundle_label(&self, agent: usize, outcome: &Outcome) -> String {
        let b = outcome.allocation.bundle(agent);
        match &self.space {
            Space::General(g) => g.label(agent, b).to_string(),
            Space::Binary(_) => (if b == EMPTY { "lose" } else { "win" }).to_string(),
        }
    }
}
