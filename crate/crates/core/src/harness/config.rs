//! Experiment configuration: a strict JSON document.
//!
//! ```json
//! {
//!   "setting": "goods",
//!   "space": { "kind": "k_unit", "n": 3, "params": { "k": 2 } },
//!   "grid": { "h": "1", "delta": "0.25" },
//!   "allocator": { "kind": "exact" },
//!   "mechanism": { "rule": "wonka_binary", "wooden_spoon_policy": "feasibility" },
//!   "checks": ["nom", "ir", "structure", "ratio"],
//!   "output": { "path": "reports" }
//! }
//! ```
//!
//! Agents and allocations are numbered from 1. Money is written as a string
//! (`"0.25"`, `"1/3"`) or an integer; JSON floats are rejected.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::domain::Setting;
use crate::error::{Error, Result};
use crate::money::{parse_rational, GridDomain, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub setting: Setting,
    pub space: SpaceConfig,
    pub grid: GridConfig,
    #[serde(default)]
    pub allocator: AllocatorConfig,
    pub mechanism: MechanismConfig,
    #[serde(default)]
    pub checks: Vec<Check>,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceKind {
    DigitalGoods,
    SingleItem,
    KUnit,
    Knapsack,
    Explicit,
    General,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceConfig {
    pub kind: SpaceKind,
    pub n: usize,
    #[serde(default)]
    pub params: Option<serde_json::Value>,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KUnitParams {
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KnapsackParams {
    pub weights: Vec<u64>,
    pub capacity: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitParams {
    /// Feasible winner sets, 1-based agents.
    pub sets: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneralParams {
    /// `allocations[a][i]`: the items agent `i + 1` receives in allocation `a + 1`.
    pub allocations: Vec<Vec<Vec<String>>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpaceParams {
    None,
    KUnit(KUnitParams),
    Knapsack(KnapsackParams),
    Explicit(ExplicitParams),
    General(GeneralParams),
}

fn params_as<T: DeserializeOwned>(kind: &str, value: &Option<serde_json::Value>) -> Result<T> {
    let value = value.clone().ok_or_else(|| Error::Config(format!("space kind {kind} needs params")))?;
    serde_json::from_value(value).map_err(|e| Error::Config(format!("space.params for {kind}: {e}")))
}

impl SpaceConfig {
    /// Kind-specific parameters, rejecting unknown or missing keys.
    pub fn params(&self) -> Result<SpaceParams> {
        Ok(match self.kind {
            SpaceKind::DigitalGoods | SpaceKind::SingleItem => {
                let empty = match &self.params {
                    None => true,
                    Some(serde_json::Value::Object(m)) => m.is_empty(),
                    Some(_) => false,
                };
                if !empty {
                    return Err(Error::Config(format!("space kind {:?} takes no params", self.kind)));
                }
                SpaceParams::None
            }
            SpaceKind::KUnit => SpaceParams::KUnit(params_as("k_unit", &self.params)?),
            SpaceKind::Knapsack => SpaceParams::Knapsack(params_as("knapsack", &self.params)?),
            SpaceKind::Explicit => SpaceParams::Explicit(params_as("explicit", &self.params)?),
            SpaceKind::General => SpaceParams::General(params_as("general", &self.params)?),
        })
    }
}

/// An exact number: a JSON integer or a decimal/fraction string.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Int(i64),
    Text(String),
}

impl Number {
    pub fn value(&self) -> Result<Rational> {
        match self {
            Number::Int(i) => Ok(Rational::from_integer(*i)),
            Number::Text(s) => parse_rational(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub h: Number,
    pub delta: Number,
}

impl GridConfig {
    pub fn domain(&self) -> Result<GridDomain> {
        GridDomain::new(self.h.value()?, self.delta.value()?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AllocatorKind {
    /// Welfare-maximal (goods) or cost-minimal (procurement) over the whole family.
    #[default]
    Exact,
    GreedyKnapsack,
    MaximalInRange,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AllocatorConfig {
    #[serde(default)]
    pub kind: AllocatorKind,
    /// 1-based indices into the general space's allocation list; all when absent.
    #[serde(default)]
    pub range: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    WonkaBinary,
    WonkaGeneral,
    WonkaProcurement,
    Vickrey,
    FirstPrice,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpoonPolicy {
    #[default]
    Feasibility,
    Designated,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MechanismConfig {
    pub rule: Rule,
    #[serde(default)]
    pub wooden_spoon_policy: SpoonPolicy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Nom,
    Ir,
    Structure,
    Ratio,
    Frugality,
}

impl Check {
    pub fn name(self) -> &'static str {
        match self {
            Check::Nom => "nom",
            Check::Ir => "ir",
            Check::Structure => "structure",
            Check::Ratio => "ratio",
            Check::Frugality => "frugality",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub path: Option<PathBuf>,
}

impl Config {
    pub fn from_json(text: &str) -> Result<Config> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Config> {
        let text =
            fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Config::from_json(&text)
    }

    /// The checks to run: the listed ones, or every check that applies to the rule.
    pub fn effective_checks(&self) -> Vec<Check> {
        if !self.checks.is_empty() {
            let mut c = self.checks.clone();
            c.sort_unstable();
            c.dedup();
            return c;
        }
        let mut c = vec![Check::Nom, Check::Ir, Check::Structure];
        c.push(if self.setting == Setting::Procurement { Check::Frugality } else { Check::Ratio });
        c
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"{
        "setting": "goods",
        "space": { "kind": "k_unit", "n": 3, "params": { "k": 2 } },
        "grid": { "h": 1, "delta": "0.25" },
        "mechanism": { "rule": "wonka_binary" }
    }"#;

    #[test]
    fn parses_minimal_config() {
        let cfg = Config::from_json(BASE).unwrap();
        assert_eq!(cfg.space.params().unwrap(), SpaceParams::KUnit(KUnitParams { k: 2 }));
        assert_eq!(cfg.grid.domain().unwrap().h().0, 4);
        assert_eq!(cfg.allocator.kind, AllocatorKind::Exact);
        assert_eq!(cfg.mechanism.wooden_spoon_policy, SpoonPolicy::Feasibility);
        assert_eq!(cfg.effective_checks(), vec![Check::Nom, Check::Ir, Check::Structure, Check::Ratio]);
    }

    #[test]
    fn rejects_unknown_keys() {
        let extra = BASE.replace("\"setting\"", "\"colour\": 1, \"setting\"");
        assert!(matches!(Config::from_json(&extra), Err(Error::Config(_))));
        let bad_params = BASE.replace("\"k\": 2", "\"k\": 2, \"m\": 1");
        let cfg = Config::from_json(&bad_params).unwrap();
        assert!(cfg.space.params().is_err());
    }

    #[test]
    fn rejects_float_money() {
        let float = BASE.replace("\"0.25\"", "0.25");
        assert!(Config::from_json(&float).is_err());
    }

    #[test]
    fn params_required_and_forbidden() {
        let missing = BASE.replace(", \"params\": { \"k\": 2 }", "");
        assert!(Config::from_json(&missing).unwrap().space.params().is_err());
        let dg = BASE.replace("\"k_unit\"", "\"digital_goods\"");
        assert!(Config::from_json(&dg).unwrap().space.params().is_err());
    }
}
