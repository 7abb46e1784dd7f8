//! CSV reports. Money is written as exact rationals; rows follow sweep order,
//! so identical configs give byte-identical files.

use std::io::Write;

use csv::Writer;

use crate::domain::{utility, MultiBid, Outcome};
use crate::error::Result;
use crate::mechanisms::StructureReport;
use crate::money::{GridDomain, Money, Rational};
use crate::verifier::{IrReport, NomReport};

use super::benchmarks::RatioReport;
use super::experiment::Experiment;

/// Bids of one agent: her non-empty personal allocations, `|`-separated.
pub fn render_bid(grid: &GridDomain, bid: &[Money]) -> String {
    bid.iter().skip(1).map(|&m| grid.render(m)).collect::<Vec<_>>().join("|")
}

/// A profile: agents separated by `;`.
pub fn render_profile(grid: &GridDomain, b: &MultiBid) -> String {
    b.per_agent.iter().map(|row| render_bid(grid, row)).collect::<Vec<_>>().join(";")
}

fn render_opt_profile(grid: &GridDomain, b: &Option<MultiBid>) -> String {
    b.as_ref().map(|p| render_profile(grid, p)).unwrap_or_default()
}

fn render_ratio(r: Option<Rational>) -> String {
    r.map(|r| r.to_string()).unwrap_or_default()
}

fn agent_id(i: usize) -> String {
    (i + 1).to_string()
}

fn flag(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

pub fn write_outcome<W: Write>(out: W, exp: &Experiment, profile: &MultiBid, outcome: &Outcome) -> Result<()> {
    let grid = exp.grid();
    let mut w = Writer::from_writer(out);
    w.write_record(["agent", "bid", "allocation", "payment", "utility", "golden", "spoon"])?;
    for i in 0..profile.len() {
        let label = exp.bundle_label(i, outcome);
        w.write_record([
            agent_id(i),
            render_bid(grid, &profile.per_agent[i]),
            if label.is_empty() { "none".to_string() } else { label },
            grid.render(outcome.payments[i]),
            grid.render(utility(i, outcome, &profile.per_agent[i])),
            flag(outcome.golden == Some(i)).to_string(),
            flag(outcome.spoon == Some(i)).to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_witnesses<W: Write>(out: W, grid: &GridDomain, report: &NomReport) -> Result<()> {
    let mut w = Writer::from_writer(out);
    w.write_record([
        "agent",
        "kind",
        "true_type",
        "misreport",
        "truthful_extreme",
        "dishonest_extreme",
        "truthful_profile",
        "dishonest_profile",
    ])?;
    for x in &report.witnesses {
        w.write_record([
            agent_id(x.agent),
            x.kind.to_string(),
            render_bid(grid, &x.true_type),
            render_bid(grid, &x.misreport),
            grid.render(x.truthful_extreme),
            grid.render(x.dishonest_extreme),
            render_profile(grid, &x.truthful_profile),
            render_profile(grid, &x.dishonest_profile),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_structure<W: Write>(out: W, grid: &GridDomain, report: &StructureReport) -> Result<()> {
    let mut w = Writer::from_writer(out);
    w.write_record(["agent", "bid", "golden_ticket", "wooden_spoon", "zero_margin"])?;
    for r in &report.rows {
        w.write_record([
            agent_id(r.agent),
            render_bid(grid, &r.bid),
            render_opt_profile(grid, &r.golden),
            render_opt_profile(grid, &r.spoon),
            render_opt_profile(grid, &r.zero_margin),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_ratio<W: Write>(out: W, grid: &GridDomain, report: &RatioReport) -> Result<()> {
    let mut w = Writer::from_writer(out);
    w.write_record(["profile", "value", "benchmark", "ratio", "status", "golden"])?;
    for r in &report.rows {
        w.write_record([
            render_profile(grid, &r.profile),
            grid.render(r.value),
            grid.render(r.benchmark),
            render_ratio(r.ratio),
            r.status.to_string(),
            r.golden.map(agent_id).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_ir<W: Write>(out: W, grid: &GridDomain, report: &IrReport) -> Result<()> {
    let mut w = Writer::from_writer(out);
    w.write_record(["profile", "agent", "kind", "payment", "utility"])?;
    for v in &report.violations {
        w.write_record([
            render_profile(grid, &v.profile),
            agent_id(v.agent),
            v.kind.to_string(),
            grid.render(v.payment),
            grid.render(v.utility),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// One line per check in the summary file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SummaryRow {
    pub check: String,
    pub passed: bool,
    pub detail: String,
}

pub fn write_summary<W: Write>(out: W, rows: &[SummaryRow]) -> Result<()> {
    let mut w = Writer::from_writer(out);
    w.write_record(["check", "passed", "detail"])?;
    for r in rows {
        w.write_record([r.check.as_str(), flag(r.passed), r.detail.as_str()])?;
    }
    w.flush()?;
    Ok(())
}
