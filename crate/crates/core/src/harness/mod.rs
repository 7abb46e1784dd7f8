//! Benchmarks, experiment configuration, sweeps and CSV reports.

pub mod benchmarks;
pub mod config;
pub mod experiment;
pub mod report;

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::Path;

pub use benchmarks::{
    competitive_ratio, fr2, optimal_revenue_benchmark, second_best_cost, RatioReport, RatioRow, RowStatus, SecondBest,
};
pub use config::{Check, Config};
pub use experiment::{Experiment, Space};
pub use report::SummaryRow;

use crate::error::Result;
use crate::verifier::VerifyOptions;

fn create(dir: Option<&Path>, name: &str) -> Result<Option<BufWriter<File>>> {
    match dir {
        None => Ok(None),
        Some(d) => {
            fs::create_dir_all(d)?;
            Ok(Some(BufWriter::new(File::create(d.join(name))?)))
        }
    }
}

fn ratio_detail(r: &RatioReport) -> String {
    let fmt = |x: Option<crate::money::Rational>| x.map(|v| v.to_string()).unwrap_or_else(|| "none".into());
    format!("aggregate {} bound {} included {} excluded {}", fmt(r.aggregate), fmt(r.bound), r.included(), r.excluded())
}

/// Run one check, writing its report into `dir` when given.
pub fn run_check(exp: &Experiment, check: Check, opts: VerifyOptions, dir: Option<&Path>) -> Result<SummaryRow> {
    let grid = exp.grid();
    let (passed, detail) = match check {
        Check::Nom => {
            let r = exp.verify_nom(opts)?;
            if let Some(f) = create(dir, "nom_witnesses.csv")? {
                report::write_witnesses(f, grid, &r)?;
            }
            (r.passed(), format!("{} witnesses", r.violations))
        }
        Check::Ir => {
            let r = exp.check_ir(opts)?;
            if let Some(f) = create(dir, "ir_violations.csv")? {
                report::write_ir(f, grid, &r)?;
            }
            (r.passed(), format!("{} violations over {} profiles", r.total, r.profiles))
        }
        Check::Structure => {
            let r = exp.structure(opts)?;
            if let Some(f) = create(dir, "structure.csv")? {
                report::write_structure(f, grid, &r)?;
            }
            let golden = r.rows.iter().filter(|x| x.golden.is_some()).count();
            let spoon = r.rows.iter().filter(|x| x.spoon.is_some() || x.zero_margin.is_some()).count();
            let total = r.rows.len();
            (r.is_willy_wonka(), format!("golden {golden}/{total} spoon_or_zero_margin {spoon}/{total}"))
        }
        Check::Ratio => {
            let r = exp.competitive_ratio(opts)?;
            if let Some(f) = create(dir, "ratio.csv")? {
                report::write_ratio(f, grid, &r)?;
            }
            (r.satisfied, ratio_detail(&r))
        }
        Check::Frugality => {
            let r = exp.frugality(opts)?;
            if let Some(f) = create(dir, "frugality.csv")? {
                report::write_ratio(f, grid, &r)?;
            }
            (r.satisfied, ratio_detail(&r))
        }
    };
    Ok(SummaryRow { check: check.name().to_string(), passed, detail })
}

/// Run `checks` in order and write `summary.csv` next to the individual reports.
pub fn run_checks(
    exp: &Experiment,
    checks: &[Check],
    opts: VerifyOptions,
    dir: Option<&Path>,
) -> Result<Vec<SummaryRow>> {
    let rows = checks.iter().map(|&c| run_check(exp, c, opts, dir)).collect::<Result<Vec<_>>>()?;
    if let Some(f) = create(dir, "summary.csv")? {
        report::write_summary(f, &rows)?;
    }
    Ok(rows)
}
