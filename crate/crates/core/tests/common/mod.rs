//! Independent brute-force oracles. Nothing here calls into the library's
//! allocators or verifier; sets are plain bitmasks and money plain ticks.
#![allow(dead_code)]

use std::cmp::Reverse;

use wonka_core::feasible::SetSystemSpec;
use wonka_core::{BidProfile, GridDomain, Mechanism, MultiBid, SetSystem, Setting};

pub fn grid(h: &str, delta: &str) -> GridDomain {
    GridDomain::parse(h, delta).unwrap()
}

pub fn goods(spec: SetSystemSpec) -> SetSystem {
    SetSystem::from_spec(&spec, Setting::Goods, 1 << 20).unwrap()
}

pub fn procurement(n: usize, sets: &[&[usize]]) -> SetSystem {
    SetSystem::from_spec(&SetSystemSpec::explicit(n, sets).unwrap(), Setting::Procurement, 1 << 20).unwrap()
}

pub fn members(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

pub fn mask_of(agents: impl IntoIterator<Item = usize>) -> u64 {
    agents.into_iter().fold(0, |m, i| m | 1 << i)
}

/// Every subset of `[n]` satisfying `pred`, as bitmasks.
pub fn subsets(n: usize, pred: impl Fn(&[usize]) -> bool) -> Vec<u64> {
    (0u64..1 << n).filter(|&m| pred(&members(m))).collect()
}

/// Every vector in `{0..=h}^n`.
pub fn all_profiles(n: usize, h: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..=h).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

pub fn value(mask: u64, b: &[i64]) -> i64 {
    members(mask).iter().map(|&i| b[i]).sum()
}

/// Lexicographic order on sorted member lists.
fn lex_key(mask: u64) -> Vec<usize> {
    members(mask)
}

/// Welfare, then fewest zero-bidders, then largest, then lexicographically first.
pub fn oracle_optimal(family: &[u64], b: &[i64]) -> u64 {
    *family
        .iter()
        .min_by_key(|&&m| {
            let zeros = members(m).iter().filter(|&&i| b[i] == 0).count();
            (Reverse(value(m, b)), zeros, Reverse(m.count_ones()), lex_key(m))
        })
        .unwrap()
}

/// Cost, then smallest, then lexicographically first; restricted to sets containing `must`.
pub fn oracle_min_cost(family: &[u64], c: &[i64], must: Option<usize>) -> Option<u64> {
    family
        .iter()
        .filter(|&&m| must.is_none_or(|i| m >> i & 1 == 1))
        .min_by_key(|&&m| (value(m, c), m.count_ones(), lex_key(m)))
        .copied()
}

pub fn binary(b: &[i64]) -> BidProfile {
    BidProfile::from_ticks(b)
}

/// Best and worst utility tables for a single-parameter mechanism, computed
/// directly from the definitions: `ext[i][t][r] = (max, min)` over `b_{-i}`.
pub fn oracle_extremes<M: Mechanism>(mech: &M, n: usize, h: i64) -> Vec<Vec<Vec<(i64, i64)>>> {
    let procurement = mech.setting() == Setting::Procurement;
    let profiles = all_profiles(n, h);
    let outcomes: Vec<(Vec<i64>, Vec<bool>, Vec<i64>)> = profiles
        .iter()
        .map(|p| {
            let out = mech.run(&binary(p).to_multi()).unwrap();
            let wins = (0..n).map(|i| out.allocation.wins(i)).collect();
            let pays = out.payments.iter().map(|m| m.0).collect();
            (p.clone(), wins, pays)
        })
        .collect();
    (0..n)
        .map(|i| {
            (0..=h)
                .map(|t| {
                    (0..=h)
                        .map(|r| {
                            let us: Vec<i64> = outcomes
                                .iter()
                                .filter(|(p, _, _)| p[i] == r)
                                .map(|(_, wins, pays)| {
                                    let v = if wins[i] { t } else { 0 };
                                    if procurement {
                                        pays[i] - v
                                    } else {
                                        v - pays[i]
                                    }
                                })
                                .collect();
                            (*us.iter().max().unwrap(), *us.iter().min().unwrap())
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// Number of (agent, type, report, half) violations of NOM.
pub fn oracle_violations<M: Mechanism>(mech: &M, n: usize, h: i64) -> usize {
    let ext = oracle_extremes(mech, n, h);
    let mut count = 0;
    for per_agent in &ext {
        for (t, row) in per_agent.iter().enumerate() {
            let (best, worst) = row[t];
            for (r, &(b, w)) in row.iter().enumerate() {
                if r != t {
                    count += usize::from(b > best) + usize::from(w > worst);
                }
            }
        }
    }
    count
}

pub fn multi(rows: &[&[i64]]) -> MultiBid {
    MultiBid::new(
        rows.iter().map(|r| std::iter::once(0).chain(r.iter().copied()).map(wonka_core::Money).collect()).collect(),
    )
    .unwrap()
}

pub fn items(allocs: &[&[&str]]) -> Vec<Vec<Vec<String>>> {
    allocs
        .iter()
        .map(|a| {
            a.iter().map(|s| if s.is_empty() { vec![] } else { s.split('+').map(String::from).collect() }).collect()
        })
        .collect()
}
