//! Feasible allocation spaces: set systems for binary settings and explicit
//! allocation lists (with an optional range) for general outcome spaces.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::domain::{Allocation, Bundle, Setting, EMPTY};
use crate::error::{Error, Result};

pub const DEFAULT_ENUMERATION_BUDGET: usize = 1 << 20;
const MAX_AGENTS: usize = 63;

/// A set of winners as a bitmask over 0-based agents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct WinnerSet(pub u64);

impl WinnerSet {
    pub const EMPTY: WinnerSet = WinnerSet(0);

    pub fn from_agents(agents: impl IntoIterator<Item = usize>) -> Self {
        WinnerSet(agents.into_iter().fold(0, |m, i| m | (1 << i)))
    }

    pub fn contains(self, agent: usize) -> bool {
        self.0 >> agent & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn without(self, agent: usize) -> Self {
        WinnerSet(self.0 & !(1 << agent))
    }

    pub fn members(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..64).filter(move |i| bits >> i & 1 == 1)
    }

    pub fn to_allocation(self, n: usize) -> Allocation {
        Allocation::from_winners(n, self.members())
    }

    /// Size descending, then lexicographic on the sorted member list.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        other.len().cmp(&self.len()).then_with(|| self.members().cmp(other.members()))
    }
}

impl fmt::Display for WinnerSet {
    /// 1-based, e.g. `{1,3}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.members().map(|i| (i + 1).to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetSystemKind {
    DigitalGoods,
    SingleItem,
    KUnit { k: usize },
    Knapsack { weights: Vec<u64>, capacity: u64 },
    Explicit { sets: Vec<WinnerSet> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetSystemSpec {
    pub n: usize,
    pub kind: SetSystemKind,
}

impl SetSystemSpec {
    pub fn new(n: usize, kind: SetSystemKind) -> Result<Self> {
        if n == 0 || n > MAX_AGENTS {
            return Err(Error::InvalidSpace(format!("number of agents must be in 1..={MAX_AGENTS}, got {n}")));
        }
        match &kind {
            SetSystemKind::Knapsack { weights, .. } => {
                if weights.len() != n {
                    return Err(Error::DimensionMismatch { expected: n, actual: weights.len() });
                }
                if weights.contains(&0) {
                    return Err(Error::InvalidSpace("knapsack weights must be positive".into()));
                }
            }
            SetSystemKind::Explicit { sets } => {
                if sets.is_empty() {
                    return Err(Error::InvalidSpace("explicit family must be nonempty".into()));
                }
                if let Some(bad) = sets.iter().find(|s| s.0 >> n != 0) {
                    return Err(Error::InvalidSpace(format!("set {bad} names an agent beyond n = {n}")));
                }
            }
            _ => {}
        }
        Ok(SetSystemSpec { n, kind })
    }

    pub fn digital_goods(n: usize) -> Result<Self> {
        SetSystemSpec::new(n, SetSystemKind::DigitalGoods)
    }

    pub fn single_item(n: usize) -> Result<Self> {
        SetSystemSpec::new(n, SetSystemKind::SingleItem)
    }

    pub fn k_unit(n: usize, k: usize) -> Result<Self> {
        SetSystemSpec::new(n, SetSystemKind::KUnit { k })
    }

    pub fn knapsack(weights: Vec<u64>, capacity: u64) -> Result<Self> {
        SetSystemSpec::new(weights.len(), SetSystemKind::Knapsack { weights, capacity })
    }

    /// Family given by 0-based member lists.
    pub fn explicit(n: usize, sets: &[&[usize]]) -> Result<Self> {
        let sets = sets.iter().map(|s| WinnerSet::from_agents(s.iter().copied())).collect();
        SetSystemSpec::new(n, SetSystemKind::Explicit { sets })
    }

    /// Membership predicate defining the kind.
    pub fn admits(&self, set: WinnerSet) -> bool {
        if set.0 >> self.n != 0 {
            return false;
        }
        match &self.kind {
            SetSystemKind::DigitalGoods => true,
            SetSystemKind::SingleItem => set.len() <= 1,
            SetSystemKind::KUnit { k } => set.len() <= *k,
            SetSystemKind::Knapsack { weights, capacity } => {
                set.members().map(|i| weights[i]).sum::<u64>() <= *capacity
            }
            SetSystemKind::Explicit { sets } => sets.contains(&set),
        }
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, j| acc * (n - j) as u128 / (j + 1) as u128)
}

/// Lexicographic k-combinations of `0..n`.
fn combinations(n: usize, k: usize) -> impl Iterator<Item = WinnerSet> {
    let mut idx: Vec<usize> = (0..k).collect();
    let mut done = k > n;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let out = WinnerSet::from_agents(idx.iter().copied());
        // advance
        let mut pos = k;
        loop {
            if pos == 0 {
                done = true;
                break;
            }
            pos -= 1;
            if idx[pos] < n - k + pos {
                idx[pos] += 1;
                for j in pos + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    })
}

/// Materialise the family S of the set system, in canonical order, without duplicates.
pub fn enumerate_feasible(spec: &SetSystemSpec, budget: usize) -> Result<Vec<WinnerSet>> {
    let n = spec.n;
    let too_large = || Error::SpaceTooLarge { bound: budget };
    if let SetSystemKind::Explicit { sets } = &spec.kind {
        let mut out = sets.clone();
        out.sort_by(WinnerSet::canonical_cmp);
        out.dedup();
        if out.len() > budget {
            return Err(too_large());
        }
        return Ok(out);
    }
    let max_size = match &spec.kind {
        SetSystemKind::SingleItem => 1.min(n),
        SetSystemKind::KUnit { k } => (*k).min(n),
        _ => n,
    };
    let candidates: u128 = (0..=max_size).map(|s| binomial(n, s)).sum();
    let limit = match spec.kind {
        // knapsack candidates are filtered, so allow scanning more than we keep
        SetSystemKind::Knapsack { .. } => (budget as u128) * 64,
        _ => budget as u128,
    };
    if candidates > limit {
        return Err(too_large());
    }
    let mut out = Vec::new();
    for size in (0..=max_size).rev() {
        for set in combinations(n, size) {
            if spec.admits(set) {
                out.push(set);
                if out.len() > budget {
                    return Err(too_large());
                }
            }
        }
    }
    Ok(out)
}

/// True iff some set of the family leaves `agent` out.
pub fn can_lose(family: &[WinnerSet], agent: usize) -> bool {
    family.iter().any(|s| !s.contains(agent))
}

/// A binary feasible space ready for allocation: `n` agents and a canonically
/// ordered family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetSystem {
    n: usize,
    family: Vec<WinnerSet>,
}

impl SetSystem {
    /// Goods mode always admits selling nothing; procurement uses the family as given.
    pub fn from_spec(spec: &SetSystemSpec, setting: Setting, budget: usize) -> Result<Self> {
        let family = enumerate_feasible(spec, budget)?;
        SetSystem::from_family(spec.n, family, setting)
    }

    pub fn from_family(n: usize, mut family: Vec<WinnerSet>, setting: Setting) -> Result<Self> {
        if n == 0 || n > MAX_AGENTS {
            return Err(Error::InvalidSpace(format!("number of agents must be in 1..={MAX_AGENTS}, got {n}")));
        }
        if setting == Setting::Goods && !family.contains(&WinnerSet::EMPTY) {
            family.push(WinnerSet::EMPTY);
        }
        family.sort_by(WinnerSet::canonical_cmp);
        family.dedup();
        if family.is_empty() {
            return Err(Error::InvalidSpace("feasible family is empty".into()));
        }
        Ok(SetSystem { n, family })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn family(&self) -> &[WinnerSet] {
        &self.family
    }

    pub fn can_lose(&self, agent: usize) -> bool {
        can_lose(&self.family, agent)
    }
}

/// An explicit general outcome space with an optional maximal-in-range subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralSpace {
    n: usize,
    labels: Vec<Vec<String>>,
    allocations: Vec<Allocation>,
    range: Vec<usize>,
}

/// Canonical label of a bundle of named items; the empty bundle is `""`.
pub fn bundle_label(items: &[String]) -> String {
    let mut items: Vec<&str> = items.iter().map(String::as_str).collect();
    items.sort_unstable();
    items.dedup();
    items.join("+")
}

impl GeneralSpace {
    /// `allocations[a][i]` lists the items agent `i` receives in allocation `a`.
    /// Personal-allocation identifiers are assigned in order of first appearance,
    /// after the empty allocation. `range` holds indices into `allocations`.
    pub fn new(n: usize, allocations: &[Vec<Vec<String>>], range: Option<Vec<usize>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSpace("general space needs at least one agent".into()));
        }
        if allocations.is_empty() {
            return Err(Error::InvalidSpace("general space needs at least one allocation".into()));
        }
        let mut labels: Vec<Vec<String>> = vec![vec![String::new()]; n];
        let mut ids: Vec<BTreeMap<String, Bundle>> = vec![BTreeMap::from([(String::new(), EMPTY)]); n];
        let mut out = Vec::with_capacity(allocations.len());
        for (a, alloc) in allocations.iter().enumerate() {
            if alloc.len() != n {
                return Err(Error::InvalidSpace(format!("allocation {a} lists {} agents, expected {n}", alloc.len())));
            }
            let mut assignment = Vec::with_capacity(n);
            for (i, items) in alloc.iter().enumerate() {
                let label = bundle_label(items);
                let next = labels[i].len();
                let id = *ids[i].entry(label.clone()).or_insert_with(|| {
                    labels[i].push(label);
                    next
                });
                assignment.push(id);
            }
            let allocation = Allocation::new(assignment);
            if out.contains(&allocation) {
                return Err(Error::InvalidSpace(format!("allocation {a} is listed twice")));
            }
            out.push(allocation);
        }
        let mut range = range.unwrap_or_else(|| (0..out.len()).collect());
        range.sort_unstable();
        range.dedup();
        if range.is_empty() {
            return Err(Error::InvalidSpace("range must be nonempty".into()));
        }
        if let Some(&bad) = range.iter().find(|&&r| r >= out.len()) {
            return Err(Error::InvalidSpace(format!("range index {bad} out of bounds")));
        }
        Ok(GeneralSpace { n, labels, allocations: out, range })
    }

    /// A binary set system seen as a general space with personal allocations `{lose, win}`.
    pub fn from_set_system(space: &SetSystem) -> Self {
        let n = space.n();
        GeneralSpace {
            n,
            labels: vec![vec![String::new(), "win".to_string()]; n],
            allocations: space.family().iter().map(|s| s.to_allocation(n)).collect(),
            range: (0..space.family().len()).collect(),
        }
    }

    pub fn with_range(mut self, range: Vec<usize>) -> Result<Self> {
        let mut range = range;
        range.sort_unstable();
        range.dedup();
        if range.is_empty() || range.iter().any(|&r| r >= self.allocations.len()) {
            return Err(Error::InvalidSpace("range must be a nonempty subset of the allocations".into()));
        }
        self.range = range;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn allocations(&self) -> &[Allocation] {
        &self.allocations
    }

    pub fn range(&self) -> &[usize] {
        &self.range
    }

    pub fn range_allocations(&self) -> impl Iterator<Item = &Allocation> {
        self.range.iter().map(move |&r| &self.allocations[r])
    }

    /// Number of personal allocations of `agent`, the empty one included.
    pub fn bundle_count(&self, agent: usize) -> usize {
        self.labels[agent].len()
    }

    /// A_i: labels of every personal allocation of `agent`; index is the identifier.
    pub fn personal_allocations(&self, agent: usize) -> &[String] {
        &self.labels[agent]
    }

    pub fn label(&self, agent: usize, bundle: Bundle) -> &str {
        &self.labels[agent][bundle]
    }

    /// Personal allocations `agent` receives in some allocation of the range.
    pub fn range_bundles(&self, agent: usize) -> Vec<Bundle> {
        let mut b: Vec<Bundle> = self.range_allocations().map(|a| a.bundle(agent)).collect();
        b.sort_unstable();
        b.dedup();
        b
    }

    pub fn can_lose(&self, agent: usize) -> bool {
        self.allocations.iter().any(|a| !a.wins(agent))
    }
}
