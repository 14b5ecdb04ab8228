//! Cost oracles: exact and heuristic values of `v_i(S)` with certificates.
//!
//! Exact bin packing and makespan minimization are NP-hard, so the exact
//! oracles are branch-and-bound searches gated by an [`OracleBudget`]; callers
//! that exceed the budget get an error and are expected to fall back to
//! [`value_upper_heuristic`] (first-fit decreasing / longest-processing-time)
//! or to bounds. Plane-covering and additive values have closed forms and
//! ignore the budget.

use std::collections::HashMap;

use thiserror::Error;

use crate::model::{ChoreInstance, Kind, ValuationSpec};
use crate::value::{ceil_div, int, Value};

/// Size gates for the exponential oracles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    /// Max `|S|` for exact packing / scheduling.
    pub max_items: usize,
    /// Max machine count for exact scheduling.
    pub max_machines: usize,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget { max_items: 14, max_machines: 5 }
    }
}

impl OracleBudget {
    pub fn with_items(max_items: usize) -> Self {
        OracleBudget { max_items, ..Default::default() }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ValueError {
    #[error("exact oracle budget exceeded: {items} items > limit {limit}")]
    BudgetExceeded { items: usize, limit: usize },
    #[error("exact oracle budget exceeded: {machines} machines > limit {limit}")]
    MachineBudget { machines: usize, limit: usize },
    #[error("no heuristic for {0} values (the exact form is closed-form at any size)")]
    NoHeuristic(&'static str),
    #[error("item {item} out of range (m = {m})")]
    BadItem { item: usize, m: usize },
    #[error("item {item} listed twice in the set")]
    DuplicateItem { item: usize },
}

/// Evidence for a claimed value; re-checkable via [`verify_certificate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// Bins (item-index lists) whose count is the claimed bin value.
    Packing { bins: Vec<Vec<usize>> },
    /// Machine loads `T_1..T_k` whose max completion time is the claimed makespan.
    Schedule { machines: Vec<Vec<usize>>, makespan: Value },
    /// The distinct agent-coordinates covering the set; count = claimed value.
    Planes { coordinates: Vec<u32> },
    /// Additive total.
    Sum { total: u128 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Valued {
    pub value: Value,
    pub certificate: Certificate,
}

fn check_set(items: &[usize], m: usize) -> Result<(), ValueError> {
    let mut seen = vec![false; m];
    for &j in items {
        if j >= m {
            return Err(ValueError::BadItem { item: j, m });
        }
        if seen[j] {
            return Err(ValueError::DuplicateItem { item: j });
        }
        seen[j] = true;
    }
    Ok(())
}

/// Items of the set paired with the agent's sizes, sorted size-descending
/// (ties by ascending item index).
fn sized_desc(inst: &ChoreInstance, agent: usize, items: &[usize]) -> Vec<(u64, usize)> {
    let row = &inst.sizes[agent];
    let mut v: Vec<(u64, usize)> = items.iter().map(|&j| (row[j], j)).collect();
    v.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    v
}

/// Exact `v_i(S)` with a certificate.
///
/// Bin packing: minimum bins via iterative deepening from the lower bound
/// `⌈s_i(S)/c_i⌉` toward the first-fit-decreasing count, with equal-load
/// dominance pruning. Job scheduling: branch-and-bound over machine
/// assignments in nonincreasing size order against an LPT incumbent.
/// Plane covering: number of distinct agent-coordinates (closed form).
/// Additive: the sum.
pub fn value_exact(
    inst: &ChoreInstance,
    agent: usize,
    items: &[usize],
    budget: &OracleBudget,
) -> Result<Valued, ValueError> {
    check_set(items, inst.m)?;
    match &inst.spec {
        ValuationSpec::BinPacking { capacities } => {
            if items.len() > budget.max_items {
                return Err(ValueError::BudgetExceeded { items: items.len(), limit: budget.max_items });
            }
            let (count, bins) = min_bins(&sized_desc(inst, agent, items), capacities[agent]);
            Ok(Valued { value: int(count as i128), certificate: Certificate::Packing { bins } })
        }
        ValuationSpec::JobScheduling { speeds } => {
            if items.len() > budget.max_items {
                return Err(ValueError::BudgetExceeded { items: items.len(), limit: budget.max_items });
            }
            if speeds[agent].len() > budget.max_machines {
                return Err(ValueError::MachineBudget {
                    machines: speeds[agent].len(),
                    limit: budget.max_machines,
                });
            }
            let (makespan, machines) = min_makespan(&sized_desc(inst, agent, items), &speeds[agent]);
            Ok(Valued { value: makespan, certificate: Certificate::Schedule { machines, makespan } })
        }
        ValuationSpec::CoveringPlane { points } => {
            let coordinates = distinct_coordinates(points, agent, items);
            Ok(Valued {
                value: int(coordinates.len() as i128),
                certificate: Certificate::Planes { coordinates },
            })
        }
        ValuationSpec::Additive => {
            let total: u128 = items.iter().map(|&j| u128::from(inst.sizes[agent][j])).sum();
            Ok(Valued { value: int(total as i128), certificate: Certificate::Sum { total } })
        }
    }
}

/// Polynomial upper bound on `v_i(S)`: FFD bin count or LPT makespan.
/// Only bin-packing and job-scheduling values have a heuristic; the other
/// two kinds are exact in closed form already.
pub fn value_upper_heuristic(
    inst: &ChoreInstance,
    agent: usize,
    items: &[usize],
) -> Result<Valued, ValueError> {
    check_set(items, inst.m)?;
    match &inst.spec {
        ValuationSpec::BinPacking { capacities } => {
            let bins = ffd(&sized_desc(inst, agent, items), capacities[agent]);
            Ok(Valued { value: int(bins.len() as i128), certificate: Certificate::Packing { bins } })
        }
        ValuationSpec::JobScheduling { speeds } => {
            let (makespan, machines) = lpt(&sized_desc(inst, agent, items), &speeds[agent]);
            Ok(Valued { value: makespan, certificate: Certificate::Schedule { machines, makespan } })
        }
        ValuationSpec::CoveringPlane { .. } => Err(ValueError::NoHeuristic("plane-covering")),
        ValuationSpec::Additive => Err(ValueError::NoHeuristic("additive")),
    }
}

/// Exact value where the budget allows, FFD/LPT upper bound otherwise.
/// The flag reports whether the value is exact.
pub fn value_or_upper(
    inst: &ChoreInstance,
    agent: usize,
    items: &[usize],
    budget: &OracleBudget,
) -> Result<(Valued, bool), ValueError> {
    match value_exact(inst, agent, items, budget) {
        Ok(v) => Ok((v, true)),
        Err(ValueError::BudgetExceeded { .. }) | Err(ValueError::MachineBudget { .. }) => {
            Ok((value_upper_heuristic(inst, agent, items)?, false))
        }
        Err(e) => Err(e),
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CertificateError {
    #[error("certificate kind does not match the instance kind")]
    WrongKind,
    #[error("certificate does not partition the set")]
    NotPartition,
    #[error("empty bin in certificate")]
    EmptyBin,
    #[error("bin {bin} overflows the capacity")]
    BinOverflow { bin: usize },
    #[error("certificate must list one load per machine")]
    MachineCount,
    #[error("claimed makespan differs from the recomputed one")]
    MakespanMismatch,
    #[error("claimed coordinates differ from the set's distinct coordinates")]
    CoordinateMismatch,
    #[error("claimed total differs from the recomputed sum")]
    TotalMismatch,
}

/// Re-evaluates a certificate against the instance and set, returning the
/// value it proves. Any mismatch with the claimed contents is an error.
pub fn verify_certificate(
    inst: &ChoreInstance,
    agent: usize,
    items: &[usize],
    cert: &Certificate,
) -> Result<Value, CertificateError> {
    let is_partition = |parts: &[Vec<usize>]| -> bool {
        let mut got: Vec<usize> = parts.iter().flatten().copied().collect();
        got.sort_unstable();
        let mut want: Vec<usize> = items.to_vec();
        want.sort_unstable();
        got == want
    };
    match (cert, &inst.spec) {
        (Certificate::Packing { bins }, ValuationSpec::BinPacking { capacities }) => {
            if !is_partition(bins) {
                return Err(CertificateError::NotPartition);
            }
            for (b, bin) in bins.iter().enumerate() {
                if bin.is_empty() {
                    return Err(CertificateError::EmptyBin);
                }
                let load: u128 = bin.iter().map(|&j| u128::from(inst.sizes[agent][j])).sum();
                if load > u128::from(capacities[agent]) {
                    return Err(CertificateError::BinOverflow { bin: b });
                }
            }
            Ok(int(bins.len() as i128))
        }
        (Certificate::Schedule { machines, makespan }, ValuationSpec::JobScheduling { speeds }) => {
            if machines.len() != speeds[agent].len() {
                return Err(CertificateError::MachineCount);
            }
            if !is_partition(machines) {
                return Err(CertificateError::NotPartition);
            }
            let recomputed = machines
                .iter()
                .zip(&speeds[agent])
                .map(|(t, &rho)| {
                    let load: u128 = t.iter().map(|&j| u128::from(inst.sizes[agent][j])).sum();
                    Value::new(load as i128, rho as i128)
                })
                .max()
                .unwrap_or_else(|| int(0));
            if recomputed != *makespan {
                return Err(CertificateError::MakespanMismatch);
            }
            Ok(recomputed)
        }
        (Certificate::Planes { coordinates }, ValuationSpec::CoveringPlane { points }) => {
            if *coordinates != distinct_coordinates(points, agent, items) {
                return Err(CertificateError::CoordinateMismatch);
            }
            Ok(int(coordinates.len() as i128))
        }
        (Certificate::Sum { total }, ValuationSpec::Additive) => {
            let recomputed: u128 = items.iter().map(|&j| u128::from(inst.sizes[agent][j])).sum();
            if recomputed != *total {
                return Err(CertificateError::TotalMismatch);
            }
            Ok(int(recomputed as i128))
        }
        _ => Err(CertificateError::WrongKind),
    }
}

/// Sorted distinct `agent`-th coordinates among the chosen points.
pub fn distinct_coordinates(points: &[Vec<u32>], agent: usize, items: &[usize]) -> Vec<u32> {
    let mut coords: Vec<u32> = items.iter().map(|&j| points[j][agent]).collect();
    coords.sort_unstable();
    coords.dedup();
    coords
}

// --- exact bin packing ------------------------------------------------------

/// Minimum bin count for items (size, id) sorted size-descending, plus one
/// optimal packing. Every item occupies a bin, so a non-empty all-zero set
/// still costs one bin; zero-size items otherwise ride along in the first bin.
fn min_bins(items: &[(u64, usize)], cap: u64) -> (usize, Vec<Vec<usize>>) {
    if items.is_empty() {
        return (0, Vec::new());
    }
    let positive: Vec<(u64, usize)> = items.iter().copied().filter(|&(s, _)| s > 0).collect();
    let zeros: Vec<usize> = items.iter().filter(|&&(s, _)| s == 0).map(|&(_, j)| j).collect();
    if positive.is_empty() {
        return (1, vec![zeros]);
    }
    let total: u128 = positive.iter().map(|&(s, _)| u128::from(s)).sum();
    let lower = ceil_div(total, u128::from(cap)) as usize;
    let ffd_bins = ffd(&positive, cap);
    let mut bins = ffd_bins;
    for k in lower..bins.len() {
        let mut assign = vec![0usize; positive.len()];
        if pack_into(&positive, cap, k, 0, &mut vec![0; k], &mut assign) {
            let mut packed: Vec<Vec<usize>> = vec![Vec::new(); k];
            for (t, &(_, j)) in positive.iter().enumerate() {
                packed[assign[t]].push(j);
            }
            bins = packed;
            break;
        }
    }
    bins[0].extend(zeros);
    for bin in &mut bins {
        bin.sort_unstable();
    }
    (bins.len(), bins)
}

/// Can the (positive, size-descending) items fit in `k` bins? Bins at equal
/// load are interchangeable, so each load level is tried once per item.
fn pack_into(
    items: &[(u64, usize)],
    cap: u64,
    k: usize,
    t: usize,
    loads: &mut Vec<u64>,
    assign: &mut Vec<usize>,
) -> bool {
    if t == items.len() {
        return true;
    }
    let s = items[t].0;
    let mut tried: Vec<u64> = Vec::with_capacity(k);
    for b in 0..k {
        let load = loads[b];
        if load + s > cap || tried.contains(&load) {
            continue;
        }
        tried.push(load);
        loads[b] += s;
        assign[t] = b;
        if pack_into(items, cap, k, t + 1, loads, assign) {
            return true;
        }
        loads[b] -= s;
    }
    false
}

/// First-fit decreasing over items (size, id) already sorted size-descending.
fn ffd(items: &[(u64, usize)], cap: u64) -> Vec<Vec<usize>> {
    let mut loads: Vec<u64> = Vec::new();
    let mut bins: Vec<Vec<usize>> = Vec::new();
    for &(s, j) in items {
        match loads.iter().position(|&l| l + s <= cap) {
            Some(b) => {
                loads[b] += s;
                bins[b].push(j);
            }
            None => {
                loads.push(s);
                bins.push(vec![j]);
            }
        }
    }
    for bin in &mut bins {
        bin.sort_unstable();
    }
    bins
}

// --- exact makespan ---------------------------------------------------------

/// Longest-processing-time-first on related machines: each job (nonincreasing
/// size) goes to the machine that finishes it earliest, ties to the faster /
/// lower-indexed machine. Returns (makespan, per-machine item lists).
fn lpt(items: &[(u64, usize)], speeds: &[u64]) -> (Value, Vec<Vec<usize>>) {
    let k = speeds.len();
    let mut loads = vec![0u128; k];
    let mut machines: Vec<Vec<usize>> = vec![Vec::new(); k];
    for &(s, j) in items {
        let mut best = 0;
        let mut best_time = Value::new((loads[0] + u128::from(s)) as i128, speeds[0] as i128);
        for (l, &rho) in speeds.iter().enumerate().skip(1) {
            let time = Value::new((loads[l] + u128::from(s)) as i128, rho as i128);
            if time < best_time {
                best = l;
                best_time = time;
            }
        }
        loads[best] += u128::from(s);
        machines[best].push(j);
    }
    let makespan = loads
        .iter()
        .zip(speeds)
        .map(|(&l, &rho)| Value::new(l as i128, rho as i128))
        .max()
        .unwrap_or_else(|| int(0));
    for t in &mut machines {
        t.sort_unstable();
    }
    (makespan, machines)
}

/// Exact minimum makespan via branch-and-bound against the LPT incumbent.
fn min_makespan(items: &[(u64, usize)], speeds: &[u64]) -> (Value, Vec<Vec<usize>>) {
    let (lpt_span, lpt_machines) = lpt(items, speeds);
    if items.is_empty() {
        return (lpt_span, lpt_machines);
    }
    // If LPT already meets an unconditional lower bound, skip the search.
    let total: u128 = items.iter().map(|&(s, _)| u128::from(s)).sum();
    let speed_sum: u128 = speeds.iter().map(|&r| u128::from(r)).sum();
    let lower = std::cmp::max(
        Value::new(total as i128, speed_sum as i128),
        Value::new(items[0].0 as i128, speeds[0] as i128),
    );
    if lpt_span == lower {
        return (lpt_span, lpt_machines);
    }
    let positive: Vec<(u64, usize)> = items.iter().copied().filter(|&(s, _)| s > 0).collect();
    let zeros: Vec<usize> = items.iter().filter(|&&(s, _)| s == 0).map(|&(_, j)| j).collect();
    let mut best = lpt_span;
    let mut best_assign: Option<Vec<usize>> = None;
    let mut loads = vec![0u128; speeds.len()];
    let mut assign = vec![0usize; positive.len()];
    schedule_bnb(&positive, speeds, 0, &mut loads, int(0), &mut assign, &mut best, &mut best_assign);
    match best_assign {
        None => (lpt_span, lpt_machines),
        Some(a) => {
            let mut machines: Vec<Vec<usize>> = vec![Vec::new(); speeds.len()];
            for (t, &(_, j)) in positive.iter().enumerate() {
                machines[a[t]].push(j);
            }
            machines[0].extend(zeros);
            for t in &mut machines {
                t.sort_unstable();
            }
            (best, machines)
        }
    }
}

fn schedule_bnb(
    items: &[(u64, usize)],
    speeds: &[u64],
    t: usize,
    loads: &mut Vec<u128>,
    cur_max: Value,
    assign: &mut Vec<usize>,
    best: &mut Value,
    best_assign: &mut Option<Vec<usize>>,
) {
    if cur_max >= *best {
        return;
    }
    if t == items.len() {
        *best = cur_max;
        *best_assign = Some(assign.clone());
        return;
    }
    let s = u128::from(items[t].0);
    let mut tried: Vec<(u128, u64)> = Vec::with_capacity(speeds.len());
    for (l, &rho) in speeds.iter().enumerate() {
        let key = (loads[l], rho);
        if tried.contains(&key) {
            continue;
        }
        tried.push(key);
        loads[l] += s;
        let time = Value::new(loads[l] as i128, rho as i128);
        assign[t] = l;
        schedule_bnb(items, speeds, t + 1, loads, cur_max.max(time), assign, best, best_assign);
        loads[l] -= s;
    }
}

// --- memoized per-subset values ----------------------------------------------

/// Converts an item list to a bitmask (items must be < 64).
pub fn mask_of(items: &[usize]) -> u64 {
    items.iter().fold(0u64, |acc, &j| acc | (1u64 << j))
}

/// Items set in a bitmask.
pub fn items_of(mask: u64) -> Vec<usize> {
    (0..64).filter(|&j| mask & (1 << j) != 0).collect()
}

/// Memoized exact values of one agent over item subsets, keyed by bitmask.
/// Partition searches and exhaustive certifications hit the same subsets many
/// times; caching makes those loops lookups instead of repeated searches.
pub struct ValueCache<'a> {
    inst: &'a ChoreInstance,
    agent: usize,
    budget: OracleBudget,
    memo: HashMap<u64, Value>,
}

impl<'a> ValueCache<'a> {
    pub fn new(inst: &'a ChoreInstance, agent: usize, budget: OracleBudget) -> Self {
        assert!(inst.m <= 64, "subset masks require m <= 64");
        ValueCache { inst, agent, budget, memo: HashMap::new() }
    }

    pub fn agent(&self) -> usize {
        self.agent
    }

    pub fn value(&mut self, mask: u64) -> Result<Value, ValueError> {
        if let Some(&v) = self.memo.get(&mask) {
            return Ok(v);
        }
        let v = value_exact(self.inst, self.agent, &items_of(mask), &self.budget)?.value;
        self.memo.insert(mask, v);
        Ok(v)
    }
}

// --- structural checks --------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StructureReport {
    pub trials: u64,
    pub subadditivity_violations: u64,
    pub submodularity_violations: u64,
}

/// Samples random set pairs/triples and counts violations of
/// `v(S∪T) ≤ v(S)+v(T)` (subadditivity) and of the diminishing-differences
/// inequality `v(T∪{e})−v(T) ≤ v(S∪{e})−v(S)` for `S ⊆ T`, `e ∉ T`
/// (submodularity). All four kinds are subadditive; only plane-covering and
/// additive values are submodular in general, so a nonzero submodularity
/// count for packing/scheduling is a finding about the instance, not a bug.
pub fn check_subadditive_submodular(
    inst: &ChoreInstance,
    agent: usize,
    trials: u64,
    seed: u64,
    budget: &OracleBudget,
) -> Result<StructureReport, ValueError> {
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let bounded = matches!(inst.kind(), Kind::BinPacking | Kind::JobScheduling);
    let max_pick = if bounded { budget.max_items.min(inst.m) } else { inst.m };
    let mut all: Vec<usize> = (0..inst.m).collect();
    let mut report =
        StructureReport { trials, subadditivity_violations: 0, submodularity_violations: 0 };
    let value = |items: &[usize]| value_exact(inst, agent, items, budget).map(|v| v.value);
    for _ in 0..trials {
        // subadditivity: draw a bounded union U, split it into S and T with overlap
        all.shuffle(&mut rng);
        let u = &all[..rng.gen_range(0..=max_pick)];
        let mut s: Vec<usize> = Vec::new();
        let mut t: Vec<usize> = Vec::new();
        for &j in u {
            match rng.gen_range(0..3) {
                0 => s.push(j),
                1 => t.push(j),
                _ => {
                    s.push(j);
                    t.push(j);
                }
            }
        }
        let (vu, vs, vt) = (value(u)?, value(&s)?, value(&t)?);
        if vu > vs + vt {
            report.subadditivity_violations += 1;
        }
        // submodularity: S ⊆ T, e ∉ T
        if inst.m == 0 {
            continue;
        }
        all.shuffle(&mut rng);
        let t_len = rng.gen_range(0..max_pick.max(1));
        let big: Vec<usize> = all[..t_len].to_vec();
        let e = all[t_len];
        let small: Vec<usize> = big.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
        let mut big_e = big.clone();
        big_e.push(e);
        let mut small_e = small.clone();
        small_e.push(e);
        let gain_t = value(&big_e)? - value(&big)?;
        let gain_s = value(&small_e)? - value(&small)?;
        if gain_t > gain_s {
            report.submodularity_violations += 1;
        }
    }
    Ok(report)
}
