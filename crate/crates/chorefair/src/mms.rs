//! Maximin-share oracle.
//!
//! An agent's MMS is the minimum over all n-partitions of the items of her
//! maximum bundle cost — what she could guarantee herself if she had to cut
//! `M` into `n` bundles and keep the worst one. [`mms_exact`] finds it by
//! enumerating set partitions in restricted-growth order (each item joins an
//! existing block or opens the next one, never a later one, so no partition
//! repeats) with memoized bundle values and max-value pruning. [`mms_bounds`]
//! gives cheap certified bounds when the exact search is out of budget.

use thiserror::Error;

use crate::model::{ChoreInstance, Kind};
use crate::valuation::{value_or_upper, OracleBudget, ValueCache, ValueError};
use crate::value::{ceil_div, ceil_value, int, Value};

/// Size gate for exact partition enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MmsBudget {
    pub max_items: usize,
    pub max_agents: usize,
}

impl Default for MmsBudget {
    fn default() -> Self {
        MmsBudget { max_items: 12, max_agents: 4 }
    }
}

impl MmsBudget {
    pub fn with_items(max_items: usize) -> Self {
        MmsBudget { max_items, ..Default::default() }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MmsError {
    #[error("partition search budget exceeded: {items} items > limit {limit}")]
    ItemBudget { items: usize, limit: usize },
    #[error("partition search budget exceeded: {agents} agents > limit {limit}")]
    AgentBudget { agents: usize, limit: usize },
    #[error(transparent)]
    Value(#[from] ValueError),
}

/// One agent's MMS value together with a partition that attains it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MmsProfile {
    pub agent: usize,
    pub value: Value,
    /// n bundles (possibly empty) whose maximum cost for this agent is `value`.
    pub partition: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundMethod {
    /// max over single items of v({j})
    SingletonFloor,
    /// v(M)/n (with a certified lower bound on v(M) when it is not exact)
    AverageFloor,
    /// bin packing only: total size over n bins' worth of capacity
    CapacityFloor,
    /// lower == upper == exact value
    Exhaustive,
}

impl BoundMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundMethod::SingletonFloor => "singleton-floor",
            BoundMethod::AverageFloor => "average-floor",
            BoundMethod::CapacityFloor => "capacity-floor",
            BoundMethod::Exhaustive => "exhaustive",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MmsBounds {
    pub lower: Value,
    pub upper: Value,
    /// Which argument produced the lower bound.
    pub method: BoundMethod,
}

/// Exact MMS with a defining partition.
pub fn mms_exact(
    inst: &ChoreInstance,
    agent: usize,
    budget: &MmsBudget,
    oracle: &OracleBudget,
) -> Result<MmsProfile, MmsError> {
    if inst.m > budget.max_items {
        return Err(MmsError::ItemBudget { items: inst.m, limit: budget.max_items });
    }
    if inst.n > budget.max_agents {
        return Err(MmsError::AgentBudget { agents: inst.n, limit: budget.max_agents });
    }
    let n = inst.n;
    if inst.m == 0 {
        return Ok(MmsProfile { agent, value: int(0), partition: vec![Vec::new(); n] });
    }

    // Visit items largest-first (for the agent) so block values climb early
    // and pruning bites; plane-covering has no sizes, so natural order there.
    let mut order: Vec<usize> = (0..inst.m).collect();
    if let Some(row) = inst.sizes_of(agent) {
        order.sort_by(|&a, &b| row[b].cmp(&row[a]).then(a.cmp(&b)));
    }

    let mut cache = ValueCache::new(inst, agent, *oracle);

    // Incumbent: deal the ordered items round-robin over n blocks.
    let mut best_blocks = vec![0u64; n];
    for (t, &j) in order.iter().enumerate() {
        best_blocks[t % n] |= 1 << j;
    }
    let mut best = int(0);
    for &mask in &best_blocks {
        best = best.max(cache.value(mask)?);
    }

    // Depth-first refinement: item t joins blocks 0..used or opens block `used`.
    struct Search<'c, 'a> {
        order: &'c [usize],
        n: usize,
        cache: &'c mut ValueCache<'a>,
        best: Value,
        best_blocks: Vec<u64>,
    }
    impl Search<'_, '_> {
        fn dfs(&mut self, t: usize, used: usize, blocks: &mut Vec<u64>) -> Result<(), ValueError> {
            if t == self.order.len() {
                // every placement en route stayed below the incumbent max
                let mut max = int(0);
                for &mask in blocks.iter().take(used) {
                    max = max.max(self.cache.value(mask)?);
                }
                self.best = max;
                self.best_blocks = blocks.clone();
                return Ok(());
            }
            let bit = 1u64 << self.order[t];
            let limit = if used < self.n { used + 1 } else { used };
            for b in 0..limit {
                let joined = blocks[b] | bit;
                if self.cache.value(joined)? >= self.best {
                    continue;
                }
                let saved = blocks[b];
                blocks[b] = joined;
                self.dfs(t + 1, used.max(b + 1), blocks)?;
                blocks[b] = saved;
            }
            Ok(())
        }
    }
    let mut search = Search { order: &order, n, cache: &mut cache, best, best_blocks };
    search.dfs(0, 0, &mut vec![0u64; n])?;

    let partition = search
        .best_blocks
        .iter()
        .map(|&mask| crate::valuation::items_of(mask))
        .collect();
    Ok(MmsProfile { agent, value: search.best, partition })
}

/// Certified bounds on one agent's MMS without partition enumeration.
///
/// Lower bounds: no bundle can cost less than the costliest single item
/// (one bundle holds it), nor less than v(M)/n by subadditivity; for bin
/// packing the average bound collapses to total size over n bins' worth of
/// capacity. Integer value domains round the average up. Upper bound: v(M),
/// the cost of the partition that dumps everything in one bundle (heuristic
/// FFD/LPT value when the exact oracle is out of budget — still an upper
/// bound, just not tight).
pub fn mms_bounds(inst: &ChoreInstance, agent: usize, oracle: &OracleBudget) -> MmsBounds {
    let n = inst.n as i128;
    let all: Vec<usize> = (0..inst.m).collect();
    let mut candidates: Vec<(Value, BoundMethod)> = Vec::new();
    let upper;
    match inst.kind() {
        Kind::BinPacking => {
            let cap = inst.capacity(agent).expect("bin-packing instance");
            let total = inst.total_size(agent);
            if inst.m > 0 {
                candidates.push((int(1), BoundMethod::SingletonFloor));
            }
            match value_or_upper(inst, agent, &all, oracle) {
                Ok((v, true)) => {
                    // exact v(M): average bound, rounded up to the integer domain
                    candidates.push((ceil_value(v.value / int(n)), BoundMethod::AverageFloor));
                    upper = v.value;
                }
                Ok((v, false)) => {
                    candidates.push((
                        int(ceil_div(total, n as u128 * u128::from(cap)) as i128),
                        BoundMethod::CapacityFloor,
                    ));
                    upper = v.value;
                }
                Err(_) => unreachable!("bin packing always has an FFD fallback"),
            }
        }
        Kind::JobScheduling => {
            let speeds = inst.speeds_of(agent).expect("job-scheduling instance");
            let row = &inst.sizes[agent];
            let fastest = speeds[0];
            if let Some(&smax) = row.iter().max() {
                candidates.push((
                    Value::new(smax as i128, fastest as i128),
                    BoundMethod::SingletonFloor,
                ));
            }
            match value_or_upper(inst, agent, &all, oracle) {
                Ok((v, true)) => {
                    candidates.push((v.value / int(n), BoundMethod::AverageFloor));
                    upper = v.value;
                }
                Ok((v, false)) => {
                    let total = inst.total_size(agent);
                    let speed_sum: u128 = speeds.iter().map(|&r| u128::from(r)).sum();
                    let vm_floor = Value::new(total as i128, speed_sum as i128);
                    candidates.push((vm_floor / int(n), BoundMethod::AverageFloor));
                    upper = v.value;
                }
                Err(_) => unreachable!("job scheduling always has an LPT fallback"),
            }
        }
        Kind::CoveringPlane => {
            // v(M) = n (all coordinate values appear), singletons cost 1
            if inst.m > 0 {
                candidates.push((int(1), BoundMethod::SingletonFloor));
            }
            candidates.push((int(1), BoundMethod::AverageFloor));
            upper = int(n);
        }
        Kind::Additive => {
            let row = &inst.sizes[agent];
            let total = inst.total_size(agent);
            if let Some(&smax) = row.iter().max() {
                candidates.push((int(smax as i128), BoundMethod::SingletonFloor));
            }
            candidates.push((int(ceil_div(total, n as u128) as i128), BoundMethod::AverageFloor));
            upper = int(total as i128);
        }
    }
    let (lower, method) = candidates
        .into_iter()
        .fold((int(0), BoundMethod::SingletonFloor), |acc, cand| {
            if cand.0 > acc.0 {
                cand
            } else {
                acc
            }
        });
    MmsBounds { lower, upper, method }
}

/// Per-agent MMS reference for audits: exact profile when the budgets allow,
/// certified bounds otherwise.
#[derive(Debug, Clone, PartialEq)]
pub enum AgentMms {
    Exact(MmsProfile),
    Bounds(MmsBounds),
}

impl AgentMms {
    /// The value audits divide by: the exact MMS, or its certified lower
    /// bound (which can only overstate ratios, never excuse a bad bundle).
    pub fn reference_value(&self) -> Value {
        match self {
            AgentMms::Exact(p) => p.value,
            AgentMms::Bounds(b) => b.lower,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, AgentMms::Exact(_))
    }
}

/// Exact-if-possible MMS reference for every agent.
pub fn mms_reference(
    inst: &ChoreInstance,
    budget: &MmsBudget,
    oracle: &OracleBudget,
) -> Vec<AgentMms> {
    (0..inst.n)
        .map(|agent| match mms_exact(inst, agent, budget, oracle) {
            Ok(profile) => AgentMms::Exact(profile),
            Err(_) => AgentMms::Bounds(mms_bounds(inst, agent, oracle)),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::model::ChoreInstance;
    use crate::valuation::value_exact;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn oracle() -> OracleBudget {
        OracleBudget::default()
    }

    fn mms_budget() -> MmsBudget {
        MmsBudget::default()
    }

    /// Independent brute force: enumerate every partition into at most n
    /// blocks (restricted growth, no pruning, no memo) and take the min-max.
    fn bf_mms(inst: &ChoreInstance, agent: usize) -> Value {
        fn rec(inst: &ChoreInstance, agent: usize, t: usize, blocks: &mut Vec<Vec<usize>>, n: usize, best: &mut Option<Value>) {
            if t == inst.m {
                let max = blocks
                    .iter()
                    .map(|b| value_exact(inst, agent, b, &OracleBudget::default()).unwrap().value)
                    .max()
                    .unwrap_or_else(|| int(0));
                *best = Some(best.map_or(max, |b: Value| b.min(max)));
                return;
            }
            let used = blocks.len();
            for b in 0..used.min(n) {
                blocks[b].push(t);
                rec(inst, agent, t + 1, blocks, n, best);
                blocks[b].pop();
            }
            if used < n {
                blocks.push(vec![t]);
                rec(inst, agent, t + 1, blocks, n, best);
                blocks.pop();
            }
        }
        let mut best = None;
        rec(inst, agent, 0, &mut Vec::new(), inst.n, &mut best);
        best.unwrap_or_else(|| int(0))
    }

    fn check_profile(inst: &ChoreInstance, profile: &MmsProfile) {
        // the defining partition's worst bundle must cost exactly the value
        assert_eq!(profile.partition.len(), inst.n);
        let max = profile
            .partition
            .iter()
            .map(|b| value_exact(inst, profile.agent, b, &oracle()).unwrap().value)
            .max()
            .unwrap();
        assert_eq!(max, profile.value);
    }

    #[test]
    fn dense_binpacking_rows_have_unit_mms() {
        let inst = gen::gen_feige_binpacking();
        for agent in 0..3 {
            let profile = mms_exact(&inst, agent, &mms_budget(), &oracle()).unwrap();
            assert_eq!(profile.value, int(1), "agent {agent}");
            check_profile(&inst, &profile);
        }
    }

    #[test]
    fn covering_planes_have_unit_mms() {
        let inst = gen::gen_covering_planes(2);
        for agent in 0..2 {
            let profile = mms_exact(&inst, agent, &mms_budget(), &oracle()).unwrap();
            assert_eq!(profile.value, int(1));
            check_profile(&inst, &profile);
        }
    }

    #[test]
    fn single_agent_mms_is_whole_set_value() {
        let inst = ChoreInstance::bin_packing(vec![vec![4, 4, 3]], vec![5]);
        let profile = mms_exact(&inst, 0, &mms_budget(), &oracle()).unwrap();
        let whole = value_exact(&inst, 0, &[0, 1, 2], &oracle()).unwrap().value;
        assert_eq!(profile.value, whole);
    }

    #[test]
    fn fewer_items_than_agents_pads_empty_bundles() {
        let inst = ChoreInstance::additive(vec![vec![5, 2]; 3]);
        let profile = mms_exact(&inst, 0, &mms_budget(), &oracle()).unwrap();
        assert_eq!(profile.value, int(5));
        assert_eq!(profile.partition.iter().filter(|b| b.is_empty()).count(), 1);
        check_profile(&inst, &profile);
    }

    #[test]
    fn matches_brute_force_binpacking() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for _ in 0..40 {
            let n = rng.gen_range(2..=3);
            let m = rng.gen_range(0..=7);
            let inst = gen::gen_random_binpacking(n, m, 12, &mut rng);
            for agent in 0..n {
                let fast = mms_exact(&inst, agent, &mms_budget(), &oracle()).unwrap();
                assert_eq!(fast.value, bf_mms(&inst, agent), "{inst:?} agent {agent}");
                check_profile(&inst, &fast);
            }
        }
    }

    #[test]
    fn matches_brute_force_scheduling() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..30 {
            let n = rng.gen_range(2..=3);
            let m = rng.gen_range(0..=6);
            let inst = gen::gen_random_jobscheduling(n, m, 3, 5, 10, &mut rng);
            for agent in 0..n {
                let fast = mms_exact(&inst, agent, &mms_budget(), &oracle()).unwrap();
                assert_eq!(fast.value, bf_mms(&inst, agent));
                check_profile(&inst, &fast);
            }
        }
    }

    #[test]
    fn order_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..20 {
            let n = rng.gen_range(2..=3);
            let m = rng.gen_range(1..=7);
            let inst = gen::gen_random_binpacking(n, m, 15, &mut rng);
            // permute item indices consistently across agents
            let mut perm: Vec<usize> = (0..m).collect();
            for t in (1..m).rev() {
                perm.swap(t, rng.gen_range(0..=t));
            }
            let permuted_sizes: Vec<Vec<u64>> = inst
                .sizes
                .iter()
                .map(|row| perm.iter().map(|&j| row[j]).collect())
                .collect();
            let permuted = ChoreInstance::bin_packing(
                permuted_sizes,
                (0..n).map(|i| inst.capacity(i).unwrap()).collect(),
            );
            for agent in 0..n {
                assert_eq!(
                    mms_exact(&inst, agent, &mms_budget(), &oracle()).unwrap().value,
                    mms_exact(&permuted, agent, &mms_budget(), &oracle()).unwrap().value
                );
            }
        }
    }

    #[test]
    fn bounds_sandwich_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        for _ in 0..40 {
            let n = rng.gen_range(2..=4);
            let m = rng.gen_range(1..=8);
            let inst = if rng.gen_bool(0.5) {
                gen::gen_random_binpacking(n, m, 30, &mut rng)
            } else {
                gen::gen_random_jobscheduling(n, m, 3, 5, 20, &mut rng)
            };
            for agent in 0..n {
                let exact = mms_exact(&inst, agent, &mms_budget(), &oracle()).unwrap().value;
                let bounds = mms_bounds(&inst, agent, &oracle());
                assert!(bounds.lower <= exact, "{inst:?} agent {agent}");
                assert!(exact <= bounds.upper, "{inst:?} agent {agent}");
            }
        }
    }

    #[test]
    fn budget_gates() {
        let inst = ChoreInstance::additive(vec![vec![1; 13]]);
        assert_eq!(
            mms_exact(&inst, 0, &mms_budget(), &oracle()),
            Err(MmsError::ItemBudget { items: 13, limit: 12 })
        );
        let wide = ChoreInstance::additive(vec![vec![1; 3]; 5]);
        assert_eq!(
            mms_exact(&wide, 0, &mms_budget(), &oracle()),
            Err(MmsError::AgentBudget { agents: 5, limit: 4 })
        );
        // reference falls back to bounds
        let refs = mms_reference(&wide, &mms_budget(), &oracle());
        assert!(refs.iter().all(|r| !r.is_exact()));
        assert!(refs.iter().all(|r| r.reference_value() >= int(1)));
    }

    #[test]
    fn empty_instance() {
        let inst = ChoreInstance::additive(vec![vec![]; 2]);
        let profile = mms_exact(&inst, 0, &mms_budget(), &oracle()).unwrap();
        assert_eq!(profile.value, int(0));
        assert_eq!(profile.partition, vec![Vec::<usize>::new(); 2]);
    }
}
