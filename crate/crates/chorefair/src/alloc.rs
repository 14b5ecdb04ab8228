//! Allocation algorithms.
//!
//! Bin-packing instances are served by bag filling ([`bag_fill_allocate`] and
//! the [`bag_fill_allocate_v2`] variant whose bundles admit the passable-set
//! packing of [`passable_set_packing`]). Job-scheduling instances are served
//! by [`round_robin_allocate`], and each agent can arrange her bundle on her
//! own machines with [`threshold_schedule`] / [`threshold_search_schedule`].
//! [`all_or_nothing_allocate`] is the kind-agnostic baseline that hands the
//! whole set to the agent who values it least.
//!
//! The bag-filling and round-robin allocators require identical-ordering
//! (IDO) input: every agent's size row nonincreasing by item index. General
//! instances go through [`crate::ido::to_ido`] first and lift the result back
//! with [`crate::ido::lift_allocation`].

use crate::model::{Allocation, ChoreInstance, Kind};
use crate::valuation::{value_or_upper, Certificate, OracleBudget, ValueError};
use crate::value::{frac, int, Value};
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AllocError {
    #[error("allocator requires a {expected} instance, got {got}")]
    WrongKind { expected: &'static str, got: &'static str },
    #[error("allocator requires identical ordering (every agent's sizes nonincreasing)")]
    NotIdo,
    #[error("job sizes must be nonincreasing")]
    UnsortedJobs,
    #[error("machine speeds must be nonincreasing")]
    UnsortedSpeeds,
    #[error("machine speeds must be positive")]
    ZeroSpeed,
    #[error("threshold must be nonnegative")]
    NegativeThreshold,
    #[error("threshold growth factor delta must be positive")]
    NonpositiveDelta,
    #[error("threshold search needs at least one machine")]
    NoMachines,
    #[error("item {item} exceeds the bin capacity {capacity}")]
    OversizeItem { item: usize, capacity: u64 },
    #[error(transparent)]
    Value(#[from] ValueError),
}

fn require_kind(inst: &ChoreInstance, expected: Kind) -> Result<(), AllocError> {
    if inst.kind() != expected {
        return Err(AllocError::WrongKind {
            expected: expected.as_str(),
            got: inst.kind().as_str(),
        });
    }
    Ok(())
}

fn require_ido(inst: &ChoreInstance) -> Result<(), AllocError> {
    match inst.is_ido() {
        Ok(true) => Ok(()),
        _ => Err(AllocError::NotIdo),
    }
}

fn val_u128(x: u128) -> Value {
    int(i128::try_from(x).expect("size sums stay within 128 signed bits"))
}

/// Which pooled small item the current filler moves into the bag.
#[derive(Clone, Copy)]
enum SmallPick {
    /// Largest small item — the plain 2-approximation bag filling.
    Largest,
    /// Smallest small item — keeps later fillers' bags free of items that
    /// are large for the eventual receiver, enabling passable-set packing.
    Smallest,
}

/// Bag filling on an IDO bin-packing instance; every bundle packs into at
/// most twice the owner's maximin bin count.
pub fn bag_fill_allocate(inst: &ChoreInstance) -> Result<Allocation, AllocError> {
    bag_fill(inst, SmallPick::Largest)
}

/// Bag filling that always moves the smallest eligible item, so each bundle
/// additionally packs into at most ⌈(3/2)·MMS⌉ bins via
/// [`passable_set_packing`].
pub fn bag_fill_allocate_v2(inst: &ChoreInstance) -> Result<Allocation, AllocError> {
    bag_fill(inst, SmallPick::Smallest)
}

fn bag_fill(inst: &ChoreInstance, pick: SmallPick) -> Result<Allocation, AllocError> {
    require_kind(inst, Kind::BinPacking)?;
    require_ido(inst)?;
    let n = inst.n;
    let m = inst.m;
    let caps: Vec<u128> = (0..n).map(|i| inst.capacity(i).unwrap() as u128).collect();
    let sizes: Vec<&[u64]> = (0..n).map(|i| inst.sizes_of(i).unwrap()).collect();
    let totals: Vec<u128> = (0..n).map(|i| inst.total_size(i)).collect();

    let large = |i: usize, j: usize| 2 * (sizes[i][j] as u128) > caps[i];
    let small = |i: usize, j: usize| 2 * (sizes[i][j] as u128) <= caps[i];

    let mut remaining = vec![true; m];
    let mut active = vec![true; n];
    let mut active_count = n;
    let mut bundles: Vec<Vec<usize>> = vec![Vec::new(); n];

    // Items split by rank into groups of n: group g holds indices
    // [g·n, g·n + n). Under identical ordering, group g's pooled minimum
    // index is its largest pooled item for every agent at once.
    let group_count = m.div_ceil(n.max(1));
    let group_items = |g: usize| (g * n)..(((g + 1) * n).min(m));

    while active_count > 1 {
        // Bag initialization: find the deepest group holding a pooled item
        // that is large (above half a bin) for some remaining agent, then
        // seed the bag with the largest pooled item of every group up to it.
        let mut bag: Vec<usize> = Vec::new();
        let mut deepest: Option<usize> = None;
        for g in 0..group_count {
            let any_large = group_items(g)
                .any(|j| remaining[j] && (0..n).any(|i| active[i] && large(i, j)));
            if any_large {
                deepest = Some(g);
            }
        }
        if let Some(k) = deepest {
            for g in 0..=k {
                if let Some(j) = group_items(g).find(|&j| remaining[j]) {
                    remaining[j] = false;
                    bag.push(j);
                }
            }
        }

        let bag_sum =
            |i: usize, bag: &[usize]| -> u128 { bag.iter().map(|&j| sizes[i][j] as u128).sum() };

        // Agents who find the freshly seeded bag empty or made purely of
        // items filling at least half of one of their bins.
        let init_q: Vec<usize> = (0..n)
            .filter(|&i| {
                active[i]
                    && (bag.is_empty()
                        || bag.iter().all(|&j| 2 * (sizes[i][j] as u128) >= caps[i]))
            })
            .collect();

        // Bag filling: while the lowest-index remaining agent still finds the
        // bag within her proportional share of the whole set (for the
        // ORIGINAL n agents) and has pooled small items, she adds one.
        let mut last_filler: Option<usize> = None;
        loop {
            let filler = (0..n).find(|&i| {
                active[i]
                    && (n as u128) * bag_sum(i, &bag) <= totals[i]
                    && (0..m).any(|j| remaining[j] && small(i, j))
            });
            let Some(i) = filler else { break };
            // Within her small items (an index suffix under IDO) the lowest
            // remaining index is the largest, the highest the smallest.
            let j = match pick {
                SmallPick::Largest => (0..m).find(|&j| remaining[j] && small(i, j)),
                SmallPick::Smallest => (0..m).rev().find(|&j| remaining[j] && small(i, j)),
            }
            .expect("filler selection requires a pooled small item");
            remaining[j] = false;
            bag.push(j);
            last_filler = Some(i);
        }

        // The bag goes to whoever added last; an untouched bag goes to an
        // agent seeing only half-bin-or-larger items, who always exists: the
        // agent for whom the deepest group held a large pooled item sees
        // every seed (all of lower index, hence no smaller) as large too.
        let receiver = match last_filler {
            Some(i) => i,
            None => *init_q
                .first()
                .expect("a seeded bag is all-large for the agent who set its depth"),
        };
        bundles[receiver] = bag;
        active[receiver] = false;
        active_count -= 1;
    }

    let last = (0..n).find(|&i| active[i]).expect("one agent remains");
    bundles[last] = (0..m).filter(|&j| remaining[j]).collect();
    Ok(Allocation::new_for(bundles, n, m).expect("bag filling hands out every item exactly once"))
}

/// Packs one agent's bundle (her `sizes` row plus bin `capacity`) through
/// passable sets: each item above half capacity seeds its own set, the rest
/// fill sets until each overflows by exactly one removable small item, and
/// the removed items are re-packed first-fit (any two of them share a bin).
///
/// On bundles produced by [`bag_fill_allocate_v2`] the bin count is at most
/// ⌈(3/2)·MMS⌉ for this agent.
pub fn passable_set_packing(
    sizes: &[u64],
    capacity: u64,
    bundle: &[usize],
) -> Result<Certificate, AllocError> {
    let mut seen = vec![false; sizes.len()];
    for &j in bundle {
        if j >= sizes.len() {
            return Err(ValueError::BadItem { item: j, m: sizes.len() }.into());
        }
        if seen[j] {
            return Err(ValueError::DuplicateItem { item: j }.into());
        }
        seen[j] = true;
        if sizes[j] > capacity {
            return Err(AllocError::OversizeItem { item: j, capacity });
        }
    }

    let c = capacity as u128;
    let is_large = |j: usize| 2 * (sizes[j] as u128) > c;
    let by_size_desc = |&a: &usize, &b: &usize| sizes[b].cmp(&sizes[a]).then(a.cmp(&b));
    let mut larges: Vec<usize> = bundle.iter().copied().filter(|&j| is_large(j)).collect();
    larges.sort_by(by_size_desc);
    let mut smalls: Vec<usize> = bundle.iter().copied().filter(|&j| !is_large(j)).collect();
    smalls.sort_by(by_size_desc);

    struct SetState {
        items: Vec<usize>,
        load: u128,
        overflowed: bool,
    }
    let mut sets: Vec<SetState> = larges
        .iter()
        .map(|&j| SetState { items: vec![j], load: sizes[j] as u128, overflowed: false })
        .collect();

    // Fill small items (largest first) into one set after another; a set is
    // done once its total first exceeds the capacity, because dropping the
    // small item that tipped it over makes it fit again.
    let mut cursor = 0usize;
    for &j in &smalls {
        if cursor == sets.len() {
            sets.push(SetState { items: Vec::new(), load: 0, overflowed: false });
        }
        let set = &mut sets[cursor];
        set.items.push(j);
        set.load += sizes[j] as u128;
        if set.load > c {
            set.overflowed = true;
            cursor += 1;
        }
    }

    let mut bins: Vec<(Vec<usize>, u128)> = Vec::new();
    let mut removed: Vec<usize> = Vec::new();
    for set in sets {
        let mut items = set.items;
        if set.overflowed {
            let r = items.pop().expect("an overflowing set holds the item that tipped it");
            bins.push((items, set.load - sizes[r] as u128));
            removed.push(r);
        } else if !items.is_empty() {
            bins.push((items, set.load));
        }
    }
    for r in removed {
        let s = sizes[r] as u128;
        match bins.iter_mut().find(|(_, load)| load + s <= c) {
            Some((items, load)) => {
                items.push(r);
                *load += s;
            }
            None => bins.push((vec![r], s)),
        }
    }
    Ok(Certificate::Packing { bins: bins.into_iter().map(|(items, _)| items).collect() })
}

/// Deals the items of an IDO job-scheduling instance in rank order: item j
/// goes to agent j mod n, so every agent picks the largest remaining job on
/// her turn. Each bundle's exact makespan is at most twice the owner's
/// maximin share.
pub fn round_robin_allocate(inst: &ChoreInstance) -> Result<Allocation, AllocError> {
    require_kind(inst, Kind::JobScheduling)?;
    require_ido(inst)?;
    let mut bundles: Vec<Vec<usize>> = vec![Vec::new(); inst.n];
    for j in 0..inst.m {
        bundles[j % inst.n].push(j);
    }
    Ok(Allocation::new_for(bundles, inst.n, inst.m).expect("dealing assigns every item once"))
}

/// One agent's job-to-machine assignment under a threshold τ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdSchedule {
    pub tau: Value,
    /// Per-machine capacity c_l = τ·ρ_l.
    pub capacities: Vec<Value>,
    /// Job indices (into the input slice) per machine, nonincreasing sizes.
    pub machines: Vec<Vec<usize>>,
    /// Total size assigned to each machine.
    pub loads: Vec<u128>,
    /// Jobs no machine absorbed.
    pub leftover: Vec<usize>,
    /// Max over machines of load divided by speed.
    pub makespan: Value,
}

/// Walks jobs largest-first with a single cursor; machine l (fastest first)
/// absorbs jobs while its load plus the next job stays within 2·τ·ρ_l, so
/// every completion time is at most 2τ. With τ at least the agent's maximin
/// share, a round-robin bundle leaves no leftover.
pub fn threshold_schedule(
    jobs: &[u64],
    speeds: &[u64],
    tau: Value,
) -> Result<ThresholdSchedule, AllocError> {
    if jobs.windows(2).any(|w| w[0] < w[1]) {
        return Err(AllocError::UnsortedJobs);
    }
    if speeds.windows(2).any(|w| w[0] < w[1]) {
        return Err(AllocError::UnsortedSpeeds);
    }
    if speeds.iter().any(|&r| r == 0) {
        return Err(AllocError::ZeroSpeed);
    }
    if tau < Value::zero() {
        return Err(AllocError::NegativeThreshold);
    }
    let two = int(2);
    let capacities: Vec<Value> = speeds.iter().map(|&r| tau * int(r as i128)).collect();
    let mut machines: Vec<Vec<usize>> = vec![Vec::new(); speeds.len()];
    let mut loads: Vec<u128> = vec![0; speeds.len()];
    let mut g = 0usize;
    for l in 0..speeds.len() {
        while g < jobs.len() && val_u128(loads[l] + jobs[g] as u128) <= two * capacities[l] {
            machines[l].push(g);
            loads[l] += jobs[g] as u128;
            g += 1;
        }
    }
    let leftover: Vec<usize> = (g..jobs.len()).collect();
    let makespan = (0..speeds.len())
        .map(|l| val_u128(loads[l]) / int(speeds[l] as i128))
        .max()
        .unwrap_or_else(Value::zero);
    Ok(ThresholdSchedule { tau, capacities, machines, loads, leftover, makespan })
}

/// Result of the geometric threshold search: the first threshold that
/// schedules every job, its schedule, and how many thresholds were tried.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdSearch {
    pub tau: Value,
    pub schedule: ThresholdSchedule,
    pub iterations: usize,
}

/// Starts at τ₀ = (largest job)/(fastest speed) — never above the maximin
/// share — and multiplies by (1+δ) until [`threshold_schedule`] absorbs every
/// job. The first τ at or above the maximin share succeeds, so the answer is
/// within a factor (1+δ) of it and needs at most ⌈log₁₊δ(MMS/τ₀)⌉ + 1 tries.
/// An empty job set succeeds immediately at τ = 0.
pub fn threshold_search_schedule(
    jobs: &[u64],
    speeds: &[u64],
    delta: Value,
) -> Result<ThresholdSearch, AllocError> {
    if delta <= Value::zero() {
        return Err(AllocError::NonpositiveDelta);
    }
    if jobs.is_empty() {
        let schedule = threshold_schedule(jobs, speeds, Value::zero())?;
        return Ok(ThresholdSearch { tau: Value::zero(), schedule, iterations: 1 });
    }
    if speeds.is_empty() {
        return Err(AllocError::NoMachines);
    }
    if speeds.contains(&0) {
        return Err(AllocError::ZeroSpeed);
    }
    let growth = int(1) + delta;
    let mut tau = frac(jobs[0] as i128, speeds[0] as i128);
    let mut iterations = 0usize;
    loop {
        iterations += 1;
        let schedule = threshold_schedule(jobs, speeds, tau)?;
        if schedule.leftover.is_empty() {
            return Ok(ThresholdSearch { tau, schedule, iterations });
        }
        tau = tau * growth;
    }
}

/// Hands every item to the agent with the cheapest view of the whole set
/// (heuristic value when the exact oracle is over budget; ties to the lowest
/// index); everyone else receives nothing. The receiver's value is at most
/// n times her maximin share by subadditivity.
pub fn all_or_nothing_allocate(
    inst: &ChoreInstance,
    budget: &OracleBudget,
) -> Result<Allocation, AllocError> {
    let all: Vec<usize> = (0..inst.m).collect();
    let mut best: Option<(Value, usize)> = None;
    for i in 0..inst.n {
        let (valued, _) = value_or_upper(inst, i, &all, budget)?;
        if best.as_ref().is_none_or(|(v, _)| valued.value < *v) {
            best = Some((valued.value, i));
        }
    }
    let receiver = best.expect("instances have at least one agent").1;
    let mut bundles: Vec<Vec<usize>> = vec![Vec::new(); inst.n];
    bundles[receiver] = all;
    Ok(Allocation::new_for(bundles, inst.n, inst.m).expect("one bundle holds every item"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{
        gen_covering_planes, gen_feige_binpacking, gen_random_binpacking,
        gen_random_jobscheduling, into_ido,
    };
    use crate::ido::{lift_allocation, to_ido};
    use crate::mms::{mms_exact, MmsBudget};
    use crate::model::ChoreInstance;
    use crate::valuation::{value_exact, verify_certificate};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn budget() -> OracleBudget {
        OracleBudget::default()
    }

    #[test]
    fn threshold_partial_fit_leaves_tail_jobs() {
        let sched = threshold_schedule(&[5, 4], &[1], int(4)).unwrap();
        assert_eq!(sched.machines, vec![vec![0]]);
        assert_eq!(sched.leftover, vec![1]);
        assert_eq!(sched.capacities, vec![int(4)]);
        assert_eq!(sched.makespan, int(5));
    }

    #[test]
    fn threshold_high_tau_puts_everything_on_fastest_machine() {
        let sched = threshold_schedule(&[3, 2, 1], &[2, 1], int(3)).unwrap();
        assert_eq!(sched.machines, vec![vec![0, 1, 2], vec![]]);
        assert!(sched.leftover.is_empty());
        assert_eq!(sched.makespan, int(3));
    }

    #[test]
    fn threshold_equal_jobs_pack_two_per_machine_at_tau0() {
        // Four equal jobs on four unit machines at τ = job size: each machine
        // absorbs while load + next ≤ 2τ, so machines take two jobs apiece
        // and the rest stay empty — no leftover, loads exactly 2τ·ρ.
        let sched = threshold_schedule(&[4, 4, 4, 4], &[1, 1, 1, 1], int(4)).unwrap();
        assert!(sched.leftover.is_empty());
        assert_eq!(sched.machines, vec![vec![0, 1], vec![2, 3], vec![], vec![]]);
        for l in 0..4 {
            assert!(val_u128(sched.loads[l]) <= int(2) * sched.capacities[l]);
        }
        let search = threshold_search_schedule(&[4, 4, 4, 4], &[1, 1, 1, 1], frac(1, 10)).unwrap();
        assert_eq!(search.tau, int(4));
        assert_eq!(search.iterations, 1);
        assert!(search.schedule.leftover.is_empty());
    }

    #[test]
    fn threshold_rejects_unsorted_or_bad_inputs() {
        assert_eq!(threshold_schedule(&[3, 4], &[1], int(1)), Err(AllocError::UnsortedJobs));
        assert_eq!(threshold_schedule(&[4, 3], &[1, 2], int(1)), Err(AllocError::UnsortedSpeeds));
        assert_eq!(threshold_schedule(&[4], &[1, 0], int(1)), Err(AllocError::ZeroSpeed));
        assert_eq!(threshold_schedule(&[4], &[1], int(-1)), Err(AllocError::NegativeThreshold));
        assert_eq!(
            threshold_search_schedule(&[4], &[1], Value::zero()),
            Err(AllocError::NonpositiveDelta)
        );
        assert_eq!(threshold_search_schedule(&[4], &[], frac(1, 10)), Err(AllocError::NoMachines));
    }

    #[test]
    fn threshold_loads_never_exceed_twice_capacity_on_random_inputs() {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..200 {
            let m = rng.gen_range(0..=12);
            let mut jobs: Vec<u64> = (0..m).map(|_| rng.gen_range(1..=50)).collect();
            jobs.sort_unstable_by(|a, b| b.cmp(a));
            let k = rng.gen_range(1..=4);
            let mut speeds: Vec<u64> = (0..k).map(|_| rng.gen_range(1..=5)).collect();
            speeds.sort_unstable_by(|a, b| b.cmp(a));
            let tau = frac(rng.gen_range(0..=120), rng.gen_range(1..=4));
            let sched = threshold_schedule(&jobs, &speeds, tau).unwrap();
            let mut seen = vec![false; m];
            for (l, bundle) in sched.machines.iter().enumerate() {
                assert!(val_u128(sched.loads[l]) <= int(2) * sched.capacities[l]);
                assert_eq!(sched.capacities[l], tau * int(speeds[l] as i128));
                for &j in bundle {
                    seen[j] = true;
                }
            }
            // A single cursor walks the job list, so leftovers are the tail
            // beyond everything that was placed.
            let placed = seen.iter().filter(|&&s| s).count();
            assert!(seen[..placed].iter().all(|&s| s));
            assert_eq!(sched.leftover, (placed..m).collect::<Vec<_>>());
        }
    }

    #[test]
    fn search_single_job_succeeds_at_tau0() {
        let search = threshold_search_schedule(&[7], &[3, 1], frac(1, 10)).unwrap();
        assert_eq!(search.tau, frac(7, 3));
        assert_eq!(search.iterations, 1);
        assert_eq!(search.schedule.machines, vec![vec![0], vec![]]);
        assert!(search.schedule.leftover.is_empty());
    }

    #[test]
    fn search_grows_geometrically_until_everything_fits() {
        // One unit-speed machine, jobs 5+5+5: τ₀ = 5 fits two jobs (2τ = 10);
        // all three need 2τ ≥ 15, first reached at 5·1.1⁵ = 161051/20000.
        let search = threshold_search_schedule(&[5, 5, 5], &[1], frac(1, 10)).unwrap();
        assert_eq!(search.iterations, 6);
        assert_eq!(search.tau, frac(161051, 20000));
        assert!(search.schedule.leftover.is_empty());
        assert_eq!(search.schedule.makespan, int(15));
        assert!(search.schedule.makespan <= int(2) * search.tau);
    }

    #[test]
    fn search_empty_jobs_trivially_succeeds() {
        let search = threshold_search_schedule(&[], &[2, 1], frac(1, 10)).unwrap();
        assert_eq!(search.tau, Value::zero());
        assert_eq!(search.iterations, 1);
        assert_eq!(search.schedule.machines, vec![Vec::<usize>::new(), Vec::new()]);
        assert!(search.schedule.leftover.is_empty());
        assert_eq!(search.schedule.makespan, Value::zero());
    }

    #[test]
    fn round_robin_deals_ranks_in_turn() {
        let inst = ChoreInstance::job_scheduling(
            vec![vec![9, 7, 5, 3, 1], vec![8, 6, 4, 2, 1]],
            vec![vec![1], vec![2, 1]],
        );
        let alloc = round_robin_allocate(&inst).unwrap();
        assert_eq!(alloc.bundles(), &[vec![0, 2, 4], vec![1, 3]]);
    }

    #[test]
    fn round_robin_single_agent_takes_all() {
        let inst = ChoreInstance::job_scheduling(vec![vec![5, 4, 3]], vec![vec![2]]);
        let alloc = round_robin_allocate(&inst).unwrap();
        assert_eq!(alloc.bundles(), &[vec![0, 1, 2]]);
    }

    #[test]
    fn round_robin_rejects_wrong_inputs() {
        let bin = ChoreInstance::bin_packing(vec![vec![3, 2]], vec![4]);
        assert!(matches!(round_robin_allocate(&bin), Err(AllocError::WrongKind { .. })));
        let unsorted =
            ChoreInstance::job_scheduling(vec![vec![1, 2], vec![2, 1]], vec![vec![1], vec![1]]);
        assert_eq!(round_robin_allocate(&unsorted), Err(AllocError::NotIdo));
    }

    #[test]
    fn round_robin_bundles_hold_every_nth_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let inst = into_ido(gen_random_jobscheduling(3, 9, 3, 5, 9, &mut rng));
            let alloc = round_robin_allocate(&inst).unwrap();
            for (agent, bundle) in alloc.bundles().iter().enumerate() {
                for (round, &j) in bundle.iter().enumerate() {
                    assert_eq!(j, round * inst.n + agent);
                }
            }
        }
    }

    #[test]
    fn threshold_at_exact_mms_schedules_whole_round_robin_bundle() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..30 {
            let inst = into_ido(gen_random_jobscheduling(2, 8, 3, 5, 9, &mut rng));
            let alloc = round_robin_allocate(&inst).unwrap();
            for agent in 0..inst.n {
                let mms = mms_exact(&inst, agent, &MmsBudget::default(), &budget()).unwrap();
                let jobs: Vec<u64> = alloc.bundle(agent)
                    .iter()
                    .map(|&j| inst.sizes_of(agent).unwrap()[j])
                    .collect();
                let speeds = inst.speeds_of(agent).unwrap();
                let sched = threshold_schedule(&jobs, speeds, mms.value).unwrap();
                assert!(sched.leftover.is_empty(), "leftover at tau = MMS");
                assert!(sched.makespan <= int(2) * mms.value);
            }
        }
    }

    #[test]
    fn bag_fill_single_agent_takes_everything() {
        let inst = ChoreInstance::bin_packing(vec![vec![4, 3, 2]], vec![5]);
        let alloc = bag_fill_allocate(&inst).unwrap();
        assert_eq!(alloc.bundles(), &[vec![0, 1, 2]]);
    }

    #[test]
    fn bag_fill_rejects_wrong_inputs() {
        let job = ChoreInstance::job_scheduling(vec![vec![2, 1]], vec![vec![1]]);
        assert!(matches!(bag_fill_allocate(&job), Err(AllocError::WrongKind { .. })));
        let unsorted = ChoreInstance::bin_packing(vec![vec![1, 2], vec![2, 1]], vec![3, 3]);
        assert_eq!(bag_fill_allocate(&unsorted), Err(AllocError::NotIdo));
    }

    #[test]
    fn bag_fill_on_hard_three_agent_instance_stays_within_two_bins() {
        let original = gen_feige_binpacking();
        let (ido, mapping) = to_ido(&original).unwrap();
        for allocate in [bag_fill_allocate, bag_fill_allocate_v2] {
            let alloc = allocate(&ido).unwrap();
            for agent in 0..ido.n {
                let v = value_exact(&ido, agent, alloc.bundle(agent), &budget()).unwrap();
                assert!(v.value <= int(2), "agent {agent} needs more than 2 bins");
            }
            let lifted = lift_allocation(&original, &alloc).unwrap();
            let _ = &mapping;
            for agent in 0..original.n {
                let v = value_exact(&original, agent, lifted.bundle(agent), &budget()).unwrap();
                assert!(v.value <= int(2));
            }
        }
    }

    #[test]
    fn bag_fill_random_instances_stay_within_twice_mms() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..40 {
            let inst = into_ido(gen_random_binpacking(3, 8, 30, &mut rng));
            let mms: Vec<Value> = (0..inst.n)
                .map(|i| mms_exact(&inst, i, &MmsBudget::default(), &budget()).unwrap().value)
                .collect();
            let alloc = bag_fill_allocate(&inst).unwrap();
            let alloc2 = bag_fill_allocate_v2(&inst).unwrap();
            for agent in 0..inst.n {
                let v = value_exact(&inst, agent, alloc.bundle(agent), &budget()).unwrap();
                assert!(v.value <= int(2) * mms[agent]);
                let v2 = value_exact(&inst, agent, alloc2.bundle(agent), &budget()).unwrap();
                assert!(v2.value <= int(2) * mms[agent]);
            }
        }
    }

    #[test]
    fn half_bin_item_census_respects_maximin_capacity() {
        // Items above half capacity need a bin each, so an agent with MMS
        // bins per bundle sees at most n·MMS of them in the whole set.
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for _ in 0..30 {
            let inst = into_ido(gen_random_binpacking(3, 7, 20, &mut rng));
            for agent in 0..inst.n {
                let mms = mms_exact(&inst, agent, &MmsBudget::default(), &budget()).unwrap();
                let c = inst.capacity(agent).unwrap() as u128;
                let larges = inst.sizes_of(agent).unwrap()
                    .iter()
                    .filter(|&&s| 2 * (s as u128) > c)
                    .count();
                assert!(int(larges as i128) <= int(inst.n as i128) * mms.value);
            }
        }
    }

    #[test]
    fn passable_packing_traces_overflow_then_refills() {
        let cert = passable_set_packing(&[6, 5, 5], 10, &[0, 1, 2]).unwrap();
        let Certificate::Packing { bins } = &cert else { panic!("packing certificate") };
        assert_eq!(bins, &vec![vec![0], vec![2, 1]]);
        let inst = ChoreInstance::bin_packing(vec![vec![6, 5, 5]], vec![10]);
        assert_eq!(verify_certificate(&inst, 0, &[0, 1, 2], &cert).unwrap(), int(2));
    }

    #[test]
    fn passable_packing_runs_one_bin_per_large_item() {
        let cert = passable_set_packing(&[7, 6], 10, &[0, 1]).unwrap();
        let Certificate::Packing { bins } = cert else { panic!("packing certificate") };
        assert_eq!(bins, vec![vec![0], vec![1]]);
    }

    #[test]
    fn passable_packing_empty_bundle_uses_no_bins() {
        let cert = passable_set_packing(&[3, 2], 5, &[]).unwrap();
        let Certificate::Packing { bins } = cert else { panic!("packing certificate") };
        assert!(bins.is_empty());
    }

    #[test]
    fn passable_packing_rejects_bad_bundles() {
        assert_eq!(
            passable_set_packing(&[11], 10, &[0]),
            Err(AllocError::OversizeItem { item: 0, capacity: 10 })
        );
        assert!(matches!(
            passable_set_packing(&[1], 10, &[1]),
            Err(AllocError::Value(ValueError::BadItem { .. }))
        ));
        assert!(matches!(
            passable_set_packing(&[1], 10, &[0, 0]),
            Err(AllocError::Value(ValueError::DuplicateItem { .. }))
        ));
    }

    #[test]
    fn passable_packing_is_always_a_valid_packing() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for _ in 0..100 {
            let inst = gen_random_binpacking(1, 9, 25, &mut rng);
            let sizes = inst.sizes_of(0).unwrap();
            let capacity = inst.capacity(0).unwrap();
            let bundle: Vec<usize> = (0..inst.m).collect();
            let cert = passable_set_packing(sizes, capacity, &bundle).unwrap();
            let proved = verify_certificate(&inst, 0, &bundle, &cert).unwrap();
            let exact = value_exact(&inst, 0, &bundle, &budget()).unwrap();
            assert!(proved >= exact.value, "certificate bins below the optimum");
            let again = passable_set_packing(sizes, capacity, &bundle).unwrap();
            assert_eq!(cert, again, "packing must be deterministic");
        }
    }

    #[test]
    fn bag_fill_v2_bundles_admit_passable_packing_within_three_halves() {
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        for _ in 0..40 {
            let inst = into_ido(gen_random_binpacking(3, 8, 30, &mut rng));
            let alloc = bag_fill_allocate_v2(&inst).unwrap();
            for agent in 0..inst.n {
                let mms = mms_exact(&inst, agent, &MmsBudget::default(), &budget()).unwrap();
                let cert = passable_set_packing(
                    inst.sizes_of(agent).unwrap(),
                    inst.capacity(agent).unwrap(),
                    alloc.bundle(agent),
                )
                .unwrap();
                let proved = verify_certificate(&inst, agent, alloc.bundle(agent), &cert).unwrap();
                let bound = crate::value::ceil_value(frac(3, 2) * mms.value);
                assert!(proved <= bound, "passable packing above ⌈1.5·MMS⌉");
            }
        }
    }

    #[test]
    fn all_or_nothing_gives_whole_grid_to_first_agent() {
        let inst = gen_covering_planes(2);
        let alloc = all_or_nothing_allocate(&inst, &budget()).unwrap();
        assert_eq!(alloc.bundle(0).len(), inst.m);
        assert!(alloc.bundle(1).is_empty());
        let all: Vec<usize> = (0..inst.m).collect();
        let v = value_exact(&inst, 0, &all, &budget()).unwrap();
        assert_eq!(v.value, int(2));
        let empty = value_exact(&inst, 1, &[], &budget()).unwrap();
        assert_eq!(empty.value, int(0));
    }

    #[test]
    fn all_or_nothing_prefers_the_cheapest_view() {
        let inst = ChoreInstance::additive(vec![vec![5, 5], vec![1, 2]]);
        let alloc = all_or_nothing_allocate(&inst, &budget()).unwrap();
        assert_eq!(alloc.bundle(1), &[0, 1]);
        assert!(alloc.bundle(0).is_empty());
    }
}
