//! Instance generators: the structured lower-bound families and seeded
//! random instances for sweeps and property checks.

use rand::Rng;

use crate::model::ChoreInstance;

/// Plane-covering instance: all `n^n` lattice points of `[n]^n` in
/// lexicographic order, one item per point. Agent `i` prices a set by how
/// many distinct `i`-th coordinates it touches, so her own coordinate
/// partition shows an MMS of exactly one plane — yet no n-partition can keep
/// every agent below `n` planes.
pub fn gen_covering_planes(n: usize) -> ChoreInstance {
    assert!(n >= 1, "need at least one agent");
    let mut points = Vec::with_capacity(n.pow(n as u32));
    let mut point = vec![1u32; n];
    loop {
        points.push(point.clone());
        // next point in lexicographic order, last coordinate fastest
        let mut pos = n;
        loop {
            if pos == 0 {
                return ChoreInstance::covering_plane(n, points);
            }
            pos -= 1;
            if point[pos] < n as u32 {
                point[pos] += 1;
                break;
            }
            point[pos] = 1;
        }
    }
}

/// Three-agent, nine-item bin-packing instance with capacity 43 per agent.
/// Each agent can split her own sizes into three exact-capacity bundles
/// (so her MMS is one bin), but the rows are perturbed against each other so
/// that in every allocation someone's bundle exceeds one bin.
pub fn gen_feige_binpacking() -> ChoreInstance {
    let sizes = vec![
        vec![6, 15, 22, 26, 10, 7, 12, 19, 12],
        vec![6, 15, 23, 26, 10, 8, 11, 18, 12],
        vec![6, 16, 22, 27, 10, 7, 11, 18, 12],
    ];
    ChoreInstance::bin_packing(sizes, vec![43, 43, 43])
}

/// Proportionality lower-bound pair.
///
/// Bin instance: `n` agents, `n+1` unit-size items, capacity `n+1` — all of
/// `M` fits one bin, so the proportional share is `1/n` of a bin, yet any
/// agent holding two or more items still needs a full bin after removing one.
///
/// Job instance: `2n` agents, `2n+1` unit jobs, `2n` unit-speed machines per
/// agent — the whole set has makespan 2, the proportional share is `1/n`,
/// and the pigeonholed agent with two jobs keeps makespan 1 after removing
/// either of them.
pub fn gen_propx_instances(n: usize) -> (ChoreInstance, ChoreInstance) {
    assert!(n >= 1, "need at least one agent");
    let bin = ChoreInstance::bin_packing(vec![vec![1; n + 1]; n], vec![(n + 1) as u64; n]);
    let job = ChoreInstance::job_scheduling(vec![vec![1; 2 * n + 1]; 2 * n], vec![vec![1; 2 * n]; 2 * n]);
    (bin, job)
}

/// Random bin-packing instance: capacities uniform in `[1, cap_max]`, sizes
/// uniform in `[1, c_i]` so every item fits a bin.
pub fn gen_random_binpacking(n: usize, m: usize, cap_max: u64, rng: &mut impl Rng) -> ChoreInstance {
    let capacities: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=cap_max)).collect();
    let sizes = capacities
        .iter()
        .map(|&c| (0..m).map(|_| rng.gen_range(1..=c)).collect())
        .collect();
    ChoreInstance::bin_packing(sizes, capacities)
}

/// Random job-scheduling instance: per agent `1..=k_max` machines with speeds
/// uniform in `[1, speed_max]` (sorted fastest first), sizes in `[1, size_max]`.
pub fn gen_random_jobscheduling(
    n: usize,
    m: usize,
    k_max: usize,
    speed_max: u64,
    size_max: u64,
    rng: &mut impl Rng,
) -> ChoreInstance {
    let speeds = (0..n)
        .map(|_| {
            let k = rng.gen_range(1..=k_max);
            let mut row: Vec<u64> = (0..k).map(|_| rng.gen_range(1..=speed_max)).collect();
            row.sort_unstable_by(|a, b| b.cmp(a));
            row
        })
        .collect();
    let sizes = (0..n)
        .map(|_| (0..m).map(|_| rng.gen_range(1..=size_max)).collect())
        .collect();
    ChoreInstance::job_scheduling(sizes, speeds)
}

/// Sorts each size row descending in place, yielding an instance where all
/// agents rank items identically by index.
pub fn into_ido(mut inst: ChoreInstance) -> ChoreInstance {
    for row in &mut inst.sizes {
        row.sort_unstable_by(|a, b| b.cmp(a));
    }
    inst
}
