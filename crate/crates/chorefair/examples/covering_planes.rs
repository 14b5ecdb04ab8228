//! Plane-covering chores: a submodular cost where no allocation can beat a
//! factor of n.
//!
//! The chores are the points of the grid [n]^n and agent i's cost for a
//! bundle is how many distinct i-th coordinates appear in it — the number
//! of axis-aligned planes she needs to cover her points. Splitting the grid
//! by her own coordinate costs her 1 per bundle, so every maximin share is
//! 1. Yet however the grid is divided, some agent's bundle exhibits all n
//! of her coordinate values and costs n.
//!
//! Run with: cargo run --example covering_planes

use chorefair::audit::{
    certify_lower_bound, covering_full_value_witness, covering_mms_profile, CertifyMode,
    PlaneCheck,
};
use chorefair::gen::gen_covering_planes;
use chorefair::mms::MmsBudget;
use chorefair::value::{fraction_string, int};
use chorefair::valuation::{value_exact, OracleBudget};
use chorefair::Allocation;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 2;
    let inst = gen_covering_planes(n);
    println!("grid instance: {} agents, {} point chores", inst.n, inst.m);
    for (j, p) in inst.points().expect("covering instance").iter().enumerate() {
        println!("  chore {j}: point {p:?}");
    }

    println!("\neach agent can split the grid along her own axis:");
    for agent in 0..n {
        let profile = covering_mms_profile(&inst, agent)?;
        println!(
            "  agent {agent}: maximin share {} via partition {:?}",
            fraction_string(&profile.value),
            profile.partition
        );
    }

    // All 2^4 = 16 allocations of the four points, checked exhaustively:
    // in every single one, some agent pays n = 2 times her share.
    let outcome = certify_lower_bound(
        &inst,
        int(n as i128),
        CertifyMode::Exhaustive,
        &MmsBudget::default(),
        &OracleBudget::default(),
    )?;
    println!(
        "\nchecked {} allocations; the best possible worst-agent ratio is {}",
        outcome.allocations_checked,
        fraction_string(&outcome.min_max_ratio.expect("finite ratios")),
    );
    assert!(outcome.certified, "no allocation beats the factor n");

    // The direct argument on one concrete allocation: find the agent whose
    // bundle shows every one of her coordinate values.
    let alloc = Allocation::new_for(vec![vec![0, 1], vec![2, 3]], inst.n, inst.m)?;
    match covering_full_value_witness(&inst, &alloc)? {
        PlaneCheck::FullValueAgent { agent } => {
            let v = value_exact(&inst, agent, alloc.bundle(agent), &OracleBudget::default())?;
            println!(
                "\nin the allocation {:?} / {:?}, agent {agent} holds all {n} of her \
                 coordinate values and pays {}",
                alloc.bundle(0),
                alloc.bundle(1),
                fraction_string(&v.value),
            );
        }
        PlaneCheck::ContradictoryWitness { point } => {
            unreachable!("a genuine partition always exposes a full-value agent; got {point:?}")
        }
    }
    Ok(())
}
