//! A bin-packing instance that no allocation solves better than twice the
//! maximin share.
//!
//! Three agents share nine chores. Each agent packs any bundle she gets
//! into bins of capacity 43, and her own nine item sizes are tuned so that
//! she can split all nine chores into three bins — maximin share 1 — but
//! every split of the items among the three agents hands someone a bundle
//! she needs two bins for. Checking all 3^9 = 19683 allocations proves the
//! factor-2 barrier exactly.
//!
//! Run with: cargo run --example feige_lower_bound

use chorefair::audit::{certify_lower_bound, CertifyMode};
use chorefair::gen::gen_feige_binpacking;
use chorefair::mms::{mms_exact, MmsBudget};
use chorefair::value::{fraction_string, int};
use chorefair::valuation::OracleBudget;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let inst = gen_feige_binpacking();
    println!(
        "instance: {} agents, {} chores, per-agent bin capacity {:?}",
        inst.n,
        inst.m,
        (0..inst.n)
            .map(|i| inst.capacity(i).expect("bin capacity"))
            .collect::<Vec<_>>()
    );
    for agent in 0..inst.n {
        println!(
            "  agent {agent} sizes: {:?}",
            inst.sizes_of(agent).expect("sizes")
        );
    }

    println!("\neach agent alone could pack everything into 3 bins of one each:");
    let budget = MmsBudget::default();
    let oracle = OracleBudget::default();
    for agent in 0..inst.n {
        let profile = mms_exact(&inst, agent, &budget, &oracle)?;
        println!(
            "  agent {agent}: maximin share {} via {:?}",
            fraction_string(&profile.value),
            profile.partition
        );
    }

    println!("\nenumerating every allocation of the nine chores...");
    let outcome = certify_lower_bound(
        &inst,
        int(2),
        CertifyMode::Exhaustive,
        &budget,
        &oracle,
    )?;
    println!(
        "checked {} allocations; smallest achievable worst-agent ratio: {}",
        outcome.allocations_checked,
        fraction_string(&outcome.min_max_ratio.expect("finite ratios")),
    );
    if let Some(owners) = &outcome.witness {
        println!("one allocation achieving it (chore -> agent): {owners:?}");
    }
    assert!(outcome.certified);
    println!("certified: every allocation puts some agent at 2x her maximin share or worse");
    Ok(())
}
