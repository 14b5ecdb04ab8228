//! Maximin shares: exact values under a search budget, certified bounds
//! beyond it.
//!
//! An agent's maximin share is the best worst-bundle cost she could lock in
//! by partitioning all chores into n bundles herself and receiving the
//! worst one. Computing it exactly means searching every partition, so the
//! solver takes budgets; past them it falls back to a sandwich of cheap,
//! certified bounds (averaging floors below, greedy packings above).
//!
//! Run with: cargo run --example mms_bounds

use chorefair::mms::{mms_bounds, mms_exact, mms_reference, AgentMms, MmsBudget};
use chorefair::model::ChoreInstance;
use chorefair::value::fraction_string;
use chorefair::valuation::OracleBudget;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let oracle = OracleBudget::default();
    let budget = MmsBudget::default();

    // Small enough for the exact partition search.
    let small = ChoreInstance::bin_packing(
        vec![vec![7, 6, 5, 4, 3, 2], vec![7, 6, 5, 4, 3, 2]],
        vec![9, 12],
    );
    small.validate()?;
    println!("small instance ({} chores): exact search", small.m);
    for agent in 0..small.n {
        let p = mms_exact(&small, agent, &budget, &oracle)?;
        println!(
            "  agent {agent}: maximin share {} attained by partition {:?}",
            fraction_string(&p.value),
            p.partition
        );
    }

    // Too many chores for the partition search: bounds take over.
    let big = ChoreInstance::job_scheduling(
        vec![vec![9, 9, 8, 7, 7, 6, 5, 5, 4, 3, 2, 2, 1, 1, 1, 1]; 3],
        vec![vec![2, 1], vec![3], vec![1, 1, 1]],
    );
    big.validate()?;
    println!("\nbig instance ({} chores): certified bounds", big.m);
    for agent in 0..big.n {
        let b = mms_bounds(&big, agent, &oracle);
        println!(
            "  agent {agent}: {} <= maximin share <= {}  (lower bound by {})",
            fraction_string(&b.lower),
            fraction_string(&b.upper),
            b.method.as_str()
        );
        assert!(b.lower <= b.upper);
    }

    // mms_reference picks per agent automatically: exact when feasible,
    // bounds otherwise. Auditors consume the result either way.
    println!("\nautomatic per-agent choice:");
    for (agent, r) in mms_reference(&big, &budget, &oracle).iter().enumerate() {
        match r {
            AgentMms::Exact(p) => {
                println!("  agent {agent}: exact {}", fraction_string(&p.value))
            }
            AgentMms::Bounds(b) => println!(
                "  agent {agent}: bounded to [{}, {}]",
                fraction_string(&b.lower),
                fraction_string(&b.upper)
            ),
        }
    }
    Ok(())
}
