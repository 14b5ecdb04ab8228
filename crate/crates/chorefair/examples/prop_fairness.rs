//! Proportionality with chore removal: why a factor below n is impossible.
//!
//! An agent's proportional share is a 1/n slice of her cost for the whole
//! set. For chores, relaxations remove one chore from her bundle before
//! comparing: the cheapest removal (the lenient reading) or the costliest
//! (the strict one). This instance family shows even the lenient reading
//! cannot beat a factor of n: n agents, n+1 identical chores — someone
//! holds two, and dropping one still leaves her a full bin against a 1/n
//! proportional share.
//!
//! Run with: cargo run --example prop_fairness

use chorefair::audit::{audit_prop, Notion};
use chorefair::gen::gen_propx_instances;
use chorefair::value::{fraction_string, int, Value};
use chorefair::valuation::OracleBudget;
use chorefair::Allocation;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 3usize;
    let (bin, job) = gen_propx_instances(n);
    println!(
        "bin twin: {} agents, {} unit chores, capacity {:?}",
        bin.n,
        bin.m,
        bin.capacity(0).expect("capacity")
    );
    println!(
        "job twin: {} agents, {} unit chores, {} unit-speed machines each",
        job.n,
        job.m,
        job.speeds_of(0).expect("speeds").len()
    );

    let oracle = OracleBudget::default();

    // Sweep all n^(n+1) allocations of the bin twin. In each one, the agent
    // holding two chores keeps a whole bin even after dropping one, against
    // a proportional share of 1/n — so the cheapest-removal ratio hits n.
    let mut best_worst: Option<Value> = None;
    let mut owners = vec![0usize; bin.m];
    let total = (bin.n as u64).pow(bin.m as u32);
    for _ in 0..total {
        let mut bundles = vec![Vec::new(); bin.n];
        for (chore, &owner) in owners.iter().enumerate() {
            bundles[owner].push(chore);
        }
        let alloc = Allocation::new_for(bundles, bin.n, bin.m)?;
        let report = audit_prop(&bin, &alloc, int(n as i128), &oracle)?;
        let worst = report
            .rows
            .iter()
            .filter(|r| r.notion == Notion::Prop1)
            .filter_map(|r| r.ratio)
            .max()
            .expect("finite ratios");
        best_worst = Some(match best_worst {
            None => worst,
            Some(b) => b.min(worst),
        });
        for slot in owners.iter_mut() {
            *slot += 1;
            if *slot < bin.n {
                break;
            }
            *slot = 0;
        }
    }
    println!(
        "\nacross all {total} allocations, the best achievable worst-agent \
         cheapest-removal ratio is {}",
        fraction_string(&best_worst.expect("nonempty sweep"))
    );
    assert_eq!(best_worst, Some(int(n as i128)));

    // One concrete allocation, both notions side by side: the costliest
    // removal is at least as hard as the cheapest.
    let alloc = Allocation::new_for(vec![vec![0, 1], vec![2], vec![3]], bin.n, bin.m)?;
    let report = audit_prop(&bin, &alloc, int(n as i128), &oracle)?;
    println!("\nallocation {:?}:", (0..bin.n).map(|i| alloc.bundle(i)).collect::<Vec<_>>());
    for row in &report.rows {
        println!(
            "  agent {}, {}: cost after removal {}, proportional share {}, ratio {}",
            row.agent,
            row.notion.as_str(),
            fraction_string(&row.value),
            fraction_string(&row.reference),
            row.ratio
                .map(|r| fraction_string(&r))
                .unwrap_or_else(|| "inf".to_string()),
        );
    }
    println!("\nno allocation of this family beats a factor of n = {n}");
    Ok(())
}
