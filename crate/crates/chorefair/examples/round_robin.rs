//! Round robin for makespan costs: twice the maximin share, almost for free.
//!
//! Each agent owns a few machines (speeds sorted fastest first) and her
//! cost for a bundle is the makespan of scheduling it optimally on her own
//! machines. When every agent ranks the chores in the same size order,
//! dealing chores out round-robin — largest first, one per agent per pass —
//! keeps everyone within twice her maximin share.
//!
//! Run with: cargo run --example round_robin

use chorefair::alloc::round_robin_allocate;
use chorefair::audit::audit_mms;
use chorefair::mms::{mms_reference, MmsBudget};
use chorefair::model::ChoreInstance;
use chorefair::value::{fraction_string, int};
use chorefair::valuation::{value_exact, Certificate, OracleBudget};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Three agents, seven chores in shared descending order; machine parks
    // differ in count and speed.
    let sizes = vec![
        vec![9, 8, 6, 5, 3, 2, 1],
        vec![9, 8, 6, 5, 3, 2, 1],
        vec![9, 8, 6, 5, 3, 2, 1],
    ];
    let speeds = vec![vec![3, 1], vec![2, 2], vec![4]];
    let inst = ChoreInstance::job_scheduling(sizes, speeds);
    inst.validate()?;
    println!(
        "instance: {} agents, {} chores, sizes {:?}",
        inst.n,
        inst.m,
        inst.sizes_of(0).expect("sizes")
    );
    for agent in 0..inst.n {
        println!(
            "  agent {agent} machine speeds: {:?}",
            inst.speeds_of(agent).expect("speeds")
        );
    }

    let alloc = round_robin_allocate(&inst)?;
    let oracle = OracleBudget::default();
    println!("\nround robin dealt (chore k goes to agent k mod n):");
    for agent in 0..inst.n {
        let v = value_exact(&inst, agent, alloc.bundle(agent), &oracle)?;
        let machines = match &v.certificate {
            Certificate::Schedule { machines, .. } => format!("{machines:?}"),
            other => unreachable!("schedule expected, got {other:?}"),
        };
        println!(
            "  agent {agent}: chores {:?}, optimal makespan {} with machine loads {}",
            alloc.bundle(agent),
            fraction_string(&v.value),
            machines,
        );
    }

    let refs = mms_reference(&inst, &MmsBudget::default(), &oracle);
    let report = audit_mms(&inst, &alloc, &refs, int(2), &oracle)?;
    println!("\naudit against 2x maximin share:");
    for row in &report.rows {
        println!(
            "  agent {}: makespan {}, maximin share {}, ratio {} -> {}",
            row.agent,
            fraction_string(&row.value),
            fraction_string(&row.reference),
            row.ratio
                .map(|r| fraction_string(&r))
                .unwrap_or_else(|| "inf".to_string()),
            if row.verdict { "pass" } else { "fail" },
        );
    }
    assert!(report.pass);
    println!("\nevery agent is within twice her maximin share");
    Ok(())
}
