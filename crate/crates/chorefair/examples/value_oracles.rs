//! The bundle-cost oracles: exact values, verifiable certificates, and the
//! structure the costs obey.
//!
//! Four cost models share one interface. Bin packing (fewest bins of a
//! per-agent capacity), job scheduling (optimal makespan on the agent's
//! own machines), plane covering (distinct own-axis coordinates), and
//! plain additive sums. Every exact evaluation returns a certificate a
//! separate verifier can recount, and all four models are subadditive —
//! covering and additive costs are submodular on top.
//!
//! Run with: cargo run --example value_oracles

use chorefair::gen::gen_covering_planes;
use chorefair::model::ChoreInstance;
use chorefair::value::fraction_string;
use chorefair::valuation::{
    check_subadditive_submodular, value_exact, value_upper_heuristic, verify_certificate,
    OracleBudget,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let oracle = OracleBudget::default();

    // Bin packing: {6,5,5} into bins of 10 needs 2 bins, not 3.
    let packing = ChoreInstance::bin_packing(vec![vec![6, 5, 5]], vec![10]);
    let v = value_exact(&packing, 0, &[0, 1, 2], &oracle)?;
    println!(
        "bin packing {{6,5,5}} with capacity 10: {} bins, witness {:?}",
        fraction_string(&v.value),
        v.certificate
    );
    let recounted = verify_certificate(&packing, 0, &[0, 1, 2], &v.certificate)?;
    assert_eq!(recounted, v.value);
    println!("  certificate recounts to {}", fraction_string(&recounted));

    // The greedy upper bound (first-fit decreasing) can overshoot; the
    // exact oracle never does.
    let upper = value_upper_heuristic(&packing, 0, &[0, 1, 2])?;
    println!(
        "  first-fit-decreasing upper bound: {} bins",
        fraction_string(&upper.value)
    );
    assert!(v.value <= upper.value);

    // Job scheduling: {9,5,4} on speeds {2,1} — exact rational makespan.
    let sched = ChoreInstance::job_scheduling(vec![vec![9, 5, 4]], vec![vec![2, 1]]);
    let v = value_exact(&sched, 0, &[0, 1, 2], &oracle)?;
    println!(
        "\njob scheduling {{9,5,4}} on speeds {{2,1}}: makespan {}, witness {:?}",
        fraction_string(&v.value),
        v.certificate
    );
    verify_certificate(&sched, 0, &[0, 1, 2], &v.certificate)?;

    // Plane covering: cost is how many own-axis coordinates appear.
    let cover = gen_covering_planes(2);
    let v = value_exact(&cover, 0, &[0, 1], &oracle)?;
    println!(
        "\nplane covering {{(1,1),(1,2)}} for agent 0: {} plane(s), witness {:?}",
        fraction_string(&v.value),
        v.certificate
    );

    // Additive: certificates carry the plain sum.
    let add = ChoreInstance::additive(vec![vec![3, 1, 4]]);
    let v = value_exact(&add, 0, &[0, 2], &oracle)?;
    println!(
        "\nadditive {{3,4}}: total {}, witness {:?}",
        fraction_string(&v.value),
        v.certificate
    );

    // Sampled structure checks: subadditivity everywhere, submodularity
    // for the covering costs.
    let cover3 = gen_covering_planes(3);
    let report = check_subadditive_submodular(&cover3, 0, 500, 42, &oracle)?;
    println!(
        "\ncovering grid, {} sampled set pairs/triples: {} subadditivity and {} \
         submodularity violations",
        report.trials, report.subadditivity_violations, report.submodularity_violations
    );
    assert_eq!(report.subadditivity_violations, 0);
    assert_eq!(report.submodularity_violations, 0);

    // Bin packing is subadditive but not submodular: merging two bundles
    // never costs more than packing them separately, yet marginal costs
    // need not shrink.
    let report = check_subadditive_submodular(&packing, 0, 500, 42, &oracle)?;
    println!(
        "bin packing, {} sampled set pairs/triples: {} subadditivity violations",
        report.trials, report.subadditivity_violations
    );
    assert_eq!(report.subadditivity_violations, 0);
    Ok(())
}
