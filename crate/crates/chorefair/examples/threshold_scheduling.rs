//! Threshold scheduling: turn a makespan guess into a schedule, then search
//! the guess geometrically.
//!
//! Given jobs (descending) and machine speeds (fastest first), a threshold
//! tau grants machine l a deadline of tau x speed_l. The scheduler walks
//! the machines fastest-first and lets each absorb the next jobs while its
//! load stays within twice its deadline. If tau is at least the true
//! optimal makespan, nothing is left over and the result's makespan is at
//! most 2 tau. Starting from a certified lower bound and multiplying tau by
//! (1 + delta) therefore finds a 2(1+delta)-approximation in a logarithmic
//! number of tries — no weights, no LP, exact rational arithmetic.
//!
//! Run with: cargo run --example threshold_scheduling

use chorefair::alloc::{threshold_schedule, threshold_search_schedule};
use chorefair::value::{frac, fraction_string, int};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let jobs = vec![9u64, 7, 6, 4, 3, 2];
    let speeds = vec![3u64, 2, 1];
    println!("jobs {jobs:?} on machines with speeds {speeds:?}");

    // Too small a threshold: the deadlines bind early and jobs remain.
    let low = threshold_schedule(&jobs, &speeds, int(2))?;
    println!(
        "\ntau = 2: machine assignments {:?}, leftover {:?}",
        low.machines, low.leftover
    );
    assert!(!low.leftover.is_empty());

    // A generous threshold: everything is placed, makespan at most 2 tau.
    let high = threshold_schedule(&jobs, &speeds, int(5))?;
    println!(
        "tau = 5: machine assignments {:?}, leftover {:?}, makespan {}",
        high.machines,
        high.leftover,
        fraction_string(&high.makespan)
    );
    assert!(high.leftover.is_empty());
    assert!(high.makespan <= int(10));

    // The search: start at the certified lower bound max job / fastest
    // speed and grow by 10% until the schedule swallows every job.
    let delta = frac(1, 10);
    let search = threshold_search_schedule(&jobs, &speeds, delta)?;
    println!(
        "\ngeometric search with delta = {}: {} iteration(s)",
        fraction_string(&delta),
        search.iterations
    );
    println!(
        "  final threshold {} -> makespan {} with assignments {:?}",
        fraction_string(&search.tau),
        fraction_string(&search.schedule.makespan),
        search.schedule.machines
    );
    assert!(search.schedule.leftover.is_empty());
    // makespan <= 2 tau and tau overshoots the optimum by less than (1+delta)
    assert!(search.schedule.makespan <= int(2) * search.tau);
    Ok(())
}
