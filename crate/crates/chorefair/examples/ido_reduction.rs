//! Reducing to identically ordered instances — and why the trick is free.
//!
//! The strong allocators want every agent to rank the chores in the same
//! size order. Any instance can be rewritten that way: sort each agent's
//! size row descending. An allocation of the rewritten instance is then
//! "lifted" back by replaying it smallest-rank-first, each owner grabbing
//! her cheapest remaining original chore. Lifting never raises a bundle's
//! cost and maximin shares are untouched, so any factor proved on the
//! sorted instance carries over verbatim.
//!
//! Run with: cargo run --example ido_reduction

use chorefair::alloc::bag_fill_allocate;
use chorefair::ido::{lift_allocation, to_ido};
use chorefair::mms::{mms_exact, MmsBudget};
use chorefair::model::ChoreInstance;
use chorefair::value::fraction_string;
use chorefair::valuation::{value_exact, OracleBudget};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // The two agents disagree about which chores are big.
    let sizes = vec![vec![2, 9, 4, 7, 3, 1], vec![8, 1, 6, 2, 9, 4]];
    let inst = ChoreInstance::bin_packing(sizes, vec![9, 9]);
    inst.validate()?;
    println!("original sizes (disagreeing orders):");
    for agent in 0..inst.n {
        println!("  agent {agent}: {:?}", inst.sizes_of(agent).expect("sizes"));
    }
    println!("identically ordered already? {}", inst.is_ido()?);

    let (ido, _mapping) = to_ido(&inst)?;
    println!("\nrewritten rows (each sorted descending):");
    for agent in 0..ido.n {
        println!("  agent {agent}: {:?}", ido.sizes_of(agent).expect("sizes"));
    }
    println!("identically ordered now? {}", ido.is_ido()?);

    let ido_alloc = bag_fill_allocate(&ido)?;
    let lifted = lift_allocation(&inst, &ido_alloc)?;
    let oracle = OracleBudget::default();
    let budget = MmsBudget::default();

    println!("\nallocate on the rewritten instance, lift back to the original:");
    for agent in 0..inst.n {
        let v_ido = value_exact(&ido, agent, ido_alloc.bundle(agent), &oracle)?.value;
        let v_lift = value_exact(&inst, agent, lifted.bundle(agent), &oracle)?.value;
        println!(
            "  agent {agent}: rewritten bundle {:?} costs {}, lifted bundle {:?} costs {}",
            ido_alloc.bundle(agent),
            fraction_string(&v_ido),
            lifted.bundle(agent),
            fraction_string(&v_lift),
        );
        assert!(v_lift <= v_ido, "lifting never raises a cost");
    }

    println!("\nmaximin shares are invariant under the rewrite:");
    for agent in 0..inst.n {
        let original = mms_exact(&inst, agent, &budget, &oracle)?.value;
        let rewritten = mms_exact(&ido, agent, &budget, &oracle)?.value;
        println!(
            "  agent {agent}: original {}, rewritten {}",
            fraction_string(&original),
            fraction_string(&rewritten),
        );
        assert_eq!(original, rewritten);
    }
    Ok(())
}
