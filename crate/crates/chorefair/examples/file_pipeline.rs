//! The file pipeline: instances and allocations as JSON, audits as CSV.
//!
//! Everything the `chorefair` binary does flows through these functions:
//! instances round-trip byte-for-byte, allocations carry per-agent
//! certificates, and audit reports render to a stable CSV with exact
//! fractions next to decimal conveniences. This example drives the
//! pipeline in-process with the simplest allocator — hand every chore to
//! the agent who minds the whole set least.
//!
//! Run with: cargo run --example file_pipeline

use chorefair::alloc::all_or_nothing_allocate;
use chorefair::audit::audit_mms;
use chorefair::format::{
    allocation_from_json, allocation_to_json, audit_csv, instance_from_json, instance_to_json,
};
use chorefair::mms::{mms_reference, MmsBudget};
use chorefair::model::ChoreInstance;
use chorefair::value::int;
use chorefair::valuation::{value_or_upper, OracleBudget};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let inst = ChoreInstance::bin_packing(
        vec![vec![7, 5, 3, 2], vec![6, 6, 4, 1]],
        vec![9, 8],
    );
    inst.validate()?;

    // Instance -> JSON -> instance is the identity, bytes included.
    let json = instance_to_json(&inst);
    println!("instance file:\n{json}");
    let reparsed = instance_from_json(&json)?;
    assert_eq!(instance_to_json(&reparsed), json);

    // Solve: one agent takes everything; certify each bundle's cost.
    let oracle = OracleBudget::default();
    let alloc = all_or_nothing_allocate(&inst, &oracle)?;
    let mut certs = Vec::new();
    for agent in 0..inst.n {
        let (valued, exact) = value_or_upper(&inst, agent, alloc.bundle(agent), &oracle)?;
        assert!(exact, "small bundles get exact certificates");
        certs.push(valued.certificate);
    }
    let alloc_json = allocation_to_json(&alloc, Some(&certs));
    println!("allocation file (1-based chore ids, certificates inline):\n{alloc_json}");
    let (roundtrip, cert_back) = allocation_from_json(&alloc_json)?;
    assert_eq!(roundtrip.bundles(), alloc.bundles());
    assert_eq!(cert_back.as_deref(), Some(certs.as_slice()));

    // Audit -> CSV: exact fraction columns are authoritative, decimals are
    // for spreadsheets.
    let refs = mms_reference(&inst, &MmsBudget::default(), &oracle);
    let report = audit_mms(&inst, &alloc, &refs, int(2), &oracle)?;
    print!("audit report:\n{}", audit_csv("demo", &report.rows));
    println!(
        "\noverall: {}",
        if report.pass {
            "within twice every maximin share"
        } else {
            "some agent exceeds twice her maximin share"
        }
    );
    Ok(())
}
