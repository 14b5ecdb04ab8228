//! Fair division of indivisible chores with exact arithmetic.
//!
//! Agents share a set of unwanted tasks, and each agent's cost for a
//! bundle comes from a combinatorial objective rather than a sum: the
//! bins she needs to pack it, the makespan of scheduling it on her own
//! machines, or the number of axis-aligned planes that cover it. The
//! crate provides:
//!
//! - exact bundle-value oracles with verifiable certificates
//!   ([`valuation`]),
//! - each agent's *maximin share* — the best worst-bundle cost she could
//!   guarantee by partitioning the chores herself — exactly or by bounds
//!   ([`mms`]),
//! - allocators that provably keep every agent within a constant factor
//!   of that share ([`alloc`]), via a reduction to identically ordered
//!   instances ([`ido`]),
//! - audits, lower-bound certification, and impossibility witnesses
//!   ([`audit`]),
//! - JSON/CSV interchange ([`format`]) and a command-line front end
//!   ([`cli`]).
//!
//! Start with the `examples/` directory: each file is a runnable tour of
//! one capability (`cargo run --example bag_filling`). The same
//! functionality is scriptable through the thin `chorefair` binary.
//!
//! All values are exact rationals ([`value::Value`]); nothing in the
//! library rounds.

pub mod alloc;
pub mod audit;
pub mod cli;
pub mod format;
pub mod gen;
pub mod ido;
pub mod mms;
pub mod model;
pub mod valuation;
pub mod value;

pub use alloc::{
    all_or_nothing_allocate, bag_fill_allocate, bag_fill_allocate_v2, round_robin_allocate,
    threshold_schedule, threshold_search_schedule,
};
pub use audit::{audit_mms, audit_prop, certify_lower_bound, AuditReport, CertifyOutcome};
pub use ido::{lift_allocation, to_ido};
pub use mms::{mms_bounds, mms_exact, mms_reference, AgentMms, MmsBudget};
pub use model::{Allocation, ChoreInstance, Kind};
pub use valuation::{value_exact, verify_certificate, Certificate, OracleBudget, ValueCache};
pub use value::Value;
