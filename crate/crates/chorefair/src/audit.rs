//! Fairness audits and impossibility certification.
//!
//! [`audit_mms`] scores an allocation against per-agent maximin shares,
//! [`audit_prop`] against proportionality up to one item (PROP1, existential
//! removal) and up to any item (PROPX, universal removal). Both produce exact
//! rational ratios with an explicit flag whenever a heuristic value stood in
//! for an over-budget exact oracle.
//!
//! [`certify_lower_bound`] checks — exhaustively when the allocation space
//! fits the cap, by seeded sampling otherwise — that every allocation of an
//! instance leaves some agent at or above a target multiple of her maximin
//! share. [`covering_full_value_witness`] is the matching direct argument for
//! plane-covering instances: some agent always covers all of her coordinate
//! values.

use crate::mms::{mms_exact, AgentMms, MmsBudget, MmsError, MmsProfile};
use crate::model::{Allocation, ChoreInstance, Kind};
use crate::valuation::{value_or_upper, OracleBudget, ValueCache, ValueError};
use crate::value::{int, Value};
use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Most allocations `certify_lower_bound` will enumerate exhaustively.
pub const EXHAUSTIVE_CAP: u128 = 10_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AuditError {
    #[error("operation requires a plane-covering instance")]
    NotCovering,
    #[error(
        "exhaustive certification over {allocations} allocations exceeds the {limit} cap; \
         rerun in sampled mode"
    )]
    ExhaustiveTooLarge { allocations: u128, limit: u128 },
    #[error("exact maximin shares unavailable: {0}")]
    Mms(#[from] MmsError),
    #[error(transparent)]
    Value(#[from] ValueError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Notion {
    Mms,
    Prop1,
    Propx,
}

impl Notion {
    pub fn as_str(self) -> &'static str {
        match self {
            Notion::Mms => "mms",
            Notion::Prop1 => "prop1",
            Notion::Propx => "propx",
        }
    }
}

/// One agent × notion verdict line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditRow {
    pub agent: usize,
    pub notion: Notion,
    /// The audited value: v_i(X_i) for MMS; min/max over single removals of
    /// v_i(X_i \ {g}) for PROP1/PROPX.
    pub value: Value,
    /// MMS_i, or PROP_i = v_i(M)/n.
    pub reference: Value,
    /// value / reference. `None` flags a positive value over a zero
    /// reference (infinite); a zero value over a zero reference is 0.
    pub ratio: Option<Value>,
    /// Whether value ≤ α·reference at the report's α.
    pub verdict: bool,
    /// False when any contributing value came from a heuristic, or the MMS
    /// reference is only a bound.
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditReport {
    /// The α every verdict was taken at.
    pub alpha: Value,
    pub rows: Vec<AuditRow>,
    /// Largest finite ratio across rows.
    pub max_ratio: Option<Value>,
    /// True when some row's ratio is infinite.
    pub infinite: bool,
    /// True when every row's verdict holds.
    pub pass: bool,
}

fn ratio_and_verdict(value: Value, reference: Value, alpha: Value) -> (Option<Value>, bool) {
    if reference.is_zero() {
        if value.is_zero() {
            (Some(Value::zero()), true)
        } else {
            (None, false)
        }
    } else {
        let ratio = value / reference;
        (Some(ratio), ratio <= alpha)
    }
}

fn build_report(alpha: Value, rows: Vec<AuditRow>) -> AuditReport {
    let infinite = rows.iter().any(|r| r.ratio.is_none());
    let max_ratio = rows.iter().filter_map(|r| r.ratio).max();
    let pass = rows.iter().all(|r| r.verdict);
    AuditReport { alpha, rows, max_ratio, infinite, pass }
}

/// Scores every bundle against its owner's maximin share at level α. When a
/// reference is only a bound, the conservative lower end is used and the row
/// is flagged inexact.
pub fn audit_mms(
    inst: &ChoreInstance,
    alloc: &Allocation,
    refs: &[AgentMms],
    alpha: Value,
    oracle: &OracleBudget,
) -> Result<AuditReport, ValueError> {
    let mut rows = Vec::with_capacity(inst.n);
    for agent in 0..inst.n {
        let (valued, value_exactness) = value_or_upper(inst, agent, alloc.bundle(agent), oracle)?;
        let reference = refs[agent].reference_value();
        let (ratio, verdict) = ratio_and_verdict(valued.value, reference, alpha);
        rows.push(AuditRow {
            agent,
            notion: Notion::Mms,
            value: valued.value,
            reference,
            ratio,
            verdict,
            exact: value_exactness && refs[agent].is_exact(),
        });
    }
    Ok(build_report(alpha, rows))
}

/// Scores every bundle for proportionality up to one item. The PROP1 row
/// takes the cheapest single removal (one good drop suffices), the PROPX row
/// the costliest (every drop must suffice); an empty bundle passes both at
/// ratio 0. References satisfy PROP_i · n = v_i(M) exactly.
pub fn audit_prop(
    inst: &ChoreInstance,
    alloc: &Allocation,
    alpha: Value,
    oracle: &OracleBudget,
) -> Result<AuditReport, ValueError> {
    let all: Vec<usize> = (0..inst.m).collect();
    let mut rows = Vec::with_capacity(2 * inst.n);
    for agent in 0..inst.n {
        let (whole, whole_exact) = value_or_upper(inst, agent, &all, oracle)?;
        let prop = whole.value / int(inst.n as i128);
        let bundle = alloc.bundle(agent);
        let mut cheapest: Option<Value> = None;
        let mut costliest: Option<Value> = None;
        let mut removals_exact = true;
        for drop in bundle {
            let rest: Vec<usize> = bundle.iter().copied().filter(|j| j != drop).collect();
            let (v, e) = value_or_upper(inst, agent, &rest, oracle)?;
            removals_exact &= e;
            cheapest = Some(cheapest.map_or(v.value, |c: Value| c.min(v.value)));
            costliest = Some(costliest.map_or(v.value, |c: Value| c.max(v.value)));
        }
        let exact = whole_exact && removals_exact;
        for (notion, value) in [
            (Notion::Prop1, cheapest.unwrap_or_else(Value::zero)),
            (Notion::Propx, costliest.unwrap_or_else(Value::zero)),
        ] {
            let (ratio, verdict) = ratio_and_verdict(value, prop, alpha);
            rows.push(AuditRow { agent, notion, value, reference: prop, ratio, verdict, exact });
        }
    }
    Ok(build_report(alpha, rows))
}

/// How [`certify_lower_bound`] explores the allocation space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertifyMode {
    /// Every one of the n^m allocations (requires n^m ≤ [`EXHAUSTIVE_CAP`]).
    Exhaustive,
    /// `trials` allocations drawn uniformly from a seeded generator.
    Sampled { trials: u64, seed: u64 },
}

/// Outcome of a lower-bound certification run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertifyOutcome {
    pub target: Value,
    /// True when every allocation was enumerated; a sampled run is evidence,
    /// never proof.
    pub exhaustive: bool,
    pub allocations_checked: u64,
    /// The per-agent exact maximin shares the ratios were taken against.
    pub mms: Vec<Value>,
    /// Smallest max-agent ratio seen; `None` when it is infinite (a zero
    /// maximin share met a positive bundle value in every allocation).
    pub min_max_ratio: Option<Value>,
    /// Owner vector (item → agent) attaining `min_max_ratio`.
    pub witness: Option<Vec<usize>>,
    /// Owner vector with every agent strictly below target, if found.
    pub counterexample: Option<Vec<usize>>,
    /// True when the run proves every allocation meets the target — only
    /// ever set on exhaustive runs with no counterexample.
    pub certified: bool,
    /// Sampling provenance (trials, seed) for non-exhaustive runs.
    pub sampling: Option<(u64, u64)>,
}

/// Finite-or-infinite per-allocation worst ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum WorstRatio {
    Finite(Value),
    Infinite,
}

impl WorstRatio {
    fn meets(self, target: Value) -> bool {
        match self {
            WorstRatio::Infinite => true,
            WorstRatio::Finite(v) => v >= target,
        }
    }

}

/// Exact per-agent maximin shares for certification: the partition search
/// where it fits the budget; for plane-covering instances the closed form —
/// grouping the full coordinate grid by any agent's own coordinate leaves
/// her exactly one distinct value per nonempty bundle, so every maximin
/// share is 1 (0 without items).
fn certification_mms(
    inst: &ChoreInstance,
    mms_budget: &MmsBudget,
    oracle: &OracleBudget,
) -> Result<Vec<Value>, MmsError> {
    if inst.kind() == Kind::CoveringPlane {
        let each = if inst.m == 0 { Value::zero() } else { int(1) };
        return Ok(vec![each; inst.n]);
    }
    (0..inst.n)
        .map(|agent| Ok(mms_exact(inst, agent, mms_budget, oracle)?.value))
        .collect()
}

/// The defining partition behind the plane-covering closed form, usable as
/// an exact [`AgentMms`] reference: bundle t holds the points whose
/// agent-coordinate is t+1.
pub fn covering_mms_profile(inst: &ChoreInstance, agent: usize) -> Result<MmsProfile, AuditError> {
    let points = inst.points().ok_or(AuditError::NotCovering)?;
    let mut partition: Vec<Vec<usize>> = vec![Vec::new(); inst.n];
    for (j, p) in points.iter().enumerate() {
        partition[(p[agent] - 1) as usize].push(j);
    }
    let value = if inst.m == 0 { Value::zero() } else { int(1) };
    Ok(MmsProfile { agent, value, partition })
}

fn owners_to_masks(owners: &[usize], n: usize) -> Vec<u64> {
    let mut masks = vec![0u64; n];
    for (j, &i) in owners.iter().enumerate() {
        masks[i] |= 1u64 << j;
    }
    masks
}

/// Certifies (or refutes) that every allocation of `inst` gives some agent
/// at least `target` times her exact maximin share. Exhaustive mode is a
/// proof; sampled mode reports the worst allocation among seeded trials.
pub fn certify_lower_bound(
    inst: &ChoreInstance,
    target: Value,
    mode: CertifyMode,
    mms_budget: &MmsBudget,
    oracle: &OracleBudget,
) -> Result<CertifyOutcome, AuditError> {
    let n = inst.n;
    let m = inst.m;
    if matches!(mode, CertifyMode::Exhaustive) {
        let count = (n as u128).checked_pow(m as u32);
        if count.is_none_or(|t| t > EXHAUSTIVE_CAP) {
            return Err(AuditError::ExhaustiveTooLarge {
                allocations: count.unwrap_or(u128::MAX),
                limit: EXHAUSTIVE_CAP,
            });
        }
    }
    let mms = certification_mms(inst, mms_budget, oracle)?;
    let mut caches: Vec<ValueCache> =
        (0..n).map(|i| ValueCache::new(inst, i, *oracle)).collect();

    let mut worst_of = |owners: &[usize]| -> Result<WorstRatio, ValueError> {
        let masks = owners_to_masks(owners, n);
        let mut worst = WorstRatio::Finite(Value::zero());
        for i in 0..n {
            let v = caches[i].value(masks[i])?;
            let r = if mms[i].is_zero() {
                if v.is_zero() { WorstRatio::Finite(Value::zero()) } else { WorstRatio::Infinite }
            } else {
                WorstRatio::Finite(v / mms[i])
            };
            worst = match (worst, r) {
                (WorstRatio::Infinite, _) | (_, WorstRatio::Infinite) => WorstRatio::Infinite,
                (WorstRatio::Finite(a), WorstRatio::Finite(b)) => WorstRatio::Finite(a.max(b)),
            };
        }
        Ok(worst)
    };

    let mut checked = 0u64;
    // `min_max = None` after the first allocation means the minimum so far
    // is infinite (every checked allocation hit a zero maximin share).
    let mut min_max: Option<Value> = None;
    let mut witness: Option<Vec<usize>> = None;
    let mut counterexample: Option<Vec<usize>> = None;

    let mut consider = |owners: &[usize], worst: WorstRatio| {
        let improves = match worst {
            WorstRatio::Finite(v) => witness.is_none() || min_max.is_none_or(|b| v < b),
            WorstRatio::Infinite => witness.is_none(),
        };
        if improves {
            min_max = match worst {
                WorstRatio::Finite(v) => Some(v),
                WorstRatio::Infinite => None,
            };
            witness = Some(owners.to_vec());
        }
        if !worst.meets(target) && counterexample.is_none() {
            counterexample = Some(owners.to_vec());
        }
    };

    match mode {
        CertifyMode::Exhaustive => {
            let total = (n as u128)
                .checked_pow(m as u32)
                .expect("checked against the cap above");
            let mut owners = vec![0usize; m];
            for _ in 0..total {
                let worst = worst_of(&owners).map_err(AuditError::Value)?;
                consider(&owners, worst);
                checked += 1;
                for slot in owners.iter_mut() {
                    *slot += 1;
                    if *slot < n {
                        break;
                    }
                    *slot = 0;
                }
            }
            let certified = counterexample.is_none();
            Ok(CertifyOutcome {
                target,
                exhaustive: true,
                allocations_checked: checked,
                mms,
                min_max_ratio: min_max,
                witness,
                counterexample,
                certified,
                sampling: None,
            })
        }
        CertifyMode::Sampled { trials, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut owners = vec![0usize; m];
            for _ in 0..trials {
                for slot in owners.iter_mut() {
                    *slot = rng.gen_range(0..n);
                }
                let worst = worst_of(&owners).map_err(AuditError::Value)?;
                consider(&owners, worst);
                checked += 1;
            }
            Ok(CertifyOutcome {
                target,
                exhaustive: false,
                allocations_checked: checked,
                mms,
                min_max_ratio: min_max,
                witness,
                counterexample,
                certified: false,
                sampling: Some((trials, seed)),
            })
        }
    }
}

/// Outcome of the direct plane-covering argument on one allocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlaneCheck {
    /// Some agent's bundle shows all n of her coordinate values — her exact
    /// value is n.
    FullValueAgent { agent: usize },
    /// Every agent misses a coordinate value, yet the point assembled from
    /// those missing values must belong to someone's bundle and would show
    /// them the "missing" value. Unreachable for a genuine partition of the
    /// full grid; returned (never panicking) so callers can assert on it.
    ContradictoryWitness { point: Vec<u32> },
}

/// For each agent, looks for a coordinate value her bundle misses; the first
/// agent missing none has value exactly n. A genuine partition always has
/// one: otherwise the point built from the per-agent missing values would be
/// in nobody's bundle.
pub fn covering_full_value_witness(
    inst: &ChoreInstance,
    alloc: &Allocation,
) -> Result<PlaneCheck, AuditError> {
    let points = inst.points().ok_or(AuditError::NotCovering)?;
    let mut missing: Vec<u32> = Vec::with_capacity(inst.n);
    for agent in 0..inst.n {
        let mut seen = vec![false; inst.n];
        for &j in alloc.bundle(agent) {
            seen[(points[j][agent] - 1) as usize] = true;
        }
        match (0..inst.n).find(|&t| !seen[t]) {
            None => return Ok(PlaneCheck::FullValueAgent { agent }),
            Some(t) => missing.push((t + 1) as u32),
        }
    }
    Ok(PlaneCheck::ContradictoryWitness { point: missing })
}
