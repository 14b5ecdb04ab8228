//! Reduction to identically-ordered (IDO) instances and the lift back.
//!
//! Sorting each agent's sizes descending yields an instance where everyone
//! ranks items the same way by index; MMS values are unchanged because each
//! agent's multiset of sizes is unchanged. An allocation computed on the IDO
//! instance is pulled back by replaying it from the least-wanted rank
//! upward: the owner of rank g picks her cheapest remaining original item,
//! which can only be cheaper than the rank-g size she was assessed at. Every
//! bundle therefore costs at most its IDO counterpart for its owner.

use crate::model::{Allocation, ChoreInstance, Kind, ModelError};

/// Per-agent map from IDO rank to original item: `perms[i][g]` is the
/// original item whose size agent `i` was charged at rank `g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdoMapping {
    pub perms: Vec<Vec<usize>>,
}

/// Builds the IDO companion instance (sizes sorted nonincreasing per agent,
/// stable on index) plus the rank→item mapping. Plane-covering instances
/// have no sizes to sort.
pub fn to_ido(inst: &ChoreInstance) -> Result<(ChoreInstance, IdoMapping), ModelError> {
    if inst.kind() == Kind::CoveringPlane {
        return Err(ModelError::NoSizes);
    }
    let mut perms = Vec::with_capacity(inst.n);
    let mut sorted_sizes = Vec::with_capacity(inst.n);
    for row in &inst.sizes {
        let mut perm: Vec<usize> = (0..inst.m).collect();
        perm.sort_by(|&a, &b| row[b].cmp(&row[a]).then(a.cmp(&b)));
        sorted_sizes.push(perm.iter().map(|&j| row[j]).collect::<Vec<u64>>());
        perms.push(perm);
    }
    let ido = ChoreInstance { n: inst.n, m: inst.m, sizes: sorted_sizes, spec: inst.spec.clone() };
    Ok((ido, IdoMapping { perms }))
}

/// Pulls an allocation of the IDO companion back to the original instance.
///
/// Ranks are replayed from m−1 down to 0; the agent who owns rank g takes
/// whichever remaining original item is smallest in her own sizes (ties to
/// the lowest index). At that moment g+1 items remain and her rank-g size is
/// the (g+1)-smallest of her row, so the picked item's size never exceeds
/// what the IDO instance charged her for that rank.
pub fn lift_allocation(
    original: &ChoreInstance,
    ido_alloc: &Allocation,
) -> Result<Allocation, ModelError> {
    if original.kind() == Kind::CoveringPlane {
        return Err(ModelError::NoSizes);
    }
    let m = original.m;
    let owner = ido_alloc.owners();
    let mut remaining: Vec<usize> = (0..m).collect();
    let mut bundles: Vec<Vec<usize>> = vec![Vec::new(); ido_alloc.n()];
    for g in (0..m).rev() {
        let agent = owner[g];
        let row = &original.sizes[agent];
        let (pos, _) = remaining
            .iter()
            .enumerate()
            .min_by_key(|&(_, &j)| (row[j], j))
            .expect("one remaining item per rank");
        let item = remaining.remove(pos);
        bundles[agent].push(item);
    }
    Ok(Allocation::new(bundles, m).expect("lift assigns each item exactly once"))
}
