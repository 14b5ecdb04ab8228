//! Chore instances and allocations.
//!
//! An instance is `n` agents, `m` items, and one cost model shared by the
//! whole instance: bin packing (cost of a set = fewest bins of the agent's
//! capacity that hold it), job scheduling (minimum makespan on the agent's
//! related machines), plane covering (distinct agent-coordinates among the
//! chosen lattice points), or plain additive sums.
//!
//! Sizes, capacities and speeds are nonnegative integers; item indices are
//! 0-based internally and 1-based in files and reports.

use thiserror::Error;

/// Which cost model an instance uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    BinPacking,
    JobScheduling,
    CoveringPlane,
    Additive,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::BinPacking => "bin_packing",
            Kind::JobScheduling => "job_scheduling",
            Kind::CoveringPlane => "covering_plane",
            Kind::Additive => "additive",
        }
    }
}

/// Kind-specific data. Sizes live on [`ChoreInstance`] because every kind
/// except plane covering shares the same n×m size matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValuationSpec {
    /// Unlimited bins of per-agent capacity; cost = minimum bins used.
    BinPacking { capacities: Vec<u64> },
    /// Per-agent related machines, speeds sorted fastest first; cost = minimum makespan.
    JobScheduling { speeds: Vec<Vec<u64>> },
    /// Item j is a lattice point in [n]^n; agent i's cost = distinct i-th coordinates.
    CoveringPlane { points: Vec<Vec<u32>> },
    /// Cost = sum of the agent's item sizes.
    Additive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChoreInstance {
    pub n: usize,
    pub m: usize,
    /// n rows of m sizes; empty for plane-covering instances.
    pub sizes: Vec<Vec<u64>>,
    pub spec: ValuationSpec,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InstanceViolation {
    #[error("no agents")]
    NoAgents,
    #[error("size matrix must have {expected} rows, found {found}")]
    RowCount { expected: usize, found: usize },
    #[error("size row {agent} must have {expected} entries, found {found}")]
    RowLength { agent: usize, expected: usize, found: usize },
    #[error("capacity list must have one entry per agent")]
    CapacityCount,
    #[error("capacity must be positive (agent {agent})")]
    CapacityZero { agent: usize },
    #[error("capacity below max item size (agent {agent}: capacity {capacity}, item size {size})")]
    CapacityBelowMaxItem { agent: usize, capacity: u64, size: u64 },
    #[error("speed list must have one entry per agent")]
    SpeedCount,
    #[error("agent {agent} needs at least one machine")]
    NoMachines { agent: usize },
    #[error("machine speeds must be positive (agent {agent})")]
    SpeedZero { agent: usize },
    #[error("machine speeds must be nonincreasing (agent {agent})")]
    SpeedsNotSorted { agent: usize },
    #[error("point count ≠ n^n (expected {expected}, found {found})")]
    PointCount { expected: usize, found: usize },
    #[error("point {item} must have {expected} coordinates")]
    PointDimension { item: usize, expected: usize },
    #[error("point {item} has a coordinate outside 1..={n}")]
    CoordinateOutOfRange { item: usize, n: usize },
    #[error("duplicate point at items {first} and {second}")]
    DuplicatePoint { first: usize, second: usize },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("instance kind {found} where {expected} is required")]
    WrongKind { expected: &'static str, found: &'static str },
    #[error("plane-covering instances have no size matrix")]
    NoSizes,
    #[error("invalid instance: {0}")]
    Invalid(#[from] InstanceViolation),
}

impl ChoreInstance {
    pub fn bin_packing(sizes: Vec<Vec<u64>>, capacities: Vec<u64>) -> Self {
        let n = sizes.len();
        let m = sizes.first().map_or(0, Vec::len);
        ChoreInstance { n, m, sizes, spec: ValuationSpec::BinPacking { capacities } }
    }

    pub fn job_scheduling(sizes: Vec<Vec<u64>>, speeds: Vec<Vec<u64>>) -> Self {
        let n = sizes.len();
        let m = sizes.first().map_or(0, Vec::len);
        ChoreInstance { n, m, sizes, spec: ValuationSpec::JobScheduling { speeds } }
    }

    pub fn covering_plane(n: usize, points: Vec<Vec<u32>>) -> Self {
        let m = points.len();
        ChoreInstance { n, m, sizes: Vec::new(), spec: ValuationSpec::CoveringPlane { points } }
    }

    pub fn additive(sizes: Vec<Vec<u64>>) -> Self {
        let n = sizes.len();
        let m = sizes.first().map_or(0, Vec::len);
        ChoreInstance { n, m, sizes, spec: ValuationSpec::Additive }
    }

    pub fn kind(&self) -> Kind {
        match &self.spec {
            ValuationSpec::BinPacking { .. } => Kind::BinPacking,
            ValuationSpec::JobScheduling { .. } => Kind::JobScheduling,
            ValuationSpec::CoveringPlane { .. } => Kind::CoveringPlane,
            ValuationSpec::Additive => Kind::Additive,
        }
    }

    /// The agent's size row; `None` for plane-covering instances.
    pub fn sizes_of(&self, agent: usize) -> Option<&[u64]> {
        if self.kind() == Kind::CoveringPlane {
            None
        } else {
            Some(&self.sizes[agent])
        }
    }

    /// Total size of all items for one agent.
    pub fn total_size(&self, agent: usize) -> u128 {
        self.sizes[agent].iter().map(|&s| u128::from(s)).sum()
    }

    pub fn capacity(&self, agent: usize) -> Option<u64> {
        match &self.spec {
            ValuationSpec::BinPacking { capacities } => Some(capacities[agent]),
            _ => None,
        }
    }

    pub fn speeds_of(&self, agent: usize) -> Option<&[u64]> {
        match &self.spec {
            ValuationSpec::JobScheduling { speeds } => Some(&speeds[agent]),
            _ => None,
        }
    }

    pub fn points(&self) -> Option<&[Vec<u32>]> {
        match &self.spec {
            ValuationSpec::CoveringPlane { points } => Some(points),
            _ => None,
        }
    }

    /// Checks every structural invariant, reporting the first violation found.
    pub fn validate(&self) -> Result<(), InstanceViolation> {
        if self.n == 0 {
            return Err(InstanceViolation::NoAgents);
        }
        match &self.spec {
            ValuationSpec::CoveringPlane { points } => {
                let expected = self.n.checked_pow(self.n as u32).unwrap_or(usize::MAX);
                if points.len() != expected || self.m != expected {
                    return Err(InstanceViolation::PointCount { expected, found: points.len() });
                }
                for (j, p) in points.iter().enumerate() {
                    if p.len() != self.n {
                        return Err(InstanceViolation::PointDimension { item: j, expected: self.n });
                    }
                    if p.iter().any(|&c| c < 1 || c as usize > self.n) {
                        return Err(InstanceViolation::CoordinateOutOfRange { item: j, n: self.n });
                    }
                }
                let mut seen = std::collections::HashMap::new();
                for (j, p) in points.iter().enumerate() {
                    if let Some(&first) = seen.get(p) {
                        return Err(InstanceViolation::DuplicatePoint { first, second: j });
                    }
                    seen.insert(p.clone(), j);
                }
            }
            spec => {
                if self.sizes.len() != self.n {
                    return Err(InstanceViolation::RowCount { expected: self.n, found: self.sizes.len() });
                }
                for (i, row) in self.sizes.iter().enumerate() {
                    if row.len() != self.m {
                        return Err(InstanceViolation::RowLength {
                            agent: i,
                            expected: self.m,
                            found: row.len(),
                        });
                    }
                }
                match spec {
                    ValuationSpec::BinPacking { capacities } => {
                        if capacities.len() != self.n {
                            return Err(InstanceViolation::CapacityCount);
                        }
                        for (i, &c) in capacities.iter().enumerate() {
                            if c == 0 {
                                return Err(InstanceViolation::CapacityZero { agent: i });
                            }
                            if let Some(&s) = self.sizes[i].iter().find(|&&s| s > c) {
                                return Err(InstanceViolation::CapacityBelowMaxItem {
                                    agent: i,
                                    capacity: c,
                                    size: s,
                                });
                            }
                        }
                    }
                    ValuationSpec::JobScheduling { speeds } => {
                        if speeds.len() != self.n {
                            return Err(InstanceViolation::SpeedCount);
                        }
                        for (i, row) in speeds.iter().enumerate() {
                            if row.is_empty() {
                                return Err(InstanceViolation::NoMachines { agent: i });
                            }
                            if row.iter().any(|&r| r == 0) {
                                return Err(InstanceViolation::SpeedZero { agent: i });
                            }
                            if row.windows(2).any(|w| w[0] < w[1]) {
                                return Err(InstanceViolation::SpeedsNotSorted { agent: i });
                            }
                        }
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }

    /// True iff every agent's size row is nonincreasing, i.e. all agents rank
    /// items identically by index. Plane-covering instances have no sizes to
    /// rank and are rejected.
    pub fn is_ido(&self) -> Result<bool, ModelError> {
        if self.kind() == Kind::CoveringPlane {
            return Err(ModelError::NoSizes);
        }
        Ok(self
            .sizes
            .iter()
            .all(|row| row.windows(2).all(|w| w[0] >= w[1])))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PartitionError {
    #[error("expected {expected} bundles, found {found}")]
    BundleCount { expected: usize, found: usize },
    #[error("item {item} out of range (m = {m})")]
    ItemOutOfRange { item: usize, m: usize },
    #[error("item {item} appears in more than one bundle")]
    DuplicateItem { item: usize },
    #[error("item {item} is unallocated")]
    MissingItem { item: usize },
}

/// An ordered n-partition of the items (empty bundles are legal).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Allocation {
    bundles: Vec<Vec<usize>>,
    m: usize,
}

impl Allocation {
    /// Builds an allocation, checking that the bundles partition `0..m`.
    /// Bundle contents are stored sorted ascending.
    pub fn new(bundles: Vec<Vec<usize>>, m: usize) -> Result<Self, PartitionError> {
        let mut seen = vec![false; m];
        for bundle in &bundles {
            for &item in bundle {
                if item >= m {
                    return Err(PartitionError::ItemOutOfRange { item, m });
                }
                if seen[item] {
                    return Err(PartitionError::DuplicateItem { item });
                }
                seen[item] = true;
            }
        }
        if let Some(item) = seen.iter().position(|&s| !s) {
            return Err(PartitionError::MissingItem { item });
        }
        let mut bundles = bundles;
        for bundle in &mut bundles {
            bundle.sort_unstable();
        }
        Ok(Allocation { bundles, m })
    }

    /// Like [`Allocation::new`] but also checks the bundle count against `n`.
    pub fn new_for(bundles: Vec<Vec<usize>>, n: usize, m: usize) -> Result<Self, PartitionError> {
        if bundles.len() != n {
            return Err(PartitionError::BundleCount { expected: n, found: bundles.len() });
        }
        Self::new(bundles, m)
    }

    pub fn n(&self) -> usize {
        self.bundles.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn bundles(&self) -> &[Vec<usize>] {
        &self.bundles
    }

    pub fn bundle(&self, agent: usize) -> &[usize] {
        &self.bundles[agent]
    }

    /// Inverse map: `owner[j]` = the agent holding item `j`.
    pub fn owners(&self) -> Vec<usize> {
        let mut owner = vec![0; self.m];
        for (i, bundle) in self.bundles.iter().enumerate() {
            for &j in bundle {
                owner[j] = i;
            }
        }
        owner
    }
}
