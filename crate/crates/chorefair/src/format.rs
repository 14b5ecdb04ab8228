//! Stable file formats.
//!
//! Instances and allocations travel as canonical pretty-printed JSON with a
//! trailing newline; parsing then re-serializing reproduces the bytes. Audit
//! and benchmark reports are CSV with a fixed, documented column set; every
//! ratio appears as an exact fraction `"p/q"` next to a rounded decimal
//! convenience column. All agent and item indices in files are 1-based (only
//! in-memory structures are 0-based).

use crate::audit::{AuditReport, AuditRow};
use crate::model::{Allocation, ChoreInstance, InstanceViolation, PartitionError};
use crate::valuation::Certificate;
use crate::value::{decimal_string, fraction_string, parse_value, Value};
use serde::{Deserialize, Serialize};
use std::path::Path;
use thiserror::Error;

/// Digits after the point in every decimal convenience column.
pub const DECIMAL_PLACES: u32 = 6;

pub const AUDIT_CSV_HEADER: &str =
    "instance_id,agent,notion,value,reference,ratio,ratio_decimal,verdict,exact\n";

pub const BENCH_CSV_HEADER: &str =
    "instance_id,allocator,kind,n,m,max_ratio,max_ratio_decimal,mean_ratio,mean_ratio_decimal,all_exact\n";

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("cannot read or write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown instance kind {0:?}")]
    UnknownKind(String),
    #[error("instance kind {kind} requires the {field} field")]
    MissingField { kind: &'static str, field: &'static str },
    #[error("invalid instance: {0}")]
    Instance(#[from] InstanceViolation),
    #[error("allocation is not a partition: {0}")]
    Partition(#[from] PartitionError),
    #[error("index 0 in a file (files are 1-based)")]
    ZeroIndex,
    #[error("header declares n={n}, m={m} but the payload has n={actual_n}, m={actual_m}")]
    HeaderMismatch { n: usize, m: usize, actual_n: usize, actual_m: usize },
    #[error("bad rational literal {literal:?}")]
    BadValue { literal: String },
}

#[derive(Serialize, Deserialize)]
struct InstanceFile {
    kind: String,
    n: usize,
    m: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sizes: Option<Vec<Vec<u64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    capacities: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    speeds: Option<Vec<Vec<u64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    points: Option<Vec<Vec<u32>>>,
}

fn canonical(file: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(file).expect("in-memory serialization");
    s.push('\n');
    s
}

/// Canonical JSON for an instance (validated first by the caller's
/// constructors; this never fails).
pub fn instance_to_json(inst: &ChoreInstance) -> String {
    use crate::model::ValuationSpec::*;
    let file = match &inst.spec {
        BinPacking { capacities } => InstanceFile {
            kind: inst.kind().as_str().to_string(),
            n: inst.n,
            m: inst.m,
            sizes: Some(inst.sizes.clone()),
            capacities: Some(capacities.clone()),
            speeds: None,
            points: None,
        },
        JobScheduling { speeds } => InstanceFile {
            kind: inst.kind().as_str().to_string(),
            n: inst.n,
            m: inst.m,
            sizes: Some(inst.sizes.clone()),
            capacities: None,
            speeds: Some(speeds.clone()),
            points: None,
        },
        CoveringPlane { points } => InstanceFile {
            kind: inst.kind().as_str().to_string(),
            n: inst.n,
            m: inst.m,
            sizes: None,
            capacities: None,
            speeds: None,
            points: Some(points.clone()),
        },
        Additive => InstanceFile {
            kind: inst.kind().as_str().to_string(),
            n: inst.n,
            m: inst.m,
            sizes: Some(inst.sizes.clone()),
            capacities: None,
            speeds: None,
            points: None,
        },
    };
    canonical(&file)
}

/// Parses and validates an instance file.
pub fn instance_from_json(text: &str) -> Result<ChoreInstance, FormatError> {
    let file: InstanceFile = serde_json::from_str(text)?;
    let need = |field: &'static str, kind: &'static str| FormatError::MissingField { kind, field };
    let inst = match file.kind.as_str() {
        "bin_packing" => ChoreInstance::bin_packing(
            file.sizes.ok_or(need("sizes", "bin_packing"))?,
            file.capacities.ok_or(need("capacities", "bin_packing"))?,
        ),
        "job_scheduling" => ChoreInstance::job_scheduling(
            file.sizes.ok_or(need("sizes", "job_scheduling"))?,
            file.speeds.ok_or(need("speeds", "job_scheduling"))?,
        ),
        "covering_plane" => {
            ChoreInstance::covering_plane(file.n, file.points.ok_or(need("points", "covering_plane"))?)
        }
        "additive" => ChoreInstance::additive(file.sizes.ok_or(need("sizes", "additive"))?),
        other => return Err(FormatError::UnknownKind(other.to_string())),
    };
    if inst.n != file.n || inst.m != file.m {
        return Err(FormatError::HeaderMismatch {
            n: file.n,
            m: file.m,
            actual_n: inst.n,
            actual_m: inst.m,
        });
    }
    inst.validate()?;
    Ok(inst)
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum CertificateFile {
    Packing { bins: Vec<Vec<usize>> },
    Schedule { machines: Vec<Vec<usize>>, makespan: String },
    Planes { coordinates: Vec<u32> },
    Sum { total: String },
}

fn one_based(items: &[usize]) -> Vec<usize> {
    items.iter().map(|j| j + 1).collect()
}

fn zero_based(items: &[usize]) -> Result<Vec<usize>, FormatError> {
    items
        .iter()
        .map(|&j| j.checked_sub(1).ok_or(FormatError::ZeroIndex))
        .collect()
}

fn certificate_to_file(cert: &Certificate) -> CertificateFile {
    match cert {
        Certificate::Packing { bins } => {
            CertificateFile::Packing { bins: bins.iter().map(|b| one_based(b)).collect() }
        }
        Certificate::Schedule { machines, makespan } => CertificateFile::Schedule {
            machines: machines.iter().map(|t| one_based(t)).collect(),
            makespan: fraction_string(makespan),
        },
        Certificate::Planes { coordinates } => {
            CertificateFile::Planes { coordinates: coordinates.clone() }
        }
        Certificate::Sum { total } => CertificateFile::Sum { total: total.to_string() },
    }
}

fn certificate_from_file(file: &CertificateFile) -> Result<Certificate, FormatError> {
    Ok(match file {
        CertificateFile::Packing { bins } => Certificate::Packing {
            bins: bins.iter().map(|b| zero_based(b)).collect::<Result<_, _>>()?,
        },
        CertificateFile::Schedule { machines, makespan } => Certificate::Schedule {
            machines: machines.iter().map(|t| zero_based(t)).collect::<Result<_, _>>()?,
            makespan: parse_rational(makespan)?,
        },
        CertificateFile::Planes { coordinates } => {
            Certificate::Planes { coordinates: coordinates.clone() }
        }
        CertificateFile::Sum { total } => Certificate::Sum {
            total: total
                .parse::<u128>()
                .map_err(|_| FormatError::BadValue { literal: total.clone() })?,
        },
    })
}

fn parse_rational(literal: &str) -> Result<Value, FormatError> {
    parse_value(literal).map_err(|_| FormatError::BadValue { literal: literal.to_string() })
}

#[derive(Serialize, Deserialize)]
struct AllocationFile {
    n: usize,
    m: usize,
    /// Per agent, 1-based item ids.
    bundles: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    certificates: Option<Vec<CertificateFile>>,
}

/// Canonical JSON for an allocation, optionally with one certificate per
/// agent backing the claimed bundle values.
pub fn allocation_to_json(alloc: &Allocation, certificates: Option<&[Certificate]>) -> String {
    let file = AllocationFile {
        n: alloc.n(),
        m: alloc.m(),
        bundles: alloc.bundles().iter().map(|b| one_based(b)).collect(),
        certificates: certificates.map(|cs| cs.iter().map(certificate_to_file).collect()),
    };
    canonical(&file)
}

/// Parses an allocation file back into a checked partition (plus its
/// certificates when present).
pub fn allocation_from_json(
    text: &str,
) -> Result<(Allocation, Option<Vec<Certificate>>), FormatError> {
    let file: AllocationFile = serde_json::from_str(text)?;
    let bundles = file
        .bundles
        .iter()
        .map(|b| zero_based(b))
        .collect::<Result<Vec<_>, _>>()?;
    let alloc = Allocation::new_for(bundles, file.n, file.m)?;
    let certs = match file.certificates {
        None => None,
        Some(cs) => Some(cs.iter().map(certificate_from_file).collect::<Result<_, _>>()?),
    };
    Ok((alloc, certs))
}

pub fn read_to_string(path: &Path) -> Result<String, FormatError> {
    std::fs::read_to_string(path)
        .map_err(|source| FormatError::Io { path: path.display().to_string(), source })
}

pub fn write_string(path: &Path, text: &str) -> Result<(), FormatError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)
            .map_err(|source| FormatError::Io { path: path.display().to_string(), source })?;
    }
    std::fs::write(path, text)
        .map_err(|source| FormatError::Io { path: path.display().to_string(), source })
}

fn ratio_columns(ratio: &Option<Value>) -> (String, String) {
    match ratio {
        Some(r) => (fraction_string(r), decimal_string(r, DECIMAL_PLACES)),
        None => ("inf".to_string(), "inf".to_string()),
    }
}

/// One CSV line per audit row; agents are 1-based in the file.
pub fn audit_csv(instance_id: &str, rows: &[AuditRow]) -> String {
    let mut out = String::from(AUDIT_CSV_HEADER);
    for r in rows {
        let (ratio, ratio_decimal) = ratio_columns(&r.ratio);
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            instance_id,
            r.agent + 1,
            r.notion.as_str(),
            fraction_string(&r.value),
            fraction_string(&r.reference),
            ratio,
            ratio_decimal,
            if r.verdict { "pass" } else { "fail" },
            r.exact,
        ));
    }
    out
}

/// Human-oriented audit summary; the CSV stays the machine interface.
pub fn audit_text(instance_id: &str, report: &AuditReport) -> String {
    let mut out = format!(
        "instance {}: alpha {} ({})\n",
        instance_id,
        fraction_string(&report.alpha),
        decimal_string(&report.alpha, DECIMAL_PLACES),
    );
    for r in &report.rows {
        let (ratio, ratio_decimal) = ratio_columns(&r.ratio);
        out.push_str(&format!(
            "  agent {} {:<5} value {} reference {} ratio {} ({}) {} [{}]\n",
            r.agent + 1,
            r.notion.as_str(),
            fraction_string(&r.value),
            fraction_string(&r.reference),
            ratio,
            ratio_decimal,
            if r.verdict { "pass" } else { "fail" },
            if r.exact { "exact" } else { "heuristic" },
        ));
    }
    let overall = match (&report.max_ratio, report.infinite) {
        (_, true) => "inf".to_string(),
        (Some(r), false) => {
            format!("{} ({})", fraction_string(r), decimal_string(r, DECIMAL_PLACES))
        }
        (None, false) => "none".to_string(),
    };
    out.push_str(&format!(
        "  overall: max ratio {} -> {}\n",
        overall,
        if report.pass { "PASS" } else { "FAIL" }
    ));
    out
}

pub const MMS_CSV_HEADER: &str =
    "instance_id,agent,lower,lower_decimal,upper,upper_decimal,exact,method\n";

/// One CSV line per agent: her exact maximin share (lower = upper) or the
/// certified bounds the budget allowed.
pub fn mms_csv(instance_id: &str, refs: &[crate::mms::AgentMms]) -> String {
    use crate::mms::AgentMms;
    let mut out = String::from(MMS_CSV_HEADER);
    for (agent, r) in refs.iter().enumerate() {
        let (lower, upper, exact, method) = match r {
            AgentMms::Exact(p) => (p.value, p.value, true, "exhaustive"),
            AgentMms::Bounds(b) => (b.lower, b.upper, false, b.method.as_str()),
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            instance_id,
            agent + 1,
            fraction_string(&lower),
            decimal_string(&lower, DECIMAL_PLACES),
            fraction_string(&upper),
            decimal_string(&upper, DECIMAL_PLACES),
            exact,
            method,
        ));
    }
    out
}

/// Readable per-agent maximin share lines.
pub fn mms_text(instance_id: &str, refs: &[crate::mms::AgentMms]) -> String {
    use crate::mms::AgentMms;
    let mut out = format!("instance {instance_id}: maximin shares\n");
    for (agent, r) in refs.iter().enumerate() {
        match r {
            AgentMms::Exact(p) => out.push_str(&format!(
                "  agent {}: {} ({}) [exact]\n",
                agent + 1,
                fraction_string(&p.value),
                decimal_string(&p.value, DECIMAL_PLACES),
            )),
            AgentMms::Bounds(b) => out.push_str(&format!(
                "  agent {}: between {} ({}) and {} ({}) [{}]\n",
                agent + 1,
                fraction_string(&b.lower),
                decimal_string(&b.lower, DECIMAL_PLACES),
                fraction_string(&b.upper),
                decimal_string(&b.upper, DECIMAL_PLACES),
                b.method.as_str(),
            )),
        }
    }
    out
}

/// One benchmark CSV line: a solved instance (or an `aggregate` summary line
/// where `n`/`m` stay empty).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRow {
    pub instance_id: String,
    pub allocator: String,
    pub kind: &'static str,
    pub n: Option<usize>,
    pub m: Option<usize>,
    /// Largest agent ratio (`None` renders as `inf`).
    pub max_ratio: Option<Value>,
    /// Mean agent ratio, exact rational.
    pub mean_ratio: Option<Value>,
    pub all_exact: bool,
}

pub fn bench_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(BENCH_CSV_HEADER);
    let opt = |v: &Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
    for r in rows {
        let (max_ratio, max_decimal) = ratio_columns(&r.max_ratio);
        let (mean_ratio, mean_decimal) = ratio_columns(&r.mean_ratio);
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            r.instance_id,
            r.allocator,
            r.kind,
            opt(&r.n),
            opt(&r.m),
            max_ratio,
            max_decimal,
            mean_ratio,
            mean_decimal,
            r.all_exact,
        ));
    }
    out
}
