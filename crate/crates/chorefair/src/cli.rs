//! Command-line front end: generate instances, run allocators, audit
//! allocations, report maximin shares, certify impossibility bounds, and
//! benchmark allocators over seeded random families.
//!
//! Exit codes: `0` success, `1` usage or input error, `2` a checked
//! invariant or audit failed (the run itself completed).

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::alloc::{
    all_or_nothing_allocate, bag_fill_allocate, bag_fill_allocate_v2, passable_set_packing,
    round_robin_allocate, threshold_search_schedule, AllocError,
};
use crate::audit::{
    audit_mms, audit_prop, certify_lower_bound, covering_mms_profile, AuditError, AuditReport,
    CertifyMode, CertifyOutcome, EXHAUSTIVE_CAP,
};
use crate::format::{
    allocation_from_json, allocation_to_json, audit_csv, audit_text, bench_csv, instance_from_json,
    instance_to_json, mms_csv, mms_text, read_to_string, write_string, BenchRow, FormatError,
};
use crate::gen::{
    gen_covering_planes, gen_feige_binpacking, gen_propx_instances, gen_random_binpacking,
    gen_random_jobscheduling,
};
use crate::ido::{lift_allocation, to_ido};
use crate::mms::{mms_reference, AgentMms, MmsBudget, MmsError};
use crate::model::{Allocation, ChoreInstance, Kind, ModelError};
use crate::valuation::{value_or_upper, verify_certificate, Certificate, OracleBudget, ValueError};
use crate::value::{int, parse_value, Value};

/// Fair division of chores: generators, allocators, audits, and bounds.
#[derive(Parser)]
#[command(name = "chorefair", version, about, disable_help_subcommand = true)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write an instance file for one of the built-in families.
    Generate(GenerateArgs),
    /// Run an allocator on an instance and write the allocation with
    /// per-agent certificates.
    Solve(SolveArgs),
    /// Score an allocation against maximin-share and proportionality
    /// targets; exits 2 when a maximin row fails.
    Audit(AuditArgs),
    /// Report each agent's maximin share: exact under the search budget,
    /// certified bounds otherwise.
    Mms(MmsArgs),
    /// Check whether every allocation leaves some agent at or above a
    /// target multiple of her maximin share; exits 2 on a counterexample.
    Certify(CertifyArgs),
    /// Solve seeded random instances with each compatible allocator and
    /// write a ratio CSV with aggregate rows.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GenKind {
    /// Random bin-packing instance (per-agent capacities).
    RandomBinpacking,
    /// Random job-scheduling instance (per-agent machine speeds).
    RandomJobscheduling,
    /// Every point of the n-dimensional grid [n]^n, one chore per point.
    CoveringPlanes,
    /// Fixed 3-agent, 9-item bin-packing instance with no allocation
    /// better than twice the maximin share.
    Feige,
    /// Paired bin-packing and scheduling instances where one agent must
    /// take two items.
    Propx,
}

#[derive(Args)]
struct GenerateArgs {
    /// Instance family.
    #[arg(value_enum)]
    kind: GenKind,
    /// Output path; for propx a prefix, writing <out>.bin.json and
    /// <out>.job.json.
    #[arg(long)]
    out: PathBuf,
    /// Number of agents.
    #[arg(long, default_value_t = 3)]
    n: usize,
    /// Number of items (random families).
    #[arg(long, default_value_t = 9)]
    m: usize,
    /// RNG seed (random families).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest agent capacity (random-binpacking).
    #[arg(long, default_value_t = 50)]
    cap_max: u64,
    /// Most machines per agent (random-jobscheduling).
    #[arg(long, default_value_t = 3)]
    k_max: usize,
    /// Largest machine speed (random-jobscheduling).
    #[arg(long, default_value_t = 5)]
    speed_max: u64,
    /// Largest job size (random-jobscheduling).
    #[arg(long, default_value_t = 9)]
    size_max: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AllocatorName {
    /// Bag filling for bin-packing: twice the maximin share.
    Bagfill,
    /// Bag filling that also certifies ceil(3/2 * maximin) bins.
    Bagfill32,
    /// Round robin for job scheduling: twice the maximin share.
    Roundrobin,
    /// Round robin plus a per-agent geometric threshold-schedule search.
    ThresholdSearch,
    /// Hand everything to the agent who minds the whole set least.
    Allornothing,
}

impl AllocatorName {
    fn as_str(self) -> &'static str {
        match self {
            AllocatorName::Bagfill => "bagfill",
            AllocatorName::Bagfill32 => "bagfill32",
            AllocatorName::Roundrobin => "roundrobin",
            AllocatorName::ThresholdSearch => "threshold-search",
            AllocatorName::Allornothing => "allornothing",
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    /// Instance file to solve.
    #[arg(long)]
    instance: PathBuf,
    /// Allocator to run.
    #[arg(long, value_enum)]
    allocator: AllocatorName,
    /// Growth rate for the threshold search (threshold-search only).
    #[arg(long, value_parser = parse_ratio, default_value = "1/10")]
    delta: Value,
    /// Item cap for the exact value oracle (certificates and audits).
    #[arg(long)]
    budget_items: Option<usize>,
    /// Allocation output path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Csv,
    Text,
}

#[derive(Args)]
struct AuditArgs {
    /// Instance file.
    #[arg(long)]
    instance: PathBuf,
    /// Allocation file to score.
    #[arg(long)]
    allocation: PathBuf,
    /// Pass threshold: an agent passes when her cost is at most alpha
    /// times the reference.
    #[arg(long, value_parser = parse_ratio, default_value = "2")]
    alpha: Value,
    /// Item cap for the exact value oracle.
    #[arg(long)]
    budget_items: Option<usize>,
    /// Report format.
    #[arg(long, value_enum, default_value_t = ReportFormat::Csv)]
    format: ReportFormat,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MmsArgs {
    /// Instance file.
    #[arg(long)]
    instance: PathBuf,
    /// Item cap for the exact value oracle and the partition search.
    #[arg(long)]
    budget_items: Option<usize>,
    /// Report format.
    #[arg(long, value_enum, default_value_t = ReportFormat::Csv)]
    format: ReportFormat,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CertifyModeArg {
    /// Exhaustive when n^m fits the cap, sampled otherwise.
    Auto,
    /// Enumerate every allocation (proof).
    Exhaustive,
    /// Seeded random allocations (evidence).
    Sampled,
}

#[derive(Args)]
struct CertifyArgs {
    /// Instance file.
    #[arg(long)]
    instance: PathBuf,
    /// Ratio to certify: every allocation must leave some agent at or
    /// above target times her maximin share.
    #[arg(long, value_parser = parse_ratio)]
    target: Value,
    /// Search strategy.
    #[arg(long, value_enum, default_value_t = CertifyModeArg::Auto)]
    mode: CertifyModeArg,
    /// Random allocations to draw in sampled mode.
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    /// RNG seed for sampled mode.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Item cap for the exact value oracle and the partition search.
    #[arg(long)]
    budget_items: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BenchKind {
    Binpacking,
    Jobscheduling,
}

#[derive(Args)]
struct BenchArgs {
    /// Random family to sweep.
    #[arg(long, value_enum)]
    kind: BenchKind,
    /// Number of instances.
    #[arg(long, default_value_t = 100)]
    instances: usize,
    /// RNG seed; the same seed reproduces the CSV byte for byte.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of agents.
    #[arg(long, default_value_t = 3)]
    n: usize,
    /// Items per instance are drawn from 1..=m-max.
    #[arg(long, default_value_t = 8)]
    m_max: usize,
    /// Largest agent capacity (binpacking).
    #[arg(long, default_value_t = 30)]
    cap_max: u64,
    /// Most machines per agent (jobscheduling).
    #[arg(long, default_value_t = 3)]
    k_max: usize,
    /// Largest machine speed (jobscheduling).
    #[arg(long, default_value_t = 5)]
    speed_max: u64,
    /// Largest job size (jobscheduling).
    #[arg(long, default_value_t = 9)]
    size_max: u64,
    /// Run only this allocator instead of every compatible one.
    #[arg(long, value_enum)]
    allocator: Option<AllocatorName>,
    /// Growth rate for the threshold search.
    #[arg(long, value_parser = parse_ratio, default_value = "1/10")]
    delta: Value,
    /// Item cap for the exact value oracle and the partition search.
    #[arg(long)]
    budget_items: Option<usize>,
    /// CSV output path.
    #[arg(long)]
    out: PathBuf,
}

fn parse_ratio(s: &str) -> Result<Value, String> {
    parse_value(s).map_err(|e| e.to_string())
}

/// A command failure, split by exit code.
#[derive(Debug)]
enum CmdError {
    /// Bad arguments or unreadable/ill-formed input: exit 1.
    Usage(String),
    /// The run completed but a checked invariant or audit failed: exit 2.
    Invariant(String),
}

impl CmdError {
    fn code(&self) -> i32 {
        match self {
            CmdError::Usage(_) => 1,
            CmdError::Invariant(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CmdError::Usage(m) | CmdError::Invariant(m) => m,
        }
    }
}

impl From<FormatError> for CmdError {
    fn from(e: FormatError) -> Self {
        CmdError::Usage(e.to_string())
    }
}

impl From<AllocError> for CmdError {
    fn from(e: AllocError) -> Self {
        CmdError::Usage(e.to_string())
    }
}

impl From<ValueError> for CmdError {
    fn from(e: ValueError) -> Self {
        CmdError::Usage(e.to_string())
    }
}

impl From<MmsError> for CmdError {
    fn from(e: MmsError) -> Self {
        CmdError::Usage(e.to_string())
    }
}

impl From<AuditError> for CmdError {
    fn from(e: AuditError) -> Self {
        CmdError::Usage(e.to_string())
    }
}

impl From<ModelError> for CmdError {
    fn from(e: ModelError) -> Self {
        CmdError::Usage(e.to_string())
    }
}

/// Parse `args` and run the selected subcommand, returning the process
/// exit code. The binary is a one-line wrapper over this.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Audit(a) => cmd_audit(a),
        Command::Mms(a) => cmd_mms(a),
        Command::Certify(a) => cmd_certify(a),
        Command::Bench(a) => cmd_bench(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.code()
        }
    }
}

fn oracle_budget(items: Option<usize>) -> OracleBudget {
    match items {
        Some(k) => OracleBudget::with_items(k),
        None => OracleBudget::default(),
    }
}

fn mms_budget(items: Option<usize>) -> MmsBudget {
    match items {
        Some(k) => MmsBudget {
            max_items: k,
            ..MmsBudget::default()
        },
        None => MmsBudget::default(),
    }
}

fn instance_id_of(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "instance".to_string())
}

fn load_instance(path: &Path) -> Result<ChoreInstance, CmdError> {
    let text = read_to_string(path)?;
    Ok(instance_from_json(&text)?)
}

/// Exact maximin references where feasible. Covering instances get the
/// closed form (partition the grid by the agent's own coordinate), every
/// other kind runs the budgeted partition search with bound fallback.
fn references(
    inst: &ChoreInstance,
    mms: &MmsBudget,
    oracle: &OracleBudget,
) -> Result<Vec<AgentMms>, CmdError> {
    if inst.kind() == Kind::CoveringPlane {
        let mut refs = Vec::with_capacity(inst.n);
        for agent in 0..inst.n {
            refs.push(AgentMms::Exact(covering_mms_profile(inst, agent)?));
        }
        Ok(refs)
    } else {
        Ok(mms_reference(inst, mms, oracle))
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CmdError> {
    match out {
        Some(path) => {
            write_string(path, text)?;
            println!("wrote {}", path.display());
            Ok(())
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_generate(a: GenerateArgs) -> Result<i32, CmdError> {
    match a.kind {
        GenKind::CoveringPlanes => {
            if !(2..=4).contains(&a.n) {
                return Err(CmdError::Usage(format!(
                    "covering-planes supports --n between 2 and 4, got {}",
                    a.n
                )));
            }
            write_instance(&a.out, &gen_covering_planes(a.n))?;
        }
        GenKind::Feige => {
            write_instance(&a.out, &gen_feige_binpacking())?;
        }
        GenKind::Propx => {
            if a.n == 0 {
                return Err(CmdError::Usage("propx needs --n of at least 1".to_string()));
            }
            let (bin, job) = gen_propx_instances(a.n);
            let bin_path = suffixed(&a.out, ".bin.json");
            let job_path = suffixed(&a.out, ".job.json");
            write_instance(&bin_path, &bin)?;
            write_instance(&job_path, &job)?;
        }
        GenKind::RandomBinpacking => {
            if a.n == 0 {
                return Err(CmdError::Usage("need --n of at least 1".to_string()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            let inst = gen_random_binpacking(a.n, a.m, a.cap_max, &mut rng);
            write_instance(&a.out, &inst)?;
        }
        GenKind::RandomJobscheduling => {
            if a.n == 0 {
                return Err(CmdError::Usage("need --n of at least 1".to_string()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            let inst =
                gen_random_jobscheduling(a.n, a.m, a.k_max, a.speed_max, a.size_max, &mut rng);
            write_instance(&a.out, &inst)?;
        }
    }
    Ok(0)
}

fn suffixed(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_os_string();
    s.push(suffix);
    PathBuf::from(s)
}

fn write_instance(path: &Path, inst: &ChoreInstance) -> Result<(), CmdError> {
    write_string(path, &instance_to_json(inst))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_solve(a: SolveArgs) -> Result<i32, CmdError> {
    let inst = load_instance(&a.instance)?;
    let oracle = oracle_budget(a.budget_items);
    let (alloc, certs) = solve_instance(&inst, a.allocator, a.delta, &oracle)?;
    for agent in 0..inst.n {
        verify_certificate(&inst, agent, alloc.bundle(agent), &certs[agent]).map_err(|e| {
            CmdError::Invariant(format!("certificate for agent {} failed: {e}", agent + 1))
        })?;
    }
    write_string(&a.out, &allocation_to_json(&alloc, Some(&certs)))?;
    println!("wrote {}", a.out.display());
    Ok(0)
}

/// Run `allocator` on `inst`, reducing to and lifting from the shared-order
/// form when needed, and build one value certificate per agent.
fn solve_instance(
    inst: &ChoreInstance,
    allocator: AllocatorName,
    delta: Value,
    oracle: &OracleBudget,
) -> Result<(Allocation, Vec<Certificate>), CmdError> {
    let alloc = match allocator {
        AllocatorName::Bagfill => run_on_ido(inst, Kind::BinPacking, bag_fill_allocate)?,
        AllocatorName::Bagfill32 => run_on_ido(inst, Kind::BinPacking, bag_fill_allocate_v2)?,
        AllocatorName::Roundrobin | AllocatorName::ThresholdSearch => {
            run_on_ido(inst, Kind::JobScheduling, round_robin_allocate)?
        }
        AllocatorName::Allornothing => all_or_nothing_allocate(inst, oracle)?,
    };
    let certs = match allocator {
        AllocatorName::Bagfill32 => packing_certificates(inst, &alloc)?,
        AllocatorName::ThresholdSearch => schedule_certificates(inst, &alloc, delta)?,
        _ => oracle_certificates(inst, &alloc, oracle)?,
    };
    Ok((alloc, certs))
}

/// Apply an allocator that requires identically ordered sizes: run it
/// directly when the instance already is, otherwise allocate on the
/// reduced instance and lift the bundles back (costs never go up).
fn run_on_ido(
    inst: &ChoreInstance,
    expected: Kind,
    allocate: fn(&ChoreInstance) -> Result<Allocation, AllocError>,
) -> Result<Allocation, CmdError> {
    if inst.kind() != expected {
        return Err(CmdError::Usage(format!(
            "allocator needs a {} instance, got {}",
            expected.as_str(),
            inst.kind().as_str()
        )));
    }
    if inst.is_ido()? {
        Ok(allocate(inst)?)
    } else {
        let (ido, _mapping) = to_ido(inst)?;
        let ido_alloc = allocate(&ido)?;
        Ok(lift_allocation(inst, &ido_alloc)?)
    }
}

fn oracle_certificates(
    inst: &ChoreInstance,
    alloc: &Allocation,
    oracle: &OracleBudget,
) -> Result<Vec<Certificate>, CmdError> {
    let mut certs = Vec::with_capacity(inst.n);
    for agent in 0..inst.n {
        let (valued, _exact) = value_or_upper(inst, agent, alloc.bundle(agent), oracle)?;
        certs.push(valued.certificate);
    }
    Ok(certs)
}

fn packing_certificates(
    inst: &ChoreInstance,
    alloc: &Allocation,
) -> Result<Vec<Certificate>, CmdError> {
    let mut certs = Vec::with_capacity(inst.n);
    for agent in 0..inst.n {
        let sizes = inst.sizes_of(agent).expect("bin-packing sizes");
        let capacity = inst.capacity(agent).expect("bin-packing capacity");
        certs.push(passable_set_packing(sizes, capacity, alloc.bundle(agent))?);
    }
    Ok(certs)
}

/// Schedule each agent's bundle on her own machines via the geometric
/// threshold search, then report the machine assignment in original item
/// ids together with the achieved makespan.
fn schedule_certificates(
    inst: &ChoreInstance,
    alloc: &Allocation,
    delta: Value,
) -> Result<Vec<Certificate>, CmdError> {
    let mut certs = Vec::with_capacity(inst.n);
    for agent in 0..inst.n {
        let sizes = inst.sizes_of(agent).expect("job-scheduling sizes");
        let speeds = inst.speeds_of(agent).expect("job-scheduling speeds");
        let mut items: Vec<usize> = alloc.bundle(agent).to_vec();
        items.sort_by(|&a, &b| sizes[b].cmp(&sizes[a]).then(a.cmp(&b)));
        let jobs: Vec<u64> = items.iter().map(|&j| sizes[j]).collect();
        let search = threshold_search_schedule(&jobs, speeds, delta)?;
        let machines: Vec<Vec<usize>> = search
            .schedule
            .machines
            .iter()
            .map(|slots| slots.iter().map(|&pos| items[pos]).collect())
            .collect();
        certs.push(Certificate::Schedule {
            machines,
            makespan: search.schedule.makespan,
        });
    }
    Ok(certs)
}

fn cmd_audit(a: AuditArgs) -> Result<i32, CmdError> {
    let inst = load_instance(&a.instance)?;
    let (alloc, _certs) = allocation_from_json(&read_to_string(&a.allocation)?)?;
    if alloc.n() != inst.n || alloc.m() != inst.m {
        return Err(CmdError::Usage(format!(
            "allocation is for {} agents and {} items, instance has {} and {}",
            alloc.n(),
            alloc.m(),
            inst.n,
            inst.m
        )));
    }
    let oracle = oracle_budget(a.budget_items);
    let refs = references(&inst, &mms_budget(a.budget_items), &oracle)?;
    let mms_report = audit_mms(&inst, &alloc, &refs, a.alpha, &oracle)?;
    let prop_report = audit_prop(&inst, &alloc, a.alpha, &oracle)?;
    let id = instance_id_of(&a.instance);
    let text = match a.format {
        ReportFormat::Csv => {
            let mut rows = mms_report.rows.clone();
            rows.extend(prop_report.rows.iter().cloned());
            audit_csv(&id, &rows)
        }
        ReportFormat::Text => format!(
            "{}{}",
            audit_text(&id, &mms_report),
            audit_text(&id, &prop_report)
        ),
    };
    emit(a.out.as_deref(), &text)?;
    if mms_report.pass {
        Ok(0)
    } else {
        Err(CmdError::Invariant(format!(
            "an agent exceeds {} times her maximin share",
            crate::value::fraction_string(&a.alpha)
        )))
    }
}

fn cmd_mms(a: MmsArgs) -> Result<i32, CmdError> {
    let inst = load_instance(&a.instance)?;
    let refs = references(
        &inst,
        &mms_budget(a.budget_items),
        &oracle_budget(a.budget_items),
    )?;
    let id = instance_id_of(&a.instance);
    let text = match a.format {
        ReportFormat::Csv => mms_csv(&id, &refs),
        ReportFormat::Text => mms_text(&id, &refs),
    };
    emit(a.out.as_deref(), &text)?;
    Ok(0)
}

fn cmd_certify(a: CertifyArgs) -> Result<i32, CmdError> {
    let inst = load_instance(&a.instance)?;
    if a.target < int(0) {
        return Err(CmdError::Usage("--target must be nonnegative".to_string()));
    }
    let mode = match a.mode {
        CertifyModeArg::Exhaustive => CertifyMode::Exhaustive,
        CertifyModeArg::Sampled => CertifyMode::Sampled {
            trials: a.trials,
            seed: a.seed,
        },
        CertifyModeArg::Auto => {
            let fits = (inst.n as u128)
                .checked_pow(inst.m.min(u32::MAX as usize) as u32)
                .is_some_and(|count| count <= EXHAUSTIVE_CAP);
            if fits {
                CertifyMode::Exhaustive
            } else {
                CertifyMode::Sampled {
                    trials: a.trials,
                    seed: a.seed,
                }
            }
        }
    };
    let outcome = certify_lower_bound(
        &inst,
        a.target,
        mode,
        &mms_budget(a.budget_items),
        &oracle_budget(a.budget_items),
    )?;
    let text = certify_report(&outcome);
    emit(a.out.as_deref(), &text)?;
    match &outcome.counterexample {
        None => Ok(0),
        Some(_) => Err(CmdError::Invariant(format!(
            "found an allocation where every agent stays below {} times her maximin share",
            crate::value::fraction_string(&outcome.target)
        ))),
    }
}

fn certify_report(outcome: &CertifyOutcome) -> String {
    use crate::value::{decimal_string, fraction_string};
    let mut out = String::new();
    let mms_list: Vec<String> = outcome.mms.iter().map(fraction_string).collect();
    out.push_str(&format!("maximin shares: [{}]\n", mms_list.join(", ")));
    if outcome.exhaustive {
        out.push_str(&format!(
            "checked all {} allocations\n",
            outcome.allocations_checked
        ));
    } else {
        let (trials, seed) = outcome.sampling.expect("sampled outcome");
        out.push_str(&format!(
            "sampled {} of {} random allocations (seed {})\n",
            outcome.allocations_checked, trials, seed
        ));
    }
    match &outcome.min_max_ratio {
        Some(r) => out.push_str(&format!(
            "smallest worst-agent ratio seen: {} ({})\n",
            fraction_string(r),
            decimal_string(r, 6)
        )),
        None => out.push_str("smallest worst-agent ratio seen: inf (an agent with share 0 always pays)\n"),
    }
    if let Some(w) = &outcome.witness {
        let owners: Vec<String> = w.iter().map(|&o| (o + 1).to_string()).collect();
        out.push_str(&format!("achieved by owners: [{}]\n", owners.join(", ")));
    }
    match &outcome.counterexample {
        None if outcome.exhaustive => out.push_str(&format!(
            "certified: every allocation puts some agent at or above {} times her maximin share\n",
            fraction_string(&outcome.target)
        )),
        None => out.push_str(&format!(
            "no allocation found below {} times the maximin shares (evidence, not proof)\n",
            fraction_string(&outcome.target)
        )),
        Some(owners) => {
            let owners: Vec<String> = owners.iter().map(|&o| (o + 1).to_string()).collect();
            out.push_str(&format!(
                "counterexample owners: [{}] keeps every agent below {} times her maximin share\n",
                owners.join(", "),
                fraction_string(&outcome.target)
            ));
        }
    }
    out
}

fn compatible_allocators(kind: BenchKind) -> Vec<AllocatorName> {
    match kind {
        BenchKind::Binpacking => vec![
            AllocatorName::Bagfill,
            AllocatorName::Bagfill32,
            AllocatorName::Allornothing,
        ],
        BenchKind::Jobscheduling => vec![
            AllocatorName::Roundrobin,
            AllocatorName::ThresholdSearch,
            AllocatorName::Allornothing,
        ],
    }
}

fn cmd_bench(a: BenchArgs) -> Result<i32, CmdError> {
    if a.n == 0 {
        return Err(CmdError::Usage("need --n of at least 1".to_string()));
    }
    if a.m_max == 0 {
        return Err(CmdError::Usage("need --m-max of at least 1".to_string()));
    }
    let allocators = match a.allocator {
        Some(name) => {
            let ok = compatible_allocators(a.kind).contains(&name);
            if !ok {
                return Err(CmdError::Usage(format!(
                    "allocator {} does not apply to this family",
                    name.as_str()
                )));
            }
            vec![name]
        }
        None => compatible_allocators(a.kind),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut instances = Vec::with_capacity(a.instances);
    for idx in 0..a.instances {
        let m = rng.gen_range(1..=a.m_max);
        let (id, inst) = match a.kind {
            BenchKind::Binpacking => (
                format!("bin-{idx:04}"),
                gen_random_binpacking(a.n, m, a.cap_max, &mut rng),
            ),
            BenchKind::Jobscheduling => (
                format!("job-{idx:04}"),
                gen_random_jobscheduling(a.n, m, a.k_max, a.speed_max, a.size_max, &mut rng),
            ),
        };
        instances.push((id, inst));
    }
    let oracle = oracle_budget(a.budget_items);
    let mms = mms_budget(a.budget_items);
    let results: Result<Vec<Vec<(BenchRow, Option<Value>, bool)>>, CmdError> = instances
        .par_iter()
        .map(|(id, inst)| {
            let refs = references(inst, &mms, &oracle)?;
            let mut rows = Vec::with_capacity(allocators.len());
            for &name in &allocators {
                let (alloc, _certs) = solve_instance(inst, name, a.delta, &oracle)?;
                let report = audit_mms(inst, &alloc, &refs, int(2), &oracle)?;
                let (max, mean, exact) = report_ratio_stats(&report);
                rows.push((
                    BenchRow {
                        instance_id: id.clone(),
                        allocator: name.as_str().to_string(),
                        kind: inst.kind().as_str(),
                        n: Some(inst.n),
                        m: Some(inst.m),
                        max_ratio: max,
                        mean_ratio: mean,
                        all_exact: exact,
                    },
                    max,
                    !report.infinite,
                ))
            }
            Ok(rows)
        })
        .collect();
    let mut flat: Vec<(BenchRow, Option<Value>, bool)> = results?.into_iter().flatten().collect();
    flat.sort_by(|x, y| {
        x.0.instance_id
            .cmp(&y.0.instance_id)
            .then_with(|| x.0.allocator.cmp(&y.0.allocator))
    });
    let mut rows: Vec<BenchRow> = flat.iter().map(|(row, _, _)| row.clone()).collect();
    if !flat.is_empty() {
        for &name in &allocators {
            rows.push(aggregate_row(name, &flat, a.kind));
        }
        rows[flat.len()..].sort_by(|x, y| x.allocator.cmp(&y.allocator));
    }
    let csv = bench_csv(&rows);
    write_string(&a.out, &csv)?;
    for row in &rows[flat.len()..] {
        let shown = match &row.max_ratio {
            Some(r) => crate::value::fraction_string(r),
            None => "inf".to_string(),
        };
        println!("{}: worst ratio {}", row.allocator, shown);
    }
    println!("wrote {}", a.out.display());
    Ok(0)
}

/// Worst and mean cost/share ratio over the agents of one audit, plus
/// whether every reference was exact. `None` means unbounded (an agent
/// with share 0 was handed positive cost).
fn report_ratio_stats(report: &AuditReport) -> (Option<Value>, Option<Value>, bool) {
    let exact = report.rows.iter().all(|r| r.exact);
    if report.infinite {
        return (None, None, exact);
    }
    let ratios: Vec<Value> = report
        .rows
        .iter()
        .map(|r| r.ratio.expect("finite report"))
        .collect();
    let max = ratios.iter().copied().max();
    let mean = if ratios.is_empty() {
        None
    } else {
        Some(ratios.iter().copied().sum::<Value>() / int(ratios.len() as i128))
    };
    (max, mean, exact)
}

/// Summary line over every instance an allocator ran on: worst max-ratio,
/// exact mean of the per-instance max-ratios, and whether every audit
/// used exact references.
fn aggregate_row(
    name: AllocatorName,
    flat: &[(BenchRow, Option<Value>, bool)],
    kind: BenchKind,
) -> BenchRow {
    let mine: Vec<&(BenchRow, Option<Value>, bool)> = flat
        .iter()
        .filter(|(row, _, _)| row.allocator == name.as_str())
        .collect();
    let any_infinite = mine.iter().any(|(_, max, _)| max.is_none());
    let max_ratio = if any_infinite {
        None
    } else {
        mine.iter().filter_map(|(_, max, _)| *max).max()
    };
    let mean_ratio = if any_infinite || mine.is_empty() {
        None
    } else {
        Some(
            mine.iter().filter_map(|(_, max, _)| *max).sum::<Value>()
                / int(mine.len() as i128),
        )
    };
    BenchRow {
        instance_id: "aggregate".to_string(),
        allocator: name.as_str().to_string(),
        kind: match kind {
            BenchKind::Binpacking => "bin_packing",
            BenchKind::Jobscheduling => "job_scheduling",
        },
        n: None,
        m: None,
        max_ratio,
        mean_ratio,
        all_exact: mine.iter().all(|(row, _, _)| row.all_exact),
    }
}
