//! Command-line front end.
//!
//! Every subcommand prints `key=value` lines, or one JSON object per line
//! with `--json`. [`run`] returns the process exit code: 0 on success, 1 when
//! a cross-check disagrees, 2 on bad input.

use crate::analysis;
use crate::error::{Error, Result};
use crate::hgraph;
use crate::ihm::{self, SolveOptions};
use crate::instance::{parse_instance, Family, Instance};
use crate::ndp::{self, CurveKind};
use crate::oracle::{self, DiffConfig, Method};
use crate::orbital::{self, DestinationPolicy};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use std::ffi::OsString;
use std::hash::{DefaultHasher, Hash, Hasher};
use std::io::Write;
use std::path::{Path, PathBuf};

/// Environment variable naming the memo directory for solve results.
pub const CACHE_ENV: &str = "ORBITAL_SSP_CACHE";

#[derive(Parser, Debug)]
#[command(name = "orbital-ssp", version, about = "Exact subset-sum counting on the orbital graph")]
pub struct Cli {
    /// Print JSON objects instead of key=value lines.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for generators and benchmarks.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Worker threads for parallel subcommands.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Count the solutions of an instance and list their indices.
    Solve(SolveArgs),
    /// Count with the reference oracles and compare with the pipeline.
    Verify(VerifyArgs),
    /// Write an instance from a family.
    Gen(GenArgs),
    /// Differential benchmark of the pipeline against an oracle.
    Bench(BenchArgs),
    /// Configuration-graph audits and growth tables.
    Analyze(AnalyzeArgs),
    /// Binomial coefficients, restricted partitions and sums of cubes.
    Apps(AppsArgs),
    /// The non-decreasing path family.
    Ndp(NdpArgs),
    /// Transformation path counts and wormholes.
    Hgraph(HgraphArgs),
    /// Dump an orbital graph as JSON lines.
    Graph(GraphArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum PolicyArg {
    Canonical,
    AllTrue,
}

impl From<PolicyArg> for DestinationPolicy {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::Canonical => DestinationPolicy::Canonical,
            PolicyArg::AllTrue => DestinationPolicy::AllTrue,
        }
    }
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    /// Instance file, `-` for stdin.
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long)]
    pub count_only: bool,
    #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub indices_cap: u64,
    /// Write per-iteration metrics here.
    #[arg(long)]
    pub metrics_csv: Option<PathBuf>,
    /// Write the final graph here as JSON lines.
    #[arg(long)]
    pub dump_final: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = PolicyArg::Canonical)]
    pub policy: PolicyArg,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
pub enum MethodArg {
    Enum,
    Mitm,
    Dp,
    All,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long, value_enum, default_value_t = MethodArg::All)]
    pub method: MethodArg,
    /// Skip the pipeline and only compare oracles with each other.
    #[arg(long)]
    pub oracle_only: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FamilyArg {
    Random,
    Cp,
    Ap,
    Gp,
    Dissociated,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(value_enum)]
    pub family: FamilyArg,
    #[arg(long)]
    pub n: usize,
    /// Bit size for `random`.
    #[arg(long, default_value_t = 16)]
    pub m: u32,
    /// First term (`cp`, `ap`, `gp`).
    #[arg(long)]
    pub k1: Option<BigUint>,
    /// Common difference (`ap`).
    #[arg(long)]
    pub k2: Option<BigUint>,
    /// Common ratio (`gp`).
    #[arg(long)]
    pub r: Option<BigUint>,
    /// Target; defaults to half the total.
    #[arg(long)]
    pub target: Option<BigUint>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Comma-separated families.
    #[arg(long, default_value = "random", value_delimiter = ',')]
    pub families: Vec<String>,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 1)]
    pub n_min: usize,
    #[arg(long, default_value_t = 20)]
    pub n_max: usize,
    #[arg(long, default_value_t = 16)]
    pub m_max: u32,
    #[arg(long, default_value_t = 24)]
    pub enum_max: usize,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON lines of every disagreeing or unsound trial.
    #[arg(long)]
    pub findings: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    #[command(subcommand)]
    pub what: AnalyzeCmd,
}

#[derive(Subcommand, Debug)]
pub enum AnalyzeCmd {
    /// Product-inequality audit of the configuration graph.
    Config {
        #[arg(long)]
        instance: PathBuf,
        /// Largest number of `(node, height)` states to visit.
        #[arg(long, default_value_t = 5_000_000)]
        cap: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Per-`n` peak growth from a bench CSV.
    Growth {
        #[arg(long)]
        bench: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The `|V_m|` bound from unique sums.
    Vm {
        #[arg(long)]
        instance: PathBuf,
    },
}

#[derive(Args, Debug)]
pub struct AppsArgs {
    #[command(subcommand)]
    pub what: AppsCmd,
}

#[derive(Subcommand, Debug, Clone, Copy)]
pub enum AppsCmd {
    /// `C(n, k)` with `a = 1^n`, `T = k`.
    Binomial { n: usize, k: u64 },
    /// Partitions of `N` into distinct parts at most `K`: `a = [1..K]`, `T = N`.
    Partitions { n: u64, k: u64 },
    /// Sums of distinct cubes: `a = [1^3..K^3]`, `T = N`.
    Cubes { n: u64, k: u64 },
}

#[derive(Args, Debug)]
pub struct NdpArgs {
    #[arg(long)]
    pub n: u32,
    /// Adds vertex sums; required for `--svg`.
    #[arg(long)]
    pub instance: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct HgraphArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub instance: Option<PathBuf>,
    /// Comma-separated transformation path, e.g. `9,8,7,5,4`.
    #[arg(long, value_delimiter = ',')]
    pub path: Vec<u32>,
    /// Valid wormhole counts per level.
    #[arg(long)]
    pub valid: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Stage {
    G0,
    Reachable,
    Final,
}

#[derive(Args, Debug)]
pub struct GraphArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long, value_enum, default_value_t = Stage::Reachable)]
    pub stage: Stage,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// A line of output.
#[derive(Default)]
pub struct Record(Map<String, Value>);

impl Record {
    pub fn kv(mut self, k: &str, v: impl Into<Value>) -> Self {
        self.0.insert(k.to_string(), v.into());
        self
    }

    pub fn big(self, k: &str, v: &BigUint) -> Self {
        let s = v.to_string();
        self.kv(k, s)
    }

    fn list(self, k: &str, vs: &[BigUint]) -> Self {
        let v: Vec<Value> = vs.iter().map(|x| Value::String(x.to_string())).collect();
        self.kv(k, v)
    }

    /// `k=v` pairs separated by spaces; lists print as `[a,b]`.
    pub fn line(&self, json: bool) -> String {
        if json {
            return Value::Object(self.0.clone()).to_string();
        }
        self.0
            .iter()
            .map(|(k, v)| format!("{k}={}", plain(v)))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(a) => format!("[{}]", a.iter().map(plain).collect::<Vec<_>>().join(",")),
        other => other.to_string(),
    }
}

struct Ctx<'a> {
    json: bool,
    seed: u64,
    out: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn emit(&mut self, r: Record) -> Result<()> {
        writeln!(self.out, "{}", r.line(self.json))?;
        Ok(())
    }

    fn raw(&mut self, s: &str) -> Result<()> {
        self.out.write_all(s.as_bytes())?;
        Ok(())
    }
}

fn read_instance(p: &Path) -> Result<Instance> {
    let text = if p.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin())?
    } else {
        std::fs::read_to_string(p)?
    };
    parse_instance(&text)
}

/// Exit code for an error: 2 for input problems, 1 otherwise.
fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::OutOfRange(_) | Error::InvalidParam(_) | Error::Io(_) | Error::Json(_) => 2,
        Error::Guard(_) | Error::Internal(_) => 1,
    }
}

/// Parses `args` (program name first) and runs, writing to stdout.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    run_to(args, &mut lock)
}

/// [`run`] with output to `out`. Errors go to stderr.
pub fn run_to<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if let Some(t) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global();
    }
    let mut ctx = Ctx { json: cli.json, seed: cli.seed, out };
    let res = match &cli.cmd {
        Cmd::Solve(a) => cmd_solve(&mut ctx, a),
        Cmd::Verify(a) => cmd_verify(&mut ctx, a),
        Cmd::Gen(a) => cmd_gen(&mut ctx, a).map(|_| 0),
        Cmd::Bench(a) => cmd_bench(&mut ctx, a),
        Cmd::Analyze(a) => cmd_analyze(&mut ctx, a),
        Cmd::Apps(a) => cmd_apps(&mut ctx, a.what),
        Cmd::Ndp(a) => cmd_ndp(&mut ctx, a).map(|_| 0),
        Cmd::Hgraph(a) => cmd_hgraph(&mut ctx, a).map(|_| 0),
        Cmd::Graph(a) => cmd_graph(&mut ctx, a).map(|_| 0),
    };
    match res {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Memoized solve result.
#[derive(Clone, Debug, Serialize, Deserialize)]
struct Memo {
    count: String,
    indices: Vec<String>,
    truncated: bool,
    k_peak: usize,
    eta_peak: f64,
}

fn cache_path(inst: &Instance, opts: &SolveOptions) -> Option<PathBuf> {
    let dir = std::env::var_os(CACHE_ENV)?;
    let mut h = DefaultHasher::new();
    inst.to_text().hash(&mut h);
    opts.count_only.hash(&mut h);
    opts.indices_cap.hash(&mut h);
    format!("{:?}", opts.policy).hash(&mut h);
    Some(PathBuf::from(dir).join(format!("solve-{:016x}.json", h.finish())))
}

fn cached_solve(inst: &Instance, opts: &SolveOptions, need_full: bool) -> Result<(Memo, Option<ihm::Solution>, bool)> {
    let path = if need_full { None } else { cache_path(inst, opts) };
    if let Some(p) = &path {
        if let Ok(text) = std::fs::read_to_string(p) {
            if let Ok(m) = serde_json::from_str::<Memo>(&text) {
                return Ok((m, None, true));
            }
        }
    }
    let sol = ihm::solve_dump(inst, opts, need_full)?;
    let memo = Memo {
        count: sol.count.to_string(),
        indices: sol.indices.iter().map(|r| r.to_string()).collect(),
        truncated: sol.truncated,
        k_peak: sol.metrics.k_peak,
        eta_peak: sol.metrics.eta_peak,
    };
    if let Some(p) = path {
        if let Some(dir) = p.parent() {
            std::fs::create_dir_all(dir)?;
        }
        std::fs::write(&p, serde_json::to_string(&memo)?)?;
    }
    Ok((memo, Some(sol), false))
}

fn cmd_solve(ctx: &mut Ctx, a: &SolveArgs) -> Result<i32> {
    let inst = read_instance(&a.instance)?;
    let opts = SolveOptions {
        policy: a.policy.into(),
        indices_cap: a.indices_cap as usize,
        count_only: a.count_only,
        max_sweeps: None,
    };
    let need_full = a.metrics_csv.is_some() || a.dump_final.is_some();
    let (memo, sol, hit) = cached_solve(&inst, &opts, need_full)?;
    let mut r = Record::default().kv("N_sols", memo.count.clone());
    if !a.count_only {
        r = r.kv("indices", memo.indices.iter().map(|s| Value::String(s.clone())).collect::<Vec<_>>());
        if memo.truncated {
            r = r.kv("truncated", true);
        }
    }
    ctx.emit(r)?;
    let mut stats = Record::default().kv("k_peak", memo.k_peak).kv("eta_peak", (memo.eta_peak * 1e6).round() / 1e6);
    if let Some(s) = &sol {
        stats = stats
            .kv("settled_at", s.metrics.settled_at().map_or(Value::Null, Value::from))
            .kv("final_nodes", s.final_nodes)
            .kv("final_arcs", s.final_arcs)
            .kv("backend", s.backend)
            .kv("millis", s.millis as u64);
        if let Some(p) = &a.metrics_csv {
            std::fs::write(p, s.metrics.to_csv())?;
        }
        if let Some(p) = &a.dump_final {
            let lines = s.dump.clone().unwrap_or_default();
            std::fs::write(p, lines.iter().map(|l| format!("{l}\n")).collect::<String>())?;
        }
    }
    if hit {
        stats = stats.kv("cached", true);
    }
    ctx.emit(stats)?;
    Ok(0)
}

fn run_method(inst: &Instance, m: Method) -> Result<oracle::OracleReport> {
    match m {
        Method::Enum => oracle::count_enum(inst),
        Method::Mitm => oracle::count_mitm(inst),
        Method::Dp => oracle::count_dp(inst),
    }
}

fn cmd_verify(ctx: &mut Ctx, a: &VerifyArgs) -> Result<i32> {
    let inst = read_instance(&a.instance)?;
    let methods = match a.method {
        MethodArg::Enum => vec![Method::Enum],
        MethodArg::Mitm => vec![Method::Mitm],
        MethodArg::Dp => vec![Method::Dp],
        MethodArg::All => vec![Method::Enum, Method::Mitm, Method::Dp],
    };
    let mut counts = Vec::new();
    for m in methods {
        match run_method(&inst, m) {
            Ok(rep) => {
                ctx.emit(
                    Record::default()
                        .kv("method", m.to_string())
                        .big("count", &rep.count)
                        .kv("millis", rep.millis as u64),
                )?;
                counts.push(rep.count);
            }
            Err(Error::Guard(why)) if a.method == MethodArg::All => {
                ctx.emit(Record::default().kv("method", m.to_string()).kv("skipped", why))?;
            }
            Err(e) => return Err(e),
        }
    }
    if !a.oracle_only {
        let sol = ihm::solve(&inst, &SolveOptions { count_only: true, ..SolveOptions::default() })?;
        ctx.emit(Record::default().kv("method", "pipeline").big("count", &sol.count).kv("millis", sol.millis as u64))?;
        counts.push(sol.count);
    }
    let agree = counts.windows(2).all(|w| w[0] == w[1]);
    ctx.emit(Record::default().kv("agree", agree).kv("compared", counts.len()))?;
    Ok(if agree { 0 } else { 1 })
}

fn need<T: Clone>(v: &Option<T>, name: &str) -> Result<T> {
    v.clone().ok_or_else(|| Error::InvalidParam(format!("--{name} is required for this family")))
}

pub fn family_of(a: &GenArgs, seed: u64) -> Result<Family> {
    if a.n == 0 {
        return Err(Error::InvalidParam("--n must be positive".into()));
    }
    Ok(match a.family {
        FamilyArg::Random => {
            if a.m == 0 {
                return Err(Error::InvalidParam("--m must be positive".into()));
            }
            Family::Random { n: a.n, m: a.m, seed }
        }
        FamilyArg::Cp => Family::Cp { n: a.n, k1: need(&a.k1, "k1")? },
        FamilyArg::Ap => Family::Ap { n: a.n, k1: need(&a.k1, "k1")?, k2: need(&a.k2, "k2")? },
        FamilyArg::Gp => Family::Gp { n: a.n, k1: need(&a.k1, "k1")?, r: need(&a.r, "r")? },
        FamilyArg::Dissociated => Family::Dissociated { n: a.n },
    })
}

fn cmd_gen(ctx: &mut Ctx, a: &GenArgs) -> Result<()> {
    let inst = family_of(a, ctx.seed)?.generate(a.target.clone())?;
    let text = if ctx.json { format!("{}\n", inst.to_json()) } else { inst.to_text() };
    match &a.out {
        Some(p) => std::fs::write(p, text)?,
        None => ctx.raw(&text)?,
    }
    Ok(())
}

fn cmd_bench(ctx: &mut Ctx, a: &BenchArgs) -> Result<i32> {
    let cfg = DiffConfig {
        families: a.families.clone(),
        trials: a.trials,
        seed: ctx.seed,
        n_min: a.n_min,
        n_max: a.n_max,
        m_max: a.m_max,
        enum_max: a.enum_max,
    };
    let recs = oracle::differential_report(&cfg)?;
    let mut csv = format!("{}\n", oracle::BENCH_HEADER);
    for r in &recs {
        csv += &r.csv_row();
        csv.push('\n');
    }
    let bad: Vec<&oracle::TrialRecord> =
        recs.iter().filter(|r| !r.agree || r.unsound > 0 || r.structure.is_some()).collect();
    if let Some(p) = &a.findings {
        let lines: String = bad.iter().map(|r| format!("{}\n", json!(r))).collect();
        std::fs::write(p, lines)?;
    }
    let summary = Record::default()
        .kv("trials", recs.len())
        .kv("agree", recs.iter().filter(|r| r.agree).count())
        .kv("unsound", recs.iter().map(|r| r.unsound).sum::<usize>())
        .kv("structure_failures", recs.iter().filter(|r| r.structure.is_some()).count());
    match &a.out {
        Some(p) => {
            std::fs::write(p, csv)?;
            ctx.emit(summary)?;
        }
        None => {
            ctx.raw(&csv)?;
            eprintln!("{}", summary.line(ctx.json));
        }
    }
    Ok(if bad.is_empty() { 0 } else { 1 })
}

/// The bench CSV columns used by `analyze growth`.
#[derive(Debug, Deserialize)]
struct BenchRow {
    n: usize,
    eta_peak: f64,
    k_peak: usize,
}

fn cmd_analyze(ctx: &mut Ctx, a: &AnalyzeArgs) -> Result<i32> {
    match &a.what {
        AnalyzeCmd::Config { instance, cap, out } => {
            let inst = read_instance(instance)?;
            let cg = analysis::build_config_graph(&inst, *cap)?;
            let audit = analysis::product_inequality_audit(&cg);
            let csv = audit.to_csv();
            match out {
                Some(p) => std::fs::write(p, &csv)?,
                None => ctx.raw(&csv)?,
            }
            let gammas: Vec<Value> = cg.gamma.iter().map(|&g| Value::from(g)).collect();
            ctx.emit(
                Record::default()
                    .kv("gamma", gammas)
                    .kv("mu0", audit.mu0.to_string())
                    .kv("gamma0_ok", audit.gamma0_ok)
                    .kv("growth_ok", audit.growth_violations.is_empty())
                    .kv("sandwich_ok", audit.sandwich_violations.is_empty())
                    .kv("continuing_sandwich_ok", audit.continuing_sandwich_violations.is_empty())
                    .kv("product_ok", audit.rows.iter().all(|r| r.holds))
                    .kv("zero_product_ok", audit.zero.iter().all(|z| z.holds && z.max_holds))
                    .kv("max_gamma_ok", audit.max_gamma_ok)
                    .kv("dead_end_levels", audit.dead_ends.len())
                    .kv("truncated", cg.truncated),
            )?;
            Ok(if audit.all_hold() { 0 } else { 1 })
        }
        AnalyzeCmd::Growth { bench, out } => {
            let mut rd = csv::Reader::from_path(bench).map_err(|e| Error::Parse(e.to_string()))?;
            let mut samples = Vec::new();
            for row in rd.deserialize::<BenchRow>() {
                let row = row.map_err(|e| Error::Parse(e.to_string()))?;
                samples.push(analysis::GrowthSample { n: row.n, k_peak: row.k_peak, eta_peak: row.eta_peak });
            }
            let rows = analysis::growth_summary(&samples)?;
            let csv = analysis::growth_csv(&rows);
            match out {
                Some(p) => std::fs::write(p, &csv)?,
                None => ctx.raw(&csv)?,
            }
            for r in &rows {
                ctx.emit(Record::default().kv("n", r.n).kv("ref3", r.ref3).kv("ref7", r.ref7))?;
            }
            Ok(0)
        }
        AnalyzeCmd::Vm { instance } => {
            let inst = read_instance(instance)?;
            let sol = ihm::solve(&inst, &SolveOptions { count_only: true, ..SolveOptions::default() })?;
            let vb = analysis::vm_bound_check(&inst, &sol)?;
            ctx.emit(
                Record::default()
                    .kv("U", vb.unique_sums)
                    .kv("v0", vb.v0)
                    .kv("vm", vb.vm)
                    .kv("bound", format!("{:.3}", vb.bound))
                    .kv("holds", vb.holds),
            )?;
            Ok(0)
        }
    }
}

/// The instance behind an application.
pub fn app_instance(app: AppsCmd) -> Result<Instance> {
    let (a, t): (Vec<u64>, u64) = match app {
        AppsCmd::Binomial { n, k } => {
            if n == 0 || k == 0 || k > n as u64 {
                return Err(Error::InvalidParam("binomial needs 1 <= k <= n".into()));
            }
            (vec![1; n], k)
        }
        AppsCmd::Partitions { n, k } => {
            if k == 0 || n == 0 || n > k * (k + 1) / 2 {
                return Err(Error::InvalidParam("partitions needs 1 <= N <= K(K+1)/2".into()));
            }
            ((1..=k).collect(), n)
        }
        AppsCmd::Cubes { n, k } => {
            if k == 0 || k > 1000 || n == 0 || n > (k * (k + 1) / 2).pow(2) {
                return Err(Error::InvalidParam("cubes needs 1 <= K <= 1000 and 1 <= N <= sum of cubes".into()));
            }
            ((1..=k).map(|i| i * i * i).collect(), n)
        }
    };
    Instance::from_u64(&a, t)
}

/// Parts of a subset index, 1-based element numbers in user order.
pub fn index_parts(r: &BigUint, n: usize) -> Vec<usize> {
    (0..n).filter(|&i| r.bit(i as u64)).map(|i| i + 1).collect()
}

fn cmd_apps(ctx: &mut Ctx, app: AppsCmd) -> Result<i32> {
    let inst = app_instance(app)?;
    let cubes = matches!(app, AppsCmd::Cubes { .. });
    let opts = SolveOptions { count_only: !cubes, ..SolveOptions::default() };
    let (memo, _, _) = cached_solve(&inst, &opts, false)?;
    let dp = oracle::count_dp(&inst)?;
    let agree = memo.count == dp.count.to_string();
    ctx.emit(Record::default().kv("pipeline", memo.count.clone()).big("dp", &dp.count).kv("agree", agree))?;
    if cubes {
        let mut idx: Vec<BigUint> = memo.indices.iter().map(|s| s.parse().unwrap_or_default()).collect();
        idx.sort();
        ctx.emit(Record::default().list("indices", &idx))?;
        for r in &idx {
            let parts = index_parts(r, inst.n());
            let terms: Vec<String> = parts.iter().map(|p| format!("{p}^3")).collect();
            ctx.emit(Record::default().big("index", r).kv("sum", format!("{}={}", inst.target(), terms.join("+"))))?;
        }
    }
    Ok(if agree { 0 } else { 1 })
}

fn cmd_ndp(ctx: &mut Ctx, a: &NdpArgs) -> Result<()> {
    let family = ndp::enumerate_ndps(a.n)?;
    let inst = a.instance.as_deref().map(read_instance).transpose()?;
    if let Some(inst) = &inst {
        if inst.n() != a.n as usize {
            return Err(Error::InvalidParam(format!("instance has n = {}, expected {}", inst.n(), a.n)));
        }
    }
    for kind in [CurveKind::P, CurveKind::Q] {
        let seq = ndp::index_sequence(kind, a.n);
        let mut v = json!({ "curve": format!("{kind}{}", a.n), "indices": seq.values.iter().map(|x| x.to_string()).collect::<Vec<_>>() });
        if let Some(inst) = &inst {
            let pts = ndp::curve_points(inst, kind, a.n)?;
            v["sums"] = json!(pts.iter().map(|p| p.y.to_string()).collect::<Vec<_>>());
        }
        writeln!(ctx.out, "{v}")?;
    }
    for ch in &family {
        let blocks: Vec<Value> = ch.blocks().iter().map(|b| json!({ "order": b.order, "reversed": b.reversed })).collect();
        let mut v = json!({ "chain": ch.to_string(), "blocks": blocks, "indices": ch.vertex_indices() });
        if let Some(inst) = &inst {
            v["sums"] = json!(ch.vertices(inst).iter().map(|p| p.y.to_string()).collect::<Vec<_>>());
        }
        writeln!(ctx.out, "{v}")?;
    }
    if let Some(p) = &a.svg {
        let inst = inst.ok_or_else(|| Error::InvalidParam("--svg needs --instance".into()))?;
        std::fs::write(p, ndp::family_svg(&inst, &family, inst.target()))?;
    }
    Ok(())
}

fn cmd_hgraph(ctx: &mut Ctx, a: &HgraphArgs) -> Result<()> {
    let inst = a.instance.as_deref().map(read_instance).transpose()?;
    let n = match (&inst, a.n) {
        (Some(i), _) => i.n(),
        (None, Some(n)) => n,
        (None, None) => return Err(Error::InvalidParam("give --n or --instance".into())),
    };
    let mut csv = String::from("r,beta\n");
    for r in 0..=n as u64 {
        csv += &format!("{r},{}\n", hgraph::beta(r, n as u64)?);
    }
    if let Some(inst) = &inst {
        if !a.path.is_empty() {
            let path = hgraph::TransformPath::new(a.path.clone(), n as u32)?;
            let wh = hgraph::wormhole(inst, &path)?;
            csv += "level,k,lower,upper,contains_target\n";
            for (i, k) in path.ks.iter().enumerate() {
                let (l, h) = (&wh.lower[i], &wh.upper[i]);
                let inside = l <= inst.target() && inst.target() <= h;
                csv += &format!("{},{k},{l},{h},{inside}\n", i + 1);
            }
        }
        if a.valid {
            csv += "r,valid,distinct,total\n";
            for r in 1..=n as u32 {
                let c = hgraph::count_valid_wormholes(inst, inst.target(), r)?;
                csv += &format!("{},{},{},{}\n", c.r, c.valid, c.distinct, c.total);
            }
        }
    }
    ctx.raw(&csv)
}

fn cmd_graph(ctx: &mut Ctx, a: &GraphArgs) -> Result<()> {
    let inst = read_instance(&a.instance)?;
    let lines: Vec<String> = match a.stage {
        Stage::G0 => {
            if inst.n() > 30 {
                return Err(Error::Guard("the full G0 dump needs n <= 30".into()));
            }
            if inst.fits_i128() {
                orbital::build_g0::<i128>(&inst)?.dump_lines()
            } else {
                orbital::build_g0::<BigInt>(&inst)?.dump_lines()
            }
        }
        Stage::Reachable => {
            if inst.fits_i128() {
                ihm::reachable_graph::<i128>(&inst, DestinationPolicy::Canonical)?.dump_lines()
            } else {
                ihm::reachable_graph::<BigInt>(&inst, DestinationPolicy::Canonical)?.dump_lines()
            }
        }
        Stage::Final => ihm::solve_dump(&inst, &SolveOptions { count_only: true, ..SolveOptions::default() }, true)?
            .dump
            .unwrap_or_default(),
    };
    let body: String = lines.iter().map(|l| format!("{l}\n")).collect();
    match &a.out {
        Some(p) => {
            std::fs::write(p, body)?;
            ctx.emit(Record::default().kv("lines", lines.len()))?;
        }
        None => ctx.raw(&body)?,
    }
    Ok(())
}
