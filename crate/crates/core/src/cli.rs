//! Command-line front end. `dispatch` parses arguments, runs one command and
//! returns the process exit code:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | proved, verified or all checks passed |
//! | 1 | inconclusive, rejected or mismatch |
//! | 2 | invalid input |
//! | 3 | resource budget exceeded |
//! | 4 | internal or I/O error |

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::compression::{scenarios, InitialConsOptions, MergeScenario};
use crate::driver::{prove_all, ProveOptions, SectionProgress};
use crate::error::Error;
use crate::nullstellensatz::{
    fk_coefficient, fk_coefficient_bruteforce, format_factorization, verify_table, verify_table_against,
    ExponentVector, Orientation, REFERENCE_TABLE,
};
use crate::oracle::{
    check_graham_exhaustive, cross_validate_scenario, verify_characterization, verify_merge_pair_dichotomy,
    verify_translation_dichotomy_exhaustive, FiniteAbelianGroup, DEFAULT_SUBSET_BUDGET,
};
use crate::search::{Arith, DupPolicy, IntervalPolicy, LeafPolicy, Mode, ModeConfig, RootPolicy};
use crate::transcript::{create_sink, verify_path, TranscriptWriter, Verdict, Verification};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

/// Environment variable holding the default worker count.
pub const THREADS_ENV: &str = "SEQPROVE_THREADS";

#[derive(Debug, Parser)]
#[command(name = "seqprove", version, about = "Certificate-producing proofs of sequenceability")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the counterexample search for every merge scenario of size k.
    Prove(ProveArgs),
    /// Check a transcript independently of the search engine.
    Verify {
        #[arg(long)]
        transcript: PathBuf,
    },
    /// Coefficient of the target monomial of F_k.
    Coeff {
        #[arg(long)]
        k: usize,
        /// Also expand F_k explicitly (k <= 8) and compare.
        #[arg(long)]
        brute: bool,
        #[arg(long, default_value = "ascending")]
        orientation: Orientation,
    },
    /// Recompute the reference coefficient table.
    CoeffTable {
        #[arg(long, default_value_t = 10)]
        from: usize,
        #[arg(long, default_value_t = 23)]
        to: usize,
    },
    /// Brute-force experiments on concrete groups.
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Debug, Subcommand)]
enum OracleCommand {
    /// Every small subset of G \ {0} has a sequencing.
    Graham {
        #[arg(long)]
        group: FiniteAbelianGroup,
        #[arg(long)]
        size_cap: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SUBSET_BUDGET)]
        budget: u128,
    },
    /// Sets closed under sums of distinct elements are subgroups minus 0.
    Characterize {
        #[arg(long)]
        group: FiniteAbelianGroup,
        /// Smallest |A| the statement is checked for.
        #[arg(long, default_value_t = 2)]
        min_size: usize,
        #[arg(long, default_value_t = DEFAULT_SUBSET_BUDGET)]
        budget: u128,
    },
    /// Merge-pair dichotomy, plus the translation dichotomy for cyclic groups.
    Dichotomy {
        #[arg(long)]
        group: FiniteAbelianGroup,
        #[arg(long, default_value_t = 2)]
        min_size: usize,
        #[arg(long, default_value_t = DEFAULT_SUBSET_BUDGET)]
        budget: u128,
    },
    /// Random instances of the merge premise in Z_n.
    CrossValidate {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        mode: Mode,
        #[arg(long)]
        modulus: u64,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        /// Only this merge scenario; all scenarios of the mode otherwise.
        #[arg(long)]
        merge_index: Option<usize>,
    },
}

#[derive(Debug, Args)]
struct ProveArgs {
    /// TOML file with the same keys as the flags; flags win.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    mode: Option<Mode>,
    #[arg(long)]
    arith: Option<Arith>,
    #[arg(long = "dup")]
    dup: Option<DupPolicy>,
    #[arg(long = "intervals")]
    intervals: Option<IntervalPolicy>,
    #[arg(long = "leaf")]
    leaf: Option<LeafPolicy>,
    #[arg(long)]
    root: Option<RootPolicy>,
    #[arg(long)]
    no_seed_ones: bool,
    #[arg(long)]
    no_compression: bool,
    /// Drop single-element blocks from the forbidden list.
    #[arg(long)]
    no_single_blocks: bool,
    #[arg(long)]
    transcript: Option<PathBuf>,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    max_depth: Option<usize>,
    #[arg(long)]
    node_budget: Option<u64>,
    /// No progress lines on stderr.
    #[arg(long)]
    quiet: bool,
}

/// Keys accepted in a `--config` file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    k: Option<usize>,
    mode: Option<String>,
    arith: Option<String>,
    dup: Option<String>,
    intervals: Option<String>,
    leaf: Option<String>,
    root: Option<String>,
    seed_ones: Option<bool>,
    compression: Option<bool>,
    single_blocks: Option<bool>,
    transcript: Option<PathBuf>,
    threads: Option<usize>,
    max_depth: Option<usize>,
    node_budget: Option<u64>,
    quiet: Option<bool>,
}

/// Fully resolved settings of a `prove` run.
#[derive(Debug, Serialize)]
struct RunConfig {
    k: usize,
    mode: Mode,
    arith: Arith,
    dup: DupPolicy,
    intervals: IntervalPolicy,
    leaf: LeafPolicy,
    root: RootPolicy,
    seed_ones: bool,
    compression: bool,
    single_blocks: bool,
    transcript: Option<PathBuf>,
    threads: usize,
    max_depth: Option<usize>,
    node_budget: Option<u64>,
    #[serde(skip)]
    quiet: bool,
}

/// Maps a library error to an exit code.
pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::InvalidInput(_) | Error::Malformed { .. } => EXIT_INVALID,
        Error::ResourceGuard(_) | Error::BudgetExceeded { .. } => EXIT_BUDGET,
        Error::Io(_) | Error::PartialWrite { .. } => EXIT_INTERNAL,
    }
}

pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    dispatch_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// [`dispatch`] with explicit result and status streams.
pub fn dispatch_with<I, T>(argv: I, out: &mut dyn Write, status: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { status.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Prove(args) => run_prove(args, out, status),
        Command::Verify { transcript } => run_verify(&transcript, out),
        Command::Coeff { k, brute, orientation } => run_coeff(k, brute, orientation, out),
        Command::CoeffTable { from, to } => run_coeff_table(from, to, out),
        Command::Oracle(cmd) => run_oracle(cmd, out),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(status, "error: {e}");
            exit_code_for(&e)
        }
    }
}

type CmdResult = std::result::Result<i32, Error>;

fn parse_key<T: std::str::FromStr<Err = Error>>(value: Option<String>) -> Result<Option<T>, Error> {
    value.map(|v| v.parse()).transpose()
}

fn load_file_config(path: &Path) -> Result<FileConfig, Error> {
    let text = std::fs::read_to_string(path)?;
    toml::from_str(&text).map_err(|e| Error::InvalidInput(format!("config file {}: {e}", path.display())))
}

fn default_threads() -> Result<usize, Error> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .parse()
            .map_err(|_| Error::InvalidInput(format!("{THREADS_ENV}={v} is not a positive integer"))),
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, usize::from)),
    }
}

fn resolve(args: ProveArgs) -> Result<RunConfig, Error> {
    let file = match &args.config {
        Some(p) => load_file_config(p)?,
        None => FileConfig::default(),
    };
    let k = args
        .k
        .or(file.k)
        .ok_or_else(|| Error::InvalidInput("--k is required".into()))?;
    let mode = match args.mode {
        Some(m) => m,
        None => parse_key(file.mode)?.ok_or_else(|| Error::InvalidInput("--mode is required".into()))?,
    };
    let threads = match args.threads.or(file.threads) {
        Some(t) => t,
        None => default_threads()?,
    };
    Ok(RunConfig {
        k,
        mode,
        arith: args.arith.or(parse_key(file.arith)?).unwrap_or(Arith::Integer),
        dup: args.dup.or(parse_key(file.dup)?).unwrap_or(DupPolicy::Skip),
        intervals: args.intervals.or(parse_key(file.intervals)?).unwrap_or(IntervalPolicy::Paper),
        leaf: args.leaf.or(parse_key(file.leaf)?).unwrap_or(LeafPolicy::Strict),
        root: args.root.or(parse_key(file.root)?).unwrap_or(RootPolicy::Aligned),
        seed_ones: !args.no_seed_ones && file.seed_ones.unwrap_or(true),
        compression: !args.no_compression && file.compression.unwrap_or(true),
        single_blocks: !args.no_single_blocks && file.single_blocks.unwrap_or(true),
        transcript: args.transcript.or(file.transcript),
        threads,
        max_depth: args.max_depth.or(file.max_depth),
        node_budget: args.node_budget.or(file.node_budget),
        quiet: args.quiet || file.quiet.unwrap_or(false),
    })
}

fn verdict_exit(v: Verdict) -> i32 {
    match v {
        Verdict::Proved | Verdict::ProvedPaperLeafPolicy => EXIT_OK,
        Verdict::Inconclusive => EXIT_NEGATIVE,
        Verdict::Aborted => EXIT_BUDGET,
    }
}

fn run_prove(args: ProveArgs, out: &mut dyn Write, status: &mut dyn Write) -> CmdResult {
    let rc = resolve(args)?;
    let config = ModeConfig {
        arith: rc.arith,
        dup_policy: rc.dup,
        interval_policy: rc.intervals,
        leaf_policy: rc.leaf,
        max_depth: rc.max_depth,
        thread_count: rc.threads,
        node_budget: rc.node_budget,
        ..ModeConfig::new(rc.k, rc.mode)
    };
    config.validate()?;
    if rc.compression && rc.k < 3 {
        return Err(Error::InvalidInput("compression needs k >= 3; pass --no-compression".into()));
    }
    let opts = ProveOptions {
        config,
        compression: rc.compression,
        seed_ones: rc.seed_ones,
        initial_cons: InitialConsOptions {
            single_blocks: rc.single_blocks,
        },
        root: rc.root,
    };
    writeln!(out, "effective config: {}", serde_json::to_string(&rc).expect("serializes"))?;

    let started = Instant::now();
    let quiet = rc.quiet;
    let mut on_progress = |p: SectionProgress<'_>| {
        if !quiet {
            let _ = writeln!(
                status,
                "[section {}/{} depth {}] frontier {} nodes {} ({:.0} nodes/s)",
                p.section + 1,
                p.sections,
                p.level.depth,
                p.level.frontier,
                p.level.nodes,
                p.level.nodes_per_sec
            );
        }
    };
    let report = match &rc.transcript {
        Some(path) => {
            let mut writer = TranscriptWriter::new(create_sink(path)?);
            let report = prove_all(&opts, Some(&mut writer), &mut on_progress)?;
            writer.finish()?.flush()?;
            report
        }
        None => prove_all::<Vec<u8>>(&opts, None, &mut on_progress)?,
    };
    let elapsed = started.elapsed().as_secs_f64();

    for s in &report.sections {
        let label = s.merge_index.map_or("no compression".to_string(), |m| format!("merge into x_{m}"));
        writeln!(
            out,
            "{label}: {} ({} nodes, depth {}, max denominator {}, open {}, childless {})",
            s.verdict.as_str(),
            s.node_count,
            s.max_depth,
            s.max_denominator,
            s.open_leaves,
            s.childless_leaves
        )?;
    }
    writeln!(out, "verdict: {}", report.verdict.as_str())?;
    let summary = json!({
        "command": "prove",
        "verdict": report.verdict,
        "k": report.k,
        "mode": rc.mode,
        "node_count": report.node_count,
        "max_depth": report.max_depth,
        "max_denominator": report.max_denominator,
        "sections": report.sections,
        "elapsed_seconds": elapsed,
        "transcript": rc.transcript,
    });
    writeln!(out, "summary: {summary}")?;
    Ok(verdict_exit(report.verdict))
}

fn run_verify(path: &Path, out: &mut dyn Write) -> CmdResult {
    let outcome = verify_path(path)?;
    let code = match &outcome {
        Verification::Accepted(v) => {
            writeln!(out, "accepted: {} section(s), verdict {}", v.sections.len(), v.verdict.as_str())?;
            if v.verdict.is_proved() {
                EXIT_OK
            } else {
                EXIT_NEGATIVE
            }
        }
        Verification::Rejected(d) => {
            writeln!(out, "rejected: {d}")?;
            EXIT_NEGATIVE
        }
    };
    writeln!(out, "summary: {}", json!({ "command": "verify", "result": outcome }))?;
    Ok(code)
}

fn run_coeff(k: usize, brute: bool, orientation: Orientation, out: &mut dyn Write) -> CmdResult {
    let target = ExponentVector::target(k.max(1));
    let fast = fk_coefficient(k, &target, orientation)?;
    writeln!(
        out,
        "k = {k}, target {:?}, orientation {}: {} = {}",
        target.0,
        orientation.as_str(),
        fast,
        format_factorization(&fast)
    )?;
    let mut code = EXIT_OK;
    let mut brute_value = None;
    if brute {
        let b = fk_coefficient_bruteforce(k, &target, orientation)?;
        let agree = b == fast;
        writeln!(out, "explicit expansion: {b} ({})", if agree { "agrees" } else { "MISMATCH" })?;
        if !agree {
            code = EXIT_NEGATIVE;
        }
        brute_value = Some(b.to_string());
    }
    let summary = json!({
        "command": "coeff",
        "k": k,
        "orientation": orientation.as_str(),
        "coefficient": fast.to_string(),
        "bruteforce": brute_value,
    });
    writeln!(out, "summary: {summary}")?;
    Ok(code)
}

fn run_coeff_table(from: usize, to: usize, out: &mut dyn Write) -> CmdResult {
    let report = if from == 10 && to == 23 {
        verify_table(from, to)?
    } else {
        verify_table_against(from, to, &REFERENCE_TABLE)?
    };
    write!(out, "{report}")?;
    let rows: Vec<_> = report
        .rows
        .iter()
        .map(|r| json!({ "k": r.k, "coefficient": r.computed.to_string(), "matches": r.matches() }))
        .collect();
    writeln!(out, "summary: {}", json!({ "command": "coeff-table", "all_match": report.all_match(), "rows": rows }))?;
    Ok(if report.all_match() { EXIT_OK } else { EXIT_NEGATIVE })
}

fn pass_code(pass: bool) -> i32 {
    if pass {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    }
}

fn run_oracle(cmd: OracleCommand, out: &mut dyn Write) -> CmdResult {
    match cmd {
        OracleCommand::Graham { group, size_cap, budget } => {
            let cap = size_cap.unwrap_or(group.order() as usize - 1);
            let r = check_graham_exhaustive(&group, cap, budget)?;
            writeln!(
                out,
                "{} ({}): {} subsets of size <= {} checked, {} without a sequencing",
                r.group,
                group.elementary_divisor_string(),
                r.subsets_checked,
                r.size_cap,
                r.counterexample_count
            )?;
            for c in &r.counterexamples {
                writeln!(out, "  no sequencing: {}", group.display_elements(c))?;
            }
            writeln!(out, "summary: {}", json!({ "command": "oracle graham", "report": r }))?;
            Ok(pass_code(r.passed()))
        }
        OracleCommand::Characterize { group, min_size, budget } => {
            let r = verify_characterization(&group, budget)?;
            let pass = r.violations.is_empty() && (min_size >= 3 || r.pair_exceptions.is_empty());
            writeln!(
                out,
                "{}: {} subsets, {} closed under distinct sums, {} pair exceptions, {} other violations",
                r.group,
                r.subsets_checked,
                r.closed_sets.len(),
                r.pair_exceptions.len(),
                r.violations.len()
            )?;
            for set in r.pair_exceptions.iter().take(8) {
                writeln!(out, "  {} is closed but not a subgroup with 0 added", group.display_elements(set))?;
            }
            for set in &r.violations {
                writeln!(out, "  violation: {}", group.display_elements(set))?;
            }
            writeln!(out, "summary: {}", json!({ "command": "oracle characterize", "min_size": min_size, "passed": pass, "report": r }))?;
            Ok(pass_code(pass))
        }
        OracleCommand::Dichotomy { group, min_size, budget } => {
            let m = verify_merge_pair_dichotomy(&group, budget)?;
            let mut pass = m.violations.is_empty() && (min_size >= 3 || m.pair_exceptions.is_empty());
            writeln!(
                out,
                "{}: merge pair found in {} sets, none in {}; {} pair exceptions, {} other violations",
                m.group,
                m.merge_pair_cases,
                m.subgroup_cases,
                m.pair_exceptions.len(),
                m.violations.len()
            )?;
            let translation = if group.is_cyclic_presentation() {
                let t = verify_translation_dichotomy_exhaustive(&group, budget)?;
                writeln!(
                    out,
                    "translation: {} (set, element) cases, {} escape, {} chain, {} violations",
                    t.cases_checked,
                    t.escapes,
                    t.chains,
                    t.violations.len()
                )?;
                pass &= t.passed();
                Some(t)
            } else {
                None
            };
            let summary = json!({ "command": "oracle dichotomy", "min_size": min_size, "passed": pass, "merge_pair": m, "translation": translation });
            writeln!(out, "summary: {summary}")?;
            Ok(pass_code(pass))
        }
        OracleCommand::CrossValidate {
            k,
            mode,
            modulus,
            samples,
            seed,
            merge_index,
        } => {
            let group = FiniteAbelianGroup::cyclic(modulus)?;
            let list: Vec<MergeScenario> = match merge_index {
                Some(m) => vec![MergeScenario::new(k, mode, m)?],
                None => scenarios(k, mode)?,
            };
            let mut pass = true;
            let mut reports = Vec::new();
            for (i, sc) in list.iter().enumerate() {
                let r = cross_validate_scenario(sc, &group, samples, seed.wrapping_add(i as u64))?;
                writeln!(
                    out,
                    "k = {k}, {}, merge into x_{}, Z{modulus}, seed {}: {}/{} validated, {} skipped, {} failures",
                    mode.as_str(),
                    sc.merge_index,
                    r.seed,
                    r.validated,
                    r.samples,
                    r.skipped,
                    r.failures.len()
                )?;
                pass &= r.passed();
                reports.push(r);
            }
            writeln!(out, "summary: {}", json!({ "command": "oracle cross-validate", "passed": pass, "reports": reports }))?;
            Ok(pass_code(pass))
        }
    }
}
