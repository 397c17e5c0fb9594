//! Command-line surface.
//!
//! Exit codes: 0 for success or a positive verdict, 1 when the verdict asked
//! for is negative (not open, not intertwined, discontinuity, counterexample,
//! deadlock or fork), 2 for usage, IO and validation errors.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use semitopo_core::generators::{self, BridgeSides};
use semitopo_core::relations::{components, components_oracle, intertwined, intertwined_graph, intertwined_oracle};
use semitopo_core::sim::{detect_deadlock_oracle, run_random, run_schedule};
use semitopo_core::valuation::{
    check_theorem1, continuity_report, is_continuous_at_oracle, Theorem1Verdict, Value, ValueAssignment,
};
use semitopo_core::{PointSet, SemiTopology, DEFAULT_ORACLE_LIMIT};
use serde::Serialize;
use serde_json::json;

use crate::io::{self, IoError, Trace};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "semitopo", version, about = "Analyze and simulate agreement over semitopologies")]
pub struct Cli {
    /// Print machine-readable JSON reports.
    #[arg(long, global = true)]
    pub json: bool,
    /// Print nothing on stdout; only the exit code carries the verdict.
    #[arg(long, short, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Emit a named semitopology as a document.
    Generate(GenerateArgs),
    /// Validate a semitopology file and print statistics.
    Check { file: PathBuf },
    /// Test whether a set of points is open.
    Open {
        file: PathBuf,
        /// Comma-separated identifiers; empty for the empty set.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        set: Vec<String>,
        #[arg(long)]
        oracle: bool,
    },
    /// Test whether two points are intertwined.
    Intertwined {
        file: PathBuf,
        p: String,
        q: String,
        /// Recompute over all opens and fail if the two answers differ.
        #[arg(long)]
        oracle: bool,
    },
    /// Partition the points into transitively intertwined components.
    Components {
        file: PathBuf,
        #[arg(long)]
        oracle: bool,
    },
    /// Classify points by continuity of an assignment.
    Continuity {
        file: PathBuf,
        #[arg(long)]
        assignment: PathBuf,
        #[arg(long)]
        oracle: bool,
    },
    /// Check that continuous assignments agree on intertwined points.
    Theorem1 {
        file: PathBuf,
        #[arg(long)]
        assignment: PathBuf,
    },
    /// Run a schedule, or a seeded random scheduler, and report deadlocks and forks.
    Simulate(SimulateArgs),
    /// Join two semitopologies through a bridging point.
    Bridge {
        e: PathBuf,
        t: PathBuf,
        #[arg(long = "bridge-point")]
        bridge_point: String,
        /// Also let the bridge point act with one side only.
        #[arg(long)]
        allow_empty_sides: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(subcommand)]
    pub family: Family,
    /// Prefix every identifier.
    #[arg(long, global = true)]
    pub prefix: Option<String>,
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Family {
    /// Minimal majorities of n participants.
    Majority {
        #[arg(value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
    },
    /// Triples {2i, 2i+1, 2i+2} over 0..=2k.
    ZWindow {
        #[arg(value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
    },
    /// All singletons over n points.
    Discrete {
        #[arg(value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
    },
    /// n points, m random basis sets, singleton coverage repair.
    Random {
        #[arg(value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        #[arg(value_parser = clap::value_parser!(u32).range(1..))]
        m: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    pub file: PathBuf,
    #[arg(long, required_unless_present = "seed", conflicts_with = "seed")]
    pub schedule: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, requires = "seed", default_value_t = 10_000)]
    pub max_steps: usize,
    /// Write the trace document to this file.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Cross-check the deadlock set against all opens.
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: IoError },
    #[error(transparent)]
    Model(#[from] semitopo_core::Error),
    #[error("oracle divergence: {0}")]
    OracleDivergence(String),
}

/// Report sink honoring `--json` and `--quiet`.
struct Out<'a> {
    w: &'a mut dyn Write,
    json: bool,
    quiet: bool,
}

impl Out<'_> {
    fn text(&mut self, s: impl AsRef<str>) {
        if !self.quiet && !self.json {
            let _ = writeln!(self.w, "{}", s.as_ref());
        }
    }

    fn json(&mut self, v: &impl Serialize) {
        if !self.quiet && self.json {
            let _ = serde_json::to_writer_pretty(&mut *self.w, v);
            let _ = writeln!(self.w);
        }
    }

    fn raw(&mut self, bytes: &[u8]) {
        if !self.quiet {
            let _ = self.w.write_all(bytes);
        }
    }
}

/// Parses `args` and runs the command, writing reports to `out` and
/// diagnostics to `err`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                EXIT_ERROR
            } else {
                let _ = write!(out, "{rendered}");
                EXIT_OK
            };
        }
    };
    let mut sink = Out { w: out, json: cli.json, quiet: cli.quiet };
    match execute(cli.command, &mut sink) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|source| CliError::Read { path: path.to_owned(), source })
}

fn load(path: &Path) -> Result<SemiTopology, CliError> {
    io::parse_semitopology(&read(path)?).map_err(|source| CliError::Parse { path: path.to_owned(), source })
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(|source| CliError::Write { path: path.to_owned(), source })
}

fn verdict(ok: bool) -> i32 {
    if ok {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    }
}

fn names(st: &SemiTopology, s: &PointSet) -> Vec<String> {
    st.names_of(s).into_iter().map(str::to_owned).collect()
}

fn braces(st: &SemiTopology, s: &PointSet) -> String {
    format!("{{{}}}", st.names_of(s).join(","))
}

fn execute(command: Command, out: &mut Out<'_>) -> Result<i32, CliError> {
    match command {
        Command::Generate(args) => generate(args, out),
        Command::Check { file } => check(&load(&file)?, out),
        Command::Open { file, set, oracle } => {
            let st = load(&file)?;
            let s = st.set_of(set.iter().filter(|n| !n.is_empty()))?;
            let open = st.is_open(&s)?;
            if oracle {
                let listed = st.enumerate_opens()?.contains(&s);
                if listed != open {
                    return Err(CliError::OracleDivergence(format!(
                        "is_open says {open}, enumeration says {listed}"
                    )));
                }
            }
            let interior = st.interior(&s)?;
            out.text(if open { "open" } else { "not open" });
            if !open {
                out.text(format!("interior: {}", braces(&st, &interior)));
            }
            out.json(&json!({
                "command": "open",
                "set": names(&st, &s),
                "open": open,
                "interior": names(&st, &interior),
            }));
            Ok(verdict(open))
        }
        Command::Intertwined { file, p, q, oracle } => {
            let st = load(&file)?;
            let (pid, qid) = (st.id(&p)?, st.id(&q)?);
            let w = intertwined(&st, pid, qid)?;
            if oracle {
                let slow = intertwined_oracle(&st, pid, qid, DEFAULT_ORACLE_LIMIT)?;
                if slow != w.is_intertwined() {
                    return Err(CliError::OracleDivergence(format!(
                        "basis check says {}, enumeration says {slow}",
                        w.is_intertwined()
                    )));
                }
            }
            match &w.separating_pair {
                None => out.text(format!("intertwined: {p} {q}")),
                Some((a, b)) => {
                    out.text(format!("not intertwined: {p} {q}"));
                    out.text(format!("witness: {} / {}", braces(&st, a), braces(&st, b)));
                }
            }
            out.json(&json!({
                "command": "intertwined",
                "p": p,
                "q": q,
                "intertwined": w.is_intertwined(),
                "witness": w.separating_pair.as_ref().map(|(a, b)| [names(&st, a), names(&st, b)]),
            }));
            Ok(verdict(w.is_intertwined()))
        }
        Command::Components { file, oracle } => {
            let st = load(&file)?;
            let part = components(&st);
            if oracle && components_oracle(&st, DEFAULT_ORACLE_LIMIT)? != part {
                return Err(CliError::OracleDivergence("component partitions differ".into()));
            }
            out.text(format!("{} component(s)", part.len()));
            for c in &part.classes {
                out.text(braces(&st, c));
            }
            out.json(&json!({
                "command": "components",
                "classes": part.classes.iter().map(|c| names(&st, c)).collect::<Vec<_>>(),
            }));
            Ok(EXIT_OK)
        }
        Command::Continuity { file, assignment, oracle } => {
            let st = load(&file)?;
            let f = load_assignment(&st, &assignment)?;
            let report = continuity_report(&st, &f)?;
            if oracle {
                for p in st.ids() {
                    let slow = is_continuous_at_oracle(&st, &f, p, DEFAULT_ORACLE_LIMIT)?;
                    if slow != report.continuous.contains(p) {
                        return Err(CliError::OracleDivergence(format!("continuity at {}", st.name(p))));
                    }
                }
            }
            out.text(format!("continuous: {}", braces(&st, &report.continuous)));
            out.text(format!("discontinuous: {}", braces(&st, &report.discontinuous)));
            for (p, w) in &report.witnesses {
                out.text(format!("  {} via {}", st.name(*p), braces(&st, w)));
            }
            out.json(&json!({
                "command": "continuity",
                "continuous": names(&st, &report.continuous),
                "discontinuous": names(&st, &report.discontinuous),
                "witnesses": report.witnesses.iter()
                    .map(|(p, w)| (st.name(*p).to_owned(), names(&st, w)))
                    .collect::<std::collections::BTreeMap<_, _>>(),
            }));
            Ok(verdict(report.is_continuous_everywhere()))
        }
        Command::Theorem1 { file, assignment } => {
            let st = load(&file)?;
            let f = load_assignment(&st, &assignment)?;
            let v = check_theorem1(&st, &f)?;
            let (part, pair) = match v {
                Theorem1Verdict::Pass => (None, None),
                Theorem1Verdict::IntertwinedDisagreement { p, q } => (Some(1), Some((p, q))),
                Theorem1Verdict::ComponentDisagreement { p, q } => (Some(2), Some((p, q))),
            };
            match (part, pair) {
                (Some(part), Some((p, q))) => {
                    out.text(format!("FAIL (part {part}): {} {}", st.name(p), st.name(q)))
                }
                _ => out.text("PASS"),
            }
            out.json(&json!({
                "command": "theorem1",
                "verdict": if v.is_pass() { "PASS" } else { "FAIL" },
                "part": part,
                "counterexample": pair.map(|(p, q)| [st.name(p), st.name(q)]),
            }));
            Ok(verdict(v.is_pass()))
        }
        Command::Simulate(args) => simulate(args, out),
        Command::Bridge { e, t, bridge_point, allow_empty_sides, output } => {
            let (e, t) = (load(&e)?, load(&t)?);
            let sides = if allow_empty_sides { BridgeSides::AllowEmpty } else { BridgeSides::NonEmpty };
            let b = generators::bridge_with(&e, &t, &bridge_point, sides)?;
            emit(&b, output.as_deref(), out)
        }
    }
}

fn load_assignment(st: &SemiTopology, path: &Path) -> Result<ValueAssignment, CliError> {
    let parse = |source| CliError::Parse { path: path.to_owned(), source };
    io::parse_assignment(&read(path)?).map_err(parse)?.resolve(st).map_err(parse)
}

/// Writes a semitopology document to `output`, or to stdout.
fn emit(st: &SemiTopology, output: Option<&Path>, out: &mut Out<'_>) -> Result<i32, CliError> {
    let doc = io::serialize_semitopology(st);
    match output {
        Some(path) => {
            write_file(path, &doc)?;
            out.text(format!("wrote {} points, {} basis sets to {}", st.len(), st.basis().len(), path.display()));
            out.json(&json!({
                "command": "write",
                "path": path.display().to_string(),
                "points": st.len(),
                "basis": st.basis().len(),
            }));
        }
        None => out.raw(&doc),
    }
    Ok(EXIT_OK)
}

fn generate(args: GenerateArgs, out: &mut Out<'_>) -> Result<i32, CliError> {
    let st = match args.family {
        Family::Majority { n } => generators::majority(n as usize),
        Family::ZWindow { k } => generators::z_window(k as usize),
        Family::Discrete { n } => generators::discrete(n as usize),
        Family::Random { n, m, seed } => generators::random_semitopology(n as usize, m as usize, seed),
    };
    let st = match args.prefix {
        Some(prefix) => st.relabel(&prefix)?,
        None => st,
    };
    emit(&st, args.output.as_deref(), out)
}

fn check(st: &SemiTopology, out: &mut Out<'_>) -> Result<i32, CliError> {
    let sizes: Vec<usize> = st.basis().iter().map(PointSet::len).collect();
    let pairs = intertwined_graph(st).len();
    let comps = components(st).len();
    let opens = st.enumerate_opens().ok().map(|o| o.len());
    out.text("valid semitopology");
    out.text(format!("points: {}", st.len()));
    out.text(format!(
        "basis: {} (sizes {}..{})",
        sizes.len(),
        sizes.iter().min().unwrap_or(&0),
        sizes.iter().max().unwrap_or(&0)
    ));
    out.text(format!("intertwined pairs: {pairs}"));
    out.text(format!("components: {comps}"));
    match opens {
        Some(n) => out.text(format!("opens: {n}")),
        None => out.text(format!("opens: not enumerated (basis exceeds {DEFAULT_ORACLE_LIMIT})")),
    }
    out.json(&json!({
        "command": "check",
        "valid": true,
        "points": st.len(),
        "basis": sizes.len(),
        "intertwined_pairs": pairs,
        "components": comps,
        "opens": opens,
    }));
    Ok(EXIT_OK)
}

fn simulate(args: SimulateArgs, out: &mut Out<'_>) -> Result<i32, CliError> {
    let st = load(&args.file)?;
    let outcome = match (&args.schedule, args.seed) {
        (Some(path), _) => {
            let parse = |source| CliError::Parse { path: path.clone(), source };
            let raw = io::parse_schedule(&read(path)?).map_err(parse)?;
            run_schedule(&st, &io::resolve_schedule(&st, &raw).map_err(parse)?)
        }
        (None, Some(seed)) => run_random(&st, seed, args.max_steps),
        (None, None) => unreachable!("clap requires --schedule or --seed"),
    };
    if args.oracle && detect_deadlock_oracle(&st, &outcome.final_state, DEFAULT_ORACLE_LIMIT)? != outcome.deadlocked {
        return Err(CliError::OracleDivergence("deadlock sets differ".into()));
    }
    let trace = Trace::from_outcome(&st, &outcome);
    let doc = io::serialize_trace(&trace);
    if let Some(path) = &args.trace {
        write_file(path, &doc)?;
    }

    out.text(format!(
        "steps: {}, applied: {}, rejected: {}",
        outcome.steps,
        trace.events.len(),
        trace.rejected.len()
    ));
    for r in &trace.rejected {
        out.text(format!("  rejected #{}: {{{}}} {}: {}", r.index, r.event.coalition.join(","), r.event.value, r.reason));
    }
    for (value, label) in [(Some(Value::T), "T"), (Some(Value::F), "F"), (None, "undecided")] {
        let members: Vec<&str> = trace.status.iter().filter(|(_, s)| **s == value).map(|(k, _)| k.as_str()).collect();
        out.text(format!("{label}: {{{}}}", members.join(",")));
    }
    out.text(format!("deadlocked: {{{}}}", trace.deadlocked.join(",")));
    let forks: Vec<String> = trace.forks.iter().map(|(a, b)| format!("({a},{b})")).collect();
    out.text(format!("forks: {{{}}}", forks.join(",")));
    if out.json {
        out.raw(&doc);
    }
    Ok(verdict(outcome.deadlocked.is_empty() && outcome.forks.is_empty()))
}
