//! The `mtp` command line tool. [`run`] does all the work and returns the
//! exit code with the captured output, so tests can drive it in-process.

use clap::{Args, Parser, Subcommand, ValueEnum};
use mtp::corpus::{load_corpus, run_corpus, CorpusError, Sources};
use mtp::preorders::{
    all_witnesses, check, relate, separates, CheckOptions, CheckResult, Outcome, Relation, Report, WitnessReport,
};
use mtp::semantics::{default_budget, must_pass_with, Analysis, Lts};
use mtp::syntax::{format_trace, parse_trace, shortlex, Action, Configuration, Process, Trace};
use mtp::traceclasses::{filtered_class, maz_class, Interface};
use serde::Serialize;
use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

#[derive(Parser, Debug)]
#[command(name = "mtp", version, about = "Decide must, uncoordinated and individualistic testing preorders")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// State budget for exploration (default: MTP_BUDGET or 10000).
    #[arg(long, global = true)]
    pub budget: Option<usize>,
    /// Definition files to load; may be repeated.
    #[arg(long = "defs", global = true)]
    pub defs: Vec<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ClassKind {
    Maz,
    Filtered,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse a term or configuration and print it in canonical form.
    Parse { term: String },
    /// List the weak traces of a term, shortest first.
    Traces { term: String },
    /// Dump the reachable transition graph.
    Lts { term: String },
    /// Print the trace class of a trace.
    Classes {
        /// A named interface, an interface file, or inline `{ {a}, {b} }`.
        #[arg(long, short)]
        interface: String,
        #[arg(long, value_enum, default_value_t = ClassKind::Maz)]
        kind: ClassKind,
        /// Part index for filtered classes.
        #[arg(long)]
        part: Option<usize>,
        /// Terms whose traces make up the universe of a filtered class; may be repeated.
        #[arg(long)]
        among: Vec<String>,
        /// Space-separated actions, `eps` for the empty trace.
        trace: String,
    },
    /// Decide whether LHS <= RHS.
    Check(CheckArgs),
    /// All six directed verdicts for a pair.
    Relate {
        /// A named interface, an interface file, or inline `{ {a}, {b} }`.
        #[arg(long, short)]
        interface: String,
        /// A term or a definition name.
        lhs: String,
        /// A term or a definition name.
        rhs: String,
    },
    /// Synthesize a distinguishing observer, or run a given one with --run.
    Observer {
        #[command(flatten)]
        pair: PairArgs,
        /// Run this observer against LHS and RHS instead of synthesizing one.
        #[arg(long)]
        run: Option<String>,
    },
    /// Run corpus manifests (`corpus run FILE...` is also accepted).
    Corpus {
        /// TOML manifests.
        #[arg(required = true)]
        paths: Vec<String>,
    },
}

#[derive(Args, Debug)]
pub struct PairArgs {
    /// must, unc or ind.
    #[arg(long, short)]
    pub relation: Relation,
    /// A named interface, an interface file, or inline `{ {a}, {b} }`.
    #[arg(long, short)]
    pub interface: Option<String>,
    /// A term or a definition name.
    pub lhs: String,
    /// A term or a definition name.
    pub rhs: String,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[command(flatten)]
    pub pair: PairArgs,
    /// Also check RHS <= LHS; succeed only when both hold.
    #[arg(long)]
    pub both: bool,
    /// Synthesize an oracle-validated observer for each failure.
    #[arg(long)]
    pub observer: bool,
    /// List every witness rather than only the least one.
    #[arg(long)]
    pub all: bool,
}

/// Exit code and captured streams of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn ok(code: i32, stdout: String) -> Self {
        Output { code, stdout, stderr: String::new() }
    }

    fn error(message: impl std::fmt::Display) -> Self {
        Output { code: 2, stdout: String::new(), stderr: format!("error: {message}\n") }
    }
}

type Failure = String;

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Output::ok(0, text)
            } else {
                Output { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match execute(&cli) {
        Ok(out) => out,
        Err(msg) => Output::error(msg),
    }
}

struct Context {
    sources: Sources,
    budget: usize,
    format: Format,
}

impl Context {
    fn new(cli: &Cli, interface: Option<&str>) -> Result<Self, Failure> {
        let mut sources = Sources::new(PathBuf::new());
        let mut defs = cli.defs.clone();
        // Definitions that sit next to an interface file are picked up when none are given.
        if defs.is_empty() {
            if let Some(sibling) = interface.map(Path::new).filter(|p| p.is_file()).map(|p| p.with_extension("ccs")) {
                if sibling.is_file() {
                    defs.push(sibling);
                }
            }
        }
        for d in &defs {
            sources.load(d).map_err(|e| e.to_string())?;
        }
        Ok(Context { sources, budget: cli.budget.unwrap_or_else(default_budget), format: cli.format })
    }

    fn process(&self, r: &str) -> Result<Process, Failure> {
        self.sources.process(r).map_err(|e| e.to_string())
    }

    fn configuration(&self, r: &str) -> Result<Configuration, Failure> {
        self.sources.configuration(r).map_err(|e| e.to_string())
    }

    fn interface(&self, relation: Relation, r: Option<&str>) -> Result<Interface, Failure> {
        match (r, relation) {
            (Some(r), _) => self.sources.interface(r).map_err(|e| e.to_string()),
            (None, Relation::Must) => Ok(Interface::single(&BTreeSet::new())),
            (None, _) => Err(format!("--interface is required for the {relation} relation")),
        }
    }
}

fn execute(cli: &Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::Parse { term } => cmd_parse(&Context::new(cli, None)?, term),
        Command::Traces { term } => cmd_traces(&Context::new(cli, None)?, term),
        Command::Lts { term } => cmd_lts(&Context::new(cli, None)?, term),
        Command::Classes { interface, kind, part, among, trace } => {
            let ctx = Context::new(cli, Some(interface))?;
            cmd_classes(&ctx, interface, *kind, *part, among, trace)
        }
        Command::Check(args) => cmd_check(&Context::new(cli, args.pair.interface.as_deref())?, args),
        Command::Relate { interface, lhs, rhs } => cmd_relate(&Context::new(cli, Some(interface))?, interface, lhs, rhs),
        Command::Observer { pair, run } => {
            let ctx = Context::new(cli, pair.interface.as_deref())?;
            match run {
                Some(o) => cmd_run_observer(&ctx, pair, o),
                None => cmd_observer(&ctx, pair),
            }
        }
        Command::Corpus { paths } => cmd_corpus(cli, paths),
    }
}

fn cmd_parse(ctx: &Context, term: &str) -> Result<Output, Failure> {
    let c = ctx.configuration(term)?;
    #[derive(Serialize)]
    struct Parsed {
        term: String,
        components: usize,
        finite: bool,
        actions: BTreeSet<Action>,
    }
    let parsed = Parsed { term: c.to_string(), components: c.len(), finite: c.is_finite(), actions: c.actions() };
    Ok(Output::ok(
        0,
        match ctx.format {
            Format::Json => json(&parsed),
            Format::Text => format!("{}\n", parsed.term),
        },
    ))
}

fn sorted_traces(mut ts: Vec<Trace>) -> Vec<Trace> {
    ts.sort_by(|a, b| shortlex(a, b));
    ts.dedup();
    ts
}

fn trace_lines(ts: &[Trace], format: Format) -> String {
    match format {
        Format::Json => json(&ts.iter().map(|t| format_trace(t)).collect::<Vec<_>>()),
        Format::Text => ts.iter().map(|t| format!("{}\n", format_trace(t))).collect(),
    }
}

fn cmd_traces(ctx: &Context, term: &str) -> Result<Output, Failure> {
    let c = ctx.configuration(term)?;
    let traces: Vec<Trace> = if c.len() == 1 {
        let a = Analysis::new(&c.components[0], ctx.budget).map_err(|e| e.to_string())?;
        a.traces().cloned().collect()
    } else {
        let a = Analysis::new(&c, ctx.budget).map_err(|e| e.to_string())?;
        a.traces().cloned().collect()
    };
    Ok(Output::ok(0, trace_lines(&sorted_traces(traces), ctx.format)))
}

fn cmd_lts(ctx: &Context, term: &str) -> Result<Output, Failure> {
    let c = ctx.configuration(term)?;
    let dump = if c.len() == 1 {
        Lts::explore(&c.components[0], ctx.budget).map_err(|e| e.to_string())?.dump()
    } else {
        Lts::explore(&c, ctx.budget).map_err(|e| e.to_string())?.dump()
    };
    let text = match ctx.format {
        Format::Json => json(&dump),
        Format::Text => {
            let mut s = String::new();
            for (i, n) in dump.nodes.iter().enumerate() {
                let _ = writeln!(s, "{i}: {n}");
            }
            for e in &dump.edges {
                let _ = writeln!(s, "{} --{}--> {}", e.source, e.label, e.target);
            }
            s
        }
    };
    Ok(Output::ok(0, text))
}

/// Reads a trace for an interface. When every name the interface mentions is
/// a single letter, a compact word such as `ab~c` also reads as `a b ~c`.
fn trace_for(iface: &Interface, s: &str) -> Result<Trace, Failure> {
    let universe = iface.universe();
    let spaced = parse_trace(s).ok_or_else(|| format!("cannot read trace `{s}`"));
    if let Ok(t) = &spaced {
        if t.iter().all(|a| universe.contains(a)) {
            return Ok(t.clone());
        }
    }
    let single_letters = universe.iter().all(|a| a.name.as_str().chars().count() == 1);
    if single_letters && !s.contains(char::is_whitespace) {
        let mut out = Vec::new();
        let mut output = false;
        for ch in s.chars() {
            if ch == '~' {
                output = true;
                continue;
            }
            let a = Action::parse(&format!("{}{ch}", if output { "~" } else { "" }));
            output = false;
            match a {
                Some(a) if universe.contains(&a) => out.push(a),
                _ => return spaced,
            }
        }
        return Ok(out);
    }
    spaced
}

fn cmd_classes(
    ctx: &Context,
    interface: &str,
    kind: ClassKind,
    part: Option<usize>,
    among: &[String],
    trace: &str,
) -> Result<Output, Failure> {
    let iface = ctx.sources.interface(interface).map_err(|e| e.to_string())?;
    let s = trace_for(&iface, trace)?;
    let class = match kind {
        ClassKind::Maz => maz_class(&s, &iface.dependency()).map_err(|e| e.to_string())?,
        ClassKind::Filtered => {
            let i = part.ok_or("--part is required for filtered classes")?;
            if i >= iface.len() {
                return Err(format!("part {i} does not exist; the interface has {} parts", iface.len()));
            }
            let mut universe: BTreeSet<Trace> = BTreeSet::new();
            for t in among {
                let p = ctx.process(t)?;
                let a = Analysis::new(&p, ctx.budget).map_err(|e| e.to_string())?;
                universe.extend(a.traces().cloned());
            }
            filtered_class(&s, iface.part(i), &universe)
        }
    };
    let members = sorted_traces(class.members.into_iter().collect());
    Ok(Output::ok(0, trace_lines(&members, ctx.format)))
}

fn status(results: &[CheckResult]) -> i32 {
    if results.iter().any(|r| r.error().is_some()) {
        2
    } else if results.iter().all(CheckResult::holds) {
        0
    } else {
        1
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct CheckOutput {
    results: Vec<Report>,
    #[serde(skip_serializing_if = "Option::is_none")]
    all_witnesses: Option<Vec<WitnessReport>>,
}

fn cmd_check(ctx: &Context, args: &CheckArgs) -> Result<Output, Failure> {
    let pair = &args.pair;
    let iface = ctx.interface(pair.relation, pair.interface.as_deref())?;
    let (p, q) = (ctx.process(&pair.lhs)?, ctx.process(&pair.rhs)?);
    let opts = CheckOptions { budget: ctx.budget, prune: true, observer: args.observer };
    let mut results = vec![check(pair.relation, &p, &q, &iface, opts)];
    if args.both {
        results.push(check(pair.relation, &q, &p, &iface, opts));
    }
    let code = status(&results);
    let all = if args.all {
        let used = &results[0].interface;
        let ws = all_witnesses(pair.relation, &p, &q, used, ctx.budget, usize::MAX).map_err(|e| e.to_string())?;
        Some(ws.iter().map(|w| WitnessReport::new(w, used)).collect::<Vec<_>>())
    } else {
        None
    };
    let reports: Vec<Report> = results.iter().map(CheckResult::report).collect();
    let text = match ctx.format {
        Format::Json if !args.both && all.is_none() => json(&reports[0]),
        Format::Json => json(&CheckOutput { results: reports, all_witnesses: all }),
        Format::Text => {
            let mut s: String = reports.iter().map(Report::to_text).collect();
            if let Some(ws) = &all {
                let _ = writeln!(s, "all witnesses ({}):", ws.len());
                for w in ws {
                    let part = w.part.as_ref().map(|p| format!(" in {{{}}}", p.join(", "))).unwrap_or_default();
                    let trace = if w.trace.is_empty() { "eps".to_string() } else { w.trace.join(" ") };
                    let _ = writeln!(s, "  {trace} / {{{}}}{part}", w.must_set.join(", "));
                }
            }
            s
        }
    };
    let mut out = Output::ok(code, text);
    if let Some(e) = results.iter().find_map(CheckResult::error) {
        out.stderr = format!("error: {e}\n");
    }
    Ok(out)
}

fn cmd_relate(ctx: &Context, interface: &str, lhs: &str, rhs: &str) -> Result<Output, Failure> {
    let iface = ctx.sources.interface(interface).map_err(|e| e.to_string())?;
    let (p, q) = (ctx.process(lhs)?, ctx.process(rhs)?);
    let m = relate(&p, &q, &iface, CheckOptions { budget: ctx.budget, prune: true, observer: false });
    let code = if m.results.iter().any(|r| r.error().is_some()) { 2 } else { 0 };
    let text = match ctx.format {
        Format::Json => json(&m.report()),
        Format::Text => {
            let mut s = String::new();
            for r in [Relation::Must, Relation::Unc, Relation::Ind] {
                let word = |c: &CheckResult| match &c.outcome {
                    Outcome::Holds => "holds".to_string(),
                    Outcome::Fails(_) => "fails".to_string(),
                    Outcome::Error(e) => format!("error: {e}"),
                };
                let _ = writeln!(s, "{r}: lhs <= rhs {}, rhs <= lhs {}", word(m.get(r, true)), word(m.get(r, false)));
            }
            let _ = writeln!(s, "must implies unc: {}", m.must_implies_unc);
            let _ = writeln!(s, "unc implies ind: {}", m.unc_implies_ind);
            s
        }
    };
    Ok(Output::ok(code, text))
}

fn cmd_observer(ctx: &Context, pair: &PairArgs) -> Result<Output, Failure> {
    let iface = ctx.interface(pair.relation, pair.interface.as_deref())?;
    let (p, q) = (ctx.process(&pair.lhs)?, ctx.process(&pair.rhs)?);
    let opts = CheckOptions { budget: ctx.budget, prune: true, observer: true };
    let r = check(pair.relation, &p, &q, &iface, opts);
    let (code, text) = match (&r.outcome, &r.observer) {
        (Outcome::Error(e), _) => return Err(e.to_string()),
        (Outcome::Holds, _) => (1, "the relation holds; no observer separates the pair\n".to_string()),
        (Outcome::Fails(_), None) => {
            (1, "no candidate observer passed the must oracle for the least witness\n".to_string())
        }
        (Outcome::Fails(_), Some(s)) => (0, format!("{}\n", s.observer)),
    };
    Ok(Output::ok(
        code,
        match ctx.format {
            Format::Json => json(&r.report()),
            Format::Text => text,
        },
    ))
}

fn cmd_run_observer(ctx: &Context, pair: &PairArgs, observer: &str) -> Result<Output, Failure> {
    let iface = ctx.interface(pair.relation, pair.interface.as_deref())?;
    let (p, q) = (ctx.process(&pair.lhs)?, ctx.process(&pair.rhs)?);
    let o = ctx.configuration(observer)?;
    let lhs = must_pass_with(&p, &o, ctx.budget).map_err(|e| e.to_string())?;
    let rhs = must_pass_with(&q, &o, ctx.budget).map_err(|e| e.to_string())?;
    let sep = separates(pair.relation, &p, &q, &iface, &o, ctx.budget).map_err(|e| e.to_string())?;
    #[derive(Serialize)]
    struct Run {
        observer: String,
        lhs_passes: bool,
        rhs_passes: bool,
        separates: bool,
    }
    let run = Run { observer: o.to_string(), lhs_passes: lhs, rhs_passes: rhs, separates: sep };
    let text = match ctx.format {
        Format::Json => json(&run),
        Format::Text => format!(
            "observer: {}\nlhs must pass: {lhs}\nrhs must pass: {rhs}\nseparates under {}: {sep}\n",
            run.observer, pair.relation
        ),
    };
    Ok(Output::ok(if sep { 0 } else { 1 }, text))
}

fn cmd_corpus(cli: &Cli, paths: &[String]) -> Result<Output, Failure> {
    let paths: Vec<&String> = match paths.split_first() {
        Some((first, rest)) if first == "run" && !Path::new(first).exists() => rest.iter().collect(),
        _ => paths.iter().collect(),
    };
    if paths.is_empty() {
        return Err("no manifest given".to_string());
    }
    let budget = cli.budget.unwrap_or_else(default_budget);
    let mut text = String::new();
    let mut summaries = Vec::new();
    let mut failed = 0;
    for path in paths {
        let entries = load_corpus(Path::new(path)).map_err(|e: CorpusError| e.to_string())?;
        let summary = run_corpus(&entries, budget);
        failed += summary.failed;
        for e in &summary.entries {
            let _ = writeln!(text, "{} {}", if e.passed { "ok  " } else { "FAIL" }, e.id);
            for m in &e.mismatches {
                let _ = writeln!(text, "       {m}");
            }
        }
        let _ = writeln!(text, "{path}: {} passed, {} failed, {} entries", summary.passed, summary.failed, summary.entries.len());
        summaries.push(summary);
    }
    let out = match cli.format {
        Format::Json => json(&summaries),
        Format::Text => text,
    };
    Ok(Output::ok(if failed == 0 { 0 } else { 1 }, out))
}
