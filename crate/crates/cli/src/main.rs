//! `tgame`: solve, verify, generate, construct, play and sweep transversal
//! game instances from the command line.
//!
//! Exit codes: 0 success, 2 parse or usage error, 3 solver limit exceeded,
//! 4 bound violation found, 1 anything else.

mod error;
mod limits;
mod play;

use std::fs;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use tgame_core::constructions::{construct, FamilySpec, LabeledHypergraph};
use tgame_core::generators::{enumerate_small, mixed_corpus, random_k_uniform, GenSpec};
use tgame_core::io::{emit_hypergraph, parse_hypergraph, parse_stream, ParseWarning};
use tgame_core::solver::transversal_number;
use tgame_core::strategies::{strategy_from_name, CoronaLabels, ExactStrategy, StrategyContext};
use tgame_core::verify::{check_bounds, check_continuation, check_corona, experiment_sweep, BoundCheck, Instance, Report};
use tgame_core::{GameState, Hypergraph, PlayerRole, Scheme, SolveLimits, Solver, Strategy, Transcript};

use crate::error::{CliError, EXIT_OK};
use crate::limits::LimitArgs;
use crate::play::{Outcome, Session};

#[derive(Parser)]
#[command(name = "tgame", version, about = "Exact solver and bound checker for the transversal game on hypergraphs")]
struct Cli {
    #[command(flatten)]
    limits: LimitArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute tau, the game value and an optimal first move.
    Solve(SolveArgs),
    /// Evaluate every applicable bound on one instance.
    Verify(VerifyArgs),
    /// Generate random or enumerated k-uniform hypergraphs.
    Gen(GenArgs),
    /// Build a named family and print it in the text format.
    Construct(ConstructArgs),
    /// Play against an engine in the terminal.
    Play(PlayArgs),
    /// Run the bound checks over a corpus and write CSV.
    Sweep(SweepArgs),
}

/// Where an instance comes from: a file (`-` for stdin) or a family spec.
#[derive(Args)]
struct InputArgs {
    /// Hypergraph file in the text format, or `-` for stdin.
    #[arg(required_unless_present = "family")]
    input: Option<PathBuf>,
    /// Family spec instead of a file, e.g. `Hk(k=2)` or `corona(base=complete(n=3,k=3),k=3)`.
    #[arg(long, conflicts_with = "input")]
    family: Option<String>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Solve the game with the Staller moving first.
    #[arg(long)]
    staller_start: bool,
    /// Emit one JSON record instead of text.
    #[arg(long)]
    json: bool,
    /// Also print an optimal-play transcript, one JSON object per move.
    #[arg(long)]
    transcript: bool,
    /// Skip dominated moves during search.
    #[arg(long)]
    prune: bool,
    /// Search root moves in parallel.
    #[arg(long)]
    parallel: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    json: bool,
    /// Also list checks whose hypotheses fail.
    #[arg(long)]
    all: bool,
    /// Sample this many nested covered-set pairs for the continuation check.
    #[arg(long, value_name = "TRIALS")]
    continuation: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Treat the input as a base hypergraph and check its k-corona.
    #[arg(long, value_name = "K")]
    corona: Option<usize>,
    /// Pendant edge size for --corona.
    #[arg(long, default_value_t = 2)]
    pendant: usize,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    /// Edge count, or the largest edge count with --enumerate.
    #[arg(long)]
    m: usize,
    #[arg(long)]
    k: usize,
    /// Any two edges share at most one vertex.
    #[arg(long)]
    linear: bool,
    #[arg(long)]
    max_degree: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of instances; instance i uses seed + i.
    #[arg(long, default_value_t = 1)]
    count: u64,
    /// Emit every labeled k-uniform hypergraph on n vertices with at most m edges.
    #[arg(long, conflicts_with_all = ["linear", "max_degree", "count"])]
    enumerate: bool,
    /// Write one file per instance here instead of a stream on stdout.
    #[arg(long, value_name = "DIR")]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct ConstructArgs {
    /// Full spec such as `corona(base=complete(n=3,k=3),k=3)`.
    #[arg(required_unless_present = "family")]
    spec: Option<String>,
    #[arg(long, conflicts_with = "spec")]
    family: Option<String>,
    /// `key=value,...` for --family.
    #[arg(long, default_value = "", requires = "family")]
    params: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum Side {
    #[value(name = "edgehitter", alias = "edge-hitter", alias = "eh")]
    EdgeHitter,
    Staller,
}

impl From<Side> for PlayerRole {
    fn from(s: Side) -> Self {
        match s {
            Side::EdgeHitter => PlayerRole::EdgeHitter,
            Side::Staller => PlayerRole::Staller,
        }
    }
}

#[derive(Args)]
struct PlayArgs {
    #[command(flatten)]
    input: InputArgs,
    /// The side you play.
    #[arg(long, value_enum, default_value = "edgehitter")]
    human: Side,
    /// exact, eh3, eh4, greedy, random:SEED or corona.
    #[arg(long, default_value = "exact")]
    engine: String,
    #[arg(long)]
    staller_start: bool,
    /// Where the transcript (complete or partial) is written as JSON.
    #[arg(long, default_value = "tgame-play.json")]
    save: PathBuf,
    #[arg(long)]
    no_save: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct SweepArgs {
    /// Hypergraph stream files to include.
    files: Vec<PathBuf>,
    /// Family specs to include (repeatable).
    #[arg(long)]
    family: Vec<String>,
    /// Include every labeled k-uniform hypergraph on k..=n-max vertices with at most m-max edges.
    #[arg(long, requires_all = ["k", "n_max", "m_max"])]
    enumerate: bool,
    /// Include this many random k-uniform instances with n and m drawn per seed.
    #[arg(long, value_name = "COUNT", requires_all = ["k", "n_max", "m_max"])]
    random: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long)]
    m_max: Option<usize>,
    /// Base seed for --random.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Comma-separated check names, or `all`.
    #[arg(long, value_delimiter = ',')]
    checks: Option<Vec<String>>,
    /// Output file; stdout when absent.
    #[arg(long, short)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

fn read_text(path: &Path) -> Result<String, CliError> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }
}

fn warn(path: &Path, warnings: &[ParseWarning]) {
    for w in warnings {
        eprintln!("warning: {}: line {}: {}", path.display(), w.line, w.message);
    }
}

impl InputArgs {
    fn load(&self) -> Result<LabeledHypergraph, CliError> {
        if let Some(spec) = &self.family {
            return Ok(construct(spec)?);
        }
        let path = self.input.as_deref().expect("clap enforces an input");
        let parsed = parse_hypergraph(&read_text(path)?).map_err(|source| CliError::Format {
            path: path.display().to_string(),
            source,
        })?;
        warn(path, &parsed.warnings);
        let hg = parsed.hypergraph;
        Ok(LabeledHypergraph {
            labels: CoronaLabels::infer(&hg).ok(),
            vertex_names: (0..hg.n()).map(|v| v.to_string()).collect(),
            family: path.display().to_string(),
            params: Default::default(),
            hypergraph: hg,
        })
    }
}

fn first_player(staller_start: bool) -> PlayerRole {
    if staller_start {
        PlayerRole::Staller
    } else {
        PlayerRole::EdgeHitter
    }
}

#[derive(Serialize)]
struct SolveRecord {
    n: usize,
    m: usize,
    first: PlayerRole,
    tau: usize,
    tau_g: u32,
    tau_g_prime: u32,
    value: u32,
    first_move: Option<usize>,
    nodes: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    transcript: Option<Transcript>,
}

fn solve(args: &SolveArgs, limits: SolveLimits, out: &mut impl Write) -> Result<(), CliError> {
    let hg = args.input.load()?.hypergraph;
    let tau = transversal_number(&hg, &limits)?;
    let solver = Arc::new(
        Solver::new(&hg, limits)?
            .with_pruning(args.prune)
            .with_parallel(args.parallel),
    );
    let (tau_g, tau_g_prime) = (solver.tau_g()?, solver.tau_g_prime()?);
    if tau_g.abs_diff(tau_g_prime) > 1 {
        eprintln!("violation: |tau_g - tau_g'| = |{tau_g} - {tau_g_prime}| exceeds 1");
        return Err(CliError::Violations(1));
    }
    let first = first_player(args.staller_start);
    let state = GameState::new(&hg, first);
    let first_move = if state.is_terminal() { None } else { Some(solver.best_move(&state)?) };
    let transcript = if args.transcript {
        let scheme = hg.uniformity().and_then(Scheme::for_uniformity);
        let mut eh = ExactStrategy::new(solver.clone());
        let mut st = ExactStrategy::new(solver.clone());
        Some(tgame_core::strategies::play_from(state, &mut eh, &mut st, scheme)?)
    } else {
        None
    };
    let value = if args.staller_start { tau_g_prime } else { tau_g };
    let record = SolveRecord {
        n: hg.n(),
        m: hg.m(),
        first,
        tau,
        tau_g,
        tau_g_prime,
        value,
        first_move,
        nodes: solver.nodes_expanded(),
        transcript,
    };
    if args.json {
        serde_json::to_writer(&mut *out, &record).map_err(io::Error::from)?;
        writeln!(out)?;
        return Ok(());
    }
    if args.staller_start {
        writeln!(out, "tau={tau} tau_g_prime={tau_g_prime}")?;
    } else {
        writeln!(out, "tau={tau} tau_g={tau_g}")?;
    }
    match first_move {
        Some(v) => writeln!(out, "first_move={v}")?,
        None => writeln!(out, "first_move=none")?,
    }
    if let Some(t) = &record.transcript {
        t.write_json_lines(&mut *out)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct VerifyRecord<'a> {
    instance: &'a str,
    tau: u32,
    tau_g: u32,
    tau_g_prime: u32,
    checks: &'a [BoundCheck],
    reports: &'a [Report],
}

fn print_checks(checks: &[BoundCheck], all: bool, out: &mut impl Write) -> io::Result<()> {
    for c in checks {
        if c.applicable {
            let status = if c.holds { "ok" } else { "VIOLATED" };
            writeln!(out, "{:<28} {:>8} <= {:<8} slack {:<6} {status}", c.name, c.lhs, c.rhs, c.slack)?;
        } else if all {
            writeln!(out, "{:<28} n/a", c.name)?;
        }
    }
    Ok(())
}

fn verify(args: &VerifyArgs, limits: SolveLimits, out: &mut impl Write) -> Result<(), CliError> {
    let lh = args.input.load()?;
    let hg = &lh.hypergraph;
    let id = lh.family.clone();
    let mut reports = Vec::new();
    let mut checks = Vec::new();
    let mut values = None;
    if let Some(k) = args.corona {
        reports.push(check_corona(hg, k, args.pendant, &limits)?);
    } else {
        let (v, c) = check_bounds(hg, &id, &limits)?;
        values = Some(v);
        checks = c;
    }
    if let Some(trials) = args.continuation {
        reports.push(check_continuation(hg, &id, trials, args.seed, &limits)?);
    }
    let violations =
        checks.iter().filter(|c| c.is_violation()).count() + reports.iter().map(|r| r.violations.len()).sum::<usize>();

    if args.json {
        let v = values.unwrap_or(tgame_core::verify::InstanceValues { tau: 0, tau_g: 0, tau_g_prime: 0 });
        let record = VerifyRecord {
            instance: &id,
            tau: v.tau,
            tau_g: v.tau_g,
            tau_g_prime: v.tau_g_prime,
            checks: &checks,
            reports: &reports,
        };
        serde_json::to_writer_pretty(&mut *out, &record).map_err(io::Error::from)?;
        writeln!(out)?;
    } else {
        if let Some(v) = values {
            writeln!(out, "{id}: n={} m={} tau={} tau_g={} tau_g_prime={}", hg.n(), hg.m(), v.tau, v.tau_g, v.tau_g_prime)?;
        }
        print_checks(&checks, args.all, out)?;
        for r in &reports {
            writeln!(out, "{}:", r.corpus)?;
            for (name, t) in &r.tallies {
                let slack = r.min_slack(name).map_or(String::new(), |s| format!(", min slack {s}"));
                writeln!(out, "  {name:<32} {}/{} hold{slack}", t.passed, t.applicable)?;
            }
            for c in &r.violations {
                writeln!(out, "  VIOLATED {} on {}: {} > {}", c.name, c.instance, c.lhs, c.rhs)?;
            }
        }
        writeln!(out, "{violations} violation(s)")?;
    }
    if violations > 0 {
        return Err(CliError::Violations(violations));
    }
    Ok(())
}

fn emit_instance(out: &mut impl Write, comment: &str, hg: &Hypergraph) -> io::Result<()> {
    writeln!(out, "# {comment}")?;
    out.write_all(emit_hypergraph(hg).as_bytes())
}

fn generate(args: &GenArgs, out: &mut impl Write) -> Result<(), CliError> {
    let instances: Box<dyn Iterator<Item = Result<(String, String, Hypergraph), CliError>>> = if args.enumerate {
        let label = format!("enumerate(n={},m<={},k={})", args.n, args.m, args.k);
        Box::new(
            enumerate_small(args.n, args.m, args.k)?
                .enumerate()
                .map(move |(i, h)| Ok((format!("{label} #{i}"), format!("enum-{i:06}.txt"), h))),
        )
    } else {
        let base = GenSpec {
            linear: args.linear,
            max_degree: args.max_degree,
            ..GenSpec::new(args.n, args.m, args.k, args.seed)
        };
        Box::new((0..args.count).map(move |i| {
            let spec = GenSpec {
                seed: base.seed.wrapping_add(i),
                ..base.clone()
            };
            let h = random_k_uniform(&spec)?;
            Ok((format!("{} seed={}", spec.label(), spec.seed), format!("random-{}.txt", spec.seed), h))
        }))
    };
    if let Some(dir) = &args.out_dir {
        fs::create_dir_all(dir)?;
    }
    for item in instances {
        let (comment, file, h) = item?;
        match &args.out_dir {
            Some(dir) => {
                let mut f = BufWriter::new(fs::File::create(dir.join(file))?);
                emit_instance(&mut f, &comment, &h)?;
                f.flush()?;
            }
            None => emit_instance(out, &comment, &h)?,
        }
    }
    Ok(())
}

fn construct_cmd(args: &ConstructArgs, out: &mut impl Write) -> Result<(), CliError> {
    let spec = match (&args.spec, &args.family) {
        (Some(s), _) => FamilySpec::parse(s)?,
        (None, Some(f)) => FamilySpec::from_parts(f, &args.params)?,
        (None, None) => unreachable!("clap requires one of them"),
    };
    let lh = spec.build()?;
    writeln!(out, "# {}", lh.family)?;
    let default_names = lh.vertex_names.iter().enumerate().all(|(v, n)| *n == format!("v{v}"));
    if !default_names {
        writeln!(out, "# vertices: {}", lh.vertex_names.join(" "))?;
    }
    out.write_all(emit_hypergraph(&lh.hypergraph).as_bytes())?;
    Ok(())
}

fn play_cmd(args: &PlayArgs, limits: SolveLimits) -> Result<(), CliError> {
    if args.input.input.as_deref() == Some(Path::new("-")) {
        return Err(CliError::Usage("play reads moves from stdin; pass the hypergraph as a file".into()));
    }
    let lh = args.input.load()?;
    let hg = &lh.hypergraph;
    let solver = match Solver::new(hg, limits.clone()) {
        Ok(s) => Some(Arc::new(s)),
        Err(e) => {
            eprintln!("note: no exact values for this instance ({e})");
            None
        }
    };
    let mut engine: Box<dyn Strategy> = match (args.engine.as_str(), &solver) {
        ("exact", Some(s)) => Box::new(ExactStrategy::new(s.clone())),
        (name, _) => strategy_from_name(
            name,
            &StrategyContext {
                hypergraph: hg,
                labels: lh.labels.as_ref(),
                limits,
            },
        )?,
    };
    let human: PlayerRole = args.human.into();
    if human == PlayerRole::EdgeHitter && matches!(args.engine.as_str(), "eh3" | "eh4") {
        eprintln!("note: {} is an Edge-hitter policy; here it plays the Staller", args.engine);
    }
    let session = Session {
        hypergraph: hg,
        names: Some(&lh.vertex_names),
        human,
        first: first_player(args.staller_start),
        scheme: hg.uniformity().and_then(Scheme::for_uniformity),
        solver: solver.as_deref(),
    };
    let stdin = io::stdin();
    let outcome = session.run(engine.as_mut(), stdin.lock(), io::stdout().lock())?;
    let (t, aborted) = match outcome {
        Outcome::Finished(t) => (t, false),
        Outcome::Aborted(t) => (t, true),
    };
    if !args.no_save {
        let text = serde_json::to_string_pretty(&t).map_err(io::Error::from)?;
        fs::write(&args.save, text + "\n")?;
        eprintln!("transcript saved to {}", args.save.display());
    }
    if aborted {
        return Err(CliError::Aborted { moves: t.length });
    }
    Ok(())
}

fn sweep_corpus(args: &SweepArgs) -> Result<Vec<Instance>, CliError> {
    let mut corpus = Vec::new();
    for path in &args.files {
        let parsed = parse_stream(&read_text(path)?).map_err(|source| CliError::Format {
            path: path.display().to_string(),
            source,
        })?;
        for (i, p) in parsed.into_iter().enumerate() {
            warn(path, &p.warnings);
            corpus.push(Instance::new(format!("{}[{i}]", path.display()), None, p.hypergraph));
        }
    }
    for spec in &args.family {
        let lh = construct(spec)?;
        corpus.push(Instance::new(lh.family, None, lh.hypergraph));
    }
    let (k, n_max, m_max) = (args.k.unwrap_or(0), args.n_max.unwrap_or(0), args.m_max.unwrap_or(0));
    if args.enumerate {
        // One pass per vertex count: the bounds depend on n, so a hypergraph
        // with isolated vertices is a different instance.
        for n in k..=n_max {
            for (i, h) in enumerate_small(n, m_max, k)?.enumerate() {
                corpus.push(Instance::new(format!("enumerate(n={n},k={k})"), Some(i as u64), h));
            }
        }
    }
    if let Some(count) = args.random {
        for (spec, h) in mixed_corpus(k, count, n_max, m_max, args.seed)? {
            corpus.push(Instance::new(spec.label(), Some(spec.seed), h));
        }
    }
    Ok(corpus)
}

fn sweep(args: &SweepArgs, limits: SolveLimits, stdout: &mut impl Write) -> Result<(), CliError> {
    let corpus = sweep_corpus(args)?;
    let name = format!("{} instance(s)", corpus.len());
    let output = experiment_sweep(&corpus, args.checks.as_deref(), &limits, &name)?;
    let mut sink: Box<dyn Write + '_> = match &args.out {
        Some(p) => Box::new(BufWriter::new(fs::File::create(p)?)),
        None => Box::new(&mut *stdout),
    };
    match args.format {
        Format::Csv => output.write_csv(&mut sink)?,
        Format::Json => {
            serde_json::to_writer_pretty(&mut sink, &output).map_err(io::Error::from)?;
            writeln!(sink)?;
        }
    }
    sink.flush()?;
    let report = &output.report;
    eprintln!(
        "sweep: {} instances, {} applicable checks, {} violations",
        report.instances,
        output.rows.len(),
        report.violations.len()
    );
    for c in report.violations.iter().take(10) {
        eprintln!("  VIOLATED {} on {}: {} > {}", c.name, c.instance, c.lhs, c.rhs);
    }
    if !report.is_success() {
        return Err(CliError::Violations(report.violations.len()));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    let limits = cli.limits.resolve()?;
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = match &cli.command {
        Command::Solve(a) => solve(a, limits, &mut out),
        Command::Verify(a) => verify(a, limits, &mut out),
        Command::Gen(a) => generate(a, &mut out),
        Command::Construct(a) => construct_cmd(a, &mut out),
        Command::Sweep(a) => sweep(a, limits, &mut out),
        Command::Play(a) => {
            drop(out);
            return play_cmd(a, limits);
        }
    };
    out.flush()?;
    result
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::from(EXIT_OK),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
