//! `berge`: constructions, detection, reduction and search from the command line.
//!
//! Exit codes: 0 success, 1 domain error, 2 usage or unreadable input.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use berge_core::affine::{affine_coloring, TieBreak};
use berge_core::detection::{check_witness, search_index, shadow_report, ColorStatus, DetectOptions, PairIndex};
use berge_core::geometry::ParallelClassFamily;
use berge_core::layered::{assignment_coloring, check_layered, erdos_base, layered_step, LayeredAssignment};
use berge_core::parallel::with_threads;
use berge_core::reduction::{lift_witness, reduce_coloring, ReductionTrace};
use berge_core::search::{find_avoiding_coloring, ramsey_exact, NStatus, SearchConfig, SearchMode};
use berge_core::{make_target, BergeWitness, Color, ColoredHypergraph, Error, Parallelism, Search, TargetGraph};

#[derive(Parser, Serialize)]
#[command(name = "berge", version, about = "Colorings of complete uniform hypergraphs avoiding monochromatic Berge copies")]
struct Cli {
    /// Worker threads for detection and search; 1 runs sequentially.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Manifest path. Defaults to `<output>.manifest.json`, or stderr without an output.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Serialize)]
enum Command {
    /// Build a coloring or layered assignment.
    #[command(subcommand)]
    Construct(Construct),
    /// Report FREE, WITNESS or INCONCLUSIVE per color.
    Verify(VerifyArgs),
    /// Light pairs, light vertices and their overlaps per color.
    Shadow(ShadowArgs),
    /// Drop one color and lower the uniformity by one.
    Reduce(ReduceArgs),
    /// Map a witness in a reduced coloring back to the original.
    Lift(LiftArgs),
    /// Exhaustive or randomized search for avoiding colorings.
    #[command(subcommand)]
    Search(SearchCmd),
}

#[derive(Subcommand, Serialize)]
enum Construct {
    /// Coloring from the parallel classes of AG(d, p).
    Affine(AffineArgs),
    /// Random 2-coloring of K_m as the first level of a layered assignment.
    ErdosBase(ErdosArgs),
    /// One layered step over disjoint copies of a base assignment.
    Layered(LayeredArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum TieBreakArg {
    Lowest,
    Random,
    Balanced,
}

#[derive(Args, Serialize)]
struct AffineArgs {
    #[arg(long)]
    p: u32,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    r: usize,
    #[arg(long)]
    c: usize,
    #[arg(long, value_enum, default_value_t = TieBreakArg::Lowest)]
    tie_break: TieBreakArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// BRC1 output; stdout when absent.
    #[arg(short = 'o')]
    output: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct ErdosArgs {
    #[arg(long)]
    m: usize,
    /// Forbidden clique size.
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    beta: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10_000)]
    max_attempts: u64,
    /// Layered JSON output; stdout when absent.
    #[arg(short = 'o')]
    output: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct LayeredArgs {
    /// Layered JSON input.
    #[arg(long)]
    base: PathBuf,
    #[arg(long)]
    copies: usize,
    #[arg(long)]
    beta: usize,
    /// Layered JSON output; stdout when absent.
    #[arg(short = 'o')]
    output: Option<PathBuf>,
    /// Also write the top-level coloring as BRC1.
    #[arg(long)]
    brc: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct VerifyArgs {
    #[arg(long)]
    coloring: PathBuf,
    #[arg(long)]
    target: String,
    /// A color index or `all`.
    #[arg(long, default_value = "all")]
    color: String,
    /// Core-enumeration nodes per color.
    #[arg(long)]
    budget: Option<u64>,
    /// Check this witness instead of searching.
    #[arg(long)]
    witness: Option<PathBuf>,
    /// Write the first witness found.
    #[arg(short = 'o')]
    output: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct ShadowArgs {
    #[arg(long)]
    coloring: PathBuf,
    /// JSON report; stdout when absent.
    #[arg(short = 'o')]
    output: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct ReduceArgs {
    #[arg(long)]
    coloring: PathBuf,
    #[arg(long)]
    drop_color: Color,
    /// Reduced BRC1 output.
    #[arg(short = 'o')]
    output: PathBuf,
    /// Trace JSON; defaults to `<output>.trace.json`.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct LiftArgs {
    #[arg(long)]
    trace: PathBuf,
    /// The original coloring.
    #[arg(long)]
    coloring: PathBuf,
    /// Witness in the reduced coloring.
    #[arg(long)]
    witness: PathBuf,
    #[arg(long)]
    target: String,
    #[arg(short = 'o')]
    output: PathBuf,
}

#[derive(Subcommand, Serialize)]
enum SearchCmd {
    /// Find one avoiding coloring on a fixed number of vertices.
    Avoid(AvoidArgs),
    /// Scan vertex counts until every coloring contains a copy.
    Ramsey(RamseyArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum ModeArg {
    Exhaustive,
    Randomized,
}

#[derive(Args, Serialize)]
struct AvoidArgs {
    #[arg(long)]
    r: usize,
    #[arg(long)]
    c: usize,
    #[arg(long)]
    vertices: usize,
    #[arg(long)]
    target: String,
    #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
    mode: ModeArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Randomized mode: total recolor moves.
    #[arg(long, default_value_t = 1_000_000)]
    steps: u64,
    /// Exhaustive mode: DFS nodes.
    #[arg(long)]
    budget: Option<u64>,
    /// BRC1 certificate output.
    #[arg(short = 'o')]
    output: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct RamseyArgs {
    #[arg(long)]
    r: usize,
    #[arg(long)]
    c: usize,
    #[arg(long)]
    target: String,
    #[arg(long)]
    max_vertices: usize,
    #[arg(long)]
    budget: Option<u64>,
    /// JSON result; certificates go next to it as `<stem>.N<k>.brc`.
    #[arg(short = 'o')]
    output: Option<PathBuf>,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: 1,
            message: e.to_string(),
        }
    }
}

type CliResult<T> = Result<T, Failure>;

/// Input problems exit with 2.
fn input<T>(what: &Path, r: berge_core::Result<T>) -> CliResult<T> {
    r.map_err(|e| Failure {
        code: 2,
        message: format!("{}: {e}", what.display()),
    })
}

fn target(spec: &str) -> CliResult<TargetGraph> {
    make_target(spec).map_err(|e| Failure {
        code: 2,
        message: format!("target {spec:?}: {e}"),
    })
}

#[derive(Default)]
struct Outcome {
    seed: Option<u64>,
    artifacts: Vec<PathBuf>,
}

impl Outcome {
    fn seeded(seed: u64) -> Self {
        Outcome {
            seed: Some(seed),
            ..Self::default()
        }
    }
}

fn write_text(path: &Path, text: &str, out: &mut Outcome) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| Failure {
        code: 1,
        message: format!("{}: {e}", path.display()),
    })?;
    out.artifacts.push(path.to_path_buf());
    Ok(())
}

/// Writes to `path`, or prints to stdout.
fn emit(path: Option<&Path>, text: &str, out: &mut Outcome) -> CliResult<()> {
    match path {
        Some(p) => write_text(p, text, out),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parallelism(threads: usize) -> Parallelism {
    if threads <= 1 {
        Parallelism::Sequential
    } else {
        Parallelism::Rayon
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let start = Instant::now();
    let par = parallelism(cli.threads);
    let result = with_threads(cli.threads, || run(&cli.command, par));
    match result {
        Ok(outcome) => {
            let name = subcommand_name(&cli.command);
            let manifest = json!({
                "subcommand": name,
                "parameters": &cli,
                "seed": outcome.seed,
                "artifacts": outcome.artifacts,
                "duration_secs": start.elapsed().as_secs_f64(),
            });
            let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
            let path = cli.manifest.clone().or_else(|| primary_output(&cli.command).map(manifest_path));
            match path {
                Some(p) => {
                    if let Err(e) = std::fs::write(&p, text) {
                        eprintln!("error: {}: {e}", p.display());
                        return ExitCode::from(1);
                    }
                }
                None => eprint!("{text}"),
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn manifest_path(p: &Path) -> PathBuf {
    let mut s = p.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

fn subcommand_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Construct(Construct::Affine(_)) => "construct affine",
        Command::Construct(Construct::ErdosBase(_)) => "construct erdos-base",
        Command::Construct(Construct::Layered(_)) => "construct layered",
        Command::Verify(_) => "verify",
        Command::Shadow(_) => "shadow",
        Command::Reduce(_) => "reduce",
        Command::Lift(_) => "lift",
        Command::Search(SearchCmd::Avoid(_)) => "search avoid",
        Command::Search(SearchCmd::Ramsey(_)) => "search ramsey",
    }
}

fn primary_output(cmd: &Command) -> Option<&Path> {
    match cmd {
        Command::Construct(Construct::Affine(a)) => a.output.as_deref(),
        Command::Construct(Construct::ErdosBase(a)) => a.output.as_deref(),
        Command::Construct(Construct::Layered(a)) => a.output.as_deref(),
        Command::Verify(a) => a.output.as_deref(),
        Command::Shadow(a) => a.output.as_deref(),
        Command::Reduce(a) => Some(&a.output),
        Command::Lift(a) => Some(&a.output),
        Command::Search(SearchCmd::Avoid(a)) => a.output.as_deref(),
        Command::Search(SearchCmd::Ramsey(a)) => a.output.as_deref(),
    }
}

fn run(cmd: &Command, par: Parallelism) -> CliResult<Outcome> {
    match cmd {
        Command::Construct(Construct::Affine(a)) => construct_affine(a),
        Command::Construct(Construct::ErdosBase(a)) => construct_erdos(a),
        Command::Construct(Construct::Layered(a)) => construct_layered(a),
        Command::Verify(a) => verify(a, par),
        Command::Shadow(a) => shadow(a),
        Command::Reduce(a) => reduce(a),
        Command::Lift(a) => lift(a),
        Command::Search(SearchCmd::Avoid(a)) => avoid(a, par),
        Command::Search(SearchCmd::Ramsey(a)) => ramsey(a, par),
    }
}

fn construct_affine(a: &AffineArgs) -> CliResult<Outcome> {
    let family = ParallelClassFamily::affine(a.d, a.p)?;
    let tie = match a.tie_break {
        TieBreakArg::Lowest => TieBreak::Lowest,
        TieBreakArg::Balanced => TieBreak::Balanced,
        TieBreakArg::Random => TieBreak::Random { seed: a.seed },
    };
    let h = affine_coloring(a.r, a.c, &family, tie)?;
    let mut out = Outcome::seeded(a.seed);
    emit(a.output.as_deref(), &h.to_brc1(), &mut out)?;
    if a.output.is_some() {
        println!("N={} r={} c={} hyperedges={}", h.num_vertices(), h.uniformity(), h.num_colors(), h.num_edges());
    }
    Ok(out)
}

fn construct_erdos(a: &ErdosArgs) -> CliResult<Outcome> {
    let base = erdos_base(a.m, a.n, a.beta, a.seed, a.max_attempts)?;
    let mut out = Outcome::seeded(a.seed);
    emit(a.output.as_deref(), &(base.assignment.to_json() + "\n"), &mut out)?;
    if a.output.is_some() {
        println!("attempts={}", base.attempts);
    }
    Ok(out)
}

fn construct_layered(a: &LayeredArgs) -> CliResult<Outcome> {
    let base = input(&a.base, LayeredAssignment::read(&a.base))?;
    let next = layered_step(&base, a.copies, a.beta)?;
    let n = next.certified_n();
    let report = check_layered(&next, n, a.beta);
    let mut out = Outcome::default();
    emit(a.output.as_deref(), &(next.to_json() + "\n"), &mut out)?;
    if let Some(p) = &a.brc {
        write_text(p, &assignment_coloring(&next)?.to_brc1(), &mut out)?;
    }
    let summary = format!(
        "r={} ground={} certified_n={} nesting={} witness={} clique={} size={} min_witnesses={}",
        next.uniformity(),
        next.ground_size(),
        n,
        report.nesting.len(),
        report.witness.len(),
        report.clique.len(),
        report.size.len(),
        report.min_witnesses.map_or("-".to_string(), |m| m.to_string()),
    );
    if a.output.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    if !report.passes() {
        return Err(Failure {
            code: 1,
            message: "layered assignment fails its own check".into(),
        });
    }
    Ok(out)
}

fn verify(a: &VerifyArgs, par: Parallelism) -> CliResult<Outcome> {
    let h = input(&a.coloring, ColoredHypergraph::read_brc1(&a.coloring))?;
    let g = target(&a.target)?;
    let mut out = Outcome::default();
    if let Some(path) = &a.witness {
        let w = input(path, BergeWitness::read(path))?;
        check_witness(&h, &g, &w)?;
        println!("witness: VALID (color {})", w.color);
        return Ok(out);
    }
    let colors: Vec<Color> = if a.color == "all" {
        (1..=h.num_colors() as Color).collect()
    } else {
        match a.color.parse::<Color>() {
            Ok(i) if i >= 1 && usize::from(i) <= h.num_colors() => vec![i],
            _ => {
                return Err(Failure {
                    code: 2,
                    message: format!("--color must be `all` or in 1..={}, got {:?}", h.num_colors(), a.color),
                })
            }
        }
    };
    let opts = DetectOptions {
        budget: a.budget.unwrap_or(u64::MAX),
        parallelism: par,
    };
    let index = PairIndex::build(&h);
    let mut first = None;
    for i in colors {
        let status: ColorStatus = search_index(&index, i, &g, opts, None).0.into();
        println!("color {i}: {status}");
        if let ColorStatus::Witness(w) = status {
            first.get_or_insert(w);
        }
    }
    if let (Some(path), Some(w)) = (&a.output, first) {
        write_text(path, &(w.to_json() + "\n"), &mut out)?;
    }
    Ok(out)
}

fn shadow(a: &ShadowArgs) -> CliResult<Outcome> {
    let h = input(&a.coloring, ColoredHypergraph::read_brc1(&a.coloring))?;
    let report = shadow_report(&h);
    let mut out = Outcome::default();
    let text = serde_json::to_string(&report).map_err(Error::from)? + "\n";
    emit(a.output.as_deref(), &text, &mut out)?;
    if a.output.is_some() {
        for i in 0..report.c {
            println!(
                "color {}: light_pairs={} light_vertices={}",
                i + 1,
                report.light_pairs[i].len(),
                report.light_vertices[i].len()
            );
        }
    }
    Ok(out)
}

fn reduce(a: &ReduceArgs) -> CliResult<Outcome> {
    let h = input(&a.coloring, ColoredHypergraph::read_brc1(&a.coloring))?;
    let trace_path = a.trace.clone().unwrap_or_else(|| {
        let mut s = a.output.as_os_str().to_owned();
        s.push(".trace.json");
        PathBuf::from(s)
    });
    let mut out = Outcome::default();
    match reduce_coloring(&h, a.drop_color) {
        Ok((reduced, trace)) => {
            write_text(&a.output, &reduced.to_brc1(), &mut out)?;
            write_text(&trace_path, &(trace.to_json() + "\n"), &mut out)?;
            println!(
                "kept={} leftover={} exhausted_early={}",
                trace.kept.len(),
                trace.leftover.len(),
                trace.exhausted_early()
            );
            Ok(out)
        }
        Err(Error::DegenerateReduction { kept, needed, trace }) => {
            write_text(&trace_path, &(trace.to_json() + "\n"), &mut out)?;
            Err(Failure {
                code: 1,
                message: format!(
                    "only {kept} vertices kept, need {needed}; trace written to {}",
                    trace_path.display()
                ),
            })
        }
        Err(e) => Err(e.into()),
    }
}

fn lift(a: &LiftArgs) -> CliResult<Outcome> {
    let trace = input(&a.trace, ReductionTrace::read(&a.trace))?;
    let h = input(&a.coloring, ColoredHypergraph::read_brc1(&a.coloring))?;
    let w = input(&a.witness, BergeWitness::read(&a.witness))?;
    let g = target(&a.target)?;
    let lifted = lift_witness(&trace, &h, &g, &w)?;
    let mut out = Outcome::default();
    write_text(&a.output, &(lifted.to_json() + "\n"), &mut out)?;
    Ok(out)
}

fn search_config(budget: Option<u64>, par: Parallelism) -> SearchConfig {
    let mut config = SearchConfig {
        parallelism: par,
        ..SearchConfig::default()
    };
    if let Some(b) = budget {
        config.budget = b;
    }
    config
}

fn avoid(a: &AvoidArgs, par: Parallelism) -> CliResult<Outcome> {
    let g = target(&a.target)?;
    let mode = match a.mode {
        ModeArg::Exhaustive => SearchMode::Exhaustive,
        ModeArg::Randomized => SearchMode::Randomized {
            seed: a.seed,
            steps: a.steps,
        },
    };
    let result = find_avoiding_coloring(a.r, a.c, a.vertices, &g, mode, &search_config(a.budget, par))?;
    let mut out = match a.mode {
        ModeArg::Randomized => Outcome::seeded(a.seed),
        ModeArg::Exhaustive => Outcome::default(),
    };
    match result {
        Search::Found(h) => {
            println!("status: FOUND");
            emit(a.output.as_deref(), &h.to_brc1(), &mut out)?;
        }
        Search::Exhausted => println!("status: EXHAUSTED"),
        Search::OutOfBudget => println!("status: OUT_OF_BUDGET"),
    }
    Ok(out)
}

fn ramsey(a: &RamseyArgs, par: Parallelism) -> CliResult<Outcome> {
    let g = target(&a.target)?;
    let result = ramsey_exact(a.r, a.c, &g, a.max_vertices, &search_config(a.budget, par))?;
    let mut out = Outcome::default();
    let cert_path = |n: usize| {
        a.output.as_ref().map(|p| {
            let stem = p.with_extension("");
            let mut s = stem.into_os_string();
            s.push(format!(".N{n}.brc"));
            PathBuf::from(s)
        })
    };
    for (&n, status) in &result.per_n {
        if let (NStatus::Avoidance(h), Some(p)) = (status, cert_path(n)) {
            write_text(&p, &h.to_brc1(), &mut out)?;
        }
    }
    let text = result.to_json(|n| {
        cert_path(n).map(|p| p.file_name().map_or_else(String::new, |f| f.to_string_lossy().into_owned()))
    }) + "\n";
    emit(a.output.as_deref(), &text, &mut out)?;
    for (n, status) in &result.per_n {
        eprintln!("N={n}: {status}");
    }
    match result.value {
        Some(v) => eprintln!("value: {v}"),
        None => eprintln!("value: undetermined (lower bound {})", result.lower_bound()),
    }
    Ok(out)
}
