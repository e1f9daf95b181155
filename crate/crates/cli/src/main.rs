//! `abund`: command-line front end for abundance-core.
//!
//! Data goes to stdout as JSON, diagnostics to stderr. Exit codes: 0 the
//! property holds or the object was produced, 1 the property fails, 2 usage
//! or input error, 3 a resource bound was hit or the answer is inconclusive.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use abundance_core::abundance::{
    bijective_seed, build_hm, peel_order_search, splittable_decompose, AbundanceError, Certificate,
};
use abundance_core::constructions::{behrend_set, fig5_graph, find_distinct_solution, g_n, rs_graph, ConstructionError};
use abundance_core::cycle_equations::{
    check_all_colourings, classify_cycle, CheckOptions, ColouringCheck, ColouringReport, CombinationBounds, CycleError,
    CycleEquationSystem, Verdict,
};
use abundance_core::equations::{brute_avoidance, AvoidMode, Equation, EquationError};
use abundance_core::graphs::{ColourOrdering, ColouredGraph, Graph, GraphError, LineHom, DEFAULT_MAX_CYCLES, DEFAULT_MAX_CYCLE_LEN};
use abundance_core::removal::{
    count_c5, count_p4_aligned, dense_core_c5, greedy_packing, uniformize, verify_uniform_far, FCopyPacking,
    RemovalError, UniformFarWitness, DEFAULT_RETRIES,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "abund", version, about = "Translation-invariant equations, cycle-equations and abundance certificates")]
struct Cli {
    /// Human-readable output instead of compact JSON.
    #[arg(long, global = true)]
    pretty: bool,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for parallel steps (output does not depend on it).
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    jobs: Option<u32>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Single equations.
    #[command(subcommand)]
    Eq(EqCommand),
    /// Coloured graphs.
    #[command(subcommand)]
    Graph(GraphCommand),
    /// Cycle-equation systems.
    #[command(subcommand)]
    Cyceq(CyceqCommand),
    /// Abundance certificates and searches.
    #[command(subcommand)]
    Abundance(AbundanceCommand),
    /// Explicit constructions.
    #[command(subcommand)]
    Construct(ConstructCommand),
    /// Solution finders.
    #[command(subcommand)]
    Solve(SolveCommand),
    /// Packings, uniformization and the dense-core refinement.
    #[command(subcommand)]
    Removal(RemovalCommand),
}

#[derive(Subcommand, Debug)]
enum EqCommand {
    /// Print the genus.
    Genus {
        #[arg(allow_hyphen_values = true)]
        coeffs: String,
    },
    /// Genus, partition, convexity and symmetry as JSON.
    Classify {
        #[arg(allow_hyphen_values = true)]
        coeffs: String,
    },
    /// Largest subset of [N] avoiding the equation, by exhaustive search.
    Avoid {
        #[arg(allow_hyphen_values = true)]
        coeffs: String,
        #[arg(long = "N")]
        n: i64,
        #[arg(long, value_enum, default_value_t = ModeArg::Nontrivial)]
        mode: ModeArg,
    },
    /// Classify an assignment of values to the variables.
    Solution {
        #[arg(allow_hyphen_values = true)]
        coeffs: String,
        #[arg(long, allow_hyphen_values = true)]
        values: String,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    /// No nontrivial solution.
    Nontrivial,
    /// No solution with all variables distinct.
    Distinct,
}

#[derive(Subcommand, Debug)]
enum GraphCommand {
    /// Map a K3-coloured graph to the coloured line, or report a wrapped cycle.
    LineHom {
        #[arg(long)]
        graph: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum CyceqCommand {
    /// Check every proper 3-colouring of a graph.
    CheckAll(CheckAllArgs),
    /// Classify a coloured cycle.
    Classify {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Cycle-equations of a coloured graph.
    System {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value = "identity")]
        ordering: String,
        /// Fundamental cycles only.
        #[arg(long)]
        basis: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_CYCLES)]
        max_cycles: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_CYCLE_LEN)]
        max_len: usize,
    },
}

#[derive(Args, Debug)]
struct CheckAllArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, value_enum, default_value_t = CheckArg::Genus1)]
    check: CheckArg,
    /// Most cycles combined.
    #[arg(long = "t", default_value_t = 2)]
    max_cycles_combined: usize,
    /// Largest multiplier magnitude.
    #[arg(long = "L", default_value_t = 2)]
    max_multiplier: i64,
    /// `identity`, `all`, or orderings such as `1,2,3;2,1,3`. Defaults to
    /// `identity` for genus1 and `all` for convex.
    #[arg(long)]
    orderings: Option<String>,
    #[arg(long, default_value_t = DEFAULT_MAX_CYCLES)]
    max_cycles: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_CYCLE_LEN)]
    max_len: usize,
    /// Check every colouring instead of one per permutation class.
    #[arg(long)]
    no_symmetry: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CheckArg {
    Genus1,
    Convex,
    Symmetric,
}

#[derive(Subcommand, Debug)]
enum AbundanceCommand {
    /// Replay a certificate.
    Verify {
        #[arg(long)]
        cert: PathBuf,
    },
    /// Search for a splittable derivation.
    Split {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Search for a peel order down to an atom.
    Peel {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Build the m-th doubling of the bijectively coloured seed.
    Hm {
        #[arg(long, default_value = "k3")]
        pattern: String,
        #[arg(long)]
        m: usize,
    },
}

#[derive(Subcommand, Debug)]
enum ConstructCommand {
    /// Progression-free subset of [n].
    Behrend {
        #[arg(long)]
        n: u64,
    },
    /// Difference graph of a set.
    Rs {
        #[arg(long, default_value = "k3")]
        pattern: String,
        #[arg(long = "N")]
        n: usize,
        #[arg(long)]
        set: PathBuf,
        #[arg(long, default_value = "identity")]
        ordering: String,
    },
    /// The 15-vertex triangle-free subgraph of the subset graph.
    Fig5,
    /// The subset graph on nonempty proper subsets of [n].
    Gn {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Subcommand, Debug)]
enum SolveCommand {
    /// All-distinct solution in a dense set.
    Distinct {
        #[arg(long, allow_hyphen_values = true)]
        eq: String,
        #[arg(long)]
        set: PathBuf,
        #[arg(long = "N")]
        n: i64,
    },
}

#[derive(Subcommand, Debug)]
enum RemovalCommand {
    /// Greedy edge-disjoint packing of pattern copies.
    Pack {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value = "k3")]
        pattern: String,
    },
    /// Pass to a uniformly far induced subgraph.
    Uniformize {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value = "k3")]
        pattern: String,
        #[arg(long)]
        eps: f64,
        /// Packing to start from; the greedy packing by default.
        #[arg(long)]
        packing: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_RETRIES)]
        retries: u32,
    },
    /// Check a uniform-farness witness.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value = "k3")]
        pattern: String,
        #[arg(long)]
        witness: PathBuf,
    },
    /// Exact number of 5-cycles.
    CountC5 {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Exact number of aligned paths A-B-C-A.
    CountP4 {
        #[arg(long)]
        graph: PathBuf,
        /// JSON array with one part label per vertex.
        #[arg(long)]
        parts: PathBuf,
    },
    /// Two-pass refinement towards a dense core and its 5-cycle yield.
    DenseCore {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        #[arg(long, default_value_t = DEFAULT_RETRIES)]
        retries: u32,
        #[arg(long)]
        parts: Option<PathBuf>,
    },
}

/// A run ending in a nonzero exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }

    fn bound(message: impl Into<String>) -> Self {
        Failure { code: 3, message: message.into() }
    }
}

impl From<EquationError> for Failure {
    fn from(e: EquationError) -> Self {
        match e {
            EquationError::ScaleExceeded(_) | EquationError::Overflow => Failure::bound(e.to_string()),
            _ => Failure::usage(e.to_string()),
        }
    }
}

impl From<GraphError> for Failure {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::Truncated => Failure::bound(e.to_string()),
            _ => Failure::usage(e.to_string()),
        }
    }
}

impl From<CycleError> for Failure {
    fn from(e: CycleError) -> Self {
        match e {
            CycleError::Graph(g) => g.into(),
            CycleError::Equation(q) => q.into(),
            CycleError::ScaleExceeded(_) => Failure::bound(e.to_string()),
            CycleError::OrderingLength { .. } => Failure::usage(e.to_string()),
        }
    }
}

impl From<AbundanceError> for Failure {
    fn from(e: AbundanceError) -> Self {
        match e {
            AbundanceError::Graph(g) => g.into(),
            AbundanceError::ScaleExceeded(_) | AbundanceError::BudgetExhausted(_) => Failure::bound(e.to_string()),
            _ => Failure::usage(e.to_string()),
        }
    }
}

impl From<ConstructionError> for Failure {
    fn from(e: ConstructionError) -> Self {
        match e {
            ConstructionError::Graph(g) => g.into(),
            ConstructionError::Equation(q) => q.into(),
            ConstructionError::ScaleExceeded(_) | ConstructionError::Abstain(_) => Failure::bound(e.to_string()),
            _ => Failure::usage(e.to_string()),
        }
    }
}

impl From<RemovalError> for Failure {
    fn from(e: RemovalError) -> Self {
        let code = match e {
            RemovalError::Graph(g) => return g.into(),
            RemovalError::PackingTooSmall { .. } | RemovalError::NoTriangles | RemovalError::FewAligned { .. } => 1,
            RemovalError::RetriesExhausted(_) | RemovalError::ScaleExceeded { .. } => 3,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

type Run = Result<u8, Failure>;

struct Out {
    pretty: bool,
}

impl Out {
    fn json<T: Serialize>(&self, value: &T) {
        let text = if self.pretty {
            serde_json::to_string_pretty(value)
        } else {
            serde_json::to_string(value)
        };
        let mut stdout = std::io::stdout().lock();
        if writeln!(stdout, "{}", text.expect("serializable output")).is_err() {
            // Closed pipe downstream; nothing left to report to.
            std::process::exit(0);
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

/// A plain graph, or the host of a coloured graph.
fn read_graph(path: &Path) -> Result<Graph, Failure> {
    let value: serde_json::Value = read_json(path)?;
    let parsed = if value.get("host").is_some() {
        serde_json::from_value::<ColouredGraph>(value).map(|g| g.host().clone())
    } else {
        serde_json::from_value::<Graph>(value)
    };
    parsed.map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn named_pattern(name: &str) -> Result<Graph, Failure> {
    match name {
        "k2" => Ok(Graph::complete(2)),
        "k3" => Ok(Graph::complete(3)),
        "k4" => Ok(Graph::complete(4)),
        "c5" => Ok(Graph::cycle(5)),
        path => read_graph(Path::new(path)),
    }
}

fn parse_ordering(text: &str, k: usize) -> Result<ColourOrdering, Failure> {
    if text == "identity" {
        return Ok(ColourOrdering::identity(k));
    }
    let values = text
        .split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|e| Failure::usage(format!("ordering {text:?}: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ColourOrdering::new(values)?)
}

fn parse_orderings(text: &str) -> Result<Vec<ColourOrdering>, Failure> {
    match text {
        "all" => Ok(ColourOrdering::all(3)),
        _ => text.split(';').map(|t| parse_ordering(t, 3)).collect(),
    }
}

fn parse_values(text: &str) -> Result<Vec<i64>, Failure> {
    text.split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|e| Failure::usage(format!("{t:?}: {e}"))))
        .collect()
}

#[derive(Serialize)]
struct EquationSummary<'a> {
    coeffs: &'a [i64],
    genus: usize,
    partition: Vec<Vec<usize>>,
    genus_one: bool,
    convex: bool,
    symmetric: bool,
}

fn run_eq(cmd: EqCommand, out: &Out) -> Run {
    match cmd {
        EqCommand::Genus { coeffs } => {
            let eq: Equation = coeffs.parse()?;
            println!("{}", eq.genus()?.0);
        }
        EqCommand::Classify { coeffs } => {
            let eq: Equation = coeffs.parse()?;
            let (genus, partition) = eq.genus()?;
            out.json(&EquationSummary {
                coeffs: eq.coeffs(),
                genus,
                partition: partition.parts,
                genus_one: eq.is_genus_one(),
                convex: eq.is_convex(),
                symmetric: eq.is_symmetric(),
            });
        }
        EqCommand::Avoid { coeffs, n, mode } => {
            let eq: Equation = coeffs.parse()?;
            let mode = match mode {
                ModeArg::Nontrivial => AvoidMode::NontrivialFree,
                ModeArg::Distinct => AvoidMode::DistinctFree,
            };
            out.json(&brute_avoidance(&eq, n, mode)?);
        }
        EqCommand::Solution { coeffs, values } => {
            let eq: Equation = coeffs.parse()?;
            out.json(&eq.classify_solution(&parse_values(&values)?)?);
        }
    }
    Ok(0)
}

fn run_graph(cmd: GraphCommand, out: &Out) -> Run {
    match cmd {
        GraphCommand::LineHom { graph } => {
            let g: ColouredGraph = read_json(&graph)?;
            let hom = g.hom_to_coloured_line()?;
            out.json(&hom);
            Ok(match hom {
                LineHom::Levels(_) => 0,
                LineHom::Wrapped { .. } => 1,
            })
        }
    }
}

fn print_report_table(report: &ColouringReport) {
    println!("{:>5}  {:<10}  {:<12}  colouring", "class", "verdict", "members");
    for r in &report.records {
        let holding = r.members.iter().filter(|m| m.verdict == Verdict::Holds).count();
        let colouring: Vec<String> = r.colouring.iter().map(|c| c.to_string()).collect();
        println!(
            "{:>5}  {:<10}  {:<12}  {}",
            r.class,
            format!("{:?}", r.verdict).to_lowercase(),
            format!("{holding}/{} hold", r.members.len()),
            colouring.join("")
        );
    }
    let s = &report.summary;
    println!(
        "{} classes, {} colourings, {} cycles{}: {} hold, {} fail, {} inconclusive",
        s.classes,
        s.colourings,
        s.cycles,
        if s.cycles_truncated { " (truncated)" } else { "" },
        s.holds,
        s.fails,
        s.inconclusive
    );
}

fn run_cyceq(cmd: CyceqCommand, out: &Out, jobs: Option<usize>) -> Run {
    match cmd {
        CyceqCommand::CheckAll(a) => {
            let g = read_graph(&a.graph)?;
            let default = match a.check {
                CheckArg::Convex => "all",
                _ => "identity",
            };
            let orderings = parse_orderings(a.orderings.as_deref().unwrap_or(default))?;
            let check = match a.check {
                CheckArg::Genus1 => ColouringCheck::GenusOne {
                    bounds: CombinationBounds {
                        max_cycles: a.max_cycles_combined,
                        max_multiplier: a.max_multiplier,
                    },
                    orderings,
                },
                CheckArg::Convex => ColouringCheck::Convex { orderings },
                CheckArg::Symmetric => ColouringCheck::Symmetric,
            };
            if a.max_cycles == 0 || a.max_len == 0 || a.max_cycles_combined == 0 || a.max_multiplier <= 0 {
                return Err(Failure::usage("caps must be positive"));
            }
            let opts = CheckOptions {
                symmetry_reduction: !a.no_symmetry,
                max_cycles: a.max_cycles,
                max_cycle_len: a.max_len,
                jobs,
            };
            let report = check_all_colourings(&g, &check, opts)?;
            if out.pretty {
                print_report_table(&report);
            } else {
                for r in &report.records {
                    out.json(r);
                }
                out.json(&serde_json::json!({ "summary": report.summary }));
            }
            // The report itself is the product; verdicts are in the data.
            Ok(if report.summary.inconclusive > 0 { 3 } else { 0 })
        }
        CyceqCommand::Classify { graph } => {
            let g: ColouredGraph = read_json(&graph)?;
            out.json(&classify_cycle(&g)?);
            Ok(0)
        }
        CyceqCommand::System {
            graph,
            ordering,
            basis,
            max_cycles,
            max_len,
        } => {
            let g: ColouredGraph = read_json(&graph)?;
            let c = parse_ordering(&ordering, g.pattern().n())?;
            let system = if basis {
                CycleEquationSystem::from_basis(&g, &c)?
            } else {
                CycleEquationSystem::from_all_cycles(&g, &c, max_cycles, max_len)?
            };
            out.json(&system);
            Ok(if system.truncated { 3 } else { 0 })
        }
    }
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    graph: Option<ColouredGraph>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<&'a abundance_core::abundance::CertificateError>,
}

fn run_abundance(cmd: AbundanceCommand, out: &Out) -> Run {
    match cmd {
        AbundanceCommand::Verify { cert } => {
            let cert: Certificate = read_json(&cert)?;
            match cert.verify() {
                Ok(g) => {
                    out.json(&VerifyReport {
                        valid: true,
                        graph: Some(g),
                        error: None,
                    });
                    Ok(0)
                }
                Err(e) => {
                    eprintln!("{e}");
                    out.json(&VerifyReport {
                        valid: false,
                        graph: None,
                        error: Some(&e),
                    });
                    Ok(1)
                }
            }
        }
        AbundanceCommand::Split { graph } => {
            let g: ColouredGraph = read_json(&graph)?;
            let found = splittable_decompose(&g)?;
            out.json(&found);
            Ok(if found.is_some() { 0 } else { 1 })
        }
        AbundanceCommand::Peel { graph } => {
            let g: ColouredGraph = read_json(&graph)?;
            let found = peel_order_search(&g);
            out.json(&found);
            Ok(if found.is_some() { 0 } else { 1 })
        }
        AbundanceCommand::Hm { pattern, m } => {
            let pattern = named_pattern(&pattern)?;
            out.json(&build_hm(&bijective_seed(&pattern), m)?);
            Ok(0)
        }
    }
}

fn run_construct(cmd: ConstructCommand, out: &Out) -> Run {
    match cmd {
        ConstructCommand::Behrend { n } => out.json(&behrend_set(n)?),
        ConstructCommand::Rs {
            pattern,
            n,
            set,
            ordering,
        } => {
            let pattern = named_pattern(&pattern)?;
            let set: Vec<i64> = read_json(&set)?;
            let c = parse_ordering(&ordering, pattern.n())?;
            out.json(&rs_graph(&pattern, &c, n, &set)?);
        }
        ConstructCommand::Fig5 => out.json(&fig5_graph()),
        ConstructCommand::Gn { n } => out.json(&g_n(n)?),
    }
    Ok(0)
}

fn run_solve(cmd: SolveCommand, out: &Out) -> Run {
    match cmd {
        SolveCommand::Distinct { eq, set, n } => {
            let eq: Equation = eq.parse()?;
            let set: Vec<i64> = read_json(&set)?;
            match find_distinct_solution(&eq, &set, n) {
                Ok(sol) => {
                    out.json(&sol);
                    Ok(0)
                }
                Err(ConstructionError::Abstain(report)) => {
                    eprintln!("no distinct solution produced; the degree guarantee does not hold");
                    out.json(&report);
                    Ok(3)
                }
                Err(e) => Err(e.into()),
            }
        }
    }
}

fn run_removal(cmd: RemovalCommand, out: &Out, seed: u64) -> Run {
    match cmd {
        RemovalCommand::Pack { graph, pattern } => {
            let g = read_graph(&graph)?;
            out.json(&greedy_packing(&g, &named_pattern(&pattern)?, None)?);
            Ok(0)
        }
        RemovalCommand::Uniformize {
            graph,
            pattern,
            eps,
            packing,
            retries,
        } => {
            let g = read_graph(&graph)?;
            let pattern = named_pattern(&pattern)?;
            let packing = match packing {
                Some(p) => read_json::<FCopyPacking>(&p)?,
                None => greedy_packing(&g, &pattern, None)?,
            };
            if !(eps > 0.0 && eps <= 1.0) {
                return Err(Failure::usage("eps must lie in (0, 1]"));
            }
            out.json(&uniformize(&g, &pattern, &packing, eps, seed, retries)?);
            Ok(0)
        }
        RemovalCommand::Verify { graph, pattern, witness } => {
            let g = read_graph(&graph)?;
            let w: UniformFarWitness = read_json(&witness)?;
            match verify_uniform_far(&g, &named_pattern(&pattern)?, &w) {
                Ok(()) => {
                    out.json(&serde_json::json!({ "valid": true }));
                    Ok(0)
                }
                Err(e) => {
                    eprintln!("{e}");
                    out.json(&serde_json::json!({ "valid": false, "failure": e }));
                    Ok(1)
                }
            }
        }
        RemovalCommand::CountC5 { graph } => {
            let g = read_graph(&graph)?;
            out.json(&serde_json::json!({ "c5": count_c5(&g)?.to_string() }));
            Ok(0)
        }
        RemovalCommand::CountP4 { graph, parts } => {
            let g = read_graph(&graph)?;
            let parts: Vec<usize> = read_json(&parts)?;
            out.json(&serde_json::json!({ "p4": count_p4_aligned(&g, &parts)?.to_string() }));
            Ok(0)
        }
        RemovalCommand::DenseCore {
            graph,
            delta,
            retries,
            parts,
        } => {
            if !(delta > 0.0 && delta < 1.0) {
                return Err(Failure::usage("delta must lie in (0, 1)"));
            }
            let g = read_graph(&graph)?;
            let parts: Option<Vec<usize>> = parts.map(|p| read_json(&p)).transpose()?;
            out.json(&dense_core_c5(&g, delta, seed, retries, parts.as_deref())?);
            Ok(0)
        }
    }
}

fn run(cli: Cli) -> Run {
    let jobs = cli.jobs.map(|k| k as usize);
    if let Some(k) = jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .map_err(|e| Failure::usage(e.to_string()))?;
    }
    let out = Out { pretty: cli.pretty };
    match cli.command {
        Command::Eq(c) => run_eq(c, &out),
        Command::Graph(c) => run_graph(c, &out),
        Command::Cyceq(c) => run_cyceq(c, &out, jobs),
        Command::Abundance(c) => run_abundance(c, &out),
        Command::Construct(c) => run_construct(c, &out),
        Command::Solve(c) => run_solve(c, &out),
        Command::Removal(c) => run_removal(c, &out, cli.seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
