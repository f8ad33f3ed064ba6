//! Command-line front end: loads JSON specs, runs the requested analysis,
//! and prints a machine-readable JSON report to standard output with a short
//! human summary on standard error.
//!
//! Exit codes: 0 success, 1 I/O or spec parse error, 2 validation failure,
//! 3 a primary result left unknown or inconclusive at the given bounds.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use kgraph::align::mce;
use kgraph::boundary::{delta_vanishes, satiate, DeltaVerdict, EeFamily};
use kgraph::ideals::{list_gauge_invariant_ideals, Exactness};
use kgraph::path::parse_path;
use kgraph::pathrep::TruncatedRep;
use kgraph::periodicity::{is_aperiodic, is_cofinal, per_group};
use kgraph::simplicity::{
    check_vm_commutation, decide, expected_vm_phase, measured_vm_phase, Verdict,
};
use kgraph::specio;
use kgraph::twist::CategoricalCocycle;
use kgraph::{Degree, KGraph, Path};

/// Deviation bound for the unitary commutation check, matching the bound
/// used by the representation-level tests.
const VM_DEVIATION_TOL: f64 = 1e-9;
const VM_PHASE_TOL: f64 = 1e-10;

#[derive(Parser)]
#[command(
    name = "kgraph-ck",
    version,
    about = "Reports on twisted Cuntz-Krieger data of finitely presented k-graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format for the report on standard output.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
}

#[derive(Args)]
struct GraphArg {
    /// Graph presentation file (JSON).
    #[arg(long)]
    graph: PathBuf,
}

#[derive(Args)]
struct CocycleArg {
    /// Cocycle file (JSON); omitted means the trivial cocycle.
    #[arg(long)]
    cocycle: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a presentation file defines a k-graph.
    Validate {
        #[command(flatten)]
        io: GraphArg,
    },
    /// List the minimal common extensions of two paths.
    Mce {
        /// First path literal: `@vertex` or dot-joined edge ids like `a.b`.
        mu: String,
        /// Second path literal.
        nu: String,
        #[command(flatten)]
        io: GraphArg,
    },
    /// Close a family of path sets under the satiation rules within a bound.
    Satiate {
        #[command(flatten)]
        io: GraphArg,
        /// Family file (JSON); omitted means the empty family.
        #[arg(long)]
        ee: Option<PathBuf>,
        /// Degree bound: one integer, or one per color.
        #[arg(long, default_value = "2")]
        depth: String,
    },
    /// Enumerate the gauge-invariant ideal pairs.
    Ideals {
        #[command(flatten)]
        io: GraphArg,
        /// Family file (JSON); omitted means the color-slice generators.
        #[arg(long)]
        ee: Option<PathBuf>,
        /// Degree bound for the family component.
        #[arg(long, default_value = "2")]
        depth: String,
    },
    /// Periodicity group, aperiodicity, and cofinality.
    Per {
        #[command(flatten)]
        io: GraphArg,
        /// Degree bound for the pair scan, per color.
        #[arg(long, default_value_t = 4)]
        depth: u32,
    },
    /// Simplicity verdict for the twisted algebra.
    Simple {
        #[command(flatten)]
        io: GraphArg,
        #[command(flatten)]
        cocycle: CocycleArg,
        #[arg(long, default_value_t = 4)]
        depth: u32,
    },
    /// Check the Toeplitz-Cuntz-Krieger relations in the truncated
    /// representation.
    RepCheck {
        #[command(flatten)]
        io: GraphArg,
        #[command(flatten)]
        cocycle: CocycleArg,
        /// Truncation cutoff: one integer, or one per color.
        #[arg(long, default_value = "3")]
        cutoff: String,
        /// Compression margin: one integer, or one per color.
        #[arg(long, default_value = "1")]
        margin: String,
    },
    /// Check the commutation phase of the periodicity unitaries.
    VmCheck {
        #[command(flatten)]
        io: GraphArg,
        #[command(flatten)]
        cocycle: CocycleArg,
        /// Degree bound for the periodicity scan.
        #[arg(long, default_value_t = 4)]
        depth: u32,
        #[arg(long, default_value = "6")]
        cutoff: String,
        #[arg(long, default_value = "2")]
        margin: String,
        /// Group element, comma separated; default: the first basis row of
        /// the computed periodicity group.
        #[arg(long, allow_hyphen_values = true)]
        m: Option<String>,
        /// Second group element; default: the second basis row, or -m.
        #[arg(long, allow_hyphen_values = true)]
        mp: Option<String>,
        /// Base path literal; default: the lowest vertex supporting the
        /// periodicity group.
        #[arg(long)]
        lambda: Option<String>,
    },
    /// Decide whether the gap projection of a path set vanishes in the
    /// quotient presented by the family.
    Delta {
        /// Comma-separated path literals sharing a range vertex.
        f: String,
        #[command(flatten)]
        io: GraphArg,
        /// Family file (JSON); omitted means the empty family.
        #[arg(long)]
        ee: Option<PathBuf>,
        /// Degree bound for the closure and the certificate search. The
        /// closure enumerates subsets of the bounded universe, so raising
        /// this gets expensive quickly on busy graphs.
        #[arg(long, default_value = "2")]
        depth: String,
    },
}

fn main() -> ExitCode {
    // Usage errors land on exit 1 with the other input errors; 2 stays
    // reserved for presentation-validation failures.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = u8::from(e.use_stderr());
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Ok(text) = std::env::var("KGRAPH_CK_THREADS") {
        if let Ok(n) = text.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        }
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    let Format::Json = cli.format;
    match cli.command {
        Command::Validate { io } => cmd_validate(&io),
        Command::Mce { mu, nu, io } => cmd_mce(&io, &mu, &nu),
        Command::Satiate { io, ee, depth } => cmd_satiate(&io, ee.as_deref(), &depth),
        Command::Ideals { io, ee, depth } => cmd_ideals(&io, ee.as_deref(), &depth),
        Command::Per { io, depth } => cmd_per(&io, depth),
        Command::Simple { io, cocycle, depth } => cmd_simple(&io, &cocycle, depth),
        Command::RepCheck { io, cocycle, cutoff, margin } => {
            cmd_rep_check(&io, &cocycle, &cutoff, &margin, cli.seed)
        }
        Command::VmCheck { io, cocycle, depth, cutoff, margin, m, mp, lambda } => cmd_vm_check(
            &io,
            &cocycle,
            depth,
            &cutoff,
            &margin,
            m.as_deref(),
            mp.as_deref(),
            lambda.as_deref(),
            cli.seed,
        ),
        Command::Delta { f, io, ee, depth } => cmd_delta(&io, &f, ee.as_deref(), &depth),
    }
}

fn load_graph(path: &std::path::Path) -> Result<KGraph> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    specio::read_graph(&text).with_context(|| format!("in {}", path.display()))
}

fn load_cocycle(graph: &KGraph, arg: &CocycleArg) -> Result<CategoricalCocycle> {
    match &arg.cocycle {
        None => Ok(CategoricalCocycle::trivial(graph.rank())),
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            specio::read_cocycle(graph, &text)
                .with_context(|| format!("in {}", path.display()))
        }
    }
}

fn load_ee(graph: &KGraph, path: Option<&std::path::Path>) -> Result<EeFamily> {
    match path {
        None => Ok(EeFamily::empty()),
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            specio::read_ee(graph, &text).with_context(|| format!("in {}", path.display()))
        }
    }
}

/// Commands that compute on a presentation refuse to run on one that does
/// not define a k-graph; they print the validation report and exit 2, the
/// same contract as `validate` itself.
fn reject_invalid(graph: &KGraph) -> Result<Option<u8>> {
    let report = graph.validate();
    if report.is_valid() {
        return Ok(None);
    }
    let json = specio::validation_json(&report);
    emit(&json)?;
    summarize_invalid(&json);
    Ok(Some(2))
}

fn summarize_invalid(json: &specio::ValidationJson) {
    for check in json.checks.iter().filter(|c| !c.passed) {
        eprintln!("INVALID presentation: {}: {}", check.name, check.details);
    }
}

fn emit<T: Serialize>(report: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(report)?);
    Ok(())
}

/// `3` means uniform in every color; `3,2` gives one component per color.
fn parse_degree_flag(text: &str, rank: usize, flag: &str) -> Result<Degree> {
    let parts: Vec<u32> = text
        .split(',')
        .map(|p| p.trim().parse())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| anyhow!("--{flag} expects integers like `3` or `3,2`, got `{text}`"))?;
    match parts.len() {
        1 => Ok(Degree::uniform(rank, parts[0])),
        n if n == rank => Ok(Degree::new(parts)),
        n => bail!("--{flag} has {n} components but the graph has rank {rank}"),
    }
}

fn parse_group_element(text: &str, rank: usize, flag: &str) -> Result<Vec<i64>> {
    let parts: Vec<i64> = text
        .split(',')
        .map(|p| p.trim().parse())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| anyhow!("--{flag} expects integers like `1,-1`, got `{text}`"))?;
    if parts.len() != rank {
        bail!("--{flag} has {} components but the graph has rank {rank}", parts.len());
    }
    Ok(parts)
}

fn require_no_sources(graph: &KGraph) -> Result<()> {
    if !graph.has_no_sources() {
        bail!("this command needs a graph with no sources (every vertex receiving every color)");
    }
    Ok(())
}

fn cmd_validate(io: &GraphArg) -> Result<u8> {
    let graph = load_graph(&io.graph)?;
    let report = graph.validate();
    let json = specio::validation_json(&report);
    emit(&json)?;
    if json.valid {
        eprintln!(
            "valid rank-{} presentation: {} vertices, {} edges, no sources: {}",
            json.rank, json.vertices, json.edges, json.no_sources
        );
        Ok(0)
    } else {
        summarize_invalid(&json);
        Ok(2)
    }
}

#[derive(Serialize)]
struct MceReport {
    mu: String,
    nu: String,
    mce: Vec<String>,
}

fn cmd_mce(io: &GraphArg, mu: &str, nu: &str) -> Result<u8> {
    let graph = load_graph(&io.graph)?;
    if let Some(code) = reject_invalid(&graph)? {
        return Ok(code);
    }
    let mu = parse_path(&graph, mu)?;
    let nu = parse_path(&graph, nu)?;
    let out = mce(&graph, &mu, &nu);
    let report = MceReport {
        mu: mu.label(&graph),
        nu: nu.label(&graph),
        mce: out.iter().map(|p| p.label(&graph)).collect(),
    };
    emit(&report)?;
    eprintln!("{} minimal common extensions", report.mce.len());
    Ok(0)
}

fn cmd_satiate(io: &GraphArg, ee: Option<&std::path::Path>, depth: &str) -> Result<u8> {
    let graph = load_graph(&io.graph)?;
    if let Some(code) = reject_invalid(&graph)? {
        return Ok(code);
    }
    let ee = load_ee(&graph, ee)?;
    let depth = parse_degree_flag(depth, graph.rank(), "depth")?;
    let closure = satiate(&graph, &ee, &depth)?;
    let report = specio::satiation_report(&graph, &closure);
    let sets: usize = report.families.iter().map(|f| f.sets.len()).sum();
    emit(&report)?;
    eprintln!("closure holds {sets} sets within depth {:?}", report.depth);
    Ok(0)
}

fn cmd_ideals(io: &GraphArg, ee: Option<&std::path::Path>, depth: &str) -> Result<u8> {
    let graph = load_graph(&io.graph)?;
    if let Some(code) = reject_invalid(&graph)? {
        return Ok(code);
    }
    let ee = match ee {
        Some(path) => load_ee(&graph, Some(path))?,
        None => EeFamily::color_slices(&graph)?,
    };
    let depth = parse_degree_flag(depth, graph.rank(), "depth")?;
    let list = list_gauge_invariant_ideals(&graph, &ee, &depth)?;
    let report = specio::ideals_report(&graph, &list);
    emit(&report)?;
    eprintln!(
        "{} gauge-invariant ideals, {} listing",
        report.ideals.len(),
        list.exactness.as_str()
    );
    Ok(if list.exactness == Exactness::Exact { 0 } else { 3 })
}

fn cmd_per(io: &GraphArg, depth: u32) -> Result<u8> {
    let graph = load_graph(&io.graph)?;
    if let Some(code) = reject_invalid(&graph)? {
        return Ok(code);
    }
    require_no_sources(&graph)?;
    let pdata = per_group(&graph, depth)?;
    let aperiodicity = is_aperiodic(&graph, depth)?;
    let cofinality = is_cofinal(&graph)?;
    let report = specio::per_report(&graph, &pdata, &aperiodicity, &cofinality);
    emit(&report)?;
    eprintln!(
        "periodicity rank {} at depth {depth}, aperiodic: {}, cofinal: {}",
        report.per_basis.len(),
        report.aperiodic,
        report.cofinal
    );
    Ok(if report.exact && report.aperiodic != "unknown" { 0 } else { 3 })
}

fn cmd_simple(io: &GraphArg, cocycle: &CocycleArg, depth: u32) -> Result<u8> {
    let graph = load_graph(&io.graph)?;
    if let Some(code) = reject_invalid(&graph)? {
        return Ok(code);
    }
    let c = load_cocycle(&graph, cocycle)?;
    let verdict = decide(&graph, &c, depth)?;
    let report = specio::verdict_report(&graph, &verdict);
    emit(&report)?;
    eprintln!("{} ({})", report.verdict, report.grounds);
    Ok(if verdict.verdict == Verdict::Unknown { 3 } else { 0 })
}

#[derive(Serialize)]
struct RepCheckReport {
    cutoff: Vec<u32>,
    margin: Vec<u32>,
    dim: usize,
    seed: u64,
    unit_deviation: f64,
    product_deviation: f64,
    isometry_deviation: f64,
    alignment_deviation: f64,
    products_checked: usize,
    isometries_checked: usize,
    alignments_checked: usize,
    max_deviation: f64,
}

fn cmd_rep_check(
    io: &GraphArg,
    cocycle: &CocycleArg,
    cutoff: &str,
    margin: &str,
    seed: u64,
) -> Result<u8> {
    let graph = load_graph(&io.graph)?;
    if let Some(code) = reject_invalid(&graph)? {
        return Ok(code);
    }
    let c = load_cocycle(&graph, cocycle)?;
    let cutoff = parse_degree_flag(cutoff, graph.rank(), "cutoff")?;
    let margin = parse_degree_flag(margin, graph.rank(), "margin")?;
    let rep = TruncatedRep::new(&graph, &c, cutoff);
    let tck = rep.check_tck(&margin)?;
    let report = RepCheckReport {
        cutoff: tck.cutoff.coords().to_vec(),
        margin: tck.margin.coords().to_vec(),
        dim: rep.dim(),
        seed,
        unit_deviation: tck.unit_deviation,
        product_deviation: tck.product_deviation,
        isometry_deviation: tck.isometry_deviation,
        alignment_deviation: tck.alignment_deviation,
        products_checked: tck.products_checked,
        isometries_checked: tck.isometries_checked,
        alignments_checked: tck.alignments_checked,
        max_deviation: tck.max_deviation(),
    };
    emit(&report)?;
    eprintln!(
        "max relation deviation {:.3e} over {} products on a dim-{} space",
        report.max_deviation, report.products_checked, report.dim
    );
    Ok(0)
}

#[derive(Serialize)]
struct VmCheckReport {
    lambda: String,
    m: Vec<i64>,
    mp: Vec<i64>,
    depth: u32,
    cutoff: Vec<u32>,
    margin: Vec<u32>,
    seed: u64,
    per_basis: Vec<Vec<i64>>,
    per_exact: bool,
    deviation: f64,
    expected_phase: [f64; 2],
    measured_phase: [f64; 2],
    phase_error: f64,
    passed: bool,
}

#[allow(clippy::too_many_arguments)]
fn cmd_vm_check(
    io: &GraphArg,
    cocycle: &CocycleArg,
    depth: u32,
    cutoff: &str,
    margin: &str,
    m: Option<&str>,
    mp: Option<&str>,
    lambda: Option<&str>,
    seed: u64,
) -> Result<u8> {
    let graph = load_graph(&io.graph)?;
    if let Some(code) = reject_invalid(&graph)? {
        return Ok(code);
    }
    require_no_sources(&graph)?;
    let c = load_cocycle(&graph, cocycle)?;
    let cutoff = parse_degree_flag(cutoff, graph.rank(), "cutoff")?;
    let margin = parse_degree_flag(margin, graph.rank(), "margin")?;
    let pdata = per_group(&graph, depth)?;
    let m = match m {
        Some(text) => parse_group_element(text, graph.rank(), "m")?,
        None => pdata.per.basis().first().cloned().ok_or_else(|| {
            anyhow!("the periodicity group is trivial at depth {depth}; pass --m or raise --depth")
        })?,
    };
    let mp = match mp {
        Some(text) => parse_group_element(text, graph.rank(), "mp")?,
        None => match pdata.per.basis().get(1) {
            Some(row) => row.clone(),
            None => m.iter().map(|x| -x).collect(),
        },
    };
    let lambda = match lambda {
        Some(text) => parse_path(&graph, text)?,
        None => {
            let v = pdata.h_per.iter().next().copied().ok_or_else(|| {
                anyhow!("no vertex supports the periodicity group at depth {depth}")
            })?;
            Path::vertex(&graph, v)
        }
    };
    let rep = TruncatedRep::new(&graph, &c, cutoff);
    let deviation = check_vm_commutation(&rep, &pdata, &lambda, &m, &mp, &margin)?;
    let expected = expected_vm_phase(&rep, &m, &mp);
    let measured = measured_vm_phase(&rep, &pdata, &lambda, &m, &mp, &margin)?;
    let phase_error = (expected - measured).norm();
    let report = VmCheckReport {
        lambda: lambda.label(&graph),
        m,
        mp,
        depth,
        cutoff: rep.cutoff().coords().to_vec(),
        margin: margin.coords().to_vec(),
        seed,
        per_basis: pdata.per.basis().to_vec(),
        per_exact: pdata.complete,
        deviation,
        expected_phase: [expected.re, expected.im],
        measured_phase: [measured.re, measured.im],
        phase_error,
        passed: deviation <= VM_DEVIATION_TOL && phase_error <= VM_PHASE_TOL,
    };
    emit(&report)?;
    eprintln!(
        "commutation deviation {:.3e}, phase error {:.3e}",
        report.deviation, report.phase_error
    );
    Ok(if report.passed { 0 } else { 3 })
}

#[derive(Serialize)]
struct DeltaReport {
    f: Vec<String>,
    vertex: String,
    verdict: String,
    certificate: Option<String>,
    depth: Vec<u32>,
}

fn cmd_delta(io: &GraphArg, f: &str, ee: Option<&std::path::Path>, depth: &str) -> Result<u8> {
    let graph = load_graph(&io.graph)?;
    if let Some(code) = reject_invalid(&graph)? {
        return Ok(code);
    }
    let paths: Vec<Path> = f
        .split(',')
        .map(|w| parse_path(&graph, w.trim()))
        .collect::<kgraph::Result<_>>()?;
    if paths.is_empty() {
        bail!("the path set is empty");
    }
    let v = paths[0].range();
    let ee = load_ee(&graph, ee)?;
    let depth = parse_degree_flag(depth, graph.rank(), "depth")?;
    let verdict = delta_vanishes(&graph, &ee, v, &paths, &depth)?;
    let (name, certificate) = match &verdict {
        DeltaVerdict::ZeroVertexFactor => ("zero-vertex-factor", None),
        DeltaVerdict::ZeroSatiated => ("zero-satiated", None),
        DeltaVerdict::Nonzero(filter) => ("nonzero", Some(filter.describe(&graph))),
        DeltaVerdict::Inconclusive => ("inconclusive", None),
    };
    let report = DeltaReport {
        f: paths.iter().map(|p| p.label(&graph)).collect(),
        vertex: graph.vertex_name(v).to_string(),
        verdict: name.to_string(),
        certificate,
        depth: depth.coords().to_vec(),
    };
    emit(&report)?;
    match &report.certificate {
        Some(c) => eprintln!("{name}: {c}"),
        None => eprintln!("{name}"),
    }
    Ok(if matches!(verdict, DeltaVerdict::Inconclusive) { 3 } else { 0 })
}
