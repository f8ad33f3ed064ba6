//! JSON readers for the on-disk input formats (graph presentation, cocycle,
//! exhaustive-set family) and serializable report shapes for the
//! command-line front end.
//!
//! Readers take strings so the caller owns all filesystem concerns. Parse
//! failures surface as [`Error::Parse`] and keep serde's line/column
//! diagnostics. Report structs serialize with a fixed field order, so equal
//! inputs produce byte-identical output.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::boundary::{EeFamily, SatiationFamily};
use crate::error::{Error, Result};
use crate::graph::{KGraph, ValidationReport};
use crate::ideals::IdealList;
use crate::path::Path;
use crate::periodicity::{Aperiodicity, Cofinality, PeriodicityData};
use crate::phase::PhaseAngle;
use crate::simplicity::{certificate_digests, SimplicityVerdict, Verdict};
use crate::twist::{CategoricalCocycle, TwoCocycleZk};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphSpec {
    rank: usize,
    vertices: Vec<String>,
    edges: Vec<EdgeSpec>,
    #[serde(default)]
    squares: Vec<SquareSpec>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeSpec {
    id: String,
    /// 1-based on disk.
    color: usize,
    range: String,
    source: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SquareSpec {
    gi: String,
    fj: String,
    fj2: String,
    gi2: String,
}

pub fn read_graph(text: &str) -> Result<KGraph> {
    let spec: GraphSpec =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("graph spec: {e}")))?;
    KGraph::new(
        spec.rank,
        spec.vertices,
        spec.edges
            .into_iter()
            .map(|e| (e.id, e.color, e.range, e.source))
            .collect(),
        spec.squares
            .into_iter()
            .map(|s| (s.gi, s.fj, s.fj2, s.gi2))
            .collect(),
    )
}

pub fn write_graph(graph: &KGraph) -> String {
    let spec = GraphSpec {
        rank: graph.rank(),
        vertices: graph
            .vertices()
            .map(|v| graph.vertex_name(v).to_string())
            .collect(),
        edges: graph
            .edge_ids()
            .map(|id| {
                let e = graph.edge(id);
                EdgeSpec {
                    id: e.name.clone(),
                    color: e.color + 1,
                    range: graph.vertex_name(e.range).to_string(),
                    source: graph.vertex_name(e.source).to_string(),
                }
            })
            .collect(),
        squares: graph
            .squares()
            .iter()
            .map(|s| SquareSpec {
                gi: graph.edge_name(s.gi).to_string(),
                fj: graph.edge_name(s.fj).to_string(),
                fj2: graph.edge_name(s.fj2).to_string(),
                gi2: graph.edge_name(s.gi2).to_string(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&spec).expect("graph spec serializes")
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CocycleSpec {
    #[serde(rename = "type")]
    kind: String,
    /// Angles in turns, as strings: `p/q` exact or a decimal float.
    theta: Vec<Vec<String>>,
    #[serde(default)]
    edge_weights: BTreeMap<String, String>,
}

pub fn read_cocycle(graph: &KGraph, text: &str) -> Result<CategoricalCocycle> {
    let spec: CocycleSpec =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("cocycle spec: {e}")))?;
    if spec.kind != "bicharacter" {
        return Err(Error::Parse(format!(
            "cocycle type `{}` is not supported; only `bicharacter` has a finite format",
            spec.kind
        )));
    }
    if spec.theta.len() != graph.rank() {
        return Err(Error::Parse(format!(
            "theta has {} rows but the graph has rank {}",
            spec.theta.len(),
            graph.rank()
        )));
    }
    let theta = spec
        .theta
        .iter()
        .map(|row| row.iter().map(|s| PhaseAngle::parse(s)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let pullback = TwoCocycleZk::new(theta)?;
    if spec.edge_weights.is_empty() {
        return Ok(CategoricalCocycle::bicharacter(pullback));
    }
    let mut weights = BTreeMap::new();
    for (name, angle) in &spec.edge_weights {
        weights.insert(graph.edge_by_name(name)?, PhaseAngle::parse(angle)?);
    }
    Ok(CategoricalCocycle::with_edge_weights(pullback, weights))
}

/// One anchored path set, as stored on disk: paths are words of edge ids,
/// normalized on load.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EeSetSpec {
    pub vertex: String,
    pub paths: Vec<Vec<String>>,
}

pub fn read_ee(graph: &KGraph, text: &str) -> Result<EeFamily> {
    let specs: Vec<EeSetSpec> =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("Ee spec: {e}")))?;
    let mut sets = Vec::new();
    for set in specs {
        let v = graph.vertex(&set.vertex)?;
        let mut members = Vec::new();
        for word in &set.paths {
            if word.is_empty() {
                return Err(Error::Parse(format!(
                    "empty path word in the set at vertex `{}`",
                    set.vertex
                )));
            }
            let ids = word
                .iter()
                .map(|n| graph.edge_by_name(n))
                .collect::<Result<Vec<_>>>()?;
            members.push(Path::from_word(graph, &ids)?);
        }
        sets.push((v, members));
    }
    EeFamily::new(graph, sets)
}

pub fn ee_to_sets(graph: &KGraph, ee: &EeFamily) -> Vec<EeSetSpec> {
    ee.sets()
        .iter()
        .map(|(v, members)| EeSetSpec {
            vertex: graph.vertex_name(*v).to_string(),
            paths: members
                .iter()
                .map(|p| p.word().iter().map(|&e| graph.edge_name(e).to_string()).collect())
                .collect(),
        })
        .collect()
}

#[derive(Serialize)]
pub struct CheckJson {
    pub name: String,
    pub passed: bool,
    pub details: String,
}

#[derive(Serialize)]
pub struct ValidationJson {
    pub valid: bool,
    pub rank: usize,
    pub vertices: usize,
    pub edges: usize,
    pub edges_per_color: Vec<usize>,
    pub no_sources: bool,
    pub strongly_connected: bool,
    pub checks: Vec<CheckJson>,
}

pub fn validation_json(report: &ValidationReport) -> ValidationJson {
    ValidationJson {
        valid: report.is_valid(),
        rank: report.rank,
        vertices: report.num_vertices,
        edges: report.num_edges,
        edges_per_color: report.edges_per_color.clone(),
        no_sources: report.no_sources,
        strongly_connected: report.strongly_connected,
        checks: report
            .checks
            .iter()
            .map(|c| CheckJson {
                name: c.name.clone(),
                passed: c.passed,
                details: c.details.clone(),
            })
            .collect(),
    }
}

#[derive(Serialize)]
pub struct PerReport {
    pub per_basis: Vec<Vec<i64>>,
    /// "yes", "no", or "unknown".
    pub aperiodic: String,
    pub cofinal: bool,
    pub h_per: Vec<String>,
    pub depth: u32,
    /// False when some pair scan was truncated, in which case `per_basis`
    /// generates a possibly proper subgroup.
    pub exact: bool,
}

pub fn per_report(
    graph: &KGraph,
    pdata: &PeriodicityData,
    aperiodicity: &Aperiodicity,
    cofinality: &Cofinality,
) -> PerReport {
    PerReport {
        per_basis: pdata.per.basis().to_vec(),
        aperiodic: match aperiodicity {
            Aperiodicity::Aperiodic => "yes",
            Aperiodicity::Periodic(..) => "no",
            Aperiodicity::Unknown => "unknown",
        }
        .to_string(),
        cofinal: matches!(cofinality, Cofinality::Cofinal),
        h_per: pdata
            .h_per
            .iter()
            .map(|&v| graph.vertex_name(v).to_string())
            .collect(),
        depth: pdata.depth,
        exact: pdata.complete,
    }
}

#[derive(Serialize)]
pub struct IdealJson {
    #[serde(rename = "H")]
    pub h: Vec<String>,
    /// Seed sets over the quotient graph, in the same shape as an Ee file.
    #[serde(rename = "B_generators")]
    pub b_generators: Vec<EeSetSpec>,
    pub exactness: String,
}

#[derive(Serialize)]
pub struct IdealsReport {
    pub ideals: Vec<IdealJson>,
    /// Covering relations i < j by list position.
    pub hasse: Vec<(usize, usize)>,
    pub depth: Vec<u32>,
}

pub fn ideals_report(graph: &KGraph, list: &IdealList) -> IdealsReport {
    IdealsReport {
        ideals: list
            .pairs
            .iter()
            .map(|p| IdealJson {
                h: p.h.iter().map(|&v| graph.vertex_name(v).to_string()).collect(),
                b_generators: ee_to_sets(&p.quotient, &p.b_seeds),
                exactness: list.exactness.as_str().to_string(),
            })
            .collect(),
        hasse: list.hasse.clone(),
        depth: list.depth.coords().to_vec(),
    }
}

#[derive(Serialize)]
pub struct SatiationJson {
    pub vertex: String,
    pub sets: Vec<Vec<String>>,
}

#[derive(Serialize)]
pub struct SatiationReport {
    pub depth: Vec<u32>,
    pub families: Vec<SatiationJson>,
}

pub fn satiation_report(graph: &KGraph, closure: &SatiationFamily) -> SatiationReport {
    SatiationReport {
        depth: closure.depth().coords().to_vec(),
        families: graph
            .vertices()
            .map(|v| SatiationJson {
                vertex: graph.vertex_name(v).to_string(),
                sets: closure
                    .family_at(v)
                    .iter()
                    .map(|set| set.iter().map(|p| p.label(graph)).collect())
                    .collect(),
            })
            .collect(),
    }
}

#[derive(Serialize)]
pub struct CertificateJson {
    pub name: String,
    pub digest: String,
}

#[derive(Serialize)]
pub struct VerdictReport {
    /// "simple", "not-simple", or "unknown".
    pub verdict: String,
    pub grounds: String,
    pub depth: u32,
    pub certificates: Vec<CertificateJson>,
}

pub fn verdict_report(graph: &KGraph, v: &SimplicityVerdict) -> VerdictReport {
    VerdictReport {
        verdict: match v.verdict {
            Verdict::Simple => "simple",
            Verdict::NotSimple => "not-simple",
            Verdict::Unknown => "unknown",
        }
        .to_string(),
        grounds: v.grounds.as_str().to_string(),
        depth: v.depth,
        certificates: certificate_digests(graph, v)
            .into_iter()
            .map(|(name, digest)| CertificateJson { name, digest })
            .collect(),
    }
}
