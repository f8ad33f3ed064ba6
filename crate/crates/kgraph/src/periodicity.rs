//! Periodicity analysis: similarity of finite paths, the periodicity group
//! and its vertex support, aperiodicity and cofinality checks, and the
//! generalized-cycle search. These feed the simplicity decision tree.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rayon::prelude::*;

use crate::align::mce;
use crate::boundary::BoundedFilter;
use crate::degree::Degree;
use crate::error::{Error, Result};
use crate::graph::{KGraph, VertexId};
use crate::path::{enumerate_paths, enumerate_paths_up_to, Path};
use crate::spanalg::SpanElement;
use crate::twist::ZkSubgroup;

/// Outcome of a bounded similarity check on a pair of paths with a common
/// source. `Sim` and `NotSim` are exact; `ProbableSim` means the search ran
/// out of depth before the pair-state space closed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SimVerdict {
    Sim,
    NotSim(Path),
    ProbableSim,
}

/// Decides whether `mu` and `nu` act identically on every infinite path,
/// i.e. whether `mu x = nu x` for all `x` from the common source.
///
/// The search walks common extensions `tau` of degree at most `depth` in
/// every color, normalizing each extended pair by stripping the shared
/// prefix. A state with no minimal common extension yields a `NotSim`
/// witness (re-verified on the original pair before returning). If every
/// reachable state was explored without hitting the depth bound, the state
/// space is closed and any common extension of any degree still meets, so
/// the pair is similar. Hitting the bound with unexplored states leaves the
/// question open and the verdict is `ProbableSim`.
pub fn sim_check(graph: &KGraph, mu: &Path, nu: &Path, depth: u32) -> Result<SimVerdict> {
    if mu.source(graph) != nu.source(graph) {
        return Err(Error::SourceMismatch(
            mu.label(graph),
            nu.label(graph),
        ));
    }
    if mu == nu {
        return Ok(SimVerdict::Sim);
    }
    let bound = Degree::uniform(graph.rank(), depth);
    let start = normal_pair(graph, mu, nu)?;
    let mut seen: BTreeSet<(Path, Path)> = BTreeSet::new();
    let mut queue: VecDeque<((Path, Path), Path)> = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back((start, Path::vertex(graph, mu.source(graph))));
    let mut truncated = false;
    while let Some(((alpha, beta), tau)) = queue.pop_front() {
        if mce(graph, &alpha, &beta).is_empty() {
            let full_mu = mu.compose(graph, &tau)?;
            let full_nu = nu.compose(graph, &tau)?;
            if mce(graph, &full_mu, &full_nu).is_empty() {
                return Ok(SimVerdict::NotSim(tau));
            }
            return Err(Error::GraphMismatch(
                "pair-state normalization disagreed with the full pair".into(),
            ));
        }
        let at = alpha.source(graph);
        for c in 0..graph.rank() {
            for &e in graph.edges_into(at, c) {
                let hop = Path::from_edge(graph, e);
                let tau2 = tau.compose(graph, &hop)?;
                if !tau2.degree().leq(&bound) {
                    truncated = true;
                    continue;
                }
                let a2 = alpha.compose(graph, &hop)?;
                let b2 = beta.compose(graph, &hop)?;
                let state = normal_pair(graph, &a2, &b2)?;
                if seen.insert(state.clone()) {
                    queue.push_back((state, tau2));
                }
            }
        }
    }
    if truncated {
        Ok(SimVerdict::ProbableSim)
    } else {
        Ok(SimVerdict::Sim)
    }
}

fn normal_pair(graph: &KGraph, a: &Path, b: &Path) -> Result<(Path, Path)> {
    let (x, y) = a.strip_common_prefix(graph, b)?;
    Ok(if x.cmp_basis(&y) == Ordering::Greater {
        (y, x)
    } else {
        (x, y)
    })
}

/// Memoized front end for [`sim_check`]; keyed on the unordered pair and
/// the depth.
#[derive(Default)]
pub struct SimCache {
    memo: BTreeMap<(Path, Path, u32), SimVerdict>,
}

impl SimCache {
    pub fn new() -> Self {
        SimCache::default()
    }

    pub fn check(&mut self, graph: &KGraph, mu: &Path, nu: &Path, depth: u32) -> Result<SimVerdict> {
        let (a, b) = if mu.cmp_basis(nu) == Ordering::Greater {
            (nu.clone(), mu.clone())
        } else {
            (mu.clone(), nu.clone())
        };
        let key = (a, b, depth);
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        let v = sim_check(graph, &key.0, &key.1, depth)?;
        self.memo.insert(key, v.clone());
        Ok(v)
    }
}

/// Boundary oracle for similarity: compares the filters `mu S` and `nu S`
/// over every eventually periodic ultrafilter `S` at the common source
/// whose prefix and cycle degrees are bounded by `depth` in each color.
///
/// Two tails driven by the same cycle agree everywhere once they agree out
/// to the join of the prefix degrees plus two cycle periods, so a single
/// element comparison at that degree settles each ultrafilter.
pub fn shifts_agree(graph: &KGraph, mu: &Path, nu: &Path, depth: u32) -> Result<bool> {
    let v = mu.source(graph);
    if nu.source(graph) != v {
        return Err(Error::SourceMismatch(
            mu.label(graph),
            nu.label(graph),
        ));
    }
    let bound = Degree::uniform(graph.rank(), depth);
    let one = Degree::uniform(graph.rank(), 1);
    for prefix in enumerate_paths_up_to(graph, Some(v), &bound) {
        let w = prefix.source(graph);
        for cycle in loops_at(graph, w, &bound) {
            if !one.leq(cycle.degree()) {
                continue;
            }
            let a = mu.compose(graph, &prefix)?;
            let b = nu.compose(graph, &prefix)?;
            let probe = a
                .degree()
                .join(b.degree())
                .plus(&cycle.degree().scale(2));
            let fa = BoundedFilter::eventually_periodic(graph, a, cycle.clone())?;
            let fb = BoundedFilter::eventually_periodic(graph, b, cycle.clone())?;
            if fa.element_at(graph, &probe)? != fb.element_at(graph, &probe)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn loops_at(graph: &KGraph, v: VertexId, bound: &Degree) -> Vec<Path> {
    enumerate_paths_up_to(graph, Some(v), bound)
        .into_iter()
        .filter(|p| !p.is_vertex() && p.source(graph) == v)
        .collect()
}

/// The periodicity group and its vertex support, computed from all verified
/// similar pairs with degrees at most `depth` in each color.
#[derive(Clone, Debug)]
pub struct PeriodicityData {
    pub per: ZkSubgroup,
    pub h_per: BTreeSet<VertexId>,
    pub depth: u32,
    /// False when some pair came back `ProbableSim`, in which case `per`
    /// may be a proper subgroup of the true periodicity group.
    pub complete: bool,
}

pub fn per_group(graph: &KGraph, depth: u32) -> Result<PeriodicityData> {
    let tasks = source_pairs(graph, depth);
    let verdicts: Result<Vec<SimVerdict>> = tasks
        .par_iter()
        .map(|(a, b)| sim_check(graph, a, b, depth))
        .collect();
    let verdicts = verdicts?;
    let mut gens: Vec<Vec<i64>> = Vec::new();
    let mut complete = true;
    for ((a, b), verdict) in tasks.iter().zip(&verdicts) {
        match verdict {
            SimVerdict::Sim => gens.push(degree_diff(a.degree(), b.degree())),
            SimVerdict::ProbableSim => complete = false,
            SimVerdict::NotSim(_) => {}
        }
    }
    let per = ZkSubgroup::from_generators(graph.rank(), &gens)?;
    let mut h_per = BTreeSet::new();
    'vertices: for v in graph.vertices() {
        for g in per.basis() {
            let (p, q) = pos_neg_parts(g);
            if realize_theta(graph, v, &p, &q, depth)?.is_none()
                || realize_theta(graph, v, &q, &p, depth)?.is_none()
            {
                continue 'vertices;
            }
        }
        h_per.insert(v);
    }
    Ok(PeriodicityData { per, h_per, depth, complete })
}

fn source_pairs(graph: &KGraph, depth: u32) -> Vec<(Path, Path)> {
    let bound = Degree::uniform(graph.rank(), depth);
    let mut by_source: BTreeMap<VertexId, Vec<Path>> = BTreeMap::new();
    for p in enumerate_paths_up_to(graph, None, &bound) {
        by_source.entry(p.source(graph)).or_default().push(p);
    }
    let mut tasks = Vec::new();
    for list in by_source.values() {
        for i in 0..list.len() {
            for j in i + 1..list.len() {
                tasks.push((list[i].clone(), list[j].clone()));
            }
        }
    }
    tasks.sort_by(|(a, b), (c, d)| {
        let ka = a.degree().norm1() + b.degree().norm1();
        let kb = c.degree().norm1() + d.degree().norm1();
        ka.cmp(&kb)
            .then_with(|| a.cmp_basis(c))
            .then_with(|| b.cmp_basis(d))
    });
    tasks
}

fn degree_diff(a: &Degree, b: &Degree) -> Vec<i64> {
    a.coords()
        .iter()
        .zip(b.coords())
        .map(|(&x, &y)| i64::from(x) - i64::from(y))
        .collect()
}

/// Splits a group element into its positive and negative parts, the degrees
/// `p` and `q` with `m = p - q` and disjoint supports.
pub fn pos_neg_parts(m: &[i64]) -> (Degree, Degree) {
    let p = m.iter().map(|&x| x.max(0) as u32).collect();
    let q = m.iter().map(|&x| (-x).max(0) as u32).collect();
    (Degree::new(p), Degree::new(q))
}

fn realize_theta(
    graph: &KGraph,
    v: VertexId,
    m: &Degree,
    n: &Degree,
    depth: u32,
) -> Result<Option<Vec<(Path, Path)>>> {
    let dom = enumerate_paths(graph, Some(v), m);
    let cod = enumerate_paths(graph, Some(v), n);
    let mut used: BTreeSet<Path> = BTreeSet::new();
    let mut map = Vec::with_capacity(dom.len());
    for mu in &dom {
        let mut hit = None;
        for nu in &cod {
            if nu.source(graph) != mu.source(graph) {
                continue;
            }
            if sim_check(graph, mu, nu, depth)? == SimVerdict::Sim {
                hit = Some(nu.clone());
                break;
            }
        }
        match hit {
            Some(nu) => {
                if !used.insert(nu.clone()) {
                    return Ok(None);
                }
                map.push((mu.clone(), nu));
            }
            None => return Ok(None),
        }
    }
    if used.len() != cod.len() {
        return Ok(None);
    }
    Ok(Some(map))
}

/// The degree-translation bijection `vΛ^m -> vΛ^n` pairing each path with
/// its unique similar partner. Requires `m - n` in the periodicity group
/// and `v` in its vertex support.
pub fn theta_between(
    graph: &KGraph,
    pdata: &PeriodicityData,
    v: VertexId,
    m: &Degree,
    n: &Degree,
) -> Result<Vec<(Path, Path)>> {
    let diff = degree_diff(m, n);
    if !pdata.per.contains(&diff) {
        return Err(Error::NotMember(format!("{diff:?} is not in the periodicity group")));
    }
    if !pdata.h_per.contains(&v) {
        return Err(Error::VertexNotInHPer(graph.vertex_name(v).into()));
    }
    match realize_theta(graph, v, m, n, pdata.depth)? {
        Some(map) => Ok(map),
        None => Err(Error::VertexNotInHPer(graph.vertex_name(v).into())),
    }
}

/// [`theta_between`] at the canonical decomposition of a signed degree.
pub fn theta_map(
    graph: &KGraph,
    pdata: &PeriodicityData,
    v: VertexId,
    m: &[i64],
) -> Result<Vec<(Path, Path)>> {
    let (p, q) = pos_neg_parts(m);
    theta_between(graph, pdata, v, &p, &q)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Aperiodicity {
    Aperiodic,
    Periodic(Path, Path),
    Unknown,
}

/// Scans every distinct same-source pair with degrees at most `depth` in
/// each color. A verified similar pair witnesses periodicity. `Aperiodic`
/// needs all pairs `NotSim`, no search truncation, and `depth` at least the
/// vertex count; shorter scans can miss cycles and report `Unknown`.
pub fn is_aperiodic(graph: &KGraph, depth: u32) -> Result<Aperiodicity> {
    let tasks = source_pairs(graph, depth);
    let verdicts: Result<Vec<SimVerdict>> = tasks
        .par_iter()
        .map(|(a, b)| sim_check(graph, a, b, depth))
        .collect();
    let verdicts = verdicts?;
    let mut unresolved = false;
    for ((a, b), verdict) in tasks.iter().zip(&verdicts) {
        match verdict {
            SimVerdict::Sim => return Ok(Aperiodicity::Periodic(a.clone(), b.clone())),
            SimVerdict::ProbableSim => unresolved = true,
            SimVerdict::NotSim(_) => {}
        }
    }
    if unresolved || (depth as usize) < graph.num_vertices() {
        Ok(Aperiodicity::Unknown)
    } else {
        Ok(Aperiodicity::Aperiodic)
    }
}

#[derive(Clone, Debug)]
pub enum Cofinality {
    Cofinal,
    NotCofinal { vertex: VertexId, witness: BoundedFilter },
}

/// Exact cofinality check. For each vertex `v` the set of vertices from
/// which `v` is unreachable is pruned to its largest subset `Z` where every
/// member starts a unit block staying off the reachable set and ending in
/// `Z`; a nonempty `Z` unwinds to an eventually periodic path that never
/// meets the reachable set, so no path from `v` ever lands on it.
pub fn is_cofinal(graph: &KGraph) -> Result<Cofinality> {
    let one = Degree::uniform(graph.rank(), 1);
    for v in graph.vertices() {
        let r_v = graph.reaches_into(v);
        let mut z: BTreeSet<VertexId> =
            graph.vertices().filter(|w| !r_v.contains(w)).collect();
        loop {
            let keep: BTreeSet<VertexId> = z
                .iter()
                .copied()
                .filter(|&w| {
                    unit_blocks_avoiding(graph, w, &one, &r_v)
                        .iter()
                        .any(|lam| z.contains(&lam.source(graph)))
                })
                .collect();
            if keep.len() == z.len() {
                break;
            }
            z = keep;
        }
        if let Some(&start) = z.iter().next() {
            let witness = periodic_witness(graph, start, &one, &r_v, &z)?;
            return Ok(Cofinality::NotCofinal { vertex: v, witness });
        }
    }
    Ok(Cofinality::Cofinal)
}

fn unit_blocks_avoiding(
    graph: &KGraph,
    w: VertexId,
    one: &Degree,
    avoid: &std::collections::HashSet<VertexId>,
) -> Vec<Path> {
    enumerate_paths(graph, Some(w), one)
        .into_iter()
        .filter(|lam| {
            one.descents().iter().all(|p| {
                lam.vertex_at(graph, p)
                    .map(|u| !avoid.contains(&u))
                    .unwrap_or(false)
            })
        })
        .collect()
}

fn periodic_witness(
    graph: &KGraph,
    start: VertexId,
    one: &Degree,
    avoid: &std::collections::HashSet<VertexId>,
    z: &BTreeSet<VertexId>,
) -> Result<BoundedFilter> {
    let mut at = start;
    let mut visited = vec![start];
    let mut hops: Vec<Path> = Vec::new();
    loop {
        let lam = unit_blocks_avoiding(graph, at, one, avoid)
            .into_iter()
            .filter(|l| z.contains(&l.source(graph)))
            .min_by(|a, b| a.cmp_basis(b))
            .expect("fixed point keeps a continuation at every member");
        at = lam.source(graph);
        hops.push(lam);
        if let Some(i) = visited.iter().position(|&u| u == at) {
            let mut prefix = Path::vertex(graph, start);
            for h in &hops[..i] {
                prefix = prefix.compose(graph, h)?;
            }
            let mut cycle = Path::vertex(graph, at);
            for h in &hops[i..] {
                cycle = cycle.compose(graph, h)?;
            }
            return BoundedFilter::eventually_periodic(graph, prefix, cycle);
        }
        visited.push(at);
    }
}

/// A pair of distinct parallel paths where every extension of `mu` still
/// meets `nu`, together with an exact entrance: an extension of `nu` that
/// `mu` misses. `checked_depth` is `None` when cyclehood was decided
/// exactly and carries the scan bound otherwise.
#[derive(Clone, Debug)]
pub struct GeneralizedCycle {
    pub mu: Path,
    pub nu: Path,
    pub entrance: Path,
    pub checked_depth: Option<u32>,
}

/// Does every extension of `mu` meet `nu`? On a graph with no sources this
/// is equivalent to `nu` being an initial segment of `mu tau` for every
/// `tau` of the covering degree `(d(mu) v d(nu)) - d(mu)`: such extensions
/// dominate every other one, so the answer (`true`/`false`, `None`) is
/// exact. With sources the scan runs out to `depth` in each color and the
/// bound is returned alongside.
pub fn cyclehood(graph: &KGraph, mu: &Path, nu: &Path, depth: u32) -> Result<(bool, Option<u32>)> {
    if graph.has_no_sources() {
        let cover = mu.degree().join(nu.degree()).minus(mu.degree())?;
        for tau in enumerate_paths(graph, Some(mu.source(graph)), &cover) {
            let ext = mu.compose(graph, &tau)?;
            if !ext.extends(graph, nu) {
                return Ok((false, None));
            }
        }
        Ok((true, None))
    } else {
        let bound = Degree::uniform(graph.rank(), depth);
        for tau in enumerate_paths_up_to(graph, Some(mu.source(graph)), &bound) {
            let ext = mu.compose(graph, &tau)?;
            if mce(graph, &ext, nu).is_empty() {
                return Ok((false, Some(depth)));
            }
        }
        Ok((true, Some(depth)))
    }
}

/// The first extension of `nu` (by degree, then basis order) that `mu`
/// provably misses, out to `depth` in each color.
pub fn find_entrance(graph: &KGraph, mu: &Path, nu: &Path, depth: u32) -> Result<Option<Path>> {
    let bound = Degree::uniform(graph.rank(), depth);
    for tau in enumerate_paths_up_to(graph, Some(nu.source(graph)), &bound) {
        let ext = nu.compose(graph, &tau)?;
        if mce(graph, mu, &ext).is_empty() {
            return Ok(Some(tau));
        }
    }
    Ok(None)
}

pub fn find_generalized_cycle_with_entrance(
    graph: &KGraph,
    depth: u32,
) -> Result<Option<GeneralizedCycle>> {
    let bound = Degree::uniform(graph.rank(), depth);
    let all = enumerate_paths_up_to(graph, None, &bound);
    let mut pairs: Vec<(Path, Path)> = Vec::new();
    for mu in &all {
        for nu in &all {
            if mu == nu || mu.range() != nu.range() || mu.source(graph) != nu.source(graph) {
                continue;
            }
            pairs.push((mu.clone(), nu.clone()));
        }
    }
    pairs.sort_by(|(a, b), (c, d)| {
        let ka = a.degree().norm1() + b.degree().norm1();
        let kb = c.degree().norm1() + d.degree().norm1();
        ka.cmp(&kb)
            .then_with(|| a.cmp_basis(c))
            .then_with(|| b.cmp_basis(d))
    });
    for (mu, nu) in pairs {
        let (is_cycle, checked_depth) = cyclehood(graph, &mu, &nu, depth)?;
        if !is_cycle {
            continue;
        }
        if let Some(entrance) = find_entrance(graph, &mu, &nu, depth)? {
            return Ok(Some(GeneralizedCycle { mu, nu, entrance, checked_depth }));
        }
    }
    Ok(None)
}

/// Drops every term whose legs are not verified similar. On periodic pairs
/// this is the compression onto the part of the algebra that survives every
/// boundary representation.
pub fn tilde_expectation(graph: &KGraph, x: &SpanElement, depth: u32) -> Result<SpanElement> {
    let mut cache = SimCache::new();
    let mut keep: BTreeSet<(Path, Path)> = BTreeSet::new();
    for (mu, nu) in x.terms().keys() {
        if cache.check(graph, mu, nu, depth)? == SimVerdict::Sim {
            keep.insert((mu.clone(), nu.clone()));
        }
    }
    Ok(x.filter_terms(|m, n| keep.contains(&(m.clone(), n.clone()))))
}
