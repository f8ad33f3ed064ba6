//! Boundary data: finitely presented filters on the path category, the
//! bounded satiation closure of a family of exhaustive sets, and the
//! tri-state test for whether a defect projection Delta^F survives in the
//! quotient determined by that family.
//!
//! Everything here is bounded by an explicit depth so that all searches are
//! finite: "no" answers are certified only within the bound, while "zero"
//! and "nonzero" answers are certified absolutely (the first through the
//! closure rules, the second through an explicit filter certificate).

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::align::{exhaustive_counterexample, mce};
use crate::degree::Degree;
use crate::error::{Error, Result};
use crate::graph::{KGraph, VertexId};
use crate::path::{enumerate_paths_up_to, Path};

/// A finite family of finite exhaustive sets, each anchored at an explicit
/// range vertex. Members must be vertex-free and share the anchor range.
#[derive(Clone, Debug, Default)]
pub struct EeFamily {
    sets: Vec<(VertexId, Vec<Path>)>,
}

impl EeFamily {
    pub fn empty() -> Self {
        EeFamily::default()
    }

    pub fn new(graph: &KGraph, sets: Vec<(VertexId, Vec<Path>)>) -> Result<Self> {
        let mut out = Vec::new();
        for (v, mut members) in sets {
            for p in &members {
                if p.is_vertex() {
                    return Err(Error::ContainsVertex(graph.vertex_name(v).into()));
                }
                if p.range() != v {
                    return Err(Error::RangeMismatch {
                        expected: graph.vertex_name(v).into(),
                        got: graph.vertex_name(p.range()).into(),
                    });
                }
            }
            members.sort_by(|a, b| a.cmp_basis(b));
            members.dedup();
            out.push((v, members));
        }
        Ok(EeFamily { sets: out })
    }

    /// The family of color-slice sets: for every vertex and color, all
    /// edges of that color into the vertex. These are the generating
    /// exhaustive sets of the fully-relational quotient on a row-finite
    /// graph with no sources.
    pub fn color_slices(graph: &KGraph) -> Result<Self> {
        if !graph.has_no_sources() {
            return Err(Error::UnsupportedGraphClass(
                "color-slice family needs every vertex to receive every color".into(),
            ));
        }
        let mut sets = Vec::new();
        for v in graph.vertices() {
            for color in 0..graph.rank() {
                let members: Vec<Path> = graph
                    .edges_into(v, color)
                    .iter()
                    .map(|&e| Path::from_edge(graph, e))
                    .collect();
                sets.push((v, members));
            }
        }
        EeFamily::new(graph, sets)
    }

    pub fn sets(&self) -> &[(VertexId, Vec<Path>)] {
        &self.sets
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn at(&self, v: VertexId) -> impl Iterator<Item = &[Path]> {
        self.sets
            .iter()
            .filter(move |(w, _)| *w == v)
            .map(|(_, e)| e.as_slice())
    }

    /// Checks that every member set is exhaustive at its anchor.
    pub fn check_exhaustive(&self, graph: &KGraph) -> Result<()> {
        for (v, e) in &self.sets {
            if let Some(witness) = exhaustive_counterexample(graph, e, *v)? {
                return Err(Error::NotExhaustive(
                    graph.vertex_name(*v).into(),
                    witness.label(graph),
                ));
            }
        }
        Ok(())
    }
}

/// A boundary filter with a finite presentation: either the initial
/// segments of a single path, or the initial segments of the infinite path
/// prefix.cycle.cycle..., where the cycle is a nontrivial loop based at the
/// source of the prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundedFilter {
    Principal(Path),
    EventuallyPeriodic { prefix: Path, cycle: Path },
}

impl BoundedFilter {
    pub fn principal(path: Path) -> Self {
        BoundedFilter::Principal(path)
    }

    pub fn eventually_periodic(graph: &KGraph, prefix: Path, cycle: Path) -> Result<Self> {
        if cycle.is_vertex() {
            return Err(Error::InvalidPresentation(
                "filter cycle must have positive degree".into(),
            ));
        }
        if cycle.range() != cycle.source(graph) {
            return Err(Error::RangeMismatch {
                expected: graph.vertex_name(cycle.range()).into(),
                got: graph.vertex_name(cycle.source(graph)).into(),
            });
        }
        if prefix.source(graph) != cycle.range() {
            return Err(Error::NotComposable(
                graph.vertex_name(prefix.source(graph)).into(),
                graph.vertex_name(cycle.range()).into(),
            ));
        }
        Ok(BoundedFilter::EventuallyPeriodic { prefix, cycle })
    }

    pub fn range(&self) -> VertexId {
        match self {
            BoundedFilter::Principal(p) => p.range(),
            BoundedFilter::EventuallyPeriodic { prefix, .. } => prefix.range(),
        }
    }

    /// True when the cycle advances in every color, so the filter is
    /// maximal (an ultrafilter) on a graph with no sources.
    pub fn is_ultra(&self, graph: &KGraph) -> bool {
        match self {
            BoundedFilter::Principal(_) => false,
            BoundedFilter::EventuallyPeriodic { cycle, .. } => {
                Degree::uniform(graph.rank(), 1).leq(cycle.degree())
            }
        }
    }

    /// The unique filter element of degree `m`, when the filter reaches
    /// that degree.
    pub fn element_at(&self, graph: &KGraph, m: &Degree) -> Result<Option<Path>> {
        match self {
            BoundedFilter::Principal(p) => {
                if m.leq(p.degree()) {
                    Ok(Some(p.factorize(graph, m)?.0))
                } else {
                    Ok(None)
                }
            }
            BoundedFilter::EventuallyPeriodic { prefix, cycle } => {
                let mut reps = 0u32;
                for i in 0..m.rank() {
                    let need = m.get(i).saturating_sub(prefix.degree().get(i));
                    let step = cycle.degree().get(i);
                    if step == 0 {
                        if need > 0 {
                            return Ok(None);
                        }
                    } else {
                        reps = reps.max(need.div_ceil(step));
                    }
                }
                let mut full = prefix.clone();
                for _ in 0..reps {
                    full = full.compose(graph, cycle)?;
                }
                Ok(Some(full.factorize(graph, m)?.0))
            }
        }
    }

    /// Filter membership: is `lambda` an initial segment?
    pub fn contains(&self, graph: &KGraph, lambda: &Path) -> Result<bool> {
        match self.element_at(graph, lambda.degree())? {
            Some(seg) => Ok(seg == *lambda),
            None => Ok(false),
        }
    }

    /// The shifted filter seen from the far end of a member `lambda`.
    pub fn shift(&self, graph: &KGraph, lambda: &Path) -> Result<BoundedFilter> {
        if !self.contains(graph, lambda)? {
            return Err(Error::NotMember(lambda.label(graph)));
        }
        match self {
            BoundedFilter::Principal(p) => {
                let (_, tail) = p.factorize(graph, lambda.degree())?;
                Ok(BoundedFilter::Principal(tail))
            }
            BoundedFilter::EventuallyPeriodic { prefix, cycle } => {
                let mut full = prefix.clone();
                while !lambda.degree().leq(full.degree()) {
                    full = full.compose(graph, cycle)?;
                }
                let (_, tail) = full.factorize(graph, lambda.degree())?;
                BoundedFilter::eventually_periodic(graph, tail, cycle.clone())
            }
        }
    }

    /// Compatibility with a family of exhaustive sets: every filter element
    /// must extend into the filter through every set the family's bounded
    /// satiation places at the element's source. The probe covers all
    /// elements out to `depth` joined with the filter's own presentation
    /// bound; beyond that an eventually periodic filter repeats with its
    /// cycle, and a principal one has ended.
    pub fn is_compatible(&self, graph: &KGraph, ee: &EeFamily, depth: &Degree) -> Result<bool> {
        if ee.is_empty() {
            return Ok(true);
        }
        let closure = satiate(graph, ee, depth)?;
        self.compatible_with(graph, &closure)
    }

    /// The same check against an already-computed satiation closure.
    pub fn compatible_with(&self, graph: &KGraph, closure: &SatiationFamily) -> Result<bool> {
        let natural = match self {
            BoundedFilter::Principal(p) => p.degree().clone(),
            BoundedFilter::EventuallyPeriodic { prefix, cycle } => {
                prefix.degree().plus(cycle.degree())
            }
        };
        let probe_bound = natural.join(closure.depth());
        for m in probe_bound.descents() {
            let Some(lambda) = self.element_at(graph, &m)? else {
                continue;
            };
            for e in closure.family_at(lambda.source(graph)) {
                let mut met = false;
                for delta in &e {
                    let extended = lambda.compose(graph, delta)?;
                    if self.contains(graph, &extended)? {
                        met = true;
                        break;
                    }
                }
                if !met {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn describe(&self, graph: &KGraph) -> String {
        match self {
            BoundedFilter::Principal(p) => format!("principal {}", p.label(graph)),
            BoundedFilter::EventuallyPeriodic { prefix, cycle } => {
                format!("{} ({})^inf", prefix.label(graph), cycle.label(graph))
            }
        }
    }
}

/// The satiation closure of an exhaustive family inside the bounded
/// universes U_v = v Lambda^{<= depth} minus the vertex, as one family of
/// path sets per vertex. Closure rules: adjoin any universe path (S1),
/// take the extension set through a non-member path (S2, which lands at the
/// path's source), drop a member that properly extends another member
/// (S3), and substitute a member by its composites with a family set at its
/// source when everything stays inside the bound (S4).
#[derive(Clone)]
pub struct SatiationFamily {
    depth: Degree,
    universes: Vec<Vec<Path>>,
    families: Vec<BTreeSet<u32>>,
}

struct VertexCtx {
    index: HashMap<Path, usize>,
    source: Vec<VertexId>,
    /// extends[l] has bit m set when U[l] extends U[m].
    extends: Vec<u32>,
    /// ext_tails[l][m]: mask over the universe at s(U[l]) of the tails
    /// alpha with U[l].alpha a minimal common extension of U[l] and U[m].
    ext_tails: Vec<Vec<u32>>,
    /// comp[l][g]: index of U[l] composed with the g-th universe path at
    /// s(U[l]), when that stays within depth.
    comp: Vec<Vec<Option<usize>>>,
}

pub fn satiate(graph: &KGraph, ee: &EeFamily, depth: &Degree) -> Result<SatiationFamily> {
    ee.check_exhaustive(graph)?;
    let universes: Vec<Vec<Path>> = graph
        .vertices()
        .map(|v| {
            let mut u: Vec<Path> = enumerate_paths_up_to(graph, Some(v), depth)
                .into_iter()
                .filter(|p| !p.is_vertex())
                .collect();
            u.sort_by(|a, b| a.cmp_basis(b));
            u
        })
        .collect();
    for u in &universes {
        if u.len() > 31 {
            return Err(Error::UnsupportedGraphClass(format!(
                "bounded universe has {} paths; the closure supports at most 31",
                u.len()
            )));
        }
    }
    let index: Vec<HashMap<Path, usize>> = universes
        .iter()
        .map(|u| u.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect())
        .collect();

    let mut ctxs = Vec::with_capacity(universes.len());
    for u in &universes {
        let source: Vec<VertexId> = u.iter().map(|p| p.source(graph)).collect();
        let mut extends = vec![0u32; u.len()];
        let mut ext_tails = vec![vec![0u32; u.len()]; u.len()];
        for (l, lam) in u.iter().enumerate() {
            for (m, mem) in u.iter().enumerate() {
                if lam.extends(graph, mem) {
                    extends[l] |= 1 << m;
                }
                for pi in mce(graph, lam, mem) {
                    let (_, tail) = pi.factorize(graph, lam.degree())?;
                    if tail.is_vertex() {
                        continue;
                    }
                    let ti = index[source[l].0]
                        .get(&tail)
                        .expect("minimal extension tail stays in the bounded universe");
                    ext_tails[l][m] |= 1 << ti;
                }
            }
        }
        let mut comp = vec![Vec::new(); u.len()];
        for (l, lam) in u.iter().enumerate() {
            let target = &universes[source[l].0];
            comp[l] = target
                .iter()
                .map(|gamma| {
                    if lam.degree().plus(gamma.degree()).leq(depth) {
                        let whole = lam.compose(graph, gamma).expect("composable by universes");
                        index[lam.range().0].get(&whole).copied()
                    } else {
                        None
                    }
                })
                .collect();
        }
        ctxs.push(VertexCtx { index: index[ctxs.len()].clone(), source, extends, ext_tails, comp });
    }

    let mut families: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); universes.len()];
    let mut queue: VecDeque<(usize, u32)> = VecDeque::new();
    for (v, e) in ee.sets() {
        let mut mask = 0u32;
        for p in e {
            let Some(&i) = ctxs[v.0].index.get(p) else {
                return Err(Error::OutOfUniverse {
                    degree: p.degree().coords().to_vec(),
                    bound: depth.coords().to_vec(),
                });
            };
            mask |= 1 << i;
        }
        if families[v.0].insert(mask) {
            queue.push_back((v.0, mask));
        }
    }

    // S4 can consume sets discovered later at other vertices, so run the
    // local worklist to exhaustion and then re-sweep until globally stable.
    loop {
        while let Some((v, f)) = queue.pop_front() {
            let ctx = &ctxs[v];
            let n = universes[v].len();
            let push = |families: &mut Vec<BTreeSet<u32>>,
                            queue: &mut VecDeque<(usize, u32)>,
                            w: usize,
                            mask: u32| {
                if mask != 0 && families[w].insert(mask) {
                    queue.push_back((w, mask));
                }
            };
            for l in 0..n {
                let bit = 1u32 << l;
                if f & bit == 0 {
                    // S1: adjoin.
                    push(&mut families, &mut queue, v, f | bit);
                    // S2: extension set through a path extending no member.
                    if ctx.extends[l] & f == 0 {
                        let mut tails = 0u32;
                        for m in 0..n {
                            if f & (1 << m) != 0 {
                                tails |= ctx.ext_tails[l][m];
                            }
                        }
                        push(&mut families, &mut queue, ctx.source[l].0, tails);
                    }
                } else {
                    // S3: drop a member properly extending another member.
                    if ctx.extends[l] & f & !bit != 0 {
                        push(&mut families, &mut queue, v, f & !bit);
                    }
                    // S4: substitute through a family set at the source.
                    let w = ctx.source[l].0;
                    for g in families[w].clone() {
                        let mut translated = 0u32;
                        let mut fits = true;
                        for gbit in 0..universes[w].len() {
                            if g & (1 << gbit) != 0 {
                                match ctx.comp[l][gbit] {
                                    Some(t) => translated |= 1 << t,
                                    None => {
                                        fits = false;
                                        break;
                                    }
                                }
                            }
                        }
                        if fits {
                            push(&mut families, &mut queue, v, (f & !bit) | translated);
                        }
                    }
                }
            }
        }
        // Re-derive S4 against the now-complete families.
        let mut changed = false;
        for v in 0..families.len() {
            for f in families[v].clone() {
                let ctx = &ctxs[v];
                for l in 0..universes[v].len() {
                    if f & (1 << l) == 0 {
                        continue;
                    }
                    let w = ctx.source[l].0;
                    for g in families[w].clone() {
                        let mut translated = 0u32;
                        let mut fits = true;
                        for gbit in 0..universes[w].len() {
                            if g & (1 << gbit) != 0 {
                                match ctx.comp[l][gbit] {
                                    Some(t) => translated |= 1 << t,
                                    None => {
                                        fits = false;
                                        break;
                                    }
                                }
                            }
                        }
                        let candidate = (f & !(1 << l)) | translated;
                        if fits && candidate != 0 && families[v].insert(candidate) {
                            queue.push_back((v, candidate));
                            changed = true;
                        }
                    }
                }
            }
        }
        if !changed && queue.is_empty() {
            break;
        }
    }

    Ok(SatiationFamily { depth: depth.clone(), universes, families })
}

/// Membership verdict within the bounded closure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SatMembership {
    Yes,
    /// Not a member of the closure computed at this depth; deeper closures
    /// may still contain it.
    NoWithinBound,
    /// The queried set does not live inside the bounded universe at all.
    OutOfUniverse,
}

impl SatiationFamily {
    pub fn depth(&self) -> &Degree {
        &self.depth
    }

    /// The satiated sets anchored at `v`, decoded into paths, in a
    /// deterministic order.
    pub fn family_at(&self, v: VertexId) -> Vec<Vec<Path>> {
        let u = &self.universes[v.0];
        self.families[v.0]
            .iter()
            .map(|&mask| {
                (0..u.len())
                    .filter(|&i| mask & (1 << i) != 0)
                    .map(|i| u[i].clone())
                    .collect()
            })
            .collect()
    }

    pub fn len_at(&self, v: VertexId) -> usize {
        self.families[v.0].len()
    }

    pub fn is_in_satiation(&self, graph: &KGraph, v: VertexId, f: &[Path]) -> Result<SatMembership> {
        let u = &self.universes[v.0];
        let mut mask = 0u32;
        for p in f {
            if p.is_vertex() {
                return Err(Error::ContainsVertex(graph.vertex_name(v).into()));
            }
            match u.iter().position(|q| q == p) {
                Some(i) => mask |= 1 << i,
                None => return Ok(SatMembership::OutOfUniverse),
            }
        }
        Ok(if self.families[v.0].contains(&mask) {
            SatMembership::Yes
        } else {
            SatMembership::NoWithinBound
        })
    }
}

/// Outcome of the vanishing test for Delta^F.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DeltaVerdict {
    /// F contains its own range vertex, so one factor is q_v - q_v.
    ZeroVertexFactor,
    /// F lies in the satiation closure at this depth: the projection dies
    /// in the quotient.
    ZeroSatiated,
    /// A compatible filter avoiding F entirely; the projection fixes the
    /// corresponding boundary vectors.
    Nonzero(BoundedFilter),
    Inconclusive,
}

/// Decides whether Delta^F vanishes in the quotient presented by `ee`,
/// searching within `depth` both for the satiation closure and for filter
/// certificates. Eventually periodic candidates are tried before principal
/// ones, maximal cycles first, smaller data first throughout.
pub fn delta_vanishes(
    graph: &KGraph,
    ee: &EeFamily,
    v: VertexId,
    f: &[Path],
    depth: &Degree,
) -> Result<DeltaVerdict> {
    for p in f {
        if p.range() != v {
            return Err(Error::RangeMismatch {
                expected: graph.vertex_name(v).into(),
                got: graph.vertex_name(p.range()).into(),
            });
        }
        if p.is_vertex() {
            return Ok(DeltaVerdict::ZeroVertexFactor);
        }
    }
    let closure = satiate(graph, ee, depth)?;
    if closure.is_in_satiation(graph, v, f)? == SatMembership::Yes {
        return Ok(DeltaVerdict::ZeroSatiated);
    }
    if let Some(cert) = certificate_search(graph, &closure, v, f, depth)? {
        return Ok(DeltaVerdict::Nonzero(cert));
    }
    Ok(DeltaVerdict::Inconclusive)
}

fn certificate_search(
    graph: &KGraph,
    closure: &SatiationFamily,
    v: VertexId,
    avoid: &[Path],
    depth: &Degree,
) -> Result<Option<BoundedFilter>> {
    let cycles: Vec<Path> = graph
        .vertices()
        .flat_map(|w| enumerate_paths_up_to(graph, Some(w), depth))
        .filter(|p| !p.is_vertex() && p.source(graph) == p.range())
        .collect();
    let prefixes: Vec<Path> = enumerate_paths_up_to(graph, Some(v), depth);
    let one = Degree::uniform(graph.rank(), 1);

    // Maximal filters first, then smallest presentations.
    let mut candidates: Vec<(bool, u32, u32, &Path, &Path)> = Vec::new();
    for cycle in &cycles {
        for prefix in &prefixes {
            if prefix.source(graph) != cycle.range() {
                continue;
            }
            candidates.push((
                !one.leq(cycle.degree()),
                prefix.degree().norm1() + cycle.degree().norm1(),
                cycle.degree().norm1(),
                prefix,
                cycle,
            ));
        }
    }
    candidates.sort_by(|a, b| {
        a.0.cmp(&b.0)
            .then(a.1.cmp(&b.1))
            .then(a.2.cmp(&b.2))
            .then(a.3.cmp_basis(b.3))
            .then(a.4.cmp_basis(b.4))
    });

    let admissible = |filter: &BoundedFilter| -> Result<bool> {
        for p in avoid {
            if filter.contains(graph, p)? {
                return Ok(false);
            }
        }
        filter.compatible_with(graph, closure)
    };

    for (_, _, _, prefix, cycle) in candidates {
        let filter =
            BoundedFilter::eventually_periodic(graph, prefix.clone(), cycle.clone())?;
        if admissible(&filter)? {
            return Ok(Some(filter));
        }
    }
    let mut principals = prefixes.clone();
    principals.sort_by(|a, b| {
        a.degree()
            .norm1()
            .cmp(&b.degree().norm1())
            .then(a.cmp_basis(b))
    });
    for p in &principals {
        let filter = BoundedFilter::principal(p.clone());
        if admissible(&filter)? {
            return Ok(Some(filter));
        }
    }
    Ok(None)
}
