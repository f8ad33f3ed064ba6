use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;


use crate::error::{Error, Result};

/// Index of a vertex inside a [`KGraph`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct VertexId(pub usize);

/// Index of an edge inside a [`KGraph`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct EdgeId(pub usize);

#[derive(Clone, Debug)]
pub struct Edge {
    pub name: String,
    /// 0-based color; input files use 1-based colors.
    pub color: usize,
    pub range: VertexId,
    pub source: VertexId,
}

/// One commuting square `g.f = f2.g2` where `g, g2` have color i, `f, f2`
/// have color j, and i < j. Words read range-to-source, so `g.f` means
/// "g at the range end, then f".
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Square {
    pub gi: EdgeId,
    pub fj: EdgeId,
    pub fj2: EdgeId,
    pub gi2: EdgeId,
}

/// A rank-k graph presented by its k-colored 1-skeleton and commuting
/// squares. Construction checks referential integrity only; semantic checks
/// (square bijectivity, the cube condition for k >= 3, sources) live in
/// [`KGraph::validate`] so that broken presentations can still be loaded and
/// reported on.
#[derive(Clone)]
pub struct KGraph {
    rank: usize,
    vertex_names: Vec<String>,
    vertex_lookup: HashMap<String, VertexId>,
    edges: Vec<Edge>,
    edge_lookup: HashMap<String, EdgeId>,
    squares: Vec<Square>,
    /// (x, y) -> (y', x') with x.y = y'.x' and colors swapped, both
    /// orientations present for each declared square.
    swap: HashMap<(EdgeId, EdgeId), (EdgeId, EdgeId)>,
    /// edges_by_range_color[v][c] = edges with range v and color c.
    edges_by_range_color: Vec<Vec<Vec<EdgeId>>>,
}

impl KGraph {
    pub fn new(
        rank: usize,
        vertices: Vec<String>,
        edges: Vec<(String, usize, String, String)>,
        squares: Vec<(String, String, String, String)>,
    ) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidPresentation("rank must be at least 1".into()));
        }
        let mut vertex_lookup = HashMap::new();
        for (i, name) in vertices.iter().enumerate() {
            if vertex_lookup.insert(name.clone(), VertexId(i)).is_some() {
                return Err(Error::DuplicateId(name.clone()));
            }
        }
        let mut edge_lookup = HashMap::new();
        let mut edge_list = Vec::new();
        for (name, color, range, source) in edges {
            if color == 0 || color > rank {
                return Err(Error::ColorOutOfRange { color, rank });
            }
            let range = *vertex_lookup
                .get(&range)
                .ok_or_else(|| Error::UnknownVertex(range.clone()))?;
            let source = *vertex_lookup
                .get(&source)
                .ok_or_else(|| Error::UnknownVertex(source.clone()))?;
            let id = EdgeId(edge_list.len());
            if edge_lookup.contains_key(&name) || vertex_lookup.contains_key(&name) {
                return Err(Error::DuplicateId(name));
            }
            edge_lookup.insert(name.clone(), id);
            edge_list.push(Edge { name, color: color - 1, range, source });
        }
        let mut square_list = Vec::new();
        for (gi, fj, fj2, gi2) in squares {
            let look = |n: &String| -> Result<EdgeId> {
                edge_lookup.get(n).copied().ok_or_else(|| Error::UnknownEdge(n.clone()))
            };
            square_list.push(Square {
                gi: look(&gi)?,
                fj: look(&fj)?,
                fj2: look(&fj2)?,
                gi2: look(&gi2)?,
            });
        }
        let mut swap = HashMap::new();
        for sq in &square_list {
            swap.insert((sq.gi, sq.fj), (sq.fj2, sq.gi2));
            swap.insert((sq.fj2, sq.gi2), (sq.gi, sq.fj));
        }
        let mut edges_by_range_color = vec![vec![Vec::new(); rank]; vertices.len()];
        for (i, e) in edge_list.iter().enumerate() {
            edges_by_range_color[e.range.0][e.color].push(EdgeId(i));
        }
        Ok(KGraph {
            rank,
            vertex_names: vertices,
            vertex_lookup,
            edges: edge_list,
            edge_lookup,
            squares: square_list,
            swap,
            edges_by_range_color,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertex_names.len()).map(VertexId)
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertex_names[v.0]
    }

    pub fn vertex(&self, name: &str) -> Result<VertexId> {
        self.vertex_lookup
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(name.into()))
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id.0]
    }

    pub fn edge_by_name(&self, name: &str) -> Result<EdgeId> {
        self.edge_lookup
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownEdge(name.into()))
    }

    pub fn edge_name(&self, id: EdgeId) -> &str {
        &self.edges[id.0].name
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn squares(&self) -> &[Square] {
        &self.squares
    }

    /// Edges with the given range vertex and color, in declaration order.
    pub fn edges_into(&self, v: VertexId, color: usize) -> &[EdgeId] {
        &self.edges_by_range_color[v.0][color]
    }

    /// The square rewrite: for a composable pair `x.y` of distinct colors,
    /// the unique pair `(y2, x2)` of swapped colors with `x.y = y2.x2`.
    pub fn swap_pair(&self, x: EdgeId, y: EdgeId) -> Result<(EdgeId, EdgeId)> {
        self.swap.get(&(x, y)).copied().ok_or_else(|| {
            Error::InvalidPresentation(format!(
                "no commuting square for pair ({}, {})",
                self.edge_name(x),
                self.edge_name(y)
            ))
        })
    }

    /// True when every vertex receives at least one edge of every color.
    pub fn has_no_sources(&self) -> bool {
        self.vertices().all(|v| (0..self.rank).all(|c| !self.edges_into(v, c).is_empty()))
    }

    /// Vertices w such that some path has range `v` and source w, i.e. the
    /// set of vertices from which `v` can be reached along edges
    /// (`v` itself included).
    pub fn reaches_into(&self, v: VertexId) -> HashSet<VertexId> {
        let mut seen = HashSet::from([v]);
        let mut queue = VecDeque::from([v]);
        while let Some(u) = queue.pop_front() {
            for e in &self.edges {
                if e.range == u && seen.insert(e.source) {
                    queue.push_back(e.source);
                }
            }
        }
        seen
    }

    /// Full semantic validation of the presentation.
    pub fn validate(&self) -> ValidationReport {
        let mut checks = Vec::new();

        // Square bijectivity, per unordered color pair.
        let mut square_ok = true;
        let mut square_details = Vec::new();
        for i in 0..self.rank {
            for j in (i + 1)..self.rank {
                let ascending = self.composable_pairs(i, j);
                let descending = self.composable_pairs(j, i);
                let mut seen_asc: BTreeMap<(EdgeId, EdgeId), usize> = BTreeMap::new();
                let mut seen_desc: BTreeMap<(EdgeId, EdgeId), usize> = BTreeMap::new();
                for sq in &self.squares {
                    let (g, f) = (sq.gi, sq.fj);
                    if self.edges[g.0].color != i || self.edges[f.0].color != j {
                        continue;
                    }
                    *seen_asc.entry((g, f)).or_insert(0) += 1;
                    *seen_desc.entry((sq.fj2, sq.gi2)).or_insert(0) += 1;
                    if self.edges[g.0].source != self.edges[f.0].range
                        || self.edges[sq.fj2.0].source != self.edges[sq.gi2.0].range
                        || self.edges[g.0].range != self.edges[sq.fj2.0].range
                        || self.edges[f.0].source != self.edges[sq.gi2.0].source
                        || self.edges[sq.fj2.0].color != j
                        || self.edges[sq.gi2.0].color != i
                    {
                        square_ok = false;
                        square_details.push(format!(
                            "square ({},{},{},{}) has mismatched endpoints or colors",
                            self.edge_name(sq.gi),
                            self.edge_name(sq.fj),
                            self.edge_name(sq.fj2),
                            self.edge_name(sq.gi2)
                        ));
                    }
                }
                for pair in &ascending {
                    match seen_asc.get(pair) {
                        Some(1) => {}
                        n => {
                            square_ok = false;
                            square_details.push(format!(
                                "pair ({}, {}) covered by {} squares (want exactly 1)",
                                self.edge_name(pair.0),
                                self.edge_name(pair.1),
                                n.copied().unwrap_or(0)
                            ));
                        }
                    }
                }
                for pair in &descending {
                    match seen_desc.get(pair) {
                        Some(1) => {}
                        n => {
                            square_ok = false;
                            square_details.push(format!(
                                "pair ({}, {}) is the flip of {} squares (want exactly 1)",
                                self.edge_name(pair.0),
                                self.edge_name(pair.1),
                                n.copied().unwrap_or(0)
                            ));
                        }
                    }
                }
            }
        }
        checks.push(Check {
            name: "squares-bijective".into(),
            passed: square_ok,
            details: square_details.join("; "),
        });

        // Cube condition: every composable triple of three distinct colors
        // rewrites to a unique sorted word no matter the order of square
        // applications.
        let mut cube_ok = true;
        let mut cube_details = Vec::new();
        if self.rank >= 3 && square_ok {
            'outer: for x in self.edge_ids() {
                for y in self.edge_ids() {
                    if self.edges[y.0].range != self.edges[x.0].source {
                        continue;
                    }
                    for z in self.edge_ids() {
                        if self.edges[z.0].range != self.edges[y.0].source {
                            continue;
                        }
                        let mut colors = [
                            self.edges[x.0].color,
                            self.edges[y.0].color,
                            self.edges[z.0].color,
                        ];
                        colors.sort_unstable();
                        if colors[0] == colors[1] || colors[1] == colors[2] {
                            continue;
                        }
                        match self.confluent_outcomes(&[x, y, z]) {
                            Ok(outcomes) if outcomes.len() == 1 => {}
                            Ok(_) => {
                                cube_ok = false;
                                cube_details.push(format!(
                                    "triple ({}, {}, {}) has multiple normal forms",
                                    self.edge_name(x),
                                    self.edge_name(y),
                                    self.edge_name(z)
                                ));
                                break 'outer;
                            }
                            Err(e) => {
                                cube_ok = false;
                                cube_details.push(e.to_string());
                                break 'outer;
                            }
                        }
                    }
                }
            }
        }
        checks.push(Check {
            name: "cube-condition".into(),
            passed: cube_ok,
            details: cube_details.join("; "),
        });

        let no_sources = self.has_no_sources();
        checks.push(Check {
            name: "no-sources".into(),
            passed: no_sources,
            details: if no_sources {
                String::new()
            } else {
                "some vertex misses an incoming edge of some color".into()
            },
        });

        let strongly_connected =
            self.vertices().all(|v| self.reaches_into(v).len() == self.num_vertices());

        ValidationReport {
            checks,
            rank: self.rank,
            num_vertices: self.num_vertices(),
            num_edges: self.num_edges(),
            edges_per_color: (0..self.rank)
                .map(|c| self.edges.iter().filter(|e| e.color == c).count())
                .collect(),
            no_sources,
            strongly_connected,
        }
    }

    fn composable_pairs(&self, first_color: usize, second_color: usize) -> Vec<(EdgeId, EdgeId)> {
        let mut out = Vec::new();
        for x in self.edge_ids() {
            if self.edges[x.0].color != first_color {
                continue;
            }
            for y in self.edge_ids() {
                if self.edges[y.0].color == second_color
                    && self.edges[x.0].source == self.edges[y.0].range
                {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// All sorted words reachable from `word` by square rewrites, used by the
    /// cube-condition check.
    fn confluent_outcomes(&self, word: &[EdgeId]) -> Result<HashSet<Vec<EdgeId>>> {
        let mut sorted_outcomes = HashSet::new();
        let mut seen = HashSet::new();
        let mut queue = VecDeque::from([word.to_vec()]);
        seen.insert(word.to_vec());
        while let Some(w) = queue.pop_front() {
            let mut any = false;
            for p in 0..w.len().saturating_sub(1) {
                if self.edges[w[p].0].color != self.edges[w[p + 1].0].color {
                    let (a, b) = self.swap_pair(w[p], w[p + 1])?;
                    let mut next = w.clone();
                    next[p] = a;
                    next[p + 1] = b;
                    if self.edges[w[p].0].color > self.edges[w[p + 1].0].color {
                        any = true;
                    }
                    if seen.insert(next.clone()) {
                        queue.push_back(next);
                    }
                }
            }
            if !any {
                sorted_outcomes.insert(w);
            }
        }
        Ok(sorted_outcomes)
    }
}

impl fmt::Debug for KGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("KGraph")
            .field("rank", &self.rank)
            .field("vertices", &self.vertex_names)
            .field("edges", &self.edges.len())
            .field("squares", &self.squares.len())
            .finish()
    }
}

#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub details: String,
}

#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
    pub rank: usize,
    pub num_vertices: usize,
    pub num_edges: usize,
    pub edges_per_color: Vec<usize>,
    pub no_sources: bool,
    pub strongly_connected: bool,
}

impl ValidationReport {
    /// True when the presentation defines a k-graph (bijective squares and,
    /// for k >= 3, the cube condition). The no-sources flag is informational:
    /// some operations require it, others do not.
    pub fn is_valid(&self) -> bool {
        self.checks
            .iter()
            .filter(|c| c.name == "squares-bijective" || c.name == "cube-condition")
            .all(|c| c.passed)
    }
}
