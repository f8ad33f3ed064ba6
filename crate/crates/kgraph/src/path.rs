use std::cmp::Ordering;

use rand::Rng;

use crate::degree::Degree;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, KGraph, VertexId};

/// A morphism of the path category, stored in normal form: the edge word is
/// color-nondecreasing, read range-to-source. Degree-zero paths are vertices.
///
/// Paths are immutable; all operations return new values and take the owning
/// graph explicitly.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Path {
    range: VertexId,
    word: Vec<EdgeId>,
    degree: Degree,
}

impl Path {
    pub fn vertex(graph: &KGraph, v: VertexId) -> Path {
        Path { range: v, word: Vec::new(), degree: Degree::zero(graph.rank()) }
    }

    pub fn from_edge(graph: &KGraph, e: EdgeId) -> Path {
        let edge = graph.edge(e);
        Path {
            range: edge.range,
            word: vec![e],
            degree: Degree::unit(graph.rank(), edge.color),
        }
    }

    /// Builds a path from a composable edge word (any color order); the word
    /// is normalized. For an empty word a range vertex must be supplied via
    /// [`Path::vertex`] instead.
    pub fn from_word(graph: &KGraph, word: &[EdgeId]) -> Result<Path> {
        if word.is_empty() {
            return Err(Error::Parse("empty word needs an explicit vertex".into()));
        }
        check_composable(graph, word)?;
        let normal = normalize_word(graph, word)?;
        Ok(Path {
            range: graph.edge(normal[0]).range,
            degree: word_degree(graph, &normal),
            word: normal,
        })
    }

    pub fn range(&self) -> VertexId {
        self.range
    }

    pub fn source(&self, graph: &KGraph) -> VertexId {
        match self.word.last() {
            Some(&e) => graph.edge(e).source,
            None => self.range,
        }
    }

    pub fn degree(&self) -> &Degree {
        &self.degree
    }

    pub fn word(&self) -> &[EdgeId] {
        &self.word
    }

    pub fn is_vertex(&self) -> bool {
        self.word.is_empty()
    }

    /// Human-readable label: the vertex name, or edge names joined by dots.
    pub fn label(&self, graph: &KGraph) -> String {
        if self.word.is_empty() {
            graph.vertex_name(self.range).to_string()
        } else {
            self.word
                .iter()
                .map(|&e| graph.edge_name(e))
                .collect::<Vec<_>>()
                .join(".")
        }
    }

    /// Composition `self . other` (self at the range end). Requires
    /// `self.source == other.range`.
    pub fn compose(&self, graph: &KGraph, other: &Path) -> Result<Path> {
        if self.source(graph) != other.range {
            return Err(Error::NotComposable(
                graph.vertex_name(self.source(graph)).into(),
                graph.vertex_name(other.range).into(),
            ));
        }
        if self.is_vertex() {
            return Ok(other.clone());
        }
        if other.is_vertex() {
            return Ok(self.clone());
        }
        let mut word = self.word.clone();
        word.extend_from_slice(&other.word);
        let normal = normalize_word(graph, &word)?;
        Ok(Path {
            range: self.range,
            degree: self.degree.plus(&other.degree),
            word: normal,
        })
    }

    /// The unique factorization `self = prefix . rest` with
    /// `prefix.degree() == m`. Errors unless `m <= self.degree()`.
    pub fn factorize(&self, graph: &KGraph, m: &Degree) -> Result<(Path, Path)> {
        if !m.leq(&self.degree) {
            return Err(Error::DegreeOutOfRange {
                requested: m.coords().to_vec(),
                actual: self.degree.coords().to_vec(),
            });
        }
        let mut rest = self.word.clone();
        let mut prefix = Vec::new();
        for color in 0..graph.rank() {
            for _ in 0..m.get(color) {
                let e = pop_color(graph, &mut rest, color)?;
                prefix.push(e);
            }
        }
        let prefix_path = if prefix.is_empty() {
            Path::vertex(graph, self.range)
        } else {
            Path {
                range: self.range,
                degree: m.clone(),
                word: prefix,
            }
        };
        let rest_path = if rest.is_empty() {
            Path::vertex(graph, prefix_path.source(graph))
        } else {
            Path {
                range: graph.edge(rest[0]).range,
                degree: self.degree.minus(m)?,
                word: rest,
            }
        };
        Ok((prefix_path, rest_path))
    }

    /// The segment between positions `from` and `to`, i.e. the middle factor
    /// of `self = a.b.c` with `d(a) = from` and `d(a.b) = to`.
    pub fn segment(&self, graph: &KGraph, from: &Degree, to: &Degree) -> Result<Path> {
        if !from.leq(to) {
            return Err(Error::DegreeOutOfRange {
                requested: from.coords().to_vec(),
                actual: to.coords().to_vec(),
            });
        }
        let (head, _) = self.factorize(graph, to)?;
        let (_, mid) = head.factorize(graph, from)?;
        Ok(mid)
    }

    /// The vertex at position `n`, i.e. the source of the degree-`n` initial
    /// segment.
    pub fn vertex_at(&self, graph: &KGraph, n: &Degree) -> Result<VertexId> {
        let (head, _) = self.factorize(graph, n)?;
        Ok(head.source(graph))
    }

    /// True when `other` is an initial segment of `self`.
    pub fn extends(&self, graph: &KGraph, other: &Path) -> bool {
        other.degree().leq(&self.degree)
            && self
                .factorize(graph, other.degree())
                .map(|(head, _)| &head == other)
                .unwrap_or(false)
    }

    /// Strips the longest common initial segment of two paths with a common
    /// range, returning the pair of remainders. Used to normalize pair states
    /// in similarity searches.
    pub fn strip_common_prefix(&self, graph: &KGraph, other: &Path) -> Result<(Path, Path)> {
        if self.range != other.range {
            return Ok((self.clone(), other.clone()));
        }
        let bound = self.degree.meet(&other.degree);
        // The set of degrees at which the initial segments agree is downward
        // closed but not always join-closed, so the greedy climb returns a
        // deterministic maximal element, which is all the callers need.
        let mut common = Degree::zero(graph.rank());
        loop {
            let mut grew = false;
            for c in 0..graph.rank() {
                let mut probe = common.clone();
                while probe.get(c) < bound.get(c) {
                    let next = probe.plus(&Degree::unit(graph.rank(), c));
                    let (a, _) = self.factorize(graph, &next)?;
                    let (b, _) = other.factorize(graph, &next)?;
                    if a == b {
                        probe = next;
                        grew = true;
                    } else {
                        break;
                    }
                }
                common = probe;
            }
            if !grew {
                break;
            }
        }
        let (_, a) = self.factorize(graph, &common)?;
        let (_, b) = other.factorize(graph, &common)?;
        Ok((a, b))
    }

    /// Deterministic total order: lexicographic on (degree, word). This is
    /// the basis order of the truncated representation.
    pub fn order_key(&self) -> (Vec<u32>, Vec<usize>, usize) {
        (
            self.degree.coords().to_vec(),
            self.word.iter().map(|e| e.0).collect(),
            self.range.0,
        )
    }

    pub fn cmp_basis(&self, other: &Path) -> Ordering {
        self.order_key().cmp(&other.order_key())
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Path {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_basis(other)
    }
}

fn check_composable(graph: &KGraph, word: &[EdgeId]) -> Result<()> {
    for pair in word.windows(2) {
        let (x, y) = (graph.edge(pair[0]), graph.edge(pair[1]));
        if x.source != y.range {
            return Err(Error::NotComposable(
                graph.vertex_name(x.source).into(),
                graph.vertex_name(y.range).into(),
            ));
        }
    }
    Ok(())
}

fn word_degree(graph: &KGraph, word: &[EdgeId]) -> Degree {
    let mut coords = vec![0u32; graph.rank()];
    for &e in word {
        coords[graph.edge(e).color] += 1;
    }
    Degree::new(coords)
}

/// Normalizes a composable word to its color-sorted normal form by adjacent
/// square applications (bubble sort, deterministic leftmost-first order).
pub fn normalize_word(graph: &KGraph, word: &[EdgeId]) -> Result<Vec<EdgeId>> {
    let mut w = word.to_vec();
    loop {
        let mut swapped = false;
        for p in 0..w.len().saturating_sub(1) {
            if graph.edge(w[p]).color > graph.edge(w[p + 1]).color {
                let (a, b) = graph.swap_pair(w[p], w[p + 1])?;
                w[p] = a;
                w[p + 1] = b;
                swapped = true;
            }
        }
        if !swapped {
            return Ok(w);
        }
    }
}

/// Normalizes by applying *randomly chosen* applicable swaps. With valid
/// squares this must agree with [`normalize_word`]; the randomized route
/// exists to test confluence.
pub fn normalize_word_random<R: Rng>(
    graph: &KGraph,
    word: &[EdgeId],
    rng: &mut R,
) -> Result<Vec<EdgeId>> {
    let mut w = word.to_vec();
    loop {
        let spots: Vec<usize> = (0..w.len().saturating_sub(1))
            .filter(|&p| graph.edge(w[p]).color > graph.edge(w[p + 1]).color)
            .collect();
        if spots.is_empty() {
            return Ok(w);
        }
        let p = spots[rng.gen_range(0..spots.len())];
        let (a, b) = graph.swap_pair(w[p], w[p + 1])?;
        w[p] = a;
        w[p + 1] = b;
    }
}

/// Moves the first edge of `color` to the front of the word by square
/// applications and removes it. The word must contain one.
fn pop_color(graph: &KGraph, word: &mut Vec<EdgeId>, color: usize) -> Result<EdgeId> {
    let t = word
        .iter()
        .position(|&e| graph.edge(e).color == color)
        .ok_or_else(|| Error::InvalidPresentation("missing color during factorization".into()))?;
    for s in (1..=t).rev() {
        let (a, b) = graph.swap_pair(word[s - 1], word[s])?;
        word[s - 1] = a;
        word[s] = b;
    }
    Ok(word.remove(0))
}

/// All paths of degree exactly `n` with range `v` (every vertex when `v` is
/// `None`), i.e. the normal-form color-sorted composable words, in
/// deterministic order.
pub fn enumerate_paths(graph: &KGraph, v: Option<VertexId>, n: &Degree) -> Vec<Path> {
    let mut out = Vec::new();
    let ranges: Vec<VertexId> = match v {
        Some(v) => vec![v],
        None => graph.vertices().collect(),
    };
    for range in ranges {
        if n.is_zero() {
            out.push(Path::vertex(graph, range));
            continue;
        }
        let mut word = Vec::new();
        extend_words(graph, range, range, n.clone(), &mut word, &mut out);
    }
    out.sort_by(Path::cmp_basis);
    out
}

fn extend_words(
    graph: &KGraph,
    range: VertexId,
    cur: VertexId,
    remaining: Degree,
    word: &mut Vec<EdgeId>,
    out: &mut Vec<Path>,
) {
    if remaining.is_zero() {
        out.push(Path {
            range,
            word: word.clone(),
            degree: word_degree(graph, word),
        });
        return;
    }
    let color = (0..graph.rank()).find(|&c| remaining.get(c) > 0).unwrap();
    for &e in graph.edges_into(cur, color) {
        word.push(e);
        let next = remaining.minus(&Degree::unit(graph.rank(), color)).unwrap();
        extend_words(graph, range, graph.edge(e).source, next, word, out);
        word.pop();
    }
}

/// All paths of degree <= `bound` with range `v` (every vertex when `None`),
/// in basis order.
pub fn enumerate_paths_up_to(graph: &KGraph, v: Option<VertexId>, bound: &Degree) -> Vec<Path> {
    let mut out = Vec::new();
    for n in bound.descents() {
        out.extend(enumerate_paths(graph, v, &n));
    }
    out.sort_by(Path::cmp_basis);
    out
}

/// Parses a path literal: either `@vertex` or a dot-joined edge word such as
/// `a.b.a`, normalized on input.
pub fn parse_path(graph: &KGraph, text: &str) -> Result<Path> {
    if let Some(name) = text.strip_prefix('@') {
        return Ok(Path::vertex(graph, graph.vertex(name)?));
    }
    if text.is_empty() {
        return Err(Error::Parse("empty path literal".into()));
    }
    let word = text
        .split('.')
        .map(|name| graph.edge_by_name(name))
        .collect::<Result<Vec<_>>>()?;
    Path::from_word(graph, &word)
}
