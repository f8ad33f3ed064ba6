use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// An element of N^k: the degree (color-multiplicities) of a path.
///
/// The product partial order (`leq`, `join`, `meet`) is the semantic order on
/// degrees; it is *not* the derived `Ord`. Containers that need a total order
/// use [`Degree::lex_cmp`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Degree(Vec<u32>);

impl Degree {
    pub fn new(coords: Vec<u32>) -> Self {
        Degree(coords)
    }

    pub fn zero(rank: usize) -> Self {
        Degree(vec![0; rank])
    }

    /// The standard generator e_i (0-based color index).
    pub fn unit(rank: usize, color: usize) -> Self {
        let mut v = vec![0; rank];
        v[color] = 1;
        Degree(v)
    }

    /// The vector (n, n, ..., n).
    pub fn uniform(rank: usize, n: u32) -> Self {
        Degree(vec![n; rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, color: usize) -> u32 {
        self.0[color]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Total number of edges, |n|_1.
    pub fn norm1(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Coordinatewise <=.
    pub fn leq(&self, other: &Degree) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn join(&self, other: &Degree) -> Degree {
        Degree(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn meet(&self, other: &Degree) -> Degree {
        Degree(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    pub fn plus(&self, other: &Degree) -> Degree {
        Degree(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Coordinatewise difference; errors unless `other <= self`.
    pub fn minus(&self, other: &Degree) -> Result<Degree> {
        if !other.leq(self) {
            return Err(Error::DegreeOutOfRange {
                requested: other.0.clone(),
                actual: self.0.clone(),
            });
        }
        Ok(Degree(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
    }

    pub fn scale(&self, n: u32) -> Degree {
        Degree(self.0.iter().map(|c| c * n).collect())
    }

    /// Lexicographic comparison, used only for deterministic container order.
    pub fn lex_cmp(&self, other: &Degree) -> Ordering {
        self.0.cmp(&other.0)
    }

    /// All degrees m with m <= self, in lexicographic order.
    pub fn descents(&self) -> Vec<Degree> {
        let mut out = vec![Degree::zero(self.rank())];
        for (i, &c) in self.0.iter().enumerate() {
            let mut next = Vec::new();
            for d in &out {
                for v in 0..=c {
                    let mut coords = d.0.clone();
                    coords[i] = v;
                    next.push(Degree(coords));
                }
            }
            out = next;
        }
        out.sort_by(|a, b| a.lex_cmp(b));
        out
    }
}

impl fmt::Debug for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}
