//! Alignment of finite paths: minimal common extensions and the derived
//! set operations used throughout the relation checks.

use std::collections::BTreeSet;

use crate::degree::Degree;
use crate::error::{Error, Result};
use crate::graph::{KGraph, VertexId};
use crate::path::{enumerate_paths, enumerate_paths_up_to, Path};

/// Minimal common extensions: paths of degree `d(mu) v d(nu)` extending both
/// arguments, in basis order. Empty when the ranges differ or the paths do
/// not align.
pub fn mce(graph: &KGraph, mu: &Path, nu: &Path) -> Vec<Path> {
    if mu.range() != nu.range() {
        return Vec::new();
    }
    let target = mu.degree().join(nu.degree());
    let ext_degree = target.minus(mu.degree()).expect("join dominates");
    let mut out = Vec::new();
    for alpha in enumerate_paths(graph, Some(mu.source(graph)), &ext_degree) {
        let lam = mu.compose(graph, &alpha).expect("source matches by construction");
        if lam.extends(graph, nu) {
            out.push(lam);
        }
    }
    out
}

/// The extension set `Ext(lambda; E)`: all alpha with `lambda.alpha` a
/// minimal common extension of lambda with some member of E.
pub fn ext(graph: &KGraph, lambda: &Path, e: &[Path]) -> Result<Vec<Path>> {
    let mut out = BTreeSet::new();
    for mu in e {
        for m in mce(graph, lambda, mu) {
            let (_, alpha) = m.factorize(graph, lambda.degree())?;
            out.insert(alpha);
        }
    }
    Ok(out.into_iter().collect())
}

/// Whether the finite set `E` of paths with range `v` is exhaustive:
/// every path out of `v` of degree up to the join of the degrees of E
/// has a common extension with some member. The empty set is not
/// exhaustive by convention.
pub fn is_exhaustive(graph: &KGraph, e: &[Path], v: VertexId) -> Result<bool> {
    for mu in e {
        if mu.range() != v {
            return Err(Error::RangeMismatch {
                expected: graph.vertex_name(v).into(),
                got: graph.vertex_name(mu.range()).into(),
            });
        }
    }
    if e.is_empty() {
        return Ok(false);
    }
    let bound = degree_join(graph, e);
    for lambda in enumerate_paths_up_to(graph, Some(v), &bound) {
        if !e.iter().any(|mu| !mce(graph, &lambda, mu).is_empty()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// As [`is_exhaustive`] but also returns the first counterexample path.
pub fn exhaustive_counterexample(graph: &KGraph, e: &[Path], v: VertexId) -> Result<Option<Path>> {
    if e.is_empty() {
        return Ok(Some(Path::vertex(graph, v)));
    }
    let bound = degree_join(graph, e);
    for lambda in enumerate_paths_up_to(graph, Some(v), &bound) {
        if !e.iter().any(|mu| !mce(graph, &lambda, mu).is_empty()) {
            return Ok(Some(lambda));
        }
    }
    Ok(None)
}

pub fn degree_join(graph: &KGraph, e: &[Path]) -> Degree {
    let mut bound = Degree::zero(graph.rank());
    for mu in e {
        bound = bound.join(mu.degree());
    }
    bound
}

/// The closure of `E` under the mixed-extension rule: whenever mu,nu and
/// sigma,tau are pairs in the set with equal degrees and equal sources, and
/// `nu.alpha = sigma.beta` is a minimal common extension, both `mu.alpha` and
/// `tau.beta` are adjoined. Terminates because every element produced has
/// degree at most the join of the degrees of `E`.
pub fn pi_closure(graph: &KGraph, e: &[Path]) -> Result<Vec<Path>> {
    common_range(graph, e)?;
    let mut f: BTreeSet<Path> = e.iter().cloned().collect();
    loop {
        let elems: Vec<Path> = f.iter().cloned().collect();
        let mut added = false;
        for nu in &elems {
            for sigma in &elems {
                let mces = mce(graph, nu, sigma);
                if mces.is_empty() {
                    continue;
                }
                let mu_side: Vec<&Path> = elems
                    .iter()
                    .filter(|m| m.degree() == nu.degree() && m.source(graph) == nu.source(graph))
                    .collect();
                let tau_side: Vec<&Path> = elems
                    .iter()
                    .filter(|t| {
                        t.degree() == sigma.degree() && t.source(graph) == sigma.source(graph)
                    })
                    .collect();
                for m in &mces {
                    let (_, alpha) = m.factorize(graph, nu.degree())?;
                    let (_, beta) = m.factorize(graph, sigma.degree())?;
                    for mu in &mu_side {
                        added |= f.insert(mu.compose(graph, &alpha)?);
                    }
                    for tau in &tau_side {
                        added |= f.insert(tau.compose(graph, &beta)?);
                    }
                }
            }
        }
        if !added {
            return Ok(f.into_iter().collect());
        }
    }
}

/// Whether `E` is already closed under the mixed-extension rule.
pub fn is_pi_closed(graph: &KGraph, e: &[Path]) -> Result<bool> {
    let closure = pi_closure(graph, e)?;
    Ok(closure.len() == e.iter().collect::<BTreeSet<_>>().len())
}

/// The section `T(E; mu)`: the nontrivial continuations of `mu` inside `E`,
/// i.e. all `mu'` other than the source vertex with `mu.mu'` a member of `E`.
pub fn t_set(graph: &KGraph, e: &[Path], mu: &Path) -> Result<Vec<Path>> {
    let mut out = BTreeSet::new();
    for lam in e {
        if lam.extends(graph, mu) && lam.degree() != mu.degree() {
            let (_, rest) = lam.factorize(graph, mu.degree())?;
            out.insert(rest);
        }
    }
    Ok(out.into_iter().collect())
}

pub fn common_range(graph: &KGraph, e: &[Path]) -> Result<VertexId> {
    let first = e
        .first()
        .ok_or_else(|| Error::Parse("set of paths is empty".into()))?
        .range();
    for p in e {
        if p.range() != first {
            return Err(Error::RangeMismatch {
                expected: graph.vertex_name(first).into(),
                got: graph.vertex_name(p.range()).into(),
            });
        }
    }
    Ok(first)
}
