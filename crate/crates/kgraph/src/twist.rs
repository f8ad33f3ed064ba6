//! Twisting data: bicharacter-style cocycles on Z^k, their pullbacks to a
//! graph with edge-weight corrections, subgroups of Z^k, and the
//! nondegeneracy test for the antisymmetrized form on a subgroup.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_rational::Ratio;


use crate::degree::Degree;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, KGraph};
use crate::path::{enumerate_paths_up_to, Path};
use crate::phase::{Coeff, PhaseAngle};

/// A 2-cocycle on Z^k given by a k-by-k matrix of angles:
/// c(m, n) = exp(2 pi i sum_ij theta[i][j] m_i n_j).
#[derive(Clone, Debug, PartialEq)]
pub struct TwoCocycleZk {
    k: usize,
    theta: Vec<Vec<PhaseAngle>>,
}

impl TwoCocycleZk {
    pub fn new(theta: Vec<Vec<PhaseAngle>>) -> Result<Self> {
        let k = theta.len();
        if k == 0 || theta.iter().any(|row| row.len() != k) {
            return Err(Error::DimensionMismatch(
                "angle matrix must be square and nonempty".into(),
            ));
        }
        Ok(TwoCocycleZk { k, theta })
    }

    pub fn trivial(k: usize) -> Self {
        TwoCocycleZk {
            k,
            theta: vec![vec![PhaseAngle::zero(); k]; k],
        }
    }

    pub fn rank(&self) -> usize {
        self.k
    }

    pub fn entries(&self) -> &[Vec<PhaseAngle>] {
        &self.theta
    }

    /// The angle of c(m, n). Exact whenever every entry that actually
    /// contributes (nonzero m_i n_j) is rational.
    pub fn eval(&self, m: &[i64], n: &[i64]) -> PhaseAngle {
        assert_eq!(m.len(), self.k, "group element has wrong rank");
        assert_eq!(n.len(), self.k, "group element has wrong rank");
        let mut acc = PhaseAngle::zero();
        for i in 0..self.k {
            for j in 0..self.k {
                let mult = m[i] * n[j];
                if mult != 0 {
                    acc = acc.add(&self.theta[i][j].scale(mult));
                }
            }
        }
        acc
    }

    pub fn eval_degrees(&self, m: &Degree, n: &Degree) -> PhaseAngle {
        let mi: Vec<i64> = m.coords().iter().map(|&x| x as i64).collect();
        let ni: Vec<i64> = n.coords().iter().map(|&x| x as i64).collect();
        self.eval(&mi, &ni)
    }

    /// The antisymmetrized matrix theta - theta^T, the angle data of
    /// c(m, n) * conj(c(n, m)).
    pub fn antisymmetrized(&self) -> TwoCocycleZk {
        let theta = (0..self.k)
            .map(|i| {
                (0..self.k)
                    .map(|j| self.theta[i][j].sub(&self.theta[j][i]))
                    .collect()
            })
            .collect();
        TwoCocycleZk { k: self.k, theta }
    }

    fn check_skew(&self, tol: f64) -> Result<()> {
        for i in 0..self.k {
            for j in i..self.k {
                if !self.theta[i][j].add(&self.theta[j][i]).is_zero_mod1(tol) {
                    return Err(Error::NotSkewSymmetric(i, j));
                }
            }
        }
        Ok(())
    }

    /// Decides whether the (skew-symmetric) form is nondegenerate on the
    /// subgroup `p`: nondegenerate means no nonzero m in p pairs trivially
    /// with all of p.
    ///
    /// When every pairing angle on the basis of `p` is rational the form is
    /// always degenerate on a nonzero subgroup, and a witness is found
    /// through a diagonalization of the integer pairing matrix mod the
    /// common denominator. With float angles the answer comes from the
    /// smallest singular value of the residue matrix, with an inconclusive
    /// band between the accept and reject thresholds.
    pub fn is_nondegenerate_on(&self, p: &ZkSubgroup) -> Result<Nondegeneracy> {
        if p.ambient_rank() != self.k {
            return Err(Error::DimensionMismatch(format!(
                "subgroup lives in Z^{}, form on Z^{}",
                p.ambient_rank(),
                self.k
            )));
        }
        self.check_skew(1e-12)?;
        let basis = p.basis();
        let l = basis.len();
        if l == 0 {
            return Ok(Nondegeneracy::Nondegenerate { sigma_min: None });
        }
        // pairing[j][i] = angle of the form at (g_i, g_j); a kernel vector x
        // gives the witness m = sum_i x_i g_i.
        let pairing: Vec<Vec<PhaseAngle>> = (0..l)
            .map(|j| (0..l).map(|i| self.eval(&basis[i], &basis[j])).collect())
            .collect();
        if pairing
            .iter()
            .all(|row| row.iter().all(|a| a.is_rational()))
        {
            let witness = rational_kernel_witness(&pairing, basis)?;
            for g in basis {
                assert!(
                    self.eval(&witness, g).is_zero_mod1(0.0),
                    "degeneracy witness failed verification"
                );
            }
            return Ok(Nondegeneracy::Degenerate { witness });
        }
        let breal: Vec<Vec<f64>> = pairing
            .iter()
            .map(|row| row.iter().map(|a| a.signed_turns()).collect())
            .collect();
        let mut gram = vec![vec![0.0; l]; l];
        for a in 0..l {
            for b in 0..l {
                gram[a][b] = (0..l).map(|r| breal[r][a] * breal[r][b]).sum();
            }
        }
        let (eigs, vecs) = jacobi_eigen(gram);
        let (arg, min_eig) = eigs
            .iter()
            .copied()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        let sigma_min = min_eig.max(0.0).sqrt();
        if sigma_min > 1e-6 {
            return Ok(Nondegeneracy::Nondegenerate {
                sigma_min: Some(sigma_min),
            });
        }
        if sigma_min < 1e-9 {
            let dir: Vec<f64> = (0..l).map(|i| vecs[i][arg]).collect();
            if let Some(witness) = float_kernel_witness(&breal, &dir, basis, |m| {
                basis.iter().all(|g| self.eval(m, g).is_zero_mod1(1e-9))
            }) {
                return Ok(Nondegeneracy::Degenerate { witness });
            }
        }
        Ok(Nondegeneracy::NumericallyInconclusive { sigma_min })
    }
}

/// Outcome of the nondegeneracy test. `sigma_min` is reported when the
/// decision came from the float path; a `witness` pairs trivially with the
/// whole subgroup.
#[derive(Clone, Debug, PartialEq)]
pub enum Nondegeneracy {
    Nondegenerate { sigma_min: Option<f64> },
    Degenerate { witness: Vec<i64> },
    NumericallyInconclusive { sigma_min: f64 },
}

/// All-rational pairing on a nonzero subgroup: the kernel mod the common
/// denominator q is a full-rank lattice containing q Z^l, so a witness
/// always exists. The reported witness is canonical: the ambient kernel
/// lattice is put in Hermite form and the first basis row of minimal 1-norm
/// is returned.
fn rational_kernel_witness(pairing: &[Vec<PhaseAngle>], basis: &[Vec<i64>]) -> Result<Vec<i64>> {
    let l = pairing.len();
    let rat = |a: &PhaseAngle| match a {
        PhaseAngle::Rational(r) => *r,
        PhaseAngle::Float(_) => unreachable!("checked rational"),
    };
    let mut q: i64 = 1;
    for row in pairing {
        for a in row {
            q = q.lcm(rat(a).denom());
        }
    }
    let a_int: Vec<Vec<i64>> = pairing
        .iter()
        .map(|row| {
            row.iter()
                .map(|a| (rat(a) * Ratio::from_integer(q)).to_integer())
                .collect()
        })
        .collect();
    let (diag, v) = diagonalize_columns(a_int);
    let ambient = basis[0].len();
    // Kernel basis in coefficient space: (q / gcd(d_i, q)) * V[:, i].
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for i in 0..l {
        let g = diag[i].abs().gcd(&q);
        let scale = q / g;
        let coeffs: Vec<i64> = (0..l).map(|r| scale * v[r][i]).collect();
        let mut m = vec![0i64; ambient];
        for (c, gvec) in coeffs.iter().zip(basis) {
            for (slot, entry) in m.iter_mut().zip(gvec) {
                *slot += c * entry;
            }
        }
        rows.push(m);
    }
    let hnf = hermite_row_basis(rows, ambient);
    let best = hnf
        .iter()
        .min_by_key(|r| r.iter().map(|x| x.unsigned_abs()).sum::<u64>())
        .cloned()
        .ok_or_else(|| Error::DimensionMismatch("empty kernel lattice".into()))?;
    Ok(best)
}

fn float_kernel_witness(
    breal: &[Vec<f64>],
    dir: &[f64],
    basis: &[Vec<i64>],
    verify: impl Fn(&[i64]) -> bool,
) -> Option<Vec<i64>> {
    let l = breal.len();
    let peak = dir.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    if peak == 0.0 {
        return None;
    }
    for t in 1..=1000i64 {
        let x: Vec<i64> = dir
            .iter()
            .map(|c| (c / peak * t as f64).round() as i64)
            .collect();
        if x.iter().all(|&v| v == 0) {
            continue;
        }
        let near_kernel = (0..l).all(|j| {
            let s: f64 = (0..l).map(|i| breal[j][i] * x[i] as f64).sum();
            let r = s.rem_euclid(1.0);
            r.min(1.0 - r) < 1e-9
        });
        if !near_kernel {
            continue;
        }
        let ambient = basis[0].len();
        let mut m = vec![0i64; ambient];
        for (c, gvec) in x.iter().zip(basis) {
            for (slot, entry) in m.iter_mut().zip(gvec) {
                *slot += c * entry;
            }
        }
        let m = canonical_sign(m);
        if verify(&m) {
            return Some(m);
        }
    }
    None
}

fn canonical_sign(mut m: Vec<i64>) -> Vec<i64> {
    if let Some(first) = m.iter().find(|&&x| x != 0) {
        if *first < 0 {
            for x in &mut m {
                *x = -*x;
            }
        }
    }
    m
}

/// A subgroup of Z^k held as a canonical Hermite row basis: pivots positive
/// and strictly right-moving, entries above each pivot reduced into
/// [0, pivot). Equal subgroups compare equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZkSubgroup {
    k: usize,
    rows: Vec<Vec<i64>>,
}

impl ZkSubgroup {
    pub fn from_generators(k: usize, generators: &[Vec<i64>]) -> Result<Self> {
        for g in generators {
            if g.len() != k {
                return Err(Error::DimensionMismatch(format!(
                    "generator of length {} in Z^{}",
                    g.len(),
                    k
                )));
            }
        }
        let rows = hermite_row_basis(generators.to_vec(), k);
        Ok(ZkSubgroup { k, rows })
    }

    pub fn trivial(k: usize) -> Self {
        ZkSubgroup { k, rows: Vec::new() }
    }

    pub fn full(k: usize) -> Self {
        let rows = (0..k)
            .map(|i| {
                let mut r = vec![0i64; k];
                r[i] = 1;
                r
            })
            .collect();
        ZkSubgroup { k, rows }
    }

    pub fn ambient_rank(&self) -> usize {
        self.k
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn is_trivial(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.k && self.rows.iter().enumerate().all(|(i, r)| {
            r.iter().enumerate().all(|(j, &x)| x == i64::from(i == j))
        })
    }

    pub fn contains(&self, m: &[i64]) -> bool {
        if m.len() != self.k {
            return false;
        }
        let mut x = m.to_vec();
        for row in &self.rows {
            let c = row.iter().position(|&v| v != 0).expect("basis row is nonzero");
            let p = row[c];
            if x[c] % p != 0 {
                return false;
            }
            let a = x[c] / p;
            if a != 0 {
                for j in 0..self.k {
                    x[j] -= a * row[j];
                }
            }
        }
        x.iter().all(|&v| v == 0)
    }
}

/// Canonical Hermite form of the row span. Width is the ambient rank;
/// returns the nonzero basis rows.
pub fn hermite_row_basis(mut rows: Vec<Vec<i64>>, width: usize) -> Vec<Vec<i64>> {
    rows.retain(|r| r.iter().any(|&x| x != 0));
    let mut r = 0;
    for col in 0..width {
        loop {
            let mut best: Option<(usize, i64)> = None;
            for i in r..rows.len() {
                let v = rows[i][col];
                if v != 0 && best.is_none_or(|(_, b)| v.abs() < b.abs()) {
                    best = Some((i, v));
                }
            }
            let Some((bi, _)) = best else { break };
            rows.swap(r, bi);
            let p = rows[r][col];
            let mut again = false;
            for i in r + 1..rows.len() {
                if rows[i][col] != 0 {
                    let q = rows[i][col].div_euclid(p);
                    for j in 0..width {
                        let sub = q * rows[r][j];
                        rows[i][j] -= sub;
                    }
                    if rows[i][col] != 0 {
                        again = true;
                    }
                }
            }
            if !again {
                break;
            }
        }
        if r < rows.len() && rows[r][col] != 0 {
            if rows[r][col] < 0 {
                for x in rows[r].iter_mut() {
                    *x = -*x;
                }
            }
            let p = rows[r][col];
            for i in 0..r {
                let q = rows[i][col].div_euclid(p);
                if q != 0 {
                    for j in 0..width {
                        let sub = q * rows[r][j];
                        rows[i][j] -= sub;
                    }
                }
            }
            r += 1;
        }
    }
    rows.truncate(r);
    rows
}

/// Unimodular diagonalization by row and column operations; returns the
/// diagonal and the accumulated column transform V, so that the original
/// matrix A satisfies (row ops) * A * V = diag. Only V is tracked since the
/// kernel computation never needs the row transform.
fn diagonalize_columns(mut a: Vec<Vec<i64>>) -> (Vec<i64>, Vec<Vec<i64>>) {
    let n = a.len();
    let mut v: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut row = vec![0i64; n];
            row[i] = 1;
            row
        })
        .collect();
    for t in 0..n {
        loop {
            let mut best: Option<(usize, usize, i64)> = None;
            for i in t..n {
                for j in t..n {
                    let x = a[i][j];
                    if x != 0 && best.is_none_or(|(_, _, b)| x.abs() < b.abs()) {
                        best = Some((i, j, x));
                    }
                }
            }
            let Some((bi, bj, _)) = best else { break };
            a.swap(t, bi);
            if bj != t {
                for row in a.iter_mut() {
                    row.swap(t, bj);
                }
                for row in v.iter_mut() {
                    row.swap(t, bj);
                }
            }
            let p = a[t][t];
            let mut dirty = false;
            for i in t + 1..n {
                if a[i][t] != 0 {
                    let q = a[i][t].div_euclid(p);
                    for j in t..n {
                        let sub = q * a[t][j];
                        a[i][j] -= sub;
                    }
                    if a[i][t] != 0 {
                        dirty = true;
                    }
                }
            }
            for j in t + 1..n {
                if a[t][j] != 0 {
                    let q = a[t][j].div_euclid(p);
                    for i in 0..n {
                        let sub = q * a[i][t];
                        a[i][j] -= sub;
                    }
                    for i in 0..n {
                        let sub = q * v[i][t];
                        v[i][j] -= sub;
                    }
                    if a[t][j] != 0 {
                        dirty = true;
                    }
                }
            }
            if !dirty {
                break;
            }
        }
    }
    ((0..n).map(|i| a[i][i]).collect(), v)
}

/// Cyclic Jacobi diagonalization of a symmetric matrix. Returns the
/// eigenvalue estimates and the orthogonal matrix of eigenvectors (columns).
pub fn jacobi_eigen(mut s: Vec<Vec<f64>>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = s.len();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut row = vec![0.0; n];
            row[i] = 1.0;
            row
        })
        .collect();
    for _ in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += s[p][q] * s[p][q];
            }
        }
        if off.sqrt() < 1e-14 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if s[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = 0.5 * (s[q][q] - s[p][p]) / s[p][q];
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * c;
                for i in 0..n {
                    let (sip, siq) = (s[i][p], s[i][q]);
                    s[i][p] = c * sip - sn * siq;
                    s[i][q] = sn * sip + c * siq;
                }
                for j in 0..n {
                    let (spj, sqj) = (s[p][j], s[q][j]);
                    s[p][j] = c * spj - sn * sqj;
                    s[q][j] = sn * spj + c * sqj;
                }
                for i in 0..n {
                    let (vip, viq) = (v[i][p], v[i][q]);
                    v[i][p] = c * vip - sn * viq;
                    v[i][q] = sn * vip + c * viq;
                }
            }
        }
    }
    ((0..n).map(|i| s[i][i]).collect(), v)
}

/// A categorical 2-cocycle on a k-graph: a Z^k cocycle pulled back through
/// the degree map, corrected by an edge-weight coboundary. The weight of a
/// path is the sum of its edge weights over the normal-form word, and
///
///   value(mu, nu) = pullback(d mu, d nu) + b(mu) + b(nu) - b(mu nu).
#[derive(Clone, Debug)]
pub struct CategoricalCocycle {
    pullback: TwoCocycleZk,
    weights: BTreeMap<EdgeId, PhaseAngle>,
}

impl CategoricalCocycle {
    pub fn bicharacter(pullback: TwoCocycleZk) -> Self {
        CategoricalCocycle {
            pullback,
            weights: BTreeMap::new(),
        }
    }

    pub fn with_edge_weights(pullback: TwoCocycleZk, weights: BTreeMap<EdgeId, PhaseAngle>) -> Self {
        CategoricalCocycle { pullback, weights }
    }

    pub fn trivial(k: usize) -> Self {
        Self::bicharacter(TwoCocycleZk::trivial(k))
    }

    pub fn pullback(&self) -> &TwoCocycleZk {
        &self.pullback
    }

    pub fn edge_weights(&self) -> &BTreeMap<EdgeId, PhaseAngle> {
        &self.weights
    }

    pub fn is_exact(&self) -> bool {
        self.pullback
            .entries()
            .iter()
            .all(|row| row.iter().all(|a| a.is_rational()))
            && self.weights.values().all(|a| a.is_rational())
    }

    /// Sum of edge weights along the word of `path`.
    pub fn weight_sum(&self, path: &Path) -> PhaseAngle {
        let mut acc = PhaseAngle::zero();
        for e in path.word() {
            if let Some(w) = self.weights.get(e) {
                acc = acc.add(w);
            }
        }
        acc
    }

    /// The cocycle angle on a composable pair.
    pub fn value(&self, graph: &KGraph, mu: &Path, nu: &Path) -> Result<PhaseAngle> {
        let composite = mu.compose(graph, nu)?;
        let base = self.pullback.eval_degrees(mu.degree(), nu.degree());
        Ok(base
            .add(&self.weight_sum(mu))
            .add(&self.weight_sum(nu))
            .sub(&self.weight_sum(&composite)))
    }

    pub fn coeff(&self, graph: &KGraph, mu: &Path, nu: &Path) -> Result<Coeff> {
        Ok(Coeff::from_phase(&self.value(graph, mu, nu)?))
    }
}

/// Result of sweeping the cocycle identity and the unit-normalization law
/// over all composable triples with factor degrees bounded by `bound`.
#[derive(Clone, Debug)]
pub struct CocycleCheck {
    pub triples_checked: usize,
    pub identity_failure: Option<(Path, Path, Path)>,
    pub normalization_failure: Option<Path>,
}

impl CocycleCheck {
    pub fn passed(&self) -> bool {
        self.identity_failure.is_none() && self.normalization_failure.is_none()
    }
}

/// Checks c(lambda, mu) + c(lambda mu, nu) = c(mu, nu) + c(lambda, mu nu)
/// for every composable triple whose factors each have degree <= `bound`,
/// plus vanishing against identity morphisms. Generic over the evaluator so
/// callers can probe maps that are not built from [`CategoricalCocycle`].
pub fn validate_cocycle_identity<F>(graph: &KGraph, bound: &Degree, eval: F) -> Result<CocycleCheck>
where
    F: Fn(&KGraph, &Path, &Path) -> Result<PhaseAngle>,
{
    let all = enumerate_paths_up_to(graph, None, bound);
    let mut checked = 0usize;
    let mut identity_failure = None;
    let mut normalization_failure = None;
    for p in &all {
        let rv = Path::vertex(graph, p.range());
        let sv = Path::vertex(graph, p.source(graph));
        if !eval(graph, &rv, p)?.is_zero_mod1(1e-9) || !eval(graph, p, &sv)?.is_zero_mod1(1e-9) {
            normalization_failure = Some(p.clone());
            break;
        }
    }
    'outer: for lambda in &all {
        for mu in all.iter().filter(|m| m.range() == lambda.source(graph)) {
            let lm = lambda.compose(graph, mu)?;
            for nu in all.iter().filter(|n| n.range() == mu.source(graph)) {
                let mn = mu.compose(graph, nu)?;
                let lhs = eval(graph, lambda, mu)?.add(&eval(graph, &lm, nu)?);
                let rhs = eval(graph, mu, nu)?.add(&eval(graph, lambda, &mn)?);
                checked += 1;
                if !lhs.sub(&rhs).is_zero_mod1(1e-9) {
                    identity_failure = Some((lambda.clone(), mu.clone(), nu.clone()));
                    break 'outer;
                }
            }
        }
    }
    Ok(CocycleCheck {
        triples_checked: checked,
        identity_failure,
        normalization_failure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn torus2() -> KGraph {
        KGraph::new(
            2,
            vec!["v".into()],
            vec![
                ("a".into(), 1, "v".into(), "v".into()),
                ("b".into(), 2, "v".into(), "v".into()),
            ],
            vec![("a".into(), "b".into(), "b".into(), "a".into())],
        )
        .unwrap()
    }

    fn theta_one_third() -> TwoCocycleZk {
        TwoCocycleZk::new(vec![
            vec![PhaseAngle::zero(), PhaseAngle::zero()],
            vec![PhaseAngle::rational(1, 3), PhaseAngle::zero()],
        ])
        .unwrap()
    }

    #[test]
    fn hermite_is_canonical() {
        let a = hermite_row_basis(vec![vec![2, 2], vec![2, -2]], 2);
        let b = hermite_row_basis(vec![vec![2, -2], vec![4, 0]], 2);
        assert_eq!(a, b);
        assert_eq!(a, vec![vec![2, 2], vec![0, 4]]);
    }

    #[test]
    fn subgroup_membership() {
        let p = ZkSubgroup::from_generators(2, &[vec![3, 0], vec![0, 3]]).unwrap();
        assert!(p.contains(&[3, -3]));
        assert!(!p.contains(&[1, 0]));
        assert!(ZkSubgroup::full(2).is_full());
        assert!(ZkSubgroup::trivial(2).is_trivial());
        let diag = ZkSubgroup::from_generators(2, &[vec![1, 1]]).unwrap();
        assert_eq!(diag.rank(), 1);
        assert!(diag.contains(&[-2, -2]));
        assert!(!diag.contains(&[1, -1]));
    }

    #[test]
    fn diagonalization_kernel_property() {
        let a = vec![vec![0, 1], vec![-1, 0]];
        let (diag, v) = diagonalize_columns(a.clone());
        // Each column scaled by q/gcd(d_i, q) must satisfy A x = 0 mod q.
        let q = 2i64;
        for i in 0..2 {
            let scale = q / diag[i].abs().gcd(&q);
            let x: Vec<i64> = (0..2).map(|r| scale * v[r][i]).collect();
            for row in &a {
                let s: i64 = row.iter().zip(&x).map(|(a, b)| a * b).sum();
                assert_eq!(s.rem_euclid(q), 0);
            }
        }
    }

    #[test]
    fn rational_form_is_degenerate_with_canonical_witness() {
        let theta = TwoCocycleZk::new(vec![
            vec![PhaseAngle::zero(), PhaseAngle::zero()],
            vec![PhaseAngle::rational(1, 2), PhaseAngle::zero()],
        ])
        .unwrap();
        let skew = theta.antisymmetrized();
        match skew.is_nondegenerate_on(&ZkSubgroup::full(2)).unwrap() {
            Nondegeneracy::Degenerate { witness } => assert_eq!(witness, vec![2, 0]),
            other => panic!("expected degenerate, got {other:?}"),
        }
    }

    #[test]
    fn golden_angle_is_nondegenerate() {
        let theta = TwoCocycleZk::new(vec![
            vec![PhaseAngle::zero(), PhaseAngle::zero()],
            vec![PhaseAngle::float(0.6180339887498949), PhaseAngle::zero()],
        ])
        .unwrap();
        let skew = theta.antisymmetrized();
        match skew.is_nondegenerate_on(&ZkSubgroup::full(2)).unwrap() {
            Nondegeneracy::Nondegenerate { sigma_min: Some(s) } => assert!(s > 1e-6),
            other => panic!("expected nondegenerate, got {other:?}"),
        }
    }

    #[test]
    fn rank_one_restriction_is_degenerate() {
        let skew = theta_one_third().antisymmetrized();
        let p = ZkSubgroup::from_generators(2, &[vec![1, 1]]).unwrap();
        match skew.is_nondegenerate_on(&p).unwrap() {
            Nondegeneracy::Degenerate { witness } => assert_eq!(witness, vec![1, 1]),
            other => panic!("expected degenerate, got {other:?}"),
        }
    }

    #[test]
    fn non_skew_input_is_rejected() {
        let theta = theta_one_third();
        assert_eq!(
            theta.is_nondegenerate_on(&ZkSubgroup::full(2)),
            Err(Error::NotSkewSymmetric(0, 1))
        );
    }

    #[test]
    fn bicharacter_satisfies_cocycle_identity() {
        let g = torus2();
        let c = CategoricalCocycle::bicharacter(theta_one_third());
        let report = validate_cocycle_identity(&g, &Degree::new(vec![2, 2]), |gr, m, n| {
            c.value(gr, m, n)
        })
        .unwrap();
        assert!(report.passed(), "{report:?}");
        assert!(report.triples_checked > 0);
    }

    #[test]
    fn edge_weight_correction_still_satisfies_identity() {
        let g = torus2();
        let a = g.edge_by_name("a").unwrap();
        let mut w = BTreeMap::new();
        w.insert(a, PhaseAngle::rational(1, 4));
        let c = CategoricalCocycle::with_edge_weights(theta_one_third(), w);
        let report = validate_cocycle_identity(&g, &Degree::new(vec![2, 2]), |gr, m, n| {
            c.value(gr, m, n)
        })
        .unwrap();
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn corrupted_evaluator_is_caught() {
        let g = torus2();
        let c = CategoricalCocycle::bicharacter(theta_one_third());
        let report = validate_cocycle_identity(&g, &Degree::new(vec![2, 2]), |gr, m, n| {
            let base = c.value(gr, m, n)?;
            // Break the identity on pairs of strictly positive degree.
            if !m.is_vertex() && !n.is_vertex() && m.degree().get(0) > 0 && n.degree().get(1) > 0 {
                Ok(base.add(&PhaseAngle::rational(1, 5)))
            } else {
                Ok(base)
            }
        })
        .unwrap();
        assert!(!report.passed());
    }

    #[test]
    fn antisymmetrized_values() {
        let skew = theta_one_third().antisymmetrized();
        // Pairing of the generators picks up the full asymmetry.
        assert_eq!(skew.eval(&[1, 0], &[0, 1]), PhaseAngle::rational(2, 3));
        assert_eq!(skew.eval(&[0, 1], &[1, 0]), PhaseAngle::rational(1, 3));
        // Any element pairs trivially with itself and its negative.
        assert_eq!(skew.eval(&[1, -1], &[-1, 1]), PhaseAngle::zero());
        assert_eq!(skew.eval(&[2, 3], &[2, 3]), PhaseAngle::zero());
    }
}
