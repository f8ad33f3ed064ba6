//! Concrete operators on truncated path space. The basis is every path of
//! degree at most the cutoff, in canonical order, and a generator acts by
//!
//!   T_mu h_nu = c(mu, nu) h_{mu nu}   when composable and the composite
//!                                      still fits the cutoff, else 0.
//!
//! Span elements are realized by the direct two-leg formula rather than by
//! multiplying generator matrices, so comparing the two routes is a real
//! consistency check and not a tautology.
//!
//! Every relation check compresses both sides onto the subspace where the
//! truncation cannot interfere (composites stay inside the cutoff) and
//! reports the largest deviation there.

use std::collections::HashMap;


use crate::align::mce;
use crate::degree::Degree;
use crate::error::{Error, Result};
use crate::graph::{KGraph, VertexId};
use crate::path::{enumerate_paths_up_to, Path};
use crate::spanalg::SpanElement;
use crate::sparse::SparseMatrix;
use crate::twist::CategoricalCocycle;

pub struct TruncatedRep<'a> {
    graph: &'a KGraph,
    coc: &'a CategoricalCocycle,
    cutoff: Degree,
    basis: Vec<Path>,
    index: HashMap<Path, usize>,
}

impl<'a> TruncatedRep<'a> {
    pub fn new(graph: &'a KGraph, coc: &'a CategoricalCocycle, cutoff: Degree) -> Self {
        let mut basis = enumerate_paths_up_to(graph, None, &cutoff);
        basis.sort_by(|a, b| a.cmp_basis(b));
        let index = basis
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        TruncatedRep { graph, coc, cutoff, basis, index }
    }

    pub fn graph(&self) -> &KGraph {
        self.graph
    }

    pub fn cocycle(&self) -> &CategoricalCocycle {
        self.coc
    }

    pub fn cutoff(&self) -> &Degree {
        &self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Path] {
        &self.basis
    }

    pub fn index_of(&self, p: &Path) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn identity(&self) -> SparseMatrix {
        SparseMatrix::identity(self.dim())
    }

    /// The truncated generator T_mu, built directly from the action on
    /// basis vectors.
    pub fn op_generator(&self, mu: &Path) -> Result<SparseMatrix> {
        let mut triplets = Vec::new();
        for (col, nu) in self.basis.iter().enumerate() {
            if nu.range() != mu.source(self.graph) {
                continue;
            }
            if !mu.degree().plus(nu.degree()).leq(&self.cutoff) {
                continue;
            }
            let composite = mu.compose(self.graph, nu)?;
            let row = self.index[&composite];
            let w = self.coc.coeff(self.graph, mu, nu)?.to_complex();
            triplets.push((row, col, w));
        }
        Ok(SparseMatrix::from_triplets(self.dim(), self.dim(), triplets))
    }

    /// Realizes a span element: each term w t_mu t_nu^* contributes
    /// w c(mu, alpha) conj(c(nu, alpha)) at (mu alpha, nu alpha) for every
    /// continuation alpha keeping both legs inside the cutoff.
    pub fn represent(&self, x: &SpanElement) -> Result<SparseMatrix> {
        let mut triplets = Vec::new();
        for ((mu, nu), w) in x.terms() {
            let wz = w.to_complex();
            for alpha in &self.basis {
                if alpha.range() != mu.source(self.graph) {
                    continue;
                }
                if !mu.degree().plus(alpha.degree()).leq(&self.cutoff)
                    || !nu.degree().plus(alpha.degree()).leq(&self.cutoff)
                {
                    continue;
                }
                let row = self.index[&mu.compose(self.graph, alpha)?];
                let col = self.index[&nu.compose(self.graph, alpha)?];
                let phase = self
                    .coc
                    .coeff(self.graph, mu, alpha)?
                    .mul(&self.coc.coeff(self.graph, nu, alpha)?.conj())
                    .to_complex();
                triplets.push((row, col, wz * phase));
            }
        }
        Ok(SparseMatrix::from_triplets(self.dim(), self.dim(), triplets))
    }

    /// Mask of basis vectors with degree at most `hi`.
    pub fn mask_up_to(&self, hi: &Degree) -> Vec<bool> {
        self.basis.iter().map(|p| p.degree().leq(hi)).collect()
    }

    /// Mask of basis vectors with lo <= degree <= hi.
    pub fn mask_between(&self, lo: &Degree, hi: &Degree) -> Vec<bool> {
        self.basis
            .iter()
            .map(|p| lo.leq(p.degree()) && p.degree().leq(hi))
            .collect()
    }

    /// Operator norm of the compressed matrix.
    pub fn compressed_norm(&self, m: &SparseMatrix, keep: &[bool], seed: u64) -> f64 {
        m.compress(keep).operator_norm_estimate(seed)
    }

    /// Checks the generating relations on all paths of degree up to
    /// `margin`, compressing each comparison onto the subspace unaffected
    /// by the cutoff.
    pub fn check_tck(&self, margin: &Degree) -> Result<TckReport> {
        if !margin.leq(&self.cutoff) {
            return Err(Error::MarginTooLarge {
                margin: margin.coords().to_vec(),
                cutoff: self.cutoff.coords().to_vec(),
            });
        }
        let mut report = TckReport {
            cutoff: self.cutoff.clone(),
            margin: margin.clone(),
            unit_deviation: 0.0,
            product_deviation: 0.0,
            isometry_deviation: 0.0,
            alignment_deviation: 0.0,
            products_checked: 0,
            isometries_checked: 0,
            alignments_checked: 0,
        };

        // Vertex projections: pairwise orthogonal, summing to the identity.
        let verts: Vec<(VertexId, SparseMatrix)> = self
            .graph
            .vertices()
            .map(|v| {
                let q = SpanElement::vertex_projection(self.graph, v);
                Ok((v, self.represent(&q)?))
            })
            .collect::<Result<_>>()?;
        let mut total = SparseMatrix::zero(self.dim(), self.dim());
        for (_, m) in &verts {
            total = total.add(m)?;
        }
        report.unit_deviation = total.sub(&self.identity())?.max_abs();
        for (i, (_, a)) in verts.iter().enumerate() {
            for (_, b) in verts.iter().skip(i + 1) {
                report.unit_deviation = report.unit_deviation.max(a.mul(b)?.max_abs());
            }
        }

        let probes = enumerate_paths_up_to(self.graph, None, margin);
        let gens: HashMap<Path, SparseMatrix> = probes
            .iter()
            .map(|p| Ok((p.clone(), self.op_generator(p)?)))
            .collect::<Result<_>>()?;

        for mu in &probes {
            // Isometry relation, compressed away from the cutoff boundary.
            if !mu.is_vertex() {
                let keep = self.mask_up_to(&self.cutoff.minus(mu.degree())?);
                let lhs = gens[mu].adjoint().mul(&gens[mu])?;
                let rhs =
                    self.represent(&SpanElement::vertex_projection(self.graph, mu.source(self.graph)))?;
                let dev = lhs.sub(&rhs)?.compress(&keep).max_abs();
                report.isometry_deviation = report.isometry_deviation.max(dev);
                report.isometries_checked += 1;
            }
            for nu in &probes {
                // Multiplicativity: exact in the truncation, no compression
                // needed (short composites always fit when long ones do).
                if mu.source(self.graph) == nu.range() && !mu.is_vertex() && !nu.is_vertex() {
                    let lhs = gens[mu].mul(&gens[nu])?;
                    let composite = mu.compose(self.graph, nu)?;
                    let w = self.coc.coeff(self.graph, mu, nu)?;
                    let rhs = self.represent(
                        &SpanElement::term(self.graph, composite,
                            Path::vertex(self.graph, nu.source(self.graph)), w)?,
                    )?;
                    let dev = lhs.sub(&rhs)?.max_abs();
                    report.product_deviation = report.product_deviation.max(dev);
                    report.products_checked += 1;
                }
                // Alignment relation on a common range.
                if mu.range() == nu.range() && !mu.is_vertex() && !nu.is_vertex() {
                    let join = mu.degree().join(nu.degree());
                    if !join.leq(&self.cutoff) {
                        continue;
                    }
                    let keep = self.mask_up_to(&self.cutoff.minus(&join)?);
                    let lhs = gens[mu].adjoint().mul(&gens[nu])?;
                    let mut rhs = SparseMatrix::zero(self.dim(), self.dim());
                    for pi in mce(self.graph, mu, nu) {
                        let (_, alpha) = pi.factorize(self.graph, mu.degree())?;
                        let (_, beta) = pi.factorize(self.graph, nu.degree())?;
                        let w = self
                            .coc
                            .coeff(self.graph, mu, &alpha)?
                            .conj()
                            .mul(&self.coc.coeff(self.graph, nu, &beta)?);
                        let talpha = self.op_generator(&alpha)?;
                        let tbeta = self.op_generator(&beta)?;
                        rhs = rhs.add(&talpha.mul(&tbeta.adjoint())?.scale(w.to_complex()))?;
                    }
                    let dev = lhs.sub(&rhs)?.compress(&keep).max_abs();
                    report.alignment_deviation = report.alignment_deviation.max(dev);
                    report.alignments_checked += 1;
                }
            }
        }
        Ok(report)
    }

    /// Deviation between representing a product symbolically and taking the
    /// matrix product, compressed onto `keep`.
    pub fn product_law_deviation(
        &self,
        x: &SpanElement,
        y: &SpanElement,
        keep: &[bool],
    ) -> Result<f64> {
        let sym = self.represent(&x.multiply(self.graph, self.coc, y)?)?;
        let mat = self.represent(x)?.mul(&self.represent(y)?)?;
        Ok(sym.sub(&mat)?.compress(keep).max_abs())
    }
}

/// Largest degree appearing on either leg of any term.
pub fn max_leg_degree(rank: usize, x: &SpanElement) -> Degree {
    let mut d = Degree::zero(rank);
    for (mu, nu) in x.terms().keys() {
        d = d.join(mu.degree()).join(nu.degree());
    }
    d
}

#[derive(Clone, Debug)]
pub struct TckReport {
    pub cutoff: Degree,
    pub margin: Degree,
    pub unit_deviation: f64,
    pub product_deviation: f64,
    pub isometry_deviation: f64,
    pub alignment_deviation: f64,
    pub products_checked: usize,
    pub isometries_checked: usize,
    pub alignments_checked: usize,
}

impl TckReport {
    pub fn max_deviation(&self) -> f64 {
        self.unit_deviation
            .max(self.product_deviation)
            .max(self.isometry_deviation)
            .max(self.alignment_deviation)
    }

    pub fn passed(&self, tol: f64) -> bool {
        self.max_deviation() <= tol
    }
}
