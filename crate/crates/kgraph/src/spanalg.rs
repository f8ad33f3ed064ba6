//! Symbolic span algebra: finite linear combinations of terms t_mu t_nu^*
//! with s(mu) = s(nu), multiplied through the alignment product
//!
//!   (t_mu t_nu^*)(t_eta t_zeta^*) =
//!       sum over nu.alpha = eta.beta in MCE(nu, eta) of
//!       c(mu, alpha) conj(c(nu, alpha)) c(eta, beta) conj(c(zeta, beta))
//!       t_{mu alpha} t_{zeta beta}^*.
//!
//! With a rational cocycle every computation below stays in exact
//! arithmetic, so identities can be asserted rather than approximated.

use std::collections::{BTreeMap, BTreeSet};

use crate::align::{ext, is_pi_closed, mce, pi_closure, t_set};
use crate::error::{Error, Result};
use crate::graph::{KGraph, VertexId};
use crate::path::Path;
use crate::phase::Coeff;
use crate::twist::CategoricalCocycle;

/// An element of the span algebra. Terms are keyed by the ordered pair
/// (mu, nu) and carry their scalar coefficient; zero coefficients are never
/// stored.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct SpanElement {
    terms: BTreeMap<(Path, Path), Coeff>,
}

impl SpanElement {
    pub fn zero() -> Self {
        SpanElement::default()
    }

    /// Single term w * t_mu t_nu^*. The legs must share a source.
    pub fn term(graph: &KGraph, mu: Path, nu: Path, w: Coeff) -> Result<Self> {
        if mu.source(graph) != nu.source(graph) {
            return Err(Error::SourceMismatch(
                graph.vertex_name(mu.source(graph)).into(),
                graph.vertex_name(nu.source(graph)).into(),
            ));
        }
        let mut out = SpanElement::zero();
        out.insert_add((mu, nu), w);
        Ok(out)
    }

    /// The generator t_mu = t_mu t_{s(mu)}^*.
    pub fn generator(graph: &KGraph, mu: &Path) -> Self {
        let s = Path::vertex(graph, mu.source(graph));
        let mut out = SpanElement::zero();
        out.insert_add((mu.clone(), s), Coeff::one());
        out
    }

    /// The adjoint generator t_mu^*.
    pub fn adjoint_generator(graph: &KGraph, mu: &Path) -> Self {
        SpanElement::generator(graph, mu).adjoint()
    }

    /// The range projection q_lambda = t_lambda t_lambda^*.
    pub fn projection(_graph: &KGraph, lambda: &Path) -> Self {
        let mut out = SpanElement::zero();
        out.insert_add((lambda.clone(), lambda.clone()), Coeff::one());
        out
    }

    pub fn vertex_projection(graph: &KGraph, v: VertexId) -> Self {
        Self::projection(graph, &Path::vertex(graph, v))
    }

    pub fn terms(&self) -> &BTreeMap<(Path, Path), Coeff> {
        &self.terms
    }

    pub fn is_exactly_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest coefficient magnitude; zero for the empty element.
    pub fn max_coeff_norm(&self) -> f64 {
        self.terms.values().map(Coeff::norm).fold(0.0, f64::max)
    }

    fn insert_add(&mut self, key: (Path, Path), w: Coeff) {
        if w.is_exactly_zero() {
            return;
        }
        match self.terms.get(&key) {
            Some(old) => {
                let sum = old.add(&w);
                if sum.is_exactly_zero() {
                    self.terms.remove(&key);
                } else {
                    self.terms.insert(key, sum);
                }
            }
            None => {
                self.terms.insert(key, w);
            }
        }
    }

    pub fn add(&self, other: &SpanElement) -> SpanElement {
        let mut out = self.clone();
        for (k, w) in &other.terms {
            out.insert_add(k.clone(), w.clone());
        }
        out
    }

    pub fn neg(&self) -> SpanElement {
        SpanElement {
            terms: self.terms.iter().map(|(k, w)| (k.clone(), w.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &SpanElement) -> SpanElement {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Coeff) -> SpanElement {
        let mut out = SpanElement::zero();
        for (k, w) in &self.terms {
            out.insert_add(k.clone(), w.mul(c));
        }
        out
    }

    /// The *-operation: (w t_mu t_nu^*)^* = conj(w) t_nu t_mu^*.
    pub fn adjoint(&self) -> SpanElement {
        let mut out = SpanElement::zero();
        for ((mu, nu), w) in &self.terms {
            out.insert_add((nu.clone(), mu.clone()), w.conj());
        }
        out
    }

    /// Product through the alignment formula above.
    pub fn multiply(
        &self,
        graph: &KGraph,
        coc: &CategoricalCocycle,
        other: &SpanElement,
    ) -> Result<SpanElement> {
        let mut out = SpanElement::zero();
        for ((mu, nu), w1) in &self.terms {
            for ((eta, zeta), w2) in &other.terms {
                for pi in mce(graph, nu, eta) {
                    let (_, alpha) = pi.factorize(graph, nu.degree())?;
                    let (_, beta) = pi.factorize(graph, eta.degree())?;
                    let phase = coc
                        .coeff(graph, mu, &alpha)?
                        .mul(&coc.coeff(graph, nu, &alpha)?.conj())
                        .mul(&coc.coeff(graph, eta, &beta)?)
                        .mul(&coc.coeff(graph, zeta, &beta)?.conj());
                    let new_mu = mu.compose(graph, &alpha)?;
                    let new_nu = zeta.compose(graph, &beta)?;
                    out.insert_add((new_mu, new_nu), w1.mul(w2).mul(&phase));
                }
            }
        }
        Ok(out)
    }

    /// Keeps the terms with d(mu) = d(nu): the image under averaging over
    /// the gauge action.
    pub fn gauge_part(&self) -> SpanElement {
        SpanElement {
            terms: self
                .terms
                .iter()
                .filter(|((mu, nu), _)| mu.degree() == nu.degree())
                .map(|(k, w)| (k.clone(), w.clone()))
                .collect(),
        }
    }

    /// Keeps the terms with mu = nu.
    pub fn diagonal_part(&self) -> SpanElement {
        self.filter_terms(|mu, nu| mu == nu)
    }

    /// Linear projection onto the terms satisfying `keep`.
    pub fn filter_terms(&self, keep: impl Fn(&Path, &Path) -> bool) -> SpanElement {
        SpanElement {
            terms: self
                .terms
                .iter()
                .filter(|((mu, nu), _)| keep(mu, nu))
                .map(|(k, w)| (k.clone(), w.clone()))
                .collect(),
        }
    }
}

/// The defect projection Delta^E = prod over lambda in E of
/// (q_v - q_lambda) at the vertex `v`. Every member of `E` must have range
/// `v`; the empty product is q_v itself. Expanding the product keeps all
/// coefficients free of phases because |c|^2 factors cancel exactly.
pub fn delta(
    graph: &KGraph,
    coc: &CategoricalCocycle,
    v: VertexId,
    e: &[Path],
) -> Result<SpanElement> {
    for p in e {
        if p.range() != v {
            return Err(Error::RangeMismatch {
                expected: graph.vertex_name(v).into(),
                got: graph.vertex_name(p.range()).into(),
            });
        }
    }
    let mut acc = SpanElement::vertex_projection(graph, v);
    for lam in e {
        let factor =
            SpanElement::vertex_projection(graph, v).sub(&SpanElement::projection(graph, lam));
        acc = acc.multiply(graph, coc, &factor)?;
    }
    Ok(acc)
}

/// Both sides of the commutation law Delta^E t_mu = t_mu Delta^{Ext(mu; E)},
/// for tests and diagnostics. The members of `E` must share the range of
/// `mu`.
pub fn ext_commutation(
    graph: &KGraph,
    coc: &CategoricalCocycle,
    e: &[Path],
    mu: &Path,
) -> Result<(SpanElement, SpanElement)> {
    let lhs = delta(graph, coc, mu.range(), e)?.multiply(
        graph,
        coc,
        &SpanElement::generator(graph, mu),
    )?;
    let tails = ext(graph, mu, e)?;
    let rhs = SpanElement::generator(graph, mu).multiply(
        graph,
        coc,
        &delta(graph, coc, mu.source(graph), &tails)?,
    )?;
    Ok((lhs, rhs))
}

/// The block Theta^E_{mu,nu} = t_mu Delta^{T(E; mu)} t_nu^*. Defined for a
/// set closed under the mixed-extension rule and legs of equal degree and
/// source; under those hypotheses the blocks multiply like matrix units.
pub fn theta_block(
    graph: &KGraph,
    coc: &CategoricalCocycle,
    e: &[Path],
    mu: &Path,
    nu: &Path,
) -> Result<SpanElement> {
    if mu.degree() != nu.degree() {
        return Err(Error::DimensionMismatch(format!(
            "block legs must have equal degree, got {:?} and {:?}",
            mu.degree(),
            nu.degree()
        )));
    }
    if mu.source(graph) != nu.source(graph) {
        return Err(Error::SourceMismatch(
            graph.vertex_name(mu.source(graph)).into(),
            graph.vertex_name(nu.source(graph)).into(),
        ));
    }
    if !is_pi_closed(graph, e)? {
        let closure = pi_closure(graph, e)?;
        let have: BTreeSet<&Path> = e.iter().collect();
        let missing = closure
            .iter()
            .find(|p| !have.contains(p))
            .map(|p| p.label(graph))
            .unwrap_or_default();
        return Err(Error::NotPiClosed(missing));
    }
    let tails = t_set(graph, e, mu)?;
    let middle = delta(graph, coc, mu.source(graph), &tails)?;
    SpanElement::generator(graph, mu)
        .multiply(graph, coc, &middle)?
        .multiply(graph, coc, &SpanElement::adjoint_generator(graph, nu))
}

/// Rewrites t_mu t_nu^* over the blocks of `e`:
///
///   t_mu t_nu^* = sum over alpha with mu.alpha in E of
///                 c(mu, alpha) conj(c(nu, alpha)) Theta^E_{mu alpha, nu alpha}
///
/// including the trivial alpha. Requires mu in `e` (so the trivial term is
/// a block), equal degrees, and a common source.
pub fn matrix_unit_expansion(
    graph: &KGraph,
    coc: &CategoricalCocycle,
    e: &[Path],
    mu: &Path,
    nu: &Path,
) -> Result<SpanElement> {
    if !e.contains(mu) {
        return Err(Error::NotMember(mu.label(graph)));
    }
    let mut alphas = vec![Path::vertex(graph, mu.source(graph))];
    alphas.extend(t_set(graph, e, mu)?);
    let mut out = SpanElement::zero();
    for alpha in &alphas {
        let w = coc
            .coeff(graph, mu, alpha)?
            .mul(&coc.coeff(graph, nu, alpha)?.conj());
        let block = theta_block(
            graph,
            coc,
            e,
            &mu.compose(graph, alpha)?,
            &nu.compose(graph, alpha)?,
        )?;
        out = out.add(&block.scale(&w));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::path::parse_path;
    use crate::phase::PhaseAngle;
    use crate::samples;

    fn setup() -> (KGraph, CategoricalCocycle) {
        (
            samples::torus_2d(),
            samples::bicharacter_2d(PhaseAngle::rational(1, 3)),
        )
    }

    #[test]
    fn twisted_commutation_of_generators() {
        let (g, c) = setup();
        let ta = SpanElement::generator(&g, &parse_path(&g, "a").unwrap());
        let tb = SpanElement::generator(&g, &parse_path(&g, "b").unwrap());
        let ab = tb.multiply(&g, &c, &ta).unwrap();
        let ba = ta.multiply(&g, &c, &tb).unwrap();
        // t_b t_a picks up the angle theta_21 relative to t_a t_b.
        let rotated = ba.scale(&Coeff::from_phase(&PhaseAngle::rational(1, 3)));
        assert_eq!(ab, rotated);
        assert_ne!(ab, ba);
    }

    #[test]
    fn isometry_and_orthogonality() {
        let g2 = samples::two_loops();
        let c = CategoricalCocycle::trivial(1);
        let te = SpanElement::generator(&g2, &parse_path(&g2, "e").unwrap());
        let tf = SpanElement::generator(&g2, &parse_path(&g2, "f").unwrap());
        let v = g2.vertex("v").unwrap();
        let qe = te.adjoint().multiply(&g2, &c, &te).unwrap();
        assert_eq!(qe, SpanElement::vertex_projection(&g2, v));
        let cross = te.adjoint().multiply(&g2, &c, &tf).unwrap();
        assert!(cross.is_exactly_zero());
    }

    #[test]
    fn defect_projection_expansion() {
        let g2 = samples::two_loops();
        let c = CategoricalCocycle::trivial(1);
        let v = g2.vertex("v").unwrap();
        let e = parse_path(&g2, "e").unwrap();
        let f = parse_path(&g2, "f").unwrap();
        let d = delta(&g2, &c, v, &[e.clone(), f.clone()]).unwrap();
        // (q_v - q_e)(q_v - q_f) = q_v - q_e - q_f since q_e q_f = 0.
        let expect = SpanElement::vertex_projection(&g2, v)
            .sub(&SpanElement::projection(&g2, &e))
            .sub(&SpanElement::projection(&g2, &f));
        assert_eq!(d, expect);
    }

    #[test]
    fn delta_is_selfadjoint_idempotent() {
        let (g, c) = setup();
        let v = g.vertex("v").unwrap();
        let e = vec![parse_path(&g, "a").unwrap(), parse_path(&g, "b").unwrap()];
        let d = delta(&g, &c, v, &e).unwrap();
        assert_eq!(d, d.adjoint());
        assert_eq!(d, d.multiply(&g, &c, &d).unwrap());
    }

    #[test]
    fn defect_commutes_past_generators() {
        let (g, c) = setup();
        let a = parse_path(&g, "a").unwrap();
        let e = vec![parse_path(&g, "b").unwrap()];
        let (lhs, rhs) = ext_commutation(&g, &c, &e, &a).unwrap();
        assert_eq!(lhs, rhs);
        assert!(!lhs.is_exactly_zero());
    }

    #[test]
    fn blocks_behave_like_matrix_units() {
        let (g, c) = setup();
        let a = parse_path(&g, "a").unwrap();
        let b = parse_path(&g, "b").unwrap();
        let ab = parse_path(&g, "a.b").unwrap();
        let e = vec![b.clone(), a.clone(), ab.clone()];
        assert!(is_pi_closed(&g, &e).unwrap());
        let taa = theta_block(&g, &c, &e, &a, &a).unwrap();
        let tbb = theta_block(&g, &c, &e, &b, &b).unwrap();
        let tcc = theta_block(&g, &c, &e, &ab, &ab).unwrap();
        // Idempotent, mutually orthogonal.
        assert_eq!(taa.multiply(&g, &c, &taa).unwrap(), taa);
        assert!(taa.multiply(&g, &c, &tbb).unwrap().is_exactly_zero());
        assert!(tbb.multiply(&g, &c, &tcc).unwrap().is_exactly_zero());
        // Expansion of a projection over the blocks.
        let expansion = matrix_unit_expansion(&g, &c, &e, &a, &a).unwrap();
        assert_eq!(expansion, taa.add(&tcc));
        assert_eq!(
            expansion,
            SpanElement::projection(&g, &a),
            "q_a must expand as Theta_(a,a) + Theta_(ab,ab)"
        );
    }

    #[test]
    fn block_preconditions_are_enforced() {
        let (g, c) = setup();
        let a = parse_path(&g, "a").unwrap();
        let b = parse_path(&g, "b").unwrap();
        let not_closed = vec![a.clone(), b.clone()];
        assert!(matches!(
            theta_block(&g, &c, &not_closed, &a, &a),
            Err(Error::NotPiClosed(_))
        ));
        assert!(theta_block(&g, &c, &not_closed, &a, &b).is_err());
    }

    #[test]
    fn product_is_associative_on_mixed_terms() {
        let (g, c) = setup();
        let a = parse_path(&g, "a").unwrap();
        let b = parse_path(&g, "b").unwrap();
        let x = SpanElement::generator(&g, &a).add(&SpanElement::adjoint_generator(&g, &b));
        let y = SpanElement::projection(&g, &b).sub(&SpanElement::generator(&g, &b));
        let z = SpanElement::adjoint_generator(&g, &a)
            .add(&SpanElement::term(&g, a.clone(), b.clone(), Coeff::from_integer(2)).unwrap());
        let xy_z = x
            .multiply(&g, &c, &y)
            .unwrap()
            .multiply(&g, &c, &z)
            .unwrap();
        let x_yz = x
            .multiply(&g, &c, &y.multiply(&g, &c, &z).unwrap())
            .unwrap();
        assert_eq!(xy_z, x_yz);
    }

    #[test]
    fn adjoint_is_antimultiplicative() {
        let (g, c) = setup();
        let a = parse_path(&g, "a").unwrap();
        let b = parse_path(&g, "b").unwrap();
        let x = SpanElement::generator(&g, &a)
            .add(&SpanElement::term(&g, b.clone(), b.clone(), Coeff::from_phase(&PhaseAngle::rational(1, 7))).unwrap());
        let y = SpanElement::adjoint_generator(&g, &b).sub(&SpanElement::projection(&g, &a));
        let lhs = x.multiply(&g, &c, &y).unwrap().adjoint();
        let rhs = y.adjoint().multiply(&g, &c, &x.adjoint()).unwrap();
        assert_eq!(lhs, rhs);
    }
}
