//! Simplicity verdicts assembled from cofinality, aperiodicity, and
//! nondegeneracy of the antisymmetrized form on the periodicity group,
//! together with the compressed unitaries that realize the periodicity
//! action and their commutation phases.

use std::collections::BTreeSet;

use num_complex::Complex64;

use crate::degree::Degree;
use crate::error::{Error, Result};
use crate::graph::KGraph;
use crate::boundary::BoundedFilter;
use crate::path::Path;
use crate::pathrep::TruncatedRep;
use crate::periodicity::{
    is_aperiodic, is_cofinal, per_group, pos_neg_parts, theta_between, Aperiodicity, Cofinality,
    PeriodicityData,
};
use crate::phase::Coeff;
use crate::sparse::SparseMatrix;
use crate::spanalg::SpanElement;
use crate::twist::{CategoricalCocycle, Nondegeneracy, ZkSubgroup};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Simple,
    NotSimple,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Grounds {
    AperiodicCofinal,
    NondegenerateCofinal,
    NotCofinal,
    NCTorusSpecialCase,
    InsufficientCriteria,
}

impl Grounds {
    pub fn as_str(&self) -> &'static str {
        match self {
            Grounds::AperiodicCofinal => "aperiodic-cofinal",
            Grounds::NondegenerateCofinal => "nondegenerate-cofinal",
            Grounds::NotCofinal => "not-cofinal",
            Grounds::NCTorusSpecialCase => "nc-torus-special-case",
            Grounds::InsufficientCriteria => "insufficient-criteria",
        }
    }
}

/// A verdict plus the evidence it rests on, enough to re-derive every
/// supporting fact from scratch.
#[derive(Clone, Debug)]
pub struct SimplicityVerdict {
    pub verdict: Verdict,
    pub grounds: Grounds,
    pub depth: u32,
    pub cofinality: Cofinality,
    pub aperiodicity: Option<Aperiodicity>,
    pub periodicity: Option<PeriodicityData>,
    pub nondegeneracy: Option<Nondegeneracy>,
}

/// Is the graph a single vertex with exactly one edge of each color?
fn is_nc_torus(graph: &KGraph) -> bool {
    graph.num_vertices() == 1
        && graph
            .vertices()
            .next()
            .map(|v| (0..graph.rank()).all(|c| graph.edges_into(v, c).len() == 1))
            .unwrap_or(false)
}

/// Decision tree over the sufficient criteria. Positive verdicts are only
/// issued from exact or guard-protected evidence; everything else is
/// `Unknown`. Enlarging `depth` can resolve an `Unknown` but never flips a
/// settled verdict.
pub fn decide(graph: &KGraph, c: &CategoricalCocycle, depth: u32) -> Result<SimplicityVerdict> {
    if !graph.has_no_sources() {
        return Err(Error::UnsupportedGraphClass(
            "the decision tree needs a graph with no sources".into(),
        ));
    }
    let cofinality = is_cofinal(graph)?;
    if matches!(cofinality, Cofinality::NotCofinal { .. }) {
        return Ok(SimplicityVerdict {
            verdict: Verdict::NotSimple,
            grounds: Grounds::NotCofinal,
            depth,
            cofinality,
            aperiodicity: None,
            periodicity: None,
            nondegeneracy: None,
        });
    }
    let aperiodicity = is_aperiodic(graph, depth)?;
    if aperiodicity == Aperiodicity::Aperiodic {
        return Ok(SimplicityVerdict {
            verdict: Verdict::Simple,
            grounds: Grounds::AperiodicCofinal,
            depth,
            cofinality,
            aperiodicity: Some(aperiodicity),
            periodicity: None,
            nondegeneracy: None,
        });
    }
    let pdata = per_group(graph, depth)?;
    let ccs = c.pullback().antisymmetrized();
    let nd = ccs.is_nondegenerate_on(&pdata.per)?;
    // The computed group is only trusted as the full periodicity group
    // under the same floor that guards aperiodicity; a proper subgroup
    // could be nondegenerate while the full group is not.
    let per_trusted = pdata.complete && depth as usize >= graph.num_vertices();
    if per_trusted && matches!(nd, Nondegeneracy::Nondegenerate { .. }) {
        return Ok(SimplicityVerdict {
            verdict: Verdict::Simple,
            grounds: Grounds::NondegenerateCofinal,
            depth,
            cofinality,
            aperiodicity: Some(aperiodicity),
            periodicity: Some(pdata),
            nondegeneracy: Some(nd),
        });
    }
    if is_nc_torus(graph) {
        let full = ccs.is_nondegenerate_on(&ZkSubgroup::full(graph.rank()))?;
        let verdict = match &full {
            Nondegeneracy::Nondegenerate { .. } => Verdict::Simple,
            Nondegeneracy::Degenerate { .. } => Verdict::NotSimple,
            Nondegeneracy::NumericallyInconclusive { .. } => Verdict::Unknown,
        };
        let grounds = if verdict == Verdict::Unknown {
            Grounds::InsufficientCriteria
        } else {
            Grounds::NCTorusSpecialCase
        };
        return Ok(SimplicityVerdict {
            verdict,
            grounds,
            depth,
            cofinality,
            aperiodicity: Some(aperiodicity),
            periodicity: Some(pdata),
            nondegeneracy: Some(full),
        });
    }
    Ok(SimplicityVerdict {
        verdict: Verdict::Unknown,
        grounds: Grounds::InsufficientCriteria,
        depth,
        cofinality,
        aperiodicity: Some(aperiodicity),
        periodicity: Some(pdata),
        nondegeneracy: Some(nd),
    })
}

impl SimplicityVerdict {
    /// Re-derives the evidence behind the verdict and checks that it still
    /// supports it. Returns false on any mismatch.
    pub fn revalidate(&self, graph: &KGraph, c: &CategoricalCocycle) -> Result<bool> {
        let ccs = c.pullback().antisymmetrized();
        match self.grounds {
            Grounds::NotCofinal => {
                let Cofinality::NotCofinal { vertex, witness } = &self.cofinality else {
                    return Ok(false);
                };
                if !matches!(is_cofinal(graph)?, Cofinality::NotCofinal { .. }) {
                    return Ok(false);
                }
                let blocked = graph.reaches_into(*vertex);
                let probe = witness_probe(witness);
                for m in probe.descents() {
                    match witness.element_at(graph, &m)? {
                        Some(seg) => {
                            if blocked.contains(&seg.source(graph)) {
                                return Ok(false);
                            }
                        }
                        None => continue,
                    }
                }
                Ok(self.verdict == Verdict::NotSimple)
            }
            Grounds::AperiodicCofinal => {
                let ap = is_aperiodic(graph, self.depth)? == Aperiodicity::Aperiodic;
                let co = matches!(is_cofinal(graph)?, Cofinality::Cofinal);
                Ok(ap && co && self.verdict == Verdict::Simple)
            }
            Grounds::NondegenerateCofinal => {
                let Some(stored) = &self.periodicity else { return Ok(false) };
                let fresh = per_group(graph, self.depth)?;
                if !fresh.complete
                    || fresh.per != stored.per
                    || (self.depth as usize) < graph.num_vertices()
                {
                    return Ok(false);
                }
                let nd = ccs.is_nondegenerate_on(&fresh.per)?;
                let co = matches!(is_cofinal(graph)?, Cofinality::Cofinal);
                Ok(matches!(nd, Nondegeneracy::Nondegenerate { .. })
                    && co
                    && self.verdict == Verdict::Simple)
            }
            Grounds::NCTorusSpecialCase => {
                if !is_nc_torus(graph) {
                    return Ok(false);
                }
                match (&self.verdict, &self.nondegeneracy) {
                    (Verdict::NotSimple, Some(Nondegeneracy::Degenerate { witness })) => {
                        if witness.iter().all(|&x| x == 0) {
                            return Ok(false);
                        }
                        let full = ZkSubgroup::full(graph.rank());
                        Ok(full
                            .basis()
                            .iter()
                            .all(|g| ccs.eval(witness, g).is_zero_mod1(1e-9)))
                    }
                    (Verdict::Simple, Some(Nondegeneracy::Nondegenerate { .. })) => {
                        let full = ccs.is_nondegenerate_on(&ZkSubgroup::full(graph.rank()))?;
                        Ok(matches!(full, Nondegeneracy::Nondegenerate { .. }))
                    }
                    _ => Ok(false),
                }
            }
            Grounds::InsufficientCriteria => Ok(self.verdict == Verdict::Unknown),
        }
    }
}

fn witness_probe(witness: &BoundedFilter) -> Degree {
    match witness {
        BoundedFilter::Principal(p) => p.degree().clone(),
        BoundedFilter::EventuallyPeriodic { prefix, cycle } => {
            prefix.degree().plus(cycle.degree())
        }
    }
}

/// The compressed unitary realizing the translation `m` of the periodicity
/// group at the corner `t_lambda t*_lambda`: the sum over paths of degree
/// `p(m)` at `r(lambda)` of `t_lambda t*_lambda t_mu t*_theta(mu)`.
pub fn build_vm(
    rep: &TruncatedRep,
    pdata: &PeriodicityData,
    lambda: &Path,
    m: &[i64],
) -> Result<SparseMatrix> {
    let graph = rep.graph();
    let v = lambda.range();
    if !pdata.h_per.contains(&v) {
        return Err(Error::VertexNotInHPer(graph.vertex_name(v).into()));
    }
    let (p, q) = pos_neg_parts(m);
    let needed = p.join(&q).plus(lambda.degree());
    if !needed.leq(rep.cutoff()) {
        return Err(Error::CutoffTooSmall {
            needed: needed.coords().to_vec(),
            have: rep.cutoff().coords().to_vec(),
        });
    }
    let table = theta_between(graph, pdata, v, &p, &q)?;
    let mut shift = SpanElement::zero();
    for (mu, th) in &table {
        shift = shift.add(&SpanElement::term(graph, mu.clone(), th.clone(), Coeff::one())?);
    }
    let corner = SpanElement::projection(graph, lambda);
    let x = corner.multiply(graph, rep.cocycle(), &shift)?;
    rep.represent(&x)
}

/// Max deviation of `V_m V_m' - cc*(m,m') V_m' V_m` compressed onto the
/// two-sided window `margin <= degree <= cutoff - margin`, where products
/// of truncated shifts are free of edge effects.
pub fn check_vm_commutation(
    rep: &TruncatedRep,
    pdata: &PeriodicityData,
    lambda: &Path,
    m: &[i64],
    mp: &[i64],
    margin: &Degree,
) -> Result<f64> {
    let (lhs, rhs) = vm_products(rep, pdata, lambda, m, mp)?;
    let phase = expected_vm_phase(rep, m, mp);
    let diff = lhs.sub(&rhs.scale(phase))?;
    let hi = rep.cutoff().minus(margin)?;
    let keep = rep.mask_between(margin, &hi);
    Ok(rep.compressed_norm(&diff, &keep, 0))
}

/// The phase predicted by the antisymmetrized form.
pub fn expected_vm_phase(rep: &TruncatedRep, m: &[i64], mp: &[i64]) -> Complex64 {
    rep.cocycle().pullback().antisymmetrized().eval(m, mp).to_complex()
}

/// The phase actually measured: the ratio of the two products at the
/// largest compressed entry of `V_m' V_m`.
pub fn measured_vm_phase(
    rep: &TruncatedRep,
    pdata: &PeriodicityData,
    lambda: &Path,
    m: &[i64],
    mp: &[i64],
    margin: &Degree,
) -> Result<Complex64> {
    let (lhs, rhs) = vm_products(rep, pdata, lambda, m, mp)?;
    let hi = rep.cutoff().minus(margin)?;
    let keep = rep.mask_between(margin, &hi);
    let lhs = lhs.compress(&keep);
    let rhs = rhs.compress(&keep);
    let mut best: Option<(usize, usize, f64)> = None;
    for &(r, c, z) in rhs.entries() {
        let mag = z.norm();
        if best.map(|(_, _, b)| mag > b).unwrap_or(true) {
            best = Some((r, c, mag));
        }
    }
    let Some((r, c, mag)) = best else {
        return Err(Error::GraphMismatch(
            "compressed product is zero; nothing to measure".into(),
        ));
    };
    if mag < 1e-12 {
        return Err(Error::GraphMismatch(
            "compressed product is numerically zero; nothing to measure".into(),
        ));
    }
    Ok(lhs.get(r, c) / rhs.get(r, c))
}

fn vm_products(
    rep: &TruncatedRep,
    pdata: &PeriodicityData,
    lambda: &Path,
    m: &[i64],
    mp: &[i64],
) -> Result<(SparseMatrix, SparseMatrix)> {
    let vm = build_vm(rep, pdata, lambda, m)?;
    let vmp = build_vm(rep, pdata, lambda, mp)?;
    Ok((vm.mul(&vmp)?, vmp.mul(&vm)?))
}

/// Report shape for the JSON emitter: verdict, grounds, and digests of the
/// certificates that back them.
pub fn certificate_digests(graph: &KGraph, v: &SimplicityVerdict) -> Vec<(String, String)> {
    let mut out = Vec::new();
    match &v.cofinality {
        Cofinality::Cofinal => out.push(("cofinality".into(), "cofinal".into())),
        Cofinality::NotCofinal { vertex, witness } => out.push((
            "cofinality".into(),
            format!(
                "not-cofinal at {} with witness {}",
                graph.vertex_name(*vertex),
                witness.describe(graph)
            ),
        )),
    }
    match &v.aperiodicity {
        Some(Aperiodicity::Aperiodic) => out.push(("aperiodicity".into(), "aperiodic".into())),
        Some(Aperiodicity::Periodic(a, b)) => out.push((
            "aperiodicity".into(),
            format!("periodic pair ({}, {})", a.label(graph), b.label(graph)),
        )),
        Some(Aperiodicity::Unknown) => out.push(("aperiodicity".into(), "unknown".into())),
        None => {}
    }
    if let Some(p) = &v.periodicity {
        out.push((
            "per-basis".into(),
            format!("{:?}", p.per.basis().iter().collect::<Vec<_>>()),
        ));
        let names: BTreeSet<&str> =
            p.h_per.iter().map(|&w| graph.vertex_name(w)).collect();
        out.push(("h-per".into(), format!("{names:?}")));
    }
    match &v.nondegeneracy {
        Some(Nondegeneracy::Nondegenerate { sigma_min }) => out.push((
            "nondegeneracy".into(),
            match sigma_min {
                Some(s) => format!("nondegenerate (sigma_min {s:.3e})"),
                None => "nondegenerate (trivial subgroup)".into(),
            },
        )),
        Some(Nondegeneracy::Degenerate { witness }) => {
            out.push(("nondegeneracy".into(), format!("degenerate witness {witness:?}")))
        }
        Some(Nondegeneracy::NumericallyInconclusive { sigma_min }) => out.push((
            "nondegeneracy".into(),
            format!("inconclusive (sigma_min {sigma_min:.3e})"),
        )),
        None => {}
    }
    out
}
