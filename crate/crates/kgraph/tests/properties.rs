//! Randomized laws that every build must keep: rewrite confluence, the
//! factorization identities, alignment set algebra, cocycle arithmetic,
//! span-algebra structure, and order/determinism guarantees on the derived
//! lattices.

use std::collections::{BTreeMap, BTreeSet};

use kgraph::align::{ext, mce, pi_closure};
use kgraph::boundary::{satiate, EeFamily, SatMembership};
use kgraph::degree::Degree;
use kgraph::graph::{EdgeId, KGraph, VertexId};
use kgraph::ideals::{
    hereditary_closure, is_hereditary, is_saturated, list_gauge_invariant_ideals, pair_leq,
    saturate,
};
use kgraph::path::{
    enumerate_paths, enumerate_paths_up_to, normalize_word, normalize_word_random, parse_path,
};
use kgraph::pathrep::TruncatedRep;
use kgraph::periodicity::{per_group, sim_check, theta_between, tilde_expectation, SimVerdict};
use kgraph::phase::{Coeff, PhaseAngle};
use kgraph::samples;
use kgraph::simplicity::{decide, Verdict};
use kgraph::spanalg::SpanElement;
use kgraph::twist::{CategoricalCocycle, TwoCocycleZk};
use kgraph::Path;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn word_graphs() -> Vec<KGraph> {
    vec![
        samples::torus_2d(),
        samples::torus_3d(),
        samples::torus_double_cover(),
    ]
}

/// A random composable edge word starting at `at` (random vertex when None);
/// returns the start so degree-zero words still name a path.
fn random_word(
    graph: &KGraph,
    rng: &mut ChaCha8Rng,
    at: Option<VertexId>,
    len: usize,
) -> (VertexId, Vec<EdgeId>) {
    let start = at.unwrap_or(VertexId(rng.gen_range(0..graph.num_vertices())));
    let mut at = start;
    let mut word = Vec::new();
    for _ in 0..len {
        let colors: Vec<usize> = (0..graph.rank())
            .filter(|&c| !graph.edges_into(at, c).is_empty())
            .collect();
        if colors.is_empty() {
            break;
        }
        let opts = graph.edges_into(at, colors[rng.gen_range(0..colors.len())]);
        let e = opts[rng.gen_range(0..opts.len())];
        word.push(e);
        at = graph.edge(e).source;
    }
    (start, word)
}

fn path_of(graph: &KGraph, start: VertexId, word: &[EdgeId]) -> Path {
    if word.is_empty() {
        Path::vertex(graph, start)
    } else {
        Path::from_word(graph, word).unwrap()
    }
}

fn random_path(graph: &KGraph, rng: &mut ChaCha8Rng, at: Option<VertexId>, len: usize) -> Path {
    let (start, word) = random_word(graph, rng, at, len);
    path_of(graph, start, &word)
}

/// Paths of degree <= `bound`, bucketed by source vertex.
fn source_pool(graph: &KGraph, bound: &Degree) -> BTreeMap<VertexId, Vec<Path>> {
    let mut pool: BTreeMap<VertexId, Vec<Path>> = BTreeMap::new();
    for p in enumerate_paths_up_to(graph, None, bound) {
        pool.entry(p.source(graph)).or_default().push(p);
    }
    pool
}

fn random_span(
    graph: &KGraph,
    pool: &BTreeMap<VertexId, Vec<Path>>,
    rng: &mut ChaCha8Rng,
    terms: usize,
) -> SpanElement {
    let keys: Vec<VertexId> = pool.keys().copied().collect();
    let mut x = SpanElement::zero();
    for _ in 0..terms {
        let bucket = &pool[&keys[rng.gen_range(0..keys.len())]];
        let mu = bucket[rng.gen_range(0..bucket.len())].clone();
        let nu = bucket[rng.gen_range(0..bucket.len())].clone();
        let w = Coeff::from_integer(rng.gen_range(-3..=3))
            .rotate(&PhaseAngle::rational(rng.gen_range(0..4), 4));
        x = x.add(&SpanElement::term(graph, mu, nu, w).unwrap());
    }
    x
}

fn label_sets(graph: &KGraph, sets: &[Vec<Path>]) -> BTreeSet<BTreeSet<String>> {
    sets.iter()
        .map(|s| s.iter().map(|p| p.label(graph)).collect())
        .collect()
}

proptest! {
    #[test]
    fn rewrite_order_never_changes_the_normal_form(
        gi in 0usize..3,
        seed in any::<u64>(),
        len in 0usize..8,
    ) {
        let graph = &word_graphs()[gi];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (start, word) = random_word(graph, &mut rng, None, len);
        let sorted = normalize_word(graph, &word).unwrap();
        let mut shuffler = ChaCha8Rng::seed_from_u64(seed ^ 0x9e3779b97f4a7c15);
        let shuffled = normalize_word_random(graph, &word, &mut shuffler).unwrap();
        prop_assert_eq!(&sorted, &shuffled);
        prop_assert_eq!(path_of(graph, start, &word), path_of(graph, start, &sorted));
    }

    #[test]
    fn factorization_inverts_composition(
        gi in 0usize..3,
        seed in any::<u64>(),
        la in 0usize..5,
        lb in 0usize..5,
    ) {
        let graph = &word_graphs()[gi];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mu = random_path(graph, &mut rng, None, la);
        let nu = random_path(graph, &mut rng, Some(mu.source(graph)), lb);
        let whole = mu.compose(graph, &nu).unwrap();
        let (head, tail) = whole.factorize(graph, mu.degree()).unwrap();
        prop_assert_eq!(head, mu);
        prop_assert_eq!(tail, nu);
    }

    #[test]
    fn composition_is_associative(
        gi in 0usize..3,
        seed in any::<u64>(),
        lens in (0usize..4, 0usize..4, 0usize..4),
    ) {
        let graph = &word_graphs()[gi];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_path(graph, &mut rng, None, lens.0);
        let b = random_path(graph, &mut rng, Some(a.source(graph)), lens.1);
        let c = random_path(graph, &mut rng, Some(b.source(graph)), lens.2);
        let left = a.compose(graph, &b).unwrap().compose(graph, &c).unwrap();
        let right = a.compose(graph, &b.compose(graph, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn mce_is_symmetric_and_lives_at_the_join(
        gi in 0usize..3,
        seed in any::<u64>(),
        la in 0usize..4,
        lb in 0usize..4,
    ) {
        let graph = &word_graphs()[gi];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let start = VertexId(rng.gen_range(0..graph.num_vertices()));
        let mu = random_path(graph, &mut rng, Some(start), la);
        let nu = random_path(graph, &mut rng, Some(start), lb);
        let fwd: BTreeSet<Path> = mce(graph, &mu, &nu).into_iter().collect();
        let bwd: BTreeSet<Path> = mce(graph, &nu, &mu).into_iter().collect();
        prop_assert_eq!(&fwd, &bwd);
        let join = mu.degree().join(nu.degree());
        for lam in &fwd {
            prop_assert_eq!(lam.degree(), &join);
        }
        for a in &fwd {
            for b in &fwd {
                if a != b {
                    prop_assert!(mce(graph, a, b).is_empty());
                }
            }
        }
    }

    #[test]
    fn ext_satisfies_the_chain_rule(
        gi in 0usize..3,
        seed in any::<u64>(),
        la in 0usize..3,
        lb in 0usize..3,
        picks in proptest::collection::vec(any::<u32>(), 1..4),
    ) {
        let graph = &word_graphs()[gi];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mu = random_path(graph, &mut rng, None, la);
        let nu = random_path(graph, &mut rng, Some(mu.source(graph)), lb);
        let around: Vec<Path> = enumerate_paths_up_to(
            graph,
            Some(mu.range()),
            &Degree::uniform(graph.rank(), 2),
        )
        .into_iter()
        .filter(|p| !p.is_vertex())
        .collect();
        prop_assume!(!around.is_empty());
        let e: Vec<Path> = picks
            .iter()
            .map(|&i| around[i as usize % around.len()].clone())
            .collect();
        let whole = mu.compose(graph, &nu).unwrap();
        let direct: BTreeSet<Path> = ext(graph, &whole, &e).unwrap().into_iter().collect();
        let staged: BTreeSet<Path> = ext(graph, &nu, &ext(graph, &mu, &e).unwrap())
            .unwrap()
            .into_iter()
            .collect();
        prop_assert_eq!(direct, staged);
    }

    #[test]
    fn pi_closure_is_idempotent_and_monotone(
        gi in 0usize..3,
        seed in any::<u64>(),
        picks in proptest::collection::vec(any::<u32>(), 1..4),
        extra in any::<u32>(),
    ) {
        let graph = &word_graphs()[gi];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = VertexId(rng.gen_range(0..graph.num_vertices()));
        let around: Vec<Path> =
            enumerate_paths_up_to(graph, Some(v), &Degree::uniform(graph.rank(), 2))
                .into_iter()
                .filter(|p| !p.is_vertex())
                .collect();
        prop_assume!(!around.is_empty());
        let e: Vec<Path> = picks
            .iter()
            .map(|&i| around[i as usize % around.len()].clone())
            .collect();
        let closed: BTreeSet<Path> = pi_closure(graph, &e).unwrap().into_iter().collect();
        let twice: BTreeSet<Path> = pi_closure(graph, &closed.iter().cloned().collect::<Vec<_>>())
            .unwrap()
            .into_iter()
            .collect();
        prop_assert_eq!(&closed, &twice);
        for p in &e {
            prop_assert!(closed.contains(p));
        }
        let mut bigger = e.clone();
        bigger.push(around[extra as usize % around.len()].clone());
        let closed_bigger: BTreeSet<Path> =
            pi_closure(graph, &bigger).unwrap().into_iter().collect();
        prop_assert!(closed.is_subset(&closed_bigger));
    }
}

fn random_angle(rng: &mut ChaCha8Rng) -> PhaseAngle {
    PhaseAngle::rational(rng.gen_range(-6..=6), rng.gen_range(1..=6))
}

fn random_form(rng: &mut ChaCha8Rng, k: usize) -> TwoCocycleZk {
    let theta = (0..k)
        .map(|_| (0..k).map(|_| random_angle(rng)).collect())
        .collect();
    TwoCocycleZk::new(theta).unwrap()
}

fn random_vec(rng: &mut ChaCha8Rng, k: usize) -> Vec<i64> {
    (0..k).map(|_| rng.gen_range(-4..=4)).collect()
}

proptest! {
    #[test]
    fn bicharacter_laws_hold_identically(seed in any::<u64>(), k in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_form(&mut rng, k);
        let m = random_vec(&mut rng, k);
        let mp = random_vec(&mut rng, k);
        let n = random_vec(&mut rng, k);
        let np = random_vec(&mut rng, k);
        let nsum: Vec<i64> = n.iter().zip(&np).map(|(a, b)| a + b).collect();
        let msum: Vec<i64> = m.iter().zip(&mp).map(|(a, b)| a + b).collect();
        let second = c.eval(&m, &nsum).sub(&c.eval(&m, &n)).sub(&c.eval(&m, &np));
        prop_assert!(second.is_zero_mod1(0.0));
        let first = c.eval(&msum, &n).sub(&c.eval(&m, &n)).sub(&c.eval(&mp, &n));
        prop_assert!(first.is_zero_mod1(0.0));
    }

    #[test]
    fn the_antisymmetrized_form_alternates(seed in any::<u64>(), k in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cc = random_form(&mut rng, k).antisymmetrized();
        let m = random_vec(&mut rng, k);
        let n = random_vec(&mut rng, k);
        prop_assert!(cc.eval(&m, &m).is_zero_mod1(0.0));
        prop_assert!(cc.eval(&n, &m).add(&cc.eval(&m, &n)).is_zero_mod1(0.0));
    }

    #[test]
    fn edge_weights_move_values_by_the_coboundary(
        seed in any::<u64>(),
        la in 0usize..4,
        lb in 0usize..4,
    ) {
        let graph = samples::torus_2d();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pull = random_form(&mut rng, 2);
        let plain = CategoricalCocycle::bicharacter(pull.clone());
        let weights: BTreeMap<EdgeId, PhaseAngle> = graph
            .edge_ids()
            .map(|e| (e, random_angle(&mut rng)))
            .collect();
        let twisted = CategoricalCocycle::with_edge_weights(pull, weights);
        let mu = random_path(&graph, &mut rng, None, la);
        let nu = random_path(&graph, &mut rng, Some(mu.source(&graph)), lb);
        let whole = mu.compose(&graph, &nu).unwrap();
        let shift = twisted
            .weight_sum(&mu)
            .add(&twisted.weight_sum(&nu))
            .sub(&twisted.weight_sum(&whole));
        let gap = twisted
            .value(&graph, &mu, &nu)
            .unwrap()
            .sub(&plain.value(&graph, &mu, &nu).unwrap())
            .sub(&shift);
        prop_assert!(gap.is_zero_mod1(0.0));
    }
}

fn span_setups() -> Vec<(KGraph, CategoricalCocycle)> {
    vec![
        (
            samples::torus_2d(),
            samples::bicharacter_2d(PhaseAngle::rational(1, 3)),
        ),
        (samples::two_loops(), CategoricalCocycle::trivial(1)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn span_multiplication_is_associative_and_star_reverses(
        si in 0usize..2,
        seed in any::<u64>(),
    ) {
        let (graph, coc) = &span_setups()[si];
        let pool = source_pool(graph, &Degree::uniform(graph.rank(), 1));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_span(graph, &pool, &mut rng, 2);
        let y = random_span(graph, &pool, &mut rng, 2);
        let z = random_span(graph, &pool, &mut rng, 2);
        let xy = x.multiply(graph, coc, &y).unwrap();
        let yz = y.multiply(graph, coc, &z).unwrap();
        prop_assert_eq!(
            xy.multiply(graph, coc, &z).unwrap(),
            x.multiply(graph, coc, &yz).unwrap()
        );
        prop_assert_eq!(
            xy.adjoint(),
            y.adjoint().multiply(graph, coc, &x.adjoint()).unwrap()
        );
    }

    // Linearity reduces adjoint consistency to one term at a time; the
    // single-term bound is a few ulps, so 1e-15 holds without slack.
    #[test]
    fn representing_commutes_with_the_adjoint(si in 0usize..2, seed in any::<u64>()) {
        let (graph, coc) = &span_setups()[si];
        let pool = source_pool(graph, &Degree::uniform(graph.rank(), 1));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let keys: Vec<VertexId> = pool.keys().copied().collect();
        let bucket = &pool[&keys[rng.gen_range(0..keys.len())]];
        let mu = bucket[rng.gen_range(0..bucket.len())].clone();
        let nu = bucket[rng.gen_range(0..bucket.len())].clone();
        let w = Coeff::from_phase(&PhaseAngle::rational(
            rng.gen_range(-6..=6),
            rng.gen_range(1..=6),
        ));
        let x = SpanElement::term(graph, mu, nu, w).unwrap();
        let rep = TruncatedRep::new(graph, coc, Degree::uniform(graph.rank(), 2));
        let starred = rep.represent(&x.adjoint()).unwrap();
        let transposed = rep.represent(&x).unwrap().adjoint();
        prop_assert!(starred.sub(&transposed).unwrap().max_abs() <= 1e-15);
    }

    #[test]
    fn expectations_compose_onto_the_diagonal(si in 0usize..2, seed in any::<u64>()) {
        let (graph, _) = &span_setups()[si];
        let pool = source_pool(graph, &Degree::uniform(graph.rank(), 1));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_span(graph, &pool, &mut rng, 3);
        prop_assert_eq!(x.gauge_part().diagonal_part(), x.diagonal_part());
        let averaged = tilde_expectation(graph, &x, 3).unwrap();
        prop_assert_eq!(averaged.diagonal_part(), x.diagonal_part());
    }
}

#[test]
fn path_counts_follow_the_color_adjacency_matrices() {
    for graph in [
        samples::torus_2d(),
        samples::two_loops(),
        samples::cycle3(),
        samples::disjoint_loops(),
        samples::torus_double_cover(),
        samples::torus_3d(),
    ] {
        let n = graph.num_vertices();
        let mats: Vec<Vec<Vec<u64>>> = (0..graph.rank())
            .map(|c| {
                let mut a = vec![vec![0u64; n]; n];
                for e in graph.edge_ids() {
                    let edge = graph.edge(e);
                    if edge.color == c {
                        a[edge.range.0][edge.source.0] += 1;
                    }
                }
                a
            })
            .collect();
        let mul = |a: &Vec<Vec<u64>>, b: &Vec<Vec<u64>>| -> Vec<Vec<u64>> {
            let mut out = vec![vec![0u64; n]; n];
            for i in 0..n {
                for k in 0..n {
                    for j in 0..n {
                        out[i][j] += a[i][k] * b[k][j];
                    }
                }
            }
            out
        };
        for d in Degree::uniform(graph.rank(), 2).descents() {
            let mut acc = vec![vec![0u64; n]; n];
            for (i, row) in acc.iter_mut().enumerate() {
                row[i] = 1;
            }
            for (c, m) in mats.iter().enumerate() {
                for _ in 0..d.get(c) {
                    acc = mul(&acc, m);
                }
            }
            let by_matrix: u64 = acc.iter().flatten().sum();
            let by_walk = enumerate_paths(&graph, None, &d).len() as u64;
            assert_eq!(by_walk, by_matrix, "degree {:?}", d.coords());
        }
    }
}

#[test]
fn listed_ideals_order_and_rederive_exactly() {
    for graph in [
        samples::two_loops(),
        samples::disjoint_loops(),
        samples::torus_double_cover(),
    ] {
        let ee = EeFamily::color_slices(&graph).unwrap();
        let list =
            list_gauge_invariant_ideals(&graph, &ee, &Degree::uniform(graph.rank(), 2)).unwrap();
        for pair in &list.pairs {
            assert!(is_hereditary(&graph, &pair.h));
            assert!(is_saturated(&graph, &ee, &pair.h));
            assert_eq!(saturate(&graph, &ee, &hereditary_closure(&graph, &pair.h)), pair.h);
        }
        let k = list.pairs.len();
        let mut leq = vec![vec![false; k]; k];
        for i in 0..k {
            for j in 0..k {
                leq[i][j] = pair_leq(&graph, &list.pairs[i], &list.pairs[j]).unwrap();
            }
        }
        for i in 0..k {
            assert!(leq[i][i]);
            for j in 0..k {
                if i != j && leq[i][j] {
                    assert!(!leq[j][i], "distinct ideals ordered both ways");
                }
                for l in 0..k {
                    if leq[i][j] && leq[j][l] {
                        assert!(leq[i][l], "order is not transitive");
                    }
                }
            }
        }
        let listed: BTreeSet<(usize, usize)> = list.leq.iter().copied().collect();
        for i in 0..k {
            for j in 0..k {
                assert_eq!(listed.contains(&(i, j)), leq[i][j]);
            }
        }
    }
}

#[test]
fn per_group_is_deterministic_and_theta_tables_invert() {
    for graph in [samples::torus_2d(), samples::cycle3(), samples::torus_double_cover()] {
        let first = per_group(&graph, 4).unwrap();
        let second = per_group(&graph, 4).unwrap();
        assert_eq!(first.per, second.per);
        assert_eq!(first.h_per, second.h_per);
    }

    let graph = samples::torus_2d();
    let pdata = per_group(&graph, 4).unwrap();
    let v = graph.vertex("v").unwrap();
    let m = Degree::new(vec![1, 0]);
    let n = Degree::new(vec![0, 1]);
    let fwd = theta_between(&graph, &pdata, v, &m, &n).unwrap();
    let bwd = theta_between(&graph, &pdata, v, &n, &m).unwrap();
    let dom: BTreeSet<Path> = enumerate_paths(&graph, Some(v), &m).into_iter().collect();
    let cod: BTreeSet<Path> = enumerate_paths(&graph, Some(v), &n).into_iter().collect();
    assert_eq!(fwd.iter().map(|(a, _)| a.clone()).collect::<BTreeSet<_>>(), dom);
    assert_eq!(fwd.iter().map(|(_, b)| b.clone()).collect::<BTreeSet<_>>(), cod);
    for (a, b) in &fwd {
        assert_eq!(a.range(), b.range());
        assert_eq!(a.source(&graph), b.source(&graph));
        assert!(bwd.contains(&(b.clone(), a.clone())), "tables are not mutually inverse");
    }
}

#[test]
fn similarity_verdicts_verify_against_their_witnesses() {
    for graph in [samples::torus_2d(), samples::cycle3(), samples::two_loops()] {
        let bound = Degree::uniform(graph.rank(), 3);
        let cutoff = Degree::uniform(graph.rank(), 4);
        let coc = CategoricalCocycle::trivial(graph.rank());
        let rep = TruncatedRep::new(&graph, &coc, cutoff.clone());
        let mut by_source: BTreeMap<VertexId, Vec<Path>> = BTreeMap::new();
        for p in enumerate_paths_up_to(&graph, None, &bound) {
            by_source.entry(p.source(&graph)).or_default().push(p);
        }
        for list in by_source.values() {
            for i in 0..list.len() {
                for j in i + 1..list.len() {
                    let (mu, nu) = (&list[i], &list[j]);
                    match sim_check(&graph, mu, nu, 3).unwrap() {
                        SimVerdict::Sim => {
                            let qdiff = rep
                                .represent(&SpanElement::projection(&graph, mu))
                                .unwrap()
                                .sub(&rep.represent(&SpanElement::projection(&graph, nu)).unwrap())
                                .unwrap();
                            let keep = rep.mask_between(&mu.degree().join(nu.degree()), &cutoff);
                            assert!(
                                qdiff.compress(&keep).max_abs() <= 1e-12,
                                "{} ~ {} but the range projections differ",
                                mu.label(&graph),
                                nu.label(&graph)
                            );
                        }
                        SimVerdict::NotSim(tau) => {
                            let a = mu.compose(&graph, &tau).unwrap();
                            let b = nu.compose(&graph, &tau).unwrap();
                            assert!(mce(&graph, &a, &b).is_empty(), "stale witness");
                        }
                        SimVerdict::ProbableSim => {}
                    }
                }
            }
        }
    }
}

#[test]
fn verdicts_only_strengthen_with_depth() {
    let setups: Vec<(KGraph, CategoricalCocycle)> = vec![
        (samples::torus_2d(), CategoricalCocycle::trivial(2)),
        (samples::torus_2d(), samples::bicharacter_2d(PhaseAngle::rational(1, 2))),
        (samples::torus_2d(), samples::bicharacter_2d(PhaseAngle::float(0.618_033_988_749_894_9))),
        (samples::two_loops(), CategoricalCocycle::trivial(1)),
        (samples::cycle3(), CategoricalCocycle::trivial(1)),
        (samples::disjoint_loops(), CategoricalCocycle::trivial(1)),
        (samples::torus_double_cover(), CategoricalCocycle::trivial(2)),
        (samples::torus_double_cover(), samples::bicharacter_2d(PhaseAngle::rational(1, 2))),
    ];
    for (graph, coc) in &setups {
        let mut settled: Option<Verdict> = None;
        for depth in 1..=4 {
            let v = decide(graph, coc, depth).unwrap();
            if v.verdict == Verdict::Unknown {
                continue;
            }
            if let Some(prev) = &settled {
                assert_eq!(prev, &v.verdict, "verdict flipped at depth {depth}");
            }
            settled = Some(v.verdict);
        }
    }
}

#[test]
fn satiation_grows_with_seeds_and_depth() {
    let graph = samples::two_loops();
    let v = graph.vertex("v").unwrap();
    let e = parse_path(&graph, "e").unwrap();
    let f = parse_path(&graph, "f").unwrap();
    let seeds = EeFamily::new(&graph, vec![(v, vec![e.clone(), f.clone()])]).unwrap();
    let small = satiate(&graph, &seeds, &Degree::new(vec![1])).unwrap();
    let deep = satiate(&graph, &seeds, &Degree::new(vec![2])).unwrap();
    for set in small.family_at(v) {
        assert_eq!(deep.is_in_satiation(&graph, v, &set).unwrap(), SatMembership::Yes);
    }

    let fe = f.compose(&graph, &e).unwrap();
    let ff = f.compose(&graph, &f).unwrap();
    let richer = EeFamily::new(
        &graph,
        vec![(v, vec![e.clone(), f.clone()]), (v, vec![e, fe, ff])],
    )
    .unwrap();
    let bigger = satiate(&graph, &richer, &Degree::new(vec![2])).unwrap();
    let small_sets = label_sets(&graph, &deep.family_at(v));
    let big_sets = label_sets(&graph, &bigger.family_at(v));
    assert!(small_sets.is_subset(&big_sets));
}
