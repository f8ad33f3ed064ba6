//! Small standing example graphs and cocycles used by tests, docs, and the
//! command-line demos.

use crate::graph::KGraph;
use crate::phase::PhaseAngle;
use crate::twist::{CategoricalCocycle, TwoCocycleZk};

fn g(
    rank: usize,
    vertices: &[&str],
    edges: &[(&str, usize, &str, &str)],
    squares: &[(&str, &str, &str, &str)],
) -> KGraph {
    KGraph::new(
        rank,
        vertices.iter().map(|s| s.to_string()).collect(),
        edges
            .iter()
            .map(|(n, c, r, s)| (n.to_string(), *c, r.to_string(), s.to_string()))
            .collect(),
        squares
            .iter()
            .map(|(a, b, c, d)| (a.to_string(), b.to_string(), c.to_string(), d.to_string()))
            .collect(),
    )
    .expect("sample graph is well formed")
}

/// Rank-2, one vertex, one edge of each color, commuting square ab = ba.
/// Every degree has exactly one path, so the whole group Z^2 is periodic.
pub fn torus_2d() -> KGraph {
    g(
        2,
        &["v"],
        &[("a", 1, "v", "v"), ("b", 2, "v", "v")],
        &[("a", "b", "b", "a")],
    )
}

/// Rank-1, one vertex, two loops. Free on two generators, aperiodic and
/// cofinal.
pub fn two_loops() -> KGraph {
    g(
        1,
        &["v"],
        &[("e", 1, "v", "v"), ("f", 1, "v", "v")],
        &[],
    )
}

/// Rank-1 directed 3-cycle. Periodicity group 3Z.
pub fn cycle3() -> KGraph {
    g(
        1,
        &["v0", "v1", "v2"],
        &[
            ("e0", 1, "v0", "v1"),
            ("e1", 1, "v1", "v2"),
            ("e2", 1, "v2", "v0"),
        ],
        &[],
    )
}

/// Two vertices, each carrying its own loop, no connection. Not cofinal.
pub fn disjoint_loops() -> KGraph {
    g(
        1,
        &["u", "w"],
        &[("lu", 1, "u", "u"), ("lw", 1, "w", "w")],
        &[],
    )
}

/// Rank-2 double cover of the torus: the color-1 edges alternate between
/// the two vertices while the color-2 edges are loops. One path of each
/// degree per vertex; periodicity group generated by (2,0) and (0,1).
pub fn torus_double_cover() -> KGraph {
    g(
        2,
        &["u", "w"],
        &[
            ("a0", 1, "u", "w"),
            ("a1", 1, "w", "u"),
            ("bu", 2, "u", "u"),
            ("bw", 2, "w", "w"),
        ],
        &[("a0", "bw", "bu", "a0"), ("a1", "bu", "bw", "a1")],
    )
}

/// Presentation with an uncovered color pair: the ascending pair (a2, b)
/// appears in no square, so validation must reject it.
pub fn missing_square() -> KGraph {
    g(
        2,
        &["v"],
        &[
            ("a1", 1, "v", "v"),
            ("a2", 1, "v", "v"),
            ("b", 2, "v", "v"),
        ],
        &[("a1", "b", "b", "a1")],
    )
}

/// Rank-3 presentation whose squares are individually fine but whose
/// rewriting is not confluent: the xy and yz squares transpose indices
/// across the colors, so sorting z_l y_j x_i one way yields (l, i, j) and
/// the other way (j, l, i). Validation must flag the cube condition.
pub fn mismatched_cube() -> KGraph {
    g(
        3,
        &["v"],
        &[
            ("x1", 1, "v", "v"),
            ("x2", 1, "v", "v"),
            ("y1", 2, "v", "v"),
            ("y2", 2, "v", "v"),
            ("z1", 3, "v", "v"),
            ("z2", 3, "v", "v"),
        ],
        &[
            ("x1", "y1", "y1", "x1"),
            ("x1", "y2", "y1", "x2"),
            ("x2", "y1", "y2", "x1"),
            ("x2", "y2", "y2", "x2"),
            ("x1", "z1", "z1", "x1"),
            ("x1", "z2", "z2", "x1"),
            ("x2", "z1", "z1", "x2"),
            ("x2", "z2", "z2", "x2"),
            ("y1", "z1", "z1", "y1"),
            ("y1", "z2", "z1", "y2"),
            ("y2", "z1", "z2", "y1"),
            ("y2", "z2", "z2", "y2"),
        ],
    )
}

/// Rank-3 torus: one edge per color, all squares commute. Valid, for
/// contrast with [`mismatched_cube`].
pub fn torus_3d() -> KGraph {
    g(
        3,
        &["v"],
        &[("x", 1, "v", "v"), ("y", 2, "v", "v"), ("z", 3, "v", "v")],
        &[
            ("x", "y", "y", "x"),
            ("x", "z", "z", "x"),
            ("y", "z", "z", "y"),
        ],
    )
}

/// Rank-2 bicharacter cocycle with the single angle theta_21 = `angle`
/// (row 2, column 1) and zeros elsewhere.
pub fn bicharacter_2d(angle: PhaseAngle) -> CategoricalCocycle {
    let theta = TwoCocycleZk::new(vec![
        vec![PhaseAngle::zero(), PhaseAngle::zero()],
        vec![angle, PhaseAngle::zero()],
    ])
    .expect("2x2 matrix");
    CategoricalCocycle::bicharacter(theta)
}
