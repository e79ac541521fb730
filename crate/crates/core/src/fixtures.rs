//! Named example graphs used across the test suites and the documentation.

use crate::graph::{EdgeId, Graph, VertexId};

fn v(s: impl Into<String>) -> VertexId {
    VertexId::new(s.into())
}

fn e(s: impl Into<String>) -> EdgeId {
    EdgeId::new(s.into())
}

/// `v1 -e1-> v2 -e2-> ... -> vn`.
pub fn line(n: usize) -> Graph {
    assert!(n >= 1);
    let vertices = (1..=n).map(|i| v(format!("v{i}")));
    let edges = (1..n).map(|i| (e(format!("e{i}")), v(format!("v{i}")), v(format!("v{}", i + 1))));
    Graph::new(vertices, edges, []).unwrap()
}

/// Single vertex with a loop.
pub fn loop_() -> Graph {
    Graph::new([v("v")], [(e("c"), v("v"), v("v"))], []).unwrap()
}

/// Loop `e` at `v` with exit `f : v -> w`.
pub fn toeplitz() -> Graph {
    Graph::new(
        [v("v"), v("w")],
        [(e("e"), v("v"), v("v")), (e("f"), v("v"), v("w"))],
        [],
    )
    .unwrap()
}

/// Loop `g` at `v` and `k` spokes `e_i : u_i -> v` feeding it.
pub fn rose(k: usize) -> Graph {
    let mut vertices = vec![v("v")];
    let mut edges = vec![(e("g"), v("v"), v("v"))];
    for i in 1..=k {
        vertices.push(v(format!("u{i}")));
        edges.push((e(format!("e{i}")), v(format!("u{i}")), v("v")));
    }
    Graph::new(vertices, edges, []).unwrap()
}

/// `v -e_i-> w_i` for `i = 1..=k`.
pub fn clock(k: usize) -> Graph {
    assert!(k >= 1);
    let mut vertices = vec![v("v")];
    let mut edges = Vec::new();
    for i in 1..=k {
        vertices.push(v(format!("w{i}")));
        edges.push((e(format!("e{i}")), v("v"), v(format!("w{i}"))));
    }
    Graph::new(vertices, edges, []).unwrap()
}

/// Loop `g` at `u`, connector `h : u -> v`, loop `c` at `v`.
pub fn twocycles() -> Graph {
    Graph::new(
        [v("u"), v("v")],
        [
            (e("g"), v("u"), v("u")),
            (e("h"), v("u"), v("v")),
            (e("c"), v("v"), v("v")),
        ],
        [],
    )
    .unwrap()
}

/// `v -> w1, v -> w2`.
pub fn star2() -> Graph {
    Graph::new(
        [v("v"), v("w1"), v("w2")],
        [(e("e1"), v("v"), v("w1")), (e("e2"), v("v"), v("w2"))],
        [],
    )
    .unwrap()
}

/// One edge `e : v -> w`.
pub fn single_edge() -> Graph {
    Graph::new([v("v"), v("w")], [(e("e"), v("v"), v("w"))], []).unwrap()
}

/// ω-bundle `v => w1` plus a single named edge `f : v -> w2`.
pub fn omega_clock() -> Graph {
    Graph::new(
        [v("v"), v("w1"), v("w2")],
        [(e("f"), v("v"), v("w2"))],
        [(v("v"), v("w1"))],
    )
    .unwrap()
}

/// ω-bundle `u => h` into a sink plus the 2-cycle `u -a-> m -b-> u`.
/// The smallest graph whose ideal lattice exercises breaking vertices on
/// both admissible-pair forms.
pub fn omega_cycle() -> Graph {
    Graph::new(
        [v("h"), v("m"), v("u")],
        [(e("a"), v("u"), v("m")), (e("b"), v("m"), v("u"))],
        [(v("u"), v("h"))],
    )
    .unwrap()
}

/// The fixtures every bulk suite iterates over, with stable labels.
pub fn all_named() -> Vec<(&'static str, Graph)> {
    vec![
        ("line1", line(1)),
        ("line2", line(2)),
        ("line3", line(3)),
        ("line4", line(4)),
        ("loop", loop_()),
        ("toeplitz", toeplitz()),
        ("rose1", rose(1)),
        ("rose2", rose(2)),
        ("clock1", clock(1)),
        ("clock3", clock(3)),
        ("twocycles", twocycles()),
        ("star2", star2()),
        ("single_edge", single_edge()),
        ("omega_clock", omega_clock()),
        ("omega_cycle", omega_cycle()),
    ]
}
