//! Small named graphs used in examples and tests.

use crate::graph::{GraphBuilder, WeightedMultigraph};

/// Text form of [`figure3`].
pub const FIGURE3_DOCUMENT: &str = "\
graph
vertex v1 weight 0
vertex v2 weight 3
vertex v3 weight 1
edge v1 v2 x3
edge v2 v3
";

/// Three vertices of weights 0, 3, 1; three edges `v1-v2` and one bridge `v2-v3`.
pub fn figure3() -> WeightedMultigraph {
    GraphBuilder::new()
        .vertex("v1", 0)
        .vertex("v2", 3)
        .vertex("v3", 1)
        .edges_between("v1", "v2", 3)
        .edge("v2", "v3")
        .build()
        .expect("fixture is valid")
}

/// Triangle, bridge, double edge, bridge, double edge: its bridge tree is a
/// path on three vertices.
pub fn figure2_top() -> WeightedMultigraph {
    GraphBuilder::new()
        .vertex("a1", 0)
        .vertex("a2", 0)
        .vertex("a3", 0)
        .vertex("b1", 0)
        .vertex("b2", 1)
        .vertex("c1", 0)
        .vertex("c2", 0)
        .edge("a1", "a2")
        .edge("a2", "a3")
        .edge("a3", "a1")
        .edge("a3", "b1")
        .edges_between("b1", "b2", 2)
        .edge("b2", "c1")
        .edges_between("c1", "c2", 2)
        .build()
        .expect("fixture is valid")
}

/// A triangle with a bridge from each corner to its own double edge: its
/// bridge tree is a star with a trivalent center.
pub fn figure2_bottom() -> WeightedMultigraph {
    let mut b = GraphBuilder::new();
    for x in ["x1", "x2", "x3"] {
        b.add_vertex(x, 0);
    }
    b.add_edges("x1", "x2", 1);
    b.add_edges("x2", "x3", 1);
    b.add_edges("x3", "x1", 1);
    for (corner, leaf) in [("x1", "p"), ("x2", "q"), ("x3", "r")] {
        let (l1, l2) = (format!("{leaf}1"), format!("{leaf}2"));
        b.add_vertex(l1.clone(), 0);
        b.add_vertex(l2.clone(), 0);
        b.add_edges(corner, l1.clone(), 1);
        b.add_edges(l1, l2, 2);
    }
    b.build().expect("fixture is valid")
}

fn numbered(n: usize) -> GraphBuilder {
    let mut b = GraphBuilder::new();
    for i in 0..n {
        b.add_vertex(format!("u{i}"), 0);
    }
    b
}

/// Weightless cycle on `n >= 2` vertices.
pub fn cycle(n: usize) -> WeightedMultigraph {
    let mut b = numbered(n);
    for i in 0..n {
        b.add_edges(format!("u{i}"), format!("u{}", (i + 1) % n), 1);
    }
    b.build().expect("fixture is valid")
}

/// Weightless path on `n >= 1` vertices.
pub fn path(n: usize) -> WeightedMultigraph {
    let mut b = numbered(n);
    for i in 1..n {
        b.add_edges(format!("u{}", i - 1), format!("u{i}"), 1);
    }
    b.build().expect("fixture is valid")
}

/// Weightless complete graph on `n` vertices.
pub fn complete(n: usize) -> WeightedMultigraph {
    let mut b = numbered(n);
    for i in 0..n {
        for j in i + 1..n {
            b.add_edges(format!("u{i}"), format!("u{j}"), 1);
        }
    }
    b.build().expect("fixture is valid")
}
