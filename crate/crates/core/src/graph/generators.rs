//! Small named graph families.

use super::Graph;
use crate::error::{Error, Result};

fn numbered(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

/// `K_n` on `v1..vn`.
pub fn complete(n: usize) -> Graph {
    let labels = numbered("v", n);
    let mut g = Graph::with_vertices(&labels);
    for a in 0..n {
        for b in a + 1..n {
            g.add_edge_ids(a, b);
        }
    }
    g
}

/// `n` isolated vertices `v1..vn`.
pub fn edgeless(n: usize) -> Graph {
    Graph::with_vertices(numbered("v", n))
}

/// The path `v1 - v2 - ... - vn`.
pub fn path(n: usize) -> Graph {
    let mut g = edgeless(n);
    for a in 1..n {
        g.add_edge_ids(a - 1, a);
    }
    g
}

/// The cycle `v1 - ... - vn - v1`; needs `n >= 3`.
pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "a cycle needs at least three vertices");
    let mut g = path(n);
    g.add_edge_ids(n - 1, 0);
    g
}

/// The `k`-sun: a clique on `x1..xk` plus vertices `a1..ak` with
/// `N(a_i) = {x_i, x_(i+1)}`, indices taken cyclically.
pub fn sun(k: usize) -> Result<Graph> {
    if k < 3 {
        return Err(Error::InvalidParameter(format!(
            "a sun needs k >= 3, got {k}"
        )));
    }
    let mut labels = numbered("x", k);
    labels.extend(numbered("a", k));
    let mut g = Graph::with_vertices(&labels);
    for a in 0..k {
        for b in a + 1..k {
            g.add_edge_ids(a, b);
        }
    }
    for i in 0..k {
        g.add_edge_ids(k + i, i);
        g.add_edge_ids(k + i, (i + 1) % k);
    }
    Ok(g)
}
