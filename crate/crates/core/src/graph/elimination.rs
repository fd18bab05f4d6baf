use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{Graph, VertexId};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EliminationKind {
    /// Every vertex is simplicial when removed.
    Perfect,
    /// Every vertex is simple when removed.
    Simple,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EliminationCertificate {
    pub ordering: Vec<String>,
    pub kind: EliminationKind,
}

impl EliminationCertificate {
    pub fn new<S: Into<String>>(
        ordering: impl IntoIterator<Item = S>,
        kind: EliminationKind,
    ) -> Self {
        Self {
            ordering: ordering.into_iter().map(Into::into).collect(),
            kind,
        }
    }
}

/// `N(v)` restricted to live vertices is a clique.
pub fn is_simplicial_in(g: &Graph, v: VertexId, alive: &[bool]) -> bool {
    let nb: Vec<VertexId> = g.neighbors(v).filter(|&w| alive[w]).collect();
    g.is_clique(&nb)
}

/// Simplicial, and the closed neighbourhoods of its live neighbours form a
/// chain under inclusion (all neighbourhoods taken in the live subgraph).
pub fn is_simple_in(g: &Graph, v: VertexId, alive: &[bool]) -> bool {
    if !is_simplicial_in(g, v, alive) {
        return false;
    }
    let mut closed: Vec<BTreeSet<VertexId>> = g
        .neighbors(v)
        .filter(|&w| alive[w])
        .map(|w| {
            let mut s: BTreeSet<VertexId> = g.neighbors(w).filter(|&x| alive[x]).collect();
            s.insert(w);
            s
        })
        .collect();
    closed.sort_by_key(BTreeSet::len);
    closed.windows(2).all(|p| p[0].is_subset(&p[1]))
}

/// Maximum cardinality search; returns the visit order. Ties go to the
/// vertex that comes first in insertion order.
pub fn maximum_cardinality_search(g: &Graph) -> Vec<VertexId> {
    let n = g.order();
    let mut weight = vec![0usize; n];
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !visited[v])
            .max_by(|&a, &b| weight[a].cmp(&weight[b]).then(b.cmp(&a)))
            .expect("an unvisited vertex remains");
        visited[v] = true;
        order.push(v);
        for w in g.neighbors(v) {
            if !visited[w] {
                weight[w] += 1;
            }
        }
    }
    order
}

/// Perfect elimination ordering if `g` is chordal.
pub fn is_chordal(g: &Graph) -> Option<EliminationCertificate> {
    let mut order = maximum_cardinality_search(g);
    order.reverse();
    let mut alive = vec![true; g.order()];
    for &v in &order {
        if !is_simplicial_in(g, v, &alive) {
            return None;
        }
        alive[v] = false;
    }
    Some(EliminationCertificate::new(
        order.into_iter().map(|v| g.label(v)),
        EliminationKind::Perfect,
    ))
}

/// Simple elimination ordering if `g` is strongly chordal.
///
/// Removing any simple vertex keeps a strongly chordal graph strongly chordal,
/// so the greedy choice (first simple vertex in insertion order) never needs
/// to backtrack.
pub fn is_strongly_chordal(g: &Graph) -> Option<EliminationCertificate> {
    let n = g.order();
    let mut alive = vec![true; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n).find(|&v| alive[v] && is_simple_in(g, v, &alive))?;
        alive[v] = false;
        order.push(g.label(v));
    }
    Some(EliminationCertificate::new(order, EliminationKind::Simple))
}

/// Checks a certificate against the definition, one prefix at a time.
pub fn verify_elimination(g: &Graph, cert: &EliminationCertificate) -> Result<bool> {
    let n = g.order();
    if cert.ordering.len() != n {
        return Err(Error::NotPermutation(format!(
            "{} entries for {} vertices",
            cert.ordering.len(),
            n
        )));
    }
    let mut seen = vec![false; n];
    let mut ids = Vec::with_capacity(n);
    for l in &cert.ordering {
        let v = g
            .index_of(l)
            .ok_or_else(|| Error::NotPermutation(format!("`{l}` is not a vertex")))?;
        if std::mem::replace(&mut seen[v], true) {
            return Err(Error::NotPermutation(format!("`{l}` repeated")));
        }
        ids.push(v);
    }
    let mut alive = vec![true; n];
    for v in ids {
        let ok = match cert.kind {
            EliminationKind::Perfect => is_simplicial_in(g, v, &alive),
            EliminationKind::Simple => is_simple_in(g, v, &alive),
        };
        if !ok {
            return Ok(false);
        }
        alive[v] = false;
    }
    Ok(true)
}
