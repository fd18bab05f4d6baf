use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::{Graph, VertexId};

/// An induced gem: a `P4` plus a vertex adjacent to all four of its vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gem {
    pub path: [String; 4],
    pub hub: String,
}

/// Scans for an induced gem. The hub must have degree at least four, and the
/// path is searched for inside the hub's neighbourhood.
pub fn find_gem(g: &Graph) -> Option<Gem> {
    for hub in g.vertex_ids() {
        if g.degree(hub) < 4 {
            continue;
        }
        let nb: Vec<VertexId> = g.neighbors(hub).collect();
        if let Some(p) = find_induced_p4(g, &nb) {
            return Some(Gem {
                path: p.map(|v| g.label(v).to_owned()),
                hub: g.label(hub).to_owned(),
            });
        }
    }
    None
}

fn find_induced_p4(g: &Graph, within: &[VertexId]) -> Option<[VertexId; 4]> {
    // a - b - c - d with ac, bd, ad absent.
    for &b in within {
        for &c in within {
            if b == c || !g.adjacent(b, c) {
                continue;
            }
            for &a in within {
                if a == b || a == c || !g.adjacent(a, b) || g.adjacent(a, c) {
                    continue;
                }
                for &d in within {
                    if d == a || d == b || d == c {
                        continue;
                    }
                    if g.adjacent(c, d) && !g.adjacent(b, d) && !g.adjacent(a, d) {
                        return Some([a, b, c, d]);
                    }
                }
            }
        }
    }
    None
}

/// A chordless cycle on at least four vertices, if one exists.
///
/// For every vertex `v` and every non-adjacent pair `a, b` of its neighbours,
/// a shortest `a`-`b` path avoiding the rest of `N[v]` closes an induced cycle
/// through `v`.
pub fn find_induced_cycle(g: &Graph) -> Option<Vec<String>> {
    let n = g.order();
    for v in g.vertex_ids() {
        let nb: Vec<VertexId> = g.neighbors(v).collect();
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                if g.adjacent(a, b) {
                    continue;
                }
                let mut blocked = vec![false; n];
                blocked[v] = true;
                for &w in &nb {
                    if w != a && w != b {
                        blocked[w] = true;
                    }
                }
                if let Some(p) = shortest_path(g, a, b, &blocked) {
                    let mut cyc = vec![g.label(v).to_owned()];
                    cyc.extend(p.into_iter().map(|x| g.label(x).to_owned()));
                    return Some(cyc);
                }
            }
        }
    }
    None
}

fn shortest_path(
    g: &Graph,
    from: VertexId,
    to: VertexId,
    blocked: &[bool],
) -> Option<Vec<VertexId>> {
    let mut prev = vec![usize::MAX; g.order()];
    prev[from] = from;
    let mut queue = VecDeque::from([from]);
    while let Some(x) = queue.pop_front() {
        if x == to {
            let mut path = vec![to];
            let mut cur = to;
            while cur != from {
                cur = prev[cur];
                path.push(cur);
            }
            path.reverse();
            return Some(path);
        }
        for y in g.neighbors(x) {
            if !blocked[y] && prev[y] == usize::MAX {
                prev[y] = x;
                queue.push_back(y);
            }
        }
    }
    None
}
