//! Required quartets of a graph, their path-rule closure, and exact quartet
//! compatibility over binary topologies.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::tree::{enumerate_binary_topologies, search_binary_topologies, PhyloTree};
use crate::{Quartet, QuartetSet};

/// `RQ'(g)`: `ab|cd` whenever `ab` and `cd` are edges and one of the two
/// cross matchings (`ac, bd` or `ad, bc`) consists of non-edges. This covers
/// induced `P4` (`a-b-c-d` gives `ab|cd`), induced `2K2`, and both splits of
/// an induced `C4`.
pub fn required_quartets(g: &Graph) -> QuartetSet {
    let n = g.order();
    let adj = |a, b| g.adjacent(a, b);
    let mut out = QuartetSet::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    for [p, q, r, s] in [[a, b, c, d], [a, c, b, d], [a, d, b, c]] {
                        if adj(p, q)
                            && adj(r, s)
                            && ((!adj(p, r) && !adj(q, s)) || (!adj(p, s) && !adj(q, r)))
                        {
                            out.insert(
                                Quartet::new(g.label(p), g.label(q), g.label(r), g.label(s))
                                    .expect("distinct vertices"),
                            );
                        }
                    }
                }
            }
        }
    }
    out
}

/// Closes `q` under the path rule: `ab|c0c1, ab|c1c2, ..., ab|c(l-1)cl`
/// together give `ab|c0cl`. For each side `{a, b}` every pair inside a
/// connected component of the "opposite pair" graph is added; this repeats
/// until nothing changes.
pub fn path_lemma_closure(q: &QuartetSet) -> QuartetSet {
    let mut out = q.clone();
    loop {
        let mut opposite: BTreeMap<[&str; 2], Vec<[&str; 2]>> = BTreeMap::new();
        for qt in out.iter() {
            let (l, r) = (qt.left(), qt.right());
            opposite.entry(l).or_default().push(r);
            opposite.entry(r).or_default().push(l);
        }
        let mut added = Vec::new();
        for (side, pairs) in &opposite {
            for comp in components(pairs) {
                for (i, c) in comp.iter().enumerate() {
                    for d in &comp[i + 1..] {
                        let qt = Quartet::new(side[0], side[1], c, d).expect("distinct labels");
                        if !out.contains(&qt) {
                            added.push(qt);
                        }
                    }
                }
            }
        }
        if added.is_empty() {
            return out;
        }
        out.extend(added);
    }
}

/// Vertex sets of the connected components of the graph with edge list `pairs`.
fn components<'a>(pairs: &[[&'a str; 2]]) -> Vec<Vec<&'a str>> {
    let mut parent: BTreeMap<&str, &str> = BTreeMap::new();
    fn find<'a>(p: &mut BTreeMap<&'a str, &'a str>, x: &'a str) -> &'a str {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p.insert(y, r);
            y = next;
        }
        r
    }
    for &[c, d] in pairs {
        parent.entry(c).or_insert(c);
        parent.entry(d).or_insert(d);
        let (rc, rd) = (find(&mut parent, c), find(&mut parent, d));
        if rc != rd {
            parent.insert(rc.max(rd), rc.min(rd));
        }
    }
    let keys: Vec<&str> = parent.keys().copied().collect();
    let mut groups: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for k in keys {
        let r = find(&mut parent, k);
        groups.entry(r).or_default().push(k);
    }
    groups.into_values().filter(|g| g.len() > 1).collect()
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::CapExceeded {
            what: "quartet labels",
            size: n,
            cap,
        });
    }
    Ok(())
}

/// A binary tree on `labels(q)` displaying every quartet, if one exists.
/// Two splits of one 4-set are rejected without searching.
pub fn is_compatible(q: &QuartetSet, cap: usize) -> Result<Option<PhyloTree>> {
    let labels = q.labels();
    check_cap(labels.len(), cap)?;
    if q.find_conflict().is_some() {
        return Ok(None);
    }
    if labels.is_empty() {
        return Ok(Some(PhyloTree::new()));
    }
    let displays_inside = |t: &PhyloTree| {
        let inside: BTreeSet<&str> = t.leaf_labels().collect();
        let sub: QuartetSet = q.restricted_to(&inside).cloned().collect();
        sub.displayed_by(t).expect("labels are leaves")
    };
    let (found, _) = search_binary_topologies(&labels, cap, displays_inside, |t| {
        displays_inside(t).then(|| t.clone())
    })?;
    Ok(found)
}

/// Number of binary trees on `labels(q)` that display `q`, by plain
/// enumeration.
pub fn count_displaying_topologies(q: &QuartetSet, cap: usize) -> Result<usize> {
    let labels = q.labels();
    check_cap(labels.len(), cap)?;
    let mut count = 0;
    for t in enumerate_binary_topologies(&labels, cap)? {
        if q.displayed_by(&t)? {
            count += 1;
        }
    }
    Ok(count)
}

/// `{a_i a_(i+1) | b_j b_(j+1)} ∪ {a_1 b_1 | a_r b_q}` on `a1..ar, b1..bq`,
/// an incompatible set all of whose proper subsets are compatible.
pub fn shutters_family(r: usize, q: usize) -> Result<QuartetSet> {
    if r < 3 || q < 3 {
        return Err(Error::InvalidParameter(format!(
            "shutters family needs r, q >= 3, got ({r}, {q})"
        )));
    }
    let a = |i: usize| format!("a{i}");
    let b = |j: usize| format!("b{j}");
    let mut out = QuartetSet::new();
    for i in 1..r {
        for j in 1..q {
            out.insert(Quartet::new(&a(i), &a(i + 1), &b(j), &b(j + 1))?);
        }
    }
    out.insert(Quartet::new(&a(1), &b(1), &a(r), &b(q))?);
    Ok(out)
}

/// The path-rule closure of `RQ'(g)` when it is incompatible, which
/// certifies that `g` is not a leaf power. `None` is inconclusive.
///
/// The cap bounds the exhaustive search only; a closure holding two splits of
/// one 4-set is returned without searching.
pub fn nonleafpower_by_quartets(g: &Graph, cap: usize) -> Result<Option<QuartetSet>> {
    let closure = path_lemma_closure(&required_quartets(g));
    if closure.find_conflict().is_some() {
        return Ok(Some(closure));
    }
    Ok(is_compatible(&closure, cap)?.is_none().then_some(closure))
}
