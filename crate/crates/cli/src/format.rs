//! Text formats: graphs, weighted trees, quartet lists and RCC instances.
//!
//! All formats are line based, UTF-8, and treat everything after `#` as a
//! comment. Labels are whitespace-free tokens.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use leafpower::rcc::RccInstance;
use leafpower::tree::NodeId;
use leafpower::{Graph, LeafRoot, PhyloTree, Quartet, QuartetSet, WeightedTree};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        message: message.into(),
    })
}

/// Non-empty lines with comments stripped, numbered from 1.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

fn graph_line(g: &mut Graph, no: usize, line: &str) -> Result<(), ParseError> {
    let tokens: Vec<&str> = line.split_whitespace().collect();
    match tokens.as_slice() {
        ["node", v] => {
            g.add_vertex(v);
        }
        [u, v] => {
            if u == v {
                return err(no, format!("self-loop at `{u}`"));
            }
            if !g.add_edge(u, v).expect("distinct endpoints") {
                return err(no, format!("duplicate edge {u} {v}"));
            }
        }
        _ => return err(no, format!("expected `u v` or `node u`, found `{line}`")),
    }
    Ok(())
}

/// One edge `u v` per line; `node u` declares a vertex, isolated or not.
pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    let mut g = Graph::new();
    for (no, line) in content_lines(text) {
        graph_line(&mut g, no, line)?;
    }
    Ok(g)
}

/// Isolated vertices as sorted `node` lines, then edges with the smaller label
/// first, sorted.
pub fn write_graph(g: &Graph) -> String {
    let mut isolated: Vec<&str> = g
        .vertex_ids()
        .filter(|&v| g.degree(v) == 0)
        .map(|v| g.label(v))
        .collect();
    isolated.sort_unstable();
    let mut edges: Vec<(&str, &str)> = g
        .edge_labels()
        .into_iter()
        .map(|(a, b)| if a <= b { (a, b) } else { (b, a) })
        .collect();
    edges.sort_unstable();
    let mut out = String::new();
    for v in isolated {
        writeln!(out, "node {v}").expect("string write");
    }
    for (a, b) in edges {
        writeln!(out, "{a} {b}").expect("string write");
    }
    out
}

/// A weighted tree in parenthesised notation with `:weight` on every edge
/// and a `threshold: k` line. The outermost node is an ordinary unlabelled
/// node of the unrooted tree; internal labels are rejected.
pub fn parse_tree(text: &str) -> Result<LeafRoot, ParseError> {
    let mut threshold = None;
    let mut body = String::new();
    let mut body_line = None;
    for (no, line) in content_lines(text) {
        if let Some(rest) = line.strip_prefix("threshold:") {
            if threshold.is_some() {
                return err(no, "threshold given twice");
            }
            threshold = Some(parse_weight(rest.trim(), no)?);
        } else {
            body_line.get_or_insert(no);
            body.push_str(line);
        }
    }
    let start = body_line.unwrap_or(1);
    let Some(k) = threshold else {
        return err(start, "missing `threshold: k` line");
    };
    let (tree, weights) = NewickParser::new(&body, start).parse()?;
    WeightedTree::new(tree, weights, k).map_err(|e| ParseError {
        line: start,
        message: e.to_string(),
    })
}

fn parse_weight(s: &str, line: usize) -> Result<u64, ParseError> {
    s.parse::<u64>()
        .or_else(|_| err(line, format!("malformed weight `{s}`")))
}

struct NewickParser<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    tree: PhyloTree,
    weights: Vec<u64>,
}

impl<'a> NewickParser<'a> {
    fn new(src: &'a str, line: usize) -> Self {
        Self {
            src: src.as_bytes(),
            pos: 0,
            line,
            tree: PhyloTree::new(),
            weights: Vec::new(),
        }
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        err(
            self.line,
            format!("{} (at column {})", msg.into(), self.pos + 1),
        )
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn token(&mut self) -> &'a str {
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|c| !b"(),:;".contains(&c) && !c.is_ascii_whitespace())
        {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).expect("split on ASCII bytes")
    }

    fn parse(mut self) -> Result<(PhyloTree, Vec<u64>), ParseError> {
        self.skip_ws();
        self.subtree()?;
        self.skip_ws();
        if self.peek() == Some(b':') {
            return self.fail("the outermost node cannot carry a weight");
        }
        if self.peek() != Some(b';') {
            return self.fail("expected `;`");
        }
        self.pos += 1;
        self.skip_ws();
        if self.pos != self.src.len() {
            return self.fail("trailing text after `;`");
        }
        Ok((self.tree, self.weights))
    }

    /// Parses a subtree and returns its top node.
    fn subtree(&mut self) -> Result<NodeId, ParseError> {
        self.skip_ws();
        if self.peek() == Some(b'(') {
            self.pos += 1;
            let node = self.tree.add_node();
            loop {
                let child = self.subtree()?;
                self.skip_ws();
                if self.peek() != Some(b':') {
                    return self.fail("missing `:weight` on an edge");
                }
                self.pos += 1;
                self.skip_ws();
                let w = self.token();
                let w = parse_weight(w, self.line)?;
                self.tree.add_edge(node, child);
                self.weights.push(w);
                self.skip_ws();
                match self.peek() {
                    Some(b',') => self.pos += 1,
                    Some(b')') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return self.fail("expected `,` or `)`"),
                }
            }
            self.skip_ws();
            if !self.token().is_empty() {
                return self.fail("internal nodes cannot be labelled");
            }
            Ok(node)
        } else {
            let label = self.token();
            if label.is_empty() {
                return self.fail("expected a leaf label or `(`");
            }
            self.tree
                .add_leaf(label)
                .or_else(|e| self.fail(e.to_string()))
        }
    }
}

/// Canonical text: hung from the node next to the smallest leaf (or from
/// that leaf when the tree is a single edge or node), children ordered by
/// their smallest leaf label.
pub fn write_tree(wt: &LeafRoot) -> String {
    let mut out = newick(wt.tree(), Some(wt.weights()));
    writeln!(out, "\nthreshold: {}", wt.threshold()).expect("string write");
    out
}

/// Unweighted form of [`write_tree`], for topologies.
pub fn write_topology(t: &PhyloTree) -> String {
    newick(t, None)
}

fn newick(t: &PhyloTree, weights: Option<&[u64]>) -> String {
    let mut out = String::new();
    let Some(first) = t.leaf_labels().next() else {
        out.push(';');
        return out;
    };
    let leaf = t.leaf(first).expect("own leaf");
    match t.neighbors(leaf) {
        [] => out.push_str(first),
        [(top, e)] if t.degree(*top) == 1 => {
            let other = t.label(*top).expect("degree-one nodes are leaves");
            match weights {
                Some(w) => write!(out, "({first}:{},{other}:0)", w[*e]),
                None => write!(out, "({first},{other})"),
            }
            .expect("string write");
        }
        [(top, _)] => write_node(t, weights, *top, usize::MAX, &mut out),
        _ => unreachable!("leaves have degree at most one"),
    }
    out.push(';');
    out
}

fn smallest_leaf(t: &PhyloTree, n: NodeId, parent: NodeId) -> String {
    if let Some(l) = t.label(n) {
        return l.to_owned();
    }
    t.neighbors(n)
        .iter()
        .filter(|&&(c, _)| c != parent)
        .map(|&(c, _)| smallest_leaf(t, c, n))
        .min()
        .expect("internal nodes have children")
}

fn write_node(t: &PhyloTree, weights: Option<&[u64]>, n: NodeId, parent: NodeId, out: &mut String) {
    if let Some(l) = t.label(n) {
        out.push_str(l);
        return;
    }
    let mut kids: Vec<(String, NodeId, usize)> = t
        .neighbors(n)
        .iter()
        .filter(|&&(c, _)| c != parent)
        .map(|&(c, e)| (smallest_leaf(t, c, n), c, e))
        .collect();
    kids.sort();
    out.push('(');
    for (i, (_, c, e)) in kids.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        write_node(t, weights, *c, n, out);
        if let Some(w) = weights {
            write!(out, ":{}", w[*e]).expect("string write");
        }
    }
    out.push(')');
}

/// One quartet `a b | c d` per line.
pub fn parse_quartets(text: &str) -> Result<QuartetSet, ParseError> {
    let mut out = QuartetSet::new();
    for (no, line) in content_lines(text) {
        let Some((l, r)) = line.split_once('|') else {
            return err(no, format!("expected `a b | c d`, found `{line}`"));
        };
        let (l, r): (Vec<&str>, Vec<&str>) = (
            l.split_whitespace().collect(),
            r.split_whitespace().collect(),
        );
        let ([a, b], [c, d]) = (l.as_slice(), r.as_slice()) else {
            return err(
                no,
                format!("expected two labels on each side, found `{line}`"),
            );
        };
        let q = Quartet::new(a, b, c, d).or_else(|e| err(no, e.to_string()))?;
        out.insert(q);
    }
    Ok(out)
}

pub fn write_quartets(q: &QuartetSet) -> String {
    q.iter().map(|x| format!("{x}\n")).collect()
}

/// A `U:` or `V:` directive with its line number.
type Listed = Option<(usize, Vec<String>)>;

/// Graph lines plus `s: X`, `t: Y` and optionally `U: ...`, `V: ...`. Without
/// `U` the parts are found by two-colouring with `s` in `U`.
pub fn parse_rcc(text: &str) -> Result<RccInstance, ParseError> {
    let mut g = Graph::new();
    let (mut s, mut t) = (None, None);
    let (mut u, mut v): (Listed, Listed) = (None, None);
    let mut last = 1;
    for (no, line) in content_lines(text) {
        last = no;
        let directive = line
            .split_once(':')
            .filter(|(k, _)| !k.contains(char::is_whitespace));
        match directive {
            Some((key, rest)) => {
                let items: Vec<String> = rest.split_whitespace().map(str::to_owned).collect();
                let single = |slot: &mut Option<(usize, String)>| -> Result<(), ParseError> {
                    match items.as_slice() {
                        [x] if slot.is_none() => {
                            *slot = Some((no, x.clone()));
                            Ok(())
                        }
                        [_] => err(no, format!("`{key}` given twice")),
                        _ => err(no, format!("`{key}:` takes exactly one label")),
                    }
                };
                match key {
                    "s" => single(&mut s)?,
                    "t" => single(&mut t)?,
                    "U" if u.is_none() => u = Some((no, items)),
                    "V" if v.is_none() => v = Some((no, items)),
                    "U" | "V" => return err(no, format!("`{key}` given twice")),
                    _ => return err(no, format!("unknown directive `{key}:`")),
                }
            }
            None => graph_line(&mut g, no, line)?,
        }
    }
    let (Some((sl, s)), Some((_, t))) = (s, t) else {
        return err(last, "both `s:` and `t:` are required");
    };
    for (no, list) in u.iter().chain(&v) {
        if let Some(x) = list.iter().find(|x| !g.contains(x)) {
            return err(*no, format!("unknown vertex `{x}`"));
        }
    }
    let wrap = |line: usize| {
        move |e: leafpower::Error| ParseError {
            line,
            message: e.to_string(),
        }
    };
    match (u, v) {
        (Some((no, u)), v) => {
            if let Some((vno, v)) = v {
                let us: BTreeSet<&String> = u.iter().collect();
                let vs: BTreeSet<&String> = v.iter().collect();
                let all: BTreeSet<&str> = g.labels().collect();
                let joined: BTreeSet<&str> = us.iter().chain(&vs).map(|x| x.as_str()).collect();
                if us.intersection(&vs).next().is_some() || joined != all {
                    return err(vno, "`U` and `V` must partition the vertices");
                }
            }
            RccInstance::new(g, &s, &t, &u).map_err(wrap(no))
        }
        (None, Some((no, v))) => {
            let vs: BTreeSet<&str> = v.iter().map(String::as_str).collect();
            let u: Vec<String> = g
                .labels()
                .filter(|l| !vs.contains(l))
                .map(str::to_owned)
                .collect();
            RccInstance::new(g, &s, &t, &u).map_err(wrap(no))
        }
        (None, None) => RccInstance::with_inferred_parts(g, &s, &t).map_err(wrap(sl)),
    }
}

pub fn write_rcc(inst: &RccInstance) -> String {
    let mut out = format!("s: {}\nt: {}\n", inst.s(), inst.t());
    let mut u = inst.u_part();
    let mut v = inst.v_part();
    u.sort_unstable();
    v.sort_unstable();
    writeln!(out, "U: {}", u.join(" ")).expect("string write");
    writeln!(out, "V: {}", v.join(" ")).expect("string write");
    let body = write_graph(inst.graph());
    out.push_str(&body);
    out
}
