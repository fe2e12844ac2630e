//! Monk relation-algebra atom structures from graphs.

use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{AtomId, RaAtomStructure, TripleSet};

/// Finite simple graph on `0..order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<FixedBitSet>,
}

impl Graph {
    pub fn new(order: usize) -> Self {
        Graph {
            adj: vec![FixedBitSet::with_capacity(order); order],
        }
    }

    pub fn from_edges(order: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::new(order);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u == v {
            return Err(Error::usage(format!("self-loop at {u}")));
        }
        if u >= self.order() || v >= self.order() {
            return Err(Error::usage(format!("edge ({u}, {v}) outside 0..{}", self.order())));
        }
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.adj.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones(..)
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.order() {
            for v in self.adj[u].ones().filter(|&v| v > u) {
                out.push((u, v));
            }
        }
        out
    }

    /// Parse one `u v` pair per line; `#` starts a comment. An optional `vertices N` line fixes
    /// the order, otherwise it is one more than the largest endpoint.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut edges = Vec::new();
        let mut order = None;
        for (ln, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let loc = || format!("line {}", ln + 1);
            let parts: Vec<&str> = line.split_whitespace().collect();
            match parts.as_slice() {
                ["vertices", n] => {
                    order = Some(n.parse::<usize>().map_err(|e| Error::format(loc(), e.to_string()))?)
                }
                [u, v] => {
                    let u = u.parse::<usize>().map_err(|e| Error::format(loc(), e.to_string()))?;
                    let v = v.parse::<usize>().map_err(|e| Error::format(loc(), e.to_string()))?;
                    if u == v {
                        return Err(Error::format(loc(), "self-loop"));
                    }
                    edges.push((u, v));
                }
                _ => return Err(Error::format(loc(), "expected \"u v\"")),
            }
        }
        let need = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
        let order = order.unwrap_or(need);
        if order < need {
            return Err(Error::format("vertices", "edge endpoint beyond declared order"));
        }
        Graph::from_edges(order, &edges)
    }

    pub fn to_edge_list(&self) -> String {
        let mut s = format!("vertices {}\n", self.order());
        for (u, v) in self.edges() {
            let _ = writeln!(s, "{u} {v}");
        }
        s
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut s = format!("graph \"{name}\" {{\n");
        for v in 0..self.order() {
            let _ = writeln!(s, "  v{v};");
        }
        for (u, v) in self.edges() {
            let _ = writeln!(s, "  v{u} -- v{v};");
        }
        s.push_str("}\n");
        s
    }
}

/// Finite truncations of the graph families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum GraphFamily {
    /// Vertices `0..size`, edge iff `0 < |i - j| < n`.
    Interval { n: usize, size: usize },
    /// `count` disjoint `n`-cliques.
    CliqueUnion { n: usize, count: usize },
}

pub fn make_monk_graph(kind: GraphFamily) -> Result<Graph> {
    match kind {
        GraphFamily::Interval { n, size } => {
            if n == 0 || size == 0 {
                return Err(Error::usage("interval graph needs N >= 1 and size >= 1"));
            }
            let mut g = Graph::new(size);
            for i in 0..size {
                for j in i + 1..size.min(i + n) {
                    g.add_edge(i, j)?;
                }
            }
            Ok(g)
        }
        GraphFamily::CliqueUnion { n, count } => {
            if n == 0 || count == 0 {
                return Err(Error::usage("clique union needs N >= 1 and count >= 1"));
            }
            let mut g = Graph::new(n * count);
            for c in 0..count {
                for i in 0..n {
                    for j in i + 1..n {
                        g.add_edge(c * n + i, c * n + j)?;
                    }
                }
            }
            Ok(g)
        }
    }
}

/// Exact chromatic number, or bounds when the graph is above the solver cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Chromatic {
    Exact(u32),
    Bounds { lower: u32, upper: u32 },
}

pub const CHROMATIC_CAP: usize = 24;

pub fn chromatic_number(g: &Graph) -> Chromatic {
    chromatic_number_with_cap(g, CHROMATIC_CAP)
}

pub fn chromatic_number_with_cap(g: &Graph, cap: usize) -> Chromatic {
    let lower = greedy_clique(g).max(if g.order() > 0 { 1 } else { 0 });
    let upper = dsatur_greedy(g);
    if g.order() > cap {
        return Chromatic::Bounds { lower, upper };
    }
    if lower == upper {
        return Chromatic::Exact(upper);
    }
    // search for a colouring with k colours, k from the lower bound up
    for k in lower..upper {
        let mut colour = vec![u32::MAX; g.order()];
        if colour_with(g, k, &mut colour, 0) {
            return Chromatic::Exact(k);
        }
    }
    Chromatic::Exact(upper)
}

fn greedy_clique(g: &Graph) -> u32 {
    let mut best = 0;
    for start in 0..g.order() {
        let mut clique = vec![start];
        let mut order: Vec<usize> = (0..g.order()).collect();
        order.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
        for v in order {
            if v != start && clique.iter().all(|&u| g.has_edge(u, v)) {
                clique.push(v);
            }
        }
        best = best.max(clique.len() as u32);
    }
    best
}

fn dsatur_greedy(g: &Graph) -> u32 {
    let n = g.order();
    let mut colour = vec![u32::MAX; n];
    let mut used = 0;
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| colour[v] == u32::MAX)
            .max_by_key(|&v| {
                let mut sat: Vec<u32> = g.adj[v].ones().map(|u| colour[u]).filter(|&c| c != u32::MAX).collect();
                sat.sort_unstable();
                sat.dedup();
                (sat.len(), g.degree(v), std::cmp::Reverse(v))
            })
            .unwrap();
        let c = (0..).find(|&c| g.adj[v].ones().all(|u| colour[u] != c)).unwrap();
        colour[v] = c;
        used = used.max(c + 1);
    }
    used
}

/// DSATUR-ordered backtracking with `k` colours.
fn colour_with(g: &Graph, k: u32, colour: &mut Vec<u32>, done: usize) -> bool {
    let n = g.order();
    if done == n {
        return true;
    }
    let v = (0..n)
        .filter(|&v| colour[v] == u32::MAX)
        .max_by_key(|&v| {
            let mut sat: Vec<u32> = g.adj[v].ones().map(|u| colour[u]).filter(|&c| c != u32::MAX).collect();
            sat.sort_unstable();
            sat.dedup();
            (sat.len(), g.degree(v), std::cmp::Reverse(v))
        })
        .unwrap();
    let max_used = colour.iter().filter(|&&c| c != u32::MAX).max().map_or(0, |&c| c + 1);
    // colours above the first unused one are symmetric
    for c in 0..k.min(max_used + 1) {
        if g.adj[v].ones().all(|u| colour[u] != c) {
            colour[v] = c;
            if colour_with(g, k, colour, done + 1) {
                return true;
            }
            colour[v] = u32::MAX;
        }
    }
    false
}

/// Atom id of `(v, i)` in `monk_atom_structure`; `Id` is atom 0.
pub fn monk_atom(colours: usize, v: usize, i: usize) -> AtomId {
    (1 + v * colours + i) as AtomId
}

/// The Monk atom structure over `g` with `colours` colours.
pub fn monk_atom_structure(g: &Graph, colours: usize) -> Result<RaAtomStructure> {
    if colours == 0 {
        return Err(Error::usage("at least one colour required"));
    }
    let size = 1 + g.order() * colours;
    let mut names = vec!["Id".to_string()];
    for v in 0..g.order() {
        for i in 0..colours {
            names.push(format!("v{v}c{i}"));
        }
    }
    let mut identity = FixedBitSet::with_capacity(size);
    identity.insert(0);
    let converse: Vec<AtomId> = (0..size as AtomId).collect();
    let graph = g.clone();
    let split = move |a: AtomId| {
        let k = a as usize - 1;
        (k / colours, k % colours)
    };
    let triples = TripleSet::from_rule(size, "monk", move |a, b, c| {
        let ids = [a == 0, b == 0, c == 0];
        if ids.iter().any(|&x| x) {
            return (a == 0 && b == c) || (b == 0 && a == c) || (c == 0 && a == b);
        }
        let ((va, ia), (vb, ib), (vc, ic)) = (split(a), split(b), split(c));
        if !(ia == ib && ib == ic) {
            return true;
        }
        graph.has_edge(va, vb) || graph.has_edge(vb, vc) || graph.has_edge(va, vc)
    });
    let ra = RaAtomStructure::new(names, identity, converse, triples)?;
    Ok(ra.with_provenance(serde_json::json!({
        "construction": "monk",
        "vertices": g.order(),
        "edges": g.edges().len(),
        "colours": colours,
    })))
}
