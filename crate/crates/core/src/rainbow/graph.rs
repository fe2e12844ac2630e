use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::signature::{Colour, ColourId, RainbowSignature};
use crate::canon;

/// A yellow shade `y_S`, the sorted set `S` of green superscripts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Shade(pub Vec<i32>);

impl Shade {
    pub fn new(mut tints: Vec<i32>) -> Self {
        tints.sort_unstable();
        tints.dedup();
        Shade(tints)
    }

    pub fn contains(&self, t: i32) -> bool {
        self.0.binary_search(&t).is_ok()
    }
}

/// Edge-coloured graph on nodes `0..len`, with optional yellow labels on node sets.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ColouredGraph {
    len: usize,
    /// Colour of `(p, q)` for `p < q`, read from `p` to `q`.
    edges: Vec<Option<ColourId>>,
    yellow: BTreeMap<Vec<usize>, Shade>,
}

fn edge_slot(len: usize, p: usize, q: usize) -> usize {
    debug_assert!(p < q && q < len);
    p * len - p * (p + 1) / 2 + (q - p - 1)
}

impl ColouredGraph {
    pub fn new(len: usize) -> Self {
        ColouredGraph {
            len,
            edges: vec![None; len * len.saturating_sub(1) / 2],
            yellow: BTreeMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Colour read from `p` to `q`.
    pub fn get(&self, sig: &RainbowSignature, p: usize, q: usize) -> Option<ColourId> {
        if p < q {
            self.edges[edge_slot(self.len, p, q)]
        } else if p > q {
            self.edges[edge_slot(self.len, q, p)].map(|c| sig.reverse(c))
        } else {
            None
        }
    }

    /// Set the colour read from `p` to `q`.
    pub fn set(&mut self, sig: &RainbowSignature, p: usize, q: usize, c: ColourId) {
        assert!(p != q, "no loops in a coloured graph");
        if p < q {
            self.edges[edge_slot(self.len, p, q)] = Some(c);
        } else {
            self.edges[edge_slot(self.len, q, p)] = Some(sig.reverse(c));
        }
    }

    /// Raw stored colour of the slot `p < q`.
    pub fn raw(&self, p: usize, q: usize) -> Option<ColourId> {
        self.edges[edge_slot(self.len, p, q)]
    }

    pub fn clear_edge(&mut self, p: usize, q: usize) {
        let (p, q) = if p < q { (p, q) } else { (q, p) };
        self.edges[edge_slot(self.len, p, q)] = None;
    }

    pub fn is_complete(&self) -> bool {
        self.edges.iter().all(|e| e.is_some())
    }

    pub fn label(&mut self, mut nodes: Vec<usize>, shade: Shade) {
        nodes.sort_unstable();
        self.yellow.insert(nodes, shade);
    }

    pub fn yellow(&self) -> &BTreeMap<Vec<usize>, Shade> {
        &self.yellow
    }

    /// The induced subgraph on `nodes` (in the given order), keeping labels inside it.
    pub fn induced(&self, sig: &RainbowSignature, nodes: &[usize]) -> ColouredGraph {
        let mut g = ColouredGraph::new(nodes.len());
        for p in 0..nodes.len() {
            for q in p + 1..nodes.len() {
                if let Some(c) = self.get(sig, nodes[p], nodes[q]) {
                    g.set(sig, p, q, c);
                }
            }
        }
        for (set, shade) in &self.yellow {
            let mapped: Option<Vec<usize>> = set
                .iter()
                .map(|v| nodes.iter().position(|w| w == v))
                .collect();
            if let Some(m) = mapped {
                g.label(m, shade.clone());
            }
        }
        g
    }

    /// The graph with node `order[k]` renamed to `k`.
    pub fn permuted(&self, sig: &RainbowSignature, order: &[usize]) -> ColouredGraph {
        self.induced(sig, order)
    }
}

/// A cone: base `x_0..x_(n-2)`, apex, tint of the `x_0`-apex edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cone {
    pub base: Vec<usize>,
    pub apex: usize,
    pub tint: i32,
}

/// Every (base, apex, tint) matching the cone pattern.
pub fn detect_cones(sig: &RainbowSignature, g: &ColouredGraph) -> Vec<Cone> {
    let n = sig.dimension();
    let mut out = Vec::new();
    for apex in 0..g.len() {
        let colour_to = |v: usize| g.get(sig, v, apex).map(|c| sig.colour(c));
        let mut slots: Vec<Vec<usize>> = vec![Vec::new(); n - 1];
        for v in (0..g.len()).filter(|&v| v != apex) {
            match colour_to(v) {
                Some(Colour::GreenSuper(_)) => slots[0].push(v),
                Some(Colour::Green(j)) if (j as usize) < n - 1 => slots[j as usize].push(v),
                _ => {}
            }
        }
        let mut base = Vec::with_capacity(n - 1);
        choose_base(sig, g, &slots, &mut base, &mut |b| {
            if let Some(Colour::GreenSuper(t)) = colour_to(b[0]) {
                out.push(Cone {
                    base: b.to_vec(),
                    apex,
                    tint: t,
                });
            }
        });
    }
    out.sort();
    out
}

fn choose_base(
    sig: &RainbowSignature,
    g: &ColouredGraph,
    slots: &[Vec<usize>],
    base: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]),
) {
    if base.len() == slots.len() {
        visit(base);
        return;
    }
    for &v in &slots[base.len()] {
        if base.contains(&v) {
            continue;
        }
        // base edges must not be green
        if base
            .iter()
            .any(|&u| g.get(sig, u, v).map_or(false, |c| sig.colour(c).is_green()))
        {
            continue;
        }
        base.push(v);
        choose_base(sig, g, slots, base, visit);
        base.pop();
    }
}

/// First reason a coloured graph is illegal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Triangle { nodes: [usize; 3], colours: [String; 3] },
    Cone { cone: Cone, shade: Shade },
    LabelSize { nodes: Vec<usize> },
}

/// Every triangle consistent and every labelled base compatible with its cones.
pub fn legal_coloured_graph(sig: &RainbowSignature, g: &ColouredGraph) -> Result<(), Violation> {
    let len = g.len();
    for x in 0..len {
        for y in x + 1..len {
            let Some(xy) = g.raw(x, y) else { continue };
            for z in y + 1..len {
                let (Some(yz), Some(xz)) = (g.raw(y, z), g.raw(x, z)) else {
                    continue;
                };
                if !sig.consistent_ids(xy, yz, xz) {
                    return Err(Violation::Triangle {
                        nodes: [x, y, z],
                        colours: [xy, yz, xz].map(|c| sig.colour(c).to_string()),
                    });
                }
            }
        }
    }
    if g.yellow().is_empty() {
        return Ok(());
    }
    let n = sig.dimension();
    for nodes in g.yellow().keys() {
        if nodes.len() != n - 1 {
            return Err(Violation::LabelSize { nodes: nodes.clone() });
        }
    }
    for cone in detect_cones(sig, g) {
        let mut set = cone.base.clone();
        set.sort_unstable();
        if let Some(shade) = g.yellow().get(&set) {
            if !shade.contains(cone.tint) {
                return Err(Violation::Cone {
                    cone,
                    shade: shade.clone(),
                });
            }
        }
    }
    Ok(())
}

fn encode(sig: &RainbowSignature, g: &ColouredGraph, order: &[usize]) -> Vec<u32> {
    let mut e = vec![order.len() as u32];
    for p in 0..order.len() {
        for q in p + 1..order.len() {
            e.push(g.get(sig, order[p], order[q]).map_or(u32::MAX, |c| c as u32));
        }
    }
    let mut labels: Vec<(Vec<u32>, Vec<i32>)> = g
        .yellow()
        .iter()
        .map(|(set, shade)| {
            let mut s: Vec<u32> = set
                .iter()
                .map(|v| order.iter().position(|w| w == v).unwrap() as u32)
                .collect();
            s.sort_unstable();
            (s, shade.0.clone())
        })
        .collect();
    labels.sort();
    for (s, shade) in labels {
        e.push(u32::MAX - 1);
        e.extend(s);
        e.push(u32::MAX - 2);
        e.extend(shade.iter().map(|&t| t as u32));
    }
    e
}

/// Encoding invariant under node renaming.
pub fn canonical_graph(sig: &RainbowSignature, g: &ColouredGraph) -> Vec<u32> {
    let len = g.len();
    let node_key: Vec<u64> = (0..len)
        .map(|v| g.yellow().keys().filter(|s| s.contains(&v)).count() as u64)
        .collect();
    let colour = canon::refine(len, &node_key, |v, w| {
        g.get(sig, v, w).map_or(u64::MAX, |c| c as u64)
    });
    canon::canonical_form(&colour, |order| encode(sig, g, order)).0
}

/// Graphviz rendering with colour names as edge labels.
pub fn to_dot(sig: &RainbowSignature, g: &ColouredGraph, name: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "digraph \"{name}\" {{");
    for v in 0..g.len() {
        let _ = writeln!(s, "  n{v} [label=\"{v}\"];");
    }
    for p in 0..g.len() {
        for q in p + 1..g.len() {
            if let Some(c) = g.raw(p, q) {
                let col = sig.colour(c);
                let style = match col {
                    c if c.is_green() => "green",
                    c if c.is_red() => "red",
                    _ => "gray",
                };
                let _ = writeln!(
                    s,
                    "  n{p} -> n{q} [label=\"{col}\", color={style}, arrowhead={}];",
                    if col.is_red() { "normal" } else { "none" }
                );
            }
        }
    }
    for (set, shade) in g.yellow() {
        let _ = writeln!(s, "  // y_{{{:?}}} on {:?}", shade.0, set);
    }
    s.push('}');
    s.push('\n');
    s
}
