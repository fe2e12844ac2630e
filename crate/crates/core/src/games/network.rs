use std::fmt;

use crate::canon;
use crate::kernel::{pair_index, AtomId, CaAtomStructure};

pub const NO_LABEL: u32 = u32::MAX;
/// Node names are below this bound.
pub const MAX_NODES: usize = 12;

/// A partial map from `n`-tuples over nodes `0..space` to atoms.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Network {
    dim: u8,
    space: u8,
    nodes: u16,
    labels: Vec<u32>,
}

/// Why a network is inconsistent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NetworkViolation {
    Unlabelled { tuple: Vec<u8> },
    Diagonal { tuple: Vec<u8>, i: usize, j: usize },
    Cylindrifier { tuple: Vec<u8>, other: Vec<u8>, i: usize },
}

impl fmt::Display for NetworkViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NetworkViolation::Unlabelled { tuple } => write!(f, "tuple {tuple:?} unlabelled"),
            NetworkViolation::Diagonal { tuple, i, j } => {
                write!(f, "tuple {tuple:?}: label disagrees with d_{i}{j}")
            }
            NetworkViolation::Cylindrifier { tuple, other, i } => {
                write!(f, "tuples {tuple:?} and {other:?} agree off {i} but labels are not T_{i}-related")
            }
        }
    }
}

impl Network {
    pub fn new(dim: usize, space: usize) -> Self {
        assert!(space <= MAX_NODES, "node space above {MAX_NODES}");
        Network {
            dim: dim as u8,
            space: space as u8,
            nodes: 0,
            labels: vec![NO_LABEL; space.pow(dim as u32)],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn space(&self) -> usize {
        self.space as usize
    }

    pub fn node_mask(&self) -> u16 {
        self.nodes
    }

    pub fn has_node(&self, v: u8) -> bool {
        self.nodes >> v & 1 == 1
    }

    pub fn nodes(&self) -> Vec<u8> {
        (0..self.space).filter(|&v| self.has_node(v)).collect()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.count_ones() as usize
    }

    pub fn add_node(&mut self, v: u8) {
        assert!((v as usize) < self.space());
        self.nodes |= 1 << v;
    }

    fn index(&self, t: &[u8]) -> usize {
        let s = self.space as usize;
        t.iter().rev().fold(0, |acc, &x| acc * s + x as usize)
    }

    pub fn get(&self, t: &[u8]) -> Option<AtomId> {
        let l = self.labels[self.index(t)];
        (l != NO_LABEL).then_some(l)
    }

    /// Label `t`, adding its nodes.
    pub fn set(&mut self, t: &[u8], a: AtomId) {
        for &v in t {
            self.add_node(v);
        }
        let i = self.index(t);
        self.labels[i] = a;
    }

    pub fn clear(&mut self, t: &[u8]) {
        let i = self.index(t);
        self.labels[i] = NO_LABEL;
    }

    /// Every tuple over the current nodes, in lexicographic order.
    pub fn tuples(&self) -> Vec<Vec<u8>> {
        tuples_over(&self.nodes(), self.dim())
    }

    pub fn is_total(&self) -> bool {
        self.tuples().iter().all(|t| self.get(t).is_some())
    }

    /// The network restricted to the nodes in `mask`.
    pub fn restrict(&self, mask: u16) -> Network {
        let mut out = Network::new(self.dim(), self.space());
        out.nodes = self.nodes & mask;
        for t in out.tuples() {
            if let Some(a) = self.get(&t) {
                out.set(&t, a);
            }
        }
        out
    }

    /// Rename node `v` to `map[v]` (which must be injective on the nodes) in a space of `space`.
    pub fn rename(&self, map: &[u8], space: usize) -> Network {
        let mut out = Network::new(self.dim(), space);
        for v in self.nodes() {
            out.add_node(map[v as usize]);
        }
        for t in self.tuples() {
            if let Some(a) = self.get(&t) {
                let u: Vec<u8> = t.iter().map(|&x| map[x as usize]).collect();
                out.set(&u, a);
            }
        }
        out
    }

    /// First violated consistency condition over the labelled tuples, then the first unlabelled tuple.
    pub fn check(&self, ca: &CaAtomStructure) -> Result<(), NetworkViolation> {
        let n = self.dim();
        let nodes = self.nodes();
        for t in self.tuples() {
            let Some(a) = self.get(&t) else {
                continue;
            };
            for i in 0..n {
                for j in i + 1..n {
                    if ca.in_diag(i, j, a) != (t[i] == t[j]) {
                        return Err(NetworkViolation::Diagonal { tuple: t, i, j });
                    }
                }
                for &z in &nodes {
                    if z == t[i] {
                        continue;
                    }
                    let mut u = t.clone();
                    u[i] = z;
                    if let Some(b) = self.get(&u) {
                        if !ca.cyl(i).related(a, b) {
                            return Err(NetworkViolation::Cylindrifier { tuple: t, other: u, i });
                        }
                    }
                }
            }
        }
        match self.tuples().into_iter().find(|t| self.get(t).is_none()) {
            Some(tuple) => Err(NetworkViolation::Unlabelled { tuple }),
            None => Ok(()),
        }
    }

    /// Node renaming onto `0..k` (same node space) that minimizes the label table. `pinned` nodes come first, in order.
    /// Returns the canonical network and `order`, where `order[p]` is the old name of node `p`.
    pub fn canonical(&self, pinned: &[u8]) -> (Network, Vec<u8>) {
        let nodes = self.nodes();
        let k = nodes.len();
        let n = self.dim();
        let node_key: Vec<u64> = nodes
            .iter()
            .map(|v| {
                let pin = pinned.iter().position(|p| p == v).map_or(u64::MAX >> 1, |p| p as u64);
                let diag = self.get(&vec![*v; n]).map_or(u64::MAX, |a| a as u64);
                pin << 32 | (diag & 0xffff_ffff)
            })
            .collect();
        let pair = |a: usize, b: usize| {
            let mut t = vec![nodes[b]; n];
            t[0] = nodes[a];
            self.get(&t).map_or(u64::MAX, |x| x as u64)
        };
        let colour = canon::refine(k, &node_key, pair);
        let all = tuples_over(&(0..k as u8).collect::<Vec<_>>(), n);
        let (_, order) = canon::canonical_form(&colour, |ord| {
            all.iter()
                .map(|t| {
                    let u: Vec<u8> = t.iter().map(|&p| nodes[ord[p as usize]]).collect();
                    self.get(&u).unwrap_or(NO_LABEL)
                })
                .collect()
        });
        let order: Vec<u8> = order.iter().map(|&p| nodes[p]).collect();
        let mut map = vec![0u8; self.space()];
        for (p, &v) in order.iter().enumerate() {
            map[v as usize] = p as u8;
        }
        (self.rename(&map, self.space()), order)
    }

    /// Pattern of equal coordinates as a pair bitmask.
    pub fn eq_pattern(t: &[u8]) -> u32 {
        let n = t.len();
        let mut p = 0;
        for i in 0..n {
            for j in i + 1..n {
                if t[i] == t[j] {
                    p |= 1 << pair_index(n, i, j);
                }
            }
        }
        p
    }

    pub fn describe(&self, ca: &CaAtomStructure) -> String {
        let mut s = format!("nodes {:?}", self.nodes());
        for t in self.tuples() {
            if let Some(a) = self.get(&t) {
                if t.windows(2).all(|w| w[0] != w[1]) || self.dim() == 2 {
                    s.push_str(&format!("\n  {t:?} {}", ca.name(a)));
                }
            }
        }
        s
    }
}

impl fmt::Debug for Network {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Network(nodes={:?}", self.nodes())?;
        for t in self.tuples() {
            if let Some(a) = self.get(&t) {
                write!(f, " {t:?}:{a}")?;
            }
        }
        write!(f, ")")
    }
}

pub fn tuples_over(nodes: &[u8], n: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::with_capacity(n)];
    for _ in 0..n {
        let mut next = Vec::with_capacity(out.len() * nodes.len());
        for t in &out {
            for &v in nodes {
                let mut u = t.clone();
                u.push(v);
                next.push(u);
            }
        }
        out = next;
    }
    out
}
