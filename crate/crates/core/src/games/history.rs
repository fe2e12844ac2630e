use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use super::fill::{realizing_tuple, Filler};
use super::netgame::witness;
use super::network::Network;
use super::solver::BoundedGame;
use crate::kernel::{AtomId, CaAtomStructure};
use crate::{Error, Result};

/// Histories are canonicalized under node renaming up to this many nodes.
pub const HISTORY_RENAME_LIMIT: usize = 6;

/// A network with labels on its long hyperedges (node sets larger than the dimension).
/// Short hyperedges carry the constant label and are not stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hypernetwork {
    pub net: Network,
    pub hyper: BTreeMap<u16, u32>,
}

impl Hypernetwork {
    pub fn plain(net: Network) -> Self {
        Hypernetwork { net, hyper: BTreeMap::new() }
    }

    /// Whether ~-equivalent sequences share a label; with sets as keys this holds by construction,
    /// so this checks that every stored hyperedge is long and inside the nodes.
    pub fn is_well_formed(&self) -> bool {
        let n = self.net.dim() as u32;
        let nodes = self.net.node_mask();
        self.hyper.keys().all(|&s| s.count_ones() > n && s & !nodes == 0)
    }

    fn restrict(&self, mask: u16) -> Hypernetwork {
        Hypernetwork {
            net: self.net.restrict(mask),
            hyper: self.hyper.iter().filter(|(&s, _)| s & !mask == 0).map(|(&s, &l)| (s, l)).collect(),
        }
    }

    fn rename(&self, map: &[u8]) -> Hypernetwork {
        Hypernetwork {
            net: self.net.rename(map, self.net.space()),
            hyper: self.hyper.iter().map(|(&s, &l)| (map_mask(s, map), l)).collect(),
        }
    }
}

fn map_mask(s: u16, map: &[u8]) -> u16 {
    (0..16).filter(|&v| s >> v & 1 == 1).fold(0, |acc, v| acc | 1 << map[v])
}

fn subsets_of(mask: u16) -> impl Iterator<Item = u16> {
    let mut sub = mask;
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let out = sub;
        if sub == 0 {
            done = true;
        } else {
            sub = (sub - 1) & mask;
        }
        Some(out)
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HistoryKind {
    /// Hypernetworks; transformation and amalgamation moves on overlapping networks.
    Hyper,
    /// Plain networks; amalgamation only of networks overlapping on at most `n` nodes.
    Ca,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HistPos {
    Start,
    Hist(Vec<Hypernetwork>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HistMove {
    Pick(AtomId),
    Cyl { net: usize, tuple: Vec<u8>, coord: usize, atom: AtomId, target: u8 },
    /// Replace the network by its restriction to `dom` renamed by `map`.
    Transform { net: usize, map: Vec<(u8, u8)> },
    Amalgamate { left: usize, right: usize },
}

pub struct HistoryGame<'a> {
    filler: Filler<'a>,
    m: usize,
    kind: HistoryKind,
    fill_budget: u64,
}

impl<'a> HistoryGame<'a> {
    pub fn new(ca: &'a CaAtomStructure, m: usize, kind: HistoryKind) -> Result<Self> {
        if m <= ca.dimension() {
            return Err(Error::usage(format!("node bound {m} must exceed the dimension {}", ca.dimension())));
        }
        if m > super::network::MAX_NODES {
            return Err(Error::usage(format!("node bound {m} above {}", super::network::MAX_NODES)));
        }
        Ok(HistoryGame { filler: Filler::new(ca), m, kind, fill_budget: super::netgame::DEFAULT_FILL_BUDGET })
    }

    pub fn structure(&self) -> &CaAtomStructure {
        self.filler.structure()
    }

    pub fn moves(&self, p: &HistPos) -> Vec<HistMove> {
        let ca = self.structure();
        let hist = match p {
            HistPos::Start => return (0..ca.atom_count() as AtomId).map(HistMove::Pick).collect(),
            HistPos::Hist(h) => h,
        };
        let n = ca.dimension();
        let mut out = Vec::new();
        for (k, h) in hist.iter().enumerate() {
            let net = &h.net;
            let free: Vec<u8> = (0..self.m as u8).filter(|&v| !net.has_node(v)).collect();
            let mut faces = BTreeSet::new();
            for t in net.tuples() {
                let b = net.get(&t).expect("positions are total");
                for i in 0..n {
                    let mut face = t.clone();
                    face[i] = u8::MAX;
                    if !faces.insert((face, i)) {
                        continue;
                    }
                    for &a in ca.cyl(i).row(b) {
                        if witness(net, &t, i, a).is_some() {
                            continue;
                        }
                        for &z in &free {
                            out.push(HistMove::Cyl { net: k, tuple: t.clone(), coord: i, atom: a, target: z });
                        }
                    }
                }
            }
        }
        if self.kind == HistoryKind::Hyper {
            for (k, h) in hist.iter().enumerate() {
                let nodes = h.net.nodes();
                for dom in subsets_of(h.net.node_mask()).filter(|&s| s != 0) {
                    let src: Vec<u8> = nodes.iter().copied().filter(|&v| dom >> v & 1 == 1).collect();
                    for img in injections(src.len(), self.m) {
                        let map: Vec<(u8, u8)> = src.iter().copied().zip(img).collect();
                        let t = self.transform(h, &map);
                        if !hist.contains(&t) {
                            out.push(HistMove::Transform { net: k, map });
                        }
                    }
                }
            }
        }
        for l in 0..hist.len() {
            for r in l + 1..hist.len() {
                if self.amalgamable(&hist[l], &hist[r]) {
                    out.push(HistMove::Amalgamate { left: l, right: r });
                }
            }
        }
        out
    }

    fn amalgamable(&self, a: &Hypernetwork, b: &Hypernetwork) -> bool {
        let (ma, mb) = (a.net.node_mask(), b.net.node_mask());
        let common = ma & mb;
        if ma & !mb == 0 || mb & !ma == 0 {
            return false;
        }
        if (ma | mb).count_ones() as usize > self.m {
            return false;
        }
        let ok_overlap = match self.kind {
            HistoryKind::Hyper => common != 0,
            HistoryKind::Ca => common.count_ones() as usize <= self.structure().dimension(),
        };
        ok_overlap && a.restrict(common) == b.restrict(common)
    }

    fn transform(&self, h: &Hypernetwork, map: &[(u8, u8)]) -> Hypernetwork {
        let dom = map.iter().fold(0u16, |acc, &(v, _)| acc | 1 << v);
        let mut full = vec![0u8; h.net.space()];
        for &(v, w) in map {
            full[v as usize] = w;
        }
        h.restrict(dom).rename(&full)
    }

    fn fresh_labels(&self, net: &Network, keep: &[&Hypernetwork], next: &mut u32) -> BTreeMap<u16, u32> {
        let n = self.structure().dimension() as u32;
        let mut hyper = BTreeMap::new();
        if self.kind == HistoryKind::Ca {
            return hyper;
        }
        for s in subsets_of(net.node_mask()).filter(|s| s.count_ones() > n) {
            let known = keep.iter().find_map(|h| h.hyper.get(&s).copied());
            let label = known.unwrap_or_else(|| {
                *next += 1;
                *next
            });
            hyper.insert(s, label);
        }
        hyper
    }

    /// ∃'s answers, as raw histories.
    pub fn responses(&self, p: &HistPos, mv: &HistMove) -> Result<Vec<Vec<Hypernetwork>>> {
        let ca = self.structure();
        let mut budget = self.fill_budget;
        let hist: Vec<Hypernetwork> = match p {
            HistPos::Start => Vec::new(),
            HistPos::Hist(h) => h.clone(),
        };
        let next = hist.iter().flat_map(|h| h.hyper.values().copied()).max().unwrap_or(0);
        let extend = |net: Network, keep: &[&Hypernetwork], next: &mut u32| {
            let mut h = hist.clone();
            let hyper = self.fresh_labels(&net, keep, next);
            h.push(Hypernetwork { net, hyper });
            h
        };
        match mv {
            HistMove::Pick(a) => {
                let t = realizing_tuple(ca, *a);
                let mut net = Network::new(ca.dimension(), self.m);
                net.set(&t, *a);
                let nets = self.filler.completions(&net, &mut budget)?;
                Ok(nets.into_iter().map(|n| extend(n, &[], &mut next.clone())).collect())
            }
            HistMove::Cyl { net: k, tuple, coord, atom, target } => {
                let h = hist.get(*k).ok_or_else(|| Error::usage("no such network"))?;
                let mut base = h.net.clone();
                base.add_node(*target);
                let mut u = tuple.clone();
                u[*coord] = *target;
                if !self.filler.fits(&base, &u, *atom) {
                    return Ok(Vec::new());
                }
                base.set(&u, *atom);
                let nets = self.filler.completions(&base, &mut budget)?;
                Ok(nets.into_iter().map(|n| extend(n, &[h], &mut next.clone())).collect())
            }
            HistMove::Transform { net: k, map } => {
                let h = hist.get(*k).ok_or_else(|| Error::usage("no such network"))?;
                let mut out = hist.clone();
                out.push(self.transform(h, map));
                Ok(vec![out])
            }
            HistMove::Amalgamate { left, right } => {
                let (a, b) = match (hist.get(*left), hist.get(*right)) {
                    (Some(a), Some(b)) => (a, b),
                    _ => return Err(Error::usage("no such network")),
                };
                let mut base = a.net.clone();
                for v in b.net.nodes() {
                    base.add_node(v);
                }
                for t in b.net.tuples() {
                    base.set(&t, b.net.get(&t).expect("positions are total"));
                }
                let nets = self.filler.completions(&base, &mut budget)?;
                Ok(nets.into_iter().map(|n| extend(n, &[a, b], &mut next.clone())).collect())
            }
        }
    }

    fn normalize(&self, hists: Vec<Vec<Hypernetwork>>) -> Vec<HistPos> {
        let set: BTreeSet<Vec<Hypernetwork>> = hists.into_iter().map(|h| canonical_history(h, self.m)).collect();
        set.into_iter().map(HistPos::Hist).collect()
    }
}

/// Injective maps from `0..k` into `0..m`, as image lists.
fn injections(k: usize, m: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::new();
        for img in &out {
            for v in 0..m as u8 {
                if !img.contains(&v) {
                    let mut w = img.clone();
                    w.push(v);
                    next.push(w);
                }
            }
        }
        out = next;
    }
    out
}

fn relabel_sorted(mut h: Vec<Hypernetwork>) -> Vec<Hypernetwork> {
    h.sort_by(|a, b| a.net.cmp(&b.net).then_with(|| a.hyper.keys().cmp(b.hyper.keys())));
    let mut names: BTreeMap<u32, u32> = BTreeMap::new();
    for x in &mut h {
        for l in x.hyper.values_mut() {
            let len = names.len() as u32;
            *l = *names.entry(*l).or_insert(len + 1);
        }
    }
    h.sort();
    h.dedup();
    h
}

/// Histories as sets, hyperlabels renumbered, minimized over node renamings when small.
pub fn canonical_history(h: Vec<Hypernetwork>, m: usize) -> Vec<Hypernetwork> {
    if m > HISTORY_RENAME_LIMIT {
        return relabel_sorted(h);
    }
    let mut best: Option<Vec<Hypernetwork>> = None;
    for perm in injections(m, m) {
        let cand = relabel_sorted(h.iter().map(|x| x.rename(&perm)).collect());
        if best.as_ref().is_none_or(|b| cand < *b) {
            best = Some(cand);
        }
    }
    best.unwrap_or_default()
}

impl BoundedGame for HistoryGame<'_> {
    type Pos = HistPos;

    fn start(&self) -> HistPos {
        HistPos::Start
    }

    fn move_count(&self, p: &HistPos) -> usize {
        self.moves(p).len()
    }

    fn replies(&self, p: &HistPos, mv: usize) -> Result<Vec<HistPos>> {
        Ok(self.normalize(self.responses(p, &self.moves(p)[mv])?))
    }

    fn all_replies(&self, p: &HistPos) -> Result<Vec<Vec<HistPos>>> {
        self.moves(p).par_iter().map(|mv| Ok(self.normalize(self.responses(p, mv)?))).collect()
    }

    fn describe_move(&self, p: &HistPos, mv: usize) -> String {
        format!("{:?}", self.moves(p)[mv])
    }

    fn describe_pos(&self, p: &HistPos) -> String {
        match p {
            HistPos::Start => "start".into(),
            HistPos::Hist(h) => h
                .iter()
                .map(|x| x.net.describe(self.structure()))
                .collect::<Vec<_>>()
                .join("\n--\n"),
        }
    }
}
