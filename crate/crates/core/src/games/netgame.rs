use std::collections::BTreeSet;

use rayon::prelude::*;

use super::fill::{realizing_tuple, Filler};
use super::network::Network;
use super::solver::BoundedGame;
use crate::kernel::{AtomId, CaAtomStructure};
use crate::{Error, Result};

/// Default cap on assignments tried while filling one answer.
pub const DEFAULT_FILL_BUDGET: u64 = 5_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NetMode {
    /// Nodes are never reused; ∃ loses when a demand needs a node beyond `m`.
    Bounded,
    /// ∀ names the witness node and may reuse one outside the demand tuple.
    Reuse,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NetPos {
    Start,
    Net(Network),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NetMove {
    /// Round 0: ∀ picks the atom to be realized.
    Pick(AtomId),
    /// ∀ demands a witness for `atom` at `tuple` with coordinate `coord` replaced by `target`
    /// (a fresh node when `None`).
    Cyl { tuple: Vec<u8>, coord: usize, atom: AtomId, target: Option<u8> },
}

pub struct NetGame<'a> {
    filler: Filler<'a>,
    m: usize,
    mode: NetMode,
    canonical: bool,
    fill_budget: u64,
}

impl<'a> NetGame<'a> {
    pub fn new(ca: &'a CaAtomStructure, m: usize, mode: NetMode) -> Result<Self> {
        if m <= ca.dimension() {
            return Err(Error::usage(format!("node bound {m} must exceed the dimension {}", ca.dimension())));
        }
        if m > super::network::MAX_NODES {
            return Err(Error::usage(format!("node bound {m} above {}", super::network::MAX_NODES)));
        }
        Ok(NetGame { filler: Filler::new(ca), m, mode, canonical: true, fill_budget: DEFAULT_FILL_BUDGET })
    }

    /// Keep positions as played instead of up to node renaming.
    pub fn without_canonical(mut self) -> Self {
        self.canonical = false;
        self
    }

    pub fn with_fill_budget(mut self, b: u64) -> Self {
        self.fill_budget = b;
        self
    }

    pub fn structure(&self) -> &CaAtomStructure {
        self.filler.structure()
    }

    pub fn nodes(&self) -> usize {
        self.m
    }

    pub fn mode(&self) -> NetMode {
        self.mode
    }

    /// ∀'s moves at a position, unwitnessed demands only.
    pub fn moves(&self, p: &NetPos) -> Vec<NetMove> {
        let ca = self.structure();
        let net = match p {
            NetPos::Start => return (0..ca.atom_count() as AtomId).map(NetMove::Pick).collect(),
            NetPos::Net(net) => net,
        };
        let n = ca.dimension();
        let nodes = net.nodes();
        let mut faces = BTreeSet::new();
        let mut out = Vec::new();
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
                    match self.mode {
                        NetMode::Bounded => {
                            out.push(NetMove::Cyl { tuple: t.clone(), coord: i, atom: a, target: None })
                        }
                        NetMode::Reuse => {
                            for &k in &nodes {
                                if (0..n).any(|j| j != i && t[j] == k) {
                                    continue;
                                }
                                out.push(NetMove::Cyl { tuple: t.clone(), coord: i, atom: a, target: Some(k) });
                            }
                            if nodes.len() < self.m {
                                out.push(NetMove::Cyl { tuple: t.clone(), coord: i, atom: a, target: None });
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// ∃'s answers to `mv` as played, without canonicalization.
    pub fn responses(&self, p: &NetPos, mv: &NetMove) -> Result<Vec<Network>> {
        let ca = self.structure();
        let mut budget = self.fill_budget;
        match (p, mv) {
            (NetPos::Start, NetMove::Pick(a)) => {
                let t = realizing_tuple(ca, *a);
                let mut net = Network::new(ca.dimension(), self.m);
                net.set(&t, *a);
                self.filler.completions(&net, &mut budget)
            }
            (NetPos::Net(net), NetMove::Cyl { tuple, coord, atom, target }) => {
                let n = ca.dimension();
                if tuple.len() != n || *coord >= n || tuple.iter().any(|&v| !net.has_node(v)) {
                    return Err(Error::usage(format!("demand {tuple:?} is not a tuple of the network")));
                }
                let b = net.get(tuple).expect("positions are total");
                if !ca.cyl(*coord).related(b, *atom) {
                    return Err(Error::usage(format!(
                        "atom {} is not T_{coord}-related to {} at {tuple:?}",
                        ca.name(*atom),
                        ca.name(b)
                    )));
                }
                let mut out = Vec::new();
                if witness(net, tuple, *coord, *atom).is_some() {
                    out.push(net.clone());
                }
                let k = match target {
                    Some(k) => {
                        if (0..n).any(|j| j != *coord && tuple[j] == *k) || *k as usize >= self.m {
                            return Err(Error::usage(format!("target node {k} is not available")));
                        }
                        *k
                    }
                    None => match (0..self.m as u8).find(|&v| !net.has_node(v)) {
                        Some(k) => k,
                        None => return Ok(out),
                    },
                };
                let mut base = net.restrict(!(1u16 << k));
                base.add_node(k);
                let mut u = tuple.clone();
                u[*coord] = k;
                if !self.filler.fits(&base, &u, *atom) {
                    return Ok(out);
                }
                base.set(&u, *atom);
                out.extend(self.filler.completions(&base, &mut budget)?);
                Ok(out)
            }
            _ => Err(Error::usage("move does not fit the position")),
        }
    }

    fn normalize(&self, nets: Vec<Network>) -> Vec<NetPos> {
        let set: BTreeSet<Network> = nets
            .into_iter()
            .map(|n| if self.canonical { n.canonical(&[]).0 } else { n })
            .collect();
        set.into_iter().map(NetPos::Net).collect()
    }
}

/// A node `z` already witnessing `a` at `t` with coordinate `i` replaced.
pub fn witness(net: &Network, t: &[u8], i: usize, a: AtomId) -> Option<u8> {
    let mut u = t.to_vec();
    net.nodes().into_iter().find(|&z| {
        u[i] = z;
        net.get(&u) == Some(a)
    })
}

impl BoundedGame for NetGame<'_> {
    type Pos = NetPos;

    fn start(&self) -> NetPos {
        NetPos::Start
    }

    fn move_count(&self, p: &NetPos) -> usize {
        self.moves(p).len()
    }

    fn replies(&self, p: &NetPos, mv: usize) -> Result<Vec<NetPos>> {
        let mv = &self.moves(p)[mv];
        Ok(self.normalize(self.responses(p, mv)?))
    }

    fn all_replies(&self, p: &NetPos) -> Result<Vec<Vec<NetPos>>> {
        self.moves(p)
            .par_iter()
            .map(|mv| Ok(self.normalize(self.responses(p, mv)?)))
            .collect()
    }

    fn describe_move(&self, p: &NetPos, mv: usize) -> String {
        describe_move(self.structure(), &self.moves(p)[mv])
    }

    fn describe_pos(&self, p: &NetPos) -> String {
        match p {
            NetPos::Start => "start".into(),
            NetPos::Net(n) => n.describe(self.structure()),
        }
    }
}

pub fn describe_move(ca: &CaAtomStructure, mv: &NetMove) -> String {
    match mv {
        NetMove::Pick(a) => format!("pick {}", ca.name(*a)),
        NetMove::Cyl { tuple, coord, atom, target } => {
            let tgt = target.map_or("fresh".to_string(), |k| k.to_string());
            format!("cyl {tuple:?} c{coord} {} -> {tgt}", ca.name(*atom))
        }
    }
}
