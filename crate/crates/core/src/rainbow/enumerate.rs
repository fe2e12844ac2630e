use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::graph::{detect_cones, legal_coloured_graph, ColouredGraph, Shade};
use super::signature::{ColourId, RainbowSignature};
use crate::error::{Error, Result};
use crate::kernel::{AtomId, CaAtomStructure, Relation};

/// Which yellow labels atoms carry.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum YellowPolicy {
    /// No yellow labels.
    #[default]
    Unlabelled,
    /// Each (n-1)-set of blocks carries no shade or any shade allowed by its cones.
    Partial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumOptions {
    pub yellow: YellowPolicy,
    pub atom_cap: usize,
}

pub const DEFAULT_ATOM_CAP: usize = 250_000;
/// Partial labelling enumerates all `2^|G|` shades; above this many greens it is refused.
pub const PARTIAL_SHADE_GREEN_LIMIT: usize = 10;

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions {
            yellow: YellowPolicy::Unlabelled,
            atom_cap: DEFAULT_ATOM_CAP,
        }
    }
}

/// A rainbow atom: a partition of the coordinates into blocks plus a graph on the blocks.
///
/// Blocks are numbered by first occurrence along `0..n`, which fixes the representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RainbowAtom {
    pub blocks: Vec<u8>,
    pub graph: ColouredGraph,
}

impl RainbowAtom {
    pub fn block_count(&self) -> usize {
        self.graph.len()
    }

    /// Canonical key; equal keys mean equal atoms.
    pub fn key(&self) -> Vec<u32> {
        let mut k: Vec<u32> = self.blocks.iter().map(|&b| b as u32).collect();
        let len = self.graph.len();
        for p in 0..len {
            for q in p + 1..len {
                k.push(self.graph.raw(p, q).map_or(u32::MAX, |c| c as u32));
            }
        }
        for (set, shade) in self.graph.yellow() {
            k.push(u32::MAX - 1);
            k.extend(set.iter().map(|&v| v as u32));
            k.push(u32::MAX - 2);
            k.extend(shade.0.iter().map(|&t| t as u32));
        }
        k
    }

    /// Colour read from coordinate `i`'s node to coordinate `j`'s node.
    pub fn edge(&self, sig: &RainbowSignature, i: usize, j: usize) -> Option<ColourId> {
        self.graph
            .get(sig, self.blocks[i] as usize, self.blocks[j] as usize)
    }

    /// Restriction to the coordinates other than `i`, renumbered by first occurrence.
    pub fn face_key(&self, sig: &RainbowSignature, i: usize) -> Vec<u32> {
        let coords: Vec<usize> = (0..self.blocks.len()).filter(|&c| c != i).collect();
        let mut renum: Vec<Option<u8>> = vec![None; self.graph.len()];
        let mut order: Vec<usize> = Vec::new();
        let mut key = Vec::new();
        for &c in &coords {
            let b = self.blocks[c] as usize;
            let nb = *renum[b].get_or_insert_with(|| {
                order.push(b);
                (order.len() - 1) as u8
            });
            key.push(nb as u32);
        }
        let sub = self.graph.induced(sig, &order);
        for p in 0..sub.len() {
            for q in p + 1..sub.len() {
                key.push(sub.raw(p, q).map_or(u32::MAX, |c| c as u32));
            }
        }
        for (set, shade) in sub.yellow() {
            key.push(u32::MAX - 1);
            key.extend(set.iter().map(|&v| v as u32));
            key.push(u32::MAX - 2);
            key.extend(shade.0.iter().map(|&t| t as u32));
        }
        key
    }

    pub fn name(&self, sig: &RainbowSignature) -> String {
        let mut s = String::from("p");
        for b in &self.blocks {
            s.push_str(&b.to_string());
        }
        let len = self.graph.len();
        let mut sep = '|';
        for p in 0..len {
            for q in p + 1..len {
                if let Some(c) = self.graph.raw(p, q) {
                    s.push(sep);
                    sep = ',';
                    s.push_str(&format!("{p}{q}:{}", sig.colour(c)));
                }
            }
        }
        for (set, shade) in self.graph.yellow() {
            let nodes: Vec<String> = set.iter().map(|v| v.to_string()).collect();
            let tints: Vec<String> = shade.0.iter().map(|t| t.to_string()).collect();
            s.push_str(&format!("|y{{{}}}:{{{}}}", nodes.join(""), tints.join(",")));
        }
        s
    }

    pub fn has_red(&self, sig: &RainbowSignature) -> bool {
        let len = self.graph.len();
        (0..len).any(|p| {
            (p + 1..len).any(|q| self.graph.raw(p, q).map_or(false, |c| sig.colour(c).is_red()))
        })
    }
}

/// Enumerated rainbow atom structure with its atoms' graph data.
#[derive(Clone, Debug)]
pub struct RainbowStructure {
    pub sig: RainbowSignature,
    pub options: EnumOptions,
    pub atoms: Vec<RainbowAtom>,
    pub ca: CaAtomStructure,
    index: HashMap<Vec<u32>, AtomId>,
}

impl RainbowStructure {
    pub fn atom_id(&self, atom: &RainbowAtom) -> Option<AtomId> {
        self.index.get(&atom.key()).copied()
    }

    pub fn atom(&self, a: AtomId) -> &RainbowAtom {
        &self.atoms[a as usize]
    }

    /// Colour read from coordinate `i` to coordinate `j` in atom `a`; `None` when merged.
    pub fn edge(&self, a: AtomId, i: usize, j: usize) -> Option<ColourId> {
        self.atoms[a as usize].edge(&self.sig, i, j)
    }

    /// The atom whose coordinates are all distinct and whose graph is `g` on `0..n`.
    pub fn atom_of_graph(&self, g: &ColouredGraph) -> Option<AtomId> {
        let n = self.sig.dimension();
        if g.len() != n {
            return None;
        }
        self.atom_id(&RainbowAtom {
            blocks: (0..n as u8).collect(),
            graph: g.clone(),
        })
    }
}

/// Restricted growth strings of length `n`: set partitions with blocks in first-occurrence order.
pub fn set_partitions(n: usize) -> Vec<Vec<u8>> {
    fn go(n: usize, cur: &mut Vec<u8>, max: u8, out: &mut Vec<Vec<u8>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..=max {
            cur.push(b);
            go(n, cur, if b == max { max + 1 } else { max }, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        let mut cur = vec![0u8];
        go(n, &mut cur, 1, &mut out);
    }
    out
}

/// Every complete legal colouring of `k` nodes (no labels).
pub fn legal_colourings(sig: &RainbowSignature, k: usize) -> Vec<ColouredGraph> {
    let slots: Vec<(usize, usize)> = (1..k).flat_map(|q| (0..q).map(move |p| (p, q))).collect();
    let mut out = Vec::new();
    let mut g = ColouredGraph::new(k);
    fn go(
        sig: &RainbowSignature,
        slots: &[(usize, usize)],
        s: usize,
        g: &mut ColouredGraph,
        out: &mut Vec<ColouredGraph>,
    ) {
        if s == slots.len() {
            out.push(g.clone());
            return;
        }
        let (p, q) = slots[s];
        // slots go by ascending q then p, so (x, p) and (x, q) are set for every x < p
        'colour: for c in 0..sig.colour_count() as ColourId {
            g.set(sig, p, q, c);
            for x in 0..p {
                let (xp, xq) = (g.raw(x, p).unwrap(), g.raw(x, q).unwrap());
                if !sig.consistent_ids(xp, c, xq) {
                    continue 'colour;
                }
            }
            go(sig, slots, s + 1, g, out);
        }
        g.clear_edge(p, q);
    }
    go(sig, &slots, 0, &mut g, &mut out);
    out
}

fn shade_choices(sig: &RainbowSignature) -> Vec<Shade> {
    let g = sig.green_supers();
    (0u64..1 << g.len())
        .map(|m| Shade::new((0..g.len()).filter(|&k| m >> k & 1 == 1).map(|k| g[k]).collect()))
        .collect()
}

fn label_variants(sig: &RainbowSignature, g: &ColouredGraph, shades: &[Shade]) -> Vec<ColouredGraph> {
    let n = sig.dimension();
    let k = g.len();
    if k < n - 1 {
        return vec![g.clone()];
    }
    let sets: Vec<Vec<usize>> = subsets(k, n - 1);
    let cones = detect_cones(sig, g);
    let mut out = vec![g.clone()];
    for set in sets {
        let tints: Vec<i32> = cones
            .iter()
            .filter(|c| {
                let mut b = c.base.clone();
                b.sort_unstable();
                b == set
            })
            .map(|c| c.tint)
            .collect();
        let allowed: Vec<&Shade> = shades
            .iter()
            .filter(|s| tints.iter().all(|&t| s.contains(t)))
            .collect();
        let mut next = Vec::with_capacity(out.len() * (allowed.len() + 1));
        for base in &out {
            next.push(base.clone());
            for s in &allowed {
                let mut h = base.clone();
                h.label(set.clone(), (*s).clone());
                next.push(h);
            }
        }
        out = next;
    }
    out
}

fn subsets(k: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for m in 0u32..1 << k {
        if m.count_ones() as usize == size {
            out.push((0..k).filter(|&v| m >> v & 1 == 1).collect());
        }
    }
    out
}

/// Enumerate the atom structure with default options.
pub fn enumerate_rainbow_atoms(sig: &RainbowSignature) -> Result<CaAtomStructure> {
    Ok(enumerate_rainbow(sig, EnumOptions::default())?.ca)
}

/// Enumerate all rainbow atoms and build the CA atom structure.
pub fn enumerate_rainbow(sig: &RainbowSignature, options: EnumOptions) -> Result<RainbowStructure> {
    let n = sig.dimension();
    if options.yellow == YellowPolicy::Partial && sig.green_supers().len() > PARTIAL_SHADE_GREEN_LIMIT {
        return Err(Error::resource("yellow shades (2^|G|)", 1 << PARTIAL_SHADE_GREEN_LIMIT));
    }
    let shades = match options.yellow {
        YellowPolicy::Partial => shade_choices(sig),
        YellowPolicy::Unlabelled => Vec::new(),
    };
    let cap = options.atom_cap;
    // colourings per block count, shared by every partition with that many blocks
    let mut by_k: Vec<Vec<ColouredGraph>> = vec![Vec::new(); n + 1];
    let mut total = 0usize;
    for k in 1..=n {
        let graphs = legal_colourings(sig, k);
        let graphs: Vec<ColouredGraph> = match options.yellow {
            YellowPolicy::Unlabelled => graphs,
            YellowPolicy::Partial => graphs
                .par_iter()
                .flat_map_iter(|g| label_variants(sig, g, &shades))
                .collect(),
        };
        total = total.saturating_add(graphs.len());
        if total > cap {
            return Err(Error::resource("rainbow atom count", cap as u64));
        }
        by_k[k] = graphs;
    }
    let partitions = set_partitions(n);
    let mut atoms: Vec<RainbowAtom> = Vec::new();
    for p in &partitions {
        let k = *p.iter().max().unwrap() as usize + 1;
        for g in &by_k[k] {
            atoms.push(RainbowAtom {
                blocks: p.clone(),
                graph: g.clone(),
            });
            if atoms.len() > cap {
                return Err(Error::resource("rainbow atom count", cap as u64));
            }
        }
    }
    debug_assert!(atoms.iter().all(|a| legal_coloured_graph(sig, &a.graph).is_ok()));
    let mut keyed: Vec<(Vec<u32>, RainbowAtom)> = atoms.into_par_iter().map(|a| (a.key(), a)).collect();
    keyed.par_sort_by(|x, y| x.0.cmp(&y.0));
    let index: HashMap<Vec<u32>, AtomId> = keyed
        .iter()
        .enumerate()
        .map(|(i, (k, _))| (k.clone(), i as AtomId))
        .collect();
    let atoms: Vec<RainbowAtom> = keyed.into_iter().map(|(_, a)| a).collect();
    let ca = build_ca(sig, &atoms)?;
    Ok(RainbowStructure {
        sig: sig.clone(),
        options,
        atoms,
        ca,
        index,
    })
}

/// T_i by face keys, D_ij by merged coordinates.
pub(crate) fn build_ca(sig: &RainbowSignature, atoms: &[RainbowAtom]) -> Result<CaAtomStructure> {
    let n = sig.dimension();
    let cyl: Vec<Relation> = (0..n)
        .map(|i| {
            let keys: Vec<Vec<u32>> = atoms.par_iter().map(|a| a.face_key(sig, i)).collect();
            let mut ids: HashMap<&Vec<u32>, u64> = HashMap::new();
            let class: Vec<u64> = keys
                .iter()
                .map(|k| {
                    let next = ids.len() as u64;
                    *ids.entry(k).or_insert(next)
                })
                .collect();
            Relation::from_class_ids(&class)
        })
        .collect();
    let mut diag = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut d = FixedBitSet::with_capacity(atoms.len());
            for (a, atom) in atoms.iter().enumerate() {
                if atom.blocks[i] == atom.blocks[j] {
                    d.insert(a);
                }
            }
            diag.push(d);
        }
    }
    let names: Vec<String> = atoms.iter().map(|a| a.name(sig)).collect();
    Ok(CaAtomStructure::new(n, names, cyl, diag)?.with_provenance(sig.provenance()))
}
