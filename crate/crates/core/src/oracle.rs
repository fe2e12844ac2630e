//! Brute-force search for finite representations of small atom structures.

use std::collections::BTreeSet;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::games::{network::tuples_over, Filler, Network};
use crate::kernel::{powerset_structure, square_union_structure, AtomId, CaAtomStructure, Relation};
use crate::{Error, Result};

pub const DEFAULT_SEARCH_BUDGET: u64 = 10_000_000;

/// A representation on a disjoint union of squares: block `b` holds points
/// `offset_b..offset_b + blocks[b]`, and `images[a]` lists the tuples sent to atom `a`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Representation {
    pub base_size: usize,
    pub blocks: Vec<usize>,
    pub images: Vec<Vec<Vec<u32>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "camelCase")]
pub enum SearchOutcome {
    Found { representation: Representation, explored: u64 },
    #[serde(rename_all = "camelCase")]
    NoneWithinBudget { explored: u64, frontier: String },
}

impl SearchOutcome {
    pub fn representation(&self) -> Option<&Representation> {
        match self {
            SearchOutcome::Found { representation, .. } => Some(representation),
            SearchOutcome::NoneWithinBudget { .. } => None,
        }
    }
}

/// A total network where every demand `T_i(N(x))` is witnessed by some node.
fn saturated(ca: &CaAtomStructure, net: &Network) -> bool {
    let n = ca.dimension();
    let nodes = net.nodes();
    for t in net.tuples() {
        let a = net.get(&t).expect("total");
        for i in 0..n {
            let mut u = t.clone();
            let mut seen = BTreeSet::new();
            for &z in &nodes {
                u[i] = z;
                seen.insert(net.get(&u).expect("total"));
            }
            if ca.cyl(i).row(a).iter().any(|b| !seen.contains(b)) {
                return false;
            }
        }
    }
    true
}

/// Saturated networks on exactly `b` nodes, one per isomorphism type.
fn saturated_networks(filler: &Filler<'_>, b: usize, budget: &mut u64) -> Result<Vec<Network>> {
    let ca = filler.structure();
    let mut start = Network::new(ca.dimension(), b);
    for v in 0..b as u8 {
        start.add_node(v);
    }
    let all = filler.completions(&start, budget)?;
    let set: BTreeSet<Network> = all
        .into_iter()
        .filter(|net| saturated(ca, net))
        .map(|net| net.canonical(&[]).0)
        .collect();
    Ok(set.into_iter().collect())
}

fn atoms_of(net: &Network, size: usize) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(size);
    for t in net.tuples() {
        s.insert(net.get(&t).expect("total") as usize);
    }
    s
}

fn to_representation(ca: &CaAtomStructure, nets: &[&Network]) -> Representation {
    let mut images = vec![Vec::new(); ca.atom_count()];
    let mut offset = 0u32;
    let mut blocks = Vec::new();
    for net in nets {
        for t in net.tuples() {
            let a = net.get(&t).expect("total") as usize;
            images[a].push(t.iter().map(|&v| offset + v as u32).collect());
        }
        blocks.push(net.node_count());
        offset += net.node_count() as u32;
    }
    for img in &mut images {
        img.sort();
    }
    Representation { base_size: offset as usize, blocks, images }
}

/// Single squares of size `1..=max_base` first, then disjoint unions of saturated blocks
/// with total base at most `max_base`. `budget` counts explored label assignments.
pub fn search_representation(ca: &CaAtomStructure, max_base: usize, budget: u64) -> SearchOutcome {
    let filler = Filler::new(ca);
    let size = ca.atom_count();
    let mut left = budget;
    let mut by_size: Vec<Vec<(Network, FixedBitSet)>> = vec![Vec::new()];
    let max_base = max_base.min(crate::games::network::MAX_NODES);
    for b in 1..=max_base {
        match saturated_networks(&filler, b, &mut left) {
            Ok(nets) => {
                let with_atoms: Vec<(Network, FixedBitSet)> =
                    nets.into_iter().map(|n| { let s = atoms_of(&n, size); (n, s) }).collect();
                if let Some((net, _)) = with_atoms.iter().find(|(_, s)| s.count_ones(..) == size) {
                    return SearchOutcome::Found {
                        representation: to_representation(ca, &[net]),
                        explored: budget - left,
                    };
                }
                by_size.push(with_atoms);
            }
            Err(_) => {
                return SearchOutcome::NoneWithinBudget {
                    explored: budget,
                    frontier: format!("budget spent filling squares of size {b}"),
                }
            }
        }
    }
    let pool: Vec<(usize, &Network, &FixedBitSet)> = by_size
        .iter()
        .enumerate()
        .flat_map(|(b, v)| v.iter().map(move |(n, s)| (b, n, s)))
        .collect();
    let mut chosen = Vec::new();
    let mut covered = FixedBitSet::with_capacity(size);
    if cover(&pool, size, max_base, &mut covered, &mut chosen, &mut left) {
        let nets: Vec<&Network> = chosen.iter().map(|&k| pool[k].1).collect();
        return SearchOutcome::Found { representation: to_representation(ca, &nets), explored: budget - left };
    }
    SearchOutcome::NoneWithinBudget {
        explored: budget - left,
        frontier: if left == 0 {
            "budget spent combining squares".into()
        } else {
            format!("no union of squares with base <= {max_base}")
        },
    }
}

fn cover(
    pool: &[(usize, &Network, &FixedBitSet)],
    size: usize,
    room: usize,
    covered: &mut FixedBitSet,
    chosen: &mut Vec<usize>,
    left: &mut u64,
) -> bool {
    let Some(need) = (0..size).find(|&a| !covered.contains(a)) else {
        return true;
    };
    for (k, &(b, _, atoms)) in pool.iter().enumerate() {
        if b > room || !atoms.contains(need) {
            continue;
        }
        if *left == 0 {
            return false;
        }
        *left -= 1;
        let before = covered.clone();
        covered.union_with(atoms);
        chosen.push(k);
        if cover(pool, size, room - b, covered, chosen, left) {
            return true;
        }
        chosen.pop();
        *covered = before;
    }
    false
}

/// First violated condition of `rep` as a representation of `ca`.
pub fn verify_representation(ca: &CaAtomStructure, rep: &Representation) -> std::result::Result<(), String> {
    let n = ca.dimension();
    if rep.images.len() != ca.atom_count() {
        return Err(format!("{} images for {} atoms", rep.images.len(), ca.atom_count()));
    }
    if rep.blocks.iter().sum::<usize>() != rep.base_size {
        return Err("block sizes do not add up to the base".into());
    }
    let mut block_of = Vec::new();
    let mut starts = Vec::new();
    for (b, &len) in rep.blocks.iter().enumerate() {
        starts.push(block_of.len() as u32);
        block_of.extend(std::iter::repeat(b).take(len));
    }
    let mut label: std::collections::HashMap<Vec<u32>, AtomId> = std::collections::HashMap::new();
    for (a, img) in rep.images.iter().enumerate() {
        if img.is_empty() {
            return Err(format!("atom {} has an empty image", ca.name(a as AtomId)));
        }
        for t in img {
            if t.len() != n || t.iter().any(|&p| p as usize >= rep.base_size) {
                return Err(format!("tuple {t:?} is not over the base"));
            }
            if t.iter().any(|&p| block_of[p as usize] != block_of[t[0] as usize]) {
                return Err(format!("tuple {t:?} leaves its square"));
            }
            if let Some(b) = label.insert(t.clone(), a as AtomId) {
                return Err(format!(
                    "tuple {t:?} lies in the images of {} and {}",
                    ca.name(b),
                    ca.name(a as AtomId)
                ));
            }
        }
    }
    let squares: Vec<(Vec<u32>, Vec<Vec<u32>>)> = rep
        .blocks
        .iter()
        .enumerate()
        .map(|(b, &len)| {
            let pts: Vec<u32> = (starts[b]..starts[b] + len as u32).collect();
            let small: Vec<u8> = (0..len as u8).collect();
            let tuples = tuples_over(&small, n)
                .into_iter()
                .map(|t| t.iter().map(|&v| pts[v as usize]).collect())
                .collect();
            (pts, tuples)
        })
        .collect();
    for (_, tuples) in &squares {
        if let Some(s) = tuples.iter().find(|s| !label.contains_key(*s)) {
            return Err(format!("tuple {s:?} of the unit has no atom"));
        }
    }
    for (pts, tuples) in &squares {
        for s in tuples {
            let a = label[s];
            for i in 0..n {
                for j in i + 1..n {
                    if ca.in_diag(i, j, a) != (s[i] == s[j]) {
                        return Err(format!("d{i}{j} fails at {s:?}"));
                    }
                }
                let mut u = s.clone();
                let mut reach = BTreeSet::new();
                for &p in pts {
                    u[i] = p;
                    reach.insert(label[&u]);
                }
                let row: BTreeSet<AtomId> = ca.cyl(i).row(a).iter().copied().collect();
                if reach != row {
                    return Err(format!("c{i} fails at {s:?}"));
                }
            }
        }
    }
    Ok(())
}

/// Parse a representation from JSON.
pub fn load_representation(text: &str) -> Result<Representation> {
    serde_json::from_str(text)
        .map_err(|e| Error::format(format!("line {} column {}", e.line(), e.column()), e.to_string()))
}

fn two_atom(name: &str, t0: &[u64], t1: &[u64], diag: &[usize]) -> CaAtomStructure {
    let mut d = FixedBitSet::with_capacity(2);
    for &a in diag {
        d.insert(a);
    }
    CaAtomStructure::new(
        2,
        vec!["a".into(), "b".into()],
        vec![Relation::from_class_ids(t0), Relation::from_class_ids(t1)],
        vec![d],
    )
    .expect("fixture is well formed")
    .with_provenance(serde_json::json!({ "fixture": name }))
}

/// Small named structures: representable ones and seeded non-examples.
pub fn micro_structures() -> Vec<(&'static str, CaAtomStructure)> {
    let mut one_d = FixedBitSet::with_capacity(1);
    one_d.insert(0);
    let one = CaAtomStructure::new(
        2,
        vec!["a".into()],
        vec![Relation::from_class_ids(&[0]), Relation::from_class_ids(&[0])],
        vec![one_d],
    )
    .expect("fixture is well formed");
    vec![
        ("powerset-3-over-2", powerset_structure(3, 2).expect("fixture")),
        ("powerset-2-over-2", powerset_structure(2, 2).expect("fixture")),
        ("one-atom", one),
        ("square-union-1-2", square_union_structure(2, &[1, 2]).expect("fixture")),
        // diagonal atom a, off-diagonal atom b, both cylindrifiers total
        ("diagonal-pair", two_atom("diagonal-pair", &[0, 0], &[0, 0], &[0])),
        // both atoms diagonal yet T-linked: no tuple can carry b
        ("linked-diagonals", two_atom("linked-diagonals", &[0, 0], &[0, 0], &[0, 1])),
        // off-diagonal atom b isolated by T_0: it can never be witnessed from a
        ("isolated-off-diagonal", two_atom("isolated-off-diagonal", &[0, 1], &[0, 0], &[0])),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::powerset_structure;

    #[test]
    fn powerset_found_at_its_base() {
        let ca = powerset_structure(2, 2).unwrap();
        let out = search_representation(&ca, 3, DEFAULT_SEARCH_BUDGET);
        let rep = out.representation().expect("found");
        assert_eq!(rep.base_size, 2);
        assert_eq!(verify_representation(&ca, rep), Ok(()));
    }
}
