//! Basic matrices over relation-algebra atom structures and cylindric bases.

use std::collections::{HashMap, HashSet};
use std::sync::atomic::{AtomicU64, Ordering};

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::{AtomId, CaAtomStructure, RaAtomStructure, Relation};

/// An `m × m` atom matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BasicMatrix {
    pub size: usize,
    pub cells: Vec<AtomId>,
}

impl BasicMatrix {
    pub fn get(&self, x: usize, y: usize) -> AtomId {
        self.cells[x * self.size + y]
    }

    /// Cells `(w, z)` with neither index in `skip`.
    pub fn key_without(&self, skip: &[usize]) -> Vec<AtomId> {
        let m = self.size;
        let mut k = Vec::with_capacity(m * m);
        for w in 0..m {
            for z in 0..m {
                if !skip.contains(&w) && !skip.contains(&z) {
                    k.push(self.get(w, z));
                }
            }
        }
        k
    }

    /// `f ≡_{xy} g`; `x = y` reads as `≡_x`.
    pub fn equiv(&self, other: &BasicMatrix, x: usize, y: usize) -> bool {
        self.key_without(&[x, y]) == other.key_without(&[x, y])
    }

    /// First `(x, y, z)` breaking a defining condition.
    pub fn violation(&self, ra: &RaAtomStructure) -> Option<(usize, usize, usize)> {
        let m = self.size;
        for x in 0..m {
            if !ra.is_identity(self.get(x, x)) {
                return Some((x, x, x));
            }
        }
        for x in 0..m {
            for y in 0..m {
                for z in 0..m {
                    if !ra.consistent(self.get(x, y), self.get(x, z), self.get(z, y)) {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }

    pub fn describe(&self, ra: &RaAtomStructure) -> String {
        let rows: Vec<String> = (0..self.size)
            .map(|x| {
                (0..self.size)
                    .map(|y| ra.name(self.get(x, y)).to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        format!("[{}]", rows.join(";"))
    }
}

pub const DEFAULT_MATRIX_SEARCH_CAP: u64 = 50_000_000;

/// Every basic matrix of size `m`, in lexicographic order of cells.
pub fn enumerate_basic_matrices(ra: &RaAtomStructure, m: usize, cap: u64) -> Result<Vec<BasicMatrix>> {
    if m == 0 {
        return Err(Error::usage("matrix size must be positive"));
    }
    let ids: Vec<AtomId> = ra.identity().ones().map(|a| a as AtomId).collect();
    // cell order: diagonal, then for each (x < y) the pair (x,y), (y,x)
    let mut order: Vec<(usize, usize)> = (0..m).map(|x| (x, x)).collect();
    for y in 1..m {
        for x in 0..y {
            order.push((x, y));
            order.push((y, x));
        }
    }
    let nodes = AtomicU64::new(0);
    let found = AtomicU64::new(0);
    let all: Vec<AtomId> = (0..ra.atom_count() as AtomId).collect();
    let results: Vec<Result<Vec<BasicMatrix>>> = ids
        .par_iter()
        .map(|&d0| {
            let mut cells = vec![AtomId::MAX; m * m];
            cells[0] = d0;
            let mut out = Vec::new();
            search(ra, m, &order, 1, &mut cells, &ids, &all, &nodes, &found, cap, &mut out)?;
            Ok(out)
        })
        .collect();
    let mut out = Vec::new();
    for r in results {
        out.extend(r?);
    }
    out.sort();
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn search(
    ra: &RaAtomStructure,
    m: usize,
    order: &[(usize, usize)],
    pos: usize,
    cells: &mut Vec<AtomId>,
    ids: &[AtomId],
    all: &[AtomId],
    nodes: &AtomicU64,
    found: &AtomicU64,
    cap: u64,
    out: &mut Vec<BasicMatrix>,
) -> Result<()> {
    if pos == order.len() {
        found.fetch_add(1, Ordering::Relaxed);
        out.push(BasicMatrix {
            size: m,
            cells: cells.clone(),
        });
        return Ok(());
    }
    let (x, y) = order[pos];
    let choices = if x == y { ids } else { all };
    for &a in choices {
        if nodes.fetch_add(1, Ordering::Relaxed) >= cap {
            return Err(Error::resource(
                format!(
                    "basic matrix search nodes ({} matrices found before stopping)",
                    found.load(Ordering::Relaxed)
                ),
                cap,
            ));
        }
        cells[x * m + y] = a;
        if triangles_ok(ra, m, cells, x, y) {
            search(ra, m, order, pos + 1, cells, ids, all, nodes, found, cap, out)?;
        }
    }
    cells[x * m + y] = AtomId::MAX;
    Ok(())
}

/// Every fully assigned triangle `(f(u,v), f(u,w), f(w,v))` that uses cell `(x, y)`.
fn triangles_ok(ra: &RaAtomStructure, m: usize, cells: &[AtomId], x: usize, y: usize) -> bool {
    let get = |u: usize, v: usize| cells[u * m + v];
    for u in 0..m {
        for v in 0..m {
            for w in 0..m {
                let uses = (u == x && v == y) || (u == x && w == y) || (w == x && v == y);
                if !uses {
                    continue;
                }
                let (a, b, c) = (get(u, v), get(u, w), get(w, v));
                if a == AtomId::MAX || b == AtomId::MAX || c == AtomId::MAX {
                    continue;
                }
                if !ra.consistent(a, b, c) {
                    return false;
                }
            }
        }
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum BasisWitness {
    /// No matrix has `f(0,1)=a, f(0,2)=b, f(2,1)=c` although `a <= b;c`.
    Triple { a: AtomId, b: AtomId, c: AtomId },
    /// `f ≡_xy g` (indices into the matrix list) but no `h` with `f ≡_x h ≡_y g`.
    Amalgamation { f: usize, g: usize, x: usize, y: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisReport {
    pub is_basis: bool,
    pub witness: Option<BasisWitness>,
}

pub fn check_cylindric_basis(ms: &[BasicMatrix], ra: &RaAtomStructure, m: usize) -> BasisReport {
    let fail = |w| BasisReport {
        is_basis: false,
        witness: Some(w),
    };
    if m >= 3 {
        let present: HashSet<(AtomId, AtomId, AtomId)> =
            ms.iter().map(|f| (f.get(0, 1), f.get(0, 2), f.get(2, 1))).collect();
        let size = ra.atom_count() as AtomId;
        for a in 0..size {
            for b in 0..size {
                for c in 0..size {
                    if ra.consistent(a, b, c) && !present.contains(&(a, b, c)) {
                        return fail(BasisWitness::Triple { a, b, c });
                    }
                }
            }
        }
    }
    let keys: Vec<Vec<Vec<AtomId>>> = ms
        .iter()
        .map(|f| (0..m).map(|x| f.key_without(&[x])).collect())
        .collect();
    let mut by_key: Vec<HashMap<&Vec<AtomId>, Vec<usize>>> = vec![HashMap::new(); m];
    for (h, k) in keys.iter().enumerate() {
        for x in 0..m {
            by_key[x].entry(&k[x]).or_default().push(h);
        }
    }
    for x in 0..m {
        for y in 0..m {
            let mut groups: HashMap<Vec<AtomId>, Vec<usize>> = HashMap::new();
            for (f, mat) in ms.iter().enumerate() {
                groups.entry(mat.key_without(&[x, y])).or_default().push(f);
            }
            let mut group_list: Vec<&Vec<usize>> = groups.values().collect();
            group_list.sort();
            for group in group_list {
                for &f in group {
                    let reach: HashSet<&Vec<AtomId>> = by_key[x][&keys[f][x]]
                        .iter()
                        .map(|&h| &keys[h][y])
                        .collect();
                    for &g in group {
                        if !reach.contains(&keys[g][y]) {
                            return fail(BasisWitness::Amalgamation { f, g, x, y });
                        }
                    }
                }
            }
        }
    }
    BasisReport {
        is_basis: true,
        witness: None,
    }
}

/// CA atom structure on the matrices: `f T_i g` iff `f ≡_i g`, `D_ij = {f : f(i,j) ∈ Id}`.
pub fn ca_from_matrices(ms: &[BasicMatrix], ra: &RaAtomStructure, m: usize) -> Result<CaAtomStructure> {
    if ms.is_empty() {
        return Err(Error::usage("empty matrix set"));
    }
    if ms.iter().any(|f| f.size != m) {
        return Err(Error::usage("matrix of the wrong size"));
    }
    let cyl: Vec<Relation> = (0..m)
        .map(|i| {
            let mut ids: HashMap<Vec<AtomId>, u64> = HashMap::new();
            let class: Vec<u64> = ms
                .iter()
                .map(|f| {
                    let next = ids.len() as u64;
                    *ids.entry(f.key_without(&[i])).or_insert(next)
                })
                .collect();
            Relation::from_class_ids(&class)
        })
        .collect();
    let mut diag = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            let mut d = FixedBitSet::with_capacity(ms.len());
            for (k, f) in ms.iter().enumerate() {
                if ra.is_identity(f.get(i, j)) {
                    d.insert(k);
                }
            }
            diag.push(d);
        }
    }
    let names: Vec<String> = ms.iter().map(|f| f.describe(ra)).collect();
    let ca = CaAtomStructure::new(m, names, cyl, diag)?;
    Ok(ca.with_provenance(serde_json::json!({ "construction": "matrices", "size": m })))
}

/// Sidecar listing each matrix's cells by atom name.
pub fn matrices_sidecar(ms: &[BasicMatrix], ra: &RaAtomStructure) -> serde_json::Value {
    serde_json::Value::Array(
        ms.iter()
            .map(|f| {
                serde_json::Value::Array(
                    (0..f.size)
                        .map(|x| {
                            serde_json::Value::Array(
                                (0..f.size)
                                    .map(|y| serde_json::Value::String(ra.name(f.get(x, y)).to_string()))
                                    .collect(),
                            )
                        })
                        .collect(),
                )
            })
            .collect(),
    )
}
