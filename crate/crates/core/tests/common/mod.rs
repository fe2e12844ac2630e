//! Independent oracles shared by the integration suites.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use cylbench::kernel::{check_ra_axioms, AtomId, RaAtomStructure};
use cylbench::matrices::BasicMatrix;
use cylbench::monk::Graph;
use cylbench::rainbow::{legal_coloured_graph, ColourId, ColouredGraph, RainbowSignature};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn random_graph(seed: u64, order: usize, p: f64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::new(order);
    for u in 0..order {
        for v in u + 1..order {
            if rng.gen_bool(p) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

/// The Monk triple rule read off the definition, on (vertex, colour) pairs with `None` for Id.
pub fn monk_rule(g: &Graph, a: Option<(usize, usize)>, b: Option<(usize, usize)>, c: Option<(usize, usize)>) -> bool {
    match (a, b, c) {
        (None, x, y) | (x, None, y) | (x, y, None) => x == y,
        (Some((u, i)), Some((v, j)), Some((w, k))) => {
            if i != j || j != k {
                return true;
            }
            g.has_edge(u, v) || g.has_edge(v, w) || g.has_edge(u, w)
        }
    }
}

/// Symmetry battery for `α(g)`: self-converse atoms, all six permutations of every triple,
/// the identity law, agreement with `monk_rule`, and the kernel RA checks.
pub fn monk_battery(ra: &RaAtomStructure, g: &Graph, colours: usize) -> Result<(), String> {
    let k = ra.atom_count();
    if k != 1 + g.order() * colours {
        return Err(format!("atom count {k}"));
    }
    let decode = |a: AtomId| -> Option<(usize, usize)> {
        (a != 0).then(|| ((a as usize - 1) / colours, (a as usize - 1) % colours))
    };
    for a in 0..k as AtomId {
        if ra.converse(a) != a {
            return Err(format!("{} not self-converse", ra.name(a)));
        }
        if ra.is_identity(a) != (a == 0) {
            return Err(format!("identity set wrong at {}", ra.name(a)));
        }
    }
    for a in 0..k as AtomId {
        for b in 0..k as AtomId {
            for c in 0..k as AtomId {
                let t = ra.consistent(a, b, c);
                if t != monk_rule(g, decode(a), decode(b), decode(c)) {
                    return Err(format!("rule differs at ({a},{b},{c})"));
                }
                for (x, y, z) in [(a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
                    if ra.consistent(x, y, z) != t {
                        return Err(format!("not symmetric at ({a},{b},{c})"));
                    }
                }
                if a == 0 && t != (b == c) {
                    return Err(format!("identity law fails at ({b},{c})"));
                }
            }
        }
    }
    let report = check_ra_axioms(ra, 64);
    if !report.passed() {
        let f = report.failures().next().unwrap();
        return Err(format!("{} failed: {:?}", f.name, f.witness));
    }
    Ok(())
}

/// Every `m × m` matrix with identity atoms on the diagonal and any atom off it,
/// filtered by the two defining conditions.
pub fn brute_force_matrices(ra: &RaAtomStructure, m: usize) -> BTreeSet<Vec<AtomId>> {
    let k = ra.atom_count() as u64;
    let ids: Vec<AtomId> = (0..k as AtomId).filter(|&a| ra.is_identity(a)).collect();
    let off: Vec<(usize, usize)> = (0..m).flat_map(|x| (0..m).filter(move |&y| y != x).map(move |y| (x, y))).collect();
    let mut out = BTreeSet::new();
    let diag_total = (ids.len() as u64).pow(m as u32);
    for dcode in 0..diag_total {
        for ocode in 0..k.pow(off.len() as u32) {
            let mut cells = vec![0; m * m];
            let mut d = dcode;
            for x in 0..m {
                cells[x * m + x] = ids[(d % ids.len() as u64) as usize];
                d /= ids.len() as u64;
            }
            let mut o = ocode;
            for &(x, y) in &off {
                cells[x * m + y] = (o % k) as AtomId;
                o /= k;
            }
            let ok = (0..m).all(|x| {
                (0..m).all(|y| (0..m).all(|z| ra.consistent(cells[x * m + y], cells[x * m + z], cells[z * m + y])))
            });
            if ok {
                out.insert(cells);
            }
        }
    }
    out
}

pub fn matrix_cells(ms: &[BasicMatrix]) -> BTreeSet<Vec<AtomId>> {
    ms.iter().map(|f| f.cells.clone()).collect()
}

pub fn kappa_unroll(x: &BigUint, y: u64) -> BigUint {
    match y {
        0 => BigUint::from(0u32),
        _ => kappa_unroll(x, y - 1) * x + 1u32,
    }
}

/// `κ(x, y)` as the geometric sum `1 + x + ... + x^(y-1)`.
pub fn kappa_sum(x: &BigUint, y: u64) -> BigUint {
    (0..y as u32).map(|e| x.pow(e)).sum()
}

pub fn psi_unroll(n: u64, r: u64) -> BigUint {
    let m = (n - 1) * r;
    kappa_unroll(&BigUint::from(m), m) + 1u32
}

pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

/// Raw labellings: every map n -> k onto, every colouring, quotient by node permutations.
pub fn brute_force_count(s: &RainbowSignature) -> usize {
    let n = s.dimension();
    let colours = s.colour_count();
    let mut keys: HashSet<Vec<u32>> = HashSet::new();
    for k in 1..=n {
        let edges: Vec<(usize, usize)> = (0..k).flat_map(|p| (p + 1..k).map(move |q| (p, q))).collect();
        let perms = permutations(k);
        let maps: Vec<Vec<usize>> = (0..k.pow(n as u32))
            .map(|mut code| {
                (0..n)
                    .map(|_| {
                        let v = code % k;
                        code /= k;
                        v
                    })
                    .collect::<Vec<usize>>()
            })
            .filter(|m| (0..k).all(|v| m.contains(&v)))
            .collect();
        let total = colours.pow(edges.len() as u32);
        for code in 0..total {
            let mut g = ColouredGraph::new(k);
            let mut c = code;
            for &(p, q) in &edges {
                g.set(s, p, q, (c % colours) as ColourId);
                c /= colours;
            }
            if legal_coloured_graph(s, &g).is_err() {
                continue;
            }
            for m in &maps {
                let key = perms
                    .iter()
                    .map(|pi| {
                        // node v is renamed pi[v]
                        let mut key: Vec<u32> = m.iter().map(|&v| pi[v] as u32).collect();
                        let mut inv = vec![0; k];
                        for v in 0..k {
                            inv[pi[v]] = v;
                        }
                        for p in 0..k {
                            for q in p + 1..k {
                                key.push(g.get(s, inv[p], inv[q]).unwrap() as u32);
                            }
                        }
                        key
                    })
                    .min()
                    .unwrap();
                keys.insert(key);
            }
        }
    }
    keys.len()
}
