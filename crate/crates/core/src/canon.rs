//! Canonical node orderings for small labelled structures.
//!
//! Node colours are refined by the multiset of (pair key, neighbour colour) until stable;
//! refined colours are ranks of signature vectors, so they do not depend on node names.
//! The canonical form is the least encoding over orderings that respect the colour classes.

/// Refine `node_key` by `pair_key` and return a canonical colour per node.
pub fn refine<P>(count: usize, node_key: &[u64], pair_key: P) -> Vec<u32>
where
    P: Fn(usize, usize) -> u64,
{
    let mut colour = rank(&node_key.iter().map(|&k| vec![k]).collect::<Vec<_>>());
    loop {
        let sigs: Vec<Vec<u64>> = (0..count)
            .map(|v| {
                let mut around: Vec<(u64, u64, u32)> = (0..count)
                    .filter(|&w| w != v)
                    .map(|w| (pair_key(v, w), pair_key(w, v), colour[w]))
                    .collect();
                around.sort_unstable();
                let mut s = vec![colour[v] as u64];
                for (a, b, c) in around {
                    s.extend([a, b, c as u64]);
                }
                s
            })
            .collect();
        let next = rank(&sigs);
        let classes = |c: &[u32]| {
            let mut v = c.to_vec();
            v.sort_unstable();
            v.dedup();
            v.len()
        };
        if classes(&next) == classes(&colour) {
            return next;
        }
        colour = next;
    }
}

fn rank(sigs: &[Vec<u64>]) -> Vec<u32> {
    let mut distinct: Vec<&Vec<u64>> = sigs.iter().collect();
    distinct.sort();
    distinct.dedup();
    sigs.iter()
        .map(|s| distinct.binary_search(&s).unwrap() as u32)
        .collect()
}

/// Least `encode(order)` over orderings that list nodes by ascending colour.
///
/// `order[k]` is the node placed at position `k`. Returns the encoding and one minimizing order.
pub fn canonical_form<E>(colour: &[u32], mut encode: E) -> (Vec<u32>, Vec<usize>)
where
    E: FnMut(&[usize]) -> Vec<u32>,
{
    let mut nodes: Vec<usize> = (0..colour.len()).collect();
    nodes.sort_by_key(|&v| (colour[v], v));
    let mut cells: Vec<(usize, usize)> = Vec::new();
    let mut start = 0;
    for k in 1..=nodes.len() {
        if k == nodes.len() || colour[nodes[k]] != colour[nodes[start]] {
            cells.push((start, k));
            start = k;
        }
    }
    let mut best: Option<(Vec<u32>, Vec<usize>)> = None;
    let mut order = nodes.clone();
    permute_cells(&cells, 0, &mut order, &mut |o| {
        let e = encode(o);
        if best.as_ref().map_or(true, |(b, _)| e < *b) {
            best = Some((e, o.to_vec()));
        }
    });
    best.unwrap_or_else(|| (encode(&[]), Vec::new()))
}

fn permute_cells(cells: &[(usize, usize)], c: usize, order: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
    if c == cells.len() {
        visit(order);
        return;
    }
    let (lo, hi) = cells[c];
    heap_permute(order, lo, hi, hi - lo, &mut |o| permute_cells(cells, c + 1, o, visit));
}

fn heap_permute(order: &mut Vec<usize>, lo: usize, hi: usize, k: usize, visit: &mut dyn FnMut(&mut Vec<usize>)) {
    if k <= 1 {
        visit(order);
        return;
    }
    for i in 0..k {
        heap_permute(order, lo, hi, k - 1, visit);
        if i + 1 == k {
            break;
        }
        if k % 2 == 0 {
            order.swap(lo + i, lo + k - 1);
        } else {
            order.swap(lo, lo + k - 1);
        }
    }
}

/// Number of orderings `canonical_form` would try.
pub fn search_width(colour: &[u32]) -> u128 {
    let mut counts = std::collections::BTreeMap::new();
    for &c in colour {
        *counts.entry(c).or_insert(0u32) += 1;
    }
    counts
        .values()
        .map(|&k| (1..=k as u128).product::<u128>())
        .product()
}
