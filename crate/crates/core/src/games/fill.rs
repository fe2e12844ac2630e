use std::collections::HashMap;

use super::network::{Network, NetworkViolation};
use crate::kernel::{AtomId, CaAtomStructure};
use crate::{Error, Result};

/// Enumerates the consistent total extensions of partial networks.
pub struct Filler<'a> {
    ca: &'a CaAtomStructure,
    by_pattern: HashMap<u32, Vec<AtomId>>,
}

impl<'a> Filler<'a> {
    pub fn new(ca: &'a CaAtomStructure) -> Self {
        let mut by_pattern: HashMap<u32, Vec<AtomId>> = HashMap::new();
        for a in 0..ca.atom_count() as AtomId {
            by_pattern.entry(ca.diag_pattern(a)).or_default().push(a);
        }
        Filler { ca, by_pattern }
    }

    pub fn structure(&self) -> &CaAtomStructure {
        self.ca
    }

    /// Whether labelling `t` with `a` agrees with the diagonals and with every labelled neighbour.
    pub fn fits(&self, net: &Network, t: &[u8], a: AtomId) -> bool {
        if self.ca.diag_pattern(a) != Network::eq_pattern(t) {
            return false;
        }
        let nodes = net.nodes();
        let mut u = t.to_vec();
        for i in 0..t.len() {
            for &z in &nodes {
                if z == t[i] {
                    continue;
                }
                u[i] = z;
                if let Some(b) = net.get(&u) {
                    if !self.ca.cyl(i).related(a, b) {
                        return false;
                    }
                }
            }
            u[i] = t[i];
        }
        true
    }

    fn candidates(&self, net: &Network, t: &[u8]) -> Vec<AtomId> {
        let Some(mut pool) = self.by_pattern.get(&Network::eq_pattern(t)).map(|v| v.as_slice()) else {
            return Vec::new();
        };
        // A labelled neighbour confines the label to one row of T_i.
        let mut u = t.to_vec();
        for i in 0..t.len() {
            for z in net.nodes() {
                if z == t[i] {
                    continue;
                }
                u[i] = z;
                if let Some(b) = net.get(&u) {
                    let row = self.ca.cyl(i).row(b);
                    if row.len() < pool.len() {
                        pool = row;
                    }
                    break;
                }
            }
            u[i] = t[i];
        }
        pool.iter().copied().filter(|&a| self.fits(net, t, a)).collect()
    }

    /// All total consistent networks on the nodes of `net` that agree with its labels.
    /// `budget` counts assignments tried and is shared across calls.
    pub fn completions(&self, net: &Network, budget: &mut u64) -> Result<Vec<Network>> {
        for t in net.tuples() {
            if let Some(a) = net.get(&t) {
                let mut probe = net.clone();
                probe.clear(&t);
                if !self.fits(&probe, &t, a) {
                    return Ok(Vec::new());
                }
            }
        }
        let open: Vec<Vec<u8>> = net.tuples().into_iter().filter(|t| net.get(t).is_none()).collect();
        let mut out = Vec::new();
        let mut work = net.clone();
        self.search(&mut work, open, &mut out, budget)?;
        Ok(out)
    }

    fn search(
        &self,
        net: &mut Network,
        open: Vec<Vec<u8>>,
        out: &mut Vec<Network>,
        budget: &mut u64,
    ) -> Result<()> {
        if open.is_empty() {
            out.push(net.clone());
            return Ok(());
        }
        let mut best: Option<(usize, Vec<AtomId>)> = None;
        for (k, t) in open.iter().enumerate() {
            let c = self.candidates(net, t);
            let better = best.as_ref().is_none_or(|(_, b)| c.len() < b.len());
            if better {
                let stop = c.len() <= 1;
                best = Some((k, c));
                if stop {
                    break;
                }
            }
        }
        let (k, cands) = best.expect("open is non-empty");
        let mut rest = open;
        let t = rest.swap_remove(k);
        for a in cands {
            if *budget == 0 {
                return Err(Error::resource("network fill assignments", 0));
            }
            *budget -= 1;
            net.set(&t, a);
            self.search(net, rest.clone(), out, budget)?;
            net.clear(&t);
        }
        Ok(())
    }

    pub fn check(&self, net: &Network) -> std::result::Result<(), NetworkViolation> {
        net.check(self.ca)
    }
}

/// Tuple realizing atom `a` on the first nodes: coordinates equal exactly where `a` is diagonal.
pub fn realizing_tuple(ca: &CaAtomStructure, a: AtomId) -> Vec<u8> {
    let n = ca.dimension();
    let mut t = vec![0u8; n];
    let mut next = 0u8;
    for i in 0..n {
        match (0..i).find(|&j| ca.in_diag(j, i, a)) {
            Some(j) => t[i] = t[j],
            None => {
                t[i] = next;
                next += 1;
            }
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::powerset_structure;

    #[test]
    fn powerset_completions_match_base_maps() {
        // Distinct nodes over base 2 map injectively into the base.
        let ca = powerset_structure(2, 2).unwrap();
        let f = Filler::new(&ca);
        let mut net = Network::new(2, 2);
        net.add_node(0);
        net.add_node(1);
        let mut budget = 1_000_000;
        let all = f.completions(&net, &mut budget).unwrap();
        assert_eq!(all.len(), 2);
        for c in &all {
            assert_eq!(c.check(&ca), Ok(()));
        }
    }

    #[test]
    fn realizing_tuple_follows_diagonals() {
        let ca = powerset_structure(3, 2).unwrap();
        assert_eq!(realizing_tuple(&ca, ca.atom("010").unwrap()), vec![0, 1, 0]);
        assert_eq!(realizing_tuple(&ca, ca.atom("111").unwrap()), vec![0, 0, 0]);
    }
}
