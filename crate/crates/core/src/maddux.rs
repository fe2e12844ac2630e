//! The κ/ψ arithmetic and the atom universe `Bin(n, r)`.

use std::fmt;

use fixedbitset::FixedBitSet;
use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::kernel::format::placeholder_forb;
use crate::kernel::{AtomId, RaAtomStructure, TripleSet};

/// `κ(x, 0) = 0`, `κ(x, y+1) = 1 + x·κ(x, y)`.
pub fn kappa(x: &BigUint, y: u64) -> BigUint {
    let mut k = BigUint::from(0u32);
    for _ in 0..y {
        k = k * x + 1u32;
    }
    k
}

/// `ψ(n, r) = κ((n-1)r, (n-1)r) + 1`.
pub fn psi(n: u64, r: u64) -> BigUint {
    let m = n.saturating_sub(1) * r;
    kappa(&BigUint::from(m), m) + 1u32
}

/// `1 + (n-1)·r·ψ(n, r)`.
pub fn bin_size(n: u64, r: u64) -> BigUint {
    BigUint::from(n.saturating_sub(1) * r) * psi(n, r) + 1u32
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BinAtom {
    Id,
    /// `a^k(i, j)`, `i < n-1`, `j < r`, `k < ψ(n, r)`.
    A { k: u64, i: u64, j: u64 },
}

impl fmt::Display for BinAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BinAtom::Id => write!(f, "Id"),
            BinAtom::A { k, i, j } => write!(f, "a^{k}({i},{j})"),
        }
    }
}

pub const DEFAULT_BIN_CAP: u64 = 100_000;

/// Every atom of `Bin(n, r)` in index order, refusing above `cap`.
pub fn bin_atoms(n: u64, r: u64, cap: u64) -> Result<Vec<BinAtom>> {
    if n < 2 {
        return Err(Error::usage("Bin(n, r) needs n >= 2"));
    }
    let size = bin_size(n, r);
    if size > BigUint::from(cap) {
        return Err(Error::resource(format!("Bin({n},{r}) atom count {size}"), cap));
    }
    let psi: u64 = psi(n, r).try_into().expect("below cap");
    let mut out = vec![BinAtom::Id];
    for i in 0..n - 1 {
        for j in 0..r {
            for k in 0..psi {
                out.push(BinAtom::A { k, i, j });
            }
        }
    }
    Ok(out)
}

/// `Bin(n, r)` as a self-converse RA atom structure with `Id` the unique identity.
///
/// Without `triples`, consistency is the placeholder rule: identity law plus every
/// non-identity triple consistent.
pub fn bin_atom_structure(n: u64, r: u64, triples: Option<TripleSet>, cap: u64) -> Result<RaAtomStructure> {
    let atoms = bin_atoms(n, r, cap)?;
    let size = atoms.len();
    let names: Vec<String> = atoms.iter().map(|a| a.to_string()).collect();
    let mut identity = FixedBitSet::with_capacity(size);
    identity.insert(0);
    let converse: Vec<AtomId> = (0..size as AtomId).collect();
    let placeholder = triples.is_none();
    let triples = triples.unwrap_or_else(|| placeholder_forb(identity.clone()));
    let ra = RaAtomStructure::new(names, identity, converse, triples)?;
    Ok(ra.with_provenance(serde_json::json!({
        "construction": "bin",
        "n": n,
        "r": r,
        "triples": if placeholder { "placeholder-Forb" } else { "caller-supplied" },
    })))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn kappa_values() {
        assert_eq!(kappa(&big(5), 0), big(0));
        assert_eq!(kappa(&big(2), 2), big(3));
        for y in 0..=10 {
            assert_eq!(kappa(&big(1), y), big(y));
        }
    }

    #[test]
    fn psi_values() {
        assert_eq!(psi(3, 1), big(4));
        assert_eq!(psi(2, 1), big(2));
        for n in 0..8 {
            assert_eq!(psi(n, 0), big(1));
        }
    }

    #[test]
    fn bin_three_one() {
        let ra = bin_atom_structure(3, 1, None, DEFAULT_BIN_CAP).unwrap();
        assert_eq!(ra.atom_count(), 9);
        let single = bin_atom_structure(2, 0, None, DEFAULT_BIN_CAP).unwrap();
        assert_eq!(single.atom_count(), 1);
        assert_eq!(single.name(0), "Id");
    }

    #[test]
    fn cap_is_resource_error() {
        assert!(matches!(bin_atom_structure(5, 3, None, 1000), Err(Error::Resource { .. })));
    }
}
