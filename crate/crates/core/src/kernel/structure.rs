use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use super::relation::Relation;
use crate::error::{Error, Result};

pub type AtomId = u32;

static NEXT_CARRIER: AtomicU64 = AtomicU64::new(1);

fn next_carrier() -> u64 {
    NEXT_CARRIER.fetch_add(1, Ordering::Relaxed)
}

/// Largest supported dimension; diagonal patterns are packed into a `u32`.
pub const MAX_DIMENSION: usize = 7;

/// Index of the unordered pair `{i, j}`, `i != j`, among the `n(n-1)/2` pairs.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

pub fn pair_count(n: usize) -> usize {
    n * (n - 1) / 2
}

fn name_index(names: &[String]) -> Result<HashMap<String, AtomId>> {
    let mut idx = HashMap::with_capacity(names.len());
    for (a, name) in names.iter().enumerate() {
        if idx.insert(name.clone(), a as AtomId).is_some() {
            return Err(Error::structural(format!("duplicate atom name {name:?}")));
        }
    }
    Ok(idx)
}

/// Finite n-dimensional cylindric atom structure.
#[derive(Clone)]
pub struct CaAtomStructure {
    carrier: u64,
    dimension: usize,
    names: Vec<String>,
    index: HashMap<String, AtomId>,
    labels: Option<Vec<String>>,
    cyl: Vec<Relation>,
    diag: Vec<FixedBitSet>,
    pattern: Vec<u32>,
    provenance: Option<serde_json::Value>,
}

impl CaAtomStructure {
    /// `diag[pair_index(n, i, j)]` holds `D_ij` for `i < j`.
    pub fn new(
        dimension: usize,
        names: Vec<String>,
        cyl: Vec<Relation>,
        diag: Vec<FixedBitSet>,
    ) -> Result<Self> {
        if !(2..=MAX_DIMENSION).contains(&dimension) {
            return Err(Error::usage(format!(
                "dimension {dimension} outside 2..={MAX_DIMENSION}"
            )));
        }
        let size = names.len();
        if size == 0 {
            return Err(Error::structural("atom structure has no atoms"));
        }
        if cyl.len() != dimension {
            return Err(Error::structural(format!(
                "expected {dimension} cylindrifier relations, got {}",
                cyl.len()
            )));
        }
        if diag.len() != pair_count(dimension) {
            return Err(Error::structural(format!(
                "expected {} diagonal sets, got {}",
                pair_count(dimension),
                diag.len()
            )));
        }
        for (i, t) in cyl.iter().enumerate() {
            if t.size() != size {
                return Err(Error::structural(format!("T_{i} has wrong size")));
            }
            if let Some(a) = t.is_reflexive() {
                return Err(Error::structural(format!(
                    "T_{i} not reflexive at atom {}",
                    names[a as usize]
                )));
            }
            if let Some((a, b)) = t.symmetry_violation() {
                return Err(Error::structural(format!(
                    "T_{i} not symmetric at ({}, {})",
                    names[a as usize], names[b as usize]
                )));
            }
        }
        for d in &diag {
            if d.len() != size {
                return Err(Error::structural("diagonal set has wrong size"));
            }
        }
        let index = name_index(&names)?;
        let mut pattern = vec![0u32; size];
        for (p, d) in diag.iter().enumerate() {
            for a in d.ones() {
                pattern[a] |= 1 << p;
            }
        }
        Ok(CaAtomStructure {
            carrier: next_carrier(),
            dimension,
            names,
            index,
            labels: None,
            cyl,
            diag,
            pattern,
            provenance: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.names.len() {
            return Err(Error::structural("label count differs from atom count"));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn with_provenance(mut self, p: serde_json::Value) -> Self {
        self.provenance = Some(p);
        self
    }

    pub fn carrier_id(&self) -> u64 {
        self.carrier
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn atom_count(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, a: AtomId) -> &str {
        &self.names[a as usize]
    }

    pub fn atom(&self, name: &str) -> Option<AtomId> {
        self.index.get(name).copied()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn provenance(&self) -> Option<&serde_json::Value> {
        self.provenance.as_ref()
    }

    /// The accessibility relation `T_i` of the cylindrifier `c_i`.
    pub fn cyl(&self, i: usize) -> &Relation {
        &self.cyl[i]
    }

    /// `D_ij`; `D_ii` is every atom.
    pub fn diag(&self, i: usize, j: usize) -> FixedBitSet {
        if i == j {
            let mut all = FixedBitSet::with_capacity(self.atom_count());
            all.insert_range(..);
            all
        } else {
            self.diag[pair_index(self.dimension, i, j)].clone()
        }
    }

    pub fn in_diag(&self, i: usize, j: usize, a: AtomId) -> bool {
        i == j || self.pattern[a as usize] & (1 << pair_index(self.dimension, i, j)) != 0
    }

    /// Bitmask over pairs of the diagonals containing `a`.
    pub fn diag_pattern(&self, a: AtomId) -> u32 {
        self.pattern[a as usize]
    }
}

impl fmt::Debug for CaAtomStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CaAtomStructure")
            .field("dimension", &self.dimension)
            .field("atoms", &self.names.len())
            .finish()
    }
}

type TripleRule = Arc<dyn Fn(AtomId, AtomId, AtomId) -> bool + Send + Sync>;

/// Consistent triples, stored as a table or computed by a rule.
#[derive(Clone)]
pub enum TripleSet {
    Table { size: usize, bits: FixedBitSet },
    Rule { name: String, rule: TripleRule },
}

/// Atom count up to which rule-based triples are tabulated.
pub const TRIPLE_TABLE_LIMIT: usize = 512;

impl TripleSet {
    pub fn from_list(size: usize, list: impl IntoIterator<Item = (AtomId, AtomId, AtomId)>) -> Self {
        let mut bits = FixedBitSet::with_capacity(size * size * size);
        for (a, b, c) in list {
            bits.insert((a as usize * size + b as usize) * size + c as usize);
        }
        TripleSet::Table { size, bits }
    }

    pub fn from_rule<F>(size: usize, name: impl Into<String>, rule: F) -> Self
    where
        F: Fn(AtomId, AtomId, AtomId) -> bool + Send + Sync + 'static,
    {
        if size <= TRIPLE_TABLE_LIMIT {
            let mut bits = FixedBitSet::with_capacity(size * size * size);
            for a in 0..size as AtomId {
                for b in 0..size as AtomId {
                    for c in 0..size as AtomId {
                        if rule(a, b, c) {
                            bits.insert((a as usize * size + b as usize) * size + c as usize);
                        }
                    }
                }
            }
            TripleSet::Table { size, bits }
        } else {
            TripleSet::Rule {
                name: name.into(),
                rule: Arc::new(rule),
            }
        }
    }

    pub fn contains(&self, a: AtomId, b: AtomId, c: AtomId) -> bool {
        match self {
            TripleSet::Table { size, bits } => {
                bits.contains((a as usize * size + b as usize) * size + c as usize)
            }
            TripleSet::Rule { rule, .. } => rule(a, b, c),
        }
    }

    pub fn rule_name(&self) -> Option<&str> {
        match self {
            TripleSet::Table { .. } => None,
            TripleSet::Rule { name, .. } => Some(name),
        }
    }
}

/// Finite relation-algebra atom structure. `(a, b, c)` consistent means `a <= b ; c`.
#[derive(Clone)]
pub struct RaAtomStructure {
    carrier: u64,
    names: Vec<String>,
    index: HashMap<String, AtomId>,
    labels: Option<Vec<String>>,
    identity: FixedBitSet,
    converse: Vec<AtomId>,
    triples: TripleSet,
    provenance: Option<serde_json::Value>,
}

impl RaAtomStructure {
    pub fn new(
        names: Vec<String>,
        identity: FixedBitSet,
        converse: Vec<AtomId>,
        triples: TripleSet,
    ) -> Result<Self> {
        let size = names.len();
        if size == 0 {
            return Err(Error::structural("atom structure has no atoms"));
        }
        if identity.len() != size || converse.len() != size {
            return Err(Error::structural("identity/converse sized unlike the atom list"));
        }
        if let Some(a) = converse.iter().position(|&c| c as usize >= size) {
            return Err(Error::structural(format!(
                "converse of {} out of range",
                names[a]
            )));
        }
        if let TripleSet::Table { size: s, .. } = &triples {
            if *s != size {
                return Err(Error::structural("triple table sized unlike the atom list"));
            }
        }
        let index = name_index(&names)?;
        Ok(RaAtomStructure {
            carrier: next_carrier(),
            names,
            index,
            labels: None,
            identity,
            converse,
            triples,
            provenance: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.names.len() {
            return Err(Error::structural("label count differs from atom count"));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn with_provenance(mut self, p: serde_json::Value) -> Self {
        self.provenance = Some(p);
        self
    }

    pub fn carrier_id(&self) -> u64 {
        self.carrier
    }

    pub fn atom_count(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, a: AtomId) -> &str {
        &self.names[a as usize]
    }

    pub fn atom(&self, name: &str) -> Option<AtomId> {
        self.index.get(name).copied()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn provenance(&self) -> Option<&serde_json::Value> {
        self.provenance.as_ref()
    }

    pub fn identity(&self) -> &FixedBitSet {
        &self.identity
    }

    pub fn is_identity(&self, a: AtomId) -> bool {
        self.identity.contains(a as usize)
    }

    pub fn converse(&self, a: AtomId) -> AtomId {
        self.converse[a as usize]
    }

    pub fn triples(&self) -> &TripleSet {
        &self.triples
    }

    pub fn consistent(&self, a: AtomId, b: AtomId, c: AtomId) -> bool {
        self.triples.contains(a, b, c)
    }

    /// `X ; Y` on atom sets.
    pub fn compose_sets(&self, x: &FixedBitSet, y: &FixedBitSet) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.atom_count());
        for a in 0..self.atom_count() as AtomId {
            'search: for b in x.ones() {
                for c in y.ones() {
                    if self.consistent(a, b as AtomId, c as AtomId) {
                        out.insert(a as usize);
                        break 'search;
                    }
                }
            }
        }
        out
    }
}

impl fmt::Debug for RaAtomStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RaAtomStructure")
            .field("atoms", &self.names.len())
            .finish()
    }
}

/// Either flavour, as read from or written to the interchange format.
#[derive(Clone, Debug)]
pub enum AtomStructure {
    Ca(CaAtomStructure),
    Ra(RaAtomStructure),
}

impl AtomStructure {
    pub fn atom_count(&self) -> usize {
        match self {
            AtomStructure::Ca(s) => s.atom_count(),
            AtomStructure::Ra(s) => s.atom_count(),
        }
    }

    pub fn as_ca(&self) -> Result<&CaAtomStructure> {
        match self {
            AtomStructure::Ca(s) => Ok(s),
            AtomStructure::Ra(_) => Err(Error::usage("expected a CA atom structure, got RA")),
        }
    }

    pub fn as_ra(&self) -> Result<&RaAtomStructure> {
        match self {
            AtomStructure::Ra(s) => Ok(s),
            AtomStructure::Ca(_) => Err(Error::usage("expected an RA atom structure, got CA")),
        }
    }
}

/// The full powerset cylindric structure: atoms are all tuples in `base^n`.
pub fn powerset_structure(n: usize, base: usize) -> Result<CaAtomStructure> {
    square_union_structure(n, &[base])
}

/// Atoms are the tuples of a disjoint union of squares `block^n`, one block per entry.
pub fn square_union_structure(n: usize, blocks: &[usize]) -> Result<CaAtomStructure> {
    if blocks.is_empty() || blocks.contains(&0) {
        return Err(Error::usage("square sizes must be positive"));
    }
    let mut tuples: Vec<Vec<usize>> = Vec::new();
    let mut offset = 0;
    for &b in blocks {
        let total = b.checked_pow(n as u32).filter(|t| *t <= 100_000).ok_or_else(|| {
            Error::resource("powerset atom count", 100_000)
        })?;
        for code in 0..total {
            let mut t = Vec::with_capacity(n);
            let mut c = code;
            for _ in 0..n {
                t.push(offset + c % b);
                c /= b;
            }
            tuples.push(t);
        }
        offset += b;
    }
    let index: HashMap<Vec<usize>, usize> =
        tuples.iter().enumerate().map(|(a, t)| (t.clone(), a)).collect();
    let names: Vec<String> = tuples
        .iter()
        .map(|t| t.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(""))
        .collect();
    let cyl = (0..n)
        .map(|i| {
            let ids: Vec<u64> = tuples
                .iter()
                .map(|t| {
                    let mut key = t.clone();
                    let block_start = blocks
                        .iter()
                        .scan(0, |acc, &b| {
                            let s = *acc;
                            *acc += b;
                            Some((s, b))
                        })
                        .find(|(s, b)| t[0] >= *s && t[0] < s + b)
                        .map(|(s, _)| s)
                        .unwrap_or(0);
                    key[i] = block_start;
                    index[&key] as u64
                })
                .collect();
            Relation::from_class_ids(&ids)
        })
        .collect();
    let mut diag = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut d = FixedBitSet::with_capacity(tuples.len());
            for (a, t) in tuples.iter().enumerate() {
                if t[i] == t[j] {
                    d.insert(a);
                }
            }
            diag.push(d);
        }
    }
    CaAtomStructure::new(n, names, cyl, diag)
}
