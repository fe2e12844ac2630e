use fixedbitset::FixedBitSet;

/// A binary relation on dense atom ids.
///
/// Equivalences are kept as class tables; anything else as sorted rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    size: usize,
    repr: Repr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Repr {
    Classes {
        class_of: Vec<u32>,
        members: Vec<Vec<u32>>,
    },
    Rows(Vec<Vec<u32>>),
}

impl Relation {
    /// Build an equivalence from a class id per atom. Class ids need not be dense.
    pub fn from_class_ids(ids: &[u64]) -> Self {
        let mut map = std::collections::HashMap::new();
        let mut class_of = Vec::with_capacity(ids.len());
        let mut members: Vec<Vec<u32>> = Vec::new();
        for (a, id) in ids.iter().enumerate() {
            let c = *map.entry(*id).or_insert_with(|| {
                members.push(Vec::new());
                members.len() as u32 - 1
            });
            class_of.push(c);
            members[c as usize].push(a as u32);
        }
        Relation {
            size: ids.len(),
            repr: Repr::Classes { class_of, members },
        }
    }

    /// Build from explicit rows; detected equivalences are stored as classes.
    pub fn from_rows(mut rows: Vec<Vec<u32>>) -> Self {
        for r in rows.iter_mut() {
            r.sort_unstable();
            r.dedup();
        }
        let size = rows.len();
        let equivalence = (0..size).all(|a| {
            rows[a].binary_search(&(a as u32)).is_ok()
                && rows[a].iter().all(|&b| rows[b as usize] == rows[a])
        });
        if equivalence {
            let ids: Vec<u64> = rows.iter().map(|r| r[0] as u64).collect();
            return Self::from_class_ids(&ids);
        }
        Relation {
            size,
            repr: Repr::Rows(rows),
        }
    }

    pub fn from_pairs(size: usize, pairs: impl IntoIterator<Item = (u32, u32)>) -> Self {
        let mut rows = vec![Vec::new(); size];
        for (a, b) in pairs {
            rows[a as usize].push(b);
        }
        Self::from_rows(rows)
    }

    pub fn identity(size: usize) -> Self {
        let ids: Vec<u64> = (0..size as u64).collect();
        Self::from_class_ids(&ids)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_equivalence(&self) -> bool {
        matches!(self.repr, Repr::Classes { .. })
    }

    /// Class id of `a` when the relation is an equivalence.
    pub fn class_of(&self, a: u32) -> Option<u32> {
        match &self.repr {
            Repr::Classes { class_of, .. } => Some(class_of[a as usize]),
            Repr::Rows(_) => None,
        }
    }

    pub fn class_count(&self) -> Option<usize> {
        match &self.repr {
            Repr::Classes { members, .. } => Some(members.len()),
            Repr::Rows(_) => None,
        }
    }

    /// All `b` with `a R b`, sorted.
    pub fn row(&self, a: u32) -> &[u32] {
        match &self.repr {
            Repr::Classes { class_of, members } => &members[class_of[a as usize] as usize],
            Repr::Rows(rows) => &rows[a as usize],
        }
    }

    pub fn related(&self, a: u32, b: u32) -> bool {
        match &self.repr {
            Repr::Classes { class_of, .. } => class_of[a as usize] == class_of[b as usize],
            Repr::Rows(rows) => rows[a as usize].binary_search(&b).is_ok(),
        }
    }

    pub fn pairs(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.size as u32).flat_map(move |a| self.row(a).iter().map(move |&b| (a, b)))
    }

    pub fn is_reflexive(&self) -> Option<u32> {
        (0..self.size as u32).find(|&a| !self.related(a, a))
    }

    /// First pair `(a, b)` with `a R b` but not `b R a`.
    pub fn symmetry_violation(&self) -> Option<(u32, u32)> {
        self.pairs().find(|&(a, b)| !self.related(b, a))
    }

    /// First triple `(a, b, c)` with `a R b R c` but not `a R c`.
    pub fn transitivity_violation(&self) -> Option<(u32, u32, u32)> {
        if self.is_equivalence() {
            return None;
        }
        for a in 0..self.size as u32 {
            for &b in self.row(a) {
                for &c in self.row(b) {
                    if !self.related(a, c) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    /// `{ s : exists x in set, s R x }`, the preimage of `set`.
    pub fn preimage(&self, set: &FixedBitSet) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.size);
        match &self.repr {
            Repr::Classes { class_of, members } => {
                let mut seen = FixedBitSet::with_capacity(members.len());
                for x in set.ones() {
                    let c = class_of[x] as usize;
                    if !seen.put(c) {
                        for &m in &members[c] {
                            out.insert(m as usize);
                        }
                    }
                }
            }
            Repr::Rows(rows) => {
                for (s, row) in rows.iter().enumerate() {
                    if row.iter().any(|&x| set.contains(x as usize)) {
                        out.insert(s);
                    }
                }
            }
        }
        out
    }

    /// `R ∘ S` as a set of pairs `(a, c)` with `a R b S c`, compared for commutation checks.
    pub fn compose_row(&self, other: &Relation, a: u32) -> Vec<u32> {
        let mut out: Vec<u32> = self
            .row(a)
            .iter()
            .flat_map(|&b| other.row(b).iter().copied())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}
