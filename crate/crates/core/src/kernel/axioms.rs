//! Equational axiom checks for complex algebras.
//!
//! CA schema (Henkin, Monk, Tarski; dimension n, all i, j, k < n):
//! C0 Boolean algebra; C1 c_i 0 = 0; C2 x <= c_i x; C3 c_i(x * c_i y) = c_i x * c_i y;
//! C4 c_i c_j x = c_j c_i x; C5 d_ii = 1; C6 d_ij = c_k(d_ik * d_kj) for k not in {i, j};
//! C7 c_i(d_ij * x) * c_i(d_ij * -x) = 0 for i != j.
//!
//! RA battery: involution, identity closed under converse, Peircean closure,
//! identity law, associativity, converse over composition, Tarski/De Morgan law.

use std::fmt;

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::structure::{AtomId, AtomStructure, CaAtomStructure, RaAtomStructure};

/// Seed for sampled element checks.
pub const AXIOM_SAMPLE_SEED: u64 = 0x5eed_c0de;
/// Up to this many atoms, element-level laws are checked on every element.
pub const EXHAUSTIVE_ELEMENT_LIMIT: usize = 12;
/// Up to this many atoms, binary RA element laws are checked on every pair.
pub const EXHAUSTIVE_RA_PAIR_LIMIT: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum AxiomMode {
    #[serde(rename = "CA")]
    Ca,
    #[serde(rename = "RA")]
    Ra,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Level {
    Atom,
    Element,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Coverage {
    Exhaustive,
    Sampled(u64),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    pub name: String,
    pub level: Level,
    pub coverage: Coverage,
    pub passed: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub mode: AxiomMode,
    pub atoms: usize,
    pub sample_seed: u64,
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Whether every atom-level check passed.
    pub fn atom_level_passed(&self) -> bool {
        self.checks
            .iter()
            .filter(|c| c.level == Level::Atom)
            .all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn find(&self, name: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "axioms {:?} atoms={} seed={:#x}",
            self.mode, self.atoms, self.sample_seed
        )?;
        for c in &self.checks {
            let cov = match c.coverage {
                Coverage::Exhaustive => "exhaustive".to_string(),
                Coverage::Sampled(k) => format!("sampled({k})"),
            };
            write!(
                f,
                "  {} {:<28} {:?} {}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.level,
                cov
            )?;
            if let Some(w) = &c.witness {
                write!(f, " witness: {w}")?;
            }
            writeln!(f)?;
        }
        write!(f, "result: {}", if self.passed() { "pass" } else { "fail" })
    }
}

struct Checks {
    list: Vec<AxiomCheck>,
}

impl Checks {
    fn push(&mut self, name: impl Into<String>, level: Level, coverage: Coverage, witness: Option<String>) {
        self.list.push(AxiomCheck {
            name: name.into(),
            level,
            coverage,
            passed: witness.is_none(),
            witness,
        });
    }
}

/// Check the CA or RA battery. Failures are report content.
pub fn check_axioms(s: &AtomStructure, mode: AxiomMode, sample_budget: u64) -> AxiomReport {
    match (s, mode) {
        (AtomStructure::Ca(ca), AxiomMode::Ca) => check_ca_axioms(ca, sample_budget),
        (AtomStructure::Ra(ra), AxiomMode::Ra) => check_ra_axioms(ra, sample_budget),
        _ => AxiomReport {
            mode,
            atoms: s.atom_count(),
            sample_seed: AXIOM_SAMPLE_SEED,
            checks: vec![AxiomCheck {
                name: "signature".into(),
                level: Level::Atom,
                coverage: Coverage::Exhaustive,
                passed: false,
                witness: Some(format!("structure kind does not match mode {mode:?}")),
            }],
        },
    }
}

/// Element operations shared by the exhaustive (mask) and sampled (bitset) paths.
trait Ops {
    type E: Clone + PartialEq;
    fn zero(&self) -> Self::E;
    fn meet(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn join(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn not(&self, a: &Self::E) -> Self::E;
    fn leq(&self, a: &Self::E, b: &Self::E) -> bool {
        self.meet(a, b) == *a
    }
    fn show(&self, a: &Self::E) -> String;
}

struct CaMasks {
    n: usize,
    full: u64,
    cyl: Vec<Vec<u64>>,
    diag: Vec<Vec<u64>>,
}

impl CaMasks {
    fn new(ca: &CaAtomStructure) -> Self {
        let size = ca.atom_count();
        let n = ca.dimension();
        let full = (1u64 << size) - 1;
        let atom_cyl: Vec<Vec<u64>> = (0..n)
            .map(|i| {
                (0..size)
                    .map(|a| {
                        ca.cyl(i)
                            .row(a as AtomId)
                            .iter()
                            .fold(0u64, |m, &b| m | 1 << b)
                    })
                    .collect()
            })
            .collect();
        let cyl = (0..n)
            .map(|i| {
                let mut t = vec![0u64; 1 << size];
                for x in 1..(1usize << size) {
                    let low = x.trailing_zeros() as usize;
                    t[x] = t[x & (x - 1)] | atom_cyl[i][low];
                }
                t
            })
            .collect();
        let diag = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| ca.diag(i, j).ones().fold(0u64, |m, a| m | 1 << a))
                    .collect()
            })
            .collect();
        CaMasks { n, full, cyl, diag }
    }
}

impl Ops for CaMasks {
    type E = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn meet(&self, a: &u64, b: &u64) -> u64 {
        a & b
    }
    fn join(&self, a: &u64, b: &u64) -> u64 {
        a | b
    }
    fn not(&self, a: &u64) -> u64 {
        !a & self.full
    }
    fn show(&self, a: &u64) -> String {
        format!("{a:#b}")
    }
}

struct CaBits<'a> {
    ca: &'a CaAtomStructure,
}

impl Ops for CaBits<'_> {
    type E = FixedBitSet;
    fn zero(&self) -> FixedBitSet {
        FixedBitSet::with_capacity(self.ca.atom_count())
    }
    fn meet(&self, a: &FixedBitSet, b: &FixedBitSet) -> FixedBitSet {
        let mut r = a.clone();
        r.intersect_with(b);
        r
    }
    fn join(&self, a: &FixedBitSet, b: &FixedBitSet) -> FixedBitSet {
        let mut r = a.clone();
        r.union_with(b);
        r
    }
    fn not(&self, a: &FixedBitSet) -> FixedBitSet {
        let mut r = a.clone();
        r.toggle_range(..);
        r
    }
    fn show(&self, a: &FixedBitSet) -> String {
        format!("{:?}", a.ones().collect::<Vec<_>>())
    }
}

trait CaOps: Ops {
    fn cyl(&self, i: usize, x: &Self::E) -> Self::E;
    fn diag(&self, i: usize, j: usize) -> Self::E;
}

impl CaOps for CaMasks {
    fn cyl(&self, i: usize, x: &u64) -> u64 {
        self.cyl[i][*x as usize]
    }
    fn diag(&self, i: usize, j: usize) -> u64 {
        self.diag[i][j]
    }
}

impl CaOps for CaBits<'_> {
    fn cyl(&self, i: usize, x: &FixedBitSet) -> FixedBitSet {
        self.ca.cyl(i).preimage(x)
    }
    fn diag(&self, i: usize, j: usize) -> FixedBitSet {
        self.ca.diag(i, j)
    }
}

fn random_bits(rng: &mut ChaCha8Rng, size: usize) -> FixedBitSet {
    let mut b = FixedBitSet::with_capacity(size);
    for a in 0..size {
        if rng.gen_bool(0.5) {
            b.insert(a);
        }
    }
    b
}

fn ca_element_laws<O: CaOps>(
    ops: &O,
    n: usize,
    elems: &[O::E],
    pairs: &mut dyn Iterator<Item = (usize, usize)>,
    coverage: Coverage,
    out: &mut Checks,
) {
    let mut c1 = None;
    for i in 0..n {
        if ops.cyl(i, &ops.zero()) != ops.zero() {
            c1 = Some(format!("c_{i} 0 != 0"));
        }
    }
    out.push("C1 c_i 0 = 0", Level::Element, Coverage::Exhaustive, c1);

    let mut c2 = None;
    let mut c4 = None;
    let mut c7 = None;
    'unary: for x in elems {
        for i in 0..n {
            let cx = ops.cyl(i, x);
            if c2.is_none() && !ops.leq(x, &cx) {
                c2 = Some(format!("i={i} x={}", ops.show(x)));
            }
            for j in 0..n {
                if c4.is_none() && ops.cyl(i, &ops.cyl(j, x)) != ops.cyl(j, &cx) {
                    c4 = Some(format!("i={i} j={j} x={}", ops.show(x)));
                }
                if i != j && c7.is_none() {
                    let d = ops.diag(i, j);
                    let l = ops.cyl(i, &ops.meet(&d, x));
                    let r = ops.cyl(i, &ops.meet(&d, &ops.not(x)));
                    if ops.meet(&l, &r) != ops.zero() {
                        c7 = Some(format!("i={i} j={j} x={}", ops.show(x)));
                    }
                }
            }
            if c2.is_some() && c4.is_some() && c7.is_some() {
                break 'unary;
            }
        }
    }
    let mut c3 = None;
    let mut add = None;
    for (a, b) in pairs {
        let (x, y) = (&elems[a], &elems[b]);
        for i in 0..n {
            if c3.is_none() {
                let l = ops.cyl(i, &ops.meet(x, &ops.cyl(i, y)));
                let r = ops.meet(&ops.cyl(i, x), &ops.cyl(i, y));
                if l != r {
                    c3 = Some(format!("i={i} x={} y={}", ops.show(x), ops.show(y)));
                }
            }
            if add.is_none() && ops.cyl(i, &ops.join(x, y)) != ops.join(&ops.cyl(i, x), &ops.cyl(i, y)) {
                add = Some(format!("i={i} x={} y={}", ops.show(x), ops.show(y)));
            }
        }
        if c3.is_some() && add.is_some() {
            break;
        }
    }
    out.push("C2 x <= c_i x", Level::Element, coverage, c2);
    out.push("C3 c_i(x*c_i y) = c_i x*c_i y", Level::Element, coverage, c3);
    out.push("C4 c_i c_j x = c_j c_i x", Level::Element, coverage, c4);
    out.push("C7 c_i(d_ij*x)*c_i(d_ij*-x) = 0", Level::Element, coverage, c7);
    out.push("additivity c_i(x+y)", Level::Element, coverage, add);
}

pub fn check_ca_axioms(ca: &CaAtomStructure, sample_budget: u64) -> AxiomReport {
    let n = ca.dimension();
    let size = ca.atom_count();
    let mut out = Checks { list: Vec::new() };
    let name = |a: u32| ca.name(a).to_string();

    out.push("C0 Boolean algebra", Level::Atom, Coverage::Exhaustive, None);
    for i in 0..n {
        let t = ca.cyl(i);
        let w = t.is_reflexive().map(|a| format!("atom {}", name(a)));
        out.push(format!("C2 T_{i} reflexive"), Level::Atom, Coverage::Exhaustive, w);
        let w = t
            .symmetry_violation()
            .map(|(a, b)| format!("({}, {})", name(a), name(b)))
            .or_else(|| {
                t.transitivity_violation()
                    .map(|(a, b, c)| format!("({}, {}, {}) not transitive", name(a), name(b), name(c)))
            });
        out.push(format!("C3 T_{i} equivalence"), Level::Atom, Coverage::Exhaustive, w);
    }
    for i in 0..n {
        for j in i + 1..n {
            let w = commute_violation(ca, i, j).map(|a| format!("atom {}", name(a)));
            out.push(format!("C4 T_{i} T_{j} commute"), Level::Atom, Coverage::Exhaustive, w);
        }
    }
    out.push("C5 d_ii = 1", Level::Atom, Coverage::Exhaustive, None);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if k == i || k == j || (i > j) {
                    continue;
                }
                let mut m = ca.diag(i, k);
                m.intersect_with(&ca.diag(k, j));
                let rhs = ca.cyl(k).preimage(&m);
                let lhs = ca.diag(i, j);
                let w = (lhs != rhs).then(|| {
                    let mut diff = lhs.clone();
                    diff.symmetric_difference_with(&rhs);
                    format!("atom {}", name(diff.ones().next().unwrap() as u32))
                });
                out.push(
                    format!("C6 d_{i}{j} = c_{k}(d_{i}{k}*d_{k}{j})"),
                    Level::Atom,
                    Coverage::Exhaustive,
                    w,
                );
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let d = ca.diag(i, j);
            let w = (0..size as AtomId).find_map(|s| {
                let hits: Vec<u32> = ca
                    .cyl(i)
                    .row(s)
                    .iter()
                    .copied()
                    .filter(|&b| d.contains(b as usize))
                    .take(2)
                    .collect();
                (hits.len() > 1).then(|| {
                    format!("atom {} sees {} and {}", name(s), name(hits[0]), name(hits[1]))
                })
            });
            out.push(format!("C7 |T_{i} s ∩ D_{i}{j}| <= 1"), Level::Atom, Coverage::Exhaustive, w);
        }
    }

    if size <= EXHAUSTIVE_ELEMENT_LIMIT {
        let ops = CaMasks::new(ca);
        let elems: Vec<u64> = (0..1u64 << size).collect();
        let count = elems.len();
        let mut pairs = (0..count).flat_map(|a| (0..count).map(move |b| (a, b)));
        ca_element_laws(&ops, ops.n, &elems, &mut pairs, Coverage::Exhaustive, &mut out);
    } else {
        let ops = CaBits { ca };
        let mut rng = ChaCha8Rng::seed_from_u64(AXIOM_SAMPLE_SEED);
        let elems: Vec<FixedBitSet> = (0..sample_budget.max(2))
            .map(|_| random_bits(&mut rng, size))
            .collect();
        let k = elems.len();
        let mut pairs = (0..k).map(|a| (a, (a + 1) % k));
        ca_element_laws(&ops, n, &elems, &mut pairs, Coverage::Sampled(k as u64), &mut out);
    }

    AxiomReport {
        mode: AxiomMode::Ca,
        atoms: size,
        sample_seed: AXIOM_SAMPLE_SEED,
        checks: out.list,
    }
}

/// First atom `a` where `(T_i ∘ T_j)(a) != (T_j ∘ T_i)(a)`.
fn commute_violation(ca: &CaAtomStructure, i: usize, j: usize) -> Option<AtomId> {
    let size = ca.atom_count();
    let (ti, tj) = (ca.cyl(i), ca.cyl(j));
    if let (Some(ci), Some(cj)) = (ti.class_count(), tj.class_count()) {
        // reach sets per class, shared by every member
        let reach = |from: &super::Relation, to: &super::Relation, classes: usize| {
            let mut r = vec![FixedBitSet::with_capacity(size); classes];
            let mut done = vec![false; classes];
            for a in 0..size as AtomId {
                let c = from.class_of(a).unwrap() as usize;
                if done[c] {
                    continue;
                }
                done[c] = true;
                let mut to_done = std::collections::HashSet::new();
                for &b in from.row(a) {
                    if to_done.insert(to.class_of(b).unwrap()) {
                        for &x in to.row(b) {
                            r[c].insert(x as usize);
                        }
                    }
                }
            }
            r
        };
        let ij = reach(ti, tj, ci);
        let ji = reach(tj, ti, cj);
        return (0..size as AtomId)
            .find(|&a| ij[ti.class_of(a).unwrap() as usize] != ji[tj.class_of(a).unwrap() as usize]);
    }
    (0..size as AtomId).find(|&a| ti.compose_row(tj, a) != tj.compose_row(ti, a))
}

struct RaCtx<'a> {
    ra: &'a RaAtomStructure,
    comp: Option<Vec<FixedBitSet>>,
}

impl RaCtx<'_> {
    fn atoms_compose(&self, a: AtomId, b: AtomId) -> FixedBitSet {
        let size = self.ra.atom_count();
        if let Some(c) = &self.comp {
            return c[a as usize * size + b as usize].clone();
        }
        let mut out = FixedBitSet::with_capacity(size);
        for x in 0..size as AtomId {
            if self.ra.consistent(x, a, b) {
                out.insert(x as usize);
            }
        }
        out
    }

    fn compose(&self, x: &FixedBitSet, y: &FixedBitSet) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.ra.atom_count());
        for a in x.ones() {
            for b in y.ones() {
                out.union_with(&self.atoms_compose(a as AtomId, b as AtomId));
            }
        }
        out
    }

    fn conv(&self, x: &FixedBitSet) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.ra.atom_count());
        for a in x.ones() {
            out.insert(self.ra.converse(a as AtomId) as usize);
        }
        out
    }
}

/// Atom triples are enumerated exhaustively up to this many atoms.
pub const EXHAUSTIVE_TRIPLE_LIMIT: usize = 200;
/// Associativity is exhaustive over atom triples up to this many atoms.
pub const EXHAUSTIVE_ASSOC_LIMIT: usize = 64;

pub fn check_ra_axioms(ra: &RaAtomStructure, sample_budget: u64) -> AxiomReport {
    let size = ra.atom_count();
    let mut out = Checks { list: Vec::new() };
    let name = |a: AtomId| ra.name(a).to_string();
    let mut rng = ChaCha8Rng::seed_from_u64(AXIOM_SAMPLE_SEED);
    let budget = sample_budget.max(1);

    let w = (0..size as AtomId)
        .find(|&a| ra.converse(ra.converse(a)) != a)
        .map(|a| format!("atom {} -> {} -> {}", name(a), name(ra.converse(a)), name(ra.converse(ra.converse(a)))));
    out.push("involution a~~ = a", Level::Atom, Coverage::Exhaustive, w);

    let w = ra
        .identity()
        .ones()
        .find(|&e| !ra.is_identity(ra.converse(e as AtomId)))
        .map(|e| format!("atom {}", name(e as AtomId)));
    out.push("identity closed under ~", Level::Atom, Coverage::Exhaustive, w);

    let triples: Box<dyn Iterator<Item = (AtomId, AtomId, AtomId)>> = if size <= EXHAUSTIVE_TRIPLE_LIMIT {
        let s = size as AtomId;
        Box::new((0..s).flat_map(move |a| (0..s).flat_map(move |b| (0..s).map(move |c| (a, b, c)))))
    } else {
        let v: Vec<_> = (0..budget)
            .map(|_| {
                let s = size as AtomId;
                (rng.gen_range(0..s), rng.gen_range(0..s), rng.gen_range(0..s))
            })
            .collect();
        Box::new(v.into_iter())
    };
    let triple_cov = if size <= EXHAUSTIVE_TRIPLE_LIMIT {
        Coverage::Exhaustive
    } else {
        Coverage::Sampled(budget)
    };
    let mut peirce = None;
    for (a, b, c) in triples {
        let t = ra.consistent(a, b, c);
        let v1 = ra.consistent(b, a, ra.converse(c));
        let v2 = ra.consistent(c, ra.converse(b), a);
        if t != v1 || t != v2 {
            peirce = Some(format!(
                "({}, {}, {}) is {} but a rotation differs",
                name(a),
                name(b),
                name(c),
                if t { "consistent" } else { "forbidden" }
            ));
            break;
        }
    }
    out.push("Peircean closure", Level::Atom, triple_cov, peirce);

    let comp = (size <= EXHAUSTIVE_ASSOC_LIMIT).then(|| {
        let mut v = Vec::with_capacity(size * size);
        for a in 0..size as AtomId {
            for b in 0..size as AtomId {
                let mut s = FixedBitSet::with_capacity(size);
                for x in 0..size as AtomId {
                    if ra.consistent(x, a, b) {
                        s.insert(x as usize);
                    }
                }
                v.push(s);
            }
        }
        v
    });
    let ctx = RaCtx { ra, comp };

    let atom_list: Vec<AtomId> = if size <= 4096 {
        (0..size as AtomId).collect()
    } else {
        (0..budget).map(|_| rng.gen_range(0..size as AtomId)).collect()
    };
    let atom_cov = if size <= 4096 { Coverage::Exhaustive } else { Coverage::Sampled(budget) };
    let mut idl = None;
    for &a in &atom_list {
        let mut single = FixedBitSet::with_capacity(size);
        single.insert(a as usize);
        let left = ctx.compose(ra.identity(), &single);
        let right = ctx.compose(&single, ra.identity());
        if left != single || right != single {
            idl = Some(format!("atom {}", name(a)));
            break;
        }
    }
    out.push("identity law 1';a = a = a;1'", Level::Atom, atom_cov, idl);

    let assoc_triples: Vec<(AtomId, AtomId, AtomId)> = if size <= EXHAUSTIVE_ASSOC_LIMIT {
        let s = size as AtomId;
        (0..s).flat_map(|a| (0..s).flat_map(move |b| (0..s).map(move |c| (a, b, c)))).collect()
    } else {
        let s = size as AtomId;
        (0..budget.min(64))
            .map(|_| (rng.gen_range(0..s), rng.gen_range(0..s), rng.gen_range(0..s)))
            .collect()
    };
    let assoc_cov = if size <= EXHAUSTIVE_ASSOC_LIMIT {
        Coverage::Exhaustive
    } else {
        Coverage::Sampled(assoc_triples.len() as u64)
    };
    let mut assoc = None;
    let mut anti = None;
    for &(a, b, c) in &assoc_triples {
        let sa = single(size, a);
        let sb = single(size, b);
        let sc = single(size, c);
        if assoc.is_none() {
            let l = ctx.compose(&ctx.compose(&sa, &sb), &sc);
            let r = ctx.compose(&sa, &ctx.compose(&sb, &sc));
            if l != r {
                assoc = Some(format!("({}, {}, {})", name(a), name(b), name(c)));
            }
        }
        if anti.is_none() && c == 0 {
            let l = ctx.conv(&ctx.compose(&sa, &sb));
            let r = ctx.compose(&ctx.conv(&sb), &ctx.conv(&sa));
            if l != r {
                anti = Some(format!("({}, {})", name(a), name(b)));
            }
        }
    }
    out.push("associativity", Level::Atom, assoc_cov, assoc);
    out.push("(a;b)~ = b~;a~", Level::Atom, assoc_cov, anti);

    // element level
    let (elems, coverage): (Vec<FixedBitSet>, Coverage) = if size <= EXHAUSTIVE_RA_PAIR_LIMIT {
        (
            (0..1u64 << size)
                .map(|m| {
                    let mut b = FixedBitSet::with_capacity(size);
                    for a in 0..size {
                        if m >> a & 1 == 1 {
                            b.insert(a);
                        }
                    }
                    b
                })
                .collect(),
            Coverage::Exhaustive,
        )
    } else {
        let k = budget.clamp(2, 64);
        ((0..k).map(|_| random_bits(&mut rng, size)).collect(), Coverage::Sampled(k))
    };
    let exhaustive = coverage == Coverage::Exhaustive;
    let k = elems.len();
    let pairs: Vec<(usize, usize)> = if exhaustive {
        (0..k).flat_map(|a| (0..k).map(move |b| (a, b))).collect()
    } else {
        (0..k).map(|a| (a, (a + 1) % k)).collect()
    };
    let show = |x: &FixedBitSet| format!("{:?}", x.ones().collect::<Vec<_>>());
    let mut add = None;
    let mut tarski = None;
    let mut conv = None;
    for &(a, b) in &pairs {
        let (x, y) = (&elems[a], &elems[b]);
        let xy = ctx.compose(x, y);
        if add.is_none() {
            let mut u = x.clone();
            u.union_with(y);
            let mut r = ctx.compose(x, y);
            r.union_with(&ctx.compose(y, y));
            let mut r2 = ctx.compose(x, x);
            r2.union_with(&ctx.compose(y, x));
            if ctx.compose(&u, y) != r || ctx.compose(&u, x) != r2 {
                add = Some(format!("x={} y={}", show(x), show(y)));
            }
        }
        if conv.is_none() && ctx.conv(&xy) != ctx.compose(&ctx.conv(y), &ctx.conv(x)) {
            conv = Some(format!("x={} y={}", show(x), show(y)));
        }
        if tarski.is_none() {
            let z = &elems[(a + b) % k];
            let mut l = xy.clone();
            l.intersect_with(z);
            let mut r = ctx.compose(&ctx.conv(x), z);
            r.intersect_with(y);
            if l.is_clear() != r.is_clear() {
                tarski = Some(format!("x={} y={} z={}", show(x), show(y), show(z)));
            }
        }
    }
    out.push("additivity of ;", Level::Element, coverage, add);
    out.push("(x;y)~ = y~;x~", Level::Element, coverage, conv);
    out.push("Tarski/De Morgan law", Level::Element, coverage, tarski);

    AxiomReport {
        mode: AxiomMode::Ra,
        atoms: size,
        sample_seed: AXIOM_SAMPLE_SEED,
        checks: out.list,
    }
}

fn single(size: usize, a: AtomId) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(size);
    s.insert(a as usize);
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::structure::{powerset_structure, TripleSet};

    #[test]
    fn powerset_passes_ca() {
        let s = powerset_structure(3, 2).unwrap();
        let r = check_ca_axioms(&s, 64);
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn larger_powerset_passes_sampled() {
        let s = powerset_structure(2, 4).unwrap();
        let r = check_ca_axioms(&s, 64);
        assert!(r.passed(), "{r}");
        assert!(r.checks.iter().any(|c| matches!(c.coverage, Coverage::Sampled(_))));
    }

    fn z3(converse: Vec<AtomId>) -> RaAtomStructure {
        // group relation algebra of Z_3: a <= b;c iff a = b + c
        let names = vec!["0".to_string(), "1".into(), "2".into()];
        let mut id = FixedBitSet::with_capacity(3);
        id.insert(0);
        let list = (0..3u32)
            .flat_map(|b| (0..3u32).map(move |c| ((b + c) % 3, b, c)));
        RaAtomStructure::new(names, id, converse, TripleSet::from_list(3, list)).unwrap()
    }

    #[test]
    fn broken_involution_reported() {
        let good = z3(vec![0, 2, 1]);
        let r = check_ra_axioms(&good, 16);
        assert!(r.passed(), "{r}");
        let bad = z3(vec![0, 2, 2]);
        let r = check_ra_axioms(&bad, 16);
        let inv = r.find("involution a~~ = a").unwrap();
        assert!(!inv.passed);
        assert!(inv.witness.as_ref().unwrap().contains("atom 1"));
    }

    #[test]
    fn mode_mismatch_is_report_content() {
        let s = AtomStructure::Ca(powerset_structure(2, 2).unwrap());
        let r = check_axioms(&s, AxiomMode::Ra, 4);
        assert!(!r.passed());
    }
}
