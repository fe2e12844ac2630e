//! Splitting red atoms into superscripted copies and checking the atom-copy embedding.

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::kernel::{AtomId, CaAtomStructure, ComplexAlgebra, Element, Operator};
use crate::rainbow::{
    build_signature, enumerate_rainbow, Colour, ColouredGraph, EnumOptions, Preset, RainbowAtom, RainbowSignature,
    RainbowStructure,
};
use crate::{Error, Result};

/// Source atoms up to this count get element-level checks over all elements.
pub const EXHAUSTIVE_SOURCE_LIMIT: usize = 16;
/// Pairs of elements are all checked up to this many source atoms.
pub const EXHAUSTIVE_PAIR_LIMIT: usize = 8;
pub const DEFAULT_THETA_SEED: u64 = 0x5eed_c0de;
const SAMPLE_ELEMENTS: usize = 256;

pub const TRUNCATION_NOTICE: &str =
    "red superscripts truncated to a finite copy count; only the finite homomorphism computation is checked";

/// Source rainbow structure, its blow-up, and the copies of each source atom.
pub struct BlowupMap {
    pub source: RainbowStructure,
    pub target: RainbowStructure,
    pub copies: Vec<Vec<AtomId>>,
    /// Source atom of each target atom.
    pub origin: Vec<AtomId>,
}

fn forget_superscripts(src: &RainbowSignature, tgt: &RainbowSignature, atom: &RainbowAtom) -> Result<RainbowAtom> {
    let len = atom.graph.len();
    let mut g = ColouredGraph::new(len);
    for p in 0..len {
        for q in p + 1..len {
            if let Some(c) = atom.graph.raw(p, q) {
                let colour = match tgt.colour(c) {
                    Colour::Red { i, j, .. } => Colour::Red { i, j, sup: None },
                    other => other,
                };
                g.set(src, p, q, src.id(colour)?);
            }
        }
    }
    for (set, shade) in atom.graph.yellow() {
        g.label(set.clone(), shade.clone());
    }
    Ok(RainbowAtom { blocks: atom.blocks.clone(), graph: g })
}

/// Whether target atom `m` is a copy of source atom `b`: same partition, red exactly where red,
/// equal non-red edges, equal labels.
pub fn is_copy(bm_src: &RainbowSignature, bm_tgt: &RainbowSignature, m: &RainbowAtom, b: &RainbowAtom) -> bool {
    if m.blocks != b.blocks || m.graph.len() != b.graph.len() {
        return false;
    }
    let len = m.graph.len();
    for p in 0..len {
        for q in p + 1..len {
            match (m.graph.raw(p, q), b.graph.raw(p, q)) {
                (None, None) => {}
                (Some(x), Some(y)) => {
                    let (cx, cy) = (bm_tgt.colour(x), bm_src.colour(y));
                    if cx.is_red() != cy.is_red() {
                        return false;
                    }
                    if !cx.is_red() && cx != cy {
                        return false;
                    }
                }
                _ => return false,
            }
        }
    }
    m.graph.yellow() == b.graph.yellow()
}

/// Blow up the reds of a finite rainbow signature into `t` superscripted copies each.
pub fn blow_up(sig: &RainbowSignature, t: u32, options: EnumOptions) -> Result<BlowupMap> {
    let Preset::FiniteRainbow { n, greens, reds } = sig.preset() else {
        return Err(Error::usage(format!("blow-up needs a finiteRainbow signature, got {}", sig.preset())));
    };
    if t == 0 {
        return Err(Error::usage("copy count must be >= 1"));
    }
    let source = enumerate_rainbow(sig, options)?;
    let blown = build_signature(Preset::BlownRainbow { n, greens, reds, copies: t })?;
    let target = enumerate_rainbow(&blown, options)?;
    let mut copies = vec![Vec::new(); source.atoms.len()];
    let mut origin = Vec::with_capacity(target.atoms.len());
    for (k, atom) in target.atoms.iter().enumerate() {
        let plain = forget_superscripts(&source.sig, &target.sig, atom)?;
        let b = source
            .atom_id(&plain)
            .ok_or_else(|| Error::structural(format!("target atom {} has no source", atom.name(&target.sig))))?;
        if !is_copy(&source.sig, &target.sig, atom, source.atom(b)) {
            return Err(Error::structural(format!("atom {} fails the copy clauses", atom.name(&target.sig))));
        }
        copies[b as usize].push(k as AtomId);
        origin.push(b);
    }
    Ok(BlowupMap { source, target, copies, origin })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub witness: Option<String>,
}

impl Check {
    fn new(name: impl Into<String>, witness: Option<String>) -> Self {
        Check { name: name.into(), passed: witness.is_none(), witness }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ThetaReport {
    pub source_atoms: usize,
    pub target_atoms: usize,
    pub checks: Vec<Check>,
    /// "exhaustive" or "sampled".
    pub element_coverage: String,
    pub elements_checked: usize,
    pub seed: u64,
    pub notice: String,
}

impl ThetaReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn find(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "theta: {} source atoms -> {} target atoms; elements {} ({}), seed {:#x}\n",
            self.source_atoms, self.target_atoms, self.elements_checked, self.element_coverage, self.seed
        );
        for c in &self.checks {
            s.push_str(&format!("{} {}", if c.passed { "ok  " } else { "FAIL" }, c.name));
            if let Some(w) = &c.witness {
                s.push_str(&format!(": {w}"));
            }
            s.push('\n');
        }
        s.push_str(&format!("note: {}\n", self.notice));
        s
    }
}

/// The union-extension of an atom map between two CA atom structures.
pub struct AtomMap<'a> {
    pub source: &'a CaAtomStructure,
    pub target: &'a CaAtomStructure,
    pub copies: &'a [Vec<AtomId>],
}

impl AtomMap<'_> {
    pub fn image(&self, x: &FixedBitSet) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.target.atom_count());
        for a in x.ones() {
            for &c in &self.copies[a] {
                out.insert(c as usize);
            }
        }
        out
    }

    fn singleton(&self, a: usize) -> FixedBitSet {
        let mut x = FixedBitSet::with_capacity(self.source.atom_count());
        x.insert(a);
        x
    }

    /// Atom-level checks, exact for all elements by additivity, then element-level checks.
    pub fn verify(&self, seed: u64) -> Result<ThetaReport> {
        let (src, tgt) = (self.source, self.target);
        if src.dimension() != tgt.dimension() {
            return Err(Error::usage("source and target dimensions differ"));
        }
        let n = src.dimension();
        let mut checks = Vec::new();

        let mut seen = FixedBitSet::with_capacity(tgt.atom_count());
        let mut inj = None;
        for (a, cs) in self.copies.iter().enumerate() {
            if cs.is_empty() {
                inj = Some(format!("atom {} has no copy", src.name(a as AtomId)));
                break;
            }
            if let Some(&c) = cs.iter().find(|&&c| seen.contains(c as usize)) {
                inj = Some(format!("target atom {} is a copy of two source atoms", tgt.name(c)));
                break;
            }
            for &c in cs {
                seen.insert(c as usize);
            }
        }
        checks.push(Check::new("injective", inj));
        let uncovered = (0..tgt.atom_count()).find(|&c| !seen.contains(c));
        let cover = uncovered.map(|c| format!("target atom {} is not a copy", tgt.name(c as AtomId)));
        checks.push(Check::new("join", None));
        checks.push(Check::new("complement", cover.clone()));
        checks.push(Check::new("zero", None));
        checks.push(Check::new("one", cover));

        for i in 0..n {
            for j in i + 1..n {
                let img = self.image(&src.diag(i, j));
                let w = (img != tgt.diag(i, j)).then(|| {
                    let bad = img.symmetric_difference(&tgt.diag(i, j)).next().expect("sets differ");
                    format!("target atom {}", tgt.name(bad as AtomId))
                });
                checks.push(Check::new(format!("d{i}{j}"), w));
            }
        }
        for i in 0..n {
            let w = (0..src.atom_count()).into_par_iter().find_first(|&a| {
                let x = self.singleton(a);
                self.image(&src.cyl(i).preimage(&x)) != tgt.cyl(i).preimage(&self.image(&x))
            });
            checks.push(Check::new(
                format!("c{i}"),
                w.map(|a| format!("atom {}", src.name(a as AtomId))),
            ));
        }

        let k = src.atom_count();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let exhaustive = k <= EXHAUSTIVE_SOURCE_LIMIT;
        let elements: Vec<FixedBitSet> = if exhaustive {
            (0u64..1 << k).map(|bits| bits_to_set(k, bits)).collect()
        } else {
            (0..SAMPLE_ELEMENTS)
                .map(|_| {
                    let mut x = FixedBitSet::with_capacity(k);
                    for a in 0..k {
                        if rng.gen_bool(0.5) {
                            x.insert(a);
                        }
                    }
                    x
                })
                .collect()
        };
        let partners: Vec<FixedBitSet> = if k <= EXHAUSTIVE_PAIR_LIMIT {
            elements.clone()
        } else {
            elements.iter().step_by((elements.len() / 16).max(1)).cloned().collect()
        };
        let el = |x: &FixedBitSet, s: &CaAtomStructure| s.element_from_bits(x.clone());
        let w = elements.par_iter().find_map_first(|x| -> Option<String> {
            let (sx, tx) = (el(x, src).ok()?, el(&self.image(x), tgt).ok()?);
            let comp_s = src.apply(Operator::Complement, &[&sx]).ok()?;
            let comp_t = tgt.apply(Operator::Complement, &[&tx]).ok()?;
            if self.image(comp_s.atoms()) != *comp_t.atoms() {
                return Some(format!("complement at {x:?}"));
            }
            for i in 0..n {
                let a = src.apply(Operator::Cyl(i), &[&sx]).ok()?;
                let b = tgt.apply(Operator::Cyl(i), &[&tx]).ok()?;
                if self.image(a.atoms()) != *b.atoms() {
                    return Some(format!("c{i} at {x:?}"));
                }
            }
            for y in &partners {
                let sy: Element = el(y, src).ok()?;
                let ty = el(&self.image(y), tgt).ok()?;
                let a = src.apply(Operator::Join, &[&sx, &sy]).ok()?;
                let b = tgt.apply(Operator::Join, &[&tx, &ty]).ok()?;
                if self.image(a.atoms()) != *b.atoms() {
                    return Some(format!("join at {x:?}, {y:?}"));
                }
            }
            None
        });
        checks.push(Check::new("elements", w));
        Ok(ThetaReport {
            source_atoms: k,
            target_atoms: tgt.atom_count(),
            checks,
            element_coverage: if exhaustive { "exhaustive" } else { "sampled" }.into(),
            elements_checked: elements.len(),
            seed,
            notice: TRUNCATION_NOTICE.into(),
        })
    }
}

fn bits_to_set(k: usize, bits: u64) -> FixedBitSet {
    let mut x = FixedBitSet::with_capacity(k);
    for a in 0..k {
        if bits >> a & 1 == 1 {
            x.insert(a);
        }
    }
    x
}

/// Θ for a blow-up, with its verification report.
pub fn theta_embed(bm: &BlowupMap, seed: u64) -> Result<ThetaReport> {
    AtomMap { source: &bm.source.ca, target: &bm.target.ca, copies: &bm.copies }.verify(seed)
}
