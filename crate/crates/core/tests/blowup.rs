use std::time::Instant;

use cylbench::blowup::*;
use cylbench::kernel::check_ca_axioms;
use cylbench::rainbow::*;

fn sig43() -> RainbowSignature {
    build_signature(Preset::FiniteRainbow { n: 3, greens: 4, reds: 3 }).unwrap()
}

fn red_edges(sig: &RainbowSignature, a: &RainbowAtom) -> usize {
    let len = a.graph.len();
    (0..len)
        .flat_map(|p| (p + 1..len).map(move |q| (p, q)))
        .filter(|&(p, q)| a.graph.raw(p, q).is_some_and(|c| sig.colour(c).is_red()))
        .count()
}

#[test]
fn single_copy_blowup_is_the_source() {
    let bm = blow_up(&sig43(), 1, EnumOptions::default()).unwrap();
    assert_eq!(bm.source.atoms.len(), bm.target.atoms.len());
    assert!(bm.copies.iter().all(|c| c.len() == 1));
}

#[test]
fn copy_counts_follow_red_edges() {
    let bm = blow_up(&sig43(), 3, EnumOptions::default()).unwrap();
    let mut one_red = 0;
    for (a, atom) in bm.source.atoms.iter().enumerate() {
        let e = red_edges(&bm.source.sig, atom);
        if e == 0 {
            assert_eq!(bm.copies[a], vec![bm.target.atom_id(&bm.target.atoms[bm.copies[a][0] as usize]).unwrap()]);
            assert_eq!(bm.copies[a].len(), 1);
        }
        if e == 1 {
            one_red += 1;
            assert_eq!(bm.copies[a].len(), 3);
        }
        for &c in &bm.copies[a] {
            assert!(is_copy(&bm.source.sig, &bm.target.sig, bm.target.atom(c), atom));
        }
    }
    assert!(one_red > 0);
    let total: usize = bm.copies.iter().map(|c| c.len()).sum();
    assert_eq!(total, bm.target.atoms.len());
}

#[test]
fn target_count_matches_independent_enumeration() {
    let blown = build_signature(Preset::BlownRainbow { n: 3, greens: 4, reds: 3, copies: 2 }).unwrap();
    let independent = enumerate_rainbow_atoms(&blown).unwrap().atom_count();
    let bm = blow_up(&sig43(), 2, EnumOptions::default()).unwrap();
    assert_eq!(bm.target.atoms.len(), independent);
}

#[test]
fn blown_structure_is_a_ca_atom_structure() {
    let bm = blow_up(&sig43(), 2, EnumOptions::default()).unwrap();
    assert!(check_ca_axioms(&bm.target.ca, 64).atom_level_passed());
}

#[test]
fn theta_preserves_operations() {
    for t in [2, 3] {
        let start = Instant::now();
        let bm = blow_up(&sig43(), t, EnumOptions::default()).unwrap();
        let r = theta_embed(&bm, DEFAULT_THETA_SEED).unwrap();
        assert!(r.passed(), "{}", r.to_text());
        for name in ["injective", "join", "complement", "zero", "one", "d01", "d02", "d12", "c0", "c1", "c2"] {
            assert!(r.find(name).is_some_and(|c| c.passed), "{name}");
        }
        eprintln!("T={t}: {} target atoms in {:?}", r.target_atoms, start.elapsed());
    }
}
