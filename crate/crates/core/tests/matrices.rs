mod common;

use cylbench::kernel::{check_ca_axioms, TripleSet};
use cylbench::kernel::{AtomStructure, RaAtomStructure};
use cylbench::matrices::{
    ca_from_matrices, check_cylindric_basis, enumerate_basic_matrices, BasisWitness, DEFAULT_MATRIX_SEARCH_CAP,
};
use cylbench::monk::{make_monk_graph, monk_atom_structure, GraphFamily};
use fixedbitset::FixedBitSet;

fn alpha_k3() -> RaAtomStructure {
    monk_atom_structure(&make_monk_graph(GraphFamily::CliqueUnion { n: 3, count: 1 }).unwrap(), 3).unwrap()
}

#[test]
fn alpha_k3_matches_unpruned_brute_force() {
    let ra = alpha_k3();
    let ms = enumerate_basic_matrices(&ra, 3, DEFAULT_MATRIX_SEARCH_CAP).unwrap();
    assert_eq!(common::matrix_cells(&ms), common::brute_force_matrices(&ra, 3));
    assert!(ms.windows(2).all(|w| w[0] < w[1]), "canonical order");
    assert!(ms.iter().all(|f| f.violation(&ra).is_none()));
}

#[test]
fn identity_only_ra_has_only_degenerate_matrices() {
    let mut id = FixedBitSet::with_capacity(2);
    id.insert(0);
    let triples = TripleSet::from_list(2, [(0, 0, 0), (1, 0, 1), (1, 1, 0), (0, 1, 1)]);
    let ra = RaAtomStructure::new(vec!["Id".into(), "a".into()], id, vec![0, 1], triples).unwrap();
    let ms = enumerate_basic_matrices(&ra, 3, DEFAULT_MATRIX_SEARCH_CAP).unwrap();
    assert_eq!(common::matrix_cells(&ms), common::brute_force_matrices(&ra, 3));
    // The all-Id matrix and the three with one merged pair of nodes.
    assert_eq!(ms.len(), 4);
    assert!(ms.iter().all(|f| (0..3).any(|x| (0..3).any(|y| x != y && f.get(x, y) == 0))));
}

#[test]
fn alpha_k3_basis_report_and_ca() {
    let ra = alpha_k3();
    let ms = enumerate_basic_matrices(&ra, 3, DEFAULT_MATRIX_SEARCH_CAP).unwrap();
    let report = check_cylindric_basis(&ms, &ra, 3);
    assert!(report.is_basis, "{:?}", report.witness);
    let ca = ca_from_matrices(&ms, &ra, 3).unwrap();
    assert!(check_ca_axioms(&ca, 64).atom_level_passed());
    for i in 0..3 {
        assert!(ca.cyl(i).is_equivalence());
    }
    let id = ms.iter().position(|f| f.cells.iter().enumerate().all(|(c, &a)| (c % 4 == 0) == (a == 0) || a == 0));
    let id = id.expect("constant-Id matrix") as u32;
    for i in 0..3 {
        for j in i + 1..3 {
            assert!(ca.in_diag(i, j, id));
        }
    }
}

#[test]
fn removing_a_matrix_breaks_the_basis() {
    let ra = alpha_k3();
    let ms = enumerate_basic_matrices(&ra, 3, DEFAULT_MATRIX_SEARCH_CAP).unwrap();
    let removed = ms.iter().position(|f| f.cells.iter().filter(|&&a| a != 0).count() == 6).unwrap();
    let mut fewer = ms.clone();
    let gone = fewer.remove(removed);
    let report = check_cylindric_basis(&fewer, &ra, 3);
    assert!(!report.is_basis);
    match report.witness.unwrap() {
        BasisWitness::Triple { a, b, c } => {
            assert_eq!((gone.get(0, 1), gone.get(0, 2), gone.get(2, 1)), (a, b, c));
        }
        BasisWitness::Amalgamation { f, g, x, y } => {
            assert!(fewer[f].equiv(&fewer[g], x, y));
        }
    }
}

#[test]
fn empty_set_is_not_a_basis() {
    let ra = alpha_k3();
    let report = check_cylindric_basis(&[], &ra, 3);
    assert!(!report.is_basis);
    assert!(matches!(report.witness, Some(BasisWitness::Triple { .. })));
    assert!(ca_from_matrices(&[], &ra, 3).is_err());
}

#[test]
fn sidecar_and_interchange() {
    let ra = alpha_k3();
    let ms = enumerate_basic_matrices(&ra, 3, DEFAULT_MATRIX_SEARCH_CAP).unwrap();
    let ca = ca_from_matrices(&ms, &ra, 3).unwrap();
    let side = cylbench::matrices::matrices_sidecar(&ms, &ra);
    assert_eq!(side.as_array().unwrap().len(), ms.len());
    let text = cylbench::kernel::structure_to_string(&AtomStructure::Ca(ca.clone()));
    let back = cylbench::kernel::load_structure(&text).unwrap();
    assert_eq!(back.atom_count(), ca.atom_count());
}

#[test]
fn passing_bases_give_ca_structures() {
    let mut passing = 0;
    for seed in 0..8u64 {
        let g = common::random_graph(seed, 2 + seed as usize % 2, 0.6);
        let ra = monk_atom_structure(&g, 2 + seed as usize % 2).unwrap();
        let ms = enumerate_basic_matrices(&ra, 3, DEFAULT_MATRIX_SEARCH_CAP).unwrap();
        assert!(ms.iter().all(|f| f.violation(&ra).is_none()));
        if check_cylindric_basis(&ms, &ra, 3).is_basis {
            passing += 1;
            let ca = ca_from_matrices(&ms, &ra, 3).unwrap();
            let r = check_ca_axioms(&ca, 32);
            assert!(r.atom_level_passed(), "seed {seed}: {:?}", r.failures().next());
        }
    }
    assert!(passing > 0);
}
