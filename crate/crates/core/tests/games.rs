use std::time::Instant;

use cylbench::games::*;
use cylbench::kernel::{powerset_structure, square_union_structure, CaAtomStructure};
use cylbench::rainbow::*;
use proptest::prelude::*;

fn ca43() -> RainbowStructure {
    let sig = build_signature(Preset::FiniteRainbow { n: 3, greens: 4, reds: 3 }).unwrap();
    enumerate_rainbow(&sig, EnumOptions::default()).unwrap()
}

fn budget() -> Budget {
    Budget { states: 500_000, depth: 32 }
}

#[test]
fn single_node_network_is_consistent() {
    let rs = ca43();
    let all_same = rs.ca.atom("p000").unwrap();
    let mut net = Network::new(3, 4);
    net.set(&[0, 0, 0], all_same);
    assert_eq!(net.check(&rs.ca), Ok(()));
}

#[test]
fn seeded_diagonal_violation_names_tuple() {
    let rs = ca43();
    let merged = rs.ca.atom("p001|01:w_0").unwrap();
    let mut net = Network::new(3, 4);
    // merged says x0 = x1, but the tuple has distinct first coordinates
    net.set(&[0, 1, 2], merged);
    match net.check(&rs.ca) {
        Err(NetworkViolation::Diagonal { tuple, .. }) => assert_eq!(tuple, vec![0, 1, 2]),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn cone_opening_network_is_consistent() {
    let rs = ca43();
    let g = NetGame::new(&rs.ca, 6, NetMode::Bounded).unwrap();
    let script = ConeScript::new(&rs, &g).unwrap();
    let (a, _) = script.opening().unwrap();
    assert_eq!(rs.ca.name(a), "p012|01:w_0,02:g_0^1,12:g_1");
    let nets = g.responses(&NetPos::Start, &NetMove::Pick(a)).unwrap();
    assert_eq!(nets.len(), 1);
    assert_eq!(nets[0].check(&rs.ca), Ok(()));
}

#[test]
fn zero_rounds_is_exists() {
    let rs = ca43();
    let r = solve_game(Some(&rs.ca), &GameVariant::Gmk { m: 6, k: 0 }, budget()).unwrap();
    assert_eq!(r.winner, Winner::Exists);
}

#[test]
fn powerset_base2_gmk_exists() {
    let ca = powerset_structure(3, 2).unwrap();
    let r = solve_game(Some(&ca), &GameVariant::Gmk { m: 5, k: 3 }, budget()).unwrap();
    assert_eq!(r.winner, Winner::Exists);
    assert_eq!(r.replayed, Some(true));
}

#[test]
fn ef_cliques() {
    for n in [3usize, 4] {
        let a = FiniteStructure::complete(n + 1);
        let b = FiniteStructure::complete(n);
        let t = Instant::now();
        let v = GameVariant::Ef { p: n + 1, r: n as u32 + 2, a: a.clone(), b: b.clone() };
        let r = solve_game(None, &v, budget()).unwrap();
        assert_eq!(r.winner, Winner::Forall);
        let d = r.forall_rounds.unwrap();
        assert!(d >= n as u32 + 1 && d <= n as u32 + 2, "rounds {d}");
        assert_eq!(r.replayed, Some(true));
        let v = GameVariant::Ef { p: n, r: n as u32 + 2, a, b };
        assert_eq!(solve_game(None, &v, budget()).unwrap().winner, Winner::Exists);
        assert!(t.elapsed().as_secs_f64() < 1.0);
    }
}

#[test]
fn ef_identity_is_exists() {
    for s in [FiniteStructure::complete(4), FiniteStructure::Order { lo: -2, hi: 2 }] {
        for p in 1..=3 {
            for r in 0..=3 {
                let v = GameVariant::Ef { p, r, a: s.clone(), b: s.clone() };
                assert_eq!(solve_game(None, &v, budget()).unwrap().winner, Winner::Exists);
            }
        }
    }
}

#[test]
fn cone_script_wins_reuse_and_bounded() {
    let rs = ca43();
    let f = NetGame::new(&rs.ca, 6, NetMode::Reuse).unwrap();
    let d = match verify_script(&f, &ConeScript::new(&rs, &f).unwrap(), 16).unwrap() {
        ScriptOutcome::ForallWinsWithin(d) => d,
        other => panic!("{other:?}"),
    };
    assert_eq!(d, 4);
    let g = NetGame::new(&rs.ca, 6, NetMode::Bounded).unwrap();
    let out = verify_script(&g, &ConeScript::new(&rs, &g).unwrap(), d).unwrap();
    assert_eq!(out, ScriptOutcome::ForallWinsWithin(d));
}

#[test]
fn weak_script_is_refuted_with_red_line() {
    let rs = ca43();
    let g = NetGame::new(&rs.ca, 6, NetMode::Bounded).unwrap();
    let weak = ConeScript::new(&rs, &g).unwrap().repeating();
    match verify_script(&g, &weak, 6).unwrap() {
        ScriptOutcome::RefutedAt { position, transcript, .. } => {
            let has_red = position.tuples().iter().any(|t| {
                let a = position.get(t).unwrap();
                rs.atom(a).has_red(&rs.sig)
            });
            assert!(has_red);
            let text = transcript.to_text(&rs.ca);
            let back = Transcript::parse(&text, &rs.ca).unwrap();
            assert_eq!(back, transcript);
            assert_eq!(back.replay(&g).unwrap(), transcript.steps.len());
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn fourth_cone_reuses_a_node_when_nodes_run_out() {
    let rs = ca43();
    let g = NetGame::new(&rs.ca, 5, NetMode::Reuse).unwrap();
    let script = ConeScript::new(&rs, &g).unwrap();
    let (a, mut state) = script.opening().unwrap();
    let mut net = g.responses(&NetPos::Start, &NetMove::Pick(a)).unwrap().remove(0);
    let mut targets = Vec::new();
    for _ in 0..3 {
        let (mv, next) = script.next(&net, &state).unwrap().unwrap();
        if let NetMove::Cyl { target, .. } = &mv {
            targets.push(*target);
        }
        net = g.responses(&NetPos::Net(net.clone()), &mv).unwrap().remove(0);
        state = next;
    }
    assert_eq!(targets, vec![None, None, Some(2)]);
}

#[test]
fn single_red_cone_script_wins() {
    // λ single reds, λ+2 tints
    let sig = build_signature(Preset::SingleReds { n: 3, greens: 4, lambda: 2 }).unwrap();
    let rs = enumerate_rainbow(&sig, EnumOptions::default()).unwrap();
    let g = NetGame::new(&rs.ca, 7, NetMode::Bounded).unwrap();
    let s = ConeScript::new(&rs, &g).unwrap();
    let out = verify_script(&g, &s, 16).unwrap();
    assert!(matches!(out, ScriptOutcome::ForallWinsWithin(_)), "{out:?}");
}

#[test]
fn ordered_script_descends() {
    let sig = build_signature(Preset::OrderedZn { n: 3, z_trunc: 3, n_trunc: 2 }).unwrap();
    let rs = enumerate_rainbow(&sig, EnumOptions::default()).unwrap();
    let g = NetGame::new(&rs.ca, 7, NetMode::Bounded).unwrap();
    let s = ConeScript::new(&rs, &g).unwrap();
    assert_eq!(s.tints(), &[0, -1, -2, -3]);
    let out = verify_script(&g, &s, 16).unwrap();
    assert!(matches!(out, ScriptOutcome::ForallWinsWithin(_)), "{out:?}");
}

#[test]
fn lyndon_table_powerset_all_exists() {
    let ca = powerset_structure(3, 2).unwrap();
    let t = check_lyndon_up_to(&ca, 3, 5, budget()).unwrap();
    assert!(t.rows.iter().all(|r| r.winner == Winner::Exists));
    let t = check_lyndon_up_to(&ca, 0, 5, budget()).unwrap();
    assert_eq!(t.rows, vec![LyndonRow { k: 0, winner: Winner::Exists }]);
}

/// Two diagonal atoms linked by T_0 cannot both be points of a representation.
fn linked_diagonals() -> CaAtomStructure {
    use cylbench::kernel::Relation;
    use fixedbitset::FixedBitSet;
    let full = Relation::from_class_ids(&[0, 0]);
    let mut d = FixedBitSet::with_capacity(2);
    d.insert_range(..);
    CaAtomStructure::new(2, vec!["a".into(), "b".into()], vec![full.clone(), full], vec![d]).unwrap()
}

#[test]
fn lyndon_table_non_example_turns_forall() {
    let ca = linked_diagonals();
    let t = check_lyndon_up_to(&ca, 4, 3, budget()).unwrap();
    assert!(t.is_monotone());
    assert!(t.threshold().is_some(), "{t:?}");
}

#[test]
fn fm_solves_as_safety_game() {
    let ca = powerset_structure(2, 2).unwrap();
    let r = solve_game(Some(&ca), &GameVariant::Fm { m: 3, rounds: None }, budget()).unwrap();
    assert_eq!(r.winner, Winner::Exists);
    assert_eq!(r.replayed, Some(true));
    let ca = linked_diagonals();
    let r = solve_game(Some(&ca), &GameVariant::Fm { m: 3, rounds: None }, budget()).unwrap();
    assert_eq!(r.winner, Winner::Forall);
    assert_eq!(r.replayed, Some(true));
}

#[test]
fn gmk_forall_implies_fm_forall_within() {
    let ca = linked_diagonals();
    let t = check_lyndon_up_to(&ca, 4, 3, budget()).unwrap();
    let k = t.threshold().unwrap();
    let r = solve_game(Some(&ca), &GameVariant::Fm { m: 3, rounds: None }, budget()).unwrap();
    assert_eq!(r.winner, Winner::Forall);
    assert!(r.forall_rounds.unwrap() <= k);
}

fn micro_structures() -> Vec<CaAtomStructure> {
    vec![
        powerset_structure(2, 2).unwrap(),
        square_union_structure(2, &[1, 2]).unwrap(),
        linked_diagonals(),
    ]
}

#[test]
fn determinacy_and_replay_on_micro_games() {
    for ca in micro_structures() {
        for v in [
            GameVariant::Gmk { m: 3, k: 3 },
            GameVariant::Gmk { m: 4, k: 3 },
            GameVariant::Hmk { m: 3, k: 2 },
            GameVariant::Gca { k: 3, nodes: None },
        ] {
            let r = solve_game(Some(&ca), &v, budget()).unwrap();
            assert_ne!(r.winner, Winner::Unknown, "{}", v.label());
            assert_eq!(r.replayed, Some(true), "{}", v.label());
        }
    }
}

#[test]
fn canonicalization_agrees_with_raw_positions() {
    for ca in micro_structures() {
        for k in 0..=3 {
            let g = NetGame::new(&ca, 4, NetMode::Bounded).unwrap();
            let raw = NetGame::new(&ca, 4, NetMode::Bounded).unwrap().without_canonical();
            assert_eq!(
                solve_rounds(&g, k, budget()).winner,
                solve_rounds(&raw, k, budget()).winner
            );
        }
    }
}

#[test]
fn node_monotonicity_on_micro_games() {
    for ca in micro_structures() {
        for k in 0..=3 {
            let small = solve_game(Some(&ca), &GameVariant::Gmk { m: 3, k }, budget()).unwrap();
            let big = solve_game(Some(&ca), &GameVariant::Gmk { m: 4, k }, budget()).unwrap();
            if small.winner == Winner::Exists {
                assert_eq!(big.winner, Winner::Exists);
            }
        }
    }
}

#[test]
fn repeated_runs_give_identical_reports() {
    let ca = linked_diagonals();
    let pool = |threads| rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
    let reports: Vec<SolveReport> = [1, 2, 4]
        .into_iter()
        .map(|t| pool(t).install(|| solve_game(Some(&ca), &GameVariant::Gmk { m: 4, k: 3 }, budget()).unwrap()))
        .collect();
    assert_eq!(reports[0], reports[1]);
    assert_eq!(reports[1], reports[2]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]
    #[test]
    fn canonical_network_ignores_renaming(perm in Just((0u8..4).collect::<Vec<_>>()).prop_shuffle()) {
        let rs = ca43();
        let g = NetGame::new(&rs.ca, 6, NetMode::Bounded).unwrap();
        let script = ConeScript::new(&rs, &g).unwrap();
        let (a, st) = script.opening().unwrap();
        let net = g.responses(&NetPos::Start, &NetMove::Pick(a)).unwrap().remove(0);
        let (mv, _) = script.next(&net, &st).unwrap().unwrap();
        let grown = g.responses(&NetPos::Net(net), &mv).unwrap().remove(0);
        let mut map = perm.clone();
        map.extend(4..6);
        let moved = grown.rename(&map, 6);
        prop_assert_eq!(grown.canonical(&[]).0, moved.canonical(&[]).0);
    }
}
