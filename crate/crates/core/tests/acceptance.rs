//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

mod common;

use std::collections::HashSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use cylbench::blowup::{blow_up, theta_embed, DEFAULT_THETA_SEED};
use cylbench::games::*;
use cylbench::kernel::{
    apply_operator, check_ca_axioms, powerset_structure, square_union_structure, CaAtomStructure, ComplexAlgebra,
    Element, Operator,
};
use cylbench::maddux::{bin_atoms, kappa, psi, BinAtom, DEFAULT_BIN_CAP};
use cylbench::matrices::{ca_from_matrices, check_cylindric_basis, enumerate_basic_matrices, DEFAULT_MATRIX_SEARCH_CAP};
use cylbench::monk::{make_monk_graph, monk_atom_structure, GraphFamily};
use cylbench::oracle::{load_representation, micro_structures, search_representation, verify_representation};
use cylbench::oracle::DEFAULT_SEARCH_BUDGET;
use cylbench::rainbow::*;
use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// ∀'s winning depth for the cone script on CA_{4,3}, recorded from the solver.
const CONE_DEPTH: u32 = 4;
/// State cap for every solver call below.
const STATES: u64 = 1_000_000;
const EF_SECONDS: f64 = 1.0;
const PERMUTATIONS: usize = 50;

type Outcome = Result<String, String>;

fn budget() -> Budget {
    Budget { states: STATES, depth: 32 }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<T: std::fmt::Display>(x: T) -> String {
    x.to_string()
}

fn ca43_sig() -> RainbowSignature {
    build_signature(Preset::FiniteRainbow { n: 3, greens: 4, reds: 3 }).unwrap()
}

fn ef_cliques() -> Outcome {
    let mut detail = Vec::new();
    for n in [3usize, 4] {
        let t = Instant::now();
        let (a, b) = (FiniteStructure::complete(n + 1), FiniteStructure::complete(n));
        let r = n as u32 + 2;
        let v = GameVariant::Ef { p: n + 1, r, a: a.clone(), b: b.clone() };
        let rep = solve_game(None, &v, budget()).map_err(e)?;
        ensure(rep.winner == Winner::Forall, || format!("n={n}: {:?} with n+1 pebbles", rep.winner))?;
        let d = rep.forall_rounds.ok_or("no round count")?;
        ensure((n as u32 + 1..=n as u32 + 2).contains(&d), || format!("n={n}: rounds {d}"))?;
        ensure(rep.replayed == Some(true), || format!("n={n}: strategy does not replay"))?;
        let fewer = solve_game(None, &GameVariant::Ef { p: n, r, a, b }, budget()).map_err(e)?;
        ensure(fewer.winner == Winner::Exists, || format!("n={n}: {:?} with n pebbles", fewer.winner))?;
        let secs = t.elapsed().as_secs_f64();
        ensure(secs < EF_SECONDS, || format!("n={n}: {secs:.3}s"))?;
        detail.push(format!("n={n} d={d} {secs:.3}s"));
    }
    Ok(detail.join(", "))
}

fn rainbow_forall() -> Outcome {
    let t = Instant::now();
    let sig = ca43_sig();
    let rs = enumerate_rainbow(&sig, EnumOptions::default()).map_err(e)?;
    let count = rs.ca.atom_count();
    let brute = common::brute_force_count(&sig);
    ensure(count == brute, || format!("{count} atoms, brute force {brute}"))?;
    let ax = check_ca_axioms(&rs.ca, 64);
    ensure(ax.atom_level_passed(), || format!("axioms: {ax}"))?;

    let f = NetGame::new(&rs.ca, 6, NetMode::Reuse).map_err(e)?;
    let d = match verify_script(&f, &ConeScript::new(&rs, &f).map_err(e)?, 16).map_err(e)? {
        ScriptOutcome::ForallWinsWithin(d) => d,
        other => return Err(format!("Fm(6): {other:?}")),
    };
    ensure(d == CONE_DEPTH, || format!("Fm(6) depth {d}, fixture {CONE_DEPTH}"))?;
    let g = NetGame::new(&rs.ca, 6, NetMode::Bounded).map_err(e)?;
    match verify_script(&g, &ConeScript::new(&rs, &g).map_err(e)?, d).map_err(e)? {
        ScriptOutcome::ForallWinsWithin(k) if k <= d => {}
        other => return Err(format!("Gmk(6,{d}): {other:?}")),
    }
    Ok(format!("{count} atoms, d={d}, {:.1}s", t.elapsed().as_secs_f64()))
}

fn blowup_theta() -> Outcome {
    let sig = ca43_sig();
    let mut detail = Vec::new();
    for t in [2u32, 3] {
        let bm = blow_up(&sig, t, EnumOptions::default()).map_err(e)?;
        let blown = build_signature(Preset::BlownRainbow { n: 3, greens: 4, reds: 3, copies: t }).map_err(e)?;
        let independent = enumerate_rainbow_atoms(&blown).map_err(e)?.atom_count();
        ensure(bm.target.atoms.len() == independent, || {
            format!("T={t}: {} target atoms, independent count {independent}", bm.target.atoms.len())
        })?;
        let r = theta_embed(&bm, DEFAULT_THETA_SEED).map_err(e)?;
        ensure(r.passed(), || r.to_text())?;
        for name in ["injective", "join", "complement", "d01", "d02", "d12", "c0", "c1", "c2"] {
            ensure(r.find(name).is_some_and(|c| c.passed), || format!("T={t}: {name} missing or failed"))?;
        }
        // c_i on every atom through the element operators, against the copy map.
        let (src, tgt) = (&bm.source.ca, &bm.target.ca);
        let image = |x: &Element| -> Element {
            tgt.element(x.iter().flat_map(|a| bm.copies[a as usize].iter().copied()))
        };
        for a in 0..src.atom_count() as u32 {
            let x = src.element([a]);
            for i in 0..3 {
                let lhs = image(&apply_operator(src, Operator::Cyl(i), &[&x]).map_err(e)?);
                let rhs = apply_operator(tgt, Operator::Cyl(i), &[&image(&x)]).map_err(e)?;
                ensure(lhs == rhs, || format!("T={t}: c{i} differs at {}", src.name(a)))?;
            }
        }
        detail.push(format!("T={t}: {} atoms", r.target_atoms));
    }
    Ok(detail.join(", "))
}

fn maddux() -> Outcome {
    for x in 0..=6u32 {
        let x = BigUint::from(x);
        for y in 0..=6u64 {
            let want = common::kappa_unroll(&x, y);
            ensure(want == common::kappa_sum(&x, y), || format!("oracles disagree at ({x},{y})"))?;
            ensure(kappa(&x, y) == want, || format!("kappa({x},{y})"))?;
        }
    }
    for n in 1..=6u64 {
        for r in 0..=6u64 {
            ensure(psi(n, r) == common::psi_unroll(n, r), || format!("psi({n},{r})"))?;
        }
    }
    let mut sizes = Vec::new();
    for n in 2..=4u64 {
        for r in 0..=2u64 {
            let atoms = bin_atoms(n, r, DEFAULT_BIN_CAP).map_err(e)?;
            let p: u64 = common::psi_unroll(n, r).try_into().map_err(|_| "psi too large")?;
            let mut want: HashSet<BinAtom> = HashSet::from([BinAtom::Id]);
            for i in 0..n - 1 {
                for j in 0..r {
                    want.extend((0..p).map(|k| BinAtom::A { k, i, j }));
                }
            }
            let got: HashSet<BinAtom> = atoms.iter().copied().collect();
            ensure(got.len() == atoms.len() && got == want, || format!("Bin({n},{r}) atom set"))?;
            ensure(atoms.len() as u64 == 1 + (n - 1) * r * p, || format!("|Bin({n},{r})| = {}", atoms.len()))?;
            sizes.push(atoms.len().to_string());
        }
    }
    Ok(format!("Bin sizes {}", sizes.join(" ")))
}

fn monk_matrices() -> Outcome {
    for seed in 0..10u64 {
        let g = common::random_graph(seed, 2 + seed as usize % 4, 0.5);
        let ra = monk_atom_structure(&g, 3).map_err(e)?;
        common::monk_battery(&ra, &g, 3).map_err(|m| format!("graph {seed}: {m}"))?;
    }
    let k3 = make_monk_graph(GraphFamily::CliqueUnion { n: 3, count: 1 }).map_err(e)?;
    let ra = monk_atom_structure(&k3, 3).map_err(e)?;
    let ms = enumerate_basic_matrices(&ra, 3, DEFAULT_MATRIX_SEARCH_CAP).map_err(e)?;
    let brute = common::brute_force_matrices(&ra, 3);
    ensure(common::matrix_cells(&ms) == brute, || format!("{} matrices, brute force {}", ms.len(), brute.len()))?;

    let mut bases = 0;
    let mut cases = vec![(ra, ms)];
    for seed in 0..8u64 {
        let g = common::random_graph(seed, 2 + seed as usize % 2, 0.6);
        let ra = monk_atom_structure(&g, 2 + seed as usize % 2).map_err(e)?;
        let ms = enumerate_basic_matrices(&ra, 3, DEFAULT_MATRIX_SEARCH_CAP).map_err(e)?;
        cases.push((ra, ms));
    }
    for (ra, ms) in &cases {
        if check_cylindric_basis(ms, ra, 3).is_basis {
            bases += 1;
            let ca = ca_from_matrices(ms, ra, 3).map_err(e)?;
            let r = check_ca_axioms(&ca, 64);
            ensure(r.atom_level_passed(), || format!("basis CA: {r}"))?;
        }
    }
    ensure(bases > 0, || "no basis among the fixtures".into())?;
    Ok(format!("{} matrices for α(K3,3), {bases} bases checked", brute.len()))
}

fn oracle_coupling() -> Outcome {
    let fixtures = micro_structures();
    ensure(fixtures.len() >= 5, || "too few fixtures".into())?;
    let (mut found, mut none) = (0, 0);
    for (name, ca) in &fixtures {
        let out = search_representation(ca, 4, DEFAULT_SEARCH_BUDGET);
        let Some(rep) = out.representation() else {
            none += 1;
            continue;
        };
        found += 1;
        verify_representation(ca, rep).map_err(|m| format!("{name}: {m}"))?;
        let back = load_representation(&serde_json::to_string(rep).map_err(e)?).map_err(e)?;
        ensure(&back == rep, || format!("{name}: representation does not round-trip"))?;
        verify_representation(ca, &back).map_err(|m| format!("{name} reloaded: {m}"))?;
        for m in ca.dimension() + 1..=5 {
            for k in 0..=4 {
                let r = solve_game(Some(ca), &GameVariant::Gmk { m, k }, budget()).map_err(e)?;
                ensure(r.winner == Winner::Exists, || format!("{name}: Gmk({m},{k}) gives {:?}", r.winner))?;
            }
        }
    }
    ensure(fixtures.iter().any(|(n, _)| *n == "powerset-2-over-2"), || "powerset fixture missing".into())?;
    ensure(none >= 2, || "non-examples were represented".into())?;
    Ok(format!("{} fixtures, {found} found, {none} non-examples", fixtures.len()))
}

fn union_of(s: &impl ComplexAlgebra, xs: impl IntoIterator<Item = Element>) -> Element {
    let mut bits = s.element([]).atoms().clone();
    for x in xs {
        bits.union_with(x.atoms());
    }
    s.element_from_bits(bits).unwrap()
}

fn additivity() -> Result<(), String> {
    for ca in [powerset_structure(2, 2).unwrap(), square_union_structure(2, &[1, 2]).unwrap()] {
        let k = ca.atom_count();
        let all: Vec<Element> = (0..1u32 << k).map(|c| ca.element((0..k as u32).filter(|a| c >> a & 1 == 1))).collect();
        for i in 0..ca.dimension() {
            let c = |x: &Element| apply_operator(&ca, Operator::Cyl(i), &[x]).unwrap();
            for x in &all {
                let by_atoms = union_of(&ca, x.iter().map(|a| c(&ca.element([a]))));
                ensure(c(x) == by_atoms, || format!("c{i} not completely additive"))?;
                for y in &all {
                    ensure(c(&union_of(&ca, [x.clone(), y.clone()])) == union_of(&ca, [c(x), c(y)]), || {
                        format!("c{i} not additive")
                    })?;
                }
            }
        }
    }
    let rs = enumerate_rainbow(&ca43_sig(), EnumOptions::default()).unwrap();
    let ca = &rs.ca;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..8 {
        let x = ca.element((0..ca.atom_count() as u32).filter(|_| rng.gen_bool(0.02)));
        for i in 0..3 {
            let c = |x: &Element| apply_operator(ca, Operator::Cyl(i), &[x]).unwrap();
            ensure(c(&x) == union_of(ca, x.iter().map(|a| c(&ca.element([a])))), || {
                format!("rainbow c{i} not completely additive")
            })?;
        }
    }
    Ok(())
}

fn networks_of(ca: &CaAtomStructure, m: usize) -> Vec<Network> {
    let g = NetGame::new(ca, m, NetMode::Bounded).unwrap();
    let mut out = Vec::new();
    for mv in g.moves(&NetPos::Start) {
        for net in g.responses(&NetPos::Start, &mv).unwrap() {
            for mv2 in g.moves(&NetPos::Net(net.clone())).into_iter().take(2) {
                out.extend(g.responses(&NetPos::Net(net.clone()), &mv2).unwrap().into_iter().take(1));
            }
            out.push(net);
        }
    }
    out
}

fn canonicalization() -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checked = 0;
    let mut fixtures: Vec<(String, Vec<Network>, usize)> = micro_structures()
        .into_iter()
        .map(|(n, ca)| (n.to_string(), networks_of(&ca, 4), 4))
        .collect();
    let rs = enumerate_rainbow(&ca43_sig(), EnumOptions::default()).unwrap();
    let g = NetGame::new(&rs.ca, 6, NetMode::Bounded).unwrap();
    let script = ConeScript::new(&rs, &g).unwrap();
    let (a, st) = script.opening().unwrap();
    let net = g.responses(&NetPos::Start, &NetMove::Pick(a)).unwrap().remove(0);
    let (mv, _) = script.next(&net, &st).unwrap().ok_or("cone script stopped")?;
    let grown = g.responses(&NetPos::Net(net.clone()), &mv).map_err(e)?.remove(0);
    fixtures.push(("ca43".into(), vec![net, grown], 6));
    for (name, nets, space) in &fixtures {
        let mut map: Vec<u8> = (0..*space as u8).collect();
        for net in nets {
            let base = net.canonical(&[]).0;
            for _ in 0..PERMUTATIONS {
                map.shuffle(&mut rng);
                ensure(net.rename(&map, *space).canonical(&[]).0 == base, || format!("{name}: renaming changes form"))?;
            }
            checked += 1;
        }
    }
    let sig = ca43_sig();
    let mut g = ColouredGraph::new(6);
    for p in 0..6 {
        for q in p + 1..6 {
            g.set(&sig, p, q, rng.gen_range(0..sig.colour_count() as ColourId));
        }
    }
    let base = canonical_graph(&sig, &g);
    let mut perm: Vec<usize> = (0..6).collect();
    for _ in 0..PERMUTATIONS {
        perm.shuffle(&mut rng);
        ensure(canonical_graph(&sig, &g.permuted(&sig, &perm)) == base, || "coloured graph form changes".into())?;
    }
    Ok(checked + 1)
}

fn micro_games(n: usize) -> Vec<GameVariant> {
    vec![
        GameVariant::Gmk { m: n + 1, k: 3 },
        GameVariant::Gmk { m: n + 2, k: 3 },
        GameVariant::Hmk { m: n + 1, k: 2 },
        GameVariant::Gca { k: 3, nodes: None },
        GameVariant::Fm { m: n + 1, rounds: None },
    ]
}

fn determinacy_and_replay() -> Result<usize, String> {
    let mut solved = 0;
    for (name, ca) in micro_structures() {
        for v in micro_games(ca.dimension()) {
            let r = solve_game(Some(&ca), &v, budget()).map_err(e)?;
            ensure(r.winner != Winner::Unknown, || format!("{name} {}: undetermined", v.label()))?;
            ensure(r.replayed == Some(true), || format!("{name} {}: replay failed", v.label()))?;
            solved += 1;
        }
    }
    Ok(solved)
}

fn lyndon_monotone() -> Result<usize, String> {
    let mut tables = 0;
    for (name, ca) in micro_structures() {
        for m in [ca.dimension() + 1, ca.dimension() + 2] {
            let t = check_lyndon_up_to(&ca, 4, m, budget()).map_err(e)?;
            ensure(t.is_monotone(), || format!("{name} m={m}: {:?}", t.rows))?;
            tables += 1;
        }
    }
    Ok(tables)
}

fn scheduler_independence() -> Result<(), String> {
    let pool = |n| rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap();
    for (name, ca) in micro_structures() {
        let runs: Vec<(SolveReport, LyndonTable)> = [1, 2, 4]
            .into_iter()
            .map(|n| {
                pool(n).install(|| {
                    let m = ca.dimension() + 2;
                    let r = solve_game(Some(&ca), &GameVariant::Gmk { m, k: 3 }, budget()).unwrap();
                    (r, check_lyndon_up_to(&ca, 3, m, budget()).unwrap())
                })
            })
            .collect();
        ensure(runs.windows(2).all(|w| w[0] == w[1]), || format!("{name}: reports differ across runs"))?;
    }
    Ok(())
}

fn property_suites() -> Outcome {
    additivity().map_err(|m| format!("additivity: {m}"))?;
    let forms = canonicalization().map_err(|m| format!("canonicalization: {m}"))?;
    let solved = determinacy_and_replay()?;
    let tables = lyndon_monotone()?;
    scheduler_independence()?;
    Ok(format!("{forms} forms x {PERMUTATIONS} permutations, {solved} games replayed, {tables} Lyndon tables"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("ef-pebble-cliques", ef_cliques),
        ("rainbow-forall-wins", rainbow_forall),
        ("blowup-theta", blowup_theta),
        ("maddux-arithmetic", maddux),
        ("monk-matrices", monk_matrices),
        ("oracle-coupling", oracle_coupling),
        ("property-suites", property_suites),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.into_iter().enumerate() {
        let out = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        match out {
            Ok(d) => println!("criterion {} {name}: PASS ({d})", i + 1),
            Err(d) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({d})", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 7 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
