//! Scenario files: a construction, a list of checks, and optional expected outcomes.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::blowup::{blow_up, theta_embed, DEFAULT_THETA_SEED};
use crate::games::{
    check_lyndon_up_to, solve_game, verify_script, Budget, ConeScript, GameVariant, NetGame, NetMode,
    ScriptOutcome, Winner,
};
use crate::kernel::{
    check_axioms, load_structure, powerset_structure, square_union_structure, AtomStructure, CaAtomStructure,
};
use crate::maddux::{bin_atom_structure, DEFAULT_BIN_CAP};
use crate::matrices::{check_cylindric_basis, enumerate_basic_matrices, DEFAULT_MATRIX_SEARCH_CAP};
use crate::monk::{make_monk_graph, monk_atom_structure, GraphFamily};
use crate::oracle::{micro_structures, search_representation, SearchOutcome, DEFAULT_SEARCH_BUDGET};
use crate::rainbow::{enumerate_rainbow, EnumOptions, Preset, RainbowStructure, YellowPolicy};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_RESOURCE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

pub const DEFAULT_AXIOM_SAMPLE: u64 = 256;

#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    /// Omitted for checks that need no carrier, such as pebble games.
    #[serde(default)]
    pub construction: Option<Construction>,
    #[serde(default)]
    pub checks: Vec<CheckSpec>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum Construction {
    Rainbow {
        #[serde(flatten)]
        preset: Preset,
        #[serde(default)]
        yellow: YellowPolicy,
    },
    Powerset { n: usize, base: usize },
    SquareUnion { n: usize, blocks: Vec<usize> },
    /// One of the oracle's named micro structures.
    Micro { name: String },
    Monk { graph: GraphFamily, colours: usize },
    Bin { n: u64, r: u64 },
    /// A structure file, relative to the scenario file.
    File { path: PathBuf },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckSpec {
    #[serde(default)]
    pub name: Option<String>,
    #[serde(flatten)]
    pub op: CheckOp,
    #[serde(default)]
    pub expect: Option<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "op", rename_all = "camelCase")]
pub enum CheckOp {
    Axioms {
        #[serde(default)]
        sample: Option<u64>,
    },
    Game {
        #[serde(deserialize_with = "game_spec")]
        game: GameVariant,
        #[serde(default)]
        budget: Option<Budget>,
    },
    /// ∀'s cone strategy on a rainbow construction.
    #[serde(rename_all = "camelCase")]
    ConeScript {
        m: usize,
        #[serde(default)]
        reuse: bool,
        depth: u32,
        #[serde(default)]
        repeating: bool,
    },
    Blowup {
        copies: u32,
        #[serde(default)]
        seed: Option<u64>,
    },
    #[serde(rename_all = "camelCase")]
    Oracle {
        max_base: usize,
        #[serde(default)]
        budget: Option<u64>,
    },
    Basis {
        m: usize,
        #[serde(default)]
        cap: Option<u64>,
    },
    #[serde(rename_all = "camelCase")]
    Lyndon {
        max_k: u32,
        m: usize,
        #[serde(default)]
        budget: Option<Budget>,
    },
}

impl CheckOp {
    fn label(&self) -> String {
        match self {
            CheckOp::Axioms { .. } => "axioms".into(),
            CheckOp::Game { game, .. } => game.label(),
            CheckOp::ConeScript { m, reuse, repeating, .. } => {
                let game = if *reuse { format!("Fm({m})") } else { format!("G^{m}") };
                let kind = if *repeating { "repeatingCone" } else { "cone" };
                format!("{kind} in {game}")
            }
            CheckOp::Blowup { copies, .. } => format!("blowup({copies})"),
            CheckOp::Oracle { max_base, .. } => format!("oracle({max_base})"),
            CheckOp::Basis { m, .. } => format!("basis({m})"),
            CheckOp::Lyndon { max_k, m, .. } => format!("lyndon({max_k},{m})"),
        }
    }
}

/// Overrides applied to every check.
#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions {
    pub seed: Option<u64>,
    pub budget: Option<Budget>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckResult {
    pub name: String,
    pub outcome: String,
    pub expected: Option<String>,
    pub matched: Option<bool>,
    pub resource_exhausted: bool,
    pub detail: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ScenarioReport {
    pub scenario: String,
    pub construction: String,
    pub atoms: usize,
    pub checks: Vec<CheckResult>,
    pub exit_code: i32,
}

impl ScenarioReport {
    pub fn to_text(&self) -> String {
        let mut s = format!("scenario {}\nconstruction {} ({} atoms)\n", self.scenario, self.construction, self.atoms);
        for c in &self.checks {
            let verdict = match (c.matched, &c.expected) {
                (Some(true), _) => " [ok]".to_string(),
                (Some(false), Some(e)) => format!(" [MISMATCH: expected {e}]"),
                _ => String::new(),
            };
            writeln!(s, "check {}: {}{}", c.name, c.outcome, verdict).expect("writing to a string");
            for d in &c.detail {
                writeln!(s, "  {d}").expect("writing to a string");
            }
        }
        writeln!(s, "exit {}", self.exit_code).expect("writing to a string");
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let s: Scenario = serde_json::from_str(text).map_err(|e| Error::usage(format!("scenario: {e}")))?;
    if let Some(Construction::Micro { name }) = &s.construction {
        if !micro_structures().iter().any(|(n, _)| n == name) {
            return Err(Error::usage(format!("unknown micro structure `{name}`")));
        }
    }
    Ok(s)
}

enum Built {
    Nothing,
    Rainbow(Box<RainbowStructure>),
    Plain(AtomStructure),
}

impl Built {
    fn ca(&self) -> Result<&CaAtomStructure> {
        match self {
            Built::Nothing => Err(Error::usage("this check needs a construction")),
            Built::Rainbow(rs) => Ok(&rs.ca),
            Built::Plain(s) => s.as_ca(),
        }
    }

    fn atoms(&self) -> usize {
        match self {
            Built::Nothing => 0,
            Built::Rainbow(rs) => rs.ca.atom_count(),
            Built::Plain(s) => s.atom_count(),
        }
    }
}

fn describe(c: Option<&Construction>) -> String {
    let Some(c) = c else {
        return "none".to_string();
    };
    match c {
        Construction::Rainbow { preset, .. } => preset.to_string(),
        Construction::Powerset { n, base } => format!("powerset(n={n},base={base})"),
        Construction::SquareUnion { n, blocks } => format!("squareUnion(n={n},blocks={blocks:?})"),
        Construction::Micro { name } => format!("micro({name})"),
        Construction::Monk { graph, colours } => format!("monk({graph:?},colours={colours})"),
        Construction::Bin { n, r } => format!("Bin({n},{r})"),
        Construction::File { path } => format!("file({})", path.display()),
    }
}

fn build(c: Option<&Construction>, dir: &Path) -> Result<Built> {
    let Some(c) = c else {
        return Ok(Built::Nothing);
    };
    Ok(match c {
        Construction::Rainbow { preset, yellow } => {
            let sig = crate::rainbow::build_signature(*preset)?;
            let options = EnumOptions { yellow: *yellow, ..EnumOptions::default() };
            Built::Rainbow(Box::new(enumerate_rainbow(&sig, options)?))
        }
        Construction::Powerset { n, base } => Built::Plain(AtomStructure::Ca(powerset_structure(*n, *base)?)),
        Construction::SquareUnion { n, blocks } => {
            Built::Plain(AtomStructure::Ca(square_union_structure(*n, blocks)?))
        }
        Construction::Micro { name } => {
            let (_, ca) = micro_structures()
                .into_iter()
                .find(|(n, _)| n == name)
                .ok_or_else(|| Error::usage(format!("unknown micro structure `{name}`")))?;
            Built::Plain(AtomStructure::Ca(ca))
        }
        Construction::Monk { graph, colours } => {
            Built::Plain(AtomStructure::Ra(monk_atom_structure(&make_monk_graph(*graph)?, *colours)?))
        }
        Construction::Bin { n, r } => Built::Plain(AtomStructure::Ra(bin_atom_structure(*n, *r, None, DEFAULT_BIN_CAP)?)),
        Construction::File { path } => {
            let p = dir.join(path);
            let text = std::fs::read_to_string(&p)
                .map_err(|e| Error::usage(format!("cannot read {}: {e}", p.display())))?;
            Built::Plain(load_structure(&text)?)
        }
    })
}

struct Outcome {
    value: String,
    resource: bool,
    detail: Vec<String>,
}

impl Outcome {
    fn of(value: impl Into<String>) -> Self {
        Outcome { value: value.into(), resource: false, detail: Vec::new() }
    }

    fn with(mut self, d: impl Into<String>) -> Self {
        self.detail.push(d.into());
        self
    }
}

fn winner_outcome(w: Winner, text: String) -> Outcome {
    let mut o = Outcome::of(format!("{w:?}"));
    o.resource = w == Winner::Unknown;
    o.detail.extend(text.lines().map(str::to_string));
    o
}

fn run_check(built: &Built, op: &CheckOp, opts: &RunOptions) -> Result<Outcome> {
    let budget = |b: &Option<Budget>| opts.budget.or(*b).unwrap_or_default();
    match op {
        CheckOp::Axioms { sample } => {
            let s = sample.unwrap_or(DEFAULT_AXIOM_SAMPLE);
            let report = match built {
                Built::Nothing => return Err(Error::usage("axioms need a construction")),
                Built::Rainbow(rs) => check_axioms(&AtomStructure::Ca(rs.ca.clone()), crate::kernel::AxiomMode::Ca, s),
                Built::Plain(st @ AtomStructure::Ca(_)) => check_axioms(st, crate::kernel::AxiomMode::Ca, s),
                Built::Plain(st @ AtomStructure::Ra(_)) => check_axioms(st, crate::kernel::AxiomMode::Ra, s),
            };
            let mut o = Outcome::of(if report.passed() { "pass" } else { "fail" });
            for f in report.failures() {
                o = o.with(format!("{} failed: {}", f.name, f.witness.as_deref().unwrap_or("-")));
            }
            Ok(o.with(format!("{} checks", report.checks.len())))
        }
        CheckOp::Game { game, budget: b } => {
            let carrier = if game.needs_carrier() { Some(built.ca()?) } else { None };
            let r = solve_game(carrier, game, budget(b))?;
            Ok(winner_outcome(r.winner, r.to_text()))
        }
        CheckOp::ConeScript { m, reuse, depth, repeating } => {
            let Built::Rainbow(rs) = built else {
                return Err(Error::usage("coneScript needs a rainbow construction"));
            };
            let mode = if *reuse { NetMode::Reuse } else { NetMode::Bounded };
            let game = NetGame::new(&rs.ca, *m, mode)?;
            let mut script = ConeScript::new(rs, &game)?;
            if *repeating {
                script = script.repeating();
            }
            Ok(match verify_script(&game, &script, *depth)? {
                ScriptOutcome::ForallWinsWithin(d) => Outcome::of(format!("ForallWinsWithin({d})")),
                ScriptOutcome::RefutedAt { round, transcript, .. } => Outcome::of(format!("RefutedAt({round})"))
                    .with(format!("surviving line of {} rounds", transcript.steps.len())),
            })
        }
        CheckOp::Blowup { copies, seed } => {
            let Built::Rainbow(rs) = built else {
                return Err(Error::usage("blowup needs a rainbow construction"));
            };
            let bm = blow_up(&rs.sig, *copies, rs.options)?;
            let seed = opts.seed.or(*seed).unwrap_or(DEFAULT_THETA_SEED);
            let report = theta_embed(&bm, seed)?;
            let mut o = Outcome::of(if report.passed() { "pass" } else { "fail" });
            o.detail.extend(report.to_text().lines().map(str::to_string));
            Ok(o)
        }
        CheckOp::Oracle { max_base, budget: b } => {
            let ca = built.ca()?;
            let b = opts.budget.map(|b| b.states).or(*b).unwrap_or(DEFAULT_SEARCH_BUDGET);
            Ok(match search_representation(ca, *max_base, b) {
                SearchOutcome::Found { representation, explored } => {
                    Outcome::of(format!("Found(base {})", representation.base_size))
                        .with(format!("blocks {:?}, explored {explored}", representation.blocks))
                }
                SearchOutcome::NoneWithinBudget { explored, frontier } => {
                    let mut o = Outcome::of("NoneWithinBudget").with(format!("explored {explored}, frontier {frontier}"));
                    o.resource = explored >= b;
                    o
                }
            })
        }
        CheckOp::Basis { m, cap } => {
            let Built::Plain(AtomStructure::Ra(ra)) = built else {
                return Err(Error::usage("basis needs an RA construction"));
            };
            let ms = enumerate_basic_matrices(ra, *m, cap.unwrap_or(DEFAULT_MATRIX_SEARCH_CAP))?;
            let report = check_cylindric_basis(&ms, ra, *m);
            let o = Outcome::of(if report.is_basis { "basis" } else { "notBasis" })
                .with(format!("{} matrices", ms.len()));
            Ok(match report.witness {
                Some(w) => o.with(format!("witness {w:?}")),
                None => o,
            })
        }
        CheckOp::Lyndon { max_k, m, budget: b } => {
            let table = check_lyndon_up_to(built.ca()?, *max_k, *m, budget(b))?;
            let mut o = Outcome::of(match table.threshold() {
                Some(k) => format!("Threshold({k})"),
                None => "NoThreshold".to_string(),
            });
            for row in &table.rows {
                o = o.with(format!("k={} {:?}", row.k, row.winner));
            }
            o.resource = table.rows.iter().any(|r| r.winner == Winner::Unknown);
            Ok(o)
        }
    }
}

/// Run every check. Usage errors abort the run; resource errors mark the check.
pub fn run_scenario(scenario: &Scenario, dir: &Path, opts: &RunOptions) -> Result<ScenarioReport> {
    let built = build(scenario.construction.as_ref(), dir)?;
    let mut checks = Vec::new();
    for spec in &scenario.checks {
        let name = spec.name.clone().unwrap_or_else(|| spec.op.label());
        let outcome = match run_check(&built, &spec.op, opts) {
            Ok(o) => o,
            Err(e @ Error::Resource { .. }) => Outcome { value: "ResourceExhausted".into(), resource: true, detail: vec![e.to_string()] },
            Err(e) => return Err(e),
        };
        let matched = if outcome.resource { None } else { spec.expect.as_ref().map(|e| *e == outcome.value) };
        checks.push(CheckResult {
            name,
            outcome: outcome.value,
            expected: spec.expect.clone(),
            matched,
            resource_exhausted: outcome.resource,
            detail: outcome.detail,
        });
    }
    let exit_code = if checks.iter().any(|c| c.matched == Some(false)) {
        EXIT_MISMATCH
    } else if checks.iter().any(|c| c.resource_exhausted) {
        EXIT_RESOURCE
    } else {
        EXIT_OK
    };
    Ok(ScenarioReport {
        scenario: scenario.name.clone(),
        construction: describe(scenario.construction.as_ref()),
        atoms: built.atoms(),
        checks,
        exit_code,
    })
}

/// Read, parse and run a scenario file.
pub fn run_scenario_file(path: &Path, opts: &RunOptions) -> Result<ScenarioReport> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::usage(format!("cannot read {}: {e}", path.display())))?;
    let scenario = parse_scenario(&text)?;
    run_scenario(&scenario, path.parent().unwrap_or(Path::new(".")), opts)
}

/// Map an error to the runner's exit code.
pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Resource { .. } => EXIT_RESOURCE,
        _ => EXIT_USAGE,
    }
}

/// A game given as call syntax (`"Gmk(5,3)"`) or as a tagged object.
fn game_spec<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<GameVariant, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Spec {
        Call(String),
        Tagged(GameVariant),
    }
    match Spec::deserialize(d)? {
        Spec::Call(s) => s.parse().map_err(serde::de::Error::custom),
        Spec::Tagged(g) => Ok(g),
    }
}
