use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use cylbench::blowup::{blow_up, theta_embed, DEFAULT_THETA_SEED};
use cylbench::games::{parse_network, solve_game, Budget, GameVariant, Winner};
use cylbench::kernel::{
    check_axioms, load_structure, powerset_structure, structure_to_string, AtomStructure, AxiomMode,
};
use cylbench::maddux::{bin_atom_structure, DEFAULT_BIN_CAP};
use cylbench::matrices::{check_cylindric_basis, enumerate_basic_matrices, DEFAULT_MATRIX_SEARCH_CAP};
use cylbench::monk::{make_monk_graph, monk_atom_structure, GraphFamily};
use cylbench::oracle::{search_representation, SearchOutcome, DEFAULT_SEARCH_BUDGET};
use cylbench::rainbow::{build_signature, enumerate_rainbow, to_dot, EnumOptions, Preset, YellowPolicy};
use cylbench::scenario::{
    exit_code_for, run_scenario_file, RunOptions, DEFAULT_AXIOM_SAMPLE, EXIT_MISMATCH, EXIT_OK, EXIT_RESOURCE,
    EXIT_USAGE,
};
use cylbench::Error;

#[derive(Parser)]
#[command(name = "cylbench", version, about = "Workbench for finite cylindric and relation atom structures")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    /// Seed for sampled element checks
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Cap on stored game positions (search nodes for rep-search)
    #[arg(long, global = true)]
    budget_states: Option<u64>,
    /// Cap on game depth
    #[arg(long, global = true)]
    budget_depth: Option<u32>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Also write Graphviz output here.
    #[arg(long, global = true)]
    dot: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Subcommand)]
enum Command {
    /// Build an atom structure and write it in the interchange format.
    #[command(subcommand)]
    Gen(Gen),
    /// Solve a game on a structure, e.g. `Gmk(5,3)`, `Fm(6)`, `Gca(3)`, `EF(4,6,4,3)` or a JSON spec.
    Solve {
        game: String,
        #[arg(long)]
        structure: Option<PathBuf>,
    },
    /// Check axioms, a cylindric basis, or a network
    #[command(subcommand)]
    Check(Check),
    /// Search for a representation on disjoint squares.
    RepSearch {
        #[arg(long)]
        structure: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_base: usize,
    },
    /// Run a scenario file.
    Run { scenario: PathBuf },
}

#[derive(Subcommand)]
enum Gen {
    /// A rainbow preset such as `finiteRainbow(3,4,3)`.
    Rainbow {
        preset: String,
        #[arg(long)]
        partial_yellow: bool,
    },
    /// Monk RA atom structure over an interval or clique-union graph
    Monk {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        n: usize,
        /// Vertex count (interval) or clique count (cliques).
        #[arg(long)]
        size: usize,
        #[arg(long)]
        colours: usize,
    },
    /// All tuples over a base, one atom each.
    Powerset {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        base: usize,
    },
    /// Maddux Bin(n, r) atom structure
    Bin {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        r: u64,
    },
    /// Blow up the reds of a `finiteRainbow` preset and check the embedding.
    Blowup {
        preset: String,
        #[arg(long)]
        copies: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Interval,
    Cliques,
}

#[derive(Subcommand)]
enum Check {
    /// CA or RA axioms on a structure file
    Axioms {
        #[arg(long)]
        structure: PathBuf,
        #[arg(long, default_value_t = DEFAULT_AXIOM_SAMPLE)]
        sample: u64,
    },
    /// Whether the basic matrices of an RA structure form a cylindric basis.
    Basis {
        #[arg(long)]
        structure: PathBuf,
        #[arg(long)]
        m: usize,
    },
    /// Consistency of a network in the text format
    Network {
        #[arg(long)]
        structure: PathBuf,
        #[arg(long)]
        network: PathBuf,
    },
}

struct Output {
    text: String,
    machine: serde_json::Value,
    code: i32,
}

fn read(path: &Path) -> cylbench::Result<String> {
    fs::read_to_string(path).map_err(|e| Error::usage(format!("cannot read {}: {e}", path.display())))
}

fn load(path: &Path) -> cylbench::Result<AtomStructure> {
    load_structure(&read(path)?)
}

fn budget(c: &Common) -> Budget {
    let d = Budget::default();
    Budget { states: c.budget_states.unwrap_or(d.states), depth: c.budget_depth.unwrap_or(d.depth) }
}

fn write_dot(c: &Common, dot: impl FnOnce() -> String) -> cylbench::Result<()> {
    if let Some(p) = &c.dot {
        fs::write(p, dot())?;
    }
    Ok(())
}

fn structure_output(s: &AtomStructure, summary: String) -> Output {
    let text = structure_to_string(s) + "\n";
    let machine = serde_json::from_str(&text).expect("structure text is json");
    eprintln!("{summary}");
    Output { text, machine, code: EXIT_OK }
}

fn gen(c: &Common, g: &Gen) -> cylbench::Result<Output> {
    match g {
        Gen::Rainbow { preset, partial_yellow } => {
            let preset: Preset = preset.parse()?;
            let yellow = if *partial_yellow { YellowPolicy::Partial } else { YellowPolicy::Unlabelled };
            let rs = enumerate_rainbow(&build_signature(preset)?, EnumOptions { yellow, ..EnumOptions::default() })?;
            write_dot(c, || {
                rs.atoms.iter().map(|a| to_dot(&rs.sig, &a.graph, &a.name(&rs.sig))).collect::<String>()
            })?;
            let n = rs.ca.atom_count();
            Ok(structure_output(&AtomStructure::Ca(rs.ca), format!("{preset}: {n} atoms")))
        }
        Gen::Monk { family, n, size, colours } => {
            let kind = match family {
                Family::Interval => GraphFamily::Interval { n: *n, size: *size },
                Family::Cliques => GraphFamily::CliqueUnion { n: *n, count: *size },
            };
            let graph = make_monk_graph(kind)?;
            write_dot(c, || graph.to_dot("G"))?;
            let ra = monk_atom_structure(&graph, *colours)?;
            let n = ra.atom_count();
            Ok(structure_output(&AtomStructure::Ra(ra), format!("monk: {n} atoms")))
        }
        Gen::Powerset { n, base } => {
            let ca = powerset_structure(*n, *base)?;
            let k = ca.atom_count();
            Ok(structure_output(&AtomStructure::Ca(ca), format!("powerset({n},{base}): {k} atoms")))
        }
        Gen::Bin { n, r } => {
            let ra = bin_atom_structure(*n, *r, None, DEFAULT_BIN_CAP)?;
            let k = ra.atom_count();
            Ok(structure_output(&AtomStructure::Ra(ra), format!("Bin({n},{r}): {k} atoms")))
        }
        Gen::Blowup { preset, copies } => {
            let preset: Preset = preset.parse()?;
            let bm = blow_up(&build_signature(preset)?, *copies, EnumOptions::default())?;
            let report = theta_embed(&bm, c.seed.unwrap_or(DEFAULT_THETA_SEED))?;
            write_dot(c, || {
                let t = &bm.target;
                t.atoms.iter().map(|a| to_dot(&t.sig, &a.graph, &a.name(&t.sig))).collect::<String>()
            })?;
            let mut out = structure_output(
                &AtomStructure::Ca(bm.target.ca.clone()),
                format!(
                    "{preset} blown up x{copies}: {} -> {} atoms\n{}",
                    bm.source.ca.atom_count(),
                    bm.target.ca.atom_count(),
                    report.to_text()
                ),
            );
            if !report.passed() {
                out.code = EXIT_MISMATCH;
            }
            Ok(out)
        }
    }
}

fn solve(c: &Common, game: &str, structure: Option<&Path>) -> cylbench::Result<Output> {
    let variant: GameVariant = game.parse()?;
    let loaded = structure.map(load).transpose()?;
    let carrier = match &loaded {
        Some(s) => Some(s.as_ca()?),
        None if variant.needs_carrier() => {
            return Err(Error::usage(format!("{} needs --structure", variant.label())))
        }
        None => None,
    };
    let report = solve_game(carrier, &variant, budget(c))?;
    let code = if report.winner == Winner::Unknown { EXIT_RESOURCE } else { EXIT_OK };
    Ok(Output {
        text: report.to_text() + "\n",
        machine: serde_json::to_value(&report).expect("report serializes"),
        code,
    })
}

fn check(c: &Check) -> cylbench::Result<Output> {
    match c {
        Check::Axioms { structure, sample } => {
            let s = load(structure)?;
            let mode = if matches!(s, AtomStructure::Ca(_)) { AxiomMode::Ca } else { AxiomMode::Ra };
            let report = check_axioms(&s, mode, *sample);
            let mut text = String::new();
            for ch in &report.checks {
                text.push_str(&format!(
                    "{} {:?} {:?}: {}{}\n",
                    ch.name,
                    ch.level,
                    ch.coverage,
                    if ch.passed { "pass" } else { "FAIL" },
                    ch.witness.as_ref().map(|w| format!(" ({w})")).unwrap_or_default()
                ));
            }
            Ok(Output {
                text,
                machine: serde_json::to_value(&report).expect("report serializes"),
                code: if report.passed() { EXIT_OK } else { EXIT_MISMATCH },
            })
        }
        Check::Basis { structure, m } => {
            let s = load(structure)?;
            let ra = s.as_ra()?;
            let ms = enumerate_basic_matrices(ra, *m, DEFAULT_MATRIX_SEARCH_CAP)?;
            let report = check_cylindric_basis(&ms, ra, *m);
            let text = format!(
                "{} basic {m}-matrices: {}\n",
                ms.len(),
                match &report.witness {
                    None => "cylindric basis".to_string(),
                    Some(w) => format!("not a basis, witness {w:?}"),
                }
            );
            Ok(Output {
                text,
                machine: json!({ "matrices": ms.len(), "report": report }),
                code: if report.is_basis { EXIT_OK } else { EXIT_MISMATCH },
            })
        }
        Check::Network { structure, network } => {
            let s = load(structure)?;
            let ca = s.as_ca()?;
            let net = parse_network(&read(network)?, ca)?;
            let verdict = net.check(ca);
            let text = match &verdict {
                Ok(()) => "consistent\n".to_string(),
                Err(v) => format!("inconsistent: {v}\n"),
            };
            Ok(Output {
                text,
                machine: json!({
                    "consistent": verdict.is_ok(),
                    "violation": verdict.as_ref().err().map(|v| v.to_string()),
                }),
                code: if verdict.is_ok() { EXIT_OK } else { EXIT_MISMATCH },
            })
        }
    }
}

fn rep_search(c: &Common, structure: &Path, max_base: usize) -> cylbench::Result<Output> {
    let s = load(structure)?;
    let cap = c.budget_states.unwrap_or(DEFAULT_SEARCH_BUDGET);
    let outcome = search_representation(s.as_ca()?, max_base, cap);
    let (text, code) = match &outcome {
        SearchOutcome::Found { representation, explored } => (
            format!("found on base {} (blocks {:?}), explored {explored}\n", representation.base_size, representation.blocks),
            EXIT_OK,
        ),
        SearchOutcome::NoneWithinBudget { explored, frontier } => (
            format!("none within budget: explored {explored}, frontier {frontier}\n"),
            if *explored >= cap { EXIT_RESOURCE } else { EXIT_MISMATCH },
        ),
    };
    Ok(Output { text, machine: serde_json::to_value(&outcome).expect("outcome serializes"), code })
}

fn run(cli: &Cli) -> cylbench::Result<Output> {
    let c = &cli.common;
    match &cli.command {
        Command::Gen(g) => gen(c, g),
        Command::Solve { game, structure } => solve(c, game, structure.as_deref()),
        Command::Check(ch) => check(ch),
        Command::RepSearch { structure, max_base } => rep_search(c, structure, *max_base),
        Command::Run { scenario } => {
            let opts = RunOptions {
                seed: c.seed,
                budget: (c.budget_states.is_some() || c.budget_depth.is_some()).then(|| budget(c)),
            };
            let report = run_scenario_file(scenario, &opts)?;
            Ok(Output {
                text: report.to_text(),
                machine: serde_json::to_value(&report).expect("report serializes"),
                code: report.exit_code,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    if let Some(t) = cli.common.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE as u8);
        }
    }
    let out = match run(&cli) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code_for(&e) as u8);
        }
    };
    let body = match cli.common.format {
        Format::Text => out.text,
        Format::Machine => serde_json::to_string_pretty(&out.machine).expect("json prints") + "\n",
    };
    let written = match &cli.common.out {
        Some(p) => fs::write(p, body),
        None => {
            print!("{body}");
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_USAGE as u8);
    }
    ExitCode::from(out.code as u8)
}
