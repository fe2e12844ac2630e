use serde::{Deserialize, Serialize};

use super::ef::{EfGame, FiniteStructure};
use super::history::{HistoryGame, HistoryKind};
use super::netgame::{NetGame, NetMode};
use super::solver::{replay, solve_rounds, solve_safety, BoundedGame, Budget, SolveResult, Stats, Winner};
use crate::kernel::CaAtomStructure;
use crate::rainbow::signature::call_syntax;
use crate::{Error, Result};

/// Which game to play.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "variant")]
pub enum GameVariant {
    Gmk { m: usize, k: u32 },
    /// Unbounded game with node reuse; `rounds` caps the explored depth.
    Fm { m: usize, rounds: Option<u32> },
    Hmk { m: usize, k: u32 },
    /// `nodes` defaults to twice the dimension.
    Gca { k: u32, nodes: Option<usize> },
    #[serde(rename = "EF")]
    Ef { p: usize, r: u32, a: FiniteStructure, b: FiniteStructure },
}

impl GameVariant {
    pub fn label(&self) -> String {
        match self {
            GameVariant::Gmk { m, k } => format!("Gmk({m},{k})"),
            GameVariant::Fm { m, .. } => format!("Fm({m})"),
            GameVariant::Hmk { m, k } => format!("Hmk({m},{k})"),
            GameVariant::Gca { k, .. } => format!("Gca({k})"),
            GameVariant::Ef { p, r, .. } => format!("EF({p},{r})"),
        }
    }

    pub fn needs_carrier(&self) -> bool {
        !matches!(self, GameVariant::Ef { .. })
    }
}

impl std::str::FromStr for GameVariant {
    type Err = Error;

    /// `Gmk(m,k)`, `Fm(m)`, `Fm(m,rounds)`, `Hmk(m,k)`, `Gca(k)`, `Gca(k,nodes)`,
    /// `EF(p,r,a,b)` with `a`, `b` complete graphs on that many vertices, or the JSON form.
    fn from_str(s: &str) -> Result<Self> {
        if s.trim_start().starts_with('{') {
            return serde_json::from_str(s).map_err(|e| Error::usage(format!("bad game spec: {e}")));
        }
        let bad = || Error::usage(format!("unknown game `{s}`"));
        let (name, args) = call_syntax(s).ok_or_else(bad)?;
        if args.iter().any(|&a| a < 0) {
            return Err(bad());
        }
        let a: Vec<usize> = args.iter().map(|&a| a as usize).collect();
        match (name, a.as_slice()) {
            ("Gmk", &[m, k]) => Ok(GameVariant::Gmk { m, k: k as u32 }),
            ("Fm", &[m]) => Ok(GameVariant::Fm { m, rounds: None }),
            ("Fm", &[m, r]) => Ok(GameVariant::Fm { m, rounds: Some(r as u32) }),
            ("Hmk", &[m, k]) => Ok(GameVariant::Hmk { m, k: k as u32 }),
            ("Gca", &[k]) => Ok(GameVariant::Gca { k: k as u32, nodes: None }),
            ("Gca", &[k, nodes]) => Ok(GameVariant::Gca { k: k as u32, nodes: Some(nodes) }),
            ("EF", &[p, r, x, y]) => Ok(GameVariant::Ef {
                p,
                r: r as u32,
                a: FiniteStructure::complete(x),
                b: FiniteStructure::complete(y),
            }),
            _ => Err(bad()),
        }
    }
}

/// Outcome of a solve with its certificate checked by replay.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SolveReport {
    pub game: String,
    pub winner: Winner,
    pub rounds: u32,
    pub forall_rounds: Option<u32>,
    pub certificate: String,
    pub certificate_entries: usize,
    /// `None` when there is nothing to replay.
    pub replayed: Option<bool>,
    pub stats: Stats,
}

impl SolveReport {
    fn from_result<G: BoundedGame>(game: &G, label: String, r: &SolveResult<G::Pos>) -> Self {
        let replayed = (r.winner != Winner::Unknown).then(|| replay(game, r).is_ok());
        SolveReport {
            game: label,
            winner: r.winner,
            rounds: r.rounds,
            forall_rounds: r.forall_rounds,
            certificate: r.certificate.kind().to_string(),
            certificate_entries: r.certificate.entries(),
            replayed,
            stats: r.stats.clone(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{}: {:?}", self.game, self.winner);
        if let Some(d) = self.forall_rounds {
            s.push_str(&format!(" (forall within {d} rounds)"));
        }
        s.push_str(&format!(
            "\ncertificate {} entries {} replayed {}\nstates {} memo hits {} depth {}",
            self.certificate,
            self.certificate_entries,
            self.replayed.map_or("n/a".to_string(), |b| b.to_string()),
            self.stats.states_visited,
            self.stats.memo_hits,
            self.stats.depth_reached
        ));
        if let Some(f) = self.stats.frontier {
            s.push_str(&format!(" frontier {f}"));
        }
        s
    }
}

pub fn solve_game(carrier: Option<&CaAtomStructure>, variant: &GameVariant, budget: Budget) -> Result<SolveReport> {
    let label = variant.label();
    let ca = || carrier.ok_or_else(|| Error::usage(format!("{label} needs a carrier structure")));
    match variant {
        GameVariant::Gmk { m, k } => {
            let g = NetGame::new(ca()?, *m, NetMode::Bounded)?;
            Ok(SolveReport::from_result(&g, label, &solve_rounds(&g, *k, budget)))
        }
        GameVariant::Fm { m, rounds } => {
            let g = NetGame::new(ca()?, *m, NetMode::Reuse)?;
            let b = Budget { depth: rounds.unwrap_or(budget.depth), ..budget };
            Ok(SolveReport::from_result(&g, label, &solve_safety(&g, b)))
        }
        GameVariant::Hmk { m, k } => {
            let g = HistoryGame::new(ca()?, *m, HistoryKind::Hyper)?;
            Ok(SolveReport::from_result(&g, label, &solve_rounds(&g, *k, budget)))
        }
        GameVariant::Gca { k, nodes } => {
            let c = ca()?;
            let g = HistoryGame::new(c, nodes.unwrap_or(2 * c.dimension()), HistoryKind::Ca)?;
            Ok(SolveReport::from_result(&g, label, &solve_rounds(&g, *k, budget)))
        }
        GameVariant::Ef { p, r, a, b } => {
            let g = EfGame::new(*p, a, b)?;
            Ok(SolveReport::from_result(&g, label, &solve_rounds(&g, *r, budget)))
        }
    }
}
