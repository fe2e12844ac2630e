use serde::Serialize;

use super::netgame::{NetGame, NetMode, NetPos};
use super::solver::{Budget, Minimax, Stats, Winner};
use crate::kernel::CaAtomStructure;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LyndonRow {
    pub k: u32,
    pub winner: Winner,
}

/// Winners of the `k`-round bounded game for `k = 0..=K` on `m` nodes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LyndonTable {
    pub nodes: usize,
    pub rows: Vec<LyndonRow>,
    pub stats: Stats,
}

impl LyndonTable {
    /// Least `k` from which ∀ wins.
    pub fn threshold(&self) -> Option<u32> {
        self.rows.iter().find(|r| r.winner == Winner::Forall).map(|r| r.k)
    }

    pub fn is_monotone(&self) -> bool {
        let mut seen_forall = false;
        for r in &self.rows {
            match r.winner {
                Winner::Forall => seen_forall = true,
                Winner::Exists if seen_forall => return false,
                _ => {}
            }
        }
        true
    }
}

pub fn check_lyndon_up_to(ca: &CaAtomStructure, max_k: u32, m: usize, budget: Budget) -> Result<LyndonTable> {
    let game = NetGame::new(ca, m, NetMode::Bounded)?;
    let mut mm = Minimax::new(&game, budget);
    let mut rows = Vec::new();
    let mut failed = false;
    for k in 0..=max_k {
        let winner = if failed {
            Winner::Unknown
        } else {
            match mm.exists_wins(&NetPos::Start, k) {
                Ok(true) => Winner::Exists,
                Ok(false) => Winner::Forall,
                Err(_) => {
                    failed = true;
                    Winner::Unknown
                }
            }
        };
        rows.push(LyndonRow { k, winner });
    }
    let table = LyndonTable { nodes: m, rows, stats: mm.stats().clone() };
    if !table.is_monotone() {
        return Err(Error::structural(format!("round monotonicity violated on {m} nodes")));
    }
    Ok(table)
}
