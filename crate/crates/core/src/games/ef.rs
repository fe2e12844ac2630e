use serde::{Deserialize, Serialize};

use super::solver::BoundedGame;
use crate::monk::Graph;
use crate::{Error, Result};

/// Finite structures the pebble game runs on.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum FiniteStructure {
    /// Undirected loop-free graph given by its edges on `0..order`.
    Graph { order: usize, edges: Vec<(usize, usize)> },
    /// Integers `lo..=hi` under `<`.
    Order { lo: i64, hi: i64 },
}

impl FiniteStructure {
    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        FiniteStructure::Graph { order: n, edges }
    }

    pub fn from_graph(g: &Graph) -> Self {
        FiniteStructure::Graph { order: g.order(), edges: g.edges() }
    }

    pub fn size(&self) -> usize {
        match self {
            FiniteStructure::Graph { order, .. } => *order,
            FiniteStructure::Order { lo, hi } => (hi - lo + 1).max(0) as usize,
        }
    }

    fn compile(&self) -> Result<Compiled> {
        let size = self.size();
        let mut rel = vec![false; size * size];
        match self {
            FiniteStructure::Graph { order, edges } => {
                for &(u, v) in edges {
                    if u >= *order || v >= *order || u == v {
                        return Err(Error::usage(format!("bad edge ({u},{v})")));
                    }
                    rel[u * size + v] = true;
                    rel[v * size + u] = true;
                }
            }
            FiniteStructure::Order { .. } => {
                for u in 0..size {
                    for v in u + 1..size {
                        rel[u * size + v] = true;
                    }
                }
            }
        }
        Ok(Compiled { size, rel })
    }
}

struct Compiled {
    size: usize,
    rel: Vec<bool>,
}

impl Compiled {
    fn r(&self, u: u32, v: u32) -> bool {
        self.rel[u as usize * self.size + v as usize]
    }
}

/// Forth pebble game: ∀ places a pebble on `A` (lifting one when all `p` are down),
/// ∃ answers on `B` keeping the pebbled map a partial isomorphism.
pub struct EfGame {
    pebbles: usize,
    a: Compiled,
    b: Compiled,
}

/// Placed pebble pairs, sorted.
pub type EfPos = Vec<(u32, u32)>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EfMove {
    pub lift: Option<usize>,
    pub element: u32,
}

impl EfGame {
    pub fn new(pebbles: usize, a: &FiniteStructure, b: &FiniteStructure) -> Result<Self> {
        if pebbles == 0 {
            return Err(Error::usage("pebble count must be positive"));
        }
        Ok(EfGame { pebbles, a: a.compile()?, b: b.compile()? })
    }

    pub fn moves(&self, p: &EfPos) -> Vec<EfMove> {
        let mut lifts: Vec<Option<usize>> = Vec::new();
        if p.len() < self.pebbles {
            lifts.push(None);
        }
        for (i, pair) in p.iter().enumerate() {
            if i == 0 || p[i - 1] != *pair {
                lifts.push(Some(i));
            }
        }
        lifts
            .into_iter()
            .flat_map(|lift| (0..self.a.size as u32).map(move |element| EfMove { lift, element }))
            .collect()
    }

    fn answers(&self, p: &EfPos, mv: EfMove) -> Vec<EfPos> {
        let mut rest = p.clone();
        if let Some(i) = mv.lift {
            rest.remove(i);
        }
        let x = mv.element;
        (0..self.b.size as u32)
            .filter(|&y| {
                rest.iter().all(|&(u, v)| {
                        (u == x) == (v == y) && self.a.r(u, x) == self.b.r(v, y) && self.a.r(x, u) == self.b.r(y, v)
                    })
            })
            .map(|y| {
                let mut q = rest.clone();
                q.push((x, y));
                q.sort_unstable();
                q
            })
            .collect()
    }
}

impl BoundedGame for EfGame {
    type Pos = EfPos;

    fn start(&self) -> EfPos {
        Vec::new()
    }

    fn move_count(&self, p: &EfPos) -> usize {
        self.moves(p).len()
    }

    fn replies(&self, p: &EfPos, mv: usize) -> Result<Vec<EfPos>> {
        Ok(self.answers(p, self.moves(p)[mv]))
    }

    fn describe_move(&self, p: &EfPos, mv: usize) -> String {
        let m = self.moves(p)[mv];
        match m.lift {
            Some(i) => format!("lift pebble on {:?}, place on {}", p[i], m.element),
            None => format!("place on {}", m.element),
        }
    }

    fn describe_pos(&self, p: &EfPos) -> String {
        format!("{p:?}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::solver::{solve_rounds, Budget, Winner};

    #[test]
    fn clique_gap_needs_enough_pebbles() {
        let g = EfGame::new(4, &FiniteStructure::complete(4), &FiniteStructure::complete(3)).unwrap();
        let r = solve_rounds(&g, 5, Budget::default());
        assert_eq!(r.winner, Winner::Forall);
        let g = EfGame::new(3, &FiniteStructure::complete(4), &FiniteStructure::complete(3)).unwrap();
        assert_eq!(solve_rounds(&g, 5, Budget::default()).winner, Winner::Exists);
    }

    #[test]
    fn orders_of_different_length() {
        let a = FiniteStructure::Order { lo: -2, hi: 2 };
        let b = FiniteStructure::Order { lo: 0, hi: 3 };
        let g = EfGame::new(2, &a, &b).unwrap();
        assert_eq!(solve_rounds(&g, 4, Budget::default()).winner, Winner::Forall);
    }
}
