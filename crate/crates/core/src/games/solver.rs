use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A two-player game where ∀ moves and ∃ answers, ∃ losing when she has no answer.
pub trait BoundedGame: Sync {
    type Pos: Clone + Eq + Hash + Ord + Debug + Send + Sync;

    fn start(&self) -> Self::Pos;
    fn move_count(&self, p: &Self::Pos) -> usize;
    /// ∃'s legal answers to ∀'s move `mv`, sorted and deduplicated. Empty means ∃ is stuck.
    fn replies(&self, p: &Self::Pos, mv: usize) -> Result<Vec<Self::Pos>>;
    /// Answers to every move, in move order.
    fn all_replies(&self, p: &Self::Pos) -> Result<Vec<Vec<Self::Pos>>> {
        (0..self.move_count(p)).into_par_iter().map(|mv| self.replies(p, mv)).collect()
    }
    fn describe_move(&self, p: &Self::Pos, mv: usize) -> String;
    fn describe_pos(&self, p: &Self::Pos) -> String;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Winner {
    Exists,
    Forall,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct Budget {
    /// Distinct positions stored.
    pub states: u64,
    /// Round bound for unbounded games.
    pub depth: u32,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { states: 2_000_000, depth: 64 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Stats {
    pub states_visited: u64,
    pub memo_hits: u64,
    pub depth_reached: u32,
    pub frontier: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate<P> {
    None,
    /// ∃'s answer keyed by (position, rounds left, ∀ move).
    Exists(BTreeMap<(P, u32, usize), P>),
    /// ∀'s move keyed by (position, rounds left).
    Forall(BTreeMap<(P, u32), usize>),
    /// ∃'s answer keyed by (position, ∀ move), closed under all ∀ moves.
    ExistsSafety(BTreeMap<(P, usize), P>),
    /// ∀'s move and remaining rounds keyed by position.
    ForallSafety(BTreeMap<P, (usize, u32)>),
}

impl<P> Certificate<P> {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::None => "none",
            Certificate::Exists(_) => "exists",
            Certificate::Forall(_) => "forall",
            Certificate::ExistsSafety(_) => "existsSafety",
            Certificate::ForallSafety(_) => "forallSafety",
        }
    }

    pub fn entries(&self) -> usize {
        match self {
            Certificate::None => 0,
            Certificate::Exists(t) => t.len(),
            Certificate::Forall(t) => t.len(),
            Certificate::ExistsSafety(t) => t.len(),
            Certificate::ForallSafety(t) => t.len(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolveResult<P> {
    pub winner: Winner,
    /// Rounds the game was solved for; for safety games the explored bound.
    pub rounds: u32,
    /// Least number of rounds in which ∀ wins, when known.
    pub forall_rounds: Option<u32>,
    pub certificate: Certificate<P>,
    pub stats: Stats,
}

type Replies<P> = Arc<Vec<Arc<Vec<P>>>>;

struct Entry<P> {
    exists_upto: u32,
    forall_from: u32,
    replies: Option<Replies<P>>,
}

/// Memoized minimax for the `k`-round game. The memo is kept across calls.
pub struct Minimax<'g, G: BoundedGame> {
    game: &'g G,
    memo: HashMap<G::Pos, Entry<G::Pos>>,
    /// Positions held in cached reply lists; they count against the budget too.
    held: u64,
    budget: Budget,
    stats: Stats,
}

impl<'g, G: BoundedGame> Minimax<'g, G> {
    pub fn new(game: &'g G, budget: Budget) -> Self {
        Minimax { game, memo: HashMap::new(), held: 0, budget, stats: Stats::default() }
    }

    pub fn stats(&self) -> &Stats {
        &self.stats
    }

    fn replies(&mut self, p: &G::Pos) -> Result<Replies<G::Pos>> {
        if let Some(r) = self.memo.get(p).and_then(|e| e.replies.clone()) {
            return Ok(r);
        }
        let out: Replies<G::Pos> = Arc::new(self.game.all_replies(p)?.into_iter().map(Arc::new).collect());
        self.held += out.iter().map(|r| r.len() as u64).sum::<u64>();
        if self.memo.len() as u64 + self.held > self.budget.states {
            return Err(Error::resource("game positions", self.budget.states));
        }
        self.touch(p)?.replies = Some(out.clone());
        Ok(out)
    }

    fn touch(&mut self, p: &G::Pos) -> Result<&mut Entry<G::Pos>> {
        if !self.memo.contains_key(p) {
            if self.memo.len() as u64 >= self.budget.states {
                return Err(Error::resource("game positions", self.budget.states));
            }
            self.stats.states_visited += 1;
            self.memo.insert(
                p.clone(),
                Entry { exists_upto: 0, forall_from: u32::MAX, replies: None },
            );
        }
        Ok(self.memo.get_mut(p).expect("just inserted"))
    }

    /// Whether ∃ survives `r` more rounds from `p`.
    pub fn exists_wins(&mut self, p: &G::Pos, r: u32) -> Result<bool> {
        if r == 0 {
            return Ok(true);
        }
        if let Some(e) = self.memo.get(p) {
            if e.exists_upto >= r || e.forall_from <= r {
                self.stats.memo_hits += 1;
                return Ok(e.exists_upto >= r);
            }
        }
        self.stats.depth_reached = self.stats.depth_reached.max(r);
        let replies = self.replies(p)?;
        for rs in replies.iter() {
            let mut survived = false;
            for q in rs.iter() {
                if self.exists_wins(q, r - 1)? {
                    survived = true;
                    break;
                }
            }
            if !survived {
                let e = self.touch(p)?;
                e.forall_from = e.forall_from.min(r);
                return Ok(false);
            }
        }
        let e = self.touch(p)?;
        e.exists_upto = e.exists_upto.max(r);
        Ok(true)
    }

    /// Solve the `k`-round game from the start, with a certificate.
    pub fn solve(&mut self, k: u32) -> SolveResult<G::Pos> {
        let start = self.game.start();
        let outcome = self.exists_wins(&start, k).and_then(|w| {
            let cert = if w { self.exists_certificate(&start, k)? } else { self.forall_certificate(&start, k)? };
            Ok((w, cert))
        });
        let least = match outcome {
            Ok((false, _)) => (1..=k).find(|&j| matches!(self.exists_wins(&start, j), Ok(false))),
            _ => None,
        };
        match outcome {
            Ok((w, certificate)) => SolveResult {
                winner: if w { Winner::Exists } else { Winner::Forall },
                rounds: k,
                forall_rounds: least,
                certificate,
                stats: self.stats.clone(),
            },
            Err(_) => SolveResult {
                winner: Winner::Unknown,
                rounds: k,
                forall_rounds: None,
                certificate: Certificate::None,
                stats: self.stats.clone(),
            },
        }
    }

    fn exists_certificate(&mut self, start: &G::Pos, k: u32) -> Result<Certificate<G::Pos>> {
        let mut table = BTreeMap::new();
        let mut seen = HashSet::new();
        let mut stack = vec![(start.clone(), k)];
        while let Some((p, r)) = stack.pop() {
            if r == 0 || !seen.insert((p.clone(), r)) {
                continue;
            }
            let replies = self.replies(&p)?;
            for (mv, rs) in replies.iter().enumerate() {
                let mut chosen = None;
                for q in rs.iter() {
                    if self.exists_wins(q, r - 1)? {
                        chosen = Some(q.clone());
                        break;
                    }
                }
                let q = chosen.ok_or_else(|| Error::structural("certificate extraction lost a win"))?;
                table.insert((p.clone(), r, mv), q.clone());
                stack.push((q, r - 1));
            }
        }
        Ok(Certificate::Exists(table))
    }

    fn forall_certificate(&mut self, start: &G::Pos, k: u32) -> Result<Certificate<G::Pos>> {
        let mut table = BTreeMap::new();
        let mut seen = HashSet::new();
        let mut stack = vec![(start.clone(), k)];
        while let Some((p, r)) = stack.pop() {
            if !seen.insert((p.clone(), r)) {
                continue;
            }
            let replies = self.replies(&p)?;
            let mut chosen = None;
            'moves: for (mv, rs) in replies.iter().enumerate() {
                for q in rs.iter() {
                    if self.exists_wins(q, r - 1)? {
                        continue 'moves;
                    }
                }
                chosen = Some(mv);
                break;
            }
            let mv = chosen.ok_or_else(|| Error::structural("certificate extraction lost a win"))?;
            table.insert((p.clone(), r), mv);
            for q in replies[mv].iter() {
                stack.push((q.clone(), r - 1));
            }
        }
        Ok(Certificate::Forall(table))
    }
}

/// Solve the `k`-round game.
pub fn solve_rounds<G: BoundedGame>(game: &G, k: u32, budget: Budget) -> SolveResult<G::Pos> {
    Minimax::new(game, budget).solve(k)
}

/// Replay a certificate from the start against every opponent choice.
pub fn replay<G: BoundedGame>(game: &G, result: &SolveResult<G::Pos>) -> std::result::Result<(), String> {
    let start = game.start();
    let replies = |p: &G::Pos, mv: usize| game.replies(p, mv).map_err(|e| e.to_string());
    match &result.certificate {
        Certificate::None => Err("no certificate".into()),
        Certificate::Exists(table) => {
            let mut seen = HashSet::new();
            let mut stack = vec![(start, result.rounds)];
            while let Some((p, r)) = stack.pop() {
                if r == 0 || !seen.insert((p.clone(), r)) {
                    continue;
                }
                for mv in 0..game.move_count(&p) {
                    let q = table
                        .get(&(p.clone(), r, mv))
                        .ok_or_else(|| format!("no answer to {} at {}", game.describe_move(&p, mv), game.describe_pos(&p)))?;
                    if !replies(&p, mv)?.contains(q) {
                        return Err(format!("illegal answer to {}", game.describe_move(&p, mv)));
                    }
                    stack.push((q.clone(), r - 1));
                }
            }
            Ok(())
        }
        Certificate::Forall(table) => {
            let mut seen = HashSet::new();
            let mut stack = vec![(start, result.rounds)];
            while let Some((p, r)) = stack.pop() {
                if !seen.insert((p.clone(), r)) {
                    continue;
                }
                if r == 0 {
                    return Err(format!("∃ survives at {}", game.describe_pos(&p)));
                }
                let mv = *table.get(&(p.clone(), r)).ok_or_else(|| format!("no move at {}", game.describe_pos(&p)))?;
                if mv >= game.move_count(&p) {
                    return Err("illegal move index".into());
                }
                for q in replies(&p, mv)? {
                    stack.push((q, r - 1));
                }
            }
            Ok(())
        }
        Certificate::ExistsSafety(table) => {
            let mut seen = HashSet::new();
            let mut stack = vec![start];
            while let Some(p) = stack.pop() {
                if !seen.insert(p.clone()) {
                    continue;
                }
                for mv in 0..game.move_count(&p) {
                    let q = table.get(&(p.clone(), mv)).ok_or_else(|| format!("no answer at {}", game.describe_pos(&p)))?;
                    if !replies(&p, mv)?.contains(q) {
                        return Err("illegal answer".into());
                    }
                    stack.push(q.clone());
                }
            }
            Ok(())
        }
        Certificate::ForallSafety(table) => {
            let mut stack = vec![(start, u32::MAX)];
            while let Some((p, bound)) = stack.pop() {
                let &(mv, rank) = table.get(&p).ok_or_else(|| format!("no move at {}", game.describe_pos(&p)))?;
                if rank >= bound {
                    return Err("rank does not decrease".into());
                }
                for q in replies(&p, mv)? {
                    stack.push((q, rank));
                }
            }
            Ok(())
        }
    }
}

/// Solve the unbounded game as a safety game for ∃ over the reachable positions.
pub fn solve_safety<G: BoundedGame>(game: &G, budget: Budget) -> SolveResult<G::Pos> {
    let mut stats = Stats::default();
    let unknown = |stats: Stats| SolveResult {
        winner: Winner::Unknown,
        rounds: budget.depth,
        forall_rounds: None,
        certificate: Certificate::None,
        stats,
    };
    let start = game.start();
    let mut states = vec![start.clone()];
    let mut index: HashMap<G::Pos, usize> = HashMap::from([(start, 0)]);
    let mut edges: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
    let mut level = vec![0usize];
    let mut depth = 0;
    while !level.is_empty() {
        if depth >= budget.depth {
            stats.frontier = Some(level.len() as u64);
            stats.states_visited = states.len() as u64;
            return unknown(stats);
        }
        depth += 1;
        stats.depth_reached = depth;
        let expanded: Vec<Result<Vec<Vec<G::Pos>>>> = level
            .par_iter()
            .map(|&s| game.all_replies(&states[s]))
            .collect();
        let mut next = Vec::new();
        for (&s, res) in level.iter().zip(expanded) {
            let Ok(per_move) = res else {
                stats.frontier = Some(level.len() as u64);
                stats.states_visited = states.len() as u64;
                return unknown(stats);
            };
            let mut out = Vec::with_capacity(per_move.len());
            for rs in per_move {
                let mut ids = Vec::with_capacity(rs.len());
                for q in rs {
                    let id = match index.get(&q) {
                        Some(&id) => {
                            stats.memo_hits += 1;
                            id
                        }
                        None => {
                            if states.len() as u64 >= budget.states {
                                stats.frontier = Some((level.len() + next.len()) as u64);
                                stats.states_visited = states.len() as u64;
                                return unknown(stats);
                            }
                            let id = states.len();
                            index.insert(q.clone(), id);
                            states.push(q);
                            edges.push(Vec::new());
                            next.push(id);
                            id
                        }
                    };
                    ids.push(id);
                }
                out.push(ids);
            }
            edges[s] = out;
        }
        level = next;
    }
    stats.states_visited = states.len() as u64;

    // Attractor ranks: least number of rounds in which ∀ forces a stuck position.
    let inf = u32::MAX;
    let mut rank = vec![inf; states.len()];
    let mut choice = vec![0usize; states.len()];
    loop {
        let mut changed = false;
        for s in 0..states.len() {
            for (mv, qs) in edges[s].iter().enumerate() {
                let worst = qs.iter().map(|&q| rank[q]).max().unwrap_or(0);
                let r = worst.saturating_add(1);
                if r < rank[s] {
                    rank[s] = r;
                    choice[s] = mv;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    if rank[0] == inf {
        let mut table = BTreeMap::new();
        for s in 0..states.len() {
            if rank[s] != inf {
                continue;
            }
            for (mv, qs) in edges[s].iter().enumerate() {
                let q = qs.iter().copied().find(|&q| rank[q] == inf).expect("safe position has a safe answer");
                table.insert((states[s].clone(), mv), states[q].clone());
            }
        }
        SolveResult {
            winner: Winner::Exists,
            rounds: budget.depth,
            forall_rounds: None,
            certificate: Certificate::ExistsSafety(table),
            stats,
        }
    } else {
        let mut table = BTreeMap::new();
        let mut stack = vec![0usize];
        while let Some(s) = stack.pop() {
            if table.contains_key(&states[s]) {
                continue;
            }
            table.insert(states[s].clone(), (choice[s], rank[s]));
            stack.extend(edges[s][choice[s]].iter().copied());
        }
        SolveResult {
            winner: Winner::Forall,
            rounds: rank[0],
            forall_rounds: Some(rank[0]),
            certificate: Certificate::ForallSafety(table),
            stats,
        }
    }
}

/// Least `k ≤ max` in which ∀ wins, sharing one memo.
pub fn least_forall_rounds<G: BoundedGame>(game: &G, max: u32, budget: Budget) -> Result<Option<u32>> {
    let mut mm = Minimax::new(game, budget);
    let start = game.start();
    for k in 0..=max {
        if !mm.exists_wins(&start, k)? {
            return Ok(Some(k));
        }
    }
    Ok(None)
}
