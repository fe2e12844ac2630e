use std::collections::{BTreeSet, HashMap};
use std::fmt::Debug;
use std::hash::Hash;

use super::netgame::{witness, NetGame, NetMode, NetMove, NetPos};
use super::network::Network;
use super::transcript::{Step, Transcript};
use crate::kernel::AtomId;
use crate::rainbow::{Colour, ColouredGraph, Preset, RainbowStructure};
use crate::{Error, Result};

/// A deterministic strategy for ∀ in a network game.
pub trait Script {
    type State: Clone + Eq + Hash + Debug;

    fn opening(&self) -> Result<(AtomId, Self::State)>;
    /// ∀'s next move, or `None` when the script has nothing left to demand.
    fn next(&self, net: &Network, state: &Self::State) -> Result<Option<(NetMove, Self::State)>>;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScriptOutcome {
    /// ∀ wins against every ∃ line in at most this many rounds, counting the opening.
    ForallWinsWithin(u32),
    /// ∃ survives the script up to `round`; the transcript is her surviving line.
    RefutedAt { round: u32, position: Network, transcript: Transcript },
}

/// Cones with a common base and fresh tints, the base fixed by the opening atom.
pub struct ConeScript<'a> {
    rs: &'a RainbowStructure,
    tints: Vec<i32>,
    mode: NetMode,
    m: usize,
    repeat: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConeState {
    pub base: Vec<u8>,
    /// Apex nodes, oldest first.
    pub apexes: Vec<u8>,
    pending: Option<AtomId>,
    next: usize,
}

impl<'a> ConeScript<'a> {
    pub fn new(rs: &'a RainbowStructure, game: &NetGame<'_>) -> Result<Self> {
        let tints: Vec<i32> = match rs.sig.preset() {
            Preset::OrderedZn { .. } => rs.sig.green_supers().iter().copied().filter(|&t| t <= 0).rev().collect(),
            _ => rs.sig.green_supers().to_vec(),
        };
        if tints.len() < 2 {
            return Err(Error::usage("cone script needs at least two green superscripts"));
        }
        Ok(ConeScript { rs, tints, mode: game.mode(), m: game.nodes(), repeat: false })
    }

    /// The weak variant: after the opening, every demand repeats the same tint.
    pub fn repeating(mut self) -> Self {
        self.repeat = true;
        self
    }

    pub fn tints(&self) -> &[i32] {
        &self.tints
    }

    fn cone_atom(&self, base_edges: &[(usize, usize, crate::rainbow::ColourId)], tint: i32) -> Result<AtomId> {
        let sig = &self.rs.sig;
        let n = sig.dimension();
        let mut g = ColouredGraph::new(n);
        for &(p, q, c) in base_edges {
            g.set(sig, p, q, c);
        }
        g.set(sig, 0, n - 1, sig.id(Colour::GreenSuper(tint))?);
        for j in 1..n - 1 {
            g.set(sig, j, n - 1, sig.id(Colour::Green(j as u8))?);
        }
        self.rs
            .atom_of_graph(&g)
            .ok_or_else(|| Error::structural(format!("no cone atom with tint {tint}")))
    }
}

impl Script for ConeScript<'_> {
    type State = ConeState;

    fn opening(&self) -> Result<(AtomId, ConeState)> {
        let sig = &self.rs.sig;
        let n = sig.dimension();
        let w0 = sig.id(Colour::White(0))?;
        let mut edges = Vec::new();
        for p in 0..n - 1 {
            for q in p + 1..n - 1 {
                edges.push((p, q, w0));
            }
        }
        let a = self.cone_atom(&edges, self.tints[0])?;
        let state = ConeState {
            base: (0..n as u8 - 1).collect(),
            apexes: vec![n as u8 - 1],
            pending: None,
            next: 1,
        };
        Ok((a, state))
    }

    fn next(&self, net: &Network, state: &ConeState) -> Result<Option<(NetMove, ConeState)>> {
        let n = self.rs.sig.dimension();
        let mut st = state.clone();
        st.apexes.retain(|&v| net.has_node(v));
        if let Some(a) = st.pending.take() {
            let mut t = st.base.clone();
            t.push(0);
            if let Some(z) = witness(net, &t, n - 1, a) {
                st.apexes.retain(|&v| v != z);
                st.apexes.push(z);
            }
        }
        let Some(&last) = st.apexes.last() else {
            return Ok(None);
        };
        let tint = if self.repeat {
            self.tints[1]
        } else if st.next < self.tints.len() {
            self.tints[st.next]
        } else {
            return Ok(None);
        };
        let mut tuple = st.base.clone();
        tuple.push(last);
        let cur = net.get(&tuple).ok_or_else(|| Error::usage("cone base is not labelled"))?;
        let mut edges = Vec::new();
        for p in 0..n - 1 {
            for q in p + 1..n - 1 {
                if let Some(c) = self.rs.edge(cur, p, q) {
                    edges.push((p, q, c));
                }
            }
        }
        let atom = self.cone_atom(&edges, tint)?;
        let target = match self.mode {
            NetMode::Bounded => None,
            NetMode::Reuse => match (0..self.m as u8).find(|&v| !net.has_node(v)) {
                Some(_) => None,
                None => st.apexes.iter().copied().find(|&v| v != last),
            },
        };
        if self.mode == NetMode::Reuse && target.is_none() && net.node_count() >= self.m {
            return Ok(None);
        }
        st.pending = Some(atom);
        if !self.repeat {
            st.next += 1;
        }
        Ok(Some((NetMove::Cyl { tuple, coord: n - 1, atom, target }, st)))
    }
}

type Verdict = std::result::Result<u32, (u32, Network, Vec<Step>)>;

/// Explore every ∃ answer against the script, up to `depth` rounds in total.
pub fn verify_script<S: Script>(game: &NetGame<'_>, script: &S, depth: u32) -> Result<ScriptOutcome> {
    let ca = game.structure();
    let (a, state) = script.opening()?;
    let opening = NetMove::Pick(a);
    let answers: BTreeSet<Network> = game.responses(&NetPos::Start, &opening)?.into_iter().collect();
    if answers.is_empty() {
        return Ok(ScriptOutcome::ForallWinsWithin(1));
    }
    let mut memo = HashMap::new();
    let mut worst = 0;
    for net in answers {
        match explore(game, script, &net, &state, 1, depth, &mut memo)? {
            Ok(d) => worst = worst.max(d),
            Err((round, position, mut steps)) => {
                steps.insert(0, Step { round: 0, forall: opening.clone(), exists: Some(net) });
                return Ok(ScriptOutcome::RefutedAt {
                    round,
                    position,
                    transcript: Transcript { dimension: ca.dimension(), nodes: game.nodes(), steps },
                });
            }
        }
    }
    Ok(ScriptOutcome::ForallWinsWithin(1 + worst))
}

fn explore<S: Script>(
    game: &NetGame<'_>,
    script: &S,
    net: &Network,
    state: &S::State,
    round: u32,
    depth: u32,
    memo: &mut HashMap<(Network, S::State, u32), Verdict>,
) -> Result<Verdict> {
    let key = (net.clone(), state.clone(), round);
    if let Some(v) = memo.get(&key) {
        return Ok(v.clone());
    }
    let verdict = if round >= depth {
        Err((round, net.clone(), Vec::new()))
    } else {
        match script.next(net, state)? {
            None => Err((round, net.clone(), Vec::new())),
            Some((mv, next_state)) => {
                let pos = NetPos::Net(net.clone());
                let answers: BTreeSet<Network> = game
                    .responses(&pos, &mv)
                    .map_err(|e| match e {
                        Error::Usage(m) => {
                            Error::usage(format!("{m} (position {})", net.describe(game.structure())))
                        }
                        other => other,
                    })?
                    .into_iter()
                    .collect();
                let mut worst = 0;
                let mut refuted = None;
                for ans in answers {
                    match explore(game, script, &ans, &next_state, round + 1, depth, memo)? {
                        Ok(d) => worst = worst.max(d),
                        Err((r, p, mut steps)) => {
                            steps.insert(0, Step { round, forall: mv.clone(), exists: Some(ans) });
                            refuted = Some((r, p, steps));
                            break;
                        }
                    }
                }
                match refuted {
                    Some(r) => Err(r),
                    None => Ok(1 + worst),
                }
            }
        }
    };
    memo.insert(key, verdict.clone());
    Ok(verdict)
}
