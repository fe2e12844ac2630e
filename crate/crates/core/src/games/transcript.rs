use std::fmt::Write as _;

use super::netgame::{NetGame, NetMove, NetPos};
use super::network::{Network, MAX_NODES};
use crate::kernel::CaAtomStructure;
use crate::{Error, Result};

/// One round: ∀'s move and ∃'s answer (`None` when she had none).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub round: u32,
    pub forall: NetMove,
    pub exists: Option<Network>,
}

/// A played line of a network game.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transcript {
    pub dimension: usize,
    pub nodes: usize,
    pub steps: Vec<Step>,
}

fn tuple_text(t: &[u8]) -> String {
    t.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(".")
}

fn parse_tuple(s: &str, at: &str) -> Result<Vec<u8>> {
    s.split('.')
        .map(|x| x.parse::<u8>().map_err(|_| Error::format(at, format!("bad node `{x}`"))))
        .collect()
}

impl Transcript {
    /// One line per move:
    /// `R pick ATOM`, `R cyl TUPLE COORD ATOM TARGET|-`, then `R net N0,N1 TUPLE=ATOM ...` or `R stuck`.
    pub fn to_text(&self, ca: &CaAtomStructure) -> String {
        let mut s = format!("transcript dim {} nodes {}\n", self.dimension, self.nodes);
        for step in &self.steps {
            match &step.forall {
                NetMove::Pick(a) => writeln!(s, "{} pick {}", step.round, ca.name(*a)),
                NetMove::Cyl { tuple, coord, atom, target } => writeln!(
                    s,
                    "{} cyl {} {} {} {}",
                    step.round,
                    tuple_text(tuple),
                    coord,
                    ca.name(*atom),
                    target.map_or("-".into(), |k| k.to_string())
                ),
            }
            .expect("writing to a string");
            match &step.exists {
                None => writeln!(s, "{} stuck", step.round).expect("writing to a string"),
                Some(net) => {
                    let nodes: Vec<String> = net.nodes().iter().map(|v| v.to_string()).collect();
                    write!(s, "{} net {}", step.round, nodes.join(",")).expect("writing to a string");
                    for t in net.tuples() {
                        if let Some(a) = net.get(&t) {
                            write!(s, " {}={}", tuple_text(&t), ca.name(a)).expect("writing to a string");
                        }
                    }
                    s.push('\n');
                }
            }
        }
        s
    }

    pub fn parse(text: &str, ca: &CaAtomStructure) -> Result<Transcript> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, head) = lines.next().ok_or_else(|| Error::format("line 1", "empty transcript"))?;
        let h: Vec<&str> = head.split_whitespace().collect();
        let (dimension, nodes) = match h.as_slice() {
            ["transcript", "dim", d, "nodes", m] => (
                d.parse().map_err(|_| Error::format("line 1", "bad dimension"))?,
                m.parse().map_err(|_| Error::format("line 1", "bad node bound"))?,
            ),
            _ => return Err(Error::format("line 1", "expected `transcript dim N nodes M`")),
        };
        let atom = |name: &str, at: &str| {
            ca.atom(name).ok_or_else(|| Error::format(at, format!("unknown atom `{name}`")))
        };
        let mut steps: Vec<Step> = Vec::new();
        let mut pending: Option<(u32, NetMove)> = None;
        for (i, line) in lines {
            let at = format!("line {}", i + 1);
            let w: Vec<&str> = line.split_whitespace().collect();
            let round: u32 = w
                .first()
                .and_then(|r| r.parse().ok())
                .ok_or_else(|| Error::format(at.as_str(), "expected a round number"))?;
            match w.get(1).copied() {
                Some("pick") if w.len() == 3 => pending = Some((round, NetMove::Pick(atom(w[2], &at)?))),
                Some("cyl") if w.len() == 6 => {
                    let target = if w[5] == "-" {
                        None
                    } else {
                        Some(w[5].parse().map_err(|_| Error::format(at.as_str(), "bad target"))?)
                    };
                    pending = Some((
                        round,
                        NetMove::Cyl {
                            tuple: parse_tuple(w[2], &at)?,
                            coord: w[3].parse().map_err(|_| Error::format(at.as_str(), "bad coordinate"))?,
                            atom: atom(w[4], &at)?,
                            target,
                        },
                    ));
                }
                Some("stuck") | Some("net") => {
                    let (r, forall) =
                        pending.take().ok_or_else(|| Error::format(at.as_str(), "answer without a move"))?;
                    if r != round {
                        return Err(Error::format(at.as_str(), "answer round differs from move round"));
                    }
                    let exists = if w[1] == "stuck" {
                        None
                    } else {
                        let mut net = Network::new(dimension, nodes);
                        if let Some(list) = w.get(2).filter(|s| !s.contains('=')) {
                            for v in list.split(',').filter(|s| !s.is_empty()) {
                                net.add_node(v.parse().map_err(|_| Error::format(at.as_str(), "bad node"))?);
                            }
                        }
                        for cell in w.iter().skip(2).filter(|s| s.contains('=')) {
                            let (t, a) = cell.split_once('=').expect("contains =");
                            net.set(&parse_tuple(t, &at)?, atom(a, &at)?);
                        }
                        Some(net)
                    };
                    steps.push(Step { round, forall, exists });
                }
                _ => return Err(Error::format(at.as_str(), "unrecognized transcript line")),
            }
        }
        if pending.is_some() {
            return Err(Error::format("end of input", "move without an answer"));
        }
        Ok(Transcript { dimension, nodes, steps })
    }

    /// Check every answer is legal; returns the number of rounds replayed.
    pub fn replay(&self, game: &NetGame<'_>) -> Result<usize> {
        let mut pos = NetPos::Start;
        for (k, step) in self.steps.iter().enumerate() {
            let answers = game.responses(&pos, &step.forall)?;
            match &step.exists {
                Some(net) => {
                    if !answers.contains(net) {
                        return Err(Error::structural(format!("round {}: answer is not legal", step.round)));
                    }
                    pos = NetPos::Net(net.clone());
                }
                None => {
                    if !answers.is_empty() {
                        return Err(Error::structural(format!("round {}: ∃ had an answer", step.round)));
                    }
                    if k + 1 != self.steps.len() {
                        return Err(Error::structural("moves after ∃ was stuck"));
                    }
                }
            }
        }
        Ok(self.steps.len())
    }
}

/// `network dim N nodes M`, then whitespace-separated `TUPLE=ATOM` cells.
pub fn network_to_text(net: &Network, ca: &CaAtomStructure) -> String {
    let mut s = format!("network dim {} nodes {}\n", net.dim(), net.space());
    for t in net.tuples() {
        if let Some(a) = net.get(&t) {
            s.push_str(&format!("{}={}\n", tuple_text(&t), ca.name(a)));
        }
    }
    s
}

pub fn parse_network(text: &str, ca: &CaAtomStructure) -> Result<Network> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, head) = lines.next().ok_or_else(|| Error::format("line 1", "empty network file"))?;
    let (dim, space) = match head.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["network", "dim", d, "nodes", m] => (
            d.parse::<usize>().map_err(|_| Error::format("line 1", "bad dimension"))?,
            m.parse::<usize>().map_err(|_| Error::format("line 1", "bad node bound"))?,
        ),
        _ => return Err(Error::format("line 1", "expected `network dim N nodes M`")),
    };
    if dim != ca.dimension() {
        return Err(Error::format("line 1", format!("dimension {dim} differs from the structure's {}", ca.dimension())));
    }
    if space == 0 || space > MAX_NODES {
        return Err(Error::format("line 1", format!("node bound must be in 1..={MAX_NODES}")));
    }
    let mut net = Network::new(dim, space);
    for (i, line) in lines {
        let at = format!("line {}", i + 1);
        for cell in line.split_whitespace() {
            let (t, a) = cell
                .split_once('=')
                .ok_or_else(|| Error::format(at.as_str(), format!("expected TUPLE=ATOM, got `{cell}`")))?;
            let t = parse_tuple(t, &at)?;
            if t.len() != dim || t.iter().any(|&v| v as usize >= space) {
                return Err(Error::format(at.as_str(), format!("tuple `{cell}` does not fit dim {dim} nodes {space}")));
            }
            let a = ca.atom(a).ok_or_else(|| Error::format(at.as_str(), format!("unknown atom `{a}`")))?;
            net.set(&t, a);
        }
    }
    Ok(net)
}
