use std::collections::HashMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type ColourId = u16;

/// Edge colours of a rainbow signature.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Colour {
    /// `g_i`, `1 <= i < n-1`.
    Green(u8),
    /// `g_0^t`.
    GreenSuper(i32),
    /// `w_i`, `i <= n-2`.
    White(u8),
    /// `r_ij` read from the first node to the second (`r_ji` the other way), optional superscript.
    Red { i: u32, j: u32, sup: Option<u32> },
    /// `r_i` in single-index mode.
    SingleRed(u32),
}

impl Colour {
    pub fn is_green(self) -> bool {
        matches!(self, Colour::Green(_) | Colour::GreenSuper(_))
    }

    pub fn is_red(self) -> bool {
        matches!(self, Colour::Red { .. } | Colour::SingleRed(_))
    }

    /// The same edge read in the other direction.
    pub fn reversed(self) -> Colour {
        match self {
            Colour::Red { i, j, sup } => Colour::Red { i: j, j: i, sup },
            c => c,
        }
    }

    /// Drop a red superscript.
    pub fn base(self) -> Colour {
        match self {
            Colour::Red { i, j, .. } => Colour::Red { i, j, sup: None },
            c => c,
        }
    }
}

impl fmt::Display for Colour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Colour::Green(i) => write!(f, "g_{i}"),
            Colour::GreenSuper(t) => write!(f, "g_0^{t}"),
            Colour::White(i) => write!(f, "w_{i}"),
            Colour::Red { i, j, sup } => {
                write!(f, "r")?;
                if let Some(t) = sup {
                    write!(f, "^{t}")?;
                }
                if *i < 10 && *j < 10 {
                    write!(f, "_{i}{j}")
                } else {
                    write!(f, "_{i}.{j}")
                }
            }
            Colour::SingleRed(i) => write!(f, "r_{i}"),
        }
    }
}

/// Named parameter sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "preset", rename_all = "camelCase")]
pub enum Preset {
    /// Greens `g_0^1..g_0^greens`, pair reds over `0..reds`.
    FiniteRainbow { n: usize, greens: u32, reds: u32 },
    /// As `FiniteRainbow`, reds carry superscripts `t < copies`.
    BlownRainbow { n: usize, greens: u32, reds: u32, copies: u32 },
    /// Greens over `[-z_trunc, z_trunc]`, pair reds over `0..n_trunc`, order rule on.
    #[serde(rename = "orderedZN")]
    OrderedZn { n: usize, z_trunc: u32, n_trunc: u32 },
    /// Greens `g_0^0..g_0^(greens-1)`, single reds `r_0..r_(lambda-1)`.
    SingleReds { n: usize, greens: u32, lambda: u32 },
}

impl Preset {
    pub fn dimension(&self) -> usize {
        match *self {
            Preset::FiniteRainbow { n, .. }
            | Preset::BlownRainbow { n, .. }
            | Preset::OrderedZn { n, .. }
            | Preset::SingleReds { n, .. } => n,
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Preset::FiniteRainbow { n, greens, reds } => write!(f, "finiteRainbow({n},{greens},{reds})"),
            Preset::BlownRainbow { n, greens, reds, copies } => {
                write!(f, "blownRainbow({n},{greens},{reds},{copies})")
            }
            Preset::OrderedZn { n, z_trunc, n_trunc } => write!(f, "orderedZN({n},{z_trunc},{n_trunc})"),
            Preset::SingleReds { n, greens, lambda } => write!(f, "singleReds({n},{greens},{lambda})"),
        }
    }
}

/// Split `name(a,b,...)` into the name and its integer arguments.
pub(crate) fn call_syntax(s: &str) -> Option<(&str, Vec<i64>)> {
    let (name, rest) = s.trim().split_once('(')?;
    let args = rest.strip_suffix(')')?;
    let args = args
        .split(',')
        .map(|a| a.trim().parse::<i64>().ok())
        .collect::<Option<Vec<_>>>()?;
    Some((name.trim(), args))
}

impl std::str::FromStr for Preset {
    type Err = Error;

    /// Parses the `Display` form, e.g. `finiteRainbow(3,4,3)`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::usage(format!("unknown preset `{s}`"));
        let (name, args) = call_syntax(s).ok_or_else(bad)?;
        if args.iter().any(|&a| a < 0) {
            return Err(bad());
        }
        let a: Vec<u32> = args.iter().map(|&a| a as u32).collect();
        match (name, a.as_slice()) {
            ("finiteRainbow", &[n, greens, reds]) => Ok(Preset::FiniteRainbow { n: n as usize, greens, reds }),
            ("blownRainbow", &[n, greens, reds, copies]) => {
                Ok(Preset::BlownRainbow { n: n as usize, greens, reds, copies })
            }
            ("orderedZN", &[n, z_trunc, n_trunc]) => Ok(Preset::OrderedZn { n: n as usize, z_trunc, n_trunc }),
            ("singleReds", &[n, greens, lambda]) => Ok(Preset::SingleReds { n: n as usize, greens, lambda }),
            _ => Err(bad()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RedMode {
    Pairs { size: u32 },
    Single { count: u32 },
}

/// Colour tables beyond this many colours are evaluated on demand.
const TRIANGLE_TABLE_LIMIT: usize = 96;

/// A validated rainbow signature with dense colour ids.
#[derive(Clone)]
pub struct RainbowSignature {
    preset: Preset,
    dimension: usize,
    green_supers: Vec<i32>,
    red_mode: RedMode,
    red_supers: Option<u32>,
    order_rule: bool,
    colours: Vec<Colour>,
    index: HashMap<Colour, ColourId>,
    reverse: Vec<ColourId>,
    table: Option<Vec<bool>>,
}

impl fmt::Debug for RainbowSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RainbowSignature({})", self.preset)
    }
}

/// Validate a preset and build its signature.
pub fn build_signature(preset: Preset) -> Result<RainbowSignature> {
    let n = preset.dimension();
    if n < 3 {
        return Err(Error::usage(format!("rainbow dimension must be >= 3, got {n}")));
    }
    if n > crate::kernel::structure::MAX_DIMENSION {
        return Err(Error::usage(format!("rainbow dimension {n} above supported maximum")));
    }
    let (green_supers, red_mode, red_supers, order_rule) = match preset {
        Preset::FiniteRainbow { greens, reds, .. } => {
            nonzero(&[("greens", greens), ("reds", reds)])?;
            ((1..=greens as i32).collect(), RedMode::Pairs { size: reds }, None, false)
        }
        Preset::BlownRainbow { greens, reds, copies, .. } => {
            nonzero(&[("greens", greens), ("reds", reds), ("copies", copies)])?;
            ((1..=greens as i32).collect(), RedMode::Pairs { size: reds }, Some(copies), false)
        }
        Preset::OrderedZn { z_trunc, n_trunc, .. } => {
            nonzero(&[("zTrunc", z_trunc), ("nTrunc", n_trunc)])?;
            let z = z_trunc as i32;
            ((-z..=z).collect(), RedMode::Pairs { size: n_trunc }, None, true)
        }
        Preset::SingleReds { greens, lambda, .. } => {
            nonzero(&[("greens", greens), ("lambda", lambda)])?;
            ((0..greens as i32).collect(), RedMode::Single { count: lambda }, None, false)
        }
    };
    let mut colours = Vec::new();
    for i in 1..n - 1 {
        colours.push(Colour::Green(i as u8));
    }
    for &t in &green_supers {
        colours.push(Colour::GreenSuper(t));
    }
    for i in 0..=n - 2 {
        colours.push(Colour::White(i as u8));
    }
    match red_mode {
        RedMode::Pairs { size } => {
            let sups: Vec<Option<u32>> = match red_supers {
                None => vec![None],
                Some(t) => (0..t).map(Some).collect(),
            };
            for i in 0..size {
                for j in 0..size {
                    if i != j {
                        for &sup in &sups {
                            colours.push(Colour::Red { i, j, sup });
                        }
                    }
                }
            }
        }
        RedMode::Single { count } => {
            for i in 0..count {
                colours.push(Colour::SingleRed(i));
            }
        }
    }
    if colours.len() > ColourId::MAX as usize {
        return Err(Error::resource("colour count", ColourId::MAX as u64));
    }
    Ok(RainbowSignature::from_parts(
        preset,
        n,
        green_supers,
        red_mode,
        red_supers,
        order_rule,
        colours,
    ))
}

fn nonzero(counts: &[(&str, u32)]) -> Result<()> {
    for (name, c) in counts {
        if *c == 0 {
            return Err(Error::usage(format!("{name} must be >= 1")));
        }
    }
    Ok(())
}

impl RainbowSignature {
    fn from_parts(
        preset: Preset,
        dimension: usize,
        green_supers: Vec<i32>,
        red_mode: RedMode,
        red_supers: Option<u32>,
        order_rule: bool,
        colours: Vec<Colour>,
    ) -> Self {
        let index: HashMap<Colour, ColourId> = colours
            .iter()
            .enumerate()
            .map(|(k, c)| (*c, k as ColourId))
            .collect();
        let reverse = colours.iter().map(|c| index[&c.reversed()]).collect();
        let mut sig = RainbowSignature {
            preset,
            dimension,
            green_supers,
            red_mode,
            red_supers,
            order_rule,
            colours,
            index,
            reverse,
            table: None,
        };
        let k = sig.colours.len();
        if k <= TRIANGLE_TABLE_LIMIT {
            let mut t = vec![false; k * k * k];
            for a in 0..k {
                for b in 0..k {
                    for c in 0..k {
                        t[(a * k + b) * k + c] =
                            sig.consistent_uncached(a as ColourId, b as ColourId, c as ColourId);
                    }
                }
            }
            sig.table = Some(t);
        }
        sig
    }

    /// The same signature with colour ids assigned in a shuffled order.
    pub fn with_shuffled_colours(&self, seed: u64) -> Self {
        let mut colours = self.colours.clone();
        colours.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        Self::from_parts(
            self.preset,
            self.dimension,
            self.green_supers.clone(),
            self.red_mode,
            self.red_supers,
            self.order_rule,
            colours,
        )
    }

    pub fn preset(&self) -> Preset {
        self.preset
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn green_supers(&self) -> &[i32] {
        &self.green_supers
    }

    pub fn red_mode(&self) -> RedMode {
        self.red_mode
    }

    pub fn red_supers(&self) -> Option<u32> {
        self.red_supers
    }

    pub fn order_rule(&self) -> bool {
        self.order_rule
    }

    pub fn colour_count(&self) -> usize {
        self.colours.len()
    }

    pub fn colours(&self) -> &[Colour] {
        &self.colours
    }

    pub fn colour(&self, id: ColourId) -> Colour {
        self.colours[id as usize]
    }

    pub fn id(&self, c: Colour) -> Result<ColourId> {
        self.index
            .get(&c)
            .copied()
            .ok_or_else(|| Error::usage(format!("colour {c} not in signature {}", self.preset)))
    }

    pub fn reverse(&self, id: ColourId) -> ColourId {
        self.reverse[id as usize]
    }

    /// Number of yellow shades, `2^|G|`, as a power of two.
    pub fn yellow_shade_exponent(&self) -> usize {
        self.green_supers.len()
    }

    /// Counts per colour family: plain greens, green supers, whites, reds, yellow exponent.
    pub fn family_sizes(&self) -> FamilySizes {
        let count = |f: fn(&Colour) -> bool| self.colours.iter().filter(|c| f(c)).count();
        FamilySizes {
            plain_greens: count(|c| matches!(c, Colour::Green(_))),
            green_supers: count(|c| matches!(c, Colour::GreenSuper(_))),
            whites: count(|c| matches!(c, Colour::White(_))),
            reds: count(|c| c.is_red()),
            yellow_exponent: self.green_supers.len(),
        }
    }

    /// Triangle test for colours of `(x,y)`, `(y,z)`, `(x,z)`, each read along the stated direction.
    pub fn consistent_ids(&self, xy: ColourId, yz: ColourId, xz: ColourId) -> bool {
        match &self.table {
            Some(t) => {
                let k = self.colours.len();
                t[(xy as usize * k + yz as usize) * k + xz as usize]
            }
            None => self.consistent_uncached(xy, yz, xz),
        }
    }

    fn consistent_uncached(&self, xy: ColourId, yz: ColourId, xz: ColourId) -> bool {
        let c = |id: ColourId| self.colours[id as usize];
        // m[p][q] is the colour read from node p to node q
        let m = |p: usize, q: usize| -> Colour {
            match (p, q) {
                (0, 1) => c(xy),
                (1, 0) => c(xy).reversed(),
                (1, 2) => c(yz),
                (2, 1) => c(yz).reversed(),
                (0, 2) => c(xz),
                _ => c(xz).reversed(),
            }
        };
        let edges = [c(xy), c(yz), c(xz)];
        if edges.iter().all(|e| e.is_green()) {
            return false;
        }
        for i in 1..self.dimension.saturating_sub(1) {
            let g = Colour::Green(i as u8);
            let w = Colour::White(i as u8);
            if edges.iter().filter(|&&e| e == g).count() == 2 && edges.contains(&w) {
                return false;
            }
        }
        let g0 = edges.iter().filter(|e| matches!(e, Colour::GreenSuper(_))).count();
        if g0 == 2 && edges.contains(&Colour::White(0)) {
            return false;
        }
        if edges.iter().all(|e| e.is_red()) {
            match self.red_mode {
                RedMode::Pairs { .. } => {
                    let pair = |col: Colour| match col {
                        Colour::Red { i, j, .. } => (i, j),
                        _ => unreachable!(),
                    };
                    let (a, b) = pair(m(0, 1));
                    let (b2, cc) = pair(m(1, 2));
                    let (a2, c2) = pair(m(0, 2));
                    if !(a == a2 && b == b2 && cc == c2) {
                        return false;
                    }
                }
                RedMode::Single { .. } => {
                    let idx = |col: Colour| match col {
                        Colour::SingleRed(i) => i,
                        _ => unreachable!(),
                    };
                    let (a, b, cc) = (idx(edges[0]), idx(edges[1]), idx(edges[2]));
                    if a == b || b == cc || a == cc {
                        return false;
                    }
                }
            }
        }
        if self.order_rule {
            for p in 0..3 {
                let (q, r) = match p {
                    0 => (1, 2),
                    1 => (0, 2),
                    _ => (0, 1),
                };
                if let (Colour::GreenSuper(ti), Colour::GreenSuper(tj), Colour::Red { i: k, j: l, .. }) =
                    (m(p, q), m(p, r), m(q, r))
                {
                    let order_preserving = (ti < tj && k < l) || (ti > tj && k > l);
                    if !order_preserving {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Triangle test on colours; colours outside the signature are a usage error.
    pub fn consistent_triangle(&self, xy: Colour, yz: Colour, xz: Colour) -> Result<bool> {
        Ok(self.consistent_ids(self.id(xy)?, self.id(yz)?, self.id(xz)?))
    }

    /// Provenance block written alongside enumerated structures.
    pub fn provenance(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self.preset).expect("preset serializes");
        if let Some(t) = self.red_supers {
            v["truncation"] = serde_json::Value::String(format!(
                "red superscripts truncated to t < {t} (finite stand-in for omega)"
            ));
        }
        if let Preset::OrderedZn { z_trunc, n_trunc, .. } = self.preset {
            v["truncation"] = serde_json::Value::String(format!(
                "greens over [-{z_trunc},{z_trunc}], reds over [0,{n_trunc})"
            ));
        }
        v
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FamilySizes {
    pub plain_greens: usize,
    pub green_supers: usize,
    pub whites: usize,
    pub reds: usize,
    pub yellow_exponent: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ca43() -> RainbowSignature {
        build_signature(Preset::FiniteRainbow { n: 3, greens: 4, reds: 3 }).unwrap()
    }

    #[test]
    fn ca43_families() {
        let s = ca43();
        let f = s.family_sizes();
        assert_eq!(f.plain_greens, 1);
        assert_eq!(f.green_supers, 4);
        assert_eq!(f.whites, 2);
        assert_eq!(f.reds, 6); // three pairs, each readable in two directions
        assert_eq!(1usize << f.yellow_exponent, 16);
    }

    #[test]
    fn zero_counts_rejected() {
        let e = build_signature(Preset::FiniteRainbow { n: 3, greens: 0, reds: 1 });
        assert!(matches!(e, Err(Error::Usage(_))));
        assert!(build_signature(Preset::FiniteRainbow { n: 2, greens: 1, reds: 1 }).is_err());
    }

    #[test]
    fn matching_red_triangle() {
        let s = ca43();
        let r = |i, j| Colour::Red { i, j, sup: None };
        assert!(s.consistent_triangle(r(0, 1), r(1, 2), r(0, 2)).unwrap());
        assert!(!s.consistent_triangle(r(0, 1), r(0, 2), r(1, 2)).unwrap());
    }

    #[test]
    fn forbidden_green_white() {
        let s = ca43();
        let g = Colour::GreenSuper;
        assert!(!s.consistent_triangle(g(2), g(3), Colour::White(0)).unwrap());
        assert!(!s.consistent_triangle(Colour::White(0), g(2), g(3)).unwrap());
        assert!(!s
            .consistent_triangle(Colour::Green(1), Colour::Green(1), Colour::White(1))
            .unwrap());
        assert!(!s.consistent_triangle(g(1), Colour::Green(1), g(2)).unwrap());
        assert!(s.consistent_triangle(Colour::White(0), Colour::Green(1), g(2)).unwrap());
    }

    #[test]
    fn foreign_colour_is_usage() {
        let s = ca43();
        let e = s.consistent_triangle(Colour::White(5), Colour::White(0), Colour::White(0));
        assert!(matches!(e, Err(Error::Usage(_))));
    }

    #[test]
    fn order_rule() {
        let s = build_signature(Preset::OrderedZn { n: 3, z_trunc: 2, n_trunc: 3 }).unwrap();
        let g = Colour::GreenSuper;
        let r = |i, j| Colour::Red { i, j, sup: None };
        // apex x: x-y is g_0^-1, x-z is g_0^0, y-z red
        for (m, k) in [(0u32, 1u32), (0, 2), (1, 2), (1, 0), (2, 0), (2, 1)] {
            let ok = s.consistent_triangle(g(-1), r(m, k), g(0)).unwrap();
            assert_eq!(ok, m < k, "r_{m}{k}");
        }
    }

    #[test]
    fn single_reds() {
        let s = build_signature(Preset::SingleReds { n: 3, greens: 4, lambda: 3 }).unwrap();
        let r = Colour::SingleRed;
        assert!(s.consistent_triangle(r(0), r(1), r(2)).unwrap());
        assert!(!s.consistent_triangle(r(0), r(1), r(0)).unwrap());
    }

    #[test]
    fn single_reds_sizes() {
        let m = 1u32;
        let lambda = (3 * 2u32.pow(m)).pow(3);
        let s = build_signature(Preset::SingleReds { n: 3, greens: lambda + 2, lambda }).unwrap();
        let f = s.family_sizes();
        assert_eq!(lambda, 216);
        assert_eq!(f.green_supers, 218);
        assert_eq!(f.reds, 216);
        assert_eq!(f.yellow_exponent, 218);
        assert_eq!(s.colour_count(), 1 + 218 + 2 + 216);
    }
}
