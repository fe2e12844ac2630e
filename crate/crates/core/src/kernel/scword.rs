use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ScToken {
    /// `s_j^i`, the replacement `[i|j]`.
    Subst(usize, usize),
    /// `c_i`.
    Cyl(usize),
}

/// A word over substitutions and cylindrifications of width `m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ScWord {
    pub width: usize,
    pub tokens: Vec<ScToken>,
}

impl ScWord {
    pub fn new(width: usize, tokens: Vec<ScToken>) -> Self {
        ScWord { width, tokens }
    }

    /// Parse tokens such as `s0,1 c2` (whitespace separated).
    pub fn parse(width: usize, text: &str) -> Result<Self> {
        let mut tokens = Vec::new();
        for tok in text.split_whitespace() {
            let bad = || Error::usage(format!("bad sc-word token {tok:?}"));
            if let Some(rest) = tok.strip_prefix('s') {
                let (i, j) = rest.split_once(',').ok_or_else(bad)?;
                tokens.push(ScToken::Subst(
                    i.parse().map_err(|_| bad())?,
                    j.parse().map_err(|_| bad())?,
                ));
            } else if let Some(rest) = tok.strip_prefix('c') {
                tokens.push(ScToken::Cyl(rest.parse().map_err(|_| bad())?));
            } else {
                return Err(bad());
            }
        }
        Ok(ScWord { width, tokens })
    }

    pub fn concat(&self, other: &ScWord) -> Result<ScWord> {
        if self.width != other.width {
            return Err(Error::usage("sc-words of different width"));
        }
        let mut tokens = self.tokens.clone();
        tokens.extend_from_slice(&other.tokens);
        Ok(ScWord::new(self.width, tokens))
    }
}

/// A finite partial function on `0..width`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PartialMap {
    map: Vec<Option<usize>>,
}

impl PartialMap {
    pub fn identity(width: usize) -> Self {
        PartialMap {
            map: (0..width).map(Some).collect(),
        }
    }

    pub fn from_entries(width: usize, entries: &[(usize, usize)]) -> Self {
        let mut map = vec![None; width];
        for &(x, y) in entries {
            map[x] = Some(y);
        }
        PartialMap { map }
    }

    pub fn width(&self) -> usize {
        self.map.len()
    }

    pub fn get(&self, x: usize) -> Option<usize> {
        self.map.get(x).copied().flatten()
    }

    pub fn entries(&self) -> Vec<(usize, usize)> {
        self.map
            .iter()
            .enumerate()
            .filter_map(|(x, y)| y.map(|y| (x, y)))
            .collect()
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn after(&self, other: &PartialMap) -> PartialMap {
        PartialMap {
            map: other.map.iter().map(|y| y.and_then(|y| self.get(y))).collect(),
        }
    }
}

impl fmt::Debug for PartialMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, (x, y)) in self.entries().into_iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}↦{y}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for PartialMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// The partial map of a single token.
pub fn token_map(width: usize, t: ScToken) -> Result<PartialMap> {
    match t {
        ScToken::Subst(i, j) if i < width && j < width => {
            let mut m = PartialMap::identity(width);
            m.map[i] = Some(j);
            Ok(m)
        }
        ScToken::Cyl(i) if i < width => {
            let mut m = PartialMap::identity(width);
            m.map[i] = None;
            Ok(m)
        }
        _ => Err(Error::usage(format!("token {t:?} out of range for width {width}"))),
    }
}

/// `ε ↦ Id`, `w·s_j^i ↦ ŵ∘[i|j]`, `w·c_i ↦ ŵ` restricted to `width ∖ {i}`.
pub fn eval_sc_word(word: &ScWord) -> Result<PartialMap> {
    let mut acc = PartialMap::identity(word.width);
    for &t in &word.tokens {
        acc = acc.after(&token_map(word.width, t)?);
    }
    Ok(acc)
}
