use std::fmt;

use crate::{Error, Result};

/// One symbol of a coding alphabet. Non-spacer symbols are `0..d_k-2`; the
/// spacer `s_k` is a reserved value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(pub u32);

impl Letter {
    pub const SPACER: Letter = Letter(u32::MAX);

    pub fn is_spacer(self) -> bool {
        self == Letter::SPACER
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_spacer() {
            f.write_str("s")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

/// A finite word. Letters are kept flat for O(1) indexing; [`Word::runs`]
/// gives the run-length view.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn spacers(count: usize) -> Self {
        Word(vec![Letter::SPACER; count])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, l: Letter) {
        self.0.push(l);
    }

    pub fn extend_from(&mut self, other: &Word) {
        self.0.extend_from_slice(&other.0);
    }

    pub fn slice(&self, from: usize, to: usize) -> Word {
        Word(self.0[from..to].to_vec())
    }

    /// `(letter, run length)` pairs of maximal runs.
    pub fn runs(&self) -> Vec<(Letter, usize)> {
        let mut out: Vec<(Letter, usize)> = Vec::new();
        for &l in &self.0 {
            match out.last_mut() {
                Some((prev, n)) if *prev == l => *n += 1,
                _ => out.push((l, 1)),
            }
        }
        out
    }

    /// Number of trailing spacer symbols.
    pub fn trailing_spacers(&self) -> usize {
        self.0.iter().rev().take_while(|l| l.is_spacer()).count()
    }

    pub fn longest_spacer_run(&self) -> usize {
        self.runs()
            .into_iter()
            .filter(|(l, _)| l.is_spacer())
            .map(|(_, n)| n)
            .max()
            .unwrap_or(0)
    }

    pub fn concat(parts: &[&Word]) -> Word {
        Word(parts.iter().flat_map(|w| w.0.iter().copied()).collect())
    }

    pub fn repeat(&self, times: usize) -> Word {
        Word(self.0.repeat(times))
    }

    /// Digits run together when `compact`, comma-separated otherwise.
    pub fn render(&self, compact: bool) -> String {
        if compact {
            self.0.iter().map(Letter::to_string).collect()
        } else {
            self.0.iter().map(Letter::to_string).collect::<Vec<_>>().join(",")
        }
    }

    /// Compact rendering when every symbol is a single digit.
    pub fn render_auto(&self) -> String {
        self.render(self.0.iter().all(|l| l.is_spacer() || l.0 < 10))
    }

    /// Accepts both renderings: `0ss12` reads one character per symbol,
    /// `0,s,s,12` splits on commas.
    pub fn parse(text: &str) -> Result<Word> {
        Self::parse_with(text, !text.contains(','))
    }

    /// Parses a rendering produced by [`Word::render`] with the same flag.
    pub fn parse_with(text: &str, compact: bool) -> Result<Word> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Word::empty());
        }
        let sym = |tok: &str| -> Result<Letter> {
            if tok == "s" {
                Ok(Letter::SPACER)
            } else {
                tok.parse::<u32>()
                    .ok()
                    .filter(|&v| v != u32::MAX)
                    .map(Letter)
                    .ok_or_else(|| Error::contract(format!("`{}` is not a symbol", tok)))
            }
        };
        if !compact {
            text.split(',').map(|t| sym(t.trim())).collect::<Result<_>>().map(Word)
        } else {
            text.chars()
                .map(|c| sym(c.encode_utf8(&mut [0; 4])))
                .collect::<Result<_>>()
                .map(Word)
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_auto())
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_both_renderings() {
        let w = Word::parse("0ss0s").unwrap();
        assert_eq!(w.len(), 5);
        assert_eq!(w.render(true), "0ss0s");
        assert_eq!(w.render(false), "0,s,s,0,s");
        assert_eq!(Word::parse("12,s,3").unwrap().letters()[0], Letter(12));
        assert!(Word::parse("0x").is_err());
    }

    #[test]
    fn runs_and_spacer_stats() {
        let w = Word::parse("0ss0sss1").unwrap();
        assert_eq!(w.runs().len(), 5);
        assert_eq!(w.longest_spacer_run(), 3);
        assert_eq!(w.trailing_spacers(), 0);
        assert_eq!(Word::parse("01ss").unwrap().trailing_spacers(), 2);
    }

    proptest! {
        #[test]
        fn render_parse_round_trip(raw in prop::collection::vec(prop_oneof![Just(u32::MAX), 0u32..40], 0..60)) {
            let w: Word = raw.into_iter().map(Letter).collect();
            prop_assert_eq!(Word::parse_with(&w.render(false), false).unwrap(), w.clone());
            let flat: Vec<Letter> = w.runs().into_iter().flat_map(|(l, n)| std::iter::repeat_n(l, n)).collect();
            prop_assert_eq!(Word::new(flat), w);
        }
    }
}
