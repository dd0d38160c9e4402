//! Line-oriented text formats for diagrams (`bv 1`) and recursion tables
//! (`bvrec 1`). Writers are canonical: one datum per line, `\n` endings,
//! keys in a fixed order, so equal values serialize to equal bytes.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{Layer, OrderedDiagram, RecursionStep, RecursionTable};
use crate::{Error, Result};

fn parse_err(line: usize, detail: impl Into<String>) -> Error {
    Error::Parse {
        line,
        detail: detail.into(),
    }
}

/// Non-empty, comment-stripped lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn num(line: usize, tok: Option<&str>, what: &str) -> Result<usize> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {}", what)))?;
    tok.parse()
        .map_err(|_| parse_err(line, format!("{} `{}` is not a number", what, tok)))
}

fn parse_levels(line: usize, mut toks: std::str::SplitWhitespace<'_>) -> Result<(usize, Option<usize>)> {
    let levels = num(line, toks.next(), "level count")?;
    let stationary = match toks.next() {
        None => None,
        Some("stationary-from") => Some(num(line, toks.next(), "stationary level")?),
        Some(other) => return Err(parse_err(line, format!("unexpected `{}`", other))),
    };
    if toks.next().is_some() {
        return Err(parse_err(line, "trailing tokens"));
    }
    Ok((levels, stationary))
}

fn levels_line(out: &mut String, levels: usize, stationary: Option<usize>) {
    match stationary {
        Some(m) => writeln!(out, "levels {} stationary-from {}", levels, m),
        None => writeln!(out, "levels {}", levels),
    }
    .unwrap();
}

impl OrderedDiagram {
    /// Serializes in the `bv 1` format. The single spacer edge demanded by C2
    /// is left implicit.
    pub fn to_text(&self) -> String {
        let layers = self.explicit_layers();
        let mut out = String::from("bv 1\n");
        levels_line(&mut out, layers, self.stationary_from());
        for n in 0..=layers {
            writeln!(out, "level {} K {}", n, self.k(n)).unwrap();
        }
        for n in 0..layers {
            let layer = &self.layers[n];
            let spacer = self.k(n + 1) + 1;
            for t in 1..=layer.targets() {
                let srcs = layer.sources(t);
                if t == spacer && srcs == [self.k(n) + 1] {
                    continue;
                }
                for (xi, g) in srcs.iter().enumerate() {
                    writeln!(out, "edge {} {} {} {}", n + 1, t, xi + 1, g).unwrap();
                }
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<OrderedDiagram> {
        let mut lines = content_lines(text);
        match lines.next() {
            Some((_, "bv 1")) => {}
            Some((l, other)) => return Err(parse_err(l, format!("expected `bv 1`, found `{}`", other))),
            None => return Err(Error::structural(0, "empty diagram file")),
        }
        let (l, levels_line) = lines
            .next()
            .ok_or_else(|| Error::structural(0, "missing `levels` line"))?;
        let mut toks = levels_line.split_whitespace();
        if toks.next() != Some("levels") {
            return Err(parse_err(l, "expected `levels`"));
        }
        let (layers, stationary) = parse_levels(l, toks)?;
        if layers == 0 {
            return Err(Error::structural(0, "diagram has no edge layers"));
        }

        let mut ks: Vec<Option<usize>> = vec![None; layers + 1];
        let mut edges: BTreeMap<(usize, usize), BTreeMap<usize, usize>> = BTreeMap::new();
        for (l, line) in lines {
            let mut toks = line.split_whitespace();
            match toks.next() {
                Some("level") => {
                    let n = num(l, toks.next(), "level")?;
                    if toks.next() != Some("K") {
                        return Err(parse_err(l, "expected `level <n> K <K_n>`"));
                    }
                    let k = num(l, toks.next(), "K")?;
                    let slot = ks
                        .get_mut(n)
                        .ok_or_else(|| parse_err(l, format!("level {} beyond declared {}", n, layers)))?;
                    if slot.replace(k).is_some() {
                        return Err(parse_err(l, format!("level {} declared twice", n)));
                    }
                }
                Some("edge") => {
                    let n1 = num(l, toks.next(), "level")?;
                    let target = num(l, toks.next(), "target")?;
                    let xi = num(l, toks.next(), "order")?;
                    let source = num(l, toks.next(), "source")?;
                    if n1 == 0 || n1 > layers {
                        return Err(Error::structural(n1, format!("edge on line {} has no layer", l)));
                    }
                    if xi == 0 {
                        return Err(Error::structural(n1, format!("edge on line {} has order 0", l)));
                    }
                    if edges.entry((n1, target)).or_default().insert(xi, source).is_some() {
                        return Err(Error::structural(
                            n1,
                            format!("edge order {} into vertex {} repeated", xi, target),
                        ));
                    }
                }
                Some(other) => return Err(parse_err(l, format!("unknown key `{}`", other))),
                None => unreachable!(),
            }
            if toks.next().is_some() {
                return Err(parse_err(l, "trailing tokens"));
            }
        }

        let ks: Vec<usize> = ks
            .into_iter()
            .enumerate()
            .map(|(n, k)| k.ok_or_else(|| Error::structural(n, "missing `level` line")))
            .collect::<Result<_>>()?;
        let mut built = Vec::with_capacity(layers);
        for n1 in 1..=layers {
            let targets = ks[n1] + 1;
            let mut incoming = vec![Vec::new(); targets];
            for ((lvl, t), by_xi) in edges.range((n1, 0)..(n1 + 1, 0)) {
                debug_assert_eq!(*lvl, n1);
                if *t == 0 || *t > targets {
                    return Err(Error::structural(n1, format!("edge target {} out of range", t)));
                }
                for (expect, (&xi, &g)) in by_xi.iter().enumerate() {
                    if xi != expect + 1 {
                        return Err(Error::structural(
                            n1,
                            format!("edge orders into vertex {} skip order {}", t, expect + 1),
                        ));
                    }
                    incoming[t - 1].push(g);
                }
            }
            if incoming[targets - 1].is_empty() {
                incoming[targets - 1].push(ks[n1 - 1] + 1);
            }
            built.push(Layer::new(incoming));
        }
        OrderedDiagram::new(ks, built, stationary)
    }
}

/// `{1: a, 2: b, ..}` into `[a, b, ..]`, failing on the first gap.
fn dense<T>(map: BTreeMap<usize, T>, what: &str, level: usize) -> Result<Vec<T>> {
    map.into_iter()
        .enumerate()
        .map(|(i, (j, v))| {
            if j == i + 1 {
                Ok(v)
            } else {
                Err(Error::structural(level, format!("{} {} missing", what, i + 1)))
            }
        })
        .collect()
}

fn render_seed(word: &[u32]) -> String {
    word.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

impl RecursionTable {
    /// Serializes in the `bvrec 1` format.
    pub fn to_text(&self) -> String {
        let mut out = String::from("bvrec 1\n");
        levels_line(&mut out, self.steps.len() + 1, self.stationary_from);
        for (j, d) in self.seeds.iter().enumerate() {
            writeln!(out, "seed {} {}", j + 1, render_seed(d)).unwrap();
        }
        for (idx, level) in self.steps.iter().enumerate() {
            for (j, row) in level.iter().enumerate() {
                write!(out, "block {} {} :", idx + 2, j + 1).unwrap();
                for step in row {
                    write!(out, " {},{}", step.block, step.spacers).unwrap();
                }
                out.push('\n');
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<RecursionTable> {
        let mut lines = content_lines(text);
        match lines.next() {
            Some((_, "bvrec 1")) => {}
            Some((l, other)) => {
                return Err(parse_err(l, format!("expected `bvrec 1`, found `{}`", other)))
            }
            None => return Err(Error::structural(0, "empty recursion file")),
        }
        let (l, first) = lines
            .next()
            .ok_or_else(|| Error::structural(0, "missing `levels` line"))?;
        let mut toks = first.split_whitespace();
        if toks.next() != Some("levels") {
            return Err(parse_err(l, "expected `levels`"));
        }
        let (layers, stationary_from) = parse_levels(l, toks)?;
        if layers == 0 {
            return Err(Error::structural(0, "recursion has no levels"));
        }

        let mut seeds: BTreeMap<usize, Vec<u32>> = BTreeMap::new();
        let mut blocks: Vec<BTreeMap<usize, Vec<RecursionStep>>> = vec![BTreeMap::new(); layers - 1];
        for (l, line) in lines {
            let mut toks = line.split_whitespace();
            match toks.next() {
                Some("seed") => {
                    let j = num(l, toks.next(), "seed index")?;
                    let word = toks.next().ok_or_else(|| parse_err(l, "missing seed word"))?;
                    let symbols = word
                        .split(',')
                        .map(|t| {
                            t.parse::<u32>()
                                .map_err(|_| parse_err(l, format!("seed symbol `{}` is not a number", t)))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    if toks.next().is_some() {
                        return Err(parse_err(l, "trailing tokens"));
                    }
                    if seeds.insert(j, symbols).is_some() {
                        return Err(parse_err(l, format!("seed {} given twice", j)));
                    }
                }
                Some("block") => {
                    let n1 = num(l, toks.next(), "level")?;
                    let j = num(l, toks.next(), "vertex")?;
                    if toks.next() != Some(":") {
                        return Err(parse_err(l, "expected `:` after the vertex"));
                    }
                    let row = toks
                        .map(|pair| {
                            let (g, a) = pair
                                .split_once(',')
                                .ok_or_else(|| parse_err(l, format!("step `{}` is not `g,a`", pair)))?;
                            Ok(RecursionStep::new(num(l, Some(g), "block")?, num(l, Some(a), "spacer run")?))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    if n1 < 2 || n1 > layers {
                        return Err(parse_err(l, format!("block level {} outside 2..={}", n1, layers)));
                    }
                    if blocks[n1 - 2].insert(j, row).is_some() {
                        return Err(parse_err(l, format!("block {} {} given twice", n1, j)));
                    }
                }
                Some(other) => return Err(parse_err(l, format!("unknown key `{}`", other))),
                None => unreachable!(),
            }
        }
        let seeds = dense(seeds, "seed", 1)?;
        let steps = blocks
            .into_iter()
            .enumerate()
            .map(|(i, m)| dense(m, "block", i + 2))
            .collect::<Result<Vec<_>>>()?;
        Ok(RecursionTable {
            seeds,
            steps,
            stationary_from,
        })
    }
}
