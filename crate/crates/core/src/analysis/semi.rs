//! Semi k-periodicity: every non-spacer block of a level factors as
//! `(U s^c)^t U s^l` with one shared `U` and `c`, `t >= 1` and `l <= c`.
//!
//! Candidates for `(U, c)` come from the periods of the shortest block with
//! its trailing spacers removed: any valid factorization makes `|U| + c` a
//! period of that word. Factorizations with `c = 0` are all powers of the
//! word's primitive root, so only the root itself is tried for them.

use super::words::{periods, primitive_root};
use crate::blocks::{Alphabet, BlockDag};
use crate::{Error, OrderedDiagram, Result, Word};

/// Default ceiling on the length of blocks the analyses expand.
pub const DEFAULT_MAX_LEN: u64 = 1_000_000;

/// `(U, c)` with per-vertex `t`, `l`, over an arbitrary symbol type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Factorization {
    pub u_len: usize,
    pub c: usize,
    pub t: Vec<usize>,
    pub l: Vec<usize>,
}

/// Why no shared factorization exists: `vertex` is the first vertex (in index
/// order) left without a compatible `(U, c)` once candidates are drawn from
/// the shortest block, at `witness`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refutation {
    pub level: usize,
    pub witness: usize,
    pub vertex: usize,
    pub reason: String,
}

/// A witness that level `level` is semi k-periodic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemiPeriodicCertificate {
    pub level: usize,
    pub k: usize,
    pub u: Word,
    pub c: usize,
    pub t: Vec<usize>,
    pub l: Vec<usize>,
}

impl SemiPeriodicCertificate {
    /// `U s^c`, the period of codings that satisfy LDC from here on.
    pub fn period_word(&self) -> Word {
        Word::concat(&[&self.u, &Word::spacers(self.c)])
    }

    /// Rebuilds `(U s^c)^t U s^l` for non-spacer vertex `j`.
    pub fn block(&self, j: usize) -> Word {
        let mut w = self.period_word().repeat(self.t[j - 1]);
        w.extend_from(&self.u);
        w.extend_from(&Word::spacers(self.l[j - 1]));
        w
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SemiOutcome {
    Certificate(SemiPeriodicCertificate),
    NotSemiPeriodic(Refutation),
}

impl SemiOutcome {
    pub fn certificate(&self) -> Option<&SemiPeriodicCertificate> {
        match self {
            SemiOutcome::Certificate(c) => Some(c),
            SemiOutcome::NotSemiPeriodic(_) => None,
        }
    }

    pub fn is_semi_periodic(&self) -> bool {
        self.certificate().is_some()
    }
}

/// Length of the trailing run of `spacer`.
fn trailing<T: PartialEq>(w: &[T], spacer: &T) -> usize {
    w.iter().rev().take_while(|x| *x == spacer).count()
}

/// `w` (spacers stripped) has the shape `(U s^c)^t U` with `t >= 1`.
fn exponent<T: PartialEq>(w: &[T], u: &[T], c: usize, spacer: &T) -> Option<usize> {
    let p = u.len() + c;
    if w.len() < u.len() + p || !(w.len() - u.len()).is_multiple_of(p) {
        return None;
    }
    let ok = w.iter().enumerate().all(|(i, x)| {
        let r = i % p;
        if r < u.len() {
            *x == u[r]
        } else {
            x == spacer
        }
    });
    ok.then(|| (w.len() - u.len()) / p)
}

/// Shared factorization of `blocks` (the non-spacer blocks of one level, in
/// vertex order), or the refutation data `(witness, vertex, reason)`.
pub(crate) fn factor_blocks<T: PartialEq + Clone>(
    blocks: &[Vec<T>],
    spacer: &T,
) -> std::result::Result<Factorization, (usize, usize, String)> {
    if blocks.is_empty() {
        return Err((0, 0, "level has no non-spacer blocks".into()));
    }
    let stripped: Vec<&[T]> = blocks.iter().map(|b| &b[..b.len() - trailing(b, spacer)]).collect();
    let witness = (0..blocks.len()).min_by_key(|&i| (stripped[i].len(), i)).unwrap();
    let w = stripped[witness];
    if w.is_empty() || w[0] == *spacer {
        return Err((witness + 1, witness + 1, "block begins with the spacer symbol".into()));
    }

    // (u, c) candidates in order of increasing |U|, then c
    let mut candidates: Vec<(usize, usize)> = Vec::new();
    for p in periods(w) {
        if p >= w.len() {
            continue;
        }
        let t = (w.len() - 1) / p;
        let u = w.len() - t * p;
        let c = p - u;
        if c == 0 {
            continue;
        }
        if w[u - 1] != *spacer && w[u..p].iter().all(|x| x == spacer) {
            candidates.push((u, c));
        }
    }
    if let Ok((root, e)) = primitive_root(w) {
        if e >= 2 {
            candidates.push((root, 0));
        }
    }
    candidates.sort_unstable();
    if candidates.is_empty() {
        return Err((
            witness + 1,
            witness + 1,
            "shortest block is not of the form (U s^c)^t U with t >= 1".into(),
        ));
    }

    // for each candidate: the first vertex it fails on, or its exponents
    let mut deepest_failure = (0usize, String::new());
    for &(u, c) in &candidates {
        let pattern = &w[..u];
        let mut ts = Vec::with_capacity(blocks.len());
        let mut failed = None;
        for (j, b) in stripped.iter().enumerate() {
            let l = blocks[j].len() - b.len();
            match exponent(b, pattern, c, spacer) {
                Some(t) if l <= c => ts.push(t),
                Some(_) => {
                    failed = Some((j, format!("trailing spacer run {} exceeds c = {}", l, c)));
                    break;
                }
                None => {
                    failed = Some((j, format!("block does not factor over |U| = {}, c = {}", u, c)));
                    break;
                }
            }
        }
        match failed {
            None => {
                let l = blocks.iter().zip(&stripped).map(|(b, s)| b.len() - s.len()).collect();
                return Ok(Factorization { u_len: u, c, t: ts, l });
            }
            Some((j, why)) => {
                if j + 1 > deepest_failure.0 {
                    deepest_failure = (j + 1, why);
                }
            }
        }
    }
    Err((witness + 1, deepest_failure.0, deepest_failure.1))
}

/// Expands the non-spacer blocks `B^(k)(n, 1..=K_n)`.
pub(crate) fn level_blocks(dag: &BlockDag, diagram: &OrderedDiagram, n: usize, limit: u64) -> Result<Vec<Word>> {
    (1..=diagram.k(n)).map(|j| dag.block(n, j)?.expand_all(limit)).collect()
}

/// Decides whether level `n` is semi k-periodic.
pub fn semi_k_periodic(diagram: &OrderedDiagram, n: usize, k: usize, limit: u64) -> Result<SemiOutcome> {
    if k == 0 || k > n {
        return Err(Error::contract(format!("semi k-periodicity needs 1 <= k <= n, got k={}, n={}", k, n)));
    }
    let dag = BlockDag::build(diagram, k, n)?;
    semi_from_dag(&dag, diagram, n, limit)
}

pub(crate) fn semi_from_dag(dag: &BlockDag, diagram: &OrderedDiagram, n: usize, limit: u64) -> Result<SemiOutcome> {
    let words = level_blocks(dag, diagram, n, limit)?;
    Ok(semi_from_words(&words, n, dag.k()))
}

pub(crate) fn semi_from_words(words: &[Word], n: usize, k: usize) -> SemiOutcome {
    let raw: Vec<Vec<crate::Letter>> = words.iter().map(|w| w.letters().to_vec()).collect();
    match factor_blocks(&raw, &crate::Letter::SPACER) {
        Ok(f) => SemiOutcome::Certificate(SemiPeriodicCertificate {
            level: n,
            k,
            u: words[0].slice(0, f.u_len),
            c: f.c,
            t: f.t,
            l: f.l,
        }),
        Err((witness, vertex, reason)) => SemiOutcome::NotSemiPeriodic(Refutation {
            level: n,
            witness,
            vertex,
            reason,
        }),
    }
}

/// Whether level `n + 1` is semi n-periodic, decided on vertex codings: the
/// level-n blocks are runs of distinct symbols, so `B^(n)(n+1, j)` is
/// determined by the sources of the edges into `v(n+1, j)`.
pub fn semi_periodic_by_vertices(diagram: &OrderedDiagram, n: usize) -> Result<bool> {
    if n == 0 {
        return Err(Error::contract("vertex coding needs n >= 1"));
    }
    let blocks: Vec<Vec<usize>> = (1..=diagram.k(n + 1)).map(|j| diagram.in_edges(n + 1, j).to_vec()).collect();
    Ok(factor_blocks(&blocks, &diagram.spacer(n)).is_ok())
}

/// Every non-spacer block of level `n` is a positive power of one word `W`.
pub fn uniformly_ordered(diagram: &OrderedDiagram, n: usize, k: usize, limit: u64) -> Result<Option<Word>> {
    if k == 0 || k > n {
        return Err(Error::contract(format!("uniform order needs 1 <= k <= n, got k={}, n={}", k, n)));
    }
    let dag = BlockDag::build(diagram, k, n)?;
    let words = level_blocks(&dag, diagram, n, limit)?;
    let (root, _) = primitive_root(words[0].letters())?;
    let w = words[0].slice(0, root);
    let all = words.iter().all(|b| {
        primitive_root(b.letters()).is_ok_and(|(r, _)| r == root && b.letters()[..r] == *w.letters())
    });
    Ok(all.then_some(w))
}

/// Outcome of parsing `U_{k+1}` into the level-k blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decomposition {
    /// Level `k + 1` is not semi k-periodic.
    NotApplicable,
    Checked {
        /// Level-k vertices (spacer index for `s`) spelling `U_{k+1}`.
        parse: Option<Vec<usize>>,
        pseudo_complete: bool,
    },
}

/// Parses `U_{k+1}` into level-k blocks and spacers. Seeds use disjoint
/// symbols, each starting with its own first symbol, so a parse is unique
/// whenever it exists.
pub fn decomposition_unique(diagram: &OrderedDiagram, k: usize, limit: u64) -> Result<Decomposition> {
    let dag = BlockDag::build(diagram, k, k + 1)?;
    let outcome = semi_from_dag(&dag, diagram, k + 1, limit)?;
    let Some(cert) = outcome.certificate() else {
        return Ok(Decomposition::NotApplicable);
    };
    Ok(Decomposition::Checked {
        parse: parse_into_seeds(dag.alphabet(), &cert.u),
        pseudo_complete: diagram.pseudo_complete(k + 1)?,
    })
}

fn parse_into_seeds(alphabet: &Alphabet, w: &Word) -> Option<Vec<usize>> {
    let k = alphabet.k();
    let letters = w.letters();
    let mut out = Vec::new();
    let mut i = 0;
    while i < letters.len() {
        let x = letters[i];
        let j = alphabet.vertex_of(x);
        if x.is_spacer() {
            out.push(j);
            i += 1;
            continue;
        }
        if x != alphabet.first_symbol(j) {
            return None;
        }
        let len = alphabet.dim(k, j) as usize;
        let run = letters.get(i..i + len)?;
        if run.iter().enumerate().any(|(r, l)| l.0 != x.0 + r as u32) {
            return None;
        }
        out.push(j);
        i += len;
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn blocks(ws: &[&str]) -> Vec<Vec<crate::Letter>> {
        ws.iter().map(|w| Word::parse(w).unwrap().into_letters()).collect()
    }

    #[test]
    fn factors_shared_shape() {
        let f = factor_blocks(&blocks(&["0s1s1s0ss0s1s1s0", "0s1s1s0ss0s1s1s0s"]), &crate::Letter::SPACER).unwrap();
        assert_eq!((f.u_len, f.c, f.t.clone(), f.l.clone()), (7, 2, vec![1, 1], vec![0, 1]));
    }

    #[test]
    fn refutes_mismatched_blocks() {
        let e = factor_blocks(&blocks(&["0s1", "0s1", "1s0"]), &crate::Letter::SPACER).unwrap_err();
        assert_eq!(e.0, 1);
        assert!(e.1 >= 1);
    }

    #[test]
    fn single_copy_does_not_count() {
        // t must be positive: U s^l alone is not a factorization
        assert!(factor_blocks(&blocks(&["0s1", "0s1s"]), &crate::Letter::SPACER).is_err());
    }

    #[test]
    fn unspaced_powers_use_root() {
        let f = factor_blocks(&blocks(&["0000", "000000"]), &crate::Letter::SPACER).unwrap();
        assert_eq!((f.u_len, f.c, f.t), (1, 0, vec![3, 5]));
    }

    #[test]
    fn trailing_run_bounded_by_c() {
        assert!(factor_blocks(&blocks(&["0s0s0ss"]), &crate::Letter::SPACER).is_err());
        let f = factor_blocks(&blocks(&["0s0s0s"]), &crate::Letter::SPACER).unwrap();
        assert_eq!((f.u_len, f.c, f.t, f.l), (1, 1, vec![2], vec![1]));
    }
}
