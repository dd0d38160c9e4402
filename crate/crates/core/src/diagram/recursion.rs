//! The cutting-and-stacking form of an ordered diagram.
//!
//! A table lists seed words `D_j` for level 1 and, for every later vertex, the
//! sequence of `(g, a)` pairs meaning "block of vertex `g` one level up,
//! followed by `a` spacers". The first edge into a vertex never comes from the
//! spacer, so every vertex's list starts with a block.

use super::{Layer, OrderedDiagram};
use crate::{Error, Result};

/// One `(g, a)` step of a recursion: the block of vertex `g`, then `a` spacers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RecursionStep {
    pub block: usize,
    pub spacers: usize,
}

impl RecursionStep {
    pub fn new(block: usize, spacers: usize) -> Self {
        RecursionStep { block, spacers }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecursionTable {
    /// `D_1..D_{K_1}`, words over the non-spacer level-1 symbols.
    pub seeds: Vec<Vec<u32>>,
    /// `steps[n-1][j-1]` builds `B(n+1, j)` from the blocks at level `n`.
    pub steps: Vec<Vec<Vec<RecursionStep>>>,
    /// Same meaning as [`OrderedDiagram::stationary_from`]; the table stores
    /// the repeating layer once.
    pub stationary_from: Option<usize>,
}

impl RecursionTable {
    /// `K_n` as implied by the table.
    pub fn k(&self, n: usize) -> usize {
        match n {
            0 => 0,
            1 => self.seeds.len(),
            _ => {
                let idx = match self.stationary_from {
                    Some(m) if n - 1 > m => m,
                    _ => n - 1,
                };
                self.steps[idx - 1].len()
            }
        }
    }

    /// Seeds are canonical when they are consecutive runs `0,1,..` in vertex order.
    pub fn seeds_canonical(&self) -> bool {
        let mut next = 0u32;
        self.seeds.iter().all(|d| {
            d.iter().all(|&x| {
                let ok = x == next;
                next += 1;
                ok
            })
        })
    }

    /// Rank-one table for `B_{n+1} = B_n s^{a(n,0)} B_n ... B_n s^{a(n,q-1)}`,
    /// starting from `B_0 = 0`; `spacer_runs[n]` lists `a(n, 0..q)`.
    pub fn rank_one(spacer_runs: &[Vec<usize>], stationary_from: Option<usize>) -> Self {
        let steps = spacer_runs
            .iter()
            .map(|runs| vec![runs.iter().map(|&a| RecursionStep::new(1, a)).collect()])
            .collect();
        RecursionTable {
            seeds: vec![vec![0]],
            steps,
            stationary_from,
        }
    }

    pub fn is_rank_one(&self) -> bool {
        self.seeds.len() == 1 && self.steps.iter().all(|lvl| lvl.len() == 1)
    }

    /// `a(n, i)` runs of the single rank-one vertex, indexed from `B_0`.
    pub fn rank_one_runs(&self, n: usize) -> Vec<usize> {
        let idx = match self.stationary_from {
            Some(m) if n + 1 > m => m - 1,
            _ => n,
        };
        self.steps[idx][0].iter().map(|s| s.spacers).collect()
    }
}

impl OrderedDiagram {
    /// Reads off the recursion table. Requires C2 and C3.
    pub fn to_recursion(&self) -> Result<RecursionTable> {
        let dims1 = self.dims(1);
        let mut next = 0u32;
        let mut seeds = Vec::with_capacity(self.k(1));
        for d in dims1.iter().take(self.k(1)) {
            let len = u32::try_from(d).map_err(|_| Error::Conversion("seed too long".into()))?;
            seeds.push((next..next + len).collect());
            next += len;
        }
        if self.in_edges(1, self.spacer(1)).len() != 1 {
            return Err(Error::Conversion("level-1 spacer vertex must have one root edge".into()));
        }

        let stored = self.explicit_layers();
        let mut steps = Vec::with_capacity(stored.saturating_sub(1));
        for n in 1..stored {
            let spacer_above = self.spacer(n);
            let spacer = self.spacer(n + 1);
            if self.in_edges(n + 1, spacer) != [spacer_above] {
                return Err(Error::Conversion(format!(
                    "spacer vertex at level {} has other incoming edges",
                    n + 1
                )));
            }
            let mut level = Vec::with_capacity(self.k(n + 1));
            for j in 1..=self.k(n + 1) {
                let mut row: Vec<RecursionStep> = Vec::new();
                for &g in self.in_edges(n + 1, j) {
                    if g == spacer_above {
                        match row.last_mut() {
                            Some(step) => step.spacers += 1,
                            None => {
                                return Err(Error::Conversion(format!(
                                    "block B({},{}) would begin with the spacer symbol",
                                    n + 1,
                                    j
                                )))
                            }
                        }
                    } else {
                        row.push(RecursionStep::new(g, 0));
                    }
                }
                level.push(row);
            }
            steps.push(level);
        }
        Ok(RecursionTable {
            seeds,
            steps,
            stationary_from: self.stationary_from(),
        })
    }

    /// Builds the diagram a recursion table describes. Seeds must be
    /// canonical (see [`RecursionTable::seeds_canonical`]).
    pub fn from_recursion(table: &RecursionTable) -> Result<OrderedDiagram> {
        if table.seeds.is_empty() || table.seeds.iter().any(Vec::is_empty) {
            return Err(Error::Conversion("every seed block must be nonempty".into()));
        }
        if !table.seeds_canonical() {
            return Err(Error::Conversion(
                "seed symbols must run 0,1,2,.. consecutively across D_1, D_2, ..".into(),
            ));
        }
        if let Some(m) = table.stationary_from {
            if m == 0 || m > table.steps.len() {
                return Err(Error::Conversion(format!(
                    "stationary level {} needs a stored recursion layer",
                    m
                )));
            }
        }
        let k1 = table.seeds.len();
        let mut ks = vec![0, k1];
        let mut root: Vec<Vec<usize>> = table.seeds.iter().map(|d| vec![1; d.len()]).collect();
        root.push(vec![1]);
        let mut layers = vec![Layer::new(root)];

        for (idx, level) in table.steps.iter().enumerate() {
            let n = idx + 1;
            let k_above = ks[n];
            let spacer_above = k_above + 1;
            if level.is_empty() {
                return Err(Error::Conversion(format!("level {} has no non-spacer vertex", n + 1)));
            }
            let mut incoming = Vec::with_capacity(level.len() + 1);
            for (j, row) in level.iter().enumerate() {
                if row.is_empty() {
                    return Err(Error::Conversion(format!("B({},{}) has no steps", n + 1, j + 1)));
                }
                let mut srcs = Vec::new();
                for step in row {
                    if step.block == 0 || step.block > k_above {
                        return Err(Error::Conversion(format!(
                            "B({},{}) refers to block {} outside 1..={}",
                            n + 1,
                            j + 1,
                            step.block,
                            k_above
                        )));
                    }
                    srcs.push(step.block);
                    srcs.extend(std::iter::repeat_n(spacer_above, step.spacers));
                }
                incoming.push(srcs);
            }
            incoming.push(vec![spacer_above]);
            ks.push(level.len());
            layers.push(Layer::new(incoming));
        }
        OrderedDiagram::new(ks, layers, table.stationary_from)
    }
}
