use num_bigint::BigUint;

use super::{Letter, Word};
use crate::{Error, OrderedDiagram, Result};

/// The k-coding alphabet `A_k`: one symbol per root segment of length `k`.
///
/// Segments are labeled vertex by vertex (`j = 1..K_k`), in path order within
/// a vertex, so `B^(k)(k, j)` is a run of consecutive integers. The single
/// spacer segment gets `s_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    k: usize,
    /// `dims[l][j-1]` for levels `0..=k`.
    dims: Vec<Vec<u64>>,
    /// `offsets[l][j-1]`: label of the first segment into `v(l, j)`, `l <= k`.
    offsets: Vec<Vec<u32>>,
    /// `edge_base[l-1][j-1][xi-1]`: paths into `v(l, j)` ordered before edge `xi`.
    edge_base: Vec<Vec<Vec<u64>>>,
    size: u64,
}

impl Alphabet {
    pub fn new(diagram: &OrderedDiagram, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::contract("coding depth k must be at least 1"));
        }
        if !diagram.has_level(k) {
            return Err(Error::contract(format!("level {} is beyond the diagram", k)));
        }
        let exact = diagram.dims(k);
        let size: BigUint = exact.iter().sum();
        let size = u64::try_from(&size)
            .ok()
            .filter(|&d| d < u64::from(u32::MAX))
            .ok_or_else(|| Error::Resource {
                level: k,
                length: size.to_string(),
                limit: u64::from(u32::MAX) - 1,
            })?;
        // every level-l total is bounded by the level-k total under C2, but
        // guard anyway since validation may not have run
        let dims = diagram.dims_saturating(k);
        let mut offsets = Vec::with_capacity(k + 1);
        for row in &dims {
            let mut next = 0u64;
            let mut offs = Vec::with_capacity(row.len());
            for &d in &row[..row.len() - 1] {
                offs.push(u32::try_from(next).map_err(|_| Error::contract("alphabet overflow"))?);
                next = next.saturating_add(d);
            }
            offsets.push(offs);
        }
        let edge_base = (1..=k)
            .map(|l| {
                (1..=diagram.vertex_count(l))
                    .map(|j| {
                        let mut acc = 0u64;
                        diagram
                            .in_edges(l, j)
                            .iter()
                            .map(|&g| {
                                let here = acc;
                                acc = acc.saturating_add(dims[l - 1][g - 1]);
                                here
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Ok(Alphabet {
            k,
            dims,
            offsets,
            edge_base,
            size,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `d_k`, the number of symbols including the spacer.
    pub fn size(&self) -> u64 {
        self.size
    }

    /// Whether renderings should run digits together (`d_k <= 10`).
    pub fn compact(&self) -> bool {
        self.size <= 10
    }

    pub fn render(&self, word: &Word) -> String {
        word.render(self.compact())
    }

    /// Number of root segments into `v(l, j)` for `l <= k`.
    pub fn dim(&self, l: usize, j: usize) -> u64 {
        self.dims[l][j - 1]
    }

    /// First symbol of the run belonging to `v(k, j)`, for non-spacer `j`.
    pub fn first_symbol(&self, j: usize) -> Letter {
        Letter(self.offsets[self.k][j - 1])
    }

    /// Symbol of the segment with the given 0-based path-order rank into `v(l, j)`.
    pub fn symbol_at_level(&self, l: usize, j: usize, rank: u64) -> Letter {
        if j == self.dims[l].len() {
            Letter::SPACER
        } else {
            Letter(self.offsets[l][j - 1] + rank as u32)
        }
    }

    /// Label of a segment given as `(target, xi)` per level `1..=k`.
    pub fn label(&self, edges: &[(usize, usize)]) -> Letter {
        debug_assert!(edges.len() >= self.k);
        let rank: u64 = edges[..self.k]
            .iter()
            .enumerate()
            .map(|(i, &(j, xi))| self.edge_base[i][j - 1][xi - 1])
            .sum();
        self.symbol_at_level(self.k, edges[self.k - 1].0, rank)
    }

    /// Level-`k` vertex whose segment a symbol labels.
    pub fn vertex_of(&self, letter: Letter) -> usize {
        let offs = &self.offsets[self.k];
        if letter.is_spacer() {
            offs.len() + 1
        } else {
            offs.partition_point(|&o| o <= letter.0)
        }
    }

    /// `parents[l]` maps depth-`(l+1)` labels to the label of their depth-`l`
    /// initial segment, for `l = k'..k`.
    fn parent_table(&self, diagram: &OrderedDiagram, l: usize) -> Vec<u32> {
        // labels at depth l + 1 in order, each tagged with its depth-l prefix
        let mut table = Vec::new();
        for j in 1..self.dims[l + 1].len() {
            for &g in diagram.in_edges(l + 1, j) {
                if g == self.dims[l].len() {
                    table.push(Letter::SPACER.0);
                } else {
                    let first = self.offsets[l][g - 1];
                    table.extend(first..first + self.dims[l][g - 1] as u32);
                }
            }
        }
        table
    }

    /// The one-block map `pi_{k,k'}` as a lookup table from `A_k` labels.
    pub fn factor_table(&self, diagram: &OrderedDiagram, k_prime: usize) -> Result<Vec<u32>> {
        if k_prime == 0 || k_prime > self.k {
            return Err(Error::contract(format!(
                "factor map needs 1 <= k' <= k = {}, got {}",
                self.k, k_prime
            )));
        }
        let mut table: Vec<u32> = (0..(self.size - 1) as u32).collect();
        for l in (k_prime..self.k).rev() {
            let parent = self.parent_table(diagram, l);
            for v in &mut table {
                if *v != Letter::SPACER.0 {
                    *v = parent[*v as usize];
                }
            }
        }
        Ok(table)
    }

    /// `pi_{k,k'}` applied to a word over `A_k`.
    pub fn factor_map(&self, diagram: &OrderedDiagram, word: &Word, k_prime: usize) -> Result<Word> {
        if k_prime == self.k {
            return Ok(word.clone());
        }
        let table = self.factor_table(diagram, k_prime)?;
        word.letters()
            .iter()
            .map(|&l| {
                if l.is_spacer() {
                    Ok(l)
                } else {
                    table
                        .get(l.0 as usize)
                        .map(|&v| Letter(v))
                        .ok_or_else(|| Error::contract(format!("symbol {} not in A_{}", l.0, self.k)))
                }
            })
            .collect()
    }
}
