//! Seeded generators. Every generator is a pure function of its arguments.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Layer, OrderedDiagram, RecursionTable, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpacerPolicy {
    /// The spacer only ever feeds the next spacer.
    Isolated,
    /// Spacer runs are inserted between non-spacer edges.
    Branching,
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Root layer: `seeds[j]` edges into `v(1, j)`, one into the spacer.
fn root_layer(seeds: &[usize]) -> Layer {
    let mut rows: Vec<Vec<usize>> = seeds.iter().map(|&d| vec![1; d]).collect();
    rows.push(vec![1]);
    Layer::new(rows)
}

fn with_spacer_row(mut rows: Vec<Vec<usize>>, spacer: usize) -> Layer {
    rows.push(vec![spacer]);
    Layer::new(rows)
}

/// A stationary diagram with `K` non-spacer vertices per level, repeating
/// from level 1. Each non-spacer vertex receives between 2 and `max_edges`
/// non-spacer edges (so blocks grow), never begins with a spacer edge, and
/// every non-spacer vertex feeds the level below.
pub fn random_stationary(seed: u64, k: usize, max_edges: usize, policy: SpacerPolicy) -> Result<OrderedDiagram> {
    if k == 0 || max_edges < 2 {
        return Err(Error::contract(format!(
            "random diagrams need K >= 1 and max_edges >= 2, got K={}, max_edges={}",
            k, max_edges
        )));
    }
    let mut r = rng(seed);
    let seeds: Vec<usize> = (0..k).map(|_| r.gen_range(1..=3)).collect();
    let spacer = k + 1;
    let mut rows: Vec<Vec<usize>> = (0..k)
        .map(|t| {
            let len = r.gen_range(2..=max_edges);
            let mut blocks: Vec<usize> = (0..len).map(|_| r.gen_range(1..=k)).collect();
            // the second edge covers source t, so every vertex has an out-edge
            blocks[1] = t + 1;
            blocks
        })
        .collect();
    if policy == SpacerPolicy::Branching {
        for row in rows.iter_mut() {
            let mut out = Vec::with_capacity(row.len() * 2);
            for (i, &g) in row.iter().enumerate() {
                out.push(g);
                if i + 1 < row.len() || r.gen_bool(0.5) {
                    out.extend(std::iter::repeat_n(spacer, r.gen_range(0..=2)));
                }
            }
            *row = out;
        }
        // at least one spacer edge somewhere
        if !rows.iter().flatten().any(|&g| g == spacer) {
            let t = r.gen_range(0..k);
            rows[t].push(spacer);
        }
    }
    OrderedDiagram::new(
        vec![0, k, k],
        vec![root_layer(&seeds), with_spacer_row(rows, spacer)],
        Some(1),
    )
}

/// A stationary diagram satisfying LDC at its repeating level by
/// construction: level 2 blocks are `(U s^c)^t U s^l` over the level-1 seeds,
/// and the repeating rows top every interior appearance of `B(n, g)` up by
/// exactly `c - l(g)` spacers, with final runs chosen so the l-vector is a
/// fixed point. Every row starts with vertex 1, so the minimal path is unique.
pub fn random_ldc_stationary(seed: u64, k: usize) -> Result<OrderedDiagram> {
    if k == 0 {
        return Err(Error::contract("K must be at least 1"));
    }
    let mut r = rng(seed);
    let k1 = r.gen_range(1..=3usize);
    let seeds: Vec<usize> = (0..k1).map(|_| r.gen_range(1..=2)).collect();
    let s1 = k1 + 1;

    // U over level-1 vertices: starts and ends with a non-spacer, uses every seed
    let mut core: Vec<usize> = (1..=k1).collect();
    for _ in 0..r.gen_range(0..=2) {
        core.push(r.gen_range(1..=k1));
    }
    core.shuffle(&mut r);
    let mut u = Vec::new();
    for (i, &g) in core.iter().enumerate() {
        u.push(g);
        if i + 1 < core.len() {
            u.extend(std::iter::repeat_n(s1, r.gen_range(0..=1)));
        }
    }
    let c = r.gen_range(1..=3usize);
    let l: Vec<usize> = (0..k).map(|_| r.gen_range(0..=c)).collect();
    let level2: Vec<Vec<usize>> = (0..k)
        .map(|j| {
            let t = r.gen_range(1..=2);
            let mut row = Vec::new();
            for _ in 0..t {
                row.extend(&u);
                row.extend(std::iter::repeat_n(s1, c));
            }
            row.extend(&u);
            row.extend(std::iter::repeat_n(s1, l[j]));
            row
        })
        .collect();

    let s = k + 1;
    let mut repeating: Vec<Vec<usize>> = (0..k)
        .map(|i| {
            let q = r.gen_range(2..=3usize);
            let mut blocks = vec![1usize];
            for _ in 1..q - 1 {
                blocks.push(r.gen_range(1..=k));
            }
            // the last block may not carry more trailing spacers than row i
            let candidates: Vec<usize> = (1..=k).filter(|&g| l[g - 1] <= l[i]).collect();
            blocks.push(*candidates.choose(&mut r).unwrap());
            let mut row = Vec::new();
            for (p, &g) in blocks.iter().enumerate() {
                row.push(g);
                let run = if p + 1 < blocks.len() { c - l[g - 1] } else { l[i] - l[g - 1] };
                row.extend(std::iter::repeat_n(s, run));
            }
            row
        })
        .collect();
    // every vertex must feed the level below
    for g in 2..=k {
        if !repeating.iter().flatten().any(|&x| x == g) {
            // prepend B(n,1) s^(c-l(1)) B(n,g) s^(c-l(g)) to a random row
            let i = r.gen_range(0..k);
            let mut row = vec![1];
            row.extend(std::iter::repeat_n(s, c - l[0]));
            row.push(g);
            row.extend(std::iter::repeat_n(s, c - l[g - 1]));
            row.extend(repeating[i].iter());
            repeating[i] = row;
        }
    }
    OrderedDiagram::new(
        vec![0, k1, k, k],
        vec![
            root_layer(&seeds),
            with_spacer_row(level2, s1),
            with_spacer_row(repeating, s),
        ],
        Some(2),
    )
}

/// Breaks one exact deficit of the repeating layer: one or two extra spacers after the
/// first appearance in the row of vertex 1, which is the vertex the minimal
/// thread sits on (every generated row starts with 1). The row must hold at
/// least two interior appearances, otherwise the longer gap can simply become
/// the new `s^c` and the coding stays periodic; `None` when it does not.
pub fn perturb_deficit(diagram: &OrderedDiagram, seed: u64) -> Option<OrderedDiagram> {
    let m = diagram.stationary_from()?;
    let spacer = diagram.spacer(m);
    let mut rows: Vec<Vec<usize>> = (1..=diagram.vertex_count(m + 1))
        .map(|t| diagram.in_edges(m + 1, t).to_vec())
        .collect();
    let blocks: Vec<usize> = (0..rows[0].len()).filter(|&p| rows[0][p] != spacer).collect();
    if blocks.len() < 3 {
        return None;
    }
    // the seed only decides how many extra spacers, 1 or 2
    let extra = rng(seed).gen_range(1..=2);
    for _ in 0..extra {
        rows[0].insert(blocks[0] + 1, spacer);
    }
    let mut layers: Vec<Layer> = (0..m).map(|n| diagram.layer(n).clone()).collect();
    layers.push(Layer::new(rows));
    let ks = (0..=m + 1).map(|n| diagram.k(n)).collect();
    OrderedDiagram::new(ks, layers, Some(m)).ok()
}

/// Rank-one recursions for the structure theorem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankOneShape {
    /// Random early rows, then a repeating row of `q - 1` equal interior runs
    /// and a zero trailing run.
    Periodic,
    /// The repeating row has two different interior runs, the odd one first
    /// so the break shows at the start of the coding.
    Broken,
}

pub fn random_rank_one(seed: u64, shape: RankOneShape) -> RecursionTable {
    let mut r = rng(seed);
    let early = r.gen_range(0..=3usize);
    let mut rows: Vec<Vec<usize>> = (0..early)
        .map(|_| (0..r.gen_range(2..=3)).map(|_| r.gen_range(0..=2)).collect())
        .collect();
    let q = r.gen_range(2..=4usize);
    let tail = match shape {
        RankOneShape::Periodic => {
            let a = r.gen_range(0..=3);
            let mut row = vec![a; q - 1];
            row.push(0);
            row
        }
        RankOneShape::Broken => {
            let q = q.max(3);
            let a = r.gen_range(0..=2);
            let mut row = vec![a; q - 1];
            row[0] = a + r.gen_range(1..=2);
            row.push(r.gen_range(0..=1));
            row
        }
    };
    rows.push(tail);
    let n = rows.len();
    RecursionTable::rank_one(&rows, Some(n))
}
