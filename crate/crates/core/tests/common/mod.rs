//! Brute-force oracles shared by the integration tests. Nothing here goes
//! through the block DAG or the word utilities of the crate.
#![allow(dead_code)]

use bv_core::OrderedDiagram;

pub const S: u32 = u32::MAX;

/// Path counts by direct summation, saturating at `u64::MAX`.
pub fn naive_dims(d: &OrderedDiagram, n: usize) -> Vec<Vec<u64>> {
    let mut all = vec![vec![1u64]];
    for level in 1..=n {
        let prev = &all[level - 1];
        let row = (1..=d.vertex_count(level))
            .map(|j| {
                d.in_edges(level, j)
                    .iter()
                    .fold(0u64, |acc, &g| acc.saturating_add(prev[g - 1]))
            })
            .collect();
        all.push(row);
    }
    all
}

/// Every basic block `B^(k)(n, j)` for `k <= n <= top`, fully expanded.
/// At level `k` a non-spacer vertex reads its root segments as consecutive
/// labels; the spacer reads one `S`.
pub fn naive_blocks(d: &OrderedDiagram, k: usize, top: usize) -> Vec<Vec<Vec<u32>>> {
    let dims = naive_dims(d, k);
    let mut next = 0u32;
    let mut level: Vec<Vec<u32>> = Vec::new();
    for j in 1..=d.vertex_count(k) {
        if j == d.spacer(k) {
            level.push(vec![S]);
        } else {
            let len = dims[k][j - 1] as u32;
            level.push((next..next + len).collect());
            next += len;
        }
    }
    let mut out = vec![level];
    for n in k + 1..=top {
        let prev = out.last().unwrap();
        let row = (1..=d.vertex_count(n))
            .map(|j| d.in_edges(n, j).iter().flat_map(|&g| prev[g - 1].iter().copied()).collect())
            .collect();
        out.push(row);
    }
    out
}

/// The block into `v(n, j)` from [`naive_blocks`].
pub fn naive_block(d: &OrderedDiagram, n: usize, j: usize, k: usize) -> Vec<u32> {
    naive_blocks(d, k, n)[n - k][j - 1].clone()
}

pub fn render(w: &[u32]) -> String {
    w.iter()
        .map(|&x| if x == S { "s".to_string() } else { x.to_string() })
        .collect()
}

pub fn letters(w: &bv_core::Word) -> Vec<u32> {
    w.letters().iter().map(|l| l.0).collect()
}

/// Smallest `p >= 1` with `w[i] == w[i + p]` throughout, scanning every `p`.
pub fn naive_least_period<T: PartialEq>(w: &[T]) -> usize {
    (1..=w.len())
        .find(|&p| (p..w.len()).all(|i| w[i] == w[i - p]))
        .unwrap_or(w.len())
}

/// `(root length, exponent)` by trying every divisor.
pub fn naive_primitive_root<T: PartialEq>(w: &[T]) -> (usize, usize) {
    let n = w.len();
    let d = (1..=n)
        .find(|&d| n.is_multiple_of(d) && (0..n).all(|i| w[i] == w[i % d]))
        .unwrap();
    (d, n / d)
}

pub fn naive_commute<T: PartialEq + Clone>(u: &[T], v: &[T]) -> bool {
    let uv: Vec<T> = u.iter().chain(v).cloned().collect();
    let vu: Vec<T> = v.iter().chain(u).cloned().collect();
    uv == vu
}

/// The level-`n` block into the vertex of the first non-spacer minimal
/// thread, grown until it reaches `len` symbols (or level 64); truncated to `len`.
pub fn naive_prefix(d: &OrderedDiagram, k: usize, len: usize, vertex_at: impl Fn(usize) -> usize) -> Vec<u32> {
    let mut n = k;
    loop {
        let blocks = naive_blocks(d, k, n);
        let b = &blocks[n - k][vertex_at(n) - 1];
        if b.len() >= len || d.depth() == Some(n) || n >= 64 {
            return b[..b.len().min(len)].to_vec();
        }
        n += 1;
    }
}
