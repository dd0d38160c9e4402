//! Ordered Bratteli diagrams with a designated spacer vertex per level.
//!
//! Vertices are addressed 1-based, as `v(n, j)` with `1 <= j <= K_n + 1`; the
//! last index `K_n + 1` is always the spacer vertex. Level 0 holds only the
//! root, `v(0, 1)`.
//!
//! Edges between level `n` and `n + 1` are stored per target vertex as the
//! list of source indices in increasing edge order, so the edge with order
//! `xi` into `v(n+1, j)` is `incoming[j-1][xi-1]`. Gaps and repeats in the
//! order are unrepresentable.

mod format;
mod recursion;
mod validate;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::{Error, Result};

pub use recursion::{RecursionStep, RecursionTable};
pub use validate::{GrowthReport, Issue, ValidationReport};

/// Edges from one level to the next.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Layer {
    incoming: Vec<Vec<usize>>,
}

impl Layer {
    /// `incoming[j-1]` lists the (1-based) source vertices of the edges into
    /// target `j`, ordered by edge order.
    pub fn new(incoming: Vec<Vec<usize>>) -> Self {
        Layer { incoming }
    }

    pub fn targets(&self) -> usize {
        self.incoming.len()
    }

    /// Sources of the edges into target `j` in edge order.
    pub fn sources(&self, j: usize) -> &[usize] {
        &self.incoming[j - 1]
    }

    pub fn edge_count(&self) -> usize {
        self.incoming.iter().map(Vec::len).sum()
    }

    /// Number of edges leaving source vertex `g`.
    pub fn out_degree(&self, g: usize) -> usize {
        self.incoming
            .iter()
            .map(|srcs| srcs.iter().filter(|&&s| s == g).count())
            .sum()
    }

    pub fn connected(&self, source: usize, target: usize) -> bool {
        self.incoming[target - 1].contains(&source)
    }
}

/// An ordered Bratteli diagram, either finite or stationary from some level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderedDiagram {
    ks: Vec<usize>,
    layers: Vec<Layer>,
    stationary_from: Option<usize>,
    origin: Vec<usize>,
}

impl OrderedDiagram {
    /// Builds a diagram from `K_n` for the explicit levels `0..=layers.len()`
    /// and the edge layers between them.
    ///
    /// With `stationary_from = Some(m)` every layer `n >= m` equals layer `m`,
    /// which requires `m < layers.len()` and `K_{m+1} = K_m`.
    pub fn new(ks: Vec<usize>, layers: Vec<Layer>, stationary_from: Option<usize>) -> Result<Self> {
        let origin = (0..ks.len()).collect();
        Self::with_origin(ks, layers, stationary_from, origin)
    }

    pub(crate) fn with_origin(
        ks: Vec<usize>,
        layers: Vec<Layer>,
        stationary_from: Option<usize>,
        origin: Vec<usize>,
    ) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::structural(0, "diagram has no edge layers"));
        }
        if ks.len() != layers.len() + 1 {
            return Err(Error::structural(
                0,
                format!("{} levels declared for {} edge layers", ks.len(), layers.len()),
            ));
        }
        if ks[0] != 0 {
            return Err(Error::structural(0, "level 0 must hold only the root (K_0 = 0)"));
        }
        for (n, layer) in layers.iter().enumerate() {
            let targets = ks[n + 1] + 1;
            if layer.targets() != targets {
                return Err(Error::structural(
                    n + 1,
                    format!("expected edges into {} vertices, found {}", targets, layer.targets()),
                ));
            }
            let sources = ks[n] + 1;
            for (t, srcs) in layer.incoming.iter().enumerate() {
                if srcs.is_empty() {
                    return Err(Error::structural(
                        n + 1,
                        format!("vertex {} is the range of no edge", t + 1),
                    ));
                }
                if let Some((xi, &g)) = srcs.iter().enumerate().find(|(_, &g)| g == 0 || g > sources) {
                    return Err(Error::structural(
                        n + 1,
                        format!(
                            "edge {} into vertex {} has source {} outside 1..={}",
                            xi + 1,
                            t + 1,
                            g,
                            sources
                        ),
                    ));
                }
            }
        }
        if let Some(m) = stationary_from {
            if m >= layers.len() {
                return Err(Error::structural(
                    m,
                    format!("stationary level {} has no explicit edge layer", m),
                ));
            }
            if ks[m + 1] != ks[m] {
                return Err(Error::structural(
                    m + 1,
                    "a repeating layer must map K_m vertices onto K_m vertices",
                ));
            }
        }
        Ok(OrderedDiagram {
            ks,
            layers,
            stationary_from,
            origin,
        })
    }

    /// Number of explicitly stored edge layers.
    pub fn explicit_layers(&self) -> usize {
        self.layers.len()
    }

    pub fn stationary_from(&self) -> Option<usize> {
        self.stationary_from
    }

    pub fn is_stationary(&self) -> bool {
        self.stationary_from.is_some()
    }

    /// Deepest level, or `None` when the diagram repeats forever.
    pub fn depth(&self) -> Option<usize> {
        match self.stationary_from {
            Some(_) => None,
            None => Some(self.layers.len()),
        }
    }

    pub fn has_level(&self, n: usize) -> bool {
        self.depth().is_none_or(|d| n <= d)
    }

    fn level_index(&self, n: usize) -> usize {
        match self.stationary_from {
            Some(m) if n > m => m,
            _ => n,
        }
    }

    /// `K_n`, the number of non-spacer vertices at level `n`.
    pub fn k(&self, n: usize) -> usize {
        self.ks[self.level_index(n)]
    }

    /// Index of the spacer vertex at level `n` (`K_n + 1`).
    pub fn spacer(&self, n: usize) -> usize {
        self.k(n) + 1
    }

    pub fn vertex_count(&self, n: usize) -> usize {
        self.k(n) + 1
    }

    /// Edges from level `n` to level `n + 1`.
    pub fn layer(&self, n: usize) -> &Layer {
        &self.layers[self.level_index(n)]
    }

    /// Sources (at level `n - 1`) of the edges into `v(n, j)`, in edge order.
    pub fn in_edges(&self, n: usize, j: usize) -> &[usize] {
        self.layer(n - 1).sources(j)
    }

    pub fn in_degree(&self, n: usize, j: usize) -> usize {
        self.in_edges(n, j).len()
    }

    /// Source of the edge with order `xi` into `v(n, j)`.
    pub fn source(&self, n: usize, j: usize, xi: usize) -> usize {
        self.in_edges(n, j)[xi - 1]
    }

    /// Number of edges leaving `v(n, j)`.
    pub fn out_degree(&self, n: usize, j: usize) -> usize {
        self.layer(n).out_degree(j)
    }

    /// Level of the original diagram that level `n` was cut from.
    pub fn origin_level(&self, n: usize) -> usize {
        let last = self.origin.len() - 1;
        if n <= last {
            self.origin[n]
        } else {
            self.origin[last] + (n - last)
        }
    }

    pub fn check_vertex(&self, n: usize, j: usize) -> Result<()> {
        if !self.has_level(n) {
            return Err(Error::contract(format!("level {} is beyond the diagram", n)));
        }
        if j == 0 || j > self.vertex_count(n) {
            return Err(Error::contract(format!(
                "vertex {} out of range 1..={} at level {}",
                j,
                self.vertex_count(n),
                n
            )));
        }
        Ok(())
    }

    /// Exact path counts `dim(n, j)` for every vertex at level `n`.
    pub fn dims(&self, n: usize) -> Vec<BigUint> {
        let mut current = vec![BigUint::one()];
        for level in 1..=n {
            let layer = self.layer(level - 1);
            current = (1..=layer.targets())
                .map(|j| layer.sources(j).iter().map(|&g| &current[g - 1]).sum())
                .collect();
        }
        current
    }

    /// Number of root paths ending at `v(n, j)`.
    pub fn dim(&self, n: usize, j: usize) -> Result<BigUint> {
        self.check_vertex(n, j)?;
        Ok(self.dims(n).swap_remove(j - 1))
    }

    /// Path counts at every level `0..=n`, saturating at `u64::MAX`.
    pub(crate) fn dims_saturating(&self, n: usize) -> Vec<Vec<u64>> {
        let mut all = Vec::with_capacity(n + 1);
        all.push(vec![1u64]);
        for level in 1..=n {
            let prev: &Vec<u64> = &all[level - 1];
            let layer = self.layer(level - 1);
            let row = (1..=layer.targets())
                .map(|j| {
                    layer
                        .sources(j)
                        .iter()
                        .fold(0u64, |acc, &g| acc.saturating_add(prev[g - 1]))
                })
                .collect();
            all.push(row);
        }
        all
    }

    /// Whether every non-spacer vertex at level `n - 1` has an edge to every
    /// non-spacer vertex at level `n`.
    pub fn pseudo_complete(&self, n: usize) -> Result<bool> {
        if n == 0 || !self.has_level(n) {
            return Err(Error::contract(format!("pseudo-completeness needs 1 <= n, got {}", n)));
        }
        let layer = self.layer(n - 1);
        let above = self.k(n - 1);
        Ok((1..=self.k(n)).all(|t| (1..=above).all(|g| layer.connected(g, t))))
    }

    /// Collapses the levels strictly between consecutive cuts into composite
    /// edges. Levels after the last cut are kept one by one, so a stationary
    /// diagram stays stationary.
    ///
    /// Composite edges into a vertex are ordered by their deepest edge first,
    /// then by shallower edges, which keeps the path order intact.
    pub fn telescope(&self, cuts: &[usize]) -> Result<OrderedDiagram> {
        if cuts.first() != Some(&0) {
            return Err(Error::contract("telescoping cuts must start at level 0"));
        }
        if cuts.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::contract("telescoping cuts must be strictly increasing"));
        }
        let last = *cuts.last().unwrap();
        if !self.has_level(last) {
            return Err(Error::contract(format!("cut level {} is beyond the diagram", last)));
        }

        let mut levels: Vec<usize> = cuts.to_vec();
        let stationary_from = match (self.stationary_from, self.depth()) {
            (Some(m), _) => {
                let mut next = last;
                while next < m {
                    next += 1;
                    levels.push(next);
                }
                levels.push(next + 1);
                Some(levels.len() - 2)
            }
            (None, Some(d)) => {
                levels.extend(last + 1..=d);
                None
            }
            (None, None) => unreachable!(),
        };

        let mut ks = Vec::with_capacity(levels.len());
        let mut layers = Vec::with_capacity(levels.len() - 1);
        let mut origin = Vec::with_capacity(levels.len());
        for w in levels.windows(2) {
            layers.push(self.composite_layer(w[0], w[1]));
        }
        for &lvl in &levels {
            ks.push(self.k(lvl));
            origin.push(self.origin_level(lvl));
        }
        if levels.len() == 1 {
            return Err(Error::contract("telescoping must keep at least one edge layer"));
        }
        OrderedDiagram::with_origin(ks, layers, stationary_from, origin)
    }

    /// Sources at level `from` of all segments from level `from` into each
    /// vertex at level `to`, in path order.
    pub(crate) fn composite_layer(&self, from: usize, to: usize) -> Layer {
        let mut segs: Vec<Vec<usize>> = (1..=self.vertex_count(from)).map(|v| vec![v]).collect();
        for level in from + 1..=to {
            let layer = self.layer(level - 1);
            segs = (1..=layer.targets())
                .map(|j| {
                    layer
                        .sources(j)
                        .iter()
                        .flat_map(|&g| segs[g - 1].iter().copied())
                        .collect()
                })
                .collect();
        }
        Layer::new(segs)
    }

    /// Whether the spacer vertex's out-edges at level `n` lead anywhere but
    /// the next spacer vertex.
    pub fn spacer_branches(&self, n: usize) -> bool {
        self.out_degree(n, self.spacer(n)) > 1
    }

    /// Sum of `dim` over level `n`, i.e. the number of root segments of length `n`.
    pub fn segment_count(&self, n: usize) -> BigUint {
        self.dims(n).into_iter().fold(BigUint::zero(), |a, b| a + b)
    }
}
