//! The Vershik successor on finite path prefixes and k-codings of orbits.
//!
//! Paths are compared at the deepest edge where they differ, so the successor
//! increments the shallowest non-maximal edge and resets every shallower
//! edge to the minimal path into its new source.

use crate::blocks::{Alphabet, BlockDag};
use crate::{Error, Letter, OrderedDiagram, Result, Word};

/// A path from the root through levels `1..=depth`, one `(target, xi)` per
/// edge: `edges[i]` enters `v(i + 1, target)` with order `xi`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PathPrefix {
    edges: Vec<(usize, usize)>,
    on_spacer: bool,
}

/// Outcome of one successor step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    Next(PathPrefix),
    /// Every edge is maximal; the prefix must be deepened first.
    CarryOverflow,
    /// The spacer path, which the transformation fixes.
    FixedPoint,
}

impl PathPrefix {
    /// Checks that consecutive edges compose.
    pub fn new(diagram: &OrderedDiagram, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut above = 1;
        for (i, &(t, xi)) in edges.iter().enumerate() {
            let n = i + 1;
            diagram.check_vertex(n, t)?;
            if xi == 0 || xi > diagram.in_degree(n, t) {
                return Err(Error::contract(format!(
                    "edge order {} into v({},{}) outside 1..={}",
                    xi,
                    n,
                    t,
                    diagram.in_degree(n, t)
                )));
            }
            if diagram.source(n, t, xi) != above {
                return Err(Error::contract(format!("edge into v({},{}) does not start at v({},{})", n, t, i, above)));
            }
            above = t;
        }
        let on_spacer = edges.iter().enumerate().all(|(i, &(t, _))| t == diagram.spacer(i + 1));
        Ok(PathPrefix { edges, on_spacer })
    }

    pub fn depth(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Vertex reached at the bottom of the prefix (`1` for the empty prefix).
    pub fn top(&self) -> usize {
        self.edges.last().map_or(1, |e| e.0)
    }

    pub fn on_spacer(&self) -> bool {
        self.on_spacer
    }

    /// Symbol of `alpha_k` for the prefix's first `k` edges.
    pub fn symbol(&self, alphabet: &Alphabet) -> Letter {
        alphabet.label(&self.edges)
    }

    /// Successor, allocating a fresh prefix.
    pub fn successor(&self, diagram: &OrderedDiagram) -> Step {
        let mut next = self.clone();
        match next.advance(diagram) {
            Ok(true) => Step::Next(next),
            Ok(false) => Step::CarryOverflow,
            Err(()) => Step::FixedPoint,
        }
    }

    /// In-place successor: `Ok(false)` on carry overflow, `Err` at the spacer path.
    fn advance(&mut self, diagram: &OrderedDiagram) -> std::result::Result<bool, ()> {
        if self.on_spacer {
            return Err(());
        }
        let Some(i) = (0..self.edges.len()).find(|&i| {
            let (t, xi) = self.edges[i];
            xi < diagram.in_degree(i + 1, t)
        }) else {
            return Ok(false);
        };
        let (t, xi) = self.edges[i];
        self.edges[i] = (t, xi + 1);
        let mut v = diagram.source(i + 1, t, xi + 1);
        for l in (0..i).rev() {
            self.edges[l] = (v, 1);
            v = diagram.source(l + 1, v, 1);
        }
        Ok(true)
    }

    /// Extends by one edge out of the top vertex: the smallest order, then
    /// a target lying on a minimal thread, then the smallest target.
    fn deepen(&mut self, diagram: &OrderedDiagram, thread: &MinimalThread) -> bool {
        let n = self.depth();
        if !diagram.has_level(n + 1) {
            return false;
        }
        let g = self.top();
        let mut best: Option<(usize, bool, usize)> = None;
        for t in 1..=diagram.vertex_count(n + 1) {
            if let Some(xi) = diagram.in_edges(n + 1, t).iter().position(|&s| s == g) {
                let key = (xi + 1, !thread.is_cyclic(diagram, n + 1, t), t);
                if best.is_none_or(|b| key < b) {
                    best = Some(key);
                }
            }
        }
        match best {
            Some((xi, _, t)) => {
                self.edges.push((t, xi));
                true
            }
            None => false,
        }
    }
}

/// The all-minimal path into `v(n, j)`.
pub fn minimal_prefix(diagram: &OrderedDiagram, n: usize, j: usize) -> Result<PathPrefix> {
    diagram.check_vertex(n, j)?;
    let mut edges = vec![(0, 0); n];
    let mut v = j;
    for l in (1..=n).rev() {
        edges[l - 1] = (v, 1);
        v = diagram.source(l, v, 1);
    }
    PathPrefix::new(diagram, edges)
}

/// The spacer path through level `depth`.
pub fn spacer_prefix(diagram: &OrderedDiagram, depth: usize) -> Result<PathPrefix> {
    minimal_prefix(diagram, depth, diagram.spacer(depth))
}

/// Why orbit generation stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    Length,
    /// A carry escaped the deepest available level.
    CarryOverflow { depth: usize },
    FixedPoint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitCoding {
    pub start: PathPrefix,
    pub k: usize,
    pub word: Word,
    pub steps: usize,
    pub reason: Termination,
}

/// Deepening steps allowed for one carry before giving up.
fn deepening_cap(diagram: &OrderedDiagram) -> usize {
    let widest = (0..=diagram.explicit_layers()).map(|n| diagram.k(n)).max().unwrap_or(0);
    4 * (widest + 2) + 64
}

/// `phi_k` along the orbit of `start` for up to `len` steps.
pub fn code_orbit(diagram: &OrderedDiagram, start: &PathPrefix, k: usize, len: usize) -> Result<OrbitCoding> {
    if k == 0 || k > start.depth() {
        return Err(Error::contract(format!(
            "coding depth {} needs 1 <= k <= prefix depth {}",
            k,
            start.depth()
        )));
    }
    let alphabet = Alphabet::new(diagram, k)?;
    let thread = MinimalThread::new(diagram);
    let cap = deepening_cap(diagram);
    let mut word = Word::empty();
    let mut x = start.clone();
    let mut reason = Termination::Length;
    if len > 0 {
        word.push(x.symbol(&alphabet));
    }
    'orbit: while word.len() < len {
        let mut deepened = 0;
        loop {
            match x.advance(diagram) {
                Ok(true) => break,
                Err(()) => {
                    while word.len() < len {
                        word.push(Letter::SPACER);
                    }
                    reason = Termination::FixedPoint;
                    break 'orbit;
                }
                Ok(false) => {
                    if deepened >= cap || !x.deepen(diagram, &thread) {
                        reason = Termination::CarryOverflow { depth: x.depth() };
                        break 'orbit;
                    }
                    deepened += 1;
                }
            }
        }
        word.push(x.symbol(&alphabet));
    }
    Ok(OrbitCoding {
        start: start.clone(),
        k,
        steps: word.len(),
        word,
        reason,
    })
}

/// The minimal path the analyses follow: for stationary diagrams it runs
/// through the smallest non-spacer vertex on a cycle of the minimal-edge map
/// of the repeating layer; for finite diagrams it ends at `v(depth, 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalThread {
    /// Level from which the thread is read off `cycle`.
    anchor: usize,
    /// Vertices at levels `anchor, anchor+1, ..` repeating with this period.
    cycle: Vec<usize>,
    /// Vertices on any cycle of the repeating layer's minimal-edge map.
    cyclic: Vec<bool>,
}

impl MinimalThread {
    pub fn new(diagram: &OrderedDiagram) -> Self {
        Self::through(diagram, None)
    }

    /// The thread through a given cyclic vertex of the repeating level
    /// (ignored for finite diagrams, and when the vertex is not cyclic).
    pub fn through(diagram: &OrderedDiagram, vertex: Option<usize>) -> Self {
        match diagram.stationary_from() {
            Some(m) => {
                let sigma = minimal_edge_map(diagram, m + 1);
                let cyclic = cyclic_vertices(&sigma);
                let start = vertex
                    .map(|v| v - 1)
                    .filter(|&v| v < diagram.k(m) && cyclic[v])
                    .or_else(|| (0..diagram.k(m)).find(|&v| cyclic[v]))
                    .unwrap_or(0);
                // walk the cycle backwards: the vertex one level down maps onto the current one
                let mut cycle = vec![start];
                loop {
                    let cur = *cycle.last().unwrap();
                    let prev = (0..sigma.len()).find(|&t| cyclic[t] && sigma[t] == cur).unwrap_or(start);
                    if prev == start {
                        break;
                    }
                    cycle.push(prev);
                }
                MinimalThread {
                    anchor: m,
                    cycle: cycle.into_iter().map(|v| v + 1).collect(),
                    cyclic,
                }
            }
            None => MinimalThread {
                anchor: diagram.depth().unwrap(),
                cycle: vec![1],
                cyclic: Vec::new(),
            },
        }
    }

    /// Vertex of the thread at level `n`.
    pub fn vertex_at(&self, diagram: &OrderedDiagram, n: usize) -> usize {
        if n >= self.anchor {
            return self.cycle[(n - self.anchor) % self.cycle.len()];
        }
        let mut v = self.cycle[0];
        for l in (n + 1..=self.anchor).rev() {
            v = diagram.source(l, v, 1);
        }
        v
    }

    fn is_cyclic(&self, diagram: &OrderedDiagram, n: usize, t: usize) -> bool {
        match diagram.stationary_from() {
            Some(m) if n > m => self.cyclic.get(t - 1).copied().unwrap_or(false),
            _ => false,
        }
    }

    pub fn minimal_prefix(&self, diagram: &OrderedDiagram, n: usize) -> Result<PathPrefix> {
        minimal_prefix(diagram, n, self.vertex_at(diagram, n))
    }
}

/// `sigma[t-1] = source of the minimal edge into v(n, t)`, 0-based, over all
/// vertices including the spacer.
fn minimal_edge_map(diagram: &OrderedDiagram, n: usize) -> Vec<usize> {
    (1..=diagram.vertex_count(n)).map(|t| diagram.source(n, t, 1) - 1).collect()
}

fn cyclic_vertices(sigma: &[usize]) -> Vec<bool> {
    let mut image: Vec<usize> = (0..sigma.len()).collect();
    for _ in 0..sigma.len() {
        image = image.into_iter().map(|v| sigma[v]).collect();
    }
    let mut cyclic = vec![false; sigma.len()];
    for v in image {
        cyclic[v] = true;
    }
    cyclic
}

/// The first `len` symbols of `phi_k` along the designated minimal path,
/// expanded lazily from the block DAG. Shorter only if a finite diagram runs out.
pub fn minimal_orbit_prefix(diagram: &OrderedDiagram, k: usize, len: u64, level_cap: usize) -> Result<Word> {
    thread_orbit_prefix(diagram, &MinimalThread::new(diagram), k, len, level_cap)
}

/// As [`minimal_orbit_prefix`], along a chosen thread.
pub fn thread_orbit_prefix(
    diagram: &OrderedDiagram,
    thread: &MinimalThread,
    k: usize,
    len: u64,
    level_cap: usize,
) -> Result<Word> {
    let (dag, n) = BlockDag::build_until(diagram, k, |n| thread.vertex_at(diagram, n), len, level_cap)?;
    let block = dag.block(n, thread.vertex_at(diagram, n))?;
    let take = block.len_u64().map_or(len, |l| l.min(len));
    block.expand(0, take)
}

/// How many minimal paths avoid the spacer path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Census {
    pub minimal_paths: usize,
    /// Exact for stationary diagrams; otherwise an upper bound at `horizon`.
    pub exact: bool,
    pub horizon: usize,
    /// Non-spacer vertices carrying a minimal thread (at the repeating level
    /// for stationary diagrams).
    pub vertices: Vec<usize>,
}

pub fn minimal_path_census(diagram: &OrderedDiagram, horizon: usize) -> Result<Census> {
    if horizon < 2 {
        return Err(Error::contract("the census needs a horizon of at least 2"));
    }
    match diagram.stationary_from() {
        Some(m) => {
            let cyclic = cyclic_vertices(&minimal_edge_map(diagram, m + 1));
            let vertices: Vec<usize> = (1..=diagram.k(m)).filter(|&v| cyclic[v - 1]).collect();
            Ok(Census {
                minimal_paths: vertices.len(),
                exact: true,
                horizon,
                vertices,
            })
        }
        None => {
            let h = horizon.min(diagram.depth().unwrap()).max(1);
            let mut vertices: Vec<usize> = (1..=diagram.k(h)).map(|t| diagram.source(h, t, 1)).collect();
            vertices.sort_unstable();
            vertices.dedup();
            Ok(Census {
                minimal_paths: vertices.len(),
                exact: false,
                horizon: h,
                vertices,
            })
        }
    }
}

/// Evidence for the two sufficient conditions for a transitive minimal path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitiveReport {
    pub horizon: usize,
    /// Levels `n` with level `n + 1` semi n-periodic.
    pub semi_levels: Vec<usize>,
    /// Levels `n` whose spacer vertex feeds more than the next spacer.
    pub spacer_branch_levels: Vec<usize>,
    /// For stationary diagrams, whether each condition holds infinitely often.
    pub infinitely_often: Option<(bool, bool)>,
}

pub fn transitive_conditions(diagram: &OrderedDiagram, horizon: usize) -> Result<TransitiveReport> {
    if horizon < 2 {
        return Err(Error::contract("transitivity checks need a horizon of at least 2"));
    }
    let top = match diagram.depth() {
        Some(d) => horizon.min(d.saturating_sub(1)),
        None => horizon,
    };
    let mut semi_levels = Vec::new();
    let mut spacer_branch_levels = Vec::new();
    for n in 1..=top {
        if crate::analysis::semi::semi_periodic_by_vertices(diagram, n)? {
            semi_levels.push(n);
        }
        if diagram.spacer_branches(n) {
            spacer_branch_levels.push(n);
        }
    }
    let infinitely_often = match diagram.stationary_from() {
        Some(m) => {
            // from level m + 1 on, the vertex-level picture repeats exactly
            let rep = m + 1;
            Some((
                crate::analysis::semi::semi_periodic_by_vertices(diagram, rep)?,
                diagram.spacer_branches(rep),
            ))
        }
        None => None,
    };
    Ok(TransitiveReport {
        horizon: top,
        semi_levels,
        spacer_branch_levels,
        infinitely_often,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::basic_block;
    use crate::diagram::RecursionTable;

    fn fig1b() -> OrderedDiagram {
        OrderedDiagram::from_recursion(&RecursionTable::rank_one(&[vec![1], vec![1, 0]], Some(2))).unwrap()
    }

    fn chacon() -> OrderedDiagram {
        OrderedDiagram::from_recursion(&RecursionTable::rank_one(&[vec![0, 1, 0]], Some(1))).unwrap()
    }

    #[test]
    fn successor_walks_block() {
        let d = fig1b();
        let x = minimal_prefix(&d, 2, 1).unwrap();
        assert_eq!(x.edges(), &[(1, 1), (1, 1)]);
        let Step::Next(y) = x.successor(&d) else { panic!() };
        assert_eq!(y.edges(), &[(2, 1), (1, 2)]);
        assert_eq!(y.successor(&d), Step::CarryOverflow);
        assert_eq!(spacer_prefix(&d, 3).unwrap().successor(&d), Step::FixedPoint);
        assert!(minimal_prefix(&d, 3, 2).unwrap().on_spacer());
    }

    #[test]
    fn orbit_of_minimal_prefix_is_block() {
        let d = fig1b();
        let c = code_orbit(&d, &minimal_prefix(&d, 4, 1).unwrap(), 1, 11).unwrap();
        assert_eq!(c.word.to_string(), "0ss0ss0ss0s");
        assert_eq!(c.reason, Termination::Length);
        let b = basic_block(&d, 4, 1, 2).unwrap().expand_all(100).unwrap();
        assert_eq!(code_orbit(&d, &minimal_prefix(&d, 4, 1).unwrap(), 2, 11).unwrap().word, b);
    }

    #[test]
    fn orbit_deepens_past_prefix() {
        let d = chacon();
        let c = code_orbit(&d, &minimal_prefix(&d, 1, 1).unwrap(), 1, 9).unwrap();
        assert_eq!(c.word.to_string(), "00s000s0s");
        assert_eq!(c.steps, 9);
        assert_eq!(minimal_orbit_prefix(&d, 1, 13, 64).unwrap().to_string(), "00s000s0s00s0");
    }

    #[test]
    fn spacer_orbit_is_constant() {
        let d = chacon();
        let c = code_orbit(&d, &spacer_prefix(&d, 2).unwrap(), 1, 4).unwrap();
        assert_eq!(c.word.to_string(), "ssss");
        assert_eq!(c.reason, Termination::FixedPoint);
    }

    #[test]
    fn finite_diagrams_run_out() {
        let t = RecursionTable::rank_one(&[vec![1], vec![1, 0]], None);
        let d = OrderedDiagram::from_recursion(&t).unwrap();
        let c = code_orbit(&d, &minimal_prefix(&d, 1, 1).unwrap(), 1, 50).unwrap();
        assert_eq!(c.word.to_string(), "0ss0s");
        assert_eq!(c.reason, Termination::CarryOverflow { depth: 3 });
    }

    #[test]
    fn chacon_census() {
        let c = minimal_path_census(&chacon(), 5).unwrap();
        assert_eq!((c.minimal_paths, c.exact), (1, true));
        let t = transitive_conditions(&chacon(), 4).unwrap();
        assert_eq!(t.spacer_branch_levels, vec![1, 2, 3, 4]);
        assert_eq!(t.infinitely_often.map(|x| x.1), Some(true));
    }
}
