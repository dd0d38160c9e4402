use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::{Alphabet, Letter, Word};
use crate::analysis::words::KmpMatcher;
use crate::{Error, OrderedDiagram, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Piece {
    Block(usize),
    Spacers(u64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Kind {
    /// A level-k block: consecutive symbols `first..first+len`.
    Seed { first: u32, len: u64 },
    Spacer,
    Composite(Vec<Piece>),
}

#[derive(Debug)]
struct Node {
    level: usize,
    vertex: usize,
    kind: Kind,
    len: BigUint,
    /// `len` saturated to `u64`; exact whenever it is below `u64::MAX`.
    len_sat: u64,
}

#[derive(Debug)]
struct Inner {
    k: usize,
    max_level: usize,
    alphabet: Alphabet,
    /// `level_start[n - k]` is the node id of `v(n, 1)`.
    level_start: Vec<usize>,
    nodes: Vec<Node>,
}

/// All basic blocks `B^(k)(n, j)` for `k <= n <= max_level`, stored once each
/// with structure sharing. Cloning is cheap; the DAG is immutable.
#[derive(Debug, Clone)]
pub struct BlockDag(Arc<Inner>);

/// A node of a [`BlockDag`], i.e. one basic block.
#[derive(Debug, Clone)]
pub struct BlockHandle {
    dag: BlockDag,
    node: usize,
}

impl BlockDag {
    /// Builds every block from level `k` down to `max_level`. The diagram must
    /// satisfy C1-C3.
    pub fn build(diagram: &OrderedDiagram, k: usize, max_level: usize) -> Result<BlockDag> {
        if k > max_level {
            return Err(Error::contract(format!(
                "coding depth {} exceeds block level {}",
                k, max_level
            )));
        }
        if !diagram.has_level(max_level) {
            return Err(Error::contract(format!("level {} is beyond the diagram", max_level)));
        }
        diagram.check_coding_conditions()?;
        let alphabet = Alphabet::new(diagram, k)?;
        let mut nodes = Vec::new();
        let mut level_start = Vec::with_capacity(max_level - k + 1);

        level_start.push(0);
        for j in 1..=diagram.vertex_count(k) {
            let kind = if j == diagram.spacer(k) {
                Kind::Spacer
            } else {
                Kind::Seed {
                    first: alphabet.first_symbol(j).0,
                    len: alphabet.dim(k, j),
                }
            };
            let len = if j == diagram.spacer(k) {
                BigUint::from(1u32)
            } else {
                BigUint::from(alphabet.dim(k, j))
            };
            nodes.push(node(k, j, kind, len));
        }

        for n in k + 1..=max_level {
            let above = *level_start.last().unwrap();
            level_start.push(nodes.len());
            let spacer_above = diagram.spacer(n - 1);
            for j in 1..=diagram.vertex_count(n) {
                if j == diagram.spacer(n) {
                    nodes.push(node(n, j, Kind::Spacer, BigUint::from(1u32)));
                    continue;
                }
                let mut pieces: Vec<Piece> = Vec::new();
                let mut len = BigUint::default();
                for &g in diagram.in_edges(n, j) {
                    if g == spacer_above {
                        len += 1u32;
                        match pieces.last_mut() {
                            Some(Piece::Spacers(a)) => *a += 1,
                            _ => pieces.push(Piece::Spacers(1)),
                        }
                    } else {
                        let child = above + g - 1;
                        len += &nodes[child].len;
                        pieces.push(Piece::Block(child));
                    }
                }
                nodes.push(node(n, j, Kind::Composite(pieces), len));
            }
        }
        Ok(BlockDag(Arc::new(Inner {
            k,
            max_level,
            alphabet,
            level_start,
            nodes,
        })))
    }

    /// Builds levels `k..` until `B(n, j)` at the returned level has at least
    /// `min_len` symbols, or the diagram (or `level_cap`) runs out.
    pub fn build_until(
        diagram: &OrderedDiagram,
        k: usize,
        j_at: impl Fn(usize) -> usize,
        min_len: u64,
        level_cap: usize,
    ) -> Result<(BlockDag, usize)> {
        let dims = diagram.dims_saturating(level_cap.min(diagram.depth().unwrap_or(level_cap)));
        let top = dims.len() - 1;
        let mut n = k.max(1);
        while n < top && dims[n][j_at(n) - 1] < min_len {
            n += 1;
        }
        Ok((BlockDag::build(diagram, k, n)?, n))
    }

    pub fn k(&self) -> usize {
        self.0.k
    }

    pub fn max_level(&self) -> usize {
        self.0.max_level
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.0.alphabet
    }

    fn id(&self, n: usize, j: usize) -> Option<usize> {
        if n < self.0.k || n > self.0.max_level {
            return None;
        }
        let i = n - self.0.k;
        let start = self.0.level_start[i];
        let end = self.0.level_start.get(i + 1).copied().unwrap_or(self.0.nodes.len());
        (j >= 1 && start + j - 1 < end).then_some(start + j - 1)
    }

    /// Handle for `B^(k)(n, j)`.
    pub fn block(&self, n: usize, j: usize) -> Result<BlockHandle> {
        self.id(n, j)
            .map(|node| BlockHandle {
                dag: self.clone(),
                node,
            })
            .ok_or_else(|| {
                Error::contract(format!(
                    "B({},{}) not in the block DAG (levels {}..={})",
                    n, j, self.0.k, self.0.max_level
                ))
            })
    }

    /// Sequence of level-`k` vertices obtained by descending `B(n, j)` to the
    /// seed blocks, one entry per explicit appearance (spacer included).
    pub fn vertex_coding(&self, n: usize, j: usize, limit: u64) -> Result<Vec<usize>> {
        let h = self.block(n, j)?;
        let mut out = Vec::new();
        let mut stack = vec![h.node];
        while let Some(id) = stack.pop() {
            let nd = &self.0.nodes[id];
            if nd.level == self.0.k {
                out.push(nd.vertex);
            } else if let Kind::Composite(pieces) = &nd.kind {
                for p in pieces.iter().rev() {
                    match *p {
                        Piece::Block(c) => stack.push(c),
                        Piece::Spacers(a) => {
                            for _ in 0..a {
                                stack.push(self.spacer_node(nd.level - 1));
                            }
                        }
                    }
                }
            } else {
                stack.push(self.spacer_node(nd.level - 1));
            }
            if out.len() as u64 > limit {
                return Err(Error::Resource {
                    level: n,
                    length: format!("more than {}", limit),
                    limit,
                });
            }
        }
        Ok(out)
    }

    fn spacer_node(&self, n: usize) -> usize {
        let i = n - self.0.k;
        self.0.level_start.get(i + 1).copied().unwrap_or(self.0.nodes.len()) - 1
    }

    /// Positions in `B(m, i)` at which `B(n, j)` appears explicitly, found by
    /// descending the recursion. At most `limit` positions are produced.
    pub fn explicit_positions(&self, n: usize, j: usize, m: usize, i: usize, limit: u64) -> Result<Vec<u64>> {
        let target = self.block(n, j)?.node;
        let outer = self.block(m, i)?;
        if n > m {
            return Err(Error::contract(format!("explicit positions need n <= m, got {} > {}", n, m)));
        }
        if outer.len_u64().is_none() {
            return Err(Error::Resource {
                level: m,
                length: outer.len().to_string(),
                limit: u64::MAX,
            });
        }
        // appearances of the target below every node from level n to m
        let lo = self.0.level_start[n - self.0.k];
        let hi = outer.node + 1;
        let mut count = vec![0u64; hi - lo];
        count[target - lo] = 1;
        for id in lo..hi {
            if self.0.nodes[id].level == n {
                continue;
            }
            count[id - lo] = match &self.0.nodes[id].kind {
                Kind::Composite(pieces) => pieces
                    .iter()
                    .map(|p| match *p {
                        Piece::Block(c) => count[c - lo],
                        Piece::Spacers(a) => a.saturating_mul(self.spacer_count(c_spacer(self, id), lo, &count)),
                    })
                    .fold(0u64, u64::saturating_add),
                _ => self.spacer_count(c_spacer(self, id), lo, &count),
            };
        }
        if count[outer.node - lo] > limit {
            return Err(Error::Resource {
                level: m,
                length: count[outer.node - lo].to_string(),
                limit,
            });
        }

        let mut out = Vec::new();
        let mut stack = vec![(outer.node, 0u64)];
        while let Some((id, at)) = stack.pop() {
            if count[id - lo] == 0 {
                continue;
            }
            let nd = &self.0.nodes[id];
            if nd.level == n {
                out.push(at);
                continue;
            }
            match &nd.kind {
                Kind::Composite(pieces) => {
                    let mut pos = at;
                    let spacer = c_spacer(self, id);
                    let mut pending = Vec::new();
                    for p in pieces {
                        match *p {
                            Piece::Block(c) => {
                                pending.push((c, pos));
                                pos += self.0.nodes[c].len_sat;
                            }
                            Piece::Spacers(a) => {
                                for r in 0..a {
                                    pending.push((spacer, pos + r));
                                }
                                pos += a;
                            }
                        }
                    }
                    stack.extend(pending.into_iter().rev());
                }
                // spacer blocks descend to the spacer block one level up
                _ => stack.push((self.spacer_node(nd.level - 1), at)),
            }
        }
        Ok(out)
    }

    fn spacer_count(&self, spacer_id: usize, lo: usize, count: &[u64]) -> u64 {
        if spacer_id < lo {
            0
        } else {
            count[spacer_id - lo]
        }
    }

    /// Every position where `pattern` occurs in the expansion of `outer`,
    /// by streaming failure-function matching.
    pub fn all_occurrences(&self, outer: &BlockHandle, pattern: &Word) -> Result<Vec<u64>> {
        if pattern.is_empty() {
            return Err(Error::contract("occurrences of the empty word are not defined"));
        }
        let mut kmp = KmpMatcher::new(pattern.letters());
        let plen = pattern.len() as u64;
        let mut out = Vec::new();
        for (i, l) in outer.letters().enumerate() {
            if kmp.feed(l) {
                out.push(i as u64 + 1 - plen);
            }
        }
        Ok(out)
    }
}

/// Spacer node one level above a composite node.
fn c_spacer(dag: &BlockDag, id: usize) -> usize {
    dag.spacer_node(dag.0.nodes[id].level - 1)
}

fn node(level: usize, vertex: usize, kind: Kind, len: BigUint) -> Node {
    let len_sat = len.to_u64().unwrap_or(u64::MAX);
    Node {
        level,
        vertex,
        kind,
        len,
        len_sat,
    }
}

impl BlockHandle {
    pub fn level(&self) -> usize {
        self.dag.0.nodes[self.node].level
    }

    pub fn vertex(&self) -> usize {
        self.dag.0.nodes[self.node].vertex
    }

    pub fn k(&self) -> usize {
        self.dag.0.k
    }

    pub fn dag(&self) -> &BlockDag {
        &self.dag
    }

    /// Exact length, equal to `dim(n, j)`.
    pub fn len(&self) -> &BigUint {
        &self.dag.0.nodes[self.node].len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Length when it fits in `u64`.
    pub fn len_u64(&self) -> Option<u64> {
        let l = self.dag.0.nodes[self.node].len_sat;
        (l != u64::MAX).then_some(l)
    }

    /// Child blocks and spacer runs as `(Some(vertex), 0)` or `(None, run)`.
    pub fn pieces(&self) -> Vec<(Option<usize>, u64)> {
        match &self.dag.0.nodes[self.node].kind {
            Kind::Composite(ps) => ps
                .iter()
                .map(|p| match *p {
                    Piece::Block(c) => (Some(self.dag.0.nodes[c].vertex), 0),
                    Piece::Spacers(a) => (None, a),
                })
                .collect(),
            _ => Vec::new(),
        }
    }

    /// Streams the whole expansion.
    pub fn letters(&self) -> Letters<'_> {
        Letters {
            nodes: &self.dag.0.nodes,
            stack: vec![Frame::start(self.node)],
        }
    }

    /// Streams the expansion from `offset` on.
    pub fn letters_from(&self, offset: u64) -> Result<Letters<'_>> {
        let len = self.dag.0.nodes[self.node].len_sat;
        if offset > len {
            return Err(Error::contract(format!("offset {} beyond block length {}", offset, len)));
        }
        let nodes = &self.dag.0.nodes;
        let mut stack = Vec::new();
        let mut id = self.node;
        let mut rem = offset;
        loop {
            let nd = &nodes[id];
            match &nd.kind {
                Kind::Seed { .. } | Kind::Spacer => {
                    stack.push(Frame {
                        node: id,
                        piece: 0,
                        within: rem,
                    });
                    break;
                }
                Kind::Composite(pieces) => {
                    let mut idx = 0;
                    let mut descend = None;
                    while idx < pieces.len() {
                        let plen = match pieces[idx] {
                            Piece::Block(c) => nodes[c].len_sat,
                            Piece::Spacers(a) => a,
                        };
                        if rem < plen {
                            break;
                        }
                        rem -= plen;
                        idx += 1;
                    }
                    match pieces.get(idx) {
                        Some(Piece::Block(c)) => {
                            stack.push(Frame {
                                node: id,
                                piece: idx + 1,
                                within: 0,
                            });
                            descend = Some(*c);
                        }
                        Some(Piece::Spacers(_)) => stack.push(Frame {
                            node: id,
                            piece: idx,
                            within: rem,
                        }),
                        None => stack.push(Frame {
                            node: id,
                            piece: idx,
                            within: 0,
                        }),
                    }
                    match descend {
                        Some(c) => id = c,
                        None => break,
                    }
                }
            }
        }
        Ok(Letters { nodes, stack })
    }

    /// The subword `[offset, offset + len)`.
    pub fn expand(&self, offset: u64, len: u64) -> Result<Word> {
        let total = self.dag.0.nodes[self.node].len_sat;
        if offset.checked_add(len).is_none_or(|end| end > total) {
            return Err(Error::contract(format!(
                "window [{}, {}+{}) outside block of length {}",
                offset,
                offset,
                len,
                self.len()
            )));
        }
        let cap = usize::try_from(len).map_err(|_| Error::contract("window exceeds address space"))?;
        let mut w = Vec::with_capacity(cap);
        w.extend(self.letters_from(offset)?.take(cap));
        Ok(Word::new(w))
    }

    /// The whole block, refusing anything longer than `limit`.
    pub fn expand_all(&self, limit: u64) -> Result<Word> {
        match self.len_u64() {
            Some(l) if l <= limit => self.expand(0, l),
            _ => Err(Error::Resource {
                level: self.level(),
                length: self.len().to_string(),
                limit,
            }),
        }
    }

    pub fn first(&self) -> Letter {
        self.letters().next().expect("blocks are nonempty")
    }
}

#[derive(Debug, Clone, Copy)]
struct Frame {
    node: usize,
    piece: usize,
    within: u64,
}

impl Frame {
    fn start(node: usize) -> Self {
        Frame {
            node,
            piece: 0,
            within: 0,
        }
    }
}

/// Streaming expansion of a block; memory is proportional to the DAG depth.
pub struct Letters<'a> {
    nodes: &'a [Node],
    stack: Vec<Frame>,
}

impl Iterator for Letters<'_> {
    type Item = Letter;

    fn next(&mut self) -> Option<Letter> {
        loop {
            let top = self.stack.last_mut()?;
            match &self.nodes[top.node].kind {
                Kind::Seed { first, len } => {
                    if top.within < *len {
                        let l = Letter(first + top.within as u32);
                        top.within += 1;
                        return Some(l);
                    }
                    self.stack.pop();
                }
                Kind::Spacer => {
                    if top.within == 0 {
                        top.within = 1;
                        return Some(Letter::SPACER);
                    }
                    self.stack.pop();
                }
                Kind::Composite(pieces) => match pieces.get(top.piece) {
                    None => {
                        self.stack.pop();
                    }
                    Some(Piece::Block(c)) => {
                        top.piece += 1;
                        let c = *c;
                        self.stack.push(Frame::start(c));
                    }
                    Some(Piece::Spacers(a)) => {
                        if top.within < *a {
                            top.within += 1;
                            return Some(Letter::SPACER);
                        }
                        top.piece += 1;
                        top.within = 0;
                    }
                },
            }
        }
    }
}
