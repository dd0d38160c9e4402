//! Periodicity verdicts for k-codings of the minimal path, and the
//! odometer-plus-fixed-point test.
//!
//! Exact verdicts come only from the structural route on stationary
//! diagrams; generated prefixes serve as corroborating evidence, and a prefix
//! of length `L` certifies nothing beyond "no period <= L/2".

use std::collections::HashSet;

use super::ldc::{check_deficits, ldc_with_dag, propagate, rows, LdcReport};
use super::semi::{factor_blocks, DEFAULT_MAX_LEN};
use super::words::{certified_period, least_period, primitive_root};
use crate::blocks::BlockDag;
use crate::coding::{minimal_orbit_prefix, minimal_path_census, thread_orbit_prefix, Census, MinimalThread};
use crate::{Error, Layer, OrderedDiagram, Result, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicityOptions {
    /// Deepest level examined for finite diagrams and for the census.
    pub horizon: usize,
    pub prefix_len: u64,
    /// Longest block the semi-periodicity checks may expand.
    pub max_len: u64,
    pub level_cap: usize,
}

impl Default for PeriodicityOptions {
    fn default() -> Self {
        PeriodicityOptions {
            horizon: 8,
            prefix_len: 10_000,
            max_len: DEFAULT_MAX_LEN,
            level_cap: 64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// The coding is eventually `period^∞`; LDC holds at every level from `from_level`.
    Periodic { period: Word, from_level: usize },
    Aperiodic,
    /// Finite diagram: LDC held at every checked level from `from_level` to `horizon`.
    PeriodicThrough { from_level: usize, horizon: usize },
    AperiodicEvidence { horizon: usize },
    /// Several minimal threads and mixed prefix evidence; not analyzed further.
    MultiMinimal { paths: usize },
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Periodic { .. } => "periodic",
            Verdict::Aperiodic => "aperiodic",
            Verdict::PeriodicThrough { .. } => "periodic-through",
            Verdict::AperiodicEvidence { .. } => "aperiodic-evidence",
            Verdict::MultiMinimal { .. } => "multi-minimal",
        }
    }

    /// 0 periodic, 1 aperiodic, 3 horizon-limited or undetermined.
    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::Periodic { .. } => 0,
            Verdict::Aperiodic => 1,
            _ => 3,
        }
    }
}

/// What a generated prefix says on its own.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixEvidence {
    pub len: usize,
    pub least_period: usize,
    /// The least period, if the prefix holds two full copies of it.
    pub certified: Option<usize>,
    /// Whether the prefix corroborates the verdict.
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicityReport {
    pub k: usize,
    pub verdict: Verdict,
    pub census: Census,
    /// `(n, LDC(n, k) passed)` for every level checked.
    pub levels: Vec<(usize, bool)>,
    /// Why the last failing level failed.
    pub refutation: Option<String>,
    pub prefix: Option<PrefixEvidence>,
    /// Repeating-level vertices that never feed the minimal thread. Their
    /// blocks cannot reach its coding, so the LDC scan runs without them.
    pub unreachable: Vec<usize>,
}

/// Human-readable reason an LDC report fails.
pub fn describe_failure(report: &LdcReport) -> Option<String> {
    let n = report.level;
    match (&report.semi, &report.failure) {
        (super::semi::SemiOutcome::NotSemiPeriodic(r), _) => Some(format!(
            "level {} is not semi {}-periodic: shortest block v({},{}), fails at v({},{}): {}",
            n, report.k, n, r.witness, n, r.vertex, r.reason
        )),
        (_, Some(f)) => Some(format!(
            "in B({},{}) appearance {} of B({},{}) is followed by {} spacers, expected {}{}",
            n + 1,
            f.vertex,
            f.appearance,
            n,
            f.block,
            f.found,
            if f.last { "at most " } else { "" },
            f.expected
        )),
        _ => None,
    }
}

/// Deepest level in `0..=cap` whose blocks all fit in `max_len`.
fn expandable_top(diagram: &OrderedDiagram, cap: usize, max_len: u64) -> Option<usize> {
    let dims = diagram.dims_saturating(cap);
    (0..=cap).rev().find(|&n| dims[n].iter().all(|&d| d <= max_len))
}

/// Bound on l-vector iterations; the map is deterministic on `{0..=c}^K`,
/// so this only matters for very wide diagrams.
const ITERATION_CAP: usize = 100_000;

/// Whether LDC at every level after `n` follows from a pass at `n`: the
/// l-vector is pushed through the repeating rows until it revisits a state.
fn ldc_persists(report: &LdcReport, repeating: &[Vec<crate::diagram::RecursionStep>]) -> Option<bool> {
    let cert = report.certificate()?;
    let mut cert = cert.clone();
    let mut seen = HashSet::new();
    for _ in 0..ITERATION_CAP {
        if !seen.insert(cert.l.clone()) {
            return Some(true);
        }
        let (t, l) = propagate(&cert, repeating);
        if check_deficits(repeating, cert.c, &l).1.is_some() {
            return Some(false);
        }
        cert.t = t;
        cert.l = l;
    }
    None
}

pub fn k_coding_periodicity(diagram: &OrderedDiagram, k: usize, opts: &PeriodicityOptions) -> Result<PeriodicityReport> {
    if k == 0 {
        return Err(Error::contract("coding depth k must be at least 1"));
    }
    let census = minimal_path_census(diagram, opts.horizon.max(2))?;
    match diagram.stationary_from() {
        Some(m) if census.minimal_paths == 1 => match thread_core(diagram, k, m)? {
            Some((core, dropped)) => {
                let from = core.stationary_from().unwrap();
                let mut report = stationary_verdict(&core, k, from, census, opts)?;
                report.unreachable = dropped;
                Ok(report)
            }
            None => stationary_verdict(diagram, k, m, census, opts),
        },
        Some(m) => stationary_verdict(diagram, k, m, census, opts),
        None => finite_verdict(diagram, k, census, opts),
    }
}

/// The part of a stationary diagram above level `k` that feeds the unique
/// minimal thread, with the diagram unrolled to repeat from `max(k + 1, m)`.
/// Levels up to `k` are kept whole so the alphabet does not change. Returns
/// `None` when every vertex feeds the thread, i.e. the thread is already
/// forward transitive.
fn thread_core(diagram: &OrderedDiagram, k: usize, m: usize) -> Result<Option<(OrderedDiagram, Vec<usize>)>> {
    let kk = diagram.k(m);
    let spacer = diagram.spacer(m);
    // the thread's vertex is a fixed point of the minimal-edge map, so
    // reaching it once means reaching it at every deeper level
    let c = MinimalThread::new(diagram).vertex_at(diagram, m);
    let mut feeds = vec![false; kk + 1];
    feeds[c] = true;
    let mut stack = vec![c];
    while let Some(t) = stack.pop() {
        for &g in diagram.in_edges(m + 1, t) {
            if g != spacer && !feeds[g] {
                feeds[g] = true;
                stack.push(g);
            }
        }
    }
    let dropped: Vec<usize> = (1..=kk).filter(|&g| !feeds[g]).collect();
    let top = m.max(k + 1);
    // keep[n]: non-spacer vertices kept at level n, for n in 0..=top+1
    let mut keep: Vec<Vec<usize>> = vec![Vec::new(); top + 2];
    for n in (0..=top + 1).rev() {
        keep[n] = if n <= k {
            (1..=diagram.k(n)).collect()
        } else if n >= m {
            (1..=kk).filter(|&g| feeds[g]).collect()
        } else {
            let below = &keep[n + 1];
            let sp = diagram.spacer(n);
            let mut used = vec![false; diagram.k(n) + 1];
            for &t in below {
                for &g in diagram.in_edges(n + 1, t) {
                    if g != sp {
                        used[g] = true;
                    }
                }
            }
            (1..=diagram.k(n)).filter(|&g| used[g]).collect()
        };
    }
    if (0..=top + 1).all(|n| keep[n].len() == diagram.k(n)) {
        return Ok(None);
    }
    let renumber = |n: usize| {
        let mut map = vec![0usize; diagram.vertex_count(n) + 1];
        for (i, &g) in keep[n].iter().enumerate() {
            map[g] = i + 1;
        }
        map[diagram.spacer(n)] = keep[n].len() + 1;
        map
    };
    let mut layers = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let map = renumber(n);
        let targets = keep[n + 1].iter().copied().chain(std::iter::once(diagram.spacer(n + 1)));
        let rows = targets
            .map(|t| diagram.in_edges(n + 1, t).iter().map(|&g| map[g]).collect())
            .collect();
        layers.push(Layer::new(rows));
    }
    let ks = keep.iter().map(Vec::len).collect();
    Ok(Some((OrderedDiagram::new(ks, layers, Some(top))?, dropped)))
}

fn stationary_verdict(
    diagram: &OrderedDiagram,
    k: usize,
    m: usize,
    census: Census,
    opts: &PeriodicityOptions,
) -> Result<PeriodicityReport> {
    let start = k.max(m).max(1);
    let top = expandable_top(diagram, opts.level_cap.max(start), opts.max_len).unwrap_or(0);
    if top < start {
        return Err(Error::Resource {
            level: start,
            length: format!("more than {}", opts.max_len),
            limit: opts.max_len,
        });
    }
    let dag = BlockDag::build(diagram, k, top)?;
    let repeating = rows(diagram, m)?;
    let mut levels = Vec::new();
    let mut refutation = None;
    for n in start..=top {
        let report = ldc_with_dag(&dag, diagram, n, opts.max_len)?;
        levels.push((n, report.pass()));
        if !report.pass() {
            refutation = describe_failure(&report);
            continue;
        }
        match ldc_persists(&report, &repeating) {
            Some(true) => {
                let cert = report.certificate().unwrap();
                let word = cert.period_word();
                let (root, _) = primitive_root(word.letters())?;
                let period = word.slice(0, root);
                let prefix = minimal_orbit_prefix(diagram, k, opts.prefix_len, opts.level_cap)?;
                let evidence = periodic_evidence(&prefix, &period);
                return Ok(PeriodicityReport {
                    k,
                    verdict: Verdict::Periodic { period, from_level: n },
                    census,
                    levels,
                    refutation: None,
                    prefix: Some(evidence),
                    unreachable: Vec::new(),
                });
            }
            Some(false) => {}
            None => {
                return Ok(PeriodicityReport {
                    k,
                    verdict: Verdict::PeriodicThrough { from_level: n, horizon: top },
                    census,
                    levels,
                    refutation: None,
                    prefix: None,
                    unreachable: Vec::new(),
                })
            }
        }
    }

    let prefix = minimal_orbit_prefix(diagram, k, opts.prefix_len, opts.level_cap)?;
    let evidence = aperiodic_evidence(&prefix);
    let verdict = if census.minimal_paths <= 1 {
        Verdict::Aperiodic
    } else {
        let mut all_aperiodic = true;
        for &v in &census.vertices {
            let thread = MinimalThread::through(diagram, Some(v));
            let w = thread_orbit_prefix(diagram, &thread, k, opts.prefix_len, opts.level_cap)?;
            all_aperiodic &= aperiodic_evidence(&w).agrees;
        }
        if all_aperiodic {
            Verdict::Aperiodic
        } else {
            Verdict::MultiMinimal {
                paths: census.minimal_paths,
            }
        }
    };
    Ok(PeriodicityReport {
        k,
        verdict,
        census,
        levels,
        refutation,
        prefix: Some(evidence),
        unreachable: Vec::new(),
    })
}

fn finite_verdict(diagram: &OrderedDiagram, k: usize, census: Census, opts: &PeriodicityOptions) -> Result<PeriodicityReport> {
    let depth = diagram.depth().unwrap();
    let cap = opts.horizon.min(depth.saturating_sub(1)).min(opts.level_cap);
    let top = expandable_top(diagram, cap, opts.max_len).unwrap_or(0);
    if top < k {
        return Err(Error::contract(format!(
            "no level n >= k = {} with level n + 1 available within the horizon",
            k
        )));
    }
    let dag = BlockDag::build(diagram, k, top)?;
    let mut levels = Vec::new();
    let mut refutation = None;
    for n in k..=top {
        let report = ldc_with_dag(&dag, diagram, n, opts.max_len)?;
        levels.push((n, report.pass()));
        if !report.pass() {
            refutation = describe_failure(&report);
        }
    }
    let from = levels.iter().rev().take_while(|l| l.1).last().map(|l| l.0);
    let prefix = minimal_orbit_prefix(diagram, k, opts.prefix_len, opts.level_cap)?;
    let (verdict, evidence) = match from {
        Some(n) => (
            Verdict::PeriodicThrough { from_level: n, horizon: top },
            prefix_evidence(&prefix, certified_period(prefix.letters()).is_some()),
        ),
        None => (Verdict::AperiodicEvidence { horizon: top }, Some(aperiodic_evidence(&prefix))),
    };
    Ok(PeriodicityReport {
        k,
        verdict,
        census,
        levels,
        refutation,
        prefix: evidence,
        unreachable: Vec::new(),
    })
}

fn prefix_evidence(prefix: &Word, agrees: bool) -> Option<PrefixEvidence> {
    let lp = least_period(prefix.letters()).ok()?;
    Some(PrefixEvidence {
        len: prefix.len(),
        least_period: lp,
        certified: certified_period(prefix.letters()),
        agrees,
    })
}

/// The prefix is `period^∞` truncated, and its least period divides `|period|`.
fn periodic_evidence(prefix: &Word, period: &Word) -> PrefixEvidence {
    let p = period.len();
    let matches = prefix.letters().iter().enumerate().all(|(i, x)| *x == period.letters()[i % p]);
    let lp = least_period(prefix.letters()).unwrap_or(0);
    PrefixEvidence {
        len: prefix.len(),
        least_period: lp,
        certified: certified_period(prefix.letters()),
        agrees: matches && lp > 0 && p.is_multiple_of(lp),
    }
}

/// The prefix has no period at most half its length.
fn aperiodic_evidence(prefix: &Word) -> PrefixEvidence {
    let lp = least_period(prefix.letters()).unwrap_or(0);
    PrefixEvidence {
        len: prefix.len(),
        least_period: lp,
        certified: certified_period(prefix.letters()),
        agrees: certified_period(prefix.letters()).is_none(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OdometerVerdict {
    OdometerPlusFixedPoint,
    /// Columns never grow: every factor is a finite system.
    FiniteSystem,
    /// No telescoping cut after `level` keeps the levels semi-periodic with a shared U.
    ClauseA { level: usize },
    /// The spacer vertex keeps branching.
    ClauseB,
}

impl OdometerVerdict {
    pub fn name(&self) -> &'static str {
        match self {
            OdometerVerdict::OdometerPlusFixedPoint => "odometer-plus-fixed-point",
            OdometerVerdict::FiniteSystem => "finite-system",
            OdometerVerdict::ClauseA { .. } => "fails-clause-a",
            OdometerVerdict::ClauseB => "fails-clause-b",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OdometerReport {
    pub verdict: OdometerVerdict,
    /// Telescoping cuts found, starting `0, 1`.
    pub cuts: Vec<usize>,
    pub horizon: usize,
    /// First level from which the spacer has a single out-edge.
    pub spacer_isolated_from: Option<usize>,
    /// Clause (a) was only checked up to the horizon.
    pub horizon_limited: bool,
}

/// Largest gap tried between consecutive cuts.
pub const MAX_CUT_GAP: usize = 6;

/// Total number of segments from level `from` to level `to`, saturating.
fn segment_total(diagram: &OrderedDiagram, from: usize, to: usize) -> u64 {
    let mut counts = vec![1u64; diagram.vertex_count(from)];
    for level in from + 1..=to {
        let layer = diagram.layer(level - 1);
        counts = (1..=layer.targets())
            .map(|j| layer.sources(j).iter().fold(0u64, |a, &g| a.saturating_add(counts[g - 1])))
            .collect();
    }
    counts.iter().fold(0u64, |a, &c| a.saturating_add(c))
}

/// Vertex codings of the non-spacer vertices at `to` over level `from`.
fn vertex_codings(diagram: &OrderedDiagram, from: usize, to: usize) -> Vec<Vec<usize>> {
    let layer = diagram.composite_layer(from, to);
    (1..=diagram.k(to)).map(|j| layer.sources(j).to_vec()).collect()
}

/// Length of the shared `U` of the codings of `to` over `from`, if they factor.
fn shared_u(diagram: &OrderedDiagram, from: usize, to: usize, max_len: u64) -> Option<(usize, Vec<usize>)> {
    if segment_total(diagram, from, to) > max_len {
        return None;
    }
    let codings = vertex_codings(diagram, from, to);
    let f = factor_blocks(&codings, &diagram.spacer(from)).ok()?;
    Some((f.u_len, codings[0][..f.u_len].to_vec()))
}

pub fn odometer_verdict(diagram: &OrderedDiagram, horizon: usize, max_len: u64) -> Result<OdometerReport> {
    let horizon = match diagram.depth() {
        Some(d) => horizon.min(d),
        None => horizon,
    };
    if horizon < 2 {
        return Err(Error::contract("the odometer test needs a horizon of at least 2"));
    }
    let isolated = spacer_isolated_from(diagram, horizon);

    if !diagram.validate(horizon).c4.pass() && columns_frozen(diagram) {
        return Ok(OdometerReport {
            verdict: OdometerVerdict::FiniteSystem,
            cuts: vec![0, 1],
            horizon,
            spacer_isolated_from: isolated,
            horizon_limited: false,
        });
    }

    let mut cuts = vec![0, 1];
    let mut horizon_limited = false;
    let mut stuck = None;
    loop {
        let i = cuts.len() - 1;
        let here = cuts[i];
        let reach = (here + MAX_CUT_GAP).min(horizon);
        let found = (here + 1..=reach).find(|&c| {
            if shared_u(diagram, here, c, max_len).is_none() {
                return false;
            }
            if i < 2 {
                return true;
            }
            let before = cuts[i - 1];
            match (shared_u(diagram, before, here, max_len), shared_u(diagram, before, c, max_len)) {
                (Some((_, a)), Some((_, b))) => a == b,
                _ => false,
            }
        });
        match found {
            Some(c) => cuts.push(c),
            None if here + MAX_CUT_GAP > horizon => {
                horizon_limited = true;
                break;
            }
            None => {
                stuck = Some(here);
                break;
            }
        }
    }

    let verdict = match (stuck, isolated) {
        (Some(level), _) => OdometerVerdict::ClauseA { level },
        (None, None) => OdometerVerdict::ClauseB,
        (None, Some(_)) => OdometerVerdict::OdometerPlusFixedPoint,
    };
    Ok(OdometerReport {
        verdict,
        cuts,
        horizon,
        spacer_isolated_from: isolated,
        horizon_limited,
    })
}

/// Smallest `N >= 1` with a single spacer out-edge at every level from `N`
/// (through the horizon for finite diagrams).
fn spacer_isolated_from(diagram: &OrderedDiagram, horizon: usize) -> Option<usize> {
    let last = match (diagram.stationary_from(), diagram.depth()) {
        (Some(m), _) => m.max(1),
        (None, Some(d)) => horizon.min(d.saturating_sub(1)).max(1),
        (None, None) => unreachable!(),
    };
    if diagram.spacer_branches(last) {
        return None;
    }
    let mut n = last;
    while n > 1 && !diagram.spacer_branches(n - 1) {
        n -= 1;
    }
    Some(n)
}

/// Stationary diagrams whose repeating non-spacer vertices each have a single
/// incoming edge: every column keeps its height forever.
fn columns_frozen(diagram: &OrderedDiagram) -> bool {
    match diagram.stationary_from() {
        Some(m) => (1..=diagram.k(m + 1)).all(|j| diagram.in_degree(m + 1, j) == 1),
        None => false,
    }
}

/// Convenience wrapper with the default expansion limit.
pub fn odometer_verdict_default(diagram: &OrderedDiagram, horizon: usize) -> Result<OdometerReport> {
    odometer_verdict(diagram, horizon, DEFAULT_MAX_LEN)
}
