//! The local deficit condition LDC(n, k): level `n` is semi k-periodic and,
//! inside every block at level `n + 1`, each interior appearance of
//! `B(n, g)` is followed by exactly `c - l(g)` spacers and the last one by
//! at most `c - l(g)`.
//!
//! The spacer runs are read from the recursion rows, so blocks at level
//! `n + 1` are never expanded.

use super::semi::{semi_from_dag, SemiOutcome, SemiPeriodicCertificate};
use crate::blocks::BlockDag;
use crate::diagram::RecursionStep;
use crate::{Error, OrderedDiagram, Result};

/// The first spacer run that breaks the condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeficitFailure {
    /// Vertex at level `n + 1` whose row fails.
    pub vertex: usize,
    /// 0-based index of the appearance in that row.
    pub appearance: usize,
    pub block: usize,
    pub found: usize,
    pub expected: usize,
    /// The final appearance, where `found <= expected` is required.
    pub last: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LdcReport {
    pub level: usize,
    pub k: usize,
    pub semi: SemiOutcome,
    /// Appearances checked before stopping.
    pub checked: usize,
    pub failure: Option<DeficitFailure>,
}

impl LdcReport {
    pub fn pass(&self) -> bool {
        self.semi.is_semi_periodic() && self.failure.is_none()
    }

    pub fn certificate(&self) -> Option<&SemiPeriodicCertificate> {
        self.semi.certificate()
    }
}

/// `(g, a)` rows of the blocks at level `n + 1`.
pub(crate) fn rows(diagram: &OrderedDiagram, n: usize) -> Result<Vec<Vec<RecursionStep>>> {
    let spacer = diagram.spacer(n);
    (1..=diagram.k(n + 1))
        .map(|j| {
            let mut row: Vec<RecursionStep> = Vec::new();
            for &g in diagram.in_edges(n + 1, j) {
                if g == spacer {
                    row.last_mut()
                        .ok_or_else(|| Error::contract(format!("B({},{}) begins with a spacer", n + 1, j)))?
                        .spacers += 1;
                } else {
                    row.push(RecursionStep::new(g, 0));
                }
            }
            Ok(row)
        })
        .collect()
}

/// Checks the spacer runs of `rows` against deficits `c - l`.
pub(crate) fn check_deficits(rows: &[Vec<RecursionStep>], c: usize, l: &[usize]) -> (usize, Option<DeficitFailure>) {
    let mut checked = 0;
    for (i, row) in rows.iter().enumerate() {
        for (r, step) in row.iter().enumerate() {
            checked += 1;
            let expected = c - l[step.block - 1];
            let last = r + 1 == row.len();
            let ok = if last { step.spacers <= expected } else { step.spacers == expected };
            if !ok {
                return (
                    checked,
                    Some(DeficitFailure {
                        vertex: i + 1,
                        appearance: r,
                        block: step.block,
                        found: step.spacers,
                        expected,
                        last,
                    }),
                );
            }
        }
    }
    (checked, None)
}

fn check_args(diagram: &OrderedDiagram, n: usize, k: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(Error::contract(format!("LDC needs 1 <= k <= n, got k={}, n={}", k, n)));
    }
    if !diagram.has_level(n + 1) {
        return Err(Error::contract(format!("LDC({},{}) needs level {}", n, k, n + 1)));
    }
    Ok(())
}

pub fn ldc(diagram: &OrderedDiagram, n: usize, k: usize, limit: u64) -> Result<LdcReport> {
    check_args(diagram, n, k)?;
    let dag = BlockDag::build(diagram, k, n)?;
    ldc_with_dag(&dag, diagram, n, limit)
}

pub(crate) fn ldc_with_dag(dag: &BlockDag, diagram: &OrderedDiagram, n: usize, limit: u64) -> Result<LdcReport> {
    let semi = semi_from_dag(dag, diagram, n, limit)?;
    let (checked, failure) = match semi.certificate() {
        Some(cert) => check_deficits(&rows(diagram, n)?, cert.c, &cert.l),
        None => (0, None),
    };
    Ok(LdcReport {
        level: n,
        k: dag.k(),
        semi,
        checked,
        failure,
    })
}

/// LDC(n, k) decided as "levels n and n + 1 are semi k-periodic with the
/// same U"; equal `U` forces equal `c`.
pub fn ldc_via_equivalence(diagram: &OrderedDiagram, n: usize, k: usize, limit: u64) -> Result<bool> {
    check_args(diagram, n, k)?;
    let dag = BlockDag::build(diagram, k, n + 1)?;
    let here = semi_from_dag(&dag, diagram, n, limit)?;
    let Some(a) = here.certificate() else {
        return Ok(false);
    };
    let next = semi_from_dag(&dag, diagram, n + 1, limit)?;
    Ok(next.certificate().is_some_and(|b| b.u == a.u))
}

/// Exponents `(t', l')` at level `n + 1` implied by LDC(n, k):
/// `t'(i) = (q - 1) + sum of t(g)` and `l'(i) = l(g_last) + a_last`.
pub fn propagate(cert: &SemiPeriodicCertificate, rows: &[Vec<RecursionStep>]) -> (Vec<usize>, Vec<usize>) {
    rows.iter()
        .map(|row| {
            let t = row.len() - 1 + row.iter().map(|s| cert.t[s.block - 1]).sum::<usize>();
            let last = row.last().expect("rows are nonempty");
            (t, cert.l[last.block - 1] + last.spacers)
        })
        .unzip()
}

/// Public view of the level-`n + 1` recursion rows.
pub fn recursion_rows(diagram: &OrderedDiagram, n: usize) -> Result<Vec<Vec<RecursionStep>>> {
    rows(diagram, n)
}
