use num_bigint::BigUint;

use super::OrderedDiagram;
use crate::{Error, Result};

/// One violation, pinned to the first offending vertex of a level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Issue {
    pub level: usize,
    pub vertex: Option<usize>,
    pub detail: String,
}

/// Finite-horizon surrogate for the growth condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthReport {
    pub horizon: usize,
    /// `min_j |B(n,j)|` over non-spacer vertices for `n = 1..=horizon`.
    pub min_lengths: Vec<BigUint>,
    pub nondecreasing: bool,
    /// `min_j |B(H,j)| >= 2 min_j |B(1,j)|`.
    pub doubled: bool,
    /// For stationary diagrams: every non-spacer vertex of the repeating
    /// level has at least two incoming edges.
    pub repeating_in_degree: Option<bool>,
}

impl GrowthReport {
    pub fn pass(&self) -> bool {
        self.nondecreasing && self.doubled && self.repeating_in_degree.unwrap_or(true)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub structural: Vec<Issue>,
    pub c1: Vec<Issue>,
    pub c2: Vec<Issue>,
    pub c3: Vec<Issue>,
    pub c4: GrowthReport,
}

impl ValidationReport {
    /// C1 through C3 plus the structural checks.
    pub fn standing_ok(&self) -> bool {
        self.structural.is_empty() && self.c1.is_empty() && self.c2.is_empty() && self.c3.is_empty()
    }

    pub fn pass(&self) -> bool {
        self.standing_ok() && self.c4.pass()
    }
}

impl OrderedDiagram {
    /// Levels on which C1-C3 must be inspected to cover the whole diagram
    /// (for stationary diagrams, one copy of the repeating layer suffices).
    fn checked_levels(&self) -> usize {
        match (self.depth(), self.stationary_from()) {
            (Some(d), _) => d,
            (None, Some(m)) => m + 1,
            (None, None) => unreachable!(),
        }
    }

    /// Checks the standing conditions C1-C3 exactly and the growth condition
    /// C4 up to `horizon`.
    pub fn validate(&self, horizon: usize) -> ValidationReport {
        let top = self.checked_levels();
        let mut structural = Vec::new();
        let mut c1 = Vec::new();
        let mut c2 = Vec::new();
        let mut c3 = Vec::new();

        for n in 1..=top {
            if self.k(n) == 0 {
                c1.push(Issue {
                    level: n,
                    vertex: None,
                    detail: "K_n = 0: no non-spacer vertex".into(),
                });
            }
            let spacer = self.spacer(n);
            let into_spacer = self.in_edges(n, spacer);
            if into_spacer != [self.spacer(n - 1)] {
                c2.push(Issue {
                    level: n,
                    vertex: Some(spacer),
                    detail: format!(
                        "spacer vertex has incoming sources {:?}, expected only {}",
                        into_spacer,
                        self.spacer(n - 1)
                    ),
                });
            }
            if n >= 2 {
                if let Some(j) = (1..=self.k(n)).find(|&j| self.source(n, j, 1) == self.spacer(n - 1)) {
                    c3.push(Issue {
                        level: n,
                        vertex: Some(j),
                        detail: "minimal incoming edge starts at the spacer vertex".into(),
                    });
                }
            }
            // every vertex at level n - 1 must feed level n
            if let Some(g) = (1..=self.vertex_count(n - 1)).find(|&g| self.out_degree(n - 1, g) == 0) {
                structural.push(Issue {
                    level: n - 1,
                    vertex: Some(g),
                    detail: "vertex is the source of no edge".into(),
                });
            }
        }

        let c4 = self.growth(horizon);
        ValidationReport {
            structural,
            c1,
            c2,
            c3,
            c4,
        }
    }

    fn growth(&self, horizon: usize) -> GrowthReport {
        let h = match self.depth() {
            Some(d) => horizon.min(d),
            None => horizon,
        }
        .max(1);
        let min_lengths: Vec<BigUint> = (1..=h)
            .map(|n| {
                let dims = self.dims(n);
                dims[..self.k(n).max(1).min(dims.len())]
                    .iter()
                    .min()
                    .cloned()
                    .unwrap_or_default()
            })
            .collect();
        let nondecreasing = min_lengths.windows(2).all(|w| w[0] <= w[1]);
        let doubled = min_lengths.last().unwrap() >= &(min_lengths[0].clone() * 2u32);
        let repeating_in_degree = self
            .stationary_from()
            .map(|m| (1..=self.k(m + 1)).all(|j| self.in_degree(m + 1, j) >= 2));
        GrowthReport {
            horizon: h,
            min_lengths,
            nondecreasing,
            doubled,
            repeating_in_degree,
        }
    }

    /// Fails with the first C1-C3 violation, if any.
    pub fn check_standing(&self) -> Result<()> {
        self.check_conditions(true)
    }

    /// C1-C3 alone. Blocks stay well defined when some vertex feeds nothing,
    /// which happens once vertices off the minimal thread are pruned.
    pub(crate) fn check_coding_conditions(&self) -> Result<()> {
        self.check_conditions(false)
    }

    fn check_conditions(&self, structural: bool) -> Result<()> {
        let report = self.validate(1);
        let first = report
            .structural
            .iter()
            .filter(|_| structural)
            .map(|i| ("structure", i))
            .chain(report.c1.iter().map(|i| ("C1", i)))
            .chain(report.c2.iter().map(|i| ("C2", i)))
            .chain(report.c3.iter().map(|i| ("C3", i)))
            .next();
        match first {
            None => Ok(()),
            Some((cond, issue)) => Err(Error::contract(format!(
                "{} violated at level {}{}: {}",
                cond,
                issue.level,
                issue.vertex.map(|v| format!(", vertex {}", v)).unwrap_or_default(),
                issue.detail
            ))),
        }
    }
}
