//! Rank-one recursions `B_{n+1} = B_n s^{a(n,0)} B_n ... B_n s^{a(n,q_n-1)}`.
//!
//! A periodic 1-coding forces, from some `N` on, a zero trailing run and one
//! constant interior run `a`; the coding is then `(B_N s^a)^∞`.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::words::{certified_period, period_breaks};
use crate::coding::minimal_orbit_prefix;
use crate::{Error, OrderedDiagram, RecursionTable, Result, Word};

/// Cap on the generated prefix.
pub const PREFIX_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankOneStructure {
    /// Least period `B_N s^a` of the 1-coding.
    pub period: Word,
    /// First `n` from which the runs have the periodic shape.
    pub from: usize,
    /// The common interior run.
    pub a: usize,
    /// `q_n - 1` interior appearances at each level `from..horizon`.
    pub interior: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RankOneOutcome {
    Structure(RankOneStructure),
    /// The prefix has no period at most half its length; `breaks[p - 1]` is
    /// the first index where period `p` fails.
    Refutation { prefix_len: usize, breaks: Vec<usize> },
    /// A periodic prefix whose runs do not settle before the horizon.
    Unresolved { period: usize },
}

fn check_rank_one(table: &RecursionTable) -> Result<()> {
    if !table.is_rank_one() {
        return Err(Error::contract("the recursion is not rank one"));
    }
    Ok(())
}

/// Recursions `B_{n+1}` defined from `B_0`, i.e. the usable `n` are `0..levels`.
fn available(table: &RecursionTable, horizon: usize) -> usize {
    match table.stationary_from {
        Some(_) => horizon,
        None => horizon.min(table.steps.len()),
    }
}

/// Smallest `N < horizon` with `a(n, q_n - 1) = 0` and all interior runs equal
/// for every `n` in `N..horizon`.
fn settled_from(table: &RecursionTable, horizon: usize) -> Option<(usize, usize)> {
    let mut a: Option<usize> = None;
    let mut from = None;
    for n in (0..horizon).rev() {
        let runs = table.rank_one_runs(n);
        let (last, interior) = runs.split_last()?;
        if *last != 0 {
            break;
        }
        let common = match interior.first() {
            Some(&x) if interior.iter().all(|&y| y == x) => Some(x),
            Some(_) => break,
            None => a,
        };
        if a.is_some() && common != a {
            break;
        }
        a = common;
        from = Some(n);
    }
    from.map(|n| (n, a.unwrap_or(0)))
}

pub fn rank_one_structure(table: &RecursionTable, horizon: usize) -> Result<RankOneOutcome> {
    check_rank_one(table)?;
    let h = available(table, horizon);
    if h == 0 {
        return Err(Error::contract("rank-one analysis needs a horizon of at least 1"));
    }
    let diagram = OrderedDiagram::from_recursion(table)?;
    // B_{h-1} sits at diagram level h
    let top = diagram.dims_saturating(h)[h][0];
    let len = top.saturating_mul(4).min(PREFIX_CAP);
    let prefix = minimal_orbit_prefix(&diagram, 1, len, h.max(64))?;
    match certified_period(prefix.letters()) {
        Some(p) => Ok(match settled_from(table, h) {
            Some((from, a)) => RankOneOutcome::Structure(RankOneStructure {
                period: prefix.slice(0, p),
                from,
                a,
                interior: (from..h).map(|n| table.rank_one_runs(n).len() - 1).collect(),
            }),
            None => RankOneOutcome::Unresolved { period: p },
        }),
        None => {
            let breaks = period_breaks(prefix.letters(), prefix.len() / 2)
                .into_iter()
                .map(|b| b.expect("no period below half the prefix"))
                .collect();
            Ok(RankOneOutcome::Refutation {
                prefix_len: prefix.len(),
                breaks,
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpacerMass {
    /// `sum_i a(n, i) / (q_n |B_n|)` for `n < N`.
    pub terms: Vec<BigRational>,
    pub partial_sums: Vec<BigRational>,
    /// Consecutive term ratios stay below `0.99` over the last ten terms.
    pub converges: bool,
    /// The longest spacer run strictly grows over the last levels, which
    /// rules out periodicity whatever the series does.
    pub runs_grow: bool,
}

const RATIO_WINDOW: usize = 10;

pub fn spacer_mass_partial_sums(table: &RecursionTable, n: usize) -> Result<SpacerMass> {
    check_rank_one(table)?;
    let n = available(table, n);
    let mut len = BigUint::from(table.seeds[0].len());
    let mut terms = Vec::with_capacity(n);
    let mut partial_sums = Vec::with_capacity(n);
    let mut sum = BigRational::zero();
    let mut max_runs = Vec::with_capacity(n);
    for level in 0..n {
        let runs = table.rank_one_runs(level);
        let q = BigUint::from(runs.len());
        let spacers = BigUint::from(runs.iter().sum::<usize>());
        let term = BigRational::new(spacers.clone().into(), (&q * &len).into());
        sum += &term;
        terms.push(term);
        partial_sums.push(sum.clone());
        max_runs.push(runs.iter().copied().max().unwrap_or(0));
        len = q * len + spacers;
    }

    let window = &terms[terms.len().saturating_sub(RATIO_WINDOW + 1)..];
    let ratio = BigRational::new(99.into(), 100.into());
    let converges = window.len() >= 2
        && window.windows(2).all(|w| {
            if w[0].is_zero() {
                w[1].is_zero()
            } else {
                &w[1] / &w[0] < ratio
            }
        });
    let tail = &max_runs[max_runs.len().saturating_sub(RATIO_WINDOW.min(4))..];
    let runs_grow = tail.len() >= 2 && tail.windows(2).all(|w| w[1] > w[0]);
    Ok(SpacerMass {
        terms,
        partial_sums,
        converges,
        runs_grow,
    })
}

/// A partial sum as a float, for display.
pub fn approximate(x: &BigRational) -> f64 {
    let scale = BigUint::from(10u32).pow(12);
    let scaled = (x * BigRational::from_integer(scale.clone().into())).to_integer();
    scaled.to_f64().unwrap_or(f64::INFINITY) / scale.to_f64().unwrap_or(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_spacer_between_copies() {
        let t = RecursionTable::rank_one(&[vec![1, 0]], Some(1));
        match rank_one_structure(&t, 8).unwrap() {
            RankOneOutcome::Structure(s) => {
                assert_eq!(s.period.to_string(), "0s");
                assert_eq!((s.from, s.a), (0, 1));
                assert!(s.interior.iter().all(|&m| m == 1));
            }
            other => panic!("{:?}", other),
        }
    }

    #[test]
    fn chacon_refuted_with_breaks() {
        let t = RecursionTable::rank_one(&[vec![0, 1, 0]], Some(1));
        match rank_one_structure(&t, 8).unwrap() {
            RankOneOutcome::Refutation { prefix_len, breaks } => {
                assert_eq!(breaks.len(), prefix_len / 2);
                // "00s0" breaks period 1 at index 1
                assert_eq!(breaks[0], 1);
            }
            other => panic!("{:?}", other),
        }
    }

    #[test]
    fn growing_runs_refuted() {
        let rows: Vec<Vec<usize>> = (0..10).map(|n| vec![n, 0]).collect();
        let t = RecursionTable::rank_one(&rows, None);
        assert!(matches!(rank_one_structure(&t, 10).unwrap(), RankOneOutcome::Refutation { .. }));
        let m = spacer_mass_partial_sums(&t, 10).unwrap();
        assert!(m.runs_grow);
    }

    #[test]
    fn mass_terms_in_closed_form() {
        let t = RecursionTable::rank_one(&[vec![1, 0]], Some(1));
        let m = spacer_mass_partial_sums(&t, 20).unwrap();
        for (n, term) in m.terms.iter().enumerate() {
            let len = (1u64 << (n + 1)) - 1;
            assert_eq!(*term, BigRational::new(1.into(), (2 * len).into()));
        }
        assert!(m.converges);
        assert!(!m.runs_grow);

        let none = spacer_mass_partial_sums(&RecursionTable::rank_one(&[vec![0, 0]], Some(1)), 12).unwrap();
        assert!(none.partial_sums.iter().all(|s| s.is_zero()));
    }
}
