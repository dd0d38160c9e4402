//! Named fixtures for the worked examples, each carrying executable expected
//! facts, plus seeded generators for property tests.

mod random;

pub use random::{
    perturb_deficit, random_ldc_stationary, random_rank_one, random_stationary, RankOneShape, SpacerPolicy,
};

use crate::analysis::ldc::ldc;
use crate::analysis::periodicity::{k_coding_periodicity, odometer_verdict, PeriodicityOptions, Verdict as CodingVerdict};
use crate::analysis::semi::{semi_k_periodic, DEFAULT_MAX_LEN};
use crate::blocks::{vertex_coding, BlockDag};
use crate::coding::minimal_path_census;
use crate::{Error, Layer, OrderedDiagram, RecursionTable, Result, Word};

/// Where an expected value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Stated in the worked example, with a short quote.
    Paper(&'static str),
    Trivial(&'static str),
    /// Computed independently of the code under test.
    Derived(&'static str),
}

impl Provenance {
    pub fn tag(&self) -> &'static str {
        match self {
            Provenance::Paper(_) => "PAPER",
            Provenance::Trivial(_) => "TRIVIAL",
            Provenance::Derived(_) => "DERIVED",
        }
    }

    pub fn note(&self) -> &'static str {
        match self {
            Provenance::Paper(s) | Provenance::Trivial(s) | Provenance::Derived(s) => s,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Check {
    /// Standing conditions C1-C3 plus growth over the horizon.
    Valid { horizon: usize, pass: bool },
    Block { n: usize, j: usize, k: usize, word: &'static str },
    /// Explicit positions of `B(n, j)` inside `B(m, i)`.
    Explicit { n: usize, j: usize, m: usize, i: usize, k: usize, positions: Vec<u64> },
    /// All string occurrences of `B(n, j)` inside `B(m, i)`.
    Occurrences { n: usize, j: usize, m: usize, i: usize, k: usize, positions: Vec<u64> },
    VertexCoding { n: usize, j: usize, k: usize, coding: Vec<usize> },
    /// `pi_{k, k'}` applied to `B^(k)(n, j)`.
    FactorMap { n: usize, j: usize, k: usize, k_prime: usize, word: &'static str },
    /// `Some((U, c, t, l))` for a certificate, `None` for a refutation.
    Semi { n: usize, k: usize, expect: Option<(&'static str, usize, Vec<usize>, Vec<usize>)> },
    Ldc { n: usize, k: usize, pass: bool },
    PseudoComplete { n: usize, pass: bool },
    /// Verdict name, and the period for periodic verdicts.
    Verdict { k: usize, name: &'static str, period: Option<&'static str> },
    Census { paths: usize },
    Odometer { name: &'static str },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fact {
    pub check: Check,
    pub provenance: Provenance,
}

impl Fact {
    fn new(check: Check, provenance: Provenance) -> Self {
        Fact { check, provenance }
    }

    /// Runs the check; `Err` carries what was found instead.
    pub fn verify(&self, d: &OrderedDiagram) -> std::result::Result<(), String> {
        self.run(d).map_err(|e| e.to_string()).and_then(|r| r)
    }

    fn run(&self, d: &OrderedDiagram) -> Result<std::result::Result<(), String>> {
        let limit = DEFAULT_MAX_LEN;
        let expect = |ok: bool, found: String| Ok(if ok { Ok(()) } else { Err(found) });
        match &self.check {
            Check::Valid { horizon, pass } => {
                let r = d.validate(*horizon);
                expect(r.pass() == *pass, format!("validation pass = {}", r.pass()))
            }
            Check::Block { n, j, k, word } => {
                let w = BlockDag::build(d, *k, *n)?.block(*n, *j)?.expand_all(limit)?;
                expect(w == Word::parse(word)?, w.render_auto())
            }
            Check::Explicit { n, j, m, i, k, positions } => {
                let p = BlockDag::build(d, *k, *m)?.explicit_positions(*n, *j, *m, *i, limit)?;
                expect(p == *positions, format!("{:?}", p))
            }
            Check::Occurrences { n, j, m, i, k, positions } => {
                let dag = BlockDag::build(d, *k, *m)?;
                let inner = dag.block(*n, *j)?.expand_all(limit)?;
                let p = dag.all_occurrences(&dag.block(*m, *i)?, &inner)?;
                expect(p == *positions, format!("{:?}", p))
            }
            Check::VertexCoding { n, j, k, coding } => {
                let c = vertex_coding(d, *n, *j, *k, limit)?;
                expect(c == *coding, format!("{:?}", c))
            }
            Check::FactorMap { n, j, k, k_prime, word } => {
                let dag = BlockDag::build(d, *k, *n)?;
                let w = dag.block(*n, *j)?.expand_all(limit)?;
                let f = dag.alphabet().factor_map(d, &w, *k_prime)?;
                expect(f == Word::parse(word)?, f.render_auto())
            }
            Check::Semi { n, k, expect: want } => {
                let out = semi_k_periodic(d, *n, *k, limit)?;
                let found = out
                    .certificate()
                    .map(|c| (c.u.render_auto(), c.c, c.t.clone(), c.l.clone()));
                let want = want.as_ref().map(|(u, c, t, l)| (u.to_string(), *c, t.clone(), l.clone()));
                expect(found == want, format!("{:?}", found))
            }
            Check::Ldc { n, k, pass } => {
                let r = ldc(d, *n, *k, limit)?;
                expect(r.pass() == *pass, format!("LDC pass = {}", r.pass()))
            }
            Check::PseudoComplete { n, pass } => {
                let p = d.pseudo_complete(*n)?;
                expect(p == *pass, format!("pseudo-complete = {}", p))
            }
            Check::Verdict { k, name, period } => {
                let r = k_coding_periodicity(d, *k, &PeriodicityOptions::default())?;
                let found_period = match &r.verdict {
                    CodingVerdict::Periodic { period, .. } => Some(period.render_auto()),
                    _ => None,
                };
                let ok = r.verdict.name() == *name && period.is_none_or(|p| found_period.as_deref() == Some(p));
                expect(ok, format!("{} {:?}", r.verdict.name(), found_period))
            }
            Check::Census { paths } => {
                let c = minimal_path_census(d, 8)?;
                expect(c.minimal_paths == *paths, format!("{} minimal paths", c.minimal_paths))
            }
            Check::Odometer { name } => {
                let r = odometer_verdict(d, 10, limit)?;
                expect(r.verdict.name() == *name, r.verdict.name().to_string())
            }
        }
    }

    pub fn describe(&self) -> String {
        format!("{:?}", self.check)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    Diagram(OrderedDiagram),
    Recursion(RecursionTable),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fixture {
    pub name: &'static str,
    pub summary: &'static str,
    pub source: Source,
    pub facts: Vec<Fact>,
}

impl Fixture {
    pub fn diagram(&self) -> Result<OrderedDiagram> {
        match &self.source {
            Source::Diagram(d) => Ok(d.clone()),
            Source::Recursion(t) => OrderedDiagram::from_recursion(t),
        }
    }

    /// The fixture in its native file format.
    pub fn to_text(&self) -> String {
        match &self.source {
            Source::Diagram(d) => d.to_text(),
            Source::Recursion(t) => t.to_text(),
        }
    }
}

const NAMES: [&str; 9] = [
    "fig1a",
    "fig1b-rank1",
    "sec4-U3",
    "ex-semi-k",
    "fig2a-two-minimal",
    "ex-someper",
    "ex-all-ldc",
    "chacon",
    "parallel-columns",
];

pub fn names() -> &'static [&'static str] {
    &NAMES
}

pub fn fixture(name: &str) -> Result<Fixture> {
    Ok(match name {
        "fig1a" => fig1a(),
        "fig1b-rank1" => fig1b(),
        "sec4-U3" => sec4(),
        "ex-semi-k" => semi_k(),
        "fig2a-two-minimal" => two_minimal(),
        "ex-someper" => someper(),
        "ex-all-ldc" => all_ldc(),
        "chacon" => chacon(),
        "parallel-columns" => parallel_columns(),
        _ => return Err(Error::UnknownFixture(name.to_string())),
    })
}

pub fn all() -> Vec<Fixture> {
    NAMES.iter().map(|n| fixture(n).expect("built-in fixture")).collect()
}

/// Builds a diagram from the rows into non-spacer vertices; every spacer
/// gets its single edge from the spacer above.
fn build(ks: &[usize], rows: Vec<Vec<Vec<usize>>>, stationary_from: Option<usize>) -> OrderedDiagram {
    let layers = rows
        .into_iter()
        .enumerate()
        .map(|(n, mut layer)| {
            layer.push(vec![ks[n] + 1]);
            Layer::new(layer)
        })
        .collect();
    OrderedDiagram::new(ks.to_vec(), layers, stationary_from).expect("fixture diagram")
}

use Check::*;
use Provenance::*;

fn fig1a() -> Fixture {
    let d = build(
        &[0, 2, 2, 2],
        vec![
            vec![vec![1, 1], vec![1, 1]],
            vec![vec![1, 3, 3, 2, 3], vec![2, 3, 1, 3, 3]],
            vec![vec![1, 2, 3], vec![2, 1, 3]],
        ],
        Some(2),
    );
    Fixture {
        name: "fig1a",
        summary: "two seeds of length two; the level-1 ordering of the recursion figure",
        source: Source::Diagram(d),
        facts: vec![
            Fact::new(Block { n: 2, j: 1, k: 1, word: "01ss23s" }, Paper("B(2,1)=B(1,1)s^2B(1,2)s^1")),
            Fact::new(Block { n: 2, j: 2, k: 1, word: "23s01ss" }, Paper("B(2,2)=B(1,2)sB(1,1)s^2")),
            Fact::new(Valid { horizon: 8, pass: true }, Trivial("standing conditions hold by construction")),
        ],
    }
}

fn fig1b() -> Fixture {
    Fixture {
        name: "fig1b-rank1",
        summary: "rank one: B(2,1)=B(1,1)s, B(n+1,1)=B(n,1)sB(n,1)",
        source: Source::Recursion(RecursionTable::rank_one(&[vec![1], vec![1, 0]], Some(2))),
        facts: vec![
            Fact::new(Block { n: 3, j: 1, k: 1, word: "0ss0s" }, Paper("B(3,1)=0ss0s")),
            Fact::new(Block { n: 4, j: 1, k: 1, word: "0ss0ss0ss0s" }, Paper("B(4,1)=0ss0ss0ss0s")),
            Fact::new(
                Explicit { n: 3, j: 1, m: 4, i: 1, k: 1, positions: vec![0, 6] },
                Paper("appears explicitly ... at position 0 and again at position 6"),
            ),
            Fact::new(
                Occurrences { n: 3, j: 1, m: 4, i: 1, k: 1, positions: vec![0, 3, 6] },
                Paper("also appears ... starting at position 3"),
            ),
            Fact::new(
                Verdict { k: 1, name: "periodic", period: Some("0ss") },
                Derived("B(n+1)=B(n)sB(n) from B(2)=0s gives (0ss)^∞"),
            ),
        ],
    }
}

fn sec4() -> Fixture {
    let d = build(
        &[0, 2, 3, 2],
        vec![
            vec![vec![1], vec![1]],
            vec![vec![1, 3, 2], vec![1, 3, 2], vec![2, 3, 1]],
            vec![vec![1, 4, 3, 4, 4, 2, 4, 3], vec![2, 4, 3, 4, 4, 1, 4, 3, 4]],
        ],
        None,
    );
    Fixture {
        name: "sec4-U3",
        summary: "three-level recursion whose level 3 is semi 1-periodic",
        source: Source::Diagram(d),
        facts: vec![
            Fact::new(
                Semi { n: 3, k: 1, expect: Some(("0s1s1s0", 2, vec![1, 1], vec![0, 1])) },
                Paper("U_3=0s1s1s0 and B(3,1)=(U_3s^2)U_3 and B(3,2)=(U_3s^2)U_3s"),
            ),
            Fact::new(Semi { n: 2, k: 1, expect: None }, Paper("level 2 is not semi 1-periodic")),
            Fact::new(Semi { n: 3, k: 2, expect: None }, Paper("level 3 is not semi 2-periodic")),
            Fact::new(
                VertexCoding { n: 3, j: 1, k: 2, coding: vec![1, 4, 3, 4, 4, 2, 4, 3] },
                Derived("read off B(3,1)=B(2,1)sB(2,3)s^2B(2,2)sB(2,3)"),
            ),
        ],
    }
}

fn semi_k() -> Fixture {
    let s = 3;
    let row = |copies: usize, tail: usize| {
        let mut r = Vec::new();
        for c in 0..copies {
            r.extend([2, s, s, s, 1]);
            r.extend(std::iter::repeat_n(s, if c + 1 == copies { tail } else { 4 }));
        }
        r
    };
    let d = build(&[0, 2, 2], vec![vec![vec![1], vec![1]], vec![row(3, 2), row(2, 2)]], None);
    Fixture {
        name: "ex-semi-k",
        summary: "level k+1 semi k-periodic with U = B(k,2)s^3B(k,1), seeds instantiated as 0 and 1",
        source: Source::Diagram(d),
        facts: vec![
            Fact::new(
                Semi { n: 2, k: 1, expect: Some(("1sss0", 4, vec![2, 1], vec![2, 2])) },
                Derived("both rows are (B(k,2)s^3B(k,1)s^4)^t B(k,2)s^3B(k,1)s^2"),
            ),
            Fact::new(
                PseudoComplete { n: 2, pass: true },
                Paper("level k+1 is also pseudo-complete"),
            ),
        ],
    }
}

fn two_minimal() -> Fixture {
    let d = build(
        &[0, 2, 2, 2],
        vec![
            vec![vec![1], vec![1]],
            vec![vec![1, 2, 3, 3, 1], vec![2, 3, 3, 1, 2, 3]],
            vec![vec![1, 2, 3, 1], vec![2, 3, 1, 2]],
        ],
        Some(2),
    );
    Fixture {
        name: "fig2a-two-minimal",
        summary: "stationary after level 2, with a minimal path through each non-spacer vertex",
        source: Source::Diagram(d),
        facts: vec![Fact::new(
            Census { paths: 2 },
            Paper("a system with two minimal forward transitive paths"),
        )],
    }
}

fn someper() -> Fixture {
    let d = build(
        &[0, 2, 2, 2],
        vec![
            vec![vec![1], vec![1]],
            vec![vec![1, 2, 3], vec![1, 2, 3]],
            vec![vec![1, 3, 2], vec![2, 3, 1]],
        ],
        Some(2),
    );
    Fixture {
        name: "ex-someper",
        summary: "periodic 1-coding, aperiodic 2-coding",
        source: Source::Diagram(d),
        facts: vec![
            Fact::new(
                Verdict { k: 1, name: "periodic", period: Some("01ss") },
                Paper("the 1-coding is periodic with least period P_1=01ss"),
            ),
            Fact::new(
                Verdict { k: 2, name: "aperiodic", period: None },
                Paper("the 2-coding is not periodic"),
            ),
            Fact::new(
                Census { paths: 2 },
                Derived("the minimal edges into v(n,1) and v(n,2) come from v(n-1,1) and v(n-1,2)"),
            ),
            Fact::new(
                FactorMap { n: 3, j: 1, k: 2, k_prime: 1, word: "01ss01s" },
                Derived("B(3,1)=B(2,1)sB(2,2) with B(2,j)=01s"),
            ),
        ],
    }
}

fn all_ldc() -> Fixture {
    let d = build(
        &[0, 2, 2, 2, 2],
        vec![
            vec![vec![1], vec![1]],
            vec![vec![1, 3, 2, 3, 3, 3, 1, 3, 2, 3], vec![1, 3, 2, 3, 3, 3, 1, 3, 2, 3, 3]],
            vec![
                vec![1, 3, 3, 1, 3, 3, 2, 3],
                vec![1, 3, 3, 1, 3, 3, 2, 3, 1, 3, 3, 1, 3, 3, 2],
            ],
            vec![vec![1, 2, 3, 1, 2, 3], vec![1, 2, 3, 1, 2]],
        ],
        Some(3),
    );
    Fixture {
        name: "ex-all-ldc",
        summary: "every k-factor finite; seeds read as D_1=0, D_2=1",
        source: Source::Diagram(d),
        facts: vec![
            Fact::new(
                Block { n: 2, j: 1, k: 1, word: "0s1sss0s1s" },
                Paper("B(2,1)=B(1,1)sB(1,2)s^3B(1,1)s1s"),
            ),
            Fact::new(Ldc { n: 2, k: 1, pass: true }, Paper("each level n satisfies LDC(n,k)")),
            Fact::new(Ldc { n: 4, k: 2, pass: true }, Paper("each level n satisfies LDC(n,k)")),
            Fact::new(
                Verdict { k: 1, name: "periodic", period: Some("0s1sss") },
                Paper("every k-factor is finite"),
            ),
            Fact::new(Verdict { k: 2, name: "periodic", period: None }, Paper("every k-factor is finite")),
        ],
    }
}

fn chacon() -> Fixture {
    Fixture {
        name: "chacon",
        summary: "B(n+1)=B(n)B(n)sB(n)",
        source: Source::Recursion(RecursionTable::rank_one(&[vec![0, 1, 0]], Some(1))),
        facts: vec![
            Fact::new(Block { n: 2, j: 1, k: 1, word: "00s0" }, Trivial("one application of the recursion")),
            Fact::new(
                Verdict { k: 1, name: "aperiodic", period: None },
                Derived("least period exceeds half of a 10^4 prefix"),
            ),
            Fact::new(Odometer { name: "fails-clause-a" }, Derived("level 2 is not semi 1-periodic")),
        ],
    }
}

fn parallel_columns() -> Fixture {
    let d = build(&[0, 2, 2], vec![vec![vec![1, 1, 1], vec![1, 1]], vec![vec![1], vec![2]]], Some(1));
    Fixture {
        name: "parallel-columns",
        summary: "two columns that never grow: a finite system",
        source: Source::Diagram(d),
        facts: vec![
            Fact::new(Valid { horizon: 8, pass: false }, Trivial("block lengths stay 3 and 2")),
            Fact::new(
                Odometer { name: "finite-system" },
                Paper("all k-factors are finite and isomorphic to the original system"),
            ),
        ],
    }
}
