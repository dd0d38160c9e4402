//! Acceptance run: one PASS/FAIL line per criterion, with its time budget.
//!
//! Exits non-zero only when a criterion fails that is not listed in
//! `KNOWN_FAILURES`; those are claims the checks show to be false, and their
//! lines explain what was observed instead.

mod common;

use std::process::Command;
use std::time::{Duration, Instant};

use bv_core::analysis::ldc::{ldc, ldc_via_equivalence};
use bv_core::analysis::periodicity::{k_coding_periodicity, PeriodicityOptions, Verdict};
use bv_core::analysis::rank_one::{rank_one_structure, RankOneOutcome};
use bv_core::analysis::semi::semi_k_periodic;
use bv_core::analysis::words::{certified_period, commute, least_period, primitive_root};
use bv_core::blocks::basic_block;
use bv_core::coding::{minimal_orbit_prefix, MinimalThread};
use bv_core::corpus::{
    self, perturb_deficit, random_ldc_stationary, random_rank_one, random_stationary, RankOneShape, SpacerPolicy,
};
use bv_core::{Alphabet, BlockDag, OrderedDiagram, RecursionTable, Word};
use common::*;
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Criteria whose literal statement does not hold; see their FAIL lines.
const KNOWN_FAILURES: &[u32] = &[4, 9];

const CHILD_VAR: &str = "BV_ACCEPTANCE_CHILD";
const LIMIT: u64 = 1_000_000;

type Check = Result<String, String>;
type Criterion = (u32, f64, fn() -> Check);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fixture(name: &str) -> OrderedDiagram {
    corpus::fixture(name).unwrap().diagram().unwrap()
}

fn render(w: &Word) -> String {
    w.render_auto()
}

// 1. rank-one regression ----------------------------------------------------

fn c1() -> Check {
    let d = fixture("fig1b-rank1");
    let b3 = basic_block(&d, 3, 1, 1).map_err(|e| e.to_string())?;
    let b4 = basic_block(&d, 4, 1, 1).map_err(|e| e.to_string())?;
    let (s3, s4) = (render(&b3.expand_all(100).unwrap()), render(&b4.expand_all(100).unwrap()));
    ensure(s3 == "0ss0s" && s4 == "0ss0ss0ss0s", || format!("B(3,1)={} B(4,1)={}", s3, s4))?;
    let dag = BlockDag::build(&d, 1, 4).unwrap();
    let explicit = dag.explicit_positions(3, 1, 4, 1, 100).unwrap();
    let all = dag.all_occurrences(&b4, &b3.expand_all(100).unwrap()).unwrap();
    ensure(explicit == [0, 6], || format!("explicit {:?}", explicit))?;
    ensure(all.contains(&3) && !explicit.contains(&3), || format!("occurrences {:?}", all))?;
    Ok(format!("B(3,1)={} B(4,1)={} explicit {:?} occurrences {:?}", s3, s4, explicit, all))
}

// 2. semi-periodicity certificate ------------------------------------------

fn c2() -> Check {
    let d = fixture("sec4-U3");
    let three = semi_k_periodic(&d, 3, 1, LIMIT).unwrap();
    let cert = three.certificate().ok_or("level 3 not semi 1-periodic")?;
    let u = render(&cert.u);
    ensure(u == "0s1s1s0" && cert.c == 2 && cert.l == [0, 1], || {
        format!("U={} c={} l={:?}", u, cert.c, cert.l)
    })?;
    ensure(!semi_k_periodic(&d, 2, 1, LIMIT).unwrap().is_semi_periodic(), || "level 2 semi 1-periodic".into())?;
    ensure(!semi_k_periodic(&d, 3, 2, LIMIT).unwrap().is_semi_periodic(), || "level 3 semi 2-periodic".into())?;
    Ok(format!("U={} c={} l={:?}; level 2 (k=1) and level 3 (k=2) refuted", u, cert.c, cert.l))
}

// 3. one periodic and one aperiodic coding ---------------------------------

fn c3() -> Check {
    let d = fixture("ex-someper");
    let opts = PeriodicityOptions::default();
    let one = k_coding_periodicity(&d, 1, &opts).unwrap();
    let Verdict::Periodic { period, from_level } = &one.verdict else {
        return Err(format!("k=1 verdict {}", one.verdict.name()));
    };
    ensure(render(period) == "01ss", || format!("k=1 period {}", render(period)))?;
    let p1 = minimal_orbit_prefix(&d, 1, 10_000, 64).unwrap();
    let lp1 = least_period(p1.letters()).unwrap();
    ensure(p1.len() == 10_000 && lp1 == 4 && render(&p1.slice(0, 4)) == "01ss", || {
        format!("k=1 prefix least period {}", lp1)
    })?;

    let two = k_coding_periodicity(&d, 2, &opts).unwrap();
    ensure(two.verdict == Verdict::Aperiodic, || format!("k=2 verdict {}", two.verdict.name()))?;
    let p2 = minimal_orbit_prefix(&d, 2, 10_000, 64).unwrap();
    let lp2 = least_period(p2.letters()).unwrap();
    ensure(p2.len() == 10_000 && lp2 > 5_000, || format!("k=2 prefix least period {}", lp2))?;
    Ok(format!(
        "k=1 periodic 01ss from level {} (prefix period {}); k=2 aperiodic (prefix period {})",
        from_level, lp1, lp2
    ))
}

// 4. the all-LDC example -----------------------------------------------------

fn c4() -> Check {
    let d = fixture("ex-all-ldc");
    let mut failing = Vec::new();
    for n in 2..=8 {
        for k in 1..=n.min(4) {
            if !ldc(&d, n, k, LIMIT).unwrap().pass() {
                failing.push((n, k));
            }
        }
    }
    // independent route: naive expansion along the thread, all-p scan
    let thread = MinimalThread::new(&d);
    let naive = naive_prefix(&d, 1, 10_000, |n| thread.vertex_at(&d, n));
    let p = naive_least_period(&naive);
    let block = common::render(&naive[..p.min(naive.len())]);
    let ours = minimal_orbit_prefix(&d, 1, 10_000, 64).unwrap();
    ensure(letters(&ours) == naive, || "lazy prefix differs from naive expansion".into())?;
    let observed = format!("LDC fails at (n,k) in {:?}; least period {} with block {}", failing, p, block);
    if failing.is_empty() && p == 7 && block == "0s1sss" {
        Ok(observed)
    } else {
        Err(format!(
            "{}. LDC(n,n) cannot hold: level-n blocks over A_n are runs of distinct symbols; \
             LDC(3,2) fails because B(3,1) ends in B(2,2). The block 0s1sss has length 6, not 7. \
             LDC does hold for every n>=2 at k=1 and every n>=4 at k<n",
            observed
        ))
    }
}

// 5. rank-one structure ------------------------------------------------------

fn rank_one_horizon(table: &RecursionTable) -> usize {
    table.stationary_from.unwrap() + 2
}

fn c5() -> Check {
    let opts = PeriodicityOptions::default();
    for seed in 0..100 {
        let table = random_rank_one(seed, RankOneShape::Periodic);
        let RankOneOutcome::Structure(s) = rank_one_structure(&table, rank_one_horizon(&table)).unwrap() else {
            return Err(format!("periodic seed {}: no structure", seed));
        };
        let d = OrderedDiagram::from_recursion(&table).unwrap();
        for k in 1..=3 {
            let r = k_coding_periodicity(&d, k, &opts).unwrap();
            let prefix = minimal_orbit_prefix(&d, k, 10_000, 64).unwrap();
            ensure(r.verdict.name() == "periodic" && certified_period(prefix.letters()).is_some(), || {
                format!("periodic seed {} k={}: {}", seed, k, r.verdict.name())
            })?;
            if k == 1 {
                ensure(naive_least_period(prefix.letters()) == s.period.len(), || {
                    format!("periodic seed {}: period {}", seed, render(&s.period))
                })?;
            }
        }
    }
    for seed in 0..100 {
        let table = random_rank_one(seed, RankOneShape::Broken);
        let outcome = rank_one_structure(&table, rank_one_horizon(&table)).unwrap();
        ensure(matches!(outcome, RankOneOutcome::Refutation { .. }), || {
            format!("broken seed {}: {:?}", seed, outcome)
        })?;
        let d = OrderedDiagram::from_recursion(&table).unwrap();
        let prefix = minimal_orbit_prefix(&d, 1, 10_000, 64).unwrap();
        ensure(certified_period(prefix.letters()).is_none(), || format!("broken seed {}: periodic prefix", seed))?;
    }
    Ok("100 settled recursions periodic for k<=3; 100 unsettled refuted on 10^4 prefixes".into())
}

// 6. LDC against its two-level equivalent ------------------------------------

fn ldc_agreement(d: &OrderedDiagram) -> (usize, Vec<(usize, usize)>) {
    let (mut compared, mut disagree) = (0, Vec::new());
    for n in 1..=6 {
        if !d.has_level(n + 1) {
            break;
        }
        for k in 1..=n.min(3) {
            if Alphabet::new(d, k).is_err() {
                continue;
            }
            match (ldc(d, n, k, LIMIT), ldc_via_equivalence(d, n, k, LIMIT)) {
                (Ok(a), Ok(b)) if a.pass() == b => compared += 1,
                (Err(_), Err(_)) => {}
                _ => disagree.push((n, k)),
            }
        }
    }
    (compared, disagree)
}

fn c6() -> Check {
    let mut total = 0;
    let mut bad = Vec::new();
    for f in corpus::all() {
        let Ok(d) = f.diagram() else { continue };
        let (c, dis) = ldc_agreement(&d);
        total += c;
        bad.extend(dis.into_iter().map(|p| format!("{} {:?}", f.name, p)));
    }
    for seed in 0..200u64 {
        let policy = if seed % 2 == 0 { SpacerPolicy::Isolated } else { SpacerPolicy::Branching };
        let d = random_stationary(seed, 1 + seed as usize % 3, 4, policy).unwrap();
        let (c, dis) = ldc_agreement(&d);
        total += c;
        bad.extend(dis.into_iter().map(|p| format!("seed {} {:?}", seed, p)));
    }
    ensure(bad.is_empty(), || format!("disagreements: {:?}", bad))?;
    Ok(format!("{} (n,k) comparisons, 0 disagreements", total))
}

// 7. the characterization in both directions ---------------------------------

fn c7() -> Check {
    let opts = PeriodicityOptions::default();
    for seed in 0..100u64 {
        let d = random_ldc_stationary(seed, 1 + seed as usize % 3).unwrap();
        let r = k_coding_periodicity(&d, 1, &opts).unwrap();
        ensure(r.verdict.name() == "periodic" && r.prefix.as_ref().is_some_and(|p| p.agrees), || {
            format!("positive seed {}: {}", seed, r.verdict.name())
        })?;
        let w = ldc(&d, 2, 1, LIMIT).unwrap().certificate().unwrap().period_word();
        let prefix = minimal_orbit_prefix(&d, 1, 10_000, 64).unwrap();
        let p = naive_least_period(prefix.letters());
        let follows = prefix.letters().iter().enumerate().all(|(i, l)| *l == w.letters()[i % w.len()]);
        ensure(w.len().is_multiple_of(p) && follows, || format!("positive seed {}: prefix is not (U s^c)^inf", seed))?;
    }
    let (mut controls, mut seed) = (0, 0u64);
    while controls < 100 {
        let d = random_ldc_stationary(seed, 1 + seed as usize % 3).unwrap();
        if let Some(p) = perturb_deficit(&d, seed) {
            controls += 1;
            ensure((2..=6).all(|n| !ldc(&p, n, 1, LIMIT).unwrap().pass()), || {
                format!("control seed {}: LDC holds somewhere", seed)
            })?;
            let r = k_coding_periodicity(&p, 1, &opts).unwrap();
            let prefix = minimal_orbit_prefix(&p, 1, 10_000, 64).unwrap();
            let lp = least_period(prefix.letters()).unwrap();
            ensure(r.verdict == Verdict::Aperiodic && lp > 5_000, || {
                format!("control seed {}: {} with prefix period {}", seed, r.verdict.name(), lp)
            })?;
        }
        seed += 1;
    }
    Ok(format!("100 LDC diagrams periodic; 100 perturbed controls (seeds 0..{}) aperiodic", seed))
}

// 8. word utilities against brute force --------------------------------------

fn binary_words(len: usize) -> impl Iterator<Item = Vec<u8>> {
    (0u32..1 << len).map(move |bits| (0..len).map(|i| (bits >> i & 1) as u8).collect())
}

fn c8() -> Check {
    let mut pairs = 0;
    for total in 0..=12 {
        for lu in 0..=total {
            for u in binary_words(lu) {
                for v in binary_words(total - lu) {
                    pairs += 1;
                    ensure(commute(&u, &v) == naive_commute(&u, &v), || format!("commute {:?} {:?}", u, v))?;
                }
            }
        }
    }
    let mut roots = 0;
    for len in 1..=12 {
        for w in binary_words(len) {
            roots += 1;
            ensure(primitive_root(&w).unwrap() == naive_primitive_root(&w), || format!("root {:?}", w))?;
        }
    }
    let mut r = ChaCha8Rng::seed_from_u64(8);
    for i in 0..1000 {
        let len = r.gen_range(1..=512);
        let w: Vec<u8> = if i % 2 == 0 {
            let sigma = r.gen_range(1..=3);
            (0..len).map(|_| r.gen_range(0..sigma)).collect()
        } else {
            // a random root repeated, sometimes with one mutation
            let root: Vec<u8> = (0..r.gen_range(1..=40)).map(|_| r.gen_range(0..3)).collect();
            let mut w: Vec<u8> = root.iter().copied().cycle().take(len).collect();
            if r.gen_bool(0.3) {
                let at = r.gen_range(0..len);
                w[at] = (w[at] + 1) % 3;
            }
            w
        };
        ensure(least_period(&w).unwrap() == naive_least_period(&w), || format!("least period {:?}", w))?;
    }
    Ok(format!("{} commute pairs, {} roots, 1000 least periods", pairs, roots))
}

// 9. structural invariants on the corpus --------------------------------------

fn corpus_diagrams() -> Vec<(&'static str, OrderedDiagram)> {
    corpus::all()
        .into_iter()
        .filter_map(|f| f.diagram().ok().map(|d| (f.name, d)))
        .collect()
}

fn top(d: &OrderedDiagram, cap: usize) -> usize {
    d.depth().map_or(cap, |h| h.min(cap))
}

fn codable(d: &OrderedDiagram, k: usize) -> bool {
    d.has_level(k) && Alphabet::new(d, k).is_ok()
}

fn c9() -> Check {
    let mut counts = [0usize; 5];
    let mut bound_notes = Vec::new();
    let mut literal_breaks = Vec::new();
    for (name, d) in corpus_diagrams() {
        for k in 1..=3 {
            if !codable(&d, k) || top(&d, 6) < k {
                continue;
            }
            // dim/length agreement, against naive expansion where small
            let t = top(&d, 6);
            let naive = naive_blocks(&d, k, t);
            for n in k..=t {
                let dims = d.dims(n);
                for j in 1..=d.vertex_count(n) {
                    let b = basic_block(&d, n, j, k).unwrap();
                    let want = if j == d.spacer(n) { BigUint::from(1u32) } else { dims[j - 1].clone() };
                    ensure(b.len() == &want, || format!("{} k={} |B({},{})|", name, k, n, j))?;
                    if b.len_u64().is_some_and(|l| l <= 20_000) {
                        let got = letters(&b.expand_all(20_000).unwrap());
                        ensure(got == naive[n - k][j - 1], || format!("{} k={} B({},{})", name, k, n, j))?;
                    }
                    counts[0] += 1;
                    // factor-map naturality
                    if k >= 2 && j <= d.k(n) && b.len_u64().is_some_and(|l| l <= 20_000) {
                        let alphabet = Alphabet::new(&d, k).unwrap();
                        let hi = b.expand_all(20_000).unwrap();
                        for kp in 1..k {
                            let lo = basic_block(&d, n, j, kp).unwrap().expand_all(20_000).unwrap();
                            ensure(alphabet.factor_map(&d, &hi, kp).unwrap() == lo, || {
                                format!("{} pi_{},{} B({},{})", name, k, kp, n, j)
                            })?;
                            counts[1] += 1;
                        }
                    }
                }
            }
            // pseudo-completeness implication
            if d.has_level(k + 1) && semi_k_periodic(&d, k + 1, k, LIMIT).unwrap().is_semi_periodic() {
                ensure(d.pseudo_complete(k + 1).unwrap(), || format!("{} level {} not pseudo-complete", name, k + 1))?;
                counts[3] += 1;
            }
        }
        // telescoping invariance of coding prefixes
        let t = top(&d, 5);
        for cuts in [vec![0, 1], vec![0, 2], vec![0, 1, 3], vec![0, 2, 4], vec![0, 3]] {
            if *cuts.last().unwrap() > t {
                continue;
            }
            let tele = d.telescope(&cuts).unwrap();
            for (new_k, &k) in cuts.iter().enumerate().skip(1) {
                if !codable(&d, k) {
                    continue;
                }
                let before = minimal_orbit_prefix(&d, k, 1000, 64).unwrap();
                let after = minimal_orbit_prefix(&tele, new_k, 1000, 64).unwrap();
                ensure(before == after, || format!("{} cuts {:?} k={}", name, cuts, k))?;
                counts[2] += 1;
            }
        }
        // spacer runs under eventual LDC
        for k in 1..=2 {
            if !codable(&d, k) {
                continue;
            }
            // finite diagrams too shallow for this k have no verdict
            let Ok(r) = k_coding_periodicity(&d, k, &PeriodicityOptions::default()) else { continue };
            let from = match r.verdict {
                Verdict::Periodic { from_level, .. } | Verdict::PeriodicThrough { from_level, .. } => from_level,
                _ => continue,
            };
            let Some(cert) = ldc(&d, from, k, LIMIT).unwrap().certificate().cloned() else { continue };
            let prefix = minimal_orbit_prefix(&d, k, 10_000, 64).unwrap();
            let run = prefix.longest_spacer_run();
            let inner = cert.u.longest_spacer_run();
            ensure(run <= cert.c.max(inner), || format!("{} k={}: run {} > max(c, U runs)", name, k, run))?;
            if run > cert.c {
                literal_breaks.push(format!("{} k={}: run {} > c_N={} (U={} has a run of {})", name, k, run, cert.c, render(&cert.u), inner));
            }
            bound_notes.push(format!("{}/{}", name, k));
            counts[4] += 1;
        }
    }
    let summary = format!(
        "{} block lengths, {} factor maps, {} telescoped prefixes, {} pseudo-complete levels, {} run bounds ({})",
        counts[0],
        counts[1],
        counts[2],
        counts[3],
        counts[4],
        bound_notes.join(" ")
    );
    if literal_breaks.is_empty() {
        Ok(summary)
    } else {
        Err(format!(
            "{}; spacer runs exceed c_N: {}. A separator s^c can only merge with spacers inside U, \
             so the bound that holds is max(c_N, longest run in U)",
            summary,
            literal_breaks.join("; ")
        ))
    }
}

// 10. lazy prefix of a long block ---------------------------------------------

fn peak_kb() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    line.split_whitespace().nth(1)?.parse().ok()
}

/// Runs in a fresh process so the peak-memory reading is its own.
fn c10_child() {
    let d = fixture("chacon");
    let t = Instant::now();
    let prefix = minimal_orbit_prefix(&d, 1, 1_000_000, 64).unwrap();
    let elapsed = t.elapsed();
    let spacers = prefix.letters().iter().filter(|l| l.is_spacer()).count();
    println!("{} {} {} {}", elapsed.as_micros(), peak_kb().unwrap_or(0), prefix.len(), spacers);
}

fn c10() -> Check {
    let exe = std::env::current_exe().map_err(|e| e.to_string())?;
    let out = Command::new(exe).env(CHILD_VAR, "10").output().map_err(|e| e.to_string())?;
    let text = String::from_utf8_lossy(&out.stdout);
    let fields: Vec<u64> = text.split_whitespace().filter_map(|f| f.parse().ok()).collect();
    let [micros, kb, len, spacers] = fields[..] else {
        return Err(format!("child output {:?}", text));
    };
    // the same prefix, checked against naive expansion of B(14,1)
    let d = fixture("chacon");
    let naive = naive_block(&d, 14, 1, 1);
    let ours = minimal_orbit_prefix(&d, 1, 1_000_000, 64).unwrap();
    ensure(letters(&ours) == naive[..1_000_000], || "prefix differs from naive expansion".into())?;
    // and a window deep inside B(18,1), which is never materialized
    let t = Instant::now();
    let b18 = basic_block(&d, 18, 1, 1).unwrap();
    let middle = b18.len_u64().unwrap() / 2;
    let window = b18.expand(middle, 1000).unwrap();
    let deep = t.elapsed();
    let secs = micros as f64 / 1e6;
    let mb = kb as f64 / 1024.0;
    let detail = format!(
        "10^6 symbols in {:.3}s, peak {:.1} MB ({} spacers); |B(18,1)|={}, 1000-symbol window at {} in {:.3}s ({} spacers)",
        secs,
        mb,
        spacers,
        b18.len(),
        middle,
        deep.as_secs_f64(),
        window.letters().iter().filter(|l| l.is_spacer()).count()
    );
    ensure(len == 1_000_000 && secs < 2.0 && mb < 256.0, || detail.clone())?;
    Ok(detail)
}

// -----------------------------------------------------------------------------

fn main() {
    if std::env::var(CHILD_VAR).as_deref() == Ok("10") {
        c10_child();
        return;
    }
    let criteria: [Criterion; 10] = [
        (1, 1.0, c1),
        (2, 1.0, c2),
        (3, 5.0, c3),
        (4, 5.0, c4),
        (5, 30.0, c5),
        (6, 30.0, c6),
        (7, 60.0, c7),
        (8, 10.0, c8),
        (9, 10.0, c9),
        (10, f64::INFINITY, c10),
    ];
    let mut unexpected = Vec::new();
    for (id, budget, check) in criteria {
        let t = Instant::now();
        let result = check();
        let elapsed = t.elapsed();
        let in_time = elapsed <= Duration::from_secs_f64(budget.min(1e9));
        let (verdict, detail) = match (&result, in_time) {
            (Ok(d), true) => ("PASS", d.clone()),
            (Ok(d), false) => ("FAIL", format!("over the {}s budget; {}", budget, d)),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        let budget = if budget.is_finite() { format!("{}s", budget) } else { "2s inside".into() };
        println!("criterion {:>2} {} [{:.2}s / {}] {}", id, verdict, elapsed.as_secs_f64(), budget, detail);
        if verdict == "FAIL" && !KNOWN_FAILURES.contains(&id) {
            unexpected.push(id);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {:?}", unexpected);
        std::process::exit(1);
    }
}
