//! The `bv` command line. [`run`] is the whole program minus process I/O, so
//! tests can drive it directly.

pub mod dot;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use bv_core::analysis::ldc::{ldc, ldc_via_equivalence};
use bv_core::analysis::periodicity::{
    describe_failure, k_coding_periodicity, odometer_verdict, PeriodicityOptions, PeriodicityReport, Verdict,
};
use bv_core::analysis::semi::{semi_k_periodic, SemiOutcome, DEFAULT_MAX_LEN};
use bv_core::blocks::{basic_block, vertex_coding};
use bv_core::coding::{code_orbit, minimal_path_census, minimal_prefix, Termination};
use bv_core::corpus::{self, random_stationary, SpacerPolicy};
use bv_core::{Error, OrderedDiagram, RecursionTable};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_HORIZON: i32 = 3;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_NO_INPUT: i32 = 66;
pub const EXIT_RESOURCE: i32 = 70;

/// Environment override for the expansion ceiling used by the analyses.
pub const MAX_LEN_VAR: &str = "BV_MAX_BLOCK_LEN";

#[derive(Parser, Debug)]
#[command(name = "bv", version, about = "Ordered Bratteli-Vershik diagrams: blocks, codings and periodicity")]
struct Cli {
    /// Print `key<TAB>value` records instead of the human layout
    #[arg(long, global = true)]
    records: bool,
    /// Seed for `--random` inputs
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct Input {
    /// Built-in fixture name (see `bv fixtures`)
    #[arg(long)]
    fixture: Option<String>,
    /// Diagram (`bv 1`) or recursion (`bvrec 1`) file
    #[arg(long)]
    file: Option<PathBuf>,
    /// Seeded random stationary diagram with K vertices per level
    #[arg(long, value_name = "K")]
    random: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the standing conditions and growth
    Validate {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 8)]
        horizon: usize,
    },
    /// Print basic blocks B^(k)(n, j)
    Blocks {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        level: usize,
        /// Every non-spacer vertex when omitted
        #[arg(long)]
        vertex: Option<usize>,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Print the coding by level-k vertices instead
        #[arg(long)]
        vertex_coding: bool,
        /// Longest block printed in full
        #[arg(long, default_value_t = 4096)]
        max_len: u64,
    },
    /// k-coding of the orbit of the minimal path into v(level, vertex)
    Coding {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        level: usize,
        #[arg(long, default_value_t = 1)]
        vertex: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 64)]
        length: usize,
    },
    /// Periodicity verdict for the k-coding of the minimal path
    Period {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 8)]
        horizon: usize,
        #[arg(long, default_value_t = 10_000)]
        prefix_len: u64,
    },
    /// Semi k-periodicity of one level
    Semi {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        level: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// The local deficit condition LDC(level, k)
    Ldc {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        level: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Decide via "levels n and n+1 share U" instead
        #[arg(long)]
        via_equivalence: bool,
    },
    /// Census, per-k verdicts and the odometer test
    Verdict {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 2)]
        max_k: usize,
        #[arg(long, default_value_t = 8)]
        horizon: usize,
        /// Also tabulate LDC(n, k) for every n <= horizon, k <= min(n, max_k)
        #[arg(long)]
        sweep: bool,
    },
    /// Collapse the levels between cuts
    Telescope {
        #[command(flatten)]
        input: Input,
        /// Comma-separated, strictly increasing, starting at 0
        #[arg(long, value_delimiter = ',', required = true)]
        cuts: Vec<usize>,
    },
    /// List fixtures, emit one, or check every expected fact
    Fixtures {
        #[arg(long, value_name = "NAME", conflicts_with = "check")]
        emit: Option<String>,
        #[arg(long)]
        check: bool,
    },
    /// Graphviz rendering of the first levels
    Dot {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
}

/// What the process should print and return.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_NO_INPUT,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Resource { .. } => EXIT_RESOURCE,
            _ => EXIT_USAGE,
        };
        let mut message = e.to_string();
        if code == EXIT_RESOURCE {
            message.push_str(&format!("\nadvisory: raise --max-len or {} to allow longer expansions", MAX_LEN_VAR));
        }
        Failure { code, message }
    }
}

/// Report lines, rendered as `key value` or `key<TAB>value`.
struct Report {
    records: bool,
    lines: Vec<(String, String)>,
    /// Human mode prints only this, when set.
    bare: Option<String>,
}

impl Report {
    fn new(records: bool) -> Self {
        Report {
            records,
            lines: Vec::new(),
            bare: None,
        }
    }

    fn put(&mut self, key: impl Into<String>, value: impl ToString) {
        self.lines.push((key.into(), value.to_string()));
    }

    fn render(&self) -> String {
        if !self.records {
            if let Some(b) = &self.bare {
                return format!("{}\n", b);
            }
        }
        let sep = if self.records { "\t" } else { " " };
        self.lines.iter().map(|(k, v)| format!("{}{}{}\n", k, sep, v)).collect()
    }
}

fn ceiling() -> u64 {
    std::env::var(MAX_LEN_VAR)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_LEN)
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn yes(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "fail"
    }
}

fn load(input: &Input, seed: u64) -> Result<OrderedDiagram, Failure> {
    if let Some(name) = &input.fixture {
        return Ok(corpus::fixture(name)?.diagram()?);
    }
    if let Some(k) = input.random {
        return Ok(random_stationary(seed, k, 4, SpacerPolicy::Branching)?);
    }
    let path = input.file.as_ref().expect("clap enforces one input");
    let text = std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {}", path.display(), e)))?;
    let recursion = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .is_some_and(|l| l.starts_with("bvrec"));
    let parsed = if recursion {
        RecursionTable::from_text(&text).and_then(|t| OrderedDiagram::from_recursion(&t))
    } else {
        OrderedDiagram::from_text(&text)
    };
    parsed.map_err(|e| Failure::input(format!("{}: {}", path.display(), e)))
}

fn need(cond: bool, message: &str) -> Result<(), Failure> {
    if cond {
        Ok(())
    } else {
        Err(Failure::usage(message))
    }
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Outcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Outcome {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    let mut report = Report::new(cli.records);
    match dispatch(&cli, &mut report) {
        Ok(code) => Outcome {
            code,
            stdout: report.render(),
            stderr: String::new(),
        },
        Err(f) => Outcome {
            code: f.code,
            stdout: report.render(),
            stderr: format!("bv: {}\n", f.message),
        },
    }
}

fn dispatch(cli: &Cli, out: &mut Report) -> Result<i32, Failure> {
    let seed = cli.seed;
    match &cli.command {
        Command::Validate { input, horizon } => {
            let d = load(input, seed)?;
            let r = d.validate(*horizon);
            out.put("structural", yes(r.structural.is_empty()));
            out.put("c1", yes(r.c1.is_empty()));
            out.put("c2", yes(r.c2.is_empty()));
            out.put("c3", yes(r.c3.is_empty()));
            out.put("c4", yes(r.c4.pass()));
            out.put("c4_horizon", r.c4.horizon);
            out.put("c4_min_lengths", join(&r.c4.min_lengths));
            for issue in r.structural.iter().chain(&r.c1).chain(&r.c2).chain(&r.c3) {
                let at = match issue.vertex {
                    Some(v) => format!("v({},{})", issue.level, v),
                    None => format!("level {}", issue.level),
                };
                out.put("issue", format!("{}: {}", at, issue.detail));
            }
            out.put("valid", yes(r.pass()));
            Ok(if r.pass() { EXIT_OK } else { EXIT_FAIL })
        }
        Command::Blocks {
            input,
            level,
            vertex,
            k,
            vertex_coding: by_vertex,
            max_len,
        } => {
            need(*k >= 1 && k <= level, "blocks need 1 <= k <= level")?;
            let d = load(input, seed)?;
            need(d.has_level(*level), "level is beyond the diagram")?;
            let vertices: Vec<usize> = match vertex {
                Some(j) => vec![*j],
                None => (1..=d.k(*level)).collect(),
            };
            let mut shown = Vec::new();
            for &j in &vertices {
                let key = format!("B({},{})", level, j);
                let text = if *by_vertex {
                    join(&vertex_coding(&d, *level, j, *k, *max_len)?)
                } else {
                    let block = basic_block(&d, *level, j, *k)?;
                    out.put(format!("{}.length", key), block.len());
                    let word = block.expand_all(*max_len)?;
                    block.dag().alphabet().render(&word)
                };
                out.put(key, &text);
                shown.push(text);
            }
            if vertex.is_some() {
                out.bare = shown.pop();
            }
            Ok(EXIT_OK)
        }
        Command::Coding {
            input,
            level,
            vertex,
            k,
            length,
        } => {
            need(*k >= 1 && k <= level, "coding needs 1 <= k <= level")?;
            let d = load(input, seed)?;
            let start = minimal_prefix(&d, *level, *vertex)?;
            let orbit = code_orbit(&d, &start, *k, *length)?;
            let alphabet = bv_core::Alphabet::new(&d, *k)?;
            out.put("coding", alphabet.render(&orbit.word));
            out.put("steps", orbit.steps);
            out.put(
                "termination",
                match orbit.reason {
                    Termination::Length => "length".to_string(),
                    Termination::CarryOverflow { depth } => format!("carry-overflow at depth {}", depth),
                    Termination::FixedPoint => "fixed-point".to_string(),
                },
            );
            Ok(EXIT_OK)
        }
        Command::Period {
            input,
            k,
            horizon,
            prefix_len,
        } => {
            need(*k >= 1, "k must be at least 1")?;
            let d = load(input, seed)?;
            let opts = PeriodicityOptions {
                horizon: *horizon,
                prefix_len: *prefix_len,
                max_len: ceiling(),
                ..PeriodicityOptions::default()
            };
            let r = k_coding_periodicity(&d, *k, &opts)?;
            put_period(out, &r, "");
            Ok(r.verdict.exit_code())
        }
        Command::Semi { input, level, k } => {
            need(*k >= 1 && k <= level, "semi needs 1 <= k <= level")?;
            let d = load(input, seed)?;
            match semi_k_periodic(&d, *level, *k, ceiling())? {
                SemiOutcome::Certificate(c) => {
                    out.put("semi", "pass");
                    out.put("U", c.u.render_auto());
                    out.put("c", c.c);
                    out.put("t", join(&c.t));
                    out.put("l", join(&c.l));
                    Ok(EXIT_OK)
                }
                SemiOutcome::NotSemiPeriodic(r) => {
                    out.put("semi", "fail");
                    out.put("witness", r.witness);
                    out.put("vertex", r.vertex);
                    out.put("reason", r.reason);
                    Ok(EXIT_FAIL)
                }
            }
        }
        Command::Ldc {
            input,
            level,
            k,
            via_equivalence,
        } => {
            need(*k >= 1 && k <= level, "LDC needs 1 <= k <= level")?;
            let d = load(input, seed)?;
            let pass = if *via_equivalence {
                ldc_via_equivalence(&d, *level, *k, ceiling())?
            } else {
                let r = ldc(&d, *level, *k, ceiling())?;
                if let Some(c) = r.certificate() {
                    out.put("U", c.u.render_auto());
                    out.put("c", c.c);
                    out.put("l", join(&c.l));
                }
                out.put("checked", r.checked);
                if let Some(why) = describe_failure(&r) {
                    out.put("failure", why);
                }
                r.pass()
            };
            out.put("ldc", yes(pass));
            Ok(if pass { EXIT_OK } else { EXIT_FAIL })
        }
        Command::Verdict {
            input,
            max_k,
            horizon,
            sweep,
        } => {
            need(*max_k >= 1, "max-k must be at least 1")?;
            let d = load(input, seed)?;
            let census = minimal_path_census(&d, (*horizon).max(2))?;
            out.put("minimal_paths", census.minimal_paths);
            out.put("census_exact", census.exact);
            let opts = PeriodicityOptions {
                horizon: *horizon,
                max_len: ceiling(),
                ..PeriodicityOptions::default()
            };
            let mut codes = Vec::new();
            for k in 1..=*max_k {
                let r = k_coding_periodicity(&d, k, &opts)?;
                put_period(out, &r, &format!("k{}.", k));
                codes.push(r.verdict.exit_code());
            }
            let o = odometer_verdict(&d, (*horizon).max(2), ceiling())?;
            out.put("odometer", o.verdict.name());
            out.put("odometer_cuts", join(&o.cuts));
            if let Some(n) = o.spacer_isolated_from {
                out.put("spacer_isolated_from", n);
            }
            if *sweep {
                let top = match d.depth() {
                    Some(depth) => (*horizon).min(depth.saturating_sub(1)),
                    None => *horizon,
                };
                let grid: Vec<(usize, usize)> =
                    (1..=top).flat_map(|n| (1..=n.min(*max_k)).map(move |k| (n, k))).collect();
                let limit = ceiling();
                let results: Vec<String> = grid
                    .par_iter()
                    .map(|&(n, k)| match ldc(&d, n, k, limit) {
                        Ok(r) => yes(r.pass()).to_string(),
                        Err(e @ Error::Resource { .. }) => format!("skipped ({})", e),
                        Err(e) => format!("error ({})", e),
                    })
                    .collect();
                for ((n, k), r) in grid.iter().zip(results) {
                    out.put(format!("ldc({},{})", n, k), r);
                }
            }
            Ok(if codes.contains(&EXIT_HORIZON) {
                EXIT_HORIZON
            } else if codes.contains(&EXIT_FAIL) {
                EXIT_FAIL
            } else {
                EXIT_OK
            })
        }
        Command::Telescope { input, cuts } => {
            let d = load(input, seed)?;
            let t = d.telescope(cuts)?;
            out.bare = Some(t.to_text().trim_end().to_string());
            out.put("levels", join(cuts));
            out.put("diagram", t.to_text().trim_end().replace('\n', "\\n"));
            Ok(EXIT_OK)
        }
        Command::Fixtures { emit, check } => {
            if let Some(name) = emit {
                let f = corpus::fixture(name)?;
                out.bare = Some(f.to_text().trim_end().to_string());
                out.put("name", f.name);
                out.put("text", f.to_text().trim_end().replace('\n', "\\n"));
                return Ok(EXIT_OK);
            }
            let mut failed = false;
            for f in corpus::all() {
                if !*check {
                    out.put(f.name, f.summary);
                    continue;
                }
                let d = f.diagram()?;
                for (i, fact) in f.facts.iter().enumerate() {
                    let verdict = match fact.verify(&d) {
                        Ok(()) => "pass".to_string(),
                        Err(found) => {
                            failed = true;
                            format!("FAIL (found {})", found)
                        }
                    };
                    out.put(
                        format!("{}.{}", f.name, i + 1),
                        format!("{} [{}] {}", verdict, fact.provenance.tag(), fact.describe()),
                    );
                }
            }
            Ok(if failed { EXIT_FAIL } else { EXIT_OK })
        }
        Command::Dot { input, depth } => {
            need(*depth >= 1, "depth must be at least 1")?;
            let d = load(input, seed)?;
            let text = dot::export_dot(&d, *depth);
            out.bare = Some(text.trim_end().to_string());
            out.put("dot", text.trim_end().replace('\n', "\\n"));
            Ok(EXIT_OK)
        }
    }
}

fn put_period(out: &mut Report, r: &PeriodicityReport, prefix: &str) {
    let key = |k: &str| format!("{}{}", prefix, k);
    out.put(key("verdict"), r.verdict.name());
    match &r.verdict {
        Verdict::Periodic { period, from_level } => {
            out.put(key("period"), period.render_auto());
            out.put(key("from_level"), from_level);
        }
        Verdict::PeriodicThrough { from_level, horizon } => {
            out.put(key("from_level"), from_level);
            out.put(key("horizon"), horizon);
        }
        Verdict::AperiodicEvidence { horizon } => out.put(key("horizon"), horizon),
        Verdict::MultiMinimal { paths } => out.put(key("paths"), paths),
        Verdict::Aperiodic => {}
    }
    if let Some(why) = &r.refutation {
        out.put(key("refutation"), why);
    }
    if !r.unreachable.is_empty() {
        let list: Vec<String> = r.unreachable.iter().map(usize::to_string).collect();
        out.put(key("off_thread"), list.join(","));
    }
    if let Some(p) = &r.prefix {
        out.put(key("prefix_len"), p.len);
        out.put(key("prefix_least_period"), p.least_period);
        out.put(key("prefix_agrees"), p.agrees);
    }
}
