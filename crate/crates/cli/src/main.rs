use std::fs;
use std::io::{self, Write};
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use hyperturan::counter::ReportOptions;
use hyperturan::formula::{self, CopyBound, FormulaRow};
use hyperturan::hypergraph;
use hyperturan::search::{self, AuditReport, CExactMode, SearchOptions, SearchResult};
use hyperturan::{ConstructionSpec, CopyCounter, CountReport, Pattern, Triple, TripleSystem, Workers};

/// Copy counting and extremal constructions for 3-uniform hypergraphs.
#[derive(Parser)]
#[command(name = "hyperturan", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Worker threads for counting and search
    #[arg(long, global = true, env = "HYPERTURAN_WORKERS", default_value_t = 1)]
    workers: usize,
    /// Emit JSON, one record per line (default)
    #[arg(long, global = true, conflicts_with = "tsv")]
    json: bool,
    /// Emit tab-separated rows under a header line
    #[arg(long, global = true)]
    tsv: bool,
    /// Write output to this file instead of stdout
    #[arg(short = 'o', long = "output", global = true)]
    output: Option<PathBuf>,
    /// Include wall-clock time and search node counts, which vary between runs
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Args)]
struct Source {
    /// Construction string such as `p3:n=8+zero2:q=4`
    #[arg(long, conflicts_with_all = ["input", "config"])]
    spec: Option<String>,
    /// Host in the `u3 n m` edge-list format
    #[arg(long, conflicts_with = "config")]
    input: Option<PathBuf>,
    /// File of construction strings, one per line; `#` starts a comment
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Build an extremal host (P3(n), T3(n), B3(n) or T3_r(n)) with optional
    /// edge additions, and print it as an edge list.
    Gen {
        #[command(flatten)]
        source: Source,
    },
    /// Count copies of a pattern F in a host: edge-preserving injections
    /// V(F) -> V(H) divided by |Aut(F)|.
    Count {
        #[command(flatten)]
        source: Source,
        /// Pattern name: fano, f5, k4minus, b5, pasch, edge, L3..L5
        #[arg(long)]
        pattern: String,
        /// Also report copies through each edge
        #[arg(long)]
        per_edge: bool,
        /// Also report copies through each vertex
        #[arg(long)]
        per_vertex: bool,
    },
    /// Compute c(n,F), the fewest copies of F created by adding one edge to
    /// the extremal host for F, with a minimizing edge.
    Cexact {
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        n: usize,
        /// Number of parts for L_{r+1}; defaults to the clique size minus one
        #[arg(long)]
        r: Option<usize>,
        /// Scan every non-edge instead of one per part signature
        #[arg(long)]
        full: bool,
    },
    /// Exact Turán number ex(n, {F1, F2, ...}) by branch and bound.
    Search {
        #[arg(long)]
        n: usize,
        /// Forbidden patterns, comma separated
        #[arg(long, value_delimiter = ',', required = true)]
        pattern: Vec<String>,
        /// Node budget; the result is not proved optimal once it runs out
        #[arg(long)]
        budget: Option<u64>,
        /// Extremal systems to report
        #[arg(long, default_value_t = 1)]
        witnesses: usize,
        /// Assume {0,1,2} is an edge
        #[arg(long)]
        fix_first_edge: bool,
    },
    /// Check the q*c(n,F) lower bound on a construction with q added edges:
    /// total copies, copies with exactly one added edge, and per-edge counts.
    Audit {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        pattern: String,
        /// Replace the multiplicity of the single addition
        #[arg(long)]
        q: Option<usize>,
        /// Also run random additions and rewires on the same base
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Tabulate the closed forms p3(n), t3(n), b3(n), t3_r(n), c(n,Fano) and
    /// q(n,Fano).
    Formulas {
        /// A single n or an inclusive range such as `8-20`
        #[arg(long, value_parser = parse_range)]
        n: RangeInclusive<u64>,
        #[arg(long, default_value_t = 3)]
        r: u64,
    },
}

fn parse_range(s: &str) -> std::result::Result<RangeInclusive<u64>, String> {
    let num = |t: &str| t.trim().parse::<u64>().map_err(|_| format!("`{t}` is not a number"));
    let (lo, hi) = match s.split_once('-') {
        Some((a, b)) => (num(a)?, num(b)?),
        None => (num(s)?, num(s)?),
    };
    if lo < 3 || lo > hi {
        return Err(format!("range `{s}` must satisfy 3 <= lo <= hi"));
    }
    Ok(lo..=hi)
}

/// A record that can be written as JSON or as a TSV row.
trait Record: Serialize {
    fn header() -> &'static str;
    fn row(&self) -> String;
}

#[derive(Serialize)]
struct GenRecord {
    spec: String,
    n: usize,
    m: usize,
    part_sizes: Vec<usize>,
    added: Vec<Triple>,
    removed: Vec<Triple>,
    edges: Vec<Triple>,
}

fn triples(ts: &[Triple]) -> String {
    ts.iter().map(|t| t.vertices().map(|v| v.to_string()).join(",")).collect::<Vec<_>>().join(";")
}

impl Record for GenRecord {
    fn header() -> &'static str {
        "spec\tn\tm\tpart_sizes\tadded\tremoved"
    }
    fn row(&self) -> String {
        let sizes = self.part_sizes.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(",");
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}",
            self.spec,
            self.n,
            self.m,
            sizes,
            triples(&self.added),
            triples(&self.removed)
        )
    }
}

#[derive(Serialize)]
struct CountRecord {
    source: String,
    #[serde(flatten)]
    report: CountReport,
}

impl Record for CountRecord {
    fn header() -> &'static str {
        "source\tpattern\tn\tm\ttotal_copies"
    }
    fn row(&self) -> String {
        let r = &self.report;
        format!("{}\t{}\t{}\t{}\t{}", self.source, r.pattern, r.n, r.m, r.total_copies)
    }
}

#[derive(Serialize)]
struct CExactRecord {
    #[serde(flatten)]
    bound: CopyBound,
    #[serde(skip_serializing_if = "Option::is_none")]
    closed_form: Option<u128>,
}

impl Record for CExactRecord {
    fn header() -> &'static str {
        "pattern\tn\tvalue\twitness\tclosed_form"
    }
    fn row(&self) -> String {
        let b = &self.bound;
        format!(
            "{}\t{}\t{}\t{}\t{}",
            b.pattern,
            b.n,
            b.value,
            b.witness.map(|t| t.to_string()).unwrap_or_default(),
            self.closed_form.map(|c| c.to_string()).unwrap_or_default()
        )
    }
}

#[derive(Serialize)]
struct SearchRecord {
    n: usize,
    forbidden: Vec<String>,
    best_size: usize,
    proved_optimal: bool,
    budget_exhausted: bool,
    witnesses: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    nodes: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    millis: Option<u64>,
}

impl SearchRecord {
    fn new(r: SearchResult, timing: bool) -> Self {
        SearchRecord {
            n: r.n,
            forbidden: r.forbidden,
            best_size: r.best_size,
            proved_optimal: r.proved_optimal,
            budget_exhausted: r.budget_exhausted,
            witnesses: r.witnesses.iter().map(hypergraph::serialize).collect(),
            nodes: timing.then_some(r.nodes),
            millis: timing.then_some(r.millis),
        }
    }
}

impl Record for SearchRecord {
    fn header() -> &'static str {
        "n\tforbidden\tbest_size\tproved_optimal"
    }
    fn row(&self) -> String {
        format!("{}\t{}\t{}\t{}", self.n, self.forbidden.join(","), self.best_size, self.proved_optimal)
    }
}

impl Record for AuditReport {
    fn header() -> &'static str {
        "spec\tkind\tpattern\tq\ttotal\texactly_one_marked\tc_exact\tbound\tmargin"
    }
    fn row(&self) -> String {
        let kind = serde_json::to_value(self.kind).ok().and_then(|v| v.as_str().map(String::from));
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.spec,
            kind.unwrap_or_default(),
            self.pattern,
            self.q,
            self.total,
            self.exactly_one_marked,
            self.c_exact,
            self.bound,
            self.margin
        )
    }
}

impl Record for FormulaRow {
    fn header() -> &'static str {
        "n\tp3\tt3\tb3\tr\tt3r\tc_fano\tq_fano"
    }
    fn row(&self) -> String {
        let opt = |v: Option<String>| v.unwrap_or_else(|| "-".into());
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.n,
            self.p3,
            self.t3,
            self.b3,
            self.r,
            self.t3r,
            opt(self.c_fano.map(|v| v.to_string())),
            opt(self.q_fano.map(|v| v.to_string()))
        )
    }
}

fn render<R: Record>(records: &[R], tsv: bool) -> Result<String> {
    let mut out = String::new();
    if tsv {
        out.push_str(R::header());
        out.push('\n');
        for r in records {
            out.push_str(&r.row());
            out.push('\n');
        }
    } else {
        for r in records {
            out.push_str(&serde_json::to_string(r)?);
            out.push('\n');
        }
    }
    Ok(out)
}

fn read_config(path: &Path) -> Result<Vec<String>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(String::from)
        .collect())
}

fn specs(source: &Source) -> Result<Vec<ConstructionSpec>> {
    let strings = match (&source.spec, &source.config) {
        (Some(s), _) => vec![s.clone()],
        (None, Some(path)) => read_config(path)?,
        (None, None) => bail!("a construction is required: pass --spec or --config"),
    };
    strings.iter().map(|s| Ok(s.parse::<ConstructionSpec>()?)).collect()
}

/// Hosts named by `--input`, `--spec` or `--config`, with a label each.
fn hosts(source: &Source) -> Result<Vec<(String, TripleSystem)>> {
    if let Some(path) = &source.input {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let host = hypergraph::parse(&text).with_context(|| format!("parsing {}", path.display()))?;
        return Ok(vec![(path.display().to_string(), host)]);
    }
    specs(source)?
        .into_iter()
        .map(|s| Ok((s.to_string(), s.build()?.system)))
        .collect()
}

fn run(cli: Cli) -> Result<String> {
    let common = &cli.common;
    let workers = Workers::new(common.workers);
    let tsv = common.tsv;
    match &cli.command {
        Command::Gen { source } => {
            let specs = specs(source)?;
            let batch = source.config.is_some();
            let mut records = Vec::new();
            for spec in specs {
                let c = spec.build()?;
                if !batch && !common.json && !tsv {
                    return Ok(hypergraph::serialize(&c.system));
                }
                records.push(GenRecord {
                    spec: spec.to_string(),
                    n: c.system.n(),
                    m: c.system.edge_count(),
                    part_sizes: c.partition.part_sizes().to_vec(),
                    added: c.added,
                    removed: c.removed,
                    edges: c.system.edges().copied().collect(),
                });
            }
            render(&records, tsv)
        }
        Command::Count {
            source,
            pattern,
            per_edge,
            per_vertex,
        } => {
            let pattern = Pattern::by_name(pattern)?;
            let counter = CopyCounter::new(&pattern).with_workers(workers);
            let options = ReportOptions {
                per_edge: *per_edge,
                per_vertex: *per_vertex,
                timing: common.timing,
            };
            let records = hosts(source)?
                .into_iter()
                .map(|(label, host)| {
                    Ok(CountRecord {
                        source: label,
                        report: counter.report(&host, options)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            render(&records, tsv)
        }
        Command::Cexact { pattern, n, r, full } => {
            let pattern = Pattern::by_name(pattern)?;
            let mode = if *full { CExactMode::Full } else { CExactMode::Orbits };
            let bound = search::c_exact(&pattern, *n, *r, mode, workers)?;
            let closed_form = (pattern.name() == "fano").then(|| formula::c_fano(*n as u64));
            render(&[CExactRecord { bound, closed_form }], tsv)
        }
        Command::Search {
            n,
            pattern,
            budget,
            witnesses,
            fix_first_edge,
        } => {
            let patterns = pattern
                .iter()
                .map(|p| Pattern::by_name(p.trim()))
                .collect::<hyperturan::Result<Vec<_>>>()?;
            let options = SearchOptions {
                budget: *budget,
                witness_cap: *witnesses,
                workers,
                fix_first_edge: *fix_first_edge,
            };
            let result = search::exact_turan(*n, &patterns, &options)?;
            render(&[SearchRecord::new(result, common.timing)], tsv)
        }
        Command::Audit {
            source,
            pattern,
            q,
            trials,
            seed,
        } => {
            if source.input.is_some() {
                bail!("audit needs a construction; --input is not accepted");
            }
            let pattern = Pattern::by_name(pattern)?;
            let mut records = Vec::new();
            for spec in specs(source)? {
                match trials {
                    None => records.push(search::audit_sharpness(&spec, &pattern, *q, workers)?),
                    Some(t) => records.extend(search::audit_perturbed(&spec, &pattern, *q, *t, *seed, workers)?),
                }
            }
            render(&records, tsv)
        }
        Command::Formulas { n, r } => {
            let rows: Vec<FormulaRow> = n.clone().map(|n| formula::formula_row(n, *r)).collect();
            render(&rows, tsv)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    let output = cli.common.output.clone();
    let text = match run(cli) {
        Ok(text) => text,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
    };
    let written = match output {
        Some(path) => fs::write(&path, text).with_context(|| format!("writing {}", path.display())),
        None => io::stdout().write_all(text.as_bytes()).context("writing stdout"),
    };
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
