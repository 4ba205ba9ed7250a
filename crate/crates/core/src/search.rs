//! Exact Turán numbers for tiny `n`, the engine value of `c(n, F)`, and
//! audits of the counting bounds on constructed hosts.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::construction::{Base, Construction, ConstructionSpec};
use crate::counter::{CopyCounter, EdgeCount, Workers};
use crate::error::{Error, Result};
use crate::formula::{CopyBound, Provenance};
use crate::hypergraph::{Mutation, Triple, TripleSystem};
use crate::pattern::Pattern;

/// Largest `n` for which an exhaustive search may claim optimality.
pub const PROVABLE_N: usize = 7;
/// Node budget applied above [`PROVABLE_N`] when none is given.
pub const DEFAULT_HEURISTIC_BUDGET: u64 = 10_000_000;

#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Maximum number of search nodes; `None` is unlimited up to
    /// [`PROVABLE_N`] and [`DEFAULT_HEURISTIC_BUDGET`] beyond.
    pub budget: Option<u64>,
    pub witness_cap: usize,
    pub workers: Workers,
    /// Assume the first triple `{0,1,2}` is an edge. Sound for the optimum
    /// (any nonempty system can be relabeled to contain it) but restricts
    /// the witnesses found.
    pub fix_first_edge: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            budget: None,
            witness_cap: 1,
            workers: Workers::SINGLE,
            fix_first_edge: false,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchResult {
    pub n: usize,
    pub forbidden: Vec<String>,
    pub best_size: usize,
    /// Serialized in the edge-list text format.
    #[serde(serialize_with = "edge_lists")]
    pub witnesses: Vec<TripleSystem>,
    pub proved_optimal: bool,
    pub budget_exhausted: bool,
    /// Varies with thread scheduling when run in parallel.
    pub nodes: u64,
    pub millis: u64,
}

fn edge_lists<S: Serializer>(ws: &[TripleSystem], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(ws.iter().map(crate::hypergraph::serialize))
}

struct Shared<'a> {
    triples: Vec<Triple>,
    counters: Vec<CopyCounter<'a>>,
    best: AtomicUsize,
    nodes: AtomicU64,
    budget: u64,
    exhausted: AtomicBool,
    witness_cap: usize,
}

struct Branch<'s, 'a> {
    shared: &'s Shared<'a>,
    host: TripleSystem,
    size: usize,
    witnesses: Vec<TripleSystem>,
    local_best: usize,
}

impl Shared<'_> {
    fn creates_copy(&self, host: &TripleSystem, t: &Triple) -> bool {
        self.counters.iter().any(|c| c.contains_copy_through_edge(host, t))
    }
}

impl Branch<'_, '_> {
    fn record(&mut self) {
        if self.size > self.local_best {
            self.local_best = self.size;
            self.witnesses.clear();
        }
        if self.size == self.local_best && self.witnesses.len() < self.shared.witness_cap {
            self.witnesses.push(self.host.clone());
        }
        self.shared.best.fetch_max(self.size, Ordering::Relaxed);
    }

    fn saturated(&self) -> bool {
        self.witnesses.len() >= self.shared.witness_cap
    }

    fn dfs(&mut self, i: usize) {
        let sh = self.shared;
        if sh.exhausted.load(Ordering::Relaxed) {
            return;
        }
        if sh.nodes.fetch_add(1, Ordering::Relaxed) >= sh.budget {
            sh.exhausted.store(true, Ordering::Relaxed);
            return;
        }
        let remaining = sh.triples.len() - i;
        let best = sh.best.load(Ordering::Relaxed).max(self.local_best);
        let reach = self.size + remaining;
        if reach < best || (reach == best && best == self.local_best && self.saturated()) {
            return;
        }
        if i == sh.triples.len() {
            self.record();
            return;
        }
        let t = sh.triples[i];
        self.host.insert(t);
        if !sh.creates_copy(&self.host, &t) {
            self.size += 1;
            self.dfs(i + 1);
            self.size -= 1;
        }
        self.host.delete(&t);
        self.dfs(i + 1);
    }
}

/// Number of leading triples decided sequentially before work is split.
const SPLIT_DEPTH: usize = 10;

/// Largest number of edges on `n` vertices avoiding every pattern in
/// `patterns`, by include/exclude branch and bound over triples in
/// lexicographic order.
pub fn exact_turan(n: usize, patterns: &[Pattern], options: &SearchOptions) -> Result<SearchResult> {
    let start = Instant::now();
    let complete = TripleSystem::complete(n)?;
    let forbidden: Vec<String> = patterns.iter().map(|p| p.name().to_string()).collect();
    let budget = options.budget.unwrap_or(if n <= PROVABLE_N {
        u64::MAX
    } else {
        DEFAULT_HEURISTIC_BUDGET
    });
    if patterns.is_empty() {
        return Ok(SearchResult {
            n,
            forbidden,
            best_size: complete.edge_count(),
            witnesses: if options.witness_cap > 0 { vec![complete] } else { vec![] },
            proved_optimal: true,
            budget_exhausted: false,
            nodes: 0,
            millis: start.elapsed().as_millis() as u64,
        });
    }
    let shared = Shared {
        triples: complete.edges().copied().collect(),
        counters: patterns.iter().map(CopyCounter::new).collect(),
        best: AtomicUsize::new(0),
        nodes: AtomicU64::new(0),
        budget,
        exhausted: AtomicBool::new(false),
        witness_cap: options.witness_cap.max(1),
    };
    let split = SPLIT_DEPTH.min(shared.triples.len());

    // Enumerate forbidden-free assignments of the first `split` triples.
    let mut prefixes: Vec<(TripleSystem, usize)> = Vec::new();
    let mut stack = vec![(TripleSystem::empty(n)?, 0usize, 0usize)];
    while let Some((host, i, size)) = stack.pop() {
        if i == split {
            prefixes.push((host, size));
            continue;
        }
        let t = shared.triples[i];
        if options.fix_first_edge && i == 0 {
            let mut with = host.clone();
            with.insert(t);
            stack.push((with, 1, 1));
            continue;
        }
        stack.push((host.clone(), i + 1, size));
        let mut with = host;
        with.insert(t);
        if !shared.creates_copy(&with, &t) {
            stack.push((with, i + 1, size + 1));
        }
    }

    let outcomes = options.workers.map(prefixes, |(host, size)| {
        let mut branch = Branch {
            shared: &shared,
            host,
            size,
            witnesses: Vec::new(),
            local_best: 0,
        };
        branch.dfs(split);
        (branch.local_best, branch.witnesses)
    });

    let best_size = outcomes.iter().map(|(b, _)| *b).max().unwrap_or(0);
    let mut witnesses: Vec<TripleSystem> = outcomes
        .into_iter()
        .filter(|(b, _)| *b == best_size)
        .flat_map(|(_, w)| w)
        .collect();
    witnesses.sort_by(|a, b| a.edges().cmp(b.edges()));
    witnesses.dedup();
    witnesses.truncate(options.witness_cap);
    let exhausted = shared.exhausted.load(Ordering::Relaxed);
    Ok(SearchResult {
        n,
        forbidden,
        best_size,
        witnesses,
        proved_optimal: n <= PROVABLE_N && !exhausted,
        budget_exhausted: exhausted,
        nodes: shared.nodes.load(Ordering::Relaxed),
        millis: start.elapsed().as_millis() as u64,
    })
}

/// How the non-edges of the base are scanned by [`c_exact`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CExactMode {
    /// One non-edge per part signature; the bases are complete partite, so
    /// equal signatures are related by automorphisms.
    #[default]
    Orbits,
    Full,
}

/// The extremal base whose single-edge additions define `c(n, F)`.
pub fn base_for(pattern: &Pattern, n: usize, r: Option<usize>) -> Result<Base> {
    let base = match (pattern.name(), pattern.clique_size()) {
        ("fano", _) => Base::Bipartite { n },
        ("f5" | "k4minus", _) => Base::Tripartite { n },
        ("b5", _) => Base::TwoOne { n },
        (_, Some(s)) if s >= 4 => Base::Partite { n, r: s - 1 },
        (name, _) => {
            return Err(Error::InvalidParameter(format!(
                "no extremal base is defined for pattern `{name}`"
            )))
        }
    };
    match (base, r) {
        (_, None) => Ok(base),
        (Base::Partite { r: own, .. }, Some(r)) if own == r => Ok(base),
        (_, Some(r)) => Err(Error::InvalidParameter(format!(
            "r = {r} does not match pattern `{}`",
            pattern.name()
        ))),
    }
}

/// Minimum over non-edges `e` of the base of the number of copies of the
/// pattern through `e` in the base plus `e`.
pub fn c_exact(pattern: &Pattern, n: usize, r: Option<usize>, mode: CExactMode, workers: Workers) -> Result<CopyBound> {
    if n < pattern.vertex_count() {
        return Err(Error::InvalidParameter(format!(
            "n = {n} is below the pattern size {}",
            pattern.vertex_count()
        )));
    }
    let base = base_for(pattern, n, r)?.build()?;
    let complete = TripleSystem::complete(n)?;
    let mut candidates: Vec<Triple> = Vec::new();
    let mut seen = BTreeSet::new();
    for t in complete.edges().filter(|t| !base.system.contains(t)) {
        if mode == CExactMode::Full || seen.insert(base.partition.signature(t)) {
            candidates.push(*t);
        }
    }
    if candidates.is_empty() {
        return Err(Error::InvalidParameter(format!("the base on {n} vertices has no non-edge")));
    }
    let counter = CopyCounter::new(pattern);
    let counts = workers.map(candidates.clone(), |e| {
        let host = base.system.add_edges([e], Mutation::Strict)?;
        counter.copies_through_edge(&host, &e)
    });
    let mut best: Option<(u128, Triple)> = None;
    for (e, count) in candidates.into_iter().zip(counts) {
        let count = count?;
        if best.is_none_or(|(b, _)| count < b) {
            best = Some((count, e));
        }
    }
    let (value, witness) = best.expect("nonempty candidates");
    Ok(CopyBound {
        pattern: pattern.name().to_string(),
        n,
        value,
        provenance: Provenance::EngineMin,
        witness: Some(witness),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrialKind {
    Sharp,
    RandomAddition,
    Rewire,
}

#[derive(Clone, Debug, Serialize)]
pub struct AuditReport {
    pub spec: String,
    pub kind: TrialKind,
    pub pattern: String,
    pub q: usize,
    pub total: u128,
    pub exactly_one_marked: u128,
    pub per_added_edge: Vec<EdgeCount>,
    pub c_exact: u128,
    pub bound: u128,
    /// `total - bound`, from engine counts only.
    pub margin: i128,
}

fn audit_host(
    spec: String,
    kind: TrialKind,
    host: &TripleSystem,
    added: &[Triple],
    pattern: &Pattern,
    c: u128,
    workers: Workers,
) -> Result<AuditReport> {
    let counter = CopyCounter::new(pattern).with_workers(workers);
    let total = counter.copies(host)?;
    let exactly_one_marked = counter.copies_exactly_one_marked(host, added)?;
    let per_added_edge = added
        .iter()
        .map(|e| {
            Ok(EdgeCount {
                edge: *e,
                copies: counter.copies_through_edge(host, e)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let q = added.len();
    let bound = c.checked_mul(q as u128).ok_or(Error::Overflow)?;
    Ok(AuditReport {
        spec,
        kind,
        pattern: pattern.name().to_string(),
        q,
        total,
        exactly_one_marked,
        per_added_edge,
        c_exact: c,
        bound,
        margin: total as i128 - bound as i128,
    })
}

fn spec_with_q(spec: &ConstructionSpec, q: Option<usize>) -> Result<ConstructionSpec> {
    let Some(q) = q else {
        return Ok(spec.clone());
    };
    match spec.additions.as_slice() {
        [only] if only.q().is_some() => Ok(ConstructionSpec {
            base: spec.base,
            additions: vec![only.with_q(q)],
        }),
        _ => Err(Error::Spec {
            spec: spec.to_string(),
            message: "overriding q needs exactly one addition with a multiplicity".into(),
        }),
    }
}

fn engine_c(pattern: &Pattern, spec: &ConstructionSpec, workers: Workers) -> Result<u128> {
    let r = match spec.base {
        Base::Partite { r, .. } if pattern.clique_size().is_some() => Some(r),
        _ => None,
    };
    Ok(c_exact(pattern, spec.base.n(), r, CExactMode::Orbits, workers)?.value)
}

/// Counts copies on the construction `spec` (with its multiplicity replaced
/// by `q` when given) and compares the total against `q * c_exact`.
pub fn audit_sharpness(
    spec: &ConstructionSpec,
    pattern: &Pattern,
    q: Option<usize>,
    workers: Workers,
) -> Result<AuditReport> {
    let spec = spec_with_q(spec, q)?;
    let built: Construction = spec.build()?;
    let c = engine_c(pattern, &spec, workers)?;
    audit_host(spec.to_string(), TrialKind::Sharp, &built.system, &built.added, pattern, c, workers)
}

/// Trial 0 is the sharp construction. Later trials alternate between adding
/// `q` random non-edges to the base and a rewire that also deletes one random
/// base edge and adds `q + 1` non-edges, keeping the edge count. Margins are
/// reported, never checked.
pub fn audit_perturbed(
    spec: &ConstructionSpec,
    pattern: &Pattern,
    q: Option<usize>,
    trials: usize,
    seed: u64,
    workers: Workers,
) -> Result<Vec<AuditReport>> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let spec = spec_with_q(spec, q)?;
    let sharp = spec.build()?;
    let q = sharp.added.len();
    let c = engine_c(pattern, &spec, workers)?;
    let label = spec.to_string();
    let mut reports = vec![audit_host(
        label.clone(),
        TrialKind::Sharp,
        &sharp.system,
        &sharp.added,
        pattern,
        c,
        workers,
    )?];

    let base = spec.base.build()?.system;
    let base_edges: Vec<Triple> = base.edges().copied().collect();
    let non_edges: Vec<Triple> = TripleSystem::complete(base.n())?
        .edges()
        .filter(|t| !base.contains(t))
        .copied()
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 1..trials {
        let (kind, removed, extra) = if trial % 2 == 1 || base_edges.is_empty() {
            (TrialKind::RandomAddition, None, q)
        } else {
            (TrialKind::Rewire, base_edges.choose(&mut rng).copied(), q + 1)
        };
        if extra > non_edges.len() {
            return Err(Error::CapacityExceeded {
                requested: extra,
                capacity: non_edges.len(),
            });
        }
        let added: Vec<Triple> = non_edges.choose_multiple(&mut rng, extra).copied().collect();
        let mut host = base.add_edges(added.iter().copied(), Mutation::Strict)?;
        if let Some(e) = removed {
            host = host.remove_edges([e], Mutation::Strict)?;
        }
        // The bound for a rewire still charges `q`: one extra edge pays for
        // the deleted base edge.
        let mut report = audit_host(label.clone(), kind, &host, &added, pattern, c, workers)?;
        report.q = q;
        report.bound = c * q as u128;
        report.margin = report.total as i128 - report.bound as i128;
        reports.push(report);
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counter::contains_copy;
    use crate::formula;

    #[test]
    fn empty_forbidden_set_is_complete() {
        let r = exact_turan(6, &[], &SearchOptions::default()).unwrap();
        assert_eq!(r.best_size, 20);
        assert!(r.proved_optimal);
    }

    #[test]
    fn single_edge_forbidden() {
        let r = exact_turan(5, &[Pattern::single_edge()], &SearchOptions::default()).unwrap();
        assert_eq!(r.best_size, 0);
        assert!(r.proved_optimal);
    }

    #[test]
    fn k4minus_on_four_points() {
        // brute force over all subsets of the four triples
        let triples: Vec<Triple> = TripleSystem::complete(4).unwrap().edges().copied().collect();
        let k4m = Pattern::k4minus();
        let mut best = 0;
        for mask in 0u32..16 {
            let chosen = (0..4).filter(|i| mask >> i & 1 == 1).map(|i| triples[i]);
            let h = TripleSystem::from_triples(4, chosen).unwrap();
            if !contains_copy(&h, &k4m) {
                best = best.max(h.edge_count());
            }
        }
        let r = exact_turan(4, &[k4m], &SearchOptions::default()).unwrap();
        assert_eq!(r.best_size, best);
    }

    #[test]
    fn cancellative_small_cases() {
        let pats = [Pattern::f5(), Pattern::k4minus()];
        let opts = SearchOptions {
            witness_cap: 3,
            workers: Workers::new(4),
            ..Default::default()
        };
        let r = exact_turan(6, &pats, &opts).unwrap();
        assert_eq!(r.best_size, 8);
        assert!(r.proved_optimal);
        assert!(!r.witnesses.is_empty());
        for w in &r.witnesses {
            assert_eq!(w.edge_count(), 8);
            assert!(pats.iter().all(|p| !contains_copy(w, p)));
        }
        let seq = exact_turan(6, &pats, &SearchOptions { witness_cap: 3, ..Default::default() }).unwrap();
        assert_eq!(seq.witnesses, r.witnesses);
        let fixed = exact_turan(6, &pats, &SearchOptions { fix_first_edge: true, ..Default::default() }).unwrap();
        assert_eq!(fixed.best_size, 8);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let opts = SearchOptions {
            budget: Some(50),
            ..Default::default()
        };
        let r = exact_turan(6, &[Pattern::f5()], &opts).unwrap();
        assert!(r.budget_exhausted);
        assert!(!r.proved_optimal);
    }

    #[test]
    fn c_exact_fano() {
        let fano = Pattern::fano();
        let c8 = c_exact(&fano, 8, None, CExactMode::Full, Workers::SINGLE).unwrap();
        assert_eq!(c8.value, formula::c_fano(8));
        let c9 = c_exact(&fano, 9, None, CExactMode::Orbits, Workers::new(2)).unwrap();
        assert_eq!(c9.value, 54);
        // the minimizing edge lies in the larger part (vertices 4..9)
        assert!(c9.witness.unwrap().vertices().iter().all(|&v| v >= 4));
        assert!(c_exact(&fano, 6, None, CExactMode::Orbits, Workers::SINGLE).is_err());
        assert!(c_exact(&Pattern::pasch(), 8, None, CExactMode::Orbits, Workers::SINGLE).is_err());
        assert!(c_exact(&fano, 8, Some(3), CExactMode::Orbits, Workers::SINGLE).is_err());
    }

    #[test]
    fn orbit_mode_matches_full() {
        for (p, n) in [(Pattern::f5(), 7), (Pattern::b5(), 8), (Pattern::k4minus(), 6)] {
            let a = c_exact(&p, n, None, CExactMode::Orbits, Workers::SINGLE).unwrap();
            let b = c_exact(&p, n, None, CExactMode::Full, Workers::SINGLE).unwrap();
            assert_eq!(a, b, "{}", p.name());
        }
    }

    #[test]
    fn zero_two_audit_is_sharp() {
        let spec: ConstructionSpec = "p3:n=8+zero2:q=4".parse().unwrap();
        let a = audit_sharpness(&spec, &Pattern::fano(), None, Workers::SINGLE).unwrap();
        assert_eq!(a.total, 120);
        assert_eq!(a.exactly_one_marked, a.total);
        assert_eq!(a.margin, 0);
        let zero = audit_sharpness(&spec, &Pattern::fano(), Some(0), Workers::SINGLE).unwrap();
        assert_eq!((zero.total, zero.margin), (0, 0));
    }

    #[test]
    fn perturbed_includes_sharp_trial() {
        let spec: ConstructionSpec = "p3:n=8+zero2:q=2".parse().unwrap();
        let reports = audit_perturbed(&spec, &Pattern::fano(), None, 5, 11, Workers::SINGLE).unwrap();
        assert_eq!(reports.len(), 5);
        assert_eq!(reports[0].kind, TrialKind::Sharp);
        assert_eq!(reports[0].margin, 0);
        assert_eq!(reports[2].kind, TrialKind::Rewire);
        assert!(reports.iter().all(|r| r.q == 2 && r.bound == 60));
        let again = audit_perturbed(&spec, &Pattern::fano(), None, 5, 11, Workers::SINGLE).unwrap();
        assert_eq!(
            reports.iter().map(|r| r.total).collect::<Vec<_>>(),
            again.iter().map(|r| r.total).collect::<Vec<_>>()
        );
    }
}
