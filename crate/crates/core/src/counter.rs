//! Copy counting by backtracking over partial embeddings.
//!
//! A copy of a pattern `P` in a host `H` is counted as an edge-preserving
//! injection `V(P) -> V(H)`, divided by `|Aut(P)|`. The engine maps pattern
//! vertices in a static order; the candidates for each vertex are the
//! intersection of the pair links of every pattern edge it completes, the
//! neighbor sets of placed vertices it shares an edge with, and a degree
//! filter. The last vertex is never iterated: its candidate set is counted
//! with a popcount.
//!
//! Anchored variants (through an edge, through a vertex, exactly one marked
//! edge) preassign the first positions of the order and reuse the same
//! search. Work is split into independent jobs at the root; job results
//! are reduced in job order, so totals and node counts do not depend on
//! the worker count.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::hypergraph::{Triple, TripleSystem};
use crate::pattern::Pattern;

/// Number of worker threads used for root-level parallelism.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Workers(usize);

impl Workers {
    pub const SINGLE: Workers = Workers(1);

    pub fn new(count: usize) -> Self {
        Workers(count.max(1))
    }

    pub fn get(&self) -> usize {
        self.0
    }

    /// Runs `f` over `items` on this many threads, preserving item order in
    /// the output.
    pub(crate) fn map<T, R, F>(&self, items: Vec<T>, f: F) -> Vec<R>
    where
        T: Send,
        R: Send,
        F: Fn(T) -> R + Sync + Send,
    {
        if self.0 == 1 || items.len() <= 1 {
            return items.into_iter().map(f).collect();
        }
        pool(self.0).install(|| items.into_par_iter().map(f).collect())
    }
}

impl Default for Workers {
    fn default() -> Self {
        Workers::SINGLE
    }
}

fn pool(threads: usize) -> Arc<rayon::ThreadPool> {
    static POOLS: OnceLock<Mutex<HashMap<usize, Arc<rayon::ThreadPool>>>> = OnceLock::new();
    let mut pools = POOLS.get_or_init(Default::default).lock().unwrap();
    pools
        .entry(threads)
        .or_insert_with(|| {
            Arc::new(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build()
                    .expect("thread pool"),
            )
        })
        .clone()
}

/// An embedding count together with the number of search nodes visited.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    pub embeddings: u128,
    pub nodes: u64,
}

impl Tally {
    fn merge(self, other: Tally) -> Result<Tally> {
        Ok(Tally {
            embeddings: self
                .embeddings
                .checked_add(other.embeddings)
                .ok_or(Error::Overflow)?,
            nodes: self.nodes + other.nodes,
        })
    }
}

/// Static search order for one anchoring of the pattern.
#[derive(Clone, Debug)]
struct Plan {
    order: Vec<usize>,
    /// Pairs of earlier depths that form a pattern edge with this depth.
    completes: Vec<Vec<(usize, usize)>>,
    /// Earlier depths sharing some pattern edge with this depth.
    adjacent: Vec<Vec<usize>>,
    min_degree: Vec<usize>,
}

impl Plan {
    /// `prefix` is placed first in the given order; the rest follows a greedy
    /// connected expansion with degree-1 vertices last.
    fn new(pattern: &TripleSystem, prefix: &[usize]) -> Plan {
        let f = pattern.n();
        let mut placed = vec![false; f];
        let mut order = Vec::with_capacity(f);
        for &p in prefix {
            placed[p] = true;
            order.push(p);
        }
        while order.len() < f {
            let next = (0..f)
                .filter(|&v| !placed[v])
                .max_by_key(|&v| {
                    let completed = order
                        .iter()
                        .enumerate()
                        .flat_map(|(i, &a)| order[i + 1..].iter().map(move |&b| (a, b)))
                        .filter(|&(a, b)| pattern.link(a, b).contains(v))
                        .count();
                    let attached = order.iter().filter(|&&a| pattern.neighbors(a).contains(v)).count();
                    (
                        pattern.degree(v) > 1,
                        completed,
                        attached,
                        pattern.degree(v),
                        std::cmp::Reverse(v),
                    )
                })
                .unwrap();
            placed[next] = true;
            order.push(next);
        }

        let mut completes = Vec::with_capacity(f);
        let mut adjacent = Vec::with_capacity(f);
        let mut min_degree = Vec::with_capacity(f);
        for (d, &v) in order.iter().enumerate() {
            let mut pairs = Vec::new();
            for i in 0..d {
                for j in i + 1..d {
                    if pattern.link(order[i], order[j]).contains(v) {
                        pairs.push((i, j));
                    }
                }
            }
            let adj = (0..d)
                .filter(|&i| pattern.neighbors(order[i]).contains(v))
                .filter(|&i| !pairs.iter().any(|&(a, b)| a == i || b == i))
                .collect();
            completes.push(pairs);
            adjacent.push(adj);
            min_degree.push(pattern.degree(v));
        }
        Plan {
            order,
            completes,
            adjacent,
            min_degree,
        }
    }

    fn len(&self) -> usize {
        self.order.len()
    }
}

/// Host-side data shared by every job of one counting call.
struct HostView<'a> {
    host: &'a TripleSystem,
    marked: Option<&'a TripleSystem>,
    /// `by_degree[k]` = host vertices of degree at least `k`.
    by_degree: Vec<VertexSet>,
}

impl<'a> HostView<'a> {
    fn new(host: &'a TripleSystem, marked: Option<&'a TripleSystem>, max_degree: usize) -> Self {
        let by_degree = (0..=max_degree)
            .map(|k| (0..host.n()).filter(|&v| host.degree(v) >= k).collect())
            .collect();
        HostView {
            host,
            marked,
            by_degree,
        }
    }
}

struct Search<'a> {
    view: &'a HostView<'a>,
    plan: &'a Plan,
    forced: &'a [usize],
    images: Vec<usize>,
    nodes: u64,
    stop_at_first: bool,
}

impl Search<'_> {
    fn candidates(&self, depth: usize, used: VertexSet) -> VertexSet {
        let host = self.view.host;
        let mut cand = if depth < self.forced.len() {
            VertexSet::singleton(self.forced[depth]) - used
        } else {
            host.vertex_set() - used
        };
        cand &= self.view.by_degree[self.plan.min_degree[depth]];
        for &(i, j) in &self.plan.completes[depth] {
            cand &= *host.link(self.images[i], self.images[j]);
        }
        for &i in &self.plan.adjacent[depth] {
            cand &= *host.neighbors(self.images[i]);
        }
        cand
    }

    /// Splits candidates into those completing no marked edge and those
    /// completing exactly one.
    fn split_marked(&self, depth: usize, cand: VertexSet, marked: &TripleSystem) -> (VertexSet, VertexSet) {
        let mut ones = VertexSet::EMPTY;
        let mut more = VertexSet::EMPTY;
        for &(i, j) in &self.plan.completes[depth] {
            let m = *marked.link(self.images[i], self.images[j]) & cand;
            more |= ones & m;
            ones = ones ^ m;
        }
        ones = ones - more;
        (cand - ones - more, ones)
    }

    fn run(&mut self, depth: usize, used: VertexSet, marked_used: u8) -> Result<u128> {
        self.nodes += 1;
        let cand = self.candidates(depth, used);
        if cand.is_empty() {
            return Ok(0);
        }
        let last = depth + 1 == self.plan.len();
        match self.view.marked {
            None => {
                if last {
                    return Ok(cand.len() as u128);
                }
                self.descend(depth, cand, used, 0)
            }
            Some(marked) => {
                let (zero, one) = self.split_marked(depth, cand, marked);
                if last {
                    let hits = if marked_used == 0 { one.len() } else { zero.len() };
                    return Ok(hits as u128);
                }
                let mut total = self.descend(depth, zero, used, marked_used)?;
                if marked_used == 0 && !(self.stop_at_first && total > 0) {
                    total = total
                        .checked_add(self.descend(depth, one, used, 1)?)
                        .ok_or(Error::Overflow)?;
                }
                Ok(total)
            }
        }
    }

    fn descend(&mut self, depth: usize, cand: VertexSet, used: VertexSet, marked_used: u8) -> Result<u128> {
        let mut total: u128 = 0;
        for w in cand.iter() {
            self.images[depth] = w;
            let mut next = used;
            next.insert(w);
            let sub = self.run(depth + 1, next, marked_used)?;
            total = total.checked_add(sub).ok_or(Error::Overflow)?;
            if self.stop_at_first && total > 0 {
                break;
            }
        }
        Ok(total)
    }
}

/// A job: one plan with a preassigned image prefix.
struct Job<'a> {
    plan: &'a Plan,
    forced: Vec<usize>,
}

/// Prepared counting engine for one pattern.
pub struct CopyCounter<'p> {
    pattern: &'p Pattern,
    full: Plan,
    edge_plans: Vec<(Triple, Plan)>,
    vertex_plans: Vec<Plan>,
    workers: Workers,
}

impl<'p> CopyCounter<'p> {
    pub fn new(pattern: &'p Pattern) -> Self {
        let sys = pattern.system();
        let full = Plan::new(sys, &[]);
        let edge_plans = sys
            .edges()
            .map(|t| (*t, Plan::new(sys, &t.vertices())))
            .collect();
        let vertex_plans = (0..sys.n()).map(|v| Plan::new(sys, &[v])).collect();
        CopyCounter {
            pattern,
            full,
            edge_plans,
            vertex_plans,
            workers: Workers::SINGLE,
        }
    }

    pub fn with_workers(mut self, workers: Workers) -> Self {
        self.workers = workers;
        self
    }

    pub fn pattern(&self) -> &Pattern {
        self.pattern
    }

    fn view<'a>(&self, host: &'a TripleSystem, marked: Option<&'a TripleSystem>) -> HostView<'a> {
        let max_degree = self.pattern.system().degrees().iter().copied().max().unwrap_or(0);
        HostView::new(host, marked, max_degree)
    }

    fn run_jobs(&self, view: &HostView, jobs: Vec<Job>, stop_at_first: bool) -> Result<Tally> {
        let results = self.workers.map(jobs, |job| {
            let mut search = Search {
                view,
                plan: job.plan,
                forced: &job.forced,
                images: vec![usize::MAX; job.plan.len()],
                nodes: 0,
                stop_at_first,
            };
            search.run(0, VertexSet::EMPTY, 0).map(|embeddings| Tally {
                embeddings,
                nodes: search.nodes,
            })
        });
        results
            .into_iter()
            .try_fold(Tally::default(), |acc, r| acc.merge(r?))
    }

    fn root_jobs(&self, host: &TripleSystem) -> Vec<Job<'_>> {
        (0..host.n())
            .map(|v| Job {
                plan: &self.full,
                forced: vec![v],
            })
            .collect()
    }

    fn edge_jobs(&self, e: &Triple) -> Vec<Job<'_>> {
        let [x, y, z] = e.vertices();
        let perms = [[x, y, z], [x, z, y], [y, x, z], [y, z, x], [z, x, y], [z, y, x]];
        self.edge_plans
            .iter()
            .flat_map(|(_, plan)| {
                perms.iter().map(move |p| Job {
                    plan,
                    forced: p.to_vec(),
                })
            })
            .collect()
    }

    fn require_edge(host: &TripleSystem, e: &Triple) -> Result<()> {
        if host.contains(e) {
            Ok(())
        } else {
            Err(Error::MissingEdge(*e))
        }
    }

    fn divide(&self, embeddings: u128) -> Result<u128> {
        let aut = self.pattern.aut_count();
        if !embeddings.is_multiple_of(u128::from(aut)) {
            return Err(Error::InexactDivision { embeddings, aut });
        }
        Ok(embeddings / u128::from(aut))
    }

    /// Edge-preserving injections `V(P) -> V(H)`.
    pub fn embeddings(&self, host: &TripleSystem) -> Result<Tally> {
        if self.pattern.vertex_count() > host.n() {
            return Ok(Tally::default());
        }
        let view = self.view(host, None);
        self.run_jobs(&view, self.root_jobs(host), false)
    }

    pub fn copies(&self, host: &TripleSystem) -> Result<u128> {
        self.divide(self.embeddings(host)?.embeddings)
    }

    /// Embeddings whose image contains the host edge `e`.
    pub fn embeddings_through_edge(&self, host: &TripleSystem, e: &Triple) -> Result<Tally> {
        Self::require_edge(host, e)?;
        if self.pattern.vertex_count() > host.n() {
            return Ok(Tally::default());
        }
        let view = self.view(host, None);
        self.run_jobs(&view, self.edge_jobs(e), false)
    }

    pub fn copies_through_edge(&self, host: &TripleSystem, e: &Triple) -> Result<u128> {
        self.divide(self.embeddings_through_edge(host, e)?.embeddings)
    }

    pub fn embeddings_through_vertex(&self, host: &TripleSystem, v: usize) -> Result<Tally> {
        if v >= host.n() {
            return Err(Error::VertexOutOfRange { vertex: v, n: host.n() });
        }
        if self.pattern.vertex_count() > host.n() {
            return Ok(Tally::default());
        }
        let view = self.view(host, None);
        let jobs = self
            .vertex_plans
            .iter()
            .map(|plan| Job {
                plan,
                forced: vec![v],
            })
            .collect();
        self.run_jobs(&view, jobs, false)
    }

    pub fn copies_through_vertex(&self, host: &TripleSystem, v: usize) -> Result<u128> {
        self.divide(self.embeddings_through_vertex(host, v)?.embeddings)
    }

    /// Embeddings whose image edge set meets `marked` in exactly one edge.
    pub fn embeddings_exactly_one_marked(&self, host: &TripleSystem, marked: &[Triple]) -> Result<Tally> {
        for e in marked {
            Self::require_edge(host, e)?;
        }
        let marked_sys = host.restrict_to(marked)?;
        if self.pattern.vertex_count() > host.n() {
            return Ok(Tally::default());
        }
        let view = self.view(host, Some(&marked_sys));
        let mut tally = Tally::default();
        for e in marked_sys.edges() {
            tally = tally.merge(self.run_jobs(&view, self.edge_jobs(e), false)?)?;
        }
        Ok(tally)
    }

    pub fn copies_exactly_one_marked(&self, host: &TripleSystem, marked: &[Triple]) -> Result<u128> {
        self.divide(self.embeddings_exactly_one_marked(host, marked)?.embeddings)
    }

    /// Stops at the first embedding found.
    pub fn contains_copy(&self, host: &TripleSystem) -> bool {
        if self.pattern.vertex_count() > host.n() {
            return false;
        }
        let view = self.view(host, None);
        self.root_jobs(host).into_iter().any(|job| {
            let mut search = Search {
                view: &view,
                plan: job.plan,
                forced: &job.forced,
                images: vec![usize::MAX; job.plan.len()],
                nodes: 0,
                stop_at_first: true,
            };
            search.run(0, VertexSet::EMPTY, 0).is_ok_and(|c| c > 0)
        })
    }

    /// Whether some copy uses the edge `e`; false if `e` is not an edge.
    pub fn contains_copy_through_edge(&self, host: &TripleSystem, e: &Triple) -> bool {
        if !host.contains(e) || self.pattern.vertex_count() > host.n() {
            return false;
        }
        let view = self.view(host, None);
        self.edge_jobs(e).into_iter().any(|job| {
            let mut search = Search {
                view: &view,
                plan: job.plan,
                forced: &job.forced,
                images: vec![usize::MAX; job.plan.len()],
                nodes: 0,
                stop_at_first: true,
            };
            search.run(0, VertexSet::EMPTY, 0).is_ok_and(|c| c > 0)
        })
    }

    pub fn report(&self, host: &TripleSystem, options: ReportOptions) -> Result<CountReport> {
        let start = Instant::now();
        let total = self.embeddings(host)?;
        let total_copies = self.divide(total.embeddings)?;
        let mut nodes = total.nodes;
        let per_edge = if options.per_edge {
            let mut rows = Vec::with_capacity(host.edge_count());
            for e in host.edges() {
                let t = self.embeddings_through_edge(host, e)?;
                nodes += t.nodes;
                rows.push(EdgeCount {
                    edge: *e,
                    copies: self.divide(t.embeddings)?,
                });
            }
            Some(rows)
        } else {
            None
        };
        let per_vertex = if options.per_vertex {
            let mut rows = Vec::with_capacity(host.n());
            for v in 0..host.n() {
                let t = self.embeddings_through_vertex(host, v)?;
                nodes += t.nodes;
                rows.push(self.divide(t.embeddings)?);
            }
            Some(rows)
        } else {
            None
        };
        Ok(CountReport {
            pattern: self.pattern.name().to_string(),
            n: host.n(),
            m: host.edge_count(),
            total_copies,
            per_edge,
            per_vertex,
            nodes,
            millis: options.timing.then(|| start.elapsed().as_millis() as u64),
            embeddings: total.embeddings,
            aut_count: self.pattern.aut_count(),
        })
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ReportOptions {
    pub per_edge: bool,
    pub per_vertex: bool,
    /// Include wall-clock time; off by default so reports are reproducible.
    pub timing: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeCount {
    pub edge: Triple,
    pub copies: u128,
}

/// Result of a counting run. Serializes with a fixed key order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountReport {
    pub pattern: String,
    pub n: usize,
    pub m: usize,
    pub total_copies: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_edge: Option<Vec<EdgeCount>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_vertex: Option<Vec<u128>>,
    pub nodes: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<u64>,
    /// Raw injection count; always `total_copies * aut_count`.
    #[serde(skip)]
    pub embeddings: u128,
    #[serde(skip)]
    pub aut_count: u64,
}

pub fn count_embeddings(host: &TripleSystem, pattern: &Pattern) -> Result<u128> {
    Ok(CopyCounter::new(pattern).embeddings(host)?.embeddings)
}

pub fn count_copies(host: &TripleSystem, pattern: &Pattern) -> Result<u128> {
    CopyCounter::new(pattern).copies(host)
}

pub fn count_copies_through_edge(host: &TripleSystem, pattern: &Pattern, e: &Triple) -> Result<u128> {
    CopyCounter::new(pattern).copies_through_edge(host, e)
}

pub fn count_copies_through_vertex(host: &TripleSystem, pattern: &Pattern, v: usize) -> Result<u128> {
    CopyCounter::new(pattern).copies_through_vertex(host, v)
}

pub fn count_copies_exactly_one_marked(
    host: &TripleSystem,
    pattern: &Pattern,
    marked: &[Triple],
) -> Result<u128> {
    CopyCounter::new(pattern).copies_exactly_one_marked(host, marked)
}

pub fn contains_copy(host: &TripleSystem, pattern: &Pattern) -> bool {
    CopyCounter::new(pattern).contains_copy(host)
}
