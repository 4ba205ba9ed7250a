//! Extremal hosts and the edge-addition strategies used to show that copy
//! count lower bounds are sharp.
//!
//! All generators lay parts out as consecutive vertex blocks, so part `0`
//! holds the smallest labels. Generators are pure functions of their
//! parameters and seed.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::formula;
use crate::hypergraph::{Mutation, PartitionLabeling, Triple, TripleSystem};

pub mod validate;

/// Default node budget for the linear and anti-Pasch generators.
pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000;

/// A host together with its partition and the edges added to (and removed
/// from) the underlying extremal base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Construction {
    pub system: TripleSystem,
    pub partition: PartitionLabeling,
    pub added: Vec<Triple>,
    pub removed: Vec<Triple>,
}

impl Construction {
    fn base(system: TripleSystem, partition: PartitionLabeling) -> Self {
        Construction {
            system,
            partition,
            added: Vec::new(),
            removed: Vec::new(),
        }
    }

    fn with_added(&self, new_edges: Vec<Triple>) -> Result<Self> {
        let system = self.system.add_edges(new_edges.iter().copied(), Mutation::Strict)?;
        let mut added = self.added.clone();
        added.extend(new_edges);
        Ok(Construction {
            system,
            partition: self.partition.clone(),
            added,
            removed: self.removed.clone(),
        })
    }

    pub fn n(&self) -> usize {
        self.system.n()
    }
}

fn partite_system(partition: PartitionLabeling, max_per_part: usize) -> Result<Construction> {
    let n = partition.n();
    let mut sys = TripleSystem::empty(n)?;
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let sig = partition.signature(&Triple::new(a, b, c)?);
                if sig.iter().all(|&k| k <= max_per_part) {
                    sys.insert(Triple::new(a, b, c)?);
                }
            }
        }
    }
    Ok(Construction::base(sys, partition))
}

fn require_n(n: usize, min: usize, what: &str) -> Result<()> {
    if n < min {
        return Err(Error::InvalidParameter(format!("{what} needs n >= {min}, got {n}")));
    }
    Ok(())
}

/// The complete bipartite 3-graph with parts `floor(n/2)` and `ceil(n/2)`.
pub fn gen_p3(n: usize) -> Result<Construction> {
    require_n(n, 3, "p3")?;
    partite_system(PartitionLabeling::from_sizes(&[n / 2, n - n / 2]), 2)
}

/// The complete `r`-partite 3-graph with part sizes `floor((n+i-1)/r)`.
pub fn gen_t3r(n: usize, r: usize) -> Result<Construction> {
    require_n(n, 3, "t3r")?;
    if r < 3 || r > n {
        return Err(Error::InvalidParameter(format!(
            "t3r needs 3 <= r <= n, got r = {r}, n = {n}"
        )));
    }
    let sizes: Vec<usize> = formula::t3r_part_sizes(n as u64, r as u64)
        .into_iter()
        .map(|s| s as usize)
        .collect();
    partite_system(PartitionLabeling::from_sizes(&sizes), 1)
}

pub fn gen_t3(n: usize) -> Result<Construction> {
    gen_t3r(n, 3)
}

/// The (2,1)-partite 3-graph: part 0 is `A` with `|A|` the smallest
/// maximizer of `C(a,2)(n-a)`, and every edge has two points in `A`.
pub fn gen_b3(n: usize) -> Result<Construction> {
    require_n(n, 3, "b3")?;
    let a = formula::b3_part(n as u64) as usize;
    let partition = PartitionLabeling::from_sizes(&[a, n - a]);
    let mut sys = TripleSystem::empty(n)?;
    for x in 0..a {
        for y in x + 1..a {
            for z in a..n {
                sys.insert(Triple::new(x, y, z)?);
            }
        }
    }
    Ok(Construction::base(sys, partition))
}

fn capacity_check(q: usize, capacity: usize) -> Result<()> {
    if q > capacity {
        Err(Error::CapacityExceeded {
            requested: q,
            capacity,
        })
    } else {
        Ok(())
    }
}

/// Edges pairwise sharing zero or two points inside one block of vertices:
/// complete `K_4^3` blocks first, then a one-edge sunflower on a leftover
/// triple.
fn zero_two_block_edges(members: &[usize]) -> Vec<Triple> {
    let mut out = Vec::new();
    let mut chunks = members.chunks_exact(4);
    for block in chunks.by_ref() {
        let [a, b, c, d] = [block[0], block[1], block[2], block[3]];
        for t in [[a, b, c], [a, b, d], [a, c, d], [b, c, d]] {
            out.push(Triple::new(t[0], t[1], t[2]).expect("distinct block vertices"));
        }
    }
    if let [a, b, c] = chunks.remainder() {
        out.push(Triple::new(*a, *b, *c).expect("distinct block vertices"));
    }
    out
}

/// Adds `q` in-part edges to the bipartite host, pairwise sharing zero or
/// two points. Both parts are used when `n` is even; only the larger part
/// when `n` is odd.
pub fn add_zero_two_sharing(base: &Construction, q: usize) -> Result<Construction> {
    let p = &base.partition;
    if p.part_count() != 2 {
        return Err(Error::InvalidParameter("zero2 needs a bipartite base".into()));
    }
    let parts: Vec<usize> = if p.part_size(0) == p.part_size(1) {
        vec![0, 1]
    } else {
        vec![p.largest_part()]
    };
    let pool: Vec<Triple> = parts
        .iter()
        .flat_map(|&i| zero_two_block_edges(&p.members(i)))
        .filter(|t| !base.system.contains(t))
        .collect();
    capacity_check(q, pool.len())?;
    base.with_added(pool[..q].to_vec())
}

fn all_triples(members: &[usize]) -> Vec<Triple> {
    let mut out = Vec::new();
    for (i, &a) in members.iter().enumerate() {
        for (j, &b) in members.iter().enumerate().skip(i + 1) {
            for &c in &members[j + 1..] {
                out.push(Triple::new(a, b, c).expect("distinct members"));
            }
        }
    }
    out
}

fn shuffle_if_seeded<T>(items: &mut [T], seed: u64) {
    if seed != 0 {
        items.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
}

/// Backtracking search for `q` triples from `candidates`, pairwise sharing at
/// most one point and optionally containing no Pasch configuration.
struct LinearSearch {
    candidates: Vec<Triple>,
    q: usize,
    avoid_pasch: bool,
    // third[u * n + v] = w when {u, v, w} is chosen
    third: Vec<Option<usize>>,
    n: usize,
    chosen: Vec<Triple>,
    nodes: u64,
    budget: u64,
}

impl LinearSearch {
    fn new(n: usize, candidates: Vec<Triple>, q: usize, avoid_pasch: bool, budget: u64) -> Self {
        LinearSearch {
            candidates,
            q,
            avoid_pasch,
            third: vec![None; n * n],
            n,
            chosen: Vec::with_capacity(q),
            nodes: 0,
            budget,
        }
    }

    fn pair(&self, u: usize, v: usize) -> Option<usize> {
        self.third[u * self.n + v]
    }

    fn set(&mut self, t: &Triple, value: Option<usize>) {
        let [a, b, c] = t.vertices();
        for (u, v, w) in [(a, b, c), (a, c, b), (b, c, a)] {
            self.third[u * self.n + v] = value.map(|_| w);
            self.third[v * self.n + u] = value.map(|_| w);
        }
    }

    fn compatible(&self, t: &Triple) -> bool {
        let [a, b, c] = t.vertices();
        if self.pair(a, b).is_some() || self.pair(a, c).is_some() || self.pair(b, c).is_some() {
            return false;
        }
        if !self.avoid_pasch {
            return true;
        }
        // A Pasch through abc uses ade, bdf and cef for some d, e, f.
        for d in 0..self.n {
            if let Some(e) = self.pair(a, d) {
                if let Some(f) = self.pair(b, d) {
                    if self.pair(c, e) == Some(f) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn run(mut self) -> Result<Vec<Triple>> {
        if self.dfs(0)? {
            Ok(self.chosen)
        } else {
            Err(Error::CapacityExceeded {
                requested: self.q,
                capacity: self.chosen.len(),
            })
        }
    }

    fn dfs(&mut self, start: usize) -> Result<bool> {
        if self.chosen.len() == self.q {
            return Ok(true);
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExhausted(self.budget));
        }
        for i in start..self.candidates.len() {
            if self.candidates.len() - i < self.q - self.chosen.len() {
                break;
            }
            let t = self.candidates[i];
            if !self.compatible(&t) {
                continue;
            }
            self.set(&t, Some(0));
            self.chosen.push(t);
            if self.dfs(i + 1)? {
                return Ok(true);
            }
            self.chosen.pop();
            self.set(&t, None);
        }
        Ok(false)
    }
}

fn part_index(base: &Construction, part: Option<usize>) -> Result<usize> {
    let part = part.unwrap_or_else(|| base.partition.largest_part());
    if part >= base.partition.part_count() {
        return Err(Error::InvalidParameter(format!(
            "part {part} does not exist (host has {} parts)",
            base.partition.part_count()
        )));
    }
    Ok(part)
}

/// Adds `q` triples inside `part` that pairwise share at most one point and
/// contain no Pasch configuration. Seed `0` scans triples in lexicographic
/// order; other seeds shuffle the scan order.
pub fn add_anti_pasch(
    base: &Construction,
    part: Option<usize>,
    q: usize,
    seed: u64,
    budget: u64,
) -> Result<Construction> {
    let part = part_index(base, part)?;
    let members = base.partition.members(part);
    if members.len() < 7 {
        return Err(Error::InvalidParameter(format!(
            "anti-Pasch addition needs a part of size >= 7, got {}",
            members.len()
        )));
    }
    let mut candidates: Vec<Triple> = all_triples(&members)
        .into_iter()
        .filter(|t| !base.system.contains(t))
        .collect();
    shuffle_if_seeded(&mut candidates, seed);
    let edges = LinearSearch::new(base.n(), candidates, q, true, budget).run()?;
    base.with_added(edges)
}

/// Upper bound on a linear system on `v` points.
pub fn linear_capacity(v: usize) -> usize {
    v * ((v.saturating_sub(1)) / 2) / 3
}

/// Adds `q` pairwise-linear triples inside the double part `A` of the
/// (2,1)-partite host.
pub fn add_linear_inside_x(base: &Construction, q: usize, seed: u64, budget: u64) -> Result<Construction> {
    let members = base.partition.members(0);
    if members.len() < 7 {
        return Err(Error::InvalidParameter(format!(
            "linear addition needs |A| >= 7, got {}",
            members.len()
        )));
    }
    capacity_check(q, linear_capacity(members.len()))?;
    let mut candidates = all_triples(&members);
    shuffle_if_seeded(&mut candidates, seed);
    let edges = LinearSearch::new(base.n(), candidates, q, false, budget).run()?;
    base.with_added(edges)
}

/// Adds `q` transversal triples of a 3-way split of `part` inside that part.
pub fn add_partite_inside_part(
    base: &Construction,
    part: Option<usize>,
    q: usize,
    seed: u64,
) -> Result<Construction> {
    let part = part_index(base, part)?;
    let members = base.partition.members(part);
    let m = members.len();
    let sizes: Vec<usize> = formula::t3r_part_sizes(m as u64, 3)
        .into_iter()
        .map(|s| s as usize)
        .collect();
    let (s1, rest) = members.split_at(sizes[0]);
    let (s2, s3) = rest.split_at(sizes[1]);
    let mut candidates = Vec::with_capacity(s1.len() * s2.len() * s3.len());
    for &x in s1 {
        for &y in s2 {
            for &z in s3 {
                candidates.push(Triple::new(x, y, z)?);
            }
        }
    }
    capacity_check(q, candidates.len())?;
    shuffle_if_seeded(&mut candidates, seed);
    candidates.truncate(q);
    base.with_added(candidates)
}

/// Adds `q` pairwise-disjoint edges, each with two points in a largest part
/// and its third point in `third_part` (default part 0). Pairs are taken
/// from the largest parts other than `third_part`, highest index first.
pub fn add_disjoint_edges(base: &Construction, q: usize, third_part: Option<usize>) -> Result<Construction> {
    let p = &base.partition;
    let third_part = third_part.unwrap_or(0);
    if third_part >= p.part_count() {
        return Err(Error::InvalidParameter(format!("part {third_part} does not exist")));
    }
    let max = p.part_sizes().iter().copied().max().unwrap_or(0);
    let mut pairs = Vec::new();
    for part in (0..p.part_count()).rev() {
        if part == third_part || p.part_size(part) != max {
            continue;
        }
        for pair in p.members(part).chunks_exact(2) {
            pairs.push((pair[0], pair[1]));
        }
    }
    let thirds = p.members(third_part);
    capacity_check(q, pairs.len().min(thirds.len()))?;
    let edges = pairs
        .iter()
        .zip(&thirds)
        .take(q)
        .map(|(&(x, y), &w)| Triple::new(x, y, w))
        .collect::<Result<Vec<_>>>()?;
    base.with_added(edges)
}

/// Adds `q` edges `{x, x', y}` with `x, x'` in part 0 and `y` the first
/// vertex of part 1.
pub fn add_fixed_apex_pairs(base: &Construction, q: usize) -> Result<Construction> {
    let p = &base.partition;
    if p.part_count() < 2 {
        return Err(Error::InvalidParameter("apex addition needs two parts".into()));
    }
    let first = p.members(0);
    let y = p.members(1)[0];
    let mut edges = Vec::new();
    for (i, &x) in first.iter().enumerate() {
        for &x2 in &first[i + 1..] {
            edges.push(Triple::new(x, x2, y)?);
        }
    }
    capacity_check(q, edges.len())?;
    edges.truncate(q);
    base.with_added(edges)
}

/// A positive rational `num / den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if num == 0 || den == 0 {
            return Err(Error::InvalidParameter(format!("ratio {num}/{den} must be positive")));
        }
        Ok(Ratio { num, den })
    }

    /// `self * k` when it is an integer.
    fn times(&self, k: u64) -> Option<u64> {
        let p = self.num * k;
        p.is_multiple_of(self.den).then_some(p / self.den)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for Ratio {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("`{s}` is not a positive rational"));
        let (num, den) = match s.split_once('/') {
            Some((a, b)) => (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?),
            None => (s.parse().map_err(|_| bad())?, 1),
        };
        Ratio::new(num, den)
    }
}

/// The density counterexample on the tripartite host with parts `X, Y, Z`:
/// fix `x` (first of `X`) and `y` (first of `Y`), delete `eps*n/3` edges
/// `xyz`, and add `4*eps*n/3` edges `{x_i, x, y_j}` with `x_i` in `X - x`.
/// `y_j` is `y` while the choices of `x_i` last, then the next vertices of
/// `Y` in order.
pub fn add_f5_density_counterexample(base: &Construction, eps: Ratio) -> Result<Construction> {
    let p = &base.partition;
    if p.part_count() != 3 {
        return Err(Error::InvalidParameter("f5cx needs a tripartite base".into()));
    }
    let n = base.n() as u64;
    let infeasible = || Error::InvalidParameter(format!("eps * n / 3 not integral for eps = {eps}, n = {n}"));
    let deletions = eps.times(n).filter(|v| v % 3 == 0).ok_or_else(infeasible)? as usize / 3;
    let additions = 4 * deletions;
    let (xs, ys, zs) = (p.members(0), p.members(1), p.members(2));
    let (x, y) = (xs[0], ys[0]);
    capacity_check(deletions, zs.len())?;
    capacity_check(additions, (xs.len() - 1) * ys.len())?;

    let removed = zs[..deletions]
        .iter()
        .map(|&z| Triple::new(x, y, z))
        .collect::<Result<Vec<_>>>()?;
    let added = ys
        .iter()
        .flat_map(|&yj| xs[1..].iter().map(move |&xi| Triple::new(xi, x, yj)))
        .take(additions)
        .collect::<Result<Vec<_>>>()?;
    let system = base
        .system
        .remove_edges(removed.iter().copied(), Mutation::Strict)?
        .add_edges(added.iter().copied(), Mutation::Strict)?;
    let mut out = base.clone();
    out.system = system;
    out.removed.extend(removed);
    out.added.extend(added);
    Ok(out)
}

pub fn gen_f5_density_counterexample(n: usize, eps: Ratio) -> Result<Construction> {
    add_f5_density_counterexample(&gen_t3(n)?, eps)
}

/// Extremal base of a construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Base {
    /// `p3`: complete bipartite, parts as equal as possible.
    Bipartite { n: usize },
    /// `t3`: complete 3-partite.
    Tripartite { n: usize },
    /// `b3`: (2,1)-partite with the optimal split.
    TwoOne { n: usize },
    /// `t3r`: complete `r`-partite.
    Partite { n: usize, r: usize },
}

impl Base {
    pub fn n(&self) -> usize {
        match *self {
            Base::Bipartite { n } | Base::Tripartite { n } | Base::TwoOne { n } | Base::Partite { n, .. } => n,
        }
    }

    pub fn build(&self) -> Result<Construction> {
        match *self {
            Base::Bipartite { n } => gen_p3(n),
            Base::Tripartite { n } => gen_t3(n),
            Base::TwoOne { n } => gen_b3(n),
            Base::Partite { n, r } => gen_t3r(n, r),
        }
    }
}

/// One edge-addition step applied on top of a base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AdditionStrategy {
    /// `zero2:q=..`
    ZeroTwoSharing { q: usize },
    /// `antipasch:q=..[,part=..][,seed=..][,budget=..]`
    AntiPasch {
        q: usize,
        part: Option<usize>,
        seed: Option<u64>,
        budget: Option<u64>,
    },
    /// `partite:q=..[,part=..][,seed=..]`
    PartiteInsidePart {
        q: usize,
        part: Option<usize>,
        seed: Option<u64>,
    },
    /// `linear:q=..[,seed=..][,budget=..]`
    LinearInsideX {
        q: usize,
        seed: Option<u64>,
        budget: Option<u64>,
    },
    /// `disjoint:q=..[,third=..]`
    DisjointEdges { q: usize, third: Option<usize> },
    /// `apex:q=..`
    FixedApexPairs { q: usize },
    /// `f5cx:eps=..`
    F5DensityCounterexample { eps: Ratio },
}

impl AdditionStrategy {
    pub fn apply(&self, base: &Construction) -> Result<Construction> {
        match *self {
            AdditionStrategy::ZeroTwoSharing { q } => add_zero_two_sharing(base, q),
            AdditionStrategy::AntiPasch { q, part, seed, budget } => add_anti_pasch(
                base,
                part,
                q,
                seed.unwrap_or(0),
                budget.unwrap_or(DEFAULT_NODE_BUDGET),
            ),
            AdditionStrategy::PartiteInsidePart { q, part, seed } => {
                add_partite_inside_part(base, part, q, seed.unwrap_or(0))
            }
            AdditionStrategy::LinearInsideX { q, seed, budget } => {
                add_linear_inside_x(base, q, seed.unwrap_or(0), budget.unwrap_or(DEFAULT_NODE_BUDGET))
            }
            AdditionStrategy::DisjointEdges { q, third } => add_disjoint_edges(base, q, third),
            AdditionStrategy::FixedApexPairs { q } => add_fixed_apex_pairs(base, q),
            AdditionStrategy::F5DensityCounterexample { eps } => add_f5_density_counterexample(base, eps),
        }
    }

    /// The multiplicity `q`, if the strategy has one.
    pub fn q(&self) -> Option<usize> {
        match *self {
            AdditionStrategy::ZeroTwoSharing { q }
            | AdditionStrategy::AntiPasch { q, .. }
            | AdditionStrategy::PartiteInsidePart { q, .. }
            | AdditionStrategy::LinearInsideX { q, .. }
            | AdditionStrategy::DisjointEdges { q, .. }
            | AdditionStrategy::FixedApexPairs { q } => Some(q),
            AdditionStrategy::F5DensityCounterexample { .. } => None,
        }
    }

    /// Copy with the multiplicity replaced; no-op for strategies without one.
    pub fn with_q(&self, new_q: usize) -> Self {
        let mut s = self.clone();
        match &mut s {
            AdditionStrategy::ZeroTwoSharing { q }
            | AdditionStrategy::AntiPasch { q, .. }
            | AdditionStrategy::PartiteInsidePart { q, .. }
            | AdditionStrategy::LinearInsideX { q, .. }
            | AdditionStrategy::DisjointEdges { q, .. }
            | AdditionStrategy::FixedApexPairs { q } => *q = new_q,
            AdditionStrategy::F5DensityCounterexample { .. } => {}
        }
        s
    }
}

/// A base plus an ordered list of additions, written compactly as e.g.
/// `p3:n=8+zero2:q=4` or `t3r:n=12,r=3+apex:q=3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionSpec {
    pub base: Base,
    pub additions: Vec<AdditionStrategy>,
}

impl ConstructionSpec {
    pub fn new(base: Base) -> Self {
        ConstructionSpec {
            base,
            additions: Vec::new(),
        }
    }

    pub fn with(mut self, strategy: AdditionStrategy) -> Self {
        self.additions.push(strategy);
        self
    }

    pub fn build(&self) -> Result<Construction> {
        let mut c = self.base.build()?;
        for s in &self.additions {
            c = s.apply(&c)?;
        }
        Ok(c)
    }
}

struct Params<'a> {
    spec: &'a str,
    pairs: Vec<(&'a str, &'a str)>,
}

impl<'a> Params<'a> {
    fn parse(spec: &'a str, body: &'a str) -> Result<Self> {
        let mut pairs = Vec::new();
        if !body.is_empty() {
            for kv in body.split(',') {
                let (k, v) = kv.split_once('=').ok_or_else(|| Error::Spec {
                    spec: spec.to_string(),
                    message: format!("expected key=value, found `{kv}`"),
                })?;
                if pairs.iter().any(|(seen, _)| *seen == k) {
                    return Err(Error::Spec {
                        spec: spec.to_string(),
                        message: format!("parameter `{k}` given twice"),
                    });
                }
                pairs.push((k, v));
            }
        }
        Ok(Params { spec, pairs })
    }

    fn err(&self, message: String) -> Error {
        Error::Spec {
            spec: self.spec.to_string(),
            message,
        }
    }

    fn take<T: FromStr>(&mut self, key: &str) -> Result<Option<T>> {
        match self.pairs.iter().position(|(k, _)| *k == key) {
            None => Ok(None),
            Some(i) => {
                let (_, v) = self.pairs.remove(i);
                v.parse()
                    .map(Some)
                    .map_err(|_| self.err(format!("bad value `{v}` for `{key}`")))
            }
        }
    }

    fn require<T: FromStr>(&mut self, key: &str, what: &str) -> Result<T> {
        self.take(key)?
            .ok_or_else(|| self.err(format!("{what} requires `{key}`")))
    }

    fn finish(self) -> Result<()> {
        match self.pairs.first() {
            None => Ok(()),
            Some((k, _)) => Err(self.err(format!("unknown parameter `{k}`"))),
        }
    }
}

impl FromStr for ConstructionSpec {
    type Err = Error;

    fn from_str(spec: &str) -> Result<Self> {
        let spec_err = |message: String| Error::Spec {
            spec: spec.to_string(),
            message,
        };
        let mut segments = spec.trim().split('+');
        let head = segments.next().unwrap_or("");
        let (name, body) = head.split_once(':').unwrap_or((head, ""));
        let mut params = Params::parse(spec, body)?;
        let n: usize = params.require("n", name)?;
        let base = match name {
            "p3" => Base::Bipartite { n },
            "t3" => Base::Tripartite { n },
            "b3" => Base::TwoOne { n },
            "t3r" => Base::Partite {
                n,
                r: params.require("r", "t3r")?,
            },
            other => return Err(spec_err(format!("unknown base `{other}`"))),
        };
        params.finish()?;

        let mut additions = Vec::new();
        for seg in segments {
            let (name, body) = seg.split_once(':').unwrap_or((seg, ""));
            let mut p = Params::parse(spec, body)?;
            let strategy = match name {
                "zero2" => AdditionStrategy::ZeroTwoSharing { q: p.require("q", name)? },
                "antipasch" => AdditionStrategy::AntiPasch {
                    q: p.require("q", name)?,
                    part: p.take("part")?,
                    seed: p.take("seed")?,
                    budget: p.take("budget")?,
                },
                "partite" => AdditionStrategy::PartiteInsidePart {
                    q: p.require("q", name)?,
                    part: p.take("part")?,
                    seed: p.take("seed")?,
                },
                "linear" => AdditionStrategy::LinearInsideX {
                    q: p.require("q", name)?,
                    seed: p.take("seed")?,
                    budget: p.take("budget")?,
                },
                "disjoint" => AdditionStrategy::DisjointEdges {
                    q: p.require("q", name)?,
                    third: p.take("third")?,
                },
                "apex" => AdditionStrategy::FixedApexPairs { q: p.require("q", name)? },
                "f5cx" => AdditionStrategy::F5DensityCounterexample {
                    eps: p.require("eps", name)?,
                },
                other => return Err(spec_err(format!("unknown strategy `{other}`"))),
            };
            p.finish()?;
            additions.push(strategy);
        }
        Ok(ConstructionSpec { base, additions })
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Base::Bipartite { n } => write!(f, "p3:n={n}"),
            Base::Tripartite { n } => write!(f, "t3:n={n}"),
            Base::TwoOne { n } => write!(f, "b3:n={n}"),
            Base::Partite { n, r } => write!(f, "t3r:n={n},r={r}"),
        }
    }
}

fn opt<T: fmt::Display>(key: &str, v: &Option<T>) -> String {
    v.as_ref().map(|v| format!(",{key}={v}")).unwrap_or_default()
}

impl fmt::Display for AdditionStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdditionStrategy::ZeroTwoSharing { q } => write!(f, "zero2:q={q}"),
            AdditionStrategy::AntiPasch { q, part, seed, budget } => write!(
                f,
                "antipasch:q={q}{}{}{}",
                opt("part", part),
                opt("seed", seed),
                opt("budget", budget)
            ),
            AdditionStrategy::PartiteInsidePart { q, part, seed } => {
                write!(f, "partite:q={q}{}{}", opt("part", part), opt("seed", seed))
            }
            AdditionStrategy::LinearInsideX { q, seed, budget } => {
                write!(f, "linear:q={q}{}{}", opt("seed", seed), opt("budget", budget))
            }
            AdditionStrategy::DisjointEdges { q, third } => write!(f, "disjoint:q={q}{}", opt("third", third)),
            AdditionStrategy::FixedApexPairs { q } => write!(f, "apex:q={q}"),
            AdditionStrategy::F5DensityCounterexample { eps } => write!(f, "f5cx:eps={eps}"),
        }
    }
}

impl fmt::Display for ConstructionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.base)?;
        for s in &self.additions {
            write!(f, "+{s}")?;
        }
        Ok(())
    }
}
