//! 3-uniform hypergraphs with pair-link bitsets.

mod io;
mod iso;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::bitset::{VertexSet, MAX_VERTICES};
use crate::error::{Error, Result};

pub use io::{parse, serialize};
pub use iso::{count_isomorphisms, is_isomorphic};

/// A 3-element edge stored with its vertices sorted ascending.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Triple([usize; 3]);

impl Triple {
    /// Normalizes any vertex order; rejects repeated vertices.
    pub fn new(x: usize, y: usize, z: usize) -> Result<Self> {
        if x == y || y == z || x == z {
            return Err(Error::DegenerateTriple(x, y, z));
        }
        let mut v = [x, y, z];
        v.sort_unstable();
        Ok(Triple(v))
    }

    pub fn a(&self) -> usize {
        self.0[0]
    }

    pub fn b(&self) -> usize {
        self.0[1]
    }

    pub fn c(&self) -> usize {
        self.0[2]
    }

    pub fn vertices(&self) -> [usize; 3] {
        self.0
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.contains(&v)
    }

    pub fn max_vertex(&self) -> usize {
        self.0[2]
    }

    /// Number of vertices shared with `other`.
    pub fn intersection_size(&self, other: &Triple) -> usize {
        self.0.iter().filter(|v| other.contains(**v)).count()
    }

    /// Applies a vertex map and re-normalizes.
    pub fn map(&self, f: impl Fn(usize) -> usize) -> Result<Self> {
        Triple::new(f(self.0[0]), f(self.0[1]), f(self.0[2]))
    }
}

impl TryFrom<(usize, usize, usize)> for Triple {
    type Error = Error;

    fn try_from((x, y, z): (usize, usize, usize)) -> Result<Self> {
        Triple::new(x, y, z)
    }
}

impl TryFrom<[usize; 3]> for Triple {
    type Error = Error;

    fn try_from([x, y, z]: [usize; 3]) -> Result<Self> {
        Triple::new(x, y, z)
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.0[0], self.0[1], self.0[2])
    }
}

impl Serialize for Triple {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

/// Whether mutations reject duplicate additions and absent removals.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum Mutation {
    #[default]
    Strict,
    Permissive,
}

/// An `n`-vertex 3-graph. Immutable through the public API: mutating
/// operations return new systems.
#[derive(Clone)]
pub struct TripleSystem {
    n: usize,
    edges: BTreeSet<Triple>,
    // links[u * n + v] = { w : {u, v, w} is an edge }, stored for both orders.
    links: Vec<VertexSet>,
    degrees: Vec<usize>,
    // neighbors[u] = { v : u and v lie in a common edge }
    neighbors: Vec<VertexSet>,
}

impl TripleSystem {
    pub fn empty(n: usize) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::TooManyVertices {
                n,
                limit: MAX_VERTICES,
            });
        }
        Ok(TripleSystem {
            n,
            edges: BTreeSet::new(),
            links: vec![VertexSet::EMPTY; n * n],
            degrees: vec![0; n],
            neighbors: vec![VertexSet::EMPTY; n],
        })
    }

    /// Builds a system from vertex triples in any order. Duplicates collapse.
    pub fn build<I, T>(n: usize, triples: I) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        T: Into<[usize; 3]>,
    {
        let mut sys = Self::empty(n)?;
        for t in triples {
            let [x, y, z] = t.into();
            for v in [x, y, z] {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
            }
            sys.insert(Triple::new(x, y, z)?);
        }
        Ok(sys)
    }

    pub fn from_triples<I: IntoIterator<Item = Triple>>(n: usize, triples: I) -> Result<Self> {
        Self::build(n, triples.into_iter().map(|t| t.vertices()))
    }

    /// The complete 3-graph on `n` vertices.
    pub fn complete(n: usize) -> Result<Self> {
        let mut sys = Self::empty(n)?;
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    sys.insert(Triple([a, b, c]));
                }
            }
        }
        Ok(sys)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in ascending lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = &Triple> + '_ {
        self.edges.iter()
    }

    pub fn contains(&self, t: &Triple) -> bool {
        self.edges.contains(t)
    }

    pub fn has_edge(&self, x: usize, y: usize, z: usize) -> bool {
        x < self.n && y < self.n && x != y && self.links[x * self.n + y].contains(z)
    }

    /// `{ w : {u, v, w} is an edge }`, without range checks.
    #[inline]
    pub fn link(&self, u: usize, v: usize) -> &VertexSet {
        &self.links[u * self.n + v]
    }

    /// Checked neighborhood of the pair `{u, v}`.
    pub fn link_pair(&self, u: usize, v: usize) -> Result<VertexSet> {
        for x in [u, v] {
            if x >= self.n {
                return Err(Error::VertexOutOfRange { vertex: x, n: self.n });
            }
        }
        if u == v {
            return Err(Error::InvalidPair(u, v));
        }
        Ok(*self.link(u, v))
    }

    /// Number of edges containing both `u` and `v`.
    pub fn codegree(&self, u: usize, v: usize) -> usize {
        self.link(u, v).len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.degrees[v]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    /// Vertices sharing at least one edge with `v`.
    #[inline]
    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.neighbors[v]
    }

    pub fn vertex_set(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    pub fn add_edges<I>(&self, triples: I, mode: Mutation) -> Result<Self>
    where
        I: IntoIterator<Item = Triple>,
    {
        let mut next = self.clone();
        for t in triples {
            next.check_range(&t)?;
            if !next.insert(t) && mode == Mutation::Strict {
                return Err(Error::DuplicateEdge(t));
            }
        }
        Ok(next)
    }

    pub fn remove_edges<I>(&self, triples: I, mode: Mutation) -> Result<Self>
    where
        I: IntoIterator<Item = Triple>,
    {
        let mut next = self.clone();
        for t in triples {
            next.check_range(&t)?;
            if !next.delete(&t) && mode == Mutation::Strict {
                return Err(Error::MissingEdge(t));
            }
        }
        Ok(next)
    }

    /// Sub-system on the same vertex set keeping only `triples`, which must
    /// all be edges.
    pub fn restrict_to<'a, I>(&self, triples: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a Triple>,
    {
        let mut sub = Self::empty(self.n)?;
        for t in triples {
            if !self.contains(t) {
                return Err(Error::MissingEdge(*t));
            }
            sub.insert(*t);
        }
        Ok(sub)
    }

    fn check_range(&self, t: &Triple) -> Result<()> {
        if t.max_vertex() >= self.n {
            return Err(Error::VertexOutOfRange {
                vertex: t.max_vertex(),
                n: self.n,
            });
        }
        Ok(())
    }

    /// In-place insertion for crate-internal working copies. Returns false if
    /// the edge was already present.
    pub(crate) fn insert(&mut self, t: Triple) -> bool {
        if !self.edges.insert(t) {
            return false;
        }
        let [a, b, c] = t.0;
        let n = self.n;
        for (u, v, w) in [(a, b, c), (a, c, b), (b, c, a)] {
            self.links[u * n + v].insert(w);
            self.links[v * n + u].insert(w);
        }
        for (u, v) in [(a, b), (a, c), (b, c)] {
            self.neighbors[u].insert(v);
            self.neighbors[v].insert(u);
        }
        for v in [a, b, c] {
            self.degrees[v] += 1;
        }
        true
    }

    pub(crate) fn delete(&mut self, t: &Triple) -> bool {
        if !self.edges.remove(t) {
            return false;
        }
        let [a, b, c] = t.0;
        let n = self.n;
        for (u, v, w) in [(a, b, c), (a, c, b), (b, c, a)] {
            self.links[u * n + v].remove(w);
            self.links[v * n + u].remove(w);
        }
        for (u, v) in [(a, b), (a, c), (b, c)] {
            if self.links[u * n + v].is_empty() {
                self.neighbors[u].remove(v);
                self.neighbors[v].remove(u);
            }
        }
        for v in [a, b, c] {
            self.degrees[v] -= 1;
        }
        true
    }
}

impl PartialEq for TripleSystem {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges
    }
}

impl Eq for TripleSystem {}

impl fmt::Debug for TripleSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TripleSystem")
            .field("n", &self.n)
            .field("edges", &self.edges)
            .finish()
    }
}

/// Assignment of every vertex to exactly one part.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PartitionLabeling {
    parts: Vec<usize>,
    part_sizes: Vec<usize>,
}

impl PartitionLabeling {
    /// `parts[v]` is the part of vertex `v`; part indices must be `0..k` with
    /// every part non-empty.
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        let k = parts.iter().max().map_or(0, |&p| p + 1);
        let mut part_sizes = vec![0; k];
        for &p in &parts {
            part_sizes[p] += 1;
        }
        if let Some(empty) = part_sizes.iter().position(|&s| s == 0) {
            return Err(Error::InvalidParameter(format!("part {empty} is empty")));
        }
        Ok(PartitionLabeling { parts, part_sizes })
    }

    /// Consecutive vertex blocks of the given sizes.
    pub fn from_sizes(sizes: &[usize]) -> Self {
        let parts = sizes
            .iter()
            .enumerate()
            .flat_map(|(i, &s)| std::iter::repeat_n(i, s))
            .collect();
        PartitionLabeling {
            parts,
            part_sizes: sizes.to_vec(),
        }
    }

    pub fn n(&self) -> usize {
        self.parts.len()
    }

    pub fn part_count(&self) -> usize {
        self.part_sizes.len()
    }

    pub fn part_of(&self, v: usize) -> usize {
        self.parts[v]
    }

    pub fn part_sizes(&self) -> &[usize] {
        &self.part_sizes
    }

    pub fn part_size(&self, part: usize) -> usize {
        self.part_sizes[part]
    }

    pub fn members(&self, part: usize) -> Vec<usize> {
        (0..self.parts.len())
            .filter(|&v| self.parts[v] == part)
            .collect()
    }

    /// Per-part vertex counts of a triple.
    pub fn signature(&self, t: &Triple) -> Vec<usize> {
        let mut sig = vec![0; self.part_count()];
        for v in t.vertices() {
            sig[self.parts[v]] += 1;
        }
        sig
    }

    /// Index of the first part of maximum size.
    pub fn largest_part(&self) -> usize {
        let max = self.part_sizes.iter().copied().max().unwrap_or(0);
        self.part_sizes.iter().position(|&s| s == max).unwrap_or(0)
    }
}
