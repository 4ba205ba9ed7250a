//! Catalog of forbidden configurations.
//!
//! Every pattern is stored with a fixed vertex labeling and carries its
//! automorphism count, the divisor that turns embedding counts into copy
//! counts.

use std::fmt;

use crate::error::{Error, Result};
use crate::hypergraph::{count_isomorphisms, Triple, TripleSystem};

/// Largest pattern accepted by [`automorphism_count`].
pub const AUT_VERTEX_LIMIT: usize = 20;
/// Up to this many vertices automorphisms are counted by listing all `f!`
/// permutations; above it, by pruned backtracking.
pub const ENUMERATION_LIMIT: usize = 8;

#[derive(Clone)]
pub struct Pattern {
    name: String,
    system: TripleSystem,
    aut_count: u64,
}

impl Pattern {
    /// Wraps a system as a pattern. Every vertex must lie in some edge.
    pub fn new(name: impl Into<String>, system: TripleSystem) -> Result<Self> {
        if let Some(v) = (0..system.n()).find(|&v| system.degree(v) == 0) {
            return Err(Error::InvalidParameter(format!(
                "pattern vertex {v} is isolated"
            )));
        }
        let aut_count = automorphism_count(&system)?;
        Ok(Pattern {
            name: name.into(),
            system,
            aut_count,
        })
    }

    fn from_list(name: &str, f: usize, edges: &[[usize; 3]]) -> Self {
        let system = TripleSystem::build(f, edges.iter().copied()).expect("catalog edges are valid");
        Pattern::new(name, system).expect("catalog pattern is well-formed")
    }

    /// The Fano plane from the difference set {1, 2, 4} over Z_7, shifted to
    /// 0-based labels: point `i` of the cyclic description is vertex `i - 1`.
    pub fn fano() -> Self {
        let lines: Vec<[usize; 3]> = (0..7).map(|i| [i % 7, (i + 1) % 7, (i + 3) % 7]).collect();
        Self::from_list("fano", 7, &lines)
    }

    /// {123, 124, 345}
    pub fn f5() -> Self {
        Self::from_list("f5", 5, &[[0, 1, 2], [0, 1, 3], [2, 3, 4]])
    }

    /// {123, 124, 234}: the complete 3-graph on four points minus one edge.
    pub fn k4minus() -> Self {
        Self::from_list("k4minus", 4, &[[0, 1, 2], [0, 1, 3], [1, 2, 3]])
    }

    /// {123, 124, 125, 345}
    pub fn b5() -> Self {
        Self::from_list("b5", 5, &[[0, 1, 2], [0, 1, 3], [0, 1, 4], [2, 3, 4]])
    }

    /// The Fano plane with its last vertex and the three lines through it
    /// removed.
    pub fn pasch() -> Self {
        let fano = Self::fano();
        let kept = fano.edges().filter(|t| !t.contains(6)).copied();
        let system = TripleSystem::from_triples(6, kept).expect("Fano minus a vertex");
        Pattern::new("pasch", system).expect("Pasch configuration is well-formed")
    }

    pub fn single_edge() -> Self {
        Self::from_list("edge", 3, &[[0, 1, 2]])
    }

    /// `L_s`: the complete graph `K_s` with every graph edge enlarged by its
    /// own new vertex. Clique vertices are `0..s`; the expansion vertex of
    /// the pair `{i, j}` follows in lexicographic pair order.
    pub fn expanded_clique(s: usize) -> Result<Self> {
        if s < 3 {
            return Err(Error::InvalidParameter(format!(
                "expanded clique needs s >= 3, got {s}"
            )));
        }
        let f = s + s * (s - 1) / 2;
        let mut next = s;
        let mut edges = Vec::with_capacity(s * (s - 1) / 2);
        for i in 0..s {
            for j in i + 1..s {
                edges.push([i, j, next]);
                next += 1;
            }
        }
        let system = TripleSystem::build(f, edges)?;
        Pattern::new(format!("L{s}"), system)
    }

    /// Looks up a catalog pattern: `fano`, `f5`, `k4minus`, `b5`, `pasch`,
    /// `edge`, or `L<s>` for an expanded clique.
    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "fano" => Ok(Self::fano()),
            "f5" => Ok(Self::f5()),
            "k4minus" => Ok(Self::k4minus()),
            "b5" => Ok(Self::b5()),
            "pasch" => Ok(Self::pasch()),
            "edge" => Ok(Self::single_edge()),
            _ => match name.strip_prefix('L').map(str::parse::<usize>) {
                Some(Ok(s)) => Self::expanded_clique(s),
                _ => Err(Error::UnknownPattern(name.to_string())),
            },
        }
    }

    /// Every named pattern that fits the automorphism budget.
    pub fn catalog() -> Vec<Pattern> {
        let mut all = vec![
            Self::fano(),
            Self::f5(),
            Self::k4minus(),
            Self::b5(),
            Self::pasch(),
            Self::single_edge(),
        ];
        for s in 3..=5 {
            all.push(Self::expanded_clique(s).expect("L3..L5 fit the budget"));
        }
        all
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Number of vertices `f`.
    pub fn vertex_count(&self) -> usize {
        self.system.n()
    }

    pub fn edge_count(&self) -> usize {
        self.system.edge_count()
    }

    pub fn edges(&self) -> impl Iterator<Item = &Triple> + '_ {
        self.system.edges()
    }

    pub fn aut_count(&self) -> u64 {
        self.aut_count
    }

    pub fn system(&self) -> &TripleSystem {
        &self.system
    }

    /// For `L<s>` patterns, the clique size `s`.
    pub fn clique_size(&self) -> Option<usize> {
        self.name.strip_prefix('L').and_then(|s| s.parse().ok())
    }
}

impl fmt::Debug for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Pattern")
            .field("name", &self.name)
            .field("f", &self.vertex_count())
            .field("edges", &self.system.edges().collect::<Vec<_>>())
            .field("aut_count", &self.aut_count)
            .finish()
    }
}

/// `|Aut(F)|`, by enumeration up to [`ENUMERATION_LIMIT`] vertices and by
/// backtracking up to [`AUT_VERTEX_LIMIT`].
pub fn automorphism_count(system: &TripleSystem) -> Result<u64> {
    let f = system.n();
    if f > AUT_VERTEX_LIMIT {
        return Err(Error::PatternTooLarge {
            f,
            limit: AUT_VERTEX_LIMIT,
        });
    }
    if f <= ENUMERATION_LIMIT {
        Ok(automorphisms_by_enumeration(system))
    } else {
        Ok(automorphisms_by_backtracking(system))
    }
}

/// Checks every permutation of the vertex set (Heap's algorithm).
pub fn automorphisms_by_enumeration(system: &TripleSystem) -> u64 {
    let f = system.n();
    let mut perm: Vec<usize> = (0..f).collect();
    let preserves = |perm: &[usize]| {
        system
            .edges()
            .all(|t| system.has_edge(perm[t.a()], perm[t.b()], perm[t.c()]))
    };
    let mut count = u64::from(preserves(&perm));
    let mut c = vec![0usize; f];
    let mut i = 0;
    while i < f {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            count += u64::from(preserves(&perm));
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    count
}

pub fn automorphisms_by_backtracking(system: &TripleSystem) -> u64 {
    count_isomorphisms(system, system, None)
}
