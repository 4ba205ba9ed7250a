//! Isomorphism by backtracking over degree- and link-refined candidates.

use super::TripleSystem;
use crate::bitset::VertexSet;

/// Whether some vertex bijection maps the edges of `h1` exactly onto `h2`.
pub fn is_isomorphic(h1: &TripleSystem, h2: &TripleSystem) -> bool {
    count_isomorphisms(h1, h2, Some(1)) > 0
}

/// Number of isomorphisms `h1 -> h2`, stopping once `limit` are found.
/// With `h1 == h2` this is the automorphism count.
pub fn count_isomorphisms(h1: &TripleSystem, h2: &TripleSystem, limit: Option<u64>) -> u64 {
    if h1.n() != h2.n() || h1.edge_count() != h2.edge_count() {
        return 0;
    }
    let mut d1 = h1.degrees().to_vec();
    let mut d2 = h2.degrees().to_vec();
    d1.sort_unstable();
    d2.sort_unstable();
    if d1 != d2 {
        return 0;
    }
    let n = h1.n();
    if n == 0 {
        return 1;
    }

    let order = search_order(h1);
    let mut search = IsoSearch {
        h1,
        h2,
        order,
        image: vec![usize::MAX; n],
        found: 0,
        limit: limit.unwrap_or(u64::MAX),
    };
    search.extend(0, VertexSet::EMPTY);
    search.found
}

/// Highest degree first, then repeatedly the vertex sharing the most edges
/// with already-ordered vertices.
fn search_order(h: &TripleSystem) -> Vec<usize> {
    let n = h.n();
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let next = (0..n)
            .filter(|&v| !placed[v])
            .max_by_key(|&v| {
                let attached: usize = order.iter().map(|&u| h.codegree(u, v)).sum();
                (attached, h.degree(v), std::cmp::Reverse(v))
            })
            .unwrap();
        placed[next] = true;
        order.push(next);
    }
    order
}

struct IsoSearch<'a> {
    h1: &'a TripleSystem,
    h2: &'a TripleSystem,
    order: Vec<usize>,
    image: Vec<usize>,
    found: u64,
    limit: u64,
}

impl IsoSearch<'_> {
    fn extend(&mut self, depth: usize, used: VertexSet) {
        if depth == self.order.len() {
            self.found += 1;
            return;
        }
        let v = self.order[depth];
        let mut cand = self.h2.vertex_set() - used;
        let deg = self.h1.degree(v);
        for i in 0..depth {
            let a = self.order[i];
            let fa = self.image[a];
            if self.h1.neighbors(a).contains(v) {
                cand &= *self.h2.neighbors(fa);
            } else {
                cand = cand - *self.h2.neighbors(fa);
            }
            for j in i + 1..depth {
                let b = self.order[j];
                let fb = self.image[b];
                if self.h1.link(a, b).contains(v) {
                    cand &= *self.h2.link(fa, fb);
                } else {
                    cand = cand - *self.h2.link(fa, fb);
                }
            }
            if cand.is_empty() {
                return;
            }
        }
        for w in cand.iter() {
            if self.h2.degree(w) != deg {
                continue;
            }
            let codegrees_match = self.order[..depth]
                .iter()
                .all(|&a| self.h1.codegree(a, v) == self.h2.codegree(self.image[a], w));
            if !codegrees_match {
                continue;
            }
            self.image[v] = w;
            let mut next = used;
            next.insert(w);
            self.extend(depth + 1, next);
            if self.found >= self.limit {
                return;
            }
        }
        self.image[v] = usize::MAX;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn relabel(h: &TripleSystem, perm: &[usize]) -> TripleSystem {
        TripleSystem::from_triples(h.n(), h.edges().map(|t| t.map(|v| perm[v]).unwrap())).unwrap()
    }

    #[test]
    fn fano_automorphisms() {
        let fano = TripleSystem::build(
            7,
            [[0, 1, 3], [1, 2, 4], [2, 3, 5], [3, 4, 6], [0, 4, 5], [1, 5, 6], [0, 2, 6]],
        )
        .unwrap();
        assert_eq!(count_isomorphisms(&fano, &fano, None), 168);
        let shuffled = relabel(&fano, &[3, 6, 0, 5, 1, 4, 2]);
        assert!(is_isomorphic(&fano, &shuffled));
        assert_eq!(count_isomorphisms(&fano, &shuffled, None), 168);
    }

    #[test]
    fn distinguishes_same_degree_sequence() {
        // Two 2-regular-ish systems on 6 vertices with equal degree sequences:
        // a "cycle" of triples versus two disjoint pairs of triples.
        let a = TripleSystem::build(6, [[0, 1, 2], [2, 3, 4], [4, 5, 0]]).unwrap();
        let b = TripleSystem::build(6, [[0, 1, 2], [0, 1, 3], [3, 4, 5]]).unwrap();
        assert!(!is_isomorphic(&a, &b));
        assert!(is_isomorphic(&a, &a));
    }

    #[test]
    fn empty_and_trivial() {
        let e = TripleSystem::empty(3).unwrap();
        assert_eq!(count_isomorphisms(&e, &e, None), 6);
        let z = TripleSystem::empty(0).unwrap();
        assert!(is_isomorphic(&z, &z));
        let one = TripleSystem::build(3, [[0, 1, 2]]).unwrap();
        assert!(!is_isomorphic(&e, &one));
    }
}
