//! Brute-force reference implementations shared by the integration tests.
//! Nothing here calls into the search engine.

#![allow(dead_code)]

use hyperturan::{Triple, TripleSystem};
use rand::seq::SliceRandom;
use rand::Rng;

/// Calls `visit` with every injection `0..f -> 0..n`.
pub fn for_each_injection(f: usize, n: usize, mut visit: impl FnMut(&[usize])) {
    fn go(f: usize, n: usize, image: &mut Vec<usize>, used: &mut [bool], visit: &mut dyn FnMut(&[usize])) {
        if image.len() == f {
            visit(image);
            return;
        }
        for w in 0..n {
            if !used[w] {
                used[w] = true;
                image.push(w);
                go(f, n, image, used, visit);
                image.pop();
                used[w] = false;
            }
        }
    }
    if f <= n {
        go(f, n, &mut Vec::with_capacity(f), &mut vec![false; n], &mut visit);
    }
}

fn maps_edges(pattern: &[[usize; 3]], host: &TripleSystem, image: &[usize]) -> bool {
    pattern.iter().all(|e| host.has_edge(image[e[0]], image[e[1]], image[e[2]]))
}

fn edge_list(p: &TripleSystem) -> Vec<[usize; 3]> {
    p.edges().map(|t| t.vertices()).collect()
}

/// Edge-preserving injections of `pattern` into `host`, by enumeration.
pub fn naive_embeddings(pattern: &TripleSystem, host: &TripleSystem) -> u128 {
    let edges = edge_list(pattern);
    let mut count = 0u128;
    for_each_injection(pattern.n(), host.n(), |img| {
        if maps_edges(&edges, host, img) {
            count += 1;
        }
    });
    count
}

/// Injections whose image uses host edge `e`.
pub fn naive_embeddings_through_edge(pattern: &TripleSystem, host: &TripleSystem, e: &Triple) -> u128 {
    let edges = edge_list(pattern);
    let mut count = 0u128;
    for_each_injection(pattern.n(), host.n(), |img| {
        if maps_edges(&edges, host, img) {
            let hits = edges
                .iter()
                .any(|p| Triple::new(img[p[0]], img[p[1]], img[p[2]]).unwrap() == *e);
            count += u128::from(hits);
        }
    });
    count
}

/// Automorphisms by checking every permutation.
pub fn naive_automorphisms(pattern: &TripleSystem) -> u64 {
    let edges = edge_list(pattern);
    let mut count = 0;
    for_each_injection(pattern.n(), pattern.n(), |img| {
        if maps_edges(&edges, pattern, img) {
            count += 1;
        }
    });
    count
}

pub fn complete(n: usize) -> TripleSystem {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                edges.push([a, b, c]);
            }
        }
    }
    TripleSystem::build(n, edges).unwrap()
}

/// Each triple present independently with probability `p`.
pub fn random_host(rng: &mut impl Rng, n: usize, p: f64) -> TripleSystem {
    let edges: Vec<[usize; 3]> = complete(n)
        .edges()
        .map(|t| t.vertices())
        .filter(|_| rng.gen_bool(p))
        .collect();
    TripleSystem::build(n, edges).unwrap()
}

pub fn relabel(h: &TripleSystem, perm: &[usize]) -> TripleSystem {
    TripleSystem::build(h.n(), h.edges().map(|t| [perm[t.a()], perm[t.b()], perm[t.c()]])).unwrap()
}

pub fn random_permutation(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    perm
}
