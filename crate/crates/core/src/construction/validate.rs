//! Structural checks on edge lists, written independently of the generators.

use std::collections::BTreeSet;

use crate::hypergraph::{PartitionLabeling, Triple};

/// Every intersection size realised by two distinct edges of `edges`.
pub fn intersection_sizes(edges: &[Triple]) -> BTreeSet<usize> {
    let mut sizes = BTreeSet::new();
    for (i, a) in edges.iter().enumerate() {
        for b in &edges[i + 1..] {
            sizes.insert(a.intersection_size(b));
        }
    }
    sizes
}

pub fn is_zero_or_two_sharing(edges: &[Triple]) -> bool {
    intersection_sizes(edges).iter().all(|&s| s == 0 || s == 2)
}

/// No two edges share two or more points.
pub fn is_linear(edges: &[Triple]) -> bool {
    intersection_sizes(edges).iter().all(|&s| s <= 1)
}

pub fn is_pairwise_disjoint(edges: &[Triple]) -> bool {
    intersection_sizes(edges).iter().all(|&s| s == 0)
}

pub fn inside_part(edges: &[Triple], partition: &PartitionLabeling, part: usize) -> bool {
    edges
        .iter()
        .all(|t| t.vertices().iter().all(|&v| partition.part_of(v) == part))
}

/// Whether some four edges span six points with every point in exactly two
/// of them and no two of them sharing two points.
pub fn has_pasch(edges: &[Triple]) -> bool {
    let m = edges.len();
    for i in 0..m {
        for j in i + 1..m {
            if edges[i].intersection_size(&edges[j]) != 1 {
                continue;
            }
            for k in j + 1..m {
                for l in k + 1..m {
                    let four = [edges[i], edges[j], edges[k], edges[l]];
                    if is_pasch(&four) {
                        return true;
                    }
                }
            }
        }
    }
    false
}

fn is_pasch(four: &[Triple; 4]) -> bool {
    let mut count = std::collections::BTreeMap::new();
    for t in four {
        for v in t.vertices() {
            *count.entry(v).or_insert(0) += 1;
        }
    }
    let pairwise_one = (0..4).all(|i| (i + 1..4).all(|j| four[i].intersection_size(&four[j]) == 1));
    count.len() == 6 && count.values().all(|&c| c == 2) && pairwise_one
}
