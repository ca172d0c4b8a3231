use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::graphs::Graph;

/// Largest graph the enumeration oracle accepts.
pub const BRUTE_FORCE_BOUND: usize = 24;

/// Counts `k`-matchings by recursive inclusion/exclusion of each edge.
pub(crate) fn brute_force_counts(g: &Graph) -> Result<Vec<BigUint>> {
    if g.vertex_count() > BRUTE_FORCE_BOUND {
        return Err(Error::TooLarge {
            what: "brute-force matching enumeration",
            vertices: g.vertex_count(),
            bound: BRUTE_FORCE_BOUND,
        });
    }
    let mut counts = vec![0u64; g.vertex_count() / 2 + 1];
    enumerate(g.edges(), 0, 0, 0, &mut counts);
    while counts.len() > 1 && *counts.last().unwrap() == 0 {
        counts.pop();
    }
    Ok(counts.into_iter().map(BigUint::from).collect())
}

fn enumerate(edges: &[(usize, usize)], next: usize, covered: u32, size: usize, counts: &mut [u64]) {
    if next == edges.len() {
        counts[size] += 1;
        return;
    }
    enumerate(edges, next + 1, covered, size, counts);
    let (u, v) = edges[next];
    let bits = (1u32 << u) | (1u32 << v);
    if covered & bits == 0 {
        enumerate(edges, next + 1, covered | bits, size + 1, counts);
    }
}
