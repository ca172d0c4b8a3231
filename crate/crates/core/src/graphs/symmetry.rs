use std::collections::{BTreeMap, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::canon::{certificate, DEFAULT_NODE_BUDGET};
use super::graph::Graph;
use crate::error::{Error, Result};

/// Largest graph handed to the exact automorphism search.
pub const DEFAULT_TRANSITIVITY_BOUND: usize = 32;
/// Largest rooted ball handed to canonical labeling.
pub const DEFAULT_BALL_BOUND: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransitivityMode {
    Full,
    PerColorClass,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransitivityVerdict {
    pub transitive: bool,
    /// Vertex orbits of the automorphism group, each sorted, ordered by least element.
    pub orbits: Vec<Vec<usize>>,
}

/// Orbit partition of the automorphism group, and whether it is transitive in
/// the requested sense.
pub fn verify_transitivity(g: &Graph, mode: TransitivityMode, bound: usize) -> Result<TransitivityVerdict> {
    if g.vertex_count() > bound {
        return Err(Error::TooLarge {
            what: "automorphism search",
            vertices: g.vertex_count(),
            bound,
        });
    }
    if mode == TransitivityMode::PerColorClass && !g.is_bipartite() {
        return Err(Error::Precondition("per-color-class transitivity needs a bipartite graph".into()));
    }
    let orbits = vertex_orbits(g)?;
    let mut orbit_of = vec![0usize; g.vertex_count()];
    for (i, orbit) in orbits.iter().enumerate() {
        for &v in orbit {
            orbit_of[v] = i;
        }
    }
    let transitive = match mode {
        TransitivityMode::Full => orbits.len() == 1,
        TransitivityMode::PerColorClass => {
            let b = g.bipartition().expect("checked above");
            let same = |side: &[usize]| side.windows(2).all(|w| orbit_of[w[0]] == orbit_of[w[1]]);
            same(&b.left) && same(&b.right)
        }
    };
    Ok(TransitivityVerdict { transitive, orbits })
}

fn vertex_orbits(g: &Graph) -> Result<Vec<Vec<usize>>> {
    let mut classes: BTreeMap<Vec<u8>, Vec<usize>> = BTreeMap::new();
    for v in 0..g.vertex_count() {
        let cert = certificate(g.adjacency(), &[v], DEFAULT_NODE_BUDGET)?;
        classes.entry(cert).or_default().push(v);
    }
    let mut orbits: Vec<Vec<usize>> = classes.into_values().collect();
    orbits.sort();
    Ok(orbits)
}

/// Whether all edges lie in one orbit of the automorphism group.
pub fn verify_edge_transitivity(g: &Graph, bound: usize) -> Result<bool> {
    if g.vertex_count() > bound {
        return Err(Error::TooLarge {
            what: "automorphism search",
            vertices: g.vertex_count(),
            bound,
        });
    }
    let mut first: Option<Vec<u8>> = None;
    for &(u, v) in g.edges() {
        let a = certificate(g.adjacency(), &[u, v], DEFAULT_NODE_BUDGET)?;
        let b = certificate(g.adjacency(), &[v, u], DEFAULT_NODE_BUDGET)?;
        let key = a.min(b);
        match &first {
            None => first = Some(key),
            Some(f) if *f != key => return Ok(false),
            Some(_) => {}
        }
    }
    Ok(true)
}

/// How a symmetry hypothesis was settled for a particular graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Symmetry {
    Verified,
    Refuted,
    /// Too large to search; the generator declared it.
    Declared,
    Unknown,
}

impl Symmetry {
    pub fn holds(self) -> bool {
        matches!(self, Symmetry::Verified | Symmetry::Declared)
    }
}

/// Vertex transitivity under the default policy: searched up to `bound`
/// vertices, otherwise taken from the generator's declaration. A regular
/// bipartite graph also qualifies when each colour class is a single orbit.
pub fn transitivity_status(g: &Graph, bound: usize) -> Result<Symmetry> {
    if g.vertex_count() > bound {
        return Ok(if g.declared_transitive() { Symmetry::Declared } else { Symmetry::Unknown });
    }
    let full = verify_transitivity(g, TransitivityMode::Full, bound)?;
    if full.transitive {
        return Ok(Symmetry::Verified);
    }
    if g.is_bipartite() && g.regular_degree().is_some() {
        let per_class = verify_transitivity(g, TransitivityMode::PerColorClass, bound)?;
        if per_class.transitive {
            return Ok(Symmetry::Verified);
        }
    }
    Ok(Symmetry::Refuted)
}

pub fn edge_transitivity_status(g: &Graph, bound: usize) -> Result<Symmetry> {
    if g.vertex_count() > bound {
        return Ok(if g.declared_edge_transitive() { Symmetry::Declared } else { Symmetry::Unknown });
    }
    Ok(if verify_edge_transitivity(g, bound)? { Symmetry::Verified } else { Symmetry::Refuted })
}

/// Frequencies of rooted `r`-ball isomorphism classes under a uniform root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeighborhoodStats {
    pub radius: usize,
    /// Canonical code of each rooted ball class, mapped to its frequency.
    pub classes: BTreeMap<String, BigRational>,
}

impl NeighborhoodStats {
    pub fn total(&self) -> BigRational {
        self.classes.values().cloned().sum()
    }
}

pub fn ball_statistics(g: &Graph, radius: usize, ball_bound: usize) -> Result<NeighborhoodStats> {
    let n = g.vertex_count();
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    for root in 0..n {
        let ball = ball_around(g, root, radius);
        if ball.len() > ball_bound {
            return Err(Error::TooLarge {
                what: "rooted ball canonical labeling",
                vertices: ball.len(),
                bound: ball_bound,
            });
        }
        let mut local = vec![usize::MAX; n];
        for (i, &v) in ball.iter().enumerate() {
            local[v] = i;
        }
        let adjacency: Vec<Vec<usize>> = ball
            .iter()
            .map(|&v| g.neighbors(v).iter().filter(|&&w| local[w] != usize::MAX).map(|&w| local[w]).collect())
            .collect();
        let cert = certificate(&adjacency, &[0], DEFAULT_NODE_BUDGET)?;
        *counts.entry(encode_hex(&cert)).or_default() += 1;
    }
    let classes = counts
        .into_iter()
        .map(|(code, c)| (code, BigRational::new(BigInt::from(c), BigInt::from(n))))
        .collect();
    Ok(NeighborhoodStats { radius, classes })
}

/// Vertices within distance `radius` of `root`, root first, in BFS order.
fn ball_around(g: &Graph, root: usize, radius: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; g.vertex_count()];
    dist[root] = 0;
    let mut order = vec![root];
    let mut queue = VecDeque::from([root]);
    while let Some(x) = queue.pop_front() {
        if dist[x] == radius {
            continue;
        }
        for &y in g.neighbors(x) {
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                order.push(y);
                queue.push_back(y);
            }
        }
    }
    order
}

fn encode_hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::families::{generate, FamilySpec};
    use num_traits::One;

    fn family(s: &str) -> Graph {
        generate(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn cycle_is_transitive() {
        let v = verify_transitivity(&family("c4"), TransitivityMode::Full, 32).unwrap();
        assert!(v.transitive);
        assert_eq!(v.orbits, vec![vec![0, 1, 2, 3]]);
    }

    #[test]
    fn k33_minus_edge_is_not() {
        let g = family("k33").remove_edge(0, 3).unwrap();
        let v = verify_transitivity(&g, TransitivityMode::Full, 32).unwrap();
        assert!(!v.transitive);
        // degree-2 endpoints {0, 3} form one orbit; the other four vertices another
        assert_eq!(v.orbits, vec![vec![0, 3], vec![1, 2, 4, 5]]);
    }

    #[test]
    fn hypercube_is_transitive() {
        assert!(verify_transitivity(&family("q3"), TransitivityMode::Full, 32).unwrap().transitive);
    }

    #[test]
    fn per_color_class_needs_bipartite() {
        let c5 = family("c5");
        assert!(verify_transitivity(&c5, TransitivityMode::PerColorClass, 32).is_err());
        assert!(verify_transitivity(&family("t6x6"), TransitivityMode::Full, 32).is_err());
    }

    #[test]
    fn status_policy() {
        assert_eq!(transitivity_status(&family("c6"), 32).unwrap(), Symmetry::Verified);
        assert_eq!(transitivity_status(&family("p4"), 32).unwrap(), Symmetry::Refuted);
        assert_eq!(transitivity_status(&family("t6x6"), 32).unwrap(), Symmetry::Declared);
        assert_eq!(edge_transitivity_status(&family("p4"), 32).unwrap(), Symmetry::Refuted);
        let big = family("p4").disjoint_copies(10).unwrap();
        assert_eq!(transitivity_status(&big, 32).unwrap(), Symmetry::Unknown);
    }

    #[test]
    fn edge_transitivity() {
        assert!(verify_edge_transitivity(&family("heawood"), 32).unwrap());
        assert!(verify_edge_transitivity(&family("t4x4"), 32).unwrap());
        assert!(!verify_edge_transitivity(&family("p4"), 32).unwrap());
    }

    #[test]
    fn ball_statistics_examples() {
        let s = ball_statistics(&family("c8"), 1, 20).unwrap();
        assert_eq!(s.classes.len(), 1);
        let s = ball_statistics(&family("p4"), 1, 20).unwrap();
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(s.classes.values().cloned().collect::<Vec<_>>(), vec![half.clone(), half]);
        let s = ball_statistics(&generate(&FamilySpec::Torus(vec![4, 4])).unwrap(), 1, 20).unwrap();
        assert_eq!(s.classes.len(), 1);
        assert!(s.total().is_one());
    }

    #[test]
    fn ball_bound_enforced() {
        assert!(ball_statistics(&family("k44"), 2, 5).is_err());
    }
}
