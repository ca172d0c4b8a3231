use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::graph::Graph;
use crate::error::{Error, Result};

/// Retry budget for the configuration model.
pub const RANDOM_REGULAR_RETRIES: usize = 1000;

/// A named graph family with its parameters.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FamilySpec {
    /// Cycle on `n` vertices.
    Cycle(usize),
    /// Path on `n` vertices.
    Path(usize),
    /// Complete bipartite graph `K_{d,d}`.
    CompleteBipartite(usize),
    /// The `k`-dimensional hypercube.
    Hypercube(usize),
    /// Product of cycles with the given side lengths.
    Torus(Vec<usize>),
    Heawood,
    /// `d`-regular bipartite graph on `2n` vertices from the configuration model.
    RandomRegularBipartite { n: usize, d: usize, seed: u64 },
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Cycle(n) => write!(f, "cycle({n})"),
            FamilySpec::Path(n) => write!(f, "path({n})"),
            FamilySpec::CompleteBipartite(d) => write!(f, "K{d},{d}"),
            FamilySpec::Hypercube(k) => write!(f, "Q{k}"),
            FamilySpec::Torus(dims) => {
                let dims: Vec<String> = dims.iter().map(usize::to_string).collect();
                write!(f, "torus({})", dims.join("x"))
            }
            FamilySpec::Heawood => write!(f, "heawood"),
            FamilySpec::RandomRegularBipartite { n, d, seed } => write!(f, "rrb({n},{d},{seed})"),
        }
    }
}

impl FromStr for FamilySpec {
    type Err = Error;

    /// Accepts short names (`c4`, `k33`, `q3`, `p5`, `heawood`, `t4x4`) and
    /// explicit forms (`cycle:8`, `kdd:5`, `hypercube:4`, `torus:6x6`,
    /// `path:4`, `rrb:8,3,42`). `rrb:8:3:42` is also accepted so that specs
    /// can sit in comma-separated lists.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let bad = || Error::InvalidFamily(format!("unrecognised family `{s}`"));
        let num = |t: &str| t.parse::<usize>().map_err(|_| bad());
        if s == "heawood" {
            return Ok(FamilySpec::Heawood);
        }
        if let Some((name, arg)) = s.split_once(':') {
            return match name {
                "cycle" | "c" => Ok(FamilySpec::Cycle(num(arg)?)),
                "path" | "p" => Ok(FamilySpec::Path(num(arg)?)),
                "kdd" | "complete_bipartite" => Ok(FamilySpec::CompleteBipartite(num(arg)?)),
                "hypercube" | "q" => Ok(FamilySpec::Hypercube(num(arg)?)),
                "torus" | "t" => Ok(FamilySpec::Torus(parse_dims(arg).ok_or_else(bad)?)),
                "rrb" | "random_regular_bipartite" => {
                    let parts: Vec<&str> = arg.split([',', ':']).collect();
                    if parts.len() != 3 {
                        return Err(bad());
                    }
                    Ok(FamilySpec::RandomRegularBipartite {
                        n: num(parts[0])?,
                        d: num(parts[1])?,
                        seed: parts[2].parse().map_err(|_| bad())?,
                    })
                }
                _ => Err(bad()),
            };
        }
        let (head, rest) = s.split_at(1);
        match head {
            "c" => Ok(FamilySpec::Cycle(num(rest)?)),
            "p" => Ok(FamilySpec::Path(num(rest)?)),
            "q" => Ok(FamilySpec::Hypercube(num(rest)?)),
            "t" => Ok(FamilySpec::Torus(parse_dims(rest).ok_or_else(bad)?)),
            "k" => {
                // k33 style: both sides must agree
                let half = rest.len() / 2;
                if rest.len() % 2 != 0 || rest[..half] != rest[half..] {
                    return Err(bad());
                }
                Ok(FamilySpec::CompleteBipartite(num(&rest[..half])?))
            }
            _ => Err(bad()),
        }
    }
}

fn parse_dims(s: &str) -> Option<Vec<usize>> {
    s.split(['x', ','])
        .map(|p| p.parse::<usize>().ok())
        .collect::<Option<Vec<_>>>()
        .filter(|d| !d.is_empty())
}

/// Builds the graph of a family. Deterministic in `(family, parameters, seed)`.
pub fn generate(spec: &FamilySpec) -> Result<Graph> {
    let label = spec.to_string();
    match spec {
        FamilySpec::Cycle(n) => {
            if *n < 3 {
                return Err(Error::InvalidFamily(format!("cycle needs at least 3 vertices, got {n}")));
            }
            let edges: Vec<(usize, usize)> = (0..*n).map(|i| (i, (i + 1) % n)).collect();
            Ok(Graph::new(*n, &edges, label)?.declare_transitive(true, true))
        }
        FamilySpec::Path(n) => {
            if *n == 0 {
                return Err(Error::InvalidFamily("path needs at least one vertex".into()));
            }
            let edges: Vec<(usize, usize)> = (1..*n).map(|i| (i - 1, i)).collect();
            Graph::new(*n, &edges, label)
        }
        FamilySpec::CompleteBipartite(d) => {
            if *d == 0 {
                return Err(Error::InvalidFamily("K_{d,d} needs d >= 1".into()));
            }
            let edges: Vec<(usize, usize)> =
                (0..*d).flat_map(|a| (0..*d).map(move |b| (a, d + b))).collect();
            Ok(Graph::new(2 * d, &edges, label)?.declare_transitive(true, true))
        }
        FamilySpec::Hypercube(k) => {
            if *k == 0 || *k > 16 {
                return Err(Error::InvalidFamily(format!("hypercube dimension {k} outside 1..=16")));
            }
            let n = 1usize << k;
            let edges: Vec<(usize, usize)> = (0..n)
                .flat_map(|x| (0..*k).map(move |b| (x, x ^ (1 << b))))
                .filter(|&(x, y)| x < y)
                .collect();
            Ok(Graph::new(n, &edges, label)?.declare_transitive(true, true))
        }
        FamilySpec::Torus(dims) => torus(dims, label),
        FamilySpec::Heawood => {
            // LCF notation [5, -5]^7
            let mut edges: Vec<(usize, usize)> = (0..14).map(|i| (i, (i + 1) % 14)).collect();
            edges.extend((0..14).step_by(2).map(|i| (i, (i + 5) % 14)));
            Ok(Graph::new(14, &edges, label)?.declare_transitive(true, true))
        }
        FamilySpec::RandomRegularBipartite { n, d, seed } => random_regular_bipartite(*n, *d, *seed, label),
    }
}

fn torus(dims: &[usize], label: String) -> Result<Graph> {
    if dims.is_empty() {
        return Err(Error::InvalidFamily("torus needs at least one dimension".into()));
    }
    if let Some(&s) = dims.iter().find(|&&s| s < 3) {
        return Err(Error::InvalidFamily(format!(
            "torus side {s} < 3 would create repeated edges"
        )));
    }
    if let Some(&s) = dims.iter().find(|&&s| s % 2 == 1) {
        return Err(Error::InvalidFamily(format!("odd torus side {s} breaks bipartiteness")));
    }
    let n: usize = dims.iter().product();
    // Row-major layout: the last coordinate varies fastest.
    let mut strides = vec![1usize; dims.len()];
    for i in (0..dims.len() - 1).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }
    let mut edges = Vec::with_capacity(n * dims.len());
    for x in 0..n {
        for (axis, &side) in dims.iter().enumerate() {
            let coord = (x / strides[axis]) % side;
            let y = x - coord * strides[axis] + ((coord + 1) % side) * strides[axis];
            edges.push((x.min(y), x.max(y)));
        }
    }
    let edge_transitive = dims.iter().all(|&s| s == dims[0]);
    Ok(Graph::new(n, &edges, label)?.declare_transitive(true, edge_transitive))
}

fn random_regular_bipartite(n: usize, d: usize, seed: u64, label: String) -> Result<Graph> {
    if n == 0 || d == 0 || d > n {
        return Err(Error::InvalidFamily(format!(
            "random regular bipartite needs 1 <= d <= n, got n={n}, d={d}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stubs: Vec<usize> = (0..n).flat_map(|b| std::iter::repeat_n(n + b, d)).collect();
    'attempt: for _ in 0..RANDOM_REGULAR_RETRIES {
        stubs.shuffle(&mut rng);
        let mut edges = Vec::with_capacity(n * d);
        for a in 0..n {
            let mut mates: Vec<usize> = stubs[a * d..(a + 1) * d].to_vec();
            mates.sort_unstable();
            if mates.windows(2).any(|w| w[0] == w[1]) {
                continue 'attempt;
            }
            edges.extend(mates.into_iter().map(|b| (a, b)));
        }
        return Graph::new(2 * n, &edges, label);
    }
    Err(Error::InvalidFamily(format!(
        "no simple {d}-regular bipartite graph on {} vertices after {RANDOM_REGULAR_RETRIES} attempts",
        2 * n
    )))
}
