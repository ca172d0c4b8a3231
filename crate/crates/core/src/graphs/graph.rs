use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The two color classes of a bipartite graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bipartition {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl Bipartition {
    pub fn is_balanced(&self) -> bool {
        self.left.len() == self.right.len()
    }
}

/// A finite simple undirected graph on vertices `0..vertex_count`.
///
/// Bipartition and regularity are derived from the edge set on construction,
/// so every `Graph` value satisfies its own invariants. The vertex order is
/// significant: the profile DP and the elimination pivot both sweep vertices
/// in index order, so generators lay vertices out with small bandwidth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    bipartition: Option<Bipartition>,
    regular_degree: Option<usize>,
    label: String,
    declared_transitive: bool,
    declared_edge_transitive: bool,
}

impl Graph {
    /// Builds a graph from an edge list. Loops and repeated edges are rejected.
    pub fn new(vertex_count: usize, edges: &[(usize, usize)], label: impl Into<String>) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::InvalidGraph("graph must have at least one vertex".into()));
        }
        let mut seen = BTreeSet::new();
        for &(u, v) in edges {
            if u >= vertex_count || v >= vertex_count {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) out of range for {vertex_count} vertices"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("loop at vertex {u}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::InvalidGraph(format!("repeated edge ({u}, {v})")));
            }
        }
        let edges: Vec<(usize, usize)> = seen.into_iter().collect();
        let mut adjacency = vec![Vec::new(); vertex_count];
        for &(u, v) in &edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let bipartition = two_coloring(&adjacency);
        let d0 = adjacency[0].len();
        let regular_degree = (d0 > 0 && adjacency.iter().all(|a| a.len() == d0)).then_some(d0);
        Ok(Graph {
            vertex_count,
            edges,
            adjacency,
            bipartition,
            regular_degree,
            label: label.into(),
            declared_transitive: false,
            declared_edge_transitive: false,
        })
    }

    pub(crate) fn declare_transitive(mut self, vertex: bool, edge: bool) -> Self {
        self.declared_transitive = vertex;
        self.declared_edge_transitive = edge;
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as sorted pairs `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.adjacency
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.vertex_count && self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn bipartition(&self) -> Option<&Bipartition> {
        self.bipartition.as_ref()
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition.is_some()
    }

    pub fn regular_degree(&self) -> Option<usize> {
        self.regular_degree
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Provenance flag set by generators of vertex-transitive families.
    pub fn declared_transitive(&self) -> bool {
        self.declared_transitive
    }

    pub fn declared_edge_transitive(&self) -> bool {
        self.declared_edge_transitive
    }

    /// Length of a shortest cycle, or `None` for a forest.
    pub fn girth(&self) -> Option<usize> {
        let n = self.vertex_count;
        let mut best: Option<usize> = None;
        let mut dist = vec![usize::MAX; n];
        let mut parent = vec![usize::MAX; n];
        for s in 0..n {
            dist.iter_mut().for_each(|d| *d = usize::MAX);
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                if let Some(b) = best {
                    if 2 * dist[x] + 1 >= b {
                        break;
                    }
                }
                for &y in &self.adjacency[x] {
                    if dist[y] == usize::MAX {
                        dist[y] = dist[x] + 1;
                        parent[y] = x;
                        queue.push_back(y);
                    } else if parent[x] != y {
                        let len = dist[x] + dist[y] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best
    }

    /// The induced subgraph on the remaining vertices, relabelled in
    /// increasing index order so banded layouts stay banded.
    pub fn remove_vertices(&self, removed: &[usize]) -> Result<Graph> {
        let mut gone = vec![false; self.vertex_count];
        for &r in removed {
            if r >= self.vertex_count {
                return Err(Error::InvalidGraph(format!("vertex {r} out of range")));
            }
            gone[r] = true;
        }
        let mut index = vec![usize::MAX; self.vertex_count];
        let mut next = 0;
        for v in 0..self.vertex_count {
            if !gone[v] {
                index[v] = next;
                next += 1;
            }
        }
        let edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .filter(|&&(u, v)| !gone[u] && !gone[v])
            .map(|&(u, v)| (index[u], index[v]))
            .collect();
        let mut sorted: Vec<usize> = removed.to_vec();
        sorted.sort_unstable();
        let label = format!("{}-{:?}", self.label, sorted);
        if next == 0 {
            return Err(Error::InvalidGraph("removing every vertex leaves an empty graph".into()));
        }
        Graph::new(next, &edges, label)
    }

    /// The graph with the same vertex set and the edge `(u, v)` deleted.
    pub fn remove_edge(&self, u: usize, v: usize) -> Result<Graph> {
        if !self.has_edge(u, v) {
            return Err(Error::Precondition(format!("({u}, {v}) is not an edge")));
        }
        let key = (u.min(v), u.max(v));
        let edges: Vec<(usize, usize)> = self.edges.iter().copied().filter(|&e| e != key).collect();
        Graph::new(self.vertex_count, &edges, format!("{}-e{:?}", self.label, key))
    }

    /// `copies` disjoint copies laid out contiguously.
    pub fn disjoint_copies(&self, copies: usize) -> Result<Graph> {
        if copies == 0 {
            return Err(Error::Precondition("need at least one copy".into()));
        }
        let n = self.vertex_count;
        let edges: Vec<(usize, usize)> = (0..copies)
            .flat_map(|c| self.edges.iter().map(move |&(u, v)| (u + c * n, v + c * n)))
            .collect();
        let g = Graph::new(n * copies, &edges, format!("{}x{}", copies, self.label))?;
        Ok(g.declare_transitive(
            self.declared_transitive && copies == 1,
            self.declared_edge_transitive && copies == 1,
        ))
    }

    /// Largest number of already-swept vertices that still have an unswept
    /// neighbour, over all prefixes of the vertex order.
    pub fn frontier_width(&self) -> usize {
        let last = self.last_neighbor();
        let mut width = 0;
        let mut open = 0usize;
        let mut closing = vec![0usize; self.vertex_count];
        for j in 0..self.vertex_count {
            if last[j] > j {
                open += 1;
                closing[last[j]] += 1;
            }
            open -= closing[j];
            width = width.max(open);
        }
        width
    }

    /// For each vertex, the largest neighbour index, or the vertex itself if
    /// it has no later neighbour.
    pub(crate) fn last_neighbor(&self) -> Vec<usize> {
        (0..self.vertex_count)
            .map(|v| self.adjacency[v].last().copied().map_or(v, |w| w.max(v)))
            .collect()
    }

    /// Renders the plain edge-list format: `v E` then one `u v` per line.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.vertex_count, self.edges.len());
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    pub fn from_edge_list(text: &str, label: impl Into<String>) -> Result<Graph> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("empty edge list".into()))?;
        let (v, e) = parse_pair(header)?;
        let mut edges = Vec::with_capacity(e);
        for line in lines {
            edges.push(parse_pair(line)?);
        }
        if edges.len() != e {
            return Err(Error::Parse(format!("header announces {e} edges, found {}", edges.len())));
        }
        Graph::new(v, &edges, label)
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            v: self.vertex_count,
            edges: self.edges.iter().map(|&(u, v)| [u, v]).collect(),
            bipartition: self.bipartition.clone(),
            degree: self.regular_degree,
            label: self.label.clone(),
        }
    }

    pub fn from_json(json: &GraphJson) -> Result<Graph> {
        let edges: Vec<(usize, usize)> = json.edges.iter().map(|e| (e[0], e[1])).collect();
        let g = Graph::new(json.v, &edges, json.label.clone())?;
        if let Some(d) = json.degree {
            if g.regular_degree != Some(d) {
                return Err(Error::InvalidGraph(format!("declared degree {d} does not match edges")));
            }
        }
        if let Some(b) = &json.bipartition {
            let mut side = vec![None; g.vertex_count];
            for &a in &b.left {
                side[a] = Some(false);
            }
            for &a in &b.right {
                side[a] = Some(true);
            }
            if side.iter().any(Option::is_none)
                || g.edges.iter().any(|&(u, v)| side[u] == side[v])
            {
                return Err(Error::InvalidGraph("declared bipartition is not proper".into()));
            }
            return Ok(Graph { bipartition: Some(b.clone()), ..g });
        }
        Ok(g)
    }
}

/// JSON export shape: `{v, edges, bipartition?, degree?, label}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub v: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub bipartition: Option<Bipartition>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub degree: Option<usize>,
    pub label: String,
}

fn parse_pair(line: &str) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace().map(str::parse::<usize>);
    match (it.next(), it.next(), it.next()) {
        (Some(Ok(a)), Some(Ok(b)), None) => Ok((a, b)),
        _ => Err(Error::Parse(format!("expected two integers, got `{line}`"))),
    }
}

/// BFS 2-coloring; each component puts its smallest vertex on the left.
fn two_coloring(adjacency: &[Vec<usize>]) -> Option<Bipartition> {
    let n = adjacency.len();
    let mut color: Vec<Option<bool>> = vec![None; n];
    for s in 0..n {
        if color[s].is_some() {
            continue;
        }
        color[s] = Some(false);
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            let cx = color[x].unwrap();
            for &y in &adjacency[x] {
                match color[y] {
                    None => {
                        color[y] = Some(!cx);
                        queue.push_back(y);
                    }
                    Some(cy) if cy == cx => return None,
                    Some(_) => {}
                }
            }
        }
    }
    let (left, right): (Vec<usize>, Vec<usize>) = (0..n).partition(|&v| color[v] == Some(false));
    Some(Bipartition { left, right })
}
