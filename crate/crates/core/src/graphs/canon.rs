//! Canonical certificates of small graphs with individualized roots.
//!
//! Search is plain individualization-refinement: refine an ordered partition
//! to an equitable one, branch on every vertex of the first non-singleton
//! cell, and keep the lexicographically smallest adjacency string over all
//! discrete leaves. No automorphism pruning, so a node budget bounds the work.

use crate::error::{Error, Result};

/// Default number of search-tree nodes before giving up.
pub const DEFAULT_NODE_BUDGET: usize = 2_000_000;

/// Ordered partition of `0..n`.
type Partition = Vec<Vec<usize>>;

/// Certificate of `(graph, roots)`: two rooted graphs have equal
/// certificates iff there is an isomorphism mapping `roots[i]` to `roots[i]`.
pub(crate) fn certificate(adjacency: &[Vec<usize>], roots: &[usize], budget: usize) -> Result<Vec<u8>> {
    let n = adjacency.len();
    let mut matrix = vec![false; n * n];
    for (u, list) in adjacency.iter().enumerate() {
        for &v in list {
            matrix[u * n + v] = true;
        }
    }
    let mut initial: Partition = roots.iter().map(|&r| vec![r]).collect();
    let rest: Vec<usize> = (0..n).filter(|v| !roots.contains(v)).collect();
    if !rest.is_empty() {
        initial.push(rest);
    }
    let mut search = Search { n, matrix, best: None, nodes: 0, budget };
    let refined = search.refine(initial);
    search.descend(refined)?;
    let mut cert = (n as u32).to_le_bytes().to_vec();
    cert.extend(search.best.expect("search visits at least one leaf"));
    Ok(cert)
}

struct Search {
    n: usize,
    matrix: Vec<bool>,
    best: Option<Vec<u8>>,
    nodes: usize,
    budget: usize,
}

impl Search {
    fn adjacent(&self, u: usize, v: usize) -> bool {
        self.matrix[u * self.n + v]
    }

    /// Splits cells by neighbour counts into every current cell until stable.
    fn refine(&self, mut cells: Partition) -> Partition {
        let n = self.n;
        let mut cell_of = vec![0usize; n];
        loop {
            for (i, cell) in cells.iter().enumerate() {
                for &v in cell {
                    cell_of[v] = i;
                }
            }
            let k = cells.len();
            let mut next: Partition = Vec::with_capacity(k);
            for cell in &cells {
                if cell.len() == 1 {
                    next.push(cell.clone());
                    continue;
                }
                let mut keyed: Vec<(Vec<u32>, usize)> = cell
                    .iter()
                    .map(|&v| {
                        let mut sig = vec![0u32; k];
                        for w in 0..n {
                            if self.adjacent(v, w) {
                                sig[cell_of[w]] += 1;
                            }
                        }
                        (sig, v)
                    })
                    .collect();
                keyed.sort();
                let mut start = 0;
                for i in 1..=keyed.len() {
                    if i == keyed.len() || keyed[i].0 != keyed[start].0 {
                        next.push(keyed[start..i].iter().map(|&(_, v)| v).collect());
                        start = i;
                    }
                }
            }
            if next.len() == cells.len() {
                return next;
            }
            cells = next;
        }
    }

    fn descend(&mut self, cells: Partition) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::TooLarge {
                what: "canonical labeling search",
                vertices: self.n,
                bound: self.budget,
            });
        }
        match cells.iter().position(|c| c.len() > 1) {
            None => {
                let order: Vec<usize> = cells.iter().map(|c| c[0]).collect();
                let leaf = self.encode(&order);
                if self.best.as_ref().is_none_or(|b| leaf < *b) {
                    self.best = Some(leaf);
                }
                Ok(())
            }
            Some(target) => {
                for &v in &cells[target] {
                    let mut split: Partition = Vec::with_capacity(cells.len() + 1);
                    split.extend_from_slice(&cells[..target]);
                    split.push(vec![v]);
                    split.push(cells[target].iter().copied().filter(|&w| w != v).collect());
                    split.extend_from_slice(&cells[target + 1..]);
                    let refined = self.refine(split);
                    self.descend(refined)?;
                }
                Ok(())
            }
        }
    }

    /// Upper-triangle adjacency bits in label order, packed into bytes.
    fn encode(&self, order: &[usize]) -> Vec<u8> {
        let n = order.len();
        let mut bytes = vec![0u8; (n * n.saturating_sub(1) / 2).div_ceil(8)];
        let mut bit = 0;
        for i in 0..n {
            for j in i + 1..n {
                if self.adjacent(order[i], order[j]) {
                    // most significant bit first so byte order matches bit order
                    bytes[bit / 8] |= 0x80 >> (bit % 8);
                }
                bit += 1;
            }
        }
        bytes
    }
}
