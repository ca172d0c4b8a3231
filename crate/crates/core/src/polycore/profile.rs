//! Vertex sweep with a frontier of pending vertices.
//!
//! Vertices are processed in index order. After step `j` the frontier holds
//! every processed vertex that still has an unprocessed neighbour; the state
//! records which frontier vertices are already covered by a dimer. A dimer is
//! placed when its later endpoint is processed, so each matching is counted
//! exactly once.

use super::count::Count;
use crate::error::{Error, Result};
use crate::graphs::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum SweepTarget {
    /// Coefficients `m_0 ..= m_max_degree`.
    Coefficients { max_degree: usize },
    /// Only the number of perfect matchings.
    PerfectMatchings,
}

type Layer<C> = Vec<Option<Box<[C]>>>;

pub(crate) fn sweep<C: Count>(g: &Graph, target: SweepTarget, max_frontier: usize) -> Result<Vec<C>> {
    let width = g.frontier_width();
    if width > max_frontier {
        return Err(Error::TooLarge {
            what: "profile sweep frontier",
            vertices: width,
            bound: max_frontier,
        });
    }
    let (slots, perfect) = match target {
        SweepTarget::Coefficients { max_degree } => (max_degree + 1, false),
        SweepTarget::PerfectMatchings => (1, true),
    };
    let n = g.vertex_count();
    let last = g.last_neighbor();

    let mut front: Vec<usize> = Vec::new();
    let mut layer: Layer<C> = vec![None];
    let mut unit = vec![C::zero(); slots].into_boxed_slice();
    unit[0] = C::one();
    layer[0] = Some(unit);

    for j in 0..n {
        // earlier neighbours of j, as frontier bit positions
        let partners: Vec<usize> = front
            .iter()
            .enumerate()
            .filter(|&(_, &u)| g.has_edge(u, j))
            .map(|(i, _)| i)
            .collect();
        // positions leaving the frontier, highest first for compression
        let mut leaving: Vec<usize> = front
            .iter()
            .enumerate()
            .filter(|&(_, &u)| last[u] == j)
            .map(|(i, _)| i)
            .collect();
        leaving.reverse();
        let leaving_mask: u64 = leaving.iter().fold(0, |m, &i| m | (1 << i));
        let enters = last[j] > j;
        let kept = front.len() - leaving.len();
        let next_len = kept + usize::from(enters);
        let mut next: Layer<C> = vec![None; 1 << next_len];

        let compress = |mut s: u64| -> u64 {
            for &i in &leaving {
                s = (s & ((1 << i) - 1)) | ((s >> (i + 1)) << i);
            }
            s
        };

        for (s, entry) in layer.iter().enumerate() {
            let Some(coeffs) = entry else { continue };
            let s = s as u64;
            // j stays free for now
            if !(perfect && (!enters || s & leaving_mask != leaving_mask)) {
                let t = compress(s);
                deposit(&mut next, t as usize, coeffs, 0, slots);
            }
            // j takes a dimer to an earlier free neighbour
            for &i in &partners {
                if s & (1 << i) != 0 {
                    continue;
                }
                let s2 = s | (1 << i);
                if perfect && s2 & leaving_mask != leaving_mask {
                    continue;
                }
                let mut t = compress(s2);
                if enters {
                    t |= 1 << kept;
                }
                deposit(&mut next, t as usize, coeffs, 1, slots);
            }
        }

        front.retain(|&u| last[u] != j);
        if enters {
            front.push(j);
        }
        debug_assert_eq!(front.len(), next_len);
        layer = next;
    }

    debug_assert!(front.is_empty());
    Ok(match layer.into_iter().next().flatten() {
        Some(c) => c.into_vec(),
        None => vec![C::zero(); slots],
    })
}

fn deposit<C: Count>(layer: &mut Layer<C>, state: usize, coeffs: &[C], shift: usize, slots: usize) {
    // in perfect-matching mode the single slot is never shifted
    let shift = if slots == 1 { 0 } else { shift };
    if coeffs[..slots - shift].iter().all(Count::is_zero) {
        return;
    }
    let cell = layer[state].get_or_insert_with(|| vec![C::zero(); slots].into_boxed_slice());
    for k in 0..slots - shift {
        if !coeffs[k].is_zero() {
            cell[k + shift].add_from(&coeffs[k]);
        }
    }
}
