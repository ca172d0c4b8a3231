use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::One;

use crate::graphs::Graph;

/// Largest graph representable by the remaining-vertex bitmask.
pub(crate) const MASK_CAPACITY: usize = 128;

/// `M(S) = M(S - v) + t * sum_{u ~ v} M(S - v - u)` with `v` the lowest
/// remaining vertex, memoized on the remaining-vertex set.
pub(crate) fn eliminate(g: &Graph, max_degree: usize) -> Vec<BigUint> {
    let n = g.vertex_count();
    assert!(n <= MASK_CAPACITY, "caller checks the vertex bound");
    let neighbor_masks: Vec<u128> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u128, |m, &u| m | (1u128 << u)))
        .collect();
    let mut solver = Eliminator {
        neighbor_masks,
        max_degree,
        memo: HashMap::new(),
        arena: vec![vec![BigUint::one()]],
    };
    let full = if n == MASK_CAPACITY { u128::MAX } else { (1u128 << n) - 1 };
    let root = solver.solve(full);
    std::mem::take(&mut solver.arena[root])
}

struct Eliminator {
    neighbor_masks: Vec<u128>,
    max_degree: usize,
    memo: HashMap<u128, usize>,
    arena: Vec<Vec<BigUint>>,
}

impl Eliminator {
    fn solve(&mut self, mask: u128) -> usize {
        if mask == 0 {
            return 0;
        }
        if let Some(&idx) = self.memo.get(&mask) {
            return idx;
        }
        let v = mask.trailing_zeros() as usize;
        let rest = mask & !(1u128 << v);
        let base = self.solve(rest);
        let mut acc = self.arena[base].clone();
        let mut partners = self.neighbor_masks[v] & rest;
        while partners != 0 {
            let u = partners.trailing_zeros();
            partners &= partners - 1;
            let sub = self.solve(rest & !(1u128 << u));
            let len = (self.arena[sub].len() + 1).min(self.max_degree + 1);
            if acc.len() < len {
                acc.resize(len, BigUint::default());
            }
            for (k, c) in self.arena[sub].iter().enumerate().take(len - 1) {
                acc[k + 1] += c;
            }
        }
        self.arena.push(acc);
        let idx = self.arena.len() - 1;
        self.memo.insert(mask, idx);
        idx
    }
}
