//! Brute-force reference computations, kept deliberately naive. They share
//! no code with the fast routines they check.

use crate::graph::{Graph, VertexSet};

/// `μ` of the subgraph induced by the bitmask `alive`, by memoized
/// recursion on the least live vertex.
fn mu_dp(masks: &[u64], memo: &mut Vec<u8>, alive: u64) -> u8 {
    if alive == 0 {
        return 0;
    }
    if memo[alive as usize] != u8::MAX {
        return memo[alive as usize];
    }
    let v = alive.trailing_zeros() as usize;
    let rest = alive & !(1u64 << v);
    let mut best = mu_dp(masks, memo, rest);
    let mut nb = masks[v] & rest;
    while nb != 0 {
        let u = nb.trailing_zeros() as usize;
        nb &= nb - 1;
        best = best.max(1 + mu_dp(masks, memo, rest & !(1u64 << u)));
    }
    memo[alive as usize] = best;
    best
}

/// Matching number and the set `D` of vertices missed by some maximum
/// matching, by exhaustive recursion. Intended for `n <= 16`.
pub fn matching_number_and_d(g: &Graph) -> (usize, VertexSet) {
    let n = g.order();
    assert!(n <= 20, "oracle is exponential in n");
    let masks = g.neighbor_masks();
    let mut memo = vec![u8::MAX; 1usize << n];
    let all = if n == 0 { 0 } else { (1u64 << n) - 1 };
    let mu = mu_dp(&masks, &mut memo, all);
    let d = (0..n).filter(|&v| mu_dp(&masks, &mut memo, all & !(1u64 << v)) == mu).collect();
    (mu as usize, d)
}

/// Size of a largest independent set by plain subset scan.
pub fn alpha_by_subsets(g: &Graph) -> usize {
    let n = g.order();
    assert!(n <= 20, "oracle is exponential in n");
    let masks = g.neighbor_masks();
    (0u64..1 << n)
        .filter(|&s| (0..n).all(|v| s & (1 << v) == 0 || masks[v] & s == 0))
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap_or(0)
}
