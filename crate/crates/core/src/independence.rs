//! Independence number and the critical-set calculus.
//!
//! `alpha` is an exact branch and bound over vertex bitmasks. The critical
//! profile is computed by explicit enumeration of all subsets and all
//! independent sets, so it doubles as the oracle for the closed forms in
//! [`crate::bab`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

/// Size guard for [`alpha`] and [`core_corona`].
pub const DEFAULT_ALPHA_LIMIT: usize = 48;
/// Size guard for [`critical_profile`].
pub const DEFAULT_PROFILE_LIMIT: usize = 16;
/// The profile tables take `2^n` entries; no caller may raise the limit past this.
pub const PROFILE_HARD_LIMIT: usize = 24;
/// Size guard for [`critical_difference`] and the subset scans.
pub const DEFAULT_SUBSET_LIMIT: usize = 20;

fn guard(stage: &'static str, n: usize, limit: usize) -> Result<()> {
    if n > limit || n > 64 {
        return Err(Error::SizeGuard { stage, n, limit: limit.min(64) });
    }
    Ok(())
}

#[inline]
fn bit(v: usize) -> u64 {
    1u64 << v
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        bit(n) - 1
    }
}

fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            v
        })
    })
}

/// Independence number of the subgraph induced by `p`.
pub(crate) fn mis_size(masks: &[u64], p: u64) -> usize {
    if p == 0 {
        return 0;
    }
    let mut min_v = 0;
    let mut min_d = u32::MAX;
    let mut max_v = 0;
    let mut max_d = 0;
    for v in bits(p) {
        let d = (masks[v] & p).count_ones();
        if d < min_d {
            min_d = d;
            min_v = v;
        }
        if d > max_d {
            max_d = d;
            max_v = v;
        }
    }
    // a vertex of degree <= 1 is always in some maximum independent set
    if min_d <= 1 {
        return 1 + mis_size(masks, p & !(bit(min_v) | masks[min_v]));
    }
    let comp = component_of(masks, p, p.trailing_zeros() as usize);
    if comp != p {
        return mis_size(masks, comp) + mis_size(masks, p & !comp);
    }
    if max_d == 2 {
        // a single chordless cycle
        return p.count_ones() as usize / 2;
    }
    let without = mis_size(masks, p & !bit(max_v));
    let with = 1 + mis_size(masks, p & !(bit(max_v) | masks[max_v]));
    without.max(with)
}

fn component_of(masks: &[u64], p: u64, start: usize) -> u64 {
    let mut comp = bit(start);
    let mut frontier = comp;
    while frontier != 0 {
        let mut next = 0;
        for v in bits(frontier) {
            next |= masks[v] & p;
        }
        frontier = next & !comp;
        comp |= next;
    }
    comp
}

/// `alpha(G)` and the lexicographically least maximum independent set.
pub fn alpha(g: &Graph) -> Result<(usize, VertexSet)> {
    alpha_with_limit(g, DEFAULT_ALPHA_LIMIT)
}

pub fn alpha_with_limit(g: &Graph, limit: usize) -> Result<(usize, VertexSet)> {
    let n = g.order();
    guard("alpha", n, limit)?;
    let masks = g.neighbor_masks();
    let all = full_mask(n);
    let a = mis_size(&masks, all);
    let mut chosen = 0u64;
    let mut avail = all;
    for v in 0..n {
        if avail & bit(v) == 0 {
            continue;
        }
        let need = a - chosen.count_ones() as usize;
        let later = avail & !full_mask(v + 1);
        if 1 + mis_size(&masks, later & !masks[v]) == need {
            chosen |= bit(v);
            avail &= !(bit(v) | masks[v]);
        } else {
            avail &= !bit(v);
        }
    }
    debug_assert_eq!(chosen.count_ones() as usize, a);
    Ok((a, VertexSet::from_mask(chosen)))
}

/// `core(G)` and `corona(G)` from single-vertex deletions:
/// `v ∈ core ⇔ α(G−v) = α(G)−1` and `v ∈ corona ⇔ 1 + α(G−N[v]) = α(G)`.
pub fn core_corona(g: &Graph) -> Result<(VertexSet, VertexSet)> {
    let n = g.order();
    guard("core/corona", n, DEFAULT_ALPHA_LIMIT)?;
    let masks = g.neighbor_masks();
    let all = full_mask(n);
    let a = mis_size(&masks, all);
    let core = (0..n).filter(|&v| mis_size(&masks, all & !bit(v)) + 1 == a).collect();
    let corona = (0..n).filter(|&v| 1 + mis_size(&masks, all & !(bit(v) | masks[v])) == a).collect();
    Ok((core, corona))
}

/// `d_G(X) = |X| - |N(X)|`.
pub fn difference(g: &Graph, set: &VertexSet) -> Result<isize> {
    let nb = g.neighborhood(set, false)?;
    Ok(set.len() as isize - nb.len() as isize)
}

pub fn is_independent(g: &Graph, set: &VertexSet) -> bool {
    set.iter().all(|v| g.neighbors(v).iter().all(|&u| !set.contains(u)))
}

/// Open neighborhoods of every subset of `0..n`, indexed by bitmask.
fn subset_neighborhoods(masks: &[u64]) -> Vec<u64> {
    let n = masks.len();
    let mut nb = vec![0u64; 1usize << n];
    for s in 1..nb.len() {
        let low = (s as u64).trailing_zeros() as usize;
        nb[s] = nb[s & (s - 1)] | masks[low];
    }
    nb
}

/// `d(G)`: the maximum of `|X| - |N(X)|` over all vertex subsets.
pub fn critical_difference(g: &Graph) -> Result<isize> {
    let n = g.order();
    guard("critical difference", n, DEFAULT_SUBSET_LIMIT)?;
    let nb = subset_neighborhoods(&g.neighbor_masks());
    Ok(nb
        .iter()
        .enumerate()
        .map(|(s, &m)| (s as u64).count_ones() as isize - m.count_ones() as isize)
        .max()
        .unwrap_or(0))
}

/// Sorted-sequence lexicographic order on bitmasks.
fn lex_less(a: u64, b: u64) -> bool {
    if a == b {
        return false;
    }
    let low = (a ^ b).trailing_zeros();
    let above = !((2u64 << low).wrapping_sub(1));
    if a & (1u64 << low) != 0 {
        // `a` continues with `low`; `b` continues with something larger, or stops
        b & above != 0
    } else {
        a & above == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriticalWitnesses {
    pub maximum_independent: VertexSet,
    pub critical_independent: VertexSet,
    pub maximum_critical_independent: VertexSet,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriticalProfile {
    pub alpha: usize,
    /// Critical difference over all subsets.
    pub d: isize,
    /// Critical difference over independent sets.
    pub d_i: isize,
    pub ker: VertexSet,
    pub core: VertexSet,
    pub nucleus: VertexSet,
    pub diadem: VertexSet,
    pub corona: VertexSet,
    pub witnesses: CriticalWitnesses,
}

/// Full critical profile by enumeration of every subset and every
/// independent set.
pub fn critical_profile(g: &Graph) -> Result<CriticalProfile> {
    critical_profile_with_limit(g, DEFAULT_PROFILE_LIMIT)
}

pub fn critical_profile_with_limit(g: &Graph, limit: usize) -> Result<CriticalProfile> {
    let n = g.order();
    guard("critical profile", n, limit.min(PROFILE_HARD_LIMIT))?;
    let masks = g.neighbor_masks();
    let nb = subset_neighborhoods(&masks);
    let mut indep = vec![false; nb.len()];
    indep[0] = true;
    let mut d = isize::MIN;
    let mut d_i = isize::MIN;
    let mut alpha = 0usize;
    for s in 0..nb.len() {
        let size = (s as u64).count_ones() as usize;
        let diff = size as isize - nb[s].count_ones() as isize;
        d = d.max(diff);
        if s > 0 {
            let low = (s as u64).trailing_zeros() as usize;
            let rest = s & (s - 1);
            indep[s] = indep[rest] && masks[low] & (s as u64) == 0;
        }
        if indep[s] {
            d_i = d_i.max(diff);
            alpha = alpha.max(size);
        }
    }

    let all = full_mask(n);
    let mut ker = all;
    let mut diadem = 0u64;
    let mut core = all;
    let mut corona = 0u64;
    let mut max_crit_size = 0usize;
    let mut w_mis: Option<u64> = None;
    let mut w_crit: Option<u64> = None;
    for s in 0..nb.len() {
        if !indep[s] {
            continue;
        }
        let m = s as u64;
        let size = m.count_ones() as usize;
        if size == alpha {
            core &= m;
            corona |= m;
            if w_mis.is_none_or(|w| lex_less(m, w)) {
                w_mis = Some(m);
            }
        }
        if size as isize - nb[s].count_ones() as isize == d_i {
            ker &= m;
            diadem |= m;
            max_crit_size = max_crit_size.max(size);
            if w_crit.is_none_or(|w| lex_less(m, w)) {
                w_crit = Some(m);
            }
        }
    }
    let mut nucleus = all;
    let mut w_max_crit: Option<u64> = None;
    for s in 0..nb.len() {
        let m = s as u64;
        if indep[s]
            && m.count_ones() as usize == max_crit_size
            && m.count_ones() as isize - nb[s].count_ones() as isize == d_i
        {
            nucleus &= m;
            if w_max_crit.is_none_or(|w| lex_less(m, w)) {
                w_max_crit = Some(m);
            }
        }
    }
    Ok(CriticalProfile {
        alpha,
        d,
        d_i,
        ker: VertexSet::from_mask(ker),
        core: VertexSet::from_mask(core),
        nucleus: VertexSet::from_mask(nucleus),
        diadem: VertexSet::from_mask(diadem),
        corona: VertexSet::from_mask(corona),
        witnesses: CriticalWitnesses {
            maximum_independent: VertexSet::from_mask(w_mis.unwrap_or(0)),
            critical_independent: VertexSet::from_mask(w_crit.unwrap_or(0)),
            maximum_critical_independent: VertexSet::from_mask(w_max_crit.unwrap_or(0)),
        },
    })
}

/// Maximum matching of the bipartite graph formed by the `g`-edges between
/// `left` and `right` (Kuhn's augmenting paths). Returns the partner in
/// `right` of each member of `left`, in order.
pub(crate) fn bipartite_matching(g: &Graph, left: &[usize], right: &VertexSet) -> Vec<Option<usize>> {
    let n = g.order();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    let mut mate: Vec<Option<usize>> = vec![None; left.len()];
    let index: std::collections::HashMap<usize, usize> = left.iter().enumerate().map(|(i, &v)| (v, i)).collect();

    #[allow(clippy::too_many_arguments)]
    fn try_kuhn(
        g: &Graph,
        i: usize,
        left: &[usize],
        right: &VertexSet,
        seen: &mut [bool],
        owner: &mut [Option<usize>],
        mate: &mut [Option<usize>],
        index: &std::collections::HashMap<usize, usize>,
    ) -> bool {
        for &r in g.neighbors(left[i]) {
            if !right.contains(r) || seen[r] {
                continue;
            }
            seen[r] = true;
            let free = match owner[r] {
                None => true,
                Some(o) => try_kuhn(g, index[&o], left, right, seen, owner, mate, index),
            };
            if free {
                owner[r] = Some(left[i]);
                mate[i] = Some(r);
                return true;
            }
        }
        false
    }

    for i in 0..left.len() {
        let mut seen = vec![false; n];
        try_kuhn(g, i, left, right, &mut seen, &mut owner, &mut mate, &index);
    }
    mate
}

/// True when every vertex of `from` can be matched to a distinct neighbor
/// in `into` (Hall's condition from `from` into `into`).
pub fn matches_into(g: &Graph, from: &VertexSet, into: &VertexSet) -> bool {
    let left: Vec<usize> = from.iter().collect();
    bipartite_matching(g, &left, into).iter().all(Option::is_some)
}

/// The unique maximum `S ⊆ a_part` with `|N(S) ∩ i_part| = |S|`.
///
/// Requires Hall's condition from `a_part` into `i_part`. With an
/// `a_part`-saturating matching in hand, `S` is `a_part` minus everything
/// reachable by alternating paths from the unmatched vertices of `i_part`.
pub fn max_tight_set(g: &Graph, a_part: &VertexSet, i_part: &VertexSet) -> Result<VertexSet> {
    a_part.check_range(g.order())?;
    i_part.check_range(g.order())?;
    if !a_part.is_disjoint(i_part) {
        return Err(Error::HallViolated("the two parts intersect".into()));
    }
    let left: Vec<usize> = a_part.iter().collect();
    let mate = bipartite_matching(g, &left, i_part);
    if let Some(i) = mate.iter().position(Option::is_none) {
        return Err(Error::HallViolated(format!("vertex {} cannot be matched into the independent part", left[i])));
    }
    let mut owner = vec![None; g.order()];
    for (i, m) in mate.iter().enumerate() {
        owner[m.unwrap()] = Some(left[i]);
    }
    let mut reached = vec![false; g.order()];
    let mut stack: Vec<usize> = i_part.iter().filter(|&v| owner[v].is_none()).collect();
    while let Some(r) = stack.pop() {
        for &a in g.neighbors(r) {
            if a_part.contains(a) && !reached[a] {
                reached[a] = true;
                let i = left.binary_search(&a).unwrap();
                stack.push(mate[i].unwrap());
            }
        }
    }
    Ok(a_part.iter().filter(|&a| !reached[a]).collect())
}

/// For a critical independent set `I`: true iff `|S| < |N(S) ∩ I|` for every
/// nonempty `S ⊆ N(I)`, which characterizes `I = ker(G)`.
pub fn ker_hall_check(g: &Graph, i: &VertexSet) -> Result<bool> {
    let n = g.order();
    guard("ker Hall check", n, DEFAULT_SUBSET_LIMIT)?;
    i.check_range(n)?;
    if !is_independent(g, i) || difference(g, i)? != critical_difference(g)? {
        return Err(Error::NotCriticalIndependent);
    }
    let masks = g.neighbor_masks();
    let imask = i.to_mask();
    let nbrs: Vec<usize> = g.neighborhood(i, false)?.into_vec();
    let k = nbrs.len();
    for s in 1u64..(1u64 << k) {
        let mut hit = 0u64;
        for j in bits(s) {
            hit |= masks[nbrs[j]] & imask;
        }
        if s.count_ones() >= hit.count_ones() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn alpha_values() {
        assert_eq!(alpha(&fixtures::c5()).unwrap().0, 2);
        let (a, w) = alpha(&fixtures::bab9()).unwrap();
        assert_eq!(a, 4);
        assert!(is_independent(&fixtures::bab9(), &w));
        assert_eq!(w.len(), 4);
        assert_eq!(alpha(&Graph::empty(4)).unwrap(), (4, VertexSet::full(4)));
    }

    #[test]
    fn alpha_witness_is_lex_least() {
        // C5: {0,2} is the least of the five rotations
        assert_eq!(alpha(&fixtures::c5()).unwrap().1, [0, 2].into());
        assert_eq!(alpha(&fixtures::k13()).unwrap().1, [1, 2, 3].into());
    }

    #[test]
    fn alpha_guard() {
        let g = Graph::empty(49);
        assert!(matches!(alpha(&g), Err(Error::SizeGuard { .. })));
    }

    #[test]
    fn core_and_corona() {
        assert_eq!(core_corona(&fixtures::k13()).unwrap(), ([1, 2, 3].into(), [1, 2, 3].into()));
        assert_eq!(core_corona(&fixtures::c5()).unwrap(), (VertexSet::new(), VertexSet::full(5)));
        assert_eq!(core_corona(&fixtures::bab9()).unwrap(), (VertexSet::new(), VertexSet::full(9)));
    }

    #[test]
    fn profiles() {
        let k13 = critical_profile(&fixtures::k13()).unwrap();
        assert_eq!(k13.d, 2);
        assert_eq!(k13.ker, [1, 2, 3].into());
        assert_eq!(k13.nucleus, [1, 2, 3].into());
        assert_eq!(k13.diadem, [1, 2, 3].into());

        let c5 = critical_profile(&fixtures::c5()).unwrap();
        assert_eq!(c5.d, 0);
        assert!(c5.ker.is_empty() && c5.nucleus.is_empty() && c5.diadem.is_empty());

        let b = critical_profile(&fixtures::bab9()).unwrap();
        assert_eq!((b.alpha, b.d, b.d_i), (4, 0, 0));
        assert!(b.ker.is_empty() && b.core.is_empty());
        assert_eq!(b.nucleus, [6].into());
        assert_eq!(b.diadem, [6, 7, 8].into());
        assert_eq!(b.corona, VertexSet::full(9));
        assert_eq!(b.witnesses.critical_independent, VertexSet::new());
        assert_eq!(b.witnesses.maximum_critical_independent, [6, 7].into());
    }

    #[test]
    fn lex_order_on_masks() {
        let m = |v: &[usize]| VertexSet::from(v.to_vec()).to_mask();
        assert!(lex_less(m(&[0, 2]), m(&[0, 3])));
        assert!(lex_less(m(&[0]), m(&[0, 3])));
        assert!(lex_less(m(&[]), m(&[1])));
        assert!(lex_less(m(&[1, 5]), m(&[2])));
        assert!(!lex_less(m(&[2]), m(&[1, 5])));
        assert!(!lex_less(m(&[0, 3]), m(&[0])));
    }

    #[test]
    fn tight_sets() {
        let k13 = fixtures::k13();
        assert!(max_tight_set(&k13, &[0].into(), &[1, 2, 3].into()).unwrap().is_empty());
        assert_eq!(max_tight_set(&fixtures::bab9(), &[5].into(), &[6].into()).unwrap(), [5].into());
        assert!(max_tight_set(&fixtures::c5(), &VertexSet::new(), &[0, 2].into()).unwrap().is_empty());
        assert!(matches!(max_tight_set(&fixtures::p3(), &[0, 2].into(), &[1].into()), Err(Error::HallViolated(_))));
    }

    #[test]
    fn ker_hall() {
        assert!(ker_hall_check(&fixtures::k13(), &[1, 2, 3].into()).unwrap());
        assert!(ker_hall_check(&fixtures::bab9(), &VertexSet::new()).unwrap());
        assert!(!ker_hall_check(&fixtures::k2(), &[0].into()).unwrap());
        let two_stars = fixtures::k13().disjoint_union(&fixtures::k13());
        assert!(ker_hall_check(&two_stars, &[1, 2, 3, 5, 6, 7].into()).unwrap());
        assert_eq!(ker_hall_check(&two_stars, &[1, 2, 3].into()), Err(Error::NotCriticalIndependent));
    }
}
