//! Exact adjacency determinants and Sachs subgraphs.
//!
//! No floating point is used here. Determinants come from fraction-free
//! (Bareiss) elimination, first in `i128` and, on overflow, over `BigInt`.
//! The Sachs expansion sums `(-1)^(n-p) 2^c` over spanning subgraphs whose
//! components are single edges or cycles; `p` counts components and `c`
//! counts cycles. That sign is the sign of any permutation inducing the
//! subgraph, so the expansion equals the determinant exactly.

use std::ops::Neg;

use num_bigint::BigInt;
use num_traits::{CheckedDiv, CheckedMul, CheckedSub, One, Zero};
use serde::{Deserialize, Serialize};

use crate::bab::BabStructure;
use crate::error::{Error, Result};
use crate::graph::{Cycle, Graph, VertexSet};
use crate::independence::{critical_profile, DEFAULT_SUBSET_LIMIT};

pub type ExactInt = BigInt;

/// Default cap on the number of Sachs subgraphs enumerated.
pub const DEFAULT_SACHS_CAP: usize = 1_000_000;

/// JSON form of exact integers: a number when it fits in `i64`, otherwise a
/// decimal string.
pub mod exact_json {
    use super::ExactInt;
    use serde::ser::SerializeSeq;
    use serde::Serializer;

    pub fn value(x: &ExactInt) -> serde_json::Value {
        match i64::try_from(x) {
            Ok(v) => v.into(),
            Err(_) => x.to_string().into(),
        }
    }

    pub fn one<S: Serializer>(x: &ExactInt, s: S) -> Result<S::Ok, S::Error> {
        match i64::try_from(x) {
            Ok(v) => s.serialize_i64(v),
            Err(_) => s.serialize_str(&x.to_string()),
        }
    }

    pub fn many<S: Serializer>(xs: &[ExactInt], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for x in xs {
            seq.serialize_element(&value(x))?;
        }
        seq.end()
    }
}

fn bareiss<T>(mut a: Vec<Vec<T>>) -> Option<T>
where
    T: Clone + Zero + One + CheckedMul + CheckedSub + CheckedDiv + Neg<Output = T>,
{
    let n = a.len();
    if n == 0 {
        return Some(T::one());
    }
    let mut negate = false;
    let mut prev = T::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return Some(T::zero());
            };
            a.swap(k, p);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let lhs = a[i][j].checked_mul(&a[k][k])?;
                let rhs = a[i][k].checked_mul(&a[k][j])?;
                a[i][j] = lhs.checked_sub(&rhs)?.checked_div(&prev)?;
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    Some(if negate { -det } else { det })
}

fn adjacency_matrix<T: Zero + One + Clone>(g: &Graph) -> Vec<Vec<T>> {
    let n = g.order();
    let mut m = vec![vec![T::zero(); n]; n];
    for &(u, v) in g.edges() {
        m[u][v] = T::one();
        m[v][u] = T::one();
    }
    m
}

/// `det A(G)`, with `det` of the empty graph equal to 1.
pub fn adjacency_determinant(g: &Graph) -> ExactInt {
    match bareiss::<i128>(adjacency_matrix(g)) {
        Some(d) => BigInt::from(d),
        None => bareiss::<BigInt>(adjacency_matrix(g)).expect("BigInt elimination cannot overflow"),
    }
}

/// Spanning subgraph whose components are `K2`s and cycles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SachsSubgraph {
    /// `K2` components, by least vertex.
    pub k2_edges: Vec<(usize, usize)>,
    /// Cycle components, by least vertex.
    pub cycles: Vec<Cycle>,
}

impl SachsSubgraph {
    /// Number of components `p`.
    pub fn components(&self) -> usize {
        self.k2_edges.len() + self.cycles.len()
    }

    /// Number of cycle components `c`.
    pub fn cycle_count(&self) -> usize {
        self.cycles.len()
    }

    /// Sign of the permutations inducing this subgraph: `(-1)^(n-p)`.
    pub fn sign(&self, n: usize) -> i32 {
        if (n - self.components()).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Vertex sets of the components.
    pub fn component_sets(&self) -> Vec<VertexSet> {
        let mut out: Vec<VertexSet> = self
            .k2_edges
            .iter()
            .map(|&(u, v)| VertexSet::from([u, v]))
            .chain(self.cycles.iter().map(Cycle::vertex_set))
            .collect();
        out.sort();
        out
    }
}

struct SachsWalk<'g> {
    g: &'g Graph,
    covered: Vec<bool>,
    k2: Vec<(usize, usize)>,
    cycles: Vec<Cycle>,
    found: usize,
    cap: usize,
}

impl SachsWalk<'_> {
    /// Returns `Ok(true)` when the visitor asked to stop.
    fn cover<F: FnMut(&SachsSubgraph) -> bool>(&mut self, visit: &mut F) -> Result<bool> {
        let Some(v) = self.covered.iter().position(|&c| !c) else {
            self.found += 1;
            if self.found > self.cap {
                return Err(Error::CapExceeded { what: "Sachs subgraph enumeration", cap: self.cap });
            }
            let mut cycles = self.cycles.clone();
            cycles.sort_by_key(|c| c.vertices()[0]);
            let s = SachsSubgraph { k2_edges: self.k2.clone(), cycles };
            return Ok(visit(&s));
        };
        self.covered[v] = true;
        let nbrs: Vec<usize> = self.g.neighbors(v).iter().copied().filter(|&u| !self.covered[u]).collect();
        for &u in &nbrs {
            self.covered[u] = true;
            self.k2.push((v, u));
            let stop = self.cover(visit);
            self.k2.pop();
            self.covered[u] = false;
            if stop.as_ref().map_or(true, |&s| s) {
                self.covered[v] = false;
                return stop;
            }
        }
        let mut path = vec![v];
        let stop = self.cycles_from(v, &mut path, visit);
        self.covered[v] = false;
        stop
    }

    // Extends a path of uncovered vertices starting at `start`, closing a
    // cycle whenever possible (each cycle once: second vertex < last vertex).
    fn cycles_from<F: FnMut(&SachsSubgraph) -> bool>(
        &mut self,
        start: usize,
        path: &mut Vec<usize>,
        visit: &mut F,
    ) -> Result<bool> {
        let last = *path.last().unwrap();
        let nbrs: Vec<usize> = self.g.neighbors(last).to_vec();
        for w in nbrs {
            if w == start && path.len() >= 3 && path[1] < last {
                self.cycles.push(Cycle::new(path.clone()));
                let stop = self.cover(visit);
                self.cycles.pop();
                if stop? {
                    return Ok(true);
                }
                continue;
            }
            if self.covered[w] {
                continue;
            }
            self.covered[w] = true;
            path.push(w);
            let stop = self.cycles_from(start, path, visit);
            path.pop();
            self.covered[w] = false;
            if stop? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Visits every Sachs subgraph of `g` once; `visit` returns `true` to stop.
pub fn for_each_sachs<F>(g: &Graph, cap: usize, mut visit: F) -> Result<()>
where
    F: FnMut(&SachsSubgraph) -> bool,
{
    let mut walk = SachsWalk { g, covered: vec![false; g.order()], k2: Vec::new(), cycles: Vec::new(), found: 0, cap };
    walk.cover(&mut visit).map(|_| ())
}

/// All Sachs subgraphs, in the order the cover search produces them.
pub fn enumerate_sachs(g: &Graph, cap: usize) -> Result<Vec<SachsSubgraph>> {
    let mut out = Vec::new();
    for_each_sachs(g, cap, |s| {
        out.push(s.clone());
        false
    })?;
    Ok(out)
}

/// `Σ weight(S) · 2^c(S)` over the Sachs subgraphs of `g`.
pub fn sachs_weighted_sum<W>(g: &Graph, cap: usize, weight: W) -> Result<ExactInt>
where
    W: Fn(&SachsSubgraph) -> ExactInt,
{
    let mut total = BigInt::zero();
    for_each_sachs(g, cap, |s| {
        total += weight(s) << s.cycle_count();
        false
    })?;
    Ok(total)
}

/// Determinant through the Sachs expansion.
pub fn sachs_expansion(g: &Graph, cap: usize) -> Result<ExactInt> {
    let n = g.order();
    sachs_weighted_sum(g, cap, |s| BigInt::from(s.sign(n)))
}

/// Three independent answers to "does `g` have a Sachs subgraph?".
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SachsExistence {
    pub exists: bool,
    /// First Sachs subgraph found by the cover search.
    pub witness: Option<SachsSubgraph>,
    /// First `S` (by bitmask order) with `i(G - S) > |S|`, and that count.
    pub tutte_violation: Option<(VertexSet, usize)>,
    pub ker: VertexSet,
}

/// Decides Sachs existence by enumeration, by the isolated-vertex condition
/// over all `S ⊆ V`, and by `ker(G) = ∅`; errors if the routes disagree.
pub fn has_sachs_subgraph(g: &Graph) -> Result<SachsExistence> {
    let n = g.order();
    if n > DEFAULT_SUBSET_LIMIT {
        return Err(Error::SizeGuard { stage: "Sachs existence", n, limit: DEFAULT_SUBSET_LIMIT });
    }
    let mut witness = None;
    for_each_sachs(g, DEFAULT_SACHS_CAP, |s| {
        witness = Some(s.clone());
        true
    })?;
    let tutte_violation = isolated_vertex_violation(g);
    let ker = critical_profile(g)?.ker;
    let r1 = witness.is_some();
    let r2 = tutte_violation.is_none();
    let r3 = ker.is_empty();
    if r1 != r2 || r2 != r3 {
        return Err(Error::RoutesDisagree(format!(
            "Sachs existence: enumeration={r1}, isolated-vertex condition={r2}, empty ker={r3}"
        )));
    }
    Ok(SachsExistence { exists: r1, witness, tutte_violation, ker })
}

/// First `S` in bitmask order with `i(G - S) > |S|`.
pub fn isolated_vertex_violation(g: &Graph) -> Option<(VertexSet, usize)> {
    let n = g.order();
    assert!(n <= DEFAULT_SUBSET_LIMIT, "subset scan needs a small graph");
    let masks = g.neighbor_masks();
    (0u64..(1u64 << n)).find_map(|s| {
        let isolated = (0..n).filter(|&v| s & (1 << v) == 0 && masks[v] & !s == 0).count();
        (isolated > s.count_ones() as usize).then(|| (VertexSet::from_mask(s), isolated))
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DetFactorReport {
    #[serde(serialize_with = "exact_json::one")]
    pub det: ExactInt,
    #[serde(serialize_with = "exact_json::one")]
    pub det_b: ExactInt,
    #[serde(serialize_with = "exact_json::many")]
    pub det_parts: Vec<ExactInt>,
    #[serde(serialize_with = "exact_json::one")]
    pub product: ExactInt,
    pub factorizes: bool,
    /// Number of Sachs subgraphs inspected for crossing components, or
    /// `None` when the enumeration hit its cap.
    pub sachs_inspected: Option<usize>,
    /// Sachs components whose vertices span more than one block.
    pub crossing_components: usize,
}

impl DetFactorReport {
    pub fn holds(&self) -> bool {
        self.factorizes && self.crossing_components == 0
    }
}

/// Compares `det(G)` with `det(B) · Π det(G_i)` for a validated structure and
/// checks that no Sachs component crosses the block partition.
pub fn check_det_factorization(g: &Graph, s: &BabStructure) -> Result<DetFactorReport> {
    s.validate(g)?;
    let det = adjacency_determinant(g);
    let det_b = adjacency_determinant(&g.induced_subgraph(&s.b)?.0);
    let det_parts: Vec<ExactInt> =
        s.parts.iter().map(|p| g.induced_subgraph(p).map(|(h, _)| adjacency_determinant(&h))).collect::<Result<_>>()?;
    let product = det_parts.iter().fold(det_b.clone(), |acc, d| acc * d);
    let block = s.block_of(g.order());
    let mut crossing_components = 0;
    let mut inspected = 0;
    let walk = for_each_sachs(g, DEFAULT_SACHS_CAP, |h| {
        inspected += 1;
        for comp in h.component_sets() {
            let first = block[comp.as_slice()[0]];
            if comp.iter().any(|v| block[v] != first) {
                crossing_components += 1;
            }
        }
        false
    });
    let sachs_inspected = match walk {
        Ok(()) => Some(inspected),
        Err(e) if e.is_guard() => None,
        Err(e) => return Err(e),
    };
    Ok(DetFactorReport {
        factorizes: det == product,
        det,
        det_b,
        det_parts,
        product,
        sachs_inspected,
        crossing_components,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn det(g: &Graph) -> i64 {
        i64::try_from(adjacency_determinant(g)).unwrap()
    }

    #[test]
    fn fixture_determinants() {
        assert_eq!(det(&fixtures::k2()), -1);
        assert_eq!(det(&fixtures::c5()), 2);
        assert_eq!(det(&fixtures::c4()), 0);
        assert_eq!(det(&fixtures::p4()), 1);
        assert_eq!(det(&fixtures::k3()), 2);
        assert_eq!(det(&fixtures::bab9()), 2);
        assert_eq!(det(&fixtures::flower7()), -2);
        assert_eq!(det(&Graph::empty(0)), 1);
    }

    #[test]
    fn bigint_fallback_agrees() {
        let g = fixtures::bab9();
        let big = bareiss::<BigInt>(adjacency_matrix(&g)).unwrap();
        assert_eq!(big, adjacency_determinant(&g));
    }

    #[test]
    fn sachs_counts() {
        assert_eq!(enumerate_sachs(&fixtures::c4(), 100).unwrap().len(), 3);
        let f = enumerate_sachs(&fixtures::flower7(), 100).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].k2_edges, vec![(5, 6)]);
        assert_eq!(f[0].cycles, vec![Cycle::new(vec![0, 1, 2, 3, 4])]);
        assert!(enumerate_sachs(&fixtures::p3(), 100).unwrap().is_empty());
    }

    #[test]
    fn expansions() {
        assert_eq!(sachs_expansion(&fixtures::c4(), 100).unwrap(), BigInt::from(0));
        assert_eq!(sachs_expansion(&fixtures::k3(), 100).unwrap(), BigInt::from(2));
        let k3k2 = fixtures::k3().disjoint_union(&fixtures::k2());
        assert_eq!(sachs_expansion(&k3k2, 100).unwrap(), BigInt::from(-2));
        assert_eq!(det(&k3k2), -2);
    }

    #[test]
    fn weighted_sums() {
        let ones = sachs_weighted_sum(&fixtures::c4(), 100, |_| BigInt::from(1)).unwrap();
        assert_eq!(ones, BigInt::from(4));
        let p3 = sachs_weighted_sum(&fixtures::p3(), 100, |_| BigInt::from(7)).unwrap();
        assert_eq!(p3, BigInt::from(0));
        for name in fixtures::NAMES {
            let g = fixtures::by_name(name).unwrap();
            let n = g.order();
            let signed = sachs_weighted_sum(&g, 1000, |s| BigInt::from(s.sign(n))).unwrap();
            assert_eq!(signed, adjacency_determinant(&g), "{name}");
        }
    }

    #[test]
    fn sachs_existence_routes() {
        let c5 = has_sachs_subgraph(&fixtures::c5()).unwrap();
        assert!(c5.exists);
        assert_eq!(c5.witness.unwrap().cycles, vec![Cycle::new(vec![0, 1, 2, 3, 4])]);

        let k13 = has_sachs_subgraph(&fixtures::k13()).unwrap();
        assert!(!k13.exists);
        assert_eq!(k13.tutte_violation, Some(([0].into(), 3)));

        let k1 = has_sachs_subgraph(&fixtures::k1()).unwrap();
        assert!(!k1.exists);
        assert_eq!(k1.tutte_violation, Some((VertexSet::new(), 1)));
    }

    #[test]
    fn sachs_cap() {
        assert!(matches!(enumerate_sachs(&fixtures::c4(), 2), Err(Error::CapExceeded { .. })));
    }
}
