//! Gallai–Edmonds decomposition and the refinement of `D` into its isolated
//! part `X` and the rest `Y`.

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, VertexSet};
use crate::matching::{matching_number, matching_number_alive, Matching};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeDecomposition {
    /// Vertices missed by some maximum matching.
    pub d: VertexSet,
    /// `N(D) - D`.
    pub a: VertexSet,
    /// Everything else.
    pub c: VertexSet,
    /// Components of `G[D]`, by least vertex.
    pub components_of_d: Vec<VertexSet>,
    /// Isolated vertices of `G[D]`.
    pub x: VertexSet,
    /// `D - X`.
    pub y: VertexSet,
    /// Bipartition of `G[C]` in host indices, when `G[C]` is bipartite.
    pub c_bipartition: Option<(VertexSet, VertexSet)>,
}

/// Computes the decomposition with `n + 1` maximum-matching calls.
pub fn gallai_edmonds(g: &Graph) -> GeDecomposition {
    let n = g.order();
    let mu = matching_number(g);
    let mut alive = vec![true; n];
    let d: VertexSet = (0..n)
        .filter(|&v| {
            alive[v] = false;
            let keep = matching_number_alive(g, &alive) == mu;
            alive[v] = true;
            keep
        })
        .collect();
    from_d(g, d)
}

/// Derives `A`, `C`, `X`, `Y` and the components from a given `D`.
pub(crate) fn from_d(g: &Graph, d: VertexSet) -> GeDecomposition {
    let n = g.order();
    let a = g.neighborhood(&d, false).expect("D is in range").difference(&d);
    let c: VertexSet = (0..n).filter(|&v| !d.contains(v) && !a.contains(v)).collect();
    let (gd, map) = g.induced_subgraph(&d).expect("D is in range");
    let components_of_d: Vec<VertexSet> = gd.components().0.iter().map(|comp| comp.map(&map)).collect();
    let x: VertexSet = components_of_d.iter().filter(|comp| comp.len() == 1).flat_map(|comp| comp.iter()).collect();
    let y = d.difference(&x);
    let (gc, cmap) = g.induced_subgraph(&c).expect("C is in range");
    let c_bipartition = gc.bipartition().map(|(u, w)| (u.map(&cmap), w.map(&cmap)));
    GeDecomposition { d, a, c, components_of_d, x, y, c_bipartition }
}

/// `G - v` has a perfect matching for every `v`.
pub fn is_factor_critical(g: &Graph) -> bool {
    let n = g.order();
    if n.is_multiple_of(2) {
        return false;
    }
    let mut alive = vec![true; n];
    (0..n).all(|v| {
        alive[v] = false;
        let ok = matching_number_alive(g, &alive) == (n - 1) / 2;
        alive[v] = true;
        ok
    })
}

/// Checks the structure theorem's matching clauses for `dec` against a
/// maximum matching `m`. Returns the list of violations (empty when valid).
pub fn validate_ge(g: &Graph, dec: &GeDecomposition, m: &Matching) -> Vec<String> {
    let mut out = Vec::new();
    let n = g.order();
    let mut part = vec![0u8; n];
    for v in dec.d.iter() {
        part[v] |= 1;
    }
    for v in dec.a.iter() {
        part[v] |= 2;
    }
    for v in dec.c.iter() {
        part[v] |= 4;
    }
    if let Some(v) = (0..n).find(|&v| part[v].count_ones() != 1) {
        out.push(format!("D, A, C do not partition V (vertex {v})"));
        return out;
    }
    if m.order() != n || !m.is_matching_of(g) {
        out.push("M is not a matching of G".into());
        return out;
    }
    for v in dec.c.iter() {
        if m.is_exposed(v) {
            out.push(format!("C-vertex {v} is not covered by M"));
        }
    }
    let mut comp_of = vec![usize::MAX; n];
    for (i, comp) in dec.components_of_d.iter().enumerate() {
        for v in comp.iter() {
            comp_of[v] = i;
        }
    }
    let mut hit = vec![false; dec.components_of_d.len()];
    for v in dec.a.iter() {
        let u = m.partner(v);
        if u == v || !dec.d.contains(u) {
            out.push(format!("A-vertex {v} is not matched into D"));
            continue;
        }
        let ci = comp_of[u];
        if ci == usize::MAX {
            out.push(format!("A-vertex {v} matched to {u}, which lies in no listed D-component"));
        } else if std::mem::replace(&mut hit[ci], true) {
            out.push(format!("two A-vertices are matched into D-component {ci}"));
        }
    }
    for (i, comp) in dec.components_of_d.iter().enumerate() {
        let inside = comp.iter().filter(|&v| {
            let u = m.partner(v);
            u != v && comp.contains(u)
        });
        if inside.count() != comp.len() - 1 {
            out.push(format!("M restricted to D-component {i} is not near-perfect"));
        }
    }
    out
}
