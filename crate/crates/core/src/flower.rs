//! Flower and posy certificates for non-König–Egerváry graphs.
//!
//! Relative to a matching `M`, a blossom is an odd cycle of length `2k+1`
//! carrying exactly `k` edges of `M`; its base is the one cycle vertex not
//! covered by those edges. A flower adds an even alternating stem from the
//! base to an exposed root. A posy joins the bases of two blossoms by an
//! alternating path that starts and ends with matched edges. The blossoms may
//! overlap (K4 needs that); the path interior avoids both.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Cycle, CycleList, Graph, DEFAULT_CYCLE_CAP};
use crate::matching::{ensure_maximum, Matching};

/// Cap on the number of alternating-path search steps per query.
pub const DEFAULT_PATH_STEP_CAP: usize = 5_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlowerCert {
    pub blossom: Cycle,
    pub base: usize,
    /// Vertex sequence from `base` to `root`; `[base]` for an empty stem.
    pub stem: Vec<usize>,
    pub root: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosyCert {
    pub blossom_a: Cycle,
    pub blossom_b: Cycle,
    /// Vertex sequence from the base of `blossom_a` to the base of `blossom_b`.
    pub path: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Certificate {
    Flower(FlowerCert),
    Posy(PosyCert),
}

/// Base of `cycle` as an `m`-blossom, or `None` if it is not one.
pub fn blossom_base(cycle: &Cycle, m: &Matching) -> Option<usize> {
    if !cycle.is_odd() {
        return None;
    }
    let matched = cycle.edges().filter(|&(u, v)| m.contains(u, v)).count();
    if matched != cycle.len() / 2 {
        return None;
    }
    let verts = cycle.vertices();
    let len = verts.len();
    (0..len)
        .find(|&i| {
            let v = verts[i];
            !m.contains(v, verts[(i + 1) % len]) && !m.contains(v, verts[(i + len - 1) % len])
        })
        .map(|i| verts[i])
}

/// Kind of an alternating path by its first and last edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum PathClass {
    MM,
    NN,
    MN,
    NM,
}

/// Classifies a path of at least one edge, or `None` if it does not
/// alternate with respect to `m` (or uses a non-edge).
pub(crate) fn classify_path(g: &Graph, m: &Matching, path: &[usize]) -> Option<PathClass> {
    if path.len() < 2 {
        return None;
    }
    let flags: Vec<bool> = path.windows(2).map(|w| m.contains(w[0], w[1])).collect();
    if path.windows(2).any(|w| !g.has_edge(w[0], w[1])) || flags.windows(2).any(|f| f[0] == f[1]) {
        return None;
    }
    Some(match (flags[0], flags[flags.len() - 1]) {
        (true, true) => PathClass::MM,
        (false, false) => PathClass::NN,
        (true, false) => PathClass::MN,
        (false, true) => PathClass::NM,
    })
}

fn simple(path: &[usize]) -> bool {
    let mut v = path.to_vec();
    v.sort_unstable();
    v.windows(2).all(|w| w[0] != w[1])
}

impl FlowerCert {
    /// Re-checks every flower invariant against `g` and `m`.
    pub fn validate(&self, g: &Graph, m: &Matching) -> std::result::Result<(), String> {
        if !self.blossom.is_cycle_of(g) {
            return Err("blossom is not a cycle of the graph".into());
        }
        if blossom_base(&self.blossom, m) != Some(self.base) {
            return Err("blossom/base mismatch".into());
        }
        if self.stem.first() != Some(&self.base) || self.stem.last() != Some(&self.root) {
            return Err("stem must run from base to root".into());
        }
        if !m.is_exposed(self.root) {
            return Err("root is matched".into());
        }
        if !simple(&self.stem) {
            return Err("stem repeats a vertex".into());
        }
        if self.stem[1..].iter().any(|&v| self.blossom.vertex_set().contains(v)) {
            return Err("stem meets the blossom away from the base".into());
        }
        if self.stem.len() > 1 {
            if !(self.stem.len() - 1).is_multiple_of(2) {
                return Err("stem has odd length".into());
            }
            if classify_path(g, m, &self.stem) != Some(PathClass::MN) {
                return Err("stem is not alternating from a matched edge at the base".into());
            }
        }
        Ok(())
    }
}

impl PosyCert {
    pub fn validate(&self, g: &Graph, m: &Matching) -> std::result::Result<(), String> {
        for c in [&self.blossom_a, &self.blossom_b] {
            if !c.is_cycle_of(g) {
                return Err("blossom is not a cycle of the graph".into());
            }
        }
        let a = self.blossom_a.vertex_set();
        let b = self.blossom_b.vertex_set();
        let (Some(ba), Some(bb)) = (blossom_base(&self.blossom_a, m), blossom_base(&self.blossom_b, m)) else {
            return Err("a cycle is not an M-blossom".into());
        };
        if self.path.first() != Some(&ba) || self.path.last() != Some(&bb) {
            return Err("path endpoints are not the bases".into());
        }
        if !simple(&self.path) {
            return Err("path repeats a vertex".into());
        }
        let inner = &self.path[1..self.path.len() - 1];
        if inner.iter().any(|&v| a.contains(v) || b.contains(v)) {
            return Err("internal path vertex inside a blossom".into());
        }
        if classify_path(g, m, &self.path) != Some(PathClass::MM) {
            return Err("path is not an mm-alternating path".into());
        }
        Ok(())
    }
}

impl Certificate {
    pub fn validate(&self, g: &Graph, m: &Matching) -> std::result::Result<(), String> {
        match self {
            Certificate::Flower(f) => f.validate(g, m),
            Certificate::Posy(p) => p.validate(g, m),
        }
    }
}

/// Depth-first alternating path search with a step budget.
pub(crate) struct AltSearch<'a> {
    g: &'a Graph,
    m: &'a Matching,
    blocked: Vec<bool>,
    steps: usize,
    cap: usize,
}

impl<'a> AltSearch<'a> {
    pub(crate) fn new(g: &'a Graph, m: &'a Matching, cap: usize) -> Self {
        AltSearch { g, m, blocked: vec![false; g.order()], steps: 0, cap }
    }

    fn tick(&mut self) -> Result<()> {
        self.steps += 1;
        if self.steps > self.cap {
            return Err(Error::CapExceeded { what: "alternating path search", cap: self.cap });
        }
        Ok(())
    }

    /// Calls `on_stem` with every even alternating path that leaves `base`
    /// along its matched edge and ends at an exposed vertex, avoiding the
    /// `forbidden` vertices. Paths are produced in lexicographic order;
    /// the callback returns `true` to stop.
    pub(crate) fn stems<F>(&mut self, base: usize, forbidden: &[usize], on_stem: &mut F) -> Result<bool>
    where
        F: FnMut(&[usize]) -> bool,
    {
        let first = self.m.partner(base);
        if first == base {
            return Ok(false);
        }
        self.blocked.iter_mut().for_each(|b| *b = false);
        for &f in forbidden {
            self.blocked[f] = true;
        }
        if self.blocked[first] {
            return Ok(false);
        }
        self.blocked[base] = true;
        self.blocked[first] = true;
        let mut path = vec![base, first];
        self.extend_stem(&mut path, on_stem)
    }

    // `path` ends at a vertex entered along a matched edge.
    fn extend_stem<F>(&mut self, path: &mut Vec<usize>, on_stem: &mut F) -> Result<bool>
    where
        F: FnMut(&[usize]) -> bool,
    {
        let v = *path.last().unwrap();
        for &w in self.g.neighbors(v) {
            self.tick()?;
            if self.blocked[w] || self.m.contains(v, w) {
                continue;
            }
            if self.m.is_exposed(w) {
                path.push(w);
                let stop = on_stem(path);
                path.pop();
                if stop {
                    return Ok(true);
                }
                continue;
            }
            let x = self.m.partner(w);
            if self.blocked[x] {
                continue;
            }
            self.blocked[w] = true;
            self.blocked[x] = true;
            path.push(w);
            path.push(x);
            let stop = self.extend_stem(path, on_stem)?;
            path.pop();
            path.pop();
            self.blocked[w] = false;
            self.blocked[x] = false;
            if stop {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Lexicographically least mm-alternating path from `from` to `to` whose
    /// internal vertices avoid `forbidden`.
    pub(crate) fn mm_path(&mut self, from: usize, to: usize, forbidden: &[usize]) -> Result<Option<Vec<usize>>> {
        let first = self.m.partner(from);
        if first == from {
            return Ok(None);
        }
        if first == to {
            return Ok(Some(vec![from, to]));
        }
        self.blocked.iter_mut().for_each(|b| *b = false);
        for &f in forbidden {
            self.blocked[f] = true;
        }
        if self.blocked[first] {
            return Ok(None);
        }
        self.blocked[from] = true;
        self.blocked[first] = true;
        let mut path = vec![from, first];
        Ok(self.extend_mm(&mut path, to)?.then_some(path))
    }

    fn extend_mm(&mut self, path: &mut Vec<usize>, to: usize) -> Result<bool> {
        let v = *path.last().unwrap();
        for &w in self.g.neighbors(v) {
            self.tick()?;
            if self.blocked[w] || self.m.contains(v, w) || self.m.is_exposed(w) {
                continue;
            }
            let x = self.m.partner(w);
            if x == to {
                path.push(w);
                path.push(x);
                return Ok(true);
            }
            if self.blocked[x] {
                continue;
            }
            self.blocked[w] = true;
            self.blocked[x] = true;
            path.push(w);
            path.push(x);
            if self.extend_mm(path, to)? {
                return Ok(true);
            }
            path.pop();
            path.pop();
            self.blocked[w] = false;
            self.blocked[x] = false;
        }
        Ok(false)
    }
}

/// Searches for an `m`-flower, then an `m`-posy, over the given odd cycles.
/// Returns the first certificate in canonical order (cycles by length then
/// sequence, stems and paths lexicographically).
pub fn certificate_for_cycles(
    g: &Graph,
    m: &Matching,
    cycles: &CycleList,
    step_cap: usize,
) -> Result<Option<Certificate>> {
    let blossoms: Vec<(&Cycle, usize)> =
        cycles.cycles.iter().filter_map(|c| blossom_base(c, m).map(|b| (c, b))).collect();
    let mut search = AltSearch::new(g, m, step_cap);
    for &(c, base) in &blossoms {
        if m.is_exposed(base) {
            return Ok(Some(Certificate::Flower(FlowerCert {
                blossom: c.clone(),
                base,
                stem: vec![base],
                root: base,
            })));
        }
        let mut found = None;
        search.stems(base, c.vertices(), &mut |p| {
            found = Some(p.to_vec());
            true
        })?;
        if let Some(stem) = found {
            let root = *stem.last().unwrap();
            return Ok(Some(Certificate::Flower(FlowerCert { blossom: c.clone(), base, stem, root })));
        }
    }
    for (i, &(ca, ba)) in blossoms.iter().enumerate() {
        for &(cb, bb) in &blossoms[i + 1..] {
            if ba == bb {
                continue;
            }
            let forbidden: Vec<usize> = ca.vertices().iter().chain(cb.vertices()).copied().collect();
            if let Some(path) = search.mm_path(ba, bb, &forbidden)? {
                return Ok(Some(Certificate::Posy(PosyCert { blossom_a: ca.clone(), blossom_b: cb.clone(), path })));
            }
        }
    }
    Ok(None)
}

/// Sterboul's test relative to a maximum matching: a flower if one exists,
/// else a posy, else `None`.
pub fn sterboul_certificate(g: &Graph, m: &Matching) -> Result<Option<Certificate>> {
    ensure_maximum(g, m)?;
    let cycles = g.enumerate_odd_cycles(DEFAULT_CYCLE_CAP)?;
    certificate_for_cycles(g, m, &cycles, DEFAULT_PATH_STEP_CAP)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn flower(c: Certificate) -> FlowerCert {
        match c {
            Certificate::Flower(f) => f,
            other => panic!("expected flower, got {other:?}"),
        }
    }

    #[test]
    fn c5_empty_stem_flower() {
        let g = fixtures::c5();
        let m = Matching::from_edges(&g, [(1, 2), (3, 4)]).unwrap();
        let f = flower(sterboul_certificate(&g, &m).unwrap().unwrap());
        assert_eq!(f.blossom, Cycle::new(vec![0, 1, 2, 3, 4]));
        assert_eq!((f.base, f.root), (0, 0));
        assert_eq!(f.stem, vec![0]);
        f.validate(&g, &m).unwrap();
    }

    #[test]
    fn flower7_stem() {
        let g = fixtures::flower7();
        let m = Matching::from_edges(&g, [(0, 5), (1, 2), (3, 4)]).unwrap();
        let f = flower(sterboul_certificate(&g, &m).unwrap().unwrap());
        assert_eq!(f.base, 0);
        assert_eq!(f.stem, vec![0, 5, 6]);
        assert_eq!(f.root, 6);
        f.validate(&g, &m).unwrap();
    }

    #[test]
    fn dumbbell_posy() {
        let g = fixtures::dumbbell6();
        let m = Matching::from_edges(&g, [(1, 2), (4, 5), (0, 3)]).unwrap();
        match sterboul_certificate(&g, &m).unwrap().unwrap() {
            Certificate::Posy(p) => {
                assert_eq!(p.blossom_a.vertex_set(), [0, 1, 2].into());
                assert_eq!(p.blossom_b.vertex_set(), [3, 4, 5].into());
                assert_eq!(p.path, vec![0, 3]);
                p.validate(&g, &m).unwrap();
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn k4_posy_with_overlapping_blossoms() {
        let g = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let m = Matching::from_edges(&g, [(0, 1), (2, 3)]).unwrap();
        let Some(Certificate::Posy(p)) = sterboul_certificate(&g, &m).unwrap() else {
            panic!("expected a posy");
        };
        p.validate(&g, &m).unwrap();
        assert!(!p.blossom_a.vertex_set().is_disjoint(&p.blossom_b.vertex_set()));
    }

    #[test]
    fn ke_graphs_have_no_certificate() {
        let g = fixtures::c4();
        let m = Matching::from_edges(&g, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(sterboul_certificate(&g, &m).unwrap(), None);
    }

    #[test]
    fn refuses_non_maximum_matching() {
        let g = fixtures::c5();
        let m = Matching::from_edges(&g, [(1, 2)]).unwrap();
        assert_eq!(sterboul_certificate(&g, &m), Err(Error::NotMaximum));
    }

    #[test]
    fn validator_rejects_broken_certificates() {
        let g = fixtures::flower7();
        let m = Matching::from_edges(&g, [(0, 5), (1, 2), (3, 4)]).unwrap();
        let good = FlowerCert { blossom: Cycle::new(vec![0, 1, 2, 3, 4]), base: 0, stem: vec![0, 5, 6], root: 6 };
        good.validate(&g, &m).unwrap();
        let wrong_base = FlowerCert { base: 1, ..good.clone() };
        assert!(wrong_base.validate(&g, &m).is_err());
        let odd_stem = FlowerCert { stem: vec![0, 5], root: 5, ..good.clone() };
        assert!(odd_stem.validate(&g, &m).is_err());
    }

    #[test]
    fn path_classes() {
        let g = fixtures::p4();
        let m = Matching::from_edges(&g, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(classify_path(&g, &m, &[0, 1, 2, 3]), Some(PathClass::MM));
        assert_eq!(classify_path(&g, &m, &[1, 2]), Some(PathClass::NN));
        assert_eq!(classify_path(&g, &m, &[0, 1, 2]), Some(PathClass::MN));
        assert_eq!(classify_path(&g, &m, &[1, 2, 3]), Some(PathClass::NM));
        assert_eq!(classify_path(&g, &m, &[0, 2]), None);
    }
}
