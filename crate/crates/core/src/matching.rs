//! Maximum matchings in general graphs.
//!
//! The search is Edmonds' blossom algorithm in its label/base-array form:
//! an alternating BFS from one exposed root at a time, where odd cycles are
//! shrunk by re-pointing `base` rather than by building a contracted graph.
//! Every routine accepts an `alive` mask so that `mu(G - v)` and friends can
//! be computed without copying the graph.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

/// Default cap for [`all_maximum_matchings`].
pub const DEFAULT_MATCHING_CAP: usize = 200_000;

/// A matching seen as an involution: `partner(v) == v` for exposed vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "Vec<(usize, usize)>")]
pub struct Matching {
    mate: Vec<usize>,
}

impl From<Matching> for Vec<(usize, usize)> {
    fn from(m: Matching) -> Self {
        m.edges()
    }
}

impl Matching {
    pub fn empty(n: usize) -> Self {
        Matching { mate: (0..n).collect() }
    }

    /// Builds a matching of `g` from an edge list, checking that each edge
    /// exists and that the edges are pairwise disjoint.
    pub fn from_edges<I>(g: &Graph, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut m = Matching::empty(g.order());
        for (u, v) in edges {
            if !g.has_edge(u, v) {
                return Err(Error::InvalidMatching(format!("{u}-{v} is not an edge")));
            }
            if !m.is_exposed(u) || !m.is_exposed(v) {
                return Err(Error::InvalidMatching(format!("{u}-{v} shares an endpoint")));
            }
            m.mate[u] = v;
            m.mate[v] = u;
        }
        Ok(m)
    }

    pub fn order(&self) -> usize {
        self.mate.len()
    }

    /// `M(v)`.
    pub fn partner(&self, v: usize) -> usize {
        self.mate[v]
    }

    pub fn is_exposed(&self, v: usize) -> bool {
        self.mate[v] == v
    }

    pub fn contains(&self, u: usize, v: usize) -> bool {
        u != v && self.mate[u] == v
    }

    /// `|M|`.
    pub fn size(&self) -> usize {
        self.mate.iter().enumerate().filter(|&(v, &u)| v < u).count()
    }

    /// Vertices with `M(v) = v`.
    pub fn exposed(&self) -> VertexSet {
        (0..self.mate.len()).filter(|&v| self.is_exposed(v)).collect()
    }

    /// Number of exposed vertices, `n - 2|M|`.
    pub fn deficiency(&self) -> usize {
        self.mate.len() - 2 * self.size()
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.mate.iter().enumerate().filter(|&(v, &u)| v < u).map(|(v, &u)| (v, u)).collect()
    }

    /// Checks the involution against `g`.
    pub fn is_matching_of(&self, g: &Graph) -> bool {
        self.mate.len() == g.order()
            && self.mate.iter().enumerate().all(|(v, &u)| u == v || (self.mate[u] == v && g.has_edge(u, v)))
    }
}

struct Blossom<'g> {
    g: &'g Graph,
    alive: &'g [bool],
    mate: Vec<usize>,
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    in_blossom: Vec<bool>,
    queue: VecDeque<usize>,
}

const NONE: usize = usize::MAX;

impl<'g> Blossom<'g> {
    fn new(g: &'g Graph, alive: &'g [bool], mate: Vec<usize>) -> Self {
        let n = g.order();
        Blossom {
            g,
            alive,
            mate,
            parent: vec![NONE; n],
            base: (0..n).collect(),
            used: vec![false; n],
            in_blossom: vec![false; n],
            queue: VecDeque::new(),
        }
    }

    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        let mut seen = vec![false; self.g.order()];
        loop {
            a = self.base[a];
            seen[a] = true;
            if self.mate[a] == NONE {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[self.mate[v]]] = true;
            self.parent[v] = child;
            child = self.mate[v];
            v = self.parent[self.mate[v]];
        }
    }

    /// Alternating BFS from `root`; returns the exposed endpoint of an
    /// augmenting path, with `parent` describing the path.
    fn find_path(&mut self, root: usize) -> Option<usize> {
        let n = self.g.order();
        self.used.iter_mut().for_each(|x| *x = false);
        self.parent.iter_mut().for_each(|x| *x = NONE);
        for i in 0..n {
            self.base[i] = i;
        }
        self.used[root] = true;
        self.queue.clear();
        self.queue.push_back(root);
        while let Some(v) = self.queue.pop_front() {
            for &to in self.g.neighbors(v) {
                if !self.alive[to] || self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if to == root || (self.mate[to] != NONE && self.parent[self.mate[to]] != NONE) {
                    let cur = self.lca(v, to);
                    self.in_blossom.iter_mut().for_each(|x| *x = false);
                    self.mark_path(v, cur, to);
                    self.mark_path(to, cur, v);
                    for i in 0..n {
                        if self.alive[i] && self.in_blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                self.queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if self.mate[to] == NONE {
                        return Some(to);
                    }
                    let next = self.mate[to];
                    self.used[next] = true;
                    self.queue.push_back(next);
                }
            }
        }
        None
    }

    fn augment(&mut self, mut v: usize) {
        while v != NONE {
            let pv = self.parent[v];
            let ppv = self.mate[pv];
            self.mate[v] = pv;
            self.mate[pv] = v;
            v = ppv;
        }
    }

    fn run(&mut self) {
        let n = self.g.order();
        // greedy start
        for v in 0..n {
            if !self.alive[v] || self.mate[v] != NONE {
                continue;
            }
            if let Some(&u) = self.g.neighbors(v).iter().find(|&&u| self.alive[u] && self.mate[u] == NONE) {
                self.mate[v] = u;
                self.mate[u] = v;
            }
        }
        for v in 0..n {
            if self.alive[v] && self.mate[v] == NONE {
                if let Some(end) = self.find_path(v) {
                    self.augment(end);
                }
            }
        }
    }
}

fn to_none_form(m: &Matching) -> Vec<usize> {
    m.mate.iter().enumerate().map(|(v, &u)| if u == v { NONE } else { u }).collect()
}

fn from_none_form(mate: Vec<usize>) -> Matching {
    Matching { mate: mate.into_iter().enumerate().map(|(v, u)| if u == NONE { v } else { u }).collect() }
}

/// A maximum matching of the subgraph induced by the live vertices.
pub(crate) fn maximum_matching_alive(g: &Graph, alive: &[bool]) -> Matching {
    let mut b = Blossom::new(g, alive, vec![NONE; g.order()]);
    b.run();
    from_none_form(b.mate)
}

/// `mu` of the subgraph induced by the live vertices.
pub(crate) fn matching_number_alive(g: &Graph, alive: &[bool]) -> usize {
    maximum_matching_alive(g, alive).size()
}

/// A maximum matching of `g`.
pub fn maximum_matching(g: &Graph) -> Matching {
    let alive = vec![true; g.order()];
    maximum_matching_alive(g, &alive)
}

/// `mu(G)`.
pub fn matching_number(g: &Graph) -> usize {
    maximum_matching(g).size()
}

/// `def(G) = |G| - 2 mu(G)`.
pub fn deficiency(g: &Graph) -> usize {
    g.order() - 2 * matching_number(g)
}

/// True if some `M`-augmenting path exists, i.e. `m` is not maximum.
pub fn has_augmenting_path(g: &Graph, m: &Matching) -> bool {
    let alive = vec![true; g.order()];
    let mut b = Blossom::new(g, &alive, to_none_form(m));
    (0..g.order()).any(|v| b.mate[v] == NONE && b.find_path(v).is_some())
}

/// Errors unless `m` is a matching of `g` admitting no augmenting path.
pub fn ensure_maximum(g: &Graph, m: &Matching) -> Result<()> {
    if !m.is_matching_of(g) {
        return Err(Error::InvalidMatching("not a matching of this graph".into()));
    }
    if has_augmenting_path(g, m) {
        return Err(Error::NotMaximum);
    }
    Ok(())
}

/// Every maximum matching of `g` exactly once, sorted by edge list.
///
/// Branches on the least undecided vertex (matched to each live neighbor, or
/// left exposed) and prunes any branch whose remaining graph cannot reach
/// `mu(G)`.
pub fn all_maximum_matchings(g: &Graph, cap: usize) -> Result<Vec<Matching>> {
    let n = g.order();
    let target = matching_number(g);
    let mut alive = vec![true; n];
    let mut chosen = Vec::new();
    let mut out = Vec::new();
    enumerate(g, target, &mut alive, &mut chosen, n - 2 * target, &mut out, cap)?;
    let mut ms: Vec<Matching> = out
        .into_iter()
        .map(|edges: Vec<(usize, usize)>| Matching::from_edges(g, edges).expect("enumerated edges form a matching"))
        .collect();
    ms.sort_by_key(|m| m.edges());
    Ok(ms)
}

fn enumerate(
    g: &Graph,
    target: usize,
    alive: &mut [bool],
    chosen: &mut Vec<(usize, usize)>,
    exposed_budget: usize,
    out: &mut Vec<Vec<(usize, usize)>>,
    cap: usize,
) -> Result<()> {
    if chosen.len() == target {
        out.push(chosen.clone());
        if out.len() > cap {
            return Err(Error::CapExceeded { what: "maximum matching enumeration", cap });
        }
        return Ok(());
    }
    if chosen.len() + matching_number_alive(g, alive) < target {
        return Ok(());
    }
    let Some(v) = alive.iter().position(|&a| a) else {
        return Ok(());
    };
    alive[v] = false;
    let nbrs: Vec<usize> = g.neighbors(v).iter().copied().filter(|&u| alive[u]).collect();
    for u in nbrs {
        alive[u] = false;
        chosen.push((v, u));
        let r = enumerate(g, target, alive, chosen, exposed_budget, out, cap);
        chosen.pop();
        alive[u] = true;
        if r.is_err() {
            alive[v] = true;
            return r;
        }
    }
    let r = if exposed_budget > 0 { enumerate(g, target, alive, chosen, exposed_budget - 1, out, cap) } else { Ok(()) };
    alive[v] = true;
    r
}
