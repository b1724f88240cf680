//! Simple undirected graphs on dense vertex indices `0..n`.
//!
//! A [`Graph`] is immutable once built. Every set-valued result is a
//! [`VertexSet`], which is kept sorted and deduplicated so that equality is
//! structural.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap for [`Graph::enumerate_odd_cycles`], counted over all simple
/// cycles visited (of either parity).
pub const DEFAULT_CYCLE_CAP: usize = 1_000_000;

/// Sorted list of distinct vertex indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new() -> Self {
        VertexSet(Vec::new())
    }

    /// `{0, 1, .., n-1}`.
    pub fn full(n: usize) -> Self {
        VertexSet((0..n).collect())
    }

    pub fn from_mask(mask: u64) -> Self {
        let mut out = Vec::with_capacity(mask.count_ones() as usize);
        let mut m = mask;
        while m != 0 {
            out.push(m.trailing_zeros() as usize);
            m &= m - 1;
        }
        VertexSet(out)
    }

    /// Bitmask form. Only meaningful when every member is below 64.
    pub fn to_mask(&self) -> u64 {
        self.0.iter().fold(0u64, |m, &v| m | (1u64 << v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn insert(&mut self, v: usize) {
        if let Err(pos) = self.0.binary_search(&v) {
            self.0.insert(pos, v);
        }
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        self.iter().chain(other.iter()).collect()
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.iter().filter(|&v| other.contains(v)).collect())
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.iter().filter(|&v| !other.contains(v)).collect())
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| other.contains(v))
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| !other.contains(v))
    }

    /// Fails if any member is `>= n`.
    pub fn check_range(&self, n: usize) -> Result<()> {
        match self.0.last() {
            Some(&v) if v >= n => Err(Error::VertexOutOfRange { vertex: v, n }),
            _ => Ok(()),
        }
    }

    /// Images of the members under `map`, re-sorted.
    pub fn map(&self, map: &[usize]) -> VertexSet {
        self.iter().map(|v| map[v]).collect()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut v: Vec<usize> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }
}

impl From<Vec<usize>> for VertexSet {
    fn from(v: Vec<usize>) -> Self {
        v.into_iter().collect()
    }
}

impl<const N: usize> From<[usize; N]> for VertexSet {
    fn from(v: [usize; N]) -> Self {
        v.into_iter().collect()
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// A simple cycle stored in canonical form: it starts at its least vertex and
/// the second vertex is smaller than the last one.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Cycle(Vec<usize>);

impl Cycle {
    /// Canonicalizes a closed vertex sequence (the first vertex is not
    /// repeated at the end). Does not check that the edges exist.
    pub fn new(seq: Vec<usize>) -> Self {
        let len = seq.len();
        if len < 3 {
            return Cycle(seq);
        }
        let start = (0..len).min_by_key(|&i| seq[i]).unwrap();
        let fwd: Vec<usize> = (0..len).map(|i| seq[(start + i) % len]).collect();
        if fwd[1] < fwd[len - 1] {
            Cycle(fwd)
        } else {
            let mut rev = vec![fwd[0]];
            rev.extend(fwd[1..].iter().rev());
            Cycle(rev)
        }
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_odd(&self) -> bool {
        self.0.len() % 2 == 1
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.0.iter().copied().collect()
    }

    /// Consecutive pairs, closing back to the start; each pair is `(min, max)`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let len = self.0.len();
        (0..len).map(move |i| {
            let (a, b) = (self.0[i], self.0[(i + 1) % len]);
            (a.min(b), a.max(b))
        })
    }

    /// True when every consecutive pair is an edge of `g` and the vertices
    /// are distinct.
    pub fn is_cycle_of(&self, g: &Graph) -> bool {
        self.len() >= 3
            && self.vertex_set().len() == self.len()
            && self.0.iter().all(|&v| v < g.order())
            && self.edges().all(|(u, v)| g.has_edge(u, v))
    }

    pub fn map(&self, map: &[usize]) -> Cycle {
        Cycle::new(self.0.iter().map(|&v| map[v]).collect())
    }
}

/// Odd cycle inventory of a graph, in canonical order (by length, then by
/// vertex sequence).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleList {
    pub cycles: Vec<Cycle>,
}

impl CycleList {
    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }
}

/// Immutable simple undirected graph.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges)
    }
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Graph { n, edges: Vec::new(), adj: vec![Vec::new(); n] }
    }

    /// Builds a graph, rejecting self-loops, duplicates and out-of-range ends.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut list = Vec::new();
        for (u, v) in edges {
            check_edge(n, u, v)?;
            list.push((u.min(v), u.max(v)));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge(w[0].0, w[0].1));
        }
        Ok(Self::from_sorted_edges(n, list))
    }

    fn from_sorted_edges(n: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph { n, edges, adj }
    }

    /// Number of vertices, `|G|`.
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    /// Neighbor bitmasks. Panics if the graph has more than 64 vertices.
    pub fn neighbor_masks(&self) -> Vec<u64> {
        assert!(self.n <= 64, "bitmask view needs at most 64 vertices");
        self.adj.iter().map(|ns| ns.iter().fold(0u64, |m, &u| m | (1u64 << u))).collect()
    }

    /// Parses the text edge-list format: `#` comment lines, a header `n m`,
    /// then exactly `m` lines `u v`. Blank lines are ignored.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut edges: Vec<(usize, usize)> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        let mut last_line = 0;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            last_line = line_no;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields = parse_pair(line).ok_or_else(|| Error::Parse {
                line: line_no,
                message: format!("expected two non-negative integers, found {line:?}"),
            })?;
            let Some((n, m)) = header else {
                header = Some(fields);
                continue;
            };
            if edges.len() == m {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("more than the {m} edge lines declared in the header"),
                });
            }
            let (u, v) = fields;
            check_edge(n, u, v).map_err(|e| Error::Parse { line: line_no, message: e.to_string() })?;
            let key = (u.min(v), u.max(v));
            if !seen.insert(key) {
                return Err(Error::Parse { line: line_no, message: Error::DuplicateEdge(key.0, key.1).to_string() });
            }
            edges.push(key);
        }
        let Some((n, m)) = header else {
            return Err(Error::Parse { line: last_line.max(1), message: "missing header line `n m`".into() });
        };
        if edges.len() != m {
            return Err(Error::Parse {
                line: last_line.max(1),
                message: format!("header declares {m} edges but {} were given", edges.len()),
            });
        }
        edges.sort_unstable();
        Ok(Self::from_sorted_edges(n, edges))
    }

    /// Canonical text form: header, then edges `u v` with `u < v` in
    /// lexicographic order.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edges.len());
        for (u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    /// Open neighborhood `N(S)` (which may intersect `S`), or the closed
    /// neighborhood `N[S] = N(S) ∪ S`.
    pub fn neighborhood(&self, set: &VertexSet, closed: bool) -> Result<VertexSet> {
        set.check_range(self.n)?;
        let mut mark = vec![false; self.n];
        for v in set.iter() {
            if closed {
                mark[v] = true;
            }
            for &u in &self.adj[v] {
                mark[u] = true;
            }
        }
        Ok(collect_marked(&mark))
    }

    /// Vertex form of `∂(S)`: members of `S` with a neighbor outside `S`.
    pub fn boundary_vertices(&self, set: &VertexSet) -> Result<VertexSet> {
        set.check_range(self.n)?;
        let inside = self.membership(set);
        Ok(set.iter().filter(|&v| self.adj[v].iter().any(|&u| !inside[u])).collect())
    }

    /// `G[X]` together with the new-to-old index map.
    pub fn induced_subgraph(&self, set: &VertexSet) -> Result<(Graph, Vec<usize>)> {
        set.check_range(self.n)?;
        let old_of_new: Vec<usize> = set.iter().collect();
        let mut new_of_old = vec![usize::MAX; self.n];
        for (i, &v) in old_of_new.iter().enumerate() {
            new_of_old[v] = i;
        }
        let edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .filter(|&&(u, v)| new_of_old[u] != usize::MAX && new_of_old[v] != usize::MAX)
            .map(|&(u, v)| (new_of_old[u], new_of_old[v]))
            .collect();
        let mut edges = edges;
        edges.sort_unstable();
        Ok((Self::from_sorted_edges(old_of_new.len(), edges), old_of_new))
    }

    /// `G - S` with vertex indices preserved: the vertices of `S` stay but
    /// lose all their edges.
    pub fn isolate(&self, set: &VertexSet) -> Graph {
        let edges = self.edges.iter().copied().filter(|&(u, v)| !set.contains(u) && !set.contains(v)).collect();
        Self::from_sorted_edges(self.n, edges)
    }

    /// `G + uv`.
    pub fn with_edge(&self, u: usize, v: usize) -> Result<Graph> {
        check_edge(self.n, u, v)?;
        if self.has_edge(u, v) {
            return Err(Error::DuplicateEdge(u.min(v), u.max(v)));
        }
        let mut edges = self.edges.clone();
        edges.push((u.min(v), u.max(v)));
        edges.sort_unstable();
        Ok(Self::from_sorted_edges(self.n, edges))
    }

    /// Disjoint union with `other` placed after `self` (its vertex `v`
    /// becomes `self.order() + v`).
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let off = self.n;
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|&(u, v)| (u + off, v + off)));
        Self::from_sorted_edges(self.n + other.n, edges)
    }

    /// All odd simple cycles, each once up to rotation and reflection.
    ///
    /// `cap` bounds the number of simple cycles (of either parity) the search
    /// may visit; exceeding it returns [`Error::CapExceeded`].
    pub fn enumerate_odd_cycles(&self, cap: usize) -> Result<CycleList> {
        let mut found = Vec::new();
        self.for_each_cycle(cap, |c| {
            if c.len() % 2 == 1 {
                found.push(Cycle::new(c.to_vec()));
            }
        })?;
        found.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        Ok(CycleList { cycles: found })
    }

    /// Visits every simple cycle once, as a vertex sequence starting at its
    /// least vertex with `seq[1] < seq[last]`.
    pub(crate) fn for_each_cycle<F: FnMut(&[usize])>(&self, cap: usize, mut visit: F) -> Result<()> {
        let mut count = 0usize;
        let mut on_path = vec![false; self.n];
        let mut path = Vec::with_capacity(self.n);
        for s in 0..self.n {
            path.push(s);
            on_path[s] = true;
            let r = self.cycle_dfs(s, &mut path, &mut on_path, &mut count, cap, &mut visit);
            on_path[s] = false;
            path.pop();
            r?;
        }
        Ok(())
    }

    fn cycle_dfs<F: FnMut(&[usize])>(
        &self,
        start: usize,
        path: &mut Vec<usize>,
        on_path: &mut [bool],
        count: &mut usize,
        cap: usize,
        visit: &mut F,
    ) -> Result<()> {
        let v = *path.last().unwrap();
        for &w in &self.adj[v] {
            if w == start && path.len() >= 3 && path[1] < v {
                *count += 1;
                if *count > cap {
                    return Err(Error::CapExceeded { what: "cycle enumeration", cap });
                }
                visit(path);
            }
            if w <= start || on_path[w] {
                continue;
            }
            path.push(w);
            on_path[w] = true;
            let r = self.cycle_dfs(start, path, on_path, count, cap, visit);
            on_path[w] = false;
            path.pop();
            r?;
        }
        Ok(())
    }

    /// Two-coloring with the least vertex of each component on the first
    /// side, or `None` when the graph has an odd cycle.
    pub fn bipartition(&self) -> Option<(VertexSet, VertexSet)> {
        let mut color: Vec<Option<bool>> = vec![None; self.n];
        let mut queue = VecDeque::new();
        for s in 0..self.n {
            if color[s].is_some() {
                continue;
            }
            color[s] = Some(false);
            queue.push_back(s);
            while let Some(v) = queue.pop_front() {
                let c = color[v].unwrap();
                for &u in &self.adj[v] {
                    match color[u] {
                        None => {
                            color[u] = Some(!c);
                            queue.push_back(u);
                        }
                        Some(cu) if cu == c => return None,
                        _ => {}
                    }
                }
            }
        }
        let first = (0..self.n).filter(|&v| color[v] == Some(false)).collect();
        let second = (0..self.n).filter(|&v| color[v] == Some(true)).collect();
        Some((first, second))
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().is_some()
    }

    /// Connected components ordered by least vertex, plus `i(G)`, the
    /// number of isolated vertices.
    pub fn components(&self) -> (Vec<VertexSet>, usize) {
        let mut seen = vec![false; self.n];
        let mut comps = Vec::new();
        let mut stack = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            stack.push(s);
            let mut comp = Vec::new();
            while let Some(v) = stack.pop() {
                comp.push(v);
                for &u in &self.adj[v] {
                    if !seen[u] {
                        seen[u] = true;
                        stack.push(u);
                    }
                }
            }
            comps.push(comp.into_iter().collect());
        }
        (comps, self.isolated_count())
    }

    /// `i(G)`.
    pub fn isolated_count(&self) -> usize {
        self.adj.iter().filter(|a| a.is_empty()).count()
    }

    pub fn is_connected(&self) -> bool {
        self.components().0.len() <= 1
    }

    pub(crate) fn membership(&self, set: &VertexSet) -> Vec<bool> {
        let mut inside = vec![false; self.n];
        for v in set.iter() {
            inside[v] = true;
        }
        inside
    }
}

fn check_edge(n: usize, u: usize, v: usize) -> Result<()> {
    if u >= n {
        return Err(Error::VertexOutOfRange { vertex: u, n });
    }
    if v >= n {
        return Err(Error::VertexOutOfRange { vertex: v, n });
    }
    if u == v {
        return Err(Error::SelfLoop(u));
    }
    Ok(())
}

fn parse_pair(line: &str) -> Option<(usize, usize)> {
    let mut it = line.split_whitespace();
    let a = it.next()?.parse().ok()?;
    let b = it.next()?.parse().ok()?;
    it.next().is_none().then_some((a, b))
}

fn collect_marked(mark: &[bool]) -> VertexSet {
    VertexSet(mark.iter().enumerate().filter(|(_, &m)| m).map(|(v, _)| v).collect())
}
