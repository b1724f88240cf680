//! Bipartite–almost bipartite structure.
//!
//! A structure `(B, G_1, ..., G_k)` splits the vertices into a bipartite
//! block `B` and `k` parts, each with exactly one odd cycle, not
//! König–Egerváry, and covered by the flowers of that cycle. Edges between
//! blocks may only leave `B` from `A(B) ∪ C(B)` and a part from `A(G_i)`.

mod generate;
mod suite;

pub use generate::{generate_random_bab, parse_range, GenParams};
pub use suite::{theorem_suite, ClauseResult, TheoremReport};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flower::{blossom_base, AltSearch, DEFAULT_PATH_STEP_CAP};
use crate::gallai_edmonds::gallai_edmonds;
use crate::graph::{Cycle, Graph, VertexSet, DEFAULT_CYCLE_CAP};
use crate::independence::{alpha, max_tight_set};
use crate::matching::{all_maximum_matchings, matching_number, Matching, DEFAULT_MATCHING_CAP};

/// Leaves examined by the recognition search before it gives up.
pub const DEFAULT_ASSIGNMENT_CAP: usize = 100_000;

/// A validated `(B, G_1, ..., G_k)` decomposition, in host vertex indices.
///
/// Serializes as `{"B": [...], "parts": [[...], ...], "crossing": [[u, v], ...], "k": k}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BabStructure {
    #[serde(rename = "B")]
    pub b: VertexSet,
    pub parts: Vec<VertexSet>,
    pub crossing: Vec<(usize, usize)>,
    pub k: usize,
    /// The unique odd cycle of each part.
    #[serde(skip)]
    pub odd_cycles: Vec<Cycle>,
    #[serde(skip)]
    pub connected: bool,
}

/// Which block an endpoint of a crossing edge lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Block {
    B,
    Part(usize),
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidStructure(msg.into())
}

/// Checks that `h` is almost bipartite, not KE, and covered by the flowers
/// of its odd cycle. Returns that cycle.
fn check_part(h: &Graph, label: &str) -> Result<Cycle> {
    let mut cycles = h.enumerate_odd_cycles(DEFAULT_CYCLE_CAP)?.cycles;
    if cycles.len() != 1 {
        return Err(invalid(format!("{label} has {} odd cycles, expected exactly one", cycles.len())));
    }
    let cycle = cycles.pop().unwrap();
    let n = h.order();
    if alpha(h)?.0 + matching_number(h) >= n {
        return Err(invalid(format!("{label} is König–Egerváry")));
    }
    let reach = reach_set(h, &cycle)?;
    if reach.vertices.len() != n {
        return Err(invalid(format!("{label}: reach set {} is not the whole part", reach.vertices)));
    }
    Ok(cycle)
}

/// Vertices of `h` allowed to carry crossing edges: `V - D(h)` for the
/// bipartite block, `A(h)` for a part.
fn allowed_endpoints(h: &Graph, bipartite: bool) -> VertexSet {
    let dec = gallai_edmonds(h);
    if bipartite {
        dec.a.union(&dec.c)
    } else {
        dec.a
    }
}

impl BabStructure {
    /// Builds and fully validates the structure with the given blocks.
    /// Crossing edges, cycles and connectivity are derived from `g`.
    pub fn validated(g: &Graph, b: VertexSet, parts: Vec<VertexSet>) -> Result<BabStructure> {
        let n = g.order();
        b.check_range(n)?;
        let mut seen = vec![false; n];
        for v in b.iter().chain(parts.iter().flat_map(|p| p.iter())) {
            if std::mem::replace(&mut seen[v], true) {
                return Err(invalid(format!("vertex {v} lies in two blocks")));
            }
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(invalid(format!("vertex {v} lies in no block")));
        }
        let (gb, bmap) = g.induced_subgraph(&b)?;
        if !gb.is_bipartite() {
            return Err(invalid("the bipartite block is not bipartite"));
        }
        let mut allowed = vec![false; n];
        for v in allowed_endpoints(&gb, true).iter() {
            allowed[bmap[v]] = true;
        }
        let mut odd_cycles = Vec::with_capacity(parts.len());
        for (i, p) in parts.iter().enumerate() {
            p.check_range(n)?;
            let (h, map) = g.induced_subgraph(p)?;
            if !h.is_connected() {
                return Err(invalid(format!("part {i} is not connected")));
            }
            odd_cycles.push(check_part(&h, &format!("part {i}"))?.map(&map));
            for v in allowed_endpoints(&h, false).iter() {
                allowed[map[v]] = true;
            }
        }
        let s =
            BabStructure { b, k: parts.len(), parts, crossing: Vec::new(), odd_cycles, connected: g.is_connected() };
        let block = s.block_of(n);
        let crossing: Vec<(usize, usize)> = g.edges().iter().copied().filter(|&(u, v)| block[u] != block[v]).collect();
        if let Some(&(u, v)) = crossing.iter().find(|&&(u, v)| !allowed[u] || !allowed[v]) {
            return Err(invalid(format!("crossing edge {u}-{v} has an endpoint outside the allowed sets")));
        }
        let s = BabStructure { crossing, ..s };
        s.check_d_decomposes(g)?;
        Ok(s)
    }

    /// Re-validates `self` against `g`.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        let fresh = BabStructure::validated(g, self.b.clone(), self.parts.clone())?;
        if fresh.crossing != self.crossing || fresh.k != self.k {
            return Err(invalid("crossing edges or k do not match the graph"));
        }
        Ok(())
    }

    /// Parses the JSON form and validates it against `g`.
    pub fn from_json(g: &Graph, text: &str) -> Result<BabStructure> {
        let raw: BabStructure =
            serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), message: e.to_string() })?;
        let s = BabStructure::validated(g, raw.b.clone(), raw.parts.clone())?;
        s.validate(g).and_then(|_| {
            if raw.crossing != s.crossing || raw.k != s.k {
                Err(invalid("crossing edges or k do not match the graph"))
            } else {
                Ok(s)
            }
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("structure serializes")
    }

    /// Block index of every vertex: 0 for `B`, `i + 1` for part `i`.
    pub fn block_of(&self, n: usize) -> Vec<usize> {
        let mut block = vec![0; n];
        for (i, p) in self.parts.iter().enumerate() {
            for v in p.iter() {
                block[v] = i + 1;
            }
        }
        block
    }

    /// `D(G)` must be the union of `D(B)` and the `D(G_i)`.
    fn check_d_decomposes(&self, g: &Graph) -> Result<()> {
        let mut expect = VertexSet::new();
        for blk in std::iter::once(&self.b).chain(&self.parts) {
            let (h, map) = g.induced_subgraph(blk)?;
            expect = expect.union(&gallai_edmonds(&h).d.map(&map));
        }
        let got = gallai_edmonds(g).d;
        if got != expect {
            return Err(invalid(format!("D(G) = {got} but the blocks give {expect}")));
        }
        Ok(())
    }
}

/// Union of all flowers on one odd cycle, over all maximum matchings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReachSet {
    pub cycle: Cycle,
    pub vertices: VertexSet,
    pub flower_count: usize,
}

fn reach_sets_over(g: &Graph, cycles: &[Cycle], matchings: &[Matching]) -> Result<Vec<ReachSet>> {
    let n = g.order();
    let mut out = Vec::with_capacity(cycles.len());
    for cycle in cycles {
        let mut hit = vec![false; n];
        let mut count = 0usize;
        for m in matchings {
            let Some(base) = blossom_base(cycle, m) else {
                continue;
            };
            if m.is_exposed(base) {
                count += 1;
                cycle.vertices().iter().for_each(|&v| hit[v] = true);
                continue;
            }
            AltSearch::new(g, m, DEFAULT_PATH_STEP_CAP).stems(base, cycle.vertices(), &mut |stem| {
                count += 1;
                cycle.vertices().iter().chain(stem).for_each(|&v| hit[v] = true);
                false
            })?;
        }
        out.push(ReachSet {
            cycle: cycle.clone(),
            vertices: (0..n).filter(|&v| hit[v]).collect(),
            flower_count: count,
        });
    }
    Ok(out)
}

/// `R(C)`: every vertex of every flower with blossom `cycle`, over every
/// maximum matching.
pub fn reach_set(g: &Graph, cycle: &Cycle) -> Result<ReachSet> {
    if !cycle.is_odd() || !cycle.is_cycle_of(g) {
        return Err(Error::NotOddCycle(cycle.vertices().iter().map(|v| v.to_string()).collect::<Vec<_>>().join("-")));
    }
    let ms = all_maximum_matchings(g, DEFAULT_MATCHING_CAP)?;
    Ok(reach_sets_over(g, std::slice::from_ref(cycle), &ms)?.pop().unwrap())
}

/// Why a graph failed to be R-disjoint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum RDisjointEvidence {
    NoOddCycle,
    EmptyReach { cycle: Cycle },
    Overlap { first: Cycle, second: Cycle, shared: VertexSet },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RDisjointReport {
    pub r_disjoint: bool,
    pub reach_sets: Vec<ReachSet>,
    pub evidence: Option<RDisjointEvidence>,
}

/// At least one odd cycle, no empty reach set, reach sets pairwise disjoint.
pub fn is_r_disjoint(g: &Graph) -> Result<RDisjointReport> {
    let cycles = g.enumerate_odd_cycles(DEFAULT_CYCLE_CAP)?.cycles;
    if cycles.is_empty() {
        return Ok(RDisjointReport {
            r_disjoint: false,
            reach_sets: Vec::new(),
            evidence: Some(RDisjointEvidence::NoOddCycle),
        });
    }
    let ms = all_maximum_matchings(g, DEFAULT_MATCHING_CAP)?;
    let reach_sets = reach_sets_over(g, &cycles, &ms)?;
    let mut evidence = reach_sets
        .iter()
        .find(|r| r.vertices.is_empty())
        .map(|r| RDisjointEvidence::EmptyReach { cycle: r.cycle.clone() });
    'pairs: for (i, r) in reach_sets.iter().enumerate() {
        if evidence.is_some() {
            break;
        }
        for s in &reach_sets[i + 1..] {
            let shared = r.vertices.intersection(&s.vertices);
            if !shared.is_empty() {
                evidence = Some(RDisjointEvidence::Overlap { first: r.cycle.clone(), second: s.cycle.clone(), shared });
                break 'pairs;
            }
        }
    }
    Ok(RDisjointReport { r_disjoint: evidence.is_none(), reach_sets, evidence })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlowerDecomposition {
    pub reach_sets: Vec<ReachSet>,
    /// `B(G)`: the vertices in no reach set.
    pub b: VertexSet,
    pub structure: BabStructure,
}

/// Splits an R-disjoint graph into its reach sets and `B(G)`; a graph with no
/// odd cycle is all `B`. The result is validated as a BAB structure.
pub fn flower_decomposition(g: &Graph) -> Result<FlowerDecomposition> {
    let n = g.order();
    let report = is_r_disjoint(g)?;
    if let Some(ev) = &report.evidence {
        if *ev != RDisjointEvidence::NoOddCycle {
            return Err(Error::NotRDisjoint(serde_json::to_string(ev).expect("evidence serializes")));
        }
    }
    let covered = report.reach_sets.iter().fold(VertexSet::new(), |acc, r| acc.union(&r.vertices));
    let b = VertexSet::full(n).difference(&covered);
    let parts = report.reach_sets.iter().map(|r| r.vertices.clone()).collect();
    let structure = BabStructure::validated(g, b.clone(), parts)?;
    Ok(FlowerDecomposition { reach_sets: report.reach_sets, b, structure })
}

/// Violations of the boundary rules for an R-disjoint graph's flower
/// decomposition: `∂(B(G)) ⊆ A(G) ∪ C(G)` and `∂(R(C)) ⊆ A(G)`.
pub fn flower_boundary_violations(g: &Graph, fd: &FlowerDecomposition) -> Result<Vec<String>> {
    let dec = gallai_edmonds(g);
    let ac = dec.a.union(&dec.c);
    let mut out = Vec::new();
    for v in g.boundary_vertices(&fd.b)?.iter() {
        if !ac.contains(v) {
            out.push(format!("B(G) boundary vertex {v} is in D(G)"));
        }
    }
    for r in &fd.reach_sets {
        for v in g.boundary_vertices(&r.vertices)?.iter() {
            if !dec.a.contains(v) {
                out.push(format!("reach-set boundary vertex {v} is not in A(G)"));
            }
        }
    }
    Ok(out)
}

/// Glues `b` and `parts` (relabeled in that order) with crossing edges given
/// as `(block, local vertex, block, local vertex)`, then validates.
pub fn assemble_bab(
    b: &Graph,
    parts: &[Graph],
    crossing: &[(Block, usize, Block, usize)],
) -> Result<(Graph, BabStructure)> {
    if !b.is_bipartite() {
        return Err(invalid("the bipartite block is not bipartite"));
    }
    let mut offsets = vec![b.order()];
    let mut allowed = vec![allowed_endpoints(b, true)];
    for (i, p) in parts.iter().enumerate() {
        check_part(p, &format!("part {i}"))?;
        offsets.push(offsets[i] + p.order());
        allowed.push(allowed_endpoints(p, false));
    }
    let n = *offsets.last().unwrap();
    let order_of = |blk: usize| if blk == 0 { b.order() } else { parts[blk - 1].order() };
    let index = |blk: Block| match blk {
        Block::B => Ok(0),
        Block::Part(i) if i < parts.len() => Ok(i + 1),
        Block::Part(i) => Err(invalid(format!("there is no part {i}"))),
    };
    let start = |blk: usize| if blk == 0 { 0 } else { offsets[blk - 1] };
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for (blk, h) in std::iter::once(b).chain(parts).enumerate() {
        edges.extend(h.edges().iter().map(|&(u, v)| (u + start(blk), v + start(blk))));
    }
    let mut extra = Vec::new();
    for &(bx, x, by, y) in crossing {
        let (ix, iy) = (index(bx)?, index(by)?);
        if ix == iy {
            return Err(invalid("a crossing edge must join two different blocks"));
        }
        for (blk, v, name) in [(ix, x, bx), (iy, y, by)] {
            if v >= order_of(blk) {
                return Err(Error::VertexOutOfRange { vertex: v, n: order_of(blk) });
            }
            if !allowed[blk].contains(v) {
                let set = if blk == 0 { "A(B) ∪ C(B)" } else { "A(G_i)" };
                return Err(invalid(format!("endpoint {v} of {name:?} is not in {set} = {}", allowed[blk])));
            }
        }
        let (u, w) = (x + start(ix), y + start(iy));
        let e = (u.min(w), u.max(w));
        if extra.contains(&e) {
            return Err(Error::DuplicateEdge(e.0, e.1));
        }
        extra.push(e);
    }
    edges.extend(&extra);
    let g = Graph::from_edges(n, edges)?;
    let bset: VertexSet = (0..b.order()).collect();
    let part_sets = (0..parts.len()).map(|i| (offsets[i]..offsets[i + 1]).collect()).collect();
    let s = BabStructure::validated(&g, bset, part_sets)?;
    Ok((g, s))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum RecognitionRoute {
    Bipartite,
    RDisjoint,
    Search,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Recognition {
    pub structure: Option<BabStructure>,
    pub route: RecognitionRoute,
    /// True when an absent answer is a proof of non-membership.
    pub exhaustive: bool,
}

/// Finds a BAB structure of `g`, if any: trivially for bipartite graphs,
/// through the flower decomposition for R-disjoint graphs, and otherwise by
/// a bounded search over block assignments anchored at the odd-cycle
/// components of `G[D]`.
pub fn recognize_bab(g: &Graph) -> Result<Recognition> {
    recognize_bab_with_cap(g, DEFAULT_ASSIGNMENT_CAP)
}

pub fn recognize_bab_with_cap(g: &Graph, cap: usize) -> Result<Recognition> {
    let n = g.order();
    if g.is_bipartite() {
        let s = BabStructure::validated(g, VertexSet::full(n), Vec::new())?;
        return Ok(Recognition { structure: Some(s), route: RecognitionRoute::Bipartite, exhaustive: true });
    }
    let report = is_r_disjoint(g)?;
    if report.r_disjoint {
        let s = flower_decomposition(g)?.structure;
        return Ok(Recognition { structure: Some(s), route: RecognitionRoute::RDisjoint, exhaustive: true });
    }
    let (structure, exhaustive) = recognize_by_search(g, cap)?;
    Ok(Recognition { structure, route: RecognitionRoute::Search, exhaustive })
}

/// The assignment search alone, without the bipartite and R-disjoint
/// shortcuts. Returns the structure found, if any, and whether the search
/// space was exhausted.
pub fn recognize_by_search(g: &Graph, cap: usize) -> Result<(Option<BabStructure>, bool)> {
    let n = g.order();
    let dec = gallai_edmonds(g);
    let mut cycles = Vec::new();
    for comp in dec.components_of_d.iter().filter(|c| c.len() > 1) {
        let (h, _) = g.induced_subgraph(comp)?;
        let is_cycle = h.edge_count() == h.order() && (0..h.order()).all(|v| h.degree(v) == 2);
        if !is_cycle || comp.len() % 2 == 0 {
            return Ok((None, true));
        }
        cycles.push(comp.clone());
    }
    if cycles.is_empty() {
        return Ok((None, true));
    }
    // A cycle lies in D of its own part, so its neighbours cannot be crossing
    // endpoints and must share its part.
    let mut block: Vec<Option<usize>> = vec![None; n];
    for (i, c) in cycles.iter().enumerate() {
        for v in c.iter() {
            block[v] = Some(i + 1);
        }
    }
    for (i, c) in cycles.iter().enumerate() {
        for v in g.neighborhood(c, false)?.difference(c).iter() {
            match block[v] {
                Some(b) if b != i + 1 => return Ok((None, true)),
                _ => block[v] = Some(i + 1),
            }
        }
    }
    let free: Vec<usize> = (0..n).filter(|&v| block[v].is_none()).collect();
    let mut search = Assign { g, k: cycles.len(), block, free, leaves: 0, cap };
    let found = search.run(0)?;
    let exhaustive = found.is_some() || search.leaves <= cap;
    Ok((found, exhaustive))
}

struct Assign<'g> {
    g: &'g Graph,
    k: usize,
    block: Vec<Option<usize>>,
    free: Vec<usize>,
    leaves: usize,
    cap: usize,
}

impl Assign<'_> {
    fn run(&mut self, i: usize) -> Result<Option<BabStructure>> {
        if i == self.free.len() {
            self.leaves += 1;
            if self.leaves > self.cap {
                return Ok(None);
            }
            return self.leaf();
        }
        let v = self.free[i];
        for b in 0..=self.k {
            self.block[v] = Some(b);
            if let Some(s) = self.run(i + 1)? {
                return Ok(Some(s));
            }
            if self.leaves > self.cap {
                break;
            }
        }
        self.block[v] = None;
        Ok(None)
    }

    fn leaf(&self) -> Result<Option<BabStructure>> {
        let n = self.g.order();
        let sets: Vec<VertexSet> =
            (0..=self.k).map(|b| (0..n).filter(|&v| self.block[v] == Some(b)).collect()).collect();
        if !self.g.induced_subgraph(&sets[0])?.0.is_bipartite() {
            return Ok(None);
        }
        for p in &sets[1..] {
            let (h, _) = self.g.induced_subgraph(p)?;
            if !h.is_connected() {
                return Ok(None);
            }
        }
        let mut sets = sets.into_iter();
        let b = sets.next().unwrap();
        match BabStructure::validated(self.g, b, sets.collect()) {
            Ok(s) => Ok(Some(s)),
            Err(Error::InvalidStructure(_)) => Ok(None),
            Err(e) => Err(e),
        }
    }
}

/// Closed forms for a BAB graph: `nucleus = X`, `diadem = X ∪ C` and
/// `ker = X - N(S)` with `S` the maximum tight subset of `N(X)` against `X`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FastCriticalSets {
    pub nucleus: VertexSet,
    pub diadem: VertexSet,
    pub ker: VertexSet,
    pub tight_set: VertexSet,
}

pub fn fast_critical_sets(g: &Graph, s: &BabStructure) -> Result<FastCriticalSets> {
    s.validate(g)?;
    let dec = gallai_edmonds(g);
    let nbrs = g.neighborhood(&dec.x, false)?;
    let tight_set = max_tight_set(g, &nbrs, &dec.x)?;
    let ker = dec.x.difference(&g.neighborhood(&tight_set, false)?);
    Ok(FastCriticalSets { diadem: dec.x.union(&dec.c), nucleus: dec.x, ker, tight_set })
}
