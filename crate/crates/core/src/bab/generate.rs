use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{allowed_endpoints, assemble_bab, BabStructure, Block};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::seed;

const ATTEMPTS: usize = 64;

/// Generator parameters. As a key=value config the keys are `k`,
/// `bipartite_order`, `cycle_length`, `attachment_depth`, `crossing_density`
/// and `allowDisconnected`; ranges are written `lo..hi` (inclusive) or as a
/// single number.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GenParams {
    pub k: usize,
    pub bipartite_order: (usize, usize),
    pub cycle_length: (usize, usize),
    /// Rounds of even-path attachment on each part.
    pub attachment_depth: usize,
    /// Probability of each permitted crossing edge.
    pub crossing_density: f64,
    pub allow_disconnected: bool,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            k: 1,
            bipartite_order: (0, 4),
            cycle_length: (3, 7),
            attachment_depth: 1,
            crossing_density: 0.3,
            allow_disconnected: false,
        }
    }
}

/// Parses `lo..hi`, `lo..=hi` or a single number.
pub fn parse_range(text: &str) -> Option<(usize, usize)> {
    let t = text.trim();
    if let Some((lo, hi)) = t.split_once("..") {
        let hi = hi.strip_prefix('=').unwrap_or(hi);
        return Some((lo.trim().parse().ok()?, hi.trim().parse().ok()?));
    }
    let v = t.parse().ok()?;
    Some((v, v))
}

impl GenParams {
    /// Reads `key=value` pairs separated by newlines, commas or spaces over
    /// the defaults. `#` starts a comment.
    pub fn from_kv(text: &str) -> Result<GenParams> {
        let mut p = GenParams::default();
        for (ln, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("");
            for item in line.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()) {
                p.set(item).map_err(|message| Error::Parse { line: ln + 1, message })?;
            }
        }
        p.check()?;
        Ok(p)
    }

    fn set(&mut self, item: &str) -> std::result::Result<(), String> {
        let (key, value) = item.split_once('=').ok_or_else(|| format!("expected key=value, got {item:?}"))?;
        let bad = || format!("bad value {value:?} for {key}");
        match key {
            "k" => self.k = value.parse().map_err(|_| bad())?,
            "bipartite_order" => self.bipartite_order = parse_range(value).ok_or_else(bad)?,
            "cycle_length" => self.cycle_length = parse_range(value).ok_or_else(bad)?,
            "attachment_depth" => self.attachment_depth = value.parse().map_err(|_| bad())?,
            "crossing_density" => self.crossing_density = value.parse().map_err(|_| bad())?,
            "allowDisconnected" => self.allow_disconnected = value.parse().map_err(|_| bad())?,
            _ => return Err(format!("unknown key {key:?}")),
        }
        Ok(())
    }

    /// Range checks; also rejects combinations no instance can satisfy.
    pub fn check(&self) -> Result<()> {
        let fail = |m: &str| Err(Error::InfeasibleParams(m.into()));
        let (clo, chi) = self.cycle_length;
        if clo < 3 || clo > chi || (clo..=chi).all(|l| l % 2 == 0) {
            return fail("cycle_length must contain an odd length of at least 3");
        }
        let (blo, bhi) = self.bipartite_order;
        if blo > bhi {
            return fail("bipartite_order range is empty");
        }
        if !(0.0..=1.0).contains(&self.crossing_density) {
            return fail("crossing_density must lie in [0, 1]");
        }
        if self.k > 32 || bhi > 64 || chi > 64 || self.attachment_depth > 16 {
            return fail("parameters exceed the supported scale");
        }
        let blocks_max = self.k + usize::from(bhi > 0);
        let needs_crossing = blocks_max > 1 && (self.crossing_density > 0.0 || !self.allow_disconnected);
        if needs_crossing && self.k > 0 && self.attachment_depth == 0 {
            let multi = if blo > 0 { self.k >= 1 } else { self.k >= 2 };
            if multi {
                return fail("crossing edges are needed but a bare odd cycle has A(G_i) = ∅");
            }
        }
        Ok(())
    }
}

fn random_bipartite(rng: &mut ChaCha8Rng, r: usize) -> Graph {
    let mut side = vec![false; r];
    let mut edges = Vec::new();
    for v in 1..r {
        let p = rng.gen_range(0..v);
        side[v] = !side[p];
        edges.push((p, v));
    }
    for u in 0..r {
        for v in u + 1..r {
            if side[u] != side[v] && !edges.contains(&(u, v)) && rng.gen_bool(0.25) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(r, edges).expect("generated edges are simple")
}

fn random_part(rng: &mut ChaCha8Rng, cycle_length: (usize, usize), depth: usize) -> Graph {
    let lengths: Vec<usize> = (cycle_length.0..=cycle_length.1).filter(|l| l % 2 == 1).collect();
    let len = *lengths.choose(rng).unwrap();
    let mut edges: Vec<(usize, usize)> = (0..len).map(|i| (i, (i + 1) % len)).collect();
    let mut even: Vec<usize> = (0..len).collect();
    let mut n = len;
    for _ in 0..depth {
        for _ in 0..rng.gen_range(1..=3) {
            let anchor = *even.choose(rng).unwrap();
            edges.push((anchor, n));
            edges.push((n, n + 1));
            even.push(n + 1);
            n += 2;
        }
    }
    Graph::from_edges(n, edges).expect("generated edges are simple")
}

fn find(uf: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while uf[r] != r {
        r = uf[r];
    }
    uf[x] = r;
    r
}

/// A random BAB graph with its structure; deterministic in `(seed, params)`.
pub fn generate_random_bab(seed: u64, params: &GenParams) -> Result<(Graph, BabStructure)> {
    params.check()?;
    let mut rng = seed::rng(seed);
    for _ in 0..ATTEMPTS {
        let r = rng.gen_range(params.bipartite_order.0..=params.bipartite_order.1);
        let b = random_bipartite(&mut rng, r);
        let parts: Vec<Graph> =
            (0..params.k).map(|_| random_part(&mut rng, params.cycle_length, params.attachment_depth)).collect();

        let mut blocks: Vec<Block> = Vec::new();
        let mut allowed: Vec<Vec<usize>> = Vec::new();
        if r > 0 {
            blocks.push(Block::B);
            allowed.push(allowed_endpoints(&b, true).into_vec());
        }
        for (i, p) in parts.iter().enumerate() {
            blocks.push(Block::Part(i));
            allowed.push(allowed_endpoints(p, false).into_vec());
        }
        let mut uf: Vec<usize> = (0..blocks.len()).collect();
        let mut crossing = Vec::new();
        for i in 0..blocks.len() {
            for j in i + 1..blocks.len() {
                for &x in &allowed[i] {
                    for &y in &allowed[j] {
                        if rng.gen_bool(params.crossing_density) {
                            crossing.push((blocks[i], x, blocks[j], y));
                            let (ri, rj) = (find(&mut uf, i), find(&mut uf, j));
                            uf[ri] = rj;
                        }
                    }
                }
            }
        }
        if !params.allow_disconnected {
            let mut stuck = false;
            for j in 1..blocks.len() {
                if find(&mut uf, j) == find(&mut uf, 0) {
                    continue;
                }
                let joined: Vec<usize> = (0..blocks.len()).filter(|&i| find(&mut uf, i) == find(&mut uf, 0)).collect();
                let ends: Vec<(usize, usize)> =
                    joined.iter().flat_map(|&i| allowed[i].iter().map(move |&x| (i, x))).collect();
                let (Some(&(i, x)), Some(&y)) = (ends.choose(&mut rng), allowed[j].choose(&mut rng)) else {
                    stuck = true;
                    break;
                };
                crossing.push((blocks[i], x, blocks[j], y));
                let (ri, rj) = (find(&mut uf, i), find(&mut uf, j));
                uf[ri] = rj;
            }
            if stuck {
                continue;
            }
        }
        match assemble_bab(&b, &parts, &crossing) {
            Ok(out) => return Ok(out),
            Err(e) if e.is_guard() => return Err(e),
            Err(_) => continue,
        }
    }
    Err(Error::InfeasibleParams(format!("no valid instance after {ATTEMPTS} attempts")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(k: usize, bip: (usize, usize), cycle: (usize, usize), depth: usize) -> GenParams {
        GenParams { k, bipartite_order: bip, cycle_length: cycle, attachment_depth: depth, ..GenParams::default() }
    }

    #[test]
    fn small_instance_is_valid_and_deterministic() {
        let p = params(1, (0, 0), (5, 5), 1);
        let (g, s) = generate_random_bab(1, &p).unwrap();
        assert!((7..=11).contains(&g.order()));
        s.validate(&g).unwrap();
        let (g2, s2) = generate_random_bab(1, &p).unwrap();
        assert_eq!(g.to_edge_list(), g2.to_edge_list());
        assert_eq!(s, s2);
    }

    #[test]
    fn bipartite_only() {
        let (g, s) = generate_random_bab(3, &params(0, (6, 6), (3, 3), 0)).unwrap();
        assert_eq!(g.order(), 6);
        assert!(g.is_bipartite() && g.is_connected());
        assert_eq!(s.k, 0);
    }

    #[test]
    fn two_parts_with_crossing() {
        for seed in 0..20 {
            let p = GenParams { crossing_density: 0.5, ..params(2, (0, 4), (3, 7), 1) };
            let (g, s) = generate_random_bab(seed, &p).unwrap();
            assert_eq!(s.k, 2);
            assert!(s.connected);
            s.validate(&g).unwrap();
        }
    }

    #[test]
    fn infeasible_params() {
        let bare = GenParams { crossing_density: 0.5, ..params(2, (0, 0), (5, 5), 0) };
        assert!(matches!(generate_random_bab(1, &bare), Err(Error::InfeasibleParams(_))));
        assert!(generate_random_bab(1, &params(1, (0, 0), (4, 4), 1)).is_err());
        // A single vertex offers no crossing endpoint, so it cannot be attached.
        assert!(matches!(generate_random_bab(1, &params(1, (1, 1), (3, 3), 1)), Err(Error::InfeasibleParams(_))));
    }

    #[test]
    fn kv_config() {
        let p = GenParams::from_kv(
            "k=2\nbipartite_order=2..5 # comment\ncycle_length=5, attachment_depth=2 crossing_density=0.1\nallowDisconnected=true",
        )
        .unwrap();
        assert_eq!(p.k, 2);
        assert_eq!(p.bipartite_order, (2, 5));
        assert_eq!(p.cycle_length, (5, 5));
        assert_eq!(p.attachment_depth, 2);
        assert!(p.allow_disconnected);
        assert!(matches!(GenParams::from_kv("k=1\nfoo=2"), Err(Error::Parse { line: 2, .. })));
    }
}
