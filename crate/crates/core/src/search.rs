//! Counterexample search for the corona–ker bound `|corona| + |ker| ≤ 2α + k`.
//!
//! `k` has three readings, all evaluated on every instance: the number of odd
//! cycles, the number of odd cycles inside `G[D]`, and the largest number of
//! pairwise vertex-disjoint odd cycles. Nothing here proves anything; the
//! harness only records instances, each replayable from its seed.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gallai_edmonds::gallai_edmonds;
use crate::graph::{Cycle, Graph, DEFAULT_CYCLE_CAP};
use crate::independence::critical_profile;
use crate::seed;
use crate::verify::{random_bab, random_graph};

const PACKING_STEP_CAP: usize = 2_000_000;
const PERSIST_CAP: usize = 20;

type Trial = Option<(Graph, Evaluation)>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    /// Erdős–Rényi graphs.
    General,
    /// The BAB generator.
    Bab,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOptions {
    pub trials: usize,
    pub seed: u64,
    pub max_n: usize,
    pub source: Source,
    /// Directory for finding files and the manifest.
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Reading {
    pub k: usize,
    /// `2α + k - (|corona| + |ker|)`; negative means the bound fails.
    pub slack: isize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Evaluation {
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub alpha: usize,
    pub corona: usize,
    pub ker: usize,
    pub all_odd_cycles: Reading,
    pub odd_cycles_in_d: Reading,
    /// `None` when the packing search hit its cap.
    pub disjoint_odd_cycles: Option<Reading>,
    /// For generated BAB instances: the structure's `k` and its slack.
    pub bab: Option<Reading>,
}

impl Evaluation {
    fn readings(&self) -> impl Iterator<Item = (&'static str, Reading)> + '_ {
        [
            ("allOddCycles", Some(self.all_odd_cycles)),
            ("oddCyclesInD", Some(self.odd_cycles_in_d)),
            ("disjointOddCycles", self.disjoint_odd_cycles),
        ]
        .into_iter()
        .filter_map(|(name, r)| r.map(|r| (name, r)))
    }

    pub fn violates(&self) -> bool {
        self.readings().any(|(_, r)| r.slack < 0)
    }

    /// A BAB instance where the bound is strict.
    pub fn strict(&self) -> bool {
        self.bab.is_some_and(|r| r.slack > 0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Finding {
    /// `violation` or `strict`.
    pub kind: String,
    pub trial: u64,
    pub file: Option<String>,
    pub evaluation: Evaluation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MinSlack {
    pub all_odd_cycles: Option<isize>,
    pub odd_cycles_in_d: Option<isize>,
    pub disjoint_odd_cycles: Option<isize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchReport {
    pub conjecture: String,
    pub source: Source,
    pub trials: usize,
    pub seed: u64,
    pub max_n: usize,
    pub evaluated: usize,
    pub skipped: usize,
    pub min_slack: MinSlack,
    pub violations: usize,
    pub strict_witnesses: usize,
    pub findings: Vec<Finding>,
}

/// Largest set of pairwise vertex-disjoint cycles, or `None` past the cap.
pub fn max_disjoint_cycles(cycles: &[Cycle], cap: usize) -> Option<usize> {
    let masks: Vec<u64> = cycles.iter().map(|c| c.vertex_set().to_mask()).collect();
    fn go(
        masks: &[u64],
        start: usize,
        used: u64,
        depth: usize,
        best: &mut usize,
        steps: &mut usize,
        cap: usize,
    ) -> bool {
        *steps += 1;
        if *steps > cap {
            return false;
        }
        *best = (*best).max(depth);
        for i in start..masks.len() {
            if masks[i] & used == 0 && !go(masks, i + 1, used | masks[i], depth + 1, best, steps, cap) {
                return false;
            }
        }
        true
    }
    let mut best = 0;
    let mut steps = 0;
    go(&masks, 0, 0, 0, &mut best, &mut steps, cap).then_some(best)
}

fn reading(two_alpha: usize, lhs: usize, k: usize) -> Reading {
    Reading { k, slack: (two_alpha + k) as isize - lhs as isize }
}

/// Evaluates the bound on `g` under every reading of `k`.
pub fn evaluate(g: &Graph, seed: u64, bab_k: Option<usize>) -> Result<Evaluation> {
    let p = critical_profile(g)?;
    let cycles = g.enumerate_odd_cycles(DEFAULT_CYCLE_CAP)?;
    let dec = gallai_edmonds(g);
    let (gd, _) = g.induced_subgraph(&dec.d)?;
    let in_d = gd.enumerate_odd_cycles(DEFAULT_CYCLE_CAP)?.len();
    let lhs = p.corona.len() + p.ker.len();
    let two_alpha = 2 * p.alpha;
    Ok(Evaluation {
        seed,
        n: g.order(),
        m: g.edge_count(),
        alpha: p.alpha,
        corona: p.corona.len(),
        ker: p.ker.len(),
        all_odd_cycles: reading(two_alpha, lhs, cycles.len()),
        odd_cycles_in_d: reading(two_alpha, lhs, in_d),
        disjoint_odd_cycles: max_disjoint_cycles(&cycles.cycles, PACKING_STEP_CAP).map(|k| reading(two_alpha, lhs, k)),
        bab: bab_k.map(|k| reading(two_alpha, lhs, k)),
    })
}

/// The instance of one trial seed; `None` when the BAB generator could not
/// fit the order bound.
pub fn instance(source: Source, trial_seed: u64, max_n: usize) -> Result<Option<(Graph, Option<usize>)>> {
    match source {
        Source::General => Ok(Some((random_graph(&mut seed::rng(trial_seed), max_n), None))),
        Source::Bab => Ok(random_bab(trial_seed, max_n)?.map(|(g, s)| (g, Some(s.k)))),
    }
}

/// Replays a single trial seed.
pub fn replay(source: Source, trial_seed: u64, max_n: usize) -> Result<Option<(Graph, Evaluation)>> {
    match instance(source, trial_seed, max_n)? {
        Some((g, k)) => {
            let e = evaluate(&g, trial_seed, k)?;
            Ok(Some((g, e)))
        }
        None => Ok(None),
    }
}

fn io_error(path: &Path, e: std::io::Error) -> Error {
    Error::Io(format!("{}: {e}", path.display()))
}

pub fn run(opts: &SearchOptions) -> Result<SearchReport> {
    let evals: Vec<(u64, Result<Trial>)> = (0..opts.trials as u64)
        .into_par_iter()
        .map(|i| (i, replay(opts.source, seed::derive(opts.seed, i), opts.max_n)))
        .collect();
    let mut skipped = 0;
    let mut evaluated = 0;
    let mut min = MinSlack { all_odd_cycles: None, odd_cycles_in_d: None, disjoint_odd_cycles: None };
    let mut violations = 0;
    let mut strict = 0;
    let mut findings = Vec::new();
    if let Some(dir) = &opts.out {
        std::fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
    }
    for (trial, r) in evals {
        let (g, e) = match r {
            Ok(Some(x)) => x,
            Ok(None) => {
                skipped += 1;
                continue;
            }
            Err(e) if e.is_guard() => {
                skipped += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        evaluated += 1;
        for (name, rd) in e.readings() {
            let slot = match name {
                "allOddCycles" => &mut min.all_odd_cycles,
                "oddCyclesInD" => &mut min.odd_cycles_in_d,
                _ => &mut min.disjoint_odd_cycles,
            };
            *slot = Some(slot.map_or(rd.slack, |s: isize| s.min(rd.slack)));
        }
        let kind = if e.violates() {
            violations += 1;
            "violation"
        } else if e.strict() {
            strict += 1;
            if strict > PERSIST_CAP {
                continue;
            }
            "strict"
        } else {
            continue;
        };
        let file = match &opts.out {
            Some(dir) => {
                let name = format!("{kind}-trial{trial}.txt");
                let path = dir.join(&name);
                std::fs::write(&path, g.to_edge_list()).map_err(|err| io_error(&path, err))?;
                Some(name)
            }
            None => None,
        };
        findings.push(Finding { kind: kind.into(), trial, file, evaluation: e });
    }
    let report = SearchReport {
        conjecture: "corona-ker-bound".into(),
        source: opts.source,
        trials: opts.trials,
        seed: opts.seed,
        max_n: opts.max_n,
        evaluated,
        skipped,
        min_slack: min,
        violations,
        strict_witnesses: strict,
        findings,
    };
    if let Some(dir) = &opts.out {
        let path = dir.join("manifest.json");
        std::fs::write(&path, report.to_json()).map_err(|e| io_error(&path, e))?;
    }
    Ok(report)
}

impl SearchReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
