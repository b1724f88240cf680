//! One-shot analysis of a graph, as printed by `babgraph analyze`.

use std::fmt::Write as _;

use serde::Serialize;

use crate::bab::{fast_critical_sets, is_r_disjoint, recognize_bab, theorem_suite, BabStructure, TheoremReport};
use crate::error::{Error, Result};
use crate::flower::sterboul_certificate;
use crate::gallai_edmonds::{gallai_edmonds, validate_ge};
use crate::graph::{Graph, VertexSet, DEFAULT_CYCLE_CAP};
use crate::independence::{
    alpha_with_limit, core_corona, critical_difference, critical_profile_with_limit, ker_hall_check,
    DEFAULT_PROFILE_LIMIT,
};
use crate::matching::{ensure_maximum, maximum_matching};
use crate::oracle;
use crate::spectral::{
    adjacency_determinant, exact_json, has_sachs_subgraph, sachs_expansion, ExactInt, DEFAULT_SACHS_CAP,
};

/// Largest order the brute-force oracles accept.
const ORACLE_LIMIT: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnalyzeOptions {
    /// Cross-check every fast path against its enumeration oracle.
    pub oracle: bool,
    /// Largest order accepted.
    pub max_n: usize,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions { oracle: false, max_n: DEFAULT_PROFILE_LIMIT }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnalysisReport {
    pub n: usize,
    pub m: usize,
    pub alpha: usize,
    pub mu: usize,
    pub deficiency: usize,
    #[serde(rename = "isKE")]
    pub is_ke: bool,
    #[serde(rename = "D")]
    pub d_set: VertexSet,
    #[serde(rename = "A")]
    pub a_set: VertexSet,
    #[serde(rename = "C")]
    pub c_set: VertexSet,
    #[serde(rename = "X")]
    pub x_set: VertexSet,
    #[serde(rename = "Y")]
    pub y_set: VertexSet,
    pub d: isize,
    pub ker: VertexSet,
    pub core: VertexSet,
    pub nucleus: VertexSet,
    pub diadem: VertexSet,
    pub corona: VertexSet,
    #[serde(rename = "oddCycleCount")]
    pub odd_cycle_count: usize,
    #[serde(rename = "rDisjoint")]
    pub r_disjoint: bool,
    #[serde(rename = "babStructure")]
    pub bab_structure: Option<BabStructure>,
    #[serde(serialize_with = "exact_json::one")]
    pub det: ExactInt,
    #[serde(rename = "hasSachs")]
    pub has_sachs: bool,
    #[serde(rename = "theoremSuite")]
    pub theorem_suite: Option<TheoremReport>,
}

fn disagree(what: &str, fast: impl std::fmt::Display, oracle: impl std::fmt::Display) -> Error {
    Error::RoutesDisagree(format!("{what}: fast path {fast}, oracle {oracle}"))
}

pub fn analyze(g: &Graph, opts: AnalyzeOptions) -> Result<AnalysisReport> {
    let n = g.order();
    if n > opts.max_n {
        return Err(Error::SizeGuard { stage: "analyze", n, limit: opts.max_n });
    }
    let profile = critical_profile_with_limit(g, opts.max_n)?;
    let m = maximum_matching(g);
    let mu = m.size();
    let dec = gallai_edmonds(g);
    let odd_cycle_count = g.enumerate_odd_cycles(DEFAULT_CYCLE_CAP)?.len();
    let r_disjoint = is_r_disjoint(g)?.r_disjoint;
    let bab_structure = recognize_bab(g)?.structure;
    let theorem_suite = bab_structure.as_ref().map(|s| theorem_suite(g, s)).transpose()?;
    let det = adjacency_determinant(g);
    let has_sachs = has_sachs_subgraph(g)?.exists;
    let report = AnalysisReport {
        n,
        m: g.edge_count(),
        alpha: profile.alpha,
        mu,
        deficiency: n - 2 * mu,
        is_ke: profile.alpha + mu == n,
        d_set: dec.d.clone(),
        a_set: dec.a.clone(),
        c_set: dec.c.clone(),
        x_set: dec.x.clone(),
        y_set: dec.y.clone(),
        d: profile.d,
        ker: profile.ker.clone(),
        core: profile.core.clone(),
        nucleus: profile.nucleus.clone(),
        diadem: profile.diadem.clone(),
        corona: profile.corona.clone(),
        odd_cycle_count,
        r_disjoint,
        bab_structure,
        det,
        has_sachs,
        theorem_suite,
    };
    if opts.oracle {
        cross_check(g, &report, opts)?;
    }
    Ok(report)
}

/// Recomputes every reported quantity along a second route.
fn cross_check(g: &Graph, r: &AnalysisReport, opts: AnalyzeOptions) -> Result<()> {
    if g.order() > ORACLE_LIMIT {
        return Err(Error::SizeGuard { stage: "oracle cross-check", n: g.order(), limit: ORACLE_LIMIT });
    }
    let (alpha, witness) = alpha_with_limit(g, opts.max_n.max(DEFAULT_PROFILE_LIMIT))?;
    if alpha != r.alpha || alpha != oracle::alpha_by_subsets(g) || witness.len() != alpha {
        return Err(disagree("alpha", alpha, r.alpha));
    }
    let (core, corona) = core_corona(g)?;
    if core != r.core || corona != r.corona {
        return Err(disagree("core/corona", format!("{core}/{corona}"), format!("{}/{}", r.core, r.corona)));
    }
    let d = critical_difference(g)?;
    if d != r.d {
        return Err(disagree("critical difference", d, r.d));
    }
    if !ker_hall_check(g, &r.ker)? {
        return Err(Error::RoutesDisagree(format!("ker {} fails the Hall characterization", r.ker)));
    }
    let (mu, dset) = oracle::matching_number_and_d(g);
    if mu != r.mu || dset != r.d_set {
        return Err(disagree("matching number / D", format!("{} / {}", r.mu, r.d_set), format!("{mu} / {dset}")));
    }
    let m = maximum_matching(g);
    ensure_maximum(g, &m)?;
    let dec = gallai_edmonds(g);
    let problems = validate_ge(g, &dec, &m);
    if !problems.is_empty() {
        return Err(Error::RoutesDisagree(format!("Gallai–Edmonds: {}", problems.join("; "))));
    }
    let cert = sterboul_certificate(g, &m)?;
    if cert.is_some() == r.is_ke {
        return Err(disagree("KE via certificates", cert.is_none(), r.is_ke));
    }
    let expansion = sachs_expansion(g, DEFAULT_SACHS_CAP)?;
    if expansion != r.det {
        return Err(disagree("determinant", &r.det, expansion));
    }
    if let Some(s) = &r.bab_structure {
        let f = fast_critical_sets(g, s)?;
        if f.nucleus != r.nucleus || f.diadem != r.diadem || f.ker != r.ker {
            return Err(disagree(
                "nucleus/diadem/ker",
                format!("{}/{}/{}", f.nucleus, f.diadem, f.ker),
                format!("{}/{}/{}", r.nucleus, r.diadem, r.ker),
            ));
        }
    }
    Ok(())
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "order {} size {}", self.n, self.m);
        let _ = writeln!(s, "alpha {}  mu {}  deficiency {}  KE {}", self.alpha, self.mu, self.deficiency, self.is_ke);
        let _ = writeln!(s, "D {}  A {}  C {}", self.d_set, self.a_set, self.c_set);
        let _ = writeln!(s, "X {}  Y {}", self.x_set, self.y_set);
        let _ = writeln!(s, "d {}  ker {}  core {}", self.d, self.ker, self.core);
        let _ = writeln!(s, "nucleus {}  diadem {}  corona {}", self.nucleus, self.diadem, self.corona);
        let _ = writeln!(s, "odd cycles {}  R-disjoint {}", self.odd_cycle_count, self.r_disjoint);
        match &self.bab_structure {
            Some(b) => {
                let parts: Vec<String> = b.parts.iter().map(|p| p.to_string()).collect();
                let _ = writeln!(s, "BAB k={} B {} parts [{}]", b.k, b.b, parts.join(", "));
            }
            None => {
                let _ = writeln!(s, "BAB no");
            }
        }
        let _ = writeln!(s, "det {}  Sachs subgraph {}", self.det, self.has_sachs);
        if let Some(t) = &self.theorem_suite {
            for c in &t.clauses {
                let _ = writeln!(s, "  [{}] {}: {}", if c.holds { "ok" } else { "FAIL" }, c.clause, c.detail);
            }
        }
        s
    }
}
