use serde::{Deserialize, Serialize};

use super::{fast_critical_sets, BabStructure};
use crate::error::Result;
use crate::gallai_edmonds::gallai_edmonds;
use crate::graph::{Graph, VertexSet, DEFAULT_CYCLE_CAP};
use crate::independence::{critical_profile, difference, is_independent};
use crate::matching::matching_number;
use crate::spectral::has_sachs_subgraph;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClauseResult {
    pub clause: String,
    pub holds: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TheoremReport {
    pub clauses: Vec<ClauseResult>,
    /// Odd-cycle count equals `k`, i.e. the graph is R-disjoint.
    pub r_disjoint: bool,
    /// `|corona| + |ker| = 2α + k`.
    pub corona_ker_equality: bool,
    pub has_sachs: bool,
}

impl TheoremReport {
    pub fn all_hold(&self) -> bool {
        self.clauses.iter().all(|c| c.holds)
    }

    pub fn failures(&self) -> Vec<&ClauseResult> {
        self.clauses.iter().filter(|c| !c.holds).collect()
    }
}

/// Evaluates every structural identity of a BAB graph against the
/// enumeration oracles.
pub fn theorem_suite(g: &Graph, s: &BabStructure) -> Result<TheoremReport> {
    s.validate(g)?;
    let n = g.order();
    let k = s.k;
    let p = critical_profile(g)?;
    let dec = gallai_edmonds(g);
    let fast = fast_critical_sets(g, s)?;
    let sachs = has_sachs_subgraph(g)?;
    let odd_cycles = g.enumerate_odd_cycles(DEFAULT_CYCLE_CAP)?.len();
    let r_disjoint = odd_cycles == k && k > 0;
    let full = VertexSet::full(n);
    let two_alpha_k = 2 * p.alpha + k;
    let mut clauses = Vec::new();
    let mut push = |clause: &str, holds: bool, detail: String| {
        clauses.push(ClauseResult { clause: clause.into(), holds, detail });
    };

    // Sides of G[C], the one holding the least C-vertex first.
    let sides = dec.c_bipartition.clone().map(|(u, w)| {
        if w.as_slice().first() < u.as_slice().first() && !w.is_empty() {
            (w, u)
        } else {
            (u, w)
        }
    });
    match &sides {
        Some((u, _)) => {
            let cyc: VertexSet = s
                .odd_cycles
                .iter()
                .flat_map(|c| c.vertices().iter().step_by(2).take(c.len() / 2).copied().collect::<Vec<_>>())
                .collect();
            let set = p.nucleus.union(&cyc).union(u);
            let ok = is_independent(g, &set) && set.len() == p.alpha;
            push("a", ok, format!("nucleus ∪ S ∪ U = {set}, size {} vs α = {}", set.len(), p.alpha));
        }
        None => push("a", false, "G[C] is not bipartite".into()),
    }

    let cov = p.corona.union(&dec.a);
    push("b", cov == full, format!("corona ∪ A = {cov}"));

    push("c", p.core.is_subset(&p.nucleus), format!("core = {}, nucleus = {}", p.core, p.nucleus));

    let rhs = dec.d.len() + p.nucleus.len() + dec.c.len();
    push(
        "d",
        two_alpha_k == rhs,
        format!(
            "2α + k = {two_alpha_k}, |D| + |nucleus| + |C| = {} + {} + {}",
            dec.d.len(),
            p.nucleus.len(),
            dec.c.len()
        ),
    );

    let lhs = p.corona.len() + p.ker.len();
    let eq = lhs == two_alpha_k;
    push(
        "e",
        lhs <= two_alpha_k && (!r_disjoint || eq),
        format!("|corona| + |ker| = {} + {} vs 2α + k = {two_alpha_k}", p.corona.len(), p.ker.len()),
    );

    let nd = g.neighborhood(&p.diadem, true)?;
    push("f", nd.union(&dec.y) == full && nd.is_disjoint(&dec.y), format!("N[diadem] = {nd}, Y = {}", dec.y));

    let chain = p.ker.is_subset(&p.core)
        && p.core.is_subset(&p.nucleus)
        && p.nucleus.is_subset(&p.diadem)
        && p.diadem.is_subset(&p.corona);
    push("g", chain, "ker ⊆ core ⊆ nucleus ⊆ diadem ⊆ corona".into());

    if sachs.exists {
        let (gb, _) = g.induced_subgraph(&s.b)?;
        let mu_b = matching_number(&gb);
        let def_b = gb.order() - 2 * mu_b;
        let mu = matching_number(g);
        let def = n - 2 * mu;
        let rest = n - s.b.len() - k;
        let ok = p.nucleus.len() == dec.a.len() && def == def_b + k && rest.is_multiple_of(2) && mu == rest / 2 + mu_b;
        push(
            "h",
            ok,
            format!(
                "|nucleus| = {}, |A| = {}; def {def} vs {def_b} + {k}; μ {mu} vs {rest}/2 + {mu_b}",
                p.nucleus.len(),
                dec.a.len()
            ),
        );
    } else {
        push("h", true, "no Sachs subgraph; clause is vacuous".into());
    }

    match &sides {
        Some((u, w)) => {
            let best = p.witnesses.maximum_critical_independent.len();
            let ok = [u, w].iter().all(|side| {
                let set = dec.x.union(side);
                is_independent(g, &set) && set.len() == best && (difference(g, &set) == Ok(p.d_i))
            });
            push("sides", ok, format!("X ∪ U and X ∪ W against maximum critical size {best}"));
        }
        None => push("sides", false, "G[C] is not bipartite".into()),
    }

    push("sum", two_alpha_k as isize == p.d + n as isize, format!("2α + k = {two_alpha_k}, d + |G| = {} + {n}", p.d));

    let ok = fast.nucleus == p.nucleus && fast.diadem == p.diadem && fast.ker == p.ker;
    push(
        "closed-forms",
        ok,
        format!(
            "nucleus {} / {}, diadem {} / {}, ker {} / {}",
            fast.nucleus, p.nucleus, fast.diadem, p.diadem, fast.ker, p.ker
        ),
    );

    Ok(TheoremReport { clauses, r_disjoint, corona_ker_equality: eq, has_sachs: sachs.exists })
}
