//! Acceptance suite. Runs without the libtest harness and prints one line per
//! criterion; exits nonzero if any criterion fails.
//!
//! `cargo test --test acceptance` runs everything. A single criterion can be
//! selected with `ACCEPTANCE_ONLY=7`.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use babgraph::bab::{fast_critical_sets, is_r_disjoint, BabStructure};
use babgraph::flower::certificate_for_cycles;
use babgraph::gallai_edmonds::gallai_edmonds;
use babgraph::graph::DEFAULT_CYCLE_CAP;
use babgraph::independence::{critical_difference, critical_profile, CriticalProfile};
use babgraph::matching::{all_maximum_matchings, deficiency, maximum_matching};
use babgraph::report::{analyze, AnalyzeOptions};
use babgraph::search::{self, SearchOptions, Source};
use babgraph::spectral::{
    adjacency_determinant, check_det_factorization, for_each_sachs, sachs_expansion, ExactInt, DEFAULT_SACHS_CAP,
};
use babgraph::verify::{graph_from_mask, random_bab, random_graph};
use babgraph::{fixtures, oracle, seed, Graph, VertexSet};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn set(v: &[usize]) -> VertexSet {
    v.iter().copied().collect()
}

/// Every labeled graph on `0..=n_max` vertices.
fn all_graphs(n_max: usize) -> impl Iterator<Item = Graph> {
    (0..=n_max).flat_map(|n| (0..1u64 << (n * n.saturating_sub(1) / 2)).map(move |m| graph_from_mask(n, m)))
}

fn random_graphs(master: u64, count: u64, max_n: usize) -> impl Iterator<Item = (u64, Graph)> {
    (0..count).map(move |i| {
        let s = seed::derive(master, i);
        (s, random_graph(&mut seed::rng(s), max_n))
    })
}

struct Instance {
    seed: u64,
    g: Graph,
    s: BabStructure,
}

fn bab_corpus(master: u64, size: usize, max_n: usize) -> Vec<Instance> {
    let mut out = Vec::with_capacity(size);
    let mut i = 0;
    while out.len() < size {
        let s = seed::derive(master, i);
        i += 1;
        assert!(i < 50 * size as u64, "generator keeps overshooting n <= {max_n}");
        if let Some((g, st)) = random_bab(s, max_n).expect("generator parameters are feasible") {
            out.push(Instance { seed: s, g, s: st });
        }
    }
    out
}

const CORPUS_SEED: u64 = 0x00ba_b000;

fn fixture_exactness() -> Outcome {
    let opts = AnalyzeOptions { oracle: true, ..Default::default() };
    let g = fixtures::bab9();
    let r = analyze(&g, opts).map_err(|e| e.to_string())?;
    let (mu, d) = oracle::matching_number_and_d(&g);
    ensure!(oracle::alpha_by_subsets(&g) == 4 && r.alpha == 4, "BAB9 alpha {}", r.alpha);
    ensure!(mu == 4 && r.mu == 4 && r.deficiency == 1, "BAB9 mu {} def {}", r.mu, r.deficiency);
    ensure!(d == set(&[0, 1, 2, 3, 4, 6]) && r.d_set == d, "BAB9 D {}", r.d_set);
    ensure!(r.a_set == set(&[5]) && r.c_set == set(&[7, 8]), "BAB9 A {} C {}", r.a_set, r.c_set);
    ensure!(r.nucleus == set(&[6]) && r.diadem == set(&[6, 7, 8]), "BAB9 nucleus {} diadem {}", r.nucleus, r.diadem);
    ensure!(r.ker.is_empty() && r.core.is_empty(), "BAB9 ker {} core {}", r.ker, r.core);
    ensure!(r.corona == VertexSet::full(9), "BAB9 corona {}", r.corona);
    ensure!(r.det == ExactInt::from(2), "BAB9 det {}", r.det);

    let g = fixtures::flower7();
    let r = analyze(&g, opts).map_err(|e| e.to_string())?;
    ensure!(oracle::alpha_by_subsets(&g) == 3 && r.alpha == 3, "FLOWER7 alpha {}", r.alpha);
    ensure!(oracle::matching_number_and_d(&g).0 == 3 && r.mu == 3, "FLOWER7 mu {}", r.mu);
    ensure!(!r.is_ke, "FLOWER7 reported KE");
    ensure!(r.nucleus == set(&[6]) && r.diadem == set(&[6]), "FLOWER7 nucleus {} diadem {}", r.nucleus, r.diadem);
    ensure!(r.ker.is_empty(), "FLOWER7 ker {}", r.ker);
    ensure!(r.det == ExactInt::from(-2), "FLOWER7 det {}", r.det);
    Ok("BAB9 and FLOWER7 match on every field".into())
}

fn zhang(g: &Graph) -> Result<(), String> {
    let p = critical_profile(g).map_err(|e| e.to_string())?;
    let d = critical_difference(g).map_err(|e| e.to_string())?;
    ensure!(p.d == p.d_i && d == p.d, "d = {}, d_I = {}, scan {d} on {:?}", p.d, p.d_i, g.edges());
    Ok(())
}

fn zhang_equality() -> Outcome {
    let mut count = 0;
    for g in all_graphs(6) {
        zhang(&g)?;
        count += 1;
    }
    for (_, g) in random_graphs(2, 5000, 14) {
        zhang(&g)?;
        count += 1;
    }
    Ok(format!("{count} graphs"))
}

/// `i(G - S) <= |S|` for every `S`, by direct subset scan.
fn tutte_type_condition(g: &Graph) -> bool {
    let n = g.order();
    let masks = g.neighbor_masks();
    (0u64..1 << n).all(|s| {
        let isolated = (0..n).filter(|&v| s >> v & 1 == 0 && masks[v] & !s == 0).count();
        isolated <= s.count_ones() as usize
    })
}

fn sachs_three_way() -> Outcome {
    let mut count = 0;
    let mut with = 0;
    for g in all_graphs(6) {
        let mut exists = false;
        for_each_sachs(&g, DEFAULT_SACHS_CAP, |_| {
            exists = true;
            true
        })
        .map_err(|e| e.to_string())?;
        let tutte = tutte_type_condition(&g);
        let ker_empty = critical_profile(&g).map_err(|e| e.to_string())?.ker.is_empty();
        ensure!(
            exists == tutte && tutte == ker_empty,
            "{:?}: sachs {exists}, tutte {tutte}, ker empty {ker_empty}",
            g.edges()
        );
        count += 1;
        with += exists as usize;
    }
    Ok(format!("{count} graphs, {with} with a Sachs subgraph"))
}

fn expansion_equals_determinant() -> Outcome {
    let check = |g: &Graph| -> Result<(), String> {
        let e = sachs_expansion(g, DEFAULT_SACHS_CAP).map_err(|e| e.to_string())?;
        let d = adjacency_determinant(g);
        ensure!(e == d, "{:?}: expansion {e}, determinant {d}", g.edges());
        Ok(())
    };
    let mut count = 0;
    for g in all_graphs(6) {
        check(&g)?;
        count += 1;
    }
    for (_, g) in random_graphs(4, 1000, 10) {
        check(&g)?;
        count += 1;
    }
    Ok(format!("{count} graphs"))
}

fn det_factorization() -> Outcome {
    let corpus = bab_corpus(CORPUS_SEED ^ 5, 500, 24);
    let largest = corpus.iter().map(|x| x.g.order()).max().unwrap_or(0);
    for x in &corpus {
        let r = check_det_factorization(&x.g, &x.s).map_err(|e| format!("seed {:#x}: {e}", x.seed))?;
        ensure!(r.factorizes, "seed {:#x}: det {} vs det(B)·Π det(G_i) = {}", x.seed, r.det, r.product);
    }
    Ok(format!("500 instances, largest n = {largest}"))
}

struct Profiled<'a> {
    x: &'a Instance,
    p: CriticalProfile,
}

fn profiled(corpus: &[Instance]) -> Result<Vec<Profiled<'_>>, String> {
    corpus
        .iter()
        .map(|x| critical_profile(&x.g).map(|p| Profiled { x, p }).map_err(|e| format!("seed {:#x}: {e}", x.seed)))
        .collect()
}

fn fast_sets(corpus: &[Profiled]) -> Outcome {
    for Profiled { x, p } in corpus {
        let f = fast_critical_sets(&x.g, &x.s).map_err(|e| format!("seed {:#x}: {e}", x.seed))?;
        ensure!(
            f.nucleus == p.nucleus && f.diadem == p.diadem && f.ker == p.ker,
            "seed {:#x}: fast {}/{}/{} vs oracle {}/{}/{}",
            x.seed,
            f.nucleus,
            f.diadem,
            f.ker,
            p.nucleus,
            p.diadem,
            p.ker
        );
    }
    Ok(format!("{} instances", corpus.len()))
}

fn identities(corpus: &[Profiled]) -> Outcome {
    for Profiled { x, p } in corpus {
        let dec = gallai_edmonds(&x.g);
        let lhs = 2 * p.alpha + x.s.k;
        let rhs = dec.d.len() + p.nucleus.len() + dec.c.len();
        ensure!(lhs == rhs, "seed {:#x}: 2α + k = {lhs}, |D| + |nucleus| + |C| = {rhs}", x.seed);
        ensure!(p.corona.union(&dec.a) == VertexSet::full(x.g.order()), "seed {:#x}: corona ∪ A ≠ V", x.seed);
        let chain = p.ker.is_subset(&p.core)
            && p.core.is_subset(&p.nucleus)
            && p.nucleus.is_subset(&p.diadem)
            && p.diadem.is_subset(&p.corona);
        ensure!(chain, "seed {:#x}: inclusion chain broken", x.seed);
    }
    Ok(format!("{} instances", corpus.len()))
}

fn corona_ker(corpus: &[Profiled]) -> Outcome {
    let mut r_disjoint = 0;
    let mut tried = 0u64;
    while r_disjoint < 200 {
        ensure!(tried < 20_000, "only {r_disjoint} R-disjoint instances in {tried} generator draws");
        let s = seed::derive(CORPUS_SEED ^ 8, tried);
        tried += 1;
        let Some((g, st)) = random_bab(s, 16).map_err(|e| e.to_string())? else { continue };
        if !is_r_disjoint(&g).map_err(|e| e.to_string())?.r_disjoint {
            continue;
        }
        r_disjoint += 1;
        let odd = g.enumerate_odd_cycles(DEFAULT_CYCLE_CAP).map_err(|e| e.to_string())?.len();
        ensure!(odd == st.k, "seed {s:#x}: R-disjoint with {odd} odd cycles but k = {}", st.k);
        let p = critical_profile(&g).map_err(|e| e.to_string())?;
        let (lhs, rhs) = (p.corona.len() + p.ker.len(), 2 * p.alpha + odd);
        ensure!(lhs == rhs, "seed {s:#x}: |corona| + |ker| = {lhs}, 2α + k = {rhs}");
    }
    for Profiled { x, p } in corpus {
        let lhs = p.corona.len() + p.ker.len();
        let rhs = 2 * p.alpha + x.s.k;
        ensure!(lhs <= rhs, "seed {:#x}: |corona| + |ker| = {lhs} > 2α + k = {rhs}", x.seed);
        let dn = p.d + x.g.order() as isize;
        ensure!(rhs as isize == dn, "seed {:#x}: 2α + k = {rhs}, d + n = {dn}", x.seed);
    }
    Ok(format!("equality on 200 R-disjoint ({tried} draws), bound on {}", corpus.len()))
}

fn strict_witness() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let report = search::run(&SearchOptions {
        trials: 10_000,
        seed: 9,
        max_n: 14,
        source: Source::Bab,
        out: Some(dir.path().to_path_buf()),
    })
    .map_err(|e| e.to_string())?;
    ensure!(report.violations == 0, "{} violations of the bound on BAB instances", report.violations);
    let Some(f) = report.findings.iter().find(|f| f.kind == "strict") else {
        return Err(format!("no strict witness in {} trials", report.trials));
    };
    let file = dir.path().join(f.file.as_ref().ok_or("witness not persisted")?);
    ensure!(dir.path().join("manifest.json").exists(), "manifest missing");
    let out = Command::new(env!("CARGO_BIN_EXE_babgraph"))
        .args(["analyze", "--oracle", "--json"])
        .arg(&file)
        .output()
        .map_err(|e| e.to_string())?;
    ensure!(out.status.success(), "analyze --oracle exited {:?}: {}", out.status, String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let k = v["babStructure"]["k"].as_u64().ok_or("analyzer found no BAB structure")? as usize;
    let alpha = v["alpha"].as_u64().unwrap() as usize;
    let lhs = v["corona"].as_array().unwrap().len() + v["ker"].as_array().unwrap().len();
    ensure!(lhs < 2 * alpha + k, "re-analysis: {lhs} vs 2α + k = {}", 2 * alpha + k);
    Ok(format!(
        "trial {} of {}: {lhs} < 2·{alpha} + {k}; {} strict witnesses total",
        f.trial, report.trials, report.strict_witnesses
    ))
}

fn deficiency_identity(corpus: &[Profiled]) -> Outcome {
    let mut with = 0;
    for Profiled { x, p } in corpus {
        if !p.ker.is_empty() {
            continue;
        }
        let mut exists = false;
        for_each_sachs(&x.g, DEFAULT_SACHS_CAP, |_| {
            exists = true;
            true
        })
        .map_err(|e| e.to_string())?;
        if !exists {
            continue;
        }
        with += 1;
        let b = x.g.induced_subgraph(&x.s.b).map_err(|e| e.to_string())?.0;
        let (dg, db) = (deficiency(&x.g), deficiency(&b));
        ensure!(dg == db + x.s.k, "seed {:#x}: def(G) = {dg}, def(B) + k = {db} + {}", x.seed, x.s.k);
    }
    ensure!(with > 0, "no instance with a Sachs subgraph");
    Ok(format!("{with} instances with a Sachs subgraph"))
}

fn sterboul(g: &Graph) -> Result<(), String> {
    let cycles = g.enumerate_odd_cycles(DEFAULT_CYCLE_CAP).map_err(|e| e.to_string())?;
    let mu = maximum_matching(g).size();
    let ke = oracle::alpha_by_subsets(g) + mu == g.order();
    for m in all_maximum_matchings(g, 10_000).map_err(|e| e.to_string())? {
        let cert = certificate_for_cycles(g, &m, &cycles, usize::MAX).map_err(|e| e.to_string())?;
        if let Some(c) = &cert {
            c.validate(g, &m).map_err(|e| format!("{:?}: invalid certificate: {e}", g.edges()))?;
        }
        ensure!(
            cert.is_some() != ke,
            "{:?}: KE = {ke}, certificate for {:?} = {}",
            g.edges(),
            m.edges(),
            cert.is_some()
        );
    }
    Ok(())
}

fn sterboul_equivalence() -> Outcome {
    let mut count = 0;
    for g in all_graphs(7) {
        sterboul(&g)?;
        count += 1;
    }
    Ok(format!("{count} graphs"))
}

fn verify_json(threads: Option<&str>) -> Result<Vec<u8>, String> {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_babgraph"));
    if let Some(t) = threads {
        cmd.args(["--threads", t]);
    }
    let out =
        cmd.args(["verify", "--random", "500", "--max-n", "12", "--seed", "7"]).output().map_err(|e| e.to_string())?;
    ensure!(out.status.success(), "verify exited {:?}: {}", out.status, String::from_utf8_lossy(&out.stderr));
    Ok(out.stdout)
}

fn determinism() -> Outcome {
    let a = verify_json(None)?;
    let b = verify_json(None)?;
    let one = verify_json(Some("1"))?;
    let four = verify_json(Some("4"))?;
    ensure!(a == b, "two default runs differ");
    ensure!(a == one && a == four, "output depends on the thread count");
    Ok(format!("{} bytes identical over 4 runs (default, default, 1, 4 threads)", a.len()))
}

struct Criterion<'a> {
    id: u32,
    name: &'static str,
    limit: Option<Duration>,
    run: Box<dyn FnOnce() -> Outcome + 'a>,
}

fn main() {
    let only: Option<u32> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let wanted = |id: u32| only.is_none_or(|o| o == id);
    let needs_corpus = [6, 7, 8, 10].iter().any(|&i| wanted(i));
    let corpus = if needs_corpus { bab_corpus(CORPUS_SEED, 500, 16) } else { Vec::new() };
    let t = Instant::now();
    let profiled = profiled(&corpus);
    let profile_time = t.elapsed();
    let with_corpus = |f: fn(&[Profiled]) -> Outcome| {
        let p = &profiled;
        move || p.as_ref().map_err(|e| e.clone()).and_then(|p| f(p))
    };
    let secs = |s| Some(Duration::from_secs(s));
    let criteria: Vec<Criterion> = vec![
        Criterion { id: 1, name: "fixture exactness", limit: secs(1), run: Box::new(fixture_exactness) },
        Criterion { id: 2, name: "d = d_I", limit: secs(60), run: Box::new(zhang_equality) },
        Criterion { id: 3, name: "Sachs existence three-way", limit: secs(120), run: Box::new(sachs_three_way) },
        Criterion {
            id: 4,
            name: "Sachs expansion = determinant",
            limit: secs(120),
            run: Box::new(expansion_equals_determinant),
        },
        Criterion { id: 5, name: "determinant factorization", limit: secs(120), run: Box::new(det_factorization) },
        Criterion { id: 6, name: "fast nucleus/diadem/ker", limit: secs(300), run: Box::new(with_corpus(fast_sets)) },
        Criterion { id: 7, name: "2α+k identity, cover, chain", limit: None, run: Box::new(with_corpus(identities)) },
        Criterion { id: 8, name: "corona-ker equality and bound", limit: None, run: Box::new(with_corpus(corona_ker)) },
        Criterion { id: 9, name: "strict-inequality witness", limit: None, run: Box::new(strict_witness) },
        Criterion { id: 10, name: "def(G) = def(B) + k", limit: None, run: Box::new(with_corpus(deficiency_identity)) },
        Criterion {
            id: 11,
            name: "flower/posy equivalence n <= 7",
            limit: secs(300),
            run: Box::new(sterboul_equivalence),
        },
        Criterion { id: 12, name: "verify determinism", limit: None, run: Box::new(determinism) },
    ];
    let mut failed = 0;
    for c in criteria {
        if !wanted(c.id) {
            continue;
        }
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|_| Err("panicked".into()));
        let mut took = start.elapsed();
        // The oracle profiles of the shared corpus are charged to criterion 6.
        if c.id == 6 {
            took += profile_time;
        }
        let result = match (result, c.limit) {
            (Ok(_), Some(limit)) if took > limit => Err(format!("took {took:.1?}, limit {limit:?}")),
            (r, _) => r,
        };
        let (tag, detail) = match &result {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        failed += result.is_err() as usize;
        println!("criterion {:>2} {tag}  {:<32} {:>8.2}s  {detail}", c.id, c.name, took.as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
