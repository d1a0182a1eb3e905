//! Acceptance report: one PASS / FAIL / SKIPPED line per criterion.
//!
//! Runs without the libtest harness so the report is always printed. The
//! process fails on any FAIL that is not listed in `DOCUMENTED`.
//!
//! The two census criteria need catalogs in `$OM_CATALOG_DIR`
//! (`uniform_4_8.txt`, `nonuniform_4_8.txt`); without them they are SKIPPED.

mod common;

use std::path::PathBuf;
use std::time::{Duration, Instant};

use common::{brute_disjoint, internal_sets, random_dag, realized_covectors};
use holtklee::chirotope::binomial;
use holtklee::classify::{batch_classify, classify_om, ingest_catalog, BatchOptions, Mode};
use holtklee::coshell::{coline_shelling, is_hkstar_fixation, is_proper_fixation, shelling_digraph, ColineFixation};
use holtklee::exact::rat_vec;
use holtklee::fixtures::{alternating_4_8, ic_8_4_2_om, IC_8_4_2_BLOCK};
use holtklee::geom::{
    build_non_hkstar, five_vertex_polytopes, is_sensitive, simplex_3, six_vertex_catalog,
};
use holtklee::geom::lp::sensitive_census;
use holtklee::omp::{program_report, Program};
use holtklee::{Chirotope, OrientedMatroid, Sign};
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::TestRunner;

/// Criteria whose FAIL is an understood data discrepancy rather than a bug.
const DOCUMENTED: &[(usize, &str)] = &[(
    4,
    "the printed IC(8,4,2) table has 22 simplicial topes, so it is Shannon; see the decisions ledger",
)];

enum Status {
    Pass,
    Fail,
    Skipped,
}

type Criterion = (&'static str, Box<dyn Fn() -> Outcome>, Duration);

struct Outcome {
    status: Status,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome { status: Status::Pass, detail: detail.into() }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome { status: Status::Fail, detail: detail.into() }
}

fn skipped(detail: impl Into<String>) -> Outcome {
    Outcome { status: Status::Skipped, detail: detail.into() }
}

fn verdict(ok: bool, detail: String) -> Outcome {
    if ok {
        pass(detail)
    } else {
        fail(detail)
    }
}

fn within(limit: Duration, start: Instant, outcome: Outcome) -> Outcome {
    let took = start.elapsed();
    match outcome.status {
        Status::Pass if took > limit => fail(format!("{} (took {took:?}, limit {limit:?})", outcome.detail)),
        _ => Outcome { detail: format!("{} [{:.2?}]", outcome.detail, took), ..outcome },
    }
}

fn same_up_to_reversal(a: &[usize], b: &[usize]) -> bool {
    a == b || a.iter().rev().eq(b.iter())
}

fn fixture_reproduction() -> Outcome {
    let chi = Chirotope::parse(IC_8_4_2_BLOCK).expect("fixture parses");
    let sign = chi.sign_of(&[1, 2, 3, 5]).expect("basis");
    verdict(
        chi.is_uniform() && chi.rank() == 4 && chi.ground_size() == 8 && chi.signs().len() == 70 && sign == Sign::Plus,
        format!(
            "n={} r={} signs={} uniform={} sign(1,2,3,5)={sign}",
            chi.ground_size(),
            chi.rank(),
            chi.signs().len(),
            chi.is_uniform()
        ),
    )
}

fn ic_fixation() -> ColineFixation {
    ColineFixation::new(ic_8_4_2_om(), &[1, 8]).expect("{1,8} is a coline")
}

fn shelling_certificate() -> Outcome {
    match coline_shelling(&ic_fixation()) {
        Ok(s) => verdict(same_up_to_reversal(&s.order, &[3, 2, 7, 6, 4, 5]), format!("order {:?}", s.order)),
        Err(e) => fail(e.to_string()),
    }
}

fn non_hkstar_certificate() -> Outcome {
    let omega = ic_fixation();
    let (graph, report) = match (shelling_digraph(&omega), is_hkstar_fixation(&omega)) {
        (Ok(g), Ok(r)) => (g, r),
        (Err(e), _) | (_, Err(e)) => return fail(e.to_string()),
    };
    let label = |v: Option<usize>| v.map(|v| graph.labels()[v].clone());
    let source = label(report.source);
    let sink = label(report.sink);
    // the two ends of the staircase may be swapped when the order is reversed
    let ends = matches!(
        (source.as_deref(), sink.as_deref()),
        (Some("3"), Some("5")) | (Some("5"), Some("3"))
    );
    verdict(
        ends && report.disjoint_path_count == 2 && report.required_d == 3 && !report.holds,
        format!(
            "source {source:?} sink {sink:?}, {} disjoint paths < {} required, holds={}",
            report.disjoint_path_count, report.required_d, report.holds
        ),
    )
}

fn ic_census() -> Outcome {
    let r = match classify_om("IC(8,4,2)", &ic_8_4_2_om(), Mode::Full) {
        Ok(r) => r,
        Err(e) => return fail(e.to_string()),
    };
    let detail = format!(
        "hk={} hkstar={} euclidean={} shannon={} simplicial_topes={}",
        r.hk, r.hkstar, r.euclidean, r.shannon, r.simplicial_tope_count
    );
    let flags = r.hk && !r.hkstar && !r.euclidean;
    if flags && (r.shannon || r.simplicial_tope_count >= 16) {
        return fail(format!("{detail}; expected shannon=false with < 16 simplicial topes"));
    }
    verdict(flags && !r.shannon && r.simplicial_tope_count < 16, detail)
}

fn representable_control() -> Outcome {
    let om = OrientedMatroid::from_chirotope(&alternating_4_8()).expect("spans");
    match classify_om("alternating(8,4)", &om, Mode::Full) {
        Ok(r) => verdict(
            r.hk && r.hkstar && r.euclidean && r.shannon,
            format!("hk={} hkstar={} euclidean={} shannon={}", r.hk, r.hkstar, r.euclidean, r.shannon),
        ),
        Err(e) => fail(e.to_string()),
    }
}

fn catalog(name: &str) -> Option<PathBuf> {
    let dir = std::env::var_os("OM_CATALOG_DIR")?;
    let path = PathBuf::from(dir).join(name);
    path.is_file().then_some(path)
}

fn census(name: &str) -> Result<holtklee::classify::Aggregate, String> {
    let path = catalog(name).expect("checked by caller");
    let entries = ingest_catalog(&path).map_err(|e| e.to_string())?.entries;
    let checkpoint = std::env::temp_dir().join(format!("holtklee-acceptance-{name}.jsonl"));
    let options = BatchOptions { mode: Mode::Full, checkpoint: Some(checkpoint), ..BatchOptions::default() };
    Ok(batch_classify(&entries, &options).map_err(|e| e.to_string())?.aggregate)
}

fn uniform_census() -> Outcome {
    if catalog("uniform_4_8.txt").is_none() {
        return skipped("uniform_4_8.txt not found in $OM_CATALOG_DIR");
    }
    match census("uniform_4_8.txt") {
        Ok(a) => verdict(
            a.total == 2628 && a.errors == 0 && a.non_hkstar == 18 && a.non_euclidean == 18 && a.non_shannon == 1 && a.non_hk == 0,
            format!("{a:?}"),
        ),
        Err(e) => fail(e),
    }
}

fn non_uniform_census() -> Outcome {
    if catalog("nonuniform_4_8.txt").is_none() {
        return skipped("nonuniform_4_8.txt not found in $OM_CATALOG_DIR");
    }
    match census("nonuniform_4_8.txt") {
        Ok(a) => {
            let note = match a.non_hkstar {
                1364 => "matches 1,364; the other printed figure is 1,344",
                1344 => "matches 1,344; the other printed figure is 1,364",
                _ => "matches neither printed figure (1,364 / 1,344)",
            };
            verdict(
                a.errors == 0 && a.non_euclidean == 3444 && matches!(a.non_hkstar, 1364 | 1344),
                format!("non_euclidean={} non_hkstar={} ({note})", a.non_euclidean, a.non_hkstar),
            )
        }
        Err(e) => fail(e),
    }
}

fn small_polytopes() -> Outcome {
    let mut polytopes = vec![("simplex".to_string(), simplex_3())];
    polytopes.extend(five_vertex_polytopes().into_iter().map(|c| (c.name.to_string(), c.polytope)));
    let mut parts = Vec::new();
    let mut ok = polytopes.len() == 3;
    for (name, p) in &polytopes {
        let c = sensitive_census(p);
        ok &= c.orientations > 0 && c.sensitive_orientations == 0;
        parts.push(format!("{name}: {} orientations, {} sensitive", c.orientations, c.sensitive_orientations));
    }
    verdict(ok, parts.join("; "))
}

fn six_vertex_sensitive() -> Outcome {
    let catalog = six_vertex_catalog();
    let mut found = Vec::new();
    for entry in &catalog {
        if let Some(gamma) = holtklee::geom::find_sensitive_objective(&entry.polytope) {
            // re-check the flip independently of the search
            if is_sensitive(&gamma).unwrap_or(false) {
                let c: Vec<String> = gamma.objective.iter().map(ToString::to_string).collect();
                found.push(format!("{} c=({})", entry.name, c.join(",")));
            }
        }
    }
    verdict(
        catalog.len() == 7 && found.len() >= 5,
        format!("{}/{} sensitive: {}", found.len(), catalog.len(), found.join("; ")),
    )
}

fn reverify(chirotope: &str, coline: &[usize], r: usize, n: usize) -> Result<usize, String> {
    let chi = Chirotope::parse(chirotope).map_err(|e| e.to_string())?;
    let om = OrientedMatroid::from_chirotope(&chi).map_err(|e| e.to_string())?;
    if (om.rank(), om.ground_size()) != (r, n) {
        return Err(format!("got rank {} on {} elements", om.rank(), om.ground_size()));
    }
    let omega = ColineFixation::new(om, coline).map_err(|e| e.to_string())?;
    if !is_proper_fixation(&omega) {
        return Err("emitted fixation is not proper".into());
    }
    let report = is_hkstar_fixation(&omega).map_err(|e| e.to_string())?;
    if report.holds {
        return Err("emitted fixation is HK*".into());
    }
    Ok(report.disjoint_path_count)
}

fn infinite_family() -> Outcome {
    let mut parts = Vec::new();
    for (r, n) in [(4, 8), (4, 9), (5, 10)] {
        let result = build_non_hkstar(r, n)
            .map_err(|e| e.to_string())
            .and_then(|(_, cert)| reverify(&cert.chirotope, &cert.coline, r, n));
        match result {
            Ok(paths) => parts.push(format!("({r},{n}) non-HK*, {paths} paths < {}", r - 1)),
            Err(e) => return fail(format!("({r},{n}): {e}")),
        }
    }
    pass(parts.join("; "))
}

fn sample<S: Strategy>(runner: &mut TestRunner, strategy: &S) -> S::Value {
    strategy.new_tree(runner).expect("strategy").current()
}

fn property_suites() -> Outcome {
    let mut runner = TestRunner::deterministic();
    let mut oms = vec![ic_8_4_2_om(), OrientedMatroid::from_chirotope(&alternating_4_8()).unwrap()];
    let mut counts = [0usize; 5];

    // covectors of rational configurations against cell enumeration
    let config = proptest::collection::vec(proptest::collection::vec(-2i64..=2, 3), 3..=6);
    let config2 = proptest::collection::vec(proptest::collection::vec(-3i64..=3, 2), 2..=6);
    for i in 0..60 {
        let vs = if i % 3 == 0 { sample(&mut runner, &config2) } else { sample(&mut runner, &config) };
        let rats: Vec<_> = vs.iter().map(|v| rat_vec(v)).collect();
        let Ok(chi) = Chirotope::from_vectors(&rats) else { continue };
        let om = OrientedMatroid::from_chirotope(&chi).unwrap();
        if om.covectors() != realized_covectors(&vs).as_slice() {
            return fail(format!("covectors differ from the realization for {vs:?}"));
        }
        counts[0] += 1;
        oms.push(om);
    }
    let rank4 = proptest::collection::vec(proptest::collection::vec(-3i64..=3, 4), 6..=7);
    for _ in 0..6 {
        let vs = sample(&mut runner, &rank4);
        let rats: Vec<_> = vs.iter().map(|v| rat_vec(v)).collect();
        if let Ok(om) = Chirotope::from_vectors(&rats).and_then(|c| OrientedMatroid::from_chirotope(&c)) {
            oms.push(om);
        }
    }

    for om in &oms {
        if let Some(v) = om.closure_violation() {
            return fail(format!("covector closure violated: {v}"));
        }
        counts[1] += 1;
        let labels = om.labels().to_vec();
        for &g in &labels {
            for &f in &labels {
                let Ok(pi) = Program::new(om.clone(), g, f) else { continue };
                let Ok(report) = program_report(&pi) else { continue };
                if report.proper {
                    if report.uso_anomaly {
                        return fail(format!("proper program (g={g}, f={f}) without unique source/sink"));
                    }
                    counts[2] += 1;
                }
            }
        }
        if om.rank() >= 3 {
            for coline in &om.colines().colines {
                let Ok(omega) = ColineFixation::new(om.clone(), coline) else { continue };
                if !is_proper_fixation(&omega) {
                    continue;
                }
                match shelling_digraph(&omega) {
                    Ok(d) if d.is_acyclic() && d.is_uso() => counts[3] += 1,
                    Ok(_) => return fail(format!("shelling digraph of coline {coline:?} is cyclic or not USO")),
                    Err(e) => return fail(e.to_string()),
                }
            }
        }
    }

    let bits = proptest::collection::vec(proptest::bool::ANY, binomial(10, 2));
    for i in 0..200 {
        let n = 4 + i % 7;
        let d = random_dag(n, &sample(&mut runner, &bits));
        let paths = internal_sets(&d, 0, n - 1);
        if d.max_disjoint_paths(0, n - 1) != brute_disjoint(&paths, 0, false) {
            return fail(format!("Menger mismatch on {:?}", d.arcs()));
        }
        counts[4] += 1;
    }
    pass(format!(
        "{} realizations, {} closed covector sets, {} proper programs USO, {} shelling digraphs acyclic+USO, {} DAG flow checks",
        counts[0], counts[1], counts[2], counts[3], counts[4]
    ))
}

fn main() {
    let minutes = |m: u64| Duration::from_secs(60 * m);
    let criteria: Vec<Criterion> = vec![
        ("fixture reproduction", Box::new(fixture_reproduction), Duration::from_secs(1)),
        ("shelling certificate", Box::new(shelling_certificate), Duration::from_secs(5)),
        ("non-HK* certificate", Box::new(non_hkstar_certificate), Duration::from_secs(5)),
        ("IC(8,4,2) property census", Box::new(ic_census), minutes(10)),
        ("representable control", Box::new(representable_control), minutes(10)),
        ("uniform OM(4,8) census", Box::new(uniform_census), Duration::MAX),
        ("non-uniform OM(4,8) census", Box::new(non_uniform_census), Duration::MAX),
        ("small-polytope exhaustion", Box::new(small_polytopes), minutes(1)),
        ("six-vertex sensitive objectives", Box::new(six_vertex_sensitive), minutes(10)),
        ("non-HK* family spot checks", Box::new(infinite_family), minutes(30)),
        ("property suites", Box::new(property_suites), Duration::MAX),
    ];

    let (mut passed, mut failed, mut skip, mut unexpected) = (0, 0, 0, Vec::new());
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let id = i + 1;
        let start = Instant::now();
        let outcome = within(*limit, start, run());
        let tag = match outcome.status {
            Status::Pass => {
                passed += 1;
                "PASS"
            }
            Status::Skipped => {
                skip += 1;
                "SKIPPED"
            }
            Status::Fail => {
                failed += 1;
                "FAIL"
            }
        };
        println!("criterion {id:>2} {tag:<7} {name}: {}", outcome.detail);
        if matches!(outcome.status, Status::Fail) {
            match DOCUMENTED.iter().find(|(c, _)| *c == id) {
                Some((_, why)) => println!("             known discrepancy: {why}"),
                None => unexpected.push(id),
            }
        }
    }
    println!("acceptance: {passed} passed, {failed} failed, {skip} skipped");
    if !unexpected.is_empty() {
        eprintln!("undocumented failures: {unexpected:?}");
        std::process::exit(1);
    }
}
