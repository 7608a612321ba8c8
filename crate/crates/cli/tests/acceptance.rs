//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::Instant;

use cohconf::constructions::{girthex_scan, petersen, GirthexOptions, GirthexOutcome};
use cohconf::metrics;
use cohconf::scheme::{
    cyclic_generators, dihedral_generators, pair_orbit_scheme, path_count_invariance_check,
    path_counts, symmetric_generators, wl_closure,
};
use cohconf::suites::{corpus, run_suite, Suite, SuiteParams, SuiteReport};
use cohconf::{PointSet, Relation, Scheme};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn dom(n: usize) -> PointSet {
    PointSet::new(n).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn all_rows_hold(report: &SuiteReport) -> Result<(), String> {
    ensure(!report.infeasible, || {
        format!("infeasible: {:?}", report.log)
    })?;
    ensure(report.failures.is_empty(), || {
        format!(
            "{} failures, first: {}",
            report.failures.len(),
            report.failures[0]
        )
    })?;
    ensure(report.rows.iter().all(|r| r.holds), || "a row fails".into())
}

/// Intersection numbers by direct counting over all triples.
fn naive_scheme_check(s: &Scheme) -> Result<(), String> {
    let n = s.n();
    let rank = s.rank();
    // every pair gets exactly one class
    let mut seen = vec![0u8; n * n];
    for (i, r) in s.basis().iter().enumerate() {
        for (x, y) in r.pairs() {
            seen[x * n + y] += 1;
            ensure(s.color(x, y) == i, || {
                format!("color mismatch at ({x},{y})")
            })?;
        }
    }
    ensure(seen.iter().all(|&c| c == 1), || "not a partition".into())?;
    let diag = s.color(0, 0);
    ensure((0..n).all(|x| s.color(x, x) == diag), || {
        "diagonal split".into()
    })?;
    ensure(
        (0..n).all(|x| (0..n).all(|y| s.color(x, y) != diag || x == y)),
        || "diagonal class has off-diagonal pairs".into(),
    )?;
    for x in 0..n {
        for y in 0..n {
            let t = s.color(y, x);
            ensure(s.transpose_index(s.color(x, y)) == t, || {
                format!("transpose of ({x},{y}) not a class")
            })?;
        }
    }
    const UNSET: u32 = u32::MAX;
    let mut reference = vec![UNSET; rank * rank * rank];
    let mut counts = vec![0u32; rank * rank];
    for x in 0..n {
        for y in 0..n {
            counts.iter_mut().for_each(|c| *c = 0);
            for z in 0..n {
                counts[s.color(x, z) * rank + s.color(z, y)] += 1;
            }
            let c = s.color(x, y);
            for a in 0..rank {
                for b in 0..rank {
                    let v = counts[a * rank + b];
                    let slot = &mut reference[(c * rank + a) * rank + b];
                    if *slot == UNSET {
                        *slot = v;
                    }
                    let e = *slot;
                    ensure(e == v, || format!("p^{c}_{a}{b} varies at ({x},{y})"))?;
                    ensure(s.structure_constant(c, a, b) == v, || {
                        format!("stored p^{c}_{a}{b} disagrees")
                    })?;
                }
            }
        }
    }
    Ok(())
}

fn certification_schemes() -> Result<Vec<(String, Scheme)>, String> {
    let mut out = Vec::new();
    let e = |e: cohconf::Error| e.to_string();
    for q in 1..=64 {
        let s = pair_orbit_scheme(dom(q), &cyclic_generators(q)).map_err(e)?;
        ensure(s.rank() == q, || format!("Z_{q} rank {}", s.rank()))?;
        out.push((format!("Z_{q}"), s));
    }
    for m in 3..=32 {
        let s = pair_orbit_scheme(dom(m), &dihedral_generators(m)).map_err(e)?;
        ensure(s.rank() == m / 2 + 1, || format!("D_{m} rank {}", s.rank()))?;
        out.push((format!("D_{m}"), s));
    }
    for m in 2..=8 {
        let s = pair_orbit_scheme(dom(m), &symmetric_generators(m)).map_err(e)?;
        ensure(s.rank() == 2, || format!("Sym({m}) rank {}", s.rank()))?;
        out.push((format!("Sym({m})"), s));
    }
    Ok(out)
}

fn criterion_1() -> Outcome {
    let report = run_suite(
        Suite::Ruzsa,
        &SuiteParams {
            trials: Some(10_000),
            seed: 1,
            ..Default::default()
        },
    )
    .map_err(|e| e.to_string())?;
    ensure(report.rows.len() == 10_000, || "wrong triple count".into())?;
    let sizes: BTreeSet<&str> = report
        .rows
        .iter()
        .map(|r| r.instance.split_whitespace().next().unwrap())
        .collect();
    ensure(
        sizes == BTreeSet::from(["n=08", "n=16", "n=32", "n=64"]),
        || format!("sizes {sizes:?}"),
    )?;
    all_rows_hold(&report)?;
    Ok("10000 triples".into())
}

fn criterion_2() -> Outcome {
    let schemes = certification_schemes()?;
    for (name, s) in &schemes {
        ensure(s.is_certified(), || format!("{name} not certified"))?;
        naive_scheme_check(s).map_err(|m| format!("{name}: {m}"))?;
    }
    let e = |e: cohconf::Error| e.to_string();
    let p = petersen();
    let ps = wl_closure(std::slice::from_ref(&p))
        .map_err(e)?
        .into_scheme()
        .ok_or("Petersen closure inhomogeneous")?;
    ensure(ps.rank() == 3 && ps.in_s_union(&p).map_err(e)?, || {
        "Petersen closure".into()
    })?;
    naive_scheme_check(&ps)?;
    let c5 = Relation::directed_cycle(dom(5));
    let cs = wl_closure(std::slice::from_ref(&c5))
        .map_err(e)?
        .into_scheme()
        .ok_or("C5 closure inhomogeneous")?;
    ensure(cs.rank() == 5 && cs.in_s_union(&c5).map_err(e)?, || {
        "C5 closure".into()
    })?;
    naive_scheme_check(&cs)?;
    Ok(format!("{} orbit schemes, 2 closures", schemes.len()))
}

fn criterion_3() -> Outcome {
    let mut all: Vec<(String, Scheme)> = certification_schemes()?;
    for ns in corpus::schemes(64).map_err(|e| e.to_string())? {
        if ns.name.starts_with("WL") || ns.name.starts_with("J(") {
            all.push((ns.name, ns.scheme));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut checked = 0;
    for (name, s) in &all {
        let rank = s.rank();
        for _ in 0..100 {
            let len = rng.gen_range(1..=3);
            let chain: Vec<usize> = (0..len).map(|_| rng.gen_range(0..rank)).collect();
            let r = rng.gen_range(0..rank);
            let ok = path_count_invariance_check(s, &chain, r).map_err(|e| e.to_string())?;
            ensure(ok, || format!("{name} chain {chain:?} r={r}"))?;
            // two-step chains count intersection numbers
            if len == 2 {
                let c = path_counts(s, &chain, r).map_err(|e| e.to_string())?;
                ensure(
                    c[0] == s.structure_constant(r, chain[0], chain[1]) as u64,
                    || format!("{name} chain {chain:?} r={r} disagrees with p"),
                )?;
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} chains over {} schemes", all.len()))
}

fn criterion_4() -> Outcome {
    let report = run_suite(
        Suite::Expand,
        &SuiteParams {
            seed: 4,
            ..Default::default()
        },
    )
    .map_err(|e| e.to_string())?;
    all_rows_hold(&report)?;
    let count = |tag: &str| {
        report
            .rows
            .iter()
            .filter(|r| r.instance.contains(tag))
            .count()
    };
    let (sweeps, random, geo) = (count("sweep"), count("random(1000)"), count("geodesics"));
    ensure(sweeps > 0 && random > 0 && geo == sweeps, || {
        format!("rows: {sweeps} sweeps, {random} random, {geo} geodesic")
    })?;
    ensure(
        report.rows.iter().any(|r| r.instance.starts_with("Z064")),
        || "Z_64 not covered".into(),
    )?;
    Ok(format!(
        "{sweeps} relations, |T| <= 8 exhaustive, 1000 random T each"
    ))
}

fn criterion_5(report: &SuiteReport) -> Outcome {
    let rows: Vec<_> = report
        .rows
        .iter()
        .filter(|r| r.instance.ends_with("comm_bound"))
        .collect();
    ensure(rows.len() == 200, || {
        format!("{} connection sets", rows.len())
    })?;
    ensure(rows.iter().all(|r| r.holds), || {
        format!("failures: {:?}", report.failures)
    })?;
    Ok("200 connection sets, q <= 512".into())
}

fn criterion_6(commbound: &SuiteReport) -> Outcome {
    let report = run_suite(
        Suite::Mains,
        &SuiteParams {
            seed: 4,
            ..Default::default()
        },
    )
    .map_err(|e| e.to_string())?;
    all_rows_hold(&report)?;
    let mains_rows = commbound
        .rows
        .iter()
        .filter(|r| r.instance.ends_with(" mains"));
    let mut cb = 0;
    for r in mains_rows {
        ensure(r.holds, || format!("{} fails", r.instance))?;
        cb += 1;
    }
    let star = report
        .rows
        .iter()
        .filter(|r| r.instance.ends_with("star"))
        .count();
    let mains = report
        .rows
        .iter()
        .filter(|r| r.instance.ends_with("mains"))
        .count();
    ensure(star > 0 && mains > 0 && cb == 200, || "missing rows".into())?;
    Ok(format!("{} mains, {star} star rows", mains + cb))
}

fn naive_distances(a: &Relation) -> Vec<Vec<Option<u32>>> {
    let n = a.n();
    let mut d = vec![vec![None; n]; n];
    for (x, row) in d.iter_mut().enumerate() {
        row[x] = Some(0);
        for y in a.successors(x) {
            if y != x {
                row[y] = Some(1);
            }
        }
    }
    for k in 0..n {
        let via = d[k].clone();
        for row in d.iter_mut() {
            let Some(ik) = row[k] else { continue };
            for (cell, kj) in row.iter_mut().zip(&via) {
                if let Some(kj) = kj {
                    if cell.is_none_or(|v| ik + kj < v) {
                        *cell = Some(ik + kj);
                    }
                }
            }
        }
    }
    d
}

fn naive_diameter(a: &Relation) -> Option<u32> {
    let d = naive_distances(a);
    d.iter().flatten().try_fold(0, |m, v| v.map(|v| m.max(v)))
}

/// Shortest cycle through an arc `(x, y)`: `d(y, x) + 1`.
fn naive_girth(a: &Relation) -> Option<u32> {
    let d = naive_distances(a);
    a.pairs().filter_map(|(x, y)| d[y][x].map(|v| v + 1)).min()
}

fn criterion_7() -> Outcome {
    let mut found = Vec::new();
    for k in [2, 3] {
        let params = SuiteParams {
            k: Some(k),
            seed: 7,
            ..Default::default()
        };
        all_rows_hold(&run_suite(Suite::Girthex, &params).map_err(|e| e.to_string())?)?;
        let outcome = girthex_scan(k, 7, GirthexOptions::default()).map_err(|e| e.to_string())?;
        let cert = match outcome {
            GirthexOutcome::Certified(c) => c,
            GirthexOutcome::Infeasible { log, .. } => {
                return Err(format!("k={k} infeasible: {}", log.join("; ")))
            }
        };
        let g = &cert.graph;
        ensure(
            naive_diameter(&g.symmetrize()).is_some_and(|d| d <= 2),
            || format!("k={k}: final diameter"),
        )?;
        ensure(naive_girth(g).is_none_or(|c| c >= k), || {
            format!("k={k}: final girth")
        })?;
        let h = &cert.intermediate;
        ensure(
            naive_diameter(&h.symmetrize()).is_some_and(|d| d <= 4),
            || format!("k={k}: intermediate diameter"),
        )?;
        ensure(naive_girth(h).is_none_or(|c| c >= 2 * k), || {
            format!("k={k}: intermediate girth")
        })?;
        found.push(format!("k={k} q={} A={:?}", cert.q, cert.set.elements()));
    }
    Ok(found.join(", "))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut made = 0;
    let mut diameters = BTreeSet::new();
    while made < 1000 {
        let n = rng.gen_range(2..=64);
        let density = rng.gen_range(0.0..0.25f64).powi(2);
        let mut a = Relation::from_fn(dom(n), |_, _| rng.gen_bool(density));
        if made % 2 == 0 {
            // a random directed Hamiltonian cycle keeps half the sample connected
            let mut order: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                order.swap(i, rng.gen_range(0..=i));
            }
            for i in 0..n {
                a.insert(order[i], order[(i + 1) % n]).unwrap();
            }
        }
        let Ok(bfs) = metrics::directed_diameter(&a) else {
            continue;
        };
        let powers = metrics::diameter_by_powers(&a);
        ensure(powers == Some(bfs), || {
            format!("n={n}: bfs {bfs}, powers {powers:?}")
        })?;
        ensure(naive_diameter(&a) == Some(bfs), || {
            format!("n={n}: Floyd disagrees")
        })?;
        diameters.insert(bfs);
        made += 1;
    }
    Ok(format!(
        "1000 relations, diameters {}..={}",
        diameters.first().unwrap(),
        diameters.last().unwrap()
    ))
}

fn criterion_9() -> Outcome {
    let exe = env!("CARGO_BIN_EXE_cohconf");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let runs: [(&str, &[&str]); 5] = [
        ("ruzsa", &["--trials", "300"]),
        ("expand", &["--q", "20", "--trials", "100"]),
        ("commbound", &["--trials", "20", "--q", "128"]),
        ("mains", &["--n", "24"]),
        ("girthex", &["--k", "2"]),
    ];
    for (suite, extra) in runs {
        for format in ["json", "csv"] {
            let mut outputs = Vec::new();
            for attempt in 0..2 {
                let path = dir.path().join(format!("{suite}-{attempt}.{format}"));
                let status = Command::new(exe)
                    .args(["verify", suite, "--seed", "9", "--format", format, "--out"])
                    .arg(&path)
                    .args(extra)
                    .output()
                    .map_err(|e| e.to_string())?
                    .status;
                ensure(status.success(), || format!("{suite}: exit {status}"))?;
                outputs.push(std::fs::read(&path).map_err(|e| e.to_string())?);
            }
            ensure(!outputs[0].is_empty() && outputs[0] == outputs[1], || {
                format!("{suite} {format}: outputs differ")
            })?;
        }
    }
    Ok("5 suites x {json, csv}, byte-identical reruns".into())
}

fn run(number: u32, title: &str, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let result = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
        Err(format!("panic: {}", msg.unwrap_or_default()))
    });
    let secs = start.elapsed().as_secs_f64();
    match &result {
        Ok(detail) => println!("PASS criterion {number} ({title}): {detail} [{secs:.1}s]"),
        Err(why) => println!("FAIL criterion {number} ({title}): {why} [{secs:.1}s]"),
    }
    result.is_ok()
}

fn main() -> ExitCode {
    let mut commbound: Option<SuiteReport> = None;
    let mut ok = true;
    ok &= run(1, "Ruzsa triangle inequality", criterion_1);
    ok &= run(2, "scheme certification", criterion_2);
    ok &= run(3, "path count invariance", criterion_3);
    ok &= run(4, "vertex expansion", criterion_4);
    ok &= run(5, "commuting diameter bound", || {
        let params = SuiteParams {
            seed: 5,
            ..Default::default()
        };
        let report = run_suite(Suite::CommBound, &params).map_err(|e| e.to_string())?;
        criterion_5(commbound.insert(report))
    });
    ok &= run(6, "explicit diameter bound", || {
        criterion_6(commbound.as_ref().ok_or("commbound suite did not run")?)
    });
    ok &= run(7, "diameter 2, large girth Cayley graphs", criterion_7);
    ok &= run(8, "BFS and power diameters agree", criterion_8);
    ok &= run(9, "CLI determinism", criterion_9);
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
