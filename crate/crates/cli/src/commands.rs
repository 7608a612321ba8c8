use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use cohconf::constructions::{
    girthex_pipeline, girthex_scan, search_hr_set, GirthexOptions, GirthexOutcome, Route,
};
use cohconf::format::{parse_generators, parse_relation};
use cohconf::metrics;
use cohconf::scheme::{pair_orbit_scheme, wl_closure, SchemeExport, WlOutcome};
use cohconf::suites::{run_suite, Suite, SuiteParams, SuiteReport};
use cohconf::Relation;
use serde::Serialize;

use crate::output::{CliError, CliResult, Sink, Status};
use crate::Mode;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn read_relation(path: &Path) -> CliResult<Relation> {
    parse_relation(&read(path)?).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn show(v: Option<u32>, none: &str) -> String {
    v.map_or_else(|| none.to_string(), |d| d.to_string())
}

#[derive(Serialize)]
struct DiameterReport {
    n: usize,
    directed_diameter: Option<u32>,
    undirected_diameter: Option<u32>,
    girth: Option<u32>,
    strongly_connected: bool,
    connected: bool,
}

pub fn diameter(sink: &Sink, input: &Path) -> CliResult<Status> {
    let a = read_relation(input)?;
    let directed = metrics::directed_diameter(&a).ok();
    let undirected = metrics::undirected_diameter(&a).ok();
    let report = DiameterReport {
        n: a.n(),
        directed_diameter: directed,
        undirected_diameter: undirected,
        girth: metrics::directed_girth(&a),
        strongly_connected: directed.is_some(),
        connected: undirected.is_some(),
    };
    let human = format!(
        "points: {}\ndirected diameter: {}\nundirected diameter: {}\ngirth: {}\nstrongly connected: {}\nconnected: {}\n",
        report.n,
        show(report.directed_diameter, "infinite"),
        show(report.undirected_diameter, "infinite"),
        show(report.girth, "acyclic"),
        report.strongly_connected,
        report.connected,
    );
    sink.emit(&human, &report, std::slice::from_ref(&report))?;
    if report.connected {
        Ok(Status::Ok)
    } else {
        eprintln!("error: relation is disconnected");
        Ok(Status::Input)
    }
}

#[derive(Serialize)]
struct SchemeReport {
    mode: &'static str,
    certified: bool,
    /// Whether every seed relation is a union of basis relations.
    seeds_in_s_union: Option<bool>,
    valencies: Vec<usize>,
    #[serde(flatten)]
    scheme: SchemeExport,
}

#[derive(Serialize)]
struct SchemeRow {
    mode: &'static str,
    n: usize,
    rank: usize,
    certified: bool,
    seeds_in_s_union: Option<bool>,
}

pub fn scheme(sink: &Sink, mode: Mode, inputs: &[std::path::PathBuf]) -> CliResult<Status> {
    let (scheme, seeds_in_s_union, mode_name) = match mode {
        Mode::Orbit => {
            let [input] = inputs else {
                return Err(CliError::input(
                    "orbit mode takes exactly one generators file",
                ));
            };
            let (domain, gens) = parse_generators(&read(input)?)
                .map_err(|e| CliError::input(format!("{}: {e}", input.display())))?;
            (pair_orbit_scheme(domain, &gens)?, None, "orbit")
        }
        Mode::Wl => {
            let seeds = inputs
                .iter()
                .map(|p| read_relation(p))
                .collect::<CliResult<Vec<_>>>()?;
            match wl_closure(&seeds)? {
                WlOutcome::Homogeneous(s) => {
                    let mut contained = true;
                    for r in &seeds {
                        contained &= s.in_s_union(r)?;
                    }
                    (s, Some(contained), "wl")
                }
                WlOutcome::Inhomogeneous {
                    rank,
                    diagonal_classes,
                    ..
                } => {
                    return Err(CliError {
                        status: Status::Infeasible,
                        message: format!(
                            "closure is inhomogeneous: rank {rank}, the diagonal splits into {diagonal_classes} classes"
                        ),
                    })
                }
            }
        }
    };
    let valencies: Vec<usize> = (0..scheme.rank()).map(|i| scheme.valency(i)).collect();
    let mut human = format!(
        "points: {}\nrank: {}\nvalencies: {valencies:?}\ncertified: {}\n",
        scheme.n(),
        scheme.rank(),
        scheme.is_certified()
    );
    if let Some(c) = seeds_in_s_union {
        let _ = writeln!(human, "seeds in S^∪: {c}");
    }
    let row = SchemeRow {
        mode: mode_name,
        n: scheme.n(),
        rank: scheme.rank(),
        certified: scheme.is_certified(),
        seeds_in_s_union,
    };
    let report = SchemeReport {
        mode: mode_name,
        certified: scheme.is_certified(),
        seeds_in_s_union,
        valencies,
        scheme: scheme.export(),
    };
    sink.emit(&human, &report, &[row])?;
    Ok(if seeds_in_s_union == Some(false) {
        Status::Violation
    } else {
        Status::Ok
    })
}

#[derive(Serialize)]
struct CsvSuiteRow<'a> {
    suite: &'static str,
    instance: &'a str,
    lhs: &'a str,
    rhs: &'a str,
    holds: bool,
}

fn suite_rows(report: &SuiteReport) -> Vec<CsvSuiteRow<'_>> {
    report
        .rows
        .iter()
        .map(|r| CsvSuiteRow {
            suite: report.suite.name(),
            instance: &r.instance,
            lhs: &r.lhs,
            rhs: &r.rhs,
            holds: r.holds,
        })
        .collect()
}

pub fn verify(sink: &Sink, suite: Suite, params: &SuiteParams) -> CliResult<Status> {
    let report = run_suite(suite, params)?;
    let holding = report.rows.iter().filter(|r| r.holds).count();
    let mut human = format!(
        "suite {suite} seed {}: {holding}/{} instances hold\n",
        report.seed,
        report.rows.len()
    );
    for f in &report.failures {
        let _ = writeln!(human, "FAIL {f}");
    }
    if report.infeasible {
        human.push_str("infeasible at tested parameters\n");
    }
    for line in &report.log {
        let _ = writeln!(human, "  {line}");
    }
    sink.emit(&human, &report, &suite_rows(&report))?;
    for f in &report.failures {
        eprintln!("witness: {f}");
    }
    Ok(if !report.failures.is_empty() {
        Status::Violation
    } else if report.infeasible {
        Status::Infeasible
    } else {
        Status::Ok
    })
}

#[derive(Serialize)]
struct HrRow {
    q: u64,
    k: u32,
    #[serde(rename = "A")]
    set: String,
    #[serde(rename = "kA_size")]
    ka_size: usize,
    covers: bool,
    progression_x: Option<u64>,
}

pub fn search_hr(sink: &Sink, q: u64, k: u32, budget: u64, seed: u64) -> CliResult<Status> {
    let Some(w) = search_hr_set(q, k, budget, seed)? else {
        let human = format!("no set with A - A = Z_{q} found in {budget} steps\n");
        #[derive(Serialize)]
        struct NotFound {
            q: u64,
            k: u32,
            found: bool,
        }
        sink.emit(&human, &NotFound { q, k, found: false }, &[] as &[HrRow])?;
        return Ok(Status::Infeasible);
    };
    let set: Vec<String> = w.elements.iter().map(u64::to_string).collect();
    let row = HrRow {
        q,
        k,
        set: set.join(" "),
        ka_size: w.ka_size,
        covers: w.covers,
        progression_x: w.progression_x,
    };
    let human = format!(
        "q = {q}, k = {k}\nA = {{{}}}\n|kA| = {}\nA - A covers Z_q: {}\nprogression gap x: {}\n",
        set.join(", "),
        w.ka_size,
        w.covers,
        w.progression_x
            .map_or("none".to_string(), |x| x.to_string()),
    );
    sink.emit(&human, &w, &[row])?;
    Ok(Status::Ok)
}

#[derive(Serialize)]
struct GirthexRow<'a> {
    k: u32,
    q: u64,
    route: Route,
    check: &'a str,
    lhs: String,
    rhs: String,
    holds: bool,
}

#[derive(Serialize)]
struct Infeasible<'a> {
    k: u32,
    infeasible: bool,
    log: &'a [String],
}

pub fn girthex(
    sink: &Sink,
    k: u32,
    q: Option<u64>,
    budget: Option<u64>,
    seed: u64,
    graph: Option<&Path>,
) -> CliResult<Status> {
    let defaults = GirthexOptions::default();
    let budget = budget.unwrap_or(defaults.search_budget);
    let outcome = match q {
        Some(q) => girthex_pipeline(k, q, seed, budget)?,
        None => girthex_scan(
            k,
            seed,
            GirthexOptions {
                search_budget: budget,
                ..defaults
            },
        )?,
    };
    let cert = match outcome {
        GirthexOutcome::Certified(c) => c,
        GirthexOutcome::Infeasible { k, log } => {
            let mut human = format!("k = {k}: infeasible at tested q\n");
            for line in &log {
                let _ = writeln!(human, "  {line}");
            }
            let report = Infeasible {
                k,
                infeasible: true,
                log: &log,
            };
            sink.emit(&human, &report, &[] as &[GirthexRow])?;
            return Ok(Status::Infeasible);
        }
    };
    if let Some(path) = graph {
        fs::write(path, cert.graph_edge_list())?;
    }
    let mut human = format!(
        "k = {}, q = {}, route {:?}, A = {:?}, {} vertices\n",
        cert.k,
        cert.q,
        cert.route,
        cert.set.elements(),
        cert.graph.n()
    );
    for r in &cert.reports {
        let _ = writeln!(
            human,
            "  {:<28} {} vs {}: {}",
            r.name,
            r.lhs,
            r.rhs,
            if r.holds { "holds" } else { "FAILS" }
        );
    }
    let rows: Vec<GirthexRow> = cert
        .reports
        .iter()
        .map(|r| GirthexRow {
            k: cert.k,
            q: cert.q,
            route: cert.route,
            check: &r.name,
            lhs: r.lhs.to_string(),
            rhs: r.rhs.to_string(),
            holds: r.holds,
        })
        .collect();
    sink.emit(&human, &cert.summary(), &rows)?;
    Ok(if cert.holds() {
        Status::Ok
    } else {
        for r in cert.reports.iter().filter(|r| !r.holds) {
            eprintln!("witness: {} {}", r.name, r.witness.as_deref().unwrap_or(""));
        }
        Status::Violation
    })
}
