//! Cayley graphs on `ℤ_q × ℤ_q` with undirected diameter at most 2 and
//! directed girth at least `k`.
//!
//! Given `A ∋ 0` with `A − A = ℤ_q`, let `B = {(a, −1), (−1, a) | a ∈ A}`.
//! A closed walk in `Cay(V, B)` using `n` elements of the first kind and `m`
//! of the second exists iff `m ∈ n·A` and `n ∈ m·A` (with `0·A = {0}`), so
//! `Cay(V, B)` has girth at least `K` iff no such `(n, m)` has
//! `1 ≤ n + m < K`. Two ways of producing `A` are tried:
//!
//! * [`Route::ProgressionGap`]: a set whose `2k`-fold sumset misses a full
//!   progression `{x, …, 2k·x}`, rescaled so the progression is
//!   `{1, …, 2k}`; this excludes every short solution.
//! * [`Route::CycleEquations`]: a set found by searching directly for the
//!   absence of short solutions.
//!
//! Either way the resulting graphs are certified by BFS, independently of
//! the argument above.

use std::collections::BTreeSet;

use serde::Serialize;

use super::cayley::{build_cayley, CayleySpec};
use super::cyclic::{covers, folds, is_prime, mod_inverse, normalize_shift, scale_set, CyclicSet};
use super::hr::{local_search, search_hr_set_with, uncovered, HrWitness, SearchOptions};
use crate::error::{Error, Result};
use crate::format;
use crate::inequalities::BoundReport;
use crate::metrics;
use crate::relation::Relation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    ProgressionGap,
    CycleEquations,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GirthexOptions {
    /// Local-search steps per prime and route.
    pub search_budget: u64,
    /// Largest prime tried with the progression-gap route.
    pub gap_prime_limit: u64,
    /// Largest prime tried overall.
    pub max_prime: u64,
}

impl Default for GirthexOptions {
    fn default() -> Self {
        GirthexOptions {
            search_budget: 4000,
            gap_prime_limit: 61,
            max_prime: 10_000,
        }
    }
}

/// All `(n, m)` with `1 ≤ n + m ≤ max_len` such that `m ∈ n·A` and
/// `n ∈ m·A` modulo `q`, i.e. the shapes of closed walks of length at most
/// `max_len` in `Cay(ℤ_q², B)`. `A` must contain 0.
pub fn cycle_equation_solutions(a: &CyclicSet, max_len: u32) -> Result<Vec<(u32, u32)>> {
    if !a.contains(0) {
        return Err(Error::Precondition("the set must contain 0".into()));
    }
    let q = a.modulus();
    let f = folds(a, max_len.max(1));
    let in_fold = |times: u32, residue: u64| -> bool {
        if times == 0 {
            residue.is_multiple_of(q)
        } else {
            f[times as usize - 1].contains(residue % q)
        }
    };
    let mut out = Vec::new();
    for len in 1..=max_len {
        for n in 0..=len {
            let m = len - n;
            if in_fold(n, m as u64) && in_fold(m, n as u64) {
                out.push((n, m));
            }
        }
    }
    Ok(out)
}

/// Objective for the direct search: uncovered differences, then the number
/// of short closed-walk shapes.
fn cycle_search_objective(set: &CyclicSet, girth: u32) -> [u64; 2] {
    let violations = cycle_equation_solutions(set, girth - 1)
        .expect("0 ∈ A")
        .len() as u64;
    [uncovered(set), violations]
}

/// Searches for `A ∋ 0` with `A − A = ℤ_q` and no closed walk shorter than
/// `girth` in `Cay(ℤ_q², B)`. The result is re-verified before returning.
pub fn search_cycle_free_set(
    q: u64,
    girth: u32,
    budget: u64,
    seed: u64,
) -> Result<Option<CyclicSet>> {
    if girth < 2 || q < girth as u64 {
        return Err(Error::InvalidArgument(format!(
            "need 2 <= girth <= q, got girth = {girth}, q = {q}"
        )));
    }
    let options = SearchOptions {
        budget,
        seed,
        require_gap: false,
    };
    let best = local_search(q, options, |set| cycle_search_objective(set, girth));
    let ok = covers(&best) && cycle_equation_solutions(&best, girth - 1)?.is_empty();
    Ok(ok.then_some(best))
}

/// A certified construction.
#[derive(Clone, Debug)]
pub struct GirthexCertificate {
    pub k: u32,
    pub q: u64,
    pub route: Route,
    /// The set `A` after normalisation and rescaling.
    pub set: CyclicSet,
    pub witness: Option<HrWitness>,
    pub connection: Vec<(u64, u64)>,
    /// `Cay(V, B)`.
    pub intermediate: Relation,
    /// `Cay(V, 2·B)`.
    pub graph: Relation,
    pub reports: Vec<BoundReport>,
    pub log: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GirthexSummary<'a> {
    pub k: u32,
    pub q: u64,
    pub route: Route,
    #[serde(rename = "A")]
    pub set: &'a [u64],
    pub witness: Option<&'a HrWitness>,
    #[serde(rename = "B")]
    pub connection: &'a [(u64, u64)],
    pub vertices: usize,
    pub reports: &'a [BoundReport],
    pub log: &'a [String],
}

impl GirthexCertificate {
    pub fn holds(&self) -> bool {
        self.reports.iter().all(|r| r.holds)
    }

    pub fn summary(&self) -> GirthexSummary<'_> {
        GirthexSummary {
            k: self.k,
            q: self.q,
            route: self.route,
            set: self.set.elements(),
            witness: self.witness.as_ref(),
            connection: &self.connection,
            vertices: self.graph.n(),
            reports: &self.reports,
            log: &self.log,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.summary()).expect("plain data serialises")
    }

    pub fn graph_edge_list(&self) -> String {
        format::write_edge_list(&self.graph)
    }
}

#[derive(Clone, Debug)]
pub enum GirthexOutcome {
    Certified(Box<GirthexCertificate>),
    Infeasible { k: u32, log: Vec<String> },
}

impl GirthexOutcome {
    pub fn certificate(&self) -> Option<&GirthexCertificate> {
        match self {
            GirthexOutcome::Certified(c) => Some(c),
            GirthexOutcome::Infeasible { .. } => None,
        }
    }
}

fn sub_seed(seed: u64, q: u64, route: Route) -> u64 {
    let tag = match route {
        Route::ProgressionGap => 0x5851_f42d_4c95_7f2d,
        Route::CycleEquations => 0x1405_7b7e_f767_814f,
    };
    seed ^ q.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ tag
}

fn encode(q: u64, (i, j): (u64, u64)) -> usize {
    (i * q + j) as usize
}

/// `X − X + X − X` for `X ⊆ ℤ_q²`, as a set of encoded elements.
fn double_difference(q: u64, x: &[(u64, u64)]) -> BTreeSet<usize> {
    let diff: BTreeSet<(u64, u64)> = x
        .iter()
        .flat_map(|&(a, b)| {
            x.iter()
                .map(move |&(c, d)| ((a + q - c) % q, (b + q - d) % q))
        })
        .collect();
    diff.iter()
        .flat_map(|&(a, b)| {
            diff.iter()
                .map(move |&(c, d)| encode(q, ((a + c) % q, (b + d) % q)))
        })
        .collect()
}

fn girth_report(name: &str, required: u32, graph: &Relation) -> Result<BoundReport> {
    let girth = metrics::directed_girth(graph)
        .ok_or_else(|| Error::Precondition("a Cayley graph of a finite group has cycles".into()))?;
    Ok(BoundReport::from_integers(
        name,
        required as u128,
        girth as u128,
    ))
}

/// The two Cayley graphs built from `A` with their certification reports.
#[derive(Clone, Debug)]
pub struct Construction {
    pub connection: Vec<(u64, u64)>,
    pub intermediate: Relation,
    pub graph: Relation,
    pub reports: Vec<BoundReport>,
}

/// Builds `Cay(V, B)` and `Cay(V, 2·B)` from `A` and certifies them.
pub fn certify_construction(k: u32, set: &CyclicSet) -> Result<Construction> {
    let q = set.modulus();
    let minus_one = q - 1;
    let connection: Vec<(u64, u64)> = set
        .elements()
        .iter()
        .flat_map(|&a| [(a, minus_one), (minus_one, a)])
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let doubled: Vec<(u64, u64)> = connection
        .iter()
        .flat_map(|&(a, b)| {
            connection
                .iter()
                .map(move |&(c, d)| ((a + c) % q, (b + d) % q))
        })
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();

    let intermediate = build_cayley(
        &CayleySpec::CyclicSquare {
            q,
            connection: connection.clone(),
        },
        false,
    )?;
    let graph = build_cayley(
        &CayleySpec::CyclicSquare {
            q,
            connection: doubled.clone(),
        },
        true,
    )?;
    let vertices = (q * q) as u128;

    let mut reports = vec![
        BoundReport::from_integers(
            "intermediate_sumset_cover",
            vertices,
            double_difference(q, &connection).len() as u128,
        ),
        BoundReport::from_integers(
            "intermediate_diameter",
            metrics::undirected_diameter(&intermediate)? as u128,
            4,
        ),
        girth_report("intermediate_girth", 2 * k, &intermediate)?,
        BoundReport::from_integers(
            "final_sumset_cover",
            vertices,
            double_difference(q, &doubled).len() as u128,
        ),
        BoundReport::from_integers(
            "final_diameter",
            metrics::undirected_diameter(&graph)? as u128,
            2,
        ),
        girth_report("final_girth", k, &graph)?,
    ];
    for r in &mut reports {
        r.witness = Some(format!("q = {q}, A = {:?}", set.elements()));
    }
    Ok(Construction {
        connection,
        intermediate,
        graph,
        reports,
    })
}

fn gap_route(
    k: u32,
    q: u64,
    seed: u64,
    budget: u64,
    log: &mut Vec<String>,
) -> Result<Option<(CyclicSet, Option<HrWitness>)>> {
    let fold = 2 * k;
    if q <= fold as u64 {
        log.push(format!("q = {q}: progression gap needs q > {fold}"));
        return Ok(None);
    }
    let options = SearchOptions {
        budget,
        seed: sub_seed(seed, q, Route::ProgressionGap),
        require_gap: true,
    };
    let Some(witness) = search_hr_set_with(q, fold, options)? else {
        log.push(format!(
            "q = {q}: no covering set with a progression gap for {fold}-fold sums after {budget} steps"
        ));
        return Ok(None);
    };
    let x = witness
        .progression_x
        .expect("search only accepts witnesses with a gap");
    let scaled = scale_set(&witness.set(), mod_inverse(x, q)?)?;
    let rescaled = HrWitness::certify(&scaled, fold)?;
    if rescaled.progression_x != Some(1) {
        return Err(Error::Precondition(format!(
            "rescaling by 1/{x} mod {q} did not move the gap to 1"
        )));
    }
    log.push(format!(
        "q = {q}: progression gap route found A = {:?} (|{fold}A| = {}, x = {x})",
        witness.elements, witness.ka_size
    ));
    Ok(Some((scaled, Some(witness))))
}

fn cycle_route(
    k: u32,
    q: u64,
    seed: u64,
    budget: u64,
    log: &mut Vec<String>,
) -> Result<Option<(CyclicSet, Option<HrWitness>)>> {
    let girth = 2 * k;
    if q < girth as u64 || girth < 2 {
        log.push(format!("q = {q}: cycle-equation route needs q >= {girth}"));
        return Ok(None);
    }
    match search_cycle_free_set(q, girth, budget, sub_seed(seed, q, Route::CycleEquations))? {
        Some(set) => {
            let set = normalize_shift(&set)?;
            log.push(format!(
                "q = {q}: cycle-equation route found A = {:?}",
                set.elements()
            ));
            Ok(Some((set, None)))
        }
        None => {
            log.push(format!(
                "q = {q}: no covering set free of closed walks shorter than {girth} after {budget} steps"
            ));
            Ok(None)
        }
    }
}

/// Runs one route at one prime.
pub fn girthex_at(k: u32, q: u64, route: Route, seed: u64, budget: u64) -> Result<GirthexOutcome> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    let mut log = Vec::new();
    let found = match route {
        Route::ProgressionGap => gap_route(k, q, seed, budget, &mut log)?,
        Route::CycleEquations => cycle_route(k, q, seed, budget, &mut log)?,
    };
    let Some((set, witness)) = found else {
        return Ok(GirthexOutcome::Infeasible { k, log });
    };
    let Construction {
        connection,
        intermediate,
        graph,
        reports,
    } = certify_construction(k, &set)?;
    let cert = GirthexCertificate {
        k,
        q,
        route,
        set,
        witness,
        connection,
        intermediate,
        graph,
        reports,
        log,
    };
    if !cert.holds() {
        let mut log = cert.log;
        log.push(format!(
            "q = {q}: BFS certification failed: {:?}",
            cert.reports
        ));
        return Ok(GirthexOutcome::Infeasible { k, log });
    }
    Ok(GirthexOutcome::Certified(Box::new(cert)))
}

/// Tries both routes at a single prime, progression gap first.
pub fn girthex_pipeline(k: u32, q: u64, seed: u64, budget: u64) -> Result<GirthexOutcome> {
    let mut log = Vec::new();
    for route in [Route::ProgressionGap, Route::CycleEquations] {
        match girthex_at(k, q, route, seed, budget)? {
            GirthexOutcome::Certified(mut cert) => {
                log.append(&mut cert.log);
                cert.log = log;
                return Ok(GirthexOutcome::Certified(cert));
            }
            GirthexOutcome::Infeasible { log: mut l, .. } => log.append(&mut l),
        }
    }
    Ok(GirthexOutcome::Infeasible { k, log })
}

/// Scans primes in increasing order: first with the progression-gap route
/// up to `gap_prime_limit`, then with the cycle-equation route up to
/// `max_prime`. Returns the first certified construction.
pub fn girthex_scan(k: u32, seed: u64, options: GirthexOptions) -> Result<GirthexOutcome> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    let mut log = Vec::new();
    let phases = [
        (
            Route::ProgressionGap,
            options.gap_prime_limit.min(options.max_prime),
        ),
        (Route::CycleEquations, options.max_prime),
    ];
    for (route, limit) in phases {
        let mut q = 2;
        while q <= limit {
            if is_prime(q) {
                match girthex_at(k, q, route, seed, options.search_budget)? {
                    GirthexOutcome::Certified(mut cert) => {
                        log.append(&mut cert.log);
                        cert.log = log;
                        return Ok(GirthexOutcome::Certified(cert));
                    }
                    GirthexOutcome::Infeasible { log: mut l, .. } => log.append(&mut l),
                }
            }
            q += 1;
        }
    }
    Ok(GirthexOutcome::Infeasible { k, log })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(q: u64, e: &[u64]) -> CyclicSet {
        CyclicSet::new(q, e.iter().copied()).unwrap()
    }

    /// Exhaustive closed-walk enumeration in `Cay(ℤ_q², B)` from the
    /// origin, used as an oracle for the cycle equations.
    fn shortest_closed_walk(q: u64, b: &[(u64, u64)], max_len: u32) -> Option<u32> {
        let mut frontier = vec![(0u64, 0u64)];
        for len in 1..=max_len {
            let mut next = Vec::new();
            for &(i, j) in &frontier {
                for &(a, c) in b {
                    let v = ((i + a) % q, (j + c) % q);
                    if v == (0, 0) {
                        return Some(len);
                    }
                    next.push(v);
                }
            }
            frontier = next;
        }
        None
    }

    #[test]
    fn cycle_equations_match_walk_enumeration() {
        for (q, elems) in [
            (5, vec![0, 3, 4]),
            (7, vec![0, 1, 3]),
            (11, vec![0, 6, 9, 10]),
            (7, vec![0, 2, 3]),
        ] {
            let a = set(q, &elems);
            let b: Vec<(u64, u64)> = elems
                .iter()
                .flat_map(|&x| [(x, q - 1), (q - 1, x)])
                .collect();
            let shortest = shortest_closed_walk(q, &b, 6);
            let first = cycle_equation_solutions(&a, 6)
                .unwrap()
                .first()
                .map(|&(n, m)| n + m);
            assert_eq!(shortest, first, "q = {q}, A = {elems:?}");
        }
    }

    #[test]
    fn known_small_constructions() {
        let c = certify_construction(2, &set(5, &[0, 3, 4])).unwrap();
        let (inter, graph, reports) = (c.intermediate, c.graph, c.reports);
        assert!(reports.iter().all(|r| r.holds), "{reports:?}");
        assert_eq!(metrics::directed_girth(&inter), Some(4));
        assert_eq!(metrics::undirected_diameter(&graph).unwrap(), 2);
        let c = certify_construction(3, &set(11, &[0, 6, 9, 10])).unwrap();
        let (inter, reports) = (c.intermediate, c.reports);
        assert!(reports.iter().all(|r| r.holds), "{reports:?}");
        assert_eq!(metrics::directed_girth(&inter), Some(6));
    }

    #[test]
    fn failing_construction_is_reported() {
        // 1 ∈ A gives the 2-cycle (1, −1) + (−1, 1) = 0
        let reports = certify_construction(2, &set(5, &[0, 1, 3]))
            .unwrap()
            .reports;
        let girth = reports
            .iter()
            .find(|r| r.name == "intermediate_girth")
            .unwrap();
        assert!(!girth.holds);
    }

    #[test]
    fn pipeline_k1_uses_progression_gap() {
        let out = girthex_scan(1, 7, GirthexOptions::default()).unwrap();
        let cert = out.certificate().expect("k = 1 is feasible");
        assert_eq!(cert.route, Route::ProgressionGap);
        assert!(cert.holds());
        assert!(cert.witness.as_ref().unwrap().covers);
    }

    #[test]
    fn pipeline_is_deterministic() {
        let a = girthex_pipeline(2, 7, 3, 2000).unwrap();
        let b = girthex_pipeline(2, 7, 3, 2000).unwrap();
        match (a, b) {
            (GirthexOutcome::Certified(a), GirthexOutcome::Certified(b)) => {
                assert_eq!(a.to_json(), b.to_json())
            }
            (
                GirthexOutcome::Infeasible { log: a, .. },
                GirthexOutcome::Infeasible { log: b, .. },
            ) => assert_eq!(a, b),
            _ => panic!("outcomes differ"),
        }
    }
}
