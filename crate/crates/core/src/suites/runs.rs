use rand::seq::index::sample;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::corpus::{self, random_union, symmetric_relations, union_label};
use super::{labelled_rng, Suite, SuiteParams, SuiteReport};
use crate::constructions::{
    build_cayley, girthex_scan, primes_between, CayleySpec, GirthexOptions, GirthexOutcome,
};
use crate::error::Result;
use crate::format::write_edge_list;
use crate::inequalities::{
    check_mains, check_pigeonhole_doubling, check_ruzsa, check_star, comm_bound, BoundReport,
    ExpansionChecker,
};
use crate::metrics;
use crate::relation::{PointSet, PointSubset, Relation};
use crate::scheme::{cyclic_generators, pair_orbit_scheme};

const RUZSA_SIZES: [usize; 4] = [8, 16, 32, 64];

fn compact(rel: &Relation) -> String {
    write_edge_list(rel).trim_end().replace('\n', ";")
}

fn random_relation(domain: PointSet, density: f64, rng: &mut ChaCha8Rng) -> Relation {
    Relation::from_fn(domain, |_, _| rng.gen_bool(density))
}

/// Every row gets exactly `degree` random successors.
fn random_regular(domain: PointSet, degree: usize, rng: &mut ChaCha8Rng) -> Relation {
    let n = domain.len();
    let mut rel = Relation::empty(domain);
    for x in 0..n {
        for y in sample(rng, n, degree) {
            rel.set(x, y);
        }
    }
    rel
}

pub(super) fn ruzsa(params: &SuiteParams) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(Suite::Ruzsa, params.seed);
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    for trial in 0..params.trials.unwrap_or(1000) {
        let n = params
            .n
            .unwrap_or(RUZSA_SIZES[trial as usize % RUZSA_SIZES.len()]);
        let domain = PointSet::new(n)?;
        let degree = rng.gen_range(1..=n);
        let b = random_regular(domain, degree, &mut rng);
        let a = random_relation(domain, rng.gen_range(0.02..0.5), &mut rng);
        let c = random_relation(domain, rng.gen_range(0.02..0.5), &mut rng);
        let r = check_ruzsa(&a, &b, &c)?;
        report.push(format!("n={n:02} trial={trial:05}"), &r, || {
            format!("a={} b={} c={}", compact(&a), compact(&b), compact(&c))
        });
    }
    Ok(report)
}

/// `(measured numerator · bound denominator, bound numerator · measured
/// denominator)`; smaller first / second means tighter.
fn tightness(checker: &ExpansionChecker<'_>, n: usize, t: usize, s: usize) -> (u128, u128) {
    let (n, t, s) = (n as u128, t as u128, s as u128);
    (s * (checker.diameter() as u128 * n + t), 2 * (n - t) * t)
}

pub(super) fn expand(params: &SuiteParams) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(Suite::Expand, params.seed);
    let max_n = params.q.unwrap_or(64) as usize;
    let max_size = params.k.unwrap_or(8) as usize;
    let random_trials = params.trials.unwrap_or(1000);
    for ns in corpus::schemes(max_n)? {
        let s = &ns.scheme;
        let n = s.n();
        let mut rel_rng = labelled_rng(params.seed, &format!("sym {}", ns.name));
        for (label, b) in symmetric_relations(s, &mut rel_rng, 4) {
            let checker = ExpansionChecker::new(s, &b)?;
            let prefix = format!("{} b={label}", ns.name);

            // every subset with |T| ≤ max_size
            let sweep = checker.sweep(max_size, None)?;
            let reported = sweep.first_failure.as_ref().or(sweep.tightest.as_ref());
            if let Some(t) = reported {
                let mut r = checker.check(t)?;
                if let Some(h) = checker.check_halved(t)? {
                    r.holds &= h.holds;
                }
                r.holds &= sweep.first_failure.is_none();
                let instance = format!("{prefix} sweep(|T|<={max_size},{})", sweep.checked);
                report.push(instance, &r, || format!("b={} T={t:?}", compact(&b)));
            }

            // Random larger subsets.
            if n > max_size && random_trials > 0 {
                let mut t_rng = labelled_rng(params.seed, &format!("T {prefix}"));
                let mut worst: Option<((u128, u128), PointSubset)> = None;
                let mut failure: Option<PointSubset> = None;
                for _ in 0..random_trials {
                    let size = t_rng.gen_range(max_size + 1..=n);
                    let t = PointSubset::from_points(b.domain(), sample(&mut t_rng, n, size))?;
                    let boundary = metrics::boundary(&b, &t)?.len();
                    let ok = checker.holds_for_counts(size, boundary)
                        && (2 * size > n || checker.halved_holds_for_counts(size, boundary));
                    if !ok && failure.is_none() {
                        failure = Some(t.clone());
                    }
                    if size < n {
                        let key = tightness(&checker, n, size, boundary);
                        if worst
                            .as_ref()
                            .is_none_or(|(w, _)| key.0 * w.1 < w.0 * key.1)
                        {
                            worst = Some((key, t));
                        }
                    }
                }
                let pick = failure.clone().or(worst.map(|(_, t)| t));
                if let Some(t) = pick {
                    let mut r = checker.check(&t)?;
                    r.holds &= failure.is_none();
                    let instance = format!("{prefix} random({random_trials})");
                    report.push(instance, &r, || format!("b={} T={t:?}", compact(&b)));
                }
            }

            // Through-vertex geodesic sums: constant over z, and n·P = Σ(d+1).
            let p = metrics::through_vertex_counts_all(&b)?;
            let total = metrics::distance_sum_plus_one(&metrics::directed_distances(&b))?;
            let n_p = &p[0] * num_rational::BigRational::from_integer((n as u64).into());
            let constant = p.iter().all(|v| *v == p[0]);
            let mut r = BoundReport::new(
                "geodesics",
                n_p.clone(),
                num_rational::BigRational::from_integer(total.into()),
            );
            r.holds = constant && r.lhs == r.rhs;
            report.push(format!("{prefix} geodesics"), &r, || {
                format!("b={} P={p:?}", compact(&b))
            });
        }
    }
    Ok(report)
}

pub(super) fn commbound(params: &SuiteParams) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(Suite::CommBound, params.seed);
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let primes = primes_between(5, params.q.unwrap_or(512).max(5));
    let trials = params.trials.unwrap_or(200);
    let mut draws: Vec<(u64, u64, Vec<u64>)> = (0..trials)
        .map(|trial| {
            let q = primes[rng.gen_range(0..primes.len())];
            let size = rng.gen_range(1..=4.min(q as usize - 1));
            let mut conn: Vec<u64> = sample(&mut rng, q as usize - 1, size)
                .into_iter()
                .map(|i| i as u64 + 1)
                .collect();
            conn.sort_unstable();
            (q, trial, conn)
        })
        .collect();
    // one scheme per modulus, built once
    draws.sort();
    let mut current: Option<(u64, crate::scheme::Scheme)> = None;
    for (q, trial, conn) in draws {
        if current.as_ref().is_none_or(|(cq, _)| *cq != q) {
            let domain = PointSet::new(q as usize)?;
            current = Some((
                q,
                pair_orbit_scheme(domain, &cyclic_generators(q as usize))?,
            ));
        }
        let scheme = &current.as_ref().expect("set above").1;
        let a = build_cayley(
            &CayleySpec::Cyclic {
                q,
                connection: conn.clone(),
            },
            false,
        )?;
        let prefix = format!("trial={trial:04} q={q:03} S={conn:?}");
        let r = comm_bound(scheme, &a)?;
        report.push(format!("{prefix} comm_bound"), &r, || format!("S={conn:?}"));
        let m = check_mains(scheme, &a)?;
        report.push(format!("{prefix} mains"), &m, || format!("S={conn:?}"));
    }
    Ok(report)
}

pub(super) fn mains(params: &SuiteParams) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(Suite::Mains, params.seed);
    let unions = params.trials.unwrap_or(4);
    for ns in corpus::schemes(params.n.unwrap_or(64))? {
        let s = &ns.scheme;
        let n = s.n();
        if n < 2 {
            continue;
        }
        let mut connected: Vec<(String, Relation)> = Vec::new();
        for i in 0..s.rank() {
            if i != s.diagonal_index() {
                connected.push((format!("r={i:02}"), s.basis_relation(i).clone()));
            }
        }
        // the relations of the expansion suite
        let mut rel_rng = labelled_rng(params.seed, &format!("sym {}", ns.name));
        for (label, b) in symmetric_relations(s, &mut rel_rng, 4) {
            connected.push((format!("b={label}"), b));
        }
        let mut rng = labelled_rng(params.seed, &format!("mains {}", ns.name));
        for _ in 0..unions {
            let (idx, u) = random_union(s, &mut rng, 0.3, false);
            if !idx.is_empty() {
                connected.push((format!("u={}", union_label(&idx)), u));
            }
        }
        connected.retain(|(_, r)| metrics::directed_diameter(r).is_ok());

        for (label, a) in &connected {
            let r = check_mains(s, a)?;
            report.push(format!("{} {label} mains", ns.name), &r, || compact(a));
        }

        // (⋆) for a few connected a (loops added) and small t
        let mut smalls: Vec<(String, Relation)> = (0..s.rank())
            .filter(|&i| i != s.diagonal_index() && 2 * s.valency(i) <= n)
            .map(|i| (format!("r={i:02}"), s.basis_relation(i).clone()))
            .collect();
        for _ in 0..unions {
            let (idx, t) = random_union(s, &mut rng, 0.2, true);
            if !idx.is_empty() && 2 * t.norm() <= n {
                smalls.push((format!("u={}", union_label(&idx)), t));
            }
        }
        let star_a: Vec<&(String, Relation)> = connected.iter().take(3).collect();
        let star_t: Vec<&(String, Relation)> = if smalls.len() <= 4 {
            smalls.iter().collect()
        } else {
            sample(&mut rng, smalls.len(), 4)
                .into_iter()
                .map(|i| &smalls[i])
                .collect()
        };
        for (al, a) in &star_a {
            let looped = a.with_loops();
            for (tl, t) in &star_t {
                let r = check_star(s, t, &looped)?;
                report.push(format!("{} a={al} t={tl} star", ns.name), &r, || {
                    format!("a={} t={}", compact(&looped), compact(t))
                });
            }
        }

        // pigeonhole doubling for a union just above half the points
        let mut order: Vec<usize> = (0..s.rank()).collect();
        for i in (1..order.len()).rev() {
            order.swap(i, rng.gen_range(0..=i));
        }
        let mut chosen = Vec::new();
        let mut degree = 0;
        for i in order {
            if 2 * degree > n {
                break;
            }
            chosen.push(i);
            degree += s.valency(i);
        }
        chosen.sort_unstable();
        let big = s.union_of(&chosen);
        let r = check_pigeonhole_doubling(&big)?;
        report.push(
            format!("{} u={} pigeonhole", ns.name, union_label(&chosen)),
            &r,
            || compact(&big),
        );
    }
    Ok(report)
}

pub(super) fn girthex(params: &SuiteParams) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(Suite::Girthex, params.seed);
    let k = params.k.unwrap_or(2);
    let defaults = GirthexOptions::default();
    let options = GirthexOptions {
        search_budget: params.trials.unwrap_or(defaults.search_budget),
        max_prime: params.q.unwrap_or(defaults.max_prime),
        ..defaults
    };
    match girthex_scan(k, params.seed, options)? {
        GirthexOutcome::Certified(cert) => {
            for r in &cert.reports {
                let instance = format!("k={k} q={:05} {:?} {}", cert.q, cert.route, r.name);
                report.push(instance, r, || r.witness.clone().unwrap_or_default());
            }
            report.log = cert.log.clone();
        }
        GirthexOutcome::Infeasible { log, .. } => {
            report.infeasible = true;
            report.log = log;
        }
    }
    Ok(report)
}
