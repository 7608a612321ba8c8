use std::sync::OnceLock;

use cohconf::inequalities::{check_ruzsa, check_star, mains_explicit_bound, ExpansionChecker};
use cohconf::metrics;
use cohconf::scheme::{
    cyclic_generators, pair_orbit_scheme, path_count_invariance_check, verify_scheme, wl_closure,
};
use cohconf::suites::corpus::{self, NamedScheme};
use cohconf::{PointSet, PointSubset, Relation, Scheme};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn corpus16() -> &'static [NamedScheme] {
    static CORPUS: OnceLock<Vec<NamedScheme>> = OnceLock::new();
    CORPUS.get_or_init(|| corpus::schemes(16).unwrap())
}

fn scheme_index() -> impl Strategy<Value = usize> {
    0..corpus16().len()
}

fn union_by_mask(s: &Scheme, mask: u64) -> Relation {
    let idx: Vec<usize> = (0..s.rank())
        .filter(|i| mask >> (i % 64) & 1 == 1)
        .collect();
    s.union_of(&idx)
}

/// Symmetric union of classes picked by `mask`, closed under transposition.
fn symmetric_union(s: &Scheme, mask: u64) -> Relation {
    let idx: Vec<usize> = (0..s.rank())
        .filter(|&i| i != s.diagonal_index())
        .filter(|&i| mask >> (i.min(s.transpose_index(i)) % 64) & 1 == 1)
        .collect();
    s.union_of(&idx)
}

#[test]
fn every_corpus_scheme_reverifies() {
    for ns in corpus16() {
        let again = verify_scheme(ns.scheme.basis().to_vec()).unwrap();
        assert_eq!(again, ns.scheme, "{}", ns.name);
        for r in ns.scheme.basis() {
            assert!(r.is_biregular(), "{}", ns.name);
        }
    }
}

#[test]
fn orbital_schemes_refine_closures_of_their_classes() {
    for ns in corpus16().iter().filter(|ns| !ns.name.starts_with("WL")) {
        let s = &ns.scheme;
        for i in 0..s.rank() {
            let wl = wl_closure(std::slice::from_ref(s.basis_relation(i)))
                .unwrap()
                .into_scheme()
                .unwrap_or_else(|| panic!("{} class {i}: inhomogeneous", ns.name));
            for r in s.basis() {
                let (x0, y0) = r.pairs().next().unwrap();
                let c = wl.color(x0, y0);
                assert!(r.pairs().all(|(x, y)| wl.color(x, y) == c), "{}", ns.name);
            }
        }
    }
}

#[test]
fn cayley_closure_is_homogeneous() {
    use cohconf::constructions::{build_cayley, CayleySpec};
    let b = build_cayley(
        &CayleySpec::CyclicSquare {
            q: 5,
            connection: vec![(0, 4), (3, 4), (4, 0), (4, 3), (4, 4)],
        },
        false,
    )
    .unwrap();
    let s = wl_closure(std::slice::from_ref(&b))
        .unwrap()
        .into_scheme()
        .expect("vertex-transitive seed");
    assert!(s.in_s_union(&b).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn s_union_is_closed(i in scheme_index(), ma in any::<u64>(), mb in any::<u64>()) {
        let s = &corpus16()[i].scheme;
        let a = union_by_mask(s, ma);
        let b = union_by_mask(s, mb);
        prop_assert!(s.in_s_union(&a.product(&b).unwrap()).unwrap());
        prop_assert!(s.in_s_union(&a.transpose()).unwrap());
    }

    #[test]
    fn path_counts_are_invariant(i in scheme_index(), chain in prop::collection::vec(any::<usize>(), 1..=3), r in any::<usize>()) {
        let s = &corpus16()[i].scheme;
        let chain: Vec<usize> = chain.into_iter().map(|c| c % s.rank()).collect();
        prop_assert!(path_count_invariance_check(s, &chain, r % s.rank()).unwrap());
    }

    #[test]
    fn geodesic_sums_are_constant(i in scheme_index(), mask in any::<u64>()) {
        let s = &corpus16()[i].scheme;
        let b = symmetric_union(s, mask);
        prop_assume!(metrics::undirected_diameter(&b).is_ok());
        let p = metrics::through_vertex_counts_all(&b).unwrap();
        prop_assert!(p.iter().all(|v| *v == p[0]));
        let total = metrics::distance_sum_plus_one(&metrics::directed_distances(&b)).unwrap();
        let n = BigRational::from_integer(BigInt::from(s.n()));
        prop_assert_eq!(&p[0] * n, BigRational::from_integer(BigInt::from(total)));
    }

    #[test]
    fn expansion_holds_for_random_subsets(i in scheme_index(), mask in any::<u64>(), tmask in any::<u64>()) {
        let s = &corpus16()[i].scheme;
        let b = symmetric_union(s, mask);
        prop_assume!(metrics::undirected_diameter(&b).is_ok());
        let t = PointSubset::from_points(b.domain(), (0..s.n()).filter(|x| tmask >> x & 1 == 1)).unwrap();
        prop_assume!(!t.is_empty());
        let checker = ExpansionChecker::new(s, &b).unwrap();
        prop_assert!(checker.check(&t).unwrap().holds);
        if let Some(h) = checker.check_halved(&t).unwrap() {
            prop_assert!(h.holds);
        }
    }

    #[test]
    fn star_ratio_holds(i in scheme_index(), amask in any::<u64>(), tmask in any::<u64>()) {
        let s = &corpus16()[i].scheme;
        let a = union_by_mask(s, amask).with_loops();
        let t = union_by_mask(s, tmask);
        prop_assume!(!t.is_empty() && 2 * t.norm() <= s.n());
        prop_assume!(metrics::directed_diameter(&a).is_ok());
        prop_assert!(check_star(s, &t, &a).unwrap().holds);
    }

    #[test]
    fn mains_bound_dominates_scheme_diameters(i in scheme_index(), mask in any::<u64>()) {
        let s = &corpus16()[i].scheme;
        let a = union_by_mask(s, mask);
        prop_assume!(s.n() >= 2);
        let Ok(d) = metrics::undirected_diameter(&a) else { return Ok(()) };
        let directed = metrics::directed_diameter(&a.with_loops()).unwrap();
        prop_assert!(directed as u128 <= mains_explicit_bound(d, s.n() as u64).unwrap());
    }

    #[test]
    fn mains_bound_is_monotone(d in 1u32..20, n in 2u64..100_000) {
        let v = mains_explicit_bound(d, n).unwrap();
        prop_assert!(v <= mains_explicit_bound(d + 1, n).unwrap());
        prop_assert!(v <= mains_explicit_bound(d, n + 1).unwrap());
    }

    #[test]
    fn ruzsa_holds_with_regular_middle(
        n in 1usize..=24,
        shifts in prop::collection::btree_set(0usize..24, 1..6),
        seed_a in prop::collection::vec(any::<bool>(), 576),
        seed_c in prop::collection::vec(any::<bool>(), 576),
        perm in Just((0..24usize).collect::<Vec<_>>()).prop_shuffle(),
    ) {
        let d = PointSet::new(n).unwrap();
        // a relabelled circulant is regular without being a group orbit
        let relabel: Vec<usize> = perm.into_iter().filter(|&p| p < n).collect();
        let b = Relation::from_fn(d, |x, y| shifts.contains(&((relabel[y] + n - relabel[x]) % n)));
        prop_assume!(b.is_regular());
        let a = Relation::from_fn(d, |x, y| seed_a[x * 24 + y]);
        let c = Relation::from_fn(d, |x, y| seed_c[x * 24 + y]);
        prop_assert!(check_ruzsa(&a, &b, &c).unwrap().holds);
    }
}

#[test]
fn cyclic_orbit_classes_are_differences() {
    for q in 2..=12 {
        let s = pair_orbit_scheme(PointSet::new(q).unwrap(), &cyclic_generators(q)).unwrap();
        for x in 0..q {
            for y in 0..q {
                assert_eq!(s.color(x, y), s.color(0, (y + q - x) % q));
            }
        }
    }
}
