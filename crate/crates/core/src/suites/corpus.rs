use rand::Rng;

use crate::constructions::{johnson_action, kneser_two, petersen};
use crate::error::Result;
use crate::metrics;
use crate::relation::{PointSet, Relation};
use crate::scheme::{
    cyclic_generators, dihedral_generators, pair_orbit_scheme, symmetric_generators, wl_closure,
    Scheme,
};

#[derive(Clone, Debug)]
pub struct NamedScheme {
    pub name: String,
    pub scheme: Scheme,
}

fn orbit(name: String, n: usize, gens: &[crate::scheme::Permutation]) -> Result<NamedScheme> {
    Ok(NamedScheme {
        name,
        scheme: pair_orbit_scheme(PointSet::new(n)?, gens)?,
    })
}

fn closure(name: &str, seed: Relation) -> Result<NamedScheme> {
    let scheme = wl_closure(&[seed])?.into_scheme().ok_or_else(|| {
        crate::error::Error::Precondition(format!("closure of {name} is inhomogeneous"))
    })?;
    Ok(NamedScheme {
        name: format!("WL({name})"),
        scheme,
    })
}

/// The certified test schemes on at most `max_n` points: orbital schemes of
/// `ℤ_q`, of dihedral groups, of symmetric groups (rank 2) and of `Sym(m)` on
/// 2-subsets, plus WL closures of the Petersen graph, the directed 5-cycle
/// and the Kneser graph `K(6, 2)`.
pub fn schemes(max_n: usize) -> Result<Vec<NamedScheme>> {
    let mut out = Vec::new();
    for q in 2..=max_n {
        out.push(orbit(format!("Z{q:03}"), q, &cyclic_generators(q))?);
    }
    // dihedral groups of order 2m ≤ 64
    for m in 3..=max_n.min(32) {
        out.push(orbit(format!("D{m:03}"), m, &dihedral_generators(m))?);
    }
    for m in [3, 4, 6, 8] {
        if m <= max_n {
            out.push(orbit(format!("Sym{m:03}"), m, &symmetric_generators(m))?);
        }
    }
    for m in [5, 6, 7] {
        if m * (m - 1) / 2 <= max_n {
            let (domain, gens) = johnson_action(m)?;
            out.push(orbit(format!("J({m},2)"), domain.len(), &gens)?);
        }
    }
    if max_n >= 10 {
        out.push(closure("Petersen", petersen())?);
    }
    if max_n >= 5 {
        out.push(closure("C5", Relation::directed_cycle(PointSet::new(5)?))?);
    }
    if max_n >= 15 {
        out.push(closure("K(6,2)", kneser_two(6)?)?);
    }
    Ok(out)
}

/// Basis indices of `s` grouped into symmetric classes `{i, i*}`, diagonal
/// excluded, in increasing order of the smaller index.
pub fn symmetric_classes(s: &Scheme) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for i in 0..s.rank() {
        let j = s.transpose_index(i);
        if i == s.diagonal_index() || j < i {
            continue;
        }
        out.push(if i == j { vec![i] } else { vec![i, j] });
    }
    out
}

fn label(indices: &[usize]) -> String {
    let parts: Vec<String> = indices.iter().map(usize::to_string).collect();
    format!("{{{}}}", parts.join(","))
}

/// Up to `limit` symmetric connected relations of `S^∪`: connected single
/// symmetric classes (at most two), the complete graph, then random unions
/// of classes. Duplicates are dropped.
pub fn symmetric_relations(
    s: &Scheme,
    rng: &mut impl Rng,
    limit: usize,
) -> Vec<(String, Relation)> {
    let classes = symmetric_classes(s);
    let mut out: Vec<(String, Relation)> = Vec::new();
    let push = |name: String, rel: Relation, out: &mut Vec<(String, Relation)>| {
        if out.len() < limit
            && metrics::undirected_diameter(&rel).is_ok()
            && !out.iter().any(|(_, r)| *r == rel)
        {
            out.push((name, rel));
        }
    };
    let mut singles = 0;
    for c in &classes {
        if singles == 2 {
            break;
        }
        let before = out.len();
        push(label(c), s.union_of(c), &mut out);
        singles += out.len() - before;
    }
    let all: Vec<usize> = classes.iter().flatten().copied().collect();
    if !all.is_empty() {
        push("all".into(), s.union_of(&all), &mut out);
    }
    for _ in 0..4 * limit {
        if out.len() >= limit || classes.is_empty() {
            break;
        }
        let chosen: Vec<usize> = classes
            .iter()
            .filter(|_| rng.gen_bool(0.5))
            .flatten()
            .copied()
            .collect();
        if !chosen.is_empty() {
            let mut sorted = chosen.clone();
            sorted.sort_unstable();
            push(label(&sorted), s.union_of(&sorted), &mut out);
        }
    }
    out
}

/// Random union of basis relations (diagonal excluded unless
/// `with_diagonal`), each included with probability `p`.
pub fn random_union(
    s: &Scheme,
    rng: &mut impl Rng,
    p: f64,
    with_diagonal: bool,
) -> (Vec<usize>, Relation) {
    let indices: Vec<usize> = (0..s.rank())
        .filter(|&i| (i != s.diagonal_index() || with_diagonal) && rng.gen_bool(p))
        .collect();
    let rel = s.union_of(&indices);
    (indices, rel)
}

pub fn union_label(indices: &[usize]) -> String {
    label(indices)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn corpus_is_certified() {
        let all = schemes(16).unwrap();
        assert!(all.iter().all(|s| s.scheme.is_certified()));
        let names: Vec<&str> = all.iter().map(|s| s.name.as_str()).collect();
        assert!(names.contains(&"Z016") && names.contains(&"WL(Petersen)"));
        assert!(!names.contains(&"Z017"));
    }

    #[test]
    fn symmetric_relations_are_symmetric_and_connected() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for s in schemes(12).unwrap() {
            for (_, r) in symmetric_relations(&s.scheme, &mut rng, 4) {
                assert!(r.is_symmetric());
                assert!(s.scheme.in_s_union(&r).unwrap());
                assert!(metrics::undirected_diameter(&r).is_ok());
            }
        }
    }
}
