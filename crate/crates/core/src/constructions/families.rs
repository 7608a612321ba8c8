use crate::error::Result;
use crate::relation::{PointSet, Relation};
use crate::scheme::{symmetric_generators, Permutation};

/// The 2-subsets of `0..m` in lexicographic order.
pub fn two_subsets(m: usize) -> Vec<(usize, usize)> {
    (0..m)
        .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
        .collect()
}

/// `Sym(m)` acting on 2-subsets, numbered as in [`two_subsets`]. Its
/// orbital scheme is the Johnson scheme `J(m, 2)`.
pub fn johnson_action(m: usize) -> Result<(PointSet, Vec<Permutation>)> {
    let subsets = two_subsets(m);
    let domain = PointSet::new(subsets.len())?;
    let index = |a: usize, b: usize| {
        let key = (a.min(b), a.max(b));
        subsets.binary_search(&key).expect("2-subset")
    };
    let gens = symmetric_generators(m)
        .iter()
        .map(|g| {
            Permutation::new(
                subsets
                    .iter()
                    .map(|&(a, b)| index(g.apply(a), g.apply(b)))
                    .collect(),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((domain, gens))
}

/// Kneser graph on the 2-subsets of `0..m`: adjacent iff disjoint.
pub fn kneser_two(m: usize) -> Result<Relation> {
    let subsets = two_subsets(m);
    let domain = PointSet::new(subsets.len())?;
    Ok(Relation::from_fn(domain, |x, y| {
        let (a, b) = subsets[x];
        let (c, d) = subsets[y];
        a != c && a != d && b != c && b != d
    }))
}

/// The Petersen graph, as the Kneser graph `K(5, 2)`.
pub fn petersen() -> Relation {
    kneser_two(5).expect("10 points")
}
