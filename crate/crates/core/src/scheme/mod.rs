//! Homogeneous coherent configurations ("schemes").
//!
//! A [`Scheme`] partitions `Ω × Ω` into basis relations such that the
//! diagonal is a basis relation, transposes of basis relations are basis
//! relations, and the intersection numbers
//! `|{z | (x, z) ∈ b, (z, y) ∈ c}|` depend only on the basis relation
//! containing `(x, y)`. Every constructor in this module returns a scheme that
//! has passed [`verify_scheme`].

mod orbit;
mod permutation;
mod wl;

use std::sync::OnceLock;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{Error, Result};
use crate::metrics;
use crate::relation::{PointSet, Relation};

pub use orbit::pair_orbit_scheme;
pub use permutation::{
    cyclic_generators, dihedral_generators, group_elements, is_transitive, point_orbit,
    symmetric_generators, Permutation,
};
pub use wl::{wl_closure, WlOutcome};

/// Why a list of relations is not a scheme. Violations are reported for the
/// first offending relation or pair found in row-major order.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemeViolation {
    #[error("no relations given")]
    NoRelations,

    #[error("relation {index} has {found} points, expected {expected}")]
    DomainMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },

    #[error("relation {index} is empty")]
    EmptyRelation { index: usize },

    #[error("pair ({x}, {y}) lies in relations {first} and {second}")]
    Overlap {
        x: usize,
        y: usize,
        first: usize,
        second: usize,
    },

    #[error("pair ({x}, {y}) is not covered")]
    Uncovered { x: usize, y: usize },

    #[error("axiom 1: the diagonal is not a basis relation")]
    DiagonalNotBasis,

    #[error("axiom 2: the transpose of relation {index} is not a basis relation")]
    TransposeNotBasis { index: usize },

    #[error(
        "axiom 3: for a = {a}, b = {b}, c = {c}: pair {reference:?} has {expected} \
         intermediate points but pair {pair:?} has {found}"
    )]
    IntersectionNumber {
        a: usize,
        b: usize,
        c: usize,
        reference: (usize, usize),
        pair: (usize, usize),
        expected: u32,
        found: u32,
    },
}

/// How thoroughly the intersection-number axiom is checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyMode {
    /// Every pair of every basis relation.
    Exhaustive,
    /// A seeded sample of pairs per basis relation. The resulting scheme is
    /// flagged as uncertified.
    Sampled {
        pairs_per_relation: usize,
        seed: u64,
    },
}

#[derive(Clone, Debug)]
pub struct Scheme {
    domain: PointSet,
    basis: Vec<Relation>,
    color: Vec<u32>,
    transpose_map: Vec<usize>,
    diagonal: usize,
    certified: bool,
    constants: OnceLock<Vec<u32>>,
}

impl PartialEq for Scheme {
    fn eq(&self, other: &Self) -> bool {
        self.domain == other.domain && self.color == other.color
    }
}

impl Eq for Scheme {}

/// Certifies the scheme axioms exhaustively.
pub fn verify_scheme(basis: Vec<Relation>) -> Result<Scheme, SchemeViolation> {
    verify_scheme_with(basis, VerifyMode::Exhaustive)
}

pub fn verify_scheme_with(
    basis: Vec<Relation>,
    mode: VerifyMode,
) -> Result<Scheme, SchemeViolation> {
    let first = basis.first().ok_or(SchemeViolation::NoRelations)?;
    let domain = first.domain();
    let n = domain.len();
    for (index, r) in basis.iter().enumerate() {
        if r.n() != n {
            return Err(SchemeViolation::DomainMismatch {
                index,
                expected: n,
                found: r.n(),
            });
        }
        if r.is_empty() {
            return Err(SchemeViolation::EmptyRelation { index });
        }
    }

    // Partition.
    const NONE: u32 = u32::MAX;
    let mut color = vec![NONE; n * n];
    for (index, r) in basis.iter().enumerate() {
        for (x, y) in r.pairs() {
            let slot = &mut color[x * n + y];
            if *slot != NONE {
                return Err(SchemeViolation::Overlap {
                    x,
                    y,
                    first: *slot as usize,
                    second: index,
                });
            }
            *slot = index as u32;
        }
    }
    if let Some(i) = color.iter().position(|&c| c == NONE) {
        return Err(SchemeViolation::Uncovered { x: i / n, y: i % n });
    }

    // Axiom 1.
    let diagonal = color[0] as usize;
    if basis[diagonal] != Relation::diagonal(domain) {
        return Err(SchemeViolation::DiagonalNotBasis);
    }

    // Axiom 2.
    let mut transpose_map = Vec::with_capacity(basis.len());
    for (index, r) in basis.iter().enumerate() {
        let (x, y) = r.pairs().next().expect("nonempty");
        let t = color[y * n + x] as usize;
        if basis[t] != r.transpose() {
            return Err(SchemeViolation::TransposeNotBasis { index });
        }
        transpose_map.push(t);
    }

    // Axiom 3.
    check_intersection_numbers(&basis, &color, n, mode)?;

    Ok(Scheme {
        domain,
        basis,
        color,
        transpose_map,
        diagonal,
        certified: mode == VerifyMode::Exhaustive,
        constants: OnceLock::new(),
    })
}

fn check_intersection_numbers(
    basis: &[Relation],
    color: &[u32],
    n: usize,
    mode: VerifyMode,
) -> Result<(), SchemeViolation> {
    let rank = basis.len();
    let mut reference = vec![0u32; rank * rank];
    let mut ref_keys: Vec<usize> = Vec::with_capacity(n);
    let mut counts = vec![0u32; rank * rank];
    let mut touched: Vec<usize> = Vec::with_capacity(n);
    let mut rng = match mode {
        VerifyMode::Sampled { seed, .. } => Some(ChaCha8Rng::seed_from_u64(seed)),
        VerifyMode::Exhaustive => None,
    };

    for (a, rel) in basis.iter().enumerate() {
        let mut pairs: Vec<(usize, usize)> = rel.pairs().collect();
        if let (
            Some(rng),
            VerifyMode::Sampled {
                pairs_per_relation, ..
            },
        ) = (rng.as_mut(), mode)
        {
            let first = pairs[0];
            pairs[1..].shuffle(rng);
            pairs.truncate(pairs_per_relation.max(1));
            pairs[0] = first;
        }
        let reference_pair = pairs[0];
        for &key in &ref_keys {
            reference[key] = 0;
        }
        ref_keys.clear();
        {
            let (x, y) = reference_pair;
            for z in 0..n {
                let key = color[x * n + z] as usize * rank + color[z * n + y] as usize;
                if reference[key] == 0 {
                    ref_keys.push(key);
                }
                reference[key] += 1;
            }
        }
        for &(x, y) in &pairs[1..] {
            for z in 0..n {
                let key = color[x * n + z] as usize * rank + color[z * n + y] as usize;
                if counts[key] == 0 {
                    touched.push(key);
                }
                counts[key] += 1;
            }
            // Same support size and same values on the support means equal vectors.
            let mismatch = if touched.len() != ref_keys.len() {
                ref_keys
                    .iter()
                    .chain(&touched)
                    .copied()
                    .find(|&k| counts[k] != reference[k])
            } else {
                touched.iter().copied().find(|&k| counts[k] != reference[k])
            };
            if let Some(key) = mismatch {
                return Err(SchemeViolation::IntersectionNumber {
                    a,
                    b: key / rank,
                    c: key % rank,
                    reference: reference_pair,
                    pair: (x, y),
                    expected: reference[key],
                    found: counts[key],
                });
            }
            for &k in &touched {
                counts[k] = 0;
            }
            touched.clear();
        }
    }
    Ok(())
}

/// Serialised form of a scheme.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeExport {
    pub n: usize,
    pub rank: usize,
    /// Row-major `n × n` matrix of basis indices.
    pub color_matrix: Vec<u32>,
    pub transpose_map: Vec<usize>,
}

impl SchemeExport {
    /// Rebuilds and re-certifies the scheme.
    pub fn into_scheme(self) -> Result<Scheme> {
        let domain = PointSet::new(self.n)?;
        if self.color_matrix.len() != self.n * self.n {
            return Err(Error::InvalidArgument(format!(
                "color matrix has {} entries, expected {}",
                self.color_matrix.len(),
                self.n * self.n
            )));
        }
        let mut basis = vec![Relation::empty(domain); self.rank];
        for (i, &c) in self.color_matrix.iter().enumerate() {
            let rel = basis.get_mut(c as usize).ok_or_else(|| {
                Error::InvalidArgument(format!("color {c} exceeds rank {}", self.rank))
            })?;
            rel.insert(i / self.n, i % self.n)?;
        }
        let scheme = verify_scheme(basis)?;
        if scheme.transpose_map != self.transpose_map {
            return Err(Error::InvalidArgument(
                "transpose map does not match".into(),
            ));
        }
        Ok(scheme)
    }
}

impl Scheme {
    pub fn domain(&self) -> PointSet {
        self.domain
    }

    pub fn n(&self) -> usize {
        self.domain.len()
    }

    /// Number of basis relations.
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Relation] {
        &self.basis
    }

    pub fn basis_relation(&self, index: usize) -> &Relation {
        &self.basis[index]
    }

    /// Index of the basis relation containing `(x, y)`.
    #[inline]
    pub fn color(&self, x: usize, y: usize) -> usize {
        self.color[x * self.n() + y] as usize
    }

    pub fn transpose_index(&self, index: usize) -> usize {
        self.transpose_map[index]
    }

    pub fn transpose_map(&self) -> &[usize] {
        &self.transpose_map
    }

    pub fn diagonal_index(&self) -> usize {
        self.diagonal
    }

    /// False only for schemes verified in sampled mode.
    pub fn is_certified(&self) -> bool {
        self.certified
    }

    /// Out-degree of a basis relation.
    pub fn valency(&self, index: usize) -> usize {
        self.basis[index].out_degree(0)
    }

    /// Intersection number `c^a_{bc}`: the number of `z` with `(x, z) ∈ b`
    /// and `(z, y) ∈ c` for any `(x, y) ∈ a`.
    pub fn structure_constant(&self, a: usize, b: usize, c: usize) -> u32 {
        let rank = self.rank();
        self.structure_constants()[(a * rank + b) * rank + c]
    }

    fn structure_constants(&self) -> &[u32] {
        self.constants.get_or_init(|| {
            let (n, rank) = (self.n(), self.rank());
            let mut out = vec![0u32; rank * rank * rank];
            for (a, rel) in self.basis.iter().enumerate() {
                let (x, y) = rel.pairs().next().expect("nonempty");
                for z in 0..n {
                    out[(a * rank + self.color(x, z)) * rank + self.color(z, y)] += 1;
                }
            }
            out
        })
    }

    /// Union of the given basis relations.
    pub fn union_of(&self, indices: &[usize]) -> Relation {
        let mut out = Relation::empty(self.domain);
        for &i in indices {
            out = out.union(&self.basis[i]).expect("same domain");
        }
        out
    }

    /// A basis relation that `a` splits (meets without containing), if any.
    pub fn split_class(&self, a: &Relation) -> Result<Option<usize>> {
        if a.domain() != self.domain {
            return Err(Error::DomainMismatch {
                left: self.n(),
                right: a.n(),
            });
        }
        let n = self.n();
        // 0 = unseen, 1 = inside, 2 = outside
        let mut state = vec![0u8; self.rank()];
        for x in 0..n {
            for y in 0..n {
                let c = self.color(x, y);
                let s = if a.contains(x, y) { 1 } else { 2 };
                match state[c] {
                    0 => state[c] = s,
                    prev if prev != s => return Ok(Some(c)),
                    _ => {}
                }
            }
        }
        Ok(None)
    }

    /// True iff `a` is a union of basis relations.
    pub fn in_s_union(&self, a: &Relation) -> Result<bool> {
        Ok(self.split_class(a)?.is_none())
    }

    /// Errors with [`Error::NotInSUnion`] unless `a` is a union of basis relations.
    pub fn require_s_union(&self, a: &Relation) -> Result<()> {
        match self.split_class(a)? {
            Some(class) => Err(Error::NotInSUnion { class }),
            None => Ok(()),
        }
    }

    /// Basis indices whose union is `a`; `a` must lie in S^∪.
    pub fn decompose(&self, a: &Relation) -> Result<Vec<usize>> {
        self.require_s_union(a)?;
        Ok((0..self.rank())
            .filter(|&i| {
                let (x, y) = self.basis[i].pairs().next().expect("nonempty");
                a.contains(x, y)
            })
            .collect())
    }

    pub fn export(&self) -> SchemeExport {
        SchemeExport {
            n: self.n(),
            rank: self.rank(),
            color_matrix: self.color.clone(),
            transpose_map: self.transpose_map.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.export()).expect("plain data serialises")
    }
}

/// Checks that every distance-`i` relation of `b` lies in S^∪.
pub fn distance_partition_in_s_union(scheme: &Scheme, b: &Relation) -> Result<bool> {
    scheme.require_s_union(b)?;
    if let Some((x, y)) = b.first_asymmetric_pair() {
        return Err(Error::NotSymmetric(x, y));
    }
    let d = metrics::directed_distances(b);
    if let Some((from, to)) = d.first_unreachable() {
        return Err(Error::Disconnected { from, to });
    }
    for i in 0..=d.max_finite() {
        if !scheme.in_s_union(&d.distance_relation(i))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// For each `(u, w) ∈ r`, the number of tuples `(v_1, …, v_m)` with
/// `v_1 = u`, `v_m = w` and `(v_i, v_{i+1})` in the `i`-th chain relation.
/// Returned in the row-major order of the pairs of `r`.
pub fn path_counts(scheme: &Scheme, chain: &[usize], r: usize) -> Result<Vec<u64>> {
    if chain.is_empty() {
        return Err(Error::InvalidArgument("chain must have length >= 1".into()));
    }
    if let Some(&bad) = chain.iter().chain([&r]).find(|&&i| i >= scheme.rank()) {
        return Err(Error::InvalidArgument(format!(
            "basis index {bad} exceeds rank {}",
            scheme.rank()
        )));
    }
    let n = scheme.n();
    let target = &scheme.basis[r];
    let mut out = Vec::new();
    let mut current = vec![0u64; n];
    let mut next = vec![0u64; n];
    for u in 0..n {
        if target.out_degree(u) == 0 {
            continue;
        }
        current.iter_mut().for_each(|c| *c = 0);
        current[u] = 1;
        for &step in chain {
            next.iter_mut().for_each(|c| *c = 0);
            let rel = &scheme.basis[step];
            for (x, &cx) in current.iter().enumerate() {
                if cx == 0 {
                    continue;
                }
                for y in rel.successors(x) {
                    next[y] = next[y]
                        .checked_add(cx)
                        .ok_or(Error::Overflow("path counts"))?;
                }
            }
            std::mem::swap(&mut current, &mut next);
        }
        out.extend(target.successors(u).map(|w| current[w]));
    }
    Ok(out)
}

/// True iff the tuple count of [`path_counts`] is the same for every pair
/// of basis relation `r`.
pub fn path_count_invariance_check(scheme: &Scheme, chain: &[usize], r: usize) -> Result<bool> {
    let counts = path_counts(scheme, chain, r)?;
    Ok(counts.windows(2).all(|w| w[0] == w[1]))
}
