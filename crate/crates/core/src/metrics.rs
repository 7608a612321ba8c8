//! Breadth-first metrics on relations viewed as directed graphs.
//!
//! Distances follow edge orientation. Unreachable pairs are `None`, never a
//! large integer, so every aggregate below has to skip them explicitly.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::bits::{self, Ones};
use crate::error::{Error, Result};
use crate::relation::{PointSet, PointSubset, Relation};

/// All-pairs directed distances.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceMatrix {
    domain: PointSet,
    dist: Vec<Option<u32>>,
}

impl DistanceMatrix {
    pub fn domain(&self) -> PointSet {
        self.domain
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> Option<u32> {
        self.dist[x * self.domain.len() + y]
    }

    /// True iff every ordered pair is joined by a directed path.
    pub fn is_strongly_connected(&self) -> bool {
        self.dist.iter().all(Option::is_some)
    }

    /// Largest finite distance.
    pub fn max_finite(&self) -> u32 {
        self.dist.iter().flatten().copied().max().unwrap_or(0)
    }

    /// First unreachable ordered pair in row-major order.
    pub fn first_unreachable(&self) -> Option<(usize, usize)> {
        let n = self.domain.len();
        self.dist
            .iter()
            .position(Option::is_none)
            .map(|i| (i / n, i % n))
    }

    /// The distance-`i` relation `{(x, y) | d(x, y) = i}`.
    pub fn distance_relation(&self, i: u32) -> Relation {
        Relation::from_fn(self.domain, |x, y| self.get(x, y) == Some(i))
    }
}

/// Single-source BFS over out-edges, one frontier bitset per level.
/// Calls `visit(level, frontier_words)` for each nonempty level ≥ 1 and
/// returns the visited set.
fn bfs_levels(a: &Relation, source: usize, mut visit: impl FnMut(u32, &[u64])) -> Vec<u64> {
    let stride = bits::words_for(a.n());
    let mut visited = vec![0u64; stride];
    bits::set(&mut visited, source);
    let mut frontier = visited.clone();
    let mut next = vec![0u64; stride];
    let mut level = 0u32;
    loop {
        next.iter_mut().for_each(|w| *w = 0);
        for u in Ones::new(&frontier) {
            bits::or_into(&mut next, a.row_words(u));
        }
        let mut any = false;
        for (w, v) in next.iter_mut().zip(&visited) {
            *w &= !v;
            any |= *w != 0;
        }
        if !any {
            return visited;
        }
        level += 1;
        visit(level, &next);
        bits::or_into(&mut visited, &next);
        std::mem::swap(&mut frontier, &mut next);
    }
}

pub fn directed_distances(a: &Relation) -> DistanceMatrix {
    let n = a.n();
    let mut dist = vec![None; n * n];
    for x in 0..n {
        let row = &mut dist[x * n..(x + 1) * n];
        row[x] = Some(0);
        bfs_levels(a, x, |level, frontier| {
            for y in Ones::new(frontier) {
                row[y] = Some(level);
            }
        });
    }
    DistanceMatrix {
        domain: a.domain(),
        dist,
    }
}

/// Largest directed distance. Errors if some pair is unreachable.
pub fn directed_diameter(a: &Relation) -> Result<u32> {
    let n = a.n();
    let mut diameter = 0;
    for x in 0..n {
        let mut ecc = 0;
        let visited = bfs_levels(a, x, |level, _| ecc = level);
        if bits::count(&visited) < n {
            let to = (0..n)
                .find(|&y| !bits::get(&visited, y))
                .expect("some point unvisited");
            return Err(Error::NotStronglyConnected { from: x, to });
        }
        diameter = diameter.max(ecc);
    }
    Ok(diameter)
}

/// Diameter of `a ∪ a*`.
pub fn undirected_diameter(a: &Relation) -> Result<u32> {
    directed_diameter(&a.symmetrize()).map_err(|e| match e {
        Error::NotStronglyConnected { from, to } => Error::Disconnected { from, to },
        other => other,
    })
}

/// Smallest `k ≥ 1` with `(a ∪ 1_Ω)^k = Ω × Ω`, found by iterated products.
/// `None` when the powers stabilise short of the full relation. For `n = 1`
/// this is `1` while the BFS diameter is `0`.
pub fn diameter_by_powers(a: &Relation) -> Option<u32> {
    let step = a.with_loops();
    let mut power = step.clone();
    let mut k = 1;
    loop {
        if power.is_full() {
            return Some(k);
        }
        let next = power.product(&step).expect("same domain");
        if next == power {
            return None;
        }
        power = next;
        k += 1;
    }
}

/// Length of the shortest directed cycle; a loop counts as a cycle of
/// length 1. `None` for acyclic relations.
pub fn directed_girth(a: &Relation) -> Option<u32> {
    let n = a.n();
    let preds = a.transpose();
    let mut best: Option<u32> = None;
    for v in 0..n {
        if a.contains(v, v) {
            return Some(1);
        }
        // A cycle through v closes with an edge (u, v); BFS from v finds the
        // shortest v → u path. Levels past the current best are useless.
        let mut found = None;
        let limit = best.unwrap_or(u32::MAX);
        let pred_words = preds.row_words(v);
        bfs_levels_bounded(a, v, limit.saturating_sub(1), |level, frontier| {
            if found.is_none() && frontier.iter().zip(pred_words).any(|(f, p)| f & p != 0) {
                found = Some(level + 1);
                return false;
            }
            true
        });
        if let Some(len) = found {
            best = Some(best.map_or(len, |b| b.min(len)));
        }
    }
    best
}

/// Like [`bfs_levels`], but stops after `max_level` levels or when `visit`
/// returns false.
fn bfs_levels_bounded(
    a: &Relation,
    source: usize,
    max_level: u32,
    mut visit: impl FnMut(u32, &[u64]) -> bool,
) {
    let stride = bits::words_for(a.n());
    let mut visited = vec![0u64; stride];
    bits::set(&mut visited, source);
    let mut frontier = visited.clone();
    let mut next = vec![0u64; stride];
    let mut level = 0u32;
    while level < max_level {
        next.iter_mut().for_each(|w| *w = 0);
        for u in Ones::new(&frontier) {
            bits::or_into(&mut next, a.row_words(u));
        }
        let mut any = false;
        for (w, v) in next.iter_mut().zip(&visited) {
            *w &= !v;
            any |= *w != 0;
        }
        if !any {
            return;
        }
        level += 1;
        if !visit(level, &next) {
            return;
        }
        bits::or_into(&mut visited, &next);
        std::mem::swap(&mut frontier, &mut next);
    }
}

/// The vertex boundary `∂_b(T)`: points outside `T` adjacent in `b` to `T`.
pub fn boundary(b: &Relation, subset: &PointSubset) -> Result<PointSubset> {
    if let Some((x, y)) = b.first_asymmetric_pair() {
        return Err(Error::NotSymmetric(x, y));
    }
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    b.neighborhood(subset)?.difference(subset)
}

/// Distances together with the number of geodesics (shortest directed paths,
/// as ordered vertex sequences) between every ordered pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeodesicCounts {
    distances: DistanceMatrix,
    counts: Vec<u128>,
}

impl GeodesicCounts {
    pub fn distances(&self) -> &DistanceMatrix {
        &self.distances
    }

    /// `p(x, y)`; zero when `y` is unreachable from `x`.
    #[inline]
    pub fn count(&self, x: usize, y: usize) -> u128 {
        self.counts[x * self.distances.domain.len() + y]
    }

    #[inline]
    pub fn distance(&self, x: usize, y: usize) -> Option<u32> {
        self.distances.get(x, y)
    }

    /// `N_z(x, y)`: geodesics from `x` to `y` passing through `z`.
    pub fn through_count(&self, x: usize, y: usize, z: usize) -> Result<u128> {
        match (
            self.distance(x, z),
            self.distance(z, y),
            self.distance(x, y),
        ) {
            (Some(a), Some(b), Some(c)) if a + b == c => self
                .count(x, z)
                .checked_mul(self.count(z, y))
                .ok_or(Error::Overflow("geodesic count product")),
            _ => Ok(0),
        }
    }

    /// `P_z = Σ_{x,y} N_z(x, y) / p(x, y)` over reachable pairs.
    pub fn through_vertex(&self, z: usize) -> Result<BigRational> {
        let n = self.distances.domain.len();
        // Group numerators by denominator to keep the big-rational additions few.
        let mut by_denominator: BTreeMap<u128, u128> = BTreeMap::new();
        for x in 0..n {
            for y in 0..n {
                let p = self.count(x, y);
                if p == 0 {
                    continue;
                }
                let through = self.through_count(x, y, z)?;
                if through == 0 {
                    continue;
                }
                let slot = by_denominator.entry(p).or_insert(0);
                *slot = slot
                    .checked_add(through)
                    .ok_or(Error::Overflow("geodesic count sum"))?;
            }
        }
        let mut total = BigRational::zero();
        for (den, num) in by_denominator {
            total += BigRational::new(BigInt::from(num), BigInt::from(den));
        }
        Ok(total)
    }
}

pub fn geodesic_counts(a: &Relation) -> Result<GeodesicCounts> {
    let n = a.n();
    let mut dist = vec![None; n * n];
    let mut counts = vec![0u128; n * n];
    let mut overflow = false;
    for x in 0..n {
        let drow = &mut dist[x * n..(x + 1) * n];
        let crow = &mut counts[x * n..(x + 1) * n];
        drow[x] = Some(0);
        crow[x] = 1;
        let mut previous: Vec<usize> = vec![x];
        bfs_levels(a, x, |level, frontier| {
            let mut members = Vec::new();
            for y in Ones::new(frontier) {
                drow[y] = Some(level);
                members.push(y);
            }
            for &u in &previous {
                let pu = crow[u];
                for y in a.successors(u) {
                    if bits::get(frontier, y) {
                        match crow[y].checked_add(pu) {
                            Some(v) => crow[y] = v,
                            None => overflow = true,
                        }
                    }
                }
            }
            previous = members;
        });
    }
    if overflow {
        return Err(Error::Overflow("geodesic counts"));
    }
    Ok(GeodesicCounts {
        distances: DistanceMatrix {
            domain: a.domain(),
            dist,
        },
        counts,
    })
}

fn require_symmetric_connected(a: &Relation) -> Result<()> {
    if let Some((x, y)) = a.first_asymmetric_pair() {
        return Err(Error::NotSymmetric(x, y));
    }
    Ok(())
}

/// `P_z` for one point `z` of a symmetric connected relation.
pub fn through_vertex_counts(a: &Relation, z: usize) -> Result<BigRational> {
    a.domain().check_point(z)?;
    through_vertex_counts_all(a).map(|mut all| all.swap_remove(z))
}

/// `P_z` for every point `z`, sharing one geodesic-count table.
pub fn through_vertex_counts_all(a: &Relation) -> Result<Vec<BigRational>> {
    require_symmetric_connected(a)?;
    let g = geodesic_counts(a)?;
    if let Some((from, to)) = g.distances.first_unreachable() {
        return Err(Error::Disconnected { from, to });
    }
    (0..a.n()).map(|z| g.through_vertex(z)).collect()
}

/// `Σ_{x,y} (d(x, y) + 1)`; errors on unreachable pairs.
pub fn distance_sum_plus_one(d: &DistanceMatrix) -> Result<u128> {
    if let Some((from, to)) = d.first_unreachable() {
        return Err(Error::Disconnected { from, to });
    }
    Ok(d.dist.iter().flatten().map(|&v| v as u128 + 1).sum())
}
