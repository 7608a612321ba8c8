//! Dense relations on a finite point set.
//!
//! A [`Relation`] is a subset of `Ω × Ω` stored as `n` word-packed bit rows:
//! bit `y` of row `x` is set iff `(x, y)` belongs to the relation. Every graph
//! in this crate is a relation, and every relation is a directed graph on the
//! points `0..n`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bits::{self, Ones};
use crate::error::{Error, Result};

/// The point set `{0, …, n − 1}`, `n ≥ 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct PointSet {
    n: usize,
}

impl PointSet {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyDomain);
        }
        Ok(PointSet { n })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    /// Always false; kept for clippy's `len_without_is_empty`.
    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    pub fn check_point(&self, index: usize) -> Result<()> {
        if index < self.n {
            Ok(())
        } else {
            Err(Error::PointOutOfRange { index, n: self.n })
        }
    }
}

impl TryFrom<usize> for PointSet {
    type Error = Error;

    fn try_from(n: usize) -> Result<Self> {
        PointSet::new(n)
    }
}

impl From<PointSet> for usize {
    fn from(p: PointSet) -> usize {
        p.n
    }
}

/// A subset `T ⊆ Ω` stored as a bitset.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PointSubset {
    domain: PointSet,
    words: Vec<u64>,
}

impl PointSubset {
    pub fn empty(domain: PointSet) -> Self {
        PointSubset {
            domain,
            words: vec![0; bits::words_for(domain.len())],
        }
    }

    pub fn full(domain: PointSet) -> Self {
        let mut s = Self::empty(domain);
        s.words.iter_mut().for_each(|w| *w = u64::MAX);
        s.trim();
        s
    }

    pub fn from_points<I>(domain: PointSet, points: I) -> Result<Self>
    where
        I: IntoIterator<Item = usize>,
    {
        let mut s = Self::empty(domain);
        for p in points {
            domain.check_point(p)?;
            bits::set(&mut s.words, p);
        }
        Ok(s)
    }

    pub(crate) fn from_words(domain: PointSet, words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len(), bits::words_for(domain.len()));
        let mut s = PointSubset { domain, words };
        s.trim();
        s
    }

    fn trim(&mut self) {
        if let Some(last) = self.words.last_mut() {
            *last &= bits::tail_mask(self.domain.len());
        }
    }

    #[inline]
    pub fn domain(&self) -> PointSet {
        self.domain
    }

    #[inline]
    pub fn contains(&self, point: usize) -> bool {
        point < self.domain.len() && bits::get(&self.words, point)
    }

    pub fn insert(&mut self, point: usize) -> Result<()> {
        self.domain.check_point(point)?;
        bits::set(&mut self.words, point);
        Ok(())
    }

    pub fn remove(&mut self, point: usize) -> Result<()> {
        self.domain.check_point(point)?;
        bits::clear(&mut self.words, point);
        Ok(())
    }

    /// Number of points in the subset.
    #[inline]
    pub fn len(&self) -> usize {
        bits::count(&self.words)
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.domain.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        Ones::new(&self.words)
    }

    pub fn union(&self, other: &PointSubset) -> Result<PointSubset> {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &PointSubset) -> Result<PointSubset> {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &PointSubset) -> Result<PointSubset> {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn complement(&self) -> PointSubset {
        let words = self.words.iter().map(|w| !w).collect();
        PointSubset::from_words(self.domain, words)
    }

    fn zip_with(&self, other: &PointSubset, f: impl Fn(u64, u64) -> u64) -> Result<PointSubset> {
        same_domain(self.domain, other.domain)?;
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(PointSubset::from_words(self.domain, words))
    }
}

impl fmt::Debug for PointSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

fn same_domain(left: PointSet, right: PointSet) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::DomainMismatch {
            left: left.len(),
            right: right.len(),
        })
    }
}

/// A relation `a ⊆ Ω × Ω`, stored as a dense bit matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    domain: PointSet,
    stride: usize,
    words: Vec<u64>,
}

impl Relation {
    pub fn empty(domain: PointSet) -> Self {
        let stride = bits::words_for(domain.len());
        Relation {
            domain,
            stride,
            words: vec![0; stride * domain.len()],
        }
    }

    pub fn full(domain: PointSet) -> Self {
        let mut r = Self::empty(domain);
        r.words.iter_mut().for_each(|w| *w = u64::MAX);
        r.trim();
        r
    }

    /// The diagonal relation `1_Ω`.
    pub fn diagonal(domain: PointSet) -> Self {
        let mut r = Self::empty(domain);
        for x in domain.points() {
            r.set(x, x);
        }
        r
    }

    pub fn from_pairs<I>(domain: PointSet, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut r = Self::empty(domain);
        for (x, y) in pairs {
            r.insert(x, y)?;
        }
        Ok(r)
    }

    /// Successor relation `{(i, i + 1 mod n)}` of the directed `n`-cycle.
    pub fn directed_cycle(domain: PointSet) -> Self {
        let n = domain.len();
        let mut r = Self::empty(domain);
        for x in 0..n {
            r.set(x, (x + 1) % n);
        }
        r
    }

    /// Builds a relation from a membership predicate.
    pub fn from_fn(domain: PointSet, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut r = Self::empty(domain);
        for x in domain.points() {
            for y in domain.points() {
                if f(x, y) {
                    r.set(x, y);
                }
            }
        }
        r
    }

    fn trim(&mut self) {
        let mask = bits::tail_mask(self.domain.len());
        let stride = self.stride;
        for row in self.words.chunks_exact_mut(stride) {
            row[stride - 1] &= mask;
        }
    }

    #[inline]
    pub fn domain(&self) -> PointSet {
        self.domain
    }

    /// Number of points `n`.
    #[inline]
    pub fn n(&self) -> usize {
        self.domain.len()
    }

    #[inline]
    pub(crate) fn row_words(&self, x: usize) -> &[u64] {
        &self.words[x * self.stride..(x + 1) * self.stride]
    }

    #[inline]
    fn row_words_mut(&mut self, x: usize) -> &mut [u64] {
        &mut self.words[x * self.stride..(x + 1) * self.stride]
    }

    #[inline]
    pub(crate) fn set(&mut self, x: usize, y: usize) {
        let stride = self.stride;
        bits::set(&mut self.words[x * stride..(x + 1) * stride], y);
    }

    pub fn insert(&mut self, x: usize, y: usize) -> Result<()> {
        self.domain.check_point(x)?;
        self.domain.check_point(y)?;
        self.set(x, y);
        Ok(())
    }

    pub fn remove(&mut self, x: usize, y: usize) -> Result<()> {
        self.domain.check_point(x)?;
        self.domain.check_point(y)?;
        bits::clear(self.row_words_mut(x), y);
        Ok(())
    }

    #[inline]
    pub fn contains(&self, x: usize, y: usize) -> bool {
        x < self.n() && y < self.n() && bits::get(self.row_words(x), y)
    }

    /// The out-neighbourhood `xa` as a point subset.
    pub fn row(&self, x: usize) -> Result<PointSubset> {
        self.domain.check_point(x)?;
        Ok(PointSubset::from_words(
            self.domain,
            self.row_words(x).to_vec(),
        ))
    }

    /// Out-neighbours of `x`, ascending. Panics if `x` is out of range.
    pub fn successors(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        Ones::new(self.row_words(x))
    }

    /// All pairs, in row-major order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.domain
            .points()
            .flat_map(move |x| self.successors(x).map(move |y| (x, y)))
    }

    /// Number of pairs `|a|`.
    pub fn len(&self) -> usize {
        bits::count(&self.words)
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.n() * self.n()
    }

    pub fn out_degree(&self, x: usize) -> usize {
        bits::count(self.row_words(x))
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        self.domain.points().map(|x| self.out_degree(x)).collect()
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n()];
        for (_, y) in self.pairs() {
            deg[y] += 1;
        }
        deg
    }

    pub fn is_subset(&self, other: &Relation) -> Result<bool> {
        same_domain(self.domain, other.domain)?;
        Ok(self
            .words
            .iter()
            .zip(&other.words)
            .all(|(&a, &b)| a & !b == 0))
    }

    pub fn is_symmetric(&self) -> bool {
        self.first_asymmetric_pair().is_none()
    }

    /// A pair `(x, y)` in the relation whose transpose is missing, if any.
    pub fn first_asymmetric_pair(&self) -> Option<(usize, usize)> {
        self.pairs().find(|&(x, y)| !self.contains(y, x))
    }

    /// The product `ab = {(x, y) | ∃z: (x, z) ∈ a, (z, y) ∈ b}`.
    ///
    /// Row sweep: every set bit `z` of row `x` of `a` ORs row `z` of `b` into
    /// the output row.
    pub fn product(&self, other: &Relation) -> Result<Relation> {
        same_domain(self.domain, other.domain)?;
        let mut out = Relation::empty(self.domain);
        let stride = self.stride;
        for x in self.domain.points() {
            let dst = &mut out.words[x * stride..(x + 1) * stride];
            for z in Ones::new(&self.words[x * stride..(x + 1) * stride]) {
                bits::or_into(dst, other.row_words(z));
            }
        }
        Ok(out)
    }

    /// The transpose `a* = {(y, x) | (x, y) ∈ a}`.
    pub fn transpose(&self) -> Relation {
        let mut out = Relation::empty(self.domain);
        for (x, y) in self.pairs() {
            out.set(y, x);
        }
        out
    }

    pub fn union(&self, other: &Relation) -> Result<Relation> {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersect(&self, other: &Relation) -> Result<Relation> {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Relation) -> Result<Relation> {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn symmetric_difference(&self, other: &Relation) -> Result<Relation> {
        self.zip_with(other, |a, b| a ^ b)
    }

    pub fn complement(&self) -> Relation {
        let mut out = Relation {
            domain: self.domain,
            stride: self.stride,
            words: self.words.iter().map(|w| !w).collect(),
        };
        out.trim();
        out
    }

    /// `a ∪ a*`.
    pub fn symmetrize(&self) -> Relation {
        self.union(&self.transpose())
            .expect("transpose shares the domain")
    }

    /// `a ∪ 1_Ω`.
    pub fn with_loops(&self) -> Relation {
        let mut out = self.clone();
        for x in self.domain.points() {
            out.set(x, x);
        }
        out
    }

    fn zip_with(&self, other: &Relation, f: impl Fn(u64, u64) -> u64) -> Result<Relation> {
        same_domain(self.domain, other.domain)?;
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(Relation {
            domain: self.domain,
            stride: self.stride,
            words,
        })
    }

    /// `‖a‖`, the maximum out-degree.
    pub fn norm(&self) -> usize {
        self.domain
            .points()
            .map(|x| self.out_degree(x))
            .max()
            .unwrap_or(0)
    }

    /// True iff every point has the same out-degree.
    pub fn is_regular(&self) -> bool {
        self.regularity_violation().is_none()
    }

    /// First vertex whose out-degree differs from that of vertex 0.
    pub fn regularity_violation(&self) -> Option<Error> {
        let expected = self.out_degree(0);
        self.domain.points().find_map(|x| {
            let degree = self.out_degree(x);
            (degree != expected).then_some(Error::NotRegular {
                vertex: x,
                degree,
                expected,
            })
        })
    }

    /// True iff all out-degrees and all in-degrees equal one constant.
    pub fn is_biregular(&self) -> bool {
        self.biregularity_violation().is_none()
    }

    pub fn biregularity_violation(&self) -> Option<Error> {
        if let Some(e) = self.regularity_violation() {
            return Some(e);
        }
        let expected = self.out_degree(0);
        self.in_degrees()
            .into_iter()
            .enumerate()
            .find(|&(_, d)| d != expected)
            .map(|(vertex, degree)| Error::NotBiregular {
                vertex,
                degree,
                expected,
            })
    }

    /// `Ta = {y | (x, y) ∈ a, x ∈ T}`.
    pub fn neighborhood(&self, subset: &PointSubset) -> Result<PointSubset> {
        same_domain(self.domain, subset.domain())?;
        let mut words = vec![0u64; self.stride];
        for x in subset.iter() {
            bits::or_into(&mut words, self.row_words(x));
        }
        Ok(PointSubset::from_words(self.domain, words))
    }

    /// `(a ∪ 1_Ω)^k` by repeated squaring.
    pub fn power_with_loops(&self, k: u32) -> Result<Relation> {
        if k == 0 {
            return Err(Error::InvalidArgument(
                "power_with_loops requires k >= 1".into(),
            ));
        }
        let mut base = self.with_loops();
        let mut acc: Option<Relation> = None;
        let mut e = k;
        loop {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(r) => r.product(&base)?,
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.product(&base)?;
        }
        Ok(acc.expect("k >= 1"))
    }

    /// `a^k` without adjoining loops; `a^0 = 1_Ω`.
    pub fn power(&self, k: u32) -> Relation {
        let mut acc = Relation::diagonal(self.domain);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.product(&base).expect("same domain");
            }
            e >>= 1;
            if e > 0 {
                base = base.product(&base).expect("same domain");
            }
        }
        acc
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Relation(n={}, ", self.n())?;
        f.debug_set().entries(self.pairs()).finish()?;
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dom(n: usize) -> PointSet {
        PointSet::new(n).unwrap()
    }

    fn cycle3() -> Relation {
        Relation::from_pairs(dom(3), [(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    #[test]
    fn empty_domain_rejected() {
        assert_eq!(PointSet::new(0), Err(Error::EmptyDomain));
    }

    #[test]
    fn product_with_diagonal_is_identity() {
        let a = Relation::from_pairs(dom(4), [(0, 1), (1, 3), (3, 3), (2, 0)]).unwrap();
        let one = Relation::diagonal(dom(4));
        assert_eq!(a.product(&one).unwrap(), a);
        assert_eq!(one.product(&a).unwrap(), a);
    }

    #[test]
    fn cycle_squared() {
        let c = cycle3();
        let expected = Relation::from_pairs(dom(3), [(0, 2), (1, 0), (2, 1)]).unwrap();
        assert_eq!(c.product(&c).unwrap(), expected);
    }

    #[test]
    fn product_with_empty_is_empty() {
        let e = Relation::empty(dom(5));
        assert!(e.product(&Relation::full(dom(5))).unwrap().is_empty());
    }

    #[test]
    fn domain_mismatch() {
        let a = Relation::empty(dom(3));
        let b = Relation::empty(dom(4));
        assert_eq!(
            a.product(&b),
            Err(Error::DomainMismatch { left: 3, right: 4 })
        );
        assert!(a.union(&b).is_err());
    }

    #[test]
    fn transpose_basics() {
        let d = Relation::diagonal(dom(6));
        assert_eq!(d.transpose(), d);
        let a = Relation::from_pairs(dom(2), [(0, 1)]).unwrap();
        assert_eq!(
            a.transpose(),
            Relation::from_pairs(dom(2), [(1, 0)]).unwrap()
        );
    }

    #[test]
    fn boolean_operations() {
        let a = cycle3();
        assert!(a.union(&a.complement()).unwrap().is_full());
        let d = Relation::diagonal(dom(3));
        assert!(d.intersect(&d.complement()).unwrap().is_empty());
        let sym = a.union(&a.transpose()).unwrap();
        let listed =
            Relation::from_pairs(dom(3), [(0, 1), (1, 0), (1, 2), (2, 1), (2, 0), (0, 2)]).unwrap();
        assert_eq!(sym, listed);
        assert_eq!(sym.len(), 6);
        assert!(sym.is_symmetric());
    }

    #[test]
    fn complement_respects_row_width() {
        // 70 points spans two words per row; the padding bits must stay clear.
        let c = Relation::empty(dom(70)).complement();
        assert!(c.is_full());
        assert_eq!(c.norm(), 70);
    }

    #[test]
    fn norms() {
        assert_eq!(Relation::diagonal(dom(5)).norm(), 1);
        assert_eq!(Relation::full(dom(5)).norm(), 5);
        assert_eq!(cycle3().norm(), 1);
    }

    #[test]
    fn regularity() {
        assert!(cycle3().is_regular());
        assert!(cycle3().is_biregular());
        let a = Relation::from_pairs(dom(3), [(0, 1), (0, 2)]).unwrap();
        assert!(!a.is_regular());
        assert_eq!(
            a.regularity_violation(),
            Some(Error::NotRegular {
                vertex: 1,
                degree: 0,
                expected: 2
            })
        );
        // out-regular but not in-regular
        let b = Relation::from_pairs(dom(2), [(0, 0), (1, 0)]).unwrap();
        assert!(b.is_regular());
        assert!(!b.is_biregular());
    }

    #[test]
    fn neighborhoods() {
        let c = Relation::directed_cycle(dom(5));
        let t = PointSubset::from_points(dom(5), [3]).unwrap();
        assert_eq!(c.neighborhood(&t).unwrap(), c.row(3).unwrap());
        let empty = PointSubset::empty(dom(5));
        assert!(c.neighborhood(&empty).unwrap().is_empty());
        // closure under repeated application reaches everything
        let mut reach = t.clone();
        for _ in 0..5 {
            reach = reach.union(&c.neighborhood(&reach).unwrap()).unwrap();
        }
        assert!(reach.is_full());
        assert!(PointSubset::from_points(dom(5), [5]).is_err());
    }

    #[test]
    fn powers_with_loops() {
        let c = cycle3();
        assert_eq!(c.power_with_loops(1).unwrap(), c.with_loops());
        assert!(c.power_with_loops(2).unwrap().is_full());
        assert!(c.power_with_loops(0).is_err());
        let c7 = Relation::directed_cycle(dom(7));
        for k in 1..9 {
            let p = c7.power_with_loops(k).unwrap();
            let q = c7.power_with_loops(k + 1).unwrap();
            assert!(p.is_subset(&q).unwrap());
        }
        assert!(!c7.power_with_loops(5).unwrap().is_full());
        assert!(c7.power_with_loops(6).unwrap().is_full());
    }

    #[test]
    fn plain_powers() {
        let c = Relation::directed_cycle(dom(4));
        assert_eq!(c.power(0), Relation::diagonal(dom(4)));
        assert_eq!(c.power(4), Relation::diagonal(dom(4)));
        assert_eq!(c.power(5), c);
    }
}
