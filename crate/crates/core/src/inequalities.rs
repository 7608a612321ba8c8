//! Exact checkers for the norm, expansion and diameter inequalities.
//!
//! Every checker returns a [`BoundReport`] whose verdict is `lhs ≤ rhs`
//! evaluated on exact rationals. Lower bounds of the form `measured ≥ bound`
//! are reported with the bound on the left.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::bits;
use crate::error::{Error, Result};
use crate::metrics;
use crate::relation::{PointSubset, Relation};
use crate::scheme::Scheme;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub name: String,
    #[serde(serialize_with = "as_string")]
    pub lhs: BigRational,
    #[serde(serialize_with = "as_string")]
    pub rhs: BigRational,
    pub holds: bool,
    pub witness: Option<String>,
}

fn as_string<S: Serializer>(value: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(value)
}

impl BoundReport {
    pub fn new(name: impl Into<String>, lhs: BigRational, rhs: BigRational) -> Self {
        BoundReport {
            name: name.into(),
            holds: lhs <= rhs,
            lhs,
            rhs,
            witness: None,
        }
    }

    pub fn from_integers(name: impl Into<String>, lhs: u128, rhs: u128) -> Self {
        BoundReport::new(name, int(lhs), int(rhs))
    }

    pub fn with_witness(mut self, witness: impl Into<String>) -> Self {
        self.witness = Some(witness.into());
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serialises")
    }
}

fn int(v: u128) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn ratio(num: u128, den: u128) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn same_domain(a: &Relation, b: &Relation) -> Result<()> {
    if a.domain() == b.domain() {
        Ok(())
    } else {
        Err(Error::DomainMismatch {
            left: a.n(),
            right: b.n(),
        })
    }
}

/// `‖ac‖·‖b‖ ≤ ‖ab‖·‖b*c‖` for regular `b`.
pub fn check_ruzsa(a: &Relation, b: &Relation, c: &Relation) -> Result<BoundReport> {
    same_domain(a, b)?;
    same_domain(a, c)?;
    if let Some(err) = b.regularity_violation() {
        return Err(err);
    }
    let lhs = a.product(c)?.norm() as u128 * b.norm() as u128;
    let rhs = a.product(b)?.norm() as u128 * b.transpose().product(c)?.norm() as u128;
    Ok(BoundReport::from_integers("ruzsa", lhs, rhs))
}

/// `‖aa*‖·‖b‖ ≤ ‖ab‖²` for `a, b ∈ S^∪` (the square of the original form).
pub fn check_comm_ind(scheme: &Scheme, a: &Relation, b: &Relation) -> Result<BoundReport> {
    scheme.require_s_union(a)?;
    scheme.require_s_union(b)?;
    let lhs = a.product(&a.transpose())?.norm() as u128 * b.norm() as u128;
    let ab = a.product(b)?.norm() as u128;
    Ok(BoundReport::from_integers("comm_ind", lhs, ab * ab))
}

/// Checks `|∂_b(T)|/|T| ≥ 2(1 − t/n)/(D + t/n)` with `t = |T|` and
/// `D = diam(b)` for a fixed symmetric connected `b ∈ S^∪`.
#[derive(Clone, Debug)]
pub struct ExpansionChecker<'a> {
    b: &'a Relation,
    diameter: u32,
}

/// Result of sweeping many subsets through an [`ExpansionChecker`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionSweep {
    /// Subsets evaluated. Branches whose boundary floor rules out both a
    /// failure and a tighter subset are skipped.
    pub checked: u64,
    /// Subset with the smallest ratio between measured expansion and bound,
    /// over the subsets with a nonzero bound.
    pub tightest: Option<PointSubset>,
    pub first_failure: Option<PointSubset>,
}

impl<'a> ExpansionChecker<'a> {
    pub fn new(scheme: &Scheme, b: &'a Relation) -> Result<Self> {
        scheme.require_s_union(b)?;
        if let Some((x, y)) = b.first_asymmetric_pair() {
            return Err(Error::NotSymmetric(x, y));
        }
        let diameter = metrics::undirected_diameter(b)?;
        Ok(ExpansionChecker { b, diameter })
    }

    pub fn diameter(&self) -> u32 {
        self.diameter
    }

    fn n(&self) -> u128 {
        self.b.n() as u128
    }

    /// Bound `2(n − t)/(Dn + t)`, which equals `2(1 − t/n)/(D + t/n)`.
    pub fn bound(&self, t: usize) -> BigRational {
        let (n, t) = (self.n(), t as u128);
        ratio(2 * (n - t), self.diameter as u128 * n + t)
    }

    /// Exact test without building rationals.
    #[inline]
    pub fn holds_for_counts(&self, t: usize, boundary: usize) -> bool {
        let (n, t, s) = (self.n(), t as u128, boundary as u128);
        s * (self.diameter as u128 * n + t) >= 2 * (n - t) * t
    }

    /// Simplified bound `2/(2D + 1)`, applicable when `2t ≤ n`.
    #[inline]
    pub fn halved_holds_for_counts(&self, t: usize, boundary: usize) -> bool {
        boundary as u128 * (2 * self.diameter as u128 + 1) >= 2 * t as u128
    }

    fn counts(&self, subset: &PointSubset) -> Result<(usize, usize)> {
        let boundary = metrics::boundary(self.b, subset)?;
        Ok((subset.len(), boundary.len()))
    }

    pub fn check(&self, subset: &PointSubset) -> Result<BoundReport> {
        let (t, s) = self.counts(subset)?;
        Ok(
            BoundReport::new("expansion", self.bound(t), ratio(s as u128, t as u128))
                .with_witness(format!("T = {subset:?}")),
        )
    }

    /// The simplified form, or `None` when `|T| > n/2`.
    pub fn check_halved(&self, subset: &PointSubset) -> Result<Option<BoundReport>> {
        let (t, s) = self.counts(subset)?;
        if 2 * t > self.b.n() {
            return Ok(None);
        }
        let bound = ratio(2, 2 * self.diameter as u128 + 1);
        Ok(Some(
            BoundReport::new("expansion_halved", bound, ratio(s as u128, t as u128))
                .with_witness(format!("T = {subset:?}")),
        ))
    }

    /// Enumerates every subset with `1 ≤ |T| ≤ max_size`, restricted to
    /// subsets containing `anchor` when given. Both forms of the bound are
    /// tested on each subset.
    pub fn sweep(&self, max_size: usize, anchor: Option<usize>) -> Result<ExpansionSweep> {
        let n = self.b.n();
        if let Some(p) = anchor {
            self.b.domain().check_point(p)?;
        }
        let width = bits::words_for(n);
        let mut state = SweepState {
            checker: self,
            max_size: max_size.min(n),
            width,
            members: vec![0u64; width],
            chosen: Vec::new(),
            reach: vec![0u64; width * (max_size.min(n) + 1)],
            out: ExpansionSweep {
                checked: 0,
                tightest: None,
                first_failure: None,
            },
            tightest_key: None,
        };
        match anchor {
            Some(p) => {
                if state.max_size > 0 {
                    state.push(p);
                    state.descend(0);
                }
            }
            None => state.descend(0),
        }
        Ok(state.out)
    }
}

struct SweepState<'c, 'a> {
    checker: &'c ExpansionChecker<'a>,
    max_size: usize,
    width: usize,
    members: Vec<u64>,
    chosen: Vec<usize>,
    // reach[depth] = union of the rows of the first `depth` chosen points
    reach: Vec<u64>,
    out: ExpansionSweep,
    // (measured numerator · bound denominator, bound numerator · measured denominator)
    tightest_key: Option<(u128, u128)>,
}

impl SweepState<'_, '_> {
    fn push(&mut self, p: usize) {
        let depth = self.chosen.len();
        let w = self.width;
        let (prev, next) = self.reach.split_at_mut((depth + 1) * w);
        next[..w].copy_from_slice(&prev[depth * w..]);
        bits::or_into(&mut next[..w], self.checker.b.row_words(p));
        bits::set(&mut self.members, p);
        self.chosen.push(p);
        self.record();
    }

    fn pop(&mut self) {
        let p = self.chosen.pop().expect("nonempty");
        bits::clear(&mut self.members, p);
    }

    fn record(&mut self) {
        let depth = self.chosen.len();
        let w = self.width;
        let reach = &self.reach[depth * w..(depth + 1) * w];
        let boundary: usize = reach
            .iter()
            .zip(&self.members)
            .map(|(r, m)| (r & !m).count_ones() as usize)
            .sum();
        let c = self.checker;
        let n = c.b.n();
        self.out.checked += 1;
        let ok = c.holds_for_counts(depth, boundary)
            && (2 * depth > n || c.halved_holds_for_counts(depth, boundary));
        if !ok && self.out.first_failure.is_none() {
            self.out.first_failure = Some(self.current());
        }
        if depth < n {
            // ratio / bound = s (Dn + t) / (2 (n − t) t)
            let (nn, t, s) = (n as u128, depth as u128, boundary as u128);
            let key = (s * (c.diameter as u128 * nn + t), 2 * (nn - t) * t);
            let tighter = match self.tightest_key {
                None => true,
                Some((a, b)) => key.0 * b < a * key.1,
            };
            if tighter {
                self.tightest_key = Some(key);
                self.out.tightest = Some(self.current());
            }
        }
    }

    fn current(&self) -> PointSubset {
        PointSubset::from_words(self.checker.b.domain(), self.members.clone())
    }

    /// Points outside `T` stay in the boundary unless added later. Only points
    /// from `from` on can still be added, at most `max_size − |T|` of them,
    /// which bounds the boundary of every extension from below.
    fn boundary_floor(&self, from: usize) -> usize {
        let depth = self.chosen.len();
        let w = self.width;
        let reach = &self.reach[depth * w..(depth + 1) * w];
        let (mut total, mut fixed) = (0usize, 0usize);
        for (i, (r, m)) in reach.iter().zip(&self.members).enumerate() {
            let word = r & !m;
            total += word.count_ones() as usize;
            let lo = i * 64;
            let below = if from >= lo + 64 {
                word
            } else if from > lo {
                word & ((1u64 << (from - lo)) - 1)
            } else {
                0
            };
            fixed += below.count_ones() as usize;
        }
        fixed.max(total.saturating_sub(self.max_size - depth))
    }

    /// Whether some extension of the current set to `t` points could fail a
    /// bound or beat the tightest subset so far.
    fn worth_extending(&self, floor: usize) -> bool {
        let c = self.checker;
        let n = c.b.n();
        let (nn, d, s) = (n as u128, c.diameter as u128, floor as u128);
        (self.chosen.len() + 1..=self.max_size.min(n - 1)).any(|t| {
            if !c.holds_for_counts(t, floor) || (2 * t <= n && !c.halved_holds_for_counts(t, floor))
            {
                return true;
            }
            let tt = t as u128;
            match self.tightest_key {
                None => true,
                Some((a, b)) => s * (d * nn + tt) * b < a * 2 * (nn - tt) * tt,
            }
        })
    }

    fn descend(&mut self, from: usize) {
        if self.chosen.len() == self.max_size {
            return;
        }
        if !self.chosen.is_empty() && !self.worth_extending(self.boundary_floor(from)) {
            return;
        }
        for p in from..self.checker.b.n() {
            if bits::get(&self.members, p) {
                continue;
            }
            self.push(p);
            self.descend(p + 1);
            self.pop();
        }
    }
}

pub fn check_expansion(scheme: &Scheme, b: &Relation, subset: &PointSubset) -> Result<BoundReport> {
    ExpansionChecker::new(scheme, b)?.check(subset)
}

/// `⌈log₂ max(1, log₂ n)⌉`, computed as the least `e` with `n ≤ 2^(2^e)`.
pub fn ceil_log2_log2(n: u64) -> u32 {
    let mut e = 0;
    // n ≤ 2^(2^e)  ⇔  bit length of (n − 1) ≤ 2^e
    let bits_needed = 64 - n.saturating_sub(1).leading_zeros();
    while (1u32 << e) < bits_needed {
        e += 1;
    }
    e
}

/// `diam→(a ∪ 1_Ω) ≤ 2·diam(a)·(⌈log₂ log₂ n⌉ + 1)` for `a ∈ S^∪` with
/// `aa* = a*a`.
pub fn comm_bound(scheme: &Scheme, a: &Relation) -> Result<BoundReport> {
    scheme.require_s_union(a)?;
    let at = a.transpose();
    let left = a.product(&at)?;
    let right = at.product(a)?;
    if let Some((x, y)) = left.symmetric_difference(&right)?.pairs().next() {
        return Err(Error::NotCommuting(x, y));
    }
    let directed = metrics::directed_diameter(&a.with_loops())?;
    let d = metrics::undirected_diameter(a)?;
    let rhs = 2 * d as u128 * (ceil_log2_log2(a.n() as u64) as u128 + 1);
    Ok(BoundReport::from_integers(
        "comm_bound",
        directed as u128,
        rhs,
    ))
}

/// Smallest `t` with `2^t ≥ n^e`, i.e. `⌈e·log₂ n⌉`.
fn ceil_log2_pow(n: u64, e: u32) -> u64 {
    let target = BigUint::from(n).pow(e);
    // bit length of (target − 1)
    if target <= BigUint::one() {
        return 0;
    }
    (target - 1u32).bits()
}

/// Explicit instance of the `2m(k+1)` directed-diameter bound for a
/// connected scheme relation with undirected diameter `d` on `n` points:
/// `k = 1 + ⌈4d·log₂ n⌉` and `m` the least integer with
/// `(1 + 1/(2d))^(m/2) > n/2`.
pub fn mains_explicit_bound(d: u32, n: u64) -> Result<u128> {
    if d == 0 || n < 2 {
        return Err(Error::InvalidArgument(format!(
            "explicit bound needs d >= 1 and n >= 2, got d = {d}, n = {n}"
        )));
    }
    let k = 1 + ceil_log2_pow(n, 4 * d) as u128;
    // ((2d+1)/(2d))^(m/2) > n/2  ⇔  4·(2d+1)^m > n²·(2d)^m
    let (num, den) = (BigUint::from(2 * d as u64 + 1), BigUint::from(2 * d as u64));
    let mut lhs = BigUint::from(4u32);
    let mut rhs = BigUint::from(n) * BigUint::from(n);
    let mut m: u128 = 0;
    while lhs <= rhs {
        lhs *= &num;
        rhs *= &den;
        m += 1;
    }
    Ok(2 * m * (k + 1))
}

/// `diam→(a ∪ 1_Ω) ≤ mains_explicit_bound(diam(a), n)`.
pub fn check_mains(scheme: &Scheme, a: &Relation) -> Result<BoundReport> {
    scheme.require_s_union(a)?;
    let directed = metrics::directed_diameter(&a.with_loops())?;
    let d = metrics::undirected_diameter(a)?;
    let bound = mains_explicit_bound(d, a.n() as u64)?;
    Ok(BoundReport::from_integers("mains", directed as u128, bound))
}

/// `‖taa*‖/‖t‖ ≥ 1 + 1/(2d)` for `t ∈ S^∪` with `0 < ‖t‖ ≤ n/2` and
/// connected `a ∈ S^∪` containing the diagonal, `d = diam(a)`.
pub fn check_star(scheme: &Scheme, t: &Relation, a: &Relation) -> Result<BoundReport> {
    scheme.require_s_union(t)?;
    scheme.require_s_union(a)?;
    let n = a.n();
    if !Relation::diagonal(a.domain()).is_subset(a)? {
        return Err(Error::Precondition("a must contain the diagonal".into()));
    }
    let norm_t = t.norm();
    if norm_t == 0 || 2 * norm_t > n {
        return Err(Error::Precondition(format!(
            "need 0 < ‖t‖ ≤ n/2, got ‖t‖ = {norm_t}, n = {n}"
        )));
    }
    let d = metrics::undirected_diameter(a)?;
    let taa = t.product(a)?.product(&a.transpose())?;
    let lhs = ratio(2 * d as u128 + 1, 2 * d as u128);
    Ok(BoundReport::new(
        "star",
        lhs,
        ratio(taa.norm() as u128, norm_t as u128),
    ))
}

/// A biregular `a` with `‖a‖ > n/2` satisfies `aa = Ω × Ω`. Reported as
/// `n² ≤ |aa|`.
pub fn check_pigeonhole_doubling(a: &Relation) -> Result<BoundReport> {
    if let Some(err) = a.biregularity_violation() {
        return Err(err);
    }
    let n = a.n();
    if 2 * a.norm() <= n {
        return Err(Error::Precondition(format!(
            "need ‖a‖ > n/2, got ‖a‖ = {}, n = {n}",
            a.norm()
        )));
    }
    let aa = a.product(a)?;
    let full = (n * n) as u128;
    Ok(BoundReport::from_integers(
        "pigeonhole",
        full,
        aa.len() as u128,
    ))
}

impl BoundReport {
    /// `rhs − lhs`; nonnegative exactly when the bound holds.
    pub fn slack(&self) -> BigRational {
        &self.rhs - &self.lhs
    }

    pub fn is_tight(&self) -> bool {
        self.slack().is_zero()
    }
}
