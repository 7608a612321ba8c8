use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A set of residues modulo `q`, kept sorted.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CyclicSet {
    q: u64,
    elements: Vec<u64>,
}

impl CyclicSet {
    pub fn new(q: u64, elements: impl IntoIterator<Item = u64>) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidArgument("modulus must be positive".into()));
        }
        let mut elements: Vec<u64> = elements.into_iter().collect();
        if let Some(&bad) = elements.iter().find(|&&e| e >= q) {
            return Err(Error::InvalidArgument(format!(
                "residue {bad} out of range for modulus {q}"
            )));
        }
        elements.sort_unstable();
        elements.dedup();
        Ok(CyclicSet { q, elements })
    }

    /// Reduces arbitrary integers modulo `q`.
    pub fn from_residues(q: u64, values: impl IntoIterator<Item = i64>) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidArgument("modulus must be positive".into()));
        }
        CyclicSet::new(q, values.into_iter().map(|v| v.rem_euclid(q as i64) as u64))
    }

    pub(crate) fn from_mask(mask: &[bool]) -> Self {
        CyclicSet {
            q: mask.len() as u64,
            elements: (0..mask.len() as u64)
                .filter(|&i| mask[i as usize])
                .collect(),
        }
    }

    pub fn full(q: u64) -> Result<Self> {
        CyclicSet::new(q, 0..q)
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.elements.len() as u64 == self.q
    }

    pub fn contains(&self, residue: u64) -> bool {
        self.elements.binary_search(&(residue % self.q)).is_ok()
    }

    fn check_modulus(&self, other: &CyclicSet) -> Result<()> {
        if self.q == other.q {
            Ok(())
        } else {
            Err(Error::ModulusMismatch(self.q, other.q))
        }
    }

    /// `A + B`.
    pub fn sumset(&self, other: &CyclicSet) -> Result<CyclicSet> {
        self.check_modulus(other)?;
        let q = self.q;
        let mut mask = vec![false; q as usize];
        for &a in &self.elements {
            for &b in &other.elements {
                mask[((a + b) % q) as usize] = true;
            }
        }
        Ok(CyclicSet::from_mask(&mask))
    }

    /// `A − B`.
    pub fn difference(&self, other: &CyclicSet) -> Result<CyclicSet> {
        self.check_modulus(other)?;
        let q = self.q;
        let mut mask = vec![false; q as usize];
        for &a in &self.elements {
            for &b in &other.elements {
                mask[((a + q - b) % q) as usize] = true;
            }
        }
        Ok(CyclicSet::from_mask(&mask))
    }

    /// `x + A`.
    pub fn shift(&self, x: u64) -> CyclicSet {
        let q = self.q;
        let mut elements: Vec<u64> = self.elements.iter().map(|&a| (a + x % q) % q).collect();
        elements.sort_unstable();
        CyclicSet { q, elements }
    }

    /// `i·A = {i·a}` (dilation, not the sumset).
    pub fn dilate(&self, u: u64) -> CyclicSet {
        let q = self.q;
        let mut elements: Vec<u64> = self
            .elements
            .iter()
            .map(|&a| ((a as u128 * (u % q) as u128) % q as u128) as u64)
            .collect();
        elements.sort_unstable();
        elements.dedup();
        CyclicSet { q, elements }
    }
}

impl fmt::Debug for CyclicSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} mod {}", self.elements, self.q)
    }
}

pub fn sumset(a: &CyclicSet, b: &CyclicSet) -> Result<CyclicSet> {
    a.sumset(b)
}

/// `k·A = A + … + A` (k summands).
pub fn k_fold(a: &CyclicSet, k: u32) -> Result<CyclicSet> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    let mut out = a.clone();
    for _ in 1..k {
        out = out.sumset(a)?;
    }
    Ok(out)
}

/// `[1·A, 2·A, …, k·A]`.
pub(crate) fn folds(a: &CyclicSet, k: u32) -> Vec<CyclicSet> {
    let mut out: Vec<CyclicSet> = Vec::with_capacity(k as usize);
    for i in 0..k {
        let next = match out.last() {
            None => a.clone(),
            Some(prev) => prev.sumset(a).expect("same modulus"),
        };
        debug_assert_eq!(out.len(), i as usize);
        out.push(next);
    }
    out
}

/// `A − A`.
pub fn difference_set(a: &CyclicSet) -> CyclicSet {
    a.difference(a).expect("same modulus")
}

/// True iff `A − A = ℤ_q`.
pub fn covers(a: &CyclicSet) -> bool {
    difference_set(a).is_full()
}

/// Shifts `A` by minus its least element, so `0 ∈ A`.
pub fn normalize_shift(a: &CyclicSet) -> Result<CyclicSet> {
    let &min = a
        .elements()
        .first()
        .ok_or_else(|| Error::InvalidArgument("cannot normalise an empty set".into()))?;
    Ok(a.shift(a.modulus() - min))
}

/// Inverse of `u` modulo `q`.
pub fn mod_inverse(u: u64, q: u64) -> Result<u64> {
    let (q_i, u_i) = (q as i128, (u % q) as i128);
    let e = u_i.extended_gcd(&q_i);
    if e.gcd != 1 {
        return Err(Error::NotInvertible { u, q });
    }
    Ok(e.x.rem_euclid(q_i) as u64)
}

/// `u·A` for a unit `u`.
pub fn scale_set(a: &CyclicSet, u: u64) -> Result<CyclicSet> {
    mod_inverse(u, a.modulus())?;
    Ok(a.dilate(u))
}

pub fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= q {
        if q.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Primes in `[lo, hi]`, ascending.
pub fn primes_between(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&q| is_prime(q)).collect()
}
