use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A bijection on `0..n`, stored by its image array.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        if n == 0 {
            return Err(Error::InvalidPermutation("empty image array".into()));
        }
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n {
                return Err(Error::InvalidPermutation(format!(
                    "image {i} out of range for degree {n}"
                )));
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidPermutation(format!("image {i} repeated")));
            }
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    /// `i ↦ i + shift mod n`.
    pub fn rotation(n: usize, shift: usize) -> Self {
        Permutation {
            images: (0..n).map(|i| (i + shift) % n).collect(),
        }
    }

    /// `i ↦ −i mod n`.
    pub fn reflection(n: usize) -> Self {
        Permutation {
            images: (0..n).map(|i| (n - i) % n).collect(),
        }
    }

    /// Swaps `a` and `b`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Result<Self> {
        if a >= n || b >= n {
            return Err(Error::InvalidPermutation(format!(
                "transposition ({a} {b}) out of range for degree {n}"
            )));
        }
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(a, b);
        Ok(Permutation { images })
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self` followed by `other`: `i ↦ other(self(i))`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree(), "permutation degrees differ");
        Permutation {
            images: self.images.iter().map(|&i| other.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.degree()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Permutation { images }
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(images: Vec<usize>) -> Result<Self> {
        Permutation::new(images)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Vec<usize> {
        p.images
    }
}

pub(crate) fn check_degrees(n: usize, generators: &[Permutation]) -> Result<()> {
    match generators.iter().find(|g| g.degree() != n) {
        Some(g) => Err(Error::InvalidPermutation(format!(
            "generator of degree {} on a domain of {n} points",
            g.degree()
        ))),
        None => Ok(()),
    }
}

/// Orbit of `start` under the group generated by `generators`, ascending.
pub fn point_orbit(n: usize, generators: &[Permutation], start: usize) -> Result<Vec<usize>> {
    check_degrees(n, generators)?;
    if start >= n {
        return Err(Error::PointOutOfRange { index: start, n });
    }
    let mut seen = vec![false; n];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(i) = queue.pop_front() {
        for g in generators {
            let j = g.apply(i);
            if !std::mem::replace(&mut seen[j], true) {
                queue.push_back(j);
            }
        }
    }
    Ok((0..n).filter(|&i| seen[i]).collect())
}

pub fn is_transitive(n: usize, generators: &[Permutation]) -> Result<bool> {
    Ok(point_orbit(n, generators, 0)?.len() == n)
}

/// All elements of the generated group, sorted by image array. Meant for
/// small groups only; the closure is materialised.
pub fn group_elements(n: usize, generators: &[Permutation]) -> Result<Vec<Permutation>> {
    check_degrees(n, generators)?;
    let identity = Permutation::identity(n);
    let mut seen = BTreeSet::from([identity.clone()]);
    let mut queue = VecDeque::from([identity]);
    while let Some(p) = queue.pop_front() {
        for g in generators {
            let q = p.then(g);
            if seen.insert(q.clone()) {
                queue.push_back(q);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// Generator of the regular action of `ℤ_n`.
pub fn cyclic_generators(n: usize) -> Vec<Permutation> {
    vec![Permutation::rotation(n, 1)]
}

/// Rotation and reflection generating the dihedral group of order `2n`
/// acting on the `n`-gon.
pub fn dihedral_generators(n: usize) -> Vec<Permutation> {
    vec![Permutation::rotation(n, 1), Permutation::reflection(n)]
}

/// An `n`-cycle and a transposition, generating `Sym(n)`.
pub fn symmetric_generators(n: usize) -> Vec<Permutation> {
    let mut gens = vec![Permutation::rotation(n, 1)];
    if n > 1 {
        gens.push(Permutation::transposition(n, 0, 1).expect("n > 1"));
    }
    gens
}
