use super::{verify_scheme, Scheme};
use crate::error::{Error, Result};
use crate::relation::{PointSet, Relation};

/// Result of the 2-dimensional Weisfeiler-Leman closure.
#[derive(Clone, Debug)]
pub enum WlOutcome {
    /// The coarsest scheme in which every seed relation is a union of basis
    /// relations.
    Homogeneous(Scheme),
    /// The stable coloring splits the diagonal, so it is a coherent
    /// configuration but not a scheme.
    Inhomogeneous {
        rank: usize,
        diagonal_classes: usize,
        /// Row-major `n × n` stable coloring.
        coloring: Vec<u32>,
    },
}

impl WlOutcome {
    pub fn scheme(&self) -> Option<&Scheme> {
        match self {
            WlOutcome::Homogeneous(s) => Some(s),
            WlOutcome::Inhomogeneous { .. } => None,
        }
    }

    pub fn into_scheme(self) -> Option<Scheme> {
        match self {
            WlOutcome::Homogeneous(s) => Some(s),
            WlOutcome::Inhomogeneous { .. } => None,
        }
    }
}

/// Replaces each signature by its rank among the distinct signatures, so the
/// new coloring depends only on the signatures and not on point labels.
fn canonical_colors<T: Ord>(signatures: &[T]) -> (Vec<u32>, usize) {
    let mut order: Vec<usize> = (0..signatures.len()).collect();
    order.sort_by(|&i, &j| signatures[i].cmp(&signatures[j]));
    let mut colors = vec![0u32; signatures.len()];
    let mut next = 0u32;
    for (k, &i) in order.iter().enumerate() {
        if k > 0 && signatures[order[k - 1]] != signatures[i] {
            next += 1;
        }
        colors[i] = next;
    }
    (colors, next as usize + 1)
}

/// Refines the coloring of `Ω × Ω` generated by `seeds` until stable.
pub fn wl_closure(seeds: &[Relation]) -> Result<WlOutcome> {
    let first = seeds
        .first()
        .ok_or_else(|| Error::InvalidArgument("at least one seed relation is required".into()))?;
    let domain = first.domain();
    if let Some(r) = seeds.iter().find(|r| r.domain() != domain) {
        return Err(Error::DomainMismatch {
            left: domain.len(),
            right: r.n(),
        });
    }
    let n = domain.len();

    let initial: Vec<(bool, Vec<bool>, Vec<bool>)> = (0..n * n)
        .map(|i| {
            let (x, y) = (i / n, i % n);
            (
                x != y,
                seeds.iter().map(|r| r.contains(x, y)).collect(),
                seeds.iter().map(|r| r.contains(y, x)).collect(),
            )
        })
        .collect();
    let (mut color, mut classes) = canonical_colors(&initial);
    drop(initial);

    let mut signatures: Vec<(u32, u32, Vec<u64>)> = Vec::with_capacity(n * n);
    loop {
        signatures.clear();
        for x in 0..n {
            for y in 0..n {
                let mut walk: Vec<u64> = (0..n)
                    .map(|z| (u64::from(color[x * n + z]) << 32) | u64::from(color[z * n + y]))
                    .collect();
                walk.sort_unstable();
                signatures.push((color[x * n + y], color[y * n + x], walk));
            }
        }
        let (refined, refined_classes) = canonical_colors(&signatures);
        color = refined;
        if refined_classes == classes {
            break;
        }
        classes = refined_classes;
    }

    let diagonal_classes = {
        let mut seen: Vec<u32> = (0..n).map(|x| color[x * n + x]).collect();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    };
    if diagonal_classes > 1 {
        return Ok(WlOutcome::Inhomogeneous {
            rank: classes,
            diagonal_classes,
            coloring: color,
        });
    }
    Ok(WlOutcome::Homogeneous(build(domain, &color, classes)?))
}

/// Renumbers classes by first occurrence so the diagonal comes first and
/// certifies the result.
fn build(domain: PointSet, color: &[u32], classes: usize) -> Result<Scheme> {
    let n = domain.len();
    let mut renumber = vec![u32::MAX; classes];
    let mut basis: Vec<Relation> = Vec::with_capacity(classes);
    for (i, &c) in color.iter().enumerate() {
        let slot = &mut renumber[c as usize];
        if *slot == u32::MAX {
            *slot = basis.len() as u32;
            basis.push(Relation::empty(domain));
        }
        basis[*slot as usize].set(i / n, i % n);
    }
    Ok(verify_scheme(basis)?)
}
