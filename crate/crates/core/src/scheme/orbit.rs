use std::collections::VecDeque;

use super::permutation::{check_degrees, point_orbit, Permutation};
use super::{verify_scheme, Scheme};
use crate::error::{Error, Result};
use crate::relation::{PointSet, Relation};

/// The scheme whose basis relations are the orbits of a transitive group on
/// `Ω × Ω`. Orbits are numbered in order of their first pair in row-major
/// order, so the diagonal is always basis relation 0.
pub fn pair_orbit_scheme(domain: PointSet, generators: &[Permutation]) -> Result<Scheme> {
    let n = domain.len();
    check_degrees(n, generators)?;
    let orbit = point_orbit(n, generators, 0)?;
    if orbit.len() != n {
        return Err(Error::Intransitive {
            orbit: orbit.len(),
            n,
        });
    }

    const NONE: u32 = u32::MAX;
    let mut color = vec![NONE; n * n];
    let mut basis = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..n * n {
        if color[start] != NONE {
            continue;
        }
        let c = basis.len() as u32;
        let mut rel = Relation::empty(domain);
        color[start] = c;
        queue.push_back(start);
        while let Some(i) = queue.pop_front() {
            let (x, y) = (i / n, i % n);
            rel.set(x, y);
            for g in generators {
                let j = g.apply(x) * n + g.apply(y);
                if color[j] == NONE {
                    color[j] = c;
                    queue.push_back(j);
                }
            }
        }
        basis.push(rel);
    }
    Ok(verify_scheme(basis)?)
}
