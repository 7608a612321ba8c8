use crate::error::{Error, Result};
use crate::relation::{PointSet, Relation};
use crate::scheme::{group_elements, Permutation};

/// A Cayley graph `Cay(G, S)`: vertices are the elements of `G`, with an
/// edge `x → xg` for every `g ∈ S`.
///
/// Vertex numbering is canonical: residue `i` of `ℤ_q` is vertex `i`,
/// `(i, j) ∈ ℤ_q × ℤ_q` is vertex `i·q + j`, and permutation group elements
/// are numbered by the lexicographic order of their image arrays.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CayleySpec {
    Cyclic {
        q: u64,
        connection: Vec<u64>,
    },
    CyclicSquare {
        q: u64,
        connection: Vec<(u64, u64)>,
    },
    /// The group generated by `generators`; `xg` means `x` followed by `g`.
    Permutations {
        degree: usize,
        generators: Vec<Permutation>,
        connection: Vec<Permutation>,
    },
}

fn outside(what: impl std::fmt::Debug) -> Error {
    Error::InvalidArgument(format!("element {what:?} is outside the group"))
}

fn identity_error() -> Error {
    Error::InvalidArgument("connection set contains the identity".into())
}

/// Builds the Cayley graph. The connection set is treated as a set
/// (duplicates collapse). The identity is rejected unless `allow_identity`
/// is set, since it adds loops.
pub fn build_cayley(spec: &CayleySpec, allow_identity: bool) -> Result<Relation> {
    match spec {
        CayleySpec::Cyclic { q, connection } => {
            let q = *q as usize;
            let domain = PointSet::new(q)?;
            if let Some(&g) = connection.iter().find(|&&g| g as usize >= q) {
                return Err(outside(g));
            }
            if !allow_identity && connection.contains(&0) {
                return Err(identity_error());
            }
            let mut rel = Relation::empty(domain);
            for x in 0..q {
                for &g in connection {
                    rel.set(x, (x + g as usize) % q);
                }
            }
            Ok(rel)
        }
        CayleySpec::CyclicSquare { q, connection } => {
            let q = *q as usize;
            let domain = PointSet::new(q.checked_mul(q).ok_or(Error::Overflow("q²"))?)?;
            if let Some(g) = connection
                .iter()
                .find(|&&(i, j)| i as usize >= q || j as usize >= q)
            {
                return Err(outside(g));
            }
            if !allow_identity && connection.contains(&(0, 0)) {
                return Err(identity_error());
            }
            let mut rel = Relation::empty(domain);
            for i in 0..q {
                for j in 0..q {
                    for &(a, b) in connection {
                        let y = ((i + a as usize) % q) * q + (j + b as usize) % q;
                        rel.set(i * q + j, y);
                    }
                }
            }
            Ok(rel)
        }
        CayleySpec::Permutations {
            degree,
            generators,
            connection,
        } => {
            let elements = group_elements(*degree, generators)?;
            let domain = PointSet::new(elements.len())?;
            let index =
                |p: &Permutation| elements.binary_search(p).map_err(|_| outside(p.images()));
            let conn = connection
                .iter()
                .map(|g| index(g).map(|_| g))
                .collect::<Result<Vec<_>>>()?;
            if !allow_identity && conn.iter().any(|g| g.is_identity()) {
                return Err(identity_error());
            }
            let mut rel = Relation::empty(domain);
            for (x, p) in elements.iter().enumerate() {
                for g in &conn {
                    rel.set(x, index(&p.then(g))?);
                }
            }
            Ok(rel)
        }
    }
}

/// Left translations of a permutation group acting on its own elements,
/// numbered as in [`build_cayley`]. Every Cayley graph of the group is
/// invariant under them, so their orbital scheme contains all such graphs.
pub fn left_regular_generators(
    degree: usize,
    generators: &[Permutation],
) -> Result<Vec<Permutation>> {
    let elements = group_elements(degree, generators)?;
    generators
        .iter()
        .map(|h| {
            let images = elements
                .iter()
                .map(|x| {
                    elements
                        .binary_search(&h.then(x))
                        .expect("closed under products")
                })
                .collect();
            Permutation::new(images)
        })
        .collect()
}

/// Translations of `ℤ_q × ℤ_q` by the two unit vectors, in the vertex
/// numbering of [`build_cayley`].
pub fn cyclic_square_generators(q: usize) -> Vec<Permutation> {
    let n = q * q;
    let shift = |di: usize, dj: usize| {
        Permutation::new(
            (0..n)
                .map(|v| ((v / q + di) % q) * q + (v % q + dj) % q)
                .collect(),
        )
        .expect("translation is a bijection")
    };
    vec![shift(1, 0), shift(0, 1)]
}
