use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::cyclic::{covers, is_prime, k_fold, CyclicSet};
use crate::error::{Error, Result};

/// A verified candidate set `A ⊆ ℤ_q` for the `k`-fold sumset problem.
/// Only [`HrWitness::certify`] builds one, so every field is exhaustively
/// computed from `A`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HrWitness {
    pub q: u64,
    pub k: u32,
    #[serde(rename = "A")]
    pub elements: Vec<u64>,
    #[serde(rename = "kA_size")]
    pub ka_size: usize,
    pub covers: bool,
    pub progression_x: Option<u64>,
}

impl HrWitness {
    pub fn certify(set: &CyclicSet, k: u32) -> Result<Self> {
        let ka = k_fold(set, k)?;
        Ok(HrWitness {
            q: set.modulus(),
            k,
            elements: set.elements().to_vec(),
            ka_size: ka.len(),
            covers: covers(set),
            progression_x: progression_gap_of_sumset(&ka, k),
        })
    }

    pub fn set(&self) -> CyclicSet {
        CyclicSet::new(self.q, self.elements.iter().copied()).expect("certified residues")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serialises")
    }
}

/// Smallest `x ≠ 0` with `{x, 2x, …, kx} ∩ k·A = ∅`.
pub fn find_progression_gap(a: &CyclicSet, k: u32) -> Result<Option<u64>> {
    Ok(progression_gap_of_sumset(&k_fold(a, k)?, k))
}

/// As [`find_progression_gap`], given the sumset `k·A` directly.
pub fn progression_gap_of_sumset(ka: &CyclicSet, k: u32) -> Option<u64> {
    let q = ka.modulus();
    (1..q).find(|&x| {
        (1..=k as u64).all(|i| !ka.contains(((i as u128 * x as u128) % q as u128) as u64))
    })
}

/// Counting certificate for the gap search: with
/// `P_i = {x | i·x ∈ k·A}`, a gap exists iff `P_1 ∪ … ∪ P_k ≠ ℤ_q`, and for
/// prime `q` the union has at most `k·|k·A|` elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GapCertificate {
    pub union_size: u64,
    pub bound: u64,
}

pub fn gap_certificate(ka: &CyclicSet, k: u32) -> GapCertificate {
    let q = ka.modulus();
    let union_size = (0..q)
        .filter(|&x| {
            (1..=k as u64).any(|i| ka.contains(((i as u128 * x as u128) % q as u128) as u64))
        })
        .count() as u64;
    GapCertificate {
        union_size,
        bound: k as u64 * ka.len() as u64,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Total number of local-search steps across all restarts.
    pub budget: u64,
    pub seed: u64,
    /// Rank sets with a progression gap above sets without one.
    pub require_gap: bool,
}

const RESTART_LENGTH: u64 = 400;

/// Seeded local search over sets `A ∋ 0` in `ℤ_q`. The objective is
/// lexicographic: uncovered differences, then (optionally) missing gap, then
/// `|k·A|`. Moves add, remove or swap a single nonzero residue and are
/// accepted unless they worsen the objective. Ties between restarts are
/// broken by the sorted element list, so the result depends only on the
/// arguments. The returned witness is re-certified from scratch.
pub fn search_hr_set(q: u64, k: u32, budget: u64, seed: u64) -> Result<Option<HrWitness>> {
    search_hr_set_with(
        q,
        k,
        SearchOptions {
            budget,
            seed,
            require_gap: false,
        },
    )
}

pub fn search_hr_set_with(q: u64, k: u32, options: SearchOptions) -> Result<Option<HrWitness>> {
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    if k == 0 || q <= k as u64 {
        return Err(Error::InvalidArgument(format!(
            "need 0 < k < q, got k = {k}, q = {q}"
        )));
    }
    let require_gap = options.require_gap;
    let best = local_search(q, options, |set| {
        let ka = k_fold(set, k).expect("k > 0");
        let gap_missing = require_gap && progression_gap_of_sumset(&ka, k).is_none();
        [uncovered(set), gap_missing as u64, ka.len() as u64]
    });
    let witness = HrWitness::certify(&best, k)?;
    let acceptable = witness.covers && (!require_gap || witness.progression_x.is_some());
    Ok(acceptable.then_some(witness))
}

/// Number of residues missing from `A − A`.
pub(crate) fn uncovered(set: &CyclicSet) -> u64 {
    let q = set.modulus() as usize;
    let mut hit = vec![false; q];
    for &a in set.elements() {
        for &b in set.elements() {
            hit[(a as usize + q - b as usize) % q] = true;
        }
    }
    hit.iter().filter(|&&h| !h).count() as u64
}

/// Restarted hill climbing shared by the set searches. Stops early when the
/// objective reaches all zeros.
pub(crate) fn local_search<const N: usize>(
    q: u64,
    options: SearchOptions,
    objective: impl Fn(&CyclicSet) -> [u64; N],
) -> CyclicSet {
    let mut master = ChaCha8Rng::seed_from_u64(options.seed);
    let restarts = options.budget.div_ceil(RESTART_LENGTH).max(1);
    let steps = options.budget.clamp(1, RESTART_LENGTH);
    let target = (q as f64).sqrt().ceil() as usize + 2;
    let mut best: Option<([u64; N], CyclicSet)> = None;

    for _ in 0..restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(master.gen());
        let mut mask = vec![false; q as usize];
        mask[0] = true;
        let mut size = 1;
        while size < target.min(q as usize) {
            let r = rng.gen_range(1..q) as usize;
            if !mask[r] {
                mask[r] = true;
                size += 1;
            }
        }
        let mut current = CyclicSet::from_mask(&mask);
        let mut key = objective(&current);

        for _ in 0..steps {
            if key.iter().all(|&v| v == 0) {
                break;
            }
            let mut candidate = mask.clone();
            let members: Vec<usize> = (1..q as usize).filter(|&i| mask[i]).collect();
            let outsiders: Vec<usize> = (1..q as usize).filter(|&i| !mask[i]).collect();
            let add = |c: &mut Vec<bool>, rng: &mut ChaCha8Rng| {
                if !outsiders.is_empty() {
                    c[outsiders[rng.gen_range(0..outsiders.len())]] = true;
                }
            };
            let remove = |c: &mut Vec<bool>, rng: &mut ChaCha8Rng| {
                if !members.is_empty() {
                    c[members[rng.gen_range(0..members.len())]] = false;
                }
            };
            match rng.gen_range(0..3) {
                0 => add(&mut candidate, &mut rng),
                1 => remove(&mut candidate, &mut rng),
                _ => {
                    remove(&mut candidate, &mut rng);
                    add(&mut candidate, &mut rng);
                }
            }
            let next = CyclicSet::from_mask(&candidate);
            let next_key = objective(&next);
            if next_key <= key {
                mask = candidate;
                current = next;
                key = next_key;
            }
        }

        let better = match &best {
            None => true,
            Some((k, s)) => (key, &current) < (*k, s),
        };
        if better {
            best = Some((key, current));
        }
        if best
            .as_ref()
            .is_some_and(|(k, _)| k.iter().all(|&v| v == 0))
        {
            break;
        }
    }
    best.expect("at least one restart").1
}
