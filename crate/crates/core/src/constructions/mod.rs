//! Concrete graph families: cyclic sumsets, Cayley graphs and the
//! large-girth construction.

mod cayley;
mod cyclic;
mod families;
mod girthex;
mod hr;

pub use cayley::{build_cayley, cyclic_square_generators, left_regular_generators, CayleySpec};
pub use cyclic::{
    covers, difference_set, is_prime, k_fold, mod_inverse, normalize_shift, primes_between,
    scale_set, sumset, CyclicSet,
};
pub use families::{johnson_action, kneser_two, petersen, two_subsets};
pub use girthex::{
    certify_construction, cycle_equation_solutions, girthex_at, girthex_pipeline, girthex_scan,
    search_cycle_free_set, Construction, GirthexCertificate, GirthexOptions, GirthexOutcome,
    GirthexSummary, Route,
};
pub use hr::{
    find_progression_gap, gap_certificate, progression_gap_of_sumset, search_hr_set,
    search_hr_set_with, GapCertificate, HrWitness, SearchOptions,
};
