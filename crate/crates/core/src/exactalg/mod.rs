//! Exact arithmetic substrate: integer polynomials in one and several
//! variables, resultants, modular and integer factorization, Sturm sequences.

pub mod brute;
pub mod linalg;
pub mod modpoly;
pub mod multipoly;
pub mod resultant;
pub mod sturm;
pub mod unipoly;
pub mod zassenhaus;

pub use brute::brute_force_factor;
pub use modpoly::{degree_pattern, factor_mod_p, is_prime, primes_in, DegreePattern, ModPoly};
pub use multipoly::MultiPoly;
pub use resultant::{resultant_multi, resultant_subresultant, resultant_uni};
pub use sturm::{real_root_count, sturm_count};
pub use unipoly::UniPoly;
pub use zassenhaus::{factor_over_z, factor_over_z_detailed, mignotte_bound, Factorization, LiftRecord};

use std::collections::BTreeSet;

use crate::error::Result;

/// Reduce `p` modulo `v^2 = 1` for each named variable.
pub fn reduce_unit_squares<S: AsRef<str>>(p: &MultiPoly, unit_vars: &[S]) -> Result<MultiPoly> {
    let idx = unit_vars
        .iter()
        .map(|v| p.var_index(v.as_ref()))
        .collect::<Result<BTreeSet<_>>>()?;
    Ok(p.reduce_units(&idx.into_iter().collect::<Vec<_>>()))
}
