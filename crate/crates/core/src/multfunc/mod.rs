//! Multiplicative functions: prime-power rules, bulk evaluation by sieve, mean
//! values in progressions, and the built-in example functions.

mod function;
mod mean;
pub mod registry;
mod sato_tate;
mod sieve;
pub mod tau;

pub use function::{MultiplicativeFunction, PrimePowerRule};
pub use mean::{
    elliott_partial_sum, estimate_alpha, euler_envelope, mean_value, mean_value_progression, prime_reciprocal_sum,
    progression_sum, shiu_upper_bound,
};
pub use registry::resolve;
pub use sato_tate::{adaptive_simpson, sato_tate_lower_sum, sato_tate_mean, sato_tate_mu, SatoTateDensity};
pub use sieve::{build_sieve, build_sieve_with, SieveTable, SpfTable};
pub use tau::tau_coefficients;
