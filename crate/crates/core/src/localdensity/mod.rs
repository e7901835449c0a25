//! Local factors of the correlation asymptotics and the predicted main terms.

mod alpha;
mod beta;
mod theorem;

pub use alpha::{
    alpha_composite, alpha_local, alpha_local_with, congruence_density, congruence_density_exponent,
    exact_divisibility_density, AlphaMethod, ENUMERATION_BUDGET,
};
pub use beta::{
    beta_infinity, beta_p, beta_p_exact, beta_scan, beta_tail_bound, effective_a_max, predict_main_term_corollary,
    BetaP, LocalDensityReport,
};
pub use theorem::{predict_main_term_theorem, residue_system_density, TheoremPrediction, TERM_BUDGET};
