//! Pseudorandom majorants `nu = nu♯ · nu♭` for multiplicative functions.

mod cutoff;
mod divisor;
mod experiments;
mod nu;
mod split;

pub use cutoff::{smooth_step, SmoothCutoff};
pub use divisor::{erdos_divisor, erdos_divisor_flat, sigma_flat, truncated_divisor_sum};
pub use experiments::*;
pub use nu::{
    in_exceptional_set, u_set_omega, FlatForm, Majorant, MajorantParams, MajorantValue, USetSpec, DEFAULT_C1,
    DEFAULT_GAMMA,
};
pub use split::{sharp_mobius_transform, split, SharpFlatSplit};
