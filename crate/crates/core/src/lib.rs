//! Computational laboratory for correlations of multiplicative functions along
//! systems of linear forms.
//!
//! The crate is organised by subsystem:
//!
//! - [`multfunc`]: multiplicative functions, sieved value tables and mean values.
//! - [`linsys`]: affine linear forms, convex bodies and lattice-point correlation sums.
//! - [`localdensity`]: local factors `alpha`, `beta_p`, `beta_infinity` and main-term predictions.
//! - [`wtrick`]: `W(x)`, residue mean tables, exceptional sets and the smooth-part partition.
//! - [`majorant`]: the `nu_sharp * nu_flat` majorant and its diagnostics.
//! - [`charsum`]: Dirichlet characters and the restricted character-sum identity.
//! - [`expcli`]: configuration-driven experiment runner behind the `multcorr` binary.

pub mod arith;
pub mod charsum;
pub mod error;
pub mod expcli;
pub mod linsys;
pub mod localdensity;
pub mod majorant;
pub mod multfunc;
pub mod sum;
pub mod wtrick;

pub use error::{Error, Result};
pub use multfunc::{build_sieve, MultiplicativeFunction, SieveTable};
