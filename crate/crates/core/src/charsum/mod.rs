//! Dirichlet characters, twisted sums and the restricted character-sum identity.

mod group;
mod identity;

pub use group::{Character, CharacterGroup};
pub use identity::{
    bracket_coefficients, major_arc_probe, restricted_identity_check, twisted_mean, IdentityCheck, MajorArcReport,
    MAJOR_ARC_GRID,
};
