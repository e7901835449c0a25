//! W-trick scaffolding: `w(x)`, `W(x)`, residue mean tables, exceptional sets
//! and the smooth-part partition of correlation sums.

mod context;
mod exceptional;
mod partition;
mod residue;

pub use context::{make_wcontext, WContext, WOverrides, DEFAULT_B1, DEFAULT_B2, DEFAULT_C};
pub use exceptional::{
    exceptional_prime_square, exceptional_square_density, in_exceptional_square_set, smooth_truncation_check,
    square_root_part, zeta_two_tail, ExceptionalDensity, TruncationCheck,
};
pub use partition::{exact_smooth_partition, smooth_part_by, PartitionGroup, PartitionReport, SmoothTuple};
pub use residue::{
    residue_mean_table, stability_scan, ResidueMeanTable, StabilityReport, StabilityRow, STABILITY_GRID,
};
