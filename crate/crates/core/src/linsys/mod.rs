//! Affine linear forms, convex bodies and lattice-point correlation sums.

mod body;
mod correlation;
mod form;

pub use body::{format_point, parse_rational, ConvexBody, Halfspace, LatticePoints, Scale, MAX_SCALE};
pub use correlation::{
    check_form_ranges, correlation_sum, correlation_sum_values, correlation_sum_wtricked,
    correlation_sum_wtricked_values, form_ranges, wtricked_system, CorrelationResult, RangePolicy,
};
pub use form::{LinearForm, LinearSystem};
