//! Geometry of the Taylor-rule plane: borders, regions, determinacy,
//! pole placement and grid sweeps.

mod determinacy;
mod placement;
mod plane;
mod region;
mod sweep;

pub use determinacy::{
    anchor_from_rates, classify_determinacy, rate_anchor_matrix, DeterminacyClass, InterestRateTiming,
};
pub use placement::{pole_place, PoleMethod};
pub use plane::{
    discriminant_border, discriminant_border_fx, flip_border, hopf_border, rule_from_trace_det, saddle_node_border,
    trace_det_from_rule, triangle_vertices, TriangleVertices, Vertex,
};
pub use region::{
    classify_region, classify_trace_det, is_negative_feedback_scalar, label_from_trace_det,
    scalar_accelerationist_bounds, stable_count, taylor_principle_holds, RegionClass, RegionLabel, DEFAULT_BORDER_TOL,
};
pub use sweep::{border_curves, sweep_grid, sweep_grid_par, BorderKind, BorderPoint, GridAxis, SweepRow};
