//! Checks of the equilibrium theory beyond raw optimisation: the three-point
//! quantity `Δ_s`, vertical convexity, limit densities, energy scaling and
//! level sets.

pub mod contour;
pub mod convexity;
pub mod delta;
pub mod density;
pub mod hilfssatz;
pub mod scaling;

pub use contour::{marching_squares, ContourSegment, Grid};
pub use convexity::{vertical_convexity, vertical_convexity_scaled};
pub use delta::{
    default_level_grids, delta_level_surface, delta_s, delta_s_explicit, delta_slope_at_zero, find_s1, find_s1_in,
    DeltaResult, LevelCell, LevelSurface,
};
pub use density::{aligned_circle_distance, empirical_cdf_distance, model_coordinates, DensityModel};
pub use hilfssatz::hilfssatz_integral;
pub use scaling::{energy_scaling_estimate, scaling_table, ScalingEstimate, ScalingRegime, ScalingRow};
