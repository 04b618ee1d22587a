//! Stability and bifurcation analysis of Taylor rules in the two-equation
//! New-Keynesian model, and Ramsey optimal policy solved as a discounted
//! augmented linear-quadratic regulator.
//!
//! Everything is generic over [`Scalar`] (`f32` or `f64`); the `*F64`
//! aliases below fix the usual choice.

pub mod error;
pub mod linalg;
pub mod model;
pub mod ramsey;
pub mod scalar;
pub mod sim;
pub mod stability;

pub use error::{Error, Result};
pub use linalg::{
    char_poly_eval, eig2, solve_dare, solve_discrete_sylvester, solve_linear_2x2, solve_sylvester, DareOptions,
    DareSolution, EigenReport, Mat2, Vec2,
};
pub use model::{
    build_matrices, closed_loop, kalman_controllability_rank, transfer_function, ModelParams, StructuralMatrices,
    TaylorRule, TransferFunction, Variant,
};
pub use ramsey::{
    foc_residuals, initial_anchor, loss_value, lqr_triangle_sweep, solve_ramsey, solve_ramsey_with, table2_weights,
    FocReport, LqrRow, LqrRowValues, Preferences, RamseyOptions, RamseySolution, ShockConvention, WeightGrid,
};
pub use scalar::Scalar;
pub use sim::{
    hopf_demo, impulse_response, ramsey_path, simulate_closed_loop, solve_msv, Innovations, Regime, RegimeComparison,
    ShockKind, ShockSpec, Trajectory,
};

pub type Mat2F64 = Mat2<f64>;
pub type Vec2F64 = Vec2<f64>;
pub type EigenReportF64 = EigenReport<f64>;
pub type ModelParamsF64 = ModelParams<f64>;
pub type TaylorRuleF64 = TaylorRule<f64>;
pub type StructuralMatricesF64 = StructuralMatrices<f64>;
pub type PreferencesF64 = Preferences<f64>;
pub type RamseySolutionF64 = RamseySolution<f64>;
pub type TrajectoryF64 = Trajectory<f64>;
pub type ShockSpecF64 = ShockSpec<f64>;

pub type Mat2F32 = Mat2<f32>;
pub type ModelParamsF32 = ModelParams<f32>;
pub type RamseySolutionF32 = RamseySolution<f32>;
