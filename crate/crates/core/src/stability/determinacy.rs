use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, eig_from_trace_det, Mat2, Vec2};
use crate::model::{build_matrices, closed_loop, ModelParams, TaylorRule};
use crate::scalar::{lit, Scalar};

use super::plane::trace_det_from_rule;
use super::region::DEFAULT_BORDER_TOL;

/// Whether the instrument and its lag count as forward-looking or predetermined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InterestRateTiming {
    /// Only the two shocks are predetermined: the endogenous block needs zero stable roots.
    ForwardLooking,
    /// Shocks plus `i` and its lag are predetermined: the endogenous block needs two.
    Predetermined,
}

impl InterestRateTiming {
    pub fn required_stable(&self) -> u8 {
        match self {
            InterestRateTiming::ForwardLooking => 0,
            InterestRateTiming::Predetermined => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeterminacyClass {
    Determinate,
    /// More stable roots than predetermined variables.
    Indeterminate,
    /// Fewer stable roots than predetermined variables.
    Explosive,
    /// A root within tolerance of the unit circle.
    Boundary,
}

impl fmt::Display for DeterminacyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DeterminacyClass::Determinate => "determinate",
            DeterminacyClass::Indeterminate => "indeterminate",
            DeterminacyClass::Explosive => "explosive",
            DeterminacyClass::Boundary => "boundary",
        })
    }
}

/// Stable-root counting on the endogenous closed-loop block.
pub fn classify_determinacy<T: Scalar>(
    params: &ModelParams<T>,
    rule: &TaylorRule<T>,
    timing: InterestRateTiming,
) -> DeterminacyClass {
    let tol = lit::<T>(DEFAULT_BORDER_TOL);
    let (t, d) = trace_det_from_rule(params, rule.f_x, rule.f_pi);
    let e = eig_from_trace_det(t, d);
    let one = T::one();
    if (e.modulus1 - one).abs() <= tol || (e.modulus2 - one).abs() <= tol {
        return DeterminacyClass::Boundary;
    }
    let stable = (e.modulus1 < one) as u8 + (e.modulus2 < one) as u8;
    let need = timing.required_stable();
    match stable.cmp(&need) {
        std::cmp::Ordering::Equal => DeterminacyClass::Determinate,
        std::cmp::Ordering::Greater => DeterminacyClass::Indeterminate,
        std::cmp::Ordering::Less => DeterminacyClass::Explosive,
    }
}

/// Matrix mapping `(x0, π0)` to `(i1, i0)` under the rule (no shocks):
/// rows `F_y (A_yy + B_y F_y)` and `F_y`.
pub fn rate_anchor_matrix<T: Scalar>(params: &ModelParams<T>, rule: &TaylorRule<T>) -> Result<Mat2<T>> {
    let m = build_matrices(params)?;
    let acl = closed_loop(&m, rule);
    let f = rule.f_y();
    let top = acl.left_mul(&f);
    Ok(Mat2::new(top.0[0], top.0[1], f.0[0], f.0[1]))
}

/// Forward-looking `(x0, π0)` pinned down by the first two interest rates.
pub fn anchor_from_rates<T: Scalar>(params: &ModelParams<T>, rule: &TaylorRule<T>, i0: T, i1: T) -> Result<(T, T)> {
    rule.validate()?;
    let m = rate_anchor_matrix(params, rule)?;
    let v = linalg::solve_linear_2x2(&m, &Vec2::new(i1, i0)).map_err(|e| Error::NoAnchor(e.to_string()))?;
    Ok((v.0[0], v.0[1]))
}
