use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Mat2, Vec2};
use crate::model::{build_matrices, kalman_controllability_rank, ModelParams};
use crate::scalar::Scalar;

use super::plane::rule_from_trace_det;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PoleMethod {
    /// Invert the affine trace/determinant map.
    AffineMap,
    /// Go through the controllable canonical form.
    CanonicalForm,
    /// `F = −(0, 1) [B, AB]⁻¹ p(A)`.
    Ackermann,
}

impl PoleMethod {
    pub const ALL: [PoleMethod; 3] = [PoleMethod::AffineMap, PoleMethod::CanonicalForm, PoleMethod::Ackermann];
}

impl fmt::Display for PoleMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PoleMethod::AffineMap => "affine-map",
            PoleMethod::CanonicalForm => "canonical-form",
            PoleMethod::Ackermann => "ackermann",
        })
    }
}

impl FromStr for PoleMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        PoleMethod::ALL
            .into_iter()
            .find(|m| m.to_string() == s)
            .ok_or_else(|| Error::invalid(format!("unknown pole placement method '{s}'")))
    }
}

/// Gains `(F_x, F_π)` giving the closed loop trace `t` and determinant `d`.
pub fn pole_place<T: Scalar>(params: &ModelParams<T>, t: T, d: T, method: PoleMethod) -> Result<(T, T)> {
    if !(t.is_finite() && d.is_finite()) {
        return Err(Error::invalid("pole targets must be finite"));
    }
    let m = build_matrices(params)?;
    let (a, b) = (m.a_yy, m.b_y);
    if kalman_controllability_rank(&a, &b) < 2 {
        return Err(Error::Uncontrollable(format!(
            "controllability rank {} < 2",
            kalman_controllability_rank(&a, &b)
        )));
    }
    let ctrb_inv = || {
        Mat2::from_cols(b, a * b)
            .inverse()
            .map_err(|e| Error::Uncontrollable(e.to_string()))
    };
    let f = match method {
        PoleMethod::AffineMap => {
            let (fx, fp) = rule_from_trace_det(params, t, d)?;
            Vec2::new(fx, fp)
        }
        PoleMethod::CanonicalForm => {
            let (ta, da) = (a.trace(), a.det());
            let coeff = Vec2::new(t - ta, ta * (t - ta) + da - d);
            ctrb_inv()?.left_mul(&coeff)
        }
        PoleMethod::Ackermann => {
            let p_of_a = a * a - a.scale(t) + Mat2::identity().scale(d);
            -p_of_a.left_mul(&ctrb_inv()?.row(1))
        }
    };
    Ok((f.0[0], f.0[1]))
}
