use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{eig_from_trace_det, EigenReport};
use crate::model::ModelParams;
use crate::scalar::{lit, Scalar};

use super::plane::trace_det_from_rule;

pub const DEFAULT_BORDER_TOL: f64 = 1e-9;

/// Region of the rule plane, or the border a point sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RegionLabel {
    /// Real eigenvalues straddling `+1`, the other inside `(−1, 1)`. Contains laissez-faire.
    Saddle,
    /// Real eigenvalues below `−1` and above `+1`.
    SourceRealStraddle,
    /// One real eigenvalue below `−1`, the other inside `(−1, 1)`.
    SaddleNegative,
    /// Both real inside the unit circle.
    SinkReal,
    /// Complex pair inside the unit circle.
    SinkComplex,
    /// Complex pair outside the unit circle.
    SourceComplex,
    /// Both real above `+1`.
    SourceReal,
    /// Both real below `−1`.
    BothBelowMinusOne,
    BorderSaddleNode,
    BorderFlip,
    BorderHopf,
    BorderDiscriminant,
}

impl RegionLabel {
    pub const ALL: [RegionLabel; 12] = [
        RegionLabel::Saddle,
        RegionLabel::SourceRealStraddle,
        RegionLabel::SaddleNegative,
        RegionLabel::SinkReal,
        RegionLabel::SinkComplex,
        RegionLabel::SourceComplex,
        RegionLabel::SourceReal,
        RegionLabel::BothBelowMinusOne,
        RegionLabel::BorderSaddleNode,
        RegionLabel::BorderFlip,
        RegionLabel::BorderHopf,
        RegionLabel::BorderDiscriminant,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            RegionLabel::Saddle => "R1_saddle",
            RegionLabel::SourceRealStraddle => "R2_source_real_straddle",
            RegionLabel::SaddleNegative => "R3_saddle_neg",
            RegionLabel::SinkReal => "R4_1_sink_real",
            RegionLabel::SinkComplex => "R4_2_sink_complex",
            RegionLabel::SourceComplex => "R4_3_source_complex",
            RegionLabel::SourceReal => "R4_4_source_real",
            RegionLabel::BothBelowMinusOne => "R4_5_both_below_minus1",
            RegionLabel::BorderSaddleNode => "Border_SaddleNode",
            RegionLabel::BorderFlip => "Border_Flip",
            RegionLabel::BorderHopf => "Border_Hopf",
            RegionLabel::BorderDiscriminant => "Border_Discriminant",
        }
    }

    pub fn is_border(&self) -> bool {
        matches!(
            self,
            RegionLabel::BorderSaddleNode
                | RegionLabel::BorderFlip
                | RegionLabel::BorderHopf
                | RegionLabel::BorderDiscriminant
        )
    }

    /// Inside the stability triangle.
    pub fn is_sink(&self) -> bool {
        matches!(self, RegionLabel::SinkReal | RegionLabel::SinkComplex)
    }
}

impl fmt::Display for RegionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RegionLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        RegionLabel::ALL
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| Error::invalid(format!("unknown region label '{s}'")))
    }
}

impl Serialize for RegionLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegionClass<T> {
    pub label: RegionLabel,
    /// Eigenvalues with modulus below `1 − tol`.
    pub stable_count: u8,
    pub eigen: EigenReport<T>,
    /// Characteristic polynomial at `+1`.
    pub p_one: T,
    /// Characteristic polynomial at `−1`.
    pub p_minus_one: T,
}

/// Region label from the signs of `p(1)`, `p(−1)`, `D − 1` and `Δ`.
///
/// Border checks run first, in the order saddle-node, flip, Hopf (only with a
/// complex pair), discriminant.
pub fn label_from_trace_det<T: Scalar>(t: T, d: T, tol: T) -> RegionLabel {
    let one = T::one();
    let p1 = one - t + d;
    let pm1 = one + t + d;
    let disc = t * t - lit::<T>(4.0) * d;
    if p1.abs() < tol {
        return RegionLabel::BorderSaddleNode;
    }
    if pm1.abs() < tol {
        return RegionLabel::BorderFlip;
    }
    if (d - one).abs() < tol && disc < T::zero() {
        return RegionLabel::BorderHopf;
    }
    if disc.abs() < tol {
        return RegionLabel::BorderDiscriminant;
    }
    match (p1 > T::zero(), pm1 > T::zero()) {
        (false, true) => RegionLabel::Saddle,
        (false, false) => RegionLabel::SourceRealStraddle,
        (true, false) => RegionLabel::SaddleNegative,
        (true, true) if disc < T::zero() => {
            if d < one {
                RegionLabel::SinkComplex
            } else {
                RegionLabel::SourceComplex
            }
        }
        (true, true) => {
            if d < one {
                RegionLabel::SinkReal
            } else if t > T::zero() {
                RegionLabel::SourceReal
            } else {
                RegionLabel::BothBelowMinusOne
            }
        }
    }
}

pub fn stable_count<T: Scalar>(e: &EigenReport<T>, tol: T) -> u8 {
    let bound = T::one() - tol;
    (e.modulus1 < bound) as u8 + (e.modulus2 < bound) as u8
}

pub fn classify_trace_det<T: Scalar>(t: T, d: T, tol: T) -> RegionClass<T> {
    let eigen = eig_from_trace_det(t, d);
    RegionClass {
        label: label_from_trace_det(t, d, tol),
        stable_count: stable_count(&eigen, tol),
        eigen,
        p_one: T::one() - t + d,
        p_minus_one: T::one() + t + d,
    }
}

pub fn classify_region<T: Scalar>(params: &ModelParams<T>, f_x: T, f_pi: T, border_tol: T) -> RegionClass<T> {
    let (t, d) = trace_det_from_rule(params, f_x, f_pi);
    classify_trace_det(t, d, border_tol)
}

/// Generalized Taylor principle: `p(1) > 0` for the closed loop, with `p(1)`
/// inside the border tolerance counted as not holding.
pub fn taylor_principle_holds<T: Scalar>(params: &ModelParams<T>, f_x: T, f_pi: T) -> bool {
    let (t, d) = trace_det_from_rule(params, f_x, f_pi);
    T::one() - t + d > lit(DEFAULT_BORDER_TOL)
}

/// Scalar negative feedback `−2A < BF < 0` for `y' = (A + BF) y` with `A > 0`.
pub fn is_negative_feedback_scalar<T: Scalar>(a: T, b: T, f: T) -> Result<bool> {
    if !(a.is_finite() && b.is_finite() && f.is_finite()) {
        return Err(Error::invalid("non-finite scalar feedback input"));
    }
    if a <= T::zero() {
        return Err(Error::OutOfScope(format!(
            "negative feedback is characterized for A > 0, got A = {a}"
        )));
    }
    let bf = b * f;
    Ok(-lit::<T>(2.0) * a < bf && bf < T::zero())
}

/// Inflation-response window `(1, 1 + 2/(ab))` of the scalar accelerationist model.
pub fn scalar_accelerationist_bounds<T: Scalar>(a: T, b: T) -> Result<(T, T)> {
    let ab = a * b;
    if !(ab.is_finite() && ab > T::zero()) {
        return Err(Error::invalid(format!("need a * b > 0, got {ab}")));
    }
    Ok((T::one(), T::one() + lit::<T>(2.0) / ab))
}
