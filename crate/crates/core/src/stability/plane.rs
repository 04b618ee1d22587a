//! The affine map between Taylor-rule gains `(F_x, F_π)` and the closed-loop
//! trace/determinant, and the bifurcation borders it induces.
//!
//! For either variant, with `T_A`, `D_A` the open-loop trace and determinant:
//!
//! ```text
//! T = T_A + γ F_x
//! D = D_A + (γ/β) F_x + (γκ/β) F_π
//! ```

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{eig_from_trace_det, EigenReport};
use crate::model::ModelParams;
use crate::scalar::{lit, Scalar};

pub fn trace_det_from_rule<T: Scalar>(params: &ModelParams<T>, f_x: T, f_pi: T) -> (T, T) {
    let g = params.gamma;
    let b = params.beta;
    let t = params.open_trace() + g * f_x;
    let d = params.open_det() + g / b * f_x + g * params.kappa / b * f_pi;
    (t, d)
}

fn require_controllable<T: Scalar>(params: &ModelParams<T>) -> Result<()> {
    if params.gamma == T::zero() || params.kappa == T::zero() {
        return Err(Error::Uncontrollable(format!(
            "gamma * kappa = 0 (gamma = {}, kappa = {})",
            params.gamma, params.kappa
        )));
    }
    Ok(())
}

/// Inverse of [`trace_det_from_rule`]; returns `(F_x, F_π)`.
pub fn rule_from_trace_det<T: Scalar>(params: &ModelParams<T>, t: T, d: T) -> Result<(T, T)> {
    require_controllable(params)?;
    let g = params.gamma;
    let b = params.beta;
    let f_x = (t - params.open_trace()) / g;
    let f_pi = b / (g * params.kappa) * (d - params.open_det() - g / b * f_x);
    Ok((f_x, f_pi))
}

/// `D = 1` line, as `F_x(F_π)`. Crossing it with complex eigenvalues is a Hopf bifurcation.
pub fn hopf_border<T: Scalar>(params: &ModelParams<T>, f_pi: T) -> T {
    params.beta * (T::one() - params.open_det()) / params.gamma - params.kappa * f_pi
}

/// `p(1) = 0` line, as `F_π(F_x)`. An eigenvalue crosses `+1`.
pub fn saddle_node_border<T: Scalar>(params: &ModelParams<T>, f_x: T) -> T {
    let g = params.gamma;
    let b = params.beta;
    let lhs = params.open_trace() - T::one() - params.open_det() + g * f_x * (T::one() - b.recip());
    lhs * b / (g * params.kappa)
}

/// `p(−1) = 0` line, as `F_x(F_π)`. An eigenvalue crosses `−1`.
pub fn flip_border<T: Scalar>(params: &ModelParams<T>, f_pi: T) -> T {
    let b = params.beta;
    let one = T::one();
    -b * (one + params.open_trace() + params.open_det()) / (params.gamma * (one + b)) - params.kappa * f_pi / (one + b)
}

/// `Δ = 0` curve, as `F_π(F_x)`.
///
/// The determinant is affine in `F_π` while the trace does not depend on it,
/// so for `γκ ≠ 0` there is exactly one solution. Empty when `γκ = 0`.
pub fn discriminant_border<T: Scalar>(params: &ModelParams<T>, f_x: T) -> Vec<T> {
    let g = params.gamma;
    let k = params.kappa;
    if g * k == T::zero() {
        return Vec::new();
    }
    let b = params.beta;
    let t = params.open_trace() + g * f_x;
    let d_needed = t * t / lit(4.0);
    vec![b / (g * k) * (d_needed - params.open_det() - g / b * f_x)]
}

/// `Δ = 0` curve, as `F_x(F_π)`: a quadratic in `F_x` with zero, one or two roots
/// (ascending).
pub fn discriminant_border_fx<T: Scalar>(params: &ModelParams<T>, f_pi: T) -> Vec<T> {
    let g = params.gamma;
    if g == T::zero() {
        return Vec::new();
    }
    let b = params.beta;
    let ta = params.open_trace();
    let two = lit::<T>(2.0);
    let four = lit::<T>(4.0);
    // (T_A + γF)²/4 − D_A − γF/β − γκF_π/β = 0
    let qa = g * g / four;
    let qb = ta * g / two - g / b;
    let qc = ta * ta / four - params.open_det() - g * params.kappa * f_pi / b;
    let disc = qb * qb - four * qa * qc;
    if disc < T::zero() {
        return Vec::new();
    }
    if disc == T::zero() {
        return vec![-qb / (two * qa)];
    }
    let sq = disc.sqrt();
    let q = -(qb + qb.signum() * sq) / two;
    let (r1, r2) = (q / qa, qc / q);
    vec![r1.min(r2), r1.max(r2)]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Vertex<T> {
    pub name: &'static str,
    pub lambda1: Complex<T>,
    pub lambda2: Complex<T>,
    pub trace: T,
    pub det: T,
    pub f_pi: T,
    pub f_x: T,
}

/// Corners of the stability triangle, its centre, and the laissez-faire origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TriangleVertices<T> {
    /// `λ1 = λ2 = 1`: saddle-node meets Hopf.
    pub a: Vertex<T>,
    /// `λ1 = λ2 = −1`: flip meets Hopf.
    pub b: Vertex<T>,
    /// `λ1 = −1, λ2 = 1`: saddle-node meets flip.
    pub c: Vertex<T>,
    /// `λ1 = λ2 = 0`.
    pub omega: Vertex<T>,
    /// Laissez-faire, `F = 0`.
    pub origin: Vertex<T>,
}

impl<T: Scalar> TriangleVertices<T> {
    pub fn rows(&self) -> [Vertex<T>; 5] {
        [self.a, self.b, self.c, self.omega, self.origin]
    }
}

fn vertex<T: Scalar>(params: &ModelParams<T>, name: &'static str, f_x: T, f_pi: T) -> Vertex<T> {
    let (t, d) = trace_det_from_rule(params, f_x, f_pi);
    let e: EigenReport<T> = eig_from_trace_det(t, d);
    Vertex {
        name,
        lambda1: e.lambda1,
        lambda2: e.lambda2,
        trace: t,
        det: d,
        f_pi,
        f_x,
    }
}

pub fn triangle_vertices<T: Scalar>(params: &ModelParams<T>) -> Result<TriangleVertices<T>> {
    require_controllable(params)?;
    let one = T::one();
    let zero = T::zero();
    let at = |name, t: T, d: T| -> Result<Vertex<T>> {
        let (f_x, f_pi) = rule_from_trace_det(params, t, d)?;
        Ok(vertex(params, name, f_x, f_pi))
    };
    Ok(TriangleVertices {
        a: at("A", lit(2.0), one)?,
        b: at("B", lit(-2.0), one)?,
        c: at("C", zero, -one)?,
        omega: at("Omega", zero, zero)?,
        origin: vertex(params, "O", zero, zero),
    })
}
