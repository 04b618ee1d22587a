//! The four-equation New-Keynesian model as an augmented state-space system.
//!
//! Endogenous state `y = (x, π)` (output gap, inflation), instrument `i`,
//! exogenous shocks `z = (z, u)` (demand, cost-push):
//!
//! ```text
//! y_{t+1} = A_yy y_t + B_y i_t + A_yz z_t
//! z_{t+1} = A_zz z_t + ε_{t+1}
//! ```

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Mat2, Vec2};
use crate::scalar::{lit, Scalar};

/// Sign of the `(1,1)` entry of `A_yy`.
///
/// `Text` is `1 + γκ/β`, consistent with the structural equations.
/// `AppendixA` is `1 − γκ/β`, the matrix the published LQR tables were computed with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    #[default]
    Text,
    AppendixA,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Text => "text",
            Variant::AppendixA => "appendix-a",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "text" => Ok(Variant::Text),
            "appendix-a" | "appendixa" => Ok(Variant::AppendixA),
            other => Err(Error::invalid(format!("unknown variant '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams<T> {
    /// Intertemporal elasticity of substitution. Negative values give the
    /// alternative transmission mechanism.
    pub gamma: T,
    /// Slope of the Phillips curve.
    pub kappa: T,
    pub beta: T,
    pub rho_z: T,
    pub rho_u: T,
    #[serde(default)]
    pub variant: Variant,
}

impl<T: Scalar> ModelParams<T> {
    /// γ = 0.5, κ = 0.1, β = 0.99, ρ_z = ρ_u = 0.9, Text variant.
    pub fn baseline() -> Self {
        ModelParams {
            gamma: lit(0.5),
            kappa: lit(0.1),
            beta: lit(0.99),
            rho_z: lit(0.9),
            rho_u: lit(0.9),
            variant: Variant::Text,
        }
    }

    pub fn with_variant(self, variant: Variant) -> Self {
        ModelParams { variant, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.gamma, self.kappa, self.beta, self.rho_z, self.rho_u];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("model parameters must be finite"));
        }
        if !(self.beta > T::zero() && self.beta <= T::one()) {
            return Err(Error::invalid(format!("beta must lie in (0, 1], got {}", self.beta)));
        }
        if self.rho_z.abs() >= T::one() || self.rho_u.abs() >= T::one() {
            return Err(Error::invalid("shock persistence must satisfy |rho| < 1"));
        }
        Ok(())
    }

    /// σ = 1/γ, undefined for γ = 0.
    pub fn sigma(&self) -> Option<T> {
        (self.gamma != T::zero()).then(|| self.gamma.recip())
    }

    /// Open-loop trace `T(A_yy)`.
    pub fn open_trace(&self) -> T {
        T::one() + self.sign() * self.gamma * self.kappa / self.beta + self.beta.recip()
    }

    /// Open-loop determinant `D(A_yy)`; `1/β` for the Text variant.
    pub fn open_det(&self) -> T {
        let b = self.beta;
        match self.variant {
            Variant::Text => b.recip(),
            Variant::AppendixA => b.recip() - lit::<T>(2.0) * self.gamma * self.kappa / (b * b),
        }
    }

    fn sign(&self) -> T {
        match self.variant {
            Variant::Text => T::one(),
            Variant::AppendixA => -T::one(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StructuralMatrices<T> {
    pub a_yy: Mat2<T>,
    pub b_y: Vec2<T>,
    pub a_yz: Mat2<T>,
    pub a_zz: Mat2<T>,
}

pub fn build_matrices<T: Scalar>(params: &ModelParams<T>) -> Result<StructuralMatrices<T>> {
    params.validate()?;
    let ModelParams {
        gamma: g,
        kappa: k,
        beta: b,
        ..
    } = *params;
    let one = T::one();
    Ok(StructuralMatrices {
        a_yy: Mat2::new(one + params.sign() * g * k / b, -g / b, -k / b, one / b),
        b_y: Vec2::new(g, T::zero()),
        a_yz: Mat2::new(-one, g / b, T::zero(), -one / b),
        a_zz: Mat2::diag(params.rho_z, params.rho_u),
    })
}

/// Rank of `[B, AB]`.
pub fn kalman_controllability_rank<T: Scalar>(a: &Mat2<T>, b: &Vec2<T>) -> usize {
    linalg::controllability_rank(a, b)
}

/// `i_t = F_x x_t + F_π π_t + F_z z_t + F_u u_t`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TaylorRule<T> {
    pub f_x: T,
    pub f_pi: T,
    #[serde(default)]
    pub f_z: T,
    #[serde(default)]
    pub f_u: T,
}

impl<T: Scalar> TaylorRule<T> {
    pub fn new(f_x: T, f_pi: T) -> Self {
        TaylorRule {
            f_x,
            f_pi,
            f_z: T::zero(),
            f_u: T::zero(),
        }
    }

    pub fn with_shocks(self, f_z: T, f_u: T) -> Self {
        TaylorRule { f_z, f_u, ..self }
    }

    pub fn f_y(&self) -> Vec2<T> {
        Vec2::new(self.f_x, self.f_pi)
    }

    pub fn f_shock(&self) -> Vec2<T> {
        Vec2::new(self.f_z, self.f_u)
    }

    pub fn validate(&self) -> Result<()> {
        if [self.f_x, self.f_pi, self.f_z, self.f_u].iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(Error::invalid("rule coefficients must be finite"))
        }
    }
}

/// `A_yy + B_y F_y`.
pub fn closed_loop<T: Scalar>(m: &StructuralMatrices<T>, rule: &TaylorRule<T>) -> Mat2<T> {
    m.a_yy + m.b_y.outer(&rule.f_y())
}

/// `A_yz + B_y F_z`, the shock loading under the rule.
pub fn closed_loop_shock<T: Scalar>(m: &StructuralMatrices<T>, rule: &TaylorRule<T>) -> Mat2<T> {
    m.a_yz + m.b_y.outer(&rule.f_shock())
}

/// Rational function in `s`, coefficients from the highest power down.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransferFunction<T> {
    pub numerator: Vec<T>,
    pub denominator: Vec<T>,
}

fn horner<T: Scalar>(c: &[T], s: T) -> T {
    c.iter().fold(T::zero(), |acc, &v| acc * s + v)
}

impl<T: Scalar> TransferFunction<T> {
    pub fn eval(&self, s: T) -> Result<T> {
        let den = horner(&self.denominator, s);
        let scale = self.denominator.iter().fold(T::one(), |acc, v| acc.max(v.abs())) * T::one().max(s.abs() * s.abs());
        if den.abs() <= lit::<T>(1e-14) * scale {
            return Err(Error::Pole(s.to_f64_lossy()));
        }
        Ok(horner(&self.numerator, s) / den)
    }
}

/// Transfer function from the instrument to `−(x + π)`:
/// `(γs − γ(1+κ)/β) / (s² − T_A s + D_A)`.
pub fn transfer_function<T: Scalar>(params: &ModelParams<T>) -> Result<TransferFunction<T>> {
    params.validate()?;
    let g = params.gamma;
    Ok(TransferFunction {
        numerator: vec![g, -g * (T::one() + params.kappa) / params.beta],
        denominator: vec![T::one(), -params.open_trace(), params.open_det()],
    })
}
