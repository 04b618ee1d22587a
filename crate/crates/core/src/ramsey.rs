//! Ramsey policy under commitment, solved as a discounted augmented LQR.
//!
//! The endogenous block is handled by a Riccati equation on the √β-scaled
//! system `(√β A_yy, √β B_y)`. The shock block enters through a Sylvester
//! equation for the cross term `P_z` of the value function, and the optimal
//! initial jump of the forward-looking variables is `y_0 = −P_y⁻¹ P_z z_0`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eig2, solve_dare, solve_discrete_sylvester, DareOptions, EigenReport, Mat2, Vec2};
use crate::model::{build_matrices, closed_loop, kalman_controllability_rank, ModelParams, TaylorRule, Variant};
use crate::scalar::{lit, Scalar};
use crate::sim::Trajectory;
use crate::stability::{classify_region, DEFAULT_BORDER_TOL};

/// Weights of the period loss `(μ_π π² + μ_x x² + μ_i i²) / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Preferences<T> {
    pub mu_pi: T,
    pub mu_x: T,
    pub mu_i: T,
}

impl<T: Scalar> Preferences<T> {
    pub fn new(mu_pi: T, mu_x: T, mu_i: T) -> Result<Self> {
        let p = Preferences { mu_pi, mu_x, mu_i };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.mu_pi, self.mu_x, self.mu_i];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("preference weights must be finite"));
        }
        if self.mu_pi < T::zero() || self.mu_x < T::zero() {
            return Err(Error::invalid("mu_pi and mu_x must be non-negative"));
        }
        if !(self.mu_i > T::zero()) {
            return Err(Error::invalid(format!(
                "mu_i must be strictly positive, got {}",
                self.mu_i
            )));
        }
        Ok(())
    }

    pub fn scaled(&self, c: T) -> Self {
        Preferences {
            mu_pi: self.mu_pi * c,
            mu_x: self.mu_x * c,
            mu_i: self.mu_i * c,
        }
    }

    /// State weight `diag(μ_x, μ_π)`, ordered like `y = (x, π)`.
    pub fn q(&self) -> Mat2<T> {
        Mat2::diag(self.mu_x, self.mu_pi)
    }
}

/// How the shock block is discounted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShockConvention {
    /// Only `A_yy`, `B_y` carry the √β factor, and
    /// `F_z = +(R + B̃ᵀPB̃)⁻¹ B̃ᵀ(P A_yz + P_z A_zz)`. Reproduces the published tables.
    #[default]
    AppendixA,
    /// √β applied consistently to the shock terms, with
    /// `F_z = −√β (R + B̃ᵀPB̃)⁻¹ B̃ᵀ(P A_yz + P_z A_zz)`. This is the exact optimum
    /// of the discounted problem and satisfies its first-order conditions.
    Discounted,
}

impl fmt::Display for ShockConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ShockConvention::AppendixA => "appendix-a",
            ShockConvention::Discounted => "discounted",
        })
    }
}

impl FromStr for ShockConvention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "appendix-a" | "appendixa" => Ok(ShockConvention::AppendixA),
            "discounted" => Ok(ShockConvention::Discounted),
            other => Err(Error::invalid(format!("unknown shock convention '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct RamseyOptions<T> {
    pub convention: ShockConvention,
    pub dare: DareOptions<T>,
    /// `P_y` counts as singular when `|det P_y| ≤ anchor_tol · ‖P_y‖∞²`.
    pub anchor_tol: T,
}

impl<T: Scalar> Default for RamseyOptions<T> {
    fn default() -> Self {
        RamseyOptions {
            convention: ShockConvention::AppendixA,
            dare: DareOptions::default(),
            anchor_tol: lit(1e-12),
        }
    }
}

impl<T: Scalar> RamseyOptions<T> {
    pub fn with_convention(convention: ShockConvention) -> Self {
        RamseyOptions {
            convention,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct RamseySolution<T> {
    pub params: ModelParams<T>,
    pub prefs: Preferences<T>,
    pub convention: ShockConvention,
    pub p_y: Mat2<T>,
    pub p_z: Mat2<T>,
    /// `(F_x, F_π)`.
    pub f_y: Vec2<T>,
    /// `(F_z, F_u)`.
    pub f_z: Vec2<T>,
    /// `−P_y⁻¹ P_z`, absent when `P_y` is singular.
    pub n: Option<Mat2<T>>,
    /// Spectrum of the √β-scaled closed loop `√β (A_yy + B_y F_y)`.
    pub eigen_discounted: EigenReport<T>,
    /// Spectrum of `A_yy + B_y F_y`.
    pub eigen: EigenReport<T>,
    pub dare_iterations: usize,
    pub riccati_residual: T,
    pub sylvester_residual: T,
}

impl<T: Scalar> RamseySolution<T> {
    pub fn rule(&self) -> TaylorRule<T> {
        TaylorRule {
            f_x: self.f_y.0[0],
            f_pi: self.f_y.0[1],
            f_z: self.f_z.0[0],
            f_u: self.f_z.0[1],
        }
    }

    pub fn anchor(&self) -> Result<Mat2<T>> {
        self.n.ok_or_else(|| {
            Error::AnchorUnavailable(format!("P_y is singular (det {:e})", self.p_y.det().to_f64_lossy()))
        })
    }

    /// Costates `λ = P_y y + P_z z`.
    pub fn costate(&self, y: &Vec2<T>, z: &Vec2<T>) -> Vec2<T> {
        self.p_y * *y + self.p_z * *z
    }
}

pub fn solve_ramsey<T: Scalar>(params: &ModelParams<T>, prefs: &Preferences<T>) -> Result<RamseySolution<T>> {
    solve_ramsey_with(params, prefs, &RamseyOptions::default())
}

pub fn solve_ramsey_with<T: Scalar>(
    params: &ModelParams<T>,
    prefs: &Preferences<T>,
    opts: &RamseyOptions<T>,
) -> Result<RamseySolution<T>> {
    prefs.validate()?;
    let m = build_matrices(params)?;
    let rank = kalman_controllability_rank(&m.a_yy, &m.b_y);
    if rank < 2 {
        return Err(Error::Uncontrollable(format!("controllability rank {rank} < 2")));
    }

    let s = params.beta.sqrt();
    let a = m.a_yy.scale(s);
    let b = m.b_y.scale(s);
    let r = prefs.mu_i;
    let dare = solve_dare(&a, &b, &prefs.q(), r, &opts.dare)?;
    let p = dare.p;
    let f_y = dare.gain;
    let a_s = (a + b.outer(&f_y)).transpose();
    let b_s = -m.a_zz;

    let (lhs, rhs) = match opts.convention {
        ShockConvention::AppendixA => (a_s, a_s * p * m.a_yz),
        ShockConvention::Discounted => (a_s.scale(s), a_s.scale(s) * p * m.a_yz),
    };
    let p_z = solve_discrete_sylvester(&lhs, &b_s, &rhs)?;
    let sylvester_residual = (lhs * p_z * b_s + p_z - rhs).max_abs();

    let denom = r + b.dot(&(p * b));
    let loading = (p * m.a_yz + p_z * m.a_zz).left_mul(&b);
    let f_z = match opts.convention {
        ShockConvention::AppendixA => loading.scale(denom.recip()),
        ShockConvention::Discounted => loading.scale(-s / denom),
    };

    let det = p.det();
    let n = (det.abs() > opts.anchor_tol * p.max_abs() * p.max_abs()).then(|| {
        let adj = Mat2::new(p.get(1, 1), -p.get(0, 1), -p.get(1, 0), p.get(0, 0));
        -(adj * p_z).scale(det.recip())
    });

    let rule = TaylorRule::new(f_y.0[0], f_y.0[1]);
    Ok(RamseySolution {
        params: *params,
        prefs: *prefs,
        convention: opts.convention,
        p_y: p,
        p_z,
        f_y,
        f_z,
        n,
        eigen_discounted: eig2(&(a + b.outer(&f_y)))?,
        eigen: eig2(&closed_loop(&m, &rule))?,
        dare_iterations: dare.iterations,
        riccati_residual: dare.residual,
        sylvester_residual,
    })
}

/// Optimal initial `(x0, π0) = N (z0, u0)`.
pub fn initial_anchor<T: Scalar>(sol: &RamseySolution<T>, z0: T, u0: T) -> Result<(T, T)> {
    let y = sol.anchor()? * Vec2::new(z0, u0);
    Ok((y.0[0], y.0[1]))
}

/// Discounted loss `Σ_{t=0}^{T} βᵗ (μ_π π_t² + μ_x x_t² + μ_i i_t²) / 2`.
pub fn loss_value<T: Scalar>(traj: &Trajectory<T>, prefs: &Preferences<T>, beta: T) -> Result<T> {
    if traj.horizon() < 3 {
        return Err(Error::invalid(format!(
            "loss needs a horizon of at least 3, got {}",
            traj.horizon()
        )));
    }
    if !(beta > T::zero() && beta <= T::one()) {
        return Err(Error::invalid("beta must lie in (0, 1]"));
    }
    let half = lit::<T>(0.5);
    let mut disc = T::one();
    let mut total = T::zero();
    for t in 0..traj.len() {
        let period = prefs.mu_pi * traj.pi[t] * traj.pi[t]
            + prefs.mu_x * traj.x[t] * traj.x[t]
            + prefs.mu_i * traj.i[t] * traj.i[t];
        total += disc * half * period;
        disc *= beta;
    }
    Ok(total)
}

/// Largest first-order-condition violations along a path with costates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FocReport<T> {
    /// `max |Q y_t + β A_yyᵀ λ_{t+1} − λ_t|` over `t < T`.
    pub state: T,
    /// `max |μ_i i_t + β B_yᵀ λ_{t+1}|` over `t < T`.
    pub instrument: T,
    /// Residuals of the inflation, output-gap and instrument conditions written
    /// with the structural multipliers `ψ_t = β G⁻ᵀ λ_{t+1}`,
    /// `G = [[1, γ], [0, β]]`. Only defined for the Text variant.
    pub structural: Option<T>,
    /// `|λ_0|`.
    pub transversality: T,
}

impl<T: Scalar> FocReport<T> {
    pub fn max_residual(&self) -> T {
        self.state
            .max(self.instrument)
            .max(self.structural.unwrap_or(T::zero()))
    }
}

/// Evaluates the Ramsey first-order conditions along `traj`, which must carry
/// costates (`phi_x`, `phi_pi`).
pub fn foc_residuals<T: Scalar>(
    params: &ModelParams<T>,
    prefs: &Preferences<T>,
    traj: &Trajectory<T>,
) -> Result<FocReport<T>> {
    let m = build_matrices(params)?;
    let (phi_x, phi_pi) = match (&traj.phi_x, &traj.phi_pi) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::invalid("trajectory carries no multipliers")),
    };
    let len = traj.len();
    if len < 2 {
        return Err(Error::invalid("need at least two periods"));
    }
    let beta = params.beta;
    let lam = |t: usize| Vec2::new(phi_x[t], phi_pi[t]);
    let y = |t: usize| Vec2::new(traj.x[t], traj.pi[t]);
    let q = prefs.q();

    let mut state = T::zero();
    let mut instrument = T::zero();
    for t in 0..len - 1 {
        let next = lam(t + 1);
        let r = q * y(t) + m.a_yy.left_mul(&next).scale(beta) - lam(t);
        state = state.max(r.max_abs());
        let ri = prefs.mu_i * traj.i[t] + beta * m.b_y.dot(&next);
        instrument = instrument.max(ri.abs());
    }

    let structural = match (params.variant, params.gamma != T::zero()) {
        (Variant::Text, true) => {
            let g = params.gamma;
            let k = params.kappa;
            let gt_inv = Mat2::new(T::one(), g, T::zero(), beta).transpose().inverse()?;
            let psi = |t: usize| (gt_inv * lam(t + 1)).scale(beta);
            let mut worst = T::zero();
            let mut prev = Vec2::zero();
            for t in 0..len - 1 {
                let cur = psi(t);
                let (px, pp) = (cur.0[0], cur.0[1]);
                let (qx, qp) = (prev.0[0], prev.0[1]);
                let r1 = prefs.mu_pi * traj.pi[t] + pp - qp - g / beta * qx;
                let r2 = prefs.mu_x * traj.x[t] - k * pp + px - qx / beta;
                let r3 = prefs.mu_i * traj.i[t] + g * px;
                worst = worst.max(r1.abs()).max(r2.abs()).max(r3.abs());
                prev = cur;
            }
            Some(worst)
        }
        _ => None,
    };

    Ok(FocReport {
        state,
        instrument,
        structural,
        transversality: lam(0).max_abs(),
    })
}

/// The twelve weight settings of the published LQR table, with their row labels.
pub fn table2_weights<T: Scalar>() -> Vec<(&'static str, Preferences<T>)> {
    let tiny = 1e-7;
    [
        ("Inflation", 1.0, 0.0, tiny),
        ("Inflation output gap", 4.0, 1.0, tiny),
        ("Inflation output gap", 1.0, 1.0, tiny),
        ("Inflation output gap", 0.25, 1.0, tiny),
        ("Output gap", 0.0, 1.0, tiny),
        ("Output gap interest", 0.0, 4.0, 1.0),
        ("Output gap interest", 0.0, 1.0, 1.0),
        ("Output gap interest", 0.0, 0.25, 1.0),
        ("Interest rate", 0.0, 0.0, 1.0),
        ("Inflation interest", 0.25, 0.0, 1.0),
        ("Inflation interest", 1.0, 0.0, 1.0),
        ("Inflation interest", 4.0, 0.0, 1.0),
    ]
    .into_iter()
    .map(|(label, p, x, i)| {
        (
            label,
            Preferences {
                mu_pi: lit(p),
                mu_x: lit(x),
                mu_i: lit(i),
            },
        )
    })
    .collect()
}

/// Cartesian product of weight values; every combination must be valid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightGrid<T> {
    pub mu_pi: Vec<T>,
    pub mu_x: Vec<T>,
    pub mu_i: Vec<T>,
}

impl<T: Scalar> WeightGrid<T> {
    pub fn combinations(&self) -> Result<Vec<Preferences<T>>> {
        if self.mu_pi.is_empty() || self.mu_x.is_empty() || self.mu_i.is_empty() {
            return Err(Error::invalid("weight grid has an empty axis"));
        }
        let mut out = Vec::new();
        for &mu_pi in &self.mu_pi {
            for &mu_x in &self.mu_x {
                for &mu_i in &self.mu_i {
                    out.push(Preferences::new(mu_pi, mu_x, mu_i)?);
                }
            }
        }
        Ok(out)
    }
}

/// One row of an LQR sweep, in the layout of the published table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LqrRowValues<T> {
    /// Discounted closed-loop moduli, ascending.
    pub modulus1: T,
    pub modulus2: T,
    pub f_pi: T,
    pub f_x: T,
    pub f_z: T,
    pub f_u: T,
    /// `(F_x, F_π)` lies inside the stability triangle of the same variant.
    pub in_triangle: bool,
    pub anchor: Option<Mat2<T>>,
    pub riccati_residual: T,
    pub sylvester_residual: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LqrRow<T> {
    pub prefs: Preferences<T>,
    pub outcome: std::result::Result<LqrRowValues<T>, Error>,
}

fn row_values<T: Scalar>(params: &ModelParams<T>, sol: &RamseySolution<T>) -> LqrRowValues<T> {
    let (m1, m2) = sol.eigen_discounted.sorted_moduli();
    let class = classify_region(params, sol.f_y.0[0], sol.f_y.0[1], lit(DEFAULT_BORDER_TOL));
    LqrRowValues {
        modulus1: m1,
        modulus2: m2,
        f_pi: sol.f_y.0[1],
        f_x: sol.f_y.0[0],
        f_z: sol.f_z.0[0],
        f_u: sol.f_z.0[1],
        in_triangle: class.stable_count == 2,
        anchor: sol.n,
        riccati_residual: sol.riccati_residual,
        sylvester_residual: sol.sylvester_residual,
    }
}

/// Solves every weight setting; failures are recorded per row. Order follows `grid`.
pub fn lqr_triangle_sweep<T: Scalar>(
    params: &ModelParams<T>,
    grid: &[Preferences<T>],
    opts: &RamseyOptions<T>,
) -> Vec<LqrRow<T>> {
    grid.par_iter()
        .map(|prefs| LqrRow {
            prefs: *prefs,
            outcome: solve_ramsey_with(params, prefs, opts).map(|sol| row_values(params, &sol)),
        })
        .collect()
}
