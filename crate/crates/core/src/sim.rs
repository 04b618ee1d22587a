//! Closed-loop simulation, the minimal-state-variable solution of a
//! determinate Taylor rule, impulse responses, and the Hopf comparison
//! between the Ramsey and Taylor regimes.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{solve_sylvester, EigenReport, Mat2, Vec2};
use crate::model::{build_matrices, closed_loop, closed_loop_shock, ModelParams, StructuralMatrices, TaylorRule};
use crate::ramsey::{solve_ramsey, Preferences, RamseySolution};
use crate::scalar::{lit, Scalar};
use crate::stability::{classify_region, RegionLabel, DEFAULT_BORDER_TOL};

/// Time paths over `t = 0..=T`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory<T> {
    pub x: Vec<T>,
    pub pi: Vec<T>,
    pub i: Vec<T>,
    pub z: Vec<T>,
    pub u: Vec<T>,
    /// Costates on `x` and `π`, present for Ramsey paths.
    pub phi_x: Option<Vec<T>>,
    pub phi_pi: Option<Vec<T>>,
    /// Seed of the generated innovations, if any.
    pub seed: Option<u64>,
}

impl<T: Scalar> Trajectory<T> {
    pub fn zeros(horizon: usize) -> Self {
        let n = horizon + 1;
        Trajectory {
            x: vec![T::zero(); n],
            pi: vec![T::zero(); n],
            i: vec![T::zero(); n],
            z: vec![T::zero(); n],
            u: vec![T::zero(); n],
            phi_x: None,
            phi_pi: None,
            seed: None,
        }
    }

    fn with_capacity(horizon: usize) -> Self {
        let n = horizon + 1;
        Trajectory {
            x: Vec::with_capacity(n),
            pi: Vec::with_capacity(n),
            i: Vec::with_capacity(n),
            z: Vec::with_capacity(n),
            u: Vec::with_capacity(n),
            phi_x: None,
            phi_pi: None,
            seed: None,
        }
    }

    fn push(&mut self, y: Vec2<T>, i: T, z: Vec2<T>) {
        self.x.push(y.0[0]);
        self.pi.push(y.0[1]);
        self.i.push(i);
        self.z.push(z.0[0]);
        self.u.push(z.0[1]);
    }

    /// Number of periods, `T + 1`.
    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn horizon(&self) -> usize {
        self.len().saturating_sub(1)
    }

    pub fn y(&self, t: usize) -> Vec2<T> {
        Vec2::new(self.x[t], self.pi[t])
    }

    pub fn shock(&self, t: usize) -> Vec2<T> {
        Vec2::new(self.z[t], self.u[t])
    }

    pub fn is_finite(&self) -> bool {
        let base = [&self.x, &self.pi, &self.i, &self.z, &self.u]
            .iter()
            .all(|s| s.iter().all(|v| v.is_finite()));
        let mult = [&self.phi_x, &self.phi_pi]
            .iter()
            .all(|s| s.as_ref().is_none_or(|v| v.iter().all(|w| w.is_finite())));
        base && mult
    }

    fn attach_costates(&mut self, sol: &RamseySolution<T>) {
        let (px, pp): (Vec<T>, Vec<T>) = (0..self.len())
            .map(|t| {
                let l = sol.costate(&self.y(t), &self.shock(t));
                (l.0[0], l.0[1])
            })
            .unzip();
        self.phi_x = Some(px);
        self.phi_pi = Some(pp);
    }
}

/// Innovations `ε_{t+1}` added to the shock block between `t` and `t + 1`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Innovations<T> {
    #[default]
    None,
    /// `eps_z[t]`, `eps_u[t]` drive the step `t → t + 1`; each needs at least `T` entries.
    Explicit { eps_z: Vec<T>, eps_u: Vec<T> },
    /// I.i.d. mean-zero normal draws from a seeded ChaCha8 stream.
    Gaussian { seed: u64, sd_z: T, sd_u: T },
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ShockSpec<T> {
    pub z0: T,
    pub u0: T,
    #[serde(default)]
    pub innovations: Innovations<T>,
}

impl<T: Scalar> ShockSpec<T> {
    pub fn deterministic(z0: T, u0: T) -> Self {
        ShockSpec {
            z0,
            u0,
            innovations: Innovations::None,
        }
    }

    pub fn initial(&self) -> Vec2<T> {
        Vec2::new(self.z0, self.u0)
    }

    pub fn seed(&self) -> Option<u64> {
        match self.innovations {
            Innovations::Gaussian { seed, .. } => Some(seed),
            _ => None,
        }
    }

    /// The `horizon` innovation vectors, in order.
    pub fn draws(&self, horizon: usize) -> Result<Vec<Vec2<T>>> {
        if !(self.z0.is_finite() && self.u0.is_finite()) {
            return Err(Error::invalid("initial shocks must be finite"));
        }
        match &self.innovations {
            Innovations::None => Ok(vec![Vec2::zero(); horizon]),
            Innovations::Explicit { eps_z, eps_u } => {
                if eps_z.len() < horizon || eps_u.len() < horizon {
                    return Err(Error::invalid(format!(
                        "need {horizon} innovations, got {} and {}",
                        eps_z.len(),
                        eps_u.len()
                    )));
                }
                let out: Vec<_> = (0..horizon).map(|t| Vec2::new(eps_z[t], eps_u[t])).collect();
                if out.iter().all(|v| v.is_finite()) {
                    Ok(out)
                } else {
                    Err(Error::invalid("innovations must be finite"))
                }
            }
            Innovations::Gaussian { seed, sd_z, sd_u } => {
                let sd = |s: T| -> Result<Normal<f64>> {
                    Normal::new(0.0, s.to_f64_lossy())
                        .map_err(|e| Error::invalid(format!("innovation standard deviation: {e}")))
                };
                if *sd_z < T::zero() || *sd_u < T::zero() {
                    return Err(Error::invalid("standard deviations must be non-negative"));
                }
                let (nz, nu) = (sd(*sd_z)?, sd(*sd_u)?);
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                Ok((0..horizon)
                    .map(|_| {
                        let ez = nz.sample(&mut rng);
                        let eu = nu.sample(&mut rng);
                        Vec2::new(lit(ez), lit(eu))
                    })
                    .collect())
            }
        }
    }
}

/// Iterates `y_{t+1} = (A_yy + B_y F_y) y_t + (A_yz + B_y F_z) z_t`,
/// `z_{t+1} = A_zz z_t + ε_{t+1}`, recording `i_t = F_y y_t + F_z z_t`.
pub fn simulate_closed_loop<T: Scalar>(
    m: &StructuralMatrices<T>,
    rule: &TaylorRule<T>,
    y0: Vec2<T>,
    shocks: &ShockSpec<T>,
    horizon: usize,
) -> Result<Trajectory<T>> {
    if horizon < 1 {
        return Err(Error::invalid("horizon must be at least 1"));
    }
    rule.validate()?;
    if !y0.is_finite() {
        return Err(Error::invalid("initial state must be finite"));
    }
    let eps = shocks.draws(horizon)?;
    let acl = closed_loop(m, rule);
    let load = closed_loop_shock(m, rule);
    let (fy, fz) = (rule.f_y(), rule.f_shock());

    let mut out = Trajectory::with_capacity(horizon);
    out.seed = shocks.seed();
    let (mut y, mut z) = (y0, shocks.initial());
    for t in 0..=horizon {
        out.push(y, fy.dot(&y) + fz.dot(&z), z);
        if t < horizon {
            y = acl * y + load * z;
            z = m.a_zz * z + eps[t];
        }
    }
    Ok(out)
}

/// `N` with `y_t = N z_t` solving `N A_zz = (A_yy + B_y F_y) N + (A_yz + B_y F_z)`.
pub fn solve_msv<T: Scalar>(m: &StructuralMatrices<T>, rule: &TaylorRule<T>) -> Result<Mat2<T>> {
    rule.validate()?;
    let acl = closed_loop(m, rule);
    let load = closed_loop_shock(m, rule);
    solve_sylvester(&acl, &(-m.a_zz), &(-load))
}

/// `‖N A_zz − (A_yy + B_y F_y) N − (A_yz + B_y F_z)‖∞`.
pub fn msv_residual<T: Scalar>(m: &StructuralMatrices<T>, rule: &TaylorRule<T>, n: &Mat2<T>) -> T {
    (*n * m.a_zz - closed_loop(m, rule) * *n - closed_loop_shock(m, rule)).max_abs()
}

/// Ramsey path from the optimal anchor `y_0 = N z_0`, with costates attached.
/// Dynamics are the undiscounted structural ones.
pub fn ramsey_path<T: Scalar>(sol: &RamseySolution<T>, shocks: &ShockSpec<T>, horizon: usize) -> Result<Trajectory<T>> {
    let y0 = sol.anchor()? * shocks.initial();
    ramsey_path_from(sol, y0, shocks, horizon)
}

/// Ramsey feedback path from an arbitrary `y_0`, with costates attached.
pub fn ramsey_path_from<T: Scalar>(
    sol: &RamseySolution<T>,
    y0: Vec2<T>,
    shocks: &ShockSpec<T>,
    horizon: usize,
) -> Result<Trajectory<T>> {
    let m = build_matrices(&sol.params)?;
    let mut tr = simulate_closed_loop(&m, &sol.rule(), y0, shocks, horizon)?;
    tr.attach_costates(sol);
    Ok(tr)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShockKind {
    /// Demand shock `z`.
    Demand,
    /// Cost-push shock `u`.
    CostPush,
}

impl ShockKind {
    pub fn unit<T: Scalar>(&self, magnitude: T) -> Vec2<T> {
        match self {
            ShockKind::Demand => Vec2::new(magnitude, T::zero()),
            ShockKind::CostPush => Vec2::new(T::zero(), magnitude),
        }
    }
}

pub enum Regime<'a, T> {
    /// Optimal policy from the optimal initial anchor.
    RamseyAnchored(&'a RamseySolution<T>),
    /// Determinate Taylor rule, on its minimal-state-variable path.
    TaylorMsv {
        params: ModelParams<T>,
        rule: TaylorRule<T>,
    },
}

/// Deterministic response to a single initial shock.
pub fn impulse_response<T: Scalar>(
    regime: &Regime<'_, T>,
    shock: ShockKind,
    magnitude: T,
    horizon: usize,
) -> Result<Trajectory<T>> {
    if horizon < 1 {
        return Err(Error::invalid("horizon must be at least 1"));
    }
    let z0 = shock.unit(magnitude);
    let spec = ShockSpec::deterministic(z0.0[0], z0.0[1]);
    match regime {
        Regime::RamseyAnchored(sol) => ramsey_path(sol, &spec, horizon),
        Regime::TaylorMsv { params, rule } => {
            let m = build_matrices(params)?;
            let n = solve_msv(&m, rule)?;
            msv_path(&m, rule, &n, &spec, horizon)
        }
    }
}

/// Path `y_t = N z_t` with the shock block iterated forward.
pub fn msv_path<T: Scalar>(
    m: &StructuralMatrices<T>,
    rule: &TaylorRule<T>,
    n: &Mat2<T>,
    shocks: &ShockSpec<T>,
    horizon: usize,
) -> Result<Trajectory<T>> {
    let eps = shocks.draws(horizon)?;
    let (fy, fz) = (rule.f_y(), rule.f_shock());
    let mut out = Trajectory::with_capacity(horizon);
    out.seed = shocks.seed();
    let mut z = shocks.initial();
    for t in 0..=horizon {
        let y = *n * z;
        out.push(y, fy.dot(&y) + fz.dot(&z), z);
        if t < horizon {
            z = m.a_zz * z + eps[t];
        }
    }
    Ok(out)
}

/// One side of the regime comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegimeSide<T> {
    pub f_x: T,
    pub f_pi: T,
    pub trace: T,
    pub det: T,
    pub label: RegionLabel,
    pub eigen: EigenReport<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegimeComparison<T> {
    pub ramsey: RegimeSide<T>,
    /// Moduli of the √β-scaled Ramsey closed loop.
    pub ramsey_discounted_moduli: (T, T),
    pub taylor: RegimeSide<T>,
    /// Fraction `s` along `F_ramsey + s (F_taylor − F_ramsey)` where `D = 1`.
    pub crossing_fraction: Option<T>,
    /// Gains `(F_x, F_π)` at the crossing.
    pub crossing: Option<(T, T)>,
    pub crossing_label: Option<RegionLabel>,
    pub warnings: Vec<String>,
}

fn side<T: Scalar>(params: &ModelParams<T>, f_x: T, f_pi: T) -> RegimeSide<T> {
    let c = classify_region(params, f_x, f_pi, lit(DEFAULT_BORDER_TOL));
    RegimeSide {
        f_x,
        f_pi,
        trace: c.eigen.trace,
        det: c.eigen.det,
        label: c.label,
        eigen: c.eigen,
    }
}

/// Compares Ramsey gains for `prefs` with a Taylor rule in the same model,
/// and locates where the determinant crosses 1 on the segment between them.
pub fn hopf_demo<T: Scalar>(
    params: &ModelParams<T>,
    prefs: &Preferences<T>,
    nk_rule: &TaylorRule<T>,
) -> Result<RegimeComparison<T>> {
    nk_rule.validate()?;
    let sol = solve_ramsey(params, prefs)?;
    let mut warnings = Vec::new();
    let (one, two) = (T::one(), lit::<T>(2.0));
    if !(nk_rule.f_pi > one && nk_rule.f_pi < two && nk_rule.f_x > T::zero() && nk_rule.f_x < one) {
        warnings.push(format!(
            "rule (F_pi = {}, F_x = {}) lies outside the plausible box 1 < F_pi < 2, 0 < F_x < 1",
            nk_rule.f_pi, nk_rule.f_x
        ));
    }
    let ramsey = side(params, sol.f_y.0[0], sol.f_y.0[1]);
    let taylor = side(params, nk_rule.f_x, nk_rule.f_pi);
    if ramsey.eigen.spectral_radius() >= one {
        warnings.push("Ramsey closed loop is not a sink".into());
    }
    if !(taylor.eigen.is_complex() && taylor.eigen.modulus1 > one) {
        warnings.push(format!("Taylor rule is not a complex source ({})", taylor.label));
    }

    let (dr, dn) = (ramsey.det, taylor.det);
    let (crossing_fraction, crossing, crossing_label) = if (dr - one) * (dn - one) < T::zero() {
        let s = (one - dr) / (dn - dr);
        let fx = ramsey.f_x + s * (taylor.f_x - ramsey.f_x);
        let fp = ramsey.f_pi + s * (taylor.f_pi - ramsey.f_pi);
        let label = classify_region(params, fx, fp, lit(1e-7)).label;
        (Some(s), Some((fx, fp)), Some(label))
    } else {
        warnings.push("determinant does not cross 1 between the two rules".into());
        (None, None, None)
    };

    Ok(RegimeComparison {
        ramsey,
        ramsey_discounted_moduli: sol.eigen_discounted.sorted_moduli(),
        taylor,
        crossing_fraction,
        crossing,
        crossing_label,
        warnings,
    })
}
