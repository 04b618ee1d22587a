use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::scalar::Scalar;

use super::plane::{discriminant_border, flip_border, hopf_border, saddle_node_border};
use super::region::{classify_region, RegionClass};

/// Closed interval sampled at `n ≥ 2` evenly spaced points, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridAxis<T> {
    pub lo: T,
    pub hi: T,
    pub n: usize,
}

impl<T: Scalar> GridAxis<T> {
    pub fn new(lo: T, hi: T, n: usize) -> Result<Self> {
        let axis = GridAxis { lo, hi, n };
        axis.validate()?;
        Ok(axis)
    }

    /// Axis with spacing `step`; `hi` is included when it falls on the lattice.
    pub fn from_step(lo: T, hi: T, step: T) -> Result<Self> {
        if !(step.is_finite() && step > T::zero()) {
            return Err(Error::invalid("grid step must be positive"));
        }
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::invalid(format!("empty range [{lo}, {hi}]")));
        }
        let span = (hi - lo) / step;
        // tolerate rounding in the span so [−1, 1] at step 1 gives three points
        let cells = (span + T::from_f64(1e-9).unwrap()).floor();
        let n = cells.to_usize().unwrap_or(0) + 1;
        GridAxis::new(lo, lo + step * cells, n)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lo.is_finite() && self.hi.is_finite() && self.lo < self.hi) {
            return Err(Error::invalid(format!("empty range [{}, {}]", self.lo, self.hi)));
        }
        if self.n < 2 {
            return Err(Error::invalid(format!(
                "grid resolution must be at least 2, got {}",
                self.n
            )));
        }
        Ok(())
    }

    pub fn point(&self, k: usize) -> T {
        if k + 1 == self.n {
            return self.hi;
        }
        let frac = T::from_usize(k).unwrap() / T::from_usize(self.n - 1).unwrap();
        self.lo + (self.hi - self.lo) * frac
    }

    pub fn points(&self) -> impl Iterator<Item = T> + '_ {
        (0..self.n).map(|k| self.point(k))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow<T> {
    pub f_pi: T,
    pub f_x: T,
    pub class: RegionClass<T>,
}

/// Classifies every grid point. Rows are ordered by `F_π` (outer) then `F_x` (inner).
pub fn sweep_grid<T: Scalar>(
    params: &ModelParams<T>,
    f_pi: &GridAxis<T>,
    f_x: &GridAxis<T>,
    border_tol: T,
) -> Result<Vec<SweepRow<T>>> {
    f_pi.validate()?;
    f_x.validate()?;
    let mut rows = Vec::with_capacity(f_pi.n * f_x.n);
    for p in f_pi.points() {
        for x in f_x.points() {
            rows.push(SweepRow {
                f_pi: p,
                f_x: x,
                class: classify_region(params, x, p, border_tol),
            });
        }
    }
    Ok(rows)
}

/// Same rows and order as [`sweep_grid`], evaluated on the rayon pool.
pub fn sweep_grid_par<T: Scalar>(
    params: &ModelParams<T>,
    f_pi: &GridAxis<T>,
    f_x: &GridAxis<T>,
    border_tol: T,
) -> Result<Vec<SweepRow<T>>> {
    f_pi.validate()?;
    f_x.validate()?;
    let nx = f_x.n;
    Ok((0..f_pi.n * nx)
        .into_par_iter()
        .map(|k| {
            let p = f_pi.point(k / nx);
            let x = f_x.point(k % nx);
            SweepRow {
                f_pi: p,
                f_x: x,
                class: classify_region(params, x, p, border_tol),
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum BorderKind {
    SaddleNode,
    Flip,
    Hopf,
    Discriminant,
}

impl fmt::Display for BorderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BorderKind::SaddleNode => "saddle_node",
            BorderKind::Flip => "flip",
            BorderKind::Hopf => "hopf",
            BorderKind::Discriminant => "discriminant",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BorderPoint<T> {
    pub border: BorderKind,
    pub f_pi: T,
    pub f_x: T,
}

/// Samples the four border curves. Curves given as `F_x(F_π)` are sampled on
/// the `f_pi` axis, those given as `F_π(F_x)` on the `f_x` axis.
pub fn border_curves<T: Scalar>(
    params: &ModelParams<T>,
    f_pi: &GridAxis<T>,
    f_x: &GridAxis<T>,
) -> Result<Vec<BorderPoint<T>>> {
    f_pi.validate()?;
    f_x.validate()?;
    if params.gamma == T::zero() || params.kappa == T::zero() {
        return Err(Error::Uncontrollable(
            "borders are undefined when gamma * kappa = 0".into(),
        ));
    }
    let mut out = Vec::with_capacity(2 * (f_pi.n + f_x.n));
    for x in f_x.points() {
        out.push(BorderPoint {
            border: BorderKind::SaddleNode,
            f_pi: saddle_node_border(params, x),
            f_x: x,
        });
    }
    for p in f_pi.points() {
        out.push(BorderPoint {
            border: BorderKind::Flip,
            f_pi: p,
            f_x: flip_border(params, p),
        });
    }
    for p in f_pi.points() {
        out.push(BorderPoint {
            border: BorderKind::Hopf,
            f_pi: p,
            f_x: hopf_border(params, p),
        });
    }
    for x in f_x.points() {
        for p in discriminant_border(params, x) {
            out.push(BorderPoint {
                border: BorderKind::Discriminant,
                f_pi: p,
                f_x: x,
            });
        }
    }
    Ok(out)
}
