//! Central finite-difference residuals of `u_tt = c² Δu`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::{AxisMeta, LevelNorms, ResidualReport};
use super::Grid2D;
use crate::error::{Error, Result};

#[cfg_attr(feature = "schema", derive(schemars::JsonSchema))]
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stencil {
    #[default]
    Second,
    Fourth,
}

impl Stencil {
    pub fn formal_order(self) -> u32 {
        match self {
            Stencil::Second => 2,
            Stencil::Fourth => 4,
        }
    }

    fn half_width(self) -> usize {
        match self {
            Stencil::Second => 1,
            Stencil::Fourth => 2,
        }
    }

    /// Second derivative from samples `v[-w..=w]` around the center, where
    /// `w` is the half width.
    fn apply(self, v: &[f64], h: f64) -> f64 {
        match self {
            Stencil::Second => (v[0] - 2.0 * v[1] + v[2]) / (h * h),
            Stencil::Fourth => {
                (-v[0] + 16.0 * v[1] - 30.0 * v[2] + 16.0 * v[3] - v[4]) / (12.0 * h * h)
            }
        }
    }
}

/// Samples of `u(t, x)` on a uniform space-time grid; `grid.a` is time,
/// `grid.b` is space, values stored row-major by time level.
#[derive(Clone, Debug)]
pub struct SpaceTimeField {
    pub grid: Grid2D,
    pub values: Vec<f64>,
}

impl SpaceTimeField {
    pub fn sample<F>(grid: Grid2D, f: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> Result<f64> + Sync,
    {
        let values = grid
            .points()
            .par_iter()
            .map(|&(t, x)| f(t, x))
            .collect::<Result<Vec<f64>>>()?;
        Ok(SpaceTimeField { grid, values })
    }

    fn at(&self, it: usize, ix: usize) -> f64 {
        self.values[it * self.grid.b.len() + ix]
    }
}

/// Discrete residual `D_tt u - K² D_xx u` at interior nodes of a sampled
/// field. `k_squared` holds the coefficient at each spatial node.
pub fn fd_residual(
    field: &SpaceTimeField,
    k_squared: &[f64],
    stencil: Stencil,
) -> Result<ResidualReport> {
    let nt = field.grid.a.len();
    let nx = field.grid.b.len();
    if field.values.len() != nt * nx {
        return Err(Error::contract("field size does not match its grid"));
    }
    if k_squared.len() != nx {
        return Err(Error::contract(
            "coefficient length does not match space axis",
        ));
    }
    if let Some(bad) = field.values.iter().find(|v| !v.is_finite()) {
        return Err(Error::contract(format!(
            "field contains non-finite value {bad}"
        )));
    }
    let w = stencil.half_width();
    if nt <= 2 * w || nx <= 2 * w {
        return Err(Error::contract("grid too small for stencil"));
    }
    let dt = field.grid.a.spacing();
    let dx = field.grid.b.spacing();
    let mut residuals = Vec::with_capacity((nt - 2 * w) * (nx - 2 * w));
    let mut scale = 0.0f64;
    let mut buf = [0.0; 5];
    #[allow(clippy::needless_range_loop)]
    for it in w..nt - w {
        for ix in w..nx - w {
            for (k, slot) in buf.iter_mut().enumerate().take(2 * w + 1) {
                *slot = field.at(it + k - w, ix);
            }
            let utt = stencil.apply(&buf, dt);
            for (k, slot) in buf.iter_mut().enumerate().take(2 * w + 1) {
                *slot = field.at(it, ix + k - w);
            }
            let uxx = stencil.apply(&buf, dx);
            scale = scale.max(utt.abs());
            residuals.push(utt - k_squared[ix] * uxx);
        }
    }
    ResidualReport::from_residuals(
        &residuals,
        scale,
        vec![
            AxisMeta::from_axis("t", &field.grid.a),
            AxisMeta::from_axis("x", &field.grid.b),
        ],
    )
}

/// Residual and `u_tt` estimate at a single space-time point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointResidual {
    pub residual: f64,
    pub u_tt: f64,
}

fn second_difference<F: Fn(f64) -> Result<f64>>(
    f: F,
    center: f64,
    h: f64,
    stencil: Stencil,
) -> Result<f64> {
    let w = stencil.half_width() as isize;
    let mut buf = [0.0; 5];
    for k in -w..=w {
        buf[(k + w) as usize] = f(center + k as f64 * h)?;
    }
    Ok(stencil.apply(&buf, h))
}

/// `D_tt u - c²(x) Σ D_ii u` at `(t, x)` with step `h` along every axis.
pub fn fd_point_residual<const N: usize, U, C>(
    u: &U,
    c2: &C,
    t: f64,
    x: [f64; N],
    h: f64,
    stencil: Stencil,
) -> Result<PointResidual>
where
    U: Fn(f64, [f64; N]) -> Result<f64>,
    C: Fn([f64; N]) -> Result<f64>,
{
    let u_tt = second_difference(|s| u(s, x), t, h, stencil)?;
    let mut lap = 0.0;
    for axis in 0..N {
        lap += second_difference(
            |s| {
                let mut p = x;
                p[axis] = s;
                u(t, p)
            },
            x[axis],
            h,
            stencil,
        )?;
    }
    Ok(PointResidual {
        residual: u_tt - c2(x)? * lap,
        u_tt,
    })
}

/// Pointwise FD residuals over a point cloud at steps `h0, h0/2, ...`.
///
/// The returned report carries the finest level's residuals, normalized by
/// that level's largest `|u_tt|`, plus the per-level history and observed
/// orders.
pub fn fd_refinement_study<const N: usize, U, C>(
    u: &U,
    c2: &C,
    points: &[(f64, [f64; N])],
    h0: f64,
    levels: usize,
    stencil: Stencil,
) -> Result<ResidualReport>
where
    U: Fn(f64, [f64; N]) -> Result<f64> + Sync,
    C: Fn([f64; N]) -> Result<f64> + Sync,
{
    if levels < 2 {
        return Err(Error::contract(
            "refinement study needs at least two levels",
        ));
    }
    if !(h0 > 0.0) {
        return Err(Error::contract("step must be positive"));
    }
    let mut history = Vec::with_capacity(levels);
    let mut finest = None;
    for level in 0..levels {
        let h = h0 / f64::powi(2.0, level as i32);
        let pts: Vec<PointResidual> = points
            .par_iter()
            .map(|&(t, x)| fd_point_residual(u, c2, t, x, h, stencil))
            .collect::<Result<_>>()?;
        let residuals: Vec<f64> = pts.iter().map(|p| p.residual).collect();
        let scale = pts.iter().fold(0.0f64, |m, p| m.max(p.u_tt.abs()));
        let report = ResidualReport::from_residuals(&residuals, scale, Vec::new())?;
        history.push(LevelNorms {
            h,
            l2: report.l2,
            linf: report.linf,
        });
        finest = Some(report);
    }
    finest.expect("levels >= 2").with_levels(history)
}
