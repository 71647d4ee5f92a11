//! Equivalence transformations between wave equations with different
//! coefficients, and the multi-dimensional solutions they act on.
//!
//! One-dimensional reductions keep analytic derivatives. Multi-dimensional
//! fields are checked by finite-difference residuals with a refinement
//! study: differentiating through map inverses by hand is where mistakes
//! hide, and a residual that converges to zero at the stencil's order is an
//! equally strong check.

mod conformal;
mod reductions;

use std::fmt;
use std::sync::Arc;

pub use conformal::{
    conformal_pullback, cr_check, ConformalMap, ConformalMapKind, MapJet, Orientation, CR_TOL,
};
pub use reductions::{
    change_of_variable_1d, cylindrical_reduce, epd_reduce, spherical_reduce, EpdReduction,
    ReducedCoefficient, SphericalWave,
};

use crate::error::{Error, Result};
use crate::jets::Waveform;
use crate::numeric::{fd_refinement_study, ResidualReport, Stencil};

type FieldFn<const N: usize> = dyn Fn(f64, [f64; N]) -> Result<f64> + Send + Sync;
type CoefFn<const N: usize> = dyn Fn([f64; N]) -> Result<f64> + Send + Sync;

/// A space-time field `u(t, x⃗)` in `N` space dimensions.
#[derive(Clone)]
pub struct ExactSolutionND<const N: usize>(Arc<FieldFn<N>>);

impl<const N: usize> ExactSolutionND<N> {
    pub fn new(f: impl Fn(f64, [f64; N]) -> Result<f64> + Send + Sync + 'static) -> Self {
        ExactSolutionND(Arc::new(f))
    }

    pub fn value(&self, t: f64, x: [f64; N]) -> Result<f64> {
        (self.0)(t, x)
    }
}

impl<const N: usize> fmt::Debug for ExactSolutionND<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactSolutionND<{N}>(..)")
    }
}

/// A squared wave speed `c²(x⃗)`.
#[derive(Clone)]
pub struct CoefficientField<const N: usize>(Arc<CoefFn<N>>);

impl<const N: usize> CoefficientField<N> {
    pub fn new(f: impl Fn([f64; N]) -> Result<f64> + Send + Sync + 'static) -> Self {
        CoefficientField(Arc::new(f))
    }

    pub fn constant(c2: f64) -> Self {
        CoefficientField::new(move |_| Ok(c2))
    }

    pub fn value(&self, x: [f64; N]) -> Result<f64> {
        (self.0)(x)
    }
}

impl<const N: usize> fmt::Debug for CoefficientField<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CoefficientField<{N}>(..)")
    }
}

fn check_speed(c: f64) -> Result<()> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::contract(format!(
            "wave speed must be positive, got {c}"
        )));
    }
    Ok(())
}

/// `u = F(t − (x cos θ + y sin θ)/c)`, a solution of `u_tt = c² Δu`.
pub fn plane_wave_2d(c: f64, theta: f64, wave: Waveform) -> Result<ExactSolutionND<2>> {
    check_speed(c)?;
    let (s, co) = theta.sin_cos();
    Ok(ExactSolutionND::new(move |t, [x, y]| {
        Ok(wave.eval(t - (co * x + s * y) / c, 0)?.value())
    }))
}

/// `u = F(t − n⃗·x⃗/c)` for a unit vector `n⃗`.
pub fn plane_wave_3d(c: f64, n: [f64; 3], wave: Waveform) -> Result<ExactSolutionND<3>> {
    check_speed(c)?;
    let norm = n.iter().map(|v| v * v).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::contract(format!(
            "direction must be a unit vector, |n| = {norm}"
        )));
    }
    Ok(ExactSolutionND::new(move |t, x| {
        let proj = n[0] * x[0] + n[1] * x[1] + n[2] * x[2];
        Ok(wave.eval(t - proj / c, 0)?.value())
    }))
}

/// Kelvin inversion `v(t, X⃗1) = u(t, X⃗1/|X⃗1|²)/|X⃗1|`, which carries solutions
/// of `u_tt = Δu` to solutions of `v_tt = |X⃗1|⁴ Δv`. Returns `v` and that
/// coefficient. Applying it twice gives back `u`.
pub fn kelvin_3d(u: &ExactSolutionND<3>) -> (ExactSolutionND<3>, CoefficientField<3>) {
    let u = u.clone();
    let v = ExactSolutionND::new(move |t, x1: [f64; 3]| {
        let r2 = x1.iter().map(|v| v * v).sum::<f64>();
        if r2 == 0.0 {
            return Err(Error::domain(
                0.0,
                "Kelvin inversion is undefined at the origin",
            ));
        }
        let x = x1.map(|v| v / r2);
        Ok(u.value(t, x)? / r2.sqrt())
    });
    let c1 = CoefficientField::new(|x1: [f64; 3]| {
        let r2 = x1.iter().map(|v| v * v).sum::<f64>();
        if r2 == 0.0 {
            return Err(Error::domain(
                0.0,
                "Kelvin inversion is undefined at the origin",
            ));
        }
        Ok(r2 * r2)
    });
    (v, c1)
}

/// Finite-difference residual of `u_tt = c² Δu` at `points`, on steps
/// `h0, h0/2, …` (`levels` of them), with observed orders.
pub fn nd_residual_study<const N: usize>(
    u: &ExactSolutionND<N>,
    c2: &CoefficientField<N>,
    points: &[(f64, [f64; N])],
    h0: f64,
    levels: usize,
    stencil: Stencil,
) -> Result<ResidualReport> {
    fd_refinement_study(
        &|t, x| u.value(t, x),
        &|x| c2.value(x),
        points,
        h0,
        levels,
        stencil,
    )
}
