//! Grids, stencils, quadrature, ODE and root solvers, the leapfrog scheme
//! and convergence bookkeeping.

mod convergence;
mod grid;
mod leapfrog;
pub mod ode;
pub mod quadrature;
mod report;
pub mod roots;
mod stencil;

pub use convergence::{convergence_study, observed_orders};
pub use grid::{Axis, Grid2D, MIN_NODES};
pub use leapfrog::{
    default_t_end, leapfrog, leapfrog_convergence, leapfrog_solve, LeapfrogRun, LeapfrogSetup,
    TimeStep,
};
pub use report::{AxisMeta, LevelNorms, ResidualReport};
pub use stencil::{
    fd_point_residual, fd_refinement_study, fd_residual, PointResidual, SpaceTimeField, Stencil,
};
