//! Explicit three-level scheme for `u_tt = K(x)² u_xx` with manufactured
//! initial and boundary data.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::LevelNorms;
use super::{convergence_study, Axis, ResidualReport};
use crate::error::{Error, Result};
use crate::media::Profile;
use crate::solutions::ExactSolution1D;

/// How the time step is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeStep {
    /// Largest step with Courant number at most this value.
    Cfl(f64),
    /// Exactly this many steps over `[t0, t_end]`.
    Steps(usize),
}

impl Default for TimeStep {
    fn default() -> Self {
        TimeStep::Cfl(0.9)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct LeapfrogSetup {
    pub axis: Axis,
    pub t0: f64,
    pub t_end: f64,
    pub step: TimeStep,
    /// Also accumulate the space-time L² error over every step.
    pub track_spacetime: bool,
}

#[derive(Clone, Debug)]
pub struct LeapfrogRun {
    pub x: Vec<f64>,
    pub u: Vec<f64>,
    pub exact: Vec<f64>,
    pub dt: f64,
    pub steps: usize,
    pub courant: f64,
    /// `sqrt(h Σ e_i²)` at the final time.
    pub l2_error: f64,
    pub linf_error: f64,
    pub spacetime_l2: Option<f64>,
}

impl LeapfrogRun {
    pub fn norms(&self, h: f64) -> LevelNorms {
        LevelNorms {
            h,
            l2: self.l2_error,
            linf: self.linf_error,
        }
    }
}

/// Steps `u⁺ = 2u − u⁻ + (Δt K_i / h)² (u_{i+1} − 2u_i + u_{i−1})` from `t0`
/// to `t_end`. `speed(x)` is `K(x)`; `exact(t, x)` seeds the first two time
/// levels and the Dirichlet boundary values.
pub fn leapfrog<S, E>(speed: S, exact: E, setup: &LeapfrogSetup) -> Result<LeapfrogRun>
where
    S: Fn(f64) -> Result<f64> + Sync,
    E: Fn(f64, f64) -> Result<f64> + Sync,
{
    let span = setup.t_end - setup.t0;
    if !(span > 0.0) {
        return Err(Error::contract("t_end must exceed t0"));
    }
    let x = setup.axis.nodes();
    let n = x.len();
    let h = setup.axis.spacing();
    let k: Vec<f64> = x.iter().map(|&xi| speed(xi)).collect::<Result<_>>()?;
    let k_max = k.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let steps = match setup.step {
        TimeStep::Cfl(c) => {
            if !(c > 0.0 && c <= 1.0) {
                return Err(Error::Cfl { courant: c });
            }
            (span * k_max / (c * h)).ceil().max(1.0) as usize
        }
        TimeStep::Steps(s) => s.max(1),
    };
    let dt = span / steps as f64;
    let courant = dt * k_max / h;
    if courant > 1.0 {
        return Err(Error::Cfl { courant });
    }
    let lambda2: Vec<f64> = k.iter().map(|ki| (dt * ki / h).powi(2)).collect();

    let sample = |t: f64| -> Result<Vec<f64>> { x.par_iter().map(|&xi| exact(t, xi)).collect() };
    let mut prev = sample(setup.t0)?;
    let mut curr = sample(setup.t0 + dt)?;
    let mut next = vec![0.0; n];
    let mut st_sq = 0.0;
    let track = |t: f64, u: &[f64], acc: &mut f64| -> Result<()> {
        let ex = sample(t)?;
        *acc += u
            .iter()
            .zip(&ex)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            * h
            * dt;
        Ok(())
    };
    if setup.track_spacetime {
        track(setup.t0 + dt, &curr, &mut st_sq)?;
    }
    for step in 2..=steps {
        let t_new = if step == steps {
            setup.t_end
        } else {
            setup.t0 + step as f64 * dt
        };
        next[1..n - 1]
            .par_iter_mut()
            .enumerate()
            .for_each(|(j, out)| {
                let i = j + 1;
                *out = 2.0 * curr[i] - prev[i]
                    + lambda2[i] * (curr[i + 1] - 2.0 * curr[i] + curr[i - 1]);
            });
        next[0] = exact(t_new, x[0])?;
        next[n - 1] = exact(t_new, x[n - 1])?;
        if next.iter().any(|v| !v.is_finite()) {
            return Err(Error::NotFinite { step });
        }
        std::mem::swap(&mut prev, &mut curr);
        std::mem::swap(&mut curr, &mut next);
        if setup.track_spacetime {
            track(t_new, &curr, &mut st_sq)?;
        }
    }
    let exact_end = sample(setup.t_end)?;
    let mut sq = 0.0;
    let mut linf = 0.0f64;
    for (a, b) in curr.iter().zip(&exact_end) {
        let e = a - b;
        sq += e * e;
        linf = linf.max(e.abs());
    }
    Ok(LeapfrogRun {
        x,
        u: curr,
        exact: exact_end,
        dt,
        steps,
        courant,
        l2_error: (sq * h).sqrt(),
        linf_error: linf,
        spacetime_l2: setup.track_spacetime.then(|| st_sq.sqrt()),
    })
}

/// [`leapfrog`] driven by a profile and an exact solution.
pub fn leapfrog_solve(
    profile: &Profile,
    exact: &ExactSolution1D,
    setup: &LeapfrogSetup,
) -> Result<LeapfrogRun> {
    leapfrog(|x| profile.k(x), |t, x| exact.value(t, x), setup)
}

/// Half the time a wave needs to cross `[lo, hi]`.
pub fn default_t_end(profile: &Profile, lo: f64, hi: f64, t0: f64) -> Result<f64> {
    let crossing = (profile.travel_time(hi)? - profile.travel_time(lo)?).abs();
    Ok(t0 + 0.5 * crossing)
}

/// Runs [`leapfrog_solve`] on `levels` successively halved grids starting at
/// `base`. The step count doubles with each level so the Courant number is
/// held fixed.
pub fn leapfrog_convergence(
    profile: &Profile,
    exact: &ExactSolution1D,
    base: &LeapfrogSetup,
    levels: usize,
) -> Result<(ResidualReport, Vec<LeapfrogRun>)> {
    let coarse = leapfrog_solve(profile, exact, base)?;
    let axes: Vec<Axis> = std::iter::successors(Some(base.axis), |a| Some(a.refined()))
        .take(levels)
        .collect();
    let runs: Vec<std::sync::Mutex<Option<LeapfrogRun>>> =
        (0..levels).map(|_| std::sync::Mutex::new(None)).collect();
    let report = convergence_study(levels, |level| {
        let setup = LeapfrogSetup {
            axis: axes[level],
            step: TimeStep::Steps(coarse.steps << level),
            ..*base
        };
        let run = leapfrog_solve(profile, exact, &setup)?;
        let norms = run.norms(axes[level].spacing());
        *runs[level].lock().expect("no poisoning") = Some(run);
        Ok(norms)
    })?;
    let runs = runs
        .into_iter()
        .map(|m| {
            m.into_inner()
                .expect("no poisoning")
                .expect("every level ran")
        })
        .collect();
    Ok((report, runs))
}
