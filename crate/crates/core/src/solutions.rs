//! Exact solutions of `u_tt = K²(x) u_xx` and their analytic residual.
//!
//! Every solution here is a finite sum of terms
//! `w · c(x) · W⁽ᵈ⁾(t ± a(x))` where `c` is affine in `x` and `a`, `W` is a
//! waveform and `d ∈ {0, 1}`. The rank-zero family takes `c = A = m1 x + m2`
//! on `K = A²`; the rank-one family adds `A1 = m x + m1 − a A` in front of
//! `T'` and `−X'`. We label the characteristics `I1 = t + a`, `I2 = t − a`;
//! since `T` and `X` are arbitrary, the opposite labeling describes the same
//! set of solutions.

use std::ops::{Add, Mul};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jets::{Jet, Waveform};
use crate::media::{Base, Profile, ProfileKind};
use crate::numeric::{AxisMeta, Grid2D, ResidualReport};
use crate::riccati::RiccatiParams;

/// Points closer than this to a zero of `K` (equivalently of `A1`) are
/// rejected.
pub const SINGULAR_MARGIN: f64 = 1e-6;

/// Relative tolerance of the `a'·A1² = r` check at construction.
pub const CONSISTENCY_TOL: f64 = 1e-8;

/// `c(x) = x_coef·x + one + (xa·x + a_coef)·a(x)`.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Coefficient {
    x_coef: f64,
    one: f64,
    xa: f64,
    a_coef: f64,
}

impl Coefficient {
    fn affine(x_coef: f64, one: f64) -> Self {
        Coefficient {
            x_coef,
            one,
            xa: 0.0,
            a_coef: 0.0,
        }
    }

    fn jet(&self, x: &Jet, a: &Jet) -> Jet {
        self.x_coef * *x + self.one + (self.xa * *x + self.a_coef) * *a
    }
}

/// The coordinate `a(x)` fed into the characteristics: a profile's travel
/// time, optionally negated (the Riccati coordinate of an `r < 0` family
/// decreases while the travel time increases).
#[derive(Clone, Debug)]
struct Phase {
    profile: Profile,
    scale: f64,
}

impl Phase {
    fn check(&self, x: f64) -> Result<()> {
        let (lo, hi) = self.profile.domain();
        if !(x > lo && x < hi) {
            return Err(Error::domain(x, format!("outside domain ({lo}, {hi})")));
        }
        if let Some(s) = self
            .profile
            .singular_points()
            .into_iter()
            .find(|s| (s - x).abs() < SINGULAR_MARGIN)
        {
            return Err(Error::domain(
                x,
                format!("within {SINGULAR_MARGIN} of the zero of K at {s}"),
            ));
        }
        Ok(())
    }

    fn jet(&self, x: f64) -> Result<Jet> {
        self.check(x)?;
        Ok(self.profile.travel_time_jet(x)? * self.scale)
    }
}

#[derive(Clone, Debug)]
struct Term {
    weight: f64,
    coef: Coefficient,
    waveform: Waveform,
    deriv: usize,
    /// `+1` for `t + a`, `−1` for `t − a`.
    sign: f64,
    phase: Arc<Phase>,
}

/// Value and partial derivatives up to total order two.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Partials {
    pub u: f64,
    pub u_t: f64,
    pub u_x: f64,
    pub u_tt: f64,
    pub u_tx: f64,
    pub u_xx: f64,
}

impl Add for Partials {
    type Output = Partials;
    fn add(self, o: Partials) -> Partials {
        Partials {
            u: self.u + o.u,
            u_t: self.u_t + o.u_t,
            u_x: self.u_x + o.u_x,
            u_tt: self.u_tt + o.u_tt,
            u_tx: self.u_tx + o.u_tx,
            u_xx: self.u_xx + o.u_xx,
        }
    }
}

impl Term {
    /// `(g, g', g'')` with `g = W⁽ᵈ⁾` at `s`.
    fn profile_of_wave(&self, s: f64) -> Result<Jet> {
        let w = self.waveform.eval(s, self.deriv + 2)?;
        let mut g = w;
        for _ in 0..self.deriv {
            g = g.derivative();
        }
        Ok(g)
    }

    /// Spatial derivatives through jets in `x`; time derivatives from the
    /// waveform directly.
    fn partials(&self, t: f64, x: f64) -> Result<Partials> {
        let a = self.phase.jet(x)?;
        let xj = Jet::variable(x, 2);
        let phi = a * self.sign + t;
        let g = self.profile_of_wave(phi.value())?;
        let c = self.coef.jet(&xj, &a);
        let u = c * Jet::compose(&g, &phi)?;
        let g1 = g.derivative();
        let ut = c.truncate(1) * Jet::compose(&g1, &phi.truncate(1))?;
        let w = self.weight;
        Ok(Partials {
            u: w * u.value(),
            u_t: w * ut.value(),
            u_x: w * u.deriv(1),
            u_tt: w * c.value() * g.deriv(2),
            u_tx: w * ut.deriv(1),
            u_xx: w * u.deriv(2),
        })
    }

    /// `∂x(∂t u) = c' g' + c g'' σ a'`, written out by hand.
    fn mixed_direct(&self, t: f64, x: f64) -> Result<f64> {
        let a = self.phase.jet(x)?;
        let c = self.coef.jet(&Jet::variable(x, 2), &a);
        let g = self.profile_of_wave(t + self.sign * a.value())?;
        Ok(self.weight
            * (c.deriv(1) * g.deriv(1) + c.value() * g.deriv(2) * self.sign * a.deriv(1)))
    }
}

/// An exact space-time field `u(t, x)`.
#[derive(Clone, Debug, Default)]
pub struct ExactSolution1D {
    terms: Vec<Term>,
}

impl ExactSolution1D {
    /// `u ≡ 0`.
    pub fn zero() -> Self {
        ExactSolution1D { terms: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.weight == 0.0)
    }

    /// The profile whose travel time feeds the first term, if any.
    pub fn profile(&self) -> Option<&Profile> {
        self.terms.first().map(|t| &t.phase.profile)
    }

    pub fn partials(&self, t: f64, x: f64) -> Result<Partials> {
        if !t.is_finite() {
            return Err(Error::domain(t, "time not finite"));
        }
        if self.terms.is_empty() && !x.is_finite() {
            return Err(Error::domain(x, "abscissa not finite"));
        }
        self.terms
            .iter()
            .try_fold(Partials::default(), |acc, term| {
                Ok(acc + term.partials(t, x)?)
            })
    }

    pub fn value(&self, t: f64, x: f64) -> Result<f64> {
        Ok(self.partials(t, x)?.u)
    }

    /// `u_tx` by two routes: differentiating the `t`-jet in `x`, and the
    /// explicit product-rule formula. They agree up to rounding.
    pub fn mixed_partials(&self, t: f64, x: f64) -> Result<(f64, f64)> {
        let via_jets = self.partials(t, x)?.u_tx;
        let direct = self.terms.iter().try_fold(0.0, |acc, term| {
            Ok::<_, Error>(acc + term.mixed_direct(t, x)?)
        })?;
        Ok((via_jets, direct))
    }

    /// `u(t + tau, x)`, built by shifting the waveform arguments.
    pub fn time_shifted(&self, tau: f64) -> Self {
        ExactSolution1D {
            terms: self
                .terms
                .iter()
                .map(|term| Term {
                    waveform: term.waveform.shifted(tau),
                    ..term.clone()
                })
                .collect(),
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        ExactSolution1D {
            terms: self
                .terms
                .iter()
                .map(|term| Term {
                    weight: term.weight * factor,
                    ..term.clone()
                })
                .collect(),
        }
    }
}

impl Add for ExactSolution1D {
    type Output = ExactSolution1D;
    fn add(mut self, other: ExactSolution1D) -> ExactSolution1D {
        self.terms.extend(other.terms);
        self
    }
}

impl Mul<ExactSolution1D> for f64 {
    type Output = ExactSolution1D;
    fn mul(self, u: ExactSolution1D) -> ExactSolution1D {
        u.scaled(self)
    }
}

/// `u = (m1 x + m2)[T(t + a) + X(t − a)]` on `K = (m1 x + m2)²`, with
/// `a = −1/(m1 (m1 x + m2))` (or `x/m2²` when `m1 = 0`).
pub fn build_rank0(
    m1: f64,
    m2: f64,
    t_wave: Waveform,
    x_wave: Waveform,
) -> Result<ExactSolution1D> {
    let profile = Profile::quadratic(m1, m2)?;
    Ok(rank0_on(profile, m1, m2, t_wave, x_wave))
}

fn rank0_on(
    profile: Profile,
    m1: f64,
    m2: f64,
    t_wave: Waveform,
    x_wave: Waveform,
) -> ExactSolution1D {
    let phase = Arc::new(Phase {
        profile,
        scale: 1.0,
    });
    let a = Coefficient::affine(m1, m2);
    let term = |waveform, sign| Term {
        weight: 1.0,
        coef: a,
        waveform,
        deriv: 0,
        sign,
        phase: phase.clone(),
    };
    ExactSolution1D {
        terms: vec![term(t_wave, 1.0), term(x_wave, -1.0)],
    }
}

/// Inputs for [`build_rank1`].
#[derive(Clone, Debug)]
pub struct RankSolutionSpec {
    /// A profile with a rank-one representation (`gen_euler` or
    /// `riccati_implicit`), using its natural base: the amplitude `A1`
    /// depends on the integration constant of `a`.
    pub profile: Profile,
    /// `r, m, m1, c1, c2`; see [`Rank1Constants::for_profile`].
    pub constants: RiccatiParams,
    pub t_wave: Waveform,
    pub x_wave: Waveform,
    /// Where the consistency check samples `x`. Defaults to the profile's
    /// domain, which must then be bounded.
    pub window: Option<(f64, f64)>,
}

/// Constants of the rank-one representation.
pub struct Rank1Constants;

impl Rank1Constants {
    /// The constants for which `a' = r/A1²` holds on `profile`.
    pub fn for_profile(profile: &Profile) -> Result<RiccatiParams> {
        profile
            .rank1_params()
            .ok_or_else(|| Error::Construction("profile has no rank-one representation".into()))
    }
}

impl RankSolutionSpec {
    pub fn new(profile: Profile, t_wave: Waveform, x_wave: Waveform) -> Result<Self> {
        let constants = Rank1Constants::for_profile(&profile)?;
        Ok(RankSolutionSpec {
            profile,
            constants,
            t_wave,
            x_wave,
            window: None,
        })
    }

    pub fn with_window(mut self, lo: f64, hi: f64) -> Self {
        self.window = Some((lo, hi));
        self
    }
}

/// `u = A[T(t + a) + X(t − a)] + A1[T'(t + a) − X'(t − a)]` with
/// `A = c1 x + c2`, `A1 = m x + m1 − a A`.
///
/// Fails with a construction error unless `a'·A1² = r` holds (relative
/// tolerance [`CONSISTENCY_TOL`]) at 100 points of the window.
pub fn build_rank1(spec: RankSolutionSpec) -> Result<ExactSolution1D> {
    let RankSolutionSpec {
        profile,
        constants: p,
        t_wave,
        x_wave,
        window,
    } = spec;
    p.validate()?;
    if profile.base() != Base::Natural {
        return Err(Error::Construction(
            "rank-one amplitudes need the profile's natural travel-time constant".into(),
        ));
    }
    let scale = match profile.kind() {
        ProfileKind::RiccatiImplicit(b) => b.params().r.signum(),
        _ => 1.0,
    };
    let phase = Arc::new(Phase { profile, scale });
    let (lo, hi) = window.unwrap_or(phase.profile.domain());
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::contract(
            "rank-one construction needs a bounded sampling window",
        ));
    }
    const SAMPLES: usize = 100;
    let mut checked = 0;
    for i in 0..SAMPLES {
        let x = lo + (hi - lo) * (i as f64 + 0.5) / SAMPLES as f64;
        let Ok(a) = phase.jet(x) else { continue };
        let a1 = p.linear_part(a.value(), x);
        let lhs = a.deriv(1) * a1 * a1;
        if !((lhs - p.r).abs() <= CONSISTENCY_TOL * p.r.abs()) {
            return Err(Error::Construction(format!(
                "a'·A1² = {lhs} at x = {x}, expected r = {}",
                p.r
            )));
        }
        checked += 1;
    }
    if checked == 0 {
        return Err(Error::Construction(
            "no admissible sample in the window".into(),
        ));
    }
    let a = Coefficient::affine(p.c1, p.c2);
    let a1 = Coefficient {
        x_coef: p.m,
        one: p.m1,
        xa: -p.c1,
        a_coef: -p.c2,
    };
    let term = |weight, coef, waveform: &Waveform, deriv, sign| Term {
        weight,
        coef,
        waveform: waveform.clone(),
        deriv,
        sign,
        phase: phase.clone(),
    };
    Ok(ExactSolution1D {
        terms: vec![
            term(1.0, a, &t_wave, 0, 1.0),
            term(1.0, a, &x_wave, 0, -1.0),
            term(1.0, a1, &t_wave, 1, 1.0),
            term(-1.0, a1, &x_wave, 1, -1.0),
        ],
    })
}

/// `u_tt − K² u_xx` at `(t, x)`.
pub fn residual_1d(u: &ExactSolution1D, p: &Profile, t: f64, x: f64) -> Result<f64> {
    let k2 = p.k_squared(x)?;
    let d = u.partials(t, x)?;
    Ok(d.u_tt - k2 * d.u_xx)
}

/// Residual norms over a `(t, x)` grid, normalized by the largest `|u_tt|`.
/// Points are evaluated in parallel and reduced in grid order.
pub fn residual_norms(u: &ExactSolution1D, p: &Profile, grid: &Grid2D) -> Result<ResidualReport> {
    if grid.is_empty() {
        return Err(Error::contract("empty grid"));
    }
    let pts = grid.points();
    let vals: Vec<(f64, f64)> = pts
        .par_iter()
        .map(|&(t, x)| {
            let k2 = p.k_squared(x)?;
            let d = u.partials(t, x)?;
            Ok((d.u_tt - k2 * d.u_xx, d.u_tt))
        })
        .collect::<Result<_>>()?;
    let residuals: Vec<f64> = vals.iter().map(|v| v.0).collect();
    let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.1.abs()));
    ResidualReport::from_residuals(
        &residuals,
        scale,
        vec![
            AxisMeta::from_axis("t", &grid.a),
            AxisMeta::from_axis("x", &grid.b),
        ],
    )
}
