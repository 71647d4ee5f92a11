//! The travel-time equation `a' = r / [m x + m1 − (c1 x + c2) a]²` and its
//! Riccati form `dx/dy = (m x + m1 − (c1 x + c2) y)² / r`.
//!
//! Besides the right-hand side this module carries the catalog of explicit
//! solutions `x(y)`, numerical integration of the Riccati equation, and
//! inversion of a monotone branch `x(y)` back to `y = a(x)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jets::Jet;
use crate::numeric::ode::{dopri5, OdeOptions, OdePath};
use crate::numeric::roots::{solve_monotone, RootOptions};

/// Constants of the travel-time equation; `r` must be nonzero.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RiccatiParams {
    pub r: f64,
    pub m: f64,
    pub m1: f64,
    pub c1: f64,
    pub c2: f64,
}

impl RiccatiParams {
    pub fn new(r: f64, m: f64, m1: f64, c1: f64, c2: f64) -> Result<Self> {
        let p = RiccatiParams { r, m, m1, c1, c2 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.r, self.m, self.m1, self.c1, self.c2];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::contract("Riccati parameters must be finite"));
        }
        if self.r == 0.0 {
            return Err(Error::contract("Riccati parameter r must be nonzero"));
        }
        Ok(())
    }

    /// `m x + m1 − (c1 x + c2) y`, the rank-one amplitude `A1` at `a = y`.
    pub fn linear_part(&self, y: f64, x: f64) -> f64 {
        self.m * x + self.m1 - (self.c1 * x + self.c2) * y
    }

    /// Right-hand side of `dx/dy`.
    pub fn rhs(&self, y: f64, x: f64) -> f64 {
        let l = self.linear_part(y, x);
        l * l / self.r
    }
}

/// Free-function form of [`RiccatiParams::rhs`].
pub fn riccati_rhs(p: &RiccatiParams, y: f64, x: f64) -> f64 {
    p.rhs(y, x)
}

/// Explicit solutions `x(y)` of the Riccati equation, each with its
/// integration constant `b`.
#[cfg_attr(feature = "schema", derive(schemars::JsonSchema))]
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum ClosedFormFamily {
    /// `x = y − (b e^{2y} + 1)/(b e^{2y} − 1)`; `b = −1` gives `y − tanh y`.
    Tanh { b: f64 },
    /// `x = y − tan(y + b)`.
    Tan { b: f64 },
    /// `x = (b + e^{2y}) / (b y + (y − 2) e^{2y})`.
    ExpRatio { b: f64 },
    /// The `S1, S2` expression exactly as printed in the source catalog.
    /// It does not satisfy the Riccati equation for its listed constants
    /// (nor for any others); kept for comparison.
    Sqrt3 { b: f64 },
    /// The `S1, S2` expression with `S1/S2` replaced by `e^{2√3 y}`, solving
    /// the equation with `r = c1 = c2 = m = 1, m1 = −2`.
    Sqrt3Repaired { b: f64 },
}

const SQRT3: f64 = 1.732_050_807_568_877_2;

impl ClosedFormFamily {
    pub fn tanh() -> Self {
        ClosedFormFamily::Tanh { b: -1.0 }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ClosedFormFamily::Tanh { .. } => "tanh",
            ClosedFormFamily::Tan { .. } => "tan",
            ClosedFormFamily::ExpRatio { .. } => "exp_ratio",
            ClosedFormFamily::Sqrt3 { .. } => "sqrt3",
            ClosedFormFamily::Sqrt3Repaired { .. } => "sqrt3_repaired",
        }
    }

    pub fn b(&self) -> f64 {
        match *self {
            ClosedFormFamily::Tanh { b }
            | ClosedFormFamily::Tan { b }
            | ClosedFormFamily::ExpRatio { b }
            | ClosedFormFamily::Sqrt3 { b }
            | ClosedFormFamily::Sqrt3Repaired { b } => b,
        }
    }

    /// Constants for which `x(y)` solves the Riccati equation.
    ///
    /// For `ExpRatio` these differ from the catalog listing (`r = 1,
    /// m1 = −1`): substitution shows the formula solves the equation with
    /// `r = −1, m1 = 1`. See [`ClosedFormFamily::listed_params`].
    pub fn params(&self) -> RiccatiParams {
        let p = |r, m, m1, c1, c2| RiccatiParams { r, m, m1, c1, c2 };
        match self {
            ClosedFormFamily::Tanh { .. } => p(1.0, 1.0, 0.0, 0.0, 1.0),
            ClosedFormFamily::Tan { .. } => p(-1.0, 1.0, 0.0, 0.0, 1.0),
            ClosedFormFamily::ExpRatio { .. } => p(-1.0, 1.0, 1.0, 1.0, 0.0),
            ClosedFormFamily::Sqrt3 { .. } => p(1.0, 1.0, -1.0, 1.0, -1.0),
            ClosedFormFamily::Sqrt3Repaired { .. } => p(1.0, 1.0, -2.0, 1.0, 1.0),
        }
    }

    /// Constants as listed next to each formula in the source catalog.
    pub fn listed_params(&self) -> RiccatiParams {
        match self {
            ClosedFormFamily::ExpRatio { .. } => RiccatiParams {
                r: 1.0,
                m: 1.0,
                m1: -1.0,
                c1: 1.0,
                c2: 0.0,
            },
            ClosedFormFamily::Sqrt3Repaired { .. } => ClosedFormFamily::Sqrt3 { b: 0.0 }.params(),
            other => other.params(),
        }
    }

    fn numerator_denominator(&self, y: f64) -> (f64, f64) {
        match *self {
            ClosedFormFamily::Tanh { b } => {
                let e = b * (2.0 * y).exp();
                // x = y − (e + 1)/(e − 1)  ==  (y (e − 1) − (e + 1)) / (e − 1)
                (y * (e - 1.0) - (e + 1.0), e - 1.0)
            }
            ClosedFormFamily::Tan { b } => {
                let (s, c) = (y + b).sin_cos();
                (y * c - s, c)
            }
            ClosedFormFamily::ExpRatio { b } => {
                let e = (2.0 * y).exp();
                (b + e, b * y + (y - 2.0) * e)
            }
            ClosedFormFamily::Sqrt3 { b } => {
                let s1 = (y * (2.0 * y * y + 6.0 * SQRT3 + 3.0 * y - 12.0) / 6.0).exp();
                let s2 = (y * (-2.0 * y * y + 6.0 * SQRT3 - 3.0 * y + 12.0) / 6.0).exp();
                sqrt3_ratio_at(y, b, s1, s2)
            }
            ClosedFormFamily::Sqrt3Repaired { b } => {
                let e = (2.0 * SQRT3 * y).exp();
                sqrt3_ratio_at(y, b, e, 1.0)
            }
        }
    }

    /// The denominator whose zeros are the poles of `x(y)`.
    pub fn denominator(&self, y: f64) -> f64 {
        self.numerator_denominator(y).1
    }

    /// Poles of `x(y)` strictly inside `(lo, hi)`, located by a sign scan of
    /// the denominator refined with bisection.
    pub fn poles_between(&self, lo: f64, hi: f64) -> Vec<f64> {
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        if let ClosedFormFamily::Tan { b } = *self {
            // y + b = π/2 + kπ
            let pi = std::f64::consts::PI;
            let k0 = ((lo + b - pi / 2.0) / pi).ceil() as i64;
            return (k0..)
                .map(|k| pi / 2.0 + k as f64 * pi - b)
                .take_while(|&y| y < hi)
                .filter(|&y| y > lo)
                .collect();
        }
        const SCAN: usize = 4096;
        let dy = (hi - lo) / SCAN as f64;
        let mut poles = Vec::new();
        let mut y_prev = lo;
        let mut d_prev = self.denominator(lo);
        for i in 1..=SCAN {
            let y = if i == SCAN { hi } else { lo + i as f64 * dy };
            let d = self.denominator(y);
            if d == 0.0 && y < hi {
                poles.push(y);
            } else if d_prev != 0.0 && d.signum() != d_prev.signum() {
                let (mut a, mut c) = (y_prev, y);
                for _ in 0..200 {
                    let mid = 0.5 * (a + c);
                    if mid <= a || mid >= c {
                        break;
                    }
                    if self.denominator(mid).signum() == d_prev.signum() {
                        a = mid;
                    } else {
                        c = mid;
                    }
                }
                poles.push(0.5 * (a + c));
            }
            y_prev = y;
            d_prev = d;
        }
        poles
    }

    /// `x(y)`; fails at (or numerically on top of) a pole.
    pub fn x(&self, y: f64) -> Result<f64> {
        if !y.is_finite() {
            return Err(Error::domain(y, "argument not finite"));
        }
        if let ClosedFormFamily::Tanh { b } = *self {
            if b == -1.0 {
                return Ok(y - y.tanh());
            }
        }
        if let ClosedFormFamily::Tan { b } = *self {
            if (y + b).cos().abs() < 1e-15 {
                return Err(Error::domain(y, "pole of y − tan(y + b)"));
            }
            return Ok(y - (y + b).tan());
        }
        let (num, den) = self.numerator_denominator(y);
        let x = num / den;
        if den == 0.0 || !x.is_finite() {
            return Err(Error::domain(
                y,
                format!("pole of the {} family", self.name()),
            ));
        }
        Ok(x)
    }

    /// Critical points (`dx/dy = 0`) of a family, where inversion loses
    /// differentiability. Only the tanh and tan families have closed forms;
    /// other families report none.
    pub fn critical_points_between(&self, lo: f64, hi: f64) -> Vec<f64> {
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        match *self {
            ClosedFormFamily::Tanh { b: -1.0 } => {
                if lo < 0.0 && hi > 0.0 {
                    vec![0.0]
                } else {
                    Vec::new()
                }
            }
            ClosedFormFamily::Tan { b } => {
                let pi = std::f64::consts::PI;
                let k0 = ((lo + b) / pi).ceil() as i64;
                (k0..)
                    .map(|k| k as f64 * pi - b)
                    .take_while(|&y| y < hi)
                    .filter(|&y| y > lo)
                    .collect()
            }
            _ => Vec::new(),
        }
    }
}

/// `x = −[(√3 − 3y − 6) S1 + b (√3 + 3y + 6) S2] / [(√3 − 3y + 3) S1 + b (√3 + 3y − 3) S2]`
/// split into numerator and denominator.
fn sqrt3_ratio_at(y: f64, b: f64, s1: f64, s2: f64) -> (f64, f64) {
    let num = -((SQRT3 - 3.0 * y - 6.0) * s1 + b * (SQRT3 + 3.0 * y + 6.0) * s2);
    let den = (SQRT3 - 3.0 * y + 3.0) * s1 + b * (SQRT3 + 3.0 * y - 3.0) * s2;
    (num, den)
}

/// Free-function form of [`ClosedFormFamily::x`].
pub fn closed_form_x(f: &ClosedFormFamily, y: f64) -> Result<f64> {
    f.x(y)
}

/// `|x'(y) − rhs(y, x(y))| / max(1, |rhs|)` for the closed form of `f`
/// against the Riccati equation with constants `p`, where `x'` is a
/// five-point central difference (truncation and rounding both near 1e-12).
pub fn rhs_defect(f: &ClosedFormFamily, p: &RiccatiParams, y: f64) -> Result<f64> {
    let h = 1e-3 * y.abs().max(1.0);
    let x = |s: f64| f.x(s);
    let dx = (x(y - 2.0 * h)? - 8.0 * x(y - h)? + 8.0 * x(y + h)? - x(y + 2.0 * h)?) / (12.0 * h);
    let rhs = p.rhs(y, f.x(y)?);
    let d = (dx - rhs).abs() / rhs.abs().max(1.0);
    if !d.is_finite() {
        return Err(Error::domain(
            y,
            "closed form is not finite near this point",
        ));
    }
    Ok(d)
}

/// Integrates the Riccati equation from `(y0, x0)` to `y_end` with local
/// error tolerance `opts.tol`.
pub fn integrate_ode(
    p: &RiccatiParams,
    y0: f64,
    x0: f64,
    y_end: f64,
    opts: OdeOptions,
) -> Result<OdePath> {
    p.validate()?;
    dopri5(|y, x| p.rhs(y, x), y0, x0, y_end, opts)
}

/// Result of integrating a catalog family from its own initial value.
#[derive(Clone, Debug)]
pub struct FamilyIntegration {
    pub path: OdePath,
    /// Set when a pole lay in the requested span; integration stopped
    /// `POLE_MARGIN` short of it.
    pub stopped_before_pole: Option<f64>,
}

/// Distance kept from a pole when integration is cut short.
pub const POLE_MARGIN: f64 = 1e-6;

/// Integrates from `(y0, x(y0))` towards `y_end`, stopping [`POLE_MARGIN`]
/// before the first pole of the closed form.
pub fn integrate_family(
    f: &ClosedFormFamily,
    y0: f64,
    y_end: f64,
    opts: OdeOptions,
) -> Result<FamilyIntegration> {
    let x0 = f.x(y0)?;
    let poles = f.poles_between(y0, y_end);
    let forward = y_end >= y0;
    let first = if forward {
        poles
            .iter()
            .cloned()
            .fold(None, |m: Option<f64>, p| Some(m.map_or(p, |m| m.min(p))))
    } else {
        poles
            .iter()
            .cloned()
            .fold(None, |m: Option<f64>, p| Some(m.map_or(p, |m| m.max(p))))
    };
    let stop = match first {
        Some(p) if forward => p - POLE_MARGIN,
        Some(p) => p + POLE_MARGIN,
        None => y_end,
    };
    let path = integrate_ode(&f.params(), y0, x0, stop, opts)?;
    Ok(FamilyIntegration {
        path,
        stopped_before_pole: first,
    })
}

/// One row of a numeric-vs-closed-form comparison.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub y: f64,
    pub x_numeric: f64,
    pub x_closed: f64,
    pub deviation: f64,
}

/// Evaluates the integrated path and the closed form at `samples` evenly
/// spaced points across the path's span (endpoints included).
pub fn compare_with_closed_form(
    f: &ClosedFormFamily,
    path: &OdePath,
    samples: usize,
) -> Result<Vec<ComparisonRow>> {
    let (y0, _) = path.start();
    let (y1, _) = path.end();
    let n = samples.max(2);
    (0..n)
        .map(|i| {
            let y = if i + 1 == n {
                y1
            } else {
                y0 + (y1 - y0) * i as f64 / (n - 1) as f64
            };
            let x_numeric = path
                .eval(y)
                .ok_or_else(|| Error::contract("sample outside integrated span"))?;
            let x_closed = f.x(y)?;
            Ok(ComparisonRow {
                y,
                x_numeric,
                x_closed,
                deviation: (x_numeric - x_closed).abs(),
            })
        })
        .collect()
}

/// Solves `x(y) = x` for `y` inside `bracket`, where `x(·)` is monotone.
///
/// Newton steps use the Riccati right-hand side as `dx/dy` and fall back to
/// bisection whenever a step leaves the bracket or the slope vanishes (the
/// tanh family at `y = 0`). Near that critical point the local model
/// `x ≈ y³/3` seeds the iteration.
pub fn invert_monotone(f: &ClosedFormFamily, x: f64, bracket: (f64, f64)) -> Result<f64> {
    let (lo, hi) = bracket;
    if !(lo < hi) {
        return Err(Error::contract(format!("empty bracket [{lo}, {hi}]")));
    }
    if let Some(p) = f.poles_between(lo, hi).first() {
        return Err(Error::contract(format!(
            "bracket [{lo}, {hi}] contains a pole at {p}"
        )));
    }
    let p = f.params();
    let guess = match *f {
        ClosedFormFamily::Tanh { b } if b == -1.0 && x.abs() < 0.1 => Some((3.0 * x).cbrt()),
        _ => None,
    };
    solve_monotone(
        |y| f.x(y).unwrap_or(f64::NAN),
        |y| f.x(y).map(|xv| p.rhs(y, xv)).unwrap_or(f64::NAN),
        x,
        lo,
        hi,
        guess,
        RootOptions {
            residual_tol: 1e-12,
            max_iter: 400,
        },
    )
}

/// A monotone, pole-free branch `y ∈ [lo, hi]` of a catalog family, used to
/// define an implicit profile.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RiccatiBranch {
    pub family: ClosedFormFamily,
    pub bracket: (f64, f64),
}

impl RiccatiBranch {
    pub fn new(family: ClosedFormFamily, bracket: (f64, f64)) -> Result<Self> {
        let (lo, hi) = bracket;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::contract(format!("invalid bracket [{lo}, {hi}]")));
        }
        if let Some(p) = family.poles_between(lo, hi).first() {
            return Err(Error::contract(format!("branch contains a pole at {p}")));
        }
        const SAMPLES: usize = 512;
        let xs: Vec<f64> = (0..=SAMPLES)
            .map(|i| family.x(lo + (hi - lo) * i as f64 / SAMPLES as f64))
            .collect::<Result<_>>()?;
        let increasing = xs.windows(2).all(|w| w[1] > w[0]);
        let decreasing = xs.windows(2).all(|w| w[1] < w[0]);
        if !(increasing || decreasing) {
            return Err(Error::contract(format!(
                "{} family is not monotone on [{lo}, {hi}]",
                family.name()
            )));
        }
        Ok(RiccatiBranch { family, bracket })
    }

    pub fn params(&self) -> RiccatiParams {
        self.family.params()
    }

    /// Image of the bracket, ordered.
    pub fn x_range(&self) -> (f64, f64) {
        let a = self.family.x(self.bracket.0).expect("validated branch");
        let b = self.family.x(self.bracket.1).expect("validated branch");
        (a.min(b), a.max(b))
    }

    /// `x` values at which `dx/dy` vanishes inside the branch.
    pub fn singular_x(&self) -> Vec<f64> {
        self.family
            .critical_points_between(self.bracket.0, self.bracket.1)
            .into_iter()
            .filter_map(|y| self.family.x(y).ok())
            .collect()
    }

    pub fn y(&self, x: f64) -> Result<f64> {
        invert_monotone(&self.family, x, self.bracket).map_err(|e| match e {
            Error::NoRoot(msg) => Error::domain(x, msg),
            other => other,
        })
    }

    /// `(y, y', y'')` at `x`, from `y' = r/A1²` and `y'' = −2 r A1'/A1³`
    /// with `A1 = m x + m1 − (c1 x + c2) y` and
    /// `A1' = m − c1 y − (c1 x + c2) y'`.
    pub fn y_jet(&self, x: f64) -> Result<Jet> {
        let y = self.y(x)?;
        let p = self.params();
        let a1 = p.linear_part(y, x);
        if a1 == 0.0 {
            return Err(Error::domain(x, "A1 vanishes"));
        }
        let y1 = p.r / (a1 * a1);
        let a1p = p.m - p.c1 * y - (p.c1 * x + p.c2) * y1;
        let y2 = -2.0 * p.r * a1p / (a1 * a1 * a1);
        Jet::new(&[y, y1, y2])
    }
}
