//! Dormand–Prince 5(4) integrator for scalar ODEs with continuous output.

use crate::error::{Error, Result};

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];

const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];

const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

#[derive(Clone, Copy, Debug)]
pub struct OdeOptions {
    /// Local error tolerance, applied as both absolute and relative bound.
    pub tol: f64,
    pub max_steps: usize,
    /// Solutions larger than this in magnitude are treated as a blow-up.
    pub blow_up: f64,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions {
            tol: 1e-10,
            max_steps: 1_000_000,
            blow_up: 1e12,
        }
    }
}

/// One accepted step with its quartic continuous extension.
#[derive(Clone, Copy, Debug)]
struct DenseStep {
    t0: f64,
    h: f64,
    cont: [f64; 5],
}

impl DenseStep {
    fn eval(&self, t: f64) -> f64 {
        let s = (t - self.t0) / self.h;
        let s1 = 1.0 - s;
        let c = &self.cont;
        c[0] + (c[1] + (c[2] + (c[3] + c[4] * s1) * s) * s1) * s
    }
}

/// Accepted mesh plus the continuous extension between mesh points.
#[derive(Clone, Debug)]
pub struct OdePath {
    pub nodes: Vec<(f64, f64)>,
    steps: Vec<DenseStep>,
}

impl OdePath {
    pub fn start(&self) -> (f64, f64) {
        self.nodes[0]
    }

    pub fn end(&self) -> (f64, f64) {
        *self
            .nodes
            .last()
            .expect("path has at least the initial node")
    }

    /// Continuous-output value at `t` inside the integrated span.
    pub fn eval(&self, t: f64) -> Option<f64> {
        let (t_first, x_first) = self.start();
        let (t_last, _) = self.end();
        let (lo, hi) = if t_first <= t_last {
            (t_first, t_last)
        } else {
            (t_last, t_first)
        };
        if t < lo || t > hi {
            return None;
        }
        if self.steps.is_empty() {
            return Some(x_first);
        }
        let forward = t_last >= t_first;
        let idx = self.steps.partition_point(|s| {
            let end = s.t0 + s.h;
            if forward {
                end < t
            } else {
                end > t
            }
        });
        let step = self.steps[idx.min(self.steps.len() - 1)];
        Some(step.eval(t))
    }
}

/// Integrates `x' = f(t, x)` from `(t0, x0)` to `t_end`.
///
/// Returns [`Error::BlowUp`] with the last accepted abscissa when the step
/// size underflows, the solution leaves `opts.blow_up`, or `f` stops being
/// finite.
pub fn dopri5<F: Fn(f64, f64) -> f64>(
    f: F,
    t0: f64,
    x0: f64,
    t_end: f64,
    opts: OdeOptions,
) -> Result<OdePath> {
    if !(t0.is_finite() && x0.is_finite() && t_end.is_finite()) {
        return Err(Error::contract("ODE endpoints must be finite"));
    }
    let mut path = OdePath {
        nodes: vec![(t0, x0)],
        steps: Vec::new(),
    };
    if t0 == t_end {
        return Ok(path);
    }
    let dir = (t_end - t0).signum();
    let span = (t_end - t0).abs();
    let mut t = t0;
    let mut x = x0;
    let mut k0 = f(t, x);
    if !k0.is_finite() {
        return Err(Error::BlowUp { last_valid: t });
    }
    let mut h = dir * (span * 1e-3).min(1e-2);
    let mut steps = 0;
    while (t_end - t) * dir > 0.0 {
        if steps >= opts.max_steps {
            return Err(Error::BlowUp { last_valid: t });
        }
        steps += 1;
        if (t + h - t_end) * dir > 0.0 {
            h = t_end - t;
        }
        let hmin = 1e-14 * t.abs().max(1.0);
        if h.abs() < hmin {
            return Err(Error::BlowUp { last_valid: t });
        }
        let mut k = [0.0; 7];
        k[0] = k0;
        for s in 1..7 {
            let xs = x + h * (0..s).map(|j| A[s][j] * k[j]).sum::<f64>();
            k[s] = f(t + C[s] * h, xs);
        }
        let x_new = x + h * (0..6).map(|j| A[6][j] * k[j]).sum::<f64>();
        let err_raw = h * (0..7).map(|j| E[j] * k[j]).sum::<f64>();
        let scale = opts.tol * (1.0 + x.abs().max(x_new.abs()));
        let err = (err_raw / scale).abs();
        if !err.is_finite() || !x_new.is_finite() {
            h *= 0.2;
            continue;
        }
        if err <= 1.0 {
            if x_new.abs() > opts.blow_up {
                return Err(Error::BlowUp { last_valid: t });
            }
            let ydiff = x_new - x;
            let bspl = h * k[0] - ydiff;
            let cont = [
                x,
                ydiff,
                bspl,
                ydiff - h * k[6] - bspl,
                h * (0..7).map(|j| D[j] * k[j]).sum::<f64>(),
            ];
            path.steps.push(DenseStep { t0: t, h, cont });
            t = if (t + h - t_end) * dir >= 0.0 {
                t_end
            } else {
                t + h
            };
            x = x_new;
            k0 = k[6];
            path.nodes.push((t, x));
        }
        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        h *= factor;
    }
    Ok(path)
}
