//! Truncated Taylor jets and the waveform catalog.
//!
//! A [`Jet`] stores a value together with its first few derivatives,
//! unnormalized (`coeffs[k]` is the k-th derivative itself, not divided by
//! `k!`). Every residual check in the crate is evaluated by pushing jets
//! through the chain rule, so the derivatives are exact up to rounding.
//!
//! [`Waveform`] supplies the arbitrary single-variable functions that fill
//! the `T` and `X` slots of the general solutions. Built-in waveforms return
//! analytic derivatives up to order three.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Highest derivative order carried by a [`Jet`].
pub const MAX_ORDER: usize = 3;

const BINOMIAL: [[f64; 4]; 4] = [
    [1.0, 0.0, 0.0, 0.0],
    [1.0, 1.0, 0.0, 0.0],
    [1.0, 2.0, 1.0, 0.0],
    [1.0, 3.0, 3.0, 1.0],
];

/// A value and its derivatives up to `order` (at most [`MAX_ORDER`]).
///
/// Binary arithmetic between jets of different orders truncates to the
/// smaller order. Composition is strict and rejects mismatched orders.
#[derive(Clone, Copy, PartialEq)]
pub struct Jet {
    order: usize,
    d: [f64; 4],
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Jet").field(&self.coeffs()).finish()
    }
}

impl Jet {
    /// Builds a jet from `[f, f', f'', ...]`; between one and four entries.
    pub fn new(coeffs: &[f64]) -> Result<Self> {
        if coeffs.is_empty() || coeffs.len() > MAX_ORDER + 1 {
            return Err(Error::contract(format!(
                "jet needs 1..={} coefficients, got {}",
                MAX_ORDER + 1,
                coeffs.len()
            )));
        }
        let mut d = [0.0; 4];
        d[..coeffs.len()].copy_from_slice(coeffs);
        Ok(Jet {
            order: coeffs.len() - 1,
            d,
        })
    }

    fn raw(order: usize, d: [f64; 4]) -> Self {
        debug_assert!(order <= MAX_ORDER);
        let mut d = d;
        for v in d.iter_mut().skip(order + 1) {
            *v = 0.0;
        }
        Jet { order, d }
    }

    pub fn constant(value: f64, order: usize) -> Self {
        Jet::raw(order.min(MAX_ORDER), [value, 0.0, 0.0, 0.0])
    }

    /// The independent variable itself: `(v, 1, 0, ...)`.
    pub fn variable(value: f64, order: usize) -> Self {
        let order = order.min(MAX_ORDER);
        let mut d = [value, 1.0, 0.0, 0.0];
        if order == 0 {
            d[1] = 0.0;
        }
        Jet::raw(order, d)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn value(&self) -> f64 {
        self.d[0]
    }

    /// k-th derivative; zero above the carried order.
    pub fn deriv(&self, k: usize) -> f64 {
        if k <= self.order {
            self.d[k]
        } else {
            0.0
        }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.d[..=self.order]
    }

    pub fn truncate(&self, order: usize) -> Jet {
        Jet::raw(order.min(self.order), self.d)
    }

    /// The jet of `f'`, one order lower. A zero-order jet yields the zero jet.
    pub fn derivative(&self) -> Jet {
        if self.order == 0 {
            return Jet::constant(0.0, 0);
        }
        Jet::raw(self.order - 1, [self.d[1], self.d[2], self.d[3], 0.0])
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs().iter().all(|v| v.is_finite())
    }

    /// Chain rule `outer ∘ inner`, where `outer` holds the derivatives of the
    /// outer function evaluated at `inner.value()`.
    pub fn compose(outer: &Jet, inner: &Jet) -> Result<Jet> {
        if outer.order != inner.order {
            return Err(Error::contract(format!(
                "compose order mismatch: outer {} vs inner {}",
                outer.order, inner.order
            )));
        }
        Ok(inner.lift(outer.d))
    }

    /// Applies a function whose derivatives at `self.value()` are `f`.
    pub fn lift(&self, f: [f64; 4]) -> Jet {
        let g = &self.d;
        let mut r = [f[0], 0.0, 0.0, 0.0];
        if self.order >= 1 {
            r[1] = f[1] * g[1];
        }
        if self.order >= 2 {
            r[2] = f[2] * g[1] * g[1] + f[1] * g[2];
        }
        if self.order >= 3 {
            r[3] = f[3] * g[1] * g[1] * g[1] + 3.0 * f[2] * g[1] * g[2] + f[1] * g[3];
        }
        Jet::raw(self.order, r)
    }

    pub fn sin(&self) -> Jet {
        let (s, c) = self.d[0].sin_cos();
        self.lift([s, c, -s, -c])
    }

    pub fn cos(&self) -> Jet {
        let (s, c) = self.d[0].sin_cos();
        self.lift([c, -s, -c, s])
    }

    pub fn exp(&self) -> Jet {
        let e = self.d[0].exp();
        self.lift([e; 4])
    }

    pub fn ln(&self) -> Jet {
        let v = self.d[0];
        self.lift([v.ln(), 1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v)])
    }

    pub fn recip(&self) -> Jet {
        let v = self.d[0];
        let i = 1.0 / v;
        self.lift([i, -i * i, 2.0 * i * i * i, -6.0 * i * i * i * i])
    }

    /// `self^p` for real `p`; the base must be positive unless `p` is an integer.
    pub fn powf(&self, p: f64) -> Jet {
        let v = self.d[0];
        self.lift([
            v.powf(p),
            p * v.powf(p - 1.0),
            p * (p - 1.0) * v.powf(p - 2.0),
            p * (p - 1.0) * (p - 2.0) * v.powf(p - 3.0),
        ])
    }

    pub fn powi(&self, n: i32) -> Jet {
        let v = self.d[0];
        let p = n as f64;
        self.lift([
            v.powi(n),
            p * v.powi(n - 1),
            p * (p - 1.0) * v.powi(n - 2),
            p * (p - 1.0) * (p - 2.0) * v.powi(n - 3),
        ])
    }

    pub fn sqrt(&self) -> Jet {
        self.powf(0.5)
    }

    /// Real cube root, odd-extended to negative arguments.
    pub fn cbrt(&self) -> Jet {
        let v = self.d[0];
        let c = v.cbrt();
        // c' = 1/(3 c^2), c'' = -2/(9 c^5), c''' = 10/(27 c^8)
        let c2 = c * c;
        let c5 = c2 * c2 * c;
        self.lift([
            c,
            1.0 / (3.0 * c2),
            -2.0 / (9.0 * c5),
            10.0 / (27.0 * c5 * c2 * c),
        ])
    }

    pub fn tanh(&self) -> Jet {
        let t = self.d[0].tanh();
        let s = 1.0 - t * t;
        self.lift([t, s, -2.0 * t * s, s * (6.0 * t * t - 2.0)])
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        let n = self.order.min(rhs.order);
        let mut r = [0.0; 4];
        for (k, v) in r.iter_mut().enumerate().take(n + 1) {
            *v = self.d[k] + rhs.d[k];
        }
        Jet::raw(n, r)
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        self + (-rhs)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet::raw(self.order, self.d.map(|v| -v))
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        let n = self.order.min(rhs.order);
        let mut r = [0.0; 4];
        for (k, v) in r.iter_mut().enumerate().take(n + 1) {
            *v = (0..=k)
                .map(|j| BINOMIAL[k][j] * self.d[j] * rhs.d[k - j])
                .sum();
        }
        Jet::raw(n, r)
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, rhs: Jet) -> Jet {
        // f = h g  =>  h^(k) = (f^(k) - sum_{j<k} C(k,j) h^(j) g^(k-j)) / g
        let n = self.order.min(rhs.order);
        let g = &rhs.d;
        let mut h = [0.0; 4];
        for k in 0..=n {
            let mut acc = self.d[k];
            for j in 0..k {
                acc -= BINOMIAL[k][j] * h[j] * g[k - j];
            }
            h[k] = acc / g[0];
        }
        Jet::raw(n, h)
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(self, rhs: f64) -> Jet {
        let mut d = self.d;
        d[0] += rhs;
        Jet::raw(self.order, d)
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(self, rhs: f64) -> Jet {
        self + (-rhs)
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        Jet::raw(self.order, self.d.map(|v| v * rhs))
    }
}

impl Mul<Jet> for f64 {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        rhs * self
    }
}

impl Add<Jet> for f64 {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        rhs + self
    }
}

impl Sub<Jet> for f64 {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        -rhs + self
    }
}

impl Div<f64> for Jet {
    type Output = Jet;
    fn div(self, rhs: f64) -> Jet {
        Jet::raw(self.order, self.d.map(|v| v / rhs))
    }
}

/// Free-function form of [`Jet::compose`].
pub fn jet_compose(outer: &Jet, inner: &Jet) -> Result<Jet> {
    Jet::compose(outer, inner)
}

type CustomFn = dyn Fn(f64, usize) -> Jet + Send + Sync;

/// A user-supplied waveform. The closure receives `(s, order)` and must
/// return a jet of exactly that order with analytic derivatives.
#[derive(Clone)]
pub struct CustomWaveform(Arc<CustomFn>);

impl CustomWaveform {
    pub fn new(f: impl Fn(f64, usize) -> Jet + Send + Sync + 'static) -> Self {
        CustomWaveform(Arc::new(f))
    }
}

impl fmt::Debug for CustomWaveform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("CustomWaveform(..)")
    }
}

/// An arbitrary function of one variable with analytic derivatives to
/// order three.
#[derive(Clone, Debug)]
pub enum Waveform {
    /// `exp(-((s - center)/width)^2)`
    Gaussian {
        center: f64,
        width: f64,
    },
    /// `sin(omega s + phase)`
    Sine {
        omega: f64,
        phase: f64,
    },
    /// `c0 + c1 s + c2 s^2 + ...`
    Polynomial {
        coeffs: Vec<f64>,
    },
    /// `e · exp(-1/(1 - z^2))` for `|z| < 1`, `z = (s - center)/half_width`,
    /// and zero outside. Peak value 1.
    CompactBump {
        center: f64,
        half_width: f64,
    },
    Zero,
    Custom(CustomWaveform),
}

impl Waveform {
    pub fn gaussian(center: f64, width: f64) -> Self {
        Waveform::Gaussian { center, width }
    }

    pub fn sine(omega: f64) -> Self {
        Waveform::Sine { omega, phase: 0.0 }
    }

    pub fn bump(center: f64, half_width: f64) -> Self {
        Waveform::CompactBump { center, half_width }
    }

    pub fn polynomial(coeffs: Vec<f64>) -> Self {
        Waveform::Polynomial { coeffs }
    }

    pub fn custom(f: impl Fn(f64, usize) -> Jet + Send + Sync + 'static) -> Self {
        Waveform::Custom(CustomWaveform::new(f))
    }

    /// Support interval of a compactly supported waveform.
    pub fn support(&self) -> Option<(f64, f64)> {
        match *self {
            Waveform::CompactBump { center, half_width } => {
                Some((center - half_width, center + half_width))
            }
            _ => None,
        }
    }

    /// `s ↦ W(s + tau)`.
    pub fn shifted(&self, tau: f64) -> Waveform {
        match self {
            Waveform::Gaussian { center, width } => Waveform::Gaussian {
                center: center - tau,
                width: *width,
            },
            Waveform::Sine { omega, phase } => Waveform::Sine {
                omega: *omega,
                phase: phase + omega * tau,
            },
            Waveform::CompactBump { center, half_width } => Waveform::CompactBump {
                center: center - tau,
                half_width: *half_width,
            },
            Waveform::Zero => Waveform::Zero,
            other => {
                let inner = other.clone();
                Waveform::custom(move |s, order| {
                    inner
                        .eval(s + tau, order)
                        .expect("order validated by caller")
                })
            }
        }
    }

    /// Derivatives `[W(s), W'(s), ..., W^(order)(s)]` as a jet.
    pub fn eval(&self, s: f64, order: usize) -> Result<Jet> {
        if order > MAX_ORDER {
            return Err(Error::contract(format!(
                "waveform order {order} exceeds {MAX_ORDER}"
            )));
        }
        if !s.is_finite() {
            return Err(Error::contract("waveform argument is not finite"));
        }
        let jet = match self {
            Waveform::Gaussian { center, width } => {
                let z = Jet::raw(order, [(s - center) / width, 1.0 / width, 0.0, 0.0]);
                (-(z * z)).exp()
            }
            Waveform::Sine { omega, phase } => {
                Jet::raw(order, [omega * s + phase, *omega, 0.0, 0.0]).sin()
            }
            Waveform::Polynomial { coeffs } => {
                let x = Jet::variable(s, order);
                coeffs
                    .iter()
                    .rev()
                    .fold(Jet::constant(0.0, order), |acc, &c| acc * x + c)
            }
            Waveform::CompactBump { center, half_width } => {
                let zv = (s - center) / half_width;
                if zv.abs() >= 1.0 {
                    Jet::constant(0.0, order)
                } else {
                    let z = Jet::raw(order, [zv, 1.0 / half_width, 0.0, 0.0]);
                    let q = -(z * z) + 1.0;
                    (-q.recip()).exp() * std::f64::consts::E
                }
            }
            Waveform::Zero => Jet::constant(0.0, order),
            Waveform::Custom(f) => {
                let j = (f.0)(s, order);
                if j.order() != order {
                    return Err(Error::contract(format!(
                        "custom waveform returned order {} for request {order}",
                        j.order()
                    )));
                }
                j
            }
        };
        Ok(jet)
    }
}

/// Free-function form of [`Waveform::eval`].
pub fn jet_eval(w: &Waveform, s: f64, order: usize) -> Result<Jet> {
    w.eval(s, order)
}

#[cfg_attr(feature = "schema", derive(schemars::JsonSchema))]
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WaveformKind {
    Gaussian,
    Sine,
    Polynomial,
    CompactBump,
    Zero,
}

/// Serializable waveform descriptor, e.g. `{"kind":"gaussian","params":[0,1]}`.
///
/// | kind           | params                     |
/// |----------------|----------------------------|
/// | `gaussian`     | `[center, width]`          |
/// | `sine`         | `[omega]` or `[omega, phase]` |
/// | `polynomial`   | `[c0, c1, ...]`            |
/// | `compact_bump` | `[center, half_width]`     |
/// | `zero`         | `[]`                       |
#[cfg_attr(feature = "schema", derive(schemars::JsonSchema))]
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WaveformSpec {
    pub kind: WaveformKind,
    #[serde(default)]
    pub params: Vec<f64>,
}

impl TryFrom<&WaveformSpec> for Waveform {
    type Error = Error;

    fn try_from(spec: &WaveformSpec) -> Result<Self> {
        let p = &spec.params;
        if p.iter().any(|v| !v.is_finite()) {
            return Err(Error::contract("waveform parameters must be finite"));
        }
        let want = |n: usize| -> Result<()> {
            if p.len() == n {
                Ok(())
            } else {
                Err(Error::contract(format!(
                    "{:?} waveform takes {n} params, got {}",
                    spec.kind,
                    p.len()
                )))
            }
        };
        match spec.kind {
            WaveformKind::Gaussian => {
                want(2)?;
                if p[1] <= 0.0 {
                    return Err(Error::contract("gaussian width must be positive"));
                }
                Ok(Waveform::gaussian(p[0], p[1]))
            }
            WaveformKind::Sine => match p.len() {
                1 => Ok(Waveform::sine(p[0])),
                2 => Ok(Waveform::Sine {
                    omega: p[0],
                    phase: p[1],
                }),
                n => Err(Error::contract(format!(
                    "sine takes 1 or 2 params, got {n}"
                ))),
            },
            WaveformKind::Polynomial => {
                if p.is_empty() {
                    return Err(Error::contract("polynomial needs at least one coefficient"));
                }
                Ok(Waveform::polynomial(p.clone()))
            }
            WaveformKind::CompactBump => {
                want(2)?;
                if p[1] <= 0.0 {
                    return Err(Error::contract("bump half-width must be positive"));
                }
                Ok(Waveform::bump(p[0], p[1]))
            }
            WaveformKind::Zero => {
                want(0)?;
                Ok(Waveform::Zero)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn sine_at_zero() {
        let j = jet_eval(&Waveform::sine(1.0), 0.0, 3).unwrap();
        assert_eq!(j.coeffs(), &[0.0, 1.0, 0.0, -1.0]);
    }

    #[test]
    fn zero_waveform() {
        let j = jet_eval(&Waveform::Zero, 12.5, 2).unwrap();
        assert_eq!(j.coeffs(), &[0.0, 0.0, 0.0]);
    }

    #[test]
    fn gaussian_matches_hand_derivatives() {
        // f = e^{-s^2}, f' = -2s f, f'' = (4s^2 - 2) f
        let j = jet_eval(&Waveform::gaussian(0.0, 1.0), 1.0, 2).unwrap();
        let e = (-1.0f64).exp();
        assert_relative_eq!(j.deriv(0), e, max_relative = 1e-15);
        assert_relative_eq!(j.deriv(1), -2.0 * e, max_relative = 1e-15);
        assert_relative_eq!(j.deriv(2), 2.0 * e, max_relative = 1e-15);
    }

    #[test]
    fn order_above_three_rejected() {
        assert!(matches!(
            jet_eval(&Waveform::sine(1.0), 0.0, 4),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn compose_identity_outer() {
        let inner = Jet::new(&[2.0, 0.3, -1.2, 4.0]).unwrap();
        let outer = Jet::variable(inner.value(), 3);
        assert_eq!(jet_compose(&outer, &inner).unwrap(), inner);
    }

    #[test]
    fn compose_square_of_shift() {
        // f(s) = s^2 at s = g(2) = 3; g(x) = x + 1
        let inner = Jet::new(&[3.0, 1.0, 0.0]).unwrap();
        let outer = Jet::new(&[9.0, 6.0, 2.0]).unwrap();
        let r = jet_compose(&outer, &inner).unwrap();
        assert_eq!(r.coeffs(), &[9.0, 6.0, 2.0]);
    }

    #[test]
    fn compose_sin_of_square() {
        // d/dx sin(x^2) = 2x cos x^2; d2 = 2 cos x^2 - 4x^2 sin x^2; at x = 1
        let inner = Jet::new(&[1.0, 2.0, 2.0]).unwrap();
        let s1 = 1.0f64.sin();
        let c1 = 1.0f64.cos();
        let outer = Jet::new(&[s1, c1, -s1]).unwrap();
        let r = jet_compose(&outer, &inner).unwrap();
        assert_relative_eq!(r.deriv(0), s1, max_relative = 1e-15);
        assert_relative_eq!(r.deriv(1), 2.0 * c1, max_relative = 1e-15);
        assert_relative_eq!(r.deriv(2), 2.0 * c1 - 4.0 * s1, max_relative = 1e-14);
    }

    #[test]
    fn compose_order_mismatch() {
        let a = Jet::new(&[1.0, 2.0]).unwrap();
        let b = Jet::new(&[1.0, 2.0, 3.0]).unwrap();
        assert!(matches!(jet_compose(&a, &b), Err(Error::Contract(_))));
    }

    #[test]
    fn bump_vanishes_outside_support() {
        let w = Waveform::bump(0.5, 0.25);
        for s in [0.25, 0.75, -3.0, 10.0, 0.2499] {
            assert_eq!(w.eval(s, 3).unwrap().coeffs(), &[0.0; 4]);
        }
        assert_relative_eq!(w.eval(0.5, 0).unwrap().value(), 1.0, max_relative = 1e-15);
    }

    #[test]
    fn shifted_waveform_matches_argument_shift() {
        for w in [
            Waveform::gaussian(0.2, 0.7),
            Waveform::sine(2.5),
            Waveform::bump(0.0, 1.0),
            Waveform::polynomial(vec![1.0, -2.0, 0.5, 0.25]),
        ] {
            let shifted = w.shifted(0.3);
            let a = shifted.eval(0.1, 3).unwrap();
            let b = w.eval(0.4, 3).unwrap();
            for k in 0..=3 {
                assert!((a.deriv(k) - b.deriv(k)).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn spec_parsing() {
        let spec = WaveformSpec {
            kind: WaveformKind::Gaussian,
            params: vec![0.0, 1.0],
        };
        assert!(matches!(
            Waveform::try_from(&spec).unwrap(),
            Waveform::Gaussian { .. }
        ));
        let bad = WaveformSpec {
            kind: WaveformKind::CompactBump,
            params: vec![0.0],
        };
        assert!(Waveform::try_from(&bad).is_err());
    }
}
