//! Sound-speed profiles `K(x)`, the travel-time coordinate `a(x) = ∫ dx/K`,
//! characteristic variables and the Laplace invariant.
//!
//! Zeros of `K` are *singular points*: they split the declared domain into
//! components, and nothing here integrates or inverts across one.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jets::Jet;
use crate::numeric::quadrature::{integrate, QuadratureOptions};
use crate::numeric::roots::{solve_monotone, RootOptions};
use crate::riccati::{ClosedFormFamily, RiccatiBranch, RiccatiParams};

type KFn = dyn Fn(&Jet) -> Jet + Send + Sync;

/// A user-supplied `K`, written as a function of a jet so derivatives come
/// for free: `Profile::custom(|x| x.powi(4), ..)`.
#[derive(Clone)]
pub struct CustomProfile(Arc<KFn>);

impl fmt::Debug for CustomProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("CustomProfile(..)")
    }
}

#[derive(Clone, Debug)]
pub enum ProfileKind {
    /// `K = k`.
    Constant {
        k: f64,
    },
    /// `K² = x^alpha` on `x > 0`.
    PowerLaw {
        alpha: f64,
    },
    /// `K = (m1 x + m2)²`, the profiles with vanishing Laplace invariant.
    Quadratic {
        m1: f64,
        m2: f64,
    },
    /// `K² = [(s1 x + s2)(c1 x + c2)²]^{4/3}`.
    GenEuler {
        s1: f64,
        s2: f64,
        c1: f64,
        c2: f64,
    },
    /// `K = amplitude · e^{rate x}`.
    Exponential {
        amplitude: f64,
        rate: f64,
    },
    /// `K = A1²/|r|` along a branch `x(y)` of a Riccati family.
    RiccatiImplicit(RiccatiBranch),
    Custom(CustomProfile),
}

/// Where the travel time is zero.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Base {
    /// The integration constant of the profile's closed form (for example
    /// `a = −1/x` for `K = x²`, i.e. zero "at infinity").
    Natural,
    Point(f64),
}

#[derive(Clone, Debug)]
pub struct Profile {
    kind: ProfileKind,
    domain: (f64, f64),
    base: Base,
}

impl Profile {
    fn build(kind: ProfileKind, domain: (f64, f64)) -> Profile {
        Profile {
            kind,
            domain,
            base: Base::Natural,
        }
    }

    pub fn constant(k: f64) -> Result<Profile> {
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::contract(format!(
                "constant speed must be positive, got {k}"
            )));
        }
        Ok(Profile::build(
            ProfileKind::Constant { k },
            (f64::NEG_INFINITY, f64::INFINITY),
        ))
    }

    pub fn power_law(alpha: f64) -> Result<Profile> {
        if !alpha.is_finite() {
            return Err(Error::contract("power-law exponent must be finite"));
        }
        Ok(Profile::build(
            ProfileKind::PowerLaw { alpha },
            (0.0, f64::INFINITY),
        ))
    }

    pub fn quadratic(m1: f64, m2: f64) -> Result<Profile> {
        if !(m1.is_finite() && m2.is_finite()) || (m1 == 0.0 && m2 == 0.0) {
            return Err(Error::contract(
                "quadratic profile needs finite m1, m2, not both zero",
            ));
        }
        Ok(Profile::build(
            ProfileKind::Quadratic { m1, m2 },
            (f64::NEG_INFINITY, f64::INFINITY),
        ))
    }

    pub fn gen_euler(s1: f64, s2: f64, c1: f64, c2: f64) -> Result<Profile> {
        if ![s1, s2, c1, c2].iter().all(|v| v.is_finite()) {
            return Err(Error::contract("gen_euler constants must be finite"));
        }
        if c1 * s2 - c2 * s1 == 0.0 {
            return Err(Error::contract("gen_euler requires c1·s2 − c2·s1 ≠ 0"));
        }
        Ok(Profile::build(
            ProfileKind::GenEuler { s1, s2, c1, c2 },
            (f64::NEG_INFINITY, f64::INFINITY),
        ))
    }

    pub fn exponential(amplitude: f64, rate: f64) -> Result<Profile> {
        if !(amplitude > 0.0 && amplitude.is_finite() && rate.is_finite()) {
            return Err(Error::contract(
                "exponential profile needs positive amplitude",
            ));
        }
        Ok(Profile::build(
            ProfileKind::Exponential { amplitude, rate },
            (f64::NEG_INFINITY, f64::INFINITY),
        ))
    }

    /// Profile defined implicitly by a monotone, pole-free branch
    /// `y ∈ bracket` of a closed-form Riccati solution.
    pub fn riccati_implicit(family: ClosedFormFamily, y_bracket: (f64, f64)) -> Result<Profile> {
        let branch = RiccatiBranch::new(family, y_bracket)?;
        let domain = branch.x_range();
        Ok(Profile::build(ProfileKind::RiccatiImplicit(branch), domain))
    }

    /// A custom `K` on `domain`. There is no closed-form travel time, so the
    /// base must be a point of the domain.
    pub fn custom(
        k: impl Fn(&Jet) -> Jet + Send + Sync + 'static,
        domain: (f64, f64),
        base: f64,
    ) -> Result<Profile> {
        let p = Profile::build(ProfileKind::Custom(CustomProfile(Arc::new(k))), domain);
        p.with_domain(domain)?.with_base(Base::Point(base))
    }

    /// Restricts the domain to the open interval `(lo, hi)`.
    pub fn with_domain(mut self, domain: (f64, f64)) -> Result<Profile> {
        let (lo, hi) = domain;
        if lo.is_nan() || hi.is_nan() || !(lo < hi) {
            return Err(Error::contract(format!("invalid domain ({lo}, {hi})")));
        }
        let (dlo, dhi) = self.natural_domain();
        if lo < dlo || hi > dhi {
            return Err(Error::contract(format!(
                "domain ({lo}, {hi}) exceeds the profile's natural domain ({dlo}, {dhi})"
            )));
        }
        self.domain = domain;
        if let Base::Point(x0) = self.base {
            self.check_interior(x0)?;
        }
        Ok(self)
    }

    pub fn with_base(mut self, base: Base) -> Result<Profile> {
        match base {
            Base::Point(x0) => {
                self.check_interior(x0)?;
            }
            Base::Natural => {
                if matches!(self.kind, ProfileKind::Custom(_)) {
                    return Err(Error::contract(
                        "custom profiles need an explicit base point",
                    ));
                }
            }
        }
        self.base = base;
        Ok(self)
    }

    pub fn kind(&self) -> &ProfileKind {
        &self.kind
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn base(&self) -> Base {
        self.base
    }

    fn natural_domain(&self) -> (f64, f64) {
        match &self.kind {
            ProfileKind::PowerLaw { .. } => (0.0, f64::INFINITY),
            ProfileKind::RiccatiImplicit(b) => b.x_range(),
            _ => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    /// Zeros of `K` strictly inside the domain, sorted.
    pub fn singular_points(&self) -> Vec<f64> {
        let mut pts = match &self.kind {
            ProfileKind::Quadratic { m1, m2 } if *m1 != 0.0 => vec![-m2 / m1],
            ProfileKind::GenEuler { s1, s2, c1, c2 } => {
                let mut v = Vec::new();
                if *s1 != 0.0 {
                    v.push(-s2 / s1);
                }
                if *c1 != 0.0 {
                    v.push(-c2 / c1);
                }
                v
            }
            ProfileKind::RiccatiImplicit(b) => b.singular_x(),
            _ => Vec::new(),
        };
        pts.retain(|&s| s > self.domain.0 && s < self.domain.1);
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }

    /// The connected piece of the domain between singular points that
    /// contains `x`.
    pub fn component_of(&self, x: f64) -> Result<(f64, f64)> {
        self.check_interior(x)?;
        let mut lo = self.domain.0;
        let mut hi = self.domain.1;
        for s in self.singular_points() {
            if s < x {
                lo = s;
            } else if s > x {
                hi = hi.min(s);
            }
        }
        Ok((lo, hi))
    }

    fn check_interior(&self, x: f64) -> Result<()> {
        if !x.is_finite() {
            return Err(Error::domain(x, "abscissa not finite"));
        }
        if !(x > self.domain.0 && x < self.domain.1) {
            return Err(Error::domain(
                x,
                format!("outside domain ({}, {})", self.domain.0, self.domain.1),
            ));
        }
        if self.singular_points().contains(&x) {
            return Err(Error::domain(x, "singular point (K = 0)"));
        }
        Ok(())
    }

    /// `(K, K', K'')` at `x`.
    pub fn jet(&self, x: f64) -> Result<Jet> {
        self.check_interior(x)?;
        let xj = Jet::variable(x, 2);
        let k = match &self.kind {
            ProfileKind::Constant { k } => Jet::constant(*k, 2),
            ProfileKind::PowerLaw { alpha } => xj.powf(alpha / 2.0),
            ProfileKind::Quadratic { m1, m2 } => (*m1 * xj + *m2).powi(2),
            ProfileKind::GenEuler { s1, s2, c1, c2 } => {
                let s = *s1 * xj + *s2;
                let c = *c1 * xj + *c2;
                (s * c * c).cbrt().powi(2)
            }
            ProfileKind::Exponential { amplitude, rate } => *amplitude * (*rate * xj).exp(),
            ProfileKind::RiccatiImplicit(b) => {
                let p = b.params();
                let y = b.y_jet(x)?;
                let a1 = p.m * xj + p.m1 - (p.c1 * xj + p.c2) * y;
                a1 * a1 / p.r.abs()
            }
            ProfileKind::Custom(f) => (f.0)(&xj),
        };
        if !k.is_finite() || !(k.value() > 0.0) {
            return Err(Error::domain(
                x,
                format!("K = {} is not positive", k.value()),
            ));
        }
        Ok(k)
    }

    pub fn k(&self, x: f64) -> Result<f64> {
        Ok(self.jet(x)?.value())
    }

    pub fn k_squared(&self, x: f64) -> Result<f64> {
        let k = self.k(x)?;
        Ok(k * k)
    }

    /// Travel time with the profile's natural integration constant, when a
    /// closed form exists.
    fn natural_travel_time(&self, x: f64) -> Option<f64> {
        Some(match &self.kind {
            ProfileKind::Constant { k } => x / k,
            ProfileKind::PowerLaw { alpha } => {
                let beta = alpha / 2.0;
                if beta == 1.0 {
                    x.ln()
                } else {
                    x.powf(1.0 - beta) / (1.0 - beta)
                }
            }
            ProfileKind::Quadratic { m1, m2 } => {
                if *m1 == 0.0 {
                    x / (m2 * m2)
                } else {
                    -1.0 / (m1 * (m1 * x + m2))
                }
            }
            ProfileKind::GenEuler { s1, s2, c1, c2 } => {
                let q = 3.0 / (c1 * s2 - c2 * s1);
                -q * ((s1 * x + s2) / (c1 * x + c2)).cbrt()
            }
            ProfileKind::Exponential { amplitude, rate } => {
                if *rate == 0.0 {
                    x / amplitude
                } else {
                    -(-rate * x).exp() / (amplitude * rate)
                }
            }
            ProfileKind::RiccatiImplicit(b) => {
                let y = b.y(x).ok()?;
                b.params().r.signum() * y
            }
            ProfileKind::Custom(_) => return None,
        })
    }

    /// Rejects `x0 → x` paths that leave the domain or cross a zero of `K`.
    fn check_path(&self, x0: f64, x: f64) -> Result<()> {
        self.check_interior(x)?;
        self.check_interior(x0)?;
        let (lo, hi) = if x0 < x { (x0, x) } else { (x, x0) };
        if let Some(s) = self
            .singular_points()
            .into_iter()
            .find(|&s| s > lo && s < hi)
        {
            return Err(Error::domain(
                s,
                format!("travel time from {x0} to {x} crosses a zero of K"),
            ));
        }
        Ok(())
    }

    /// `∫_{x0}^{x} dx/K` by adaptive quadrature (absolute tolerance 1e-12).
    pub fn slowness_integral(&self, x0: f64, x: f64) -> Result<f64> {
        self.check_path(x0, x)?;
        let r = integrate(
            |s| self.k(s).map(|k| 1.0 / k).unwrap_or(f64::NAN),
            x0,
            x,
            QuadratureOptions::default(),
        )
        .map_err(|e| match e {
            Error::NoRoot(msg) => Error::domain(x, msg),
            other => other,
        })?;
        Ok(r.value)
    }

    /// `a(x)`, zero at the base point.
    pub fn travel_time(&self, x: f64) -> Result<f64> {
        self.check_interior(x)?;
        match self.base {
            Base::Natural => self
                .natural_travel_time(x)
                .filter(|a| a.is_finite())
                .ok_or_else(|| Error::domain(x, "no closed-form travel time here")),
            Base::Point(x0) => {
                self.check_path(x0, x)?;
                match (self.natural_travel_time(x), self.natural_travel_time(x0)) {
                    (Some(a), Some(a0)) if a.is_finite() && a0.is_finite() => Ok(a - a0),
                    _ => self.slowness_integral(x0, x),
                }
            }
        }
    }

    /// `(a, a', a'') = (a, 1/K, −K'/K²)`.
    pub fn travel_time_jet(&self, x: f64) -> Result<Jet> {
        let a = self.travel_time(x)?;
        let k = self.jet(x)?;
        Jet::new(&[a, 1.0 / k.value(), -k.deriv(1) / (k.value() * k.value())])
    }

    /// Solves `a(x) = y` inside the base point's component (or, for the
    /// natural base, wherever the closed form lands).
    pub fn inverse_travel_time(&self, y: f64) -> Result<f64> {
        if !y.is_finite() {
            return Err(Error::domain(y, "travel time not finite"));
        }
        let shift = match self.base {
            Base::Natural => 0.0,
            Base::Point(x0) => match self.natural_travel_time(x0) {
                Some(a0) => a0,
                None => return self.inverse_numeric(y, x0),
            },
        };
        let yn = y + shift;
        let x = match &self.kind {
            ProfileKind::Constant { k } => k * yn,
            ProfileKind::PowerLaw { alpha } => {
                let beta = alpha / 2.0;
                if beta == 1.0 {
                    yn.exp()
                } else {
                    ((1.0 - beta) * yn).powf(1.0 / (1.0 - beta))
                }
            }
            ProfileKind::Quadratic { m1, m2 } => {
                if *m1 == 0.0 {
                    yn * m2 * m2
                } else {
                    (-1.0 / (m1 * yn) - m2) / m1
                }
            }
            ProfileKind::GenEuler { s1, s2, c1, c2 } => {
                let q = 3.0 / (c1 * s2 - c2 * s1);
                let w = (-yn / q).powi(3);
                (w * c2 - s2) / (s1 - w * c1)
            }
            ProfileKind::Exponential { amplitude, rate } => {
                if *rate == 0.0 {
                    yn * amplitude
                } else {
                    -(-amplitude * rate * yn).ln() / rate
                }
            }
            ProfileKind::RiccatiImplicit(b) => b.family.x(b.params().r.signum() * yn)?,
            ProfileKind::Custom(_) => unreachable!("custom profiles always have a base point"),
        };
        if !x.is_finite() {
            return Err(Error::domain(y, "travel time outside the profile's range"));
        }
        if let Base::Point(x0) = self.base {
            self.check_path(x0, x)
                .map_err(|_| Error::domain(y, "travel time reached outside the base component"))?;
        } else {
            self.check_interior(x)?;
        }
        Ok(x)
    }

    fn inverse_numeric(&self, y: f64, x0: f64) -> Result<f64> {
        let (lo, hi) = self.component_of(x0)?;
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(Error::contract(
                "numeric inversion needs a bounded domain component",
            ));
        }
        let inset = 1e-9 * (hi - lo);
        solve_monotone(
            |x| self.slowness_integral(x0, x).unwrap_or(f64::NAN),
            |x| self.k(x).map(|k| 1.0 / k).unwrap_or(f64::NAN),
            y,
            lo + inset,
            hi - inset,
            Some(x0),
            RootOptions::default(),
        )
        .map_err(|e| match e {
            Error::NoRoot(msg) => Error::domain(y, msg),
            other => other,
        })
    }

    /// `(I1, I2) = (t + a(x), t − a(x))`.
    pub fn characteristics(&self, t: f64, x: f64) -> Result<(f64, f64)> {
        let a = self.travel_time(x)?;
        Ok((t + a, t - a))
    }

    /// `h = K K''/2 − K'²/4`; zero exactly for the quadratic family.
    pub fn laplace_invariant(&self, x: f64) -> Result<f64> {
        let k = self.jet(x)?;
        Ok(k.value() * k.deriv(2) / 2.0 - k.deriv(1) * k.deriv(1) / 4.0)
    }

    /// Constants `r, m, m1, c1, c2` for which this profile's travel time
    /// satisfies `a' = r/A1²`, when it has a rank-one representation.
    pub fn rank1_params(&self) -> Option<RiccatiParams> {
        match &self.kind {
            ProfileKind::GenEuler { s1, s2, c1, c2 } => {
                let d = c1 * s2 - c2 * s1;
                Some(RiccatiParams {
                    r: 9.0 / (d * d),
                    m: 0.0,
                    m1: 0.0,
                    c1: *c1,
                    c2: *c2,
                })
            }
            ProfileKind::RiccatiImplicit(b) => Some(b.params()),
            _ => None,
        }
    }

    /// JSON descriptor for the built-in kinds (`None` for custom profiles).
    pub fn descriptor(&self) -> Option<ProfileDescriptor> {
        let base = match self.base {
            Base::Natural => None,
            Base::Point(x0) => Some(x0),
        };
        let domain =
            (self.domain != self.natural_domain()).then_some([self.domain.0, self.domain.1]);
        Some(match &self.kind {
            ProfileKind::Constant { k } => ProfileDescriptor::Constant {
                k: *k,
                base,
                domain,
            },
            ProfileKind::PowerLaw { alpha } => ProfileDescriptor::PowerLaw {
                alpha: *alpha,
                base,
                domain,
            },
            ProfileKind::Quadratic { m1, m2 } => ProfileDescriptor::Quadratic {
                m1: *m1,
                m2: *m2,
                base,
                domain,
            },
            ProfileKind::GenEuler { s1, s2, c1, c2 } => ProfileDescriptor::GenEuler {
                s1: *s1,
                s2: *s2,
                c1: *c1,
                c2: *c2,
                base,
                domain,
            },
            ProfileKind::Exponential { amplitude, rate } => ProfileDescriptor::Exponential {
                amplitude: *amplitude,
                rate: *rate,
                base,
                domain,
            },
            ProfileKind::RiccatiImplicit(b) => ProfileDescriptor::RiccatiImplicit {
                family: b.family,
                y_bracket: [b.bracket.0, b.bracket.1],
                base,
                domain,
            },
            ProfileKind::Custom(_) => return None,
        })
    }
}

/// Optional fields shared by every descriptor: `base` is the point `x0`
/// with `a(x0) = 0` (the closed form's natural constant when absent) and
/// `domain` narrows the profile's natural domain.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Common {
    pub base: Option<f64>,
    pub domain: Option<[f64; 2]>,
}

/// JSON form of a profile, e.g.
/// `{"kind":"gen_euler","s1":0,"s2":1,"c1":1,"c2":0,"base":1.0}`.
#[cfg_attr(feature = "schema", derive(schemars::JsonSchema))]
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProfileDescriptor {
    Constant {
        k: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        base: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        domain: Option<[f64; 2]>,
    },
    PowerLaw {
        alpha: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        base: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        domain: Option<[f64; 2]>,
    },
    Quadratic {
        m1: f64,
        m2: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        base: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        domain: Option<[f64; 2]>,
    },
    GenEuler {
        s1: f64,
        s2: f64,
        c1: f64,
        c2: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        base: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        domain: Option<[f64; 2]>,
    },
    Exponential {
        amplitude: f64,
        rate: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        base: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        domain: Option<[f64; 2]>,
    },
    RiccatiImplicit {
        family: ClosedFormFamily,
        y_bracket: [f64; 2],
        #[serde(default, skip_serializing_if = "Option::is_none")]
        base: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        domain: Option<[f64; 2]>,
    },
    /// `K(x) = Σ coeffs[i] xⁱ`.
    Polynomial {
        coeffs: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        base: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        domain: Option<[f64; 2]>,
    },
}

impl ProfileDescriptor {
    pub fn common(&self) -> Common {
        let (base, domain) = match *self {
            ProfileDescriptor::Constant { base, domain, .. }
            | ProfileDescriptor::PowerLaw { base, domain, .. }
            | ProfileDescriptor::Quadratic { base, domain, .. }
            | ProfileDescriptor::GenEuler { base, domain, .. }
            | ProfileDescriptor::Exponential { base, domain, .. }
            | ProfileDescriptor::RiccatiImplicit { base, domain, .. }
            | ProfileDescriptor::Polynomial { base, domain, .. } => (base, domain),
        };
        Common { base, domain }
    }
}

impl TryFrom<&ProfileDescriptor> for Profile {
    type Error = Error;

    fn try_from(d: &ProfileDescriptor) -> Result<Profile> {
        let common = d.common();
        let profile = match d {
            ProfileDescriptor::Constant { k, .. } => Profile::constant(*k)?,
            ProfileDescriptor::PowerLaw { alpha, .. } => Profile::power_law(*alpha)?,
            ProfileDescriptor::Quadratic { m1, m2, .. } => Profile::quadratic(*m1, *m2)?,
            ProfileDescriptor::GenEuler { s1, s2, c1, c2, .. } => {
                Profile::gen_euler(*s1, *s2, *c1, *c2)?
            }
            ProfileDescriptor::Exponential {
                amplitude, rate, ..
            } => Profile::exponential(*amplitude, *rate)?,
            ProfileDescriptor::RiccatiImplicit {
                family, y_bracket, ..
            } => Profile::riccati_implicit(*family, (y_bracket[0], y_bracket[1]))?,
            ProfileDescriptor::Polynomial { coeffs, .. } => {
                if coeffs.is_empty() || coeffs.iter().any(|c| !c.is_finite()) {
                    return Err(Error::contract(
                        "polynomial profile needs finite coefficients",
                    ));
                }
                let base = common
                    .base
                    .ok_or_else(|| Error::contract("polynomial profile needs a base point"))?;
                let domain = common
                    .domain
                    .map(|[lo, hi]| (lo, hi))
                    .unwrap_or((f64::NEG_INFINITY, f64::INFINITY));
                let c = coeffs.clone();
                let p = Profile::custom(
                    move |x| {
                        c.iter()
                            .rev()
                            .fold(Jet::constant(0.0, x.order()), |acc, &ci| acc * *x + ci)
                    },
                    domain,
                    base,
                )?;
                return Ok(p);
            }
        };
        let profile = match common.domain {
            Some([lo, hi]) => profile.with_domain((lo, hi))?,
            None => profile,
        };
        match common.base {
            Some(x0) => profile.with_base(Base::Point(x0)),
            None => Ok(profile),
        }
    }
}
