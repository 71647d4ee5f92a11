//! One-dimensional reductions.
//!
//! With `y = a(x)` the travel time, `u_tt = K² u_xx` becomes
//! `v_tt = v_yy + s(y) v_y` where `s = a''/a'² = −K'(x(y))`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jets::Jet;
use crate::media::{Base, Profile, ProfileKind};
use crate::solutions::ExactSolution1D;

/// The first-order coefficient `s(y)` of the reduced equation.
#[derive(Clone, Debug)]
pub struct ReducedCoefficient {
    profile: Profile,
}

impl ReducedCoefficient {
    pub fn eval(&self, y: f64) -> Result<f64> {
        let x = self.profile.inverse_travel_time(y)?;
        Ok(-self.profile.jet(x)?.deriv(1))
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }
}

/// Reduces `u_tt = K² u_xx` to `v_tt = v_yy + s(y) v_y` in the travel-time
/// coordinate of `profile` (including its base point).
pub fn change_of_variable_1d(profile: &Profile) -> Result<ReducedCoefficient> {
    // K > 0 on the domain is enforced by `Profile::jet`, so a is monotone
    // wherever it can be evaluated; a custom K that changes sign fails here.
    let (lo, hi) = profile.domain();
    let probe = match profile.base() {
        Base::Point(x0) => x0,
        Base::Natural if lo.is_finite() && hi.is_finite() => 0.5 * (lo + hi),
        Base::Natural if lo.is_finite() => lo + 1.0,
        Base::Natural if hi.is_finite() => hi - 1.0,
        Base::Natural => profile.singular_points().first().map_or(0.0, |s| s + 1.0),
    };
    profile
        .jet(probe)
        .map_err(|e| Error::contract(format!("travel time is not monotone near {probe}: {e}")))?;
    Ok(ReducedCoefficient {
        profile: profile.clone(),
    })
}

/// The power-law case `K = x^β`: `y = x^{1−β}/(1−β)` turns the equation into
/// the Euler–Poisson–Darboux form `v_tt = v_yy + β/((β−1) y) v_y`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpdReduction {
    pub beta: f64,
}

impl EpdReduction {
    /// Caveat carried into reports: the coefficient depends on reading the
    /// exponent as that of `K`, and keeps its `1/y` factor.
    pub const NOTE: &'static str = "coefficient is beta/((beta-1) y) with beta the exponent of K \
         (K^2 = x^(2 beta)); taking beta as the exponent of K^2, or dropping the 1/y factor, \
         gives an equation that the reduced solutions do not satisfy";

    pub fn y(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) {
            return Err(Error::domain(x, "power-law substitution needs x > 0"));
        }
        Ok(x.powf(1.0 - self.beta) / (1.0 - self.beta))
    }

    pub fn x(&self, y: f64) -> Result<f64> {
        let w = (1.0 - self.beta) * y;
        if !(w > 0.0) {
            return Err(Error::domain(y, "outside the range of the substitution"));
        }
        Ok(w.powf(1.0 / (1.0 - self.beta)))
    }

    pub fn coefficient(&self, y: f64) -> Result<f64> {
        if y == 0.0 {
            return Err(Error::domain(y, "EPD coefficient is singular at y = 0"));
        }
        Ok(self.beta / ((self.beta - 1.0) * y))
    }
}

pub fn epd_reduce(beta: f64) -> Result<EpdReduction> {
    if !beta.is_finite() {
        return Err(Error::contract("exponent must be finite"));
    }
    if beta == 1.0 {
        return Err(Error::contract(
            "K = x gives a logarithmic substitution, not a power",
        ));
    }
    Ok(EpdReduction { beta })
}

/// Radial pressure `p(t, r) = v(t, r)/r`: if `v_tt = c²(r) v_rr` then
/// `p_tt = c²(r)(p_rr + (2/r) p_r)`.
#[derive(Clone, Debug)]
pub struct SphericalWave {
    v: ExactSolution1D,
}

/// `(p, p_r, p_rr, p_tt)` at a point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialPartials {
    pub p: f64,
    pub p_r: f64,
    pub p_rr: f64,
    pub p_tt: f64,
}

pub fn spherical_reduce(v: &ExactSolution1D) -> SphericalWave {
    SphericalWave { v: v.clone() }
}

impl SphericalWave {
    pub fn partials(&self, t: f64, r: f64) -> Result<RadialPartials> {
        if !(r > 0.0) {
            return Err(Error::domain(r, "radius must be positive"));
        }
        let d = self.v.partials(t, r)?;
        let v = Jet::new(&[d.u, d.u_x, d.u_xx])?;
        let p = v * Jet::variable(r, 2).recip();
        Ok(RadialPartials {
            p: p.value(),
            p_r: p.deriv(1),
            p_rr: p.deriv(2),
            p_tt: d.u_tt / r,
        })
    }

    pub fn value(&self, t: f64, r: f64) -> Result<f64> {
        Ok(self.partials(t, r)?.p)
    }

    /// `r·p`, which recovers `v`.
    pub fn v_value(&self, t: f64, r: f64) -> Result<f64> {
        Ok(r * self.value(t, r)?)
    }

    /// `p_tt − c²(p_rr + (2/r) p_r)` with `c = K` of `profile`.
    pub fn residual(&self, profile: &Profile, t: f64, r: f64) -> Result<f64> {
        let d = self.partials(t, r)?;
        let c2 = profile.k_squared(r)?;
        Ok(d.p_tt - c2 * (d.p_rr + 2.0 * d.p_r / r))
    }
}

/// With `r = e^y`, `p_tt = c²(r)(p_rr + p_r/r)` becomes
/// `v_tt = c²(e^y) e^{−2y} v_yy`. Returns that profile in `y`.
pub fn cylindrical_reduce(profile: &Profile) -> Result<Profile> {
    let (lo, hi) = profile.domain();
    if hi <= 0.0 {
        return Err(Error::contract(
            "cylindrical reduction needs a domain with r > 0",
        ));
    }
    match *profile.kind() {
        ProfileKind::Constant { k } => return Profile::exponential(k, -1.0),
        ProfileKind::PowerLaw { alpha: 2.0 } => return Profile::constant(1.0),
        ProfileKind::PowerLaw { alpha } => return Profile::exponential(1.0, (alpha - 2.0) / 2.0),
        _ => {}
    }
    let lo = lo.max(0.0);
    let y_domain = (
        if lo > 0.0 { lo.ln() } else { f64::NEG_INFINITY },
        if hi.is_finite() {
            hi.ln()
        } else {
            f64::INFINITY
        },
    );
    let r0 = match profile.base() {
        Base::Point(x0) if x0 > 0.0 => x0,
        _ if lo < 1.0 && hi > 1.0 && !profile.singular_points().contains(&1.0) => 1.0,
        _ if hi.is_finite() => 0.5 * (lo + hi),
        _ => lo + 1.0,
    };
    let p = profile.clone();
    Profile::custom(
        move |y: &Jet| {
            let order = y.order().min(2);
            let r = y.truncate(order).exp();
            match p.jet(r.value()) {
                Ok(k) => Jet::compose(&k.truncate(order), &r)
                    .map(|kr| kr * r.recip())
                    .unwrap_or_else(|_| Jet::constant(f64::NAN, order)),
                Err(_) => Jet::constant(f64::NAN, order),
            }
        },
        y_domain,
        r0.ln(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jets::Waveform;
    use crate::riccati::ClosedFormFamily;
    use crate::solutions::build_rank0;
    use approx::assert_relative_eq;

    #[test]
    fn tanh_reduction() {
        let p = Profile::riccati_implicit(ClosedFormFamily::tanh(), (0.2, 3.0)).unwrap();
        let s = change_of_variable_1d(&p).unwrap();
        for y in [0.3, 1.0, 2.5] {
            assert_relative_eq!(
                s.eval(y).unwrap(),
                -4.0 / (2.0 * y).sinh(),
                max_relative = 1e-9
            );
        }
    }

    #[test]
    fn constant_reduction_is_zero() {
        let p = Profile::constant(2.0)
            .unwrap()
            .with_base(Base::Point(1.0))
            .unwrap();
        assert_eq!(change_of_variable_1d(&p).unwrap().eval(0.7).unwrap(), 0.0);
    }

    #[test]
    fn epd_examples() {
        let e = epd_reduce(2.0).unwrap();
        assert_relative_eq!(e.y(4.0).unwrap(), -0.25);
        assert_relative_eq!(e.coefficient(-0.25).unwrap(), -8.0);
        let e = epd_reduce(2.0 / 3.0).unwrap();
        assert_relative_eq!(e.y(8.0).unwrap(), 6.0, max_relative = 1e-14);
        assert_relative_eq!(
            e.coefficient(6.0).unwrap(),
            -2.0 / 6.0,
            max_relative = 1e-14
        );
        assert_eq!(epd_reduce(0.0).unwrap().coefficient(3.0).unwrap(), 0.0);
        assert!(epd_reduce(1.0).is_err());
    }

    #[test]
    fn epd_agrees_with_general_reduction() {
        for beta in [2.0, 2.0 / 3.0, -0.5, 1.7] {
            let e = epd_reduce(beta).unwrap();
            let s = change_of_variable_1d(&Profile::power_law(2.0 * beta).unwrap()).unwrap();
            let y = e.y(1.3).unwrap();
            assert_relative_eq!(
                s.eval(y).unwrap(),
                e.coefficient(y).unwrap(),
                max_relative = 1e-10
            );
        }
    }

    #[test]
    fn outgoing_spherical_wave() {
        let v = build_rank0(0.0, 1.0, Waveform::Zero, Waveform::gaussian(0.0, 0.5)).unwrap();
        let p = spherical_reduce(&v);
        let c = Profile::constant(1.0).unwrap();
        for (t, r) in [(0.5, 0.7), (1.0, 1.3), (2.0, 2.2)] {
            assert!(p.residual(&c, t, r).unwrap().abs() < 1e-10);
            assert_relative_eq!(
                p.v_value(t, r).unwrap(),
                v.value(t, r).unwrap(),
                max_relative = 1e-15
            );
        }
        assert!(p.value(0.0, 0.0).is_err());
    }

    #[test]
    fn cylindrical_examples() {
        let y = 0.4f64;
        let k2 = |p: &Profile| p.k_squared(y).unwrap();
        assert_eq!(
            k2(&cylindrical_reduce(&Profile::power_law(2.0).unwrap()).unwrap()),
            1.0
        );
        assert_relative_eq!(
            k2(&cylindrical_reduce(&Profile::constant(1.0).unwrap()).unwrap()),
            (-2.0 * y).exp(),
            max_relative = 1e-15
        );
        assert_relative_eq!(
            k2(&cylindrical_reduce(&Profile::power_law(4.0).unwrap()).unwrap()),
            (2.0 * y).exp(),
            max_relative = 1e-15
        );
        // generic route: K = (x + 1)², K_y = (e^y + 1)² e^{−y}
        let q = cylindrical_reduce(&Profile::quadratic(1.0, 1.0).unwrap()).unwrap();
        let j = q.jet(y).unwrap();
        let e = y.exp();
        assert_relative_eq!(j.value(), (e + 1.0).powi(2) / e, max_relative = 1e-14);
        assert_relative_eq!(j.deriv(1), e - 1.0 / e, max_relative = 1e-13);
    }
}
