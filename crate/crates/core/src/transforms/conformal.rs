//! Planar conformal maps `(x, y) ↦ (f, g)` and the pull-back of
//! `u_tt = c² Δu` through them: `v(t, x1, y1) = u(t, x, y)` solves
//! `v_tt = c1² Δv` with `c1² = c² (f_x² + f_y²)`.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{CoefficientField, ExactSolutionND};
use crate::error::{Error, Result};

/// Tolerance for the Cauchy–Riemann check on custom maps.
pub const CR_TOL: f64 = 1e-8;

/// Values and first and second partials of `f` and `g`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MapJet {
    pub f: f64,
    pub g: f64,
    pub fx: f64,
    pub fy: f64,
    pub gx: f64,
    pub gy: f64,
    pub fxx: f64,
    pub fxy: f64,
    pub fyy: f64,
    pub gxx: f64,
    pub gxy: f64,
    pub gyy: f64,
}

impl MapJet {
    /// `(f, g) = (Re h, Im h)` for a holomorphic `h`, from `h, h', h''`.
    fn holomorphic(h: Complex64, h1: Complex64, h2: Complex64) -> MapJet {
        MapJet {
            f: h.re,
            g: h.im,
            fx: h1.re,
            fy: -h1.im,
            gx: h1.im,
            gy: h1.re,
            fxx: h2.re,
            fxy: -h2.im,
            fyy: -h2.re,
            gxx: h2.im,
            gxy: h2.re,
            gyy: -h2.im,
        }
    }

    /// `(f, g) = (Re h, −Im h)`, the mirror image of a holomorphic map.
    fn antiholomorphic(h: Complex64, h1: Complex64, h2: Complex64) -> MapJet {
        let m = MapJet::holomorphic(h, h1, h2);
        MapJet {
            g: -m.g,
            gx: -m.gx,
            gy: -m.gy,
            gxx: -m.gxx,
            gxy: -m.gxy,
            gyy: -m.gyy,
            ..m
        }
    }

    /// `f_x² + f_y²`, the local scale factor squared.
    pub fn scale(&self) -> f64 {
        self.fx * self.fx + self.fy * self.fy
    }

    /// `(|f_x − g_y| + |f_y + g_x|, |f_x + g_y| + |f_y − g_x|)`: the
    /// Cauchy–Riemann defect of the orientation-preserving and -reversing
    /// branches.
    pub fn cr_defects(&self) -> (f64, f64) {
        (
            (self.fx - self.gy).abs() + (self.fy + self.gx).abs(),
            (self.fx + self.gy).abs() + (self.fy - self.gx).abs(),
        )
    }

    /// `(f_x² + f_y² − g_x² − g_y², f_x g_x + f_y g_y)`; both vanish for a
    /// conformal map.
    pub fn scale_identity(&self) -> (f64, f64) {
        (
            self.scale() - (self.gx * self.gx + self.gy * self.gy),
            self.fx * self.gx + self.fy * self.gy,
        )
    }

    /// `(Δf, Δg)`.
    pub fn laplacians(&self) -> (f64, f64) {
        (self.fxx + self.fyy, self.gxx + self.gyy)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// `f_x = g_y, f_y = −g_x`.
    Preserving,
    /// `f_x = −g_y, f_y = g_x`.
    Reversing,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConformalMapKind {
    /// `(x, y) ↦ (x, y)/(x² + y²)`; its own inverse.
    Inversion2d,
    /// `(x, y) ↦ e^x (cos y, sin y)`, inverted on the principal branch.
    Exp2d,
    Custom,
}

type ForwardFn = dyn Fn(f64, f64) -> Result<MapJet> + Send + Sync;
type InverseFn = dyn Fn(f64, f64) -> Result<(f64, f64)> + Send + Sync;

#[derive(Clone)]
struct CustomMap {
    forward: Arc<ForwardFn>,
    inverse: Arc<InverseFn>,
    orientation: Orientation,
}

#[derive(Clone)]
pub struct ConformalMap {
    kind: ConformalMapKind,
    custom: Option<CustomMap>,
}

impl fmt::Debug for ConformalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConformalMap")
            .field("kind", &self.kind)
            .finish()
    }
}

impl ConformalMap {
    pub fn inversion_2d() -> Self {
        ConformalMap {
            kind: ConformalMapKind::Inversion2d,
            custom: None,
        }
    }

    pub fn exp_2d() -> Self {
        ConformalMap {
            kind: ConformalMapKind::Exp2d,
            custom: None,
        }
    }

    pub fn from_kind(kind: ConformalMapKind) -> Result<Self> {
        match kind {
            ConformalMapKind::Inversion2d => Ok(Self::inversion_2d()),
            ConformalMapKind::Exp2d => Ok(Self::exp_2d()),
            ConformalMapKind::Custom => Err(Error::contract(
                "custom maps are built with ConformalMap::custom",
            )),
        }
    }

    /// A user map given by its forward jet and inverse. The Cauchy–Riemann
    /// equations are checked at `samples`; a map that is not conformal there
    /// (within [`CR_TOL`], for a single orientation) is rejected.
    pub fn custom(
        forward: impl Fn(f64, f64) -> Result<MapJet> + Send + Sync + 'static,
        inverse: impl Fn(f64, f64) -> Result<(f64, f64)> + Send + Sync + 'static,
        samples: &[(f64, f64)],
    ) -> Result<Self> {
        let orientation = cr_check(&forward, samples)?;
        Ok(ConformalMap {
            kind: ConformalMapKind::Custom,
            custom: Some(CustomMap {
                forward: Arc::new(forward),
                inverse: Arc::new(inverse),
                orientation,
            }),
        })
    }

    pub fn kind(&self) -> ConformalMapKind {
        self.kind
    }

    pub fn orientation(&self) -> Orientation {
        match (&self.custom, self.kind) {
            (Some(c), _) => c.orientation,
            (None, ConformalMapKind::Inversion2d) => Orientation::Reversing,
            (None, _) => Orientation::Preserving,
        }
    }

    pub fn forward(&self, x: f64, y: f64) -> Result<MapJet> {
        if !(x.is_finite() && y.is_finite()) {
            return Err(Error::domain(x, "map argument not finite"));
        }
        match (&self.custom, self.kind) {
            (Some(c), _) => (c.forward)(x, y),
            (None, ConformalMapKind::Inversion2d) => {
                let z = Complex64::new(x, y);
                if z.norm_sqr() == 0.0 {
                    return Err(Error::domain(x, "inversion is undefined at the origin"));
                }
                let h = z.inv();
                Ok(MapJet::antiholomorphic(h, -h * h, 2.0 * h * h * h))
            }
            (None, _) => {
                let h = Complex64::new(x, y).exp();
                Ok(MapJet::holomorphic(h, h, h))
            }
        }
    }

    pub fn inverse(&self, x1: f64, y1: f64) -> Result<(f64, f64)> {
        if !(x1.is_finite() && y1.is_finite()) {
            return Err(Error::domain(x1, "map argument not finite"));
        }
        match (&self.custom, self.kind) {
            (Some(c), _) => (c.inverse)(x1, y1),
            (None, ConformalMapKind::Inversion2d) => {
                let r2 = x1 * x1 + y1 * y1;
                if r2 == 0.0 {
                    return Err(Error::domain(x1, "inversion is undefined at the origin"));
                }
                Ok((x1 / r2, y1 / r2))
            }
            (None, _) => {
                let r2 = x1 * x1 + y1 * y1;
                if r2 == 0.0 {
                    return Err(Error::domain(x1, "logarithm undefined at the origin"));
                }
                if y1 == 0.0 && x1 < 0.0 {
                    return Err(Error::domain(x1, "on the branch cut of the logarithm"));
                }
                Ok((0.5 * r2.ln(), y1.atan2(x1)))
            }
        }
    }

    /// Rejects a disc of radius `radius` around `(x1, y1)` that touches a
    /// point where the inverse is undefined or discontinuous.
    pub fn check_region(&self, x1: f64, y1: f64, radius: f64) -> Result<()> {
        let r = (x1 * x1 + y1 * y1).sqrt();
        match self.kind {
            ConformalMapKind::Inversion2d if r <= radius => {
                Err(Error::domain(x1, "region contains the origin"))
            }
            ConformalMapKind::Exp2d if r <= radius || (x1 - radius < 0.0 && y1.abs() <= radius) => {
                Err(Error::domain(
                    x1,
                    "region crosses the branch cut of the logarithm",
                ))
            }
            _ => Ok(()),
        }
    }
}

/// Determines the orientation branch satisfied at every sample point.
pub fn cr_check<F>(forward: &F, samples: &[(f64, f64)]) -> Result<Orientation>
where
    F: Fn(f64, f64) -> Result<MapJet>,
{
    if samples.is_empty() {
        return Err(Error::contract("Cauchy–Riemann check needs sample points"));
    }
    let mut branch: Option<Orientation> = None;
    for &(x, y) in samples {
        let m = forward(x, y)?;
        let tol = CR_TOL * m.scale().sqrt().max(1.0);
        let (pres, rev) = m.cr_defects();
        let here = if pres <= tol {
            Orientation::Preserving
        } else if rev <= tol {
            Orientation::Reversing
        } else {
            return Err(Error::contract(format!(
                "map is not conformal at ({x}, {y}): Cauchy–Riemann defects {pres:e}, {rev:e}"
            )));
        };
        match branch {
            None => branch = Some(here),
            Some(b) if b != here => {
                return Err(Error::contract(format!(
                    "map changes orientation near ({x}, {y})"
                )))
            }
            _ => {}
        }
    }
    Ok(branch.expect("samples non-empty"))
}

/// `v(t, x1, y1) = u(t, map⁻¹(x1, y1))` and
/// `c1²(x1, y1) = c²(x, y)·(f_x² + f_y²)` at `(x, y) = map⁻¹(x1, y1)`.
pub fn conformal_pullback(
    map: &ConformalMap,
    u: &ExactSolutionND<2>,
    c2: &CoefficientField<2>,
) -> (ExactSolutionND<2>, CoefficientField<2>) {
    let (m1, u1) = (map.clone(), u.clone());
    let v = ExactSolutionND::new(move |t, [x1, y1]| {
        let (x, y) = m1.inverse(x1, y1)?;
        u1.value(t, [x, y])
    });
    let (m2, c) = (map.clone(), c2.clone());
    let c1 = CoefficientField::new(move |[x1, y1]| {
        let (x, y) = m2.inverse(x1, y1)?;
        Ok(c.value([x, y])? * m2.forward(x, y)?.scale())
    });
    (v, c1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inversion_fixes_unit_circle() {
        let m = ConformalMap::inversion_2d();
        let (x, y) = m.inverse(0.6, 0.8).unwrap();
        assert!((x - 0.6).abs() < 1e-15 && (y - 0.8).abs() < 1e-15);
        assert!((m.forward(0.6, 0.8).unwrap().scale() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn pullback_coefficients() {
        let u = ExactSolutionND::new(|t, [x, _]| Ok(t - x));
        let one = CoefficientField::new(|_| Ok(1.0));
        let (_, c1) = conformal_pullback(&ConformalMap::inversion_2d(), &u, &one);
        let (x1, y1) = (0.3, -1.2);
        let r2: f64 = x1 * x1 + y1 * y1;
        assert!((c1.value([x1, y1]).unwrap() - r2 * r2).abs() < 1e-13);
        let (_, c1) = conformal_pullback(&ConformalMap::exp_2d(), &u, &one);
        assert!((c1.value([x1, y1]).unwrap() - r2).abs() < 1e-13);
    }

    #[test]
    fn origin_and_branch_cut_rejected() {
        assert!(ConformalMap::inversion_2d().inverse(0.0, 0.0).is_err());
        assert!(ConformalMap::exp_2d().inverse(-1.0, 0.0).is_err());
        assert!(ConformalMap::exp_2d()
            .check_region(-1.0, 0.01, 0.05)
            .is_err());
        assert!(ConformalMap::exp_2d().check_region(1.0, 0.01, 0.05).is_ok());
    }

    #[test]
    fn custom_map_checked() {
        // z ↦ z², conformal away from the origin
        let sq = |x: f64, y: f64| {
            let z = Complex64::new(x, y);
            Ok(MapJet::holomorphic(
                z * z,
                2.0 * z,
                Complex64::new(2.0, 0.0),
            ))
        };
        let inv = |x1: f64, y1: f64| {
            let w = Complex64::new(x1, y1).sqrt();
            Ok((w.re, w.im))
        };
        let m = ConformalMap::custom(sq, inv, &[(1.0, 0.5), (0.3, 0.2)]).unwrap();
        assert_eq!(m.orientation(), Orientation::Preserving);
        // (x, y) ↦ (2x, y) stretches one axis only
        let stretch = |x: f64, y: f64| {
            Ok(MapJet {
                f: 2.0 * x,
                g: y,
                fx: 2.0,
                gy: 1.0,
                ..MapJet::default()
            })
        };
        let bad = ConformalMap::custom(stretch, |x, y| Ok((x / 2.0, y)), &[(1.0, 1.0)]);
        assert!(matches!(bad, Err(Error::Contract(_))));
    }
}
