//! Scene configuration: one JSON file drives every subcommand.

use std::path::Path;

use acoustic_wave::jets::WaveformSpec;
use acoustic_wave::numeric::Stencil;
use acoustic_wave::{ClosedFormFamily, ProfileDescriptor};
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::failure::Failure;

#[derive(Clone, Debug, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct SceneConfig {
    /// Label used as the output file prefix.
    #[serde(default = "default_name")]
    pub name: String,
    pub profile: Option<ProfileDescriptor>,
    pub waveforms: Option<WaveformPair>,
    pub grid: Option<GridSpec>,
    /// 0 or 1; inferred from the profile when absent.
    pub rank: Option<u8>,
    pub transform: Option<TransformSpec>,
    pub riccati: Option<RiccatiSpec>,
    pub bench: Option<BenchSpec>,
    #[serde(default)]
    pub tolerances: Tolerances,
}

fn default_name() -> String {
    "scene".into()
}

#[derive(Clone, Debug, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct WaveformPair {
    /// Fed by `t + a(x)`.
    pub t: WaveformSpec,
    /// Fed by `t − a(x)`.
    pub x: WaveformSpec,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct AxisSpec {
    pub lo: f64,
    pub hi: f64,
    pub nodes: usize,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub t: Option<AxisSpec>,
    pub x: AxisSpec,
    /// Required clearance from zeros of K, as a fraction of the x range.
    #[serde(default = "default_margin")]
    pub margin: f64,
}

fn default_margin() -> f64 {
    0.05
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case")]
pub enum MapKind {
    #[serde(rename = "inversion_2d")]
    Inversion2d,
    #[serde(rename = "exp_2d")]
    Exp2d,
    #[serde(rename = "kelvin_3d")]
    Kelvin3d,
}

/// Plane-wave seed `F(t − n·x/c)`.
#[derive(Clone, Debug, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct SeedSpec {
    #[serde(default = "one")]
    pub c: f64,
    /// Direction angle in the plane (2-D maps).
    #[serde(default)]
    pub theta: f64,
    /// Unit direction (Kelvin).
    #[serde(default = "z_axis")]
    pub direction: [f64; 3],
    pub waveform: WaveformSpec,
}

fn one() -> f64 {
    1.0
}

fn z_axis() -> [f64; 3] {
    [0.0, 0.0, 1.0]
}

/// Random evaluation points: `t` uniform in its range, space points
/// uniform in the box and rejected until `min_radius ≤ |x| ≤ max_radius`.
#[derive(Clone, Debug, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct SampleSpec {
    pub count: usize,
    pub t: [f64; 2],
    pub min_radius: f64,
    pub max_radius: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct TransformSpec {
    pub map: MapKind,
    pub seed: SeedSpec,
    /// Explicit `[t, x1, y1(, z1)]` points; used in addition to `sample`.
    #[serde(default)]
    pub points: Vec<Vec<f64>>,
    pub sample: Option<SampleSpec>,
    #[serde(default = "default_h0")]
    pub h0: f64,
    #[serde(default = "default_levels")]
    pub levels: usize,
    #[serde(default = "fourth")]
    pub stencil: Stencil,
}

fn default_h0() -> f64 {
    0.05
}

fn default_levels() -> usize {
    3
}

fn fourth() -> Stencil {
    Stencil::Fourth
}

#[derive(Clone, Debug, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct RiccatiSpec {
    /// e.g. `{"family": "tanh", "b": -1}`.
    pub closed_form: ClosedFormFamily,
    pub y0: f64,
    pub y_end: f64,
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// Random points for the `dx/dy` residual check, drawn in `[y0, y_end]`.
    #[serde(default = "default_rhs_points")]
    pub rhs_points: usize,
    /// Local error tolerance of the adaptive integrator.
    #[serde(default = "default_ode_tol")]
    pub ode_tol: f64,
}

fn default_ode_tol() -> f64 {
    1e-12
}

fn default_samples() -> usize {
    201
}

fn default_rhs_points() -> usize {
    200
}

#[derive(Clone, Debug, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct BenchSpec {
    /// Coarsest grid; each further level halves the spacing.
    pub nodes: usize,
    #[serde(default)]
    pub t0: f64,
    /// Defaults to half the crossing time of the x range.
    pub t_end: Option<f64>,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    #[serde(default = "default_levels")]
    pub levels: usize,
}

fn default_cfl() -> f64 {
    0.9
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Normalized L∞ residual of exact solutions.
    pub residual: f64,
    /// Max deviation between integrated and closed-form Riccati paths.
    pub riccati_deviation: f64,
    /// Relative `dx/dy` residual of a closed form.
    pub riccati_rhs: f64,
    /// Accepted window for observed convergence orders of the solver.
    pub order_window: [f64; 2],
    /// Minimum observed order of transform residuals.
    pub transform_min_order: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            residual: 1e-10,
            riccati_deviation: 1e-8,
            riccati_rhs: 1e-6,
            order_window: [1.8, 2.2],
            transform_min_order: 1.9,
        }
    }
}

impl SceneConfig {
    pub fn load(path: &Path) -> Result<SceneConfig, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Config(format!("cannot read {}: {e}", path.display())))?;
        SceneConfig::parse(&text)
    }

    pub fn parse(text: &str) -> Result<SceneConfig, Failure> {
        serde_json::from_str(text).map_err(|e| Failure::Config(format!("invalid config: {e}")))
    }

    pub fn profile(&self) -> Result<&ProfileDescriptor, Failure> {
        self.profile
            .as_ref()
            .ok_or_else(|| Failure::Config("config has no `profile`".into()))
    }

    pub fn waveforms(&self) -> Result<&WaveformPair, Failure> {
        self.waveforms
            .as_ref()
            .ok_or_else(|| Failure::Config("config has no `waveforms`".into()))
    }

    pub fn grid(&self) -> Result<&GridSpec, Failure> {
        self.grid
            .as_ref()
            .ok_or_else(|| Failure::Config("config has no `grid`".into()))
    }
}

pub fn schema() -> schemars::schema::RootSchema {
    schemars::schema_for!(SceneConfig)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_rejected() {
        let ok = r#"{"profile":{"kind":"constant","k":1.0}}"#;
        assert!(SceneConfig::parse(ok).is_ok());
        let bad = r#"{"profile":{"kind":"constant","k":1.0},"extra":1}"#;
        assert!(SceneConfig::parse(bad).is_err());
        let nested = r#"{"profile":{"kind":"constant","k":1.0,"typo":2}}"#;
        assert!(SceneConfig::parse(nested).is_err());
    }

    #[test]
    fn tolerances_default() {
        let c = SceneConfig::parse("{}").unwrap();
        assert_eq!(c.tolerances.residual, 1e-10);
        assert_eq!(c.name, "scene");
    }
}
