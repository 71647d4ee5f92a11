use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxisMeta {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    pub nodes: usize,
    pub spacing: f64,
}

impl AxisMeta {
    pub fn from_axis(name: &str, axis: &super::Axis) -> Self {
        AxisMeta {
            name: name.to_string(),
            lo: axis.lo(),
            hi: axis.hi(),
            nodes: axis.len(),
            spacing: axis.spacing(),
        }
    }
}

/// Error norms at one refinement level.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelNorms {
    pub h: f64,
    pub l2: f64,
    pub linf: f64,
}

/// Residual or error norms over a sampled set, optionally with a refinement
/// history.
///
/// `l2` is the root-mean-square over the sample points. Normalized norms
/// divide by `scale` (the largest `|u_tt|` seen); when the scale is zero the
/// raw norms are reported unchanged.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub axes: Vec<AxisMeta>,
    pub points: usize,
    pub linf: f64,
    pub l2: f64,
    pub scale: f64,
    pub normalized_linf: f64,
    pub normalized_l2: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub levels: Vec<LevelNorms>,
    /// `log2(e_k / e_{k+1})` on the L∞ norms, one per consecutive pair.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub observed_orders: Vec<f64>,
    #[serde(default = "yes")]
    pub monotone: bool,
}

fn yes() -> bool {
    true
}

impl ResidualReport {
    /// Folds per-point residuals in slice order.
    pub fn from_residuals(residuals: &[f64], scale: f64, axes: Vec<AxisMeta>) -> Result<Self> {
        if residuals.is_empty() {
            return Err(Error::contract("residual report over an empty sample"));
        }
        let mut linf = 0.0f64;
        let mut sq = 0.0;
        for &r in residuals {
            linf = linf.max(r.abs());
            sq += r * r;
        }
        let l2 = (sq / residuals.len() as f64).sqrt();
        let (normalized_linf, normalized_l2) = if scale > 0.0 {
            (linf / scale, l2 / scale)
        } else {
            (linf, l2)
        };
        Ok(ResidualReport {
            axes,
            points: residuals.len(),
            linf,
            l2,
            scale,
            normalized_linf,
            normalized_l2,
            levels: Vec::new(),
            observed_orders: Vec::new(),
            monotone: true,
        })
    }

    /// Attaches a refinement history; observed orders come from `linf`.
    pub fn with_levels(mut self, levels: Vec<LevelNorms>) -> Result<Self> {
        let errors: Vec<f64> = levels.iter().map(|l| l.linf).collect();
        self.observed_orders = super::observed_orders(&errors)?;
        self.monotone = errors.windows(2).all(|w| w[1] < w[0]);
        self.levels = levels;
        Ok(self)
    }
}
