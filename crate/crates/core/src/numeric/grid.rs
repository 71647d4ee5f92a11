use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Fewest nodes accepted on any axis.
pub const MIN_NODES: usize = 8;

/// A uniform axis of `n` nodes from `lo` to `hi` inclusive.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    lo: f64,
    hi: f64,
    n: usize,
}

impl Axis {
    pub fn new(lo: f64, hi: f64, n: usize) -> Result<Axis> {
        if !(lo.is_finite() && hi.is_finite()) || hi <= lo {
            return Err(Error::contract(format!("invalid axis range [{lo}, {hi}]")));
        }
        if n < MIN_NODES {
            return Err(Error::contract(format!(
                "axis needs at least {MIN_NODES} nodes, got {n}"
            )));
        }
        Ok(Axis { lo, hi, n })
    }

    /// Recovers an axis from explicit node positions, rejecting non-uniform
    /// spacing.
    pub fn from_nodes(nodes: &[f64]) -> Result<Axis> {
        if nodes.len() < MIN_NODES {
            return Err(Error::contract(format!(
                "axis needs at least {MIN_NODES} nodes, got {}",
                nodes.len()
            )));
        }
        let axis = Axis::new(nodes[0], nodes[nodes.len() - 1], nodes.len())?;
        let h = axis.spacing();
        for (i, &x) in nodes.iter().enumerate() {
            if (x - axis.node(i)).abs() > 1e-9 * h {
                return Err(Error::contract(format!(
                    "non-uniform grid: node {i} at {x}, expected {}",
                    axis.node(i)
                )));
            }
        }
        Ok(axis)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn spacing(&self) -> f64 {
        (self.hi - self.lo) / (self.n - 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.hi
        } else {
            self.lo + i as f64 * self.spacing()
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.node(i)).collect()
    }

    /// Same range with the spacing halved.
    pub fn refined(&self) -> Axis {
        Axis {
            lo: self.lo,
            hi: self.hi,
            n: 2 * self.n - 1,
        }
    }

    /// Fails if any point of `singular` lies within `margin` of the closed
    /// range.
    pub fn check_clear_of(&self, singular: &[f64], margin: f64) -> Result<()> {
        for &s in singular {
            if s > self.lo - margin && s < self.hi + margin {
                return Err(Error::domain(
                    s,
                    format!(
                        "singular point within margin {margin} of axis [{}, {}]",
                        self.lo, self.hi
                    ),
                ));
            }
        }
        Ok(())
    }
}

/// Space-time or planar grid: `a` is the slow axis, `b` the fast axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid2D {
    pub a: Axis,
    pub b: Axis,
}

impl Grid2D {
    pub fn new(a: Axis, b: Axis) -> Self {
        Grid2D { a, b }
    }

    pub fn len(&self) -> usize {
        self.a.len() * self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Row-major node list `(a_i, b_j)`.
    pub fn points(&self) -> Vec<(f64, f64)> {
        let bs = self.b.nodes();
        self.a
            .nodes()
            .into_iter()
            .flat_map(|a| bs.iter().map(move |&b| (a, b)))
            .collect()
    }
}
