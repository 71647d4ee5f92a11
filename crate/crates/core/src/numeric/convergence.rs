use rayon::prelude::*;

use super::report::{LevelNorms, ResidualReport};
use crate::error::{Error, Result};

/// `log2(e_k / e_{k+1})` for each consecutive pair of errors at halving
/// spacings.
pub fn observed_orders(errors: &[f64]) -> Result<Vec<f64>> {
    if errors.len() < 2 {
        return Err(Error::contract("observed order needs at least two levels"));
    }
    Ok(errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect())
}

/// Runs `run(level)` for `levels` refinement levels (in parallel) and
/// collects norms and observed orders. A non-monotone error sequence is
/// flagged in the report rather than treated as failure.
pub fn convergence_study<F>(levels: usize, run: F) -> Result<ResidualReport>
where
    F: Fn(usize) -> Result<LevelNorms> + Sync,
{
    if levels < 3 {
        return Err(Error::contract(format!(
            "convergence study needs at least 3 levels, got {levels}"
        )));
    }
    let norms: Vec<LevelNorms> = (0..levels)
        .into_par_iter()
        .map(&run)
        .collect::<Result<_>>()?;
    let finest = *norms.last().expect("levels >= 3");
    let mut report = ResidualReport::from_residuals(&[finest.linf], 0.0, Vec::new())?;
    report.l2 = finest.l2;
    report.normalized_l2 = finest.l2;
    report.with_levels(norms)
}
