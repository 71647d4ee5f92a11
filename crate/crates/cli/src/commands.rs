//! One function per subcommand. Each computes everything in memory and
//! returns the files to write plus a pass flag; nothing touches the disk
//! until the run has finished.

use acoustic_wave::media::ProfileKind;
use acoustic_wave::numeric::ode::OdeOptions;
use acoustic_wave::numeric::{
    default_t_end, fd_point_residual, leapfrog_convergence, observed_orders, Axis, Grid2D,
    LeapfrogSetup, TimeStep,
};
use acoustic_wave::riccati::{compare_with_closed_form, integrate_family, rhs_defect};
use acoustic_wave::solutions::RankSolutionSpec;
use acoustic_wave::transforms::{
    conformal_pullback, kelvin_3d, nd_residual_study, plane_wave_2d, plane_wave_3d,
    CoefficientField, ConformalMap, ExactSolutionND,
};
use acoustic_wave::{build_rank0, build_rank1, residual_norms, ExactSolution1D, Profile, Waveform};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::config::{MapKind, SceneConfig, TransformSpec};
use crate::failure::Failure;
use crate::output::{number, Table};

/// Flags that override or complement the config.
#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    pub levels: Option<usize>,
    pub seed: u64,
}

/// What a command produced.
#[derive(Debug)]
pub struct RunResult {
    pub table: Table,
    pub report: Value,
    pub failures: Vec<String>,
}

impl RunResult {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

fn profile(cfg: &SceneConfig) -> Result<Profile, Failure> {
    Ok(Profile::try_from(cfg.profile()?)?)
}

fn waveforms(cfg: &SceneConfig) -> Result<(Waveform, Waveform), Failure> {
    let w = cfg.waveforms()?;
    Ok((Waveform::try_from(&w.t)?, Waveform::try_from(&w.x)?))
}

/// The x axis, checked against the profile's singular points with the
/// configured margin.
fn x_axis(cfg: &SceneConfig, p: &Profile, nodes: Option<usize>) -> Result<Axis, Failure> {
    let g = cfg.grid()?;
    let axis = Axis::new(g.x.lo, g.x.hi, nodes.unwrap_or(g.x.nodes))?;
    if !(g.margin >= 0.0) {
        return Err(Failure::Config("grid margin must be non-negative".into()));
    }
    axis.check_clear_of(&p.singular_points(), g.margin * (g.x.hi - g.x.lo))?;
    Ok(axis)
}

fn t_axis(cfg: &SceneConfig) -> Result<Axis, Failure> {
    let g = cfg.grid()?;
    Ok(match g.t {
        Some(t) => Axis::new(t.lo, t.hi, t.nodes)?,
        None => Axis::new(0.0, 1.0, g.x.nodes)?,
    })
}

/// `A` with `K = A²` when the profile admits rank-zero solutions.
fn rank0_amplitude(p: &Profile) -> Option<(f64, f64)> {
    match *p.kind() {
        ProfileKind::Quadratic { m1, m2 } => Some((m1, m2)),
        ProfileKind::Constant { k } => Some((0.0, k.sqrt())),
        ProfileKind::PowerLaw { alpha: 4.0 } => Some((1.0, 0.0)),
        _ => None,
    }
}

/// Rank-zero when the profile allows it (or `rank: 0` is requested),
/// otherwise rank-one.
fn exact_solution(
    cfg: &SceneConfig,
    p: &Profile,
    window: (f64, f64),
) -> Result<(ExactSolution1D, u8), Failure> {
    let (t_wave, x_wave) = waveforms(cfg)?;
    let rank = match cfg.rank {
        Some(r @ (0 | 1)) => r,
        Some(r) => return Err(Failure::Config(format!("rank must be 0 or 1, got {r}"))),
        None if rank0_amplitude(p).is_some() => 0,
        None => 1,
    };
    let u = if rank == 0 {
        let (m1, m2) = rank0_amplitude(p).ok_or_else(|| {
            Failure::Config("rank 0 needs a profile of the form K = (m1 x + m2)^2".into())
        })?;
        build_rank0(m1, m2, t_wave, x_wave)?
    } else {
        let spec =
            RankSolutionSpec::new(p.clone(), t_wave, x_wave)?.with_window(window.0, window.1);
        build_rank1(spec)?
    };
    Ok((u, rank))
}

pub fn invariant(cfg: &SceneConfig) -> Result<RunResult, Failure> {
    let p = profile(cfg)?;
    let axis = x_axis(cfg, &p, None)?;
    let mut table = Table::new(&["x", "K", "h"]);
    let mut max_h = 0.0f64;
    for x in axis.nodes() {
        let k = p.k(x)?;
        let h = p.laplace_invariant(x)?;
        max_h = max_h.max(h.abs());
        table.push(vec![x, k, h]);
    }
    Ok(RunResult {
        table,
        report: json!({ "nodes": axis.len(), "max_abs_h": number(max_h) }),
        failures: Vec::new(),
    })
}

/// Shared by `solution` and `residual`: `u` and `u_tt − K² u_xx` on the grid.
pub fn solution(cfg: &SceneConfig) -> Result<RunResult, Failure> {
    let p = profile(cfg)?;
    let xs = x_axis(cfg, &p, None)?;
    let ts = t_axis(cfg)?;
    let (u, rank) = exact_solution(cfg, &p, (xs.lo(), xs.hi()))?;
    let grid = Grid2D::new(ts, xs);
    let report = residual_norms(&u, &p, &grid)?;
    let mut table = Table::new(&["t", "x", "u", "residual"]);
    for (t, x) in grid.points() {
        let d = u.partials(t, x)?;
        let r = d.u_tt - p.k_squared(x)? * d.u_xx;
        table.push(vec![t, x, d.u, r]);
    }
    let tol = cfg.tolerances.residual;
    let mut failures = Vec::new();
    if !(report.normalized_linf < tol) {
        failures.push(format!(
            "normalized residual {:e} not below {tol:e}",
            report.normalized_linf
        ));
    }
    Ok(RunResult {
        table,
        report: json!({ "rank": rank, "residual": report }),
        failures,
    })
}

pub fn riccati(cfg: &SceneConfig, opts: RunOptions) -> Result<RunResult, Failure> {
    let spec = cfg
        .riccati
        .as_ref()
        .ok_or_else(|| Failure::Config("config has no `riccati` section".into()))?;
    let f = spec.closed_form;
    let ode = OdeOptions {
        tol: spec.ode_tol,
        ..OdeOptions::default()
    };
    let run = integrate_family(&f, spec.y0, spec.y_end, ode)?;
    let rows = compare_with_closed_form(&f, &run.path, spec.samples)?;
    let mut table = Table::new(&["y", "x_numeric", "x_closed", "deviation"]);
    let mut max_dev = 0.0f64;
    for r in &rows {
        max_dev = max_dev.max(r.deviation);
        table.push(vec![r.y, r.x_numeric, r.x_closed, r.deviation]);
    }

    let (lo, hi) = {
        let (a, b) = (run.path.start().0, run.path.end().0);
        (a.min(b), a.max(b))
    };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let params = f.params();
    let listed = f.listed_params();
    let (mut max_rhs, mut max_listed) = (0.0f64, 0.0f64);
    if hi > lo {
        for _ in 0..spec.rhs_points {
            let y = rng.gen_range(lo..hi);
            max_rhs = max_rhs.max(rhs_defect(&f, &params, y)?);
            max_listed = max_listed.max(rhs_defect(&f, &listed, y)?);
        }
    }

    let t = &cfg.tolerances;
    let mut failures = Vec::new();
    if !(max_dev < t.riccati_deviation) {
        failures.push(format!(
            "{}: integrated path deviates by {max_dev:e} (tolerance {:e})",
            f.name(),
            t.riccati_deviation
        ));
    }
    if !(max_rhs < t.riccati_rhs) {
        failures.push(format!(
            "{}: dx/dy residual {max_rhs:e} (tolerance {:e})",
            f.name(),
            t.riccati_rhs
        ));
    }
    Ok(RunResult {
        table,
        report: json!({
            "family": f.name(),
            "params": params,
            "listed_params": listed,
            "span": [lo, hi],
            "stopped_before_pole": run.stopped_before_pole.map(number),
            "max_deviation": number(max_dev),
            "max_rhs_residual": number(max_rhs),
            "max_rhs_residual_listed_params": number(max_listed),
            "rhs_points": spec.rhs_points,
        }),
        failures,
    })
}

pub fn bench(cfg: &SceneConfig, opts: RunOptions) -> Result<RunResult, Failure> {
    let spec = cfg
        .bench
        .as_ref()
        .ok_or_else(|| Failure::Config("config has no `bench` section".into()))?;
    let levels = opts.levels.unwrap_or(spec.levels);
    if levels < 2 {
        return Err(Failure::Config(
            "a convergence study needs at least 2 levels".into(),
        ));
    }
    let p = profile(cfg)?;
    let axis = x_axis(cfg, &p, Some(spec.nodes))?;
    let finest = (spec.nodes - 1) * (1 << (levels - 1)) + 1;
    let (u, rank) = exact_solution(cfg, &p, (axis.lo(), axis.hi()))?;
    let t_end = match spec.t_end {
        Some(t) => t,
        None => default_t_end(&p, axis.lo(), axis.hi(), spec.t0)?,
    };
    let setup = LeapfrogSetup {
        axis,
        t0: spec.t0,
        t_end,
        step: TimeStep::Cfl(spec.cfl),
        track_spacetime: false,
    };
    let (report, runs) = leapfrog_convergence(&p, &u, &setup, levels)?;
    let l2: Vec<f64> = report.levels.iter().map(|l| l.l2).collect();
    let orders = observed_orders(&l2)?;
    let mut table = Table::new(&["h", "L2_error", "Linf_error", "observed_order"]);
    for (i, l) in report.levels.iter().enumerate() {
        let order = if i == 0 { f64::NAN } else { orders[i - 1] };
        table.push(vec![l.h, l.l2, l.linf, order]);
    }
    let [lo, hi] = cfg.tolerances.order_window;
    let failures = orders
        .iter()
        .enumerate()
        .filter(|(_, o)| !(lo..=hi).contains(*o))
        .map(|(i, o)| {
            format!(
                "observed order {o:.4} between levels {i} and {} outside [{lo}, {hi}]",
                i + 1
            )
        })
        .collect();
    Ok(RunResult {
        table,
        report: json!({
            "rank": rank,
            "t_end": t_end,
            "finest_nodes": finest,
            "steps": runs.iter().map(|r| r.steps).collect::<Vec<_>>(),
            "courant": runs.first().map(|r| number(r.courant)),
            "observed_orders_l2": orders.iter().map(|&o| number(o)).collect::<Vec<_>>(),
            "convergence": report,
        }),
        failures,
    })
}

pub fn transform(cfg: &SceneConfig, opts: RunOptions) -> Result<RunResult, Failure> {
    let spec = cfg
        .transform
        .as_ref()
        .ok_or_else(|| Failure::Config("config has no `transform` section".into()))?;
    let levels = opts.levels.unwrap_or(spec.levels);
    match spec.map {
        MapKind::Inversion2d | MapKind::Exp2d => {
            let map = match spec.map {
                MapKind::Inversion2d => ConformalMap::inversion_2d(),
                _ => ConformalMap::exp_2d(),
            };
            let wave = Waveform::try_from(&spec.seed.waveform)?;
            let c = spec.seed.c;
            let u = plane_wave_2d(c, spec.seed.theta, wave)?;
            let (v, c1) = conformal_pullback(&map, &u, &CoefficientField::constant(c * c));
            let points = points::<2>(spec, opts.seed, |x| {
                map.check_region(x[0], x[1], reach(spec)).is_ok()
            })?;
            for (_, x) in &points {
                map.check_region(x[0], x[1], reach(spec))?;
            }
            study(cfg, spec, &v, &c1, &points, levels)
        }
        MapKind::Kelvin3d => {
            let wave = Waveform::try_from(&spec.seed.waveform)?;
            let c = spec.seed.c;
            let u = plane_wave_3d(c, spec.seed.direction, wave)?;
            let (v, r4) = kelvin_3d(&u);
            let c1 = CoefficientField::new(move |x| Ok(c * c * r4.value(x)?));
            let points = points::<3>(spec, opts.seed, |_| true)?;
            study(cfg, spec, &v, &c1, &points, levels)
        }
    }
}

/// How far the widest stencil reaches from a point at the coarsest step.
fn reach(spec: &TransformSpec) -> f64 {
    2.0 * spec.h0 * 1.25
}

/// Explicit points followed by seeded random ones. `admit` filters random
/// draws; explicit points are validated by the caller.
fn points<const N: usize>(
    spec: &TransformSpec,
    seed: u64,
    admit: impl Fn(&[f64; N]) -> bool,
) -> Result<Vec<(f64, [f64; N])>, Failure> {
    let mut out = Vec::new();
    for p in &spec.points {
        if p.len() != N + 1 {
            return Err(Failure::Config(format!(
                "transform points need {} coordinates [t, x1, ...], got {}",
                N + 1,
                p.len()
            )));
        }
        let mut x = [0.0; N];
        x.copy_from_slice(&p[1..]);
        out.push((p[0], x));
    }
    if let Some(s) = &spec.sample {
        if !(0.0 < s.min_radius && s.min_radius < s.max_radius && s.t[0] <= s.t[1]) {
            return Err(Failure::Config(
                "sample needs 0 < min_radius < max_radius and t[0] <= t[1]".into(),
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut drawn = 0;
        let mut attempts = 0usize;
        while drawn < s.count {
            attempts += 1;
            if attempts > 1000 * (s.count + 1) {
                return Err(Failure::Config(
                    "sample region admits too few points".into(),
                ));
            }
            let t = if s.t[0] < s.t[1] {
                rng.gen_range(s.t[0]..s.t[1])
            } else {
                s.t[0]
            };
            let x: [f64; N] = std::array::from_fn(|_| rng.gen_range(-s.max_radius..s.max_radius));
            let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            if r < s.min_radius || r > s.max_radius || !admit(&x) {
                continue;
            }
            out.push((t, x));
            drawn += 1;
        }
    }
    if out.is_empty() {
        return Err(Failure::Config(
            "transform needs `points` or a `sample`".into(),
        ));
    }
    Ok(out)
}

fn study<const N: usize>(
    cfg: &SceneConfig,
    spec: &TransformSpec,
    v: &ExactSolutionND<N>,
    c1: &CoefficientField<N>,
    points: &[(f64, [f64; N])],
    levels: usize,
) -> Result<RunResult, Failure> {
    if levels < 2 {
        return Err(Failure::Config(
            "a convergence study needs at least 2 levels".into(),
        ));
    }
    let report = nd_residual_study(v, c1, points, spec.h0, levels, spec.stencil)?;

    let mut header = vec!["t", "x1", "y1"];
    if N == 3 {
        header.push("z1");
    }
    header.extend(["v", "c1_sq", "residual_h", "residual_h2", "observed_order"]);
    let mut table = Table::new(&header);
    let u = |t, x| v.value(t, x);
    let c = |x| c1.value(x);
    for &(t, x) in points {
        let r1 = fd_point_residual(&u, &c, t, x, spec.h0, spec.stencil)?.residual;
        let r2 = fd_point_residual(&u, &c, t, x, 0.5 * spec.h0, spec.stencil)?.residual;
        let mut row = vec![t];
        row.extend(x);
        row.extend([
            v.value(t, x)?,
            c1.value(x)?,
            r1,
            r2,
            (r1.abs() / r2.abs()).log2(),
        ]);
        table.push(row);
    }

    let min_order = cfg.tolerances.transform_min_order;
    let mut failures: Vec<String> = report
        .observed_orders
        .iter()
        .filter(|o| !(**o >= min_order))
        .map(|o| format!("observed order {o:.4} below {min_order}"))
        .collect();
    if !report.monotone {
        failures.push("residual did not decrease under refinement".into());
    }
    Ok(RunResult {
        table,
        report: json!({
            "map": spec.map,
            "points": points.len(),
            "residual": report,
        }),
        failures,
    })
}
