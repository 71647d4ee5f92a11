//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Runs with `harness = false` so that every line is printed whether or not
//! the criterion passes.

use std::path::{Path, PathBuf};
use std::process::Command;

use acoustic_wave::media::ProfileKind;
use acoustic_wave::numeric::ode::OdeOptions;
use acoustic_wave::numeric::{
    default_t_end, leapfrog_convergence, Axis, Grid2D, LeapfrogSetup, Stencil, TimeStep,
};
use acoustic_wave::riccati::{
    compare_with_closed_form, integrate_family, invert_monotone, rhs_defect,
};
use acoustic_wave::solutions::RankSolutionSpec;
use acoustic_wave::transforms::{
    change_of_variable_1d, conformal_pullback, cylindrical_reduce, kelvin_3d, nd_residual_study,
    plane_wave_2d, plane_wave_3d, spherical_reduce, CoefficientField, ConformalMap,
    ExactSolutionND,
};
use acoustic_wave::{
    build_rank0, build_rank1, residual_norms, ClosedFormFamily, ExactSolution1D, Profile, Waveform,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// An interval `[lo, lo + len]` whose `pad`-neighbourhood avoids `roots`.
fn clear_interval(r: &mut ChaCha8Rng, roots: &[f64], len: f64, pad: f64) -> f64 {
    loop {
        let lo = r.gen_range(-3.0..3.0);
        if roots.iter().all(|&z| z < lo - pad || z > lo + len + pad) {
            return lo;
        }
    }
}

fn c1_zero_invariant() -> Outcome {
    let mut r = rng(1);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let m1 = r.gen_range(-2.0..2.0);
        let m2 = r.gen_range(-2.0..2.0);
        let p = Profile::quadratic(m1, m2).map_err(err)?;
        let x = loop {
            let x = r.gen_range(-3.0..3.0);
            if (m1 * x + m2).abs() > 0.05 {
                break x;
            }
        };
        let k = p.jet(x).map_err(err)?;
        let scale = (k.value() * k.deriv(2)).abs() / 2.0 + k.deriv(1).powi(2) / 4.0;
        let h = p.laplace_invariant(x).map_err(err)?;
        worst = worst.max(h.abs() / scale.max(f64::MIN_POSITIVE));
    }
    // K = x⁴ (K² = x⁸): h = 2x⁶
    let quartic = Profile::power_law(8.0).map_err(err)?;
    let mut worst_rel = 0.0f64;
    for i in 0..50 {
        let x = 0.2 + 0.1 * i as f64;
        let h = quartic.laplace_invariant(x).map_err(err)?;
        let want = 2.0 * x.powi(6);
        worst_rel = worst_rel.max((h - want).abs() / want);
    }
    check(
        worst <= 1e-12 && worst_rel <= 1e-12,
        format!("quadratic max scaled |h| = {worst:.2e}; K = x^4 max rel. error vs 2x^6 = {worst_rel:.2e}"),
    )
}

fn grid(t: (f64, f64), x: (f64, f64)) -> Result<Grid2D, String> {
    Ok(Grid2D::new(
        Axis::new(t.0, t.1, 64).map_err(err)?,
        Axis::new(x.0, x.1, 64).map_err(err)?,
    ))
}

fn c2_rank0() -> Outcome {
    let mut r = rng(2);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let m1 = r.gen_range(0.2..2.0) * if r.gen_bool(0.5) { 1.0 } else { -1.0 };
        let m2 = r.gen_range(-2.0..2.0);
        let lo = clear_interval(&mut r, &[-m2 / m1], 2.0, 0.3);
        let p = Profile::quadratic(m1, m2).map_err(err)?;
        let u =
            build_rank0(m1, m2, Waveform::sine(1.3), Waveform::gaussian(0.5, 1.5)).map_err(err)?;
        let rep = residual_norms(&u, &p, &grid((0.0, 2.0), (lo, lo + 2.0))?).map_err(err)?;
        if rep.scale == 0.0 {
            return Err("degenerate sample: u_tt vanished on the grid".into());
        }
        worst = worst.max(rep.normalized_linf);
    }
    check(
        worst < 1e-10,
        format!("max normalized residual {worst:.2e} over 10 draws"),
    )
}

fn gen_euler_residual(s1: f64, s2: f64, c1: f64, c2: f64, lo: f64, hi: f64) -> Result<f64, String> {
    let p = Profile::gen_euler(s1, s2, c1, c2).map_err(err)?;
    let spec = RankSolutionSpec::new(p.clone(), Waveform::sine(1.3), Waveform::gaussian(0.5, 1.5))
        .map_err(err)?
        .with_window(lo, hi);
    let u = build_rank1(spec).map_err(err)?;
    let rep = residual_norms(&u, &p, &grid((0.0, 2.0), (lo, hi))?).map_err(err)?;
    if rep.scale == 0.0 {
        return Err("degenerate sample: u_tt vanished on the grid".into());
    }
    Ok(rep.normalized_linf)
}

fn c3_rank1_gen_euler() -> Outcome {
    let mut r = rng(3);
    let x83 = gen_euler_residual(0.0, 1.0, 1.0, 0.0, 0.5, 3.0)?;
    let x43 = gen_euler_residual(1.0, 0.0, 0.0, 1.0, 0.5, 3.0)?;
    let mut worst = x83.max(x43);
    for _ in 0..10 {
        let (s1, s2, c1, c2) = loop {
            let v: [f64; 4] = std::array::from_fn(|_| r.gen_range(-2.0..2.0));
            if (v[2] * v[1] - v[3] * v[0]).abs() > 0.2 {
                break (v[0], v[1], v[2], v[3]);
            }
        };
        let roots: Vec<f64> = [(s1, s2), (c1, c2)]
            .iter()
            .filter(|(a, _)| *a != 0.0)
            .map(|(a, b)| -b / a)
            .collect();
        let lo = clear_interval(&mut r, &roots, 1.0, 0.25);
        worst = worst.max(gen_euler_residual(s1, s2, c1, c2, lo, lo + 1.0)?);
    }
    check(
        worst < 1e-10,
        format!("x^(8/3): {x83:.2e}, x^(4/3): {x43:.2e}, max over all 12 cases {worst:.2e}"),
    )
}

fn c4_tanh4() -> Outcome {
    let f = ClosedFormFamily::tanh();
    let mut inv = 0.0f64;
    let mut k2 = 0.0f64;
    let p = Profile::riccati_implicit(f, (0.2, 6.0)).map_err(err)?;
    for i in 0..100 {
        let x = 0.3 + 2.7 * i as f64 / 99.0;
        let y = invert_monotone(&f, x, (0.0, 10.0)).map_err(err)?;
        inv = inv.max((y - y.tanh() - x).abs());
        let want = y.tanh().powi(4);
        k2 = k2.max((p.k_squared(x).map_err(err)? - want).abs() / want);
    }
    let spec = RankSolutionSpec::new(p.clone(), Waveform::gaussian(1.0, 0.5), Waveform::sine(0.9))
        .map_err(err)?
        .with_window(0.3, 3.0);
    let u = build_rank1(spec).map_err(err)?;
    let rep = residual_norms(&u, &p, &grid((0.0, 2.0), (0.3, 3.0))?).map_err(err)?;
    check(
        inv < 1e-10 && k2 < 1e-10 && rep.normalized_linf < 1e-9,
        format!(
            "inversion {inv:.2e}; K^2 vs tanh^4(a) rel. {k2:.2e}; normalized residual {:.2e}",
            rep.normalized_linf
        ),
    )
}

/// Max path deviation and max dx/dy defect of one family on a span.
fn riccati_case(f: ClosedFormFamily, span: (f64, f64), seed: u64) -> Result<(f64, f64), String> {
    let opts = OdeOptions {
        tol: 1e-12,
        ..OdeOptions::default()
    };
    let run = integrate_family(&f, span.0, span.1, opts).map_err(err)?;
    if let Some(p) = run.stopped_before_pole {
        return Err(format!("{}: pole at {p} inside the chosen span", f.name()));
    }
    let rows = compare_with_closed_form(&f, &run.path, 401).map_err(err)?;
    let dev = rows.iter().fold(0.0f64, |m, r| m.max(r.deviation));
    let mut r = rng(seed);
    let mut rhs = 0.0f64;
    for _ in 0..200 {
        let y = r.gen_range(span.0..span.1);
        rhs = rhs.max(rhs_defect(&f, &f.params(), y).map_err(err)?);
    }
    Ok((dev, rhs))
}

fn c5_riccati() -> Outcome {
    let cases = [
        (ClosedFormFamily::tanh(), (0.1, 3.0)),
        (ClosedFormFamily::Tan { b: 0.0 }, (-1.2, 1.2)),
        (ClosedFormFamily::ExpRatio { b: 1.0 }, (-1.0, 1.0)),
        (ClosedFormFamily::Sqrt3 { b: 1.0 }, (0.0, 1.0)),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (i, (f, span)) in cases.into_iter().enumerate() {
        let (dev, rhs) = riccati_case(f, span, 50 + i as u64)?;
        ok &= dev < 1e-8 && rhs < 1e-6;
        parts.push(format!("{} dev {dev:.1e} rhs {rhs:.1e}", f.name()));
    }
    // Reported alongside, not part of the verdict: exp_ratio with the
    // sign-flipped parameters (r = 1, m1 = -1), and the repaired sqrt3.
    let e = ClosedFormFamily::ExpRatio { b: 1.0 };
    let listed = rhs_defect(&e, &e.listed_params(), 0.5).map_err(err)?;
    parts.push(format!("(exp_ratio uses r = -1, m1 = 1; with r = 1, m1 = -1 rhs {listed:.1e})"));
    let (dev, rhs) = riccati_case(ClosedFormFamily::Sqrt3Repaired { b: 1.0 }, (0.0, 1.0), 60)?;
    parts.push(format!("(sqrt3_repaired dev {dev:.1e} rhs {rhs:.1e})"));
    check(ok, parts.join("; "))
}

fn c6_reductions() -> Outcome {
    let tanh = Profile::riccati_implicit(ClosedFormFamily::tanh(), (0.2, 6.0)).map_err(err)?;
    let s = change_of_variable_1d(&tanh).map_err(err)?;
    let mut worst_tanh = 0.0f64;
    for i in 0..100 {
        let y = 0.3 + 4.5 * i as f64 / 99.0;
        let want = -4.0 / (2.0 * y).sinh();
        worst_tanh = worst_tanh.max((s.eval(y).map_err(err)? - want).abs() / want.abs().max(1.0));
    }

    // y = q((c1 x + c2)/(s1 x + s2))^{1/3} is the travel time of the
    // profile with the roles of (s1, s2) and (c1, c2) exchanged.
    let mut worst_ge = 0.0f64;
    let mut r = rng(6);
    for (s1, s2, c1, c2) in [
        (1.0, 2.0, 0.5, 3.0),
        (0.0, 1.0, 1.0, 0.0),
        (-1.0, 1.5, 2.0, 0.5),
    ] {
        let p = Profile::gen_euler(c1, c2, s1, s2).map_err(err)?;
        let s = change_of_variable_1d(&p).map_err(err)?;
        let q = 3.0 / (c1 * s2 - c2 * s1);
        let roots: Vec<f64> = [(s1, s2), (c1, c2)]
            .iter()
            .filter(|(a, _)| *a != 0.0)
            .map(|(a, b)| -b / a)
            .collect();
        let lo = clear_interval(&mut r, &roots, 1.5, 0.2);
        for _ in 0..34 {
            let x = r.gen_range(lo..lo + 1.5);
            let y = q * ((c1 * x + c2) / (s1 * x + s2)).cbrt();
            let q3 = q * q * q;
            let want = -2.0 * (c1 * q3 + 2.0 * s1 * y.powi(3)) / (y * (c1 * q3 - s1 * y.powi(3)));
            let got = s.eval(y).map_err(err)?;
            worst_ge = worst_ge.max((got - want).abs() / want.abs().max(1.0));
        }
    }
    check(
        worst_tanh < 1e-8 && worst_ge < 1e-8,
        format!("tanh case max error {worst_tanh:.2e}; gen-Euler case max error {worst_ge:.2e} (102 samples)"),
    )
}

fn sample_points<const N: usize>(
    seed: u64,
    count: usize,
    admit: impl Fn(&[f64; N]) -> bool,
) -> Vec<(f64, [f64; N])> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let t = r.gen_range(0.0..1.0);
        let x: [f64; N] = std::array::from_fn(|_| r.gen_range(-1.5..1.5));
        let rad = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if (0.6..=1.5).contains(&rad) && admit(&x) {
            out.push((t, x));
        }
    }
    out
}

/// Observed orders of an FD residual study; at least `1.9` and decreasing.
fn orders<const N: usize>(
    v: &ExactSolutionND<N>,
    c: &CoefficientField<N>,
    pts: &[(f64, [f64; N])],
) -> Result<(bool, Vec<f64>), String> {
    let rep = nd_residual_study(v, c, pts, 0.05, 3, Stencil::Fourth).map_err(err)?;
    let ok = rep.monotone && rep.observed_orders.iter().all(|&o| o >= 1.9);
    Ok((ok, rep.observed_orders))
}

fn c7_conformal() -> Outcome {
    let seed = plane_wave_2d(1.0, 0.7, Waveform::gaussian(0.0, 0.8)).map_err(err)?;
    let one = CoefficientField::constant(1.0);

    let inv = ConformalMap::inversion_2d();
    let (v, _) = conformal_pullback(&inv, &seed, &one);
    let c = CoefficientField::new(|[x, y]: [f64; 2]| Ok((x * x + y * y).powi(2)));
    let (ok_inv, o_inv) = orders(&v, &c, &sample_points::<2>(71, 20, |_| true))?;

    let exp = ConformalMap::exp_2d();
    let (v, _) = conformal_pullback(&exp, &seed, &one);
    let c = CoefficientField::new(|[x, y]: [f64; 2]| Ok(x * x + y * y));
    let pts = sample_points::<2>(72, 20, |p| exp.check_region(p[0], p[1], 0.125).is_ok());
    let (ok_exp, o_exp) = orders(&v, &c, &pts)?;

    let n = [1.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0];
    let seed3 = plane_wave_3d(1.0, n, Waveform::gaussian(0.0, 0.8)).map_err(err)?;
    let (v, _) = kelvin_3d(&seed3);
    let c = CoefficientField::new(|x: [f64; 3]| Ok(x.iter().map(|v| v * v).sum::<f64>().powi(2)));
    let (ok_k, o_k) = orders(&v, &c, &sample_points::<3>(73, 20, |_| true))?;

    let fmt = |o: &[f64]| {
        o.iter()
            .map(|v| format!("{v:.2}"))
            .collect::<Vec<_>>()
            .join(", ")
    };
    check(
        ok_inv && ok_exp && ok_k,
        format!(
            "orders inversion [{}], exp [{}], Kelvin [{}]",
            fmt(&o_inv),
            fmt(&o_exp),
            fmt(&o_k)
        ),
    )
}

fn error_ratios(p: &Profile, u: &ExactSolution1D, lo: f64, hi: f64) -> Result<Vec<f64>, String> {
    let axis = Axis::new(lo, hi, 257).map_err(err)?;
    let setup = LeapfrogSetup {
        axis,
        t0: 0.0,
        t_end: default_t_end(p, lo, hi, 0.0).map_err(err)?,
        step: TimeStep::Cfl(0.9),
        track_spacetime: false,
    };
    let (rep, _) = leapfrog_convergence(p, u, &setup, 3).map_err(err)?;
    Ok(rep.levels.windows(2).map(|w| w[0].l2 / w[1].l2).collect())
}

fn c8_solver() -> Outcome {
    let q = Profile::quadratic(1.0, 0.0).map_err(err)?;
    let u0 = build_rank0(
        1.0,
        0.0,
        Waveform::gaussian(-0.6, 0.2),
        Waveform::gaussian(0.9, 0.2),
    )
    .map_err(err)?;
    let r0 = error_ratios(&q, &u0, 1.0, 2.0)?;

    let g = Profile::gen_euler(1.0, 0.0, 0.0, 1.0).map_err(err)?;
    let spec = RankSolutionSpec::new(
        g.clone(),
        Waveform::gaussian(3.6, 0.2),
        Waveform::gaussian(-3.2, 0.2),
    )
    .map_err(err)?
    .with_window(1.0, 2.0);
    let u1 = build_rank1(spec).map_err(err)?;
    let r1 = error_ratios(&g, &u1, 1.0, 2.0)?;

    let ok = r0.iter().chain(&r1).all(|r| (3.6..=4.4).contains(r));
    let fmt = |o: &[f64]| {
        o.iter()
            .map(|v| format!("{v:.3}"))
            .collect::<Vec<_>>()
            .join(", ")
    };
    check(
        ok,
        format!(
            "L2 error ratios: rank-0 K = x^2 [{}], rank-1 K^2 = x^(4/3) [{}]; 257..1025 nodes",
            fmt(&r0),
            fmt(&r1)
        ),
    )
}

fn c9_radial() -> Outcome {
    let mut worst = 0.0f64;
    let q = Profile::quadratic(0.5, 1.0).map_err(err)?;
    let v0 =
        build_rank0(0.5, 1.0, Waveform::sine(1.1), Waveform::gaussian(0.0, 1.0)).map_err(err)?;
    let g = Profile::gen_euler(0.0, 1.0, 1.0, 0.0).map_err(err)?;
    let spec = RankSolutionSpec::new(g.clone(), Waveform::sine(1.1), Waveform::gaussian(0.0, 1.0))
        .map_err(err)?
        .with_window(0.5, 3.0);
    let v1 = build_rank1(spec).map_err(err)?;
    for (p, v) in [(&q, &v0), (&g, &v1)] {
        let sw = spherical_reduce(v);
        let (mut res, mut scale) = (0.0f64, 0.0f64);
        for i in 0..64 {
            for j in 0..64 {
                let t = 2.0 * i as f64 / 63.0;
                let r = 0.5 + 2.5 * j as f64 / 63.0;
                res = res.max(sw.residual(p, t, r).map_err(err)?.abs());
                scale = scale.max(sw.partials(t, r).map_err(err)?.p_tt.abs());
            }
        }
        worst = worst.max(res / scale);
    }

    let cyl = cylindrical_reduce(&Profile::power_law(2.0).map_err(err)?).map_err(err)?;
    let is_constant = matches!(cyl.kind(), ProfileKind::Constant { k } if *k == 1.0);
    let mut exact = true;
    for i in 0..100 {
        let y = -3.0 + 6.0 * i as f64 / 99.0;
        exact &= cyl.k_squared(y).map_err(err)? == 1.0;
    }
    check(
        worst < 1e-10 && is_constant && exact,
        format!(
            "spherical max normalized residual {worst:.2e}; c^2 = r^2 maps to constant profile: {}",
            is_constant && exact
        ),
    )
}

fn configs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn run_cli(cmd: &str, config: &Path, out: &Path) -> Result<(), String> {
    let status = Command::new(env!("CARGO_BIN_EXE_acoustic"))
        .args([cmd, "--config"])
        .arg(config)
        .arg("--out")
        .arg(out)
        .args(["--seed", "7"])
        .output()
        .map_err(err)?;
    if !status.status.success() {
        return Err(format!(
            "{cmd} {} exited with {:?}: {}",
            config.display(),
            status.status.code(),
            String::from_utf8_lossy(&status.stderr)
        ));
    }
    Ok(())
}

fn c10_reproducible() -> Outcome {
    let runs = [
        ("invariant", "quadratic_invariant.json"),
        ("solution", "gen_euler_solution.json"),
        ("riccati", "tanh_riccati.json"),
        ("transform", "inversion_transform.json"),
        ("transform", "kelvin_transform.json"),
        ("bench", "x_squared_bench.json"),
    ];
    let a = tempfile::tempdir().map_err(err)?;
    let b = tempfile::tempdir().map_err(err)?;
    for (cmd, cfg) in runs {
        let cfg = configs_dir().join(cfg);
        run_cli(cmd, &cfg, a.path())?;
        run_cli(cmd, &cfg, b.path())?;
    }
    let mut names: Vec<PathBuf> = std::fs::read_dir(a.path())
        .map_err(err)?
        .map(|e| e.map(|e| e.path()))
        .collect::<Result<_, _>>()
        .map_err(err)?;
    names.sort();
    let mut compared = 0;
    for path in &names {
        let name = path.file_name().expect("file");
        let x = std::fs::read(path).map_err(err)?;
        let y = std::fs::read(b.path().join(name)).map_err(err)?;
        if x != y {
            return Err(format!("{} differs between runs", name.to_string_lossy()));
        }
        compared += 1;
    }
    check(
        compared == 2 * runs.len(),
        format!("{compared} output files bit-identical across two runs"),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("zero-invariant family", c1_zero_invariant),
        ("rank-0 exactness", c2_rank0),
        ("rank-1 generalized Euler exactness", c3_rank1_gen_euler),
        ("tanh^4 profile", c4_tanh4),
        ("Riccati oracle", c5_riccati),
        ("reductions", c6_reductions),
        ("conformal and Kelvin pullbacks", c7_conformal),
        ("solver benchmark", c8_solver),
        ("spherical and cylindrical", c9_radial),
        ("reproducibility", c10_reproducible),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let started = std::time::Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(d) => println!("criterion {:>2} PASS  {name}: {d} [{secs:.1}s]", i + 1),
            Err(d) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {d} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
