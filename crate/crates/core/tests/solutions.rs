use acoustic_wave::media::Base;
use acoustic_wave::numeric::{Axis, Grid2D};
use acoustic_wave::solutions::RankSolutionSpec;
use acoustic_wave::{
    build_rank0, build_rank1, residual_1d, residual_norms, ClosedFormFamily, Error, Profile,
    RiccatiParams, Waveform,
};
use proptest::prelude::*;

fn grid(x: (f64, f64)) -> Grid2D {
    Grid2D::new(
        Axis::new(0.0, 1.5, 24).unwrap(),
        Axis::new(x.0, x.1, 24).unwrap(),
    )
}

#[test]
fn tan_profile_rank1() {
    // branch of y − tan y on (−π/2, π/2): decreasing, so r = −1
    let p = Profile::riccati_implicit(ClosedFormFamily::Tan { b: 0.0 }, (-1.2, -0.1)).unwrap();
    let (lo, hi) = p.domain();
    let spec = RankSolutionSpec::new(p.clone(), Waveform::gaussian(0.0, 1.0), Waveform::sine(1.0))
        .unwrap()
        .with_window(lo + 0.01, hi - 0.01);
    let u = build_rank1(spec).unwrap();
    let rep = residual_norms(&u, &p, &grid((lo + 0.01, hi - 0.01))).unwrap();
    assert!(rep.normalized_linf < 1e-10, "{}", rep.normalized_linf);
}

#[test]
fn inconsistent_constants_rejected() {
    let p = Profile::gen_euler(0.0, 1.0, 1.0, 0.0).unwrap();
    let mut spec = RankSolutionSpec::new(p, Waveform::sine(1.0), Waveform::sine(1.0))
        .unwrap()
        .with_window(0.5, 2.0);
    spec.constants = RiccatiParams::new(2.0 * spec.constants.r, 0.0, 0.0, 1.0, 0.0).unwrap();
    assert!(matches!(build_rank1(spec), Err(Error::Construction(_))));
}

#[test]
fn rank1_needs_natural_base_and_representation() {
    let p = Profile::gen_euler(0.0, 1.0, 1.0, 0.0)
        .unwrap()
        .with_base(Base::Point(1.0))
        .unwrap();
    let spec = RankSolutionSpec::new(p, Waveform::sine(1.0), Waveform::sine(1.0))
        .unwrap()
        .with_window(0.5, 2.0);
    assert!(matches!(build_rank1(spec), Err(Error::Construction(_))));
    let e = RankSolutionSpec::new(
        Profile::exponential(1.0, 0.5).unwrap(),
        Waveform::Zero,
        Waveform::Zero,
    );
    assert!(matches!(e, Err(Error::Construction(_))));
}

#[test]
fn zero_waveforms_give_zero_solution() {
    let u = build_rank0(1.0, 0.0, Waveform::Zero, Waveform::Zero).unwrap();
    assert_eq!(u.value(0.3, 1.2).unwrap(), 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn superposition_and_shift(m1 in 0.3f64..2.0, m2 in 0.0f64..2.0, tau in -1.0f64..1.0,
                               t in 0.0f64..2.0, x in 0.1f64..2.0) {
        let p = Profile::quadratic(m1, m2).unwrap();
        let u = build_rank0(m1, m2, Waveform::sine(1.1), Waveform::Zero).unwrap();
        let v = build_rank0(m1, m2, Waveform::Zero, Waveform::gaussian(0.2, 0.9)).unwrap();
        let w = u.clone() + 2.5 * v.time_shifted(tau);
        let scale = w.partials(t, x).unwrap().u_tt.abs().max(1.0);
        prop_assert!(residual_1d(&w, &p, t, x).unwrap().abs() < 1e-11 * scale);
        let direct = u.value(t, x).unwrap() + 2.5 * v.value(t + tau, x).unwrap();
        prop_assert!((w.value(t, x).unwrap() - direct).abs() < 1e-12 * direct.abs().max(1.0));
    }

    #[test]
    fn mixed_partials_agree(s1 in 0.5f64..2.0, c2 in 0.5f64..2.0, t in 0.0f64..2.0, x in 0.5f64..2.0) {
        let p = Profile::gen_euler(s1, 0.0, 0.0, c2).unwrap();
        let spec = RankSolutionSpec::new(p, Waveform::sine(0.7), Waveform::gaussian(0.0, 2.0))
            .unwrap()
            .with_window(0.5, 2.0);
        let u = build_rank1(spec).unwrap();
        let (a, b) = u.mixed_partials(t, x).unwrap();
        prop_assert!((a - b).abs() < 1e-9 * a.abs().max(1.0));
    }
}
