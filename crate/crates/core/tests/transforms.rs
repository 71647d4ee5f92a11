use acoustic_wave::numeric::Stencil;
use acoustic_wave::transforms::{
    conformal_pullback, cylindrical_reduce, epd_reduce, kelvin_3d, nd_residual_study,
    plane_wave_2d, plane_wave_3d, spherical_reduce, CoefficientField, ConformalMap,
};
use acoustic_wave::{build_rank0, Profile, Waveform};
use proptest::prelude::*;

#[test]
fn pullback_with_nonunit_speed() {
    // seed solves u_tt = 4Δu; v then solves v_tt = 4|X1|² Δv under exp
    let u = plane_wave_2d(2.0, 1.1, Waveform::gaussian(0.0, 1.0)).unwrap();
    let (v, c1) = conformal_pullback(
        &ConformalMap::exp_2d(),
        &u,
        &CoefficientField::constant(4.0),
    );
    let pts = [(0.2, [0.9, 0.4]), (0.6, [0.3, 1.0])];
    let rep = nd_residual_study(&v, &c1, &pts, 0.04, 3, Stencil::Second).unwrap();
    assert!(
        rep.observed_orders.iter().all(|o| (o - 2.0).abs() < 0.2),
        "{:?}",
        rep.observed_orders
    );
}

#[test]
fn spherical_wave_from_rank0() {
    let v = build_rank0(0.5, 1.0, Waveform::sine(1.0), Waveform::Zero).unwrap();
    let p = spherical_reduce(&v);
    let q = Profile::quadratic(0.5, 1.0).unwrap();
    for (t, r) in [(0.1, 0.5), (1.0, 2.0)] {
        let scale = p.partials(t, r).unwrap().p_tt.abs().max(1.0);
        assert!(p.residual(&q, t, r).unwrap().abs() < 1e-12 * scale);
    }
}

#[test]
fn cylindrical_power_laws() {
    // c² = r^α ↦ K_y² = e^{(α−2) y}
    for alpha in [0.0, 1.0, 3.0] {
        let k = cylindrical_reduce(&Profile::power_law(alpha).unwrap()).unwrap();
        let y = 0.7f64;
        let want = ((alpha - 2.0) * y).exp();
        assert!((k.k_squared(y).unwrap() - want).abs() < 1e-14 * want);
    }
}

#[test]
fn epd_rejects_linear_speed() {
    assert!(epd_reduce(1.0).is_err());
    assert!(epd_reduce(2.0).unwrap().x(1.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn kelvin_is_an_involution(t in 0.0f64..1.0, x in -2.0f64..2.0, y in -2.0f64..2.0, z in -2.0f64..2.0) {
        let r2 = x * x + y * y + z * z;
        prop_assume!(r2 > 0.04);
        let u = plane_wave_3d(1.0, [0.6, 0.0, 0.8], Waveform::sine(1.3)).unwrap();
        let (v, _) = kelvin_3d(&u);
        let (w, _) = kelvin_3d(&v);
        let a = w.value(t, [x, y, z]).unwrap();
        let b = u.value(t, [x, y, z]).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn maps_invert(x in -1.5f64..1.5, y in 0.1f64..3.0) {
        for m in [ConformalMap::inversion_2d(), ConformalMap::exp_2d()] {
            let j = m.forward(x, y).unwrap();
            let (bx, by) = m.inverse(j.f, j.g).unwrap();
            prop_assert!((bx - x).abs() < 1e-12 && (by - y).abs() < 1e-12);
            // one branch of the Cauchy–Riemann equations holds
            let (d1, d2) = j.cr_defects();
            prop_assert!(d1.min(d2) < 1e-12 * j.scale().sqrt().max(1.0));
            let (s1, s2) = j.scale_identity();
            prop_assert!(s1.abs() < 1e-12 * j.scale().max(1.0) && s2.abs() < 1e-12 * j.scale().max(1.0));
        }
    }
}
