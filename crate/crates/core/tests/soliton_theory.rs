use std::f64::consts::PI;

use proptest::prelude::*;
use solsplit_core::soliton_theory::*;
use solsplit_core::{Complex64, Error};

/// Composite Simpson on `[0, 14]` in the original variable: an oracle
/// independent of the adaptive Gauss–Kronrod used by `phi0`.
fn phi0_simpson(w: f64) -> f64 {
    let s2 = (PI * w).sin().powi(2);
    let m2 = (2.0 * w - 1.0).powi(2);
    let f = |z: f64| (s2 / (PI * z).cosh().powi(2)).ln_1p() * z / (z * z + m2);
    let n = 400_000;
    let h = 14.0 / n as f64;
    let mut s = f(0.0) + f(14.0);
    for i in 1..n {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
    }
    s * h / 3.0
}

#[test]
fn phi0_against_an_independent_quadrature() {
    for w in [0.1, 0.3, 0.6, 0.8, 0.95] {
        let a = phi0(w, 1e-12).unwrap();
        assert!((a - phi0_simpson(w)).abs() < 1e-10, "omega {w}");
    }
}

#[test]
fn phi0_frozen_values() {
    assert!((phi0(0.8, 1e-12).unwrap() - 0.0452781834653225).abs() < 1e-12);
    assert!((phi0(0.6, 1e-12).unwrap() - 0.425304).abs() < 1e-5);
}

#[test]
fn phi0_edges() {
    assert_eq!(phi0(1.0, 1e-10).unwrap(), 0.0);
    assert!(phi0(1e-6, 1e-10).unwrap() < 1e-5);
    assert!(matches!(phi0(0.5, 1e-10), Err(Error::Divergence(_))));
    assert!(phi0(0.0, 1e-10).is_err());
    assert!(phi0(1.2, 1e-10).is_err());
}

#[test]
fn transmission_and_reflection_rates() {
    assert_eq!(transmission_theory(3.0, 3.0).unwrap(), 0.5);
    assert!((transmission_theory(6.0, 10.0).unwrap() - 1.0 / 1.36).abs() < 1e-15);
    assert!((reflection_theory(6.0, 10.0).unwrap() - 0.36 / 1.36).abs() < 1e-15);
}

#[test]
fn outgoing_prediction_at_equal_strength_and_speed() {
    let p = outgoing_prediction(15.0, 15.0, -10.0).unwrap();
    let a = 2f64.sqrt() - 1.0;
    assert!((p.a_t - a).abs() < 1e-14 && (p.a_r - a).abs() < 1e-14);
    // arg t = −π/4, arg r = −3π/4, φ₀(1/√2) and the (1 − A²)|x0|/2v shift
    let shift = phi0(0.5f64.sqrt(), 1e-12).unwrap() + (1.0 - a * a) * 10.0 / 30.0;
    assert!((p.phi_t.value().unwrap() - wrap_phase(-PI / 4.0 + shift)).abs() < 1e-12);
    assert!((p.phi_r.value().unwrap() - wrap_phase(-3.0 * PI / 4.0 + shift)).abs() < 1e-12);
    assert!((p.phi_t.value().unwrap() + 0.37501).abs() < 1e-5);
    assert!((p.phi_r.value().unwrap() + 1.94581).abs() < 1e-5);
}

#[test]
fn weak_channels_carry_no_soliton() {
    let p = outgoing_prediction(3.0, 15.0, -10.0).unwrap();
    assert_eq!(p.a_r, 0.0);
    assert_eq!(p.phi_r, Phase::Absent);
    assert!(p.a_t > 0.9);
    // |t| = 1/2 exactly at q = √3·v
    let p = outgoing_prediction(3f64.sqrt() * 10.0, 10.0, -5.0).unwrap();
    assert_eq!(p.phi_t, Phase::UndefinedAtThreshold);
}

#[test]
fn zs_unitarity_grid() {
    for alpha in [0.25, 0.6, 0.9] {
        for lam in [0.0, 0.5, -0.5, 2.0, -2.0] {
            let d = zs_scattering_data(alpha, Complex64::new(lam, 0.0)).unwrap();
            assert!((d.a.norm_sqr() + d.b.norm_sqr() - 1.0).abs() < 1e-10, "{alpha} {lam}");
        }
    }
}

#[test]
fn zs_modulus_closed_form() {
    // |a|² = (cos²πα + sinh²πλ)/cosh²πλ
    for (alpha, lam) in [(0.3, 0.2), (0.7, -1.1), (0.55, 3.0)] {
        let d = zs_scattering_data(alpha, Complex64::new(lam, 0.0)).unwrap();
        let want = ((PI * alpha).cos().powi(2) + (PI * lam).sinh().powi(2)) / (PI * lam).cosh().powi(2);
        assert!((d.a.norm_sqr() - want).abs() < 1e-12);
    }
}

#[test]
fn discrete_eigenvalue_data() {
    for k in 0..9 {
        let alpha = 0.55 + 0.05 * k as f64;
        let e = zs_discrete_data(alpha).unwrap();
        assert!((e.gamma0 - Complex64::i()).norm() < 1e-10);
        assert!((e.lambda0 - Complex64::new(0.0, alpha - 0.5)).norm() < 1e-15);
        let a = zs_scattering_data(alpha, e.lambda0).unwrap().a;
        assert!(a.norm() < 1e-12, "a vanishes at the eigenvalue");
        // a′ by a centered difference of a along the imaginary axis
        let h = 1e-5;
        let fd = (zs_scattering_data(alpha, e.lambda0 + Complex64::new(0.0, h)).unwrap().a
            - zs_scattering_data(alpha, e.lambda0 - Complex64::new(0.0, h)).unwrap().a)
            / Complex64::new(0.0, 2.0 * h);
        assert!((fd - e.a_prime).norm() < 1e-8, "{alpha}: {fd} {}", e.a_prime);
    }
    assert!(matches!(zs_discrete_data(0.4), Err(Error::NoEigenvalue(_))));
}

#[test]
fn asymptotic_soliton_classification() {
    assert_eq!(asymptotic_soliton(0.3).unwrap(), AsymptoticSoliton::Radiation);
    assert_eq!(asymptotic_soliton(0.5).unwrap(), AsymptoticSoliton::Threshold);
    match asymptotic_soliton(0.8).unwrap() {
        AsymptoticSoliton::Soliton(p) => {
            assert!((p.amplitude - 0.6).abs() < 1e-15);
            assert!((p.phase - 0.046062).abs() < 1e-5);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn phase_formulas_cross_check() {
    let c = phi0_cross_check(&[0.6, 0.8]).unwrap();
    assert!((c[0].phi0 - 0.42530).abs() < 1e-5);
    assert!((c[0].integral_zeta - 0.56233).abs() < 1e-5);
    assert!((c[0].integral_two_zeta - 0.27795).abs() < 1e-5);
    assert!((c[1].integral_zeta - 0.046062).abs() < 1e-6);
    assert_eq!(cross_check_verdict(&c, 1e-3), ScalingVerdict::Neither);
}

proptest! {
    #[test]
    fn wrapped_phases_lie_in_the_half_open_interval(t in -100.0f64..100.0) {
        let w = wrap_phase(t);
        prop_assert!(w > -PI && w <= PI);
        let k = ((t - w) / (2.0 * PI)).round();
        prop_assert!((t - w - 2.0 * PI * k).abs() < 1e-9);
    }

    #[test]
    fn theory_rates_sum_to_one(q in 0.0f64..100.0, v in 0.01f64..100.0) {
        let t = transmission_theory(q, v).unwrap();
        let r = reflection_theory(q, v).unwrap();
        prop_assert!((t + r - 1.0).abs() < 1e-14);
        prop_assert!((0.0..=1.0).contains(&t));
    }

    #[test]
    fn zs_unitarity_everywhere(alpha in 0.01f64..0.99, lam in -6.0f64..6.0) {
        let d = zs_scattering_data(alpha, Complex64::new(lam, 0.0)).unwrap();
        prop_assert!((d.a.norm_sqr() + d.b.norm_sqr() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn outgoing_amplitudes_follow_the_coefficients(q in 0.0f64..40.0, v in 1.0f64..40.0) {
        let p = outgoing_prediction(q, v, -5.0).unwrap();
        prop_assert!((p.a_t - (2.0 * p.t_coeff.norm() - 1.0).max(0.0)).abs() < 1e-12);
        prop_assert!((p.a_r - (2.0 * p.r_coeff.norm() - 1.0).max(0.0)).abs() < 1e-12);
        prop_assert!(p.a_t + p.a_r < 1.0 + 1e-12);
    }
}
