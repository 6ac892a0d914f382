use num_complex::Complex64;

use super::*;
use crate::gauge::{chern2, winding};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn shift_sign_matches_the_algebra() {
    let alpha = 0.3;
    let theta = DeformationMatrix::planar(alpha).unwrap();
    let h = CircleFunction::from_coeffs([(1, c(0.5, 0.2)), (-2, c(-0.1, 0.3)), (0, c(1.0, 0.0))]);
    let u1 = TorusElement::generator(theta, 1, 1).unwrap();
    let conj = u1.mul(&h.of_u2(theta).unwrap()).unwrap().mul(&u1.adjoint()).unwrap();
    let s = conjugation_shift(alpha);
    let shifted = CircleFunction::from_coeffs(
        h.iter()
            .map(|(k, z)| (k, z * Complex64::from_polar(1.0, TAU * k as f64 * s))),
    );
    assert!(conj.sub(&shifted.of_u2(theta).unwrap()).unwrap().l1() < 1e-15);
    for t in [0.0, 0.1, 0.77] {
        assert!((shifted.eval(t) - h.eval(t + s)).norm() < 1e-14);
    }
}

#[test]
fn smooth_step_shape() {
    assert_eq!(smooth_step(0.0), 0.0);
    assert_eq!(smooth_step(1.0), 1.0);
    assert_eq!(smooth_step(-3.0), 0.0);
    assert!((smooth_step(0.5) - 0.5).abs() < 1e-15);
    for x in [0.1, 0.3, 0.45] {
        assert!((smooth_step(x) + smooth_step(1.0 - x) - 1.0).abs() < 1e-15);
        assert!(smooth_step(x) < smooth_step(x + 0.05));
    }
}

#[test]
fn profile_satisfies_idempotent_conditions_pointwise() {
    for (alpha, eps) in [(0.25, 0.125), (1.0 / 3.0, 0.2), (0.3, 0.3), (0.1, 0.05)] {
        let cfg = PRConfig {
            alpha,
            eps,
            trunc: 16,
            samples: 4096,
        };
        let p = RampProfile::new(&cfg).unwrap();
        assert!(p.projection_residual(4096) <= 1e-10, "alpha {alpha}");
        for j in 0..2000 {
            let t = j as f64 / 2000.0;
            assert!(p.f(t) >= 0.0 && p.g(t) >= 0.0 && p.g(t) <= 1.0);
            assert!((p.f(t) * p.f(t - p.shift())).abs() <= 1e-12);
        }
    }
}

#[test]
fn bump_coefficients() {
    let cfg = PRConfig::default();
    let (g, f) = build_bump(&cfg).unwrap();
    assert_eq!(g.coeff(0), c(0.25, 0.0));
    assert!(g.is_real(0.0) && f.is_real(0.0));
    assert_eq!(g.iter().count(), 2 * cfg.trunc + 1);
    assert!(f.coeff(0).re > 0.0 && f.coeff(0).im == 0.0);
    // the discrete mean of g agrees with α up to the sampling error
    let mean: f64 = (0..cfg.samples)
        .map(|j| RampProfile::new(&cfg).unwrap().g(j as f64 / cfg.samples as f64))
        .sum::<f64>()
        / cfg.samples as f64;
    assert!((mean - 0.25).abs() < 1e-12);
}

#[test]
fn projection_is_hermitian_with_trace_alpha() {
    for alpha in [0.25, 1.0 / 3.0, 0.3] {
        for trunc in [8, 32] {
            let cfg = PRConfig {
                alpha,
                eps: alpha.min(1.0 - 2.0 * alpha) * 0.5,
                trunc,
                samples: 8 * trunc,
            };
            let e = build_projection(&cfg).unwrap();
            assert!(e.is_hermitian(1e-15));
            assert!((e.trace() - c(alpha, 0.0)).norm() < 1e-12);
            assert_eq!(e.radius(), trunc as i64);
        }
    }
    let small = build_projection(&PRConfig {
        alpha: 1e-3,
        eps: 5e-4,
        trunc: 8,
        samples: 64,
    })
    .unwrap();
    assert!((small.trace().re - 1e-3).abs() < 1e-15);
}

#[test]
fn projection_defect_decreases_with_truncation() {
    let defects: Vec<f64> = [16, 32, 64, 128]
        .iter()
        .map(|&k| projection_defect(&build_projection(&PRConfig::default().with_trunc(k)).unwrap()).unwrap())
        .collect();
    for w in defects.windows(2) {
        assert!(w[1] < w[0], "{defects:?}");
    }
    assert!(defects[2] <= 3e-4, "{defects:?}");
    assert!(defects[2] > DEFAULT_TOL_PROJECTION * 0.1);
}

#[test]
fn unitary_from_trivial_projections() {
    let theta = DeformationMatrix::planar(0.25).unwrap();
    let u3 = TorusElement::generator(theta, 1, 3).unwrap();
    let from_zero = build_unitary(&TorusElement::zero(theta, 1), 1e-12).unwrap();
    let from_one = build_unitary(&TorusElement::one(theta, 1), 1e-12).unwrap();
    assert!(from_zero.sub(&u3.adjoint()).unwrap().is_zero());
    assert!(from_one.sub(&u3).unwrap().is_zero());
}

#[test]
fn unitary_guards() {
    let e = build_projection(&PRConfig::default()).unwrap();
    match build_unitary(&e, 1e-6) {
        Err(Error::Precondition { value, allowed, .. }) => {
            assert!(value > 1e-4 && allowed == 1e-6);
        }
        other => panic!("expected precondition error, got {other:?}"),
    }
    let theta = *e.theta();
    let not_herm = TorusElement::generator(theta, 1, 1).unwrap();
    assert!(matches!(build_unitary(&not_herm, 1.0), Err(Error::Precondition { .. })));
}

#[test]
fn unitary_defect_is_controlled_by_projection_defect() {
    let mut last = f64::INFINITY;
    for k in [16, 32, 64] {
        let e = build_projection(&PRConfig::default().with_trunc(k)).unwrap();
        let pd = projection_defect(&e).unwrap();
        let u = build_unitary(&e, 1.0).unwrap();
        let du = u.defect_unitary();
        assert!(du <= 4.0 * pd * (1.0 + 1e-10), "K = {k}: {du} vs {pd}");
        assert!(du < last);
        last = du;
    }
}

#[test]
fn derivatives_of_the_unitary() {
    let e = build_projection(&PRConfig::default().with_trunc(32)).unwrap();
    let theta = *e.theta();
    let u = build_unitary(&e, 1e-2).unwrap();
    let u3 = TorusElement::generator(theta, 1, 3).unwrap();
    let odd = u3.sub(&u3.adjoint()).unwrap();
    for axis in [1, 2] {
        let lhs = u.derive(axis).unwrap();
        let rhs = e.derive(axis).unwrap().mul(&odd).unwrap();
        assert!(lhs.sub(&rhs).unwrap().l1() < 1e-12 * rhs.l1());
    }
    // U∂₃U* equals 2iπ(1 − 2e) up to terms carrying a factor e² − e
    let one = TorusElement::one(theta, 1);
    let expected = one.sub(&e.scale_re(2.0)).unwrap().scale(c(0.0, TAU));
    let got = u.mul(&u.adjoint().derive(3).unwrap()).unwrap();
    let pd = projection_defect(&e).unwrap();
    assert!(got.sub(&expected).unwrap().l1() <= 2.0 * TAU * pd * (1.0 + 1e-10));
    // exact form: U∂₃U* = 2iπ(1 − 2e) + 2iπ(e − e²)(U₃² − U₃*²)
    let u3sq = u3.mul(&u3).unwrap();
    let wave = u3sq.sub(&u3sq.adjoint()).unwrap();
    let excess = e
        .sub(&e.mul(&e).unwrap())
        .unwrap()
        .mul(&wave)
        .unwrap()
        .scale(c(0.0, TAU));
    let exact = expected.add(&excess).unwrap();
    assert!(got.sub(&exact).unwrap().l1() < 1e-10);
}

#[test]
fn powers() {
    let theta = DeformationMatrix::new(0.2, 0.1, 0.3).unwrap();
    let u1 = TorusElement::generator(theta, 2, 1).unwrap();
    let p = power(&u1, 5).unwrap();
    assert_eq!(
        p,
        TorusElement::monomial(theta, 2, MultiIndex::new(5, 0, 0), c(1.0, 0.0))
    );
    let x = u1.add(&TorusElement::generator(theta, 2, 2).unwrap()).unwrap();
    let naive = x.mul(&x).unwrap().mul(&x).unwrap();
    assert!(power(&x, 3).unwrap().sub(&naive).unwrap().l1() < 1e-14);
    assert_eq!(power(&x, 1).unwrap(), x);
    assert!(matches!(power(&x, 0), Err(Error::Argument(_))));
}

#[test]
fn config_validation() {
    let base = PRConfig::default();
    assert!(base.validate().is_ok());
    let bad = [
        PRConfig { alpha: 0.0, ..base },
        PRConfig { alpha: 0.5, ..base },
        PRConfig {
            alpha: f64::NAN,
            ..base
        },
        PRConfig { eps: 0.0, ..base },
        PRConfig { eps: 0.3, ..base },
        PRConfig {
            alpha: 0.45,
            eps: 0.1,
            ..base
        },
        PRConfig { trunc: 0, ..base },
        PRConfig { samples: 100, ..base },
    ];
    for cfg in bad {
        assert!(matches!(cfg.validate(), Err(Error::Config(_))), "{cfg:?}");
        assert!(build_projection(&cfg).is_err());
    }
    assert_eq!(base.with_trunc(200).samples, 1600);
    assert_eq!(base.with_trunc(8).samples, 1024);
}

#[test]
fn attained_topological_values() {
    let e = build_projection(&PRConfig::default().with_trunc(96)).unwrap();
    let ch = chern2(&e).unwrap();
    assert!((ch - c(-1.0, 0.0)).norm() < 1e-8, "{ch}");
    let one = TorusElement::one(*e.theta(), 1);
    let ch_c = chern2(&one.sub(&e).unwrap()).unwrap();
    assert!((ch_c - c(1.0, 0.0)).norm() < 1e-8);
    let u = build_unitary(&e, DEFAULT_TOL_PROJECTION).unwrap();
    let w = winding(&u, 1e-2).unwrap();
    assert!((w - c(-2.0, 0.0)).norm() < 1e-7, "{w}");
    let w2 = winding(&power(&u, 2).unwrap(), 1e-2).unwrap();
    assert!((w2 - c(-4.0, 0.0)).norm() < 1e-6, "{w2}");
}
