use shrinker_core::construct::{build_counterexample, build_mss_counterexample, CounterexampleConfig, MssConfig};
use shrinker_core::numerics::ScalarField;
use shrinker_core::TauParams;

fn config(n: usize) -> CounterexampleConfig {
    let mut cfg = CounterexampleConfig::new(TauParams::from_cot(-2.0).unwrap(), n, 0.0, 1.0);
    cfg.axis_samples = 401;
    cfg.random_samples = 400;
    cfg
}

#[test]
fn counterexample_residual_shrinks_with_tolerance() {
    let mut sups = Vec::new();
    for tol in [1e-9, 1e-10, 1e-11] {
        let ce = build_counterexample(&config(2).with_tolerances(tol, tol)).unwrap();
        sups.push(ce.certificate().residual_sup);
    }
    for w in sups.windows(2) {
        assert!(w[0] >= 5.0 * w[1], "{sups:?}");
    }
}

#[test]
fn counterexample_identity_and_reproducibility() {
    for n in [1, 2, 3] {
        let ce = build_counterexample(&config(n)).unwrap();
        let cert = ce.certificate();
        assert!(cert.pass, "n = {n}: {cert:?}");
        assert!(ce.w1().phase_identity_defect() <= 1e-7);
        let cone = cert.cone.as_ref().unwrap();
        assert!(cone.ok && cone.min_margin > 0.0);
        let again = ce.recertify().unwrap();
        assert!((again.residual_sup - cert.residual_sup).abs() <= 1e-12);
    }
}

#[test]
fn counterexample_is_not_quadratic() {
    let ce = build_counterexample(&config(2)).unwrap();
    let w1 = ce.w1();
    assert!((w1.third_derivative(0.0).unwrap() - 0.25).abs() <= 1e-8);
    // A quadratic would have constant second derivative along e₁.
    let h0 = ce.u().hessian(&[0.0, 0.0]).unwrap().get(0, 0);
    let h1 = ce.u().hessian(&[1.0, 0.0]).unwrap().get(0, 0);
    assert!((h0 - h1).abs() > 1e-3);
}

#[test]
fn mss_profile_is_spacelike() {
    for (phi0, s0) in [(1.0, 0.0), (-0.5, 0.3), (0.5, -0.2)] {
        let ce = build_mss_counterexample(&MssConfig::new(phi0, s0)).unwrap();
        let cert = ce.certificate();
        assert!(cert.pass, "{cert:?}");
        assert!(cert.bounds.iter().all(|b| b.value < 1.0));
    }
}
