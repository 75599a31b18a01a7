use shrinker_core::operators::growth_ratio_check;
use shrinker_core::radial::{radial_quadratic_reference, shoot_radial, RadialOptions};
use shrinker_core::tau::f_scalar;
use shrinker_core::{Branch, TauParams};

fn curvatures(branch: Branch) -> [f64; 5] {
    match branch {
        Branch::MongeAmpere => [0.2, 0.5, 1.0, 2.0, 4.0],
        Branch::Log => [-0.2, 0.0, 0.5, 1.0, 3.0],
        Branch::Harmonic => [-0.5, 0.0, 0.5, 1.0, 3.0],
        Branch::Arctan | Branch::SpecialLagrangian => [-3.0, -1.0, 0.0, 1.0, 3.0],
        Branch::Negative => [0.5, 1.0, 2.0, 3.0, 3.5],
    }
}

#[test]
fn shooting_reproduces_quadratics() {
    for branch in Branch::ALL {
        let tp = TauParams::representative(branch);
        for n in [1, 2, 3] {
            for c in curvatures(branch) {
                let u0 = -(n as f64) * f_scalar(&tp, c).unwrap();
                let shot = shoot_radial(&tp, n, u0, 10.0, &RadialOptions::default()).unwrap();
                assert!(shot.event().is_completed(), "{branch} n={n} c={c}: {:?}", shot.event());
                let reference = radial_quadratic_reference(&tp, n, c, 10.0, 101).unwrap();
                let dev = shot.max_deviation(&reference, 10.0, 2001).unwrap();
                assert!(dev <= 1e-6, "{branch} n={n} c={c}: {dev:e}");
                let mut theta = vec![0.0; n];
                theta[0] = 1.0;
                for r in [0.5, 2.0, 5.0, 9.0] {
                    let g = growth_ratio_check(&shot, &theta, r).unwrap();
                    assert!(g.defect <= 1e-6, "{branch} n={n} c={c} r={r}: {g:?}");
                }
            }
        }
    }
}

#[test]
fn shifted_start_value_is_another_quadratic() {
    let tp = TauParams::special_lagrangian();
    let u0 = -std::f64::consts::FRAC_PI_2 + 0.1;
    let shot = shoot_radial(&tp, 2, u0, 50.0, &RadialOptions::default()).unwrap();
    assert!(shot.event().is_completed());
    let c = (-u0 / 2.0).tan();
    assert!((shot.curvature_at_origin() - c).abs() < 1e-14);
    let reference = radial_quadratic_reference(&tp, 2, c, 50.0, 11).unwrap();
    assert!(shot.max_deviation(&reference, 50.0, 501).unwrap() < 1e-9);
}

#[test]
fn offset_from_regular_family_does_not_complete() {
    let tp = TauParams::special_lagrangian();
    for offset in [1e-10, -1e-10] {
        let opts = RadialOptions {
            offset,
            ..RadialOptions::default()
        };
        let shot = shoot_radial(&tp, 2, -std::f64::consts::FRAC_PI_2 + 0.1, 50.0, &opts).unwrap();
        assert!(!shot.event().is_completed(), "{:?}", shot.event());
        assert!(shot.reach() < 50.0);
    }
}
