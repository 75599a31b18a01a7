use std::f64::consts::SQRT_2;

use shrinker_core::numerics::{AnalyticField, Grid1D, QuadraticField, ScalarField, SymMatrix};
use shrinker_core::quadratics::build_quadratic;
use shrinker_core::transforms::{convexify_shift, legendre_1d, legendre_dual_residual};
use shrinker_core::TauParams;

#[test]
fn involution_on_analytic_convex_inputs() {
    let grid = Grid1D::new(-2.0, 2.0, 1e-2).unwrap();
    let half_square = QuadraticField::homogeneous(SymMatrix::identity(1), 0.0).unwrap();
    let cosh = AnalyticField::new(
        1,
        |x: &[f64]| x[0].cosh(),
        |x: &[f64]| vec![x[0].sinh()],
        |x: &[f64]| SymMatrix::from_diag(&[x[0].cosh()]),
    );
    let soft = AnalyticField::new(
        1,
        |x: &[f64]| (1.0 + x[0].exp()).ln() + 0.1 * x[0] * x[0],
        |x: &[f64]| vec![1.0 / (1.0 + (-x[0]).exp()) + 0.2 * x[0]],
        |x: &[f64]| {
            let s = 1.0 / (1.0 + (-x[0]).exp());
            SymMatrix::from_diag(&[s * (1.0 - s) + 0.2])
        },
    );
    assert!(legendre_1d(&half_square, &grid).unwrap().involution_defect <= 1e-9);
    assert!(legendre_1d(&cosh, &grid).unwrap().involution_defect <= 1e-9);
    assert!(legendre_1d(&soft, &grid).unwrap().involution_defect <= 1e-9);
}

#[test]
fn cosh_dual_matches_closed_form() {
    let grid = Grid1D::new(-2.0, 2.0, 1e-2).unwrap();
    let cosh = AnalyticField::new(
        1,
        |x: &[f64]| x[0].cosh(),
        |x: &[f64]| vec![x[0].sinh()],
        |x: &[f64]| SymMatrix::from_diag(&[x[0].cosh()]),
    );
    let tr = legendre_1d(&cosh, &grid).unwrap();
    for (y, d) in tr.y.iter().zip(&tr.dual) {
        let want = y * y.asinh() - (1.0 + y * y).sqrt();
        assert!((d - want).abs() < 1e-12, "y = {y}");
    }
}

#[test]
fn harmonic_quadratic_duals() {
    let tp = TauParams::harmonic();
    let grid = Grid1D::new(-3.0, 3.0, 1e-2).unwrap();
    for c in [-0.5, 0.0, 1.0, 2.5] {
        let u = build_quadratic(&tp, SymMatrix::scalar(1, c)).unwrap();
        assert!((u.constant() - SQRT_2 / (1.0 + c)).abs() < 1e-14);
        let w = convexify_shift(&tp, u).unwrap();
        assert_eq!(w.hessian(&[0.3]).unwrap().get(0, 0), 1.0 + c);
        let report = legendre_dual_residual(&w, &grid).unwrap();
        assert!(report.input_residual <= 1e-12, "{report:?}");
        assert!(report.dual_residual <= 1e-5, "{report:?}");
        assert!(report.hessian_inversion <= 1e-8, "{report:?}");
        assert!(report.phase_residual <= 1e-5, "{report:?}");
    }
}
