use shrinker_core::numerics::{integrate_ode, OdeOptions};

fn sine_error(tol: f64) -> f64 {
    let opts = OdeOptions::with_tolerances(tol, tol);
    let traj = integrate_ode(
        |_, y, dy| {
            dy[0] = y[1];
            dy[1] = -y[0];
        },
        0.0,
        &[0.0, 1.0],
        10.0,
        &opts,
    )
    .unwrap();
    (traj.y_end()[0] - 10.0_f64.sin()).abs()
}

#[test]
fn halving_tolerance_reduces_sine_error() {
    let errors: Vec<f64> = (0..14).map(|k| sine_error(1e-7 / 2f64.powi(k))).collect();
    for w in errors.windows(2) {
        assert!(w[1] < w[0], "{errors:?}");
    }
}

#[test]
fn dense_output_tracks_sine_between_steps() {
    let opts = OdeOptions::with_tolerances(1e-11, 1e-11);
    let traj = integrate_ode(
        |_, y, dy| {
            dy[0] = y[1];
            dy[1] = -y[0];
        },
        0.0,
        &[0.0, 1.0],
        10.0,
        &opts,
    )
    .unwrap();
    for i in 0..=1000 {
        let t = i as f64 * 0.01;
        let y = traj.eval(t).unwrap();
        assert!((y[0] - t.sin()).abs() < 1e-9, "t = {t}");
        assert!((y[1] - t.cos()).abs() < 1e-9, "t = {t}");
    }
}
