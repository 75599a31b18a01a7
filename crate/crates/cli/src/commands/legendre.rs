use serde::Serialize;

use shrinker_core::numerics::{AnalyticField, Grid1D, QuadraticField, SymMatrix};
use shrinker_core::quadratics::build_quadratic;
use shrinker_core::transforms::{convexify_shift, legendre_1d, legendre_dual_residual};
use shrinker_core::{Result, ScalarField, TauParams};

use super::{check_positive, Outcome};
use crate::args::LegendreArgs;
use crate::error::CliError;
use crate::report::{num, Report, Table};

/// Curvatures of the harmonic quadratic solutions whose duals are checked.
const HARMONIC_CURVATURES: [f64; 4] = [-0.5, 0.0, 1.0, 2.5];
const HESSIAN_TOL: f64 = 1e-8;
const DUAL_TOL: f64 = 1e-5;

#[derive(Serialize)]
struct InvolutionCase {
    case: &'static str,
    involution_defect: f64,
    pass: bool,
}

#[derive(Serialize)]
struct DualCase {
    curvature: f64,
    input_residual: f64,
    involution_defect: f64,
    hessian_inversion: f64,
    dual_residual: f64,
    phase_residual: f64,
    pass: bool,
}

fn involution<F: ScalarField>(case: &'static str, w: &F, grid: &Grid1D, tol: f64) -> Result<InvolutionCase> {
    let d = legendre_1d(w, grid)?.involution_defect;
    Ok(InvolutionCase {
        case,
        involution_defect: d,
        pass: d <= tol,
    })
}

pub fn run(args: &LegendreArgs) -> std::result::Result<Outcome, CliError> {
    check_positive("--span", args.span)?;
    check_positive("--grid-step", args.grid_step)?;
    let grid = Grid1D::new(-args.span, args.span, args.grid_step).map_err(|e| CliError::Usage(e.to_string()))?;

    let half_square = QuadraticField::homogeneous(SymMatrix::identity(1), 0.0)?;
    let cosh = AnalyticField::new(
        1,
        |x: &[f64]| x[0].cosh(),
        |x: &[f64]| vec![x[0].sinh()],
        |x: &[f64]| SymMatrix::from_diag(&[x[0].cosh()]),
    );
    let softplus = AnalyticField::new(
        1,
        |x: &[f64]| x[0].exp().ln_1p() + 0.1 * x[0] * x[0],
        |x: &[f64]| vec![1.0 / (1.0 + (-x[0]).exp()) + 0.2 * x[0]],
        |x: &[f64]| {
            let s = 1.0 / (1.0 + (-x[0]).exp());
            SymMatrix::from_diag(&[s * (1.0 - s) + 0.2])
        },
    );
    let involutions = vec![
        involution("half_square", &half_square, &grid, args.tol)?,
        involution("cosh", &cosh, &grid, args.tol)?,
        involution("softplus", &softplus, &grid, args.tol)?,
    ];

    let tp = TauParams::harmonic();
    let mut duals = Vec::new();
    for c in HARMONIC_CURVATURES {
        let u = build_quadratic(&tp, SymMatrix::scalar(1, c))?;
        let w = convexify_shift(&tp, u)?;
        let r = legendre_dual_residual(&w, &grid)?;
        let inv = legendre_1d(&w, &grid)?.involution_defect;
        duals.push(DualCase {
            curvature: c,
            input_residual: r.input_residual,
            involution_defect: inv,
            hessian_inversion: r.hessian_inversion,
            dual_residual: r.dual_residual,
            phase_residual: r.phase_residual,
            pass: inv <= args.tol
                && r.hessian_inversion <= HESSIAN_TOL
                && r.dual_residual <= DUAL_TOL
                && r.phase_residual <= DUAL_TOL,
        });
    }

    let mut table = Table::new(
        "legendre_check.csv",
        &[
            "case",
            "involution_defect",
            "hessian_inversion",
            "dual_residual",
            "phase_residual",
        ],
    );
    for c in &involutions {
        table.push(vec![
            c.case.into(),
            num(c.involution_defect),
            String::new(),
            String::new(),
            String::new(),
        ]);
    }
    for d in &duals {
        table.push(vec![
            format!("harmonic_c={}", d.curvature),
            num(d.involution_defect),
            num(d.hessian_inversion),
            num(d.dual_residual),
            num(d.phase_residual),
        ]);
    }
    let pass = involutions.iter().all(|c| c.pass) && duals.iter().all(|d| d.pass);
    let results = serde_json::json!({ "involution": involutions, "harmonic_duals": duals });
    Ok(Outcome {
        report: Report::new("legendre-check", args, results, pass)?,
        tables: vec![table],
        documents: Vec::new(),
    })
}
