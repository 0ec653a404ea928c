use crate::analysis::problems::ManufacturedProblem;
use crate::error::{Error, Result};
use crate::mesh::Mesh;
use crate::solver::DiscreteSolution;
use crate::weighting::{GaussLegendre, MomentTable};

/// Per-cell Gauss-Legendre order for error integrals.
pub const DEFAULT_ERROR_ORDER: usize = 8;

/// Panels of the composite rule used for data norms (`128 x 8 = 1024` points).
pub const DATA_NORM_PANELS: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorReport {
    pub n: usize,
    pub h_max: f64,
    /// `‖u - u_T‖₀`
    pub err_u_l2: f64,
    /// `‖p - p_T‖₀`
    pub err_p_l2: f64,
    /// `‖p - p_T‖₁`, the full `H¹` norm
    pub err_p_h1: f64,
}

/// Errors of a discrete solution against a manufactured problem.
///
/// `u_T` is piecewise constant, `p_T` the continuous piecewise linear
/// function with the nodal values of the solution.
pub fn error_norms(
    solution: &DiscreteSolution,
    problem: &ManufacturedProblem,
    quad_order: usize,
) -> Result<ErrorReport> {
    let mesh = &solution.mesh;
    let n = mesh.n();
    if solution.u_cells.len() != n {
        return Err(Error::Dimension { expected: n, got: solution.u_cells.len() });
    }
    if solution.p_nodes.len() != n + 1 {
        return Err(Error::Dimension { expected: n + 1, got: solution.p_nodes.len() });
    }
    let rule = GaussLegendre::new(quad_order)?;
    let (mut eu, mut ep, mut edp) = (0.0, 0.0, 0.0);
    for (j, (a, b)) in mesh.cells().enumerate() {
        let h = b - a;
        let (pa, pb) = (solution.p_nodes[j], solution.p_nodes[j + 1]);
        let slope = (pb - pa) / h;
        let uj = solution.u_cells[j];
        eu += rule.integrate_on(a, b, |x| (problem.u(x) - uj).powi(2));
        ep += rule.integrate_on(a, b, |x| {
            let t = (x - a) / h;
            (problem.p(x) - (pa * (1.0 - t) + pb * t)).powi(2)
        });
        edp += rule.integrate_on(a, b, |x| (problem.dp(x) - slope).powi(2));
    }
    Ok(ErrorReport {
        n,
        h_max: mesh.h_max(),
        err_u_l2: eu.sqrt(),
        err_p_l2: ep.sqrt(),
        err_p_h1: (ep + edp).sqrt(),
    })
}

/// `(‖q‖₀, |q|₁)` of `q = Σ q_j ψ_j` from the moments of `ψ`.
///
/// On each cell `q = q_j ψ(1 - θ) + q_{j+1} ψ(θ)`, hence
/// `‖q‖₀² = Σ h (s (q_j² + q_{j+1}²) + 2 c q_j q_{j+1})` and
/// `|q|₁² = Σ (sd (q_j² + q_{j+1}²) - 2 cd q_j q_{j+1}) / h`.
/// With the affine moments these are the `P1` norms.
pub fn discrete_norm_q(mesh: &Mesh, m: &MomentTable, coeffs: &[f64]) -> Result<(f64, f64)> {
    let n = mesh.n();
    if coeffs.len() != n + 1 {
        return Err(Error::Dimension { expected: n + 1, got: coeffs.len() });
    }
    let (mut l2, mut h1) = (0.0, 0.0);
    for (j, &h) in mesh.cell_widths().iter().enumerate() {
        let (a, b) = (coeffs[j], coeffs[j + 1]);
        let sq = a * a + b * b;
        l2 += h * (m.s * sq + 2.0 * m.c * a * b);
        h1 += (m.sd * sq - 2.0 * m.cd * a * b) / h;
    }
    // Cancellation can leave tiny negative values for constant coefficients.
    Ok((l2.max(0.0).sqrt(), h1.max(0.0).sqrt()))
}

/// `Σ_j h_{j+1/2} (q_j² + q_{j+1}²)`.
pub fn weighted_sum_sq(mesh: &Mesh, coeffs: &[f64]) -> f64 {
    mesh.cell_widths().iter().enumerate().map(|(j, h)| h * (coeffs[j].powi(2) + coeffs[j + 1].powi(2))).sum()
}

/// `Σ_j (q_j² + q_{j+1}²) / h_{j+1/2}`.
pub fn inverse_weighted_sum_sq(mesh: &Mesh, coeffs: &[f64]) -> f64 {
    mesh.cell_widths().iter().enumerate().map(|(j, h)| (coeffs[j].powi(2) + coeffs[j + 1].powi(2)) / h).sum()
}

/// `‖g‖₀` over `[0, 1]` by a composite Gauss-Legendre rule.
pub fn composite_l2<F: Fn(f64) -> f64>(g: F, panels: usize, order: usize) -> Result<f64> {
    let rule = GaussLegendre::new(order)?;
    let w = 1.0 / panels as f64;
    let sum: f64 =
        (0..panels).map(|k| rule.integrate_on(k as f64 * w, (k + 1) as f64 * w, |x| g(x).powi(2))).sum();
    Ok(sum.sqrt())
}

/// `‖f‖₀` and, when `f'` is known, `‖f‖₁` of the problem data.
pub fn source_norms(problem: &ManufacturedProblem) -> (f64, Option<f64>) {
    let l2 = composite_l2(|x| problem.f.eval(x), DATA_NORM_PANELS, 8).expect("order 8 is valid");
    let h1 = problem.source_derivative(0.5).map(|_| {
        let d = composite_l2(|x| problem.source_derivative(x).unwrap(), DATA_NORM_PANELS, 8)
            .expect("order 8 is valid");
        (l2 * l2 + d * d).sqrt()
    });
    (l2, h1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::interp::interp_p0;
    use crate::analysis::interp::interp_p1;
    use crate::assembly::Scheme;
    use crate::weighting::{affine, spline};
    use std::f64::consts::PI;

    #[test]
    fn zero_problem_zero_error() {
        let mesh = Mesh::uniform(8).unwrap();
        let sol = DiscreteSolution {
            mesh,
            u_cells: vec![0.0; 8],
            p_nodes: vec![0.0; 9],
            scheme: Scheme::HeuristicFv,
        };
        let e = error_norms(&sol, &ManufacturedProblem::zero(), DEFAULT_ERROR_ORDER).unwrap();
        assert_eq!((e.err_u_l2, e.err_p_l2, e.err_p_h1), (0.0, 0.0, 0.0));
    }

    #[test]
    fn interpolant_error_matches_simpson_oracle() {
        let mesh = Mesh::from_vertices(&[0.0, 0.1, 0.35, 0.5, 0.8, 1.0]).unwrap();
        let pb = ManufacturedProblem::sine();
        let u_cells = interp_p0(&mesh, |x| pb.u(x), 8).unwrap();
        let p_nodes = interp_p1(&mesh, |x| pb.p(x));
        let sol = DiscreteSolution {
            mesh: mesh.clone(),
            u_cells: u_cells.clone(),
            p_nodes,
            scheme: Scheme::HeuristicFv,
        };
        let e = error_norms(&sol, &pb, DEFAULT_ERROR_ORDER).unwrap();

        // Composite Simpson on 2000 sub-panels per cell.
        let mut oracle = 0.0;
        for (j, (a, b)) in mesh.cells().enumerate() {
            let m = 2000;
            let h = (b - a) / m as f64;
            let g = |x: f64| (pb.u(x) - u_cells[j]).powi(2);
            let mut s = g(a) + g(b);
            for k in 1..m {
                let x = a + k as f64 * h;
                s += if k % 2 == 1 { 4.0 } else { 2.0 } * g(x);
            }
            oracle += s * h / 3.0;
        }
        assert!((e.err_u_l2 - oracle.sqrt()).abs() < 1e-8);
        assert!(e.err_p_h1 >= e.err_p_l2);
    }

    #[test]
    fn affine_norm_of_identity() {
        let mesh = Mesh::from_vertices(&[0.0, 0.3, 0.45, 1.0]).unwrap();
        let (l2, h1) = discrete_norm_q(&mesh, &affine().default_moments(), mesh.vertices()).unwrap();
        assert!((l2 - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        assert!((h1 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn constants_have_zero_seminorm() {
        let mesh = Mesh::uniform(7).unwrap();
        let (_, h1) = discrete_norm_q(&mesh, &spline().default_moments(), &[1.0; 8]).unwrap();
        assert!(h1 < 1e-6);
    }

    #[test]
    fn discrete_norm_matches_quadrature() {
        let mesh = Mesh::from_vertices(&[0.0, 0.2, 0.6, 1.0]).unwrap();
        let psi = spline();
        let q = [0.3, -1.0, 2.0, 0.5];
        let (l2, h1) = discrete_norm_q(&mesh, &psi.default_moments(), &q).unwrap();
        let rule = GaussLegendre::new(10).unwrap();
        let (mut a2, mut b2) = (0.0, 0.0);
        for (j, (a, b)) in mesh.cells().enumerate() {
            let h = b - a;
            a2 += rule.integrate_on(a, b, |x| {
                let t = (x - a) / h;
                (q[j] * psi.eval(1.0 - t) + q[j + 1] * psi.eval(t)).powi(2)
            });
            b2 += rule.integrate_on(a, b, |x| {
                let t = (x - a) / h;
                ((-q[j] * psi.deriv(1.0 - t) + q[j + 1] * psi.deriv(t)) / h).powi(2)
            });
        }
        assert!((l2 - a2.sqrt()).abs() < 1e-13);
        assert!((h1 - b2.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn sine_data_norms() {
        let (l2, h1) = source_norms(&ManufacturedProblem::sine());
        assert!((l2 - PI * PI / 2f64.sqrt()).abs() < 1e-12);
        let want = (PI.powi(4) / 2.0 + PI.powi(6) / 2.0).sqrt();
        assert!((h1.unwrap() - want).abs() < 1e-11);
        assert!(source_norms(&ManufacturedProblem::step()).1.is_none());
    }
}
