//! Direct solvers for the finite-volume and mixed systems.

use nalgebra::{DMatrix, DVector};

use crate::assembly::{assemble_fv, SaddleSystem, Scheme, SourceFunction};
use crate::error::{Error, Result};
use crate::mesh::Mesh;

/// Cell values `u_{j+1/2}` and nodal gradients `p_j` on a mesh.
#[derive(Debug, Clone)]
pub struct DiscreteSolution {
    pub mesh: Mesh,
    pub u_cells: Vec<f64>,
    pub p_nodes: Vec<f64>,
    pub scheme: Scheme,
}

impl DiscreteSolution {
    /// Largest defect of the cell balances `p_{j+1} - p_j + ∫_cell f = 0`.
    pub fn conservation_defect(&self, rhs_cells: &[f64]) -> f64 {
        self.p_nodes.windows(2).zip(rhs_cells).map(|(p, f)| (p[1] - p[0] + f).abs()).fold(0.0, f64::max)
    }
}

/// Heuristic finite volumes: solve the cell system, then recover the
/// gradients by difference quotients over the dual widths.
pub fn solve_fv(mesh: &Mesh, f: &SourceFunction, quad_order: usize) -> Result<DiscreteSolution> {
    let system = assemble_fv(mesh, f, quad_order)?;
    let u = system.matrix.solve(&system.rhs)?;
    let n = mesh.n();
    let dual = mesh.dual_widths();
    let p = (0..=n)
        .map(|j| {
            let right = if j < n { u[j] } else { 0.0 };
            let left = if j > 0 { u[j - 1] } else { 0.0 };
            (right - left) / dual[j]
        })
        .collect();
    Ok(DiscreteSolution { mesh: mesh.clone(), u_cells: u, p_nodes: p, scheme: Scheme::HeuristicFv })
}

/// Block elimination `p = -M⁻¹ Bᵗ u`, `(B M⁻¹ Bᵗ) u = f_T`.
///
/// A diagonal mass block gives a tridiagonal Schur complement solved in
/// `O(n)`; otherwise `M⁻¹ Bᵗ` is formed column by column with the banded
/// solver and the dense Schur complement is Cholesky factorized.
pub fn solve_mixed(system: &SaddleSystem) -> Result<DiscreteSolution> {
    let n = system.n();
    if system.mass.dim() != n + 1 {
        return Err(Error::Dimension { expected: n + 1, got: system.mass.dim() });
    }
    let u = if let Some(schur) = system.diagonal_schur() {
        if let Some(j) = system.mass.diag.iter().position(|&d| d == 0.0 || !d.is_finite()) {
            return Err(Error::SingularMass(format!("zero diagonal entry at node {j}")));
        }
        if !schur.is_positive_definite() {
            let row = schur.ldlt_pivots().iter().position(|&p| p <= 0.0).unwrap_or(0);
            return Err(Error::IndefiniteSchur { row });
        }
        schur.solve(&system.rhs_cells)?
    } else {
        dense_schur_solve(system)?
    };

    let bt_u = system.div.apply_transpose(&u);
    let p: Vec<f64> = system
        .mass
        .solve(&bt_u)
        .map_err(|e| Error::SingularMass(e.to_string()))?
        .into_iter()
        .map(|v| -v)
        .collect();
    Ok(DiscreteSolution { mesh: system.mesh.clone(), u_cells: u, p_nodes: p, scheme: system.scheme.clone() })
}

fn dense_schur_solve(system: &SaddleSystem) -> Result<Vec<f64>> {
    let n = system.n();
    // Column l of Bᵗ is e_{l+1} - e_l.
    let mut minv_bt = DMatrix::<f64>::zeros(n + 1, n);
    let mut e = vec![0.0; n + 1];
    for l in 0..n {
        e.iter_mut().for_each(|v| *v = 0.0);
        e[l] = -1.0;
        e[l + 1] = 1.0;
        let col = system.mass.solve(&e).map_err(|err| Error::SingularMass(err.to_string()))?;
        minv_bt.column_mut(l).copy_from_slice(&col);
    }
    let schur = DMatrix::from_fn(n, n, |l, k| minv_bt[(l + 1, k)] - minv_bt[(l, k)]);
    let rhs = DVector::from_column_slice(&system.rhs_cells);
    if system.mass.is_symmetric() {
        let chol = schur.cholesky().ok_or(Error::IndefiniteSchur { row: 0 })?;
        Ok(chol.solve(&rhs).as_slice().to_vec())
    } else {
        let x = schur.lu().solve(&rhs).ok_or(Error::IndefiniteSchur { row: 0 })?;
        Ok(x.as_slice().to_vec())
    }
}

/// Max-norm of the block residual `(M p + Bᵗ u, B p + f_T)`.
pub fn residual(system: &SaddleSystem, solution: &DiscreteSolution) -> f64 {
    let mp = system.mass.mul_vec(&solution.p_nodes);
    let btu = system.div.apply_transpose(&solution.u_cells);
    let bp = system.div.apply(&solution.p_nodes);
    let first = mp.iter().zip(&btu).map(|(a, b)| (a + b).abs());
    let second = bp.iter().zip(&system.rhs_cells).map(|(a, f)| (a + f).abs());
    first.chain(second).fold(0.0, f64::max)
}

/// [`residual`] divided by the size of the data and of the solution.
pub fn relative_residual(system: &SaddleSystem, solution: &DiscreteSolution) -> f64 {
    let max_abs = |v: &[f64]| v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let mass_scale = system.mass.diag.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let scale = max_abs(&system.rhs_cells)
        .max(mass_scale * max_abs(&solution.p_nodes))
        .max(max_abs(&solution.u_cells))
        .max(f64::MIN_POSITIVE);
    residual(system, solution) / scale
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::DEFAULT_RHS_ORDER;
    use crate::mesh::RegularFamilySpec;
    use crate::weighting::{affine, perturbed_family, spline, WeightingFunction};
    use std::f64::consts::PI;

    const Q: usize = DEFAULT_RHS_ORDER;

    fn sine() -> SourceFunction {
        SourceFunction::with_antiderivative(|x| PI * PI * (PI * x).sin(), |x| -PI * (PI * x).cos())
    }

    #[test]
    fn zero_data_zero_solution() {
        let mesh = Mesh::uniform(7).unwrap();
        let fv = solve_fv(&mesh, &SourceFunction::zero(), Q).unwrap();
        assert!(fv.u_cells.iter().chain(&fv.p_nodes).all(|&v| v == 0.0));
        let sys = SaddleSystem::classical(&mesh, &SourceFunction::zero(), Q).unwrap();
        let mixed = solve_mixed(&sys).unwrap();
        assert!(mixed.u_cells.iter().chain(&mixed.p_nodes).all(|&v| v == 0.0));
    }

    #[test]
    fn two_cells_constant_source() {
        // h = 1/2, h_0 = h_2 = 1/4, h_1 = 1/2:
        // [6 -2; -2 6] u = [1; 1]  =>  u = 1/4 on both cells.
        let mesh = Mesh::uniform(2).unwrap();
        let sol = solve_fv(&mesh, &SourceFunction::constant(2.0), Q).unwrap();
        assert!((sol.u_cells[0] - 0.25).abs() < 1e-15);
        assert!((sol.u_cells[1] - 0.25).abs() < 1e-15);
        // p_0 = u / h_0 = 1, p_1 = 0, p_2 = -1.
        let want = [1.0, 0.0, -1.0];
        for (p, w) in sol.p_nodes.iter().zip(want) {
            assert!((p - w).abs() < 1e-14);
        }
    }

    #[test]
    fn pg_spline_equals_fv() {
        let mesh = Mesh::random_regular(&RegularFamilySpec::new(0.5, 2.0, 33, 9).unwrap()).unwrap();
        let f = sine();
        let fv = solve_fv(&mesh, &f, Q).unwrap();
        let sys = SaddleSystem::petrov_galerkin(&mesh, &spline().default_moments(), "spline", &f, Q).unwrap();
        let pg = solve_mixed(&sys).unwrap();
        for (a, b) in fv.u_cells.iter().zip(&pg.u_cells) {
            assert!((a - b).abs() < 1e-10);
        }
        for (a, b) in fv.p_nodes.iter().zip(&pg.p_nodes) {
            assert!((a - b).abs() < 1e-10);
        }
        assert!(residual(&sys, &pg) < 1e-10);
    }

    #[test]
    fn classical_equals_pg_affine() {
        let mesh = Mesh::random_regular(&RegularFamilySpec::new(0.5, 2.0, 17, 2).unwrap()).unwrap();
        let f = sine();
        let cl = solve_mixed(&SaddleSystem::classical(&mesh, &f, Q).unwrap()).unwrap();
        let sys = SaddleSystem::petrov_galerkin(&mesh, &affine().default_moments(), "affine", &f, Q).unwrap();
        let pg = solve_mixed(&sys).unwrap();
        for (a, b) in cl.u_cells.iter().zip(&pg.u_cells).chain(cl.p_nodes.iter().zip(&pg.p_nodes)) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(relative_residual(&sys, &pg) < 1e-10);
        assert!(pg.conservation_defect(&sys.rhs_cells) < 1e-10);
    }

    #[test]
    fn singular_mass_detected() {
        // ψ(θ) = θ - 4/3 θ² ... any ψ with ∫θψ = 0 gives a zero diagonal.
        let psi = WeightingFunction::polynomial("m1-zero", vec![0.0, 1.0, -4.0 / 3.0]);
        let m = psi.default_moments();
        assert!(m.m1.abs() < 1e-15);
        let mesh = Mesh::uniform(4).unwrap();
        let mut sys = SaddleSystem::petrov_galerkin(&mesh, &m, "m1-zero", &sine(), Q).unwrap();
        assert!(solve_mixed(&sys).is_err());
        sys.mass = crate::linalg::Tridiagonal::from_diagonal(vec![0.0; 5]);
        assert!(matches!(solve_mixed(&sys), Err(Error::SingularMass(_))));
    }

    #[test]
    fn residual_examples() {
        let mesh = Mesh::uniform(5).unwrap();
        let f = SourceFunction::constant(3.0);
        let sys = SaddleSystem::classical(&mesh, &f, Q).unwrap();
        let mut sol = solve_mixed(&sys).unwrap();
        assert!(residual(&sys, &sol) <= 1e-10);

        let zero = DiscreteSolution {
            mesh: mesh.clone(),
            u_cells: vec![0.0; 5],
            p_nodes: vec![0.0; 6],
            scheme: Scheme::ClassicalMixed,
        };
        assert!((residual(&sys, &zero) - 0.6).abs() < 1e-15);

        // Bumping u_2 by 1 changes Bᵗu by the column (0, 0, +1, -1, 0, 0).
        sol.u_cells[2] += 1.0;
        assert!(residual(&sys, &sol) >= 1.0 - 1e-10);
    }

    #[test]
    fn symmetric_mesh_symmetric_solution() {
        let widths = vec![0.1, 0.15, 0.25, 0.25, 0.15, 0.1];
        let mesh = Mesh::from_widths(widths).unwrap();
        assert!(mesh.is_symmetric(1e-15));
        let f = SourceFunction::new(|x| (x * (1.0 - x)).cos());
        for psi in [spline(), perturbed_family(1.0), affine()] {
            let sys =
                SaddleSystem::petrov_galerkin(&mesh, &psi.default_moments(), psi.name(), &f, Q).unwrap();
            let sol = solve_mixed(&sys).unwrap();
            let n = 6;
            for j in 0..n {
                assert!((sol.u_cells[j] - sol.u_cells[n - 1 - j]).abs() < 1e-10);
            }
            for j in 0..=n {
                assert!((sol.p_nodes[j] + sol.p_nodes[n - j]).abs() < 1e-10);
            }
        }
    }
}
