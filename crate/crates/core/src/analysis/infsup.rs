//! Discrete inf-sup constant of the mixed Petrov-Galerkin form
//!
//! `γ((u, p), (v, q)) = (p, q) + (u, q') + (p', v)`
//!
//! with trial pairs in `U_T x P_T` (cell constants, `P1` gradients) and test
//! pairs in `U_T x Q_T^ψ` (cell constants, `ψ` gradients), both measured in
//! `L² x H¹`.
//!
//! With Gram matrices `G₁ = L₁L₁ᵀ` (trial) and `G₂ = L₂L₂ᵀ` (test) and the
//! matrix `Γ` of `γ` (`γ(ξ, η) = ηᵀ Γ ξ`), the constant
//!
//! `inf_ξ sup_η γ(ξ, η) / (‖ξ‖ ‖η‖)`
//!
//! is the smallest singular value of `L₂⁻¹ Γ L₁⁻ᵀ`.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::assembly::{assemble_mass_classical, assemble_mass_pg};
use crate::error::{Error, Result};
use crate::linalg::Tridiagonal;
use crate::mesh::Mesh;
use crate::weighting::MomentTable;

#[derive(Debug, Clone, PartialEq)]
pub struct InfSupReport {
    pub n: usize,
    pub h_max: f64,
    pub delta_t: f64,
    pub psi: String,
    pub mesh: String,
}

/// Dense matrices of the inf-sup problem on one mesh.
///
/// Coefficient vectors are ordered `(u_{1/2} .. u_{n-1/2}, p_0 .. p_n)` for
/// trial pairs and `(v_{1/2} .. v_{n-1/2}, q_0 .. q_n)` for test pairs.
#[derive(Debug, Clone)]
pub struct InfSupOperator {
    n: usize,
    trial_gram: DMatrix<f64>,
    test_gram: DMatrix<f64>,
    gamma: DMatrix<f64>,
}

impl InfSupOperator {
    pub fn new(mesh: &Mesh, m: &MomentTable) -> Self {
        let n = mesh.n();
        let size = 2 * n + 1;
        let hs = mesh.cell_widths();

        let mut trial_gram = DMatrix::zeros(size, size);
        let mut test_gram = DMatrix::zeros(size, size);
        for (l, &h) in hs.iter().enumerate() {
            trial_gram[(l, l)] = h;
            test_gram[(l, l)] = h;
        }
        let p1 = &assemble_mass_classical(mesh) + &stiffness(mesh, 1.0, 1.0);
        let q = &psi_mass(mesh, m) + &stiffness(mesh, m.sd, m.cd);
        write_block(&mut trial_gram, n, n, &p1);
        write_block(&mut test_gram, n, n, &q);

        let mut gamma = DMatrix::zeros(size, size);
        // (p, q): entry (q_j, p_i) = (φ_i, ψ_j).
        write_block(&mut gamma, n, n, &assemble_mass_pg(mesh, m).transpose());
        for l in 0..n {
            // (u, q'): u_l ∫_cell q' = u_l (q_{l+1} - q_l).
            gamma[(n + l, l)] = -1.0;
            gamma[(n + l + 1, l)] = 1.0;
            // (p', v): v_l (p_{l+1} - p_l).
            gamma[(l, n + l)] = -1.0;
            gamma[(l, n + l + 1)] = 1.0;
        }
        Self { n, trial_gram, test_gram, gamma }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn trial_gram(&self) -> &DMatrix<f64> {
        &self.trial_gram
    }

    pub fn test_gram(&self) -> &DMatrix<f64> {
        &self.test_gram
    }

    pub fn gamma(&self) -> &DMatrix<f64> {
        &self.gamma
    }

    /// `γ(ξ, η)`.
    pub fn form(&self, trial: &DVector<f64>, test: &DVector<f64>) -> f64 {
        test.dot(&(&self.gamma * trial))
    }

    /// `‖ξ‖` in `L² x H¹`.
    pub fn trial_norm(&self, trial: &DVector<f64>) -> f64 {
        trial.dot(&(&self.trial_gram * trial)).max(0.0).sqrt()
    }

    pub fn test_norm(&self, test: &DVector<f64>) -> f64 {
        test.dot(&(&self.test_gram * test)).max(0.0).sqrt()
    }

    fn factors(&self) -> Result<(Cholesky<f64, Dyn>, Cholesky<f64, Dyn>)> {
        let l1 = self.trial_gram.clone().cholesky().ok_or(Error::NotPositiveDefinite("trial"))?;
        let l2 = self.test_gram.clone().cholesky().ok_or(Error::NotPositiveDefinite("test"))?;
        Ok((l1, l2))
    }

    /// `sup_η γ(ξ, η) / ‖η‖`, attained at `η = G₂⁻¹ Γ ξ`.
    pub fn sup_over_tests(&self, trial: &DVector<f64>) -> Result<f64> {
        let (_, l2) = self.factors()?;
        let g = &self.gamma * trial;
        let w = l2.l().solve_lower_triangular(&g).expect("Cholesky factor is invertible");
        Ok(w.norm())
    }

    /// Singular values of `L₂⁻¹ Γ L₁⁻ᵀ`, ascending.
    pub fn singular_values(&self) -> Result<Vec<f64>> {
        let (l1, l2) = self.factors()?;
        let a = l2.l().solve_lower_triangular(&self.gamma).expect("Cholesky factor is invertible");
        // A L₁⁻ᵀ = (L₁⁻¹ Aᵀ)ᵀ
        let scaled =
            l1.l().solve_lower_triangular(&a.transpose()).expect("Cholesky factor is invertible").transpose();
        let mut sv: Vec<f64> = scaled.singular_values().iter().copied().collect();
        sv.sort_by(f64::total_cmp);
        Ok(sv)
    }

    pub fn delta(&self) -> Result<f64> {
        Ok(self.singular_values()?[0])
    }
}

/// Smallest generalized singular value of `γ` on `mesh` for the weighting
/// function with moments `m`.
pub fn infsup_constant(mesh: &Mesh, m: &MomentTable) -> Result<f64> {
    InfSupOperator::new(mesh, m).delta()
}

/// `ξ = (1, 0)`: unit cell values and zero gradient, of unit norm.
pub fn witness_direction(n: usize) -> DVector<f64> {
    DVector::from_fn(2 * n + 1, |i, _| if i < n { 1.0 } else { 0.0 })
}

/// Upper bound `2 / sqrt(n ε)` on `sup_η γ((1, 0), η)` over unit test pairs on a uniform mesh.
pub fn witness_bound(n: usize, epsilon: f64) -> f64 {
    2.0 / (n as f64 * epsilon).sqrt()
}

/// Gram matrix of `Σ q_j ψ_j` in `L²`: `s (h_{j-1/2} + h_{j+1/2})` on the
/// diagonal, `c h_{j+1/2}` between neighbours.
fn psi_mass(mesh: &Mesh, m: &MomentTable) -> Tridiagonal {
    let diag = mesh.dual_widths().iter().map(|h| 2.0 * m.s * h).collect();
    let off: Vec<f64> = mesh.cell_widths().iter().map(|h| m.c * h).collect();
    Tridiagonal::new(off.clone(), diag, off)
}

/// Gram matrix of the derivatives: `sd (1/h_{j-1/2} + 1/h_{j+1/2})` on the
/// diagonal, `-cd / h_{j+1/2}` between neighbours.
fn stiffness(mesh: &Mesh, sd: f64, cd: f64) -> Tridiagonal {
    let hs = mesh.cell_widths();
    let n = hs.len();
    let diag = (0..=n)
        .map(|j| {
            let left = if j > 0 { 1.0 / hs[j - 1] } else { 0.0 };
            let right = if j < n { 1.0 / hs[j] } else { 0.0 };
            sd * (left + right)
        })
        .collect();
    let off: Vec<f64> = hs.iter().map(|h| -cd / h).collect();
    Tridiagonal::new(off.clone(), diag, off)
}

fn write_block(target: &mut DMatrix<f64>, row0: usize, col0: usize, block: &Tridiagonal) {
    let m = block.dim();
    for i in 0..m {
        for j in i.saturating_sub(1)..(i + 2).min(m) {
            target[(row0 + i, col0 + j)] = block.get(i, j);
        }
    }
}
