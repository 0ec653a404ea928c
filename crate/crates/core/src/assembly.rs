//! Matrices and right-hand sides of the three discretizations.
//!
//! Unknowns are ordered `(p_0 .. p_n, u_{1/2} .. u_{n-1/2})` and the mixed
//! schemes share the block layout
//!
//! ```text
//! [ M  Bᵗ ] [p]   [  0  ]
//! [ B  0  ] [u] = [ -f_T ]
//! ```
//!
//! where `f_T` holds the cell integrals of the source term.

use std::fmt;
use std::sync::Arc;

use crate::error::Result;
use crate::linalg::{DivMatrix, Tridiagonal};
use crate::mesh::Mesh;
use crate::weighting::{GaussLegendre, MomentTable};

/// Per-cell Gauss-Legendre order used when no antiderivative is supplied.
pub const DEFAULT_RHS_ORDER: usize = 8;

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Right-hand side `f` of `-u'' = f`, optionally with a closed-form
/// antiderivative for exact cell integrals.
#[derive(Clone)]
pub struct SourceFunction {
    f: ScalarFn,
    antiderivative: Option<ScalarFn>,
}

impl fmt::Debug for SourceFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SourceFunction")
            .field("exact_antiderivative", &self.antiderivative.is_some())
            .finish()
    }
}

impl SourceFunction {
    pub fn new<F>(f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self { f: Arc::new(f), antiderivative: None }
    }

    pub fn with_antiderivative<F, G>(f: F, antiderivative: G) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        G: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self { f: Arc::new(f), antiderivative: Some(Arc::new(antiderivative)) }
    }

    pub fn zero() -> Self {
        Self::with_antiderivative(|_| 0.0, |_| 0.0)
    }

    pub fn constant(c: f64) -> Self {
        Self::with_antiderivative(move |_| c, move |x| c * x)
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    pub fn has_antiderivative(&self) -> bool {
        self.antiderivative.is_some()
    }

    /// `∫_a^b f`, exact when an antiderivative is known.
    pub fn integrate(&self, a: f64, b: f64, rule: &GaussLegendre) -> f64 {
        match &self.antiderivative {
            Some(big_f) => big_f(b) - big_f(a),
            None => rule.integrate_on(a, b, |x| (self.f)(x)),
        }
    }
}

/// Cell integrals `∫_{x_j}^{x_{j+1}} f`, i.e. the coefficients of the `L²`
/// projection of `f` on piecewise constants scaled by the cell widths.
pub fn project_rhs(mesh: &Mesh, f: &SourceFunction, quad_order: usize) -> Result<Vec<f64>> {
    let rule = GaussLegendre::new(quad_order)?;
    Ok(mesh.cells().map(|(a, b)| f.integrate(a, b, &rule)).collect())
}

/// `P1` mass matrix: `2/3 h_j` on the diagonal, `1/6 h_{j+1/2}` off it.
pub fn assemble_mass_classical(mesh: &Mesh) -> Tridiagonal {
    let diag = mesh.dual_widths().iter().map(|h| 2.0 / 3.0 * h).collect();
    let off: Vec<f64> = mesh.cell_widths().iter().map(|h| h / 6.0).collect();
    Tridiagonal::new(off.clone(), diag, off)
}

/// Cross mass matrix `(φ_i, ψ_j)` between the `P1` hat functions and the
/// `ψ` test functions (row `i`: hat, column `j`: test function).
///
/// Diagonal `2 h_j m1`, neighbours `h_{j+1/2} m0`. The matrix is symmetric
/// for any `ψ` and diagonal exactly when `m0 = 0`.
pub fn assemble_mass_pg(mesh: &Mesh, m: &MomentTable) -> Tridiagonal {
    let diag = mesh.dual_widths().iter().map(|h| 2.0 * h * m.m1).collect();
    let off: Vec<f64> = mesh.cell_widths().iter().map(|h| h * m.m0).collect();
    Tridiagonal::new(off.clone(), diag, off)
}

pub fn assemble_div(mesh: &Mesh) -> DivMatrix {
    DivMatrix::new(mesh.n())
}

/// Which discretization produced a system or a solution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scheme {
    HeuristicFv,
    ClassicalMixed,
    PetrovGalerkin(String),
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scheme::HeuristicFv => write!(f, "fv"),
            Scheme::ClassicalMixed => write!(f, "mixed"),
            Scheme::PetrovGalerkin(psi) => write!(f, "pg[{psi}]"),
        }
    }
}

/// Block system of a mixed scheme.
#[derive(Debug, Clone)]
pub struct SaddleSystem {
    pub mesh: Mesh,
    pub mass: Tridiagonal,
    pub div: DivMatrix,
    pub rhs_cells: Vec<f64>,
    pub scheme: Scheme,
}

impl SaddleSystem {
    /// Raviart-Thomas-like mixed scheme with `P1` test and trial gradients.
    pub fn classical(mesh: &Mesh, f: &SourceFunction, quad_order: usize) -> Result<Self> {
        Ok(Self {
            mesh: mesh.clone(),
            mass: assemble_mass_classical(mesh),
            div: assemble_div(mesh),
            rhs_cells: project_rhs(mesh, f, quad_order)?,
            scheme: Scheme::ClassicalMixed,
        })
    }

    /// Mixed Petrov-Galerkin scheme with the `ψ` test space summarised by `m`.
    pub fn petrov_galerkin(
        mesh: &Mesh,
        m: &MomentTable,
        psi_name: &str,
        f: &SourceFunction,
        quad_order: usize,
    ) -> Result<Self> {
        Ok(Self {
            mesh: mesh.clone(),
            mass: assemble_mass_pg(mesh, m),
            div: assemble_div(mesh),
            rhs_cells: project_rhs(mesh, f, quad_order)?,
            scheme: Scheme::PetrovGalerkin(psi_name.to_string()),
        })
    }

    pub fn n(&self) -> usize {
        self.rhs_cells.len()
    }

    /// `B M⁻¹ Bᵗ` when the mass block is diagonal, `None` otherwise.
    pub fn diagonal_schur(&self) -> Option<Tridiagonal> {
        if !self.mass.is_diagonal() {
            return None;
        }
        let d = &self.mass.diag;
        let n = self.n();
        let diag = (0..n).map(|l| 1.0 / d[l] + 1.0 / d[l + 1]).collect();
        let off: Vec<f64> = (1..n).map(|l| -1.0 / d[l]).collect();
        Some(Tridiagonal::new(off.clone(), diag, off))
    }
}

/// Cell-unknown system of the heuristic finite-volume scheme.
///
/// Row `j` is the conservation balance on cell `j` after substituting the
/// difference quotients `p_j = (u_{j+1/2} - u_{j-1/2}) / h_j` with zero
/// ghost values outside `[0, 1]`:
///
/// `-u_{j-1/2} / h_j + (1/h_j + 1/h_{j+1}) u_{j+1/2} - u_{j+3/2} / h_{j+1} = ∫_cell f`.
#[derive(Debug, Clone)]
pub struct FvSystem {
    pub matrix: Tridiagonal,
    pub rhs: Vec<f64>,
}

impl FvSystem {
    /// The same equations divided by the cell widths, i.e. written as mean
    /// values per unit length.
    pub fn per_unit_length(&self, mesh: &Mesh) -> FvSystem {
        let inv: Vec<f64> = mesh.cell_widths().iter().map(|h| 1.0 / h).collect();
        FvSystem {
            matrix: self.matrix.scale_rows(&inv),
            rhs: self.rhs.iter().zip(&inv).map(|(b, s)| b * s).collect(),
        }
    }
}

pub fn assemble_fv(mesh: &Mesh, f: &SourceFunction, quad_order: usize) -> Result<FvSystem> {
    let n = mesh.n();
    let dual = mesh.dual_widths();
    let diag = (0..n).map(|j| 1.0 / dual[j] + 1.0 / dual[j + 1]).collect();
    let off: Vec<f64> = (1..n).map(|j| -1.0 / dual[j]).collect();
    Ok(FvSystem { matrix: Tridiagonal::new(off.clone(), diag, off), rhs: project_rhs(mesh, f, quad_order)? })
}
