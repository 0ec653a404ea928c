//! Finite volumes as a mixed Petrov-Galerkin method for `-u'' = f` on
//! `(0, 1)` with `u(0) = u(1) = 0`.
//!
//! Three discretizations share one mesh and one data layout:
//!
//! * the heuristic cell-centred finite-volume scheme ([`solver::solve_fv`]),
//! * the classical mixed method with `P1` gradients ([`assembly::SaddleSystem::classical`]),
//! * the mixed Petrov-Galerkin method whose gradient test functions are
//!   generated by a weighting function `ψ` ([`assembly::SaddleSystem::petrov_galerkin`]).
//!
//! With the cubic [`weighting::spline`] the last one reproduces the
//! finite-volume solution exactly, and [`analysis`] measures its discrete
//! inf-sup constant and convergence orders.
//!
//! ```
//! use fvpg::{analysis::ManufacturedProblem, assembly::SaddleSystem, mesh::Mesh};
//! use fvpg::{solver, weighting};
//!
//! let mesh = Mesh::uniform(16)?;
//! let problem = ManufacturedProblem::sine();
//! let psi = weighting::spline();
//! let system = SaddleSystem::petrov_galerkin(&mesh, &psi.default_moments(), psi.name(), &problem.f, 8)?;
//! let pg = solver::solve_mixed(&system)?;
//! let fv = solver::solve_fv(&mesh, &problem.f, 8)?;
//! assert!(pg.u_cells.iter().zip(&fv.u_cells).all(|(a, b)| (a - b).abs() < 1e-10));
//! # Ok::<(), fvpg::Error>(())
//! ```

pub mod analysis;
pub mod assembly;
mod error;
pub mod linalg;
pub mod mesh;
pub mod solver;
pub mod weighting;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/meshes.md")]
    mod meshes {}
    #[doc = include_str!("../../../book/src/weighting.md")]
    mod weighting {}
    #[doc = include_str!("../../../book/src/schemes.md")]
    mod schemes {}
    #[doc = include_str!("../../../book/src/infsup.md")]
    mod infsup {}
    #[doc = include_str!("../../../book/src/convergence.md")]
    mod convergence {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
