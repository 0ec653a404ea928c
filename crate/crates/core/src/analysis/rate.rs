//! Mesh-refinement studies and least-squares rate fits.

use rayon::prelude::*;

use crate::analysis::infsup::{infsup_constant, InfSupReport};
use crate::analysis::norms::{error_norms, ErrorReport, DEFAULT_ERROR_ORDER};
use crate::analysis::problems::ManufacturedProblem;
use crate::assembly::{SaddleSystem, DEFAULT_RHS_ORDER};
use crate::error::{Error, Result};
use crate::mesh::Mesh;
use crate::solver::{solve_fv, solve_mixed, DiscreteSolution};
use crate::weighting::WeightingFunction;

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::Dimension { expected: xs.len(), got: ys.len() });
    }
    if xs.len() < 2 {
        return Err(Error::TooFewRows(xs.len()));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let k = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / k;
    let my = ly.iter().sum::<f64>() / k;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFit);
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    Ok(sxy / sxx)
}

/// Fitted convergence orders, one per error column.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Slopes {
    pub err_u_l2: f64,
    pub err_p_l2: f64,
    pub err_p_h1: f64,
    /// Slope of `err_u_l2 + err_p_h1`.
    pub energy: f64,
    /// Slope of `err_u_l2 + err_p_l2`.
    pub l2_pair: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConvergenceTable {
    pub rows: Vec<ErrorReport>,
}

impl ConvergenceTable {
    pub fn new(mut rows: Vec<ErrorReport>) -> Self {
        rows.sort_by_key(|r| r.n);
        Self { rows }
    }

    /// Least-squares slopes of log(error) against log(h_max).
    pub fn fit_rate(&self) -> Result<Slopes> {
        if self.rows.len() < 3 {
            return Err(Error::TooFewRows(self.rows.len()));
        }
        let h: Vec<f64> = self.rows.iter().map(|r| r.h_max).collect();
        let col = |f: fn(&ErrorReport) -> f64| -> Result<f64> {
            loglog_slope(&h, &self.rows.iter().map(f).collect::<Vec<_>>())
        };
        Ok(Slopes {
            err_u_l2: col(|r| r.err_u_l2)?,
            err_p_l2: col(|r| r.err_p_l2)?,
            err_p_h1: col(|r| r.err_p_h1)?,
            energy: col(|r| r.err_u_l2 + r.err_p_h1)?,
            l2_pair: col(|r| r.err_u_l2 + r.err_p_l2)?,
        })
    }
}

/// Discretization selected for a study.
#[derive(Debug, Clone)]
pub enum SchemeChoice {
    Fv,
    Mixed,
    PetrovGalerkin(WeightingFunction),
}

impl SchemeChoice {
    pub fn solve(&self, mesh: &Mesh, problem: &ManufacturedProblem) -> Result<DiscreteSolution> {
        self.solve_with_order(mesh, problem, DEFAULT_RHS_ORDER)
    }

    /// As [`SchemeChoice::solve`], with `rhs_order` Gauss points per cell for `∫f`.
    pub fn solve_with_order(
        &self,
        mesh: &Mesh,
        problem: &ManufacturedProblem,
        rhs_order: usize,
    ) -> Result<DiscreteSolution> {
        match self {
            SchemeChoice::Fv => solve_fv(mesh, &problem.f, rhs_order),
            SchemeChoice::Mixed => solve_mixed(&SaddleSystem::classical(mesh, &problem.f, rhs_order)?),
            SchemeChoice::PetrovGalerkin(psi) => solve_mixed(&SaddleSystem::petrov_galerkin(
                mesh,
                &psi.default_moments(),
                psi.name(),
                &problem.f,
                rhs_order,
            )?),
        }
    }
}

/// Solves `problem` on every mesh (in parallel) and tabulates the errors in
/// increasing `n`.
pub fn convergence_study(
    meshes: &[Mesh],
    scheme: &SchemeChoice,
    problem: &ManufacturedProblem,
) -> Result<ConvergenceTable> {
    convergence_study_with_order(meshes, scheme, problem, DEFAULT_RHS_ORDER)
}

pub fn convergence_study_with_order(
    meshes: &[Mesh],
    scheme: &SchemeChoice,
    problem: &ManufacturedProblem,
    rhs_order: usize,
) -> Result<ConvergenceTable> {
    let rows = meshes
        .par_iter()
        .map(|mesh| {
            let sol = scheme.solve_with_order(mesh, problem, rhs_order)?;
            error_norms(&sol, problem, DEFAULT_ERROR_ORDER)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceTable::new(rows))
}

/// Inf-sup constants over a mesh sequence, sorted by `n`.
pub fn infsup_sweep(meshes: &[(String, Mesh)], psi: &WeightingFunction) -> Result<Vec<InfSupReport>> {
    let m = psi.default_moments();
    let mut reports = meshes
        .par_iter()
        .map(|(label, mesh)| {
            Ok(InfSupReport {
                n: mesh.n(),
                h_max: mesh.h_max(),
                delta_t: infsup_constant(mesh, &m)?,
                psi: psi.name().to_string(),
                mesh: label.clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    reports.sort_by_key(|r| r.n);
    Ok(reports)
}
