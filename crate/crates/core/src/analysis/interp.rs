//! Interpolation on piecewise constants (cell means) and continuous
//! piecewise linears (nodal values), with their error functionals.

use crate::error::Result;
use crate::mesh::Mesh;
use crate::weighting::GaussLegendre;

/// Cell means `(1 / h) ∫_cell v`.
pub fn interp_p0<F: Fn(f64) -> f64>(mesh: &Mesh, v: F, quad_order: usize) -> Result<Vec<f64>> {
    let rule = GaussLegendre::new(quad_order)?;
    Ok(mesh.cells().map(|(a, b)| rule.integrate_on(a, b, &v) / (b - a)).collect())
}

/// Nodal samples `q(x_j)`.
pub fn interp_p1<F: Fn(f64) -> f64>(mesh: &Mesh, q: F) -> Vec<f64> {
    mesh.vertices().iter().map(|&x| q(x)).collect()
}

/// `‖v - M_T v‖₀`.
pub fn p0_error_l2<F: Fn(f64) -> f64>(mesh: &Mesh, v: F, quad_order: usize) -> Result<f64> {
    let rule = GaussLegendre::new(quad_order)?;
    let means = interp_p0(mesh, &v, quad_order)?;
    let sum: f64 =
        mesh.cells().zip(&means).map(|((a, b), m)| rule.integrate_on(a, b, |x| (v(x) - m).powi(2))).sum();
    Ok(sum.sqrt())
}

/// Errors `q - Π_T q` of the `P1` interpolant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct P1Error {
    /// `‖q - Π_T q‖₀`
    pub l2: f64,
    /// `|q - Π_T q|₁`
    pub h1_semi: f64,
}

impl P1Error {
    /// Full `H¹` norm.
    pub fn h1(&self) -> f64 {
        self.l2.hypot(self.h1_semi)
    }
}

pub fn p1_error<F, D>(mesh: &Mesh, q: F, dq: D, quad_order: usize) -> Result<P1Error>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let rule = GaussLegendre::new(quad_order)?;
    let nodal = interp_p1(mesh, &q);
    let (mut l2, mut semi) = (0.0, 0.0);
    for (j, (a, b)) in mesh.cells().enumerate() {
        let h = b - a;
        let (qa, qb) = (nodal[j], nodal[j + 1]);
        let slope = (qb - qa) / h;
        l2 += rule.integrate_on(a, b, |x| {
            let t = (x - a) / h;
            (q(x) - (qa * (1.0 - t) + qb * t)).powi(2)
        });
        semi += rule.integrate_on(a, b, |x| (dq(x) - slope).powi(2));
    }
    Ok(P1Error { l2: l2.sqrt(), h1_semi: semi.sqrt() })
}

/// `‖(Π_T q)'‖₀` from nodal values.
pub fn p1_derivative_l2(mesh: &Mesh, nodal: &[f64]) -> f64 {
    mesh.cell_widths()
        .iter()
        .enumerate()
        .map(|(j, h)| (nodal[j + 1] - nodal[j]).powi(2) / h)
        .sum::<f64>()
        .sqrt()
}
