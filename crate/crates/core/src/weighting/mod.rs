//! Weighting functions `ψ : [0, 1] -> R` generating the test space of the
//! Petrov-Galerkin scheme.
//!
//! On a cell `[x_j, x_{j+1}]` with local coordinate `θ = (x - x_j) / h`, the
//! test function attached to vertex `x_{j+1}` is `ψ(θ)` and the one attached
//! to `x_j` is `ψ(1 - θ)`. Everything the discretization needs from `ψ` is a
//! handful of integrals, gathered in [`MomentTable`].

mod poly;
mod quadrature;

use std::fmt;
use std::sync::Arc;

pub use poly::Polynomial;
pub use quadrature::{GaussLegendre, MAX_ORDER as MAX_QUADRATURE_ORDER};

use crate::error::{Error, Result};

/// Absolute tolerance of every condition checker.
pub const CONDITION_TOL: f64 = 1e-12;

/// Gauss-Legendre order used for non-polynomial weighting functions.
pub const DEFAULT_CALLABLE_ORDER: usize = 16;

/// Finite-difference step for callables without an explicit derivative.
pub const FD_STEP: f64 = 1e-6;

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum PsiKind {
    Polynomial(Polynomial),
    Callable { eval: ScalarFn, deriv: Option<ScalarFn> },
}

/// A weighting function together with a short label used in reports.
#[derive(Clone)]
pub struct WeightingFunction {
    name: String,
    kind: PsiKind,
}

impl fmt::Debug for WeightingFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            PsiKind::Polynomial(p) => f
                .debug_struct("WeightingFunction")
                .field("name", &self.name)
                .field("coeffs", &p.coeffs())
                .finish(),
            PsiKind::Callable { deriv, .. } => f
                .debug_struct("WeightingFunction")
                .field("name", &self.name)
                .field("exact_derivative", &deriv.is_some())
                .finish(),
        }
    }
}

impl WeightingFunction {
    pub fn polynomial(name: impl Into<String>, coeffs: Vec<f64>) -> Self {
        Self { name: name.into(), kind: PsiKind::Polynomial(Polynomial::new(coeffs)) }
    }

    /// A continuous `ψ` given as a closure; `ψ'` is approximated by central
    /// differences with step [`FD_STEP`].
    pub fn callable<F>(name: impl Into<String>, eval: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self { name: name.into(), kind: PsiKind::Callable { eval: Arc::new(eval), deriv: None } }
    }

    pub fn callable_with_derivative<F, D>(name: impl Into<String>, eval: F, deriv: D) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            kind: PsiKind::Callable { eval: Arc::new(eval), deriv: Some(Arc::new(deriv)) },
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> &PsiKind {
        &self.kind
    }

    pub fn as_polynomial(&self) -> Option<&Polynomial> {
        match &self.kind {
            PsiKind::Polynomial(p) => Some(p),
            PsiKind::Callable { .. } => None,
        }
    }

    pub fn eval(&self, theta: f64) -> f64 {
        match &self.kind {
            PsiKind::Polynomial(p) => p.eval(theta),
            PsiKind::Callable { eval, .. } => eval(theta),
        }
    }

    pub fn deriv(&self, theta: f64) -> f64 {
        match &self.kind {
            PsiKind::Polynomial(p) => p.derivative().eval(theta),
            PsiKind::Callable { deriv: Some(d), .. } => d(theta),
            PsiKind::Callable { eval, deriv: None } => {
                let (a, b) = ((theta - FD_STEP).max(0.0), (theta + FD_STEP).min(1.0));
                (eval(b) - eval(a)) / (b - a)
            }
        }
    }

    /// All integrals of `ψ` the schemes and the stability analysis need.
    ///
    /// Polynomials are integrated exactly through coefficient algebra and
    /// `order` is ignored; callables use the Gauss-Legendre rule of that
    /// order.
    pub fn moments(&self, order: usize) -> Result<MomentTable> {
        match &self.kind {
            PsiKind::Polynomial(p) => Ok(MomentTable::of_polynomial(p)),
            PsiKind::Callable { .. } => {
                let rule = GaussLegendre::new(order)?;
                Ok(MomentTable::by_quadrature(self, &rule))
            }
        }
    }

    /// Moments with the default order for callables.
    pub fn default_moments(&self) -> MomentTable {
        self.moments(DEFAULT_CALLABLE_ORDER).expect("default order is in range")
    }

    /// `ψ(0) = 0` and `ψ(1) = 1`.
    pub fn check_localization(&self) -> bool {
        self.eval(0.0).abs() <= CONDITION_TOL && (self.eval(1.0) - 1.0).abs() <= CONDITION_TOL
    }

    /// `∫ (1 - θ) ψ(θ) dθ = 0`, which makes the Petrov-Galerkin mass matrix diagonal.
    pub fn check_orthogonality(&self) -> bool {
        self.default_moments().m0.abs() <= CONDITION_TOL
    }

    /// `∫ θ ψ(θ) dθ = 1/2`, which turns the gradient equation into the
    /// finite-volume difference quotient.
    pub fn check_fv_compat(&self) -> bool {
        (self.default_moments().m1 - 0.5).abs() <= CONDITION_TOL
    }

    /// `ψ(θ) + ψ(1 - θ) ≡ 1`.
    ///
    /// Polynomials are checked on the coefficients of `ψ + ψ(1 - ·) - 1`;
    /// callables on `sample_count` Chebyshev points of `[0, 1]`.
    pub fn check_interp_compat(&self, sample_count: usize) -> bool {
        match &self.kind {
            PsiKind::Polynomial(p) => {
                let defect = &(p + &p.reflect()) - &Polynomial::constant(1.0);
                defect.is_zero(CONDITION_TOL)
            }
            PsiKind::Callable { .. } => {
                let m = sample_count.max(3);
                (0..m).all(|k| {
                    let t = 0.5 * (1.0 - ((2 * k + 1) as f64 * std::f64::consts::PI / (2 * m) as f64).cos());
                    (self.eval(t) + self.eval(1.0 - t) - 1.0).abs() <= CONDITION_TOL
                })
            }
        }
    }

    pub fn conditions(&self) -> ConditionReport {
        ConditionReport {
            localization: self.check_localization(),
            orthogonality: self.check_orthogonality(),
            fv_compat: self.check_fv_compat(),
            interp_compat: self.check_interp_compat(INTERP_SAMPLES),
            tolerance: CONDITION_TOL,
        }
    }
}

/// Sample count used by [`WeightingFunction::conditions`] for callables.
pub const INTERP_SAMPLES: usize = 64;

/// Integrals of `ψ` over `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentTable {
    /// `∫ ψ`
    pub m_psi: f64,
    /// `∫ θ ψ(θ)`
    pub m1: f64,
    /// `∫ (1 - θ) ψ(θ)`
    pub m0: f64,
    /// `∫ ψ²`
    pub s: f64,
    /// `∫ ψ(θ) ψ(1 - θ)`
    pub c: f64,
    /// `∫ ψ'²`
    pub sd: f64,
    /// `∫ ψ'(θ) ψ'(1 - θ)`
    pub cd: f64,
}

impl MomentTable {
    pub fn of_polynomial(p: &Polynomial) -> Self {
        let x = Polynomial::x();
        let r = p.reflect();
        let dp = p.derivative();
        let dr = dp.reflect();
        let m1 = (&x * p).integral_unit();
        let m_psi = p.integral_unit();
        Self {
            m_psi,
            m1,
            // m0 = m_psi - m1 keeps the linearity identity exact in floating point.
            m0: m_psi - m1,
            s: (p * p).integral_unit(),
            c: (p * &r).integral_unit(),
            sd: (&dp * &dp).integral_unit(),
            cd: (&dp * &dr).integral_unit(),
        }
    }

    pub fn by_quadrature(psi: &WeightingFunction, rule: &GaussLegendre) -> Self {
        let m_psi = rule.integrate(|t| psi.eval(t));
        let m1 = rule.integrate(|t| t * psi.eval(t));
        Self {
            m_psi,
            m1,
            m0: m_psi - m1,
            s: rule.integrate(|t| psi.eval(t).powi(2)),
            c: rule.integrate(|t| psi.eval(t) * psi.eval(1.0 - t)),
            sd: rule.integrate(|t| psi.deriv(t).powi(2)),
            cd: rule.integrate(|t| psi.deriv(t) * psi.deriv(1.0 - t)),
        }
    }

    pub fn stability_constants(&self) -> StabilityConstants {
        let delta_tilde = self.s;
        StabilityConstants {
            delta: self.s - self.c.abs(),
            delta_tilde,
            epsilon: self.sd - self.cd,
            k: 4.0 / 3.0 * (1.0 + (12.0 * delta_tilde).sqrt()),
        }
    }
}

/// Constants of the norm equivalences between the `ψ` space and the `P1`
/// space, and of the (in)stability estimates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityConstants {
    /// `s - |c|`: lower norm-equivalence constant.
    pub delta: f64,
    /// `s`: upper norm-equivalence constant.
    pub delta_tilde: f64,
    /// `sd - cd`: positive exactly when `ψ(θ) + ψ(1 - θ) ≡ 1` fails.
    pub epsilon: f64,
    /// `4/3 (1 + sqrt(12 delta_tilde))`.
    pub k: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionReport {
    pub localization: bool,
    pub orthogonality: bool,
    pub fv_compat: bool,
    pub interp_compat: bool,
    pub tolerance: f64,
}

impl ConditionReport {
    pub fn all(&self) -> bool {
        self.localization && self.orthogonality && self.fv_compat && self.interp_compat
    }
}

/// `ψ(θ) = θ`: the test space coincides with the `P1` trial space.
pub fn affine() -> WeightingFunction {
    WeightingFunction::polynomial("affine", vec![0.0, 1.0])
}

/// The cubic `ψ(θ) = -9θ + 30θ² - 20θ³`, the unique cubic satisfying the
/// localization, orthogonality and finite-volume compatibility conditions.
pub fn spline() -> WeightingFunction {
    WeightingFunction::polynomial("spline", vec![0.0, -9.0, 30.0, -20.0])
}

/// Result of [`design_cubic`]: the ansatz parameters and the polynomial.
#[derive(Debug, Clone)]
pub struct CubicDesign {
    pub alpha: f64,
    pub beta: f64,
    pub psi: WeightingFunction,
}

/// Recovers the spline weighting function from its defining conditions.
///
/// With the ansatz `ψ(x) = x (1 + α (1 - x) + β (1 - x)²)`, localization
/// holds for any `(α, β)` and the two conditions `∫ψ = 1/2`, `∫xψ = 1/2`
/// form a 2x2 linear system in `(α, β)`.
pub fn design_cubic() -> Result<CubicDesign> {
    let x = Polynomial::x();
    let one_minus_x = Polynomial::new(vec![1.0, -1.0]);
    let base = x.clone();
    let a_part = &x * &one_minus_x;
    let b_part = &a_part * &one_minus_x;

    // Rows: ∫ψ = 1/2 and ∫xψ = 1/2, unknowns (α, β).
    let row = |w: &Polynomial| {
        [(w * &a_part).integral_unit(), (w * &b_part).integral_unit(), 0.5 - (w * &base).integral_unit()]
    };
    let [a11, a12, b1] = row(&Polynomial::constant(1.0));
    let [a21, a22, b2] = row(&x);
    let det = a11 * a22 - a12 * a21;
    let scale = a11.abs().max(a12.abs()).max(a21.abs()).max(a22.abs());
    if det.abs() <= 1e-14 * scale * scale {
        return Err(Error::SingularMatrix { row: 1 });
    }
    let alpha = (b1 * a22 - a12 * b2) / det;
    let beta = (a11 * b2 - a21 * b1) / det;

    let psi = &(&base + &a_part.scale(alpha)) + &b_part.scale(beta);
    Ok(CubicDesign { alpha, beta, psi: WeightingFunction::polynomial("cubic-design", psi.coeffs().to_vec()) })
}

/// The even bump `g(x) = x (1 - x) (1 - 5 x (1 - x))`.
///
/// It vanishes at both ends, is symmetric about 1/2 and has zero mean, so
/// adding it to `ψ` preserves localization, orthogonality and
/// finite-volume compatibility while breaking `ψ(θ) + ψ(1 - θ) ≡ 1`.
pub fn bump() -> Polynomial {
    let x = Polynomial::x();
    let b = &x * &Polynomial::new(vec![1.0, -1.0]);
    &b * &(&Polynomial::constant(1.0) - &b.scale(5.0))
}

/// `ψ_c = spline + c · g` with the even bump `g` of [`bump`].
pub fn perturbed_family(c: f64) -> WeightingFunction {
    let psi = &Polynomial::new(vec![0.0, -9.0, 30.0, -20.0]) + &bump().scale(c);
    WeightingFunction::polynomial(format!("perturbed:{c}"), psi.coeffs().to_vec())
}
