use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::assembly::SourceFunction;

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Smoothness class of the source term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regularity {
    /// `f ∈ L²` only.
    L2,
    /// `f ∈ H¹`.
    H1,
}

/// Exact solution `u` of `-u'' = f`, `u(0) = u(1) = 0`, with its gradient
/// `p = u'` and `p' = -f`.
#[derive(Clone)]
pub struct ManufacturedProblem {
    pub name: String,
    u: ScalarFn,
    p: ScalarFn,
    dp: ScalarFn,
    df: Option<ScalarFn>,
    pub f: SourceFunction,
    pub regularity: Regularity,
}

impl fmt::Debug for ManufacturedProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ManufacturedProblem")
            .field("name", &self.name)
            .field("regularity", &self.regularity)
            .finish()
    }
}

impl ManufacturedProblem {
    pub fn new<U, P, D>(
        name: impl Into<String>,
        u: U,
        p: P,
        dp: D,
        f: SourceFunction,
        regularity: Regularity,
    ) -> Self
    where
        U: Fn(f64) -> f64 + Send + Sync + 'static,
        P: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self { name: name.into(), u: Arc::new(u), p: Arc::new(p), dp: Arc::new(dp), df: None, f, regularity }
    }

    /// Attaches `f'`, needed for the `H¹` norm of the data.
    pub fn with_source_derivative<D>(mut self, df: D) -> Self
    where
        D: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        self.df = Some(Arc::new(df));
        self
    }

    pub fn source_derivative(&self, x: f64) -> Option<f64> {
        self.df.as_ref().map(|df| df(x))
    }

    pub fn u(&self, x: f64) -> f64 {
        (self.u)(x)
    }

    pub fn p(&self, x: f64) -> f64 {
        (self.p)(x)
    }

    pub fn dp(&self, x: f64) -> f64 {
        (self.dp)(x)
    }

    /// `u = sin(πx)`, `f = π² sin(πx)`.
    pub fn sine() -> Self {
        Self::new(
            "sin",
            |x| (PI * x).sin(),
            |x| PI * (PI * x).cos(),
            |x| -PI * PI * (PI * x).sin(),
            // Smooth: per-cell Gauss is exact to rounding, whereas differencing an
            // antiderivative cancels on small cells.
            SourceFunction::new(|x| PI * PI * (PI * x).sin()),
            Regularity::H1,
        )
        .with_source_derivative(|x| PI * PI * PI * (PI * x).cos())
    }

    /// `u = x (1 - x)`, `f ≡ 2`; the gradient is affine.
    pub fn quadratic() -> Self {
        Self::new(
            "quadratic",
            |x| x * (1.0 - x),
            |x| 1.0 - 2.0 * x,
            |_| -2.0,
            SourceFunction::constant(2.0),
            Regularity::H1,
        )
        .with_source_derivative(|_| 0.0)
    }

    /// `f` = indicator of `[0, 1/2)`: in `L²` but not in `H¹`.
    ///
    /// `u = 3x/8 - x²/2` on the left half and `(1 - x)/8` on the right.
    pub fn step() -> Self {
        Self::new(
            "step",
            |x| if x < 0.5 { 0.375 * x - 0.5 * x * x } else { 0.125 * (1.0 - x) },
            |x| if x < 0.5 { 0.375 - x } else { -0.125 },
            |x| if x < 0.5 { -1.0 } else { 0.0 },
            SourceFunction::with_antiderivative(|x| if x < 0.5 { 1.0 } else { 0.0 }, |x| x.min(0.5)),
            Regularity::L2,
        )
    }

    pub fn zero() -> Self {
        Self::new("zero", |_| 0.0, |_| 0.0, |_| 0.0, SourceFunction::zero(), Regularity::H1)
            .with_source_derivative(|_| 0.0)
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "sin" => Some(Self::sine()),
            "quadratic" => Some(Self::quadratic()),
            "step" => Some(Self::step()),
            "zero" => Some(Self::zero()),
            _ => None,
        }
    }

    pub const NAMES: [&'static str; 4] = ["sin", "quadratic", "step", "zero"];
}
