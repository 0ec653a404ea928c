use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fvpg::analysis::ManufacturedProblem;
use serde::Serialize;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "FVPG_OUT_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "fvpg",
    version,
    about = "Finite volume / mixed Petrov-Galerkin experiments for -u'' = f on (0, 1)"
)]
pub struct Cli {
    /// Directory for CSV, JSON and gnuplot outputs (created if missing).
    #[arg(long, global = true, env = OUT_DIR_ENV, default_value = ".")]
    pub out_dir: PathBuf,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the weighting-function conditions and print the stability constants.
    PsiCheck(PsiCheckArgs),
    /// Solve one problem on one mesh.
    Solve(SolveArgs),
    /// Refinement study with fitted convergence orders.
    Converge(ConvergeArgs),
    /// Discrete inf-sup constants over a mesh sequence.
    Infsup(InfSupArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeshFamily {
    Uniform,
    /// Random cell widths in `[alpha/n, beta/n]`.
    Regular,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeName {
    /// Heuristic cell-centred finite volumes.
    Fv,
    /// Classical mixed method with P1 gradients.
    Mixed,
    /// Mixed Petrov-Galerkin with weighting function `--psi`.
    Pg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Condition {
    Localization,
    Orthogonality,
    FvCompat,
    InterpCompat,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MeshArgs {
    #[arg(long, value_enum, default_value_t = MeshFamily::Uniform)]
    pub mesh: MeshFamily,
    /// Lower width bound factor of the regular family (alpha < 1).
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    /// Upper width bound factor of the regular family (beta > 1).
    #[arg(long, default_value_t = 2.0)]
    pub beta: f64,
    /// Seed of the regular-mesh sampler.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PsiCheckArgs {
    /// affine | spline | perturbed:<c> | poly:<c0,c1,...>
    #[arg(long, default_value = "spline")]
    pub psi: String,
    /// Conditions that must hold for exit code 0 (default: all four).
    #[arg(long, value_enum, value_delimiter = ',')]
    pub require: Vec<Condition>,
    #[arg(long, default_value = "psi-check")]
    pub stem: String,
}

fn problem_names() -> clap::builder::PossibleValuesParser {
    clap::builder::PossibleValuesParser::new(ManufacturedProblem::NAMES)
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SolveArgs {
    #[arg(long, value_enum, default_value_t = SchemeName::Pg)]
    pub scheme: SchemeName,
    #[arg(long, default_value = "spline")]
    pub psi: String,
    #[arg(long, default_value = "sin", value_parser = problem_names())]
    pub problem: String,
    #[arg(long, default_value_t = 16)]
    pub n: usize,
    #[command(flatten)]
    pub mesh: MeshArgs,
    /// Gauss-Legendre order for cell integrals of f.
    #[arg(long, default_value_t = fvpg::assembly::DEFAULT_RHS_ORDER)]
    pub quad_order: usize,
    /// Also solve with the other side of the PG/FV pair and compare.
    #[arg(long)]
    pub compare: bool,
    /// Max-norm tolerance of `--compare`.
    #[arg(long, default_value_t = 1e-10)]
    pub compare_tol: f64,
    #[arg(long, default_value = "solve")]
    pub stem: String,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ConvergeArgs {
    #[arg(long, value_enum, default_value_t = SchemeName::Pg)]
    pub scheme: SchemeName,
    #[arg(long, default_value = "spline")]
    pub psi: String,
    #[arg(long, default_value = "sin", value_parser = problem_names())]
    pub problem: String,
    /// Comma-separated mesh sizes (at least three).
    #[arg(long, value_delimiter = ',', default_value = "8,16,32,64,128")]
    pub ns: Vec<usize>,
    #[command(flatten)]
    pub mesh: MeshArgs,
    #[arg(long, default_value_t = fvpg::assembly::DEFAULT_RHS_ORDER)]
    pub quad_order: usize,
    /// Exit with code 2 if a fitted order falls below FLOOR.
    #[arg(long, value_name = "FLOOR", num_args = 0..=1, default_missing_value = "0.9")]
    pub assert_rate: Option<f64>,
    /// Also write a gnuplot script.
    #[arg(long)]
    pub gnuplot: bool,
    #[arg(long, default_value = "converge")]
    pub stem: String,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct InfSupArgs {
    #[arg(long, default_value = "spline")]
    pub psi: String,
    /// Comma-separated mesh sizes (at least two).
    #[arg(long, value_delimiter = ',', default_value = "4,8,16,32,64,128")]
    pub ns: Vec<usize>,
    #[command(flatten)]
    pub mesh: MeshArgs,
    /// Exit with code 2 if some δ_T drops below half of δ_T on the coarsest mesh.
    #[arg(long, conflicts_with = "assert_unstable")]
    pub assert_stable: bool,
    /// Exit with code 2 unless δ_T(max n) / δ_T(min n) < 0.5.
    #[arg(long)]
    pub assert_unstable: bool,
    #[arg(long)]
    pub gnuplot: bool,
    #[arg(long, default_value = "infsup")]
    pub stem: String,
}
