//! Validated run configuration shared by the subcommands.

use fvpg::analysis::{ManufacturedProblem, SchemeChoice};
use fvpg::mesh::{Mesh, RegularFamilySpec, REGULAR_SAMPLER};
use fvpg::weighting::WeightingFunction;
use serde::Serialize;

use crate::args::{MeshArgs, MeshFamily, SchemeName};
use crate::error::CliError;
use crate::psi::parse_psi;

/// Largest mesh accepted by the solve and converge subcommands.
pub const MAX_SOLVE_N: usize = 1 << 22;
/// Largest mesh of the dense inf-sup computation.
pub const MAX_INFSUP_N: usize = 1024;

/// Mesh family with validated parameters.
#[derive(Debug, Clone, Serialize)]
pub struct MeshConfig {
    pub family: MeshFamily,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl MeshConfig {
    pub fn from_args(args: &MeshArgs) -> Result<Self, CliError> {
        match args.mesh {
            MeshFamily::Uniform => {
                Ok(Self { family: MeshFamily::Uniform, alpha: None, beta: None, seed: None })
            }
            MeshFamily::Regular => {
                // validated once here, n is checked per mesh
                RegularFamilySpec::new(args.alpha, args.beta, 1, args.seed)
                    .map_err(|e| CliError::Usage(e.to_string()))?;
                Ok(Self {
                    family: MeshFamily::Regular,
                    alpha: Some(args.alpha),
                    beta: Some(args.beta),
                    seed: Some(args.seed),
                })
            }
        }
    }

    pub fn build(&self, n: usize) -> Result<Mesh, CliError> {
        if n == 0 {
            return Err(CliError::Usage("mesh size must be positive".into()));
        }
        let mesh = match (self.family, self.alpha, self.beta, self.seed) {
            (MeshFamily::Regular, Some(a), Some(b), Some(seed)) => {
                Mesh::random_regular(&RegularFamilySpec::new(a, b, n, seed)?)?
            }
            _ => Mesh::uniform(n)?,
        };
        Ok(mesh)
    }

    pub fn label(&self, n: usize) -> String {
        match self.family {
            MeshFamily::Uniform => format!("uniform-{n}"),
            MeshFamily::Regular => format!("regular-{n}-seed{}", self.seed.unwrap_or(0)),
        }
    }

    pub fn sampler(&self) -> Option<&'static str> {
        (self.family == MeshFamily::Regular).then_some(REGULAR_SAMPLER)
    }
}

/// Everything a run depends on, echoed into the JSON sidecar.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub subcommand: &'static str,
    pub psi: String,
    pub psi_coeffs: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scheme: Option<SchemeName>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub problem: Option<String>,
    pub mesh: Option<MeshConfig>,
    pub ns: Vec<usize>,
}

pub fn weighting(spec: &str) -> Result<(WeightingFunction, Vec<f64>), CliError> {
    let psi = parse_psi(spec)?;
    let coeffs = psi.as_polynomial().map(|p| p.coeffs().to_vec()).unwrap_or_default();
    Ok((psi, coeffs))
}

pub fn problem(name: &str) -> Result<ManufacturedProblem, CliError> {
    ManufacturedProblem::by_name(name).ok_or_else(|| CliError::Usage(format!("unknown problem {name:?}")))
}

pub fn scheme(name: SchemeName, psi: &WeightingFunction) -> SchemeChoice {
    match name {
        SchemeName::Fv => SchemeChoice::Fv,
        SchemeName::Mixed => SchemeChoice::Mixed,
        SchemeName::Pg => SchemeChoice::PetrovGalerkin(psi.clone()),
    }
}

/// Distinct sizes in `[1, max]`, at least `min_len` of them.
pub fn check_ns(ns: &[usize], min_len: usize, max: usize) -> Result<(), CliError> {
    if ns.len() < min_len {
        return Err(CliError::Usage(format!("need at least {min_len} mesh sizes, got {}", ns.len())));
    }
    if let Some(bad) = ns.iter().find(|&&n| n == 0 || n > max) {
        return Err(CliError::Usage(format!("mesh size {bad} outside 1..={max}")));
    }
    let mut sorted = ns.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != ns.len() {
        return Err(CliError::Usage("mesh sizes must be distinct".into()));
    }
    Ok(())
}
