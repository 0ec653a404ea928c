//! One dimensional meshes of `[0, 1]`.
//!
//! A mesh with `n` cells stores its `n + 1` vertices, the `n` cell widths
//! `h_{j+1/2} = x_{j+1} - x_j` and the `n + 1` dual widths `h_j`, the
//! distances between consecutive cell centres (halved cells at the two
//! boundary vertices).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Upper bound on the rescale/clamp sweeps of [`Mesh::random_regular`].
const MAX_PROJECTION_SWEEPS: usize = 10_000;

/// Name recorded in report metadata for the sampler behind [`Mesh::random_regular`].
pub const REGULAR_SAMPLER: &str = "iid-uniform-band/rescale-clamp/chacha8";

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    vertices: Vec<f64>,
    cell_widths: Vec<f64>,
    dual_widths: Vec<f64>,
    h_max: f64,
}

/// Parameters of a random member of the uniformly regular family: every
/// cell width lies in `[alpha / n, beta / n]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularFamilySpec {
    pub alpha: f64,
    pub beta: f64,
    pub n: usize,
    pub seed: u64,
}

impl RegularFamilySpec {
    pub fn new(alpha: f64, beta: f64, n: usize, seed: u64) -> Result<Self> {
        let spec = Self { alpha, beta, n, seed };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::EmptyMesh);
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0 && self.beta > 1.0 && self.beta.is_finite()) {
            return Err(Error::InvalidBand { alpha: self.alpha, beta: self.beta });
        }
        Ok(())
    }
}

impl Mesh {
    /// Uniform partition in `n` cells of width `1 / n`.
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyMesh);
        }
        Self::from_widths(vec![1.0 / n as f64; n])
    }

    /// Builds a mesh from positive cell widths.
    ///
    /// The widths are kept as given; vertices are their running sums with the
    /// last vertex pinned to exactly 1. The widths must already sum to 1
    /// (within `1e-12`).
    pub fn from_widths(cell_widths: Vec<f64>) -> Result<Self> {
        let n = cell_widths.len();
        if n == 0 {
            return Err(Error::EmptyMesh);
        }
        if let Some(j) = cell_widths.iter().position(|&h| !(h > 0.0 && h.is_finite())) {
            return Err(Error::InvalidMesh(format!("cell {j} has non-positive width {}", cell_widths[j])));
        }
        let total: f64 = cell_widths.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidMesh(format!("cell widths sum to {total}, not 1")));
        }

        let mut vertices = Vec::with_capacity(n + 1);
        let mut x = 0.0;
        vertices.push(0.0);
        for h in &cell_widths[..n - 1] {
            x += h;
            vertices.push(x);
        }
        vertices.push(1.0);
        if vertices.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidMesh("vertices are not strictly increasing".into()));
        }

        let dual_widths = dual_widths(&cell_widths);
        let h_max = cell_widths.iter().copied().fold(0.0, f64::max);
        Ok(Self { vertices, cell_widths, dual_widths, h_max })
    }

    /// Builds a mesh from strictly increasing vertices running from 0 to 1.
    pub fn from_vertices(vertices: &[f64]) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::EmptyMesh);
        }
        if vertices[0] != 0.0 || *vertices.last().unwrap() != 1.0 {
            return Err(Error::InvalidMesh("vertices must start at 0 and end at 1".into()));
        }
        if vertices.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidMesh("vertices are not strictly increasing".into()));
        }
        let cell_widths: Vec<f64> = vertices.windows(2).map(|w| w[1] - w[0]).collect();
        let dual_widths = dual_widths(&cell_widths);
        let h_max = cell_widths.iter().copied().fold(0.0, f64::max);
        Ok(Self { vertices: vertices.to_vec(), cell_widths, dual_widths, h_max })
    }

    /// Samples a mesh of the uniformly regular family described by `spec`.
    ///
    /// Widths are drawn i.i.d. uniformly in the band `[alpha/n, beta/n]`,
    /// then alternately rescaled to unit sum and clamped back into the band
    /// until both hold. Deterministic for a fixed seed.
    pub fn random_regular(spec: &RegularFamilySpec) -> Result<Self> {
        spec.validate()?;
        let n = spec.n;
        let lo = spec.alpha / n as f64;
        let hi = spec.beta / n as f64;
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        let mut widths: Vec<f64> = (0..n).map(|_| rng.random_range(lo..=hi)).collect();

        for _ in 0..MAX_PROJECTION_SWEEPS {
            let total: f64 = widths.iter().sum();
            widths.iter_mut().for_each(|h| *h /= total);
            if widths.iter().all(|&h| h >= lo && h <= hi) {
                // Rounding residue goes to the cell furthest from the bound it pushes towards.
                let residue = 1.0 - widths.iter().sum::<f64>();
                let by_width = |a: &usize, b: &usize| widths[*a].total_cmp(&widths[*b]);
                let j = if residue >= 0.0 { (0..n).min_by(by_width) } else { (0..n).max_by(by_width) }
                    .expect("n >= 1");
                widths[j] += residue;
                let mesh = Self::from_widths(widths)?;
                debug_assert!(mesh.is_regular(spec.alpha, spec.beta));
                return Ok(mesh);
            }
            widths.iter_mut().for_each(|h| *h = h.clamp(lo, hi));
        }
        Err(Error::InvalidMesh(format!(
            "no admissible partition found for alpha = {}, beta = {}, n = {n}",
            spec.alpha, spec.beta
        )))
    }

    /// `true` iff every cell width lies in `[alpha / n, beta / n]`.
    ///
    /// A relative slack of a few ulps is allowed so that the uniform mesh
    /// counts as a member for any band containing 1.
    pub fn is_regular(&self, alpha: f64, beta: f64) -> bool {
        let n = self.n() as f64;
        let slack = 4.0 * f64::EPSILON;
        let lo = alpha / n * (1.0 - slack);
        let hi = beta / n * (1.0 + slack);
        self.cell_widths.iter().all(|&h| h >= lo && h <= hi)
    }

    pub fn n(&self) -> usize {
        self.cell_widths.len()
    }

    pub fn vertices(&self) -> &[f64] {
        &self.vertices
    }

    /// Widths `h_{j+1/2}` of the cells, `j = 0..n`.
    pub fn cell_widths(&self) -> &[f64] {
        &self.cell_widths
    }

    /// Dual widths `h_j` attached to the vertices, `j = 0..=n`.
    pub fn dual_widths(&self) -> &[f64] {
        &self.dual_widths
    }

    pub fn h_max(&self) -> f64 {
        self.h_max
    }

    /// Cell `j` as `(x_j, x_{j+1})`.
    pub fn cell(&self, j: usize) -> (f64, f64) {
        (self.vertices[j], self.vertices[j + 1])
    }

    pub fn cells(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.vertices.windows(2).map(|w| (w[0], w[1]))
    }

    /// Largest ratio between the widths of two neighbouring cells.
    pub fn max_neighbour_ratio(&self) -> f64 {
        self.cell_widths.windows(2).map(|w| (w[0] / w[1]).max(w[1] / w[0])).fold(1.0, f64::max)
    }

    /// `true` when the mesh is its own mirror image under `x -> 1 - x`.
    pub fn is_symmetric(&self, tol: f64) -> bool {
        let n = self.n();
        (0..n).all(|j| (self.cell_widths[j] - self.cell_widths[n - 1 - j]).abs() <= tol)
    }
}

fn dual_widths(cell_widths: &[f64]) -> Vec<f64> {
    let n = cell_widths.len();
    let mut dual = Vec::with_capacity(n + 1);
    dual.push(0.5 * cell_widths[0]);
    for w in cell_widths.windows(2) {
        dual.push(0.5 * (w[0] + w[1]));
    }
    dual.push(0.5 * cell_widths[n - 1]);
    dual
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn uniform_widths() {
        let mesh = Mesh::uniform(4).unwrap();
        assert_eq!(mesh.cell_widths(), &[0.25; 4]);
        assert_eq!(mesh.dual_widths(), &[0.125, 0.25, 0.25, 0.25, 0.125]);
        assert_eq!(mesh.vertices(), &[0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(mesh.h_max(), 0.25);
    }

    #[test]
    fn single_cell() {
        let mesh = Mesh::uniform(1).unwrap();
        assert_eq!(mesh.vertices(), &[0.0, 1.0]);
        assert_eq!(mesh.dual_widths(), &[0.5, 0.5]);
    }

    #[test]
    fn rejects_empty() {
        assert_eq!(Mesh::uniform(0), Err(Error::EmptyMesh));
        assert!(RegularFamilySpec::new(0.5, 2.0, 0, 1).is_err());
    }

    #[test]
    fn rejects_bad_band() {
        assert!(matches!(RegularFamilySpec::new(1.2, 2.0, 4, 1), Err(Error::InvalidBand { .. })));
        assert!(RegularFamilySpec::new(0.5, 0.9, 4, 1).is_err());
        assert!(RegularFamilySpec::new(0.0, 2.0, 4, 1).is_err());
    }

    #[test]
    fn rejects_bad_vertices() {
        assert!(Mesh::from_vertices(&[0.0, 0.6, 0.4, 1.0]).is_err());
        assert!(Mesh::from_vertices(&[0.1, 1.0]).is_err());
        assert!(Mesh::from_widths(vec![0.5, 0.6]).is_err());
        assert!(Mesh::from_widths(vec![1.5, -0.5]).is_err());
    }

    #[test]
    fn random_regular_in_band() {
        let spec = RegularFamilySpec::new(0.5, 2.0, 8, 42).unwrap();
        let mesh = Mesh::random_regular(&spec).unwrap();
        for &h in mesh.cell_widths() {
            assert!((0.0625..=0.25).contains(&h), "width {h}");
        }
        assert!((mesh.cell_widths().iter().sum::<f64>() - 1.0).abs() < 1e-14);
        assert_eq!(mesh, Mesh::random_regular(&spec).unwrap());
    }

    #[test]
    fn nearly_uniform_band() {
        let spec = RegularFamilySpec::new(1.0 - 1e-9, 1.0 + 1e-9, 16, 3).unwrap();
        let mesh = Mesh::random_regular(&spec).unwrap();
        for &h in mesh.cell_widths() {
            assert!((h - 1.0 / 16.0).abs() < 1e-9);
        }
    }

    #[test]
    fn validate_regular_examples() {
        let mesh = Mesh::uniform(4).unwrap();
        assert!(mesh.is_regular(0.5, 2.0));
        assert!(!mesh.is_regular(1.01, 2.0));
        let wide = Mesh::from_widths(vec![0.75, 0.125, 0.0625, 0.0625]).unwrap();
        assert!(!wide.is_regular(0.2, 2.0));
    }

    proptest! {
        #[test]
        fn generated_meshes_are_consistent(
            seed in any::<u64>(),
            n in 1usize..200,
            alpha in 0.05f64..0.95,
            beta in 1.05f64..4.0,
        ) {
            let spec = RegularFamilySpec::new(alpha, beta, n, seed).unwrap();
            let mesh = Mesh::random_regular(&spec).unwrap();
            prop_assert!(mesh.is_regular(alpha, beta));
            prop_assert_eq!(mesh.vertices()[0], 0.0);
            prop_assert_eq!(mesh.vertices()[n], 1.0);
            let hs = mesh.cell_widths();
            let dual = mesh.dual_widths();
            prop_assert!((hs.iter().sum::<f64>() - 1.0).abs() < 1e-14);
            prop_assert!((dual.iter().sum::<f64>() - 1.0).abs() < 1e-14);
            prop_assert_eq!(dual[0], 0.5 * hs[0]);
            prop_assert_eq!(dual[n], 0.5 * hs[n - 1]);
            for j in 1..n {
                prop_assert_eq!(dual[j], 0.5 * (hs[j - 1] + hs[j]));
            }
            for j in 0..n {
                let diff = mesh.vertices()[j + 1] - mesh.vertices()[j];
                prop_assert!((diff - hs[j]).abs() < 1e-14);
            }
            prop_assert!(mesh.max_neighbour_ratio() <= beta / alpha * (1.0 + 1e-12));
            prop_assert_eq!(mesh.h_max(), hs.iter().copied().fold(0.0, f64::max));
        }
    }
}
