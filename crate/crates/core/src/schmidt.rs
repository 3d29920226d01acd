//! Schmidt decomposition of joint spectra and the purities derived from it.
//!
//! For an amplitude `f` the Schmidt coefficients `c_j` are the normalized
//! singular values of the sampled kernel, and the heralded purity is
//! `Σ c_j⁴`. Applying the same decomposition to the intensity `|f|²` gives the
//! intensity purity used with measured data, which ignores any phase.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::AxisDomain;
use crate::jsa::{JointSpectrum, SpectrumKind, NORMALIZATION_TOL};

/// Coefficients below this fraction of the largest are not stored.
pub const TRUNCATION_RATIO: f64 = 1e-12;

/// Largest grid (points per axis) accepted by [`purity_oracle`].
pub const ORACLE_MAX_POINTS: usize = 128;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchmidtResult {
    pub kind: SpectrumKind,
    pub purity: f64,
    pub schmidt_number: f64,
    /// Descending, `Σ c_j² = 1`.
    pub coefficients: Vec<f64>,
}

impl SchmidtResult {
    pub fn modes(&self) -> usize {
        self.coefficients.len()
    }

    /// Builds the result from raw singular values (any order, any scale).
    pub fn from_singular_values(kind: SpectrumKind, mut singular: Vec<f64>) -> Result<Self> {
        singular.sort_by(|a, b| b.total_cmp(a));
        let first = singular.first().copied().unwrap_or(0.0);
        if !(first > 0.0) || !first.is_finite() {
            return Err(Error::DegenerateInput("spectrum matrix is numerically zero".into()));
        }
        let norm = singular.iter().map(|s| s * s).sum::<f64>().sqrt();
        let all: Vec<f64> = singular.iter().map(|s| s / norm).collect();
        let purity: f64 = all.iter().map(|c| c.powi(4)).sum();
        let coefficients = all
            .into_iter()
            .take_while(|&c| c >= TRUNCATION_RATIO * first / norm)
            .collect();
        Ok(Self {
            kind,
            purity,
            schmidt_number: 1.0 / purity,
            coefficients,
        })
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("SchmidtResult serializes");
        s.push('\n');
        s
    }
}

fn check_contract(spectrum: &JointSpectrum) -> Result<()> {
    if spectrum.grid.domain() != AxisDomain::AngularFrequency {
        return Err(Error::InvalidGrid(
            "Schmidt analysis needs a frequency-uniform grid; resample the spectrum first".into(),
        ));
    }
    let n = spectrum.norm_integral();
    if !spectrum.normalized || (n - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::NotNormalized(format!(
            "integral is {n}, flagged normalized = {}",
            spectrum.normalized
        )));
    }
    Ok(())
}

/// Singular-value decomposition of the spectrum kernel, weighted by the
/// frequency cell measure. Amplitude input yields the heralded purity,
/// intensity input the intensity purity.
pub fn decompose(spectrum: &JointSpectrum) -> Result<SchmidtResult> {
    check_contract(spectrum)?;
    let kernel = &spectrum.values * spectrum.grid.cell_area().sqrt();
    let singular = kernel.singular_values();
    SchmidtResult::from_singular_values(spectrum.kind, singular.iter().copied().collect())
}

/// `Tr(ρ²) / Tr(ρ)²` with `ρ = K Kᵀ` accumulated directly from the kernel,
/// i.e. the fourfold overlap integral of the spectrum evaluated by quadrature.
/// Cost is cubic in the grid size, so grids are limited to
/// [`ORACLE_MAX_POINTS`] per axis.
pub fn purity_oracle(spectrum: &JointSpectrum) -> Result<f64> {
    check_contract(spectrum)?;
    let (ns, ni) = spectrum.values.shape();
    let largest = ns.max(ni);
    if largest > ORACLE_MAX_POINTS {
        return Err(Error::GridTooLarge {
            points: largest,
            max: ORACLE_MAX_POINTS,
        });
    }
    let m = &spectrum.values;
    let rows: Vec<Vec<f64>> = (0..ns).map(|a| (0..ni).map(|j| m[(a, j)]).collect()).collect();
    let mut trace = 0.0;
    let mut trace_sq = 0.0;
    for a in 0..ns {
        for b in 0..ns {
            let rho: f64 = rows[a].iter().zip(&rows[b]).map(|(x, y)| x * y).sum();
            if a == b {
                trace += rho;
            }
            trace_sq += rho * rho;
        }
    }
    if !(trace > 0.0) {
        return Err(Error::DegenerateInput("spectrum matrix is numerically zero".into()));
    }
    Ok(trace_sq / (trace * trace))
}
