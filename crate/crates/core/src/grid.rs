//! Rectangular signal × idler sampling grids.

use serde::{Deserialize, Serialize};

use crate::dispersion::CrystalConfig;
use crate::error::{Error, Result};
use crate::units::{nm_to_omega, omega_to_nm};

/// Fewest samples allowed on either axis.
pub const MIN_POINTS: usize = 16;

const UNIFORM_RTOL: f64 = 1e-9;

/// Quantity an axis is uniform in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisDomain {
    /// Vacuum wavelength in nm.
    Wavelength,
    /// Angular frequency in rad/ps.
    AngularFrequency,
}

/// Strictly increasing, uniformly spaced samples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UniformAxis {
    pub start: f64,
    pub step: f64,
    pub len: usize,
    pub domain: AxisDomain,
}

impl UniformAxis {
    pub fn new(start: f64, step: f64, len: usize, domain: AxisDomain) -> Result<Self> {
        if len < MIN_POINTS {
            return Err(Error::InvalidGrid(format!(
                "{len} points per axis, need at least {MIN_POINTS}"
            )));
        }
        if !(step > 0.0 && step.is_finite() && start.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "axis must be strictly increasing (start {start}, step {step})"
            )));
        }
        Ok(Self {
            start,
            step,
            len,
            domain,
        })
    }

    /// `len` points centred on `center` covering `[center - half_span, center + half_span]`.
    pub fn centered(center: f64, half_span: f64, len: usize, domain: AxisDomain) -> Result<Self> {
        if len < 2 {
            return Err(Error::InvalidGrid("need at least two points".into()));
        }
        Self::new(center - half_span, 2.0 * half_span / (len - 1) as f64, len, domain)
    }

    /// Recovers an axis from explicit sample positions.
    pub fn from_samples(samples: &[f64], domain: AxisDomain) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidGrid("need at least two samples".into()));
        }
        let n = samples.len();
        let step = (samples[n - 1] - samples[0]) / (n - 1) as f64;
        let axis = Self::new(samples[0], step, n, domain)?;
        let tol = UNIFORM_RTOL * samples[0].abs().max(samples[n - 1].abs());
        for (i, &s) in samples.iter().enumerate() {
            if (s - axis.value(i)).abs() > tol.max(UNIFORM_RTOL * step) {
                return Err(Error::InvalidGrid(format!(
                    "sample {i} ({s}) breaks uniform spacing {step}"
                )));
            }
        }
        Ok(axis)
    }

    pub fn value(&self, i: usize) -> f64 {
        self.start + self.step * i as f64
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.len).map(|i| self.value(i)).collect()
    }

    pub fn last(&self) -> f64 {
        self.value(self.len - 1)
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.start + self.last())
    }

    pub fn wavelength_nm(&self, i: usize) -> f64 {
        match self.domain {
            AxisDomain::Wavelength => self.value(i),
            AxisDomain::AngularFrequency => omega_to_nm(self.value(i)),
        }
    }

    pub fn omega(&self, i: usize) -> f64 {
        match self.domain {
            AxisDomain::Wavelength => nm_to_omega(self.value(i)),
            AxisDomain::AngularFrequency => self.value(i),
        }
    }

    /// Same extent expressed as a frequency-uniform axis with the same count.
    pub fn to_frequency(&self) -> Self {
        match self.domain {
            AxisDomain::AngularFrequency => self.clone(),
            AxisDomain::Wavelength => {
                let lo = nm_to_omega(self.last());
                let hi = nm_to_omega(self.start);
                Self {
                    start: lo,
                    step: (hi - lo) / (self.len - 1) as f64,
                    len: self.len,
                    domain: AxisDomain::AngularFrequency,
                }
            }
        }
    }

    /// Fractional index of `x` (same units as the axis), unclamped.
    pub fn position(&self, x: f64) -> f64 {
        (x - self.start) / self.step
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralGrid {
    pub signal: UniformAxis,
    pub idler: UniformAxis,
}

impl SpectralGrid {
    pub fn new(signal: UniformAxis, idler: UniformAxis) -> Result<Self> {
        if signal.domain != idler.domain {
            return Err(Error::InvalidGrid(
                "signal and idler axes must share a domain".into(),
            ));
        }
        Ok(Self { signal, idler })
    }

    /// Wavelength-uniform square grid.
    pub fn wavelength(
        signal_center_nm: f64,
        idler_center_nm: f64,
        half_span_nm: f64,
        points: usize,
    ) -> Result<Self> {
        Self::new(
            UniformAxis::centered(signal_center_nm, half_span_nm, points, AxisDomain::Wavelength)?,
            UniformAxis::centered(idler_center_nm, half_span_nm, points, AxisDomain::Wavelength)?,
        )
    }

    /// Frequency-uniform square grid centred on the given wavelengths.
    pub fn frequency(
        signal_center_nm: f64,
        idler_center_nm: f64,
        half_span_omega: f64,
        points: usize,
    ) -> Result<Self> {
        Self::new(
            UniformAxis::centered(
                nm_to_omega(signal_center_nm),
                half_span_omega,
                points,
                AxisDomain::AngularFrequency,
            )?,
            UniformAxis::centered(
                nm_to_omega(idler_center_nm),
                half_span_omega,
                points,
                AxisDomain::AngularFrequency,
            )?,
        )
    }

    pub fn domain(&self) -> AxisDomain {
        self.signal.domain
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.signal.len, self.idler.len)
    }

    pub fn cell_area(&self) -> f64 {
        self.signal.step * self.idler.step
    }

    pub fn to_frequency(&self) -> Self {
        Self {
            signal: self.signal.to_frequency(),
            idler: self.idler.to_frequency(),
        }
    }

    pub fn transposed(&self) -> Self {
        Self {
            signal: self.idler.clone(),
            idler: self.signal.clone(),
        }
    }
}

/// Default discretization for model spectra: `points` per axis, spanning
/// `±span_widths` phase-matching bandwidths around degeneracy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub points: usize,
    pub span_widths: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            points: 256,
            span_widths: 5.0,
        }
    }
}

impl GridSpec {
    /// Half span in rad/ps at degenerate wavelength `lambda0_nm`.
    pub fn half_span_omega(&self, config: &CrystalConfig, lambda0_nm: f64) -> Result<f64> {
        if !(self.span_widths > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "span must be positive, got {} widths",
                self.span_widths
            )));
        }
        Ok(self.span_widths * config.phase_matching_bandwidth(lambda0_nm)?)
    }

    pub fn frequency_grid(&self, config: &CrystalConfig, lambda0_nm: f64) -> Result<SpectralGrid> {
        let half = self.half_span_omega(config, lambda0_nm)?;
        SpectralGrid::frequency(lambda0_nm, lambda0_nm, half, self.points)
    }

    /// Wavelength-uniform grid covering the same spectral window.
    pub fn wavelength_grid(&self, config: &CrystalConfig, lambda0_nm: f64) -> Result<SpectralGrid> {
        let half = self.half_span_omega(config, lambda0_nm)?;
        let w0 = nm_to_omega(lambda0_nm);
        let half_nm = 0.5 * (omega_to_nm(w0 - half) - omega_to_nm(w0 + half));
        SpectralGrid::wavelength(lambda0_nm, lambda0_nm, half_nm, self.points)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_small_and_decreasing() {
        assert!(UniformAxis::new(0.0, 1.0, 15, AxisDomain::Wavelength).is_err());
        assert!(UniformAxis::new(0.0, -1.0, 32, AxisDomain::Wavelength).is_err());
        assert!(UniformAxis::new(0.0, 0.0, 32, AxisDomain::Wavelength).is_err());
    }

    #[test]
    fn centered_axis_is_symmetric() {
        let a = UniformAxis::centered(1584.0, 3.0, 61, AxisDomain::Wavelength).unwrap();
        assert!((a.start - 1581.0).abs() < 1e-12);
        assert!((a.last() - 1587.0).abs() < 1e-9);
        assert!((a.value(30) - 1584.0).abs() < 1e-9);
    }

    #[test]
    fn from_samples_checks_uniformity() {
        let s: Vec<f64> = (0..20).map(|i| 1550.0 + 0.1 * i as f64).collect();
        let a = UniformAxis::from_samples(&s, AxisDomain::Wavelength).unwrap();
        assert!((a.step - 0.1).abs() < 1e-12);
        let mut bad = s.clone();
        bad[7] += 0.01;
        assert!(UniformAxis::from_samples(&bad, AxisDomain::Wavelength).is_err());
    }

    #[test]
    fn frequency_resample_keeps_extent() {
        let a = UniformAxis::centered(1584.0, 5.0, 64, AxisDomain::Wavelength).unwrap();
        let f = a.to_frequency();
        assert!((f.wavelength_nm(0) - a.last()).abs() < 1e-9);
        assert!((f.wavelength_nm(63) - a.start).abs() < 1e-9);
    }

    #[test]
    fn mixed_domains_rejected() {
        let a = UniformAxis::centered(1584.0, 5.0, 64, AxisDomain::Wavelength).unwrap();
        let b = a.to_frequency();
        assert!(SpectralGrid::new(a, b).is_err());
    }

    #[test]
    fn default_spec_grids_cover_same_window() {
        let c = CrystalConfig::ppktp_default();
        let spec = GridSpec::default();
        let g = spec.frequency_grid(&c, 1584.0).unwrap();
        let l = spec.wavelength_grid(&c, 1584.0).unwrap();
        assert_eq!(g.shape(), (256, 256));
        let lam_span = l.signal.last() - l.signal.start;
        let from_omega = omega_to_nm(g.signal.start) - omega_to_nm(g.signal.last());
        assert!((lam_span - from_omega).abs() < 1e-6);
        // roughly +-9.5 nm around 1584 nm
        assert!(lam_span > 15.0 && lam_span < 25.0, "{lam_span}");
    }
}
