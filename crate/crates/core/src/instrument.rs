//! Measurement chain: Gaussian bandpass filters scanned across the joint
//! spectrum, marginal spectra and their widths, and analysis of measured
//! coincidence grids.

use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{AxisDomain, SpectralGrid, UniformAxis};
use crate::io::{write_atomic, write_json};
use crate::dispersion::CrystalConfig;
use crate::jsa::{build_jsi, parse_triples, JointSpectrum, PumpSpec, SpectrumKind, CSV_HEADER};
use crate::schmidt::decompose;
use crate::units::{omega_to_nm, FWHM_PER_SIGMA};

/// Bandpass FWHM of the scanned filters used in the reference setup, nm.
pub const REFERENCE_FILTER_FWHM_NM: f64 = 0.56;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FilterShape {
    #[default]
    Gaussian,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FilterSpec {
    pub center_nm: f64,
    pub fwhm_nm: f64,
    #[serde(default)]
    pub shape: FilterShape,
}

impl FilterSpec {
    pub fn gaussian(center_nm: f64, fwhm_nm: f64) -> Self {
        Self {
            center_nm,
            fwhm_nm,
            shape: FilterShape::Gaussian,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.fwhm_nm > 0.0 && self.fwhm_nm.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "filter FWHM must be > 0, got {} nm",
                self.fwhm_nm
            )));
        }
        Ok(())
    }

    /// Power transmission at `wavelength_nm`, 1 at the centre.
    pub fn transmission(&self, wavelength_nm: f64) -> f64 {
        let sigma = self.fwhm_nm / FWHM_PER_SIGMA;
        let x = (wavelength_nm - self.center_nm) / sigma;
        (-0.5 * x * x).exp()
    }
}

/// Mass-conserving smoothing matrix for one axis. Column `s` holds the filter
/// response to a unit at sample `s`, evaluated in wavelength and renormalized
/// over the samples that remain on the grid.
fn kernel_matrix(axis: &UniformAxis, filter: &FilterSpec) -> Result<DMatrix<f64>> {
    filter.validate()?;
    let mid = axis.len / 2;
    let step_nm = (axis.wavelength_nm(mid + 1) - axis.wavelength_nm(mid)).abs();
    if filter.fwhm_nm < 2.0 * step_nm {
        return Err(Error::Unresolvable {
            fwhm: filter.fwhm_nm,
            step: step_nm,
        });
    }
    let sigma = filter.fwhm_nm / FWHM_PER_SIGMA;
    let lam: Vec<f64> = (0..axis.len).map(|i| axis.wavelength_nm(i)).collect();
    let mut k = DMatrix::from_fn(axis.len, axis.len, |o, s| {
        let x = (lam[o] - lam[s]) / sigma;
        (-0.5 * x * x).exp()
    });
    for mut col in k.column_iter_mut() {
        let z: f64 = col.sum();
        col /= z;
    }
    Ok(k)
}

/// Separable filter convolution without renormalization. Total weight is
/// preserved exactly.
pub fn convolve_intensity(
    spectrum: &JointSpectrum,
    signal_filter: &FilterSpec,
    idler_filter: &FilterSpec,
) -> Result<JointSpectrum> {
    if spectrum.kind != SpectrumKind::Intensity {
        return Err(Error::InvalidParameter(
            "filter convolution applies to intensities; convert the amplitude first".into(),
        ));
    }
    let ks = kernel_matrix(&spectrum.grid.signal, signal_filter)?;
    let ki = kernel_matrix(&spectrum.grid.idler, idler_filter)?;
    let values = &ks * &spectrum.values * ki.transpose();
    // roundoff can leave -0-ish entries
    let values = values.map(|v| v.max(0.0));
    JointSpectrum::new(spectrum.grid.clone(), values, SpectrumKind::Intensity)
}

/// Joint intensity as seen through two scanned Gaussian bandpass filters,
/// renormalized to unit integral.
pub fn convolve_jsi(
    spectrum: &JointSpectrum,
    signal_filter: &FilterSpec,
    idler_filter: &FilterSpec,
) -> Result<JointSpectrum> {
    convolve_intensity(spectrum, signal_filter, idler_filter)?.normalize()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Arm {
    Signal,
    Idler,
}

/// One-dimensional sampled distribution on a spectrum axis.
#[derive(Clone, Debug, PartialEq)]
pub struct Marginal {
    pub axis: UniformAxis,
    pub values: Vec<f64>,
}

impl Marginal {
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.axis.step
    }

    /// FWHM in nm; crossings found on the native axis are converted to
    /// wavelength when the axis is frequency-uniform.
    pub fn fwhm_nm(&self) -> Result<f64> {
        let h = fwhm(&self.axis.values(), &self.values)?;
        Ok(match self.axis.domain {
            AxisDomain::Wavelength => h.width,
            AxisDomain::AngularFrequency => (omega_to_nm(h.left) - omega_to_nm(h.right)).abs(),
        })
    }

    /// `(wavelength_nm, value)` pairs in axis order.
    pub fn wavelength_pairs(&self) -> Vec<[f64; 2]> {
        (0..self.axis.len)
            .map(|i| [self.axis.wavelength_nm(i), self.values[i]])
            .collect()
    }
}

/// Integrates the intensity over the other arm.
pub fn marginal(spectrum: &JointSpectrum, arm: Arm) -> Marginal {
    let intensity = spectrum.intensity();
    let v = &intensity.values;
    match arm {
        Arm::Signal => Marginal {
            axis: spectrum.grid.signal.clone(),
            values: v.row_iter().map(|r| r.sum() * spectrum.grid.idler.step).collect(),
        },
        Arm::Idler => Marginal {
            axis: spectrum.grid.idler.clone(),
            values: v.column_iter().map(|c| c.sum() * spectrum.grid.signal.step).collect(),
        },
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HalfMaximum {
    pub left: f64,
    pub right: f64,
    pub width: f64,
}

/// Full width at half maximum by linear interpolation between the samples
/// bracketing half of the largest sample on each side of it.
pub fn fwhm(x: &[f64], y: &[f64]) -> Result<HalfMaximum> {
    if x.len() != y.len() || x.len() < 3 {
        return Err(Error::InvalidParameter(
            "fwhm needs matching x/y with at least 3 samples".into(),
        ));
    }
    let (peak, max) = y
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |(bi, bv), (i, &v)| if v > bv { (i, v) } else { (bi, bv) });
    if !(max > 0.0) {
        return Err(Error::DegenerateInput("distribution has no positive maximum".into()));
    }
    let half = 0.5 * max;
    let cross = |a: usize, b: usize| x[a] + (half - y[a]) * (x[b] - x[a]) / (y[b] - y[a]);

    let mut l = peak;
    while y[l] >= half {
        if l == 0 {
            return Err(Error::SpanTooNarrow { side: "left" });
        }
        l -= 1;
    }
    let mut r = peak;
    while y[r] >= half {
        if r + 1 == y.len() {
            return Err(Error::SpanTooNarrow { side: "right" });
        }
        r += 1;
    }
    let left = cross(l, l + 1);
    let right = cross(r - 1, r);
    Ok(HalfMaximum {
        left,
        right,
        width: (right - left).abs(),
    })
}

/// Width of a Gaussian spectrum seen through a Gaussian filter.
pub fn quadrature_fwhm(theoretical_fwhm: f64, filter_fwhm: f64) -> f64 {
    theoretical_fwhm.hypot(filter_fwhm)
}

/// Sidecar metadata for a measured grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementMeta {
    pub dwell_s: f64,
    #[serde(default)]
    pub filters: Vec<FilterSpec>,
}

/// Coincidence counts recorded while scanning both filters over a
/// wavelength-uniform grid. Rows index the signal filter position.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasuredGrid {
    pub grid: SpectralGrid,
    pub counts: DMatrix<u64>,
    pub meta: MeasurementMeta,
}

impl MeasuredGrid {
    pub fn new(grid: SpectralGrid, counts: DMatrix<u64>, meta: MeasurementMeta) -> Result<Self> {
        if counts.shape() != grid.shape() {
            return Err(Error::InvalidGrid(format!(
                "count matrix {:?} does not match grid {:?}",
                counts.shape(),
                grid.shape()
            )));
        }
        if !(meta.dwell_s > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "dwell time must be > 0, got {} s",
                meta.dwell_s
            )));
        }
        Ok(Self { grid, counts, meta })
    }

    /// Integer counts proportional to `model` (peak mapped to `peak_counts`)
    /// plus a uniform background of `background_fraction * peak_counts`.
    pub fn synthesize(
        model: &JointSpectrum,
        peak_counts: f64,
        background_fraction: f64,
        meta: MeasurementMeta,
    ) -> Result<Self> {
        let intensity = model.intensity();
        let max = intensity.values.max();
        if !(max > 0.0) {
            return Err(Error::DegenerateInput("model spectrum is zero".into()));
        }
        let floor = background_fraction * peak_counts;
        let counts = intensity
            .values
            .map(|v| (peak_counts * v / max + floor).round().max(0.0) as u64);
        Self::new(model.grid.clone(), counts, meta)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in 0..self.grid.signal.len {
            let ls = self.grid.signal.wavelength_nm(r);
            for c in 0..self.grid.idler.len {
                out.push_str(&format!(
                    "{ls},{},{}\n",
                    self.grid.idler.wavelength_nm(c),
                    self.counts[(r, c)]
                ));
            }
        }
        out
    }

    pub fn from_parts(csv: &str, meta: MeasurementMeta) -> Result<Self> {
        let table = parse_triples(csv)?;
        let counts = table
            .values
            .iter()
            .map(|&v| {
                if v >= 0.0 && v.fract() == 0.0 {
                    Ok(v as u64)
                } else {
                    Err(Error::Parse(format!("count {v} is not a non-negative integer")))
                }
            })
            .collect::<Result<Vec<u64>>>()?;
        let counts = DMatrix::from_row_slice(table.n_signal, table.n_idler, &counts);
        Self::new(table.grid, counts, meta)
    }

    pub fn read(csv_path: &Path, meta_path: &Path) -> Result<Self> {
        let csv = std::fs::read_to_string(csv_path).map_err(|e| Error::io(csv_path, e))?;
        let meta_text = std::fs::read_to_string(meta_path).map_err(|e| Error::io(meta_path, e))?;
        let meta: MeasurementMeta =
            serde_json::from_str(&meta_text).map_err(|e| Error::Parse(format!("{}: {e}", meta_path.display())))?;
        Self::from_parts(&csv, meta)
    }

    pub fn write(&self, csv_path: &Path, meta_path: &Path) -> Result<()> {
        write_atomic(csv_path, self.to_csv().as_bytes())?;
        write_json(meta_path, &self.meta)
    }

    pub fn to_spectrum(&self) -> Result<JointSpectrum> {
        if self.counts.iter().all(|&c| c == 0) {
            return Err(Error::DegenerateInput("all coincidence counts are zero".into()));
        }
        JointSpectrum::new(self.grid.clone(), self.counts.map(|c| c as f64), SpectrumKind::Intensity)?.normalize()
    }
}

/// Settings for a simulated two-filter scan.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanPlan {
    /// Filter positions per arm.
    pub points: usize,
    pub step_nm: f64,
    pub filter_fwhm_nm: f64,
    pub dwell_s: f64,
    pub peak_counts: f64,
    /// Uniform background as a fraction of `peak_counts`.
    pub background_fraction: f64,
}

impl Default for ScanPlan {
    fn default() -> Self {
        Self {
            points: 60,
            step_nm: 0.1,
            filter_fwhm_nm: REFERENCE_FILTER_FWHM_NM,
            dwell_s: 10.0,
            peak_counts: 10750.0,
            background_fraction: 0.0,
        }
    }
}

/// Noiseless measured grid centred on degenerate `lambda0_nm`: the model JSI is
/// filtered on a padded wavelength grid, so filter tails see real spectrum
/// rather than the grid edge, then cropped to the scanned positions.
pub fn simulate_scan(crystal: &CrystalConfig, lambda0_nm: f64, sigma: f64, plan: &ScanPlan) -> Result<MeasuredGrid> {
    if plan.points < 2 || !(plan.step_nm > 0.0) {
        return Err(Error::InvalidGrid(format!(
            "scan needs >= 2 positions and a positive step, got {} x {} nm",
            plan.points, plan.step_nm
        )));
    }
    if !(plan.peak_counts > 0.0) || !(plan.background_fraction >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "peak counts must be > 0 and background >= 0, got {} and {}",
            plan.peak_counts, plan.background_fraction
        )));
    }
    let margin = ((4.0 * plan.filter_fwhm_nm / plan.step_nm).ceil() as usize).max(40);
    let n = plan.points + 2 * margin;
    let half = plan.step_nm * (n - 1) as f64 / 2.0;
    let grid = SpectralGrid::wavelength(lambda0_nm, lambda0_nm, half, n)?;
    let jsi = build_jsi(crystal, &PumpSpec::degenerate(lambda0_nm, sigma), &grid)?;
    let f = FilterSpec::gaussian(lambda0_nm, plan.filter_fwhm_nm);
    let conv = convolve_intensity(&jsi, &f, &f)?;
    let window = conv.window(margin, margin, plan.points, plan.points)?;
    let meta = MeasurementMeta {
        dwell_s: plan.dwell_s,
        filters: vec![f.clone(), f],
    };
    MeasuredGrid::synthesize(&window, plan.peak_counts, plan.background_fraction, meta)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasuredReport {
    pub p_jsi: f64,
    pub schmidt_number: f64,
    pub fwhm_signal_nm: f64,
    pub fwhm_idler_nm: f64,
    pub peak_counts: u64,
    pub total_counts: u64,
    pub peak_rate_cps: f64,
    pub marginal_signal: Vec<[f64; 2]>,
    pub marginal_idler: Vec<[f64; 2]>,
}

/// Intensity purity, marginal widths and peak rate of a measured grid.
pub fn analyze_measured(measured: &MeasuredGrid) -> Result<MeasuredReport> {
    let spectrum = measured.to_spectrum()?;
    let ms = marginal(&spectrum, Arm::Signal);
    let mi = marginal(&spectrum, Arm::Idler);
    let schmidt = decompose(&spectrum.resample_to_frequency()?)?;
    let peak = measured.counts.max();
    Ok(MeasuredReport {
        p_jsi: schmidt.purity,
        schmidt_number: schmidt.schmidt_number,
        fwhm_signal_nm: ms.fwhm_nm()?,
        fwhm_idler_nm: mi.fwhm_nm()?,
        peak_counts: peak,
        total_counts: measured.counts.iter().sum(),
        peak_rate_cps: peak as f64 / measured.meta.dwell_s,
        marginal_signal: ms.wavelength_pairs(),
        marginal_idler: mi.wavelength_pairs(),
    })
}

/// One row of the purity comparison; `difference = convolved - measured`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PurityRow {
    pub wavelength_nm: f64,
    pub theoretical: f64,
    pub convolved: f64,
    pub measured: f64,
    pub difference: f64,
}

/// One row of the bandwidth comparison; `convolved_nm` is the quadrature
/// estimate and `difference = measured - convolved`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BandwidthRow {
    pub wavelength_nm: f64,
    pub arm: Arm,
    pub theoretical_nm: f64,
    pub convolved_nm: f64,
    pub measured_nm: f64,
    pub difference_nm: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub purity: Vec<PurityRow>,
    pub bandwidth: Vec<BandwidthRow>,
}

impl ComparisonReport {
    #[allow(clippy::too_many_arguments)]
    pub fn push(
        &mut self,
        wavelength_nm: f64,
        theoretical_p: f64,
        convolved_p: f64,
        theoretical_fwhm: [f64; 2],
        filter_fwhm_nm: f64,
        measured: &MeasuredReport,
    ) {
        self.purity.push(PurityRow {
            wavelength_nm,
            theoretical: theoretical_p,
            convolved: convolved_p,
            measured: measured.p_jsi,
            difference: convolved_p - measured.p_jsi,
        });
        for (arm, the, meas) in [
            (Arm::Signal, theoretical_fwhm[0], measured.fwhm_signal_nm),
            (Arm::Idler, theoretical_fwhm[1], measured.fwhm_idler_nm),
        ] {
            let con = quadrature_fwhm(the, filter_fwhm_nm);
            self.bandwidth.push(BandwidthRow {
                wavelength_nm,
                arm,
                theoretical_nm: the,
                convolved_nm: con,
                measured_nm: meas,
                difference_nm: meas - con,
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::SpectralGrid;

    fn lambda_grid(n: usize, step: f64) -> SpectralGrid {
        let half = step * (n - 1) as f64 / 2.0;
        SpectralGrid::wavelength(1584.0, 1584.0, half, n).unwrap()
    }

    #[test]
    fn delta_maps_to_filter_product() {
        let g = lambda_grid(61, 0.1);
        let mut v = DMatrix::zeros(61, 61);
        v[(30, 25)] = 1.0;
        let s = JointSpectrum::new(g.clone(), v, SpectrumKind::Intensity).unwrap();
        let fs = FilterSpec::gaussian(0.0, 0.56);
        let fi = FilterSpec::gaussian(0.0, 0.8);
        let out = convolve_intensity(&s, &fs, &fi).unwrap();
        let (cs, ci) = (g.signal.value(30), g.idler.value(25));
        let peak = out.values[(30, 25)];
        for r in 0..61 {
            for c in 0..61 {
                let expect = peak
                    * FilterSpec::gaussian(cs, 0.56).transmission(g.signal.value(r))
                    * FilterSpec::gaussian(ci, 0.8).transmission(g.idler.value(c));
                assert!((out.values[(r, c)] - expect).abs() < 1e-14);
            }
        }
        assert!((out.values.sum() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unresolvable_filter_rejected() {
        let g = lambda_grid(32, 0.3);
        let s = JointSpectrum::new(g, DMatrix::from_element(32, 32, 1.0), SpectrumKind::Intensity).unwrap();
        let f = FilterSpec::gaussian(1584.0, 0.56);
        assert!(matches!(convolve_jsi(&s, &f, &f), Err(Error::Unresolvable { .. })));
    }

    #[test]
    fn amplitude_rejected() {
        let g = lambda_grid(32, 0.1);
        let s = JointSpectrum::new(g, DMatrix::from_element(32, 32, 1.0), SpectrumKind::Amplitude).unwrap();
        let f = FilterSpec::gaussian(1584.0, 0.56);
        assert!(convolve_jsi(&s, &f, &f).is_err());
    }

    #[test]
    fn gaussian_fwhm_within_a_step() {
        let sigma = 0.7;
        let x: Vec<f64> = (0..201).map(|i| -5.0 + 0.05 * i as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| (-(v - 0.013).powi(2) / (2.0 * sigma * sigma)).exp()).collect();
        let h = fwhm(&x, &y).unwrap();
        assert!((h.width - FWHM_PER_SIGMA * sigma).abs() < 0.05);
    }

    #[test]
    fn rectangle_fwhm() {
        let x: Vec<f64> = (0..100).map(|i| i as f64 * 0.1).collect();
        let y: Vec<f64> = (0..100).map(|i| if (30..60).contains(&i) { 2.0 } else { 0.0 }).collect();
        let h = fwhm(&x, &y).unwrap();
        // samples 30..59 inclusive span 3.0 nm
        assert!((h.width - 3.0).abs() <= 0.1 + 1e-12);
    }

    #[test]
    fn fwhm_needs_bracket() {
        let x: Vec<f64> = (0..10).map(f64::from).collect();
        let y = vec![1.0, 1.0, 0.9, 0.8, 0.7, 0.6, 0.5, 0.3, 0.1, 0.0];
        assert!(matches!(fwhm(&x, &y), Err(Error::SpanTooNarrow { side: "left" })));
        let y: Vec<f64> = y.into_iter().rev().collect();
        assert!(matches!(fwhm(&x, &y), Err(Error::SpanTooNarrow { side: "right" })));
    }

    #[test]
    fn quadrature_examples() {
        assert!((quadrature_fwhm(1.09, 0.56) - 1.23).abs() < 0.005);
        assert!((quadrature_fwhm(1.17, 0.56) - 1.30).abs() < 0.005);
        assert_eq!(quadrature_fwhm(0.0, 0.56), 0.56);
        assert_eq!(quadrature_fwhm(0.3, 0.56), quadrature_fwhm(0.56, 0.3));
    }

    #[test]
    fn marginals_of_separable_product() {
        let g = lambda_grid(81, 0.1);
        let a = |l: f64| (-(l - 1584.0).powi(2)).exp();
        let b = |l: f64| (-(l - 1583.5).powi(2) / 2.0).exp();
        let v = DMatrix::from_fn(81, 81, |r, c| a(g.signal.value(r)) * b(g.idler.value(c)));
        let s = JointSpectrum::new(g.clone(), v, SpectrumKind::Intensity).unwrap().normalize().unwrap();
        let ms = marginal(&s, Arm::Signal);
        let mi = marginal(&s, Arm::Idler);
        assert!((ms.integral() - mi.integral()).abs() < 1e-12);
        assert!((ms.integral() - 1.0).abs() < 1e-12);
        let ratio = ms.values[40] / a(g.signal.value(40));
        for (i, m) in ms.values.iter().enumerate() {
            assert!((m - ratio * a(g.signal.value(i))).abs() < 1e-12);
        }
    }

    #[test]
    fn measured_grid_files_round_trip() {
        let g = lambda_grid(20, 0.1);
        let counts = DMatrix::from_fn(20, 20, |r, c| (r * 20 + c) as u64);
        let meta = MeasurementMeta {
            dwell_s: 10.0,
            filters: vec![FilterSpec::gaussian(1584.0, 0.56), FilterSpec::gaussian(1584.0, 0.56)],
        };
        let m = MeasuredGrid::new(g, counts, meta).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let (cp, jp) = (dir.path().join("m.csv"), dir.path().join("m.json"));
        m.write(&cp, &jp).unwrap();
        let back = MeasuredGrid::read(&cp, &jp).unwrap();
        assert_eq!(back.counts, m.counts);
        assert_eq!(back.meta, m.meta);
        assert!((back.grid.signal.step - 0.1).abs() < 1e-9);
    }

    #[test]
    fn non_integer_counts_rejected() {
        let csv = format!("{CSV_HEADER}\n1,1,0.5\n");
        let meta = MeasurementMeta { dwell_s: 1.0, filters: vec![] };
        assert!(MeasuredGrid::from_parts(&csv, meta).is_err());
    }

    #[test]
    fn all_zero_grid_is_degenerate() {
        let g = lambda_grid(20, 0.1);
        let m = MeasuredGrid::new(g, DMatrix::zeros(20, 20), MeasurementMeta { dwell_s: 1.0, filters: vec![] }).unwrap();
        assert!(matches!(analyze_measured(&m), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn peak_rate() {
        let g = lambda_grid(20, 0.1);
        let x = |i: usize| (i as f64 - 9.5) / 3.0;
        let counts = DMatrix::from_fn(20, 20, |r, c| (10750.0 * (-(x(r).powi(2) + x(c).powi(2))).exp()) as u64);
        let m = MeasuredGrid::new(g, counts, MeasurementMeta { dwell_s: 10.0, filters: vec![] }).unwrap();
        let rep = analyze_measured(&m).unwrap();
        assert_eq!(rep.peak_rate_cps, rep.peak_counts as f64 / 10.0);
        let mut c2 = m.counts.clone();
        c2[(3, 3)] = 10750;
        let m2 = MeasuredGrid::new(m.grid.clone(), c2, m.meta.clone()).unwrap();
        assert!((analyze_measured(&m2).unwrap().peak_rate_cps - 1075.0).abs() < 1e-12);
    }
}
