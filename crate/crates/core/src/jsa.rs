//! Joint spectral amplitude and intensity on a discrete grid.
//!
//! The amplitude is the product of a Gaussian pump envelope, which depends
//! only on `ω_s + ω_i`, and the sinc phase-matching function of the crystal.
//! Both factors are real (transform-limited pump, no chirp), so amplitudes are
//! stored as real numbers carrying the sign of the sinc.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dispersion::CrystalConfig;
use crate::error::{Error, Result};
use crate::grid::{AxisDomain, SpectralGrid, UniformAxis};
use crate::io::write_atomic;
use crate::units::{nm_to_omega, omega_to_nm};

pub const CSV_HEADER: &str = "lambda_s_nm,lambda_i_nm,value";

/// Tolerance on `∫|f|² = 1` used by consumers that require normalized input.
pub const NORMALIZATION_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PumpSpec {
    /// Central pump wavelength, nm.
    pub center_nm: f64,
    /// Gaussian bandwidth σ_p in rad/ps, defined on the intensity:
    /// `|α|² = exp(-((ω_s + ω_i - ω_p)/σ_p)²)`.
    pub sigma_rad_per_ps: f64,
}

impl PumpSpec {
    /// Pump at half the degenerate signal/idler wavelength.
    pub fn degenerate(lambda0_nm: f64, sigma_rad_per_ps: f64) -> Self {
        Self {
            center_nm: lambda0_nm / 2.0,
            sigma_rad_per_ps,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.center_nm > 0.0 && self.center_nm.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "pump wavelength must be > 0, got {} nm",
                self.center_nm
            )));
        }
        if !(self.sigma_rad_per_ps > 0.0 && self.sigma_rad_per_ps.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "pump bandwidth must be > 0, got {} rad/ps",
                self.sigma_rad_per_ps
            )));
        }
        Ok(())
    }

    pub fn omega(&self) -> f64 {
        nm_to_omega(self.center_nm)
    }
}

/// σ_p of a transform-limited Gaussian pulse with intensity FWHM `duration_ps`.
///
/// For `I(t) ∝ exp(-4 ln2 t²/τ²)` the spectral intensity is
/// `exp(-(Δω/σ_p)²)` with `σ_p = 2 sqrt(ln 2) / τ`.
pub fn sigma_from_pulse_duration(duration_ps: f64) -> f64 {
    2.0 * std::f64::consts::LN_2.sqrt() / duration_ps
}

/// Inverse of [`sigma_from_pulse_duration`].
pub fn pulse_duration_from_sigma(sigma_rad_per_ps: f64) -> f64 {
    2.0 * std::f64::consts::LN_2.sqrt() / sigma_rad_per_ps
}

/// Pump envelope amplitude `α = exp(-((ω_s + ω_i - ω_p)/σ_p)² / 2)`.
pub fn pump_envelope(pump: &PumpSpec, omega_s: f64, omega_i: f64) -> f64 {
    let x = (omega_s + omega_i - pump.omega()) / pump.sigma_rad_per_ps;
    (-0.5 * x * x).exp()
}

/// `sin(x)/x` with `sinc(0) = 1`.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Phase-matching amplitude `sinc(Δk L / 2)` with `ω_p = ω_s + ω_i`.
pub fn phase_matching(config: &CrystalConfig, omega_s: f64, omega_i: f64) -> Result<f64> {
    let dk = config.delta_k(omega_s, omega_i, omega_s + omega_i)?;
    Ok(sinc(0.5 * dk * config.length_um()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpectrumKind {
    #[serde(rename = "JSA")]
    Amplitude,
    #[serde(rename = "JSI")]
    Intensity,
}

/// A sampled joint spectrum. Rows index the signal axis, columns the idler.
#[derive(Clone, Debug, PartialEq)]
pub struct JointSpectrum {
    pub grid: SpectralGrid,
    pub values: DMatrix<f64>,
    pub kind: SpectrumKind,
    pub normalized: bool,
}

impl JointSpectrum {
    pub fn new(grid: SpectralGrid, values: DMatrix<f64>, kind: SpectrumKind) -> Result<Self> {
        if values.shape() != grid.shape() {
            return Err(Error::InvalidGrid(format!(
                "matrix shape {:?} does not match grid {:?}",
                values.shape(),
                grid.shape()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::DegenerateInput("spectrum contains non-finite values".into()));
        }
        if kind == SpectrumKind::Intensity && values.iter().any(|&v| v < 0.0) {
            return Err(Error::DegenerateInput("intensity contains negative values".into()));
        }
        Ok(Self {
            grid,
            values,
            kind,
            normalized: false,
        })
    }

    /// `Σ values` (JSI) or `Σ values²` (JSA), times the cell area.
    pub fn norm_integral(&self) -> f64 {
        let s: f64 = match self.kind {
            SpectrumKind::Amplitude => self.values.iter().map(|v| v * v).sum(),
            SpectrumKind::Intensity => self.values.iter().sum(),
        };
        s * self.grid.cell_area()
    }

    pub fn normalize(mut self) -> Result<Self> {
        let n = self.norm_integral();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::DegenerateInput(
                "spectrum has zero total weight".into(),
            ));
        }
        let scale = match self.kind {
            SpectrumKind::Amplitude => 1.0 / n.sqrt(),
            SpectrumKind::Intensity => 1.0 / n,
        };
        self.values *= scale;
        self.normalized = true;
        Ok(self)
    }

    /// Modulus squared. A normalized amplitude gives a normalized intensity.
    pub fn intensity(&self) -> Self {
        match self.kind {
            SpectrumKind::Intensity => self.clone(),
            SpectrumKind::Amplitude => Self {
                grid: self.grid.clone(),
                values: self.values.map(|v| v * v),
                kind: SpectrumKind::Intensity,
                normalized: self.normalized,
            },
        }
    }

    pub fn transposed(&self) -> Self {
        Self {
            grid: self.grid.transposed(),
            values: self.values.transpose(),
            kind: self.kind,
            normalized: self.normalized,
        }
    }

    /// Rectangular sub-window starting at `(row, col)`. The result is not
    /// normalized.
    pub fn window(&self, row: usize, col: usize, rows: usize, cols: usize) -> Result<Self> {
        let (ns, ni) = self.grid.shape();
        if row + rows > ns || col + cols > ni {
            return Err(Error::InvalidGrid(format!(
                "window {rows}x{cols} at ({row}, {col}) exceeds {ns}x{ni}"
            )));
        }
        let s = &self.grid.signal;
        let i = &self.grid.idler;
        let grid = SpectralGrid::new(
            UniformAxis::new(s.value(row), s.step, rows, s.domain)?,
            UniformAxis::new(i.value(col), i.step, cols, i.domain)?,
        )?;
        let values = self.values.view((row, col), (rows, cols)).into_owned();
        Self::new(grid, values, self.kind)
    }

    /// Bilinear resampling onto the frequency-uniform grid with the same
    /// extent and point count. Function values are interpolated; the result is
    /// renormalized with the new cell measure.
    pub fn resample_to_frequency(&self) -> Result<Self> {
        if self.grid.domain() == AxisDomain::AngularFrequency {
            return Ok(self.clone());
        }
        let target = self.grid.to_frequency();
        let rows: Vec<(usize, f64)> = (0..target.signal.len)
            .map(|r| bracket(&self.grid.signal, omega_to_nm(target.signal.value(r))))
            .collect();
        let cols: Vec<(usize, f64)> = (0..target.idler.len)
            .map(|c| bracket(&self.grid.idler, omega_to_nm(target.idler.value(c))))
            .collect();
        let v = &self.values;
        let values = DMatrix::from_fn(target.signal.len, target.idler.len, |r, c| {
            let (i, u) = rows[r];
            let (j, t) = cols[c];
            (1.0 - u) * (1.0 - t) * v[(i, j)]
                + u * (1.0 - t) * v[(i + 1, j)]
                + (1.0 - u) * t * v[(i, j + 1)]
                + u * t * v[(i + 1, j + 1)]
        });
        let out = Self::new(target, values, self.kind)?;
        if self.normalized {
            out.normalize()
        } else {
            Ok(out)
        }
    }

    /// CSV text: `lambda_s_nm,lambda_i_nm,value`, row-major over the signal
    /// axis in grid index order.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * self.values.len());
        out.push_str(CSV_HEADER);
        out.push('\n');
        for r in 0..self.grid.signal.len {
            let ls = self.grid.signal.wavelength_nm(r);
            for c in 0..self.grid.idler.len {
                let li = self.grid.idler.wavelength_nm(c);
                let _ = writeln!(out, "{ls},{li},{:.14e}", self.values[(r, c)]);
            }
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        write_atomic(path, self.to_csv().as_bytes())
    }

    /// Parses the CSV format written by [`JointSpectrum::to_csv`]. The grid is
    /// recovered as wavelength-uniform if possible, otherwise frequency-uniform.
    pub fn from_csv(text: &str, kind: SpectrumKind) -> Result<Self> {
        let table = parse_triples(text)?;
        let values = DMatrix::from_row_slice(table.n_signal, table.n_idler, &table.values);
        let mut s = Self::new(table.grid, values, kind)?;
        s.normalized = (s.norm_integral() - 1.0).abs() < NORMALIZATION_TOL;
        Ok(s)
    }

    pub fn read_csv(path: &Path, kind: SpectrumKind) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_csv(&text, kind)
    }
}

/// Lower neighbour index and fractional offset of `x` on `axis`, clamped to
/// the last interval.
fn bracket(axis: &UniformAxis, x: f64) -> (usize, f64) {
    let p = axis.position(x).clamp(0.0, (axis.len - 1) as f64);
    let i = (p.floor() as usize).min(axis.len - 2);
    (i, p - i as f64)
}

pub(crate) struct CsvTable {
    pub grid: SpectralGrid,
    pub n_signal: usize,
    pub n_idler: usize,
    pub values: Vec<f64>,
}

pub(crate) fn parse_triples(text: &str) -> Result<CsvTable> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    match lines.next() {
        Some(h) if h.trim() == CSV_HEADER => {}
        other => {
            return Err(Error::Parse(format!(
                "expected header `{CSV_HEADER}`, found {:?}",
                other.unwrap_or("")
            )))
        }
    }
    let mut signal: Vec<f64> = Vec::new();
    let mut idler: Vec<f64> = Vec::new();
    let mut values = Vec::new();
    for (n, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(Error::Parse(format!("line {}: expected 3 fields", n + 2)));
        }
        let parse = |s: &str| {
            s.parse::<f64>()
                .map_err(|e| Error::Parse(format!("line {}: `{s}`: {e}", n + 2)))
        };
        let (ls, li, v) = (parse(fields[0])?, parse(fields[1])?, parse(fields[2])?);
        if signal.last() != Some(&ls) {
            signal.push(ls);
        }
        if signal.len() == 1 {
            idler.push(li);
        }
        values.push(v);
    }
    let (n_signal, n_idler) = (signal.len(), idler.len());
    if n_signal * n_idler != values.len() || n_idler == 0 {
        return Err(Error::Parse(format!(
            "{} rows do not form a {n_signal} x {n_idler} grid",
            values.len()
        )));
    }
    let grid = recover_grid(&signal, &idler)?;
    Ok(CsvTable {
        grid,
        n_signal,
        n_idler,
        values,
    })
}

fn recover_grid(signal_nm: &[f64], idler_nm: &[f64]) -> Result<SpectralGrid> {
    let lam = UniformAxis::from_samples(signal_nm, AxisDomain::Wavelength)
        .and_then(|s| Ok((s, UniformAxis::from_samples(idler_nm, AxisDomain::Wavelength)?)));
    if let Ok((s, i)) = lam {
        return SpectralGrid::new(s, i);
    }
    let to_w = |v: &[f64]| v.iter().map(|&l| nm_to_omega(l)).collect::<Vec<_>>();
    let s = UniformAxis::from_samples(&to_w(signal_nm), AxisDomain::AngularFrequency);
    let i = UniformAxis::from_samples(&to_w(idler_nm), AxisDomain::AngularFrequency);
    match (s, i) {
        (Ok(s), Ok(i)) => SpectralGrid::new(s, i),
        _ => Err(Error::InvalidGrid(
            "CSV coordinates are uniform neither in wavelength nor in frequency".into(),
        )),
    }
}

fn check_windows(config: &CrystalConfig, grid: &SpectralGrid) -> Result<()> {
    let (pump, signal, idler) = (config.pump()?, config.signal()?, config.idler()?);
    let inside = |c: &crate::dispersion::SellmeierCoefficients, nm: f64| {
        let um = nm * 1e-3;
        um >= c.valid_um[0] && um <= c.valid_um[1]
    };
    let mut bad = Vec::new();
    let mut count = 0;
    for r in 0..grid.signal.len {
        let ws = grid.signal.omega(r);
        for c in 0..grid.idler.len {
            let wi = grid.idler.omega(c);
            let ok = inside(signal, omega_to_nm(ws))
                && inside(idler, omega_to_nm(wi))
                && inside(pump, omega_to_nm(ws + wi));
            if !ok {
                count += 1;
                if bad.len() < 5 {
                    bad.push((omega_to_nm(ws), omega_to_nm(wi)));
                }
            }
        }
    }
    if count > 0 {
        Err(Error::GridOutOfWindow {
            count,
            examples: bad,
        })
    } else {
        Ok(())
    }
}

/// `f(ω_s, ω_i) = φ(ω_s, ω_i) α(ω_s + ω_i)`, L²-normalized over the grid.
pub fn build_jsa(config: &CrystalConfig, pump: &PumpSpec, grid: &SpectralGrid) -> Result<JointSpectrum> {
    config.validate()?;
    pump.validate()?;
    check_windows(config, grid)?;
    let (ns, ni) = grid.shape();
    let rows: Vec<Vec<f64>> = (0..ns)
        .into_par_iter()
        .map(|r| {
            let ws = grid.signal.omega(r);
            (0..ni)
                .map(|c| {
                    let wi = grid.idler.omega(c);
                    Ok(phase_matching(config, ws, wi)? * pump_envelope(pump, ws, wi))
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    let flat: Vec<f64> = rows.into_iter().flatten().collect();
    JointSpectrum::new(grid.clone(), DMatrix::from_row_slice(ns, ni, &flat), SpectrumKind::Amplitude)?.normalize()
}

/// `|f|²`, normalized to unit integral.
pub fn build_jsi(config: &CrystalConfig, pump: &PumpSpec, grid: &SpectralGrid) -> Result<JointSpectrum> {
    build_jsa(config, pump, grid).map(|a| a.intensity())
}
