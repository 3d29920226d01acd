//! Pump-bandwidth optimization and wavelength tunability sweeps.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dispersion::{solve_poling_period, tilt_angle, CrystalConfig};
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::instrument::{convolve_jsi, marginal, Arm, FilterSpec};
use crate::jsa::{build_jsa, JointSpectrum, PumpSpec};
use crate::schmidt::{decompose, SchmidtResult};

/// Reference wavelength at which the pump bandwidth is tuned, nm.
pub const REFERENCE_WAVELENGTH_NM: f64 = 1584.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    PJsa,
    PJsi,
}

impl std::str::FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "p_jsa" | "jsa" => Ok(Objective::PJsa),
            "p_jsi" | "jsi" => Ok(Objective::PJsi),
            _ => Err(Error::InvalidParameter(format!("unknown objective `{s}` (p_jsa | p_jsi)"))),
        }
    }
}

/// How the poling period follows the operating wavelength.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum PolingMode {
    /// One crystal, period solved once at `reference_nm`; only the pump is tuned.
    Fixed { reference_nm: f64 },
    /// Period re-solved for degenerate phase matching at every wavelength.
    Resolved,
}

impl Default for PolingMode {
    fn default() -> Self {
        PolingMode::Fixed {
            reference_nm: REFERENCE_WAVELENGTH_NM,
        }
    }
}

impl PolingMode {
    pub fn configure(&self, template: &CrystalConfig, lambda0_nm: f64) -> Result<CrystalConfig> {
        let at = match *self {
            PolingMode::Fixed { reference_nm } => reference_nm,
            PolingMode::Resolved => lambda0_nm,
        };
        Ok(template.with_poling(solve_poling_period(template, at)?))
    }
}

/// Amplitude on the frequency-uniform analysis grid at degenerate `lambda0_nm`.
pub fn model_jsa(config: &CrystalConfig, lambda0_nm: f64, sigma: f64, grid: &GridSpec) -> Result<JointSpectrum> {
    let g = grid.frequency_grid(config, lambda0_nm)?;
    build_jsa(config, &PumpSpec::degenerate(lambda0_nm, sigma), &g)
}

/// Schmidt analysis of the amplitude (P_JSA) or of the intensity (P_JSI).
pub fn schmidt_at(
    config: &CrystalConfig,
    lambda0_nm: f64,
    sigma: f64,
    objective: Objective,
    grid: &GridSpec,
) -> Result<SchmidtResult> {
    let jsa = model_jsa(config, lambda0_nm, sigma, grid)?;
    match objective {
        Objective::PJsa => decompose(&jsa),
        Objective::PJsi => decompose(&jsa.intensity()),
    }
}

pub fn purity_at(config: &CrystalConfig, lambda0_nm: f64, sigma: f64, objective: Objective, grid: &GridSpec) -> Result<f64> {
    schmidt_at(config, lambda0_nm, sigma, objective, grid).map(|r| r.purity)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Maximum {
    pub x: f64,
    pub value: f64,
    pub evaluations: usize,
    /// Final bracket.
    pub lower: f64,
    pub upper: f64,
}

/// Golden-section maximizer for positive scalar parameters. The initial
/// bracket is found by geometric expansion around a starting guess, which
/// fails if the objective keeps rising up to the search limits.
#[derive(Clone, Debug)]
pub struct GoldenSection {
    /// Stop when the bracket is narrower than `rel_tol * x`.
    pub rel_tol: f64,
    pub max_iter: usize,
    pub expansion: f64,
    pub max_expansions: usize,
    pub limits: (f64, f64),
}

impl Default for GoldenSection {
    fn default() -> Self {
        Self {
            rel_tol: 1e-4,
            max_iter: 200,
            expansion: 1.6,
            max_expansions: 40,
            limits: (1e-6, 1e6),
        }
    }
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

impl GoldenSection {
    pub fn maximize<F>(&self, mut f: F, x0: f64) -> Result<Maximum>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        let mut evals = 0;
        let mut eval = |x: f64| {
            evals += 1;
            f(x)
        };
        let (lo_lim, hi_lim) = self.limits;
        let fail = |reason: &str, a: f64, c: f64| Error::OptimizationFailed {
            reason: reason.into(),
            lower: a,
            upper: c,
        };

        // bracket a < b < c with f(b) >= f(a), f(c)
        let r = self.expansion;
        let (mut a, mut b, mut c) = (x0 / r, x0, x0 * r);
        let (mut fa, mut fb, mut fc) = (eval(a)?, eval(b)?, eval(c)?);
        let mut n = 0;
        while !(fb >= fa && fb >= fc) {
            if n == self.max_expansions || a < lo_lim || c > hi_lim {
                return Err(fail("no interior maximum in expanded bracket", a, c));
            }
            if fc > fb {
                (a, fa, b, fb) = (b, fb, c, fc);
                c = b * r;
                fc = eval(c)?;
            } else {
                (c, fc, b, fb) = (b, fb, a, fa);
                a = b / r;
                fa = eval(a)?;
            }
            n += 1;
        }

        let _ = (fa, fc);
        let mut x1 = c - INV_PHI * (c - a);
        let mut x2 = a + INV_PHI * (c - a);
        let mut f1 = eval(x1)?;
        let mut f2 = eval(x2)?;
        for _ in 0..self.max_iter {
            if (c - a) <= self.rel_tol * 0.5 * (a + c) {
                let (x, value) = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
                let (x, value) = if fb > value && b > a && b < c { (b, fb) } else { (x, value) };
                return Ok(Maximum {
                    x,
                    value,
                    evaluations: evals,
                    lower: a,
                    upper: c,
                });
            }
            if f1 >= f2 {
                c = x2;
                x2 = x1;
                f2 = f1;
                x1 = c - INV_PHI * (c - a);
                f1 = eval(x1)?;
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + INV_PHI * (c - a);
                f2 = eval(x2)?;
            }
        }
        Err(fail("iteration limit reached", a, c))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizedPump {
    pub objective: Objective,
    pub lambda0_nm: f64,
    pub sigma_rad_per_ps: f64,
    pub purity: f64,
    pub evaluations: usize,
    pub bracket: [f64; 2],
}

/// Pump bandwidth maximizing the chosen purity at `lambda0_nm`, with the
/// poling period solved for degenerate operation there.
pub fn optimize_pump_bandwidth(
    config: &CrystalConfig,
    lambda0_nm: f64,
    objective: Objective,
    grid: &GridSpec,
) -> Result<OptimizedPump> {
    let crystal = config.with_poling(solve_poling_period(config, lambda0_nm)?);
    optimize_pump_for_crystal(&crystal, lambda0_nm, objective, grid)
}

/// As [`optimize_pump_bandwidth`] but keeps the crystal's poling period.
pub fn optimize_pump_for_crystal(
    crystal: &CrystalConfig,
    lambda0_nm: f64,
    objective: Objective,
    grid: &GridSpec,
) -> Result<OptimizedPump> {
    crystal.validate()?;
    // A pump as wide as the crystal's phase-matching band is a good start.
    let x0 = crystal.phase_matching_bandwidth(lambda0_nm)? / 2.0;
    let m = GoldenSection::default().maximize(|s| purity_at(crystal, lambda0_nm, s, objective, grid), x0)?;
    Ok(OptimizedPump {
        objective,
        lambda0_nm,
        sigma_rad_per_ps: m.x,
        purity: m.value,
        evaluations: m.evaluations,
        bracket: [m.lower, m.upper],
    })
}

/// Model observables at one degenerate wavelength.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub lambda_nm: f64,
    pub poling_um: f64,
    pub tilt_deg: f64,
    pub p_jsi: f64,
    pub p_jsa: f64,
    /// `None` when the half maximum falls outside the grid.
    pub fwhm_s_nm: Option<f64>,
    pub fwhm_i_nm: Option<f64>,
}

pub const SWEEP_CSV_HEADER: &str = "lambda_nm,poling_um,tilt_deg,p_jsi,p_jsa,fwhm_s_nm,fwhm_i_nm";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub from_nm: f64,
    pub to_nm: f64,
    pub step_nm: f64,
    pub poling: PolingMode,
}

impl SweepSpec {
    pub fn wavelengths(&self) -> Result<Vec<f64>> {
        if !(self.step_nm > 0.0) || !(self.to_nm >= self.from_nm) {
            return Err(Error::InvalidParameter(format!(
                "sweep {}..{} step {} is empty",
                self.from_nm, self.to_nm, self.step_nm
            )));
        }
        let n = ((self.to_nm - self.from_nm) / self.step_nm + 1e-9).floor() as usize;
        Ok((0..=n).map(|k| self.from_nm + self.step_nm * k as f64).collect())
    }
}

/// Evaluates one sweep row. P_JSA uses `sigma_jsa`; P_JSI and the marginal
/// widths use `sigma_jsi`.
pub fn sweep_point(
    template: &CrystalConfig,
    lambda_nm: f64,
    poling: PolingMode,
    sigma_jsa: f64,
    sigma_jsi: f64,
    grid: &GridSpec,
) -> Result<SweepRow> {
    let crystal = poling.configure(template, lambda_nm)?;
    let p_jsa = purity_at(&crystal, lambda_nm, sigma_jsa, Objective::PJsa, grid)?;
    let jsi = model_jsa(&crystal, lambda_nm, sigma_jsi, grid)?.intensity();
    let p_jsi = decompose(&jsi)?.purity;
    Ok(SweepRow {
        lambda_nm,
        poling_um: crystal.poling_period_um,
        tilt_deg: tilt_angle(&crystal, lambda_nm)?,
        p_jsi,
        p_jsa,
        fwhm_s_nm: optional_width(marginal(&jsi, Arm::Signal).fwhm_nm())?,
        fwhm_i_nm: optional_width(marginal(&jsi, Arm::Idler).fwhm_nm())?,
    })
}

fn optional_width(w: Result<f64>) -> Result<Option<f64>> {
    match w {
        Ok(w) => Ok(Some(w)),
        Err(Error::SpanTooNarrow { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Purities and widths across a wavelength range with pump bandwidths held
/// fixed. Rows are evaluated in parallel and returned in wavelength order.
pub fn wavelength_sweep(
    template: &CrystalConfig,
    spec: &SweepSpec,
    sigma_jsa: f64,
    sigma_jsi: f64,
    grid: &GridSpec,
) -> Result<Vec<SweepRow>> {
    template.validate()?;
    spec.wavelengths()?
        .into_par_iter()
        .map(|l| sweep_point(template, l, spec.poling, sigma_jsa, sigma_jsi, grid))
        .collect()
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    let width = |w: Option<f64>| w.map_or_else(|| "nan".to_string(), |w| format!("{w:.12e}"));
    for r in rows {
        let _ = writeln!(
            out,
            "{},{:.12e},{:.12e},{:.12e},{:.12e},{},{}",
            r.lambda_nm,
            r.poling_um,
            r.tilt_deg,
            r.p_jsi,
            r.p_jsa,
            width(r.fwhm_s_nm),
            width(r.fwhm_i_nm)
        );
    }
    out
}

/// Theoretical and filter-convolved intensity observables at one wavelength.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FilteredPoint {
    pub lambda_nm: f64,
    pub p_jsi: f64,
    pub p_jsi_convolved: f64,
    pub fwhm_nm: [f64; 2],
    pub fwhm_convolved_nm: [f64; 2],
}

pub fn filtered_point(
    crystal: &CrystalConfig,
    lambda_nm: f64,
    sigma_jsi: f64,
    filter_fwhm_nm: f64,
    grid: &GridSpec,
) -> Result<FilteredPoint> {
    let jsi = model_jsa(crystal, lambda_nm, sigma_jsi, grid)?.intensity();
    let f = FilterSpec::gaussian(lambda_nm, filter_fwhm_nm);
    let conv = convolve_jsi(&jsi, &f, &f)?;
    Ok(FilteredPoint {
        lambda_nm,
        p_jsi: decompose(&jsi)?.purity,
        p_jsi_convolved: decompose(&conv)?.purity,
        fwhm_nm: [marginal(&jsi, Arm::Signal).fwhm_nm()?, marginal(&jsi, Arm::Idler).fwhm_nm()?],
        fwhm_convolved_nm: [marginal(&conv, Arm::Signal).fwhm_nm()?, marginal(&conv, Arm::Idler).fwhm_nm()?],
    })
}
