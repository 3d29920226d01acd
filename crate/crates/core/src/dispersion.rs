//! Material dispersion of the nonlinear crystal.
//!
//! Refractive indices come from Sellmeier fits loaded as JSON documents. The
//! index derivative is analytic so group velocities need no step-size tuning.
//! Quasi-phase matching and the orientation of the phase-matching ridge are
//! derived from these quantities.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::SPEED_OF_LIGHT_UM_PER_PS;

const KTP_Y_JSON: &str = include_str!("../data/ktp_y.json");
const KTP_Z_JSON: &str = include_str!("../data/ktp_z.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CrystalAxis {
    X,
    Y,
    Z,
}

impl fmt::Display for CrystalAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CrystalAxis::X => "x",
            CrystalAxis::Y => "y",
            CrystalAxis::Z => "z",
        };
        f.write_str(s)
    }
}

/// One resonance term `B λ² / (λ² - C)`, with `C` in um².
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SellmeierPole {
    pub b: f64,
    pub c_um2: f64,
}

/// Supported Sellmeier variants.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", content = "coefficients", rename_all = "kebab-case")]
pub enum SellmeierForm {
    /// `n² = 1 + Σ B λ²/(λ² - C)`
    Sellmeier { poles: Vec<SellmeierPole> },
    /// `n² = A + Σ B/(1 - C/λ²) - D λ²`
    SellmeierIr {
        a: f64,
        poles: Vec<SellmeierPole>,
        d_um2: f64,
    },
    /// Dispersionless medium.
    Constant { n: f64 },
}

impl SellmeierForm {
    /// Returns `(n², d(n²)/dλ)` at `lambda_um`.
    fn n2_and_slope(&self, lambda_um: f64) -> (f64, f64) {
        let l2 = lambda_um * lambda_um;
        let poles_sum = |poles: &[SellmeierPole]| {
            poles.iter().fold((0.0, 0.0), |(v, dv), p| {
                let den = l2 - p.c_um2;
                (
                    v + p.b * l2 / den,
                    dv - 2.0 * p.b * p.c_um2 * lambda_um / (den * den),
                )
            })
        };
        match self {
            SellmeierForm::Sellmeier { poles } => {
                let (v, dv) = poles_sum(poles);
                (1.0 + v, dv)
            }
            SellmeierForm::SellmeierIr { a, poles, d_um2 } => {
                let (v, dv) = poles_sum(poles);
                (a + v - d_um2 * l2, dv - 2.0 * d_um2 * lambda_um)
            }
            SellmeierForm::Constant { n } => (n * n, 0.0),
        }
    }
}

/// Sellmeier fit for one crystal axis, as stored on disk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SellmeierCoefficients {
    pub axis: CrystalAxis,
    #[serde(flatten)]
    pub form: SellmeierForm,
    /// Validity window `[min, max]` in um.
    pub valid_um: [f64; 2],
    #[serde(default)]
    pub source: String,
}

impl SellmeierCoefficients {
    pub fn from_json(text: &str) -> Result<Self> {
        let c: Self = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if !(c.valid_um[0] > 0.0 && c.valid_um[1] > c.valid_um[0]) {
            return Err(Error::InvalidParameter(format!(
                "validity window {:?} for axis {} is empty",
                c.valid_um, c.axis
            )));
        }
        Ok(c)
    }

    pub fn ktp_y() -> Self {
        Self::from_json(KTP_Y_JSON).expect("bundled KTP y coefficients")
    }

    pub fn ktp_z() -> Self {
        Self::from_json(KTP_Z_JSON).expect("bundled KTP z coefficients")
    }

    fn check_window(&self, lambda_um: f64, strict: bool) -> Result<()> {
        let [lo, hi] = self.valid_um;
        let inside = if strict {
            lambda_um > lo && lambda_um < hi
        } else {
            lambda_um >= lo && lambda_um <= hi
        };
        if inside {
            Ok(())
        } else {
            Err(Error::OutOfWindow {
                axis: self.axis.to_string(),
                wavelength_um: lambda_um,
                min_um: lo,
                max_um: hi,
            })
        }
    }

    fn index_and_slope(&self, lambda_um: f64) -> Result<(f64, f64)> {
        let (n2, dn2) = self.form.n2_and_slope(lambda_um);
        if !(n2 > 1.0) || !n2.is_finite() {
            return Err(Error::NoPhysicalSolution(format!(
                "index squared {n2} at {lambda_um} um on axis {} is not above 1",
                self.axis
            )));
        }
        let n = n2.sqrt();
        Ok((n, dn2 / (2.0 * n)))
    }

    /// Phase index `n(λ)`, window edges included.
    pub fn refractive_index(&self, lambda_um: f64) -> Result<f64> {
        self.check_window(lambda_um, false)?;
        Ok(self.index_and_slope(lambda_um)?.0)
    }

    /// Wavevector `k = 2π n / λ` in rad/um.
    pub fn wavevector(&self, lambda_um: f64) -> Result<f64> {
        Ok(2.0 * PI * self.refractive_index(lambda_um)? / lambda_um)
    }

    /// Wavevector as a function of angular frequency (rad/ps).
    pub fn wavevector_at_omega(&self, omega: f64) -> Result<f64> {
        self.wavevector(2.0 * PI * SPEED_OF_LIGHT_UM_PER_PS / omega)
    }

    /// Group index `n - λ dn/dλ`. Needs a neighbourhood, so the window is
    /// treated as open.
    pub fn group_index(&self, lambda_um: f64) -> Result<f64> {
        self.check_window(lambda_um, true)?;
        let (n, dn) = self.index_and_slope(lambda_um)?;
        Ok(n - lambda_um * dn)
    }

    /// `k'(ω) = 1 / V_g` in ps/um.
    pub fn inverse_group_velocity(&self, lambda_um: f64) -> Result<f64> {
        Ok(self.group_index(lambda_um)? / SPEED_OF_LIGHT_UM_PER_PS)
    }

    /// Group velocity `V_g = dω/dk` in um/ps.
    pub fn group_velocity(&self, lambda_um: f64) -> Result<f64> {
        Ok(1.0 / self.inverse_group_velocity(lambda_um)?)
    }
}

/// Sign of the grating term in `Δk = k_p - k_s - k_i - s 2π/Λ`.
///
/// The poling period is a positive length; which way the grating vector
/// points depends on the sign of the material mismatch it compensates.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GratingOrientation {
    #[default]
    Forward,
    Backward,
}

impl GratingOrientation {
    pub fn sign(self) -> f64 {
        match self {
            GratingOrientation::Forward => 1.0,
            GratingOrientation::Backward => -1.0,
        }
    }
}

/// Result of solving the zero-order quasi-phase-matching condition.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolingSolution {
    pub period_um: f64,
    pub orientation: GratingOrientation,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrystalConfig {
    pub length_mm: f64,
    pub poling_period_um: f64,
    #[serde(default)]
    pub grating: GratingOrientation,
    /// Operating temperature. Metadata only, no thermo-optic model.
    #[serde(default)]
    pub temperature_c: Option<f64>,
    pub pump_axis: CrystalAxis,
    pub signal_axis: CrystalAxis,
    pub idler_axis: CrystalAxis,
    pub coefficients: Vec<SellmeierCoefficients>,
}

impl CrystalConfig {
    /// 30 mm PPKTP, type-II (pump y, signal y, idler z), 46.1 um poling at 32 °C.
    pub fn ppktp_default() -> Self {
        Self {
            length_mm: 30.0,
            poling_period_um: 46.1,
            grating: GratingOrientation::Backward,
            temperature_c: Some(32.0),
            pump_axis: CrystalAxis::Y,
            signal_axis: CrystalAxis::Y,
            idler_axis: CrystalAxis::Z,
            coefficients: vec![SellmeierCoefficients::ktp_y(), SellmeierCoefficients::ktp_z()],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.length_mm > 0.0 && self.length_mm.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "crystal length must be > 0, got {} mm",
                self.length_mm
            )));
        }
        if !(self.poling_period_um > 0.0 && self.poling_period_um.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "poling period must be > 0, got {} um",
                self.poling_period_um
            )));
        }
        if self.signal_axis == self.idler_axis {
            return Err(Error::InvalidParameter(format!(
                "signal and idler share axis {}; a type-II process needs distinct axes",
                self.signal_axis
            )));
        }
        for axis in [self.pump_axis, self.signal_axis, self.idler_axis] {
            self.axis_coefficients(axis)?;
        }
        Ok(())
    }

    pub fn axis_coefficients(&self, axis: CrystalAxis) -> Result<&SellmeierCoefficients> {
        self.coefficients
            .iter()
            .find(|c| c.axis == axis)
            .ok_or_else(|| Error::InvalidParameter(format!("no Sellmeier coefficients for axis {axis}")))
    }

    pub fn pump(&self) -> Result<&SellmeierCoefficients> {
        self.axis_coefficients(self.pump_axis)
    }

    pub fn signal(&self) -> Result<&SellmeierCoefficients> {
        self.axis_coefficients(self.signal_axis)
    }

    pub fn idler(&self) -> Result<&SellmeierCoefficients> {
        self.axis_coefficients(self.idler_axis)
    }

    pub fn length_um(&self) -> f64 {
        self.length_mm * 1e3
    }

    /// Signed grating wavevector `s 2π/Λ` in rad/um.
    pub fn grating_wavevector(&self) -> f64 {
        self.grating.sign() * 2.0 * PI / self.poling_period_um
    }

    pub fn with_poling(&self, poling: PolingSolution) -> Self {
        Self {
            poling_period_um: poling.period_um,
            grating: poling.orientation,
            ..self.clone()
        }
    }

    /// Same crystal with the signal and idler polarization axes exchanged.
    pub fn with_arms_swapped(&self) -> Self {
        Self {
            signal_axis: self.idler_axis,
            idler_axis: self.signal_axis,
            ..self.clone()
        }
    }

    /// Phase mismatch `Δk = k_p - k_s - k_i - s 2π/Λ` (rad/um) for angular
    /// frequencies in rad/ps. Energy conservation is the caller's business.
    pub fn delta_k(&self, omega_s: f64, omega_i: f64, omega_p: f64) -> Result<f64> {
        Ok(self.material_mismatch(omega_s, omega_i, omega_p)? - self.grating_wavevector())
    }

    /// `k_p - k_s - k_i` without the grating term.
    pub fn material_mismatch(&self, omega_s: f64, omega_i: f64, omega_p: f64) -> Result<f64> {
        let kp = self.pump()?.wavevector_at_omega(omega_p)?;
        let ks = self.signal()?.wavevector_at_omega(omega_s)?;
        let ki = self.idler()?.wavevector_at_omega(omega_i)?;
        Ok(kp - ks - ki)
    }

    /// Inverse group velocities (pump, signal, idler) in ps/um for degenerate
    /// operation at `lambda0_nm`.
    pub fn inverse_group_velocities(&self, lambda0_nm: f64) -> Result<[f64; 3]> {
        let l0 = lambda0_nm * 1e-3;
        Ok([
            self.pump()?.inverse_group_velocity(l0 / 2.0)?,
            self.signal()?.inverse_group_velocity(l0)?,
            self.idler()?.inverse_group_velocity(l0)?,
        ])
    }

    /// Signal-axis distance (rad/ps) to the first phase-matching zero, averaged
    /// over both arms: `4π / (L (|k'_p - k'_s| + |k'_p - k'_i|))`. Used as the
    /// natural unit for grid spans.
    pub fn phase_matching_bandwidth(&self, lambda0_nm: f64) -> Result<f64> {
        let [p, s, i] = self.inverse_group_velocities(lambda0_nm)?;
        let spread = (p - s).abs() + (p - i).abs();
        if !(spread > 0.0) {
            return Err(Error::NoPhysicalSolution(
                "all three group velocities coincide; phase-matching bandwidth is unbounded".into(),
            ));
        }
        Ok(4.0 * PI / (self.length_um() * spread))
    }
}

/// Closed-form poling period for degenerate phase matching at `lambda0_nm`
/// (signal = idler = λ₀, pump = λ₀/2). Ignores the period already stored in
/// `config`.
pub fn solve_poling_period(config: &CrystalConfig, lambda0_nm: f64) -> Result<PolingSolution> {
    let l0 = lambda0_nm * 1e-3;
    let mismatch = config.pump()?.wavevector(l0 / 2.0)?
        - config.signal()?.wavevector(l0)?
        - config.idler()?.wavevector(l0)?;
    if !mismatch.is_finite() || mismatch.abs() < 1e-12 {
        return Err(Error::NoPhysicalSolution(format!(
            "material wavevector mismatch {mismatch} rad/um at {lambda0_nm} nm cannot be compensated by a finite period"
        )));
    }
    Ok(PolingSolution {
        period_um: 2.0 * PI / mismatch.abs(),
        orientation: if mismatch > 0.0 {
            GratingOrientation::Forward
        } else {
            GratingOrientation::Backward
        },
    })
}

/// Ridge angle (degrees) from inverse group velocities:
/// `tan θ = -(p - s) / (p - i)`.
pub fn tilt_from_inverse_velocities(pump: f64, signal: f64, idler: f64) -> Result<f64> {
    let den = pump - idler;
    if den == 0.0 || !den.is_finite() {
        return Err(Error::DegenerateOrientation);
    }
    Ok((-(pump - signal) / den).atan().to_degrees())
}

/// Angle between the positive signal axis and the phase-matching ridge at
/// degenerate wavelength `lambda0_nm`.
pub fn tilt_angle(config: &CrystalConfig, lambda0_nm: f64) -> Result<f64> {
    let [p, s, i] = config.inverse_group_velocities(lambda0_nm)?;
    tilt_from_inverse_velocities(p, s, i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::nm_to_omega;

    fn constant(n: f64) -> SellmeierCoefficients {
        SellmeierCoefficients {
            axis: CrystalAxis::X,
            form: SellmeierForm::Constant { n },
            valid_um: [0.3, 3.0],
            source: String::new(),
        }
    }

    // Reference values from an independent 30-digit evaluation of the same fits.
    #[test]
    fn bundled_indices_regression() {
        let nz = SellmeierCoefficients::ktp_z().refractive_index(1.584).unwrap();
        let ny = SellmeierCoefficients::ktp_y().refractive_index(1.584).unwrap();
        assert!(nz > 1.7 && nz < 1.9);
        assert!((nz - 1.815_231_779_746_65).abs() < 1e-12);
        assert!((ny - 1.733_430_532_130_412).abs() < 1e-12);
    }

    #[test]
    fn window_edges() {
        let z = SellmeierCoefficients::ktp_z();
        assert!(z.refractive_index(0.43).is_ok());
        assert!(z.refractive_index(3.54).is_ok());
        let err = z.refractive_index(3.541).unwrap_err();
        assert!(matches!(err, Error::OutOfWindow { .. }));
        assert!(err.to_string().contains("3.54"));
        assert!(z.refractive_index(0.429).is_err());
        // group velocity needs an open window
        assert!(z.group_velocity(0.43).is_err());
        assert!(z.group_velocity(0.44).is_ok());
    }

    #[test]
    fn normal_dispersion_in_telecom_band() {
        for c in [SellmeierCoefficients::ktp_y(), SellmeierCoefficients::ktp_z()] {
            let mut prev = f64::INFINITY;
            let mut prev_k = f64::INFINITY;
            for i in 0..=50 {
                let l = 1.40 + 0.006 * i as f64;
                let n = c.refractive_index(l).unwrap();
                let k = c.wavevector(l).unwrap();
                assert!(n > 1.0 && n < prev);
                assert!(k < prev_k);
                prev = n;
                prev_k = k;
            }
        }
    }

    #[test]
    fn wavevector_definition() {
        let k = constant(1.5).wavevector(1.0).unwrap();
        assert!((k - 3.0 * PI).abs() < 1e-14);
    }

    #[test]
    fn constant_index_group_velocity() {
        let vg = constant(1.5).group_velocity(1.55).unwrap();
        assert!((vg - SPEED_OF_LIGHT_UM_PER_PS / 1.5).abs() < 1e-12);
    }

    #[test]
    fn group_velocity_below_c() {
        for c in [SellmeierCoefficients::ktp_y(), SellmeierCoefficients::ktp_z()] {
            for l in [0.73, 0.8, 1.46, 1.584, 1.675] {
                let v = c.group_velocity(l).unwrap();
                assert!(v > 0.0 && v < SPEED_OF_LIGHT_UM_PER_PS);
            }
        }
    }

    #[test]
    fn json_shape() {
        let c = SellmeierCoefficients::ktp_z();
        let v: serde_json::Value = serde_json::to_value(&c).unwrap();
        assert_eq!(v["axis"], "z");
        assert_eq!(v["form"], "sellmeier-ir");
        assert_eq!(v["valid_um"][1], 3.54);
        assert!(v["coefficients"]["poles"].is_array());
        assert!(v["source"].as_str().unwrap().contains("Fradkin"));
        let back: SellmeierCoefficients = serde_json::from_value(v).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn empty_window_rejected() {
        let text = r#"{"axis":"y","form":"constant","coefficients":{"n":1.5},"valid_um":[2.0,1.0]}"#;
        assert!(SellmeierCoefficients::from_json(text).is_err());
    }

    #[test]
    fn config_validation() {
        let mut c = CrystalConfig::ppktp_default();
        c.validate().unwrap();
        c.length_mm = 0.0;
        assert!(c.validate().is_err());
        let mut c = CrystalConfig::ppktp_default();
        c.poling_period_um = -1.0;
        assert!(c.validate().is_err());
        let mut c = CrystalConfig::ppktp_default();
        c.idler_axis = CrystalAxis::Y;
        assert!(c.validate().is_err());
        let mut c = CrystalConfig::ppktp_default();
        c.idler_axis = CrystalAxis::X;
        assert!(c.validate().is_err());
    }

    #[test]
    fn poling_period_at_1584() {
        let c = CrystalConfig::ppktp_default();
        let sol = solve_poling_period(&c, 1584.0).unwrap();
        assert!((sol.period_um - 46.146_014_671_819).abs() < 1e-9);
        assert_eq!(sol.orientation, GratingOrientation::Backward);
    }

    #[test]
    fn grating_term_shift() {
        let c = CrystalConfig::ppktp_default();
        let (ws, wi) = (nm_to_omega(1583.0), nm_to_omega(1585.0));
        let dk = c.delta_k(ws, wi, ws + wi).unwrap();
        let bare = c.material_mismatch(ws, wi, ws + wi).unwrap();
        assert!((bare - dk - c.grating_wavevector()).abs() < 1e-15);
        assert!((c.grating_wavevector().abs() - 2.0 * PI / 46.1).abs() < 1e-15);
    }

    #[test]
    fn zero_mismatch_has_no_solution() {
        // Identical dispersionless axes with n_p chosen so k_p = k_s + k_i.
        let mut c = CrystalConfig::ppktp_default();
        c.coefficients = vec![
            SellmeierCoefficients { axis: CrystalAxis::Y, ..constant(1.5) },
            SellmeierCoefficients { axis: CrystalAxis::Z, ..constant(1.5) },
        ];
        let err = solve_poling_period(&c, 1584.0).unwrap_err();
        assert!(matches!(err, Error::NoPhysicalSolution(_)));
    }

    #[test]
    fn tilt_symmetric_gvm_is_45() {
        // 2 p = s + i
        let t = tilt_from_inverse_velocities(5.0, 4.0, 6.0).unwrap();
        assert!((t - 45.0).abs() < 1e-12);
    }

    #[test]
    fn tilt_vertical_ridge_reported() {
        let err = tilt_from_inverse_velocities(5.0, 4.0, 5.0).unwrap_err();
        assert!(matches!(err, Error::DegenerateOrientation));
    }

    #[test]
    fn tilt_at_1584() {
        let c = CrystalConfig::ppktp_default();
        let t = tilt_angle(&c, 1584.0).unwrap();
        assert!((t - 44.805_008_090_379).abs() < 1e-6, "{t}");
        let swapped = tilt_angle(&c.with_arms_swapped(), 1584.0).unwrap();
        assert!((swapped - (90.0 - t)).abs() < 1e-9);
    }
}
