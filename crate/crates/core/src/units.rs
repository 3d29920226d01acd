//! Unit conventions.
//!
//! Wavelengths are vacuum nanometres at the API surface and micrometres inside
//! the dispersion code. Angular frequencies are in rad/ps, wavevectors in
//! rad/um and lengths of crystals in mm.

use std::f64::consts::PI;

/// Speed of light in vacuum, exact, in um/ps.
pub const SPEED_OF_LIGHT_UM_PER_PS: f64 = 299.792_458;

/// Speed of light in vacuum, exact, in nm/ps.
pub const SPEED_OF_LIGHT_NM_PER_PS: f64 = 299_792.458;

/// Vacuum wavelength (nm) to angular frequency (rad/ps).
pub fn nm_to_omega(wavelength_nm: f64) -> f64 {
    2.0 * PI * SPEED_OF_LIGHT_NM_PER_PS / wavelength_nm
}

/// Angular frequency (rad/ps) to vacuum wavelength (nm).
pub fn omega_to_nm(omega: f64) -> f64 {
    2.0 * PI * SPEED_OF_LIGHT_NM_PER_PS / omega
}

/// Converts a small wavelength interval around `center_nm` into the matching
/// angular-frequency interval (first order).
pub fn nm_width_to_omega(width_nm: f64, center_nm: f64) -> f64 {
    2.0 * PI * SPEED_OF_LIGHT_NM_PER_PS * width_nm / (center_nm * center_nm)
}

/// FWHM of a Gaussian in units of its standard deviation, 2*sqrt(2 ln 2).
pub const FWHM_PER_SIGMA: f64 = 2.354_820_045_030_949_3;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_round_trip() {
        let w = nm_to_omega(1584.0);
        assert!((omega_to_nm(w) - 1584.0).abs() < 1e-9);
        // 1584 nm ~ 1.19 rad/fs
        assert!((w - 1189.2).abs() < 0.1);
    }

    #[test]
    fn width_conversion_matches_difference() {
        let dw = nm_width_to_omega(0.01, 1584.0);
        let exact = nm_to_omega(1583.995) - nm_to_omega(1584.005);
        assert!((dw - exact).abs() / exact < 1e-8);
    }

    #[test]
    fn fwhm_constant() {
        assert!((FWHM_PER_SIGMA - 2.0 * (2.0 * 2f64.ln()).sqrt()).abs() < 1e-15);
    }
}
