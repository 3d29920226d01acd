//! Spectral purity of photon pairs from group-velocity-matched SPDC in
//! periodically poled crystals.
//!
//! The pipeline runs from material dispersion ([`dispersion`]) through the
//! joint spectral amplitude on a grid ([`jsa`]) to Schmidt purities
//! ([`schmidt`]). [`instrument`] models bandpass-filter scanning and measured
//! coincidence grids; [`scan`] holds pump-bandwidth optimization and
//! wavelength sweeps.

// `!(x > 0.0)` is used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dispersion;
pub mod error;
pub mod grid;
pub mod instrument;
pub mod io;
pub mod jsa;
pub mod scan;
pub mod schmidt;
pub mod units;

pub use dispersion::{
    solve_poling_period, tilt_angle, CrystalAxis, CrystalConfig, GratingOrientation, PolingSolution,
    SellmeierCoefficients, SellmeierForm,
};
pub use error::{Error, ErrorCategory, Result};
pub use grid::{AxisDomain, GridSpec, SpectralGrid, UniformAxis};
pub use instrument::{
    analyze_measured, convolve_jsi, fwhm, marginal, quadrature_fwhm, simulate_scan, Arm, FilterSpec,
    MeasuredGrid, MeasuredReport, ScanPlan,
};
pub use jsa::{build_jsa, build_jsi, JointSpectrum, PumpSpec, SpectrumKind};
pub use scan::{optimize_pump_bandwidth, wavelength_sweep, Objective, PolingMode, SweepRow, SweepSpec};
pub use schmidt::{decompose, purity_oracle, SchmidtResult};
