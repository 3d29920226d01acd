//! Property checks on purity, filtering and widths.

use nalgebra::DMatrix;
use proptest::prelude::*;
use spdc_core::grid::SpectralGrid;
use spdc_core::*;

fn freq_grid(n: usize) -> SpectralGrid {
    SpectralGrid::frequency(1584.0, 1584.0, 6.0, n).unwrap()
}

fn spectrum(values: DMatrix<f64>, kind: SpectrumKind) -> JointSpectrum {
    let n = values.nrows();
    JointSpectrum::new(freq_grid(n), values, kind).unwrap().normalize().unwrap()
}

fn matrix(n: usize) -> impl Strategy<Value = DMatrix<f64>> {
    proptest::collection::vec(0.01f64..1.0, n * n).prop_map(move |v| DMatrix::from_vec(n, n, v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn purity_ignores_scale_and_transpose(m in matrix(20), k in 1e-3f64..1e3) {
        let a = decompose(&spectrum(m.clone(), SpectrumKind::Intensity)).unwrap();
        let b = decompose(&spectrum(m.transpose() * k, SpectrumKind::Intensity)).unwrap();
        prop_assert!((a.purity - b.purity).abs() < 1e-10);
        prop_assert!(a.purity > 0.0 && a.purity <= 1.0 + 1e-12);
        let norm: f64 = a.coefficients.iter().map(|c| c * c).sum();
        prop_assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn oracle_agrees_with_svd(m in matrix(16)) {
        let s = spectrum(m, SpectrumKind::Amplitude);
        let p = decompose(&s).unwrap().purity;
        prop_assert!((p - purity_oracle(&s).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn quadrature_is_symmetric_and_dominates(a in 0.01f64..10.0, b in 0.01f64..10.0, c in 0.01f64..10.0) {
        prop_assert_eq!(quadrature_fwhm(a, b), quadrature_fwhm(b, a));
        prop_assert!(quadrature_fwhm(a, b) >= a.max(b));
        if c > b {
            prop_assert!(quadrature_fwhm(a, c) > quadrature_fwhm(a, b));
        }
    }

    #[test]
    fn filtering_never_narrows_a_marginal(
        ws in 0.8f64..3.0,
        wi in 0.8f64..3.0,
        shift in -1.0f64..1.0,
        filter in 0.6f64..2.0,
    ) {
        let grid = SpectralGrid::wavelength(1584.0, 1584.0, 8.0, 64).unwrap();
        let g = |x: f64, w: f64| (-0.5 * (x / (w / units::FWHM_PER_SIGMA)).powi(2)).exp();
        let values = DMatrix::from_fn(64, 64, |r, c| {
            g(grid.signal.value(r) - 1584.0 - shift, ws) * g(grid.idler.value(c) - 1584.0, wi)
        });
        let jsi = JointSpectrum::new(grid, values, SpectrumKind::Intensity).unwrap().normalize().unwrap();
        let f = FilterSpec::gaussian(1584.0, filter);
        let conv = convolve_jsi(&jsi, &f, &f).unwrap();
        for arm in [Arm::Signal, Arm::Idler] {
            let before = marginal(&jsi, arm).fwhm_nm().unwrap();
            let after = marginal(&conv, arm).fwhm_nm().unwrap();
            prop_assert!(after >= before, "{arm:?}: {before} -> {after}");
            // Gaussians add in quadrature up to sampling and edge effects
            prop_assert!((after - quadrature_fwhm(before, filter)).abs() < 0.02 * after);
        }
    }
}
