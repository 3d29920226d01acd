use std::path::Path;

use serde::Serialize;
use spdc_core::dispersion::tilt_angle;
use spdc_core::instrument::{ComparisonReport, MeasurementMeta, REFERENCE_FILTER_FWHM_NM};
use spdc_core::io::write_atomic;
use spdc_core::scan::{filtered_point, model_jsa, optimize_pump_for_crystal, sweep_csv, OptimizedPump};
use spdc_core::{
    analyze_measured, convolve_jsi, decompose, marginal, simulate_scan, solve_poling_period, wavelength_sweep,
    Arm, AxisDomain, CrystalConfig, Error, FilterSpec, GratingOrientation, GridSpec, JointSpectrum, MeasuredGrid,
    MeasuredReport, Objective, PolingMode, Result, ScanPlan, SchmidtResult, SpectrumKind, SweepSpec,
};

use crate::config::Config;
use crate::svg;
use crate::{
    AnalyzeArgs, Command, ConvolveArgs, DefaultConfigArgs, ModelArgs, OptimizeArgs, SimulateArgs, SweepArgs,
    SynthesizeArgs,
};

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Simulate(a) => simulate(a),
        Command::Optimize(a) => optimize(a),
        Command::Sweep(a) => sweep(a),
        Command::Convolve(a) => convolve(a),
        Command::Analyze(a) => analyze(a),
        Command::Synthesize(a) => synthesize(a),
        Command::DefaultConfig(a) => default_config(a),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

/// Writes to `path` when given, otherwise to stdout.
fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => write_atomic(p, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn grid_spec(base: &GridSpec, points: Option<usize>, span_widths: Option<f64>) -> GridSpec {
    GridSpec {
        points: points.unwrap_or(base.points),
        span_widths: span_widths.unwrap_or(base.span_widths),
    }
}

/// Everything a single-wavelength command needs from config plus flags.
struct Model {
    cfg: Config,
    lambda0_nm: f64,
    crystal: CrystalConfig,
    grid: GridSpec,
}

impl Model {
    fn resolve(args: &ModelArgs) -> Result<Self> {
        let cfg = Config::load(args.config.as_deref())?;
        let lambda0_nm = args.lambda0.unwrap_or_else(|| cfg.lambda0_nm());
        if !(lambda0_nm > 0.0 && lambda0_nm.is_finite()) {
            return Err(Error::InvalidParameter(format!("lambda0 must be > 0, got {lambda0_nm} nm")));
        }
        let crystal = if args.keep_poling {
            cfg.crystal.clone()
        } else {
            let at = args.poling_at.unwrap_or(lambda0_nm);
            cfg.crystal.with_poling(solve_poling_period(&cfg.crystal, at)?)
        };
        let grid = grid_spec(&cfg.grid, args.grid, args.span_widths);
        Ok(Self {
            cfg,
            lambda0_nm,
            crystal,
            grid,
        })
    }
}

fn parse_kind(kind: &str) -> Result<SpectrumKind> {
    match kind.to_ascii_lowercase().as_str() {
        "jsa" | "amplitude" => Ok(SpectrumKind::Amplitude),
        "jsi" | "intensity" => Ok(SpectrumKind::Intensity),
        _ => Err(Error::InvalidParameter(format!("unknown spectrum kind `{kind}` (jsa | jsi)"))),
    }
}

/// Schmidt decomposition, resampling wavelength grids onto frequency first.
fn schmidt_of(spectrum: &JointSpectrum) -> Result<SchmidtResult> {
    match spectrum.grid.domain() {
        AxisDomain::AngularFrequency => decompose(spectrum),
        AxisDomain::Wavelength => decompose(&spectrum.resample_to_frequency()?),
    }
}

#[derive(Serialize)]
struct SimulateSummary {
    lambda0_nm: f64,
    sigma_rad_per_ps: f64,
    poling_period_um: f64,
    grating: GratingOrientation,
    tilt_deg: f64,
    kind: SpectrumKind,
    purity: f64,
    schmidt_number: f64,
    grid: GridSpec,
    #[serde(skip_serializing_if = "Option::is_none")]
    optimization: Option<OptimizedPump>,
}

fn simulate(a: SimulateArgs) -> Result<()> {
    let m = Model::resolve(&a.model)?;
    let optimization = match a.optimize {
        Some(obj) => Some(optimize_pump_for_crystal(&m.crystal, m.lambda0_nm, obj, &m.grid)?),
        None => None,
    };
    let sigma = match (&optimization, a.sigma) {
        (Some(o), _) => o.sigma_rad_per_ps,
        (None, Some(s)) => s,
        (None, None) => m.cfg.pump.sigma_rad_per_ps,
    };
    let kind = match (&a.kind, a.optimize) {
        (Some(k), _) => parse_kind(k)?,
        (None, Some(Objective::PJsa)) => SpectrumKind::Amplitude,
        (None, _) => SpectrumKind::Intensity,
    };
    let jsa = model_jsa(&m.crystal, m.lambda0_nm, sigma, &m.grid)?;
    let spectrum = match kind {
        SpectrumKind::Amplitude => jsa,
        SpectrumKind::Intensity => jsa.intensity(),
    };
    let schmidt = decompose(&spectrum)?;
    if let Some(p) = &a.out {
        spectrum.write_csv(p)?;
    }
    if let Some(p) = &a.schmidt {
        write_atomic(p, schmidt.to_json().as_bytes())?;
    }
    if let Some(p) = &a.svg {
        let title = format!("{} at {} nm, sigma {:.4} rad/ps", kind_label(kind), m.lambda0_nm, sigma);
        write_atomic(p, svg::heatmap(&spectrum, &title).as_bytes())?;
    }
    let summary = SimulateSummary {
        lambda0_nm: m.lambda0_nm,
        sigma_rad_per_ps: sigma,
        poling_period_um: m.crystal.poling_period_um,
        grating: m.crystal.grating,
        tilt_deg: tilt_angle(&m.crystal, m.lambda0_nm)?,
        kind,
        purity: schmidt.purity,
        schmidt_number: schmidt.schmidt_number,
        grid: m.grid,
        optimization,
    };
    print!("{}", to_json(&summary));
    Ok(())
}

fn kind_label(kind: SpectrumKind) -> &'static str {
    match kind {
        SpectrumKind::Amplitude => "JSA",
        SpectrumKind::Intensity => "JSI",
    }
}

fn optimize(a: OptimizeArgs) -> Result<()> {
    let m = Model::resolve(&a.model)?;
    let opt = optimize_pump_for_crystal(&m.crystal, m.lambda0_nm, a.objective, &m.grid)?;
    let text = to_json(&opt);
    if let Some(p) = &a.out {
        write_atomic(p, text.as_bytes())?;
    }
    print!("{text}");
    Ok(())
}

fn sweep(a: SweepArgs) -> Result<()> {
    let cfg = Config::load(a.config.as_deref())?;
    let grid = grid_spec(&cfg.grid, a.grid, a.span_widths);
    let poling = if a.resolve_poling {
        PolingMode::Resolved
    } else {
        PolingMode::Fixed {
            reference_nm: a.reference,
        }
    };
    let spec = SweepSpec {
        from_nm: a.from,
        to_nm: a.to,
        step_nm: a.step,
        poling,
    };
    spec.wavelengths()?;
    let design = cfg.crystal.with_poling(solve_poling_period(&cfg.crystal, a.reference)?);
    let sigma = |given: Option<f64>, obj: Objective| -> Result<f64> {
        match given {
            Some(s) => Ok(s),
            None => Ok(optimize_pump_for_crystal(&design, a.reference, obj, &grid)?.sigma_rad_per_ps),
        }
    };
    let sigma_jsa = sigma(a.sigma_jsa, Objective::PJsa)?;
    let sigma_jsi = sigma(a.sigma_jsi, Objective::PJsi)?;
    eprintln!("pump bandwidth: sigma(P_JSA) = {sigma_jsa:.6} rad/ps, sigma(P_JSI) = {sigma_jsi:.6} rad/ps");
    let rows = wavelength_sweep(&cfg.crystal, &spec, sigma_jsa, sigma_jsi, &grid)?;
    emit(a.out.as_deref(), &sweep_csv(&rows))?;
    if let Some(p) = &a.svg {
        let mode = if a.resolve_poling { "period re-solved per wavelength" } else { "fixed period" };
        let title = format!("Purity vs wavelength ({mode})");
        write_atomic(p, svg::sweep_chart(&rows, &title).as_bytes())?;
    }
    Ok(())
}

#[derive(Serialize)]
struct ConvolveSummary {
    filter_fwhm_nm: [f64; 2],
    p_jsi: f64,
    p_jsi_convolved: f64,
    fwhm_nm: [f64; 2],
    fwhm_convolved_nm: [f64; 2],
}

fn widths(s: &JointSpectrum) -> Result<[f64; 2]> {
    Ok([marginal(s, Arm::Signal).fwhm_nm()?, marginal(s, Arm::Idler).fwhm_nm()?])
}

fn convolve(a: ConvolveArgs) -> Result<()> {
    let kind = if a.amplitude { SpectrumKind::Amplitude } else { SpectrumKind::Intensity };
    let input = JointSpectrum::read_csv(&a.input, kind)?.normalize()?;
    let jsi = input.intensity();
    let g = &jsi.grid;
    let fs = FilterSpec::gaussian(g.signal.wavelength_nm(g.signal.len / 2), a.filter_fwhm);
    let fi = FilterSpec::gaussian(
        g.idler.wavelength_nm(g.idler.len / 2),
        a.idler_filter_fwhm.unwrap_or(a.filter_fwhm),
    );
    let conv = convolve_jsi(&jsi, &fs, &fi)?;
    let schmidt = schmidt_of(&conv)?;
    if let Some(p) = &a.out {
        conv.write_csv(p)?;
    }
    if let Some(p) = &a.schmidt {
        write_atomic(p, schmidt.to_json().as_bytes())?;
    }
    if let Some(p) = &a.svg {
        let title = format!("JSI through {:.2}/{:.2} nm filters", fs.fwhm_nm, fi.fwhm_nm);
        write_atomic(p, svg::heatmap(&conv, &title).as_bytes())?;
    }
    let summary = ConvolveSummary {
        filter_fwhm_nm: [fs.fwhm_nm, fi.fwhm_nm],
        p_jsi: schmidt_of(&jsi)?.purity,
        p_jsi_convolved: schmidt.purity,
        fwhm_nm: widths(&jsi)?,
        fwhm_convolved_nm: widths(&conv)?,
    };
    print!("{}", to_json(&summary));
    Ok(())
}

#[derive(Serialize)]
struct AnalyzeOutput {
    measured: MeasuredReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    comparison: Option<ComparisonReport>,
}

fn analyze(a: AnalyzeArgs) -> Result<()> {
    let measured = MeasuredGrid::read(&a.counts, &a.meta)?;
    let report = analyze_measured(&measured)?;
    let comparison = match a.compare_at {
        None => None,
        Some(l) => {
            let cfg = Config::load(a.config.as_deref())?;
            let crystal = cfg
                .crystal
                .with_poling(solve_poling_period(&cfg.crystal, a.poling_at.unwrap_or(l))?);
            let filter = filter_fwhm(&measured.meta);
            let sigma = a.sigma.unwrap_or(cfg.pump.sigma_rad_per_ps);
            let model = filtered_point(&crystal, l, sigma, filter, &cfg.grid)?;
            let mut c = ComparisonReport::default();
            c.push(l, model.p_jsi, model.p_jsi_convolved, model.fwhm_nm, filter, &report);
            Some(c)
        }
    };
    let text = to_json(&AnalyzeOutput {
        measured: report,
        comparison,
    });
    if let Some(p) = &a.out {
        write_atomic(p, text.as_bytes())?;
    }
    print!("{text}");
    Ok(())
}

/// Mean filter width recorded with the measurement, or the reference width.
fn filter_fwhm(meta: &MeasurementMeta) -> f64 {
    if meta.filters.is_empty() {
        REFERENCE_FILTER_FWHM_NM
    } else {
        meta.filters.iter().map(|f| f.fwhm_nm).sum::<f64>() / meta.filters.len() as f64
    }
}

fn synthesize(a: SynthesizeArgs) -> Result<()> {
    let m = Model::resolve(&a.model)?;
    let plan = ScanPlan {
        points: a.points,
        step_nm: a.step_nm,
        filter_fwhm_nm: a.filter_fwhm,
        dwell_s: a.dwell,
        peak_counts: a.peak_counts,
        background_fraction: a.background,
    };
    let sigma = a.sigma.unwrap_or(m.cfg.pump.sigma_rad_per_ps);
    let grid = simulate_scan(&m.crystal, m.lambda0_nm, sigma, &plan)?;
    grid.write(&a.out, &a.meta)
}

fn default_config(a: DefaultConfigArgs) -> Result<()> {
    emit(a.out.as_deref(), &to_json(&Config::default()))
}
