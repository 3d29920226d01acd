//! Minimal self-contained SVG rendering for spectra and sweeps.

use std::fmt::Write as _;

use spdc_core::{AxisDomain, JointSpectrum, SweepRow};

const MAX_CELLS: usize = 128;
const SIZE: f64 = 480.0;
const MARGIN: f64 = 64.0;

// viridis anchors
const PALETTE: [[f64; 3]; 5] = [
    [68.0, 1.0, 84.0],
    [59.0, 82.0, 139.0],
    [33.0, 145.0, 140.0],
    [94.0, 201.0, 98.0],
    [253.0, 231.0, 37.0],
];

fn color(t: f64) -> String {
    let x = t.clamp(0.0, 1.0) * (PALETTE.len() - 1) as f64;
    let k = (x.floor() as usize).min(PALETTE.len() - 2);
    let f = x - k as f64;
    let c: Vec<u8> = (0..3)
        .map(|j| (PALETTE[k][j] + f * (PALETTE[k + 1][j] - PALETTE[k][j])).round() as u8)
        .collect();
    format!("#{:02x}{:02x}{:02x}", c[0], c[1], c[2])
}

fn header(out: &mut String, width: f64, height: f64, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="{width}" height="{height}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{title}</text>"#,
        width / 2.0
    );
}

/// Sample indices of an axis in increasing wavelength order.
fn by_wavelength(len: usize, domain: AxisDomain) -> Vec<usize> {
    match domain {
        AxisDomain::Wavelength => (0..len).collect(),
        AxisDomain::AngularFrequency => (0..len).rev().collect(),
    }
}

/// Heatmap with signal wavelength on x and idler wavelength on y. Large grids
/// are block-averaged to at most 128 cells per axis.
pub fn heatmap(spectrum: &JointSpectrum, title: &str) -> String {
    let g = &spectrum.grid;
    let rows = by_wavelength(g.signal.len, g.signal.domain);
    let cols = by_wavelength(g.idler.len, g.idler.domain);
    let bs = rows.len().div_ceil(MAX_CELLS);
    let bi = cols.len().div_ceil(MAX_CELLS);
    let (ns, ni) = (rows.len().div_ceil(bs), cols.len().div_ceil(bi));
    let mut cells = vec![0.0; ns * ni];
    for (a, ra) in rows.chunks(bs).enumerate() {
        for (b, cb) in cols.chunks(bi).enumerate() {
            let sum: f64 = ra.iter().flat_map(|&r| cb.iter().map(move |&c| (r, c))).map(|rc| spectrum.values[rc]).sum();
            cells[a * ni + b] = sum / (ra.len() * cb.len()) as f64;
        }
    }
    let max = cells.iter().fold(0.0_f64, |m, &v| m.max(v.abs()));
    let (w, h) = (SIZE + 2.0 * MARGIN, SIZE + 2.0 * MARGIN);
    let (dx, dy) = (SIZE / ns as f64, SIZE / ni as f64);

    let mut out = String::new();
    header(&mut out, w, h, title);
    let _ = writeln!(
        out,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{SIZE}" height="{SIZE}" fill="{}"/>"#,
        color(0.0)
    );
    for a in 0..ns {
        for b in 0..ni {
            let t = if max > 0.0 { cells[a * ni + b].abs() / max } else { 0.0 };
            if t < 1e-3 {
                continue;
            }
            let _ = writeln!(
                out,
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
                MARGIN + a as f64 * dx,
                MARGIN + SIZE - (b + 1) as f64 * dy,
                dx + 0.05,
                dy + 0.05,
                color(t)
            );
        }
    }
    let ls = [g.signal.wavelength_nm(rows[0]), g.signal.wavelength_nm(*rows.last().unwrap())];
    let li = [g.idler.wavelength_nm(cols[0]), g.idler.wavelength_nm(*cols.last().unwrap())];
    for frac in [0.0, 0.5, 1.0] {
        let x = MARGIN + frac * SIZE;
        let y = MARGIN + SIZE - frac * SIZE;
        let _ = writeln!(
            out,
            r#"<text x="{x:.1}" y="{:.1}" text-anchor="middle">{:.2}</text>"#,
            MARGIN + SIZE + 18.0,
            ls[0] + frac * (ls[1] - ls[0])
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{y:.1}" text-anchor="end" dominant-baseline="middle">{:.2}</text>"#,
            MARGIN - 6.0,
            li[0] + frac * (li[1] - li[0])
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">signal wavelength (nm)</text>"#,
        MARGIN + SIZE / 2.0,
        h - 12.0
    );
    let _ = writeln!(
        out,
        r#"<text transform="translate(16 {}) rotate(-90)" text-anchor="middle">idler wavelength (nm)</text>"#,
        MARGIN + SIZE / 2.0
    );
    out.push_str("</svg>\n");
    out
}

/// Purity against wavelength, both objectives on one axis.
pub fn sweep_chart(rows: &[SweepRow], title: &str) -> String {
    let (w, h) = (SIZE * 1.5 + 2.0 * MARGIN, SIZE + 2.0 * MARGIN);
    let (pw, ph) = (SIZE * 1.5, SIZE);
    let mut out = String::new();
    header(&mut out, w, h, title);
    if rows.is_empty() {
        out.push_str("</svg>\n");
        return out;
    }
    let x0 = rows.first().unwrap().lambda_nm;
    let x1 = rows.last().unwrap().lambda_nm.max(x0 + 1.0);
    let lo = rows.iter().map(|r| r.p_jsi.min(r.p_jsa)).fold(f64::INFINITY, f64::min);
    let hi = rows.iter().map(|r| r.p_jsi.max(r.p_jsa)).fold(f64::NEG_INFINITY, f64::max);
    let y0 = (lo * 50.0).floor() / 50.0;
    let y1 = ((hi * 50.0).ceil() / 50.0).max(y0 + 0.02);
    let px = |x: f64| MARGIN + (x - x0) / (x1 - x0) * pw;
    let py = |y: f64| MARGIN + ph - (y - y0) / (y1 - y0) * ph;

    let _ = writeln!(
        out,
        r##"<rect x="{MARGIN}" y="{MARGIN}" width="{pw}" height="{ph}" fill="none" stroke="#444"/>"##
    );
    for k in 0..=4 {
        let y = y0 + (y1 - y0) * k as f64 / 4.0;
        let _ = writeln!(
            out,
            r##"<line x1="{MARGIN}" x2="{:.1}" y1="{:.1}" y2="{:.1}" stroke="#ddd"/><text x="{:.1}" y="{:.1}" text-anchor="end" dominant-baseline="middle">{y:.3}</text>"##,
            MARGIN + pw,
            py(y),
            py(y),
            MARGIN - 6.0,
            py(y)
        );
        let x = x0 + (x1 - x0) * k as f64 / 4.0;
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{x:.0}</text>"#,
            px(x),
            MARGIN + ph + 18.0
        );
    }
    for (name, colour, pick) in [
        ("P_JSI", "#1f77b4", (|r: &SweepRow| r.p_jsi) as fn(&SweepRow) -> f64),
        ("P_JSA", "#d62728", |r: &SweepRow| r.p_jsa),
    ] {
        let pts: Vec<String> = rows
            .iter()
            .map(|r| format!("{:.2},{:.2}", px(r.lambda_nm), py(pick(r))))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="{colour}" stroke-width="2"/>"#,
            pts.join(" ")
        );
        let ly = if name == "P_JSI" { MARGIN + 16.0 } else { MARGIN + 32.0 };
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{ly:.1}" fill="{colour}" text-anchor="end">{name}</text>"#,
            MARGIN + pw - 8.0
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">degenerate wavelength (nm)</text>"#,
        MARGIN + pw / 2.0,
        h - 12.0
    );
    let _ = writeln!(
        out,
        r#"<text transform="translate(16 {}) rotate(-90)" text-anchor="middle">purity</text>"#,
        MARGIN + ph / 2.0
    );
    out.push_str("</svg>\n");
    out
}
