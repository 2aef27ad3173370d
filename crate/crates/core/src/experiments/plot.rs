//! Deterministic standalone SVG line/scatter plots of CSV columns.

use std::fmt::Write as _;
use std::path::Path;

use super::table::Table;
use crate::Result;

/// What to draw from a CSV table.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotSpec {
    pub x: String,
    pub y: Vec<String>,
    /// Split rows into one series per distinct value of this column.
    pub group_by: Option<String>,
    /// Dashed horizontal lines `(y, label)`.
    pub reference_lines: Vec<(f64, String)>,
    pub title: String,
    pub log_x: bool,
    pub log_y: bool,
    pub markers: bool,
}

impl PlotSpec {
    pub fn new(x: &str, y: &[&str]) -> Self {
        PlotSpec {
            x: x.to_string(),
            y: y.iter().map(|s| s.to_string()).collect(),
            group_by: None,
            reference_lines: Vec::new(),
            title: String::new(),
            log_x: false,
            log_y: false,
            markers: true,
        }
    }
}

const W: f64 = 640.0;
const H: f64 = 420.0;
const ML: f64 = 70.0;
const MR: f64 = 150.0;
const MT: f64 = 40.0;
const MB: f64 = 50.0;
const COLORS: [&str; 8] =
    ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"];

struct Series {
    label: String,
    pts: Vec<(f64, f64)>,
}

/// Reads `csv_path`, renders `spec` and writes the SVG to `svg_path`.
/// Returns warnings (e.g. an empty table, which yields axes only).
pub fn emit_plot(csv_path: &Path, spec: &PlotSpec, svg_path: &Path) -> Result<Vec<String>> {
    let table = Table::read(std::fs::File::open(csv_path)?)?;
    let (svg, warnings) = render_svg(&table, spec)?;
    std::fs::write(svg_path, svg)?;
    Ok(warnings)
}

/// SVG text for `spec` over `table`; missing columns are errors naming the
/// column.
pub fn render_svg(table: &Table, spec: &PlotSpec) -> Result<(String, Vec<String>)> {
    let mut warnings = Vec::new();
    let mut series = Vec::new();
    if table.header.is_empty() || table.rows.is_empty() {
        warnings.push("empty table: drawing axes only".to_string());
    }
    if !table.header.is_empty() {
        let xs = table.numeric(&spec.x)?;
        let groups: Vec<String> = match &spec.group_by {
            Some(col) => {
                let i = table.column_index(col)?;
                table.rows.iter().map(|r| r.get(i).cloned().unwrap_or_default()).collect()
            }
            None => vec![String::new(); table.rows.len()],
        };
        let mut order: Vec<String> = Vec::new();
        for gname in &groups {
            if !order.contains(gname) {
                order.push(gname.clone());
            }
        }
        for ycol in &spec.y {
            let ys = table.numeric(ycol)?;
            for gname in &order {
                let mut pts: Vec<(f64, f64)> = xs
                    .iter()
                    .zip(&ys)
                    .zip(&groups)
                    .filter(|(_, g)| *g == gname)
                    .map(|((&x, &y), _)| (x, y))
                    .filter(|&(x, y)| {
                        x.is_finite() && y.is_finite() && (!spec.log_x || x > 0.0) && (!spec.log_y || y > 0.0)
                    })
                    .collect();
                pts.sort_by(|a, b| a.0.total_cmp(&b.0));
                let label = match &spec.group_by {
                    Some(col) => format!("{ycol} ({col}={gname})"),
                    None => ycol.clone(),
                };
                series.push(Series { label, pts });
            }
        }
    }
    let tx = |v: f64| if spec.log_x { v.log10() } else { v };
    let ty = |v: f64| if spec.log_y { v.log10() } else { v };
    let mut xr = Range::new();
    let mut yr = Range::new();
    for s in &series {
        for &(x, y) in &s.pts {
            xr.add(tx(x));
            yr.add(ty(y));
        }
    }
    for (y, _) in &spec.reference_lines {
        if !spec.log_y || *y > 0.0 {
            yr.add(ty(*y));
        }
    }
    let (x0, x1) = xr.finish();
    let (y0, y1) = yr.finish();
    let px = |v: f64| ML + (tx(v) - x0) / (x1 - x0) * (W - ML - MR);
    let py = |v: f64| H - MB - (ty(v) - y0) / (y1 - y0) * (H - MT - MB);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#, (ML + W - MR) / 2.0, esc(&spec.title));
    let (left, right, top, bottom) = (ML, W - MR, MT, H - MB);
    let _ = writeln!(s, r#"<rect x="{left}" y="{top}" width="{}" height="{}" fill="none" stroke="black"/>"#, right - left, bottom - top);
    for t in ticks(x0, x1) {
        let x = ML + (t - x0) / (x1 - x0) * (right - left);
        let label = if spec.log_x { format!("1e{}", fmt_tick(t)) } else { fmt_tick(t) };
        let _ = writeln!(s, r#"<line x1="{x:.2}" y1="{bottom}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#, bottom + 5.0);
        let _ = writeln!(s, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{label}</text>"#, bottom + 18.0);
    }
    for t in ticks(y0, y1) {
        let y = bottom - (t - y0) / (y1 - y0) * (bottom - top);
        let label = if spec.log_y { format!("1e{}", fmt_tick(t)) } else { fmt_tick(t) };
        let _ = writeln!(s, r#"<line x1="{:.2}" y1="{y:.2}" x2="{left}" y2="{y:.2}" stroke="black"/>"#, left - 5.0);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{label}</text>"#, left - 8.0, y + 4.0);
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, (left + right) / 2.0, H - 12.0, esc(&spec.x));
    let _ = writeln!(
        s,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#,
        (top + bottom) / 2.0,
        (top + bottom) / 2.0,
        esc(&spec.y.join(", "))
    );
    for (i, (y, label)) in spec.reference_lines.iter().enumerate() {
        if spec.log_y && *y <= 0.0 {
            continue;
        }
        let c = COLORS[i % COLORS.len()];
        let yy = py(*y);
        let _ = writeln!(s, r#"<line x1="{left}" y1="{yy:.2}" x2="{right}" y2="{yy:.2}" stroke="{c}" stroke-dasharray="6 4"/>"#);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" fill="{c}">{}</text>"#, right + 6.0, yy + 4.0, esc(label));
    }
    for (i, ser) in series.iter().enumerate() {
        let c = COLORS[i % COLORS.len()];
        if ser.pts.len() > 1 {
            let path: Vec<String> = ser.pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y))).collect();
            let _ = writeln!(s, r#"<polyline fill="none" stroke="{c}" stroke-width="1.5" points="{}"/>"#, path.join(" "));
        }
        if spec.markers {
            for &(x, y) in &ser.pts {
                let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{c}"/>"#, px(x), py(y));
            }
        }
        let ly = top + 16.0 * (i as f64 + 1.0) + 16.0 * spec.reference_lines.len() as f64;
        let _ = writeln!(s, r#"<text x="{:.2}" y="{ly:.2}" fill="{c}">{}</text>"#, right + 6.0, esc(&ser.label));
    }
    s.push_str("</svg>\n");
    Ok((s, warnings))
}

struct Range {
    lo: f64,
    hi: f64,
}

impl Range {
    fn new() -> Self {
        Range { lo: f64::INFINITY, hi: f64::NEG_INFINITY }
    }

    fn add(&mut self, v: f64) {
        self.lo = self.lo.min(v);
        self.hi = self.hi.max(v);
    }

    fn finish(&self) -> (f64, f64) {
        if !self.lo.is_finite() {
            return (0.0, 1.0);
        }
        if self.hi - self.lo < 1e-12 * self.lo.abs().max(1.0) {
            return (self.lo - 0.5, self.hi + 0.5);
        }
        let pad = 0.05 * (self.hi - self.lo);
        (self.lo - pad, self.hi + pad)
    }
}

fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let raw = (hi - lo) / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * mag).find(|s| *s >= raw).unwrap_or(10.0 * mag);
    let mut t = (lo / step).ceil() * step;
    let mut out = Vec::new();
    while t <= hi + 1e-9 * step {
        out.push(if t.abs() < 1e-12 * step { 0.0 } else { t });
        t += step;
    }
    out
}

fn fmt_tick(v: f64) -> String {
    let s = format!("{:.6}", v);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
