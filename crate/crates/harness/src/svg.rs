//! Static SVG scatter/curve plots of harness CSV output.

use std::collections::BTreeMap;
use std::fmt::Write;
use std::path::Path;

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct AxesSpec {
    pub x: String,
    /// One series per column (or per column and group value).
    pub y: Vec<String>,
    /// Optional text column splitting rows into separate series.
    pub group: Option<String>,
    /// Series drawn as polylines instead of markers, by column or group name.
    pub lines: Vec<String>,
    pub title: String,
}

impl AxesSpec {
    pub fn new(x: &str, y: &[&str]) -> Self {
        Self {
            x: x.into(),
            y: y.iter().map(|s| s.to_string()).collect(),
            group: None,
            lines: Vec::new(),
            title: String::new(),
        }
    }

    pub fn grouped(mut self, column: &str, lines: &[&str]) -> Self {
        self.group = Some(column.into());
        self.lines = lines.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn with_lines(mut self, lines: &[&str]) -> Self {
        self.lines = lines.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn titled(mut self, title: &str) -> Self {
        self.title = title.into();
        self
    }
}

type Series = BTreeMap<String, Vec<(f64, f64)>>;

fn read_series(csv_path: &Path, axes: &AxesSpec) -> Result<Series> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(csv_path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(io) => HarnessError::io(csv_path, io),
            other => HarnessError::MalformedCsv(format!("{other:?}")),
        })?;
    let headers = reader
        .headers()
        .map_err(|e| HarnessError::MalformedCsv(e.to_string()))?
        .clone();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| HarnessError::MalformedCsv(format!("no column named {name:?}")))
    };
    let x_col = find(&axes.x)?;
    let y_cols: Vec<usize> = axes.y.iter().map(|y| find(y)).collect::<Result<_>>()?;
    let group_col = axes.group.as_deref().map(find).transpose()?;

    let parse = |line: u64, field: &str| -> Result<Option<f64>> {
        if field.is_empty() {
            return Ok(None);
        }
        field
            .parse()
            .map(Some)
            .map_err(|_| HarnessError::MalformedCsv(format!("line {line}: {field:?} is not a number")))
    };
    let mut series = Series::new();
    for record in reader.records() {
        let record = record.map_err(|e| HarnessError::MalformedCsv(e.to_string()))?;
        let line = record.position().map_or(0, |p| p.line());
        let Some(x) = parse(line, &record[x_col])? else {
            continue;
        };
        for (name, &col) in axes.y.iter().zip(&y_cols) {
            let Some(y) = parse(line, &record[col])? else { continue };
            let key = match group_col {
                Some(g) if axes.y.len() == 1 => record[g].to_string(),
                Some(g) => format!("{name}:{}", &record[g]),
                None => name.clone(),
            };
            series.entry(key).or_default().push((x, y));
        }
    }
    if series.values().all(Vec::is_empty) {
        return Err(HarnessError::MalformedCsv(format!(
            "{} has no data rows",
            csv_path.display()
        )));
    }
    Ok(series)
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 60.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];

fn span(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if hi - lo < 1e-12 {
        (lo - 0.5, hi + 0.5)
    } else {
        let pad = 0.03 * (hi - lo);
        (lo - pad, hi + pad)
    }
}

pub fn render_svg(series: &Series, axes: &AxesSpec) -> String {
    let points = || series.values().flatten();
    let (x0, x1) = span(points().map(|p| p.0));
    let (y0, y1) = span(points().map(|p| p.1));
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let (left, right, top, bottom) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(
        s,
        r#"<rect x="{left}" y="{top}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        right - left,
        bottom - top
    );
    for k in 0..=4 {
        let t = k as f64 / 4.0;
        let (xv, yv) = (x0 + t * (x1 - x0), y0 + t * (y1 - y0));
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{xv:.3}</text>"#,
            sx(xv),
            bottom + 16.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{yv:.3}</text>"#,
            left - 6.0,
            sy(yv) + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 16.0,
        escape(&axes.x)
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.1}" text-anchor="middle" transform="rotate(-90 16 {:.1})">{}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        escape(&axes.y.join(", "))
    );
    if !axes.title.is_empty() {
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="30" text-anchor="middle" font-size="14">{}</text>"#,
            WIDTH / 2.0,
            escape(&axes.title)
        );
    }

    for (i, (name, pts)) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let base = name.rsplit(':').next().unwrap_or(name);
        if axes.lines.iter().any(|l| l == base || l == name) {
            let mut sorted = pts.clone();
            sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
            let path: Vec<String> = sorted
                .iter()
                .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
                .collect();
            let _ = writeln!(
                s,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
                path.join(" ")
            );
        } else {
            let _ = writeln!(s, r#"<g fill="{color}" fill-opacity="0.6">"#);
            for &(x, y) in pts {
                let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="1.5"/>"#, sx(x), sy(y));
            }
            let _ = writeln!(s, "</g>");
        }
        let ly = top + 14.0 + 14.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<rect x="{:.1}" y="{:.1}" width="10" height="10" fill="{color}"/><text x="{:.1}" y="{:.1}">{}</text>"#,
            left + 8.0,
            ly - 9.0,
            left + 22.0,
            ly,
            escape(name)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Plots `csv_path` into `out`. Nothing is written if the CSV cannot be read
/// or holds no plottable rows.
pub fn emit_svg_scatter(csv_path: &Path, axes: &AxesSpec, out: &Path) -> Result<()> {
    let series = read_series(csv_path, axes)?;
    std::fs::write(out, render_svg(&series, axes)).map_err(|e| HarnessError::io(out, e))
}
