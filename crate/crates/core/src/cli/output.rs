use std::fmt::Write as _;

use serde_json::{Map, Value};

/// Columnar numeric output of one command.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

/// What to draw: `x` against each `ys` column, or against `ys[0]` split by
/// the distinct values of `group`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotSpec {
    pub title: String,
    pub x: usize,
    pub ys: Vec<usize>,
    pub group: Option<usize>,
}

/// Fixed 17-significant-digit formatting.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn render_csv(table: &Table, meta: &Map<String, Value>) -> String {
    let mut out = String::new();
    let version = meta.get("version").and_then(Value::as_str).unwrap_or("");
    let command = meta.get("command").and_then(Value::as_str).unwrap_or("");
    let _ = writeln!(out, "# geodual {version} {command}");
    let _ = writeln!(out, "# meta: {}", Value::Object(meta.clone()));
    out.push_str(&table.columns.join(","));
    out.push('\n');
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(|&v| format_float(v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn render_json(table: &Table, meta: &Map<String, Value>) -> String {
    let mut out = String::from("{\"meta\":");
    out.push_str(&Value::Object(meta.clone()).to_string());
    out.push_str(",\"columns\":");
    out.push_str(&Value::from(table.columns.clone()).to_string());
    out.push_str(",\"rows\":[");
    for (i, row) in table.rows.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str("\n[");
        let cells: Vec<String> = row
            .iter()
            .map(|&v| if v.is_finite() { format_float(v) } else { "null".into() })
            .collect();
        out.push_str(&cells.join(","));
        out.push(']');
    }
    out.push_str("\n]}\n");
    out
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 60.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

pub fn render_svg(table: &Table, plot: &PlotSpec) -> String {
    let mut series: Vec<(String, Vec<(f64, f64)>)> = Vec::new();
    match plot.group {
        Some(g) => {
            let y = plot.ys[0];
            for row in &table.rows {
                let label = format!("{} = {}", table.columns[g], row[g]);
                match series.last_mut() {
                    Some((l, pts)) if *l == label => pts.push((row[plot.x], row[y])),
                    _ => series.push((label, vec![(row[plot.x], row[y])])),
                }
            }
        }
        None => {
            for &y in &plot.ys {
                let pts = table.rows.iter().map(|r| (r[plot.x], r[y])).collect();
                series.push((table.columns[y].clone(), pts));
            }
        }
    }
    let finite = |p: &&(f64, f64)| p.0.is_finite() && p.1.is_finite();
    let all: Vec<(f64, f64)> = series.iter().flat_map(|(_, p)| p.iter().filter(finite).copied()).collect();
    let (mut x0, mut x1, mut y0, mut y1) = all.iter().fold(
        (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY),
        |(a, b, c, d), &(x, y)| (a.min(x), b.max(x), c.min(y), d.max(y)),
    );
    if !(x1 > x0) {
        (x0, x1) = if x0.is_finite() { (x0 - 0.5, x0 + 0.5) } else { (0.0, 1.0) };
    }
    if !(y1 > y0) {
        (y0, y1) = if y0.is_finite() { (y0 - 0.5, y0 + 0.5) } else { (0.0, 1.0) };
    }
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" width=\"{WIDTH}\" height=\"{HEIGHT}\">"
    );
    let _ = writeln!(out, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"30\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">{}</text>",
        WIDTH / 2.0,
        escape(&plot.title)
    );
    let (left, right, top, bottom) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(
        out,
        "<path d=\"M{left} {top} L{left} {bottom} L{right} {bottom}\" fill=\"none\" stroke=\"black\"/>"
    );
    let label = |out: &mut String, x: f64, y: f64, anchor: &str, text: String| {
        let _ = writeln!(
            out,
            "<text x=\"{x:.2}\" y=\"{y:.2}\" text-anchor=\"{anchor}\" font-family=\"sans-serif\" font-size=\"12\">{}</text>",
            escape(&text)
        );
    };
    label(&mut out, left, bottom + 20.0, "middle", format!("{x0:.4e}"));
    label(&mut out, right, bottom + 20.0, "middle", format!("{x1:.4e}"));
    label(&mut out, left - 5.0, bottom, "end", format!("{y0:.3e}"));
    label(&mut out, left - 5.0, top + 4.0, "end", format!("{y1:.3e}"));
    label(&mut out, WIDTH / 2.0, HEIGHT - 15.0, "middle", table.columns[plot.x].clone());

    for (i, (name, pts)) in series.iter().enumerate() {
        let colour = PALETTE[i % PALETTE.len()];
        let coords: Vec<String> = pts
            .iter()
            .filter(finite)
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        let _ = writeln!(
            out,
            "<polyline fill=\"none\" stroke=\"{colour}\" stroke-width=\"1.5\" points=\"{}\"/>",
            coords.join(" ")
        );
        label(&mut out, right - 10.0, top + 18.0 * (i as f64 + 1.0), "end", name.clone());
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        let mut t = Table::new(&["ell", "x", "y"]);
        for ell in 0..3 {
            for i in 0..4 {
                t.push(vec![ell as f64, i as f64, (i * ell) as f64]);
            }
        }
        t
    }

    #[test]
    fn floats_have_seventeen_digits() {
        assert_eq!(format_float(0.1), "1.0000000000000001e-1");
        assert_eq!(format_float(-2.0), "-2.0000000000000000e0");
    }

    #[test]
    fn csv_layout() {
        let mut meta = Map::new();
        meta.insert("version".into(), "1.0".into());
        meta.insert("command".into(), "p2g".into());
        let csv = render_csv(&sample(), &meta);
        let lines: Vec<&str> = csv.lines().collect();
        assert!(lines[0].starts_with('#') && lines[1].starts_with("# meta: {"));
        assert_eq!(lines[2], "ell,x,y");
        assert_eq!(lines.len(), 3 + 12);
        assert!(!csv.contains('\r'));
    }

    #[test]
    fn json_parses_back() {
        let json = render_json(&sample(), &Map::new());
        let v: Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["rows"].as_array().unwrap().len(), 12);
        assert_eq!(v["rows"][11][2].as_f64(), Some(6.0));
    }

    #[test]
    fn svg_has_one_polyline_per_group() {
        let plot = PlotSpec {
            title: "t".into(),
            x: 1,
            ys: vec![2],
            group: Some(0),
        };
        let svg = render_svg(&sample(), &plot);
        assert_eq!(svg.matches("<polyline").count(), 3);
        assert!(svg.contains("viewBox=\"0 0 800 600\""));
    }
}
