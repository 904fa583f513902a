//! Line plots of a [`Table`]: axes, polylines, tick labels and a legend.

use std::fmt::Write as _;

use super::output::Table;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 150.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 50.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

fn range(values: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if lo > hi {
        return None;
    }
    if lo == hi {
        let pad = if lo == 0.0 { 1.0 } else { 0.05 * lo.abs() };
        return Some((lo - pad, hi + pad));
    }
    Some((lo, hi))
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn tick(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

pub fn render_svg(experiment: &str, table: &Table) -> Option<String> {
    if table.plot.is_empty() || table.rows.is_empty() {
        return None;
    }
    let xs = table.column(0);
    let (x0, x1) = range(xs.iter().copied())?;
    let (y0, y1) = range(table.plot.iter().flat_map(|&j| table.column(j)))?;
    let pw = WIDTH - MARGIN_L - MARGIN_R;
    let ph = HEIGHT - MARGIN_T - MARGIN_B;
    let sx = |x: f64| MARGIN_L + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| MARGIN_T + (1.0 - (y - y0) / (y1 - y0)) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{} : {}</text>"#,
        MARGIN_L + pw / 2.0,
        escape(experiment),
        escape(&table.title)
    );
    let _ = writeln!(
        s,
        r#"<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    for i in 0..=4 {
        let f = i as f64 / 4.0;
        let (xv, yv) = (x0 + f * (x1 - x0), y0 + f * (y1 - y0));
        let (px, py) = (sx(xv), sy(yv));
        let _ = writeln!(
            s,
            r#"<line x1="{px}" y1="{}" x2="{px}" y2="{}" stroke="black"/>"#,
            MARGIN_T + ph,
            MARGIN_T + ph + 5.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{px}" y="{}" text-anchor="middle">{}</text>"#,
            MARGIN_T + ph + 18.0,
            tick(xv)
        );
        let _ = writeln!(
            s,
            r#"<line x1="{}" y1="{py}" x2="{MARGIN_L}" y2="{py}" stroke="black"/>"#,
            MARGIN_L - 5.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#,
            MARGIN_L - 8.0,
            py + 4.0,
            tick(yv)
        );
    }
    let xc = &table.columns[0];
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">{} [{}]</text>"#,
        MARGIN_L + pw / 2.0,
        HEIGHT - 12.0,
        escape(&xc.name),
        escape(&xc.unit)
    );
    for (n, &j) in table.plot.iter().enumerate() {
        let color = COLORS[n % COLORS.len()];
        // NaN breaks the line into separate segments.
        let mut segments: Vec<Vec<String>> = vec![Vec::new()];
        for row in &table.rows {
            let (x, y) = (row[0], row[j]);
            if x.is_finite() && y.is_finite() {
                segments.last_mut().unwrap().push(format!("{:.2},{:.2}", sx(x), sy(y)));
            } else if !segments.last().unwrap().is_empty() {
                segments.push(Vec::new());
            }
        }
        for seg in segments.iter().filter(|seg| !seg.is_empty()) {
            let _ = writeln!(
                s,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
                seg.join(" ")
            );
        }
        let ly = MARGIN_T + 10.0 + 18.0 * n as f64;
        let lx = MARGIN_L + pw + 10.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#,
            lx + 20.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}">{}</text>"#,
            lx + 26.0,
            ly + 4.0,
            escape(&table.columns[j].name)
        );
    }
    s.push_str("</svg>\n");
    Some(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::output::Column;

    #[test]
    fn draws_one_polyline_per_series() {
        let mut t = Table::new(
            "t",
            "a < b",
            vec![Column::new("x", "1"), Column::new("y", "1"), Column::new("z", "1")],
        )
        .plotted(&[1, 2]);
        for i in 0..5 {
            let x = i as f64;
            t.push(vec![x, x * x, if i == 2 { f64::NAN } else { -x }]);
        }
        let svg = render_svg("demo", &t).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 3);
        assert!(svg.contains("a &lt; b"));
        assert!(render_svg("demo", &Table::new("e", "e", vec![Column::new("x", "1")])).is_none());
    }
}
