//! Minimal SVG line charts.

use std::fmt::Write as _;

const PALETTE: [&str; 8] = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"];

pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

pub struct Chart<'a> {
    pub title: &'a str,
    pub x_label: &'a str,
    pub y_label: &'a str,
    pub log_x: bool,
    pub log_y: bool,
}

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if hi - lo < 1e-300 {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

/// One `<polyline>` per series plus axes, tick labels and a legend.
/// Non-positive values are dropped from log-scaled axes.
pub fn line_chart(chart: &Chart, series: &[Series]) -> String {
    let (w, h) = (640.0, 400.0);
    let (left, right, top, bottom) = (70.0, 150.0, 30.0, 50.0);
    let tx = |v: f64| if chart.log_x { v.log10() } else { v };
    let ty = |v: f64| if chart.log_y { v.log10() } else { v };
    let keep = |&(x, y): &(f64, f64)| (!chart.log_x || x > 0.0) && (!chart.log_y || y > 0.0);
    let all = || series.iter().flat_map(|s| s.points.iter().copied().filter(keep));
    let (x0, x1) = range(all().map(|p| tx(p.0)));
    let (y0, y1) = range(all().map(|p| ty(p.1)));
    let px = |v: f64| left + (tx(v) - x0) / (x1 - x0) * (w - left - right);
    let py = |v: f64| h - bottom - (ty(v) - y0) / (y1 - y0) * (h - top - bottom);

    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\" font-family=\"sans-serif\" font-size=\"11\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n\
         <text x=\"{}\" y=\"18\" text-anchor=\"middle\" font-size=\"13\">{}</text>\n\
         <line x1=\"{left}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n\
         <line x1=\"{left}\" y1=\"{top}\" x2=\"{left}\" y2=\"{}\" stroke=\"black\"/>\n",
        (w - right + left) / 2.0,
        chart.title,
        h - bottom,
        w - right,
        h - bottom,
        h - bottom
    );
    let fmt_tick = |v: f64, log: bool| if log { format!("{:.3e}", 10f64.powf(v)) } else { format!("{v:.4}") };
    for k in 0..=4 {
        let f = k as f64 / 4.0;
        let (vx, vy) = (x0 + f * (x1 - x0), y0 + f * (y1 - y0));
        let sx = left + f * (w - left - right);
        let sy = h - bottom - f * (h - top - bottom);
        let _ = writeln!(out, "<text x=\"{sx:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{}</text>", h - bottom + 15.0, fmt_tick(vx, chart.log_x));
        let _ = writeln!(out, "<text x=\"{:.1}\" y=\"{sy:.1}\" text-anchor=\"end\">{}</text>", left - 4.0, fmt_tick(vy, chart.log_y));
    }
    let _ = writeln!(
        out,
        "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{}</text>\n<text x=\"14\" y=\"{:.1}\" text-anchor=\"middle\" transform=\"rotate(-90 14 {:.1})\">{}</text>",
        (w - right + left) / 2.0,
        h - 12.0,
        chart.x_label,
        (h - bottom + top) / 2.0,
        (h - bottom + top) / 2.0,
        chart.y_label
    );
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let pts: Vec<String> =
            s.points.iter().filter(|p| keep(p)).map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y))).collect();
        let _ = writeln!(
            out,
            "<polyline data-series=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>",
            s.name,
            pts.join(" ")
        );
        let ly = top + 16.0 * i as f64;
        let _ = writeln!(
            out,
            "<line x1=\"{:.1}\" y1=\"{ly:.1}\" x2=\"{:.1}\" y2=\"{ly:.1}\" stroke=\"{color}\" stroke-width=\"2\"/><text x=\"{:.1}\" y=\"{:.1}\">{}</text>",
            w - right + 10.0,
            w - right + 30.0,
            w - right + 35.0,
            ly + 4.0,
            s.name
        );
    }
    out.push_str("</svg>\n");
    out
}
