//! Deterministic SVG line charts.

use std::fmt::Write;

use super::export::tracked_cells;
use super::MobilityMetrics;
use crate::engine::{SweepResult, Trace};
use crate::mobility::EventKind;

const WIDTH: f64 = 720.0;
const PANEL_HEIGHT: f64 = 360.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 150.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 50.0;
const PALETTE: [&str; 8] = ["#1f77b4", "#ff7f0e", "#2ca02c", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#17becf"];

/// Sweep metrics charted against height, one file per entry.
pub const SWEEP_SVG_METRICS: [(&str, &str, fn(&MobilityMetrics) -> f64); 6] = [
    ("ho_rate", "HO rate (per UE-minute)", |m| m.ho_rate),
    ("rlf_rate", "RLF rate (per UE-minute)", |m| m.rlf_rate),
    ("hof_ratio", "HOF ratio", |m| m.hof_ratio),
    ("pp_ratio", "Ping-pong ratio", |m| m.pp_ratio),
    ("outage_fraction", "Outage fraction", |m| m.outage_fraction),
    ("resource_utilization", "Resource utilization", |m| m.resource_utilization),
];

struct Series {
    name: String,
    points: Vec<(f64, f64)>,
}

struct Marker {
    x: f64,
    color: &'static str,
}

struct Panel {
    title: String,
    x_label: String,
    y_label: String,
    series: Vec<Series>,
    markers: Vec<Marker>,
    show_points: bool,
}

fn fmt(x: f64) -> String {
    format!("{x:.2}")
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for v in values.filter(|v| v.is_finite()) {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        let pad = if lo.abs() > 1e-12 { lo.abs() * 0.1 } else { 1.0 };
        return (lo - pad, hi + pad);
    }
    (lo, hi)
}

fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let raw = (hi - lo) / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * mag).find(|s| *s >= raw).unwrap_or(10.0 * mag);
    let mut t = (lo / step).ceil() * step;
    let mut out = Vec::new();
    while t <= hi + step * 1e-9 {
        out.push(if t.abs() < step * 1e-9 { 0.0 } else { t });
        t += step;
    }
    out
}

impl Panel {
    fn render(&self, out: &mut String, top: f64) {
        let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
        let plot_h = PANEL_HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
        let (x0, x1) = range(self.series.iter().flat_map(|s| s.points.iter().map(|p| p.0)).chain(self.markers.iter().map(|m| m.x)));
        let (y0, y1) = range(self.series.iter().flat_map(|s| s.points.iter().map(|p| p.1)));
        let sx = |x: f64| MARGIN_LEFT + (x - x0) / (x1 - x0) * plot_w;
        let sy = |y: f64| top + MARGIN_TOP + (1.0 - (y - y0) / (y1 - y0)) * plot_h;
        let bottom = top + MARGIN_TOP + plot_h;

        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="middle" font-size="15">{}</text>"#,
            fmt(MARGIN_LEFT + plot_w / 2.0),
            fmt(top + 22.0),
            escape(&self.title)
        );
        let _ = writeln!(
            out,
            r#"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="black"/>"#,
            fmt(MARGIN_LEFT),
            fmt(top + MARGIN_TOP),
            fmt(plot_w),
            fmt(plot_h)
        );
        for t in ticks(x0, x1) {
            let x = sx(t);
            let _ = writeln!(out, r#"<line x1="{0}" y1="{1}" x2="{0}" y2="{2}" stroke="black"/>"#, fmt(x), fmt(bottom), fmt(bottom + 5.0));
            let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="middle" font-size="11">{}</text>"#, fmt(x), fmt(bottom + 18.0), t);
        }
        for t in ticks(y0, y1) {
            let y = sy(t);
            let _ = writeln!(
                out,
                r##"<line x1="{0}" y1="{1}" x2="{2}" y2="{1}" stroke="#dddddd"/>"##,
                fmt(MARGIN_LEFT),
                fmt(y),
                fmt(MARGIN_LEFT + plot_w)
            );
            let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="end" font-size="11">{}</text>"#, fmt(MARGIN_LEFT - 6.0), fmt(y + 4.0), t);
        }
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="middle" font-size="12">{}</text>"#,
            fmt(MARGIN_LEFT + plot_w / 2.0),
            fmt(bottom + 38.0),
            escape(&self.x_label)
        );
        let _ = writeln!(
            out,
            r#"<text x="{0}" y="{1}" text-anchor="middle" font-size="12" transform="rotate(-90 {0} {1})">{2}</text>"#,
            fmt(18.0),
            fmt(top + MARGIN_TOP + plot_h / 2.0),
            escape(&self.y_label)
        );

        for (i, s) in self.series.iter().enumerate() {
            let color = PALETTE[i % PALETTE.len()];
            let mut path = String::new();
            let mut pen_down = false;
            for &(x, y) in &s.points {
                if !y.is_finite() {
                    pen_down = false;
                    continue;
                }
                let _ = write!(path, "{}{},{} ", if pen_down { "L" } else { "M" }, fmt(sx(x)), fmt(sy(y)));
                pen_down = true;
            }
            let _ = writeln!(out, r#"<path d="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#, path.trim_end());
            if self.show_points {
                for &(x, y) in s.points.iter().filter(|p| p.1.is_finite()) {
                    let _ = writeln!(out, r#"<circle cx="{}" cy="{}" r="3" fill="{color}"/>"#, fmt(sx(x)), fmt(sy(y)));
                }
            }
            let ly = top + MARGIN_TOP + 14.0 + i as f64 * 16.0;
            let lx = MARGIN_LEFT + plot_w + 12.0;
            let _ = writeln!(out, r#"<line x1="{0}" y1="{1}" x2="{2}" y2="{1}" stroke="{color}" stroke-width="2"/>"#, fmt(lx), fmt(ly), fmt(lx + 18.0));
            let _ = writeln!(out, r#"<text x="{}" y="{}" font-size="11">{}</text>"#, fmt(lx + 24.0), fmt(ly + 4.0), escape(&s.name));
        }
        for m in &self.markers {
            let x = sx(m.x);
            let _ = writeln!(
                out,
                r#"<line class="marker" x1="{0}" y1="{1}" x2="{0}" y2="{2}" stroke="{3}" stroke-dasharray="6,4" stroke-width="1.5"/>"#,
                fmt(x),
                fmt(top + MARGIN_TOP),
                fmt(bottom),
                m.color
            );
        }
    }
}

fn document(panels: &[Panel]) -> String {
    let height = PANEL_HEIGHT * panels.len() as f64;
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\" font-family=\"sans-serif\">\n",
        WIDTH, height, WIDTH, height
    );
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    for (i, p) in panels.iter().enumerate() {
        p.render(&mut out, i as f64 * PANEL_HEIGHT);
    }
    out.push_str("</svg>\n");
    out
}

/// `metric` against height, one line per speed.
pub fn sweep_metric_svg(sweep: &SweepResult, label: &str, metric: fn(&MobilityMetrics) -> f64) -> String {
    let mut speeds: Vec<f64> = Vec::new();
    for p in &sweep.points {
        if !speeds.contains(&p.speed) {
            speeds.push(p.speed);
        }
    }
    let series = speeds
        .iter()
        .map(|&s| Series {
            name: format!("{s} km/h"),
            points: sweep.points.iter().filter(|p| p.speed == s).map(|p| (p.height, metric(&p.metrics))).collect(),
        })
        .collect();
    document(&[Panel {
        title: format!("{label} vs height"),
        x_label: "UE height (m)".into(),
        y_label: label.into(),
        series,
        markers: Vec::new(),
        show_points: true,
    }])
}

/// 10th/50th/90th SIR percentiles against height; rows are
/// `(height, p10, p50, p90)`.
pub fn sir_percentile_svg(rows: &[(f64, f64, f64, f64)]) -> String {
    let pick = |name: &str, f: fn(&(f64, f64, f64, f64)) -> f64| Series {
        name: name.into(),
        points: rows.iter().map(|r| (r.0, f(r))).collect(),
    };
    document(&[Panel {
        title: "SIR percentiles vs height".into(),
        x_label: "UE height (m)".into(),
        y_label: "SIR (dB)".into(),
        series: vec![pick("10th", |r| r.1), pick("50th", |r| r.2), pick("90th", |r| r.3)],
        markers: Vec::new(),
        show_points: true,
    }])
}

fn marker_color(kind: EventKind) -> Option<&'static str> {
    match kind {
        EventKind::Rlf => Some("red"),
        k if k.is_hof() => Some("orange"),
        EventKind::HoSuccess => Some("green"),
        _ => None,
    }
}

/// RSRP panel of the tracked cells over a serving SINR panel. Dashed
/// vertical markers: red for RLF, orange for HOF, green for handovers.
pub fn trace_svg(trace: &Trace) -> String {
    let markers = || {
        trace
            .events
            .iter()
            .filter_map(|e| marker_color(e.kind).map(|color| Marker { x: e.time, color }))
            .collect::<Vec<_>>()
    };
    let rsrp = tracked_cells(trace)
        .into_iter()
        .map(|c| Series {
            name: format!("cell {c}"),
            points: trace.rows.iter().map(|r| (r.time, r.rsrp_db[c])).collect(),
        })
        .collect();
    let sinr = vec![Series {
        name: "serving".into(),
        points: trace.rows.iter().map(|r| (r.time, r.sinr_db)).collect(),
    }];
    document(&[
        Panel {
            title: format!("UE {} filtered RSRP", trace.ue_id),
            x_label: "time (s)".into(),
            y_label: "RSRP (dBm)".into(),
            series: rsrp,
            markers: markers(),
            show_points: false,
        },
        Panel {
            title: format!("UE {} SINR", trace.ue_id),
            x_label: "time (s)".into(),
            y_label: "SINR (dB)".into(),
            series: sinr,
            markers: markers(),
            show_points: false,
        },
    ])
}
