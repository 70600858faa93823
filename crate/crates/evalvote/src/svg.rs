//! Minimal static SVG plots: axes, bars and points.

use std::fmt::Write as _;

use evalvote_core::analysis::HistogramData;

const WIDTH: f64 = 480.0;
const HEIGHT: f64 = 360.0;
const MARGIN: f64 = 40.0;

fn open(out: &mut String, title: &str) {
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
    )
    .unwrap();
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(out, r#"<text x="{}" y="20" text-anchor="middle">{}</text>"#, WIDTH / 2.0, escape(title)).unwrap();
}

fn axes(out: &mut String, x_label: &str, y_label: &str) {
    let (x0, y0, x1, y1) = (MARGIN, HEIGHT - MARGIN, WIDTH - MARGIN, MARGIN);
    writeln!(out, r#"<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>"#).unwrap();
    writeln!(out, r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>"#).unwrap();
    for (k, label) in ["0", "0.5", "1"].iter().enumerate() {
        let x = x0 + (x1 - x0) * k as f64 / 2.0;
        writeln!(out, r#"<text x="{x}" y="{}" text-anchor="middle">{label}</text>"#, y0 + 14.0).unwrap();
    }
    writeln!(out, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, WIDTH / 2.0, HEIGHT - 8.0, escape(x_label))
        .unwrap();
    writeln!(
        out,
        r#"<text x="12" y="{}" text-anchor="middle" transform="rotate(-90 12 {})">{}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        escape(y_label)
    )
    .unwrap();
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Interior bins as bars; the exact-0 and exact-1 atoms as separate darker bars at the ends.
pub fn histogram_svg(h: &HistogramData, title: &str) -> String {
    let mut out = String::new();
    open(&mut out, title);
    axes(&mut out, "evaluation", "count");
    let plot_w = WIDTH - 2.0 * MARGIN;
    let plot_h = HEIGHT - 2.0 * MARGIN;
    let max = h.counts.iter().copied().chain([h.zero_atom, h.one_atom]).max().unwrap_or(0).max(1) as f64;
    let bar_w = plot_w / h.bins() as f64;
    for (k, &c) in h.counts.iter().enumerate() {
        let height = plot_h * c as f64 / max;
        writeln!(
            out,
            r##"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="#8fa8c8" stroke="white"/>"##,
            MARGIN + k as f64 * bar_w,
            HEIGHT - MARGIN - height,
            bar_w,
            height
        )
        .unwrap();
    }
    let atom_w = (bar_w / 3.0).max(2.0);
    for (x, c) in [(MARGIN - atom_w / 2.0, h.zero_atom), (WIDTH - MARGIN - atom_w / 2.0, h.one_atom)] {
        let height = plot_h * c as f64 / max;
        writeln!(
            out,
            r##"<rect x="{x:.2}" y="{:.2}" width="{atom_w:.2}" height="{height:.2}" fill="#c0392b"/>"##,
            HEIGHT - MARGIN - height
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}

/// One point per voter.
pub fn scatter_svg(points: &[(f64, f64)], x_label: &str, y_label: &str) -> String {
    let mut out = String::new();
    open(&mut out, &format!("{x_label} vs {y_label}"));
    axes(&mut out, x_label, y_label);
    let plot_w = WIDTH - 2.0 * MARGIN;
    let plot_h = HEIGHT - 2.0 * MARGIN;
    for &(a, b) in points {
        writeln!(
            out,
            r##"<circle cx="{:.2}" cy="{:.2}" r="1.5" fill="#2c3e50" fill-opacity="0.5"/>"##,
            MARGIN + a * plot_w,
            HEIGHT - MARGIN - b * plot_h
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}
