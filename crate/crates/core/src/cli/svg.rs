//! Minimal static SVG plots. Exact coordinates ride along as `data-*`
//! attributes so the plot can be checked against the JSON output.

use std::fmt::Write;

use crate::core_math::{to_f64, Rational};
use crate::region::{AlphaTemplate, AntennaProfile, ExponentProfile, GdofRegion, Sweep};

const WIDTH: f64 = 480.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 56.0;

struct Frame {
    x_max: f64,
    y_max: f64,
}

impl Frame {
    fn new(x_max: f64, y_max: f64) -> Self {
        Frame { x_max: x_max.max(1e-9), y_max: y_max.max(1e-9) }
    }

    fn x(&self, v: f64) -> f64 {
        MARGIN + v / self.x_max * (WIDTH - 2.0 * MARGIN)
    }

    fn y(&self, v: f64) -> f64 {
        HEIGHT - MARGIN - v / self.y_max * (HEIGHT - 2.0 * MARGIN)
    }
}

fn header(out: &mut String, title: &str) {
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, "<title>{}</title>", escape(title));
    let _ = writeln!(out, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
}

fn axes(out: &mut String, frame: &Frame, x_label: &str, y_label: &str) {
    let (x0, y0) = (frame.x(0.0), frame.y(0.0));
    let _ = writeln!(
        out,
        r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{:.2}" y2="{y0:.2}" stroke="black"/>"#,
        frame.x(frame.x_max)
    );
    let _ = writeln!(
        out,
        r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x0:.2}" y2="{:.2}" stroke="black"/>"#,
        frame.y(frame.y_max)
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 12.0,
        escape(x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="16" y="{:.2}" text-anchor="middle" font-size="14" transform="rotate(-90 16 {:.2})">{}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        escape(y_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="11">{}</text>"#,
        frame.x(frame.x_max),
        y0 + 16.0,
        trim(frame.x_max)
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="end" font-size="11">{}</text>"#,
        x0 - 6.0,
        frame.y(frame.y_max) + 4.0,
        trim(frame.y_max)
    );
}

fn trim(v: f64) -> String {
    let s = format!("{v:.3}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn max_of(values: impl Iterator<Item = Rational>) -> f64 {
    values.map(to_f64).fold(0.0, f64::max)
}

pub fn region_plot(ant: &AntennaProfile, exp: &ExponentProfile, region: &GdofRegion) -> String {
    let frame = Frame::new(
        max_of(region.vertices.iter().map(|v| v.0)).max(1.0),
        max_of(region.vertices.iter().map(|v| v.1)).max(1.0),
    );
    let mut out = String::new();
    header(&mut out, &format!("GDoF region of the {ant} IC, alpha = {exp}"));
    axes(&mut out, &frame, "d1", "d2");
    let screen: Vec<String> =
        region.vertices.iter().map(|v| format!("{:.2},{:.2}", frame.x(to_f64(v.0)), frame.y(to_f64(v.1)))).collect();
    let exact: Vec<String> = region.vertices.iter().map(|v| format!("{},{}", v.0, v.1)).collect();
    let _ = writeln!(
        out,
        r##"<polygon points="{}" data-vertices="{}" fill="#9ecae1" fill-opacity="0.6" stroke="#08519c" stroke-width="2"/>"##,
        screen.join(" "),
        exact.join(" ")
    );
    for v in &region.vertices {
        let _ = writeln!(
            out,
            r##"<circle cx="{:.2}" cy="{:.2}" r="3" fill="#08519c" data-d1="{}" data-d2="{}"/>"##,
            frame.x(to_f64(v.0)),
            frame.y(to_f64(v.1)),
            v.0,
            v.1
        );
    }
    out.push_str("</svg>\n");
    out
}

pub fn sweep_plot(ant: &AntennaProfile, template: &AlphaTemplate, sweep: &Sweep) -> String {
    let frame = Frame::new(
        max_of(sweep.points.iter().map(|p| p.alpha)),
        max_of(sweep.points.iter().map(|p| p.d_sym)).max(1.0),
    );
    let entries: Vec<String> = template.entries.iter().map(|e| e.to_string()).collect();
    let mut out = String::new();
    header(&mut out, &format!("Symmetric GDoF of the {ant} IC, alpha = [{}]", entries.join(",")));
    axes(&mut out, &frame, "alpha", "d_sym");
    let screen: Vec<String> = sweep
        .points
        .iter()
        .map(|p| format!("{:.2},{:.2}", frame.x(to_f64(p.alpha)), frame.y(to_f64(p.d_sym))))
        .collect();
    let _ = writeln!(
        out,
        r##"<polyline points="{}" fill="none" stroke="#08519c" stroke-width="2"/>"##,
        screen.join(" ")
    );
    for p in sweep.points.iter().filter(|p| p.is_breakpoint) {
        let _ = writeln!(
            out,
            r##"<circle cx="{:.2}" cy="{:.2}" r="3" fill="#cb181d" data-alpha="{}" data-d-sym="{}"/>"##,
            frame.x(to_f64(p.alpha)),
            frame.y(to_f64(p.d_sym)),
            p.alpha,
            p.d_sym
        );
    }
    out.push_str("</svg>\n");
    out
}
