//! SVG drawings of combined graphs: one polyline per component over a range
//! of abscissae, with dashed rules at the division numbers.

use crate::error::{Error, Result};
use crate::io::System;
use crate::path::PlPath;
use crate::rational::{to_f64, Rational};
use crate::validate::switch_numbers;
use num_traits::Zero;
use std::fmt::Write as _;

const MARGIN_LEFT: f64 = 60.0;
const MARGIN_RIGHT: f64 = 110.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 50.0;

const COLORS: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
];
const DASHES: [&str; 8] = ["none", "9 4", "2 3", "12 3 2 3", "5 2", "1 4", "14 2 2 2 2 2", "7 7"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderSpec {
    pub width: u32,
    pub height: u32,
    pub q_lo: Rational,
    pub q_hi: Rational,
    pub label_division: bool,
    pub label_switch: bool,
}

impl RenderSpec {
    pub fn new(q_lo: Rational, q_hi: Rational) -> Self {
        RenderSpec {
            width: 800,
            height: 500,
            q_lo,
            q_hi,
            label_division: true,
            label_switch: true,
        }
    }
}

fn out_of_domain(q: &Rational, start: &Rational, end: String) -> Error {
    Error::OutOfDomain {
        q: q.clone(),
        start: start.clone(),
        end,
    }
}

/// The system restricted to `[lo, hi]` as a single path.
fn materialize(sys: &System, lo: &Rational, hi: &Rational) -> Result<PlPath> {
    match sys {
        System::Path(p) => {
            if !p.contains(lo) {
                return Err(out_of_domain(lo, p.start(), p.end().to_string()));
            }
            if !p.contains(hi) {
                return Err(out_of_domain(hi, p.start(), p.end().to_string()));
            }
            p.restrict(lo, hi)
        }
        System::SelfSimilar(s) => {
            if lo < s.q0() {
                return Err(out_of_domain(lo, s.q0(), "infinity".into()));
            }
            let mut periods = 1;
            let mut end = s.base().end().clone();
            while end < *hi {
                end *= s.ratio();
                periods += 1;
            }
            s.unroll(periods).restrict(lo, hi)
        }
    }
}

fn fmt(x: f64) -> String {
    let s = format!("{x:.2}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn render_combined_graph(sys: &System, spec: &RenderSpec) -> Result<String> {
    if spec.q_lo >= spec.q_hi {
        return Err(out_of_domain(&spec.q_hi, &spec.q_lo, format!("{} (empty range)", spec.q_lo)));
    }
    if spec.width == 0 || spec.height == 0 {
        return Err(Error::BadParameters("image size must be positive".into()));
    }
    let path = materialize(sys, &spec.q_lo, &spec.q_hi)?;
    let switches = switch_numbers(&path).unwrap_or_default();

    let w = f64::from(spec.width);
    let h = f64::from(spec.height);
    let plot_w = w - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = h - MARGIN_TOP - MARGIN_BOTTOM;
    let y_max = path
        .values()
        .iter()
        .flatten()
        .max()
        .cloned()
        .filter(|m| !m.is_zero())
        .unwrap_or_else(|| Rational::from_integer(1.into()));
    let span = &spec.q_hi - &spec.q_lo;
    let x_of = |q: &Rational| MARGIN_LEFT + plot_w * to_f64(&((q - &spec.q_lo) / &span));
    let y_of = |v: &Rational| MARGIN_TOP + plot_h * (1.0 - to_f64(&(v / &y_max)));

    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{0}" height="{1}" viewBox="0 0 {0} {1}">"#,
        spec.width, spec.height
    )
    .unwrap();
    writeln!(svg, r#"<rect x="0" y="0" width="{}" height="{}" fill="white"/>"#, spec.width, spec.height).unwrap();

    let (x0, x1) = (fmt(MARGIN_LEFT), fmt(MARGIN_LEFT + plot_w));
    let (y0, y1) = (fmt(MARGIN_TOP), fmt(MARGIN_TOP + plot_h));
    writeln!(svg, r##"<g stroke="#000" stroke-width="1">"##).unwrap();
    writeln!(svg, r#"<line x1="{x0}" y1="{y1}" x2="{x1}" y2="{y1}"/>"#).unwrap();
    writeln!(svg, r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}"/>"#).unwrap();
    writeln!(svg, "</g>").unwrap();

    writeln!(svg, r##"<g stroke="#888" stroke-width="0.8" stroke-dasharray="4 3" class="division">"##).unwrap();
    let interior = &path.breakpoints()[1..path.breakpoints().len() - 1];
    for q in interior {
        let x = fmt(x_of(q));
        writeln!(svg, r#"<line x1="{x}" y1="{y0}" x2="{x}" y2="{y1}"/>"#).unwrap();
    }
    writeln!(svg, "</g>").unwrap();

    if spec.label_division || spec.label_switch {
        writeln!(svg, r#"<g font-family="monospace" font-size="10" text-anchor="middle">"#).unwrap();
        for q in path.breakpoints() {
            let is_switch = switches.contains(q);
            let show = (spec.label_division) || (spec.label_switch && is_switch);
            if !show {
                continue;
            }
            let x = fmt(x_of(q));
            let y = fmt(MARGIN_TOP + plot_h + if is_switch && spec.label_switch { 28.0 } else { 14.0 });
            let weight = if is_switch && spec.label_switch { r#" font-weight="bold""# } else { "" };
            writeln!(svg, r#"<text x="{x}" y="{y}"{weight}>{}</text>"#, escape(&q.to_string())).unwrap();
        }
        writeln!(svg, "</g>").unwrap();
    }

    for j in 0..path.dim() {
        let points: Vec<String> = path
            .breakpoints()
            .iter()
            .zip(path.values())
            .map(|(q, v)| format!("{},{}", fmt(x_of(q)), fmt(y_of(&v[j]))))
            .collect();
        let color = COLORS[j % COLORS.len()];
        let dash = DASHES[j % DASHES.len()];
        let dash_attr = if dash == "none" { String::new() } else { format!(r#" stroke-dasharray="{dash}""#) };
        writeln!(
            svg,
            r#"<polyline class="component" data-index="{}" fill="none" stroke="{color}" stroke-width="1.6"{dash_attr} points="{}"/>"#,
            j + 1,
            points.join(" ")
        )
        .unwrap();
    }

    writeln!(svg, r#"<g font-family="monospace" font-size="11">"#).unwrap();
    for j in 0..path.dim() {
        let y = MARGIN_TOP + 14.0 * j as f64 + 6.0;
        let lx = MARGIN_LEFT + plot_w + 12.0;
        let color = COLORS[j % COLORS.len()];
        let dash = DASHES[j % DASHES.len()];
        let dash_attr = if dash == "none" { String::new() } else { format!(r#" stroke-dasharray="{dash}""#) };
        writeln!(
            svg,
            r#"<line x1="{}" y1="{2}" x2="{}" y2="{2}" stroke="{color}" stroke-width="1.6"{dash_attr}/>"#,
            fmt(lx),
            fmt(lx + 30.0),
            fmt(y)
        )
        .unwrap();
        writeln!(svg, r#"<text x="{}" y="{}">P{}</text>"#, fmt(lx + 36.0), fmt(y + 4.0), j + 1).unwrap();
    }
    writeln!(svg, "</g>").unwrap();
    writeln!(
        svg,
        r#"<text x="{}" y="{}" font-family="monospace" font-size="10">max {}</text>"#,
        fmt(4.0),
        fmt(MARGIN_TOP + 4.0),
        escape(&y_max.to_string())
    )
    .unwrap();
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Number of dashed division rules drawn for `spec`.
pub fn division_rule_count(sys: &System, spec: &RenderSpec) -> Result<usize> {
    let path = materialize(sys, &spec.q_lo, &spec.q_hi)?;
    Ok(path.num_segments() - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cex_min::system_r;
    use crate::rational::int;

    #[test]
    fn r_has_four_polylines() {
        let sys = System::SelfSimilar(system_r(&int(2)).unwrap());
        let svg = render_combined_graph(&sys, &RenderSpec::new(int(5), int(10))).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 4);
        // R_1 = R_2: the first two polylines share their points.
        let pts: Vec<&str> = svg
            .lines()
            .filter(|l| l.starts_with("<polyline"))
            .map(|l| l.split("points=").nth(1).unwrap())
            .collect();
        assert_eq!(pts[0], pts[1]);
        assert_eq!(division_rule_count(&sys, &RenderSpec::new(int(5), int(10))).unwrap(), 2);
        assert_eq!(svg, render_combined_graph(&sys, &RenderSpec::new(int(5), int(10))).unwrap());
    }

    #[test]
    fn empty_and_outside_ranges() {
        let sys = System::SelfSimilar(system_r(&int(2)).unwrap());
        assert!(matches!(
            render_combined_graph(&sys, &RenderSpec::new(int(6), int(6))),
            Err(Error::OutOfDomain { .. })
        ));
        assert!(matches!(
            render_combined_graph(&sys, &RenderSpec::new(int(4), int(6))),
            Err(Error::OutOfDomain { .. })
        ));
        let sys = System::Path(system_r(&int(2)).unwrap().base().clone());
        assert!(render_combined_graph(&sys, &RenderSpec::new(int(5), int(11))).is_err());
    }
}
