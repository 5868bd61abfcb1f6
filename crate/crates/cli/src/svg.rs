//! Minimal static SVG charts.

use std::fmt::Write;

use lflab_core::CmProbeReport;

const W: f64 = 640.0;
const H: f64 = 400.0;
const PAD: f64 = 48.0;

fn header(title: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\" font-family=\"sans-serif\" font-size=\"12\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n\
         <text x=\"{}\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
        W / 2.0,
        escape(title)
    )
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn polyline(points: &[(f64, f64)], colour: &str, dash: bool) -> String {
    let mut d = String::new();
    for (x, y) in points {
        let _ = write!(d, "{x:.2},{y:.2} ");
    }
    let dash = if dash {
        " stroke-dasharray=\"6 4\""
    } else {
        ""
    };
    format!(
        "<polyline fill=\"none\" stroke=\"{colour}\" stroke-width=\"1.5\"{dash} points=\"{}\"/>\n",
        d.trim_end()
    )
}

/// Empirical CDF of `sample` against a reference CDF on the central 99% range.
pub fn cdf_overlay(
    title: &str,
    sample: &[f64],
    reference: &dyn Fn(f64) -> f64,
    reference_label: &str,
) -> String {
    let mut xs = sample.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    let lo = xs[n / 200];
    let hi = xs[(n - 1) - n / 200];
    let span = if hi > lo { hi - lo } else { 1.0 };
    let sx = |x: f64| PAD + (x - lo) / span * (W - 2.0 * PAD);
    let sy = |p: f64| H - PAD - p * (H - 2.0 * PAD);
    let mut emp = Vec::new();
    for (i, &x) in xs.iter().enumerate() {
        if x < lo || x > hi {
            continue;
        }
        emp.push((sx(x), sy(i as f64 / n as f64)));
        emp.push((sx(x), sy((i + 1) as f64 / n as f64)));
    }
    let reference: Vec<(f64, f64)> = (0..=200)
        .map(|k| {
            let x = lo + span * k as f64 / 200.0;
            (sx(x), sy(reference(x)))
        })
        .collect();
    let mut svg = header(title);
    let _ = write!(
        svg,
        "<line x1=\"{PAD}\" y1=\"{0}\" x2=\"{1}\" y2=\"{0}\" stroke=\"black\"/>\n<line x1=\"{PAD}\" y1=\"{PAD}\" x2=\"{PAD}\" y2=\"{0}\" stroke=\"black\"/>\n",
        H - PAD,
        W - PAD
    );
    let _ = writeln!(
        svg,
        "<text x=\"{PAD}\" y=\"{}\">{lo:.3}</text><text x=\"{}\" y=\"{}\" text-anchor=\"end\">{hi:.3}</text>",
        H - PAD + 16.0,
        W - PAD,
        H - PAD + 16.0
    );
    svg.push_str(&polyline(&emp, "#1f5fa8", false));
    svg.push_str(&polyline(&reference, "#c0392b", true));
    let _ = write!(
        svg,
        "<text x=\"{}\" y=\"{}\" fill=\"#1f5fa8\">empirical (n = {n})</text>\n<text x=\"{}\" y=\"{}\" fill=\"#c0392b\">{}</text>\n</svg>\n",
        PAD + 10.0,
        PAD + 10.0,
        PAD + 10.0,
        PAD + 26.0,
        escape(reference_label)
    );
    svg
}

/// One cell per (order, λ): green when no violation was flagged, red otherwise.
pub fn cm_sign_chart(title: &str, report: &CmProbeReport) -> String {
    let cols = report.grid.len().max(1) as f64;
    let rows = report.orders_checked.max(1) as f64;
    let cw = (W - 2.0 * PAD) / cols;
    let ch = (H - 2.0 * PAD) / rows;
    let mut svg = header(title);
    for (j, &lambda) in report.grid.iter().enumerate() {
        for k in 1..=report.orders_checked {
            let bad = report
                .violations
                .iter()
                .any(|v| v.order == k && v.lambda == lambda);
            let colour = if bad { "#c0392b" } else { "#27ae60" };
            let _ = writeln!(
                svg,
                "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"{colour}\" stroke=\"white\"/>",
                PAD + j as f64 * cw,
                PAD + (k - 1) as f64 * ch,
                cw,
                ch
            );
        }
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{}\" text-anchor=\"middle\">{lambda}</text>",
            PAD + (j as f64 + 0.5) * cw,
            H - PAD + 16.0
        );
    }
    for k in 1..=report.orders_checked {
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{:.2}\" text-anchor=\"end\">k={k}</text>",
            PAD - 6.0,
            PAD + (k as f64 - 0.5) * ch
        );
    }
    svg.push_str("</svg>\n");
    svg
}

/// Horizontal bars of statistic/threshold per check, with the pass line at 1.
pub fn report_chart(title: &str, rows: &[(String, f64, bool)]) -> String {
    let n = rows.len().max(1) as f64;
    let bh = (H - 2.0 * PAD) / n;
    let left = 200.0;
    let max = rows.iter().map(|r| r.1).fold(1.5_f64, f64::max).min(10.0);
    let sx = |v: f64| left + v.min(max) / max * (W - left - PAD);
    let mut svg = header(title);
    for (i, (label, ratio, pass)) in rows.iter().enumerate() {
        let y = PAD + i as f64 * bh;
        let colour = if *pass { "#27ae60" } else { "#c0392b" };
        let _ = writeln!(
            svg,
            "<rect x=\"{left}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"{colour}\"/><text x=\"{}\" y=\"{:.2}\" text-anchor=\"end\">{}</text>",
            y + 1.0,
            sx(*ratio) - left,
            (bh - 2.0).max(1.0),
            left - 6.0,
            y + bh * 0.7,
            escape(label)
        );
    }
    let _ = writeln!(
        svg,
        "<line x1=\"{0:.2}\" y1=\"{PAD}\" x2=\"{0:.2}\" y2=\"{1}\" stroke=\"black\" stroke-dasharray=\"4 3\"/>\n</svg>",
        sx(1.0),
        H - PAD
    );
    svg
}
