//! Hand-rolled SVG plots. The plots are a convenience on top of the CSV
//! data, so the only requirements are: self-contained (no fonts, scripts or
//! images fetched from anywhere) and deterministic byte-for-byte.

use std::fmt::Write;

/// Pixel coordinates are emitted with fixed precision: plenty for a plot,
/// and immune to platform quirks in shortest-float printing of derived
/// quantities.
fn px(v: f64) -> String {
    format!("{v:.2}")
}

/// Tick labels carry data values, shortened to stay legible.
fn tick_label(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if v.abs() >= 0.01 && v.abs() < 10000.0 {
        let s = format!("{v:.3}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        format!("{v:.2e}")
    }
}

const WIDTH: f64 = 960.0;
const HEIGHT: f64 = 600.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 20.0;
const MARGIN_B: f64 = 55.0;

struct Frame {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl Frame {
    /// Data bounds padded by 5% so curves do not hug the border.
    fn around(points: impl Iterator<Item = (f64, f64)>) -> Frame {
        let (mut x_min, mut x_max) = (f64::INFINITY, f64::NEG_INFINITY);
        let (mut y_min, mut y_max) = (f64::INFINITY, f64::NEG_INFINITY);
        for (x, y) in points {
            x_min = x_min.min(x);
            x_max = x_max.max(x);
            y_min = y_min.min(y);
            y_max = y_max.max(y);
        }
        if !(x_min.is_finite() && y_min.is_finite()) {
            // Nothing plottable: fall back to a unit window.
            return Frame { x_min: 0.0, x_max: 1.0, y_min: 0.0, y_max: 1.0 };
        }
        let pad = |lo: f64, hi: f64| {
            let span = (hi - lo).max(1e-12);
            (lo - 0.05 * span, hi + 0.05 * span)
        };
        let (x_min, x_max) = pad(x_min, x_max);
        let (y_min, y_max) = pad(y_min, y_max);
        Frame { x_min, x_max, y_min, y_max }
    }

    fn sx(&self, x: f64) -> f64 {
        MARGIN_L + (x - self.x_min) / (self.x_max - self.x_min) * (WIDTH - MARGIN_L - MARGIN_R)
    }

    /// SVG y grows downwards; data y grows upwards.
    fn sy(&self, y: f64) -> f64 {
        HEIGHT - MARGIN_B
            - (y - self.y_min) / (self.y_max - self.y_min) * (HEIGHT - MARGIN_T - MARGIN_B)
    }
}

fn open_svg(out: &mut String) {
    let _ = write!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" \
         font-family=\"sans-serif\" font-size=\"13\">\n\
         <rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
    );
}

fn axes(out: &mut String, frame: &Frame, x_label: &str, y_label: &str) {
    let x0 = MARGIN_L;
    let x1 = WIDTH - MARGIN_R;
    let y0 = HEIGHT - MARGIN_B;
    let y1 = MARGIN_T;
    let _ = write!(
        out,
        "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x1}\" y2=\"{y0}\" stroke=\"black\"/>\n\
         <line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x0}\" y2=\"{y1}\" stroke=\"black\"/>\n"
    );
    for i in 0..=5 {
        let f = i as f64 / 5.0;
        let xv = frame.x_min + f * (frame.x_max - frame.x_min);
        let yv = frame.y_min + f * (frame.y_max - frame.y_min);
        let sx = px(frame.sx(xv));
        let sy = px(frame.sy(yv));
        let _ = write!(
            out,
            "<line x1=\"{sx}\" y1=\"{y0}\" x2=\"{sx}\" y2=\"{}\" stroke=\"black\"/>\n\
             <text x=\"{sx}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
            y0 + 5.0,
            y0 + 20.0,
            tick_label(xv)
        );
        let _ = write!(
            out,
            "<line x1=\"{}\" y1=\"{sy}\" x2=\"{x0}\" y2=\"{sy}\" stroke=\"black\"/>\n\
             <text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n",
            x0 - 5.0,
            x0 - 8.0,
            px(frame.sy(yv) + 4.0),
            tick_label(yv)
        );
    }
    let _ = write!(
        out,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{x_label}</text>\n\
         <text x=\"18\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {})\">{y_label}</text>\n",
        (x0 + x1) / 2.0,
        HEIGHT - 12.0,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0,
    );
}

/// Golden-angle hue walk: visually distinct strokes for any branch count,
/// with a fixed mapping from branch index to colour.
fn stroke(idx: usize) -> String {
    format!("hsl({},70%,42%)", (idx * 137) % 360)
}

/// One polyline per branch in the complex-eigenvalue plane.
pub fn branch_portrait(branches: &[Vec<(f64, f64)>], x_label: &str, y_label: &str) -> String {
    let mut out = String::with_capacity(16 * 1024);
    open_svg(&mut out);
    let frame = Frame::around(branches.iter().flatten().copied());
    axes(&mut out, &frame, x_label, y_label);
    for (n, branch) in branches.iter().enumerate() {
        if branch.is_empty() {
            continue;
        }
        let pts: Vec<String> = branch
            .iter()
            .map(|&(x, y)| format!("{},{}", px(frame.sx(x)), px(frame.sy(y))))
            .collect();
        let _ = write!(
            out,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"/>\n",
            pts.join(" "),
            stroke(n)
        );
        // Label the branch at its starting point.
        let (x0, y0) = branch[0];
        let _ = write!(
            out,
            "<text x=\"{}\" y=\"{}\" fill=\"{}\">{}</text>\n",
            px(frame.sx(x0) + 3.0),
            px(frame.sy(y0) - 3.0),
            stroke(n),
            n
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Heat map of log10 of the sampled bound, row-major with the first axis
/// fastest. Unbounded samples (points on the spectrum) are drawn in red.
pub fn heat_map(
    values: &[f64],
    x_pts: &[f64],
    y_pts: &[f64],
    x_label: &str,
    y_label: &str,
) -> String {
    assert_eq!(values.len(), x_pts.len() * y_pts.len());
    let mut out = String::with_capacity(64 * 1024);
    open_svg(&mut out);
    let frame = Frame::around(
        x_pts.iter().flat_map(|&x| y_pts.iter().map(move |&y| (x, y))),
    );

    let logs: Vec<f64> = values
        .iter()
        .map(|&v| if v.is_finite() { v.max(1e-300).log10() } else { f64::NAN })
        .collect();
    let lo = logs.iter().copied().filter(|v| v.is_finite()).fold(f64::INFINITY, f64::min);
    let hi = logs.iter().copied().filter(|v| v.is_finite()).fold(f64::NEG_INFINITY, f64::max);
    let span = (hi - lo).max(1e-12);

    // Cell size from the first grid gap (the grids are uniform).
    let half_w = if x_pts.len() > 1 { (x_pts[1] - x_pts[0]) / 2.0 } else { 0.5 };
    let half_h = if y_pts.len() > 1 { (y_pts[1] - y_pts[0]) / 2.0 } else { 0.5 };

    for (iy, &y) in y_pts.iter().enumerate() {
        for (ix, &x) in x_pts.iter().enumerate() {
            let v = logs[iy * x_pts.len() + ix];
            let fill = if v.is_nan() {
                "rgb(220,30,60)".to_string()
            } else {
                // Dark blue (low) to pale yellow (high).
                let f = (v - lo) / span;
                let r = (20.0 + 215.0 * f).round() as u8;
                let g = (25.0 + 200.0 * f).round() as u8;
                let b = (90.0 + 60.0 * (1.0 - f)).round() as u8;
                format!("rgb({r},{g},{b})")
            };
            let _ = write!(
                out,
                "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{fill}\"/>\n",
                px(frame.sx(x - half_w)),
                px(frame.sy(y + half_h)),
                px(frame.sx(x + half_w) - frame.sx(x - half_w)),
                px(frame.sy(y - half_h) - frame.sy(y + half_h)),
            );
        }
    }
    axes(&mut out, &frame, x_label, y_label);
    let _ = write!(
        out,
        "<text x=\"{}\" y=\"{}\">log10 scale, red = on the spectrum</text>\n",
        MARGIN_L,
        MARGIN_T - 5.0
    );
    out.push_str("</svg>\n");
    out
}
