//! Self-contained SVG rendering of the two plot kinds: p-value histograms
//! (bars, 0.05 significance marker, 5%-of-stimuli reference level) and
//! p-value P-P plots (step ECDF, diagonal, significance line). Output is
//! deterministic: identical input gives byte-identical SVG.

use crate::gof::{PpPlotData, PvalueHistogram};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 60.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 20.0;
const MARGIN_BOTTOM: f64 = 45.0;

struct Frame {
    x0: f64,
    y0: f64,
    w: f64,
    h: f64,
    x_max: f64,
    y_max: f64,
}

impl Frame {
    fn new(x_max: f64, y_max: f64) -> Self {
        Frame {
            x0: MARGIN_LEFT,
            y0: MARGIN_TOP,
            w: WIDTH - MARGIN_LEFT - MARGIN_RIGHT,
            h: HEIGHT - MARGIN_TOP - MARGIN_BOTTOM,
            x_max,
            y_max,
        }
    }

    fn x(&self, v: f64) -> f64 {
        self.x0 + v / self.x_max * self.w
    }

    fn y(&self, v: f64) -> f64 {
        self.y0 + self.h - v / self.y_max * self.h
    }
}

fn f(v: f64) -> String {
    format!("{v:.3}")
}

fn document(body: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n\
         <rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n{body}</svg>\n"
    )
}

fn axes(frame: &Frame, x_label: &str, y_label: &str) -> String {
    let mut s = String::new();
    s.push_str(&format!(
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
        f(frame.x0),
        f(frame.y0 + frame.h),
        f(frame.x0 + frame.w),
        f(frame.y0 + frame.h)
    ));
    s.push_str(&format!(
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
        f(frame.x0),
        f(frame.y0),
        f(frame.x0),
        f(frame.y0 + frame.h)
    ));
    s.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" \
         font-size=\"14\">{x_label}</text>\n",
        f(frame.x0 + frame.w / 2.0),
        f(HEIGHT - 10.0)
    ));
    s.push_str(&format!(
        "<text x=\"15\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" \
         font-size=\"14\" transform=\"rotate(-90 15 {})\">{y_label}</text>\n",
        f(frame.y0 + frame.h / 2.0),
        f(frame.y0 + frame.h / 2.0)
    ));
    for i in 0..=5 {
        let v = frame.x_max * i as f64 / 5.0;
        s.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" \
             font-size=\"11\">{v:.2}</text>\n",
            f(frame.x(v)),
            f(frame.y0 + frame.h + 16.0)
        ));
    }
    s
}

fn empty_plot(notice: &str) -> String {
    document(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" \
         font-size=\"16\">{notice}</text>\n",
        f(WIDTH / 2.0),
        f(HEIGHT / 2.0)
    ))
}

/// Render a p-value histogram: bars, the thick vertical significance marker
/// and the dashed reference level.
pub fn render_histogram_svg(h: &PvalueHistogram) -> String {
    if h.total == 0 {
        return empty_plot("no p-values to plot");
    }
    let y_max = h
        .bins
        .iter()
        .map(|&(_, c)| c)
        .max()
        .unwrap_or(0)
        .max(1) as f64
        * 1.1;
    let frame = Frame::new(1.0, y_max);
    let mut body = axes(&frame, "p-value", "count");

    for &(start, count) in &h.bins {
        let x = frame.x(start);
        let w = frame.x(start + h.bin_width) - x;
        let y = frame.y(count as f64);
        let bh = frame.y0 + frame.h - y;
        body.push_str(&format!(
            "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"#4878a8\" \
             stroke=\"white\" stroke-width=\"0.5\"/>\n",
            f(x),
            f(y),
            f(w),
            f(bh)
        ));
    }

    let marker_x = frame.x(h.significance_marker);
    body.push_str(&format!(
        "<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\" \
         stroke-width=\"3\"/>\n",
        f(marker_x),
        f(frame.y0),
        f(frame.y0 + frame.h)
    ));
    let ref_y = frame.y(h.reference_level.min(y_max));
    body.push_str(&format!(
        "<line x1=\"{1}\" y1=\"{0}\" x2=\"{2}\" y2=\"{0}\" stroke=\"#c02020\" \
         stroke-dasharray=\"6 4\" stroke-width=\"1.5\"/>\n",
        f(ref_y),
        f(frame.x0),
        f(frame.x0 + frame.w)
    ));
    document(&body)
}

/// Render a P-P plot: step ECDF, the y = x diagonal and the significance
/// line.
pub fn render_pp_plot_svg(data: &PpPlotData) -> String {
    if data.rows.is_empty() {
        return empty_plot("no p-p data to plot");
    }
    let frame = Frame::new(1.0, 1.0);
    let mut body = axes(&frame, "theoretical CDF", "ECDF");

    body.push_str(&format!(
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\" stroke-width=\"1.5\"/>\n",
        f(frame.x(0.0)),
        f(frame.y(0.0)),
        f(frame.x(1.0)),
        f(frame.y(1.0))
    ));

    let mut line = String::from("M");
    for (i, r) in data.rows.iter().enumerate() {
        let cmd = if i == 0 { "" } else { " L" };
        line.push_str(&format!(
            "{cmd}{} {}",
            f(frame.x(r.alpha)),
            f(frame.y(r.significance_line.min(1.0)))
        ));
    }
    body.push_str(&format!(
        "<path d=\"{line}\" fill=\"none\" stroke=\"#c02020\" stroke-dasharray=\"6 4\" \
         stroke-width=\"1.5\"/>\n"
    ));

    let mut ecdf = String::from("M");
    let mut prev_y = None;
    for (i, r) in data.rows.iter().enumerate() {
        let x = f(frame.x(r.alpha));
        let y = f(frame.y(r.ecdf));
        if i == 0 {
            ecdf.push_str(&format!("{x} {y}"));
        } else {
            // Step: horizontal then vertical.
            ecdf.push_str(&format!(" L{x} {}", prev_y.clone().unwrap_or_else(|| y.clone())));
            ecdf.push_str(&format!(" L{x} {y}"));
        }
        prev_y = Some(y);
    }
    body.push_str(&format!(
        "<path d=\"{ecdf}\" fill=\"none\" stroke=\"#4878a8\" stroke-width=\"2\"/>\n"
    ));

    body.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"13\">verdict: {}</text>\n",
        f(frame.x0 + 10.0),
        f(frame.y0 + 16.0),
        if data.verdict {
            "not contradicted"
        } else {
            "contradicted"
        }
    ));
    document(&body)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gof::{default_alpha_grid, pp_plot, pvalue_histogram};

    #[test]
    fn histogram_svg_has_marker_and_bars() {
        let h = pvalue_histogram(&[0.02, 0.3, 0.7, 0.96], 0.05).unwrap();
        let svg = render_histogram_svg(&h);
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("stroke-width=\"3\""), "missing thick marker");
        assert!(svg.contains("<rect"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn pp_plot_svg_has_diagonal() {
        let data = pp_plot(&[0.2, 0.5, 0.9], &default_alpha_grid(), 0.95).unwrap();
        let svg = render_pp_plot_svg(&data);
        assert!(svg.contains("stroke=\"black\" stroke-width=\"1.5\""), "missing diagonal");
        assert!(svg.contains("<path"));
    }

    #[test]
    fn identical_input_identical_bytes() {
        let h = pvalue_histogram(&[0.11, 0.42], 0.1).unwrap();
        assert_eq!(render_histogram_svg(&h), render_histogram_svg(&h));
        let d = pp_plot(&[0.3], &default_alpha_grid(), 0.9).unwrap();
        assert_eq!(render_pp_plot_svg(&d), render_pp_plot_svg(&d));
    }

    #[test]
    fn empty_inputs_render_notice() {
        let h = pvalue_histogram(&[], 0.05).unwrap();
        let svg = render_histogram_svg(&h);
        assert!(svg.contains("no p-values to plot"));
    }
}
