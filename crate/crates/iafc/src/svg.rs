//! Minimal static SVG line plots. CSV files are the contract; these renders
//! are a convenience for eyeballing traces and sweep curves.

/// One plotted line.
pub struct Series<'a> {
    pub x: &'a [f64],
    pub y: &'a [f64],
    pub label: String,
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 520.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 50.0;
const COLORS: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

fn nice_ticks(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if !(hi > lo) {
        return vec![lo];
    }
    let raw_step = (hi - lo) / count as f64;
    let mag = 10f64.powf(raw_step.abs().log10().floor());
    let norm = raw_step / mag;
    let step = if norm < 1.5 {
        1.0
    } else if norm < 3.5 {
        2.0
    } else if norm < 7.5 {
        5.0
    } else {
        10.0
    } * mag;
    let start = (lo / step).ceil() * step;
    let mut ticks = Vec::new();
    let mut t = start;
    while t <= hi + step * 1e-9 {
        ticks.push(t);
        t += step;
    }
    ticks
}

fn fmt_tick(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let a = v.abs();
    if !(1e-3..1e4).contains(&a) {
        format!("{v:.2e}")
    } else {
        let s = format!("{v:.4}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

/// Renders series as an SVG line plot with axes, ticks and a legend.
pub fn line_plot(series: &[Series<'_>], title: &str, xlabel: &str, ylabel: &str) -> String {
    let mut x_lo = f64::INFINITY;
    let mut x_hi = f64::NEG_INFINITY;
    let mut y_lo = f64::INFINITY;
    let mut y_hi = f64::NEG_INFINITY;
    for s in series {
        for &x in s.x {
            x_lo = x_lo.min(x);
            x_hi = x_hi.max(x);
        }
        for &y in s.y {
            y_lo = y_lo.min(y);
            y_hi = y_hi.max(y);
        }
    }
    if !x_lo.is_finite() || !(x_hi > x_lo) {
        x_lo = 0.0;
        x_hi = 1.0;
    }
    if !y_lo.is_finite() || !(y_hi > y_lo) {
        y_lo = 0.0;
        y_hi = 1.0;
    }
    let y_pad = 0.05 * (y_hi - y_lo);
    y_lo -= y_pad;
    y_hi += y_pad;

    let plot_w = WIDTH - MARGIN_L - MARGIN_R;
    let plot_h = HEIGHT - MARGIN_T - MARGIN_B;
    let px = |x: f64| MARGIN_L + (x - x_lo) / (x_hi - x_lo) * plot_w;
    let py = |y: f64| MARGIN_T + (1.0 - (y - y_lo) / (y_hi - y_lo)) * plot_h;

    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\" font-size=\"13\">\n\
         <rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n\
         <text x=\"{:.1}\" y=\"22\" text-anchor=\"middle\" font-size=\"16\">{}</text>\n",
        WIDTH / 2.0,
        xml_escape(title)
    );

    // frame
    svg.push_str(&format!(
        "<rect x=\"{MARGIN_L}\" y=\"{MARGIN_T}\" width=\"{plot_w:.1}\" height=\"{plot_h:.1}\" \
         fill=\"none\" stroke=\"#333\"/>\n"
    ));
    for t in nice_ticks(x_lo, x_hi, 6) {
        let x = px(t);
        svg.push_str(&format!(
            "<line x1=\"{x:.1}\" y1=\"{:.1}\" x2=\"{x:.1}\" y2=\"{:.1}\" stroke=\"#333\"/>\n\
             <text x=\"{x:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{}</text>\n",
            MARGIN_T + plot_h,
            MARGIN_T + plot_h + 6.0,
            MARGIN_T + plot_h + 22.0,
            fmt_tick(t)
        ));
    }
    for t in nice_ticks(y_lo, y_hi, 6) {
        let y = py(t);
        svg.push_str(&format!(
            "<line x1=\"{:.1}\" y1=\"{y:.1}\" x2=\"{MARGIN_L}\" y2=\"{y:.1}\" stroke=\"#333\"/>\n\
             <text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\">{}</text>\n",
            MARGIN_L - 6.0,
            MARGIN_L - 9.0,
            y + 4.0,
            fmt_tick(t)
        ));
    }
    svg.push_str(&format!(
        "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{}</text>\n",
        MARGIN_L + plot_w / 2.0,
        HEIGHT - 10.0,
        xml_escape(xlabel)
    ));
    svg.push_str(&format!(
        "<text x=\"16\" y=\"{:.1}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {:.1})\">{}</text>\n",
        MARGIN_T + plot_h / 2.0,
        MARGIN_T + plot_h / 2.0,
        xml_escape(ylabel)
    ));

    for (i, s) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let mut d = String::new();
        for (k, (&x, &y)) in s.x.iter().zip(s.y).enumerate() {
            if !x.is_finite() || !y.is_finite() {
                continue;
            }
            d.push_str(if k == 0 { "M" } else { "L" });
            d.push_str(&format!("{:.2},{:.2} ", px(x), py(y)));
        }
        svg.push_str(&format!(
            "<path d=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n",
            d.trim_end()
        ));
        if !s.label.is_empty() {
            let ly = MARGIN_T + 16.0 + 18.0 * i as f64;
            svg.push_str(&format!(
                "<line x1=\"{:.1}\" y1=\"{ly:.1}\" x2=\"{:.1}\" y2=\"{ly:.1}\" stroke=\"{color}\" stroke-width=\"2\"/>\n\
                 <text x=\"{:.1}\" y=\"{:.1}\">{}</text>\n",
                MARGIN_L + plot_w - 150.0,
                MARGIN_L + plot_w - 125.0,
                MARGIN_L + plot_w - 118.0,
                ly + 4.0,
                xml_escape(&s.label)
            ));
        }
    }
    svg.push_str("</svg>\n");
    svg
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_well_formed_svg() {
        let x = [0.0, 1.0, 2.0, 3.0];
        let y = [0.1, 0.5, 0.3, 0.9];
        let s = Series {
            x: &x,
            y: &y,
            label: "F = 20".into(),
        };
        let svg = line_plot(&[s], "title <x>", "strength", "eta");
        assert!(svg.starts_with("<svg"));
        assert!(svg.ends_with("</svg>\n"));
        assert!(svg.contains("&lt;x&gt;"));
        assert!(svg.contains("<path"));
    }

    #[test]
    fn degenerate_ranges_do_not_panic() {
        let x = [1.0];
        let y = [0.5];
        let s = Series {
            x: &x,
            y: &y,
            label: String::new(),
        };
        let svg = line_plot(&[s], "t", "x", "y");
        assert!(svg.contains("</svg>"));
    }
}
