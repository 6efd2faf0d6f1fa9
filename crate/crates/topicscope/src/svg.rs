//! Self-contained SVG bar charts of histogram densities.

use std::fmt::Write as _;

use topicscope_core::analysis::HistogramBin;

use crate::formats::fmt_sig;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 50.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// A density bar chart; `marker` draws a dashed vertical line (e.g. a mean).
pub fn density_svg(title: &str, x_label: &str, bins: &[HistogramBin], marker: Option<f64>) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" font-family="sans-serif" font-size="16" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    let (Some(first), Some(last)) = (bins.first(), bins.last()) else {
        s.push_str("</svg>\n");
        return s;
    };
    let (x0, x1) = (first.left, last.right);
    let y_max = bins.iter().map(|b| b.density).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let plot_w = WIDTH - 2.0 * MARGIN;
    let plot_h = HEIGHT - 2.0 * MARGIN;
    let px = |x: f64| MARGIN + (x - x0) / (x1 - x0) * plot_w;
    let py = |y: f64| HEIGHT - MARGIN - y / y_max * plot_h;
    for b in bins.iter().filter(|b| b.density > 0.0) {
        let _ = writeln!(
            s,
            r##"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="#4a6fa5"/>"##,
            px(b.left),
            py(b.density),
            (px(b.right) - px(b.left)).max(0.5),
            HEIGHT - MARGIN - py(b.density)
        );
    }
    let base = HEIGHT - MARGIN;
    let _ = writeln!(
        s,
        r#"<line x1="{MARGIN}" y1="{base}" x2="{}" y2="{base}" stroke="black"/>"#,
        WIDTH - MARGIN
    );
    let _ = writeln!(s, r#"<line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" y2="{base}" stroke="black"/>"#);
    if let Some(m) = marker.filter(|m| (x0..=x1).contains(m)) {
        let _ = writeln!(
            s,
            r#"<line x1="{0:.2}" y1="{MARGIN}" x2="{0:.2}" y2="{base}" stroke="crimson" stroke-dasharray="4 3"/>"#,
            px(m)
        );
    }
    for (x, anchor) in [(x0, "start"), (x1, "end")] {
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{}" font-family="sans-serif" font-size="12" text-anchor="{anchor}">{}</text>"#,
            px(x),
            base + 16.0,
            fmt_sig(x, 4)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 12.0,
        escape(x_label)
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="end">{}</text>"#,
        MARGIN - 4.0,
        MARGIN + 4.0,
        fmt_sig(y_max, 4)
    );
    s.push_str("</svg>\n");
    s
}
