//! Minimal SVG line plots for quick inspection of the CSV outputs.

use std::io::Write;
use std::path::Path;

const W: f64 = 640.0;
const H: f64 = 400.0;
const MARGIN: f64 = 50.0;
const COLORS: [&str; 5] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"];

pub fn line_svg(
    path: &Path,
    title: &str,
    xs: &[f64],
    series: &[(String, Vec<f64>)],
) -> std::io::Result<()> {
    let (mut ymin, mut ymax) = (f64::INFINITY, f64::NEG_INFINITY);
    for (_, ys) in series {
        for &y in ys {
            if y.is_finite() {
                ymin = ymin.min(y);
                ymax = ymax.max(y);
            }
        }
    }
    if !ymin.is_finite() || ymin == ymax {
        ymin -= 1.0;
        ymax += 1.0;
    }
    let (xmin, xmax) = (xs[0], *xs.last().unwrap());
    let px = |x: f64| MARGIN + (x - xmin) / (xmax - xmin) * (W - 2.0 * MARGIN);
    let py = |y: f64| H - MARGIN - (y - ymin) / (ymax - ymin) * (H - 2.0 * MARGIN);

    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" \
         viewBox=\"0 0 {W} {H}\">\n\
         <rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>\n\
         <text x=\"{}\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">{title}</text>\n",
        W / 2.0
    );
    // axes with end labels
    svg += &format!(
        "<line x1=\"{m}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>\n\
         <line x1=\"{m}\" y1=\"{b}\" x2=\"{m}\" y2=\"{t}\" stroke=\"black\"/>\n\
         <text x=\"{m}\" y=\"{bl}\" font-size=\"10\">{xmin:.4}</text>\n\
         <text x=\"{r}\" y=\"{bl}\" text-anchor=\"end\" font-size=\"10\">{xmax:.4}</text>\n\
         <text x=\"5\" y=\"{b}\" font-size=\"10\">{ymin:.4}</text>\n\
         <text x=\"5\" y=\"{t}\" font-size=\"10\">{ymax:.4}</text>\n",
        m = MARGIN,
        r = W - MARGIN,
        b = H - MARGIN,
        t = MARGIN,
        bl = H - MARGIN + 15.0,
    );
    for (i, (label, ys)) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let pts: Vec<String> = xs
            .iter()
            .zip(ys)
            .filter(|(_, y)| y.is_finite())
            .map(|(&x, &y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        svg += &format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n\
             <text x=\"{}\" y=\"{}\" font-size=\"11\" fill=\"{color}\">{label}</text>\n",
            pts.join(" "),
            W - MARGIN + 5.0 - 90.0,
            MARGIN + 15.0 * (i + 1) as f64,
        );
    }
    svg += "</svg>\n";
    let mut f = std::fs::File::create(path)?;
    f.write_all(svg.as_bytes())
}
