use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::HarnessError;
use crate::metrics::{Histogram, SchemeSummary};

pub fn write_summary_csv(path: &Path, summaries: &[SchemeSummary]) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| HarnessError::csv(path, e))?;
    for s in summaries {
        w.serialize(s).map_err(|e| HarnessError::csv(path, e))?;
    }
    w.flush().map_err(|e| HarnessError::io(path, e))
}

pub fn format_summary(summaries: &[SchemeSummary]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<11} {:>7} {:>9} {:>9} {:>8} {:>9} {:>8} {:>7} {:>6}",
        "scheme", "graphs", "frac k=0", "mean k>0", "mean l", "l (k>0)", "dec k>0", "mean r", "degen"
    );
    for s in summaries {
        let _ = writeln!(
            out,
            "{:<11} {:>7} {:>9.4} {:>9.4} {:>8.4} {:>9.4} {:>8.4} {:>7.4} {:>6}",
            s.scheme.as_str(),
            s.records,
            s.frac_k_zero,
            s.mean_k_positive,
            s.mean_l,
            s.mean_l_k_positive,
            s.mean_rel_decrease_k_positive,
            s.mean_r,
            s.degenerate
        );
    }
    out
}

/// Writes `histograms.csv` plus one SVG bar chart per (scheme, quantity).
pub fn write_histograms(dir: &Path, summaries: &[SchemeSummary]) -> Result<(), HarnessError> {
    fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    let csv_path = dir.join("histograms.csv");
    let mut w = csv::Writer::from_path(&csv_path).map_err(|e| HarnessError::csv(&csv_path, e))?;
    w.write_record(["scheme", "quantity", "bin_lo", "bin_hi", "count"]).map_err(|e| HarnessError::csv(&csv_path, e))?;
    for s in summaries {
        for (quantity, h) in [("k", &s.k_histogram), ("r_diff", &s.r_diff_histogram)] {
            for (lo, hi, c) in h.bins() {
                w.write_record([s.scheme.as_str(), quantity, &format!("{lo:.2}"), &format!("{hi:.2}"), &c.to_string()])
                    .map_err(|e| HarnessError::csv(&csv_path, e))?;
            }
            let svg_path = dir.join(format!("{}_{quantity}.svg", s.scheme.as_str()));
            let title = format!("{} {quantity} (n = {})", s.scheme.as_str(), h.total());
            fs::write(&svg_path, svg_bars(h, &title)).map_err(|e| HarnessError::io(&svg_path, e))?;
        }
    }
    w.flush().map_err(|e| HarnessError::io(&csv_path, e))
}

fn svg_bars(h: &Histogram, title: &str) -> String {
    const W: f64 = 640.0;
    const H: f64 = 360.0;
    const PAD: f64 = 40.0;
    let bins: Vec<_> = h.bins().collect();
    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" font-family=\"sans-serif\" font-size=\"11\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n\
         <text x=\"{PAD}\" y=\"20\">{title}</text>\n"
    );
    let (Some(first), Some(last)) = (bins.first(), bins.last()) else {
        svg.push_str("</svg>\n");
        return svg;
    };
    let (lo, hi) = (first.0, last.1);
    let max = bins.iter().map(|b| b.2).max().unwrap_or(1) as f64;
    let sx = (W - 2.0 * PAD) / (hi - lo);
    let sy = (H - 2.0 * PAD) / max;
    for &(a, b, c) in &bins {
        let x = PAD + (a - lo) * sx;
        let h = c as f64 * sy;
        let _ = writeln!(
            svg,
            "<rect x=\"{x:.1}\" y=\"{:.1}\" width=\"{:.1}\" height=\"{h:.1}\" fill=\"steelblue\" stroke=\"white\"/>",
            H - PAD - h,
            (b - a) * sx
        );
    }
    let _ = writeln!(
        svg,
        "<line x1=\"{PAD}\" y1=\"{y}\" x2=\"{x2}\" y2=\"{y}\" stroke=\"black\"/>\n\
         <text x=\"{PAD}\" y=\"{ty}\">{lo:.2}</text>\n<text x=\"{x2}\" y=\"{ty}\" text-anchor=\"end\">{hi:.2}</text>\n\
         <text x=\"5\" y=\"{PAD}\">{max}</text>",
        y = H - PAD,
        x2 = W - PAD,
        ty = H - PAD + 15.0
    );
    svg.push_str("</svg>\n");
    svg
}
