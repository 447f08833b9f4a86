//! Line plots of result tables as standalone SVG.
//!
//! Fixed 800×600 canvas; an axis switches to log scale when its positive
//! values span more than three decades. All coordinates are printed with a
//! fixed number of decimals, so identical input gives identical bytes.

use std::fmt::Write;

use crate::config::Kind;
use crate::CliError;

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 600.0;
const LEFT: f64 = 90.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 50.0;
const BOTTOM: f64 = 70.0;
const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

/// Columns plotted for a table of the given kind: `(x, [y...], title)`.
pub fn layout(kind: Kind) -> (&'static str, &'static [&'static str], &'static str) {
    match kind {
        Kind::Envelope => ("r", &["min_modulus", "weight"], "minimum modulus on |z| = r"),
        Kind::Cyclic => ("n", &["growth_max", "sup_error"], "growth bound and truncation error"),
        Kind::Weights => ("n", &["moment", "target"], "odd moments of the weight"),
        Kind::Embedding => ("n", &["alpha"], "embedding sequence"),
        Kind::Pipeline => ("n", &["b_n"], "weighted Bergman distance B_n"),
    }
}

fn err(msg: impl Into<String>) -> CliError {
    CliError::Plot(msg.into())
}

struct Axis {
    lo: f64,
    hi: f64,
    log: bool,
}

impl Axis {
    fn fit(values: &[f64]) -> Axis {
        let pos: Vec<f64> = values.iter().copied().filter(|v| *v > 0.0).collect();
        let (plo, phi) = pos.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
        if pos.len() == values.len() && phi / plo > 1e3 {
            return Axis { lo: plo.log10().floor(), hi: phi.log10().ceil(), log: true };
        }
        let (lo, hi) = values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
        if hi > lo {
            let pad = 0.05 * (hi - lo);
            Axis { lo: lo - pad, hi: hi + pad, log: false }
        } else {
            let pad = if lo == 0.0 { 1.0 } else { 0.5 * lo.abs() };
            Axis { lo: lo - pad, hi: hi + pad, log: false }
        }
    }

    /// Position in [0, 1], or `None` for values a log axis cannot show.
    fn unit(&self, v: f64) -> Option<f64> {
        let t = if self.log {
            if v <= 0.0 {
                return None;
            }
            v.log10()
        } else {
            v
        };
        Some((t - self.lo) / (self.hi - self.lo))
    }

    fn ticks(&self) -> Vec<(f64, String)> {
        if self.log {
            let decades = (self.hi - self.lo) as i64;
            let step = (decades / 8 + 1).max(1);
            (0..=decades)
                .step_by(step as usize)
                .map(|k| {
                    let e = self.lo as i64 + k;
                    (k as f64 / decades.max(1) as f64, format!("1e{e}"))
                })
                .collect()
        } else {
            (0..=5)
                .map(|i| {
                    let v = self.lo + (self.hi - self.lo) * i as f64 / 5.0;
                    (i as f64 / 5.0, format!("{v:.3e}"))
                })
                .collect()
        }
    }
}

/// Renders `csv` (as written by `run`) for `kind`.
pub fn render(csv: &[u8], kind: Kind) -> Result<String, CliError> {
    let (x_col, y_cols, title) = layout(kind);
    let mut reader = csv::Reader::from_reader(csv);
    let headers = reader.headers().map_err(|e| err(format!("cannot read header: {e}")))?.clone();
    let index = |name: &str| {
        headers.iter().position(|h| h == name).ok_or_else(|| err(format!("missing column {name:?}")))
    };
    let xi = index(x_col)?;
    let yi: Vec<usize> = y_cols.iter().map(|c| index(c)).collect::<Result<_, _>>()?;

    let mut xs = Vec::new();
    let mut ys: Vec<Vec<f64>> = vec![Vec::new(); yi.len()];
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| err(format!("row {}: {e}", line + 1)))?;
        let num = |i: usize| -> Result<f64, CliError> {
            record.get(i).and_then(|s| s.parse::<f64>().ok()).ok_or_else(|| err(format!("row {}: not a number", line + 1)))
        };
        let x = num(xi)?;
        // tables with several rows per x (pipeline certificates) repeat y
        if xs.last() == Some(&x) || xs.contains(&x) {
            continue;
        }
        xs.push(x);
        for (series, &i) in ys.iter_mut().zip(&yi) {
            series.push(num(i)?);
        }
    }
    if xs.is_empty() {
        return Err(err("table has no rows"));
    }

    let all_y: Vec<f64> = ys.iter().flatten().copied().filter(|v| v.is_finite()).collect();
    if all_y.is_empty() {
        return Err(err("no finite values to plot"));
    }
    let xa = Axis::fit(&xs);
    let ya = Axis::fit(&all_y);
    let (pw, ph) = (WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM);
    let px = |u: f64| LEFT + u * pw;
    let py = |u: f64| TOP + (1.0 - u) * ph;

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#);
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{:.2}" y="30" text-anchor="middle" font-family="sans-serif" font-size="16">{title}</text>"#, WIDTH / 2.0);
    let _ = writeln!(s, r#"<rect x="{LEFT}" y="{TOP}" width="{pw:.2}" height="{ph:.2}" fill="none" stroke="black"/>"#);
    for (u, label) in xa.ticks() {
        let _ = writeln!(s, r#"<line x1="{0:.2}" y1="{1:.2}" x2="{0:.2}" y2="{2:.2}" stroke="black"/>"#, px(u), py(0.0), py(0.0) + 5.0);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="11">{label}</text>"#, px(u), py(0.0) + 20.0);
    }
    for (u, label) in ya.ticks() {
        let _ = writeln!(s, r#"<line x1="{:.2}" y1="{1:.2}" x2="{2:.2}" y2="{1:.2}" stroke="black"/>"#, px(0.0) - 5.0, py(u), px(0.0));
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end" font-family="sans-serif" font-size="11">{label}</text>"#, px(0.0) - 8.0, py(u) + 4.0);
    }
    let xlabel = if xa.log { format!("{x_col} (log)") } else { x_col.to_string() };
    let ylabel = if ya.log { "value (log)" } else { "value" };
    let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="13">{xlabel}</text>"#, px(0.5), HEIGHT - 20.0);
    let _ = writeln!(s, r#"<text x="20" y="{0:.2}" text-anchor="middle" font-family="sans-serif" font-size="13" transform="rotate(-90 20 {0:.2})">{ylabel}</text>"#, py(0.5));

    for (k, (series, name)) in ys.iter().zip(y_cols).enumerate() {
        let color = COLORS[k % COLORS.len()];
        let points: Vec<String> = xs
            .iter()
            .zip(series)
            .filter(|(_, y)| y.is_finite())
            .filter_map(|(&x, &y)| Some(format!("{:.2},{:.2}", px(xa.unit(x)?), py(ya.unit(y)?))))
            .collect();
        let _ = writeln!(s, r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#, points.join(" "));
        let ly = TOP + 15.0 + 18.0 * k as f64;
        let _ = writeln!(s, r#"<line x1="{:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/>"#, WIDTH - RIGHT - 150.0, WIDTH - RIGHT - 125.0);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12">{name}</text>"#, WIDTH - RIGHT - 118.0, ly + 4.0);
    }
    s.push_str("</svg>\n");
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_axis_only_for_wide_positive_ranges() {
        assert!(Axis::fit(&[1e-6, 1.0]).log);
        assert!(!Axis::fit(&[1.0, 999.0]).log);
        assert!(!Axis::fit(&[0.0, 1e6]).log);
    }

    #[test]
    fn missing_column_and_empty_body_fail() {
        assert!(render(b"r,min_modulus\n0.5,0.1\n", Kind::Envelope).is_err());
        assert!(render(b"n,b_n\n", Kind::Pipeline).is_err());
        assert!(render(b"", Kind::Pipeline).is_err());
    }

    #[test]
    fn pipeline_plot_dedupes_and_is_stable() {
        let csv = b"n,b_n\n2,1e-3\n2,1e-3\n4,5e-4\n32,1e-7\n";
        let a = render(csv, Kind::Pipeline).unwrap();
        assert_eq!(a, render(csv, Kind::Pipeline).unwrap());
        assert!(a.contains("value (log)"));
        assert!(a.starts_with("<svg") && a.ends_with("</svg>\n"));
        assert_eq!(a.matches("<polyline").count(), 1);
    }
}
