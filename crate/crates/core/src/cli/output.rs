//! CSV and SVG writers.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;

use crate::evaluation::{ResultRow, SummaryRow};

pub const RESULTS_HEADER: [&str; 9] =
    ["trial", "seed", "method", "scheme", "v", "sum_rate_bps", "converged_cells", "total_cells", "warnings"];
pub const SUMMARY_HEADER: [&str; 6] = ["method", "scheme", "v", "mean_rate", "stderr", "n"];

/// Formats `x` with `digits` significant digits in the style of `%g`.
/// `digits = 0` prints the shortest representation that parses back exactly.
pub fn format_number(x: f64, digits: usize) -> String {
    if digits == 0 {
        return format!("{x:?}");
    }
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        format!("{}e{exp}", trim_zeros(mantissa))
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn write_results<W: Write>(out: W, rows: &[ResultRow], digits: usize) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RESULTS_HEADER)?;
    for r in rows {
        w.write_record([
            r.trial.to_string(),
            r.seed.to_string(),
            r.method.to_string(),
            r.scheme.to_string(),
            r.v.to_string(),
            format_number(r.sum_rate_bps, digits),
            r.converged_cells.to_string(),
            r.total_cells.to_string(),
            r.warnings.clone(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_summary<W: Write>(out: W, rows: &[SummaryRow], digits: usize) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SUMMARY_HEADER)?;
    for r in rows {
        w.write_record([
            r.method.to_string(),
            r.scheme.to_string(),
            r.v.to_string(),
            format_number(r.mean_rate, digits),
            format_number(r.stderr, digits),
            r.n.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];
const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 70.0;

/// Line chart of mean sum rate against V, one series per method and scheme.
/// Each point carries its summary row as `data-*` attributes.
pub fn render_svg(summary: &[SummaryRow], digits: usize) -> String {
    let mut series: BTreeMap<(String, String), Vec<&SummaryRow>> = BTreeMap::new();
    for r in summary {
        series.entry((r.method.to_string(), r.scheme.to_string())).or_default().push(r);
    }
    let (v_lo, v_hi) = summary.iter().fold((usize::MAX, 0), |(lo, hi), r| (lo.min(r.v), hi.max(r.v)));
    let y_hi = summary.iter().map(|r| r.mean_rate).fold(0.0, f64::max).max(1.0);
    let x_of = |v: usize| {
        let span = (v_hi.saturating_sub(v_lo)).max(1) as f64;
        MARGIN + (v.saturating_sub(v_lo)) as f64 / span * (WIDTH - 2.0 * MARGIN)
    };
    let y_of = |r: f64| HEIGHT - MARGIN - r / y_hi * (HEIGHT - 2.0 * MARGIN);

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    )
    .unwrap();
    writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(
        s,
        r#"<path d="M{m} {t} V{b} H{r}" fill="none" stroke="black"/>"#,
        m = MARGIN,
        t = MARGIN,
        b = HEIGHT - MARGIN,
        r = WIDTH - MARGIN
    )
    .unwrap();
    if !summary.is_empty() {
        for v in v_lo..=v_hi {
            writeln!(
                s,
                r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="12">{v}</text>"#,
                x_of(v),
                HEIGHT - MARGIN + 18.0
            )
            .unwrap();
        }
    }
    writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="13">number of virtual cells V</text>"#,
        WIDTH / 2.0,
        HEIGHT - 20.0
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="{MARGIN}" y="{:.1}" font-size="12">max {} bit/s</text>"#,
        MARGIN - 10.0,
        format_number(y_hi, 6)
    )
    .unwrap();
    for (i, ((method, scheme), pts)) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let dash = if method == "exhaustive" { r#" stroke-dasharray="6 3""# } else { "" };
        writeln!(s, r#"<g class="series" data-method="{method}" data-scheme="{scheme}">"#).unwrap();
        let path: Vec<String> = pts.iter().map(|r| format!("{:.2},{:.2}", x_of(r.v), y_of(r.mean_rate))).collect();
        writeln!(s, r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"{dash}/>"#, path.join(" "))
            .unwrap();
        for r in pts {
            writeln!(
                s,
                r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}" data-v="{}" data-mean="{}" data-stderr="{}" data-n="{}"/>"#,
                x_of(r.v),
                y_of(r.mean_rate),
                r.v,
                format_number(r.mean_rate, digits),
                format_number(r.stderr, digits),
                r.n
            )
            .unwrap();
        }
        let ly = MARGIN + 16.0 * i as f64;
        writeln!(
            s,
            r#"<text x="{:.1}" y="{ly:.1}" font-size="12" fill="{color}">{method} / {scheme}</text>"#,
            WIDTH - MARGIN - 170.0
        )
        .unwrap();
        writeln!(s, "</g>").unwrap();
    }
    writeln!(s, "</svg>").unwrap();
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evaluation::{Method, Scheme};

    #[test]
    fn significant_digits() {
        assert_eq!(format_number(123456789.0, 6), "1.23457e8");
        assert_eq!(format_number(123456.4, 6), "123456");
        assert_eq!(format_number(12.5, 6), "12.5");
        assert_eq!(format_number(0.000123456789, 6), "0.000123457");
        assert_eq!(format_number(1.5e-7, 6), "1.5e-7");
        assert_eq!(format_number(0.0, 6), "0");
        assert_eq!(format_number(-2.0, 3), "-2");
        assert_eq!(format_number(999999.7, 6), "1e6");
        assert_eq!(format_number(0.1 + 0.2, 0), "0.30000000000000004");
    }

    #[test]
    fn svg_has_one_group_per_series() {
        let mk = |method, scheme, v, mean_rate| SummaryRow { method, scheme, v, mean_rate, stderr: 0.0, n: 2 };
        let rows = vec![
            mk(Method::Hierarchical, Scheme::Joint, 1, 5.0),
            mk(Method::Hierarchical, Scheme::Joint, 2, 4.0),
            mk(Method::Exhaustive, Scheme::Joint, 1, 5.0),
            mk(Method::Exhaustive, Scheme::Joint, 2, 4.5),
        ];
        let svg = render_svg(&rows, 6);
        assert_eq!(svg.matches(r#"class="series""#).count(), 2);
        assert_eq!(svg.matches("<circle").count(), 4);
        assert!(svg.contains(r#"data-v="2" data-mean="4.5""#));
    }
}
