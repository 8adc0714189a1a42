//! Text and CSV rendering.

use clap::ValueEnum;
use serde_json::{json, Value};

use primpow::bounds::{Table1Report, Table1Row};
use primpow::counting::ScanRow;
use primpow::{FieldSpec, QuadraticPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// `x` rounded to 6 significant digits; scientific notation outside
/// `[1e-4, 1e15)`.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return x.to_string();
    }
    let mag = x.abs().log10().floor() as i32;
    if !(-4..15).contains(&mag) {
        return format!("{x:.5e}");
    }
    if mag >= 5 {
        let unit = 10f64.powi(mag - 5);
        return format!("{:.0}", (x / unit).round() * unit);
    }
    let decimals = (5 - mag) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn poly_json(field: &FieldSpec, f: &QuadraticPoly) -> Value {
    json!({
        "a": field.coeffs(f.a),
        "b": field.coeffs(f.b),
        "c": field.coeffs(f.c),
    })
}

pub fn scan_row_text(row: &ScanRow, millis: u64) -> String {
    format!(
        "q = {:>7}  {:<7} polynomials {:>10}  witnessless {:>6}  {} ms",
        row.q,
        if row.exceptional { "EXCEPT" } else { "ok" },
        row.polynomials,
        row.witnessless_count,
        millis
    )
}

pub fn table1_header() -> Vec<String> {
    let mut h = vec!["omega".to_string(), "primorial".to_string()];
    for s in 1..=3 {
        for col in ["computed", "published", "mismatch", "closed"] {
            h.push(format!("s{s}_{col}"));
        }
    }
    h
}

pub fn table1_record(row: &Table1Row) -> Vec<String> {
    let mut r = vec![row.omega.to_string(), row.primorial.to_string()];
    for cell in &row.cells {
        match cell {
            Some(c) => {
                r.push(sig6(c.computed));
                r.push(c.published.map(|v| v.to_string()).unwrap_or_default());
                r.push(c.mismatch.to_string());
                r.push(c.closed.to_string());
            }
            None => r.extend(std::iter::repeat_n(String::new(), 4)),
        }
    }
    r
}

pub fn table1_text(report: &Table1Report) -> String {
    let mut out = format!(
        "k = {}; each cell: computed [published] (* = differs, closed = primorial exceeds bound)\n",
        report.k
    );
    out.push_str(&format!(
        "{:>5} {:>10} {:>28} {:>28} {:>28}\n",
        "omega", "primorial", "s=1", "s=2", "s=3"
    ));
    for row in &report.rows {
        out.push_str(&format!("{:>5} {:>10}", row.omega, row.primorial));
        for cell in &row.cells {
            let text = match cell {
                None => "-".to_string(),
                Some(c) => {
                    let mut t = sig6(c.computed);
                    if let Some(p) = c.published {
                        t.push_str(&format!(" [{p}]"));
                    }
                    if c.mismatch {
                        t.push('*');
                    }
                    if c.closed {
                        t.push_str(" closed");
                    }
                    t
                }
            };
            out.push_str(&format!(" {text:>28}"));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_significant_digits() {
        assert_eq!(sig6(64.0), "64");
        assert_eq!(sig6(528_491_311.485), "528491000");
        assert_eq!(sig6(4278.698961937717), "4278.7");
        assert_eq!(sig6(0.323809523), "0.32381");
        assert_eq!(sig6(2.62144e11), "262144000000");
        assert_eq!(sig6(1.5e20), "1.50000e20");
        assert_eq!(sig6(0.0), "0");
    }

    #[test]
    fn table1_columns_line_up() {
        let report = primpow::bounds::table1_report(2).unwrap();
        let header = table1_header();
        for row in &report.rows {
            assert_eq!(table1_record(row).len(), header.len());
        }
        assert_eq!(table1_record(&report.rows[0])[..6], ["1", "2", "64", "32", "true", "false"]);
    }
}
