//! Minimal RFC-4180 CSV emission: header row, CRLF line endings, fields
//! quoted only when they need it, `.` decimal separator via Rust's default
//! float formatting.

use std::fs;
use std::io;
use std::path::Path;

fn escape(field: &str) -> String {
    if field.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// Renders one table; identical inputs always produce identical bytes.
pub fn render(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    out.push_str(
        &header
            .iter()
            .map(|h| escape(h))
            .collect::<Vec<_>>()
            .join(","),
    );
    out.push_str("\r\n");
    for row in rows {
        out.push_str(&row.iter().map(|f| escape(f)).collect::<Vec<_>>().join(","));
        out.push_str("\r\n");
    }
    out
}

pub fn write(path: &Path, header: &[&str], rows: &[Vec<String>]) -> io::Result<()> {
    fs::write(path, render(header, rows))
}

/// Fixed-precision metric formatting; infinities render as `inf`.
pub fn fmt_metric(value: f64) -> String {
    if value.is_infinite() {
        if value > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{value:.6}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_header_and_rows_with_crlf() {
        let text = render(
            &["image", "qf"],
            &[
                vec!["a.ppm".into(), "50".into()],
                vec!["b.ppm".into(), "70".into()],
            ],
        );
        assert_eq!(text, "image,qf\r\na.ppm,50\r\nb.ppm,70\r\n");
    }

    #[test]
    fn quotes_only_when_needed() {
        let text = render(
            &["name"],
            &[vec!["with,comma".into()], vec!["with\"quote".into()]],
        );
        assert_eq!(text, "name\r\n\"with,comma\"\r\n\"with\"\"quote\"\r\n");
    }

    #[test]
    fn metric_formatting() {
        assert_eq!(fmt_metric(48.13080361), "48.130804");
        assert_eq!(fmt_metric(f64::INFINITY), "inf");
        assert_eq!(fmt_metric(-0.25), "-0.250000");
    }
}
