//! Matrix Market "array real general" I/O for dense matrices: header line,
//! optional % comments, a dimensions line, then column-major entries one per
//! line. Values are written with 17 significant digits, which round-trips
//! every representable double.

use anyhow::{bail, Context, Result};
use avekit::Mat;
use std::path::Path;

const HEADER: &str = "%%MatrixMarket matrix array real general";

pub fn write_matrix(m: &Mat) -> String {
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    out.push_str(&format!("{} {}\n", m.rows(), m.cols()));
    for j in 0..m.cols() {
        for i in 0..m.rows() {
            out.push_str(&format!("{:.16e}\n", m[(i, j)]));
        }
    }
    out
}

pub fn write_matrix_file(m: &Mat, path: &Path) -> Result<()> {
    std::fs::write(path, write_matrix(m))
        .with_context(|| format!("writing matrix to {}", path.display()))
}

pub fn parse_matrix(text: &str) -> Result<Mat> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| anyhow::anyhow!("empty file: missing header"))?;
    let header_fields: Vec<String> = header
        .split_whitespace()
        .map(|s| s.to_ascii_lowercase())
        .collect();
    if !header.starts_with("%%MatrixMarket")
        || header_fields.len() < 5
        || header_fields[1] != "matrix"
        || header_fields[2] != "array"
        || header_fields[3] != "real"
        || header_fields[4] != "general"
    {
        bail!("line 1: expected header '{HEADER}'");
    }
    let mut dims: Option<(usize, usize)> = None;
    let mut values: Vec<f64> = Vec::new();
    for (idx, line) in lines {
        let line = line.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        if dims.is_none() {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 2 {
                bail!("line {}: expected 'rows cols'", idx + 1);
            }
            let r: usize = parts[0]
                .parse()
                .with_context(|| format!("line {}: bad row count", idx + 1))?;
            let c: usize = parts[1]
                .parse()
                .with_context(|| format!("line {}: bad column count", idx + 1))?;
            dims = Some((r, c));
            values.reserve(r * c);
        } else {
            let v: f64 = line
                .parse()
                .with_context(|| format!("line {}: bad numeric entry '{line}'", idx + 1))?;
            values.push(v);
        }
    }
    let (r, c) = dims.ok_or_else(|| anyhow::anyhow!("missing dimensions line"))?;
    if values.len() != r * c {
        bail!(
            "entry count mismatch: header says {} x {} = {} entries, found {}",
            r,
            c,
            r * c,
            values.len()
        );
    }
    Ok(Mat::from_vec_cols(r, c, &values))
}

pub fn read_matrix_file(path: &Path) -> Result<Mat> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading matrix from {}", path.display()))?;
    parse_matrix(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_bit_exact() {
        let m = Mat::from_rows(&[
            vec![0.1 + 0.2, -1.0 / 3.0, 1e-300],
            vec![std::f64::consts::E, 2.0f64.sqrt(), -0.0],
        ]);
        let text = write_matrix(&m);
        let back = parse_matrix(&text).unwrap();
        assert_eq!(back.rows(), 2);
        for i in 0..2 {
            for j in 0..3 {
                assert_eq!(m[(i, j)].to_bits(), back[(i, j)].to_bits());
            }
        }
    }

    #[test]
    fn wrong_count_is_an_error() {
        let text = "%%MatrixMarket matrix array real general\n2 2\n1.0\n2.0\n3.0\n";
        let err = parse_matrix(text).unwrap_err().to_string();
        assert!(err.contains("entry count mismatch"), "{err}");
    }

    #[test]
    fn comments_are_skipped() {
        let text =
            "%%MatrixMarket matrix array real general\n% a comment\n1 2\n1.5\n-2.5\n";
        let m = parse_matrix(text).unwrap();
        assert_eq!((m[(0, 0)], m[(0, 1)]), (1.5, -2.5));
    }

    #[test]
    fn bad_header_reports_line() {
        assert!(parse_matrix("%%MatrixMarket matrix coordinate real general\n1 1\n1.0\n")
            .unwrap_err()
            .to_string()
            .contains("line 1"));
    }
}
