//! Labeled square grids.
//!
//! ```text
//! ,Back,Major
//! Back,1,0.627
//! Major,1.596,1
//! ```
//!
//! The header row (empty first cell) is optional; without it the column
//! labels are taken to be the row labels. A trailing `provisional` column,
//! as exported by the elicitation service, is ignored.

use std::fmt::Write as _;

use crate::config::CSV_RECIPROCITY_TOL;
use crate::error::{Error, Result};
use crate::matrix::ComparisonMatrix;

fn parse_cell(s: &str) -> Option<f64> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.trim().parse().ok()?;
            let q: f64 = q.trim().parse().ok()?;
            Some(p / q)
        }
        None => s.parse().ok(),
    }
}

/// Parses a grid, checks reciprocity to published-table precision and
/// rebuilds the lower triangle as exact reciprocals of the upper one.
pub fn parse_matrix_csv(bytes: &[u8]) -> Result<ComparisonMatrix> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::parse(0, 0, format!("not UTF-8: {e}")))?;
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut records = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(super::csv_error)?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let cells: Vec<String> = rec.iter().map(|c| c.trim().to_string()).collect();
        if cells.iter().all(|c| c.is_empty()) {
            continue;
        }
        records.push((line, cells));
    }
    if records.is_empty() {
        return Err(Error::parse(0, 0, "empty matrix file"));
    }

    let mut header: Option<(usize, Vec<String>)> = None;
    if records[0].1[0].is_empty() {
        let (line, cells) = records.remove(0);
        header = Some((line, cells[1..].to_vec()));
    }
    let mut provisional = false;
    if let Some((_, cols)) = header.as_mut() {
        if cols.last().is_some_and(|c| c.eq_ignore_ascii_case("provisional")) {
            cols.pop();
            provisional = true;
        }
    }
    let n = records.len();
    let expected_width = n + 1 + usize::from(provisional);
    let labels: Vec<String> = records.iter().map(|(_, c)| c[0].clone()).collect();
    if let Some((line, cols)) = &header {
        if cols.len() != n {
            return Err(Error::parse(*line, 0, format!("{} column labels for {n} rows: grid is not square", cols.len())));
        }
        for (k, (c, r)) in cols.iter().zip(&labels).enumerate() {
            if c != r {
                return Err(Error::parse(*line, k + 2, format!("column label `{c}` does not match row label `{r}`")));
            }
        }
    }

    let mut entries = vec![vec![0.0; n]; n];
    for (i, (line, cells)) in records.iter().enumerate() {
        if cells.len() != expected_width {
            return Err(Error::parse(
                *line,
                0,
                format!("row `{}` has {} values, expected {n}: grid is not square", labels[i], cells.len() - 1),
            ));
        }
        for j in 0..n {
            let raw = &cells[j + 1];
            let v = parse_cell(raw)
                .filter(|v| v.is_finite() && *v > 0.0)
                .ok_or_else(|| Error::parse(*line, j + 2, format!("`{raw}` is not a positive number")))?;
            entries[i][j] = v;
        }
        if (entries[i][i] - 1.0).abs() > CSV_RECIPROCITY_TOL {
            return Err(Error::parse(*line, i + 2, format!("diagonal entry is {}, expected 1", entries[i][i])));
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let prod = entries[i][j] * entries[j][i];
            if (prod - 1.0).abs() > CSV_RECIPROCITY_TOL {
                return Err(Error::parse(
                    records[j].0,
                    i + 2,
                    format!(
                        "({a},{b}) = {} and ({b},{a}) = {} are not reciprocal (product {prod:.6})",
                        entries[i][j],
                        entries[j][i],
                        a = labels[i],
                        b = labels[j]
                    ),
                ));
            }
        }
    }
    for i in 0..n {
        entries[i][i] = 1.0;
        for j in (i + 1)..n {
            entries[j][i] = 1.0 / entries[i][j];
        }
    }
    ComparisonMatrix::new(labels, entries).map_err(|e| Error::parse(0, 0, e.to_string()))
}

/// Writes any labeled square grid.
pub fn write_grid_csv(labels: &[String], entries: &[Vec<f64>]) -> String {
    write_rows(labels, entries, None)
}

/// Writes a comparison matrix; values use the shortest exact decimal form.
pub fn write_matrix_csv(m: &ComparisonMatrix) -> String {
    write_rows(m.labels(), m.entries(), None)
}

/// Writes a matrix with a trailing per-row `provisional` flag.
pub fn write_provisional_matrix_csv(m: &ComparisonMatrix, provisional: &[bool]) -> String {
    write_rows(m.labels(), m.entries(), Some(provisional))
}

fn write_rows(labels: &[String], entries: &[Vec<f64>], flags: Option<&[bool]>) -> String {
    let mut out = String::new();
    let mut wtr = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(vec![]);
    let mut header = vec![String::new()];
    header.extend(labels.iter().cloned());
    if flags.is_some() {
        header.push("provisional".into());
    }
    wtr.write_record(&header).expect("in-memory write");
    for (i, row) in entries.iter().enumerate() {
        let mut rec = vec![labels[i].clone()];
        rec.extend(row.iter().map(|v| {
            let mut s = String::new();
            write!(s, "{v}").unwrap();
            s
        }));
        if let Some(f) = flags {
            rec.push(f[i].to_string());
        }
        wtr.write_record(&rec).expect("in-memory write");
    }
    out.push_str(&String::from_utf8(wtr.into_inner().expect("flush")).expect("utf-8"));
    out
}
