//! Time-frequency node lists: one `tau,mu` pair of reals per line.
//!
//! Blank lines and lines starting with `#` are skipped, as is a first line
//! reading `tau,mu`.

use rieszlab::{PointSet2D, TfNode};

use crate::matrix_csv::ParseError;

pub fn read_points(text: &str) -> Result<Vec<TfNode>, ParseError> {
    let mut nodes = Vec::new();
    let mut seen_data = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !seen_data && line.eq_ignore_ascii_case("tau,mu") {
            seen_data = true;
            continue;
        }
        seen_data = true;
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != 2 {
            return Err(ParseError {
                line: line_no,
                column: 0,
                message: format!("expected 2 cells (tau,mu), found {}", cells.len()),
            });
        }
        let mut pair = [0.0; 2];
        for (c, cell) in cells.iter().enumerate() {
            pair[c] = cell
                .trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| ParseError {
                    line: line_no,
                    column: c + 1,
                    message: format!("malformed real number {cell:?}"),
                })?;
        }
        nodes.push(TfNode::new(pair[0], pair[1]));
    }
    if nodes.is_empty() {
        return Err(ParseError {
            line: 0,
            column: 0,
            message: "no nodes".into(),
        });
    }
    Ok(nodes)
}

pub fn write_points(points: &PointSet2D) -> String {
    let mut out = String::from("tau,mu\n");
    for p in points.nodes() {
        out.push_str(&format!("{:e},{:e}\n", p.tau, p.mu));
    }
    out
}
