//! Complex matrix CSV files.
//!
//! One matrix row per line, comma separated, no whitespace inside cells. Each
//! cell is `a`, `a+bi`, `a-bi` or `bi` where `a`, `b` are decimal or scientific
//! literals. An optional first line `# dim=<n> count=<m>` fixes the shape.
//! Values are written with the shortest exponent form that parses back to the
//! same `f64`.

use std::fmt;
use std::path::Path;

use rieszlab::{CMatrix, C64};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based line in the file, 0 for whole-file problems.
    pub line: usize,
    /// 1-based cell index within the line, 0 when not cell specific.
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.line, self.column) {
            (0, _) => write!(f, "{}", self.message),
            (l, 0) => write!(f, "line {l}: {}", self.message),
            (l, c) => write!(f, "line {l}, column {c}: {}", self.message),
        }
    }
}

impl std::error::Error for ParseError {}

fn parse_real(s: &str) -> Option<f64> {
    // only plain decimal/scientific literals; reject inf/nan spellings
    let ok = !s.is_empty()
        && s.chars()
            .all(|ch| ch.is_ascii_digit() || matches!(ch, '+' | '-' | '.' | 'e' | 'E'))
        && s.chars().any(|ch| ch.is_ascii_digit());
    if !ok {
        return None;
    }
    s.parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Parses one cell of the complex grammar.
pub fn parse_complex(cell: &str) -> Result<C64, String> {
    let bad = || format!("malformed complex number {cell:?}");
    if cell.is_empty() {
        return Err("empty cell".into());
    }
    if cell.chars().any(char::is_whitespace) {
        return Err(format!("whitespace inside cell {cell:?}"));
    }
    let Some(body) = cell.strip_suffix('i') else {
        return parse_real(cell).map(|re| C64::new(re, 0.0)).ok_or_else(bad);
    };
    let bytes = body.as_bytes();
    // the sign separating real and imaginary parts is the last +/- that does
    // not belong to an exponent and is not the leading sign
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    match split {
        Some(i) => {
            let re = parse_real(&body[..i]).ok_or_else(bad)?;
            let im = parse_real(&body[i..]).ok_or_else(bad)?;
            Ok(C64::new(re, im))
        }
        None => parse_real(body).map(|im| C64::new(0.0, im)).ok_or_else(bad),
    }
}

pub fn format_complex(z: C64) -> String {
    if z.im == 0.0 {
        format!("{:e}", z.re)
    } else if z.im.is_sign_negative() {
        format!("{:e}-{:e}i", z.re, -z.im)
    } else {
        format!("{:e}+{:e}i", z.re, z.im)
    }
}

pub fn write_matrix(m: &CMatrix) -> String {
    let mut out = format!("# dim={} count={}\n", m.nrows(), m.ncols());
    for r in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|c| format_complex(m[(r, c)])).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn parse_header(line: &str, line_no: usize) -> Result<(usize, usize), ParseError> {
    let err = |message: String| ParseError {
        line: line_no,
        column: 0,
        message,
    };
    let body = line.trim_start_matches('#').trim();
    let (mut dim, mut count) = (None, None);
    for field in body.split_whitespace() {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| err(format!("malformed header field {field:?}")))?;
        let value: usize = value
            .parse()
            .map_err(|_| err(format!("header value {value:?} is not a positive integer")))?;
        match key {
            "dim" => dim = Some(value),
            "count" => count = Some(value),
            _ => return Err(err(format!("unknown header key {key:?}"))),
        }
    }
    match (dim, count) {
        (Some(d), Some(c)) => Ok((d, c)),
        _ => Err(err("header must be \"# dim=<n> count=<m>\"".into())),
    }
}

pub fn read_matrix(text: &str) -> Result<CMatrix, ParseError> {
    let mut header = None;
    let mut rows: Vec<Vec<C64>> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        if line.starts_with('#') {
            if header.is_some() || !rows.is_empty() {
                return Err(ParseError {
                    line: line_no,
                    column: 0,
                    message: "header must be the first line".into(),
                });
            }
            header = Some(parse_header(line, line_no)?);
            continue;
        }
        let row = line
            .split(',')
            .enumerate()
            .map(|(c, cell)| {
                parse_complex(cell).map_err(|message| ParseError {
                    line: line_no,
                    column: c + 1,
                    message,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(ParseError {
                    line: line_no,
                    column: 0,
                    message: format!("expected {} cells, found {}", first.len(), row.len()),
                });
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(ParseError {
            line: 0,
            column: 0,
            message: "no matrix rows".into(),
        });
    }
    let (n, m) = (rows.len(), rows[0].len());
    if let Some((dim, count)) = header {
        if (dim, count) != (n, m) {
            return Err(ParseError {
                line: 1,
                column: 0,
                message: format!("header says {dim}x{count} but data is {n}x{m}"),
            });
        }
    }
    Ok(CMatrix::from_fn(n, m, |r, c| rows[r][c]))
}

/// Writes via a temporary file in the target directory and renames it into place.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    use std::io::Write;
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grammar() {
        assert_eq!(parse_complex("3").unwrap(), C64::new(3.0, 0.0));
        assert_eq!(parse_complex("1-2i").unwrap(), C64::new(1.0, -2.0));
        assert_eq!(parse_complex("0+1i").unwrap(), C64::new(0.0, 1.0));
        assert_eq!(parse_complex("-1.5e-3+2E2i").unwrap(), C64::new(-1.5e-3, 200.0));
        assert_eq!(parse_complex("1e-5-1e+5i").unwrap(), C64::new(1e-5, -1e5));
        assert_eq!(parse_complex("-2i").unwrap(), C64::new(0.0, -2.0));
        assert_eq!(parse_complex("+4").unwrap(), C64::new(4.0, 0.0));
        for bad in ["", "1 + 2i", "i", "1+i", "nan", "inf", "1+2j", "1,2", "--1", "1e"] {
            assert!(parse_complex(bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn format_cases() {
        assert_eq!(format_complex(C64::new(1.0, 0.0)), "1e0");
        assert_eq!(format_complex(C64::new(0.5, -2.0)), "5e-1-2e0i");
        assert_eq!(format_complex(C64::new(-0.25, 3.0)), "-2.5e-1+3e0i");
    }

    #[test]
    fn header_and_shape_errors() {
        let m = read_matrix("# dim=2 count=2\n1,0\n0,1\n").unwrap();
        assert_eq!(m, CMatrix::identity(2, 2));
        let err = read_matrix("# dim=3 count=2\n1,0\n0,1\n").unwrap_err();
        assert_eq!(err.line, 1);
        let err = read_matrix("1,0\n0,x\n").unwrap_err();
        assert_eq!((err.line, err.column), (2, 2));
        let err = read_matrix("1,0\n0\n").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(read_matrix("").is_err());
        assert!(read_matrix("1,0\n# dim=1 count=2\n").is_err());
    }
}
