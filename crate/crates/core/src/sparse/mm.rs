//! Matrix Market coordinate I/O for symmetric real and pattern matrices.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::sparse::SymmetricMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Field {
    Real,
    Pattern,
}

pub fn read_matrix_market(path: impl AsRef<Path>) -> Result<SymmetricMatrix> {
    let file = File::open(path)?;
    parse_matrix_market(BufReader::new(file))
}

/// Parses a symmetric coordinate Matrix Market stream.
///
/// Pattern files get synthesized values: every off-diagonal is `-1` and each
/// diagonal is its row's off-diagonal degree plus one, which makes the result
/// strictly diagonally dominant.
pub fn parse_matrix_market(reader: impl BufRead) -> Result<SymmetricMatrix> {
    let mut lines = reader.lines().enumerate();

    let (header_line, header) = match lines.next() {
        Some((i, l)) => (i + 1, l?),
        None => {
            return Err(Error::MalformedHeader {
                line: 1,
                reason: "empty input".into(),
            })
        }
    };
    let field = parse_header(header_line, &header)?;

    let mut size: Option<(usize, usize)> = None;
    let mut triplets: Vec<(usize, usize, f64)> = Vec::new();
    let mut last_line = header_line;
    for (i, line) in lines {
        let lineno = i + 1;
        last_line = lineno;
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        let mut tok = t.split_whitespace();
        match size {
            None => {
                let mut next = |what: &str| -> Result<usize> {
                    tok.next()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| Error::MalformedHeader {
                            line: lineno,
                            reason: format!("size line is missing {what}"),
                        })
                };
                let rows = next("the row count")?;
                let cols = next("the column count")?;
                let nnz = next("the entry count")?;
                if rows != cols {
                    return Err(Error::MalformedHeader {
                        line: lineno,
                        reason: format!("symmetric matrix must be square, got {rows} x {cols}"),
                    });
                }
                size = Some((rows, nnz));
                triplets.reserve(nnz);
            }
            Some((n, _)) => {
                let bad = |reason: &str| Error::MalformedEntry {
                    line: lineno,
                    reason: reason.to_string(),
                };
                let row: usize = tok.next().and_then(|s| s.parse().ok()).ok_or_else(|| bad("missing row index"))?;
                let col: usize = tok.next().and_then(|s| s.parse().ok()).ok_or_else(|| bad("missing column index"))?;
                if row == 0 || col == 0 || row > n || col > n {
                    return Err(Error::IndexOutOfRange {
                        line: lineno,
                        row,
                        col,
                        n,
                    });
                }
                let value = match field {
                    Field::Pattern => 1.0,
                    Field::Real => tok
                        .next()
                        .and_then(|s| s.parse::<f64>().ok())
                        .ok_or_else(|| bad("missing or unparsable value"))?,
                };
                triplets.push((row - 1, col - 1, value));
            }
        }
    }

    let (n, expected) = size.ok_or_else(|| Error::MalformedHeader {
        line: last_line,
        reason: "missing size line".into(),
    })?;
    if triplets.len() != expected {
        return Err(Error::EntryCount {
            expected,
            found: triplets.len(),
        });
    }

    match field {
        Field::Real => SymmetricMatrix::from_triplets(n, &triplets),
        Field::Pattern => synthesize_pattern_values(n, &triplets),
    }
}

fn parse_header(line: usize, header: &str) -> Result<Field> {
    let words: Vec<String> = header.split_whitespace().map(|w| w.to_ascii_lowercase()).collect();
    let malformed = |reason: &str| Error::MalformedHeader {
        line,
        reason: reason.to_string(),
    };
    if words.len() != 5 || words[0] != "%%matrixmarket" {
        return Err(malformed("expected '%%MatrixMarket matrix coordinate <field> <symmetry>'"));
    }
    if words[1] != "matrix" {
        return Err(malformed("object must be 'matrix'"));
    }
    if words[2] != "coordinate" {
        return Err(malformed("only the coordinate format is supported"));
    }
    let field = match words[3].as_str() {
        "real" | "integer" | "double" => Field::Real,
        "pattern" => Field::Pattern,
        other => return Err(malformed(&format!("unsupported field '{other}'"))),
    };
    if words[4] != "symmetric" {
        return Err(Error::NotSymmetric {
            line,
            found: words[4].clone(),
        });
    }
    Ok(field)
}

fn synthesize_pattern_values(n: usize, entries: &[(usize, usize, f64)]) -> Result<SymmetricMatrix> {
    let mut off: Vec<(usize, usize)> = entries
        .iter()
        .filter(|&&(i, j, _)| i != j)
        .map(|&(i, j, _)| if i > j { (i, j) } else { (j, i) })
        .collect();
    off.sort_unstable();
    off.dedup();
    let mut degree = vec![0usize; n];
    for &(i, j) in &off {
        degree[i] += 1;
        degree[j] += 1;
    }
    let mut triplets: Vec<(usize, usize, f64)> = off.into_iter().map(|(i, j)| (i, j, -1.0)).collect();
    triplets.extend((0..n).map(|j| (j, j, degree[j] as f64 + 1.0)));
    SymmetricMatrix::from_triplets(n, &triplets)
}

/// Writes the lower triangle as `coordinate real symmetric`, using the
/// shortest decimal form that reads back to the same `f64`.
pub fn write_matrix_market(a: &SymmetricMatrix, mut out: impl Write) -> Result<()> {
    writeln!(out, "%%MatrixMarket matrix coordinate real symmetric")?;
    writeln!(out, "{} {} {}", a.n(), a.n(), a.nnz())?;
    for j in 0..a.n() {
        let (rows, vals) = a.column(j);
        for (&i, &v) in rows.iter().zip(vals) {
            writeln!(out, "{} {} {:?}", i + 1, j + 1, v)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<SymmetricMatrix> {
        parse_matrix_market(s.as_bytes())
    }

    #[test]
    fn single_entry() {
        let a = parse("%%MatrixMarket matrix coordinate real symmetric\n1 1 1\n1 1 4.0\n").unwrap();
        assert_eq!(a.n(), 1);
        assert_eq!(a.values(), &[4.0]);
    }

    #[test]
    fn upper_entry_is_mirrored() {
        let a = parse(
            "%%MatrixMarket matrix coordinate real symmetric\n% comment\n5 5 3\n2 5 -1.5\n2 2 3\n5 5 3\n",
        )
        .unwrap();
        assert_eq!(a.pattern().column(1), &[1, 4]);
        assert_eq!(a.get(4, 1), -1.5);
        assert_eq!(a.inserted_diagonals(), &[0, 2, 3]);
    }

    #[test]
    fn duplicates_are_summed() {
        let a = parse("%%MatrixMarket matrix coordinate real symmetric\n2 2 4\n1 1 1\n2 2 1\n2 1 0.25\n1 2 0.5\n").unwrap();
        assert_eq!(a.get(1, 0), 0.75);
    }

    #[test]
    fn pattern_values_are_diagonally_dominant() {
        let a = parse("%%MatrixMarket matrix coordinate pattern symmetric\n3 3 2\n2 1\n3 1\n").unwrap();
        assert_eq!(a.get(0, 0), 3.0);
        assert_eq!(a.get(1, 1), 2.0);
        assert_eq!(a.get(2, 0), -1.0);
    }

    #[test]
    fn errors_name_the_line() {
        match parse("%%MatrixMarket matrix array real symmetric\n") {
            Err(Error::MalformedHeader { line: 1, .. }) => {}
            other => panic!("{other:?}"),
        }
        match parse("%%MatrixMarket matrix coordinate real general\n1 1 1\n1 1 1\n") {
            Err(Error::NotSymmetric { line: 1, .. }) => {}
            other => panic!("{other:?}"),
        }
        match parse("%%MatrixMarket matrix coordinate real symmetric\n%c\n2 2 1\n3 1 1.0\n") {
            Err(Error::IndexOutOfRange { line: 4, row: 3, .. }) => {}
            other => panic!("{other:?}"),
        }
        match parse("%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n1 1 x\n") {
            Err(Error::MalformedEntry { line: 3, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse("%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n1 1 1\n"),
            Err(Error::EntryCount { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn write_then_read_is_exact() {
        let a = SymmetricMatrix::from_triplets(3, &[(0, 0, 0.1), (1, 1, 1.0 / 3.0), (2, 2, 1e-300), (2, 0, -7.25e10)]).unwrap();
        let mut buf = Vec::new();
        write_matrix_market(&a, &mut buf).unwrap();
        let b = parse_matrix_market(&buf[..]).unwrap();
        assert_eq!(a.pattern(), b.pattern());
        assert_eq!(a.values(), b.values());
    }
}
