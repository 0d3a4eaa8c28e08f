//! Dictionary-encoded categorical matrices and the one-time column presort.
//!
//! Every cell is stored as a dense integer code. Codes within a column are
//! assigned in ascending order of the original tokens, so comparing codes is
//! the same as comparing the values they stand for. A column whose tokens all
//! parse as numbers is ordered numerically; any other column is ordered by
//! the raw token bytes.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fs::File;
use std::io::Read;
use std::path::Path;

use crate::error::{Error, Result};

/// Dense per-column cell code.
pub type Code = u32;

/// How the tokens of a column are ordered.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnOrder {
    Numeric,
    Lexical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Tsv,
}

impl Format {
    pub fn delimiter(self) -> char {
        match self {
            Format::Csv => ',',
            Format::Tsv => '\t',
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
struct Column {
    codes: Vec<Code>,
    /// `tokens[c]` is the original spelling of code `c`.
    tokens: Vec<String>,
    order: ColumnOrder,
}

/// An `m x n` categorical matrix. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    rows: usize,
    columns: Vec<Column>,
    names: Option<Vec<String>>,
}

fn parse_number(token: &str) -> Option<f64> {
    token.parse::<f64>().ok().filter(|v| !v.is_nan())
}

fn compare_tokens(order: ColumnOrder, a: &str, b: &str) -> Ordering {
    match order {
        ColumnOrder::Numeric => {
            let (x, y) = (parse_number(a), parse_number(b));
            match (x, y) {
                (Some(x), Some(y)) => x.total_cmp(&y).then_with(|| a.cmp(b)),
                _ => a.cmp(b),
            }
        }
        ColumnOrder::Lexical => a.as_bytes().cmp(b.as_bytes()),
    }
}

fn encode_column<S: AsRef<str>>(tokens: &[S]) -> Column {
    let order = if tokens.iter().all(|t| parse_number(t.as_ref()).is_some()) {
        ColumnOrder::Numeric
    } else {
        ColumnOrder::Lexical
    };
    let mut distinct: Vec<&str> = tokens.iter().map(|t| t.as_ref()).collect();
    distinct.sort_unstable();
    distinct.dedup();
    distinct.sort_by(|a, b| compare_tokens(order, a, b));
    let lookup: HashMap<&str, Code> = distinct
        .iter()
        .enumerate()
        .map(|(code, tok)| (*tok, code as Code))
        .collect();
    let codes = tokens.iter().map(|t| lookup[t.as_ref()]).collect();
    Column {
        codes,
        tokens: distinct.into_iter().map(str::to_owned).collect(),
        order,
    }
}

impl DataMatrix {
    /// Builds a matrix from columns of raw tokens.
    pub fn from_token_columns<S: AsRef<str>>(columns: &[Vec<S>]) -> Result<Self> {
        let rows = columns.first().map_or(0, Vec::len);
        if rows == 0 {
            return Err(Error::EmptyInput);
        }
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::RaggedInput {
                    record: j,
                    expected: rows,
                    found: col.len(),
                });
            }
        }
        Ok(DataMatrix {
            rows,
            columns: columns.iter().map(|c| encode_column(c)).collect(),
            names: None,
        })
    }

    /// Builds a matrix from integer-valued columns. Values are re-encoded
    /// densely, so gaps in the value range disappear.
    pub fn from_value_columns(columns: &[Vec<u32>]) -> Result<Self> {
        let rows = columns.first().map_or(0, Vec::len);
        if rows == 0 {
            return Err(Error::EmptyInput);
        }
        let mut encoded = Vec::with_capacity(columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::RaggedInput {
                    record: j,
                    expected: rows,
                    found: col.len(),
                });
            }
            let mut distinct = col.clone();
            distinct.sort_unstable();
            distinct.dedup();
            let codes = col.iter().map(|v| distinct.binary_search(v).unwrap() as Code).collect();
            encoded.push(Column {
                codes,
                tokens: distinct.iter().map(u32::to_string).collect(),
                order: ColumnOrder::Numeric,
            });
        }
        Ok(DataMatrix {
            rows,
            columns: encoded,
            names: None,
        })
    }

    /// Row-major convenience constructor over integer values.
    pub fn from_rows(rows: &[Vec<u32>]) -> Result<Self> {
        let width = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || width == 0 {
            return Err(Error::EmptyInput);
        }
        if let Some((record, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != width) {
            return Err(Error::RaggedInput {
                record,
                expected: width,
                found: row.len(),
            });
        }
        let columns: Vec<Vec<u32>> = (0..width).map(|j| rows.iter().map(|r| r[j]).collect()).collect();
        Self::from_value_columns(&columns)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> &[Code] {
        &self.columns[j].codes
    }

    pub fn get(&self, row: usize, col: usize) -> Code {
        self.columns[col].codes[row]
    }

    /// Number of distinct values in column `j`.
    pub fn arity(&self, j: usize) -> usize {
        self.columns[j].tokens.len()
    }

    pub fn arities(&self) -> Vec<usize> {
        (0..self.cols()).map(|j| self.arity(j)).collect()
    }

    pub fn column_order(&self, j: usize) -> ColumnOrder {
        self.columns[j].order
    }

    /// Original token for `code` in column `j`.
    pub fn token(&self, j: usize, code: Code) -> &str {
        &self.columns[j].tokens[code as usize]
    }

    pub fn decode(&self, row: usize, col: usize) -> &str {
        self.token(col, self.get(row, col))
    }

    pub fn encode(&self, j: usize, token: &str) -> Option<Code> {
        let column = &self.columns[j];
        column
            .tokens
            .binary_search_by(|t| compare_tokens(column.order, t, token))
            .ok()
            .map(|c| c as Code)
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    pub fn check_column(&self, j: usize) -> Result<()> {
        if j < self.cols() {
            Ok(())
        } else {
            Err(Error::ColumnOutOfRange {
                column: j,
                cols: self.cols(),
            })
        }
    }

    /// The first `rows` rows, re-encoded so that codes stay dense.
    pub fn head(&self, rows: usize) -> Result<DataMatrix> {
        let rows = rows.min(self.rows);
        let columns: Vec<Vec<&str>> = (0..self.cols())
            .map(|j| (0..rows).map(|r| self.decode(r, j)).collect())
            .collect();
        let mut out = Self::from_token_columns(&columns)?;
        out.names = self.names.clone();
        Ok(out)
    }
}

/// Reads a delimited text matrix. Blank lines are skipped, fields are
/// trimmed of surrounding ASCII whitespace, and no quoting is recognised.
pub fn load_matrix<R: Read>(mut source: R, format: Format, header: bool) -> Result<DataMatrix> {
    let mut bytes = Vec::new();
    source.read_to_end(&mut bytes).map_err(|e| Error::Io(e.to_string()))?;
    parse_matrix(&bytes, format, header)
}

pub fn load_matrix_path(path: &Path, format: Format, header: bool) -> Result<DataMatrix> {
    let file = File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    load_matrix(file, format, header)
}

/// Parses an in-memory delimited matrix.
pub fn parse_matrix(bytes: &[u8], format: Format, header: bool) -> Result<DataMatrix> {
    let delim = format.delimiter();
    let mut names = None;
    let mut columns: Vec<Vec<&str>> = Vec::new();
    let mut record = 0usize;
    let mut header_pending = header;

    for (line_no, raw) in bytes.split(|&b| b == b'\n').enumerate() {
        let raw = raw.strip_suffix(b"\r").unwrap_or(raw);
        if raw.is_empty() {
            continue;
        }
        let line = std::str::from_utf8(raw).map_err(|_| Error::InvalidUtf8 { line: line_no })?;
        let fields: Vec<&str> = line.split(delim).map(str::trim).collect();

        if header_pending {
            header_pending = false;
            names = Some(fields.iter().map(|s| s.to_string()).collect::<Vec<_>>());
            continue;
        }
        if columns.is_empty() {
            let expected = names.as_ref().map_or(fields.len(), Vec::len);
            if fields.len() != expected {
                return Err(Error::RaggedInput {
                    record,
                    expected,
                    found: fields.len(),
                });
            }
            columns = vec![Vec::new(); fields.len()];
        } else if fields.len() != columns.len() {
            return Err(Error::RaggedInput {
                record,
                expected: columns.len(),
                found: fields.len(),
            });
        }
        for (j, field) in fields.into_iter().enumerate() {
            if field.is_empty() {
                return Err(Error::EmptyField { record, column: j });
            }
            columns[j].push(field);
        }
        record += 1;
    }

    if record == 0 {
        return Err(Error::EmptyInput);
    }
    let mut matrix = DataMatrix::from_token_columns(&columns)?;
    matrix.names = names;
    Ok(matrix)
}

/// Per-column permutations listing row indices in nondecreasing value order,
/// ties in ascending row order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnPresort {
    rows: usize,
    idx: Vec<Vec<u32>>,
}

impl ColumnPresort {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.idx.len()
    }

    pub fn column(&self, j: usize) -> &[u32] {
        &self.idx[j]
    }

    /// Accepts a caller-supplied presort, e.g. one with a different tie order.
    /// Fails unless every column is a permutation that traverses `matrix`
    /// in nondecreasing order.
    pub fn from_columns(matrix: &DataMatrix, idx: Vec<Vec<u32>>) -> Result<Self> {
        if idx.len() != matrix.cols() {
            return Err(Error::ColumnOutOfRange {
                column: idx.len(),
                cols: matrix.cols(),
            });
        }
        let m = matrix.rows();
        for (j, perm) in idx.iter().enumerate() {
            if perm.len() != m {
                return Err(Error::RankVectorLengthMismatch {
                    expected: m,
                    found: perm.len(),
                });
            }
            let mut seen = vec![false; m];
            for &r in perm {
                let r = r as usize;
                if r >= m || std::mem::replace(&mut seen[r], true) {
                    return Err(Error::InconsistentPartition(format!(
                        "presort column {j} is not a permutation"
                    )));
                }
            }
            let values = matrix.column(j);
            if perm.windows(2).any(|w| values[w[0] as usize] > values[w[1] as usize]) {
                return Err(Error::InconsistentPartition(format!(
                    "presort column {j} is not nondecreasing"
                )));
            }
        }
        Ok(ColumnPresort { rows: m, idx })
    }
}

/// Stable per-column sort of row indices. `O(n m log m)`.
pub fn presort_columns(matrix: &DataMatrix) -> ColumnPresort {
    let m = matrix.rows();
    let idx = (0..matrix.cols())
        .map(|j| {
            let values = matrix.column(j);
            let mut perm: Vec<u32> = (0..m as u32).collect();
            // slice::sort_by_key is stable
            perm.sort_by_key(|&r| values[r as usize]);
            perm
        })
        .collect();
    ColumnPresort { rows: m, idx }
}

#[cfg(test)]
mod tests {
    use super::*;

    use crate::testdata::EXAMPLE_D;

    #[test]
    fn loads_example_matrix() {
        let d = parse_matrix(EXAMPLE_D.as_bytes(), Format::Csv, false).unwrap();
        assert_eq!((d.rows(), d.cols()), (10, 5));
        assert_eq!(d.arities(), vec![2, 2, 2, 3, 2]);
    }

    #[test]
    fn singleton() {
        let d = parse_matrix(b"7", Format::Csv, false).unwrap();
        assert_eq!((d.rows(), d.cols(), d.get(0, 0), d.arity(0)), (1, 1, 0, 1));
        assert_eq!(d.decode(0, 0), "7");
    }

    #[test]
    fn lexical_dictionary() {
        let d = parse_matrix(b"b\na\na\n", Format::Csv, false).unwrap();
        assert_eq!(d.column(0), &[1, 0, 0]);
        assert_eq!(d.arity(0), 2);
        assert_eq!(d.column_order(0), ColumnOrder::Lexical);
        assert_eq!(d.encode(0, "b"), Some(1));
        assert_eq!(d.encode(0, "c"), None);
    }

    #[test]
    fn numeric_columns_order_by_value() {
        let d = parse_matrix(b"10\n9\n-2.5\n100\n", Format::Csv, false).unwrap();
        assert_eq!(d.column_order(0), ColumnOrder::Numeric);
        assert_eq!(d.column(0), &[2, 1, 0, 3]);
    }

    #[test]
    fn mixed_column_falls_back_to_bytes() {
        let d = parse_matrix(b"10\n9\nx\n", Format::Csv, false).unwrap();
        assert_eq!(d.column_order(0), ColumnOrder::Lexical);
        // "10" < "9" < "x" bytewise
        assert_eq!(d.column(0), &[0, 1, 2]);
    }

    #[test]
    fn header_and_crlf_and_tsv() {
        let d = parse_matrix(b"a\tb\r\n1\t2\r\n3\t4\r\n", Format::Tsv, true).unwrap();
        assert_eq!(d.names().unwrap(), &["a".to_string(), "b".to_string()]);
        assert_eq!(d.rows(), 2);
        assert_eq!(d.decode(1, 1), "4");
    }

    #[test]
    fn ragged_reports_record() {
        let err = parse_matrix(b"1,2\n3,4\n5\n", Format::Csv, false).unwrap_err();
        assert_eq!(
            err,
            Error::RaggedInput {
                record: 2,
                expected: 2,
                found: 1
            }
        );
    }

    #[test]
    fn empty_inputs_rejected() {
        assert_eq!(parse_matrix(b"", Format::Csv, false), Err(Error::EmptyInput));
        assert_eq!(parse_matrix(b"a,b\n", Format::Csv, true), Err(Error::EmptyInput));
        assert_eq!(
            parse_matrix(b"1,,2\n", Format::Csv, false),
            Err(Error::EmptyField { record: 0, column: 1 })
        );
    }

    #[test]
    fn invalid_utf8_rejected() {
        assert!(matches!(
            parse_matrix(b"1\n\xff\n", Format::Csv, false),
            Err(Error::InvalidUtf8 { line: 1 })
        ));
    }

    #[test]
    fn presort_example_column() {
        let d = parse_matrix(EXAMPLE_D.as_bytes(), Format::Csv, false).unwrap();
        let q = presort_columns(&d);
        assert_eq!(q.column(3), &[4, 5, 8, 9, 0, 1, 3, 7, 2, 6]);
    }

    #[test]
    fn presort_constant_and_decreasing() {
        let d = DataMatrix::from_value_columns(&[vec![5; 4], vec![3, 2, 1, 0]]).unwrap();
        let q = presort_columns(&d);
        assert_eq!(q.column(0), &[0, 1, 2, 3]);
        assert_eq!(q.column(1), &[3, 2, 1, 0]);
    }

    #[test]
    fn presort_with_other_tie_order_is_accepted() {
        let d = parse_matrix(EXAMPLE_D.as_bytes(), Format::Csv, false).unwrap();
        let mut idx: Vec<Vec<u32>> = (0..5).map(|j| presort_columns(&d).column(j).to_vec()).collect();
        idx[3] = vec![4, 5, 9, 8, 0, 7, 1, 3, 2, 6];
        assert!(ColumnPresort::from_columns(&d, idx.clone()).is_ok());
        idx[3].swap(0, 9);
        assert!(ColumnPresort::from_columns(&d, idx).is_err());
    }

    #[test]
    fn head_reencodes() {
        let d = DataMatrix::from_value_columns(&[vec![4, 0, 9]]).unwrap();
        let h = d.head(2).unwrap();
        assert_eq!(h.column(0), &[1, 0]);
        assert_eq!(h.arity(0), 2);
        assert_eq!(h.decode(0, 0), "4");
    }
}
