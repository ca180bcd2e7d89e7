use std::io::Read;
use std::path::Path;

use super::TimeSeries;
use crate::error::{Error, Result};

/// Which CSV column to read: a zero-based index or a header name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnSelector {
    Index(usize),
    Name(String),
}

impl std::str::FromStr for ColumnSelector {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s.parse::<usize>() {
            Ok(i) => ColumnSelector::Index(i),
            Err(_) => ColumnSelector::Name(s.to_string()),
        })
    }
}

/// Reads one numeric column of a UTF-8 CSV file into a series.
///
/// Selecting by name implies a header row. Rows whose cells are all empty are
/// skipped; any other unparseable cell is an error naming its 1-based row.
pub fn load_csv(path: impl AsRef<Path>, column: &ColumnSelector, skip_header: bool) -> Result<TimeSeries> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    read_column(file, column, skip_header)
}

pub fn read_column<R: Read>(reader: R, column: &ColumnSelector, skip_header: bool) -> Result<TimeSeries> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let has_header = skip_header || matches!(column, ColumnSelector::Name(_));
    let mut index = match column {
        ColumnSelector::Index(i) => Some(*i),
        ColumnSelector::Name(_) => None,
    };

    let mut values = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| Error::Csv {
            row,
            message: e.to_string(),
        })?;
        if row == 1 && has_header {
            if let ColumnSelector::Name(name) = column {
                index = Some(
                    record
                        .iter()
                        .position(|h| h == name)
                        .ok_or_else(|| Error::ColumnNotFound(name.clone()))?,
                );
            }
            continue;
        }
        if record.iter().all(str::is_empty) {
            continue;
        }
        let col = index.expect("column resolved from header");
        let cell = record.get(col).ok_or_else(|| Error::Csv {
            row,
            message: format!("row has {} cells, column {col} requested", record.len()),
        })?;
        let v: f64 = cell.parse().map_err(|_| Error::Parse {
            row,
            value: cell.to_string(),
        })?;
        if !v.is_finite() {
            return Err(Error::Parse {
                row,
                value: cell.to_string(),
            });
        }
        values.push(v);
    }
    if values.is_empty() {
        return Err(Error::EmptyColumn);
    }
    TimeSeries::new(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn read(body: &str, col: ColumnSelector, skip: bool) -> Result<TimeSeries> {
        read_column(body.as_bytes(), &col, skip)
    }

    #[test]
    fn plain_column() {
        let s = read("1.0\n2.0\n3.0", ColumnSelector::Index(0), false).unwrap();
        assert_eq!(s.values(), &[1.0, 2.0, 3.0]);
        assert_eq!(s.sampling_interval(), 1.0);
    }

    #[test]
    fn header_skipped() {
        let s = read("ret\n0.1\n-0.1\n", ColumnSelector::Index(0), true).unwrap();
        assert_eq!(s.values(), &[0.1, -0.1]);
    }

    #[test]
    fn select_by_name() {
        let s = read("date,price\nd1,10\nd2,11\n", "price".parse().unwrap(), false).unwrap();
        assert_eq!(s.values(), &[10.0, 11.0]);
        assert!(matches!(
            read("a,b\n1,2\n", ColumnSelector::Name("c".into()), false),
            Err(Error::ColumnNotFound(_))
        ));
    }

    #[test]
    fn unparseable_cell_names_row() {
        let err = read("1.0\nabc\n3.0", ColumnSelector::Index(0), false).unwrap_err();
        assert!(matches!(err, Error::Parse { row: 2, ref value } if value == "abc"));
        assert!(err.to_string().contains("row 2"));
    }

    #[test]
    fn blank_rows_skipped() {
        let s = read("1\n\n,\n2\n", ColumnSelector::Index(0), false).unwrap();
        assert_eq!(s.values(), &[1.0, 2.0]);
    }

    #[test]
    fn empty_and_missing() {
        assert!(matches!(read("x\n", ColumnSelector::Index(0), true), Err(Error::EmptyColumn)));
        assert!(matches!(
            load_csv("/definitely/not/here.csv", &ColumnSelector::Index(0), false),
            Err(Error::Io { .. })
        ));
        assert!(matches!(read("1,2\n3\n", ColumnSelector::Index(1), false), Err(Error::Csv { row: 2, .. })));
    }
}
