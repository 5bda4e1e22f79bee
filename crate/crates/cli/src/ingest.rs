//! Numeric column ingestion from delimited text.

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};

/// Which column to read: a header name or a 0-based index.
#[derive(Debug, Clone, PartialEq)]
pub enum ColumnSelector {
    Index(usize),
    Name(String),
}

impl ColumnSelector {
    pub fn parse(raw: &str) -> Self {
        match raw.trim().parse::<usize>() {
            Ok(i) => Self::Index(i),
            Err(_) => Self::Name(raw.trim().to_string()),
        }
    }
}

/// Reads one numeric column.
///
/// Without a selector the first column is used and the first row is taken as
/// a header only if its cell does not parse as a number. A named selector
/// requires a header row. Any cell that fails to parse, or is not finite,
/// aborts with its line number.
pub fn read_column(path: &Path, column: Option<&ColumnSelector>) -> Result<Vec<f64>> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_column(&text, column)
}

pub fn parse_column(text: &str, column: Option<&ColumnSelector>) -> Result<Vec<f64>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut records = reader.records().peekable();

    let first = match records.peek() {
        Some(Ok(r)) => Some(r.clone()),
        Some(Err(e)) => bail!("malformed input: {e}"),
        None => None,
    };
    let Some(first) = first else {
        return Ok(Vec::new());
    };

    let (index, skip_header) = match column {
        Some(ColumnSelector::Name(name)) => {
            let idx = first
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| anyhow!("column '{name}' not found in header"))?;
            (idx, true)
        }
        Some(ColumnSelector::Index(i)) => (*i, parse_cell(first.get(*i).unwrap_or("")).is_none()),
        None => (0, parse_cell(first.get(0).unwrap_or("")).is_none()),
    };
    if skip_header {
        records.next();
    }

    let mut values = Vec::new();
    for rec in records {
        let rec = rec.map_err(|e| anyhow!("malformed input: {e}"))?;
        let line = rec.position().map_or(0, |p| p.line());
        let cell = rec
            .get(index)
            .ok_or_else(|| anyhow!("line {line}: missing column {index}"))?;
        let v = parse_cell(cell)
            .ok_or_else(|| anyhow!("line {line}: '{cell}' is not a finite number"))?;
        values.push(v);
    }
    Ok(values)
}

fn parse_cell(cell: &str) -> Option<f64> {
    cell.parse::<f64>().ok().filter(|v| v.is_finite())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn headerless_single_column() {
        assert_eq!(
            parse_column("1\n2.5\n-3e1\n", None).unwrap(),
            vec![1.0, 2.5, -30.0]
        );
    }

    #[test]
    fn header_is_detected() {
        assert_eq!(parse_column("y\n1\n2\n", None).unwrap(), vec![1.0, 2.0]);
    }

    #[test]
    fn named_and_indexed_columns() {
        let text = "site,lead\na,7.1\nb,8.2\n";
        let by_name = parse_column(text, Some(&ColumnSelector::parse("lead"))).unwrap();
        let by_index = parse_column(text, Some(&ColumnSelector::parse("1"))).unwrap();
        assert_eq!(by_name, vec![7.1, 8.2]);
        assert_eq!(by_index, by_name);
    }

    #[test]
    fn bad_cell_names_its_line() {
        let err = parse_column("1\n2\nabc\n4\n", None)
            .unwrap_err()
            .to_string();
        assert!(err.contains("line 3"), "{err}");
        let err = parse_column("y\n1\nNaN\n", None).unwrap_err().to_string();
        assert!(err.contains("line 3"), "{err}");
    }

    #[test]
    fn missing_name_is_an_error() {
        assert!(parse_column("a,b\n1,2\n", Some(&ColumnSelector::parse("c"))).is_err());
    }
}
