//! Strict CSV readers and writers for the pipeline's file schemas.
//!
//! | file                 | header                          |
//! |----------------------|---------------------------------|
//! | monthly sales        | `Month,Sales`                   |
//! | annual sales         | `Year,Sales`                    |
//! | search trends        | `Month,Frequency`               |
//! | annual factors       | `Year,<4 features>,Sales`       |
//!
//! Headers are matched case-insensitively, LF and CRLF line endings are both
//! accepted, and writers always emit LF with the shortest decimal
//! representation that round-trips.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;

use crate::forest::FactorTable;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("line {line}: expected header `{expected}`, found `{found}`")]
    Header { line: u64, expected: String, found: String },
    #[error("missing column: expected {expected} columns, line {line} has {found}")]
    MissingColumn { line: u64, expected: usize, found: usize },
    #[error("line {line}: invalid month `{text}`")]
    InvalidMonth { line: u64, text: String },
    #[error("line {line}: invalid year `{text}`")]
    InvalidYear { line: u64, text: String },
    #[error("line {line}: frequency out of range: {value}")]
    FrequencyOutOfRange { line: u64, value: i64 },
    #[error("line {line}: column `{column}` is not numeric: `{text}`")]
    NotNumeric { line: u64, column: String, text: String },
    #[error("line {line}: negative sales: {value}")]
    NegativeSales { line: u64, value: f64 },
    #[error("non-finite value {value} at {key}")]
    NonFinite { key: String, value: f64 },
    #[error("duplicate key {key}")]
    Duplicate { key: String },
    #[error("gap in monthly series: {after} is followed by {next}")]
    Gap { after: MonthKey, next: MonthKey },
    #[error("year {year} has {months} trend months, expected 12")]
    IncompleteYear { year: i32, months: usize },
    #[error("series is empty")]
    Empty,
}

type Result<T, E = IngestError> = std::result::Result<T, E>;

/// Calendar month, ordered by `(year, month)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MonthKey {
    year: i32,
    month: u8,
}

impl MonthKey {
    /// Returns `None` when `month` is outside `1..=12`.
    pub fn new(year: i32, month: u32) -> Option<Self> {
        (1..=12).contains(&month).then_some(Self {
            year,
            month: month as u8,
        })
    }

    pub fn year(self) -> i32 {
        self.year
    }

    pub fn month(self) -> u32 {
        u32::from(self.month)
    }

    /// Months since year 0, used for offset arithmetic.
    fn ordinal(self) -> i64 {
        i64::from(self.year) * 12 + i64::from(self.month) - 1
    }

    fn from_ordinal(ordinal: i64) -> Self {
        Self {
            year: ordinal.div_euclid(12) as i32,
            month: (ordinal.rem_euclid(12) + 1) as u8,
        }
    }

    /// The key `months` calendar months later (earlier when negative).
    pub fn offset(self, months: i64) -> Self {
        Self::from_ordinal(self.ordinal() + months)
    }

    pub fn succ(self) -> Self {
        self.offset(1)
    }

    /// Signed number of months from `self` to `other`.
    pub fn months_until(self, other: MonthKey) -> i64 {
        other.ordinal() - self.ordinal()
    }
}

impl fmt::Display for MonthKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}", self.year, self.month)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid month key `{0}`")]
pub struct ParseMonthKeyError(String);

impl FromStr for MonthKey {
    type Err = ParseMonthKeyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseMonthKeyError(s.to_string());
        let (y, m) = s.trim().split_once('-').ok_or_else(err)?;
        if y.len() != 4 || m.len() != 2 {
            return Err(err());
        }
        let year: i32 = y.parse().map_err(|_| err())?;
        let month: u32 = m.parse().map_err(|_| err())?;
        MonthKey::new(year, month).ok_or_else(err)
    }
}

/// Contiguous monthly series: one finite value per calendar month from
/// `start` onwards.
#[derive(Debug, Clone, PartialEq)]
pub struct MonthlySeries {
    start: MonthKey,
    values: Vec<f64>,
}

impl MonthlySeries {
    pub fn new(start: MonthKey, values: Vec<f64>) -> Result<Self> {
        for (i, &v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(IngestError::NonFinite {
                    key: start.offset(i as i64).to_string(),
                    value: v,
                });
            }
        }
        Ok(Self { start, values })
    }

    /// Builds a series from unordered entries, rejecting duplicates and gaps.
    pub fn from_entries(entries: impl IntoIterator<Item = (MonthKey, f64)>) -> Result<Self> {
        let mut entries: Vec<_> = entries.into_iter().collect();
        entries.sort_by_key(|&(k, _)| k);
        let Some(&(start, _)) = entries.first() else {
            return Err(IngestError::Empty);
        };
        for pair in entries.windows(2) {
            let (a, b) = (pair[0].0, pair[1].0);
            if a == b {
                return Err(IngestError::Duplicate { key: a.to_string() });
            }
            if a.succ() != b {
                return Err(IngestError::Gap { after: a, next: b });
            }
        }
        Self::new(start, entries.into_iter().map(|(_, v)| v).collect())
    }

    pub fn start(&self) -> MonthKey {
        self.start
    }

    /// Last month covered. Equal to `start` for an empty series.
    pub fn end(&self) -> MonthKey {
        self.start.offset(self.values.len().saturating_sub(1) as i64)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn keys(&self) -> impl Iterator<Item = MonthKey> + '_ {
        (0..self.values.len()).map(|i| self.start.offset(i as i64))
    }

    pub fn iter(&self) -> impl Iterator<Item = (MonthKey, f64)> + '_ {
        self.keys().zip(self.values.iter().copied())
    }

    pub fn get(&self, key: MonthKey) -> Option<f64> {
        let idx = self.start.months_until(key);
        usize::try_from(idx).ok().and_then(|i| self.values.get(i).copied())
    }

    /// Index of `key` within the series, if covered.
    pub fn index_of(&self, key: MonthKey) -> Option<usize> {
        let idx = usize::try_from(self.start.months_until(key)).ok()?;
        (idx < self.values.len()).then_some(idx)
    }

    /// Replaces the values while keeping the calendar alignment.
    pub fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        Self::new(self.start, values)
    }

    /// Sub-series of `len` months beginning at position `offset`.
    pub fn slice(&self, offset: usize, len: usize) -> Self {
        Self {
            start: self.start.offset(offset as i64),
            values: self.values[offset..offset + len].to_vec(),
        }
    }
}

/// Year-indexed nonnegative totals.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AnnualSeries {
    entries: BTreeMap<i32, f64>,
}

impl AnnualSeries {
    pub fn from_entries(entries: impl IntoIterator<Item = (i32, f64)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (year, value) in entries {
            if !value.is_finite() {
                return Err(IngestError::NonFinite {
                    key: year.to_string(),
                    value,
                });
            }
            if value < 0.0 {
                return Err(IngestError::NegativeSales { line: 0, value });
            }
            if map.insert(year, value).is_some() {
                return Err(IngestError::Duplicate { key: year.to_string() });
            }
        }
        Ok(Self { entries: map })
    }

    pub fn get(&self, year: i32) -> Option<f64> {
        self.entries.get(&year).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, f64)> + '_ {
        self.entries.iter().map(|(&y, &v)| (y, v))
    }

    pub fn years(&self) -> impl Iterator<Item = i32> + '_ {
        self.entries.keys().copied()
    }

    pub fn first_year(&self) -> Option<i32> {
        self.entries.keys().next().copied()
    }

    pub fn last_year(&self) -> Option<i32> {
        self.entries.keys().next_back().copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Monthly relative search frequencies (0-100), complete calendar years only.
#[derive(Debug, Clone, PartialEq)]
pub struct TrendTable {
    entries: BTreeMap<MonthKey, u8>,
}

impl TrendTable {
    pub fn from_entries(entries: impl IntoIterator<Item = (MonthKey, u8)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (key, freq) in entries {
            if freq > 100 {
                return Err(IngestError::FrequencyOutOfRange {
                    line: 0,
                    value: i64::from(freq),
                });
            }
            if map.insert(key, freq).is_some() {
                return Err(IngestError::Duplicate { key: key.to_string() });
            }
        }
        let mut counts: BTreeMap<i32, usize> = BTreeMap::new();
        for key in map.keys() {
            *counts.entry(key.year()).or_default() += 1;
        }
        if let Some((&year, &months)) = counts.iter().find(|(_, &n)| n != 12) {
            return Err(IngestError::IncompleteYear { year, months });
        }
        Ok(Self { entries: map })
    }

    pub fn get(&self, key: MonthKey) -> Option<u8> {
        self.entries.get(&key).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (MonthKey, u8)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }

    pub fn years(&self) -> Vec<i32> {
        let mut years: Vec<i32> = self.entries.keys().map(|k| k.year()).collect();
        years.dedup();
        years
    }

    /// January..December frequencies of `year`, if the year is present.
    pub fn year_frequencies(&self, year: i32) -> Option<[u8; 12]> {
        let mut out = [0u8; 12];
        for (m, slot) in out.iter_mut().enumerate() {
            *slot = self.get(MonthKey::new(year, m as u32 + 1)?)?;
        }
        Some(out)
    }
}

struct Row {
    line: u64,
    cells: Vec<String>,
}

fn open(path: &Path) -> Result<String> {
    let mut text = String::new();
    fs::File::open(path)
        .and_then(|mut f| f.read_to_string(&mut text))
        .map_err(|source| IngestError::Io {
            path: path.to_path_buf(),
            source,
        })?;
    Ok(text)
}

/// Splits `text` into a validated header and data rows of exactly
/// `header.len()` cells. `header` entries of `None` accept any name.
fn parse_table(text: &str, header: &[Option<&str>]) -> Result<(Vec<String>, Vec<Row>)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    let mut names = None;
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        if record.iter().all(str::is_empty) {
            continue;
        }
        let cells: Vec<String> = record.iter().map(str::to_string).collect();
        if names.is_none() {
            let expected = header.iter().map(|h| h.unwrap_or("*")).collect::<Vec<_>>().join(",");
            let matches = cells.len() == header.len()
                && cells
                    .iter()
                    .zip(header)
                    .all(|(c, h)| h.is_none_or(|h| c.eq_ignore_ascii_case(h)));
            if !matches {
                if cells.len() != header.len() {
                    return Err(IngestError::MissingColumn {
                        line,
                        expected: header.len(),
                        found: cells.len(),
                    });
                }
                return Err(IngestError::Header {
                    line,
                    expected,
                    found: cells.join(","),
                });
            }
            names = Some(cells);
            continue;
        }
        if cells.len() != header.len() {
            return Err(IngestError::MissingColumn {
                line,
                expected: header.len(),
                found: cells.len(),
            });
        }
        rows.push(Row { line, cells });
    }
    let names = names.ok_or(IngestError::Empty)?;
    Ok((names, rows))
}

fn parse_month(row: &Row) -> Result<MonthKey> {
    row.cells[0].parse().map_err(|_| IngestError::InvalidMonth {
        line: row.line,
        text: row.cells[0].clone(),
    })
}

fn parse_year(row: &Row) -> Result<i32> {
    row.cells[0].parse().map_err(|_| IngestError::InvalidYear {
        line: row.line,
        text: row.cells[0].clone(),
    })
}

fn parse_number(row: &Row, col: usize, name: &str) -> Result<f64> {
    let text = &row.cells[col];
    match text.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(IngestError::NotNumeric {
            line: row.line,
            column: name.to_string(),
            text: text.clone(),
        }),
    }
}

pub fn parse_trends(text: &str) -> Result<TrendTable> {
    let (_, rows) = parse_table(text, &[Some("Month"), Some("Frequency")])?;
    let mut entries = Vec::with_capacity(rows.len());
    let mut seen = BTreeMap::new();
    for row in &rows {
        let key = parse_month(row)?;
        let value: i64 = row.cells[1].parse().map_err(|_| IngestError::NotNumeric {
            line: row.line,
            column: "Frequency".into(),
            text: row.cells[1].clone(),
        })?;
        if !(0..=100).contains(&value) {
            return Err(IngestError::FrequencyOutOfRange { line: row.line, value });
        }
        if seen.insert(key, row.line).is_some() {
            return Err(IngestError::Duplicate { key: key.to_string() });
        }
        entries.push((key, value as u8));
    }
    TrendTable::from_entries(entries)
}

pub fn read_trends(path: impl AsRef<Path>) -> Result<TrendTable> {
    parse_trends(&open(path.as_ref())?)
}

pub fn parse_annual(text: &str) -> Result<AnnualSeries> {
    let (_, rows) = parse_table(text, &[Some("Year"), Some("Sales")])?;
    let mut entries = Vec::with_capacity(rows.len());
    for row in &rows {
        let year = parse_year(row)?;
        let value = parse_number(row, 1, "Sales")?;
        if value < 0.0 {
            return Err(IngestError::NegativeSales { line: row.line, value });
        }
        entries.push((year, value));
    }
    AnnualSeries::from_entries(entries)
}

pub fn read_annual(path: impl AsRef<Path>) -> Result<AnnualSeries> {
    parse_annual(&open(path.as_ref())?)
}

pub fn parse_monthly(text: &str) -> Result<MonthlySeries> {
    let (_, rows) = parse_table(text, &[Some("Month"), Some("Sales")])?;
    let entries = rows
        .iter()
        .map(|row| Ok((parse_month(row)?, parse_number(row, 1, "Sales")?)))
        .collect::<Result<Vec<_>>>()?;
    MonthlySeries::from_entries(entries)
}

pub fn read_monthly(path: impl AsRef<Path>) -> Result<MonthlySeries> {
    parse_monthly(&open(path.as_ref())?)
}

pub fn parse_factors(text: &str) -> Result<FactorTable> {
    let (names, rows) = parse_table(text, &[Some("Year"), None, None, None, None, Some("Sales")])?;
    let feature_names: Vec<String> = names[1..5].to_vec();
    let mut sorted: Vec<(i32, Vec<f64>, f64)> = Vec::with_capacity(rows.len());
    for row in &rows {
        let year = parse_year(row)?;
        let features = (1..5)
            .map(|c| parse_number(row, c, &names[c]))
            .collect::<Result<Vec<_>>>()?;
        let sales = parse_number(row, 5, "Sales")?;
        sorted.push((year, features, sales));
    }
    sorted.sort_by_key(|r| r.0);
    if let Some(w) = sorted.windows(2).find(|w| w[0].0 == w[1].0) {
        return Err(IngestError::Duplicate {
            key: w[0].0.to_string(),
        });
    }
    let years = sorted.iter().map(|r| r.0).collect();
    let target = sorted.iter().map(|r| r.2).collect();
    let features = sorted.into_iter().map(|r| r.1).collect();
    Ok(FactorTable::new(years, features, target, feature_names).expect("row shapes validated during parsing"))
}

pub fn read_factors(path: impl AsRef<Path>) -> Result<FactorTable> {
    parse_factors(&open(path.as_ref())?)
}

/// Shortest decimal that parses back to the same `f64`.
pub fn format_value(v: f64) -> String {
    format!("{v}")
}

/// Joins `header` and `rows` with LF separators, no trailing newline.
pub fn render_csv(header: &str, rows: impl IntoIterator<Item = String>) -> String {
    let mut text = String::from(header);
    for row in rows {
        text.push('\n');
        text.push_str(&row);
    }
    text
}

pub fn write_text(path: impl AsRef<Path>, text: &str) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, text).map_err(|source| IngestError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn render_monthly(series: &MonthlySeries) -> Result<String> {
    if series.is_empty() {
        return Err(IngestError::Empty);
    }
    Ok(render_csv(
        "Month,Sales",
        series.iter().map(|(k, v)| format!("{k},{}", format_value(v))),
    ))
}

pub fn write_monthly(series: &MonthlySeries, path: impl AsRef<Path>) -> Result<()> {
    write_text(path, &render_monthly(series)?)
}

pub fn render_annual(series: &AnnualSeries) -> Result<String> {
    if series.is_empty() {
        return Err(IngestError::Empty);
    }
    Ok(render_csv(
        "Year,Sales",
        series.iter().map(|(y, v)| format!("{y},{}", format_value(v))),
    ))
}

pub fn write_annual(series: &AnnualSeries, path: impl AsRef<Path>) -> Result<()> {
    write_text(path, &render_annual(series)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn key(y: i32, m: u32) -> MonthKey {
        MonthKey::new(y, m).unwrap()
    }

    #[test]
    fn month_key_parsing_and_order() {
        assert_eq!("2019-03".parse::<MonthKey>().unwrap(), key(2019, 3));
        assert!("2019-13".parse::<MonthKey>().is_err());
        assert!("2019-00".parse::<MonthKey>().is_err());
        assert!("19-01".parse::<MonthKey>().is_err());
        assert!(key(2018, 12) < key(2019, 1));
        assert_eq!(key(2018, 12).succ(), key(2019, 1));
        assert_eq!(key(2019, 1).offset(-1), key(2018, 12));
        assert_eq!(key(2006, 1).months_until(key(2022, 12)), 203);
    }

    #[test]
    fn trends_full_year_of_constant_values() {
        let mut text = String::from("Month,Frequency\n");
        for m in 1..=12 {
            text.push_str(&format!("2006-{m:02},50\n"));
        }
        let table = parse_trends(&text).unwrap();
        assert_eq!(table.len(), 12);
        assert!(table.iter().all(|(_, f)| f == 50));
    }

    #[test]
    fn trends_reject_bad_rows() {
        let err = parse_trends("Month,Frequency\n2006-13,10\n").unwrap_err();
        assert!(err.to_string().contains("invalid month"), "{err}");
        let err = parse_trends("Month,Frequency\n2006-01,101\n").unwrap_err();
        assert!(err.to_string().contains("frequency out of range"), "{err}");
        let err = parse_trends("Month,Frequency\n2006-01,-1\n").unwrap_err();
        assert!(matches!(err, IngestError::FrequencyOutOfRange { .. }));
        let err = parse_trends("Month,Frequency\n2006-01,10\n2006-01,11\n").unwrap_err();
        assert!(matches!(err, IngestError::Duplicate { .. }));
        let err = parse_trends("Month,Frequency\n2006-01,10\n2006-02,11\n").unwrap_err();
        assert!(matches!(err, IngestError::IncompleteYear { year: 2006, months: 2 }));
    }

    #[test]
    fn trends_sorted_regardless_of_input_order() {
        let mut text = String::from("month,FREQUENCY\r\n");
        for m in (1..=12).rev() {
            text.push_str(&format!("2007-{m:02},{m}\r\n"));
        }
        let table = parse_trends(&text).unwrap();
        let freqs = table.year_frequencies(2007).unwrap();
        assert_eq!(freqs, [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12]);
    }

    #[test]
    fn annual_rows() {
        let s = parse_annual("Year,Sales\n2019,423\n").unwrap();
        assert_eq!(s.get(2019), Some(423.0));
        assert!(matches!(
            parse_annual("Year,Sales\n2019,1\n2019,2\n"),
            Err(IngestError::Duplicate { .. })
        ));
        let err = parse_annual("Year,Sales\n2019,-1\n").unwrap_err();
        assert!(err.to_string().contains("negative sales"), "{err}");
        assert!(matches!(
            parse_annual("Sales,Year\n2019,1\n"),
            Err(IngestError::Header { .. })
        ));
    }

    #[test]
    fn monthly_format_is_exact() {
        let s = MonthlySeries::new(key(2019, 1), vec![10.5]).unwrap();
        assert_eq!(render_monthly(&s).unwrap(), "Month,Sales\n2019-01,10.5");
        let empty = MonthlySeries::new(key(2019, 1), vec![]).unwrap();
        assert!(matches!(render_monthly(&empty), Err(IngestError::Empty)));
    }

    #[test]
    fn monthly_gap_and_sorting() {
        let err = parse_monthly("Month,Sales\n2019-01,1\n2019-03,2\n").unwrap_err();
        assert!(matches!(err, IngestError::Gap { .. }));
        let s = parse_monthly("Month,Sales\n2019-02,2\n2019-01,1\n").unwrap();
        assert_eq!(s.start(), key(2019, 1));
        assert_eq!(s.values(), &[1.0, 2.0]);
        assert!(matches!(
            parse_monthly("Month,Sales\n2019-01,abc\n"),
            Err(IngestError::NotNumeric { .. })
        ));
        assert!(matches!(
            parse_monthly("Month,Sales\n2019-01,NaN\n"),
            Err(IngestError::NotNumeric { .. })
        ));
    }

    #[test]
    fn monthly_lookup() {
        let s = MonthlySeries::new(key(2019, 11), vec![1.0, 2.0, 3.0]).unwrap();
        assert_eq!(s.end(), key(2020, 1));
        assert_eq!(s.get(key(2020, 1)), Some(3.0));
        assert_eq!(s.get(key(2019, 10)), None);
        assert_eq!(s.index_of(key(2019, 12)), Some(1));
        assert_eq!(s.slice(1, 2).start(), key(2019, 12));
    }

    #[test]
    fn factors_rows() {
        let text = "Year,Env,Gas,DPI,Trend,Sales\n\
                    2022,0.71,3.95,45405,69.916667,928\n\
                    2006,0.77,2.57,37570,11.583333,12.19\n";
        let t = parse_factors(text).unwrap();
        assert_eq!(t.years(), &[2006, 2022]);
        assert_eq!(t.row(0), &[0.77, 2.57, 37570.0, 11.583333]);
        assert_eq!(t.row(1), &[0.71, 3.95, 45405.0, 69.916667]);
        assert_eq!(t.feature_names()[2], "DPI");

        let err = parse_factors("Year,Env,Gas,DPI,Trend,Sales\n2006,0.77,,37570,11.5,12\n");
        assert!(matches!(err, Err(IngestError::NotNumeric { .. })));
        let err = parse_factors("Year,Env,Gas,DPI,Sales\n2006,0.77,2.5,37570,12\n");
        assert!(matches!(err, Err(IngestError::MissingColumn { .. })));
        let err = parse_factors("Year,Env,Gas,DPI,Trend,Sales\n2006,0.77,2.5,37570,12\n");
        assert!(matches!(err, Err(IngestError::MissingColumn { .. })));
    }

    #[test]
    fn missing_file_is_io_error() {
        let err = read_monthly("/nonexistent/monthly.csv").unwrap_err();
        assert!(matches!(err, IngestError::Io { .. }));
    }
}
