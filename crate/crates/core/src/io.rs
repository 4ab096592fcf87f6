//! CSV ingestion of daily quotes and normalized monthly series.

use std::io::{Read, Write};

use chrono::NaiveDate;

use crate::error::{Error, Result};
use crate::series::{DailyQuotes, Period, TimeSeries};

/// Column names for daily quote files.
#[derive(Debug, Clone)]
pub struct QuoteColumns {
    pub date: String,
    pub close: String,
}

impl Default for QuoteColumns {
    fn default() -> Self {
        Self {
            date: "Date".into(),
            close: "Close".into(),
        }
    }
}

/// Parses `YYYY-MM-DD` or `DD-MMM-YYYY` (e.g. `02-Jan-2019`).
pub fn parse_date(s: &str) -> Option<NaiveDate> {
    let s = s.trim();
    NaiveDate::parse_from_str(s, "%Y-%m-%d")
        .or_else(|_| NaiveDate::parse_from_str(s, "%d-%b-%Y"))
        .ok()
}

fn parse_number(s: &str) -> Option<f64> {
    let cleaned: String = s.trim().chars().filter(|c| *c != ',').collect();
    cleaned.parse::<f64>().ok().filter(|v| v.is_finite())
}

fn csv_err(e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line());
    match line {
        Some(line) => Error::Parse {
            line,
            message: e.to_string(),
        },
        None => Error::Csv(e.to_string()),
    }
}

/// Reads daily quotes from CSV with a header row. Rows may be in either
/// chronological direction; duplicate dates are rejected.
pub fn read_daily_quotes<R: Read>(reader: R, columns: &QuoteColumns) -> Result<DailyQuotes> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(reader);
    let headers = rdr.headers().map_err(csv_err)?.clone();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim().eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::Parse {
                line: 1,
                message: format!("missing column {name:?}"),
            })
    };
    let date_idx = find(&columns.date)?;
    let close_idx = find(&columns.close)?;

    let mut rows: Vec<(NaiveDate, f64, u64)> = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(csv_err)?;
        let line = record.position().map_or(0, |p| p.line());
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        let field = |i: usize| record.get(i).unwrap_or("");
        let date = parse_date(field(date_idx)).ok_or_else(|| Error::Parse {
            line,
            message: format!("unrecognised date {:?}", field(date_idx)),
        })?;
        let close = parse_number(field(close_idx)).ok_or_else(|| Error::Parse {
            line,
            message: format!("non-numeric close {:?}", field(close_idx)),
        })?;
        if close <= 0.0 {
            return Err(Error::InvalidClose { line, value: close });
        }
        rows.push((date, close, line));
    }
    if rows.is_empty() {
        return Err(Error::EmptySeries);
    }

    rows.sort_by_key(|r| r.0);
    if let Some(w) = rows.windows(2).find(|w| w[0].0 == w[1].0) {
        return Err(Error::Parse {
            line: w[0].2.max(w[1].2),
            message: format!("duplicate date {}", w[1].0),
        });
    }
    DailyQuotes::new(rows.into_iter().map(|(d, c, _)| (d, c)).collect())
}

/// Writes a monthly series as `period,value`.
pub fn write_series_csv<W: Write>(writer: W, series: &TimeSeries) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let io = |e: csv::Error| Error::Csv(e.to_string());
    w.write_record(["period", "value"]).map_err(io)?;
    for (p, v) in series.periods().zip(series.values()) {
        w.write_record([p.to_string(), v.to_string()]).map_err(io)?;
    }
    w.flush().map_err(|e| Error::Csv(e.to_string()))?;
    Ok(())
}

/// Reads a `period,value` monthly series; periods must be consecutive.
pub fn read_series_csv<R: Read>(reader: R) -> Result<TimeSeries> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let mut start: Option<Period> = None;
    let mut values = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(csv_err)?;
        let line = record.position().map_or(0, |p| p.line());
        let bad = |message: String| Error::Parse { line, message };
        let period: Period = record
            .get(0)
            .unwrap_or("")
            .parse()
            .map_err(|e: Error| bad(e.to_string()))?;
        let value = record
            .get(1)
            .and_then(parse_number)
            .ok_or_else(|| bad("non-numeric value".into()))?;
        match start {
            None => start = Some(period),
            Some(s) => {
                let expected = s.offset(values.len() as i64, 12);
                if period != expected {
                    return Err(if period > expected {
                        Error::Gap(expected)
                    } else {
                        bad(format!("period {period} out of order"))
                    });
                }
            }
        }
        values.push(value);
    }
    let start = start.ok_or(Error::EmptySeries)?;
    TimeSeries::new(values, start, 12)
}

/// Whether a CSV header looks like a normalized `period,value` series.
pub fn is_series_header(first_line: &str) -> bool {
    let cols: Vec<String> = first_line
        .split(',')
        .map(|c| c.trim().trim_matches('"').to_ascii_lowercase())
        .collect();
    cols.len() >= 2 && cols[0] == "period" && cols[1] == "value"
}
