//! Calendar-indexed series, daily-to-monthly resampling and differencing.

use std::fmt;
use std::str::FromStr;

use chrono::{Datelike, NaiveDate};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A (year, sub-period) pair. For monthly data the sub-period is the month, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Period {
    pub year: i32,
    pub sub: u32,
}

impl Period {
    pub const fn new(year: i32, sub: u32) -> Self {
        Self { year, sub }
    }

    /// Linear index of the period at the given frequency.
    pub fn ordinal(self, periods_per_year: u32) -> i64 {
        self.year as i64 * periods_per_year as i64 + (self.sub as i64 - 1)
    }

    pub fn from_ordinal(ordinal: i64, periods_per_year: u32) -> Self {
        let ppy = periods_per_year as i64;
        Self {
            year: ordinal.div_euclid(ppy) as i32,
            sub: (ordinal.rem_euclid(ppy) + 1) as u32,
        }
    }

    pub fn offset(self, n: i64, periods_per_year: u32) -> Self {
        Self::from_ordinal(self.ordinal(periods_per_year) + n, periods_per_year)
    }
}

impl fmt::Display for Period {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}", self.year, self.sub)
    }
}

impl FromStr for Period {
    type Err = Error;

    /// Parses `YYYY-MM`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("expected YYYY-MM, got {s:?}"));
        let (y, m) = s.trim().split_once('-').ok_or_else(bad)?;
        let year = y.parse::<i32>().map_err(|_| bad())?;
        let sub = m.parse::<u32>().map_err(|_| bad())?;
        if sub == 0 {
            return Err(bad());
        }
        Ok(Self { year, sub })
    }
}

/// Regularly spaced real-valued series starting at `start`.
///
/// Immutable once built: non-empty, finite, and contiguous by construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeSeries {
    values: Vec<f64>,
    start: Period,
    periods_per_year: u32,
}

impl TimeSeries {
    pub fn new(values: Vec<f64>, start: Period, periods_per_year: u32) -> Result<Self> {
        if periods_per_year == 0 {
            return Err(Error::InvalidArgument("periods_per_year must be positive".into()));
        }
        if start.sub == 0 || start.sub > periods_per_year {
            return Err(Error::InvalidArgument(format!(
                "start sub-period {} outside 1..={periods_per_year}",
                start.sub
            )));
        }
        if values.is_empty() {
            return Err(Error::EmptySeries);
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self {
            values,
            start,
            periods_per_year,
        })
    }

    /// Monthly series starting at `year`-`month`.
    pub fn monthly(values: Vec<f64>, year: i32, month: u32) -> Result<Self> {
        Self::new(values, Period::new(year, month), 12)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn start(&self) -> Period {
        self.start
    }

    pub fn end(&self) -> Period {
        self.period_at(self.values.len() - 1)
    }

    pub fn periods_per_year(&self) -> u32 {
        self.periods_per_year
    }

    pub fn period_at(&self, i: usize) -> Period {
        self.start.offset(i as i64, self.periods_per_year)
    }

    /// Position of `p` in the series, if it lies within the span.
    pub fn index_of(&self, p: Period) -> Option<usize> {
        let i = p.ordinal(self.periods_per_year) - self.start.ordinal(self.periods_per_year);
        (0..self.values.len() as i64).contains(&i).then_some(i as usize)
    }

    pub fn periods(&self) -> impl Iterator<Item = Period> + '_ {
        (0..self.values.len()).map(|i| self.period_at(i))
    }

    /// Sub-series covering positions `from..to`.
    pub fn slice(&self, from: usize, to: usize) -> Result<Self> {
        if from >= to || to > self.values.len() {
            return Err(Error::InvalidArgument(format!(
                "slice {from}..{to} invalid for length {}",
                self.values.len()
            )));
        }
        Self::new(
            self.values[from..to].to_vec(),
            self.period_at(from),
            self.periods_per_year,
        )
    }

    /// Everything up to and including `last`.
    pub fn through(&self, last: Period) -> Result<Self> {
        let i = self.index_of(last).ok_or(Error::OutOfSpan(last))?;
        self.slice(0, i + 1)
    }

    /// Splits into the part before `boundary` and the part starting at `boundary`.
    pub fn split(&self, boundary: Period) -> Result<(Self, Self)> {
        let i = self.index_of(boundary).ok_or(Error::OutOfSpan(boundary))?;
        if i == 0 {
            return Err(Error::EmptySplit(boundary));
        }
        Ok((self.slice(0, i)?, self.slice(i, self.values.len())?))
    }

    /// Applies `(1-B)^d (1-B^m)^D` to the values.
    pub fn difference(&self, d: usize, seasonal_d: usize, m: usize) -> Result<Vec<f64>> {
        difference(&self.values, d, seasonal_d, m)
    }
}

/// Daily closing quotes, strictly increasing in date, positive closes.
#[derive(Debug, Clone, PartialEq)]
pub struct DailyQuotes {
    rows: Vec<(NaiveDate, f64)>,
}

impl DailyQuotes {
    pub fn new(rows: Vec<(NaiveDate, f64)>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptySeries);
        }
        for (i, &(_, close)) in rows.iter().enumerate() {
            if !(close.is_finite() && close > 0.0) {
                return Err(Error::InvalidClose {
                    line: i as u64 + 1,
                    value: close,
                });
            }
        }
        if let Some(i) = rows.windows(2).position(|w| w[1].0 <= w[0].0) {
            return Err(Error::UnorderedDates { line: i as u64 + 2 });
        }
        Ok(Self { rows })
    }

    pub fn rows(&self) -> &[(NaiveDate, f64)] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// One value per calendar month: the arithmetic mean of that month's closes.
pub fn resample_monthly_mean(quotes: &DailyQuotes) -> Result<TimeSeries> {
    let month_of = |d: &NaiveDate| Period::new(d.year(), d.month());
    let rows = quotes.rows();
    let first = month_of(&rows[0].0);
    let last = month_of(&rows[rows.len() - 1].0);
    let n_months = (last.ordinal(12) - first.ordinal(12) + 1) as usize;

    let mut sums = vec![0.0; n_months];
    let mut counts = vec![0usize; n_months];
    for (date, close) in rows {
        let i = (month_of(date).ordinal(12) - first.ordinal(12)) as usize;
        sums[i] += close;
        counts[i] += 1;
    }
    if let Some(i) = counts.iter().position(|&c| c == 0) {
        return Err(Error::Gap(first.offset(i as i64, 12)));
    }
    let values = sums
        .iter()
        .zip(&counts)
        .map(|(s, &c)| s / c as f64)
        .collect();
    TimeSeries::new(values, first, 12)
}

/// Coefficients of `(1-B)^d (1-B^m)^D`, indexed by lag; element 0 is 1.
pub fn differencing_polynomial(d: usize, seasonal_d: usize, m: usize) -> Vec<f64> {
    let mut poly = vec![1.0];
    for _ in 0..d {
        poly = crate::poly::multiply(&poly, &[1.0, -1.0]);
    }
    if m > 0 {
        let mut seasonal = vec![0.0; m + 1];
        seasonal[0] = 1.0;
        seasonal[m] = -1.0;
        for _ in 0..seasonal_d {
            poly = crate::poly::multiply(&poly, &seasonal);
        }
    }
    poly
}

/// Applies `(1-B)^d (1-B^m)^D`. Output length is `len - d - D*m`.
pub fn difference(values: &[f64], d: usize, seasonal_d: usize, m: usize) -> Result<Vec<f64>> {
    let lost = d + seasonal_d * m;
    if values.len() <= lost {
        return Err(Error::TooShort {
            len: values.len(),
            needed: lost + 1,
        });
    }
    let mut out = values.to_vec();
    for _ in 0..d {
        out = lag_difference(&out, 1);
    }
    for _ in 0..seasonal_d {
        out = lag_difference(&out, m);
    }
    Ok(out)
}

fn lag_difference(x: &[f64], lag: usize) -> Vec<f64> {
    x.iter().skip(lag).zip(x).map(|(a, b)| a - b).collect()
}

/// Inverts [`difference`] given the `d + D*m` leading values of the original series.
pub fn integrate(
    diff: &[f64],
    d: usize,
    seasonal_d: usize,
    m: usize,
    head: &[f64],
) -> Result<Vec<f64>> {
    let lost = d + seasonal_d * m;
    if head.len() != lost {
        return Err(Error::HeadLength {
            expected: lost,
            got: head.len(),
        });
    }
    // Undo one factor at a time, innermost last. Each stage is a strided
    // cumulative sum, which keeps roundoff far smaller than running the
    // expanded polynomial recursion along a repeated unit root.
    let mut lags = vec![1; d];
    lags.extend(std::iter::repeat_n(m, seasonal_d));
    // stage_heads[k] = head after applying the first k factors
    let mut stage_heads = vec![head.to_vec()];
    for &lag in &lags {
        let prev = stage_heads.last().unwrap();
        stage_heads.push((lag..prev.len()).map(|t| prev[t] - prev[t - lag]).collect());
    }
    let mut current = diff.to_vec();
    for (k, &lag) in lags.iter().enumerate().rev() {
        // `current` starts at index `lag` of this stage; keep the exact head
        // values and rebuild only what lies past them.
        let mut out = stage_heads[k].clone();
        let overlap = out.len() - lag;
        out.reserve(current.len() - overlap);
        for w in current.into_iter().skip(overlap) {
            let t = out.len();
            out.push(w + out[t - lag]);
        }
        current = out;
    }
    Ok(current)
}
