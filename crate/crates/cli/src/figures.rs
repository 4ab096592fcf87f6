//! The figure set. Each builder returns the SVG panels together with the
//! table of numbers they plot.

use sarima_core::{DecompositionResult, ForecastResult, GridResult, Period, TimeSeries};

use crate::output::{cell, Figure, Table};
use crate::svg::{Layer, Panel, BLUE, GREEN, GREY, ORANGE, PALETTE, RED};

const MONTHS: [&str; 12] = [
    "Jan", "Feb", "Mar", "Apr", "May", "Jun", "Jul", "Aug", "Sep", "Oct", "Nov", "Dec",
];

/// Decimal-year position of a period.
fn x_of(p: Period, ppy: u32) -> f64 {
    p.year as f64 + (p.sub - 1) as f64 / ppy as f64
}

fn year_ticks(first: i32, last: i32) -> Vec<(f64, String)> {
    let step = ((last - first) / 12 + 1).max(1);
    (first..=last + 1)
        .step_by(step as usize)
        .map(|y| (y as f64, y.to_string()))
        .collect()
}

fn series_ticks(s: &TimeSeries) -> Vec<(f64, String)> {
    year_ticks(s.start().year, s.end().year)
}

/// Linearly interpolated sample quantile of sorted data.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// `(year, [min, q1, median, q3, max])` for every calendar year in the series.
pub fn yearly_box_stats(s: &TimeSeries) -> Vec<(i32, [f64; 5])> {
    let mut out: Vec<(i32, Vec<f64>)> = Vec::new();
    for (p, v) in s.periods().zip(s.values()) {
        match out.last_mut() {
            Some((y, vals)) if *y == p.year => vals.push(*v),
            _ => out.push((p.year, vec![*v])),
        }
    }
    out.into_iter()
        .map(|(y, mut v)| {
            v.sort_by(f64::total_cmp);
            let stats = [v[0], quantile(&v, 0.25), quantile(&v, 0.5), quantile(&v, 0.75), v[v.len() - 1]];
            (y, stats)
        })
        .collect()
}

pub fn series_line(s: &TimeSeries, name: &str) -> Figure {
    let ppy = s.periods_per_year();
    let mut data = Table::new(&["period", "value"]);
    let mut points = Vec::with_capacity(s.len());
    for (p, v) in s.periods().zip(s.values()) {
        data.push(vec![p.to_string(), v.to_string()]);
        points.push((x_of(p, ppy), *v));
    }
    let panel = Panel::new(format!("Monthly mean of {name}"))
        .labels("Year", "Value")
        .ticks(series_ticks(s))
        .layer(Layer::Line {
            label: String::new(),
            points,
            color: BLUE,
            dashed: false,
        });
    Figure {
        stem: "fig1_series",
        title: String::new(),
        panels: vec![panel],
        panel_height: 420.0,
        data,
    }
}

pub fn yearly_boxplot(s: &TimeSeries) -> Figure {
    let stats = yearly_box_stats(s);
    let mut data = Table::new(&["year", "min", "q1", "median", "q3", "max"]);
    for (y, st) in &stats {
        let mut row = vec![y.to_string()];
        row.extend(st.iter().map(|v| v.to_string()));
        data.push(row);
    }
    let ticks = stats.iter().map(|(y, _)| (*y as f64, y.to_string())).collect();
    let panel = Panel::new("Distribution of monthly values by year")
        .labels("Year", "Value")
        .ticks(ticks)
        .layer(Layer::Boxes {
            items: stats.iter().map(|(y, st)| (*y as f64, *st)).collect(),
            color: BLUE,
        });
    Figure {
        stem: "fig2_yearly_boxplot",
        title: String::new(),
        panels: vec![panel],
        panel_height: 420.0,
        data,
    }
}

pub fn monthly_overlay(s: &TimeSeries) -> Figure {
    let ppy = s.periods_per_year();
    let mut data = Table::new(&["year", "month", "value"]);
    let mut panel = Panel::new("Seasonal profile, one line per year").labels("Month", "Value");
    if ppy == 12 {
        panel = panel.ticks(MONTHS.iter().enumerate().map(|(i, m)| ((i + 1) as f64, m.to_string())).collect());
    }
    let mut current: Option<(i32, Vec<(f64, f64)>)> = None;
    let mut lines = Vec::new();
    for (p, v) in s.periods().zip(s.values()) {
        data.push(vec![p.year.to_string(), p.sub.to_string(), v.to_string()]);
        match current.as_mut() {
            Some((y, pts)) if *y == p.year => pts.push((p.sub as f64, *v)),
            _ => {
                lines.extend(current.take());
                current = Some((p.year, vec![(p.sub as f64, *v)]));
            }
        }
    }
    lines.extend(current);
    for (i, (year, points)) in lines.into_iter().enumerate() {
        panel = panel.layer(Layer::Line {
            label: year.to_string(),
            points,
            color: PALETTE[i % PALETTE.len()],
            dashed: false,
        });
    }
    Figure {
        stem: "fig3_monthly_overlay",
        title: String::new(),
        panels: vec![panel],
        panel_height: 420.0,
        data,
    }
}

/// `period,observed,trend,seasonal,residual` with empty cells where masked.
pub fn decomposition_table(s: &TimeSeries, d: &DecompositionResult) -> Table {
    let mut t = Table::new(&["period", "observed", "trend", "seasonal", "residual"]);
    for (i, p) in s.periods().enumerate() {
        t.push(vec![
            p.to_string(),
            d.observed[i].to_string(),
            cell(d.trend[i]),
            d.seasonal[i].to_string(),
            cell(d.residual[i]),
        ]);
    }
    t
}

pub fn decomposition(s: &TimeSeries, d: &DecompositionResult) -> Figure {
    let ppy = s.periods_per_year();
    let xs: Vec<f64> = s.periods().map(|p| x_of(p, ppy)).collect();
    let line = |title: &str, ys: Vec<f64>, color| {
        Panel::new(title)
            .labels("", title)
            .ticks(series_ticks(s))
            .layer(Layer::Line {
                label: String::new(),
                points: xs.iter().copied().zip(ys).collect(),
                color,
                dashed: false,
            })
    };
    let masked = |v: &[Option<f64>]| v.iter().map(|x| x.unwrap_or(f64::NAN)).collect::<Vec<_>>();
    let panels = vec![
        line("Observed", d.observed.clone(), BLUE),
        line("Trend", masked(&d.trend), ORANGE),
        line("Seasonal", d.seasonal.clone(), GREEN),
        line("Residual", masked(&d.residual), GREY),
    ];
    Figure {
        stem: "fig4_decomposition",
        title: "Additive decomposition".into(),
        panels,
        panel_height: 220.0,
        data: decomposition_table(s, d),
    }
}

/// Actual against predicted over a window, with an optional interval.
pub fn actual_vs_predicted(
    stem: &'static str,
    title: &str,
    periods: &[Period],
    actual: &[f64],
    predicted: &[f64],
    band: Option<(&[f64], &[f64])>,
) -> Figure {
    let xs: Vec<f64> = periods.iter().map(|p| x_of(*p, 12)).collect();
    let mut header = vec!["period", "actual", "predicted"];
    if band.is_some() {
        header.extend(["lo", "hi"]);
    }
    let mut data = Table::new(&header);
    for i in 0..periods.len() {
        let mut row = vec![periods[i].to_string(), actual[i].to_string(), predicted[i].to_string()];
        if let Some((lo, hi)) = band {
            row.extend([lo[i].to_string(), hi[i].to_string()]);
        }
        data.push(row);
    }
    let ticks = periods
        .iter()
        .zip(&xs)
        .map(|(p, x)| (*x, format!("{} {}", MONTHS[(p.sub as usize - 1) % 12], p.year % 100)))
        .collect();
    let mut panel = Panel::new(title).labels("Period", "Value").ticks(ticks);
    if let Some((lo, hi)) = band {
        panel = panel.layer(Layer::Band {
            label: "interval".into(),
            x: xs.clone(),
            lower: lo.to_vec(),
            upper: hi.to_vec(),
            color: ORANGE,
        });
    }
    panel = panel
        .layer(Layer::Line {
            label: "actual".into(),
            points: xs.iter().copied().zip(actual.iter().copied()).collect(),
            color: BLUE,
            dashed: false,
        })
        .layer(Layer::Line {
            label: "predicted".into(),
            points: xs.iter().copied().zip(predicted.iter().copied()).collect(),
            color: RED,
            dashed: true,
        });
    Figure {
        stem,
        title: String::new(),
        panels: vec![panel],
        panel_height: 420.0,
        data,
    }
}

pub fn forecast_fan(s: &TimeSeries, fc: &ForecastResult) -> Figure {
    let ppy = s.periods_per_year();
    let mut data = Table::new(&["period", "observed", "point", "lo", "hi"]);
    for (p, v) in s.periods().zip(s.values()) {
        data.push(vec![p.to_string(), v.to_string(), String::new(), String::new(), String::new()]);
    }
    for i in 0..fc.horizon {
        data.push(vec![
            fc.periods[i].to_string(),
            String::new(),
            fc.point[i].to_string(),
            fc.lo[i].to_string(),
            fc.hi[i].to_string(),
        ]);
    }
    let fx: Vec<f64> = fc.periods.iter().map(|p| x_of(*p, ppy)).collect();
    let last = fc.periods.last().copied().unwrap_or(s.end());
    let panel = Panel::new(format!("{}-step forecast with {:.0}% interval", fc.horizon, fc.level * 100.0))
        .labels("Year", "Value")
        .ticks(year_ticks(s.start().year, last.year))
        .layer(Layer::Band {
            label: "interval".into(),
            x: fx.clone(),
            lower: fc.lo.clone(),
            upper: fc.hi.clone(),
            color: ORANGE,
        })
        .layer(Layer::Line {
            label: "observed".into(),
            points: s.periods().map(|p| x_of(p, ppy)).zip(s.values().iter().copied()).collect(),
            color: BLUE,
            dashed: false,
        })
        .layer(Layer::Line {
            label: "forecast".into(),
            points: fx.into_iter().zip(fc.point.iter().copied()).collect(),
            color: RED,
            dashed: true,
        });
    Figure {
        stem: "fig7_forecast",
        title: String::new(),
        panels: vec![panel],
        panel_height: 420.0,
        data,
    }
}

pub fn aic_by_rank(grid: &GridResult) -> Figure {
    let mut data = Table::new(&["rank", "order", "aic", "converged"]);
    let (mut ok, mut bad) = (Vec::new(), Vec::new());
    for (i, c) in grid.ranked.iter().enumerate() {
        let rank = i + 1;
        data.push(vec![rank.to_string(), c.order.to_string(), c.aic.to_string(), c.converged.to_string()]);
        let pt = (rank as f64, c.aic);
        if c.converged {
            ok.push(pt);
        } else {
            bad.push(pt);
        }
    }
    let panel = Panel::new("AIC by rank across the order grid")
        .labels("Rank", "AIC")
        .layer(Layer::Markers {
            label: "converged".into(),
            points: ok,
            color: BLUE,
        })
        .layer(Layer::Markers {
            label: "not converged".into(),
            points: bad,
            color: RED,
        });
    Figure {
        stem: "fig8_aic_rank",
        title: String::new(),
        panels: vec![panel],
        panel_height: 420.0,
        data,
    }
}
