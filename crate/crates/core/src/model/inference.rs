use std::fmt::{self, Write as _};

use serde::Serialize;
use statrs::function::erf::erfc;

use super::FitResult;

/// Normal quantile used for the 95% interval columns.
pub const Z_95: f64 = 1.96;

/// One estimate with its Wald statistics. Statistics are `None` when the
/// standard error is undefined.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientRow {
    pub name: String,
    pub coef: f64,
    pub std_err: Option<f64>,
    pub z: Option<f64>,
    pub p_value: Option<f64>,
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
}

impl CoefficientRow {
    pub fn new(name: impl Into<String>, coef: f64, std_err: Option<f64>) -> Self {
        let std_err = std_err.filter(|s| s.is_finite() && *s > 0.0);
        let z = std_err.map(|s| coef / s);
        Self {
            name: name.into(),
            coef,
            std_err,
            z,
            p_value: z.map(two_sided_p),
            ci_low: std_err.map(|s| coef - Z_95 * s),
            ci_high: std_err.map(|s| coef + Z_95 * s),
        }
    }
}

/// Two-sided standard-normal tail probability.
pub fn two_sided_p(z: f64) -> f64 {
    erfc(z.abs() / std::f64::consts::SQRT_2)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientTable {
    pub rows: Vec<CoefficientRow>,
}

/// Builds the coefficient table from a fit's estimates and covariance.
pub fn coefficient_table(fit: &FitResult) -> CoefficientTable {
    let names = fit.order.param_names();
    let rows = names
        .into_iter()
        .zip(fit.estimates())
        .enumerate()
        .map(|(i, (name, coef))| {
            let se = fit.covariance.as_ref().map(|c| c[i][i].sqrt());
            CoefficientRow::new(name, coef, se)
        })
        .collect();
    CoefficientTable { rows }
}

impl CoefficientTable {
    pub fn get(&self, name: &str) -> Option<&CoefficientRow> {
        self.rows.iter().find(|r| r.name == name)
    }

    pub fn names(&self) -> Vec<&str> {
        self.rows.iter().map(|r| r.name.as_str()).collect()
    }

    /// Aligned plain-text rendering.
    pub fn to_text(&self) -> String {
        let width = self.rows.iter().map(|r| r.name.len()).max().unwrap_or(0).max(8);
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<width$} {:>10} {:>10} {:>10} {:>8} {:>10} {:>10}",
            "", "coef", "std err", "z", "P>|z|", "[0.025", "0.975]"
        );
        let na = || "nan".to_string();
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:<width$} {:>10} {:>10} {:>10} {:>8} {:>10} {:>10}",
                r.name,
                fmt_num(r.coef, 4),
                r.std_err.map_or_else(na, |v| fmt_num(v, 3)),
                r.z.map_or_else(na, |v| fmt_num(v, 3)),
                r.p_value.map_or_else(na, fmt_p),
                r.ci_low.map_or_else(na, |v| fmt_num(v, 3)),
                r.ci_high.map_or_else(na, |v| fmt_num(v, 3)),
            );
        }
        out
    }
}

impl fmt::Display for CoefficientTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// p-values below 5e-4 print as `0.000`.
pub fn fmt_p(p: f64) -> String {
    format!("{p:.3}")
}

/// Fixed-point for moderate magnitudes, `1.025e+05` style otherwise.
pub fn fmt_num(v: f64, decimals: usize) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-4..1e4).contains(&a) {
        return format!("{v:.decimals$}");
    }
    let s = format!("{v:.3e}");
    match s.split_once('e') {
        Some((mantissa, exp)) => {
            let e: i32 = exp.parse().unwrap_or(0);
            let sign = if e < 0 { '-' } else { '+' };
            format!("{mantissa}e{sign}{:02}", e.abs())
        }
        None => s,
    }
}
