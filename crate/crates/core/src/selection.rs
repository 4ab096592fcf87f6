//! Exhaustive order search ranked by AIC.

use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{fit_values, FitOptions, ModelOrder, DEFAULT_MAX_TERMS};
use crate::series::TimeSeries;

/// Akaike information criterion `2k - 2 loglik`.
pub fn aic(loglik: f64, k: usize) -> f64 {
    2.0 * k as f64 - 2.0 * loglik
}

/// Candidate values for each order component.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GridSpec {
    pub p: Vec<usize>,
    pub d: Vec<usize>,
    pub q: Vec<usize>,
    pub seasonal_p: Vec<usize>,
    pub seasonal_d: Vec<usize>,
    pub seasonal_q: Vec<usize>,
    pub m: usize,
    pub max_terms: usize,
}

impl Default for GridSpec {
    /// `{0,1,2}` for all six components with `m = 12`: 729 orders.
    fn default() -> Self {
        Self::uniform(0..=2, 12)
    }
}

impl GridSpec {
    /// Same range for every component.
    pub fn uniform(range: RangeInclusive<usize>, m: usize) -> Self {
        let r: Vec<usize> = range.collect();
        Self {
            p: r.clone(),
            d: r.clone(),
            q: r.clone(),
            seasonal_p: r.clone(),
            seasonal_d: r.clone(),
            seasonal_q: r,
            m,
            max_terms: DEFAULT_MAX_TERMS,
        }
    }

    fn ranges(&self) -> [&Vec<usize>; 6] {
        [&self.p, &self.d, &self.q, &self.seasonal_p, &self.seasonal_d, &self.seasonal_q]
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::InvalidArgument("season length must be positive".into()));
        }
        if self.ranges().iter().any(|r| r.is_empty()) {
            return Err(Error::InvalidArgument("every order range must be non-empty".into()));
        }
        Ok(())
    }

    /// Number of combinations in the cartesian product.
    pub fn size(&self) -> usize {
        self.ranges().iter().map(|r| r.len()).product()
    }

    /// Every combination, in lexicographic `(p,d,q,P,D,Q)` order.
    pub fn combinations(&self) -> Vec<[usize; 6]> {
        let mut out = Vec::with_capacity(self.size());
        for &p in &self.p {
            for &d in &self.d {
                for &q in &self.q {
                    for &sp in &self.seasonal_p {
                        for &sd in &self.seasonal_d {
                            for &sq in &self.seasonal_q {
                                out.push([p, d, q, sp, sd, sq]);
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Candidate {
    pub order: ModelOrder,
    pub k: usize,
    pub loglik: f64,
    pub aic: f64,
    pub converged: bool,
}

/// An order that could not be fitted.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub combination: [usize; 6],
    pub m: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridResult {
    /// Ascending AIC, ties broken by order.
    pub ranked: Vec<Candidate>,
    pub failures: Vec<Failure>,
}

impl GridResult {
    /// Lowest-AIC converged candidate.
    pub fn winner(&self) -> Option<&Candidate> {
        self.ranked.iter().find(|c| c.converged)
    }

    pub fn attempted(&self) -> usize {
        self.ranked.len() + self.failures.len()
    }
}

#[derive(Debug, Clone, Default)]
pub struct SearchOptions {
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
    pub fit: Option<FitOptions>,
}

pub fn grid_search(series: &TimeSeries, spec: &GridSpec) -> Result<GridResult> {
    grid_search_with(series, spec, &SearchOptions::default())
}

/// Fits every order in `spec` exactly once.
///
/// Results do not depend on the number of workers: every fit is a pure
/// function of its order, and the output is sorted before ranking.
pub fn grid_search_with(series: &TimeSeries, spec: &GridSpec, opts: &SearchOptions) -> Result<GridResult> {
    spec.validate()?;
    let fit_opts = opts.fit.clone().unwrap_or(FitOptions {
        covariance: false,
        ..FitOptions::default()
    });
    let combos = spec.combinations();
    let values = series.values();

    let run_one = |c: &[usize; 6]| -> std::result::Result<Candidate, Failure> {
        let fail = |reason: String| Failure {
            combination: *c,
            m: spec.m,
            reason,
        };
        let order = ModelOrder::with_cap((c[0], c[1], c[2]), (c[3], c[4], c[5], spec.m), spec.max_terms)
            .map_err(|e| fail(e.to_string()))?;
        let f = fit_values(values, &order, &fit_opts).map_err(|e| fail(e.to_string()))?;
        Ok(Candidate {
            order,
            k: f.n_params(),
            loglik: f.loglik,
            aic: f.aic,
            converged: f.converged,
        })
    };

    let outcomes: Vec<_> = match opts.jobs {
        Some(jobs) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs.max(1))
                .build()
                .map_err(|e| Error::InvalidArgument(e.to_string()))?;
            pool.install(|| combos.par_iter().map(run_one).collect())
        }
        None => combos.par_iter().map(run_one).collect(),
    };

    let mut ranked = Vec::new();
    let mut failures = Vec::new();
    for outcome in outcomes {
        match outcome {
            Ok(c) => ranked.push(c),
            Err(f) => failures.push(f),
        }
    }
    rank(&mut ranked);
    failures.sort_by_key(|f| f.combination);

    let result = GridResult { ranked, failures };
    if result.winner().is_none() {
        return Err(Error::AllFitsFailed(result.attempted()));
    }
    Ok(result)
}

fn rank(candidates: &mut [Candidate]) {
    candidates.sort_by(|a, b| a.aic.total_cmp(&b.aic).then_with(|| a.order.cmp(&b.order)));
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{simulate, SarimaParams};

    #[test]
    fn aic_examples() {
        assert_eq!(aic(0.0, 1), 2.0);
        assert_eq!(aic(-10.0, 3), 26.0);
        assert!((aic(-497.03, 7) - 1008.06).abs() < 1e-9);
    }

    #[test]
    fn default_grid_has_729_orders() {
        let g = GridSpec::default();
        assert_eq!(g.size(), 729);
        assert_eq!(g.combinations().len(), 729);
        assert_eq!(g.combinations()[0], [0; 6]);
        assert_eq!(g.combinations()[728], [2; 6]);
    }

    #[test]
    fn empty_range_rejected() {
        let mut g = GridSpec::default();
        g.q.clear();
        assert!(g.validate().is_err());
    }

    #[test]
    fn single_order_grid_gives_white_noise() {
        let o = ModelOrder::arima(0, 0, 0).unwrap();
        let s = simulate(&o, &SarimaParams::white_noise(1.0), 60, 3).unwrap();
        let r = grid_search(&s, &GridSpec::uniform(0..=0, 12)).unwrap();
        assert_eq!(r.attempted(), 1);
        assert_eq!(r.winner().unwrap().order, ModelOrder::new((0, 0, 0), (0, 0, 0, 12)).unwrap());
    }

    #[test]
    fn ties_break_lexicographically() {
        let mk = |p, q| Candidate {
            order: ModelOrder::arima(p, 0, q).unwrap(),
            k: 1,
            loglik: 0.0,
            aic: 5.0,
            converged: true,
        };
        let mut v = vec![mk(1, 0), mk(0, 1), mk(0, 0)];
        v[2].aic = 7.0;
        rank(&mut v);
        let orders: Vec<_> = v.iter().map(|c| (c.order.p, c.order.q)).collect();
        assert_eq!(orders, vec![(0, 1), (1, 0), (0, 0)]);
    }

    #[test]
    fn failures_are_recorded_not_fatal() {
        let o = ModelOrder::arima(1, 0, 0).unwrap();
        let params = SarimaParams {
            ar: vec![0.5],
            ..SarimaParams::zeros(&o, 1.0)
        };
        let s = simulate(&o, &params, 30, 4).unwrap();
        let g = GridSpec {
            p: vec![0, 1],
            d: vec![0],
            q: vec![0],
            seasonal_p: vec![0],
            seasonal_d: vec![0, 2],
            seasonal_q: vec![0],
            m: 12,
            max_terms: DEFAULT_MAX_TERMS,
        };
        let r = grid_search(&s, &g).unwrap();
        assert_eq!(r.attempted(), 4);
        assert_eq!(r.failures.len(), 2);
        assert!(r.failures.iter().all(|f| f.combination[4] == 2));
        assert_eq!(r.winner().unwrap().order.p, 1);
    }

    #[test]
    fn worker_count_does_not_change_ranking() {
        let o = ModelOrder::new((1, 0, 0), (1, 0, 0, 4)).unwrap();
        let params = SarimaParams {
            ar: vec![0.4],
            sar: vec![0.3],
            ..SarimaParams::zeros(&o, 1.0)
        };
        let s = simulate(&o, &params, 80, 8).unwrap();
        let g = GridSpec::uniform(0..=1, 4);
        let one = grid_search_with(&s, &g, &SearchOptions { jobs: Some(1), fit: None }).unwrap();
        let four = grid_search_with(&s, &g, &SearchOptions { jobs: Some(4), fit: None }).unwrap();
        assert_eq!(one, four);
        assert_eq!(one.attempted(), 64);
        let best = one.winner().unwrap().aic;
        assert!(one.ranked.iter().filter(|c| c.converged).all(|c| c.aic >= best));
    }
}
