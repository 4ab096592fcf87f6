use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::{expand_polynomials, ModelOrder, SarimaParams};
use crate::error::{Error, Result};
use crate::series::{integrate, Period, TimeSeries};

/// Simulates `n` observations of the model, starting 2000-01.
///
/// The series is monthly unless the season length is some other `m > 1`, in
/// which case it has `m` periods per year. A burn-in of
/// `10 * (p + mP + q + mQ) + 100` draws is discarded.
pub fn simulate(order: &ModelOrder, params: &SarimaParams, n: usize, seed: u64) -> Result<TimeSeries> {
    let burn_in = 10 * (order.full_ar_degree() + order.full_ma_degree()) + 100;
    simulate_with_burn_in(order, params, n, seed, burn_in)
}

pub fn simulate_with_burn_in(
    order: &ModelOrder,
    params: &SarimaParams,
    n: usize,
    seed: u64,
    burn_in: usize,
) -> Result<TimeSeries> {
    let (ar, ma) = expand_polynomials(order, params)?;
    if !params.is_stationary() || !params.is_invertible() {
        return Err(Error::NonStationary);
    }
    if !(params.sigma2 > 0.0) {
        return Err(Error::InvalidArgument("sigma2 must be positive".into()));
    }
    let lost = order.lost_to_differencing();
    if n <= lost {
        return Err(Error::InvalidArgument(format!(
            "cannot simulate {n} points with {lost} lost to differencing"
        )));
    }

    let normal = Normal::new(0.0, params.sigma2.sqrt())
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total = burn_in + n - lost;
    let shocks: Vec<f64> = (0..total).map(|_| normal.sample(&mut rng)).collect();

    let mut w = vec![0.0; total];
    for t in 0..total {
        let mut v = shocks[t];
        for (i, a) in ar.iter().enumerate() {
            if t > i {
                v += a * w[t - i - 1];
            }
        }
        for (j, b) in ma.iter().enumerate() {
            if t > j {
                v += b * shocks[t - j - 1];
            }
        }
        w[t] = v;
    }
    let diffed: Vec<f64> = w[burn_in..].iter().map(|x| x + params.constant).collect();
    let values = integrate(&diffed, order.d, order.seasonal_d, order.m, &vec![0.0; lost])?;
    let ppy = if order.m > 1 { order.m as u32 } else { 12 };
    TimeSeries::new(values, Period::new(2000, 1), ppy)
}
