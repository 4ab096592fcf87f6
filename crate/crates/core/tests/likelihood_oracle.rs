//! The filter likelihood against the dense Gaussian oracle.

#[path = "support/gaussian_oracle.rs"]
mod oracle;

use oracle::{oracle_loglik, random_instance};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sarima_core::{log_likelihood, ModelOrder, SarimaParams};

#[test]
fn matches_dense_gaussian_density() {
    let mut rng = ChaCha8Rng::seed_from_u64(20190601);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let (order, params, data) = random_instance(&mut rng);
        let fast = log_likelihood(&data, &order, &params).unwrap();
        let slow = oracle_loglik(&data, &order, &params);
        let err = (fast - slow).abs();
        worst = worst.max(err);
        assert!(err < 1e-6, "{order} {params:?} n={}: {fast} vs {slow}", data.len());
    }
    println!("max abs error {worst:e}");
}

#[test]
fn hand_checked_cases() {
    let wn = ModelOrder::arima(0, 0, 0).unwrap();
    let ll = log_likelihood(&[0.0, 0.0], &wn, &SarimaParams::white_noise(1.0)).unwrap();
    assert!((ll - oracle_loglik(&[0.0, 0.0], &wn, &SarimaParams::white_noise(1.0))).abs() < 1e-12);

    let ar1 = ModelOrder::arima(1, 0, 0).unwrap();
    let params = SarimaParams {
        ar: vec![0.5],
        ..SarimaParams::zeros(&ar1, 1.0)
    };
    let ll = log_likelihood(&[1.0, 1.0], &ar1, &params).unwrap();
    assert!((ll - (-2.4818)).abs() < 1e-4);
    assert!((ll - oracle_loglik(&[1.0, 1.0], &ar1, &params)).abs() < 1e-9);
}
