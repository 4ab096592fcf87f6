//! Polynomials in the backshift operator, stored as coefficient vectors indexed by lag.

/// Product of two polynomials.
pub fn multiply(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0.0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// First `n` coefficients of the power series `numerator / denominator`.
///
/// `denominator[0]` must be 1.
pub fn divide_series(numerator: &[f64], denominator: &[f64], n: usize) -> Vec<f64> {
    debug_assert!(denominator.first() == Some(&1.0));
    let mut out = vec![0.0; n];
    for j in 0..n {
        let mut v = numerator.get(j).copied().unwrap_or(0.0);
        for k in 1..=j.min(denominator.len().saturating_sub(1)) {
            v -= denominator[k] * out[j - k];
        }
        out[j] = v;
    }
    out
}

/// Whether `1 - c_1 z - ... - c_k z^k` has every root strictly outside the unit circle.
///
/// Uses the Schur-Cohn step-down recursion: the polynomial is stable iff every
/// reflection coefficient has modulus below one.
pub fn roots_outside_unit_circle(coeffs: &[f64]) -> bool {
    let mut a: Vec<f64> = coeffs.to_vec();
    while a.last() == Some(&0.0) {
        a.pop();
    }
    while let Some(&kappa) = a.last() {
        if !kappa.is_finite() || kappa.abs() >= 1.0 {
            return false;
        }
        let k = a.len();
        let denom = 1.0 - kappa * kappa;
        let next: Vec<f64> = (0..k - 1)
            .map(|j| (a[j] + kappa * a[k - 2 - j]) / denom)
            .collect();
        a = next;
    }
    true
}
