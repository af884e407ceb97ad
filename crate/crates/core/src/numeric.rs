//! Small numerical helpers shared by the kernels.

/// Pairwise (cascade) summation with a fixed split order, so results are
/// reproducible regardless of how the caller produced the slice.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const BLOCK: usize = 32;
    if xs.len() <= BLOCK {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Returns `k` when `x` is within a relative `1e-9` of `k * step` for a
/// non-negative integer `k`.
pub fn as_multiple(x: f64, step: f64) -> Option<usize> {
    if !(x.is_finite() && step > 0.0) || x < 0.0 {
        return None;
    }
    let k = (x / step).round();
    if (x - k * step).abs() <= 1e-9 * step.max(x) {
        Some(k as usize)
    } else {
        None
    }
}

/// Largest `k` with `k * step <= x`, forgiving round-off of a relative `1e-9`.
pub fn floor_multiple(x: f64, step: f64) -> usize {
    if x <= 0.0 {
        return 0;
    }
    (x / step * (1.0 + 1e-9)).floor() as usize
}

/// `lhs / rhs` with the convention `0 / 0 = 0`; a positive numerator over a
/// vanishing denominator yields `+inf`.
pub fn ratio(lhs: f64, rhs: f64) -> f64 {
    if rhs > 0.0 {
        lhs / rhs
    } else if lhs <= 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_matches_naive_on_integers() {
        let xs: Vec<f64> = (1..=1000).map(f64::from).collect();
        assert_eq!(pairwise_sum(&xs), 500_500.0);
        assert_eq!(pairwise_sum(&[]), 0.0);
    }

    #[test]
    fn multiples() {
        assert_eq!(as_multiple(0.3, 0.1), Some(3));
        assert_eq!(as_multiple(0.25, 0.1), None);
        assert_eq!(as_multiple(-0.1, 0.1), None);
        assert_eq!(floor_multiple(0.3, 0.1), 3);
        assert_eq!(floor_multiple(0.29, 0.1), 2);
        assert_eq!(floor_multiple(0.0, 0.1), 0);
    }

    #[test]
    fn ratio_conventions() {
        assert_eq!(ratio(0.0, 0.0), 0.0);
        assert_eq!(ratio(1.0, 0.0), f64::INFINITY);
        assert_eq!(ratio(1.0, 4.0), 0.25);
    }
}
