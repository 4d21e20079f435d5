//! Small statistics helpers shared by the experiment drivers.

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Wilson score interval at 95% for `hits` successes in `trials`.
pub fn wilson_interval(hits: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let phat = hits as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (phat + z2 / (2.0 * n)) / denom;
    let half = Z95 * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    // the bounds are exactly 0 and 1 at the extremes; avoid rounding residue
    let lo = if hits == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if hits == trials { 1.0 } else { (center + half).min(1.0) };
    (lo, hi)
}

/// Nearest-rank quantile of sorted data, `q` in `[0, 1]`.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of empty data");
    let rank = (q * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}

/// Poisson probabilities `P(X = 0..=max)`.
pub fn poisson_pmf(lambda: f64, max: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(max + 1);
    let mut term = (-lambda).exp();
    for k in 0..=max {
        if k > 0 {
            term *= lambda / k as f64;
        }
        out.push(term);
    }
    out
}

/// Total variation distance between an empirical pmf on `0..pmf.len()` and
/// `Poisson(lambda)`, with the Poisson tail beyond the observed support
/// folded into one bin.
pub fn tv_to_poisson(pmf: &[f64], lambda: f64) -> f64 {
    if pmf.is_empty() {
        return 1.0;
    }
    let pois = poisson_pmf(lambda, pmf.len() - 1);
    let covered: f64 = pois.iter().sum();
    let tail = (1.0 - covered).max(0.0);
    let body: f64 = pmf.iter().zip(&pois).map(|(a, b)| (a - b).abs()).sum();
    (0.5 * (body + tail)).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_edges() {
        let (lo, hi) = wilson_interval(0, 100);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.05);
        let (lo, hi) = wilson_interval(100, 100);
        assert!(lo > 0.95 && hi == 1.0);
        // textbook value: 50/100 -> [0.4038, 0.5962]
        let (lo, hi) = wilson_interval(50, 100);
        assert!((lo - 0.4038).abs() < 1e-4 && (hi - 0.5962).abs() < 1e-4);
    }

    #[test]
    fn quantiles() {
        let data = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(quantile_sorted(&data, 0.5), 2.0);
        assert_eq!(quantile_sorted(&data, 0.0), 1.0);
        assert_eq!(quantile_sorted(&data, 1.0), 4.0);
    }

    #[test]
    fn tv_of_exact_poisson_is_small() {
        let lambda = 0.7;
        let pmf = poisson_pmf(lambda, 30);
        assert!(tv_to_poisson(&pmf, lambda) < 1e-12);
        assert!((tv_to_poisson(&[1.0], 2.0) - (1.0 - (-2.0f64).exp())).abs() < 1e-12);
    }
}
