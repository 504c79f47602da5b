//! Gaussian tail function and binomial confidence intervals.

/// Two-sided 95% standard normal quantile.
pub const Z_95: f64 = 1.959_963_984_540_054;

/// Gaussian tail Q(x) = erfc(x/√2)/2.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

/// Wilson score interval for `successes` out of `trials` at quantile `z`.
///
/// Always contains the point estimate and stays inside [0, 1], including at
/// zero successes.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = (center - half).max(0.0).min(p);
    let hi = (center + half).min(1.0).max(p);
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::oracle_stream;
    use approx::assert_relative_eq;
    use rand::Rng;

    #[test]
    fn q_reference_values() {
        assert_eq!(q_function(0.0), 0.5);
        assert_relative_eq!(q_function(1.0), 0.158_655_253_931_457_05, max_relative = 1e-14);
        assert_relative_eq!(q_function(3.0), 1.349_898_031_630_094_6e-3, max_relative = 1e-13);
        assert_relative_eq!(q_function(6.0), 9.865_876_450_376_98e-10, max_relative = 1e-12);
        assert_relative_eq!(q_function(-1.0), 1.0 - 0.158_655_253_931_457_05, max_relative = 1e-14);
        assert!(q_function(40.0) < 1e-300);
    }

    #[test]
    fn wilson_zero_successes() {
        let (lo, hi) = wilson_interval(0, 1000, Z_95);
        assert_eq!(lo, 0.0);
        // z²/(n + z²)
        assert_relative_eq!(hi, Z_95 * Z_95 / (1000.0 + Z_95 * Z_95), max_relative = 1e-12);
    }

    #[test]
    fn wilson_known_value() {
        // 10 successes in 100 trials (statsmodels proportion_confint, method="wilson")
        let (lo, hi) = wilson_interval(10, 100, Z_95);
        assert_relative_eq!(lo, 0.055_229_137_060_675_09, max_relative = 1e-12);
        assert_relative_eq!(hi, 0.174_365_661_504_913_48, max_relative = 1e-12);
    }

    #[test]
    fn wilson_contains_estimate() {
        for n in [1u64, 2, 7, 100, 12345] {
            for k in 0..=n.min(50) {
                let (lo, hi) = wilson_interval(k, n, Z_95);
                let p = k as f64 / n as f64;
                assert!(lo <= p && p <= hi && 0.0 <= lo && hi <= 1.0);
            }
        }
    }

    #[test]
    fn wilson_coverage_on_bernoulli_streams() {
        let mut rng = oracle_stream(99, 0);
        for p in [0.5, 0.05, 0.002] {
            let reps = 2000;
            let n = 5000u64;
            let mut covered = 0;
            for _ in 0..reps {
                let k = (0..n).filter(|_| rng.random::<f64>() < p).count() as u64;
                let (lo, hi) = wilson_interval(k, n, Z_95);
                if lo <= p && p <= hi {
                    covered += 1;
                }
            }
            let rate = covered as f64 / reps as f64;
            assert!((0.93..=0.97).contains(&rate), "p={p}: coverage {rate}");
        }
    }
}
