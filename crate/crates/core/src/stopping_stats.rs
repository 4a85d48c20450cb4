//! Exact stopping-time statistics from the acceptance probabilities.
//!
//! With w_i = P(y < v_i), the stopping time satisfies
//!
//!   E(tau_N)   = 1 + sum_{n=1}^{N-1} prod_{i=n}^{N-1} w_i,
//!   E(tau_N^2) = 1 + sum_{n=1}^{N-1} (2N+1-2n) prod_{i=n}^{N-1} w_i.
//!
//! Both series evaluate in one backward pass over suffix products.

use crate::distributions::DistributionSpec;
use crate::error::{Error, Result};
use crate::value_recurrence::{acceptance_probs, value_sequence};

/// Exact E(tau_N), E(tau_N^2) and Var(tau_N) for one horizon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StoppingStats {
    pub horizon: u64,
    pub expectation: f64,
    pub second_moment: f64,
    /// Stored exactly as `second_moment - expectation^2`.
    pub variance: f64,
}

fn validate_probs(w: &[f64], horizon: u64) -> Result<()> {
    if w.len() as u64 + 1 != horizon {
        return Err(Error::Usage(format!(
            "expected {} acceptance probabilities for horizon {horizon}, got {}",
            horizon - 1,
            w.len()
        )));
    }
    for (i, &wi) in w.iter().enumerate() {
        if !(0.0..=1.0).contains(&wi) {
            return Err(Error::Domain(format!(
                "acceptance probability w_{} = {wi} is outside [0, 1]",
                i + 1
            )));
        }
    }
    Ok(())
}

// Walks n = N-1 down to 1 and hands (n, prod_{i=n}^{N-1} w_i) to `visit`.
// Suffix products switch to log-space accumulation when small factors are
// present, so products over many terms cannot underflow step by step.
fn for_suffix_products(w: &[f64], mut visit: impl FnMut(usize, f64)) {
    let log_space = w.iter().any(|&x| x < 0.5);
    if log_space {
        let mut log_p = 0.0f64;
        for n in (1..=w.len()).rev() {
            log_p += w[n - 1].ln();
            visit(n, log_p.exp());
        }
    } else {
        let mut p = 1.0f64;
        for n in (1..=w.len()).rev() {
            p *= w[n - 1];
            visit(n, p);
        }
    }
}

/// E(tau_N) from the acceptance probabilities w_1..w_{N-1}.
pub fn exact_expectation(w: &[f64], horizon: u64) -> Result<f64> {
    validate_probs(w, horizon)?;
    let mut sum = 0.0;
    for_suffix_products(w, |_, p| sum += p);
    Ok(1.0 + sum)
}

/// E(tau_N^2) from the acceptance probabilities w_1..w_{N-1}.
pub fn exact_second_moment(w: &[f64], horizon: u64) -> Result<f64> {
    validate_probs(w, horizon)?;
    let n = horizon as f64;
    let mut sum = 0.0;
    for_suffix_products(w, |i, p| sum += (2.0 * n + 1.0 - 2.0 * i as f64) * p);
    Ok(1.0 + sum)
}

/// Compute the value sequence, the acceptance probabilities and both series
/// for `spec` at the given horizon.
pub fn exact_stats(spec: &DistributionSpec, horizon: u64) -> Result<StoppingStats> {
    let vs = value_sequence(spec, horizon as usize)?;
    let w = acceptance_probs(&vs);
    let expectation = exact_expectation(&w, horizon)?;
    let second_moment = exact_second_moment(&w, horizon)?;
    Ok(StoppingStats {
        horizon,
        expectation,
        second_moment,
        variance: second_moment - expectation * expectation,
    })
}

/// Direct evaluation of sum_{n=k}^{N-1} prod_{i=n}^{N-1} (1 - lambda/i),
/// the product-sum that collapses to (N - lambda - 1) / (lambda + 1) for
/// large N. Requires 0 < lambda < k so every factor stays positive.
pub fn pochhammer_sum(lambda: f64, k: u64, horizon: u64) -> Result<f64> {
    if k >= horizon {
        return Err(Error::Usage(format!(
            "pochhammer_sum requires k < N, got k={k}, N={horizon}"
        )));
    }
    if lambda <= 0.0 || lambda.is_nan() {
        return Err(Error::Domain(format!(
            "pochhammer_sum requires lambda > 0, got {lambda}"
        )));
    }
    if lambda >= k as f64 {
        return Err(Error::Domain(format!(
            "pochhammer_sum requires lambda < k so factors stay positive, got lambda={lambda}, k={k}"
        )));
    }
    let mut p = 1.0;
    let mut sum = 0.0;
    for n in (k..horizon).rev() {
        p *= 1.0 - lambda / n as f64;
        sum += p;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel_close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1e-300)
    }

    // Brute-force enumeration over the stopping-time distribution:
    // P(tau = n) = (1 - w_{N-n}) prod_{i=N-n+1}^{N-1} w_i, and the n = N
    // term is prod_{i=1}^{N-1} w_i.
    fn enumerate_moments(w: &[f64]) -> (f64, f64, f64) {
        let n = w.len() + 1;
        let mut e = 0.0;
        let mut m2 = 0.0;
        let mut total = 0.0;
        for tau in 1..=n {
            let mut p = if tau < n { 1.0 - w[n - tau - 1] } else { 1.0 };
            for i in (n - tau + 1)..n {
                p *= w[i - 1];
            }
            total += p;
            e += tau as f64 * p;
            m2 += (tau * tau) as f64 * p;
        }
        (e, m2, total)
    }

    #[test]
    fn trivial_horizon_one() {
        assert_eq!(exact_expectation(&[], 1).unwrap(), 1.0);
        assert_eq!(exact_second_moment(&[], 1).unwrap(), 1.0);
    }

    #[test]
    fn two_step_hand_values() {
        // Stop at 1 with probability 1 - w_1: E = 1.5, E^2 = 2.5.
        assert_eq!(exact_expectation(&[0.5], 2).unwrap(), 1.5);
        assert_eq!(exact_second_moment(&[0.5], 2).unwrap(), 2.5);
    }

    #[test]
    fn length_mismatch_is_usage_error() {
        assert!(matches!(
            exact_expectation(&[0.5, 0.5], 2),
            Err(Error::Usage(_))
        ));
        assert!(matches!(
            exact_second_moment(&[], 2),
            Err(Error::Usage(_))
        ));
        assert!(matches!(
            exact_expectation(&[1.5], 2),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn matches_enumeration_on_small_cases() {
        let cases: Vec<Vec<f64>> = vec![
            vec![],
            vec![0.5],
            vec![0.1, 0.9],
            vec![0.3, 0.0, 0.8],
            vec![0.25, 0.5, 0.75, 0.9, 0.99, 0.6, 0.4],
        ];
        for w in cases {
            let n = w.len() as u64 + 1;
            let (e, m2, total) = enumerate_moments(&w);
            assert!((total - 1.0).abs() < 1e-12, "closure failed for {w:?}");
            assert!(
                (exact_expectation(&w, n).unwrap() - e).abs() < 1e-12,
                "E mismatch for {w:?}"
            );
            assert!(
                (exact_second_moment(&w, n).unwrap() - m2).abs() < 1e-12,
                "E2 mismatch for {w:?}"
            );
        }
    }

    #[test]
    fn exact_stats_examples() {
        let uni = DistributionSpec::uniform(0.0, 1.0).unwrap();
        let s = exact_stats(&uni, 1).unwrap();
        assert_eq!((s.expectation, s.variance), (1.0, 0.0));
        let s = exact_stats(&uni, 2).unwrap();
        assert_eq!(s.expectation, 1.5);
        assert_eq!(s.variance, 0.25);
    }

    #[test]
    fn uniform_expectation_approaches_n_over_three() {
        let uni = DistributionSpec::uniform(0.0, 1.0).unwrap();
        let n = 10_000u64;
        let s = exact_stats(&uni, n).unwrap();
        assert!(rel_close(s.expectation, n as f64 / 3.0, 0.01));
        assert!(s.expectation >= 1.0 && s.expectation <= n as f64);
        assert!(s.variance >= 0.0 && s.variance <= ((n - 1) as f64 / 2.0).powi(2));
    }

    #[test]
    fn exponential_variance_approaches_formula() {
        let exp = DistributionSpec::exponential(1.0).unwrap();
        let n = 10_000u64;
        let s = exact_stats(&exp, n).unwrap();
        assert!(rel_close(s.variance, (n * n) as f64 / 12.0, 0.03));
    }

    #[test]
    fn pareto_expectation_approaches_formula() {
        let par = DistributionSpec::pareto(1.0, 2.0).unwrap();
        let n = 10_000u64;
        let s = exact_stats(&par, n).unwrap();
        assert!(rel_close(s.expectation, 2.0 * n as f64 / 3.0, 0.01));
    }

    #[test]
    fn pochhammer_hand_value() {
        // n=3 term: 2/3; n=2 term: (1/2)(2/3) = 1/3; total exactly 1.
        assert!(rel_close(pochhammer_sum(1.0, 2, 4).unwrap(), 1.0, 1e-15));
    }

    #[test]
    fn pochhammer_closed_form() {
        let n = 100_000u64;
        for &lambda in &[1.0, 2.0] {
            let direct = pochhammer_sum(lambda, 100, n).unwrap();
            let closed = (n as f64 - lambda - 1.0) / (lambda + 1.0);
            assert!(
                rel_close(direct, closed, 0.005),
                "lambda={lambda}: {direct} vs {closed}"
            );
        }
    }

    #[test]
    fn pochhammer_domain_errors() {
        assert!(matches!(pochhammer_sum(1.0, 5, 5), Err(Error::Usage(_))));
        assert!(matches!(pochhammer_sum(5.0, 5, 10), Err(Error::Domain(_))));
        assert!(matches!(pochhammer_sum(0.0, 5, 10), Err(Error::Domain(_))));
    }

    #[test]
    fn log_space_path_matches_direct_path() {
        // Two vectors identical except one entry that flips the strategy.
        let mut w: Vec<f64> = (0..200).map(|i| 0.6 + 0.4 * (i as f64 / 200.0)).collect();
        let direct = exact_expectation(&w, 201).unwrap();
        w[0] = 0.49999; // forces log-space accumulation
        let log_path = exact_expectation(&w, 201).unwrap();
        // w[0] only affects the n=1 suffix product; the change is tiny.
        assert!((direct - log_path).abs() / direct < 1e-3);
        // And on an identical vector the two strategies agree to rounding.
        let w_low: Vec<f64> = vec![0.499; 30];
        let e = exact_expectation(&w_low, 31).unwrap();
        let mut brute = 1.0;
        for n in (1..=30).rev() {
            let p: f64 = w_low[n - 1..].iter().product();
            brute += p;
        }
        assert!(rel_close(e, brute, 1e-12));
    }
}
