//! Seeded Monte Carlo simulation of the optimal stopping rule.
//!
//! Each replica replays the rule tau = min { m : y_m >= v_{N-m} } on its own
//! counter-derived ChaCha substream, so results depend only on
//! (spec, horizon, replicas, seed) and never on how many workers run them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::distributions::DistributionSpec;
use crate::error::{Error, Result};
use crate::value_recurrence::{value_sequence, ValueSequence};

/// Inputs of one simulation run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationConfig {
    pub spec: DistributionSpec,
    pub horizon: usize,
    pub replicas: u64,
    pub seed: u64,
    /// Parallelism hint; has no effect on the estimates.
    pub workers: usize,
}

/// Monte Carlo estimates with standard errors and seed provenance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimulationEstimate {
    pub mean_tau: f64,
    pub var_tau: f64,
    pub stderr_mean: f64,
    pub stderr_var: f64,
    pub replicas: u64,
    pub seed: u64,
}

/// Run one episode: draw sequentially and stop at the first m with
/// y_m >= v_{N-m}; the final step stops unconditionally (v_0 = -inf), so no
/// draw is consumed there. Returns tau in 1..=N.
pub fn simulate_once<R: Rng + ?Sized>(
    spec: &DistributionSpec,
    thresholds: &ValueSequence,
    rng: &mut R,
) -> usize {
    let n = thresholds.horizon();
    for m in 1..n {
        let y = spec.sample(rng);
        if y >= thresholds.value(n - m) {
            return m;
        }
    }
    n
}

/// Run `replicas` independent episodes and aggregate them in replica order.
pub fn simulate(config: &SimulationConfig) -> Result<SimulationEstimate> {
    if config.replicas < 1 {
        return Err(Error::Usage("replicas must be at least 1".into()));
    }
    if config.workers < 1 {
        return Err(Error::Usage("workers must be at least 1".into()));
    }
    let thresholds = value_sequence(&config.spec, config.horizon)?;

    let spec = config.spec;
    let seed = config.seed;
    let run_replica = move |thresholds: &ValueSequence, index: u64| -> u32 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        simulate_once(&spec, thresholds, &mut rng) as u32
    };

    let taus: Vec<u32> = if config.workers > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.workers)
            .build()
            .map_err(|e| Error::Usage(format!("cannot build worker pool: {e}")))?;
        pool.install(|| {
            (0..config.replicas)
                .into_par_iter()
                .map(|i| run_replica(&thresholds, i))
                .collect()
        })
    } else {
        (0..config.replicas)
            .map(|i| run_replica(&thresholds, i))
            .collect()
    };

    Ok(aggregate(&taus, config.replicas, config.seed))
}

// Deterministic ordered reduction: sums run over replica index regardless of
// which worker produced each value.
fn aggregate(taus: &[u32], replicas: u64, seed: u64) -> SimulationEstimate {
    let r = taus.len() as f64;
    let sum = taus.iter().fold(0.0f64, |acc, &t| acc + t as f64);
    let mean = sum / r;

    if taus.len() < 2 {
        return SimulationEstimate {
            mean_tau: mean,
            var_tau: 0.0,
            stderr_mean: 0.0,
            stderr_var: 0.0,
            replicas,
            seed,
        };
    }

    let mut m2 = 0.0f64;
    let mut m4 = 0.0f64;
    for &t in taus {
        let d = t as f64 - mean;
        let d2 = d * d;
        m2 += d2;
        m4 += d2 * d2;
    }
    let s2 = m2 / (r - 1.0); // unbiased sample variance
    let m4c = m4 / r; // fourth central moment
    let stderr_mean = (s2 / r).sqrt();
    // Var(s^2) ~ (m4 - s^4 (r-3)/(r-1)) / r
    let var_of_s2 = (m4c - s2 * s2 * (r - 3.0) / (r - 1.0)) / r;
    let stderr_var = var_of_s2.max(0.0).sqrt();

    SimulationEstimate {
        mean_tau: mean,
        var_tau: s2,
        stderr_mean,
        stderr_var,
        replicas,
        seed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stopping_stats::exact_stats;
    use crate::testutil::ScriptedRng;

    #[test]
    fn forced_stop_at_horizon_one() {
        let spec = DistributionSpec::normal(0.0, 1.0).unwrap();
        let vs = value_sequence(&spec, 1).unwrap();
        let mut rng = ScriptedRng::from_uniforms(&[]);
        assert_eq!(simulate_once(&spec, &vs, &mut rng), 1);

        let est = simulate(&SimulationConfig {
            spec,
            horizon: 1,
            replicas: 1000,
            seed: 3,
            workers: 1,
        })
        .unwrap();
        assert_eq!(est.mean_tau, 1.0);
        assert_eq!(est.var_tau, 0.0);
    }

    #[test]
    fn hand_rule_application_on_uniform() {
        let spec = DistributionSpec::uniform(0.0, 1.0).unwrap();
        let vs = value_sequence(&spec, 2).unwrap(); // v_1 = 0.5
        // First draw 0.7 >= v_1 stops immediately.
        let mut rng = ScriptedRng::from_uniforms(&[0.7]);
        assert_eq!(simulate_once(&spec, &vs, &mut rng), 1);
        // First draw 0.3 < v_1 forces continuation to the final step.
        let mut rng = ScriptedRng::from_uniforms(&[0.3]);
        assert_eq!(simulate_once(&spec, &vs, &mut rng), 2);
    }

    #[test]
    fn tau_respects_bounds() {
        let spec = DistributionSpec::pareto(1.0, 2.0).unwrap();
        let vs = value_sequence(&spec, 12).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..2000 {
            let tau = simulate_once(&spec, &vs, &mut rng);
            assert!((1..=12).contains(&tau));
        }
    }

    #[test]
    fn two_step_uniform_mean_matches_enumeration() {
        let est = simulate(&SimulationConfig {
            spec: DistributionSpec::uniform(0.0, 1.0).unwrap(),
            horizon: 2,
            replicas: 1_000_000,
            seed: 1,
            workers: 4,
        })
        .unwrap();
        assert!(
            (est.mean_tau - 1.5).abs() < 3.0 * est.stderr_mean,
            "mean {} stderr {}",
            est.mean_tau,
            est.stderr_mean
        );
    }

    #[test]
    fn estimates_track_exact_series() {
        let spec = DistributionSpec::exponential(1.0).unwrap();
        let exact = exact_stats(&spec, 100).unwrap();
        let est = simulate(&SimulationConfig {
            spec,
            horizon: 100,
            replicas: 40_000,
            seed: 2,
            workers: 2,
        })
        .unwrap();
        assert!(
            (est.mean_tau - exact.expectation).abs() < 3.0 * est.stderr_mean,
            "mean {} vs exact {} (stderr {})",
            est.mean_tau,
            exact.expectation,
            est.stderr_mean
        );
        assert!(
            (est.var_tau - exact.variance).abs() < 4.0 * est.stderr_var,
            "var {} vs exact {} (stderr {})",
            est.var_tau,
            exact.variance,
            est.stderr_var
        );
    }

    #[test]
    fn worker_count_does_not_change_bits() {
        let base = SimulationConfig {
            spec: DistributionSpec::weibull(1.0, 2.0).unwrap(),
            horizon: 64,
            replicas: 5000,
            seed: 99,
            workers: 1,
        };
        let one = simulate(&base).unwrap();
        for workers in [2, 4, 16] {
            let est = simulate(&SimulationConfig { workers, ..base }).unwrap();
            assert_eq!(est.mean_tau.to_bits(), one.mean_tau.to_bits());
            assert_eq!(est.var_tau.to_bits(), one.var_tau.to_bits());
            assert_eq!(est.stderr_mean.to_bits(), one.stderr_mean.to_bits());
            assert_eq!(est.stderr_var.to_bits(), one.stderr_var.to_bits());
        }
    }

    #[test]
    fn invalid_config_is_rejected() {
        let spec = DistributionSpec::uniform(0.0, 1.0).unwrap();
        let bad = SimulationConfig {
            spec,
            horizon: 4,
            replicas: 0,
            seed: 0,
            workers: 1,
        };
        assert!(simulate(&bad).is_err());
        let bad = SimulationConfig {
            spec,
            horizon: 4,
            replicas: 10,
            seed: 0,
            workers: 0,
        };
        assert!(simulate(&bad).is_err());
    }
}
