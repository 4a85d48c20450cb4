//! The exact threshold sequence v_1..v_N.
//!
//! Starting from v_1 = E[y], each step adds the integral of the survival
//! function above the current threshold:
//!
//!   v_{n+1} = v_n + integral_{v_n}^{U} h(y) dy,
//!
//! with U the domain bound (infinite for unbounded support). The geometric
//! family uses the discrete analogue v_{n+1} = v_n + (1-p)^{v_n} / p.

use crate::distributions::DistributionSpec;
use crate::error::{Error, Result};
use crate::quadrature;

/// Densely stored sequences are capped here; see [`value_at_checkpoints`]
/// for larger horizons.
pub const DENSE_HORIZON_CAP: usize = 10_000_000;

/// The thresholds v_1..v_N for one distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct ValueSequence {
    spec: DistributionSpec,
    values: Vec<f64>,
}

impl ValueSequence {
    pub fn spec(&self) -> &DistributionSpec {
        &self.spec
    }

    /// The horizon N.
    pub fn horizon(&self) -> usize {
        self.values.len()
    }

    /// All values, v_1 first.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// v_n for 1 <= n <= N.
    pub fn value(&self, n: usize) -> f64 {
        self.values[n - 1]
    }
}

/// Integral of the survival function over [v, U], where U is the domain's
/// upper bound. Closed forms cover the exponential, Pareto, uniform and
/// Weibull-with-shape-one families; everything else goes through adaptive
/// quadrature. For the geometric family this is the discrete recurrence
/// increment (1-p)^v / p.
pub fn tail_integral(spec: &DistributionSpec, v: f64) -> Result<f64> {
    match *spec {
        DistributionSpec::Exponential { beta } => Ok(exponential_tail(beta, v)),
        // Shape one is an exponential in disguise.
        DistributionSpec::Weibull { beta, k } => {
            if k == 1.0 {
                Ok(exponential_tail(beta, v))
            } else {
                tail_integral_quadrature(spec, v)
            }
        }
        DistributionSpec::Pareto { beta, alpha } => {
            if v <= beta {
                Ok((beta - v) + beta / (alpha - 1.0))
            } else {
                Ok(beta.powf(alpha) * v.powf(1.0 - alpha) / (alpha - 1.0))
            }
        }
        DistributionSpec::Uniform { a, b } => {
            if v <= a {
                Ok((a - v) + 0.5 * (b - a))
            } else if v >= b {
                Ok(0.0)
            } else {
                Ok((b - v) * (b - v) / (2.0 * (b - a)))
            }
        }
        DistributionSpec::Geometric { p } => Ok((v * (-p).ln_1p()).exp() / p),
        _ => tail_integral_quadrature(spec, v),
    }
}

/// The quadrature path, callable directly so the closed forms can be
/// cross-checked against it.
pub(crate) fn tail_integral_quadrature(spec: &DistributionSpec, v: f64) -> Result<f64> {
    let lower = spec.lower_bound();
    let upper = spec.upper_bound();
    // h = 1 below the support; that part integrates exactly.
    let (start, below) = if lower.is_finite() && v < lower {
        (lower, lower - v)
    } else {
        (v, 0.0)
    };

    let h = |y: f64| spec.survival(y);
    let integral = if upper.is_finite() {
        if start >= upper {
            0.0
        } else if let DistributionSpec::Triangular { c, .. } = *spec {
            // Split at the mode, where h has a kink.
            if start < c {
                quadrature::integrate(h, start, c, quadrature::ABS_TOL, quadrature::REL_TOL)?
                    + quadrature::integrate(h, c, upper, quadrature::ABS_TOL, quadrature::REL_TOL)?
            } else {
                quadrature::integrate(h, start, upper, quadrature::ABS_TOL, quadrature::REL_TOL)?
            }
        } else {
            quadrature::integrate(h, start, upper, quadrature::ABS_TOL, quadrature::REL_TOL)?
        }
    } else {
        quadrature::integrate_to_inf(h, start, quadrature::ABS_TOL, quadrature::REL_TOL)?
    };
    Ok(below + integral)
}

fn exponential_tail(beta: f64, v: f64) -> f64 {
    if v <= 0.0 {
        -v + beta
    } else {
        beta * (-v / beta).exp()
    }
}

/// Compute v_1..v_N by the recurrence, stored densely.
pub fn value_sequence(spec: &DistributionSpec, horizon: usize) -> Result<ValueSequence> {
    if horizon < 1 {
        return Err(Error::Usage("horizon must be at least 1".into()));
    }
    if horizon > DENSE_HORIZON_CAP {
        return Err(Error::Usage(format!(
            "horizon {horizon} exceeds the dense cap {DENSE_HORIZON_CAP}; use value_at_checkpoints"
        )));
    }
    let mut values = Vec::with_capacity(horizon);
    let mut v = spec.mean();
    values.push(v);
    for _ in 1..horizon {
        v += tail_integral(spec, v)?;
        values.push(v);
    }
    Ok(ValueSequence {
        spec: *spec,
        values,
    })
}

/// Streaming evaluation of v_n at the requested indices only; memory use is
/// independent of how far the recurrence runs.
pub fn value_at_checkpoints(
    spec: &DistributionSpec,
    checkpoints: &[u64],
) -> Result<Vec<(u64, f64)>> {
    if checkpoints.is_empty() {
        return Ok(Vec::new());
    }
    if checkpoints.contains(&0) {
        return Err(Error::Usage("checkpoints are 1-based; 0 is not valid".into()));
    }
    let mut wanted: Vec<u64> = checkpoints.to_vec();
    wanted.sort_unstable();
    wanted.dedup();

    let mut out = Vec::with_capacity(wanted.len());
    let mut v = spec.mean();
    let mut next = wanted.iter().copied();
    let mut target = next.next().unwrap();
    let last = *wanted.last().unwrap();
    for n in 1..=last {
        if n == target {
            out.push((n, v));
            match next.next() {
                Some(t) => target = t,
                None => break,
            }
        }
        if n < last {
            v += tail_integral(spec, v)?;
        }
    }
    Ok(out)
}

/// Acceptance probabilities w_i = P(y < v_i) for i = 1..N-1.
///
/// The geometric family uses the exact integer-threshold probability
/// 1 - (1-p)^(ceil(v_i)-1).
pub fn acceptance_probs(vs: &ValueSequence) -> Vec<f64> {
    let n = vs.horizon();
    let spec = vs.spec();
    vs.values()[..n.saturating_sub(1)]
        .iter()
        .map(|&v| 1.0 - spec.prob_at_least(v))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel_close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1e-300)
    }

    #[test]
    fn tail_integral_closed_forms() {
        let exp = DistributionSpec::exponential(1.0).unwrap();
        assert_eq!(tail_integral(&exp, 0.0).unwrap(), 1.0);
        let uni = DistributionSpec::uniform(0.0, 1.0).unwrap();
        // Hand value: integral of (1-y) over [1/2, 1] = 1/8.
        assert!(rel_close(tail_integral(&uni, 0.5).unwrap(), 0.125, 1e-15));
        let par = DistributionSpec::pareto(1.0, 2.0).unwrap();
        // Hand value: integral of y^-2 over [2, inf) = 1/2.
        assert!(rel_close(tail_integral(&par, 2.0).unwrap(), 0.5, 1e-15));
    }

    #[test]
    fn weibull_shape_one_reduces_to_exponential() {
        let wei = DistributionSpec::weibull(2.0, 1.0).unwrap();
        let exp = DistributionSpec::exponential(2.0).unwrap();
        for &v in &[0.0, 0.5, 3.0] {
            assert_eq!(
                tail_integral(&wei, v).unwrap(),
                tail_integral(&exp, v).unwrap()
            );
        }
    }

    #[test]
    fn value_sequence_examples() {
        let uni = DistributionSpec::uniform(0.0, 1.0).unwrap();
        let vs = value_sequence(&uni, 3).unwrap();
        assert_eq!(vs.values(), &[0.5, 0.625, 0.6953125]);

        let exp = DistributionSpec::exponential(1.0).unwrap();
        let vs = value_sequence(&exp, 2).unwrap();
        assert_eq!(vs.value(1), 1.0);
        assert!(rel_close(vs.value(2), 1.0 + (-1.0f64).exp(), 1e-15));

        let geo = DistributionSpec::geometric(0.5).unwrap();
        let vs = value_sequence(&geo, 2).unwrap();
        assert_eq!(vs.values(), &[2.0, 2.5]);
    }

    #[test]
    fn horizon_validation() {
        let uni = DistributionSpec::uniform(0.0, 1.0).unwrap();
        assert!(value_sequence(&uni, 0).is_err());
        assert!(value_sequence(&uni, DENSE_HORIZON_CAP + 1).is_err());
    }

    #[test]
    fn prefix_property() {
        let spec = DistributionSpec::normal(0.0, 1.0).unwrap();
        let short = value_sequence(&spec, 5).unwrap();
        let long = value_sequence(&spec, 12).unwrap();
        assert_eq!(short.values(), &long.values()[..5]);
    }

    #[test]
    fn checkpoints_match_dense_values() {
        let spec = DistributionSpec::weibull(1.0, 2.0).unwrap();
        let dense = value_sequence(&spec, 64).unwrap();
        let points = value_at_checkpoints(&spec, &[1, 2, 17, 64]).unwrap();
        for (n, v) in points {
            assert_eq!(v, dense.value(n as usize), "checkpoint {n}");
        }
        assert!(value_at_checkpoints(&spec, &[0, 3]).is_err());
    }

    #[test]
    fn finite_bound_monotone_saturation() {
        for spec in [
            DistributionSpec::uniform(0.0, 1.0).unwrap(),
            DistributionSpec::triangular(0.0, 0.5, 1.0).unwrap(),
            DistributionSpec::wigner(1.0).unwrap(),
            DistributionSpec::beta(2.0, 1.0).unwrap(),
        ] {
            let y_max = spec.upper_bound();
            let vs = value_sequence(&spec, 2000).unwrap();
            let mut prev_gap = f64::INFINITY;
            for (i, &v) in vs.values().iter().enumerate() {
                assert!(v < y_max, "{spec}: v_{} = {v} not below {y_max}", i + 1);
                let gap = y_max - v;
                assert!(gap <= prev_gap, "{spec}: gap grew at n={}", i + 1);
                prev_gap = gap;
                if i > 0 {
                    assert!(v > vs.value(i), "{spec}: not increasing at n={}", i + 1);
                }
            }
        }
    }

    #[test]
    fn closed_forms_agree_with_quadrature() {
        for spec in [
            DistributionSpec::exponential(1.0).unwrap(),
            DistributionSpec::exponential(2.5).unwrap(),
            DistributionSpec::pareto(1.0, 2.0).unwrap(),
            DistributionSpec::pareto(2.0, 3.0).unwrap(),
        ] {
            let mut v = spec.mean();
            for n in 1..=1000usize {
                let closed = tail_integral(&spec, v).unwrap();
                if n.is_power_of_two() || n == 1000 {
                    let quad = tail_integral_quadrature(&spec, v).unwrap();
                    assert!(
                        rel_close(quad, closed, 1e-9),
                        "{spec} at v={v}: quadrature {quad} vs closed {closed}"
                    );
                }
                v += closed;
            }
        }
    }

    #[test]
    fn acceptance_prob_examples() {
        let uni = DistributionSpec::uniform(0.0, 1.0).unwrap();
        let w = acceptance_probs(&value_sequence(&uni, 2).unwrap());
        assert_eq!(w, vec![0.5]);

        let exp = DistributionSpec::exponential(1.0).unwrap();
        let w = acceptance_probs(&value_sequence(&exp, 2).unwrap());
        assert!(rel_close(w[0], 1.0 - (-1.0f64).exp(), 1e-15));

        let one = acceptance_probs(&value_sequence(&exp, 1).unwrap());
        assert!(one.is_empty());
    }

    #[test]
    fn geometric_acceptance_uses_integer_thresholds() {
        let geo = DistributionSpec::geometric(0.5).unwrap();
        let vs = value_sequence(&geo, 3).unwrap(); // v = [2, 2.5, ...]
        let w = acceptance_probs(&vs);
        // w_1 = 1 - (1-p)^(ceil(2)-1) = 1 - 0.5 = 0.5
        assert_eq!(w[0], 0.5);
        // w_2 = 1 - (1-p)^(ceil(2.5)-1) = 1 - 0.25 = 0.75
        assert_eq!(w[1], 0.75);
    }

    #[test]
    fn uniform_acceptance_probs_approach_one_minus_lambda_over_n() {
        // Tail form: 1 - w_n ~ lambda/n with lambda = 2. The leading
        // correction is of order log(n)/n, about 1.2e-3 at n = 1e4.
        let uni = DistributionSpec::uniform(0.0, 1.0).unwrap();
        let n = 10_000;
        let vs = value_sequence(&uni, n + 1).unwrap();
        let w = acceptance_probs(&vs);
        let h_n = 1.0 - w[n - 1];
        let dev = (h_n / (2.0 / n as f64) - 1.0).abs();
        assert!(dev < 2e-3, "deviation {dev}");
        // And it shrinks by roughly a decade going to n = 1e5.
        let vs = value_sequence(&uni, 100_001).unwrap();
        let w = acceptance_probs(&vs);
        let h_n5 = 1.0 - w[100_000 - 1];
        let dev5 = (h_n5 / (2.0 / 1e5) - 1.0).abs();
        assert!(dev5 < dev / 5.0, "dev at 1e5 = {dev5}, at 1e4 = {dev}");
    }
}
