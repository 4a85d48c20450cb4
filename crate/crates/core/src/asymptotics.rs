//! Closed-form large-horizon approximations.
//!
//! The threshold sequence obeys v_n ~ h_lead^{-1}(lambda / n), where h_lead
//! is the leading-order behaviour of the survival function near the domain's
//! upper limit and lambda is the tail-class scalar. Inverting h_lead per
//! family reproduces the per-distribution rows (beta log n for the
//! exponential family, Lambert-W forms for normal and gamma, and so on).
//!
//! The stopping-time statistics depend on the tail only through lambda:
//!
//!   E(tau_N) ~ N / (lambda + 1),
//!   Var(tau_N) ~ lambda N^2 / ((lambda + 1)^2 (lambda + 2)).

use crate::distributions::DistributionSpec;
use crate::error::{Error, Result};
use crate::special;

/// Largest x with W(x) undefined on the principal branch: -1/e.
pub const LAMBERT_BRANCH_POINT: f64 = -0.367_879_441_171_442_33;

/// Principal-branch Lambert W: the w >= -1 with w e^w = x, for x >= -1/e.
///
/// Halley iteration refined from a region-dependent seed; the relative
/// residual |w e^w - x| / |x| stays below 1e-13 across the supported range.
pub fn lambert_w(x: f64) -> Result<f64> {
    if x < LAMBERT_BRANCH_POINT || x.is_nan() {
        return Err(Error::Domain(format!(
            "lambert_w requires x >= -1/e, got {x}"
        )));
    }
    if x == 0.0 {
        return Ok(0.0);
    }

    let mut w = if x < -0.25 {
        // Series around the branch point in p = sqrt(2(e x + 1)).
        let p = (2.0 * (std::f64::consts::E * x + 1.0)).max(0.0).sqrt();
        -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p
    } else if x < 3.0 {
        x.ln_1p()
    } else {
        // Two-term expansion W(x) ~ log(x) - log(log(x)) for large x.
        let l = x.ln();
        l - l.ln()
    };

    for _ in 0..50 {
        let ew = w.exp();
        let f = w * ew - x;
        if f.abs() <= 1e-15 * x.abs().max(1e-300) {
            break;
        }
        let wp1 = w + 1.0;
        if wp1.abs() < 1e-9 {
            // Essentially at the branch point; the series seed is already
            // as good as f64 allows there.
            break;
        }
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        let step = f / denom;
        w -= step;
        if step.abs() <= 1e-16 * (1.0 + w.abs()) {
            break;
        }
    }
    Ok(w)
}

/// The truncated large-argument expansion log(x) - log(log(x)), exposed on
/// its own; substituting it for [`lambert_w`] in the normal and gamma value
/// approximations leaves an error that vanishes as n grows.
pub fn lambert_w_log_approx(x: f64) -> Result<f64> {
    if x <= 1.0 || x.is_nan() {
        return Err(Error::Domain(format!(
            "lambert_w_log_approx requires x > 1, got {x}"
        )));
    }
    let l = x.ln();
    Ok(l - l.ln())
}

/// Leading-order stopping statistics for horizon N.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticStats {
    pub horizon: u64,
    pub lambda: f64,
    pub expectation: f64,
    pub variance: f64,
}

/// E and Var of tau_N to leading order, from the tail-class lambda alone.
pub fn asymptotic_stats(spec: &DistributionSpec, horizon: u64) -> AsymptoticStats {
    let lambda = spec.tail_class().lambda();
    let n = horizon as f64;
    AsymptoticStats {
        horizon,
        lambda,
        expectation: n / (lambda + 1.0),
        variance: lambda * n * n / ((lambda + 1.0) * (lambda + 1.0) * (lambda + 2.0)),
    }
}

/// Large-n approximation of the threshold v_n: the leading tail form of the
/// survival function, inverted at lambda/n. Meaningful for n >= 2.
pub fn asymptotic_value(spec: &DistributionSpec, n: u64) -> f64 {
    let q = spec.tail_class().lambda() / n as f64;
    leading_tail_inverse(spec, q)
}

// Inverse of the leading-order upper-tail behaviour of h at small q. This is
// not the inverse of the full survival function: only the dominant tail term
// is kept, which is what the large-n analysis prescribes.
fn leading_tail_inverse(spec: &DistributionSpec, q: f64) -> f64 {
    use std::f64::consts::PI;
    match *spec {
        // h = e^{-y/beta} exactly.
        DistributionSpec::Exponential { beta } => -beta * q.ln(),
        // h ~ e^{-z^2/2} / (z sqrt(2 pi)) with z = (y - mu)/sigma, so
        // z^2 e^{z^2} = 1/(2 pi q^2) and z = sqrt(W(...)).
        DistributionSpec::Normal { mu, sigma } => {
            let arg = 1.0 / (2.0 * PI * q * q);
            mu + sigma * lambert_w(arg).expect("positive argument").sqrt()
        }
        // h ~ x^{alpha-1} e^{-x} / Gamma(alpha) with x = y/beta. For shape
        // above one this is the tabulated principal-branch form; below one
        // the same algebra inverts exactly with 1-alpha in place of alpha-1.
        DistributionSpec::Gamma { alpha, beta } => {
            let m = if alpha > 1.0 { alpha - 1.0 } else { 1.0 - alpha };
            let arg = (1.0 / (q * special::gamma(alpha))).powf(1.0 / m) / m;
            beta * m * lambert_w(arg).expect("positive argument")
        }
        // h = e^{-(y/beta)^k} exactly.
        DistributionSpec::Weibull { beta, k } => beta * (-q.ln()).powf(1.0 / k),
        // h = (beta/y)^alpha exactly.
        DistributionSpec::Pareto { beta, alpha } => beta * q.powf(-1.0 / alpha),
        // h = (b-y)/(b-a) exactly.
        DistributionSpec::Uniform { a, b } => b - q * (b - a),
        // h = (b-y)^2 / ((b-a)(b-c)) above the mode.
        DistributionSpec::Triangular { a, c, b } => b - (q * (b - a) * (b - c)).sqrt(),
        // h ~ 4 sqrt(2) (R-y)^{3/2} / (3 pi R^{3/2}).
        DistributionSpec::Wigner { r } => {
            let k = 4.0 * std::f64::consts::SQRT_2 / (3.0 * PI * r.powf(1.5));
            r - (q / k).powf(2.0 / 3.0)
        }
        // h ~ (1-y)^beta / (beta B(alpha, beta)).
        DistributionSpec::BetaDist { alpha, beta } => {
            1.0 - (q * beta * special::beta_fn(alpha, beta)).powf(1.0 / beta)
        }
        // Continuous extension h = (1-p)^y.
        DistributionSpec::Geometric { p } => q.ln() / (-p).ln_1p(),
    }
}
