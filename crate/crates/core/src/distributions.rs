//! The distribution zoo: densities, survival functions and their inverses,
//! means, tail classification and random sampling.
//!
//! Families with unbounded support must satisfy h(y) = o(1/y) in the upper
//! tail, which is why Pareto requires a tail index above one. Parameters are
//! validated at construction; there is no way to hold an invalid spec.

use rand::Rng;

use crate::error::{Error, Result};
use crate::special;

/// A distribution family together with validated parameters.
///
/// Construct through the named constructors ([`DistributionSpec::exponential`]
/// and friends) or by parsing a spec string such as `pareto:alpha=2,beta=1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DistributionSpec {
    #[non_exhaustive]
    Exponential { beta: f64 },
    #[non_exhaustive]
    Normal { mu: f64, sigma: f64 },
    #[non_exhaustive]
    Gamma { alpha: f64, beta: f64 },
    #[non_exhaustive]
    Weibull { beta: f64, k: f64 },
    #[non_exhaustive]
    Pareto { beta: f64, alpha: f64 },
    #[non_exhaustive]
    Uniform { a: f64, b: f64 },
    #[non_exhaustive]
    Triangular { a: f64, c: f64, b: f64 },
    #[non_exhaustive]
    Wigner { r: f64 },
    #[non_exhaustive]
    BetaDist { alpha: f64, beta: f64 },
    #[non_exhaustive]
    Geometric { p: f64 },
}

/// Upper-tail behaviour of a distribution, with the dimensionless lambda
/// that drives the stopping-time asymptotics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailClass {
    /// h decays exponentially as y grows.
    Exponential,
    /// h ~ y^-b with decay power b > 1.
    Algebraic { b: f64 },
    /// h ~ (y_max - y)^b as y approaches the finite domain bound.
    FiniteBound { b: f64, y_max: f64 },
    /// Geometric distribution on {1, 2, ...} with success probability p.
    DiscreteGeometric { p: f64 },
}

impl TailClass {
    /// The scalar lambda summarizing the tail:
    /// 1 (exponential), (b-1)/b (algebraic), (b+1)/b (finite bound),
    /// p/|log(1-p)| (geometric).
    pub fn lambda(&self) -> f64 {
        match *self {
            TailClass::Exponential => 1.0,
            TailClass::Algebraic { b } => (b - 1.0) / b,
            TailClass::FiniteBound { b, .. } => (b + 1.0) / b,
            TailClass::DiscreteGeometric { p } => p / -(-p).ln_1p(),
        }
    }
}

fn check(ok: bool, name: &'static str, value: f64, reason: &'static str) -> Result<()> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason,
        })
    }
}

impl DistributionSpec {
    pub fn exponential(beta: f64) -> Result<Self> {
        check(beta > 0.0, "beta", beta, "scale must be positive")?;
        Ok(Self::Exponential { beta })
    }

    pub fn normal(mu: f64, sigma: f64) -> Result<Self> {
        check(mu.is_finite(), "mu", mu, "location must be finite")?;
        check(sigma > 0.0, "sigma", sigma, "scale must be positive")?;
        Ok(Self::Normal { mu, sigma })
    }

    /// Gamma with shape `alpha` (alpha > 0, alpha != 1) and scale `beta`.
    /// Shape one is the exponential distribution; construct that instead.
    pub fn gamma(alpha: f64, beta: f64) -> Result<Self> {
        check(alpha > 0.0, "alpha", alpha, "shape must be positive")?;
        check(
            alpha != 1.0,
            "alpha",
            alpha,
            "shape one is the exponential distribution; use exponential",
        )?;
        check(beta > 0.0, "beta", beta, "scale must be positive")?;
        Ok(Self::Gamma { alpha, beta })
    }

    pub fn weibull(beta: f64, k: f64) -> Result<Self> {
        check(beta > 0.0, "beta", beta, "scale must be positive")?;
        check(k > 0.0, "k", k, "shape must be positive")?;
        Ok(Self::Weibull { beta, k })
    }

    /// Pareto with minimum `beta` and tail index `alpha` > 1, so that the
    /// survival function is o(1/y).
    pub fn pareto(beta: f64, alpha: f64) -> Result<Self> {
        check(beta > 0.0, "beta", beta, "minimum must be positive")?;
        check(alpha > 1.0, "alpha", alpha, "tail index must exceed one")?;
        Ok(Self::Pareto { beta, alpha })
    }

    pub fn uniform(a: f64, b: f64) -> Result<Self> {
        check(a.is_finite(), "a", a, "lower bound must be finite")?;
        check(a < b, "b", b, "upper bound must exceed lower bound")?;
        Ok(Self::Uniform { a, b })
    }

    pub fn triangular(a: f64, c: f64, b: f64) -> Result<Self> {
        check(a.is_finite(), "a", a, "lower bound must be finite")?;
        check(a < c, "c", c, "mode must exceed lower bound")?;
        check(c < b, "b", b, "upper bound must exceed mode")?;
        Ok(Self::Triangular { a, c, b })
    }

    pub fn wigner(r: f64) -> Result<Self> {
        check(r > 0.0, "r", r, "radius must be positive")?;
        Ok(Self::Wigner { r })
    }

    pub fn beta(alpha: f64, beta: f64) -> Result<Self> {
        check(alpha > 0.0, "alpha", alpha, "shape must be positive")?;
        check(beta > 0.0, "beta", beta, "shape must be positive")?;
        Ok(Self::BetaDist { alpha, beta })
    }

    pub fn geometric(p: f64) -> Result<Self> {
        check(
            p > 0.0 && p < 1.0,
            "p",
            p,
            "success probability must lie strictly between 0 and 1",
        )?;
        Ok(Self::Geometric { p })
    }

    /// Lowercase family name as used in spec strings.
    pub fn family_name(&self) -> &'static str {
        match self {
            Self::Exponential { .. } => "exponential",
            Self::Normal { .. } => "normal",
            Self::Gamma { .. } => "gamma",
            Self::Weibull { .. } => "weibull",
            Self::Pareto { .. } => "pareto",
            Self::Uniform { .. } => "uniform",
            Self::Triangular { .. } => "triangular",
            Self::Wigner { .. } => "wigner",
            Self::BetaDist { .. } => "beta",
            Self::Geometric { .. } => "geometric",
        }
    }

    /// Parameters in canonical order, as (key, value) pairs.
    pub fn params(&self) -> Vec<(&'static str, f64)> {
        match *self {
            Self::Exponential { beta } => vec![("beta", beta)],
            Self::Normal { mu, sigma } => vec![("mu", mu), ("sigma", sigma)],
            Self::Gamma { alpha, beta } => vec![("alpha", alpha), ("beta", beta)],
            Self::Weibull { beta, k } => vec![("beta", beta), ("k", k)],
            Self::Pareto { beta, alpha } => vec![("beta", beta), ("alpha", alpha)],
            Self::Uniform { a, b } => vec![("a", a), ("b", b)],
            Self::Triangular { a, c, b } => vec![("a", a), ("c", c), ("b", b)],
            Self::Wigner { r } => vec![("r", r)],
            Self::BetaDist { alpha, beta } => vec![("alpha", alpha), ("beta", beta)],
            Self::Geometric { p } => vec![("p", p)],
        }
    }

    /// True for every family except the integer-valued geometric.
    pub fn is_continuous(&self) -> bool {
        !matches!(self, Self::Geometric { .. })
    }

    /// Lower edge of the support.
    pub fn lower_bound(&self) -> f64 {
        match *self {
            Self::Exponential { .. } | Self::Gamma { .. } | Self::Weibull { .. } => 0.0,
            Self::Normal { .. } => f64::NEG_INFINITY,
            Self::Pareto { beta, .. } => beta,
            Self::Uniform { a, .. } | Self::Triangular { a, .. } => a,
            Self::Wigner { r } => -r,
            Self::BetaDist { .. } => 0.0,
            Self::Geometric { .. } => 1.0,
        }
    }

    /// Upper edge of the support; infinite for unbounded families.
    pub fn upper_bound(&self) -> f64 {
        match *self {
            Self::Uniform { b, .. } | Self::Triangular { b, .. } => b,
            Self::Wigner { r } => r,
            Self::BetaDist { .. } => 1.0,
            _ => f64::INFINITY,
        }
    }

    /// Density f(y); zero outside the support. For the geometric family this
    /// is the probability mass at integer y and zero elsewhere.
    pub fn pdf(&self, y: f64) -> f64 {
        match *self {
            Self::Exponential { beta } => {
                if y < 0.0 {
                    0.0
                } else {
                    (-y / beta).exp() / beta
                }
            }
            Self::Normal { mu, sigma } => {
                let z = (y - mu) / sigma;
                (-0.5 * z * z).exp() / (sigma * (2.0 * std::f64::consts::PI).sqrt())
            }
            Self::Gamma { alpha, beta } => {
                if y <= 0.0 {
                    0.0
                } else {
                    ((alpha - 1.0) * y.ln() - y / beta - special::ln_gamma(alpha)
                        - alpha * beta.ln())
                    .exp()
                }
            }
            Self::Weibull { beta, k } => {
                if y <= 0.0 {
                    0.0
                } else {
                    let t = y / beta;
                    k / beta * t.powf(k - 1.0) * (-t.powf(k)).exp()
                }
            }
            Self::Pareto { beta, alpha } => {
                if y < beta {
                    0.0
                } else {
                    alpha * beta.powf(alpha) / y.powf(alpha + 1.0)
                }
            }
            Self::Uniform { a, b } => {
                if y < a || y > b {
                    0.0
                } else {
                    1.0 / (b - a)
                }
            }
            Self::Triangular { a, c, b } => {
                if y < a || y > b {
                    0.0
                } else if y <= c {
                    2.0 * (y - a) / ((b - a) * (c - a))
                } else {
                    2.0 * (b - y) / ((b - a) * (b - c))
                }
            }
            Self::Wigner { r } => {
                if y.abs() > r {
                    0.0
                } else {
                    2.0 * ((r - y) * (r + y)).sqrt() / (std::f64::consts::PI * r * r)
                }
            }
            Self::BetaDist { alpha, beta } => {
                if y <= 0.0 || y >= 1.0 {
                    0.0
                } else {
                    ((alpha - 1.0) * y.ln() + (beta - 1.0) * (-y).ln_1p()
                        - special::ln_gamma(alpha)
                        - special::ln_gamma(beta)
                        + special::ln_gamma(alpha + beta))
                    .exp()
                }
            }
            Self::Geometric { p } => {
                if y >= 1.0 && y.fract() == 0.0 {
                    p * ((y - 1.0) * (-p).ln_1p()).exp()
                } else {
                    0.0
                }
            }
        }
    }

    /// Survival function h(y) = 1 - F(y), monotonically nonincreasing.
    ///
    /// For the geometric family this is the continuous extension
    /// (1-p)^y, which coincides with P(Y > k) = (1-p)^k at integers; the
    /// exact integer-threshold probability lives in
    /// [`DistributionSpec::prob_at_least`].
    pub fn survival(&self, y: f64) -> f64 {
        match *self {
            Self::Exponential { beta } => {
                if y < 0.0 {
                    1.0
                } else {
                    (-y / beta).exp()
                }
            }
            Self::Normal { mu, sigma } => {
                0.5 * special::erfc((y - mu) / (sigma * std::f64::consts::SQRT_2))
            }
            Self::Gamma { alpha, beta } => {
                if y <= 0.0 {
                    1.0
                } else {
                    special::gamma_q(alpha, y / beta)
                }
            }
            Self::Weibull { beta, k } => {
                if y <= 0.0 {
                    1.0
                } else {
                    (-(y / beta).powf(k)).exp()
                }
            }
            Self::Pareto { beta, alpha } => {
                if y <= beta {
                    1.0
                } else {
                    (beta / y).powf(alpha)
                }
            }
            Self::Uniform { a, b } => {
                if y <= a {
                    1.0
                } else if y >= b {
                    0.0
                } else {
                    (b - y) / (b - a)
                }
            }
            Self::Triangular { a, c, b } => {
                if y <= a {
                    1.0
                } else if y >= b {
                    0.0
                } else if y <= c {
                    1.0 - (y - a) * (y - a) / ((b - a) * (c - a))
                } else {
                    (b - y) * (b - y) / ((b - a) * (b - c))
                }
            }
            Self::Wigner { r } => {
                if y <= -r {
                    1.0
                } else if y >= r {
                    0.0
                } else {
                    // With u = y/R this is 1/2 - u sqrt(1-u^2)/pi - asin(u)/pi,
                    // rearranged through acos and (1-u)(1+u) to avoid
                    // cancellation near the domain bound where h is tiny.
                    let u = y / r;
                    let root = ((1.0 - u) * (1.0 + u)).sqrt();
                    ((u.acos() - u * root) / std::f64::consts::PI).max(0.0)
                }
            }
            Self::BetaDist { alpha, beta } => {
                if y <= 0.0 {
                    1.0
                } else if y >= 1.0 {
                    0.0
                } else {
                    // Evaluated as I_{1-y}(b, a) for accuracy near the bound.
                    special::beta_inc(beta, alpha, 1.0 - y)
                }
            }
            Self::Geometric { p } => {
                if y <= 0.0 {
                    1.0
                } else {
                    (y * (-p).ln_1p()).exp()
                }
            }
        }
    }

    /// P(Y >= y) for the geometric family: (1-p)^(ceil(y)-1). For the
    /// continuous families this equals `survival` (point masses are absent).
    pub(crate) fn prob_at_least(&self, y: f64) -> f64 {
        match *self {
            Self::Geometric { p } => {
                if y <= 1.0 {
                    1.0
                } else {
                    ((y.ceil() - 1.0) * (-p).ln_1p()).exp()
                }
            }
            _ => self.survival(y),
        }
    }

    /// Inverse of the survival function: the y with h(y) = q, for q in (0, 1).
    ///
    /// Closed form where the survival function inverts analytically;
    /// bracketed bisection on `survival` otherwise.
    pub fn survival_inverse(&self, q: f64) -> Result<f64> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::Domain(format!(
                "survival_inverse requires 0 < q < 1, got {q}"
            )));
        }
        Ok(match *self {
            Self::Exponential { beta } => -beta * q.ln(),
            Self::Weibull { beta, k } => beta * (-q.ln()).powf(1.0 / k),
            Self::Pareto { beta, alpha } => beta * q.powf(-1.0 / alpha),
            Self::Uniform { a, b } => b - q * (b - a),
            Self::Triangular { a, c, b } => {
                let split = (b - c) / (b - a); // h at the mode
                if q <= split {
                    b - (q * (b - a) * (b - c)).sqrt()
                } else {
                    a + ((1.0 - q) * (b - a) * (c - a)).sqrt()
                }
            }
            Self::Geometric { p } => q.ln() / (-p).ln_1p(),
            Self::Normal { mu, sigma } => {
                // Expand a bracket around the mean, then bisect.
                let mut lo = mu - sigma;
                let mut hi = mu + sigma;
                while self.survival(lo) < q {
                    lo = mu + 2.0 * (lo - mu);
                }
                while self.survival(hi) > q {
                    hi = mu + 2.0 * (hi - mu);
                }
                self.bisect_survival(q, lo, hi)
            }
            Self::Gamma { alpha, beta } => {
                let mut hi = beta * alpha.max(1.0);
                while self.survival(hi) > q {
                    hi *= 2.0;
                }
                self.bisect_survival(q, 0.0, hi)
            }
            Self::Wigner { r } => self.bisect_survival(q, -r, r),
            Self::BetaDist { .. } => self.bisect_survival(q, 0.0, 1.0),
        })
    }

    // Bisection on the survival function over a bracket with
    // h(lo) >= q >= h(hi). Runs to f64 resolution, capped at 200 steps.
    fn bisect_survival(&self, q: f64, mut lo: f64, mut hi: f64) -> f64 {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.survival(mid) >= q {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Upper-tail classification and its lambda.
    pub fn tail_class(&self) -> TailClass {
        match *self {
            Self::Exponential { .. }
            | Self::Normal { .. }
            | Self::Gamma { .. }
            | Self::Weibull { .. } => TailClass::Exponential,
            Self::Pareto { alpha, .. } => TailClass::Algebraic { b: alpha },
            Self::Uniform { b, .. } => TailClass::FiniteBound { b: 1.0, y_max: b },
            Self::Triangular { b, .. } => TailClass::FiniteBound { b: 2.0, y_max: b },
            Self::Wigner { r } => TailClass::FiniteBound {
                b: 1.5,
                y_max: r,
            },
            Self::BetaDist { beta, .. } => TailClass::FiniteBound {
                b: beta,
                y_max: 1.0,
            },
            Self::Geometric { p } => TailClass::DiscreteGeometric { p },
        }
    }

    /// Expected value E[y]; finite for every supported family.
    pub fn mean(&self) -> f64 {
        match *self {
            Self::Exponential { beta } => beta,
            Self::Normal { mu, .. } => mu,
            Self::Gamma { alpha, beta } => alpha * beta,
            Self::Weibull { beta, k } => beta * special::gamma(1.0 + 1.0 / k),
            Self::Pareto { beta, alpha } => alpha * beta / (alpha - 1.0),
            Self::Uniform { a, b } => 0.5 * (a + b),
            Self::Triangular { a, c, b } => (a + b + c) / 3.0,
            Self::Wigner { .. } => 0.0,
            Self::BetaDist { alpha, beta } => alpha / (alpha + beta),
            Self::Geometric { p } => 1.0 / p,
        }
    }

    /// Draw one variate, advancing `rng` deterministically.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            Self::Exponential { beta } => {
                let u: f64 = rng.random();
                -beta * (-u).ln_1p()
            }
            Self::Normal { mu, sigma } => mu + sigma * sample_standard_normal(rng),
            Self::Gamma { alpha, beta } => sample_gamma(alpha, rng) * beta,
            Self::Weibull { beta, k } => {
                let u: f64 = rng.random();
                beta * (-(-u).ln_1p()).powf(1.0 / k)
            }
            Self::Pareto { beta, alpha } => {
                let u: f64 = rng.random();
                beta * (1.0 - u).powf(-1.0 / alpha)
            }
            Self::Uniform { a, b } => {
                let u: f64 = rng.random();
                a + u * (b - a)
            }
            Self::Triangular { a, c, b } => {
                let u: f64 = rng.random();
                if u <= (c - a) / (b - a) {
                    a + (u * (b - a) * (c - a)).sqrt()
                } else {
                    b - ((1.0 - u) * (b - a) * (b - c)).sqrt()
                }
            }
            Self::Wigner { r } => loop {
                let y = (2.0 * rng.random::<f64>() - 1.0) * r;
                let u: f64 = rng.random();
                if u * u <= 1.0 - (y / r) * (y / r) {
                    break y;
                }
            },
            Self::BetaDist { alpha, beta } => {
                let g1 = sample_gamma(alpha, rng);
                let g2 = sample_gamma(beta, rng);
                g1 / (g1 + g2)
            }
            Self::Geometric { p } => {
                let u: f64 = rng.random();
                ((-u).ln_1p() / (-p).ln_1p()).ceil().max(1.0)
            }
        }
    }
}

fn sample_standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    // Basic Box-Muller; the sine companion is discarded.
    let u1: f64 = rng.random();
    let u2: f64 = rng.random();
    (-2.0 * (-u1).ln_1p()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

// Marsaglia-Tsang squeeze method; shape below one is boosted via
// G(alpha) = G(alpha + 1) * U^(1/alpha).
fn sample_gamma<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    if alpha < 1.0 {
        let boost = sample_gamma(alpha + 1.0, rng);
        let u: f64 = rng.random();
        return boost * (1.0 - u).powf(1.0 / alpha);
    }
    let d = alpha - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        let x = sample_standard_normal(rng);
        let t = 1.0 + c * x;
        if t <= 0.0 {
            continue;
        }
        let v = t * t * t;
        let u: f64 = rng.random();
        if u < 1.0 - 0.0331 * x.powi(4) {
            return d * v;
        }
        if u > 0.0 && u.ln() < 0.5 * x * x + d * (1.0 - v + v.ln()) {
            return d * v;
        }
    }
}

// --- spec-string parsing -----------------------------------------------

impl std::str::FromStr for DistributionSpec {
    type Err = Error;

    /// Parse `family:key=value,key=value`. Family and keys are
    /// case-insensitive; unknown or repeated keys are errors.
    fn from_str(s: &str) -> Result<Self> {
        let (family, rest) = match s.split_once(':') {
            Some((f, r)) => (f.trim().to_ascii_lowercase(), r),
            None => {
                return Err(Error::Parse(format!(
                    "expected `family:key=value,...`, got `{s}`"
                )))
            }
        };

        let expected: &[&str] = match family.as_str() {
            "exponential" => &["beta"],
            "normal" => &["mu", "sigma"],
            "gamma" => &["alpha", "beta"],
            "weibull" => &["beta", "k"],
            "pareto" => &["beta", "alpha"],
            "uniform" => &["a", "b"],
            "triangular" => &["a", "c", "b"],
            "wigner" => &["r"],
            "beta" => &["alpha", "beta"],
            "geometric" => &["p"],
            other => return Err(Error::Parse(format!("unknown family `{other}`"))),
        };

        let mut values: Vec<Option<f64>> = vec![None; expected.len()];
        for pair in rest.split(',') {
            let pair = pair.trim();
            if pair.is_empty() {
                continue;
            }
            let (key, value) = pair.split_once('=').ok_or_else(|| {
                Error::Parse(format!("expected `key=value`, got `{pair}`"))
            })?;
            let key = key.trim().to_ascii_lowercase();
            let idx = expected
                .iter()
                .position(|&k| k == key)
                .ok_or_else(|| Error::Parse(format!("unknown key `{key}` for {family}")))?;
            if values[idx].is_some() {
                return Err(Error::Parse(format!("repeated key `{key}`")));
            }
            let v: f64 = value
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("key `{key}`: `{value}` is not a number")))?;
            values[idx] = Some(v);
        }
        for (i, v) in values.iter().enumerate() {
            if v.is_none() {
                return Err(Error::Parse(format!("missing key `{}`", expected[i])));
            }
        }
        let v: Vec<f64> = values.into_iter().map(|x| x.unwrap()).collect();

        match family.as_str() {
            "exponential" => Self::exponential(v[0]),
            "normal" => Self::normal(v[0], v[1]),
            "gamma" => Self::gamma(v[0], v[1]),
            "weibull" => Self::weibull(v[0], v[1]),
            "pareto" => Self::pareto(v[0], v[1]),
            "uniform" => Self::uniform(v[0], v[1]),
            "triangular" => Self::triangular(v[0], v[1], v[2]),
            "wigner" => Self::wigner(v[0]),
            "beta" => Self::beta(v[0], v[1]),
            "geometric" => Self::geometric(v[0]),
            _ => unreachable!(),
        }
    }
}

impl std::fmt::Display for DistributionSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:", self.family_name())?;
        for (i, (k, v)) in self.params().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}={v}")?;
        }
        Ok(())
    }
}
