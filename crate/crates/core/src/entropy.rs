//! The two-parameter tempered entropy
//!
//! ```text
//! S(p) = sum_i p_i [ (lambda - ln p_i)^sigma - lambda^sigma ],  sigma in (0, 1], lambda >= 0
//! ```
//!
//! together with its per-outcome generator `f(x) = x g(-ln x)`, where
//! `g(y) = (lambda + y)^sigma - lambda^sigma`. With `lambda = 0` this is the
//! fractional entropy `sum_i p_i (-ln p_i)^sigma`; with `sigma = 1` it is
//! Shannon's entropy for every `lambda`.

use crate::error::{domain, Error, Result};

/// Absolute tolerance on `|sum(weights) - 1|` accepted by [`ProbDist::new`].
pub const SUM_TOLERANCE: f64 = 1e-12;

/// Below this value of `y / lambda` the power gap is evaluated as
/// `lambda^sigma * expm1(sigma * ln_1p(y / lambda))`.
const SMALL_RATIO: f64 = 0.5;

/// A validated point of the probability simplex with at least two outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbDist {
    weights: Vec<f64>,
}

impl ProbDist {
    /// Validates `weights` without renormalizing them.
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.len() < 2 {
            return Err(Error::TooFewOutcomes(weights.len()));
        }
        for (index, &value) in weights.iter().enumerate() {
            if value.is_nan() || value > 1.0 {
                return Err(Error::InvalidWeight { index, value });
            }
            if value < 0.0 {
                return Err(Error::NegativeWeight { index, value });
            }
        }
        let sum = compensated_sum(weights.iter().copied());
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::SumNotOne {
                sum,
                tol: SUM_TOLERANCE,
            });
        }
        Ok(Self { weights })
    }

    /// The uniform distribution on `n` outcomes.
    pub fn uniform(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewOutcomes(n));
        }
        Self::new(vec![1.0 / n as f64; n])
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    /// Returns the distribution with one extra zero-probability outcome.
    pub fn with_zero_appended(&self) -> Self {
        let mut weights = self.weights.clone();
        weights.push(0.0);
        Self { weights }
    }

    /// L1 distance to `other`.
    pub fn l1_distance(&self, other: &ProbDist) -> Result<f64> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        Ok(compensated_sum(
            self.weights
                .iter()
                .zip(&other.weights)
                .map(|(a, b)| (a - b).abs()),
        ))
    }

    /// Convex combination `t * self + (1 - t) * other`.
    pub fn mix(&self, other: &ProbDist, t: f64) -> Result<ProbDist> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        if !(0.0..=1.0).contains(&t) {
            return domain(format!("mixing weight t = {t} is outside [0, 1]"));
        }
        let weights = self
            .weights
            .iter()
            .zip(&other.weights)
            .map(|(a, b)| t * a + (1.0 - t) * b)
            .collect();
        ProbDist::new(weights)
    }
}

impl TryFrom<Vec<f64>> for ProbDist {
    type Error = Error;

    fn try_from(weights: Vec<f64>) -> Result<Self> {
        Self::new(weights)
    }
}

/// Validates `weights` into a [`ProbDist`].
pub fn make_dist(weights: &[f64]) -> Result<ProbDist> {
    ProbDist::new(weights.to_vec())
}

/// Order `sigma` in (0, 1] and tempering `lambda` >= 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyParams {
    sigma: f64,
    lambda: f64,
}

impl EntropyParams {
    pub fn new(sigma: f64, lambda: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma <= 1.0) {
            return domain(format!("sigma = {sigma} is outside (0, 1]"));
        }
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return domain(format!("lambda = {lambda} must be finite and >= 0"));
        }
        Ok(Self { sigma, lambda })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Same order, no tempering.
    pub fn untempered(&self) -> Self {
        Self {
            sigma: self.sigma,
            lambda: 0.0,
        }
    }
}

/// A nonnegative entropy value.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct EntropyValue(pub f64);

impl EntropyValue {
    pub fn get(self) -> f64 {
        self.0
    }
}

impl From<EntropyValue> for f64 {
    fn from(v: EntropyValue) -> f64 {
        v.0
    }
}

/// `(lambda + y)^sigma - lambda^sigma` for `y >= 0`, without the
/// cancellation of nearly equal powers when `y` is small next to `lambda`.
fn power_gap(y: f64, params: &EntropyParams) -> f64 {
    let EntropyParams { sigma, lambda } = *params;
    if lambda > 0.0 && y / lambda < SMALL_RATIO {
        lambda.powf(sigma) * (sigma * (y / lambda).ln_1p()).exp_m1()
    } else {
        (lambda + y).powf(sigma) - lambda.powf(sigma)
    }
}

/// `g(x) = (lambda + x)^sigma - lambda^sigma` on `x >= 0`.
pub fn g_func(x: f64, params: &EntropyParams) -> Result<f64> {
    if !(x >= 0.0) {
        return domain(format!("g is defined on x >= 0, got {x}"));
    }
    Ok(power_gap(x, params))
}

/// The generator `f(x) = x[(lambda - ln x)^sigma - lambda^sigma]` on [0, 1],
/// with `f(0) = f(1) = 0` exactly.
pub fn generator(x: f64, params: &EntropyParams) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return domain(format!("generator is defined on [0, 1], got {x}"));
    }
    Ok(generator_unchecked(x, params))
}

#[inline]
fn generator_unchecked(x: f64, params: &EntropyParams) -> f64 {
    if x == 0.0 || x == 1.0 {
        return 0.0;
    }
    x * power_gap(-x.ln(), params)
}

/// Value of `f'(x)`, which diverges to minus infinity at `x = 1` when
/// `lambda = 0` and `sigma < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Derivative {
    Finite(f64),
    /// The derivative is unbounded below at this point.
    NegInfinite,
}

impl Derivative {
    pub fn finite(self) -> Option<f64> {
        match self {
            Derivative::Finite(v) => Some(v),
            Derivative::NegInfinite => None,
        }
    }

    pub fn is_unbounded(self) -> bool {
        matches!(self, Derivative::NegInfinite)
    }
}

/// `f'(x) = (lambda - ln x)^sigma - lambda^sigma - sigma (lambda - ln x)^(sigma - 1)`
/// on (0, 1].
pub fn generator_derivative(x: f64, params: &EntropyParams) -> Result<Derivative> {
    if !(x > 0.0 && x <= 1.0) {
        return domain(format!(
            "generator derivative is defined on (0, 1], got {x}"
        ));
    }
    let y = -x.ln();
    let base = params.lambda + y;
    if base == 0.0 && params.sigma < 1.0 {
        return Ok(Derivative::NegInfinite);
    }
    let slope = params.sigma * base.powf(params.sigma - 1.0);
    Ok(Derivative::Finite(power_gap(y, params) - slope))
}

/// `S_{sigma,lambda}(p)`. Zero-probability outcomes contribute exactly 0.
pub fn entropy(p: &ProbDist, params: &EntropyParams) -> EntropyValue {
    EntropyValue(compensated_sum(
        p.weights
            .iter()
            .filter(|&&w| w > 0.0)
            .map(|&w| generator_unchecked(w, params)),
    ))
}

/// `sum_i p_i (-ln p_i)^alpha`, evaluated directly.
pub fn ubriaco_entropy(p: &ProbDist, alpha: f64) -> Result<EntropyValue> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return domain(format!("alpha = {alpha} is outside (0, 1]"));
    }
    Ok(EntropyValue(compensated_sum(
        p.weights
            .iter()
            .filter(|&&w| w > 0.0 && w < 1.0)
            .map(|&w| w * (-w.ln()).powf(alpha)),
    )))
}

/// `-sum_i p_i ln p_i` in nats, with `0 ln 0 = 0`.
pub fn shannon_entropy(p: &ProbDist) -> EntropyValue {
    EntropyValue(compensated_sum(
        p.weights
            .iter()
            .filter(|&&w| w > 0.0 && w < 1.0)
            .map(|&w| w * -w.ln()),
    ))
}

/// Entropy of the uniform distribution on `n` outcomes, `(lambda + ln n)^sigma - lambda^sigma`.
pub fn max_entropy(n: usize, params: &EntropyParams) -> Result<EntropyValue> {
    if n < 2 {
        return Err(Error::TooFewOutcomes(n));
    }
    Ok(EntropyValue(power_gap((n as f64).ln(), params)))
}

/// Neumaier summation.
pub(crate) fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}
