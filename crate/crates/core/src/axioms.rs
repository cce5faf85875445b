//! Executable checks of the entropy's structural properties: nonnegativity,
//! maximality at the uniform distribution, expansibility, concavity of the
//! generator and of the entropy functional, the lambda-inequality and the
//! power subadditivity it rests on.
//!
//! Every check reports the largest signed violation it saw together with a
//! witness that reproduces it.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};

use crate::entropy::{compensated_sum, entropy, generator, max_entropy, EntropyParams, ProbDist};
use crate::error::{domain, Error, Result};

pub const NONNEGATIVITY_TOL: f64 = 1e-15;
pub const MAXIMALITY_TOL: f64 = 1e-9;
pub const EXPANSIBILITY_TOL: f64 = 0.0;
pub const GENERATOR_CONCAVITY_TOL: f64 = 1e-6;
pub const ENTROPY_CONCAVITY_TOL: f64 = 1e-10;
pub const LAMBDA_INEQUALITY_TOL: f64 = 1e-12;
pub const POWER_SUBADDITIVITY_TOL: f64 = 1e-12;

/// Second-difference step for generator concavity.
pub const CONCAVITY_STEP: f64 = 1e-4;
/// Grid bounds for generator concavity; below 0.005 the second derivative
/// grows like 1/x and rounding dominates the difference quotient.
pub const CONCAVITY_GRID: (f64, f64) = (0.005, 0.995);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AxiomId {
    Nonnegativity,
    Maximality,
    Expansibility,
    GeneratorConcavity,
    EntropyConcavity,
    LambdaInequality,
    PowerSubadditivity,
}

impl AxiomId {
    pub fn tolerance(self) -> f64 {
        match self {
            AxiomId::Nonnegativity => NONNEGATIVITY_TOL,
            AxiomId::Maximality => MAXIMALITY_TOL,
            AxiomId::Expansibility => EXPANSIBILITY_TOL,
            AxiomId::GeneratorConcavity => GENERATOR_CONCAVITY_TOL,
            AxiomId::EntropyConcavity => ENTROPY_CONCAVITY_TOL,
            AxiomId::LambdaInequality => LAMBDA_INEQUALITY_TOL,
            AxiomId::PowerSubadditivity => POWER_SUBADDITIVITY_TOL,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            AxiomId::Nonnegativity => "nonnegativity",
            AxiomId::Maximality => "maximality",
            AxiomId::Expansibility => "expansibility",
            AxiomId::GeneratorConcavity => "generator_concavity",
            AxiomId::EntropyConcavity => "entropy_concavity",
            AxiomId::LambdaInequality => "lambda_inequality",
            AxiomId::PowerSubadditivity => "power_subadditivity",
        }
    }
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Inputs at which a check attained its worst violation.
#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    Dist {
        p: ProbDist,
        params: EntropyParams,
    },
    Mixture {
        p: ProbDist,
        q: ProbDist,
        t: f64,
        params: EntropyParams,
    },
    GeneratorPoint {
        x: f64,
        h: f64,
        params: EntropyParams,
    },
    Power {
        x: f64,
        y: f64,
        alpha: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxiomReport {
    pub axiom: AxiomId,
    pub samples_checked: usize,
    /// Largest observed violation amount; the check passes while this stays
    /// at or below `tolerance`.
    pub worst_violation: f64,
    pub tolerance: f64,
    pub witness: Option<Witness>,
}

impl AxiomReport {
    fn empty(axiom: AxiomId) -> Self {
        Self {
            axiom,
            samples_checked: 0,
            worst_violation: f64::NEG_INFINITY,
            tolerance: axiom.tolerance(),
            witness: None,
        }
    }

    fn record(&mut self, violation: f64, witness: impl FnOnce() -> Witness) {
        self.samples_checked += 1;
        // NaN must never pass silently
        if violation > self.worst_violation || violation.is_nan() {
            self.worst_violation = violation;
            self.witness = Some(witness());
        }
    }

    pub fn passed(&self) -> bool {
        self.worst_violation <= self.tolerance
    }

    /// `worst_violation - tolerance`; nonpositive means pass.
    pub fn margin(&self) -> f64 {
        self.worst_violation - self.tolerance
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    /// Max-of-margins reduction of two reports of the same axiom.
    pub fn merge(mut self, other: AxiomReport) -> Result<AxiomReport> {
        if self.axiom != other.axiom {
            return domain(format!("cannot merge {} with {}", self.axiom, other.axiom));
        }
        let total = self.samples_checked + other.samples_checked;
        if other.worst_violation > self.worst_violation || other.worst_violation.is_nan() {
            self.worst_violation = other.worst_violation;
            self.witness = other.witness;
        }
        self.samples_checked = total;
        self.tolerance = self.tolerance.min(other.tolerance);
        Ok(self)
    }

    /// Recomputes the violation at the witness.
    pub fn reevaluate(&self) -> Option<f64> {
        let w = self.witness.as_ref()?;
        violation(self.axiom, w).ok()
    }
}

/// Violation amount of `axiom` at `witness`.
pub fn violation(axiom: AxiomId, witness: &Witness) -> Result<f64> {
    use AxiomId::*;
    match (axiom, witness) {
        (Nonnegativity, Witness::Dist { p, params }) => Ok(-entropy(p, params).get()),
        (Maximality, Witness::Dist { p, params }) => {
            Ok(entropy(p, params).get() - max_entropy(p.n(), params)?.get())
        }
        (Expansibility, Witness::Dist { p, params }) => {
            Ok((entropy(&p.with_zero_appended(), params).get() - entropy(p, params).get()).abs())
        }
        (LambdaInequality, Witness::Dist { p, params }) => {
            Ok(entropy(p, params).get() - entropy(p, &params.untempered()).get())
        }
        (EntropyConcavity, Witness::Mixture { p, q, t, params }) => {
            let mixed = entropy(&p.mix(q, *t)?, params).get();
            Ok(t * entropy(p, params).get() + (1.0 - t) * entropy(q, params).get() - mixed)
        }
        (GeneratorConcavity, Witness::GeneratorPoint { x, h, params }) => {
            second_difference(*x, *h, params)
        }
        (PowerSubadditivity, Witness::Power { x, y, alpha }) => {
            Ok((x + y).powf(*alpha) - x.powf(*alpha) - y.powf(*alpha))
        }
        _ => domain(format!("witness kind does not match axiom {axiom}")),
    }
}

fn second_difference(x: f64, h: f64, params: &EntropyParams) -> Result<f64> {
    let ahead = generator(x + h, params)?;
    let here = generator(x, params)?;
    let behind = generator(x - h, params)?;
    Ok((ahead - 2.0 * here + behind) / (h * h))
}

/// Seeded i.i.d. draws from the flat Dirichlet distribution on the simplex,
/// built from normalized standard exponentials.
pub struct SimplexSampler {
    n: usize,
    rng: ChaCha8Rng,
}

impl SimplexSampler {
    pub fn new(n: usize, seed: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewOutcomes(n));
        }
        Ok(Self {
            n,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    pub fn draw(&mut self) -> ProbDist {
        loop {
            let raw: Vec<f64> = (0..self.n).map(|_| Exp1.sample(&mut self.rng)).collect();
            let total = compensated_sum(raw.iter().copied());
            if total > 0.0 {
                let weights = raw.into_iter().map(|e| e / total).collect();
                return ProbDist::new(weights)
                    .expect("normalized exponentials form a distribution");
            }
        }
    }
}

impl Iterator for SimplexSampler {
    type Item = ProbDist;

    fn next(&mut self) -> Option<ProbDist> {
        Some(self.draw())
    }
}

pub fn sample_simplex(n: usize, count: usize, seed: u64) -> Result<Vec<ProbDist>> {
    if count == 0 {
        return domain("sample count must be >= 1");
    }
    Ok(SimplexSampler::new(n, seed)?.take(count).collect())
}

fn sampled(
    axiom: AxiomId,
    n: usize,
    params: &EntropyParams,
    samples: usize,
    seed: u64,
) -> Result<AxiomReport> {
    if samples == 0 {
        return domain("sample count must be >= 1");
    }
    let mut report = AxiomReport::empty(axiom);
    for p in SimplexSampler::new(n, seed)?.take(samples) {
        let witness = Witness::Dist { p, params: *params };
        let v = violation(axiom, &witness)?;
        report.record(v, || witness);
    }
    Ok(report)
}

/// `-S(p)` over seeded simplex samples.
pub fn check_nonnegativity(
    n: usize,
    params: &EntropyParams,
    samples: usize,
    seed: u64,
) -> Result<AxiomReport> {
    sampled(AxiomId::Nonnegativity, n, params, samples, seed)
}

/// `S(p) - S(uniform)` over seeded simplex samples.
pub fn check_maximality(
    n: usize,
    params: &EntropyParams,
    samples: usize,
    seed: u64,
) -> Result<AxiomReport> {
    sampled(AxiomId::Maximality, n, params, samples, seed)
}

/// `|S(p, 0) - S(p)|`, which must vanish exactly.
pub fn check_expansibility(p: &ProbDist, params: &EntropyParams) -> AxiomReport {
    let mut report = AxiomReport::empty(AxiomId::Expansibility);
    let witness = Witness::Dist {
        p: p.clone(),
        params: *params,
    };
    let v = violation(AxiomId::Expansibility, &witness).expect("matching witness");
    report.record(v, || witness);
    report
}

pub fn check_expansibility_sampled(
    n: usize,
    params: &EntropyParams,
    samples: usize,
    seed: u64,
) -> Result<AxiomReport> {
    sampled(AxiomId::Expansibility, n, params, samples, seed)
}

/// Central second difference of the generator on an evenly spaced grid over
/// [0.005, 0.995] with step 1e-4.
pub fn check_generator_concavity(
    params: &EntropyParams,
    grid_points: usize,
) -> Result<AxiomReport> {
    if grid_points < 3 {
        return domain(format!("need at least 3 grid points, got {grid_points}"));
    }
    let (lo, hi) = CONCAVITY_GRID;
    let spacing = (hi - lo) / (grid_points - 1) as f64;
    let mut report = AxiomReport::empty(AxiomId::GeneratorConcavity);
    for i in 0..grid_points {
        let x = if i + 1 == grid_points {
            hi
        } else {
            lo + i as f64 * spacing
        };
        let v = second_difference(x, CONCAVITY_STEP, params)?;
        report.record(v, || Witness::GeneratorPoint {
            x,
            h: CONCAVITY_STEP,
            params: *params,
        });
    }
    Ok(report)
}

/// `t S(p) + (1 - t) S(q) - S(t p + (1 - t) q)`.
pub fn check_entropy_concavity(
    p: &ProbDist,
    q: &ProbDist,
    t: f64,
    params: &EntropyParams,
) -> Result<AxiomReport> {
    if p.n() != q.n() {
        return Err(Error::DimensionMismatch {
            left: p.n(),
            right: q.n(),
        });
    }
    let witness = Witness::Mixture {
        p: p.clone(),
        q: q.clone(),
        t,
        params: *params,
    };
    let v = violation(AxiomId::EntropyConcavity, &witness)?;
    let mut report = AxiomReport::empty(AxiomId::EntropyConcavity);
    report.record(v, || witness);
    Ok(report)
}

/// Concavity on seeded pairs of simplex samples with mixing weights drawn
/// from a fixed ladder.
pub fn check_entropy_concavity_sampled(
    n: usize,
    params: &EntropyParams,
    samples: usize,
    seed: u64,
) -> Result<AxiomReport> {
    const LADDER: [f64; 5] = [0.1, 0.25, 0.5, 0.75, 0.9];
    if samples == 0 {
        return domain("sample count must be >= 1");
    }
    let mut sampler = SimplexSampler::new(n, seed)?;
    let mut report = AxiomReport::empty(AxiomId::EntropyConcavity);
    for i in 0..samples {
        let p = sampler.draw();
        let q = sampler.draw();
        let single = check_entropy_concavity(&p, &q, LADDER[i % LADDER.len()], params)?;
        report = report.merge(single)?;
    }
    Ok(report)
}

/// `S_{sigma,lambda}(p) - S_{sigma,0}(p)`.
pub fn check_lambda_inequality(p: &ProbDist, sigma: f64, lambda: f64) -> Result<AxiomReport> {
    let params = EntropyParams::new(sigma, lambda)?;
    let mut report = AxiomReport::empty(AxiomId::LambdaInequality);
    let witness = Witness::Dist {
        p: p.clone(),
        params,
    };
    let v = violation(AxiomId::LambdaInequality, &witness)?;
    report.record(v, || witness);
    Ok(report)
}

pub fn check_lambda_inequality_sampled(
    n: usize,
    params: &EntropyParams,
    samples: usize,
    seed: u64,
) -> Result<AxiomReport> {
    sampled(AxiomId::LambdaInequality, n, params, samples, seed)
}

/// `(x + y)^alpha - x^alpha - y^alpha`.
pub fn check_power_subadditivity(x: f64, y: f64, alpha: f64) -> Result<AxiomReport> {
    if !(x >= 0.0 && y >= 0.0) {
        return domain(format!("subadditivity needs x, y >= 0, got ({x}, {y})"));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return domain(format!("alpha = {alpha} must lie in (0, 1)"));
    }
    let witness = Witness::Power { x, y, alpha };
    let v = violation(AxiomId::PowerSubadditivity, &witness)?;
    let mut report = AxiomReport::empty(AxiomId::PowerSubadditivity);
    report.record(v, || witness);
    Ok(report)
}

/// Subadditivity over a logarithmic grid `x, y in {0} U {10^-6 .. 10^3}`.
pub fn check_power_subadditivity_grid(alpha: f64) -> Result<AxiomReport> {
    let mut points = vec![0.0];
    points.extend((-12..=6).map(|k| 10f64.powf(k as f64 / 2.0)));
    points.extend([0.2, 0.7, 1.5, 3.7]);
    let mut report = AxiomReport::empty(AxiomId::PowerSubadditivity);
    for &x in &points {
        for &y in &points {
            report = report.merge(check_power_subadditivity(x, y, alpha)?)?;
        }
    }
    Ok(report)
}

/// Every check for one `(n, params)` configuration, in [`AxiomId`] order.
pub fn axiom_suite(
    n: usize,
    params: &EntropyParams,
    samples: usize,
    seed: u64,
    grid_points: usize,
) -> Result<Vec<AxiomReport>> {
    let mut reports = vec![
        check_nonnegativity(n, params, samples, seed)?,
        check_maximality(n, params, samples, seed)?,
        check_expansibility_sampled(n, params, samples, seed)?,
        check_generator_concavity(params, grid_points)?,
        check_entropy_concavity_sampled(n, params, samples, seed)?,
        check_lambda_inequality_sampled(n, params, samples, seed)?,
    ];
    // subadditivity is only asserted for exponents strictly below one
    if params.sigma() < 1.0 {
        reports.push(check_power_subadditivity_grid(params.sigma())?);
    }
    Ok(reports)
}
