//! Lesche-stability experiments.
//!
//! A functional is Lesche stable when `|S(p) - S(p')| / S_max` can be made
//! uniformly small in `n` by bounding `||p - p'||_1`. The harness probes that
//! ratio with two structured perturbation families at the edges of the
//! simplex, a seeded hill-climbing search, and a Rényi-entropy control that is
//! known to be unstable.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::axioms::SimplexSampler;
use crate::entropy::{compensated_sum, entropy, generator, max_entropy, EntropyParams, ProbDist};
use crate::error::{domain, Error, Result};

/// Slack allowed when re-measuring the L1 distance of an emitted pair.
pub const L1_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// Perturbations of the certain distribution `(1, 0, ..., 0)`.
    CertaintyA,
    /// Perturbations of `(0, 1/(n-1), ..., 1/(n-1))`.
    UniformB,
    RandomSearch,
}

impl Family {
    pub fn label(self) -> &'static str {
        match self {
            Family::CertaintyA => "A",
            Family::UniformB => "B",
            Family::RandomSearch => "search",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(Family::CertaintyA),
            "B" | "b" => Ok(Family::UniformB),
            "search" => Ok(Family::RandomSearch),
            other => domain(format!("unknown perturbation family '{other}'")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PerturbPair {
    pub p: ProbDist,
    pub p_prime: ProbDist,
    /// L1 budget.
    pub delta: f64,
    pub family: Family,
}

impl PerturbPair {
    pub fn n(&self) -> usize {
        self.p.n()
    }

    pub fn l1(&self) -> f64 {
        self.p
            .l1_distance(&self.p_prime)
            .expect("pair members share n")
    }

    /// Structured families sit at distance exactly `delta`; searched pairs
    /// anywhere within it.
    pub fn certified(&self) -> bool {
        let d = self.l1();
        match self.family {
            Family::RandomSearch => d <= self.delta + L1_TOLERANCE,
            _ => (d - self.delta).abs() <= L1_TOLERANCE,
        }
    }
}

/// A distribution with one distinguished outcome and `tail_count` equal ones.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Profile {
    pub head: f64,
    pub tail: f64,
    pub tail_count: usize,
}

impl Profile {
    pub fn entropy(&self, params: &EntropyParams) -> f64 {
        generator(self.head, params).expect("head is a probability")
            + self.tail_count as f64 * generator(self.tail, params).expect("tail is a probability")
    }

    pub fn renyi(&self, q: f64) -> f64 {
        let mut power_sum = 0.0;
        if self.head > 0.0 {
            power_sum += self.head.powf(q);
        }
        if self.tail > 0.0 {
            power_sum += self.tail_count as f64 * self.tail.powf(q);
        }
        power_sum.ln() / (1.0 - q)
    }

    pub fn expand(&self) -> Result<ProbDist> {
        let mut weights = Vec::with_capacity(self.tail_count + 1);
        weights.push(self.head);
        weights.extend(std::iter::repeat_n(self.tail, self.tail_count));
        ProbDist::new(weights)
    }
}

/// A family pair kept in aggregated form so that `n` can be far larger than
/// any vector we would want to allocate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StructuredPair {
    pub family: Family,
    pub n: usize,
    pub delta: f64,
    pub p: Profile,
    pub p_prime: Profile,
}

impl StructuredPair {
    pub fn new(family: Family, n: usize, delta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&delta) {
            return domain(format!("delta = {delta} must lie in [0, 1]"));
        }
        let tail_count = n.saturating_sub(1);
        let k = tail_count as f64;
        let (p, p_prime) = match family {
            Family::CertaintyA => {
                if n < 2 {
                    return Err(Error::TooFewOutcomes(n));
                }
                (
                    Profile {
                        head: 1.0,
                        tail: 0.0,
                        tail_count,
                    },
                    Profile {
                        head: 1.0 - delta / 2.0,
                        tail: delta / (2.0 * k),
                        tail_count,
                    },
                )
            }
            Family::UniformB => {
                if n < 3 {
                    return domain(format!("family B needs n >= 3, got {n}"));
                }
                (
                    Profile {
                        head: 0.0,
                        tail: 1.0 / k,
                        tail_count,
                    },
                    Profile {
                        head: delta / 2.0,
                        tail: (1.0 - delta / 2.0) / k,
                        tail_count,
                    },
                )
            }
            Family::RandomSearch => {
                return domain("the search family has no structured form");
            }
        };
        Ok(Self {
            family,
            n,
            delta,
            p,
            p_prime,
        })
    }

    pub fn expand(&self) -> Result<PerturbPair> {
        Ok(PerturbPair {
            p: self.p.expand()?,
            p_prime: self.p_prime.expand()?,
            delta: self.delta,
            family: self.family,
        })
    }
}

/// `p = (1, 0, ..., 0)`, `p' = (1 - delta/2, delta/(2(n-1)), ...)`.
pub fn family_a_pair(n: usize, delta: f64) -> Result<PerturbPair> {
    StructuredPair::new(Family::CertaintyA, n, delta)?.expand()
}

/// `p = (0, 1/(n-1), ...)`, `p' = (delta/2, (1 - delta/2)/(n-1), ...)`.
pub fn family_b_pair(n: usize, delta: f64) -> Result<PerturbPair> {
    StructuredPair::new(Family::UniformB, n, delta)?.expand()
}

/// One row of a stability experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityRecord {
    pub family: Family,
    /// Order of the Rényi control, `None` for the tempered entropy.
    pub renyi_q: Option<f64>,
    pub n: usize,
    pub delta: f64,
    pub sigma: f64,
    pub lambda: f64,
    pub s_p: f64,
    pub s_p_prime: f64,
    pub ratio: f64,
}

impl StabilityRecord {
    /// CSV label: `A`, `B`, `search`, or `A_renyi`/`B_renyi` for controls.
    pub fn label(&self) -> String {
        match self.renyi_q {
            Some(_) => format!("{}_renyi", self.family.label()),
            None => self.family.label().to_string(),
        }
    }

    /// Recomputes `ratio` from the other fields.
    pub fn recompute_ratio(&self) -> Result<f64> {
        let normalizer = match self.renyi_q {
            Some(_) => (self.n as f64).ln(),
            None => max_entropy(self.n, &EntropyParams::new(self.sigma, self.lambda)?)?.get(),
        };
        Ok((self.s_p - self.s_p_prime).abs() / normalizer)
    }
}

fn tempered_record(
    family: Family,
    n: usize,
    delta: f64,
    params: &EntropyParams,
    s_p: f64,
    s_p_prime: f64,
) -> Result<StabilityRecord> {
    let s_max = max_entropy(n, params)?.get();
    Ok(StabilityRecord {
        family,
        renyi_q: None,
        n,
        delta,
        sigma: params.sigma(),
        lambda: params.lambda(),
        s_p,
        s_p_prime,
        ratio: (s_p - s_p_prime).abs() / s_max,
    })
}

fn renyi_record(
    family: Family,
    n: usize,
    delta: f64,
    q: f64,
    params: &EntropyParams,
    s_p: f64,
    s_p_prime: f64,
) -> StabilityRecord {
    StabilityRecord {
        family,
        renyi_q: Some(q),
        n,
        delta,
        sigma: params.sigma(),
        lambda: params.lambda(),
        s_p,
        s_p_prime,
        ratio: (s_p - s_p_prime).abs() / (n as f64).ln(),
    }
}

/// `|S(p) - S(p')| / S_max(n)` evaluated on the full vectors.
pub fn stability_ratio(pair: &PerturbPair, params: &EntropyParams) -> Result<StabilityRecord> {
    tempered_record(
        pair.family,
        pair.n(),
        pair.delta,
        params,
        entropy(&pair.p, params).get(),
        entropy(&pair.p_prime, params).get(),
    )
}

/// Same ratio from the aggregated form, O(1) in `n`.
pub fn structured_ratio(pair: &StructuredPair, params: &EntropyParams) -> Result<StabilityRecord> {
    tempered_record(
        pair.family,
        pair.n,
        pair.delta,
        params,
        pair.p.entropy(params),
        pair.p_prime.entropy(params),
    )
}

fn check_renyi_order(q: f64) -> Result<()> {
    if !(q > 0.0 && q.is_finite()) || q == 1.0 {
        return domain(format!(
            "Renyi order q = {q} must be positive, finite and != 1"
        ));
    }
    Ok(())
}

/// `ln(sum p_i^q) / (1 - q)`, zero weights skipped.
pub fn renyi_entropy(p: &ProbDist, q: f64) -> Result<f64> {
    check_renyi_order(q)?;
    let power_sum = compensated_sum(p.weights().iter().filter(|&&w| w > 0.0).map(|&w| w.powf(q)));
    Ok(power_sum.ln() / (1.0 - q))
}

/// Rényi control ratio on full vectors, normalized by `ln n`. `params` only
/// fills the record's sigma/lambda columns.
pub fn renyi_stability_ratio(
    pair: &PerturbPair,
    q: f64,
    params: &EntropyParams,
) -> Result<StabilityRecord> {
    Ok(renyi_record(
        pair.family,
        pair.n(),
        pair.delta,
        q,
        params,
        renyi_entropy(&pair.p, q)?,
        renyi_entropy(&pair.p_prime, q)?,
    ))
}

pub fn structured_renyi_ratio(
    pair: &StructuredPair,
    q: f64,
    params: &EntropyParams,
) -> Result<StabilityRecord> {
    check_renyi_order(q)?;
    Ok(renyi_record(
        pair.family,
        pair.n,
        pair.delta,
        q,
        params,
        pair.p.renyi(q),
        pair.p_prime.renyi(q),
    ))
}

/// One record per `(family, n)`, followed for each family by its Rényi control
/// rows when `control_q` is set. Rows come out ordered by family, then
/// tempered before control, then `n`.
pub fn sweep(
    families: &[Family],
    n_grid: &[usize],
    delta: f64,
    params: &EntropyParams,
    control_q: Option<f64>,
) -> Result<Vec<StabilityRecord>> {
    if n_grid.is_empty() {
        return domain("n grid is empty");
    }
    if n_grid.windows(2).any(|w| w[0] >= w[1]) {
        return domain("n grid must be strictly ascending");
    }
    if let Some(q) = control_q {
        check_renyi_order(q)?;
    }
    let mut families = families.to_vec();
    families.sort();
    families.dedup();

    let mut records = Vec::new();
    for &family in &families {
        let pairs = n_grid
            .iter()
            .map(|&n| StructuredPair::new(family, n, delta))
            .collect::<Result<Vec<_>>>()?;
        for pair in &pairs {
            records.push(structured_ratio(pair, params)?);
        }
        if let Some(q) = control_q {
            for pair in &pairs {
                records.push(structured_renyi_ratio(pair, q, params)?);
            }
        }
    }
    Ok(records)
}

/// Best pair found by [`random_pair_search`].
#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub pair: PerturbPair,
    pub record: StabilityRecord,
    /// Family-A ratio at the same `(n, delta)`, when that family is defined.
    pub family_a_ratio: Option<f64>,
    /// Family-B ratio at the same `(n, delta)`, when that family is defined.
    pub family_b_ratio: Option<f64>,
    pub accepted_moves: usize,
}

impl SearchOutcome {
    /// Largest ratio among the search result and the structured families.
    pub fn best_ratio(&self) -> f64 {
        [
            Some(self.record.ratio),
            self.family_a_ratio,
            self.family_b_ratio,
        ]
        .into_iter()
        .flatten()
        .fold(0.0, f64::max)
    }
}

/// Moves `amount` (clipped to what is available) from outcome `from` to `to`.
fn transfer(weights: &mut [f64], from: usize, to: usize, amount: f64) {
    let m = amount.min(weights[from]);
    weights[from] -= m;
    weights[to] += m;
}

fn pick_two(rng: &mut ChaCha8Rng, n: usize) -> (usize, usize) {
    let i = rng.random_range(0..n);
    let mut j = rng.random_range(0..n - 1);
    if j >= i {
        j += 1;
    }
    (i, j)
}

/// Seeded hill climb over pairs with `||p - p'||_1 <= delta`.
///
/// Starts from the better of the family-A pair (when `delta <= 1`) and a
/// random simplex sample with a random budgeted perturbation. Each proposal
/// moves up to `eps` of mass between two outcomes of `p'` (or, one time in
/// four, of `p`). `eps` starts at `delta / 10` and halves after
/// `iterations / 5` consecutive proposals without improvement.
pub fn random_pair_search(
    n: usize,
    delta: f64,
    params: &EntropyParams,
    iterations: usize,
    seed: u64,
) -> Result<SearchOutcome> {
    if n < 2 {
        return Err(Error::TooFewOutcomes(n));
    }
    if !(0.0..=2.0).contains(&delta) {
        return domain(format!("delta = {delta} must lie in [0, 2]"));
    }
    if iterations == 0 {
        return domain("iterations must be >= 1");
    }

    let family_a_ratio = if delta <= 1.0 {
        Some(structured_ratio(&StructuredPair::new(Family::CertaintyA, n, delta)?, params)?.ratio)
    } else {
        None
    };
    let family_b_ratio = if delta <= 1.0 && n >= 3 {
        Some(structured_ratio(&StructuredPair::new(Family::UniformB, n, delta)?, params)?.ratio)
    } else {
        None
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = SimplexSampler::new(n, rng.random())?.draw();
    let mut perturbed = base.weights().to_vec();
    let (i, j) = pick_two(&mut rng, n);
    transfer(&mut perturbed, i, j, 0.5 * delta * rng.random::<f64>());
    let mut candidates = vec![PerturbPair {
        p: base,
        p_prime: ProbDist::new(perturbed)?,
        delta,
        family: Family::RandomSearch,
    }];
    if delta <= 1.0 {
        let mut a = family_a_pair(n, delta)?;
        a.family = Family::RandomSearch;
        candidates.push(a);
    }

    let mut best: Option<(PerturbPair, StabilityRecord)> = None;
    for cand in candidates {
        if cand.l1() > delta + L1_TOLERANCE {
            continue;
        }
        let rec = stability_ratio(&cand, params)?;
        if best.as_ref().is_none_or(|(_, r)| rec.ratio > r.ratio) {
            best = Some((cand, rec));
        }
    }
    let (mut pair, mut record) = match best {
        Some(b) => b,
        None => {
            let p = SimplexSampler::new(n, seed)?.draw();
            let pair = PerturbPair {
                p: p.clone(),
                p_prime: p,
                delta,
                family: Family::RandomSearch,
            };
            let rec = stability_ratio(&pair, params)?;
            (pair, rec)
        }
    };

    let mut eps = delta / 10.0;
    let patience = (iterations / 5).max(1);
    let mut stale = 0;
    let mut accepted_moves = 0;
    for _ in 0..iterations {
        let move_base = rng.random_bool(0.25);
        let (from, to) = pick_two(&mut rng, n);
        let amount = eps * (1.0 - rng.random::<f64>());
        let mut p = pair.p.weights().to_vec();
        let mut p_prime = pair.p_prime.weights().to_vec();
        if move_base {
            transfer(&mut p, from, to, amount);
        } else {
            transfer(&mut p_prime, from, to, amount);
        }

        let improved = match (ProbDist::new(p), ProbDist::new(p_prime)) {
            (Ok(p), Ok(p_prime)) => {
                let cand = PerturbPair {
                    p,
                    p_prime,
                    delta,
                    family: Family::RandomSearch,
                };
                if cand.l1() <= delta + L1_TOLERANCE {
                    let rec = stability_ratio(&cand, params)?;
                    if rec.ratio > record.ratio {
                        pair = cand;
                        record = rec;
                        true
                    } else {
                        false
                    }
                } else {
                    false
                }
            }
            _ => false,
        };

        if improved {
            accepted_moves += 1;
            stale = 0;
        } else {
            stale += 1;
            if stale >= patience {
                eps *= 0.5;
                stale = 0;
            }
        }
    }

    Ok(SearchOutcome {
        pair,
        record,
        family_a_ratio,
        family_b_ratio,
        accepted_moves,
    })
}
