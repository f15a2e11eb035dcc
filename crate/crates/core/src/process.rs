//! Classification of finite-outcome processes and the aggregate quantities
//! (expected value, variance, long-run profit) that make a non-random
//! process predictable in bulk.
//!
//! Probabilities and payoffs are exact rationals so that casino-style
//! figures reproduce to the cent.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};

/// Default tolerance for `classify` when comparing floating probabilities.
pub const DEFAULT_EPS: f64 = 1e-9;

/// Slack allowed on the probability total.
const NORMALIZATION_TOLERANCE: f64 = 1e-12;

/// A finite list of distinct outcomes with their probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution<L> {
    outcomes: Vec<(L, BigRational)>,
}

impl<L: PartialEq + fmt::Display> OutcomeDistribution<L> {
    pub fn new(outcomes: Vec<(L, BigRational)>) -> Result<Self> {
        if outcomes.is_empty() {
            return Err(Error::InvalidDistribution("no outcomes".into()));
        }
        for (i, (label, p)) in outcomes.iter().enumerate() {
            if p.is_negative() || *p > BigRational::one() {
                return Err(Error::InvalidDistribution(format!(
                    "probability {p} of `{label}` is outside [0, 1]"
                )));
            }
            if outcomes[..i].iter().any(|(other, _)| other == label) {
                return Err(Error::InvalidDistribution(format!(
                    "label `{label}` appears twice"
                )));
            }
        }
        let total: BigRational = outcomes.iter().map(|(_, p)| p).sum();
        let slack = (total.clone() - BigRational::one()).abs();
        if slack.to_f64().unwrap_or(f64::INFINITY) > NORMALIZATION_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        Ok(OutcomeDistribution { outcomes })
    }

    /// Probabilities proportional to integer weights.
    pub fn from_weights(weights: Vec<(L, u64)>) -> Result<Self> {
        let total: u64 = weights.iter().map(|(_, w)| *w).sum();
        if total == 0 {
            return Err(Error::InvalidDistribution("weights sum to zero".into()));
        }
        let total = BigInt::from(total);
        Self::new(
            weights
                .into_iter()
                .map(|(l, w)| (l, BigRational::new(BigInt::from(w), total.clone())))
                .collect(),
        )
    }

    pub fn uniform(labels: Vec<L>) -> Result<Self> {
        Self::from_weights(labels.into_iter().map(|l| (l, 1)).collect())
    }

    pub fn point_mass(label: L) -> Self {
        OutcomeDistribution { outcomes: vec![(label, BigRational::one())] }
    }
}

impl<L> OutcomeDistribution<L> {
    pub fn outcomes(&self) -> &[(L, BigRational)] {
        &self.outcomes
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    pub fn probabilities_f64(&self) -> Vec<f64> {
        self.outcomes.iter().map(|(_, p)| p.to_f64().unwrap_or(0.0)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProcessClass {
    /// Only a single possible outcome.
    Deterministic,
    /// More than one outcome, all equally likely.
    Random,
    /// Neither: predictable only in the aggregate.
    PartiallyDeterministic,
}

impl fmt::Display for ProcessClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProcessClass::Deterministic => "deterministic",
            ProcessClass::Random => "random",
            ProcessClass::PartiallyDeterministic => "partially-deterministic",
        })
    }
}

/// Classifies a process by its outcome distribution.
///
/// `eps` must lie in `(0, 1/(2n))` for `n` outcomes so that the
/// deterministic and random tests cannot both succeed.
pub fn classify<L>(dist: &OutcomeDistribution<L>, eps: f64) -> Result<ProcessClass> {
    let n = dist.len();
    if !(eps > 0.0 && eps < 1.0 / (2.0 * n as f64)) {
        return Err(Error::InvalidArgument(format!(
            "eps must be in (0, {}) for {n} outcomes, got {eps}",
            1.0 / (2.0 * n as f64)
        )));
    }
    let probs = dist.probabilities_f64();
    if probs.iter().any(|&p| p >= 1.0 - eps) {
        return Ok(ProcessClass::Deterministic);
    }
    let even = 1.0 / n as f64;
    if n > 1 && probs.iter().all(|&p| (p - even).abs() <= eps) {
        return Ok(ProcessClass::Random);
    }
    Ok(ProcessClass::PartiallyDeterministic)
}

/// An outcome of maximal probability; ties go to the earliest outcome.
pub fn max_outcome_probability<L>(dist: &OutcomeDistribution<L>) -> (&L, &BigRational) {
    let mut best = &dist.outcomes[0];
    for o in &dist.outcomes[1..] {
        if o.1 > best.1 {
            best = o;
        }
    }
    (&best.0, &best.1)
}

/// Net payoff to the house for each outcome, and how many plays make up a
/// budgeting period.
#[derive(Debug, Clone, PartialEq)]
pub struct WagerStructure<L> {
    payoffs: Vec<(L, BigRational)>,
    plays_per_period: u64,
}

impl<L: PartialEq> WagerStructure<L> {
    pub fn new(payoffs: Vec<(L, BigRational)>, plays_per_period: u64) -> Result<Self> {
        if plays_per_period == 0 {
            return Err(Error::InvalidArgument("plays_per_period must be at least 1".into()));
        }
        Ok(WagerStructure { payoffs, plays_per_period })
    }

    pub fn plays_per_period(&self) -> u64 {
        self.plays_per_period
    }

    pub fn payoff(&self, label: &L) -> Option<&BigRational> {
        self.payoffs.iter().find(|(l, _)| l == label).map(|(_, v)| v)
    }
}

/// Pairs each outcome with its payoff, failing on the first unpaid label.
fn paired<'a, L: PartialEq + fmt::Display>(
    dist: &'a OutcomeDistribution<L>,
    wager: &'a WagerStructure<L>,
) -> Result<Vec<(&'a BigRational, &'a BigRational)>> {
    dist.outcomes
        .iter()
        .map(|(label, p)| {
            wager
                .payoff(label)
                .map(|pay| (p, pay))
                .ok_or_else(|| Error::MissingPayoff(label.to_string()))
        })
        .collect()
}

fn plays<L>(wager: &WagerStructure<L>) -> BigRational {
    BigRational::from_integer(BigInt::from(wager.plays_per_period))
}

/// Expected house profit over one period: `plays * sum p(o) * payoff(o)`.
pub fn expected_house_profit<L: PartialEq + fmt::Display>(
    dist: &OutcomeDistribution<L>,
    wager: &WagerStructure<L>,
) -> Result<BigRational> {
    let per_play: BigRational = paired(dist, wager)?.into_iter().map(|(p, pay)| p * pay).sum();
    Ok(per_play * plays(wager))
}

/// Variance of the period profit, treating plays as independent.
pub fn profit_variance<L: PartialEq + fmt::Display>(
    dist: &OutcomeDistribution<L>,
    wager: &WagerStructure<L>,
) -> Result<BigRational> {
    let pairs = paired(dist, wager)?;
    let mean: BigRational = pairs.iter().map(|&(p, pay)| p * pay).sum();
    let second: BigRational = pairs.iter().map(|&(p, pay)| p * pay * pay).sum();
    Ok((second - &mean * &mean) * plays(wager))
}

/// Expected money in and out of the house over one period.
#[derive(Debug, Clone, PartialEq)]
pub struct HouseFlows {
    /// Expected takings from outcomes with positive net payoff.
    pub income: BigRational,
    /// Expected payout on outcomes with negative net payoff, as a positive amount.
    pub payout: BigRational,
    pub profit: BigRational,
}

pub fn house_flows<L: PartialEq + fmt::Display>(
    dist: &OutcomeDistribution<L>,
    wager: &WagerStructure<L>,
) -> Result<HouseFlows> {
    let mut income = BigRational::zero();
    let mut payout = BigRational::zero();
    for (p, pay) in paired(dist, wager)? {
        if pay.is_positive() {
            income += p * pay;
        } else {
            payout -= p * pay;
        }
    }
    let n = plays(wager);
    income *= &n;
    payout *= &n;
    let profit = &income - &payout;
    Ok(HouseFlows { income, payout, profit })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulatedProfit {
    pub periods: u64,
    pub mean: f64,
    /// Standard error of `mean` (sample standard deviation over `sqrt(periods)`).
    pub std_error: f64,
}

/// Simulates `periods` budgeting periods and summarizes their profit.
///
/// Each period draws outcome counts from the multinomial over
/// `plays_per_period` plays, as a chain of conditional binomials.
pub fn simulate_periods<L: PartialEq + fmt::Display, R: Rng + ?Sized>(
    dist: &OutcomeDistribution<L>,
    wager: &WagerStructure<L>,
    periods: u64,
    rng: &mut R,
) -> Result<SimulatedProfit> {
    if periods == 0 {
        return Err(Error::InvalidArgument("at least one period must be simulated".into()));
    }
    let pairs = paired(dist, wager)?;
    // Conditional probability of each outcome given that none of the earlier
    // ones occurred.
    let mut remaining = BigRational::one();
    let mut steps = Vec::with_capacity(pairs.len());
    for &(p, pay) in &pairs {
        let cond = if remaining.is_positive() {
            (p / &remaining).to_f64().unwrap_or(0.0).clamp(0.0, 1.0)
        } else {
            0.0
        };
        remaining -= p;
        steps.push((cond, pay.to_f64().unwrap_or(0.0)));
    }

    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..periods {
        let mut left = wager.plays_per_period;
        let mut profit = 0.0;
        for (i, &(cond, pay)) in steps.iter().enumerate() {
            if left == 0 {
                break;
            }
            let k = if i + 1 == steps.len() {
                left
            } else {
                Binomial::new(left, cond)
                    .map_err(|e| Error::InvalidArgument(e.to_string()))?
                    .sample(rng)
            };
            left -= k;
            profit += k as f64 * pay;
        }
        sum += profit;
        sum_sq += profit * profit;
    }
    let n = periods as f64;
    let mean = sum / n;
    let var = if periods > 1 { ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0) } else { 0.0 };
    Ok(SimulatedProfit { periods, mean, std_error: (var / n).sqrt() })
}

/// Parses `"3"`, `"-102"`, `"0.505"` or `"1/6"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::InvalidArgument(format!("`{s}` is not a decimal or a fraction"));
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(num, den));
    }
    let (negative, digits) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let mantissa: BigInt = format!("{int_part}{frac_part}").parse().map_err(|_| bad())?;
    let scale = num_traits::pow(BigInt::from(10), frac_part.len());
    let value = BigRational::new(mantissa, scale);
    Ok(if negative { -value } else { value })
}
