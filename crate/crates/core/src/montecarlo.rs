//! Random energy exchange between oscillators, and checks that the sampled
//! `q_A` frequencies settle onto the exact macrostate distribution.
//!
//! One step picks a donor uniformly among all oscillators. An empty donor
//! leaves the state unchanged; otherwise a recipient is picked uniformly
//! among all oscillators (the donor included) and receives one unit. The
//! kernel is symmetric, so every composition is equally likely at
//! stationarity.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::solids::{CoupledSolids, MacrostateDistribution};

/// Identifier of the generator behind every seeded run.
pub const RNG_ALGORITHM: &str = "ChaCha8Rng (rand_chacha 0.9)";
pub const DEFAULT_BURN_IN: u64 = 10_000;
pub const DEFAULT_STRIDE: u64 = 10;

/// Seeds the generator used by every chain.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Per-oscillator energies. Solid A's oscillators come first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MicrostateComposition {
    energies: Vec<u64>,
    n_a: usize,
}

impl MicrostateComposition {
    pub fn new(energies: Vec<u64>, n_a: usize) -> Result<Self> {
        if energies.is_empty() {
            return Err(Error::InconsistentState("no oscillators".into()));
        }
        if n_a > energies.len() {
            return Err(Error::InconsistentState(format!(
                "solid A has {n_a} oscillators but only {} exist",
                energies.len()
            )));
        }
        Ok(MicrostateComposition { energies, n_a })
    }

    pub fn energies(&self) -> &[u64] {
        &self.energies
    }

    pub fn n_a(&self) -> usize {
        self.n_a
    }

    pub fn oscillators(&self) -> usize {
        self.energies.len()
    }

    pub fn q_a(&self) -> u64 {
        self.energies[..self.n_a].iter().sum()
    }

    pub fn total(&self) -> u64 {
        self.energies.iter().sum()
    }
}

/// The oscillators involved in a step that moved a unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Transfer {
    pub donor: usize,
    pub recipient: usize,
}

/// Advances the chain by one step. Returns the transfer, or `None` for a
/// self-loop on an empty donor.
pub fn mc_step<R: Rng + ?Sized>(state: &mut MicrostateComposition, rng: &mut R) -> Option<Transfer> {
    let n = state.energies.len() as u64;
    let donor = rng.random_range(0..n) as usize;
    if state.energies[donor] == 0 {
        return None;
    }
    let recipient = rng.random_range(0..n) as usize;
    state.energies[donor] -= 1;
    state.energies[recipient] += 1;
    Some(Transfer { donor, recipient })
}

/// Where a chain starts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InitialState {
    /// All units in solid A, dealt round-robin over its oscillators.
    AllInA,
    /// All units in solid B, dealt round-robin over its oscillators.
    AllInB,
    /// Units dealt round-robin over every oscillator.
    Spread,
    Composition(MicrostateComposition),
}

impl InitialState {
    pub fn build(&self, sys: &CoupledSolids) -> Result<MicrostateComposition> {
        let n_a = sys.n_a() as usize;
        let n = sys.oscillators() as usize;
        let q = sys.q_total();
        let deal = |range: std::ops::Range<usize>| {
            let mut energies = vec![0u64; n];
            let width = range.len() as u64;
            for (i, slot) in energies[range].iter_mut().enumerate() {
                *slot = q / width + u64::from((i as u64) < q % width);
            }
            MicrostateComposition { energies, n_a }
        };
        let state = match self {
            InitialState::AllInA => deal(0..n_a),
            InitialState::AllInB => deal(n_a..n),
            InitialState::Spread => deal(0..n),
            InitialState::Composition(c) => c.clone(),
        };
        if state.n_a != n_a || state.oscillators() != n {
            return Err(Error::InconsistentState(format!(
                "expected {n_a} + {} oscillators, got {} + {}",
                n - n_a,
                state.n_a,
                state.oscillators() - state.n_a
            )));
        }
        if state.total() != q {
            return Err(Error::InconsistentState(format!(
                "energies sum to {}, system holds {q}",
                state.total()
            )));
        }
        Ok(state)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainConfig {
    /// Total steps, burn-in included.
    pub steps: u64,
    pub burn_in: u64,
    pub seed: u64,
    pub sample_stride: u64,
}

impl ChainConfig {
    pub fn new(steps: u64, burn_in: u64, seed: u64, sample_stride: u64) -> Result<Self> {
        if steps == 0 {
            return Err(Error::InvalidArgument("steps must be positive".into()));
        }
        if burn_in >= steps {
            return Err(Error::InvalidArgument(format!(
                "burn-in ({burn_in}) must be below the step count ({steps})"
            )));
        }
        if sample_stride == 0 {
            return Err(Error::InvalidArgument("sample stride must be at least 1".into()));
        }
        Ok(ChainConfig { steps, burn_in, seed, sample_stride })
    }

    /// Number of samples a run will record.
    pub fn samples(&self) -> u64 {
        (self.steps - self.burn_in).div_ceil(self.sample_stride)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainResult {
    /// Sample counts indexed by `q_A`.
    pub histogram: Vec<u64>,
    /// Sampled `q_A` values in time order.
    pub trace: Vec<u64>,
    pub steps: u64,
    pub final_state: MicrostateComposition,
}

impl ChainResult {
    pub fn samples(&self) -> u64 {
        self.histogram.iter().sum()
    }
}

/// Runs one chain. Samples are taken after step `burn_in + 1` and then every
/// `sample_stride` steps.
pub fn run_chain(sys: &CoupledSolids, initial: &InitialState, config: &ChainConfig) -> Result<ChainResult> {
    let mut state = initial.build(sys)?;
    let mut rng = seeded_rng(config.seed);
    let n_a = state.n_a;
    let mut q_a = state.q_a();
    let mut histogram = vec![0u64; sys.q_total() as usize + 1];
    let mut trace = Vec::with_capacity(config.samples() as usize);

    for step in 1..=config.steps {
        if let Some(t) = mc_step(&mut state, &mut rng) {
            match (t.donor < n_a, t.recipient < n_a) {
                (true, false) => q_a -= 1,
                (false, true) => q_a += 1,
                _ => {}
            }
        }
        debug_assert_eq!(q_a, state.q_a());
        if step > config.burn_in && (step - config.burn_in - 1).is_multiple_of(config.sample_stride) {
            histogram[q_a as usize] += 1;
            trace.push(q_a);
        }
    }
    Ok(ChainResult { histogram, trace, steps: config.steps, final_state: state })
}

/// Runs one chain per seed in parallel. Results are in seed-list order.
pub fn run_chains(
    sys: &CoupledSolids,
    initial: &InitialState,
    config: &ChainConfig,
    seeds: &[u64],
) -> Result<Vec<ChainResult>> {
    seeds
        .par_iter()
        .map(|&seed| run_chain(sys, initial, &ChainConfig { seed, ..*config }))
        .collect()
}

/// Normalized histogram.
pub fn empirical_distribution(histogram: &[u64]) -> Result<Vec<f64>> {
    let total: u64 = histogram.iter().sum();
    if total == 0 {
        return Err(Error::InvalidArgument("histogram holds no samples".into()));
    }
    Ok(histogram.iter().map(|&c| c as f64 / total as f64).collect())
}

/// Half the L1 distance between two distributions on the same support.
pub fn total_variation(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::DomainMismatch { histogram: p.len(), distribution: q.len() });
    }
    Ok(0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>())
}

/// Total variation distance between a `q_A` histogram and the exact distribution.
pub fn tv_distance(histogram: &[u64], exact: &MacrostateDistribution) -> Result<f64> {
    if histogram.len() != exact.rows.len() {
        return Err(Error::DomainMismatch { histogram: histogram.len(), distribution: exact.rows.len() });
    }
    total_variation(&empirical_distribution(histogram)?, &exact.probabilities())
}
