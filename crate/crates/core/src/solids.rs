//! Einstein solids: multiplicity of a single solid, the macrostate
//! distribution of two weakly coupled solids, and how its peak narrows as
//! the solids grow.
//!
//! Weak coupling enters only as the assumption that each solid's energy is
//! well defined at any instant; the macrostate is the energy `q_A` held by
//! solid A.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactmath::{ln_binomial, ExactNat, LogValue};

/// Exact mode refuses systems with `q + max(N_A, N_B)` above this.
pub const EXACT_MODE_CAP: u64 = 100_000;
/// Log-space mode refuses `N` or `q` above this.
pub const LOG_MODE_CAP: u64 = 1_000_000_000;

/// `N` oscillators sharing `q` indivisible energy units.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EinsteinSolid {
    oscillators: u64,
    energy: u64,
}

impl EinsteinSolid {
    pub fn new(oscillators: u64, energy: u64) -> Result<Self> {
        if oscillators == 0 {
            return Err(Error::InvalidArgument("a solid needs at least one oscillator".into()));
        }
        Ok(EinsteinSolid { oscillators, energy })
    }

    pub fn oscillators(&self) -> u64 {
        self.oscillators
    }

    pub fn energy(&self) -> u64 {
        self.energy
    }
}

/// Number of ways to place `q` units on `N` oscillators: `C(q + N - 1, q)`.
pub fn multiplicity(solid: EinsteinSolid) -> ExactNat {
    crate::exactmath::binomial(solid.energy + solid.oscillators - 1, solid.energy)
        .expect("q <= q + N - 1 whenever N >= 1")
}

pub fn ln_multiplicity(solid: EinsteinSolid) -> LogValue {
    ln_binomial(solid.energy + solid.oscillators - 1, solid.energy)
        .expect("q <= q + N - 1 whenever N >= 1")
}

/// Two solids exchanging a fixed total of energy units.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CoupledSolids {
    n_a: u64,
    n_b: u64,
    q_total: u64,
}

impl CoupledSolids {
    pub fn new(n_a: u64, n_b: u64, q_total: u64) -> Result<Self> {
        if n_a == 0 || n_b == 0 {
            return Err(Error::InvalidArgument("each solid needs at least one oscillator".into()));
        }
        Ok(CoupledSolids { n_a, n_b, q_total })
    }

    pub fn n_a(&self) -> u64 {
        self.n_a
    }

    pub fn n_b(&self) -> u64 {
        self.n_b
    }

    pub fn q_total(&self) -> u64 {
        self.q_total
    }

    pub fn oscillators(&self) -> u64 {
        self.n_a + self.n_b
    }

    /// The same system with every size multiplied by `factor`.
    pub fn scaled(&self, factor: u64) -> Result<Self> {
        let mul = |v: u64| {
            v.checked_mul(factor)
                .ok_or_else(|| Error::InvalidArgument(format!("{v} * {factor} overflows")))
        };
        CoupledSolids::new(mul(self.n_a)?, mul(self.n_b)?, mul(self.q_total)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Exact,
    Log,
}

/// A multiplicity held either exactly or as its natural log.
#[derive(Debug, Clone, PartialEq)]
pub enum Multiplicity {
    Exact(ExactNat),
    Log(LogValue),
}

impl Multiplicity {
    pub fn ln(&self) -> f64 {
        match self {
            Multiplicity::Exact(v) => v.ln(),
            Multiplicity::Log(v) => v.get(),
        }
    }

    pub fn exact(&self) -> Option<&ExactNat> {
        match self {
            Multiplicity::Exact(v) => Some(v),
            Multiplicity::Log(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistributionRow {
    pub q_a: u64,
    pub q_b: u64,
    pub omega_a: Multiplicity,
    pub omega_b: Multiplicity,
    pub omega_tot: Multiplicity,
    pub probability: f64,
}

/// One row per `q_A` in `0..=q_total`.
#[derive(Debug, Clone, PartialEq)]
pub struct MacrostateDistribution {
    pub system: CoupledSolids,
    pub mode: Mode,
    pub rows: Vec<DistributionRow>,
    pub total: Multiplicity,
}

impl MacrostateDistribution {
    pub fn probabilities(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.probability).collect()
    }
}

pub fn macrostate_distribution(sys: CoupledSolids, mode: Mode) -> Result<MacrostateDistribution> {
    match mode {
        Mode::Exact => exact_distribution(sys),
        Mode::Log => log_distribution(sys),
    }
}

/// `Omega(N, q)` for `q = 0..=q_max`, from `Omega(N, q+1) = Omega(N, q) (q + N) / (q + 1)`.
fn multiplicity_column(n: u64, q_max: u64) -> Vec<ExactNat> {
    let mut out = Vec::with_capacity(q_max as usize + 1);
    let mut current = num_bigint::BigUint::from(1u32);
    out.push(ExactNat::from(current.clone()));
    for q in 0..q_max {
        current *= q + n;
        current /= q + 1;
        out.push(ExactNat::from(current.clone()));
    }
    out
}

fn exact_distribution(sys: CoupledSolids) -> Result<MacrostateDistribution> {
    let size = sys.q_total.saturating_add(sys.n_a.max(sys.n_b));
    if size > EXACT_MODE_CAP {
        return Err(Error::ExactModeCap { size, cap: EXACT_MODE_CAP });
    }
    let q = sys.q_total;
    let col_a = multiplicity_column(sys.n_a, q);
    let col_b = multiplicity_column(sys.n_b, q);
    let products: Vec<ExactNat> = (0..=q as usize)
        .into_par_iter()
        .map(|qa| &col_a[qa] * &col_b[q as usize - qa])
        .collect();
    let total: ExactNat = products.iter().sum();
    let denom = BigInt::from(total.as_biguint().clone());
    let rows = (0..=q as usize)
        .zip(products)
        .map(|(qa, tot)| {
            let p = BigRational::new(BigInt::from(tot.as_biguint().clone()), denom.clone());
            DistributionRow {
                q_a: qa as u64,
                q_b: q - qa as u64,
                omega_a: Multiplicity::Exact(col_a[qa].clone()),
                omega_b: Multiplicity::Exact(col_b[q as usize - qa].clone()),
                omega_tot: Multiplicity::Exact(tot),
                probability: p.to_f64().unwrap_or(0.0),
            }
        })
        .collect();
    Ok(MacrostateDistribution { system: sys, mode: Mode::Exact, rows, total: Multiplicity::Exact(total) })
}

fn log_distribution(sys: CoupledSolids) -> Result<MacrostateDistribution> {
    let size = sys.q_total.max(sys.n_a).max(sys.n_b);
    if size > LOG_MODE_CAP {
        return Err(Error::LogModeCap { size, cap: LOG_MODE_CAP });
    }
    let q = sys.q_total;
    let logs: Vec<(LogValue, LogValue)> = (0..=q)
        .into_par_iter()
        .map(|qa| {
            let a = ln_multiplicity(EinsteinSolid { oscillators: sys.n_a, energy: qa });
            let b = ln_multiplicity(EinsteinSolid { oscillators: sys.n_b, energy: q - qa });
            (a, b)
        })
        .collect();
    // Shift by the largest term so the biggest weight is exactly 1.
    let peak = logs.iter().map(|(a, b)| a.get() + b.get()).fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = logs.iter().map(|(a, b)| (a.get() + b.get() - peak).exp()).collect();
    let norm: f64 = weights.iter().sum();
    let rows = logs
        .into_iter()
        .zip(weights)
        .enumerate()
        .map(|(qa, ((a, b), w))| DistributionRow {
            q_a: qa as u64,
            q_b: q - qa as u64,
            omega_a: Multiplicity::Log(a),
            omega_b: Multiplicity::Log(b),
            omega_tot: Multiplicity::Log(a + b),
            probability: w / norm,
        })
        .collect();
    Ok(MacrostateDistribution {
        system: sys,
        mode: Mode::Log,
        rows,
        total: Multiplicity::Log(LogValue::new(peak + norm.ln())),
    })
}

/// Location and width of the `q_A` peak.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakStats {
    pub mean: f64,
    pub std: f64,
    /// `std / q_total`, or 0 when there is no energy.
    pub relative_width: f64,
    /// Full width at half maximum, interpolated linearly between neighbouring `q_A`.
    pub fwhm: f64,
}

pub fn peak_stats(dist: &MacrostateDistribution) -> PeakStats {
    let (mean, var) = match exact_moments(dist) {
        Some(m) => m,
        None => float_moments(dist),
    };
    let std = var.max(0.0).sqrt();
    let q = dist.system.q_total;
    PeakStats {
        mean,
        std,
        relative_width: if q == 0 { 0.0 } else { std / q as f64 },
        fwhm: fwhm(&dist.probabilities()),
    }
}

/// Mean and variance in rational arithmetic, when every row is exact.
fn exact_moments(dist: &MacrostateDistribution) -> Option<(f64, f64)> {
    let total = BigInt::from(dist.total.exact()?.as_biguint().clone());
    let mut first = BigInt::from(0);
    let mut second = BigInt::from(0);
    for row in &dist.rows {
        let w = BigInt::from(row.omega_tot.exact()?.as_biguint().clone());
        let qa = BigInt::from(row.q_a);
        first += &w * &qa;
        second += w * &qa * &qa;
    }
    let mean = BigRational::new(first, total.clone());
    let var = BigRational::new(second, total) - &mean * &mean;
    Some((mean.to_f64()?, var.to_f64()?))
}

fn float_moments(dist: &MacrostateDistribution) -> (f64, f64) {
    let mean: f64 = dist.rows.iter().map(|r| r.probability * r.q_a as f64).sum();
    let var: f64 = dist
        .rows
        .iter()
        .map(|r| {
            let d = r.q_a as f64 - mean;
            r.probability * d * d
        })
        .sum();
    (mean, var)
}

/// Width of the region where `p` is at least half its maximum, with the
/// crossings placed by linear interpolation. A side that never drops below
/// half the maximum ends at the support boundary.
pub fn fwhm(p: &[f64]) -> f64 {
    if p.len() < 2 {
        return 0.0;
    }
    let mut peak = 0;
    for (i, &v) in p.iter().enumerate() {
        if v > p[peak] {
            peak = i;
        }
    }
    let half = p[peak] / 2.0;
    let last = p.len() - 1;

    let mut j = peak;
    while j > 0 && p[j - 1] >= half {
        j -= 1;
    }
    let left = if j == 0 { 0.0 } else { (j - 1) as f64 + (half - p[j - 1]) / (p[j] - p[j - 1]) };

    let mut k = peak;
    while k < last && p[k + 1] >= half {
        k += 1;
    }
    let right = if k == last { last as f64 } else { k as f64 + (p[k] - half) / (p[k] - p[k + 1]) };

    right - left
}

/// Peak statistics of `base` scaled by each factor, computed in log-space
/// mode. Results follow the order of `factors`.
pub fn scaling_sweep(base: CoupledSolids, factors: &[u64]) -> Result<Vec<(u64, PeakStats)>> {
    if factors.is_empty() {
        return Err(Error::InvalidArgument("at least one scaling factor is required".into()));
    }
    if factors.contains(&0) {
        return Err(Error::InvalidArgument("scaling factors must be positive".into()));
    }
    factors
        .par_iter()
        .map(|&f| {
            let dist = macrostate_distribution(base.scaled(f)?, Mode::Log)?;
            Ok((f, peak_stats(&dist)))
        })
        .collect()
}

/// Whether the peak is narrower, relative to the total energy, than `threshold`.
pub fn thermodynamic_limit_reached(stats: &PeakStats, threshold: f64) -> Result<bool> {
    if threshold.is_nan() || threshold <= 0.0 {
        return Err(Error::InvalidArgument(format!("threshold must be positive, got {threshold}")));
    }
    Ok(stats.relative_width < threshold)
}
