use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::contest::bernstein;
use crate::distributions::Distribution;
use crate::error::{Error, Result};

pub const MIN_SAMPLES: usize = 10_000;
const SHARDS: u64 = 16;
const MIN_EXPECTED_PER_CELL: f64 = 5.0;
const CHI_SQUARE_LEVEL: f64 = 0.999;

/// Simulated versus analytic rank frequencies of a fixed type.
#[derive(Debug, Clone, PartialEq)]
pub struct RankFrequencies {
    pub counts: Vec<u64>,
    pub empirical: Vec<f64>,
    /// `pᵢ(F(θ))`
    pub analytic: Vec<f64>,
    pub samples: usize,
    pub chi_square: f64,
    pub degrees_of_freedom: usize,
    /// 0.999 quantile of the χ² law with the above degrees of freedom.
    pub critical_value: f64,
}

impl RankFrequencies {
    pub fn passed(&self) -> bool {
        self.chi_square <= self.critical_value
    }

    /// Every empirical frequency lies within `sigmas` binomial standard
    /// deviations of its analytic value.
    pub fn within_bands(&self, sigmas: f64) -> bool {
        let m = self.samples as f64;
        self.empirical.iter().zip(&self.analytic).all(|(&e, &p)| {
            let sd = (p * (1.0 - p) / m).sqrt();
            (e - p).abs() <= sigmas * sd + 1e-15
        })
    }
}

/// Ranks type `θ` against `n − 1` opponents drawn by inverse transform,
/// `samples` times. Lower cost ranks better; exact ties are split uniformly.
///
/// Work is split into a fixed number of shards, each with its own ChaCha8
/// stream derived from `seed`, so results do not depend on scheduling.
pub fn monte_carlo_ranks(d: &Distribution, n: usize, theta: f64, samples: usize, seed: u64) -> Result<RankFrequencies> {
    if n < 2 {
        return Err(Error::Input(format!("need n ≥ 2, got {n}")));
    }
    if samples < MIN_SAMPLES {
        return Err(Error::Input(format!("need at least {MIN_SAMPLES} samples, got {samples}")));
    }
    if !(0.0..=1.0).contains(&theta) {
        return Err(Error::Domain(format!("type must lie in [0, 1], got {theta}")));
    }
    let per_shard = samples as u64 / SHARDS;
    let remainder = samples as u64 % SHARDS;
    let shard_counts: Vec<Vec<u64>> = (0..SHARDS)
        .into_par_iter()
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(s);
            let draws = per_shard + u64::from(s < remainder);
            let mut counts = vec![0u64; n];
            for _ in 0..draws {
                let (mut better, mut tied) = (0usize, 0usize);
                for _ in 1..n {
                    let other = d.quantile(rng.random::<f64>());
                    if other < theta {
                        better += 1;
                    } else if other == theta {
                        tied += 1;
                    }
                }
                let offset = if tied > 0 { rng.random_range(0..=tied) } else { 0 };
                counts[better + offset] += 1;
            }
            counts
        })
        .collect();
    let mut counts = vec![0u64; n];
    for shard in &shard_counts {
        for (c, s) in counts.iter_mut().zip(shard) {
            *c += s;
        }
    }
    let m = samples as f64;
    let t = d.cdf(theta);
    let analytic: Vec<f64> = (1..=n).map(|i| bernstein(n, i, t)).collect();
    let empirical: Vec<f64> = counts.iter().map(|&c| c as f64 / m).collect();
    let (chi_square, cells) = pooled_chi_square(&counts, &analytic, m);
    let degrees_of_freedom = cells.saturating_sub(1);
    let critical_value = if degrees_of_freedom == 0 {
        0.0
    } else {
        ChiSquared::new(degrees_of_freedom as f64)
            .map_err(|e| Error::Numeric(e.to_string()))?
            .inverse_cdf(CHI_SQUARE_LEVEL)
    };
    Ok(RankFrequencies {
        counts,
        empirical,
        analytic,
        samples,
        chi_square,
        degrees_of_freedom,
        critical_value,
    })
}

/// Pearson statistic after merging adjacent ranks until each cell expects
/// at least five draws. Returns the statistic and the number of cells.
fn pooled_chi_square(counts: &[u64], probs: &[f64], m: f64) -> (f64, usize) {
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let (mut obs, mut exp) = (0.0, 0.0);
    for (&c, &p) in counts.iter().zip(probs) {
        obs += c as f64;
        exp += p * m;
        if exp >= MIN_EXPECTED_PER_CELL {
            cells.push((obs, exp));
            obs = 0.0;
            exp = 0.0;
        }
    }
    if exp > 0.0 || obs > 0.0 {
        match cells.last_mut() {
            Some(last) => {
                last.0 += obs;
                last.1 += exp;
            }
            None => cells.push((obs, exp)),
        }
    }
    let stat = cells
        .iter()
        .map(|&(o, e)| if e > 0.0 { (o - e) * (o - e) / e } else { 0.0 })
        .sum();
    (stat, cells.len())
}
