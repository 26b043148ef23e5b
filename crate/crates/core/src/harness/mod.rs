//! Experiment engine: seeded sampling, tight-game pools, experiments and
//! report writers, plus the command-line front end.

pub mod cli;
mod experiments;
mod report;
pub mod sampling;

pub use experiments::{exp_compare, exp_outside_ball, exp_stability, exp_success_rate, sample_tight_games, Algorithm};
pub use report::{aggregate, Aggregate, ExperimentConfig, ExperimentError, ExperimentKind, ExperimentReport, TrialRecord};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the stream addressed by `path` under `seed`.
pub fn derive_seed(seed: u64, path: &[u64]) -> u64 {
    path.iter().fold(splitmix64(seed), |acc, &p| splitmix64(acc ^ splitmix64(p)))
}

pub fn stream(seed: u64, path: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, path))
}

/// Wilson score interval for `k` successes in `n` trials.
pub fn wilson(k: usize, n: usize, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let n = n as f64;
    let p = k as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Parses `MxN`.
pub fn parse_size(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(['x', 'X']).ok_or_else(|| format!("size '{s}' is not of the form MxN"))?;
    let m = a.trim().parse::<usize>().map_err(|e| format!("size '{s}': {e}"))?;
    let n = b.trim().parse::<usize>().map_err(|e| format!("size '{s}': {e}"))?;
    if m == 0 || n == 0 {
        return Err(format!("size '{s}' has a zero dimension"));
    }
    Ok((m, n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_edges() {
        let (lo, hi) = wilson(0, 50, 1.96);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.1);
        let (lo, hi) = wilson(50, 50, 1.96);
        assert!(lo > 0.9 && hi == 1.0);
    }
}
