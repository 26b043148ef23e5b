//! Comparison algorithms: fictitious play, regret matching and a
//! zero-sum based baseline.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::game::{f_value, Game, MixedStrategy, Profile};
use crate::linalg;
use crate::lp::{solve_zero_sum, LpError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunTrace {
    pub algorithm: String,
    pub rounds: usize,
    pub profile: Profile,
    pub f: f64,
    /// `(round, f of the running average)` every `sample_every` rounds.
    pub history: Vec<(usize, f64)>,
    pub seed: Option<u64>,
    /// Pure actions played in the last round.
    pub last_play: (usize, usize),
}

fn history_step(rounds: usize) -> usize {
    (rounds / 100).max(1)
}

fn average(counts: &[f64]) -> MixedStrategy {
    MixedStrategy::new(counts.to_vec()).expect("positive counts")
}

/// Both players start at their first action and then best-respond (lowest
/// index) to the opponent's empirical average; returns the averages.
pub fn fictitious_play(g: &Game, rounds: usize) -> RunTrace {
    let (m, n) = (g.m(), g.n());
    let mut cx = vec![0.0; m];
    let mut cy = vec![0.0; n];
    cx[0] = 1.0;
    cy[0] = 1.0;
    let step = history_step(rounds);
    let mut history = Vec::new();
    let mut last = (0, 0);
    for t in 1..=rounds {
        let i = linalg::argmax(&g.row_payoffs(&cy));
        let j = linalg::argmax(&g.col_payoffs(&cx));
        cx[i] += 1.0;
        cy[j] += 1.0;
        last = (i, j);
        if t % step == 0 || t == rounds {
            history.push((t, f_value(g, &Profile::new(average(&cx), average(&cy)))));
        }
    }
    let profile = Profile::new(average(&cx), average(&cy));
    let f = f_value(g, &profile);
    RunTrace { algorithm: "fp".into(), rounds, profile, f, history, seed: None, last_play: last }
}

fn regret_strategy(regret: &[f64]) -> Vec<f64> {
    let pos: Vec<f64> = regret.iter().map(|r| r.max(0.0)).collect();
    let total: f64 = pos.iter().sum();
    if total > 0.0 {
        pos.iter().map(|p| p / total).collect()
    } else {
        vec![1.0 / regret.len() as f64; regret.len()]
    }
}

fn sample<R: Rng + ?Sized>(p: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (i, &v) in p.iter().enumerate() {
        acc += v;
        if u < acc {
            return i;
        }
    }
    p.iter().rposition(|&v| v > 0.0).unwrap_or(0)
}

/// Regret matching with sampled play and external regrets; returns the
/// average of the mixed strategies played.
pub fn regret_matching(g: &Game, rounds: usize, seed: u64) -> RunTrace {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (m, n) = (g.m(), g.n());
    let mut reg_x = vec![0.0; m];
    let mut reg_y = vec![0.0; n];
    let mut sum_x = vec![0.0; m];
    let mut sum_y = vec![0.0; n];
    let step = history_step(rounds);
    let mut history = Vec::new();
    let mut last = (0, 0);
    for t in 1..=rounds {
        let px = regret_strategy(&reg_x);
        let py = regret_strategy(&reg_y);
        sum_x.iter_mut().zip(&px).for_each(|(s, p)| *s += p);
        sum_y.iter_mut().zip(&py).for_each(|(s, p)| *s += p);
        let i = sample(&px, &mut rng);
        let j = sample(&py, &mut rng);
        for (a, r) in reg_x.iter_mut().enumerate() {
            *r += g.r()[a][j] - g.r()[i][j];
        }
        for (b, r) in reg_y.iter_mut().enumerate() {
            *r += g.c()[i][b] - g.c()[i][j];
        }
        last = (i, j);
        if t % step == 0 || t == rounds {
            history.push((t, f_value(g, &Profile::new(average(&sum_x), average(&sum_y)))));
        }
    }
    let profile = Profile::new(average(&sum_x), average(&sum_y));
    let f = f_value(g, &profile);
    RunTrace { algorithm: "rm".into(), rounds, profile, f, history, seed: Some(seed), last_play: last }
}

/// Threshold below which a zero-sum candidate is returned unadjusted.
pub const ZERO_SUM_THRESHOLD: f64 = 0.382;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ZeroSumCandidate {
    /// Equilibrium of the zero-sum game on `R`.
    Row,
    /// Equilibrium of the zero-sum game on `Cᵀ`.
    Column,
    /// Equilibrium of the zero-sum game `(R − C, C − R)`.
    Difference,
    /// Each player's min-max strategy against the opponent's payoffs.
    Punish,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroSumOutcome {
    pub profile: Profile,
    pub f: f64,
    /// Candidate whose equilibrium (or its adjustment) was returned.
    pub candidate: ZeroSumCandidate,
    /// Whether the best-response combination step ran.
    pub adjusted: bool,
    /// `f` at each evaluated candidate.
    pub candidates: Vec<(ZeroSumCandidate, f64)>,
}

/// The equilibrium profile of one zero-sum candidate.
pub fn zero_sum_profile(g: &Game, which: ZeroSumCandidate) -> Result<Profile, LpError> {
    Ok(match which {
        ZeroSumCandidate::Row => {
            let s = solve_zero_sum(g.r())?;
            Profile::new(s.x, s.y)
        }
        ZeroSumCandidate::Column => {
            let s = solve_zero_sum(&linalg::transpose(g.c()))?;
            Profile::new(s.y, s.x)
        }
        ZeroSumCandidate::Punish => {
            let row = solve_zero_sum(g.r())?;
            let col = solve_zero_sum(&linalg::transpose(g.c()))?;
            Profile::new(col.y, row.y)
        }
        ZeroSumCandidate::Difference => {
            let d: Vec<Vec<f64>> = g.r().iter().zip(g.c()).map(|(r, c)| r.iter().zip(c).map(|(a, b)| a - b).collect()).collect();
            let s = solve_zero_sum(&d)?;
            Profile::new(s.x, s.y)
        }
    })
}

/// Mixes each player's strategy with a best response to the opponent's,
/// using one weight chosen by a 10³-point scan.
fn best_response_mix(g: &Game, p: &Profile) -> (Profile, f64) {
    let br_x = MixedStrategy::pure(g.m(), linalg::argmax(&g.row_payoffs(p.y.probs())));
    let br_y = MixedStrategy::pure(g.n(), linalg::argmax(&g.col_payoffs(p.x.probs())));
    let target = Profile::new(br_x, br_y);
    let mut best = (p.clone(), f_value(g, p));
    for k in 1..=1000 {
        let q = p.lerp(&target, k as f64 / 1000.0);
        let v = f_value(g, &q);
        if v < best.1 {
            best = (q, v);
        }
    }
    best
}

pub fn zero_sum_baseline(g: &Game) -> Result<ZeroSumOutcome, LpError> {
    zero_sum_baseline_with(g, &[ZeroSumCandidate::Row, ZeroSumCandidate::Column])
}

/// Evaluates the listed candidates; the best is returned as-is if its `f`
/// is at most the threshold, otherwise after the best-response mix.
pub fn zero_sum_baseline_with(g: &Game, which: &[ZeroSumCandidate]) -> Result<ZeroSumOutcome, LpError> {
    let mut evaluated = Vec::with_capacity(which.len());
    let mut best: Option<(ZeroSumCandidate, Profile, f64)> = None;
    for &c in which {
        let p = zero_sum_profile(g, c)?;
        let f = f_value(g, &p);
        evaluated.push((c, f));
        if best.as_ref().map_or(true, |b| f < b.2) {
            best = Some((c, p, f));
        }
    }
    let (candidate, profile, f) = best.ok_or_else(|| LpError::Malformed("no zero-sum candidate requested".into()))?;
    if f <= ZERO_SUM_THRESHOLD {
        return Ok(ZeroSumOutcome { profile, f, candidate, adjusted: false, candidates: evaluated });
    }
    let (profile, f) = best_response_mix(g, &profile);
    Ok(ZeroSumOutcome { profile, f, candidate, adjusted: true, candidates: evaluated })
}
