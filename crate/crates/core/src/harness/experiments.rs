use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::{ExperimentConfig, ExperimentError, ExperimentReport, TrialRecord};
use super::{derive_seed, sampling, stream};
use crate::adjustments::ts_adjust;
use crate::baselines::{fictitious_play, regret_matching, zero_sum_baseline};
use crate::descent::{find_stationary, StationaryPoint};
use crate::dfm::dfm_finish;
use crate::game::{Game, Profile};
use crate::generator::{generate_tight, sample_inputs, tight_feasible, Generated, GeneratorOptions, Restriction, TightInstance};

/// Descent precision used to classify stability.
pub const STABILITY_DELTA: f64 = 1e-3;
/// An outcome above this counts as a tight (bad) answer.
pub const TIGHT_CUTOFF: f64 = 0.339;

const TAG_GAMES: u64 = 1;
const TAG_STABILITY: u64 = 2;
const TAG_OUTSIDE: u64 = 3;
const TAG_SUCCESS: u64 = 4;
const TAG_LATTICE: u64 = 5;
const TAG_BASELINE: u64 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Ts,
    Dfm,
    Fp,
    Rm,
    Zs,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [Algorithm::Ts, Algorithm::Dfm, Algorithm::Fp, Algorithm::Rm, Algorithm::Zs];
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Ts => "ts",
            Algorithm::Dfm => "dfm",
            Algorithm::Fp => "fp",
            Algorithm::Rm => "rm",
            Algorithm::Zs => "zs",
        })
    }
}

impl FromStr for Algorithm {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "ts" => Ok(Algorithm::Ts),
            "dfm" => Ok(Algorithm::Dfm),
            "fp" => Ok(Algorithm::Fp),
            "rm" => Ok(Algorithm::Rm),
            "zs" => Ok(Algorithm::Zs),
            other => Err(format!("unknown algorithm '{other}'")),
        }
    }
}

fn restriction_tag(r: Restriction) -> u64 {
    Restriction::ALL.iter().position(|&x| x == r).unwrap() as u64
}

/// `count` tight games of one size: 10 groups of generator inputs (fewer
/// when `count < 10`), each contributing an equal share of convex
/// combinations.
pub fn sample_tight_games(m: usize, n: usize, count: usize, restriction: Restriction, seed: u64) -> Result<Vec<TightInstance>, ExperimentError> {
    const MAX_ATTEMPTS: usize = 10_000;
    let groups = count.clamp(1, 10);
    let shares: Vec<usize> = (0..groups).map(|g| count / groups + usize::from(g < count % groups)).collect();
    let chunks: Result<Vec<Vec<TightInstance>>, ExperimentError> = shares
        .par_iter()
        .enumerate()
        .map(|(g, &share)| {
            let mut rng = stream(seed, &[TAG_GAMES, m as u64, n as u64, restriction_tag(restriction), g as u64]);
            let opts = GeneratorOptions { per_pair: share, first_only: true, ..Default::default() };
            for _ in 0..MAX_ATTEMPTS {
                let input = sample_inputs(m, n, restriction, &mut rng)?;
                if let Generated::Instances(v) = generate_tight(&input, &opts, &mut rng)? {
                    if v.len() == share {
                        return Ok(v);
                    }
                }
            }
            Err(ExperimentError::Config(format!("no tight {m}x{n} game found under restriction {restriction}")))
        })
        .collect();
    Ok(chunks?.into_iter().flatten().collect())
}

fn ms_since(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

fn run_descent(g: &Game, p0: &Profile, delta: f64, rec: &mut TrialRecord) -> Option<StationaryPoint> {
    match find_stationary(g, p0, delta, None) {
        Ok(sp) => {
            rec.iterations = Some(sp.iterations);
            Some(sp)
        }
        Err(e) => {
            rec.error = Some(e.to_string());
            None
        }
    }
}

/// Perturbed restarts around each game's tight point, stopping at the
/// first restart that escapes the ball.
fn stability_trials(inst: &TightInstance, idx: usize, cfg: &ExperimentConfig, delta: f64) -> Vec<TrialRecord> {
    let (m, n) = (inst.game.m(), inst.game.n());
    let center = inst.input.profile();
    let mut out = Vec::new();
    for t in 0..cfg.trials_for(m, n) {
        let seed = derive_seed(cfg.seed, &[TAG_STABILITY, m as u64, n as u64, idx as u64, t as u64]);
        let mut rng = stream(seed, &[]);
        let start = Instant::now();
        let p0 = sampling::perturbed(&center, cfg.radius, &mut rng);
        let mut rec = TrialRecord::new((m, n), idx, t, seed, "ts");
        let back = match run_descent(&inst.game, &p0, delta, &mut rec) {
            Some(sp) => {
                let back = sp.profile.dist(&center) <= cfg.radius;
                rec.f = Some(ts_adjust(&inst.game, sp).f);
                back
            }
            None => false,
        };
        rec.fell_back = Some(back);
        rec.wall_ms = ms_since(start);
        out.push(rec);
        if !back {
            break;
        }
    }
    out
}

pub fn exp_stability(cfg: &ExperimentConfig) -> Result<ExperimentReport, ExperimentError> {
    cfg.validate()?;
    let mut records = Vec::new();
    for &(m, n) in &cfg.sizes {
        let games = sample_tight_games(m, n, cfg.count, cfg.restrictions[0], cfg.seed)?;
        let per: Vec<Vec<TrialRecord>> = games.par_iter().enumerate().map(|(i, inst)| stability_trials(inst, i, cfg, cfg.delta)).collect();
        records.extend(per.into_iter().flatten());
    }
    Ok(ExperimentReport::new(cfg.clone(), records))
}

/// Restarts from outside the ball on the games whose tight point is stable.
pub fn exp_outside_ball(cfg: &ExperimentConfig) -> Result<ExperimentReport, ExperimentError> {
    cfg.validate()?;
    let mut records = Vec::new();
    for &(m, n) in &cfg.sizes {
        let games = sample_tight_games(m, n, cfg.count, cfg.restrictions[0], cfg.seed)?;
        let per: Vec<Vec<TrialRecord>> = games
            .par_iter()
            .enumerate()
            .map(|(i, inst)| {
                let stable = stability_trials(inst, i, cfg, STABILITY_DELTA).iter().all(|r| r.fell_back == Some(true));
                if !stable {
                    return Vec::new();
                }
                let center = inst.input.profile();
                (0..cfg.trials_for(m, n))
                    .map(|t| {
                        let seed = derive_seed(cfg.seed, &[TAG_OUTSIDE, m as u64, n as u64, i as u64, t as u64]);
                        let mut rng = stream(seed, &[]);
                        let start = Instant::now();
                        let p0 = sampling::outside_ball(&center, cfg.radius, &mut rng);
                        let mut rec = TrialRecord::new((m, n), i, t, seed, "ts");
                        let sp = run_descent(&inst.game, &p0, cfg.delta, &mut rec);
                        rec.effective = Some(match sp {
                            Some(sp) => {
                                let outside = sp.profile.dist(&center) >= cfg.radius;
                                let f = ts_adjust(&inst.game, sp).f;
                                rec.f = Some(f);
                                outside && f < TIGHT_CUTOFF
                            }
                            None => false,
                        });
                        rec.wall_ms = ms_since(start);
                        rec
                    })
                    .collect()
            })
            .collect();
        records.extend(per.into_iter().flatten());
    }
    Ok(ExperimentReport::new(cfg.clone(), records))
}

/// Fraction of sampled generator inputs admitting a tight game.
pub fn exp_success_rate(cfg: &ExperimentConfig) -> Result<ExperimentReport, ExperimentError> {
    cfg.validate()?;
    let mut records = Vec::new();
    for &(m, n) in &cfg.sizes {
        for &res in &cfg.restrictions {
            let cell: Result<Vec<TrialRecord>, ExperimentError> = (0..cfg.count)
                .into_par_iter()
                .map(|t| {
                    let seed = derive_seed(cfg.seed, &[TAG_SUCCESS, m as u64, n as u64, restriction_tag(res), t as u64]);
                    let mut rng = stream(seed, &[]);
                    let start = Instant::now();
                    let input = sample_inputs(m, n, res, &mut rng)?;
                    let mut rec = TrialRecord::new((m, n), t, 0, seed, "generator");
                    rec.restriction = Some(res);
                    rec.success = Some(tight_feasible(&input, false)?.is_some());
                    rec.wall_ms = ms_since(start);
                    Ok(rec)
                })
                .collect();
            records.extend(cell?);
        }
    }
    Ok(ExperimentReport::new(cfg.clone(), records))
}

/// Initial points for the descent-based algorithms on one game: one per
/// lattice cell, optionally subsampled to `cfg.trials`.
fn compare_starts(cfg: &ExperimentConfig, m: usize, n: usize, idx: usize) -> Vec<Profile> {
    let mut rng = stream(cfg.seed, &[TAG_LATTICE, m as u64, n as u64, idx as u64]);
    let mut pts = sampling::lattice_profiles(m, n, cfg.resolution, &mut rng);
    if let Some(t) = cfg.trials {
        if t < pts.len() {
            pts.shuffle(&mut rng);
            pts.truncate(t);
        }
    }
    pts
}

fn compare_trial(inst: &TightInstance, idx: usize, trial: usize, alg: Algorithm, p0: Option<&Profile>, cfg: &ExperimentConfig) -> TrialRecord {
    let g = &inst.game;
    let (m, n) = (g.m(), g.n());
    let seed = derive_seed(cfg.seed, &[TAG_BASELINE, m as u64, n as u64, idx as u64, trial as u64]);
    let mut rec = TrialRecord::new((m, n), idx, trial, seed, &alg.to_string());
    let start = Instant::now();
    match alg {
        Algorithm::Ts | Algorithm::Dfm => {
            let p0 = p0.expect("descent trials carry an initial point");
            if let Some(sp) = run_descent(g, p0, cfg.delta, &mut rec) {
                rec.f = Some(if alg == Algorithm::Ts { ts_adjust(g, sp).f } else { dfm_finish(g, sp).f });
            }
        }
        Algorithm::Fp => rec.f = Some(fictitious_play(g, cfg.rounds).f),
        Algorithm::Rm => rec.f = Some(regret_matching(g, cfg.rounds, seed).f),
        Algorithm::Zs => match zero_sum_baseline(g) {
            Ok(out) => rec.f = Some(out.f),
            Err(e) => rec.error = Some(e.to_string()),
        },
    }
    rec.wall_ms = ms_since(start);
    rec
}

/// Runs the listed algorithms on tight games: descent-based ones from every
/// lattice start, the baselines once per game.
pub fn exp_compare(cfg: &ExperimentConfig, algorithms: &[Algorithm]) -> Result<ExperimentReport, ExperimentError> {
    cfg.validate()?;
    let mut records = Vec::new();
    for &(m, n) in &cfg.sizes {
        let games = sample_tight_games(m, n, cfg.count, cfg.restrictions[0], cfg.seed)?;
        for &alg in algorithms {
            let jobs: Vec<(usize, usize, Option<Profile>)> = games
                .iter()
                .enumerate()
                .flat_map(|(i, _)| match alg {
                    Algorithm::Ts | Algorithm::Dfm => compare_starts(cfg, m, n, i).into_iter().enumerate().map(|(t, p)| (i, t, Some(p))).collect::<Vec<_>>(),
                    _ => vec![(i, 0, None)],
                })
                .collect();
            let recs: Vec<TrialRecord> = jobs.par_iter().map(|(i, t, p)| compare_trial(&games[*i], *i, *t, alg, p.as_ref(), cfg)).collect();
            records.extend(recs);
        }
    }
    Ok(ExperimentReport::new(cfg.clone(), records))
}
