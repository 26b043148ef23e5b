use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::wilson;
use crate::descent::DescentError;
use crate::generator::{GeneratorError, Restriction};
use crate::lp::LpError;

#[derive(Error, Debug)]
pub enum ExperimentError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error(transparent)]
    Descent(#[from] DescentError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("I/O: {0}")]
    Io(#[from] std::io::Error),
    #[error("JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("CSV: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Stability,
    OutsideBall,
    SuccessRate,
    Compare,
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExperimentKind::Stability => "stability",
            ExperimentKind::OutsideBall => "outside-ball",
            ExperimentKind::SuccessRate => "success-rate",
            ExperimentKind::Compare => "compare",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub sizes: Vec<(usize, usize)>,
    /// Games per size (or sampled inputs per cell for the success rate).
    pub count: usize,
    /// Initial points per game; defaults to `16(m−1)(n−1)`.
    pub trials: Option<usize>,
    pub delta: f64,
    pub radius: f64,
    pub rounds: usize,
    /// Cells per simplex edge for lattice initial points.
    pub resolution: usize,
    pub restrictions: Vec<Restriction>,
    pub seed: u64,
    /// Fraction of effective trials for a game to count as effective.
    pub effective_share: f64,
}

impl ExperimentConfig {
    pub fn new(experiment: ExperimentKind) -> Self {
        let base = ExperimentConfig {
            experiment,
            sizes: vec![(3, 3)],
            count: 100,
            trials: None,
            delta: 1e-3,
            radius: 0.01,
            rounds: 10_000,
            resolution: 5,
            restrictions: vec![Restriction::Disjoint],
            seed: 0,
            effective_share: 0.95,
        };
        match experiment {
            ExperimentKind::Stability => base,
            ExperimentKind::OutsideBall => ExperimentConfig { delta: 1e-2, ..base },
            ExperimentKind::SuccessRate => ExperimentConfig {
                sizes: (3..=7).map(|k| (k, k)).collect(),
                count: 200,
                restrictions: Restriction::ALL.to_vec(),
                ..base
            },
            ExperimentKind::Compare => ExperimentConfig { count: 20, ..base },
        }
    }

    pub fn trials_for(&self, m: usize, n: usize) -> usize {
        self.trials.unwrap_or(16 * (m - 1) * (n - 1))
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |s: &str| Err(ExperimentError::Config(s.into()));
        if self.sizes.is_empty() || self.sizes.iter().any(|&(m, n)| m < 2 || n < 2) {
            return bad("sizes must be nonempty with m, n >= 2");
        }
        if self.count == 0 || self.rounds == 0 || self.resolution == 0 || self.trials == Some(0) {
            return bad("counts must be at least 1");
        }
        if !(self.delta > 0.0) {
            return bad("delta must be positive");
        }
        if !(self.radius >= 0.0) {
            return bad("radius must be nonnegative");
        }
        if self.restrictions.is_empty() {
            return bad("at least one restriction is required");
        }
        Ok(())
    }
}

/// One trial. Fields that do not apply to an experiment are left empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub size: String,
    pub instance: usize,
    pub trial: usize,
    pub seed: u64,
    pub algorithm: String,
    pub restriction: Option<Restriction>,
    pub f: Option<f64>,
    pub iterations: Option<usize>,
    pub wall_ms: f64,
    #[serde(rename = "fellBack")]
    pub fell_back: Option<bool>,
    pub effective: Option<bool>,
    pub success: Option<bool>,
    pub error: Option<String>,
}

impl TrialRecord {
    pub fn new(size: (usize, usize), instance: usize, trial: usize, seed: u64, algorithm: &str) -> Self {
        TrialRecord {
            size: format!("{}x{}", size.0, size.1),
            instance,
            trial,
            seed,
            algorithm: algorithm.into(),
            restriction: None,
            f: None,
            iterations: None,
            wall_ms: 0.0,
            fell_back: None,
            effective: None,
            success: None,
            error: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub trials: usize,
    pub instances: usize,
    pub errors: usize,
    #[serde(rename = "fAbove0.01")]
    pub f_above_001: usize,
    #[serde(rename = "fAbove0.339")]
    pub f_above_0339: usize,
    #[serde(rename = "medianF")]
    pub median_f: Option<f64>,
    pub stable: Option<usize>,
    #[serde(rename = "stableRate")]
    pub stable_rate: Option<f64>,
    #[serde(rename = "effectiveGames")]
    pub effective_games: Option<usize>,
    #[serde(rename = "successRate")]
    pub success_rate: Option<f64>,
    /// Wilson 95% interval of the stable or success rate.
    pub ci: Option<(f64, f64)>,
}

fn group_key(r: &TrialRecord) -> String {
    match r.restriction {
        Some(res) => format!("{}/{}/{}", r.size, r.algorithm, res),
        None => format!("{}/{}", r.size, r.algorithm),
    }
}

fn median(mut v: Vec<f64>) -> Option<f64> {
    if v.is_empty() {
        return None;
    }
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let k = v.len();
    Some(if k % 2 == 1 { v[k / 2] } else { 0.5 * (v[k / 2 - 1] + v[k / 2]) })
}

const Z95: f64 = 1.96;

/// Aggregates recomputed from the raw records, keyed by
/// `size/algorithm[/restriction]`.
pub fn aggregate(kind: ExperimentKind, records: &[TrialRecord], effective_share: f64) -> BTreeMap<String, Aggregate> {
    let mut groups: BTreeMap<String, Vec<&TrialRecord>> = BTreeMap::new();
    for r in records {
        groups.entry(group_key(r)).or_default().push(r);
    }
    groups
        .into_iter()
        .map(|(key, rs)| {
            let fs: Vec<f64> = rs.iter().filter_map(|r| r.f).collect();
            let mut per_instance: BTreeMap<usize, Vec<&TrialRecord>> = BTreeMap::new();
            for r in &rs {
                per_instance.entry(r.instance).or_default().push(r);
            }
            let instances = per_instance.len();
            let mut agg = Aggregate {
                trials: rs.len(),
                instances,
                errors: rs.iter().filter(|r| r.error.is_some()).count(),
                f_above_001: fs.iter().filter(|&&f| f > 0.01).count(),
                f_above_0339: fs.iter().filter(|&&f| f > 0.339).count(),
                median_f: median(fs),
                stable: None,
                stable_rate: None,
                effective_games: None,
                success_rate: None,
                ci: None,
            };
            match kind {
                ExperimentKind::Stability => {
                    let stable = per_instance.values().filter(|t| t.iter().all(|r| r.fell_back == Some(true))).count();
                    agg.stable = Some(stable);
                    agg.stable_rate = Some(stable as f64 / instances.max(1) as f64);
                    agg.ci = Some(wilson(stable, instances, Z95));
                }
                ExperimentKind::OutsideBall => {
                    let eff = per_instance
                        .values()
                        .filter(|t| t.iter().filter(|r| r.effective == Some(true)).count() as f64 >= effective_share * t.len() as f64)
                        .count();
                    agg.effective_games = Some(eff);
                }
                ExperimentKind::SuccessRate => {
                    let ok = rs.iter().filter(|r| r.success == Some(true)).count();
                    agg.success_rate = Some(ok as f64 / rs.len().max(1) as f64);
                    agg.ci = Some(wilson(ok, rs.len(), Z95));
                }
                ExperimentKind::Compare => {}
            }
            (key, agg)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub records: Vec<TrialRecord>,
    pub aggregates: BTreeMap<String, Aggregate>,
}

/// Fixed CSV columns.
pub const CSV_COLUMNS: [&str; 13] =
    ["size", "instance", "trial", "seed", "algorithm", "restriction", "f", "iterations", "wall_ms", "fell_back", "effective", "success", "error"];

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(T::to_string).unwrap_or_default()
}

impl ExperimentReport {
    pub fn new(config: ExperimentConfig, records: Vec<TrialRecord>) -> Self {
        let aggregates = aggregate(config.experiment, &records, config.effective_share);
        ExperimentReport { config, records, aggregates }
    }

    /// The report with timings zeroed, for comparing reruns.
    pub fn without_timing(&self) -> Self {
        let mut out = self.clone();
        out.records.iter_mut().for_each(|r| r.wall_ms = 0.0);
        out
    }

    pub fn to_json(&self) -> Result<String, ExperimentError> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), ExperimentError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(CSV_COLUMNS)?;
        for r in &self.records {
            w.write_record([
                r.size.clone(),
                r.instance.to_string(),
                r.trial.to_string(),
                r.seed.to_string(),
                r.algorithm.clone(),
                opt(&r.restriction),
                opt(&r.f),
                opt(&r.iterations),
                r.wall_ms.to_string(),
                opt(&r.fell_back),
                opt(&r.effective),
                opt(&r.success),
                opt(&r.error),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Writes JSON or CSV depending on `csv`.
    pub fn save(&self, path: &Path, csv: bool) -> Result<(), ExperimentError> {
        let file = std::fs::File::create(path)?;
        if csv {
            self.write_csv(file)
        } else {
            let mut file = file;
            file.write_all(self.to_json()?.as_bytes())?;
            Ok(())
        }
    }
}
