//! Perturbation stability of tight stationary points and the outside-the-ball restart.

use stationary_nash::harness::{exp_outside_ball, exp_stability, ExperimentConfig, ExperimentKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut cfg = ExperimentConfig::new(ExperimentKind::Stability);
    cfg.count = 20;
    let report = exp_stability(&cfg)?;
    for (key, agg) in &report.aggregates {
        println!("{key}: {} of {} stable, Wilson 95% {:?}", agg.stable.unwrap_or(0), agg.instances, agg.ci);
    }

    let mut cfg = ExperimentConfig::new(ExperimentKind::OutsideBall);
    cfg.count = 20;
    let report = exp_outside_ball(&cfg)?;
    for (key, agg) in &report.aggregates {
        println!("{key}: outside-the-ball effective on {} of {} stable games", agg.effective_games.unwrap_or(0), agg.instances);
    }
    Ok(())
}
