//! How often a sampled input admits a tight game, per size and support restriction.

use stationary_nash::harness::{exp_success_rate, ExperimentConfig, ExperimentKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut cfg = ExperimentConfig::new(ExperimentKind::SuccessRate);
    cfg.sizes = vec![(3, 3), (4, 4), (5, 5)];
    cfg.count = 100;
    let report = exp_success_rate(&cfg)?;
    for (key, agg) in &report.aggregates {
        let (lo, hi) = agg.ci.unwrap_or((0.0, 1.0));
        println!("{key:<28} {:>6.3}  [{lo:.3}, {hi:.3}]", agg.success_rate.unwrap_or(0.0));
    }
    Ok(())
}
