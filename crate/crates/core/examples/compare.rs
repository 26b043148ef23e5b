//! All algorithms on generated 3×3 tight games from lattice starting points; CSV on stdout.

use stationary_nash::harness::{exp_compare, Algorithm, ExperimentConfig, ExperimentKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut cfg = ExperimentConfig::new(ExperimentKind::Compare);
    cfg.count = 4;
    cfg.trials = Some(25);
    let report = exp_compare(&cfg, &Algorithm::ALL)?;
    for (key, agg) in &report.aggregates {
        eprintln!("{key:>8}: {} runs, f > 0.339: {}, f > 0.01: {}, median {:.2e}", agg.trials, agg.f_above_0339, agg.f_above_001, agg.median_f.unwrap_or(f64::NAN));
    }
    report.write_csv(std::io::stdout())?;
    Ok(())
}
