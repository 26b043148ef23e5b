//! Fictitious play, regret matching and the zero-sum baseline on tight games.

use stationary_nash::baselines::{fictitious_play, regret_matching, zero_sum_baseline};
use stationary_nash::generator::{tight_3x3, Restriction};
use stationary_nash::harness::sample_tight_games;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut games = vec![tight_3x3().game];
    games.extend(sample_tight_games(5, 5, 4, Restriction::Disjoint, 3)?.into_iter().map(|t| t.game));
    for (i, g) in games.iter().enumerate() {
        let fp = fictitious_play(g, 10_000);
        let rm = regret_matching(g, 10_000, i as u64);
        let zs = zero_sum_baseline(g)?;
        println!(
            "game {i} ({}x{}): fp {:.5}  rm {:.5}  zero-sum {:.5} via {:?}",
            g.m(),
            g.n(),
            fp.f,
            rm.f,
            zs.f,
            zs.candidate
        );
    }
    Ok(())
}
