//! Descent to a stationary point, then a check of the stationarity conditions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stationary_nash::descent::{find_stationary, verify_stationary};
use stationary_nash::game::{Game, Profile};
use stationary_nash::generator::half_sp;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let inst = half_sp();
    let sp = find_stationary(&inst.game, &Profile::pure(&inst.game, 0, 0), 1e-9, None)?;
    let check = verify_stationary(&inst.game, &sp, 1e-9);
    println!("2x2 game: f = {:.6} after {} iterations, stationary: {}", sp.f, sp.iterations, check.passed);

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (m, n) = (6, 5);
    let mut draw = || (0..m).map(|_| (0..n).map(|_| rng.gen::<f64>()).collect()).collect::<Vec<Vec<f64>>>();
    let g = Game::new(draw(), draw())?;
    let sp = find_stationary(&g, &Profile::uniform(&g), 1e-6, None)?;
    println!("random 6x5 game: f = {:.6} after {} iterations", sp.f, sp.iterations);
    for (k, f) in sp.history.iter().enumerate() {
        println!("  step {k:>3}: f = {f:.6}");
    }
    println!("dual rho = {:.4}, lambda* = {:.4}, mu* = {:.4}", sp.dual.rho, sp.lambda_star, sp.mu_star);
    Ok(())
}
