//! The simplex kernel on a small LP and on a zero-sum game.

use stationary_nash::lp::{solve_lp, solve_zero_sum, LinearProgram, Relation, Sense};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // max 3a + 2b  s.t.  a + b <= 4,  a + 3b <= 6,  a <= 3
    let mut lp = LinearProgram::new(vec![3.0, 2.0], Sense::Maximize);
    lp.add(vec![1.0, 1.0], Relation::Le, 4.0);
    lp.add(vec![1.0, 3.0], Relation::Le, 6.0);
    lp.set_bounds(0, 0.0, Some(3.0));
    let sol = solve_lp(&lp)?;
    println!("{:?}: x = {:?}, objective {} (dual {}), {} pivots", sol.status, sol.primal, sol.objective, sol.dual_objective, sol.pivots);

    let rps = vec![vec![0.5, 0.0, 1.0], vec![1.0, 0.5, 0.0], vec![0.0, 1.0, 0.5]];
    let zs = solve_zero_sum(&rps)?;
    println!("rock-paper-scissors: value {:.6}, x = {:?}, y = {:?}", zs.value, zs.x.probs(), zs.y.probs());
    Ok(())
}
