//! Solves for the worst-case ratio `b` and the heights where it is attained.

use stationary_nash::generator::{b_objective, solve_b};

fn main() {
    let k = solve_b();
    println!("b       = {:.16}", k.b);
    println!("lambda0 = {:.16}", k.lambda0);
    println!("mu0     = {:.16}", k.mu0);
    println!("rho*    = {:.16}", k.rho_star());
    let (lhs, rhs) = b_objective(k.mu0, k.lambda0);
    println!("both pieces at the optimum: {lhs:.12} {rhs:.12}");
}
