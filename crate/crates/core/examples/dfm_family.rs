//! The 1/3-adjustment on its tight game and on a family approaching 1/3.

use stationary_nash::dfm::{dfm_finish, dfm_solve_with};
use stationary_nash::descent::DescentOptions;
use stationary_nash::generator::{dfm_family, dfm_tight};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let inst = dfm_tight();
    let opts = DescentOptions { dual_hint: Some(inst.dual.clone()), ..DescentOptions::with_delta(1e-9) };
    let r = dfm_solve_with(&inst.game, &inst.profile, &opts)?;
    println!("tight game: case {} branch {:?}, f = {:.12}", r.trace.case, r.trace.branch, r.f);

    println!("{:>6} {:>14} {:>14}", "eps", "f", "closed form");
    for eps in [0.3, 0.1, 0.03, 0.01, 0.003] {
        let inst = dfm_family(eps)?;
        let r = dfm_finish(&inst.game, inst.stationary_point()?);
        let closed = ((1.0 - 9.0 * eps / (2.0 + 3.0 * eps)) * (1.0 / 3.0 + eps / 2.0)).max(1.0 / 3.0 - eps);
        println!("{eps:>6} {:>14.10} {closed:>14.10}  case {}", r.f, r.trace.case);
    }
    Ok(())
}
