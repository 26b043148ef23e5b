//! The TS pipeline on the 3×3 tight game: every adjustment returns `b`.

use stationary_nash::adjustments::{rectangle_scan, ts_solve_with};
use stationary_nash::descent::DescentOptions;
use stationary_nash::generator::{constants, tight_3x3, tight_m_n};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let b = constants().b;
    for (name, inst) in [("3x3", tight_3x3()), ("5x7", tight_m_n(5, 7)?)] {
        let opts = DescentOptions { dual_hint: Some(inst.dual.clone()), ..DescentOptions::with_delta(1e-9) };
        let report = ts_solve_with(&inst.game, &inst.profile, &opts)?;
        let [s, m1, m2, m3] = report.all_f();
        println!("{name}: stationary {s:.9}  method1 {m1:.9}  method2 {m2:.9}  method3 {m3:.9}");
        println!("{name}: lambda* {:.6}  mu* {:.6}  answer {:.9} (b = {b:.9})", report.stationary.lambda_star, report.stationary.mu_star, report.f);
        let scan = rectangle_scan(&inst.game, &report.stationary, 200);
        println!("{name}: min f over the square on a 200 grid = {:.9} at ({:.3}, {:.3})", scan.min, scan.alpha, scan.beta);
    }
    Ok(())
}
