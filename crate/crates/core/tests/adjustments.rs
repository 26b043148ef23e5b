mod common;

use common::*;
use rand::Rng;
use stationary_nash::adjustments::*;
use stationary_nash::descent::{find_stationary, DescentOptions, DualSolution, StationaryPoint};
use stationary_nash::game::{regrets, regrets_of, Game, MixedStrategy, Profile, SUPPORT_TOL};
use stationary_nash::generator::{constants, dfm_family, dfm_tight, half_sp, tight_3x3};
use stationary_nash::harness::sample_tight_games;
use stationary_nash::generator::Restriction;
use stationary_nash::linalg::suppmax;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn tight_sp() -> (Game, StationaryPoint) {
    let t = tight_3x3();
    let sp = t.stationary_point().unwrap();
    (t.game, sp)
}

/// Stationary points of random games (near-exact descent) and of generated tight games.
fn stationary_points() -> Vec<(Game, StationaryPoint)> {
    let mut out = Vec::new();
    let mut rng = rng(2024);
    for _ in 0..150 {
        let (m, n) = (rng.gen_range(2..7), rng.gen_range(2..7));
        let g = random_game(&mut rng, m, n);
        let p0 = random_profile(&mut rng, &g);
        let sp = find_stationary(&g, &p0, 1e-9, None).unwrap();
        out.push((g, sp));
    }
    for size in 3..=5 {
        for t in sample_tight_games(size, size, 10, Restriction::Disjoint, 9).unwrap() {
            let sp = t.stationary_point().unwrap();
            out.push((t.game, sp));
        }
    }
    out
}

#[test]
fn restricted_heights() {
    let k = constants();
    let (g, sp) = tight_sp();
    let (l, m) = lambda_mu(&g, &sp);
    assert!(close(l, k.lambda0, 1e-12) && close(m, k.mu0, 1e-12));

    let h = half_sp();
    let sp = h.stationary_point().unwrap();
    assert_eq!(lambda_mu(&h.game, &sp), (1.0, 1.0));

    let (g, mut sp) = tight_sp();
    sp.dual.w = sp.profile.x.clone();
    assert_eq!(lambda_mu(&g, &sp).0, 0.0);
}

#[test]
fn heights_of_canonical_points() {
    let k = constants();
    let (g, sp) = tight_sp();
    let (l, m) = lambda_star_mu_star(&g, &sp);
    assert!(close(l, k.lambda0, 1e-12) && close(m, k.mu0, 1e-12));

    let t = dfm_tight();
    let (l, m) = lambda_star_mu_star(&t.game, &t.stationary_point().unwrap());
    assert!(close(l, 0.5, 1e-15) && close(m, 1.0, 1e-15));

    for eps in [0.3, 0.1, 0.01] {
        let t = dfm_family(eps).unwrap();
        let (l, m) = lambda_star_mu_star(&t.game, &t.stationary_point().unwrap());
        assert!(close(l, 2.0 / 3.0 - eps / 2.0, 1e-12) && close(m, 2.0 / 3.0 + eps, 1e-12));
    }
}

#[test]
fn method_one_on_tight_game() {
    let k = constants();
    let (g, sp) = tight_sp();
    let out = adjust_ts(&g, &sp);
    let weight = 1.0 / (1.0 + k.lambda0 - k.mu0);
    assert!(close(out.profile.x.probs()[2], weight, 1e-12));
    assert!(close(weight, 0.8128, 1e-4));
    assert_eq!(&out.profile.y, sp.z());
    let (fr, fc) = regrets_oracle(g.r(), g.c(), out.profile.x.probs(), out.profile.y.probs());
    assert!(close(fr.max(fc), k.b, 1e-9));
}

#[test]
fn method_one_equal_heights_goes_to_the_corner() {
    let h = half_sp();
    let sp = h.stationary_point().unwrap();
    let out = adjust_ts(&h.game, &sp);
    assert_eq!(out.profile, Profile::new(MixedStrategy::pure(2, 1), MixedStrategy::pure(2, 1)));
    assert_eq!(out.f, 0.0);
}

#[test]
fn methods_two_and_three_on_tight_game() {
    let k = constants();
    let (g, sp) = tight_sp();
    let (a, f) = alpha_star(&g, &sp);
    assert!(close(a, 1.0 / (1.0 + k.lambda0 - k.mu0), 1e-12));
    assert!(close(f, k.b, 1e-9));
    let m2 = adjust_boundary_min(&g, &sp);
    let m3 = adjust_linear(&g, &sp);
    assert!(close(m2.f, k.b, 1e-9));
    assert!(m2.profile.dist(&m3.profile) < 1e-12);
    let (p, _) = p_q_star(&g, &sp);
    assert!(close(p, 1.0 / (1.0 + k.lambda0 - k.mu0), 1e-12));
    assert!(close(m3.f, (1.0 - k.mu0) / (1.0 + k.lambda0 - k.mu0), 1e-9));
}

#[test]
fn degenerate_square_at_an_equilibrium() {
    let g = tight_3x3().game;
    let p = Profile::pure(&g, 1, 1);
    let d = DualSolution { rho: 0.5, w: p.x.clone(), z: p.y.clone() };
    let sp = StationaryPoint::from_parts(&g, p.clone(), d).unwrap();
    let m2 = adjust_boundary_min(&g, &sp);
    assert_eq!(m2.profile, p);
    assert_eq!(m2.f, 0.0);
    let scan = rectangle_scan(&g, &sp, 20);
    assert_eq!((scan.min, scan.alpha, scan.beta), (0.0, 0.0, 0.0));
}

#[test]
fn method_three_zero_numerator() {
    // x* = e1 is a best response to z* = e1, so fR(x*, z*) = 0
    let g = Game::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]], vec![vec![0.5, 0.5], vec![0.0, 1.0]]).unwrap();
    let p = Profile::pure(&g, 0, 1);
    let d = DualSolution { rho: 0.5, w: MixedStrategy::pure(2, 1), z: MixedStrategy::pure(2, 0) };
    let sp = StationaryPoint::from_parts(&g, p, d).unwrap();
    assert_eq!(regrets_of(&g, sp.x().probs(), sp.z().probs()).f_r, 0.0);
    let (pstar, _) = p_q_star(&g, &sp);
    assert_eq!(pstar, 0.0);
}

#[test]
fn ts_pipeline_on_canonical_games() {
    let k = constants();
    let t = tight_3x3();
    let opts = DescentOptions { dual_hint: Some(t.dual.clone()), ..DescentOptions::with_delta(1e-9) };
    let r = ts_solve_with(&t.game, &t.profile, &opts).unwrap();
    assert!(close(r.f, k.b, 1e-6));
    assert!(rectangle_scan(&t.game, &r.stationary, 200).min >= k.b - 1e-9);

    let t = dfm_tight();
    let opts = DescentOptions { dual_hint: Some(t.dual.clone()), ..DescentOptions::with_delta(1e-9) };
    let r = ts_solve_with(&t.game, &t.profile, &opts).unwrap();
    assert!(close(r.stationary.f, 1.0 / 3.0, 1e-12));
    assert!(close(r.f, 1.0 / 3.0, 1e-12));
    assert!(r.all_f().iter().all(|&f| f >= 1.0 / 3.0 - 1e-12));
}

#[test]
fn ts_answer_is_an_equilibrium_when_descent_finds_one() {
    let g = tight_3x3().game;
    let r = ts_solve(&g, &Profile::pure(&g, 1, 1), 1e-6).unwrap();
    assert!(r.f <= 1e-6);
}

#[test]
fn adjustment_properties_on_stationary_points() {
    let mut rng = rng(99);
    let mut column_cases = 0;
    for (g, sp) in stationary_points() {
        if !(sp.dual.rho > 0.0 && sp.dual.rho < 1.0) || sp.f < 1e-9 {
            continue;
        }
        let rep = ts_adjust(&g, sp.clone());
        // ordering
        assert!(rep.method2.f <= rep.method1.f + 1e-9, "M2 {} M1 {}", rep.method2.f, rep.method1.f);
        assert!(rep.method2.f <= rep.method3.f + 1e-9);
        assert!((rep.method1.f - regrets(&g, &rep.method1.profile).unwrap().f).abs() < 1e-10);

        let c = corner_regrets(&g, &sp);
        // stretching bounds
        for _ in 0..1000 {
            let (p, q) = (rng.gen::<f64>(), rng.gen::<f64>());
            assert!(square_regrets(&g, &sp, p, 1.0).f_c <= p * c.wz.f_c + 1e-9);
            assert!(square_regrets(&g, &sp, 1.0, q).f_r <= q * c.wz.f_r + 1e-9);
        }
        // monotone and linear sections
        let ts: Vec<f64> = (0..100).map(|k| k as f64 / 99.0).collect();
        for &fixed in &[0.0, 0.37, 1.0] {
            let along_a: Vec<_> = ts.iter().map(|&a| square_regrets(&g, &sp, a, fixed)).collect();
            let along_b: Vec<_> = ts.iter().map(|&b| square_regrets(&g, &sp, fixed, b)).collect();
            for w in along_a.windows(2) {
                assert!(w[1].f_c >= w[0].f_c - 1e-9);
            }
            for w in along_b.windows(2) {
                assert!(w[1].f_r >= w[0].f_r - 1e-9);
            }
            for (k, &t) in ts.iter().enumerate() {
                let chord_r = (1.0 - t) * along_a[0].f_r + t * along_a[99].f_r;
                let chord_c = (1.0 - t) * along_b[0].f_c + t * along_b[99].f_c;
                assert!((along_a[k].f_r - chord_r).abs() <= 1e-9);
                assert!((along_b[k].f_c - chord_c).abs() <= 1e-9);
            }
        }
        // minimum on Γ₁
        for &t in &ts {
            assert!(square_regrets(&g, &sp, t, 0.0).f >= sp.f - 1e-9);
            assert!(square_regrets(&g, &sp, 0.0, t).f >= sp.f - 1e-9);
        }
        // estimate for the linear intersection
        if c.wz.f_c > c.wz.f_r {
            column_cases += 1;
            let (l, m) = (sp.lambda_star, sp.mu_star);
            assert!(rep.method3.f <= (1.0 - m) / (1.0 + l - m) + 1e-9, "M3 {} bound {}", rep.method3.f, (1.0 - m) / (1.0 + l - m));
        }
    }
    assert!(column_cases > 0);
}

#[test]
fn linear_intersection_matches_boundary_min_when_linear() {
    let mut matched = 0;
    for t in sample_tight_games(4, 4, 30, Restriction::Disjoint, 4).unwrap() {
        let sp = t.stationary_point().unwrap();
        let c = corner_regrets(&t.game, &sp);
        let s_c_x = suppmax(&t.game.col_payoffs(sp.x().probs()), SUPPORT_TOL);
        let s_c_w = suppmax(&t.game.col_payoffs(sp.w().probs()), SUPPORT_TOL);
        if c.wz.f_c > c.wz.f_r && s_c_x.iter().any(|j| s_c_w.contains(j)) {
            let m2 = adjust_boundary_min(&t.game, &sp);
            let m3 = adjust_linear(&t.game, &sp);
            assert!(m2.profile.dist(&m3.profile) < 1e-7, "{:?} vs {:?}", m2.profile, m3.profile);
            matched += 1;
        }
    }
    assert!(matched > 0);
}

#[test]
fn generated_tight_ordering_4x4() {
    for t in sample_tight_games(4, 4, 20, Restriction::Disjoint, 12).unwrap() {
        let rep = ts_adjust(&t.game, t.stationary_point().unwrap());
        assert!(rep.method2.f <= rep.method1.f + 1e-9);
        assert!(rep.method2.f <= rep.method3.f + 1e-9);
    }
}
