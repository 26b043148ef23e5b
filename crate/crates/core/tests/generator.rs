mod common;

use common::*;
use rand::Rng;
use stationary_nash::game::{regrets, Game, MixedStrategy, Profile};
use stationary_nash::generator::*;

const B: f64 = 0.3393321225923932;
const LAMBDA0: f64 = 0.8128147920446436;
const MU0: f64 = 0.5825222050430692;
const RHO_STAR: f64 = 0.4174777894221141;

fn b_oracle(steps: usize) -> f64 {
    let mut best = 0.0f64;
    for i in 1..steps {
        for j in 1..=steps {
            let (s, t) = (i as f64 / steps as f64, j as f64 / steps as f64);
            best = best.max((s * t / (s + t)).min((1.0 - s) / (1.0 + t - s)));
        }
    }
    best
}

/// One-sided difference quotients of `f` toward random profiles.
fn worst_quotient(g: &Game, p: &Profile, samples: usize, seed: u64) -> f64 {
    let mut rng = rng(seed);
    let f0 = f_oracle(g, p);
    let h = 1e-7;
    let mut worst = f64::INFINITY;
    for k in 0..samples {
        let q = if k < g.m() * g.n() {
            Profile::pure(g, k / g.n(), k % g.n())
        } else {
            random_profile(&mut rng, g)
        };
        worst = worst.min((f_oracle(g, &p.lerp(&q, h)) - f0) / h);
    }
    worst
}

#[test]
fn constants_match_published_values() {
    let k = constants();
    assert!((k.b - B).abs() < 1e-12);
    assert!((k.lambda0 - LAMBDA0).abs() < 1e-9);
    assert!((k.mu0 - MU0).abs() < 1e-9);
    assert!((k.rho_star() - RHO_STAR).abs() < 1e-9);
    let (p, q) = b_objective(k.mu0, k.lambda0);
    assert!((p - k.b).abs() < 1e-12 && (q - k.b).abs() < 1e-12);
    assert_eq!(solve_b(), k);
}

#[test]
fn constant_b_against_grid_search() {
    let g = b_oracle(2000);
    assert!(g <= B + 1e-12);
    assert!(B - g < 1e-3);
}

#[test]
fn tight_3x3_is_tight() {
    let t = tight_3x3();
    let checks = verify_tight(&t.game, &t.input(), 200);
    assert!(checks.passed, "{:?}", checks.failures);
    let r = regrets_oracle(t.game.r(), t.game.c(), t.profile.x.probs(), t.profile.y.probs());
    assert!((r.0 - B).abs() < 1e-12 && (r.1 - B).abs() < 1e-12);
    assert!(worst_quotient(&t.game, &t.profile, 300, 1) > -1e-4);
}

#[test]
fn tight_m_n_pattern() {
    let t3 = tight_m_n(3, 3).unwrap();
    let r = t3.game.r();
    assert_eq!(r[0][0], 0.1);
    assert_eq!(r[1][1], constants().lambda0);
    assert_eq!(r[2][1], 1.0);
    for (m, n) in [(3, 3), (4, 5), (6, 3), (7, 7)] {
        let t = tight_m_n(m, n).unwrap();
        let checks = verify_tight(&t.game, &t.input(), 200);
        assert!(checks.passed, "{m}x{n}: {:?}", checks.failures);
        assert!((f_oracle(&t.game, &t.profile) - B).abs() < 1e-12);
        assert!(worst_quotient(&t.game, &t.profile, 200, m as u64) > -1e-4);
    }
    assert!(tight_m_n(2, 5).is_err());
}

#[test]
fn perturbed_entry_breaks_tightness() {
    let t = tight_3x3();
    let mut r = t.game.r().clone();
    r[0][0] = 0.2;
    let g = Game::new(r, t.game.c().clone()).unwrap();
    let checks = verify_tight(&g, &t.input(), 200);
    let r = regrets_oracle(g.r(), g.c(), t.profile.x.probs(), t.profile.y.probs());
    assert!((r.0 - (B - 0.1)).abs() < 1e-12 && (r.1 - B).abs() < 1e-12);
    // f = max(fR, fC) is still b; the imbalance breaks stationarity
    assert!(checks.f_equals_b);
    assert!(!checks.stationary);
    assert!(!checks.passed);
}

#[test]
fn no_dominated_strategies() {
    let t = tight_no_dominated();
    assert!(verify_tight(&t.game, &t.input(), 200).passed);
    let (r, c) = (t.game.r(), t.game.c());
    let dominated_row = |a: usize, b: usize| (0..4).all(|j| r[a][j] <= r[b][j]);
    let dominated_col = |a: usize, b: usize| (0..4).all(|i| c[i][a] <= c[i][b]);
    for a in 0..4 {
        for b in 0..4 {
            if a != b {
                assert!(!dominated_row(a, b), "row {a} by {b}");
                assert!(!dominated_col(a, b), "col {a} by {b}");
            }
        }
    }
}

#[test]
fn half_sp_regrets() {
    let t = half_sp();
    let r = regrets(&t.game, &t.profile).unwrap();
    assert!((r.f_r - 0.5).abs() < 1e-15 && (r.f_c - 0.5).abs() < 1e-15);
    assert!(worst_quotient(&t.game, &t.profile, 100, 5) > -1e-4);
}

#[test]
fn full_support_input_is_infeasible() {
    let input = GeneratorInput {
        x_star: MixedStrategy::uniform(3),
        y_star: MixedStrategy::pure(3, 0),
        w_star: MixedStrategy::pure(3, 2),
        z_star: MixedStrategy::pure(3, 2),
    };
    assert!(generate_tight(&input, &GeneratorOptions::default(), &mut rng(0)).unwrap().is_no());
}

#[test]
fn nested_supports_are_infeasible() {
    let mut rng = rng(17);
    for k in 3..=7 {
        for _ in 0..20 {
            let input = sample_inputs(k, k, Restriction::Nested, &mut rng).unwrap();
            assert_eq!(tight_feasible(&input, false).unwrap(), None);
        }
    }
}

#[test]
fn sampled_supports_respect_restriction() {
    let mut rng = rng(3);
    for _ in 0..200 {
        let (m, n) = (rng.gen_range(2..7), rng.gen_range(2..7));
        let d = sample_inputs(m, n, Restriction::Disjoint, &mut rng).unwrap();
        let (sx, sw) = (d.x_star.support(0.0), d.w_star.support(0.0));
        let (sy, sz) = (d.y_star.support(0.0), d.z_star.support(0.0));
        assert!(sx.iter().all(|i| !sw.contains(i)) && sy.iter().all(|j| !sz.contains(j)));
        assert!(sx.len() < m && sy.len() < n);

        let s = sample_inputs(m, n, Restriction::Nested, &mut rng).unwrap();
        assert!(s.w_star.support(0.0).iter().all(|i| s.x_star.support(0.0).contains(i)));
        assert!(s.z_star.support(0.0).iter().all(|j| s.y_star.support(0.0).contains(j)));

        let s = sample_inputs(m, n, Restriction::Intersecting, &mut rng).unwrap();
        assert!(s.w_star.support(0.0).iter().any(|i| s.x_star.support(0.0).contains(i)));

        let p = sample_inputs_with(m, n, Restriction::None, true, &mut rng).unwrap();
        assert_eq!(p.w_star.support(0.0).len(), 1);
        assert_eq!(p.z_star.support(0.0).len(), 1);
    }
}

#[test]
fn generated_games_are_tight() {
    let mut rng = rng(2024);
    let mut total = 0;
    for size in 3..=5 {
        let mut got = 0;
        let mut attempts = 0;
        while got < 20 && attempts < 500 {
            attempts += 1;
            let input = sample_inputs(size, size, Restriction::Disjoint, &mut rng).unwrap();
            let opts = GeneratorOptions { first_only: true, ..Default::default() };
            for inst in generate_tight(&input, &opts, &mut rng).unwrap().instances() {
                let checks = verify_tight(&inst.game, &inst.input, 100);
                assert!(checks.passed, "{:?}", checks.failures);
                let p = inst.input.profile();
                let r = regrets_oracle(inst.game.r(), inst.game.c(), p.x.probs(), p.y.probs());
                assert!((r.0 - B).abs() < 1e-6 && (r.1 - B).abs() < 1e-6);
                assert!(worst_quotient(&inst.game, &p, 60, got as u64) > -1e-3);
                assert!(inst.game.r().iter().chain(inst.game.c()).flatten().all(|&v| (0.0..=1.0).contains(&v)));
                got += 1;
            }
        }
        assert_eq!(got, 20, "{size}x{size}");
        total += got;
    }
    assert_eq!(total, 60);
}

#[test]
fn lambda_intersect_square_minimum() {
    let mut rng = rng(99);
    let mut seen = 0;
    for _ in 0..300 {
        let input = sample_inputs(4, 4, Restriction::Disjoint, &mut rng).unwrap();
        let opts = GeneratorOptions { lambda_intersect: true, first_only: true, ..Default::default() };
        for inst in generate_tight(&input, &opts, &mut rng).unwrap().instances() {
            let mut lo = f64::INFINITY;
            for a in 0..=40 {
                for b in 0..=40 {
                    lo = lo.min(f_oracle(&inst.game, &square_point(&inst.input, a as f64 / 40.0, b as f64 / 40.0)));
                }
            }
            assert!(lo >= B - 1e-6, "square minimum {lo}");
            seen += 1;
        }
        if seen >= 5 {
            break;
        }
    }
    assert!(seen > 0);
}

#[test]
fn generation_is_reproducible() {
    let run = |seed| {
        let mut rng = rng(seed);
        let input = loop {
            let i = sample_inputs(3, 4, Restriction::Disjoint, &mut rng).unwrap();
            if tight_feasible(&i, false).unwrap().is_some() {
                break i;
            }
        };
        generate_tight(&input, &GeneratorOptions::default(), &mut rng).unwrap().instances()
    };
    assert_eq!(run(8), run(8));
}
