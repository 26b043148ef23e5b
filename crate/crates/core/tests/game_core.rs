mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use stationary_nash::game::{is_eps_ne, normalize_game, regrets, supports, Game, MixedStrategy, Profile};
use stationary_nash::generator::{constants, tight_3x3};

fn e(k: usize, i: usize) -> MixedStrategy {
    MixedStrategy::pure(k, i)
}

#[test]
fn tight_game_regrets() {
    let g = tight_3x3().game;
    let b = constants().b;
    let r = regrets(&g, &Profile::new(e(3, 0), e(3, 0))).unwrap();
    assert!((r.f_r - b).abs() < 1e-12 && (r.f_c - b).abs() < 1e-12 && (r.f - b).abs() < 1e-12);

    let r = regrets(&g, &Profile::new(e(3, 1), e(3, 1))).unwrap();
    assert_eq!(r.f, 0.0);

    let u = Profile::uniform(&g);
    let r = regrets(&g, &u).unwrap();
    let (fr, fc) = regrets_oracle(g.r(), g.c(), u.x.probs(), u.y.probs());
    assert!((r.f_r - fr).abs() < 1e-12 && (r.f_c - fc).abs() < 1e-12);
}

#[test]
fn tight_game_supports() {
    let g = tight_3x3().game;
    let s = supports(&g, &Profile::new(e(3, 0), e(3, 0)), 1e-9).unwrap();
    assert_eq!(s.s_r, vec![1, 2]);
    assert_eq!(s.s_c, vec![1, 2]);
    assert_eq!(s.supp_x, vec![0]);
}

#[test]
fn eps_ne_thresholds() {
    let g = tight_3x3().game;
    assert!(is_eps_ne(&g, &Profile::new(e(3, 1), e(3, 1)), 0.0).unwrap());
    let p = Profile::new(e(3, 0), e(3, 0));
    assert!(!is_eps_ne(&g, &p, 0.3).unwrap());
    assert!(is_eps_ne(&g, &p, 0.34).unwrap());
}

#[test]
fn dimension_mismatch_is_an_error() {
    let g = tight_3x3().game;
    assert!(regrets(&g, &Profile::new(e(2, 0), e(3, 0))).is_err());
}

#[test]
fn dominated_column_support_scan() {
    let mut rng = rng(5);
    for _ in 0..50 {
        let g = random_game(&mut rng, 4, 3);
        for j in 0..3 {
            let s = supports(&g, &Profile::new(e(4, 0), e(3, j)), 0.0).unwrap();
            let col: Vec<f64> = (0..4).map(|i| g.r()[i][j]).collect();
            let top = col.iter().cloned().fold(f64::MIN, f64::max);
            let scan: Vec<usize> = (0..4).filter(|&i| col[i] == top).collect();
            assert_eq!(s.s_r, scan);
        }
    }
}

#[test]
fn exact_rational_supports_match_scan() {
    let r = vec![vec![0.25, 0.5, 0.5], vec![0.5, 0.25, 0.5], vec![0.5, 0.5, 0.25]];
    let g = Game::new(r.clone(), r).unwrap();
    let y = MixedStrategy::new(vec![0.5, 0.5, 0.0]).unwrap();
    let s = supports(&g, &Profile::new(e(3, 0), y), 0.0).unwrap();
    // Ry = (0.375, 0.375, 0.5)
    assert_eq!(s.s_r, vec![2]);
}

#[test]
fn ne_from_support_enumeration_has_zero_regret() {
    let mut rng = rng(17);
    let mut checked = 0;
    for _ in 0..200 {
        let (m, n) = (rng.gen_range(2..=3), rng.gen_range(2..=3));
        let g = random_game(&mut rng, m, n);
        for (x, y) in support_enumeration(g.r(), g.c()) {
            let p = Profile::new(MixedStrategy::new(x).unwrap(), MixedStrategy::new(y).unwrap());
            assert!(regrets(&g, &p).unwrap().f < 1e-9);
            checked += 1;
        }
    }
    assert!(checked >= 200);
}


fn game_strategy() -> impl Strategy<Value = (Game, Profile)> {
    (1usize..6, 1usize..6, any::<u64>()).prop_map(|(m, n, seed)| {
        let mut r = rng(seed);
        let g = random_game(&mut r, m, n);
        let p = random_profile(&mut r, &g);
        (g, p)
    })
}

proptest! {
    #[test]
    fn regrets_are_bounded((g, p) in game_strategy()) {
        let r = regrets(&g, &p).unwrap();
        prop_assert!(r.f_r >= -1e-12 && r.f_r <= 1.0);
        prop_assert!(r.f_c >= -1e-12 && r.f_c <= 1.0);
        prop_assert_eq!(r.f, r.f_r.max(r.f_c));
        let (fr, fc) = regrets_oracle(g.r(), g.c(), p.x.probs(), p.y.probs());
        prop_assert!((r.f_r - fr).abs() < 1e-12 && (r.f_c - fc).abs() < 1e-12);
        prop_assert!(is_eps_ne(&g, &p, 1.0).unwrap());
    }

    #[test]
    fn renormalizing_a_normalized_game_changes_nothing((g, p) in game_strategy()) {
        let g2 = normalize_game(g.r(), g.c()).unwrap();
        let h = normalize_game(g2.r(), g2.c()).unwrap();
        prop_assert_eq!(&h, &g2);
        prop_assert_eq!(regrets(&h, &p).unwrap(), regrets(&g2, &p).unwrap());
    }

    #[test]
    fn strategies_land_on_the_simplex(v in prop::collection::vec(0.0f64..10.0, 1..8)) {
        prop_assume!(v.iter().sum::<f64>() > 1e-6);
        let s = MixedStrategy::new(v).unwrap();
        prop_assert!((s.probs().iter().sum::<f64>() - 1.0).abs() < 1e-9);
        prop_assert!(s.probs().iter().all(|&p| p >= 0.0));
    }
}
