mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use stationary_nash::generator::tight_3x3;
use stationary_nash::lp::{solve_lp, solve_zero_sum, LinearProgram, LpStatus, Relation, Sense};

/// Best objective over all basic feasible points of a small LP with box bounds.
fn vertex_oracle(lp: &LinearProgram, hi: f64) -> f64 {
    let n = lp.num_vars();
    let mut rows: Vec<(Vec<f64>, f64)> = lp.constraints.iter().map(|c| (c.coeffs.clone(), c.rhs)).collect();
    for i in 0..n {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        rows.push((e.clone(), 0.0));
        rows.push((e, hi));
    }
    let feasible = |x: &[f64]| {
        x.iter().all(|&v| v >= -1e-9 && v <= hi + 1e-9)
            && lp.constraints.iter().all(|c| {
                let lhs: f64 = c.coeffs.iter().zip(x).map(|(a, b)| a * b).sum();
                match c.rel {
                    Relation::Le => lhs <= c.rhs + 1e-9,
                    Relation::Ge => lhs >= c.rhs - 1e-9,
                    Relation::Eq => (lhs - c.rhs).abs() <= 1e-9,
                }
            })
    };
    let sign = if lp.sense == Sense::Maximize { 1.0 } else { -1.0 };
    let mut best = f64::NEG_INFINITY;
    let k = rows.len();
    let mut idx: Vec<usize> = (0..n).collect();
    loop {
        let a: Matrix = idx.iter().map(|&i| rows[i].0.clone()).collect();
        let b: Vec<f64> = idx.iter().map(|&i| rows[i].1).collect();
        if let Some(x) = solve_linear(a, b) {
            if feasible(&x) {
                let v: f64 = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
                best = best.max(sign * v);
            }
        }
        // next combination
        let mut p = n;
        loop {
            if p == 0 {
                return sign * best;
            }
            p -= 1;
            if idx[p] < k - n + p {
                idx[p] += 1;
                for q in p + 1..n {
                    idx[q] = idx[q - 1] + 1;
                }
                break;
            }
        }
    }
}

fn random_lp(seed: u64) -> (LinearProgram, f64) {
    let mut rng = rng(seed);
    let n = rng.gen_range(2..=3);
    let hi = 3.0;
    let x0: Vec<f64> = (0..n).map(|_| rng.gen_range(0.2..2.0)).collect();
    let sense = if rng.gen::<bool>() { Sense::Maximize } else { Sense::Minimize };
    let mut lp = LinearProgram::new((0..n).map(|_| rng.gen_range(-1.0..1.0)).collect(), sense);
    for _ in 0..rng.gen_range(1..=4) {
        let a: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let lhs: f64 = a.iter().zip(&x0).map(|(p, q)| p * q).sum();
        match rng.gen_range(0..3) {
            0 => lp.add(a, Relation::Le, lhs + rng.gen_range(0.0..0.5)),
            1 => lp.add(a, Relation::Ge, lhs - rng.gen_range(0.0..0.5)),
            _ => lp.add(a, Relation::Eq, lhs),
        };
    }
    for i in 0..n {
        lp.set_bounds(i, 0.0, Some(hi));
    }
    (lp, hi)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn strong_duality_and_vertex_oracle(seed in any::<u64>()) {
        let (lp, hi) = random_lp(seed);
        let sol = solve_lp(&lp).unwrap();
        prop_assert_eq!(sol.status, LpStatus::Optimal);
        prop_assert!((sol.objective - sol.dual_objective).abs() <= 1e-7 * (1.0 + sol.objective.abs()));
        for c in &lp.constraints {
            let lhs: f64 = c.coeffs.iter().zip(&sol.primal).map(|(a, b)| a * b).sum();
            let ok = match c.rel {
                Relation::Le => lhs <= c.rhs + 1e-8,
                Relation::Ge => lhs >= c.rhs - 1e-8,
                Relation::Eq => (lhs - c.rhs).abs() <= 1e-8,
            };
            prop_assert!(ok);
        }
        prop_assert!(sol.primal.iter().all(|&v| v >= -1e-8 && v <= hi + 1e-8));
        let oracle = vertex_oracle(&lp, hi);
        prop_assert!((sol.objective - oracle).abs() < 1e-7, "simplex {} vs vertices {}", sol.objective, oracle);
    }

    #[test]
    fn zero_sum_saddle_and_scaling(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let (m, n) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
        let a = random_matrix(&mut rng, m, n);
        let sol = solve_zero_sum(&a).unwrap();
        let val = |x: &[f64], y: &[f64]| -> f64 { (0..m).map(|i| (0..n).map(|j| x[i] * a[i][j] * y[j]).sum::<f64>()).sum() };
        for _ in 0..1000 {
            let y2 = random_strategy(&mut rng, n);
            let x2 = random_strategy(&mut rng, m);
            prop_assert!(val(sol.x.probs(), y2.probs()) >= sol.value - 1e-8);
            prop_assert!(val(x2.probs(), sol.y.probs()) <= sol.value + 1e-8);
        }
        let k = rng.gen_range(0.1..10.0);
        let scaled: Matrix = a.iter().map(|r| r.iter().map(|v| v * k).collect()).collect();
        let s2 = solve_zero_sum(&scaled).unwrap();
        prop_assert!((s2.value - k * sol.value).abs() < 1e-8 * (1.0 + k));
        prop_assert_eq!(s2.x.support(1e-9), sol.x.support(1e-9));
        prop_assert_eq!(s2.y.support(1e-9), sol.y.support(1e-9));
    }
}

#[test]
fn matching_pennies() {
    let s = solve_zero_sum(&vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
    assert!((s.value - 0.5).abs() < 1e-12);
    assert!((s.x.probs()[0] - 0.5).abs() < 1e-12 && (s.y.probs()[0] - 0.5).abs() < 1e-12);
}

#[test]
fn one_by_one() {
    let s = solve_zero_sum(&vec![vec![1.0]]).unwrap();
    assert_eq!(s.value, 1.0);
    assert_eq!(s.x.probs(), &[1.0]);
}

#[test]
fn tight_game_row_matrix_against_support_enumeration() {
    let g = tight_3x3().game;
    let s = solve_zero_sum(g.r()).unwrap();
    let mut rng = rng(1);
    // nudge off the tie structure only for the oracle; the value is continuous
    let jitter: Matrix = g.r().iter().map(|r| r.iter().map(|v| v + 1e-13 * rng.gen::<f64>()).collect()).collect();
    assert!((s.value - zero_sum_value_oracle(&jitter)).abs() < 1e-9);
}

#[test]
fn random_zero_sum_values_against_support_enumeration() {
    let mut rng = rng(3);
    for _ in 0..200 {
        let a = random_matrix(&mut rng, 3, 3);
        let s = solve_zero_sum(&a).unwrap();
        assert!((s.value - zero_sum_value_oracle(&a)).abs() < 1e-9);
    }
}
