#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stationary_nash::game::{Game, MixedStrategy, Profile};

pub type Matrix = Vec<Vec<f64>>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix<R: Rng>(rng: &mut R, m: usize, n: usize) -> Matrix {
    (0..m).map(|_| (0..n).map(|_| rng.gen::<f64>()).collect()).collect()
}

pub fn random_game<R: Rng>(rng: &mut R, m: usize, n: usize) -> Game {
    let r = random_matrix(rng, m, n);
    let c = random_matrix(rng, m, n);
    Game::new(r, c).unwrap()
}

pub fn random_strategy<R: Rng>(rng: &mut R, k: usize) -> MixedStrategy {
    let v: Vec<f64> = (0..k).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    MixedStrategy::new(v).unwrap()
}

pub fn random_profile<R: Rng>(rng: &mut R, g: &Game) -> Profile {
    Profile::new(random_strategy(rng, g.m()), random_strategy(rng, g.n()))
}

/// Regrets by explicit loops, independent of the library's linear algebra.
pub fn regrets_oracle(r: &Matrix, c: &Matrix, x: &[f64], y: &[f64]) -> (f64, f64) {
    let (m, n) = (x.len(), y.len());
    let mut ry = vec![0.0; m];
    let mut cx = vec![0.0; n];
    let (mut xry, mut xcy) = (0.0, 0.0);
    for i in 0..m {
        for j in 0..n {
            ry[i] += r[i][j] * y[j];
            cx[j] += c[i][j] * x[i];
            xry += x[i] * r[i][j] * y[j];
            xcy += x[i] * c[i][j] * y[j];
        }
    }
    let best_r = ry.iter().cloned().fold(f64::MIN, f64::max);
    let best_c = cx.iter().cloned().fold(f64::MIN, f64::max);
    (best_r - xry, best_c - xcy)
}

pub fn f_oracle(g: &Game, p: &Profile) -> f64 {
    let (a, b) = regrets_oracle(g.r(), g.c(), p.x.probs(), p.y.probs());
    a.max(b)
}

/// Gaussian elimination with partial pivoting; `None` when singular.
pub fn solve_linear(mut a: Matrix, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let k = b.len();
    for col in 0..k {
        let piv = (col..k).max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())?;
        if a[piv][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in 0..k {
            if row != col {
                let factor = a[row][col] / a[col][col];
                for cc in col..k {
                    a[row][cc] -= factor * a[col][cc];
                }
                b[row] -= factor * b[col];
            }
        }
    }
    Some((0..k).map(|i| b[i] / a[i][i]).collect())
}

pub fn subsets(k: usize) -> Vec<Vec<usize>> {
    (1u32..(1 << k)).map(|mask| (0..k).filter(|i| mask & (1 << i) != 0).collect()).collect()
}

/// Mixed strategy on `supp` (rows of `payoff` indexed by the strategy's owner)
/// making the opponent indifferent over `other`: `Σ_i s_i payoff[i][j] = v`.
fn indifference(payoff: &dyn Fn(usize, usize) -> f64, supp: &[usize], other: &[usize], len: usize) -> Option<(Vec<f64>, f64)> {
    let k = supp.len();
    let mut a = vec![vec![0.0; k + 1]; k + 1];
    let mut b = vec![0.0; k + 1];
    for (row, &j) in other.iter().enumerate() {
        for (col, &i) in supp.iter().enumerate() {
            a[row][col] = payoff(i, j);
        }
        a[row][k] = -1.0;
    }
    for col in 0..k {
        a[k][col] = 1.0;
    }
    b[k] = 1.0;
    let sol = solve_linear(a, b)?;
    if sol[..k].iter().any(|&p| p < -1e-12) {
        return None;
    }
    let mut s = vec![0.0; len];
    for (col, &i) in supp.iter().enumerate() {
        s[i] = sol[col].max(0.0);
    }
    Some((s, sol[k]))
}

/// Support enumeration over equal-size supports; all equilibria of a
/// nondegenerate game.
pub fn support_enumeration(r: &Matrix, c: &Matrix) -> Vec<(Vec<f64>, Vec<f64>)> {
    let (m, n) = (r.len(), r[0].len());
    let mut out = Vec::new();
    for sx in subsets(m) {
        for sy in subsets(n) {
            if sx.len() != sy.len() {
                continue;
            }
            let Some((x, _)) = indifference(&|i, j| c[i][j], &sx, &sy, m) else { continue };
            let Some((y, _)) = indifference(&|j, i| r[i][j], &sy, &sx, n) else { continue };
            let (fr, fc) = regrets_oracle(r, c, &x, &y);
            if fr.max(fc) < 1e-9 {
                out.push((x, y));
            }
        }
    }
    out
}

/// Value of the zero-sum game `A` (row maximizes) by support enumeration.
pub fn zero_sum_value_oracle(a: &Matrix) -> f64 {
    let neg: Matrix = a.iter().map(|row| row.iter().map(|v| -v).collect()).collect();
    let eq = support_enumeration(a, &neg);
    let (x, y) = eq.first().expect("a nondegenerate zero-sum game has an equilibrium");
    let mut v = 0.0;
    for (i, row) in a.iter().enumerate() {
        for (j, aij) in row.iter().enumerate() {
            v += x[i] * aij * y[j];
        }
    }
    v
}

pub fn has_pure_ne(g: &Game) -> Option<(usize, usize)> {
    for i in 0..g.m() {
        for j in 0..g.n() {
            let row_best = (0..g.m()).all(|k| g.r()[k][j] <= g.r()[i][j] + 1e-12);
            let col_best = (0..g.n()).all(|l| g.c()[i][l] <= g.c()[i][j] + 1e-12);
            if row_best && col_best {
                return Some((i, j));
            }
        }
    }
    None
}
