//! Descent to a δ-stationary point of `f = max(fR, fC)`.
//!
//! Each iteration balances the two regrets, solves the min-max LP for the
//! steepest scaled direction, and takes the guarded line-search step.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game::{self, regrets_of, Game, GameError, MixedStrategy, Profile, SUPPORT_TOL};
use crate::linalg::{self, Matrix};
use crate::lp::{solve_lp, LinearProgram, LpError, Relation, Sense};

/// Regrets closer than this are treated as already balanced.
pub const BALANCE_SKIP: f64 = 1e-9;
/// Largest imbalance tolerated after the balance step.
pub const BALANCE_TOL: f64 = 1e-7;
/// Largest imbalance `direction` accepts.
pub const DIRECTION_BALANCE_TOL: f64 = 1e-6;
pub const DEFAULT_DELTA: f64 = 1e-3;

#[derive(Error, Debug)]
pub enum DescentError {
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("LP failure: {0}")]
    Lp(#[from] LpError),
    #[error("LP unexpectedly {0}")]
    LpStatus(String),
    #[error("profile not balanced: |fR - fC| = {0:e}")]
    Unbalanced(f64),
    #[error("dual solution not supported on best responses: {0}")]
    Support(String),
    #[error("no δ-stationary point after {iterations} iterations (best f = {f})")]
    BudgetExhausted { iterations: usize, best: Box<Profile>, f: f64 },
}

/// The max-min witness `(ρ, w, z)` of the inner maximization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualSolution {
    pub rho: f64,
    pub w: MixedStrategy,
    pub z: MixedStrategy,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectionResult {
    pub x_prime: MixedStrategy,
    pub y_prime: MixedStrategy,
    #[serde(rename = "V")]
    pub v: f64,
    pub dual: DualSolution,
}

impl DirectionResult {
    pub fn target(&self) -> Profile {
        Profile::new(self.x_prime.clone(), self.y_prime.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StationaryPoint {
    pub profile: Profile,
    pub dual: DualSolution,
    pub f: f64,
    #[serde(rename = "V")]
    pub v: f64,
    #[serde(rename = "lambdaStar")]
    pub lambda_star: f64,
    #[serde(rename = "muStar")]
    pub mu_star: f64,
    pub iterations: usize,
    /// `f` at the start and after every step.
    pub history: Vec<f64>,
}

impl StationaryPoint {
    /// Attaches a dual solution to a profile and fills in the derived values.
    pub fn from_parts(g: &Game, profile: Profile, dual: DualSolution) -> Result<Self, DescentError> {
        let reg = game::regrets(g, &profile)?;
        let v = if (reg.f_r - reg.f_c).abs() <= DIRECTION_BALANCE_TOL {
            direction(g, &profile)?.v
        } else {
            dual_value(g, &profile, &dual)
        };
        let (lambda_star, mu_star) = heights(g, &profile, &dual);
        Ok(StationaryPoint { profile, dual, f: reg.f, v, lambda_star, mu_star, iterations: 0, history: vec![reg.f] })
    }

    pub fn x(&self) -> &MixedStrategy {
        &self.profile.x
    }

    pub fn y(&self) -> &MixedStrategy {
        &self.profile.y
    }

    pub fn w(&self) -> &MixedStrategy {
        &self.dual.w
    }

    pub fn z(&self) -> &MixedStrategy {
        &self.dual.z
    }
}

/// `λ* = (w−x)ᵀRz`, `μ* = wᵀC(z−y)`.
pub fn heights(g: &Game, p: &Profile, d: &DualSolution) -> (f64, f64) {
    let (x, y, w, z) = (p.x.probs(), p.y.probs(), d.w.probs(), d.z.probs());
    let lambda = g.row_value(w, z) - g.row_value(x, z);
    let mu = g.col_value(w, z) - g.col_value(w, y);
    (lambda, mu)
}

/// Minimizes fR (or fC) subject to it staying above the other regret, with
/// the opponent's strategy fixed.
pub fn balance(g: &Game, p: &Profile) -> Result<Profile, DescentError> {
    let reg = game::regrets(g, p)?;
    if (reg.f_r - reg.f_c).abs() <= BALANCE_SKIP {
        return Ok(p.clone());
    }
    let (m, n) = (g.m(), g.n());
    let out = if reg.f_r > reg.f_c {
        let y = p.y.probs();
        let ry = g.row_payoffs(y);
        let cy = linalg::mat_vec(g.c(), y);
        let top = linalg::max(&ry);
        // max xᵀRy  s.t.  xᵀ(-Ry - C_j + Cy) >= -max(Ry)  for every column j
        let mut lp = LinearProgram::new(ry.clone(), Sense::Maximize);
        for j in 0..n {
            let row = (0..m).map(|i| -ry[i] - g.c()[i][j] + cy[i]).collect();
            lp.add(row, Relation::Ge, -top);
        }
        lp.add(vec![1.0; m], Relation::Eq, 1.0);
        let x = solve_strategy(&lp, m)?;
        Profile::new(x, p.y.clone())
    } else {
        let x = p.x.probs();
        let cx = g.col_payoffs(x);
        let rx = linalg::mat_t_vec(g.r(), x);
        let top = linalg::max(&cx);
        let mut lp = LinearProgram::new(cx.clone(), Sense::Maximize);
        for i in 0..m {
            let row = (0..n).map(|j| -cx[j] - g.r()[i][j] + rx[j]).collect();
            lp.add(row, Relation::Ge, -top);
        }
        lp.add(vec![1.0; n], Relation::Eq, 1.0);
        let y = solve_strategy(&lp, n)?;
        Profile::new(p.x.clone(), y)
    };
    let after = game::regrets(g, &out)?;
    if (after.f_r - after.f_c).abs() > BALANCE_TOL {
        return Err(DescentError::Unbalanced((after.f_r - after.f_c).abs()));
    }
    Ok(out)
}

fn solve_strategy(lp: &LinearProgram, k: usize) -> Result<MixedStrategy, DescentError> {
    let sol = solve_lp(lp)?;
    if !sol.is_optimal() {
        return Err(DescentError::LpStatus(format!("{:?}", sol.status)));
    }
    Ok(MixedStrategy::projected(sol.primal[..k].to_vec())?)
}

/// The `(m+n)×(m+n)` matrix with `T = (ρwᵀ, (1−ρ)zᵀ) G (y′; x′)`.
pub fn g_matrix(g: &Game, p: &Profile) -> Matrix {
    let (m, n) = (g.m(), g.n());
    let (x, y) = (p.x.probs(), p.y.probs());
    let xr = linalg::mat_t_vec(g.r(), x);
    let ry = g.row_payoffs(y);
    let xc = g.col_payoffs(x);
    let cy = linalg::mat_vec(g.c(), y);
    let xry = linalg::dot(x, &ry);
    let xcy = linalg::dot(x, &cy);
    let mut out = vec![vec![0.0; n + m]; m + n];
    for i in 0..m {
        for j in 0..n {
            out[i][j] = g.r()[i][j] - xr[j];
        }
        for k in 0..m {
            out[i][n + k] = -ry[k] + xry;
        }
    }
    for j in 0..n {
        for k in 0..n {
            out[m + j][k] = -xc[k] + xcy;
        }
        for i in 0..m {
            out[m + j][n + i] = g.c()[i][j] - cy[i];
        }
    }
    out
}

/// Solves `min_{x′,y′} max_{k ∈ S_R(y) ∪ S_C(x)} (G (y′;x′))_k`.
pub fn direction(g: &Game, p: &Profile) -> Result<DirectionResult, DescentError> {
    let reg = game::regrets(g, p)?;
    if (reg.f_r - reg.f_c).abs() > DIRECTION_BALANCE_TOL {
        return Err(DescentError::Unbalanced((reg.f_r - reg.f_c).abs()));
    }
    let (m, n) = (g.m(), g.n());
    let sup = game::supports(g, p, SUPPORT_TOL)?;
    let gm = g_matrix(g, p);
    let rows: Vec<usize> = sup.s_r.iter().copied().chain(sup.s_c.iter().map(|j| m + j)).collect();

    // Variables: y′ (n), x′ (m), t (free).
    let mut obj = vec![0.0; n + m + 1];
    obj[n + m] = 1.0;
    let mut lp = LinearProgram::new(obj, Sense::Minimize);
    lp.set_bounds(n + m, f64::NEG_INFINITY, None);
    for &k in &rows {
        let mut row = gm[k].clone();
        row.push(-1.0);
        lp.add(row, Relation::Le, 0.0);
    }
    let mut sum_y = vec![0.0; n + m + 1];
    sum_y[..n].iter_mut().for_each(|v| *v = 1.0);
    lp.add(sum_y, Relation::Eq, 1.0);
    let mut sum_x = vec![0.0; n + m + 1];
    sum_x[n..n + m].iter_mut().for_each(|v| *v = 1.0);
    lp.add(sum_x, Relation::Eq, 1.0);

    let sol = solve_lp(&lp)?;
    if !sol.is_optimal() {
        return Err(DescentError::LpStatus(format!("{:?}", sol.status)));
    }
    let y_prime = MixedStrategy::projected(sol.primal[..n].to_vec())?;
    let x_prime = MixedStrategy::projected(sol.primal[n..n + m].to_vec())?;

    let weights: Vec<f64> = sol.dual[..rows.len()].iter().map(|d| (-d).max(0.0)).collect();
    let total: f64 = weights.iter().sum();
    let total = if total > 0.0 { total } else { 1.0 };
    let nr = sup.s_r.len();
    let rho = (weights[..nr].iter().sum::<f64>() / total).clamp(0.0, 1.0);
    let mut w = vec![0.0; m];
    for (k, &i) in sup.s_r.iter().enumerate() {
        w[i] = weights[k];
    }
    let mut z = vec![0.0; n];
    for (k, &j) in sup.s_c.iter().enumerate() {
        z[j] = weights[nr + k];
    }
    let w = if w.iter().sum::<f64>() > 1e-12 {
        MixedStrategy::new(w)?
    } else {
        MixedStrategy::pure(m, sup.s_r[0])
    };
    let z = if z.iter().sum::<f64>() > 1e-12 {
        MixedStrategy::new(z)?
    } else {
        MixedStrategy::pure(n, sup.s_c[0])
    };
    Ok(DirectionResult { x_prime, y_prime, v: sol.objective, dual: DualSolution { rho, w, z } })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Derivative {
    pub df: f64,
    pub df_r: f64,
    pub df_c: f64,
}

/// One-sided derivative of `f` at `p` along `q − p`.
pub fn scaled_derivative(g: &Game, p: &Profile, q: &Profile) -> Result<Derivative, DescentError> {
    let reg = game::regrets(g, p)?;
    game::regrets(g, q)?;
    let sup = game::supports(g, p, SUPPORT_TOL)?;
    let (x, y, xp, yp) = (p.x.probs(), p.y.probs(), q.x.probs(), q.y.probs());
    let ryp = g.row_payoffs(yp);
    let cxp = g.col_payoffs(xp);
    let top_r = sup.s_r.iter().map(|&i| ryp[i]).fold(f64::NEG_INFINITY, f64::max);
    let top_c = sup.s_c.iter().map(|&j| cxp[j]).fold(f64::NEG_INFINITY, f64::max);
    let df_r = top_r - g.row_value(xp, y) - g.row_value(x, yp) + g.row_value(x, y) - reg.f_r;
    let df_c = top_c - g.col_value(x, yp) - g.col_value(xp, y) + g.col_value(x, y) - reg.f_c;
    let df = if (reg.f_r - reg.f_c).abs() <= 1e-9 {
        df_r.max(df_c)
    } else if reg.f_r > reg.f_c {
        df_r
    } else {
        df_c
    };
    Ok(Derivative { df, df_r, df_c })
}

fn check_dual_support(g: &Game, p: &Profile, d: &DualSolution) -> Result<(), DescentError> {
    let sup = game::supports(g, p, SUPPORT_TOL)?;
    if d.w.len() != g.m() || d.z.len() != g.n() {
        return Err(DescentError::Support("dual strategies have the wrong length".into()));
    }
    if let Some(i) = d.w.support(SUPPORT_TOL).into_iter().find(|i| !sup.s_r.contains(i)) {
        return Err(DescentError::Support(format!("w puts weight on row {i} outside S_R(y)")));
    }
    if let Some(j) = d.z.support(SUPPORT_TOL).into_iter().find(|j| !sup.s_c.contains(j)) {
        return Err(DescentError::Support(format!("z puts weight on column {j} outside S_C(x)")));
    }
    Ok(())
}

/// `T(x, y, x′, y′, ρ, w, z)` evaluated directly.
pub fn t_value(g: &Game, p: &Profile, q: &Profile, d: &DualSolution) -> Result<f64, DescentError> {
    game::regrets(g, q)?;
    check_dual_support(g, p, d)?;
    let (x, y, xp, yp) = (p.x.probs(), p.y.probs(), q.x.probs(), q.y.probs());
    let (w, z) = (d.w.probs(), d.z.probs());
    let t1 = g.row_value(w, yp) - g.row_value(x, yp) - g.row_value(xp, y) + g.row_value(x, y);
    let t2 = g.col_value(xp, z) - g.col_value(x, yp) - g.col_value(xp, y) + g.col_value(x, y);
    Ok(d.rho * t1 + (1.0 - d.rho) * t2)
}

/// `T` through the bilinear form `(ρwᵀ, (1−ρ)zᵀ) G (y′; x′)`.
pub fn t_value_bilinear(g: &Game, p: &Profile, q: &Profile, d: &DualSolution) -> f64 {
    let gm = g_matrix(g, p);
    let left: Vec<f64> = d.w.probs().iter().map(|v| d.rho * v).chain(d.z.probs().iter().map(|v| (1.0 - d.rho) * v)).collect();
    let right: Vec<f64> = q.y.probs().iter().chain(q.x.probs()).copied().collect();
    linalg::bilinear(&left, &gm, &right)
}

/// `A(ρ, y, z) = −ρRy + (1−ρ)C(z−y)`.
pub fn a_vector(g: &Game, rho: f64, y: &[f64], z: &[f64]) -> Vec<f64> {
    let ry = g.row_payoffs(y);
    let czy = linalg::mat_vec(g.c(), &linalg::sub(z, y));
    ry.iter().zip(&czy).map(|(a, b)| -rho * a + (1.0 - rho) * b).collect()
}

/// `B(ρ, x, w) = ρRᵀ(w−x) − (1−ρ)Cᵀx`.
pub fn b_vector(g: &Game, rho: f64, x: &[f64], w: &[f64]) -> Vec<f64> {
    let rwx = linalg::mat_t_vec(g.r(), &linalg::sub(w, x));
    let cx = g.col_payoffs(x);
    rwx.iter().zip(&cx).map(|(a, b)| rho * a - (1.0 - rho) * b).collect()
}

/// `min_{x′,y′} T(x, y, x′, y′, ρ, w, z)`; `T` is affine in `(x′, y′)` with
/// gradients `A` and `B`.
pub fn dual_value(g: &Game, p: &Profile, d: &DualSolution) -> f64 {
    let (x, y) = (p.x.probs(), p.y.probs());
    let a = a_vector(g, d.rho, y, d.z.probs());
    let b = b_vector(g, d.rho, x, d.w.probs());
    d.rho * g.row_value(x, y) + (1.0 - d.rho) * g.col_value(x, y) + linalg::min(&a) + linalg::min(&b)
}

/// Step size along `dir` that keeps the best-response sets piecewise fixed
/// and guarantees descent.
pub fn line_search(g: &Game, p: &Profile, dir: &DirectionResult) -> f64 {
    let (x, y) = (p.x.probs(), p.y.probs());
    let (xp, yp) = (dir.x_prime.probs(), dir.y_prime.probs());
    let f = regrets_of(g, x, y).f;

    let gap_bound = |now: &[f64], next: &[f64]| -> f64 {
        let top = linalg::max(now);
        let best = linalg::suppmax(now, SUPPORT_TOL);
        let top_next = best.iter().map(|&i| next[i]).fold(f64::NEG_INFINITY, f64::max);
        let mut eps = f64::INFINITY;
        for i in 0..now.len() {
            if best.contains(&i) {
                continue;
            }
            let gap = next[i] - top_next;
            if gap <= 0.0 {
                continue;
            }
            let denom = top - now[i] + gap;
            if denom > 1e-12 {
                eps = eps.min((top - now[i]) / denom);
            }
        }
        eps
    };
    let eps1 = gap_bound(&g.row_payoffs(y), &g.row_payoffs(yp));
    let eps2 = gap_bound(&g.col_payoffs(x), &g.col_payoffs(xp));
    let mut eps = eps1.min(eps2).min(1.0);

    let dx = linalg::sub(xp, x);
    let dy = linalg::sub(yp, y);
    let h = linalg::bilinear(&dx, g.r(), &dy).min(linalg::bilinear(&dx, g.c(), &dy));
    if h < 0.0 {
        eps = eps.min((dir.v - f).abs() / (2.0 * h.abs()));
    }
    eps
}

#[derive(Debug, Clone, PartialEq)]
pub struct DescentOptions {
    pub delta: f64,
    /// Defaults to `ceil(4/δ²)`.
    pub max_iter: Option<usize>,
    /// Preferred dual solution at the terminal profile; used only when it is
    /// a valid max-min witness there.
    pub dual_hint: Option<DualSolution>,
}

impl Default for DescentOptions {
    fn default() -> Self {
        DescentOptions { delta: DEFAULT_DELTA, max_iter: None, dual_hint: None }
    }
}

impl DescentOptions {
    pub fn with_delta(delta: f64) -> Self {
        DescentOptions { delta, ..Default::default() }
    }
}

pub fn default_max_iter(delta: f64) -> usize {
    (4.0 / (delta * delta)).ceil() as usize
}

pub fn find_stationary(g: &Game, p0: &Profile, delta: f64, max_iter: Option<usize>) -> Result<StationaryPoint, DescentError> {
    find_stationary_with(g, p0, &DescentOptions { delta, max_iter, dual_hint: None })
}

/// Whether `d` attains the max-min value `v` at `p`.
pub fn is_valid_dual(g: &Game, p: &Profile, d: &DualSolution, v: f64, tol: f64) -> bool {
    (0.0..=1.0).contains(&d.rho) && check_dual_support(g, p, d).is_ok() && dual_value(g, p, d) >= v - tol
}

pub fn find_stationary_with(g: &Game, p0: &Profile, opts: &DescentOptions) -> Result<StationaryPoint, DescentError> {
    let delta = opts.delta;
    let max_iter = opts.max_iter.unwrap_or_else(|| default_max_iter(delta));
    let mut p = p0.clone();
    let mut history = vec![game::regrets(g, &p)?.f];
    for iter in 0..=max_iter {
        p = balance(g, &p)?;
        let dir = direction(g, &p)?;
        let f = game::f_value(g, &p);
        if dir.v - f >= -delta {
            let dual = match &opts.dual_hint {
                Some(h) if is_valid_dual(g, &p, h, dir.v, 1e-9) => h.clone(),
                _ => dir.dual,
            };
            let (lambda_star, mu_star) = heights(g, &p, &dual);
            history.push(f);
            return Ok(StationaryPoint { profile: p, dual, f, v: dir.v, lambda_star, mu_star, iterations: iter, history });
        }
        if iter == max_iter {
            break;
        }
        let eps = line_search(g, &p, &dir);
        p = p.lerp(&dir.target(), eps);
        history.push(game::f_value(g, &p));
    }
    let f = game::f_value(g, &p);
    Err(DescentError::BudgetExhausted { iterations: max_iter, best: Box::new(p), f })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StationarityReport {
    pub passed: bool,
    pub imbalance: f64,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub violations: Vec<String>,
}

/// Checks `fR = fC`, `supp(x) ⊆ suppmin(A)` and `supp(y) ⊆ suppmin(B)`.
pub fn verify_stationary(g: &Game, sp: &StationaryPoint, tol: f64) -> StationarityReport {
    let (x, y) = (sp.x().probs(), sp.y().probs());
    let reg = regrets_of(g, x, y);
    let a = a_vector(g, sp.dual.rho, y, sp.z().probs());
    let b = b_vector(g, sp.dual.rho, x, sp.w().probs());
    let mut violations = Vec::new();
    let imbalance = (reg.f_r - reg.f_c).abs();
    if imbalance > tol {
        violations.push(format!("fR - fC = {:e}", reg.f_r - reg.f_c));
    }
    let min_a = linalg::min(&a);
    for i in sp.x().support(tol) {
        if a[i] > min_a + tol {
            violations.push(format!("row {i} in supp(x) but A[{i}] exceeds min(A) by {:e}", a[i] - min_a));
        }
    }
    let min_b = linalg::min(&b);
    for j in sp.y().support(tol) {
        if b[j] > min_b + tol {
            violations.push(format!("column {j} in supp(y) but B[{j}] exceeds min(B) by {:e}", b[j] - min_b));
        }
    }
    StationarityReport { passed: violations.is_empty(), imbalance, a, b, violations }
}
