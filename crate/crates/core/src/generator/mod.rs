//! Tight-instance generation: an LP over the payoff entries whose feasible
//! set is exactly the games where a given profile is a stationary point
//! with `f = b` on the whole boundary of its adjustment square.

mod constants;
mod instances;

pub use constants::{b_objective, constants, solve_b, Constants};
pub use instances::{dfm_family, dfm_tight, half_sp, tight_3x3, tight_m_n, tight_no_dominated, CanonicalInstance};

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::descent::{self, DualSolution, StationaryPoint};
use crate::game::{f_value, regrets_of, Game, GameError, MixedStrategy, Profile, SUPPORT_TOL};
use crate::linalg;
use crate::lp::{solve_lp, LinearProgram, LpError, LpStatus, Relation, Sense};

#[derive(Error, Debug)]
pub enum GeneratorError {
    #[error("{0}")]
    Domain(String),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("LP failure: {0}")]
    Lp(#[from] LpError),
}

/// The intended stationary point `(x*, y*)` and dual strategies `(w*, z*)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorInput {
    #[serde(rename = "xStar")]
    pub x_star: MixedStrategy,
    #[serde(rename = "yStar")]
    pub y_star: MixedStrategy,
    #[serde(rename = "wStar")]
    pub w_star: MixedStrategy,
    #[serde(rename = "zStar")]
    pub z_star: MixedStrategy,
}

impl GeneratorInput {
    pub fn m(&self) -> usize {
        self.x_star.len()
    }

    pub fn n(&self) -> usize {
        self.y_star.len()
    }

    pub fn profile(&self) -> Profile {
        Profile::new(self.x_star.clone(), self.y_star.clone())
    }

    /// The dual solution `(ρ*, w*, z*)` with `ρ* = μ0/(λ0+μ0)`.
    pub fn dual(&self) -> DualSolution {
        DualSolution { rho: constants().rho_star(), w: self.w_star.clone(), z: self.z_star.clone() }
    }

    fn check(&self) -> Result<(), GeneratorError> {
        if self.w_star.len() != self.m() || self.z_star.len() != self.n() {
            return Err(GeneratorError::Domain("generator input dimensions disagree".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Restriction {
    None,
    Disjoint,
    Intersecting,
    Nested,
}

impl Restriction {
    pub const ALL: [Restriction; 4] = [Restriction::None, Restriction::Disjoint, Restriction::Intersecting, Restriction::Nested];

    fn admits(self, sx: &[usize], sy: &[usize], sw: &[usize], sz: &[usize]) -> bool {
        let meets = |a: &[usize], b: &[usize]| a.iter().any(|i| b.contains(i));
        let within = |a: &[usize], b: &[usize]| a.iter().all(|i| b.contains(i));
        match self {
            Restriction::None => true,
            Restriction::Disjoint => !meets(sx, sw) && !meets(sy, sz),
            Restriction::Intersecting => meets(sx, sw) && meets(sy, sz),
            Restriction::Nested => within(sw, sx) && within(sz, sy),
        }
    }
}

impl fmt::Display for Restriction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Restriction::None => "none",
            Restriction::Disjoint => "disjoint",
            Restriction::Intersecting => "intersecting",
            Restriction::Nested => "nested",
        };
        f.write_str(s)
    }
}

impl FromStr for Restriction {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "none" => Ok(Restriction::None),
            "disjoint" => Ok(Restriction::Disjoint),
            "intersecting" => Ok(Restriction::Intersecting),
            "nested" => Ok(Restriction::Nested),
            other => Err(format!("unknown restriction '{other}'")),
        }
    }
}

fn random_subset<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Vec<usize> {
    loop {
        let s: Vec<usize> = (0..k).filter(|_| rng.gen::<bool>()).collect();
        if !s.is_empty() {
            return s;
        }
    }
}

fn random_on<R: Rng + ?Sized>(k: usize, support: &[usize], rng: &mut R) -> MixedStrategy {
    let mut p = vec![0.0; k];
    for &i in support {
        // Keep every support entry strictly positive.
        p[i] = loop {
            let u: f64 = rng.gen();
            if u > 1e-6 {
                break u;
            }
        };
    }
    MixedStrategy::new(p).expect("nonempty support")
}

/// Draws uniform nonempty supports satisfying the restriction (and
/// non-full `supp(x*)`, `supp(y*)`), then uniform weights on them.
/// With `pure_dual`, `w*` and `z*` are single pure strategies.
pub fn sample_inputs_with<R: Rng + ?Sized>(m: usize, n: usize, restriction: Restriction, pure_dual: bool, rng: &mut R) -> Result<GeneratorInput, GeneratorError> {
    if m < 2 || n < 2 {
        return Err(GeneratorError::Domain(format!("sampling needs m, n >= 2, got {m}x{n}")));
    }
    loop {
        let sx = random_subset(m, rng);
        let sy = random_subset(n, rng);
        let (sw, sz) = if pure_dual {
            (vec![rng.gen_range(0..m)], vec![rng.gen_range(0..n)])
        } else {
            (random_subset(m, rng), random_subset(n, rng))
        };
        if sx.len() == m || sy.len() == n || !restriction.admits(&sx, &sy, &sw, &sz) {
            continue;
        }
        return Ok(GeneratorInput {
            x_star: random_on(m, &sx, rng),
            y_star: random_on(n, &sy, rng),
            w_star: random_on(m, &sw, rng),
            z_star: random_on(n, &sz, rng),
        });
    }
}

pub fn sample_inputs<R: Rng + ?Sized>(m: usize, n: usize, restriction: Restriction, rng: &mut R) -> Result<GeneratorInput, GeneratorError> {
    sample_inputs_with(m, n, restriction, false, rng)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorOptions {
    /// Random objectives solved per feasible `(k, l)`; defaults to `m`.
    pub objectives: Option<usize>,
    /// Convex combinations emitted per feasible `(k, l)`.
    pub per_pair: usize,
    /// Also require `S_R(y*) ∩ S_R(z*) ≠ ∅`.
    pub lambda_intersect: bool,
    /// Stop after the first feasible `(k, l)`.
    pub first_only: bool,
}

impl Default for GeneratorOptions {
    fn default() -> Self {
        GeneratorOptions { objectives: None, per_pair: 1, lambda_intersect: false, first_only: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TightChecks {
    pub stationary: bool,
    #[serde(rename = "fEqualsB")]
    pub f_equals_b: bool,
    #[serde(rename = "lambdaMu")]
    pub lambda_mu: bool,
    #[serde(rename = "unitRegrets")]
    pub unit_regrets: bool,
    pub orientation: bool,
    #[serde(rename = "boundaryMin")]
    pub boundary_min: bool,
    /// Informational: `w*` and `z*` are pure.
    #[serde(rename = "pureDual")]
    pub pure_dual: bool,
    pub passed: bool,
    pub f: f64,
    #[serde(rename = "lambdaStar")]
    pub lambda_star: f64,
    #[serde(rename = "muStar")]
    pub mu_star: f64,
    #[serde(rename = "boundaryMinValue")]
    pub boundary_min_value: f64,
    pub failures: Vec<String>,
}

/// The certificate written next to each generated game.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    #[serde(flatten)]
    pub input: GeneratorInput,
    pub k: Option<usize>,
    pub l: Option<usize>,
    #[serde(rename = "rhoStar")]
    pub rho_star: f64,
    pub checks: TightChecks,
}

impl Certificate {
    pub fn dual(&self) -> DualSolution {
        DualSolution { rho: self.rho_star, w: self.input.w_star.clone(), z: self.input.z_star.clone() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TightInstance {
    pub game: Game,
    pub input: GeneratorInput,
    pub rho_star: f64,
    pub k: usize,
    pub l: usize,
    pub checks: TightChecks,
}

impl TightInstance {
    pub fn certificate(&self) -> Certificate {
        Certificate { input: self.input.clone(), k: Some(self.k), l: Some(self.l), rho_star: self.rho_star, checks: self.checks.clone() }
    }

    pub fn stationary_point(&self) -> Result<StationaryPoint, descent::DescentError> {
        StationaryPoint::from_parts(&self.game, self.input.profile(), self.input.dual())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Generated {
    /// No `(k, l)` admits a tight game.
    No,
    Instances(Vec<TightInstance>),
}

impl Generated {
    pub fn instances(self) -> Vec<TightInstance> {
        match self {
            Generated::No => Vec::new(),
            Generated::Instances(v) => v,
        }
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Generated::No)
    }
}

/// Linear expressions over the `2mn` payoff entries.
struct Vars {
    m: usize,
    n: usize,
}

impl Vars {
    fn len(&self) -> usize {
        2 * self.m * self.n
    }
    fn r(&self, i: usize, j: usize) -> usize {
        i * self.n + j
    }
    fn c(&self, i: usize, j: usize) -> usize {
        self.m * self.n + i * self.n + j
    }
    fn zero(&self) -> Vec<f64> {
        vec![0.0; self.len()]
    }
    /// `uᵀRv` (or `uᵀCv` when `col` is set).
    fn bilinear(&self, u: &[f64], v: &[f64], col: bool) -> Vec<f64> {
        let mut e = self.zero();
        for i in 0..self.m {
            for j in 0..self.n {
                let k = if col { self.c(i, j) } else { self.r(i, j) };
                e[k] = u[i] * v[j];
            }
        }
        e
    }
    /// `(R v)_i` for every row `i`.
    fn r_times(&self, v: &[f64]) -> Vec<Vec<f64>> {
        (0..self.m).map(|i| self.bilinear(&unit(self.m, i), v, false)).collect()
    }
    /// `(C v)_i` for every row `i`.
    fn c_times(&self, v: &[f64]) -> Vec<Vec<f64>> {
        (0..self.m).map(|i| self.bilinear(&unit(self.m, i), v, true)).collect()
    }
    /// `(Rᵀ u)_j` for every column `j`.
    fn rt_times(&self, u: &[f64]) -> Vec<Vec<f64>> {
        (0..self.n).map(|j| self.bilinear(u, &unit(self.n, j), false)).collect()
    }
    /// `(Cᵀ u)_j` for every column `j`.
    fn ct_times(&self, u: &[f64]) -> Vec<Vec<f64>> {
        (0..self.n).map(|j| self.bilinear(u, &unit(self.n, j), true)).collect()
    }
}

fn unit(k: usize, i: usize) -> Vec<f64> {
    let mut e = vec![0.0; k];
    e[i] = 1.0;
    e
}

fn axpy(a: f64, x: &[f64], b: f64, y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(u, v)| a * u + b * v).collect()
}

/// `set ⊆ suppmax(exprs)` (or suppmin): equal within the set, weakly
/// dominating everything outside it.
fn add_extreme_set(lp: &mut LinearProgram, exprs: &[Vec<f64>], set: &[usize], max: bool) {
    let Some(&first) = set.first() else { return };
    for w in set.windows(2) {
        lp.add(linalg::sub(&exprs[w[0]], &exprs[w[1]]), Relation::Eq, 0.0);
    }
    for i in 0..exprs.len() {
        if set.contains(&i) {
            continue;
        }
        let rel = if max { Relation::Ge } else { Relation::Le };
        lp.add(linalg::sub(&exprs[first], &exprs[i]), rel, 0.0);
    }
}

/// The feasibility LP for one `(k, l)` (and optional shared best response
/// `i` to both `y*` and `z*`).
fn tight_lp(input: &GeneratorInput, k: usize, l: usize, shared: Option<usize>) -> LinearProgram {
    let (m, n) = (input.m(), input.n());
    let v = Vars { m, n };
    let consts = constants();
    let rho = consts.rho_star();
    let (x, y, w, z) = (input.x_star.probs(), input.y_star.probs(), input.w_star.probs(), input.z_star.probs());
    let (sx, sy) = (input.x_star.support(0.0), input.y_star.support(0.0));
    let (sw, sz) = (input.w_star.support(0.0), input.z_star.support(0.0));

    let mut lp = LinearProgram::new(v.zero(), Sense::Minimize);
    for j in 0..v.len() {
        lp.set_bounds(j, 0.0, Some(1.0));
    }
    let ry = v.r_times(y);
    let cx = v.ct_times(x);
    let rz = v.r_times(z);
    let cw = v.ct_times(w);
    // supp(w*) ⊆ S_R(y*), supp(z*) ⊆ S_C(x*), k ∈ S_R(z*), l ∈ S_C(w*)
    add_extreme_set(&mut lp, &ry, &sw, true);
    add_extreme_set(&mut lp, &cx, &sz, true);
    add_extreme_set(&mut lp, &rz, &[k], true);
    add_extreme_set(&mut lp, &cw, &[l], true);
    // supp(x*) ⊆ suppmin(A), supp(y*) ⊆ suppmin(B) at ρ*
    let zy = linalg::sub(z, y);
    let wx = linalg::sub(w, x);
    let a: Vec<Vec<f64>> = ry.iter().zip(v.c_times(&zy)).map(|(p, q)| axpy(-rho, p, 1.0 - rho, &q)).collect();
    let b: Vec<Vec<f64>> = v.rt_times(&wx).iter().zip(&cx).map(|(p, q)| axpy(rho, p, -(1.0 - rho), q)).collect();
    add_extreme_set(&mut lp, &a, &sx, false);
    add_extreme_set(&mut lp, &b, &sy, false);
    // f(x*, y*) = b
    lp.add(v.bilinear(&wx, y, false), Relation::Eq, consts.b);
    lp.add(v.bilinear(x, &zy, true), Relation::Eq, consts.b);
    // fR(x*, z*) = fC(w*, y*) = 1
    lp.add(v.bilinear(x, z, false), Relation::Eq, 0.0);
    lp.add(v.bilinear(w, y, true), Relation::Eq, 0.0);
    for &j in &sz {
        let mut e = v.zero();
        e[v.r(k, j)] = 1.0;
        lp.add(e, Relation::Eq, 1.0);
    }
    for &i in &sw {
        let mut e = v.zero();
        e[v.c(i, l)] = 1.0;
        lp.add(e, Relation::Eq, 1.0);
    }
    // λ* = λ0, μ* = μ0
    lp.add(v.bilinear(w, z, false), Relation::Eq, consts.lambda0);
    lp.add(v.bilinear(w, z, true), Relation::Eq, consts.mu0);
    // l ∈ S_C(x*)
    add_extreme_set(&mut lp, &cx, &[l], true);
    if let Some(i) = shared {
        add_extreme_set(&mut lp, &ry, &[i], true);
        add_extreme_set(&mut lp, &rz, &[i], true);
    }
    lp
}

fn game_from_vars(m: usize, n: usize, vals: &[f64]) -> Result<Game, GameError> {
    let v = Vars { m, n };
    let r = (0..m).map(|i| (0..n).map(|j| vals[v.r(i, j)].clamp(0.0, 1.0)).collect()).collect();
    let c = (0..m).map(|i| (0..n).map(|j| vals[v.c(i, j)].clamp(0.0, 1.0)).collect()).collect();
    Game::new(r, c)
}

fn candidate_pairs(input: &GeneratorInput) -> Vec<(usize, usize)> {
    let (sx, sy) = (input.x_star.support(0.0), input.y_star.support(0.0));
    let ks: Vec<usize> = (0..input.m()).filter(|k| !sx.contains(k)).collect();
    let ls: Vec<usize> = (0..input.n()).filter(|l| !sy.contains(l)).collect();
    ks.iter().flat_map(|&k| ls.iter().map(move |&l| (k, l))).collect()
}

fn is_full(input: &GeneratorInput) -> bool {
    input.x_star.support(0.0).len() == input.m() || input.y_star.support(0.0).len() == input.n()
}

/// First feasible `(k, l)` (and shared row), without sampling games.
pub fn tight_feasible(input: &GeneratorInput, lambda_intersect: bool) -> Result<Option<(usize, usize)>, GeneratorError> {
    input.check()?;
    if is_full(input) {
        return Ok(None);
    }
    for (k, l) in candidate_pairs(input) {
        if feasible_lp(input, k, l, lambda_intersect)?.is_some() {
            return Ok(Some((k, l)));
        }
    }
    Ok(None)
}

fn feasible_lp(input: &GeneratorInput, k: usize, l: usize, lambda_intersect: bool) -> Result<Option<LinearProgram>, GeneratorError> {
    let shared: Vec<Option<usize>> = if lambda_intersect { (0..input.m()).map(Some).collect() } else { vec![None] };
    for s in shared {
        let lp = tight_lp(input, k, l, s);
        if solve_lp(&lp)?.status == LpStatus::Optimal {
            return Ok(Some(lp));
        }
    }
    Ok(None)
}

/// Runs the generator on one input. For every feasible `(k, l)` it solves
/// random objectives over the feasible polytope and emits random convex
/// combinations of the vertices found.
pub fn generate_tight<R: Rng + ?Sized>(input: &GeneratorInput, opts: &GeneratorOptions, rng: &mut R) -> Result<Generated, GeneratorError> {
    input.check()?;
    if is_full(input) {
        return Ok(Generated::No);
    }
    let (m, n) = (input.m(), input.n());
    let objectives = opts.objectives.unwrap_or(m).max(1);
    let mut out = Vec::new();
    let mut any = false;
    for (k, l) in candidate_pairs(input) {
        let Some(mut lp) = feasible_lp(input, k, l, opts.lambda_intersect)? else { continue };
        any = true;
        let mut vertices = Vec::with_capacity(objectives);
        for _ in 0..objectives {
            lp.objective = (0..lp.num_vars()).map(|_| rng.gen::<f64>()).collect();
            lp.sense = if rng.gen::<bool>() { Sense::Maximize } else { Sense::Minimize };
            let sol = solve_lp(&lp)?;
            if sol.is_optimal() {
                vertices.push(sol.primal);
            }
        }
        if vertices.is_empty() {
            continue;
        }
        for _ in 0..opts.per_pair {
            let weights: Vec<f64> = (0..vertices.len()).map(|_| rng.gen::<f64>()).collect();
            let total: f64 = weights.iter().sum();
            let mut mix = vec![0.0; 2 * m * n];
            for (wt, vert) in weights.iter().zip(&vertices) {
                for (acc, val) in mix.iter_mut().zip(vert) {
                    *acc += wt / total * val;
                }
            }
            let game = game_from_vars(m, n, &mix)?;
            let checks = verify_tight(&game, input, 50);
            out.push(TightInstance { game, input: input.clone(), rho_star: constants().rho_star(), k, l, checks });
        }
        if opts.first_only {
            break;
        }
    }
    Ok(if any { Generated::Instances(out) } else { Generated::No })
}

/// Profile `(α w* + (1−α) x*, β z* + (1−β) y*)`.
pub fn square_point(input: &GeneratorInput, alpha: f64, beta: f64) -> Profile {
    Profile::new(input.x_star.lerp(&input.w_star, alpha), input.y_star.lerp(&input.z_star, beta))
}

/// Minimum of `f` over `grid` points per edge of the boundary of the square.
pub fn boundary_min(g: &Game, input: &GeneratorInput, grid: usize) -> f64 {
    let grid = grid.max(2);
    let mut best = f64::INFINITY;
    for s in 0..grid {
        let t = s as f64 / (grid - 1) as f64;
        for (a, b) in [(t, 0.0), (t, 1.0), (0.0, t), (1.0, t)] {
            best = best.min(f_value(g, &square_point(input, a, b)));
        }
    }
    best
}

/// Checks every tightness condition, each within `1e-6`.
pub fn verify_tight(g: &Game, input: &GeneratorInput, grid: usize) -> TightChecks {
    const TOL: f64 = 1e-6;
    let consts = constants();
    let mut failures = Vec::new();
    if g.m() != input.m() || g.n() != input.n() || input.check().is_err() {
        failures.push("dimension mismatch".to_string());
        return TightChecks {
            stationary: false,
            f_equals_b: false,
            lambda_mu: false,
            unit_regrets: false,
            orientation: false,
            boundary_min: false,
            pure_dual: false,
            passed: false,
            f: f64::NAN,
            lambda_star: f64::NAN,
            mu_star: f64::NAN,
            boundary_min_value: f64::NAN,
            failures,
        };
    }
    let (x, y, w, z) = (input.x_star.probs(), input.y_star.probs(), input.w_star.probs(), input.z_star.probs());
    let profile = input.profile();
    let dual = input.dual();
    let reg = regrets_of(g, x, y);
    let (lambda_star, mu_star) = descent::heights(g, &profile, &dual);
    let sp = StationaryPoint {
        v: descent::dual_value(g, &profile, &dual),
        profile,
        dual,
        f: reg.f,
        lambda_star,
        mu_star,
        iterations: 0,
        history: vec![reg.f],
    };
    let stat = descent::verify_stationary(g, &sp, TOL);
    let supports_ok = {
        let s_r = linalg::suppmax(&g.row_payoffs(y), TOL);
        let s_c = linalg::suppmax(&g.col_payoffs(x), TOL);
        input.w_star.support(SUPPORT_TOL).iter().all(|i| s_r.contains(i)) && input.z_star.support(SUPPORT_TOL).iter().all(|j| s_c.contains(j))
    };
    let stationary = stat.passed && supports_ok;
    if !stationary {
        failures.push(format!("stationarity: {:?}{}", stat.violations, if supports_ok { "" } else { " (dual support outside best responses)" }));
    }
    let f_equals_b = (reg.f - consts.b).abs() <= TOL;
    if !f_equals_b {
        failures.push(format!("f(x*,y*) = {} differs from b = {}", reg.f, consts.b));
    }
    let lambda_mu = (lambda_star - consts.lambda0).abs() <= TOL && (mu_star - consts.mu0).abs() <= TOL;
    if !lambda_mu {
        failures.push(format!("(λ*, μ*) = ({lambda_star}, {mu_star})"));
    }
    let fr_xz = regrets_of(g, x, z).f_r;
    let fc_wy = regrets_of(g, w, y).f_c;
    let unit_regrets = (fr_xz - 1.0).abs() <= TOL && (fc_wy - 1.0).abs() <= TOL;
    if !unit_regrets {
        failures.push(format!("fR(x*,z*) = {fr_xz}, fC(w*,y*) = {fc_wy}"));
    }
    let wz = regrets_of(g, w, z);
    let orientation = wz.f_c > wz.f_r;
    if !orientation {
        failures.push(format!("fC(w*,z*) = {} not above fR(w*,z*) = {}", wz.f_c, wz.f_r));
    }
    let boundary_min_value = boundary_min(g, input, grid);
    let boundary_min = boundary_min_value >= consts.b - TOL;
    if !boundary_min {
        failures.push(format!("boundary minimum {boundary_min_value} below b"));
    }
    let pure_dual = input.w_star.support(0.0).len() == 1 && input.z_star.support(0.0).len() == 1;
    TightChecks {
        stationary,
        f_equals_b,
        lambda_mu,
        unit_regrets,
        orientation,
        boundary_min,
        pure_dual,
        passed: failures.is_empty(),
        f: reg.f,
        lambda_star,
        mu_star,
        boundary_min_value,
        failures,
    }
}
