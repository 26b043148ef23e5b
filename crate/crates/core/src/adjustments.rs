//! Adjustments of a stationary point inside the square `Λ` spanned by
//! `(x*, y*)` and `(w*, z*)`, and the full descent-plus-adjustment pipeline.

use serde::{Deserialize, Serialize};

use crate::descent::{self, DescentError, DescentOptions, StationaryPoint};
use crate::game::{f_value, regrets_of, Game, Profile, RegretTriple};
use crate::linalg;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    /// The original closed-form adjustment.
    Ts,
    /// Exact minimum of `f` on `Γ₂`.
    BoundaryMin,
    /// Intersection of the linear bounds on `Γ₂`.
    LinearIntersect,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdjustmentOutcome {
    pub method: Method,
    pub profile: Profile,
    pub f: f64,
}

impl AdjustmentOutcome {
    fn new(g: &Game, method: Method, profile: Profile) -> Self {
        let f = f_value(g, &profile);
        AdjustmentOutcome { method, profile, f }
    }
}

/// `(α w* + (1−α) x*, β z* + (1−β) y*)`.
pub fn square_point(sp: &StationaryPoint, alpha: f64, beta: f64) -> Profile {
    Profile::new(sp.x().lerp(sp.w(), alpha), sp.y().lerp(sp.z(), beta))
}

/// The four corners of `Λ` in the order `(x*,y*)`, `(x*,z*)`, `(w*,y*)`, `(w*,z*)`.
pub fn corners(sp: &StationaryPoint) -> [Profile; 4] {
    [square_point(sp, 0.0, 0.0), square_point(sp, 0.0, 1.0), square_point(sp, 1.0, 0.0), square_point(sp, 1.0, 1.0)]
}

/// `λ = min_{j ∈ S_C(x*)} ((w*−x*)ᵀR)_j`, `μ = min_{i ∈ S_R(y*)} (C(z*−y*))_i`.
pub fn lambda_mu(g: &Game, sp: &StationaryPoint) -> (f64, f64) {
    let (x, y, w, z) = (sp.x().probs(), sp.y().probs(), sp.w().probs(), sp.z().probs());
    let s_c = linalg::suppmax(&g.col_payoffs(x), crate::game::SUPPORT_TOL);
    let s_r = linalg::suppmax(&g.row_payoffs(y), crate::game::SUPPORT_TOL);
    let wr = linalg::mat_t_vec(g.r(), &linalg::sub(w, x));
    let cz = linalg::mat_vec(g.c(), &linalg::sub(z, y));
    let lambda = s_c.iter().map(|&j| wr[j]).fold(f64::INFINITY, f64::min);
    let mu = s_r.iter().map(|&i| cz[i]).fold(f64::INFINITY, f64::min);
    (lambda, mu)
}

/// `λ* = (w*−x*)ᵀRz*`, `μ* = w*ᵀC(z*−y*)`.
pub fn lambda_star_mu_star(g: &Game, sp: &StationaryPoint) -> (f64, f64) {
    descent::heights(g, &sp.profile, &sp.dual)
}

/// Regrets at the corners `(x*,z*)`, `(w*,y*)`, `(w*,z*)`.
pub struct CornerRegrets {
    pub xz: RegretTriple,
    pub wy: RegretTriple,
    pub wz: RegretTriple,
}

pub fn corner_regrets(g: &Game, sp: &StationaryPoint) -> CornerRegrets {
    let (x, y, w, z) = (sp.x().probs(), sp.y().probs(), sp.w().probs(), sp.z().probs());
    CornerRegrets { xz: regrets_of(g, x, z), wy: regrets_of(g, w, y), wz: regrets_of(g, w, z) }
}

/// Whether the `α` edge `(x_α, z*)` is the relevant half of `Γ₂`.
fn column_side(c: &CornerRegrets) -> bool {
    c.wz.f_c >= c.wz.f_r - 1e-12
}

/// Method 1.
pub fn adjust_ts(g: &Game, sp: &StationaryPoint) -> AdjustmentOutcome {
    let (lambda, mu) = lambda_mu(g, sp);
    let profile = if lambda >= mu {
        let d = 1.0 + lambda - mu;
        Profile::new(sp.x().lerp(sp.w(), 1.0 / d), sp.z().clone())
    } else {
        let d = 1.0 + mu - lambda;
        Profile::new(sp.w().clone(), sp.y().lerp(sp.z(), 1.0 / d))
    };
    AdjustmentOutcome::new(g, Method::Ts, profile)
}

/// A line `slope·t + intercept`.
#[derive(Clone, Copy)]
struct Line(f64, f64);

fn breakpoints(lines: &[Line]) -> Vec<f64> {
    let mut out = vec![0.0, 1.0];
    for (a, la) in lines.iter().enumerate() {
        for lb in &lines[a + 1..] {
            let ds = la.0 - lb.0;
            if ds.abs() > 1e-15 {
                let t = (lb.1 - la.1) / ds;
                if (0.0..=1.0).contains(&t) {
                    out.push(t);
                }
            }
        }
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out.dedup();
    out
}

fn argmin_on(candidates: &[f64], eval: impl Fn(f64) -> f64) -> (f64, f64) {
    let mut best = (0.0, f64::INFINITY);
    for &t in candidates {
        let v = eval(t);
        if v < best.1 - 1e-14 {
            best = (t, v);
        }
    }
    best
}

/// `α* = argmin f(α w* + (1−α) x*, z*)`, exact over the breakpoints.
pub fn alpha_star(g: &Game, sp: &StationaryPoint) -> (f64, f64) {
    let (x, w, z) = (sp.x().probs(), sp.w().probs(), sp.z().probs());
    let d = linalg::sub(w, x);
    let cx = g.col_payoffs(x);
    let cd = g.col_payoffs(&d);
    let cz = linalg::mat_vec(g.c(), z);
    let rz = g.row_payoffs(z);
    let (xcz, dcz) = (linalg::dot(x, &cz), linalg::dot(&d, &cz));
    let mut lines: Vec<Line> = (0..g.n()).map(|j| Line(cd[j] - dcz, cx[j] - xcz)).collect();
    lines.push(Line(-linalg::dot(&d, &rz), linalg::max(&rz) - linalg::dot(x, &rz)));
    argmin_on(&breakpoints(&lines), |a| f_value(g, &Profile::new(sp.x().lerp(sp.w(), a), sp.z().clone())))
}

/// `β* = argmin f(w*, β z* + (1−β) y*)`, exact over the breakpoints.
pub fn beta_star(g: &Game, sp: &StationaryPoint) -> (f64, f64) {
    let (y, w, z) = (sp.y().probs(), sp.w().probs(), sp.z().probs());
    let d = linalg::sub(z, y);
    let ry = g.row_payoffs(y);
    let rd = g.row_payoffs(&d);
    let wr = linalg::mat_t_vec(g.r(), w);
    let cw = g.col_payoffs(w);
    let (wry, wrd) = (linalg::dot(&wr, y), linalg::dot(&wr, &d));
    let mut lines: Vec<Line> = (0..g.m()).map(|i| Line(rd[i] - wrd, ry[i] - wry)).collect();
    lines.push(Line(-linalg::dot(&cw, &d), linalg::max(&cw) - linalg::dot(&cw, y)));
    argmin_on(&breakpoints(&lines), |b| f_value(g, &Profile::new(sp.w().clone(), sp.y().lerp(sp.z(), b))))
}

/// Method 2.
pub fn adjust_boundary_min(g: &Game, sp: &StationaryPoint) -> AdjustmentOutcome {
    let c = corner_regrets(g, sp);
    let profile = if column_side(&c) {
        let (a, _) = alpha_star(g, sp);
        Profile::new(sp.x().lerp(sp.w(), a), sp.z().clone())
    } else {
        let (b, _) = beta_star(g, sp);
        Profile::new(sp.w().clone(), sp.y().lerp(sp.z(), b))
    };
    AdjustmentOutcome::new(g, Method::BoundaryMin, profile)
}

fn ratio(num: f64, den: f64) -> f64 {
    if den.abs() <= 1e-12 {
        0.0
    } else {
        num / den
    }
}

/// `(p*, q*)` of the linear-bound intersection.
pub fn p_q_star(g: &Game, sp: &StationaryPoint) -> (f64, f64) {
    let c = corner_regrets(g, sp);
    let p = ratio(c.xz.f_r, c.xz.f_r + c.wz.f_c - c.wz.f_r);
    let q = ratio(c.wy.f_c, c.wy.f_c + c.wz.f_r - c.wz.f_c);
    (p, q)
}

/// Method 3.
pub fn adjust_linear(g: &Game, sp: &StationaryPoint) -> AdjustmentOutcome {
    let c = corner_regrets(g, sp);
    let (p, q) = p_q_star(g, sp);
    let profile = if column_side(&c) {
        Profile::new(sp.x().lerp(sp.w(), p.clamp(0.0, 1.0)), sp.z().clone())
    } else {
        Profile::new(sp.w().clone(), sp.y().lerp(sp.z(), q.clamp(0.0, 1.0)))
    };
    AdjustmentOutcome::new(g, Method::LinearIntersect, profile)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TsSource {
    Stationary,
    Adjusted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TsReport {
    pub stationary: StationaryPoint,
    pub method1: AdjustmentOutcome,
    pub method2: AdjustmentOutcome,
    pub method3: AdjustmentOutcome,
    pub source: TsSource,
    pub profile: Profile,
    pub f: f64,
}

impl TsReport {
    /// `f` at the stationary point and after Methods 1, 2, 3.
    pub fn all_f(&self) -> [f64; 4] {
        [self.stationary.f, self.method1.f, self.method2.f, self.method3.f]
    }
}

/// Adjusts an already computed stationary point.
pub fn ts_adjust(g: &Game, sp: StationaryPoint) -> TsReport {
    let method1 = adjust_ts(g, &sp);
    let method2 = adjust_boundary_min(g, &sp);
    let method3 = adjust_linear(g, &sp);
    let (source, profile, f) = if method1.f < sp.f {
        (TsSource::Adjusted, method1.profile.clone(), method1.f)
    } else {
        (TsSource::Stationary, sp.profile.clone(), sp.f)
    };
    TsReport { stationary: sp, method1, method2, method3, source, profile, f }
}

/// Descent from `p0` followed by the adjustments; the answer is the better
/// of the stationary point and Method 1.
pub fn ts_solve(g: &Game, p0: &Profile, delta: f64) -> Result<TsReport, DescentError> {
    ts_solve_with(g, p0, &DescentOptions::with_delta(delta))
}

pub fn ts_solve_with(g: &Game, p0: &Profile, opts: &DescentOptions) -> Result<TsReport, DescentError> {
    let sp = descent::find_stationary_with(g, p0, opts)?;
    Ok(ts_adjust(g, sp))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub min: f64,
    pub alpha: f64,
    pub beta: f64,
}

/// Minimum of `f` over a `grid × grid` lattice of `Λ` (corners included).
pub fn rectangle_scan(g: &Game, sp: &StationaryPoint, grid: usize) -> ScanResult {
    let grid = grid.max(2);
    let ts: Vec<f64> = (0..grid).map(|k| k as f64 / (grid - 1) as f64).collect();
    let mut best = ScanResult { min: f64::INFINITY, alpha: 0.0, beta: 0.0 };
    for &a in &ts {
        let x = sp.x().lerp(sp.w(), a);
        for &b in &ts {
            let v = regrets_of(g, x.probs(), sp.y().lerp(sp.z(), b).probs()).f;
            if v < best.min {
                best = ScanResult { min: v, alpha: a, beta: b };
            }
        }
    }
    best
}

/// Minimum of `f` over `grid` points on each of the four edges of `Λ`.
pub fn boundary_scan(g: &Game, sp: &StationaryPoint, grid: usize) -> ScanResult {
    let grid = grid.max(2);
    let mut best = ScanResult { min: f64::INFINITY, alpha: 0.0, beta: 0.0 };
    for k in 0..grid {
        let t = k as f64 / (grid - 1) as f64;
        for (a, b) in [(t, 0.0), (t, 1.0), (0.0, t), (1.0, t)] {
            let v = f_value(g, &square_point(sp, a, b));
            if v < best.min {
                best = ScanResult { min: v, alpha: a, beta: b };
            }
        }
    }
    best
}

/// Regrets at `square_point(sp, α, β)`.
pub fn square_regrets(g: &Game, sp: &StationaryPoint, alpha: f64, beta: f64) -> RegretTriple {
    let p = square_point(sp, alpha, beta);
    regrets_of(g, p.x.probs(), p.y.probs())
}
