//! The 1/3-adjustment: a case split on `(λ*, μ*)` that may leave the square
//! `Λ` through an extra best response.

use serde::{Deserialize, Serialize};

use crate::descent::{self, DescentError, DescentOptions, StationaryPoint};
use crate::game::{f_value, Game, MixedStrategy, Profile};
use crate::linalg;

pub const SEGMENT_SAMPLES: usize = 10_000;
const TERNARY_ROUNDS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    A,
    B,
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DfmTrace {
    pub case: u8,
    pub branch: Branch,
    /// `ŷ` and `ŵ`; in case 4 these hold the mirrored `x̂` and `ẑ`.
    #[serde(rename = "yHat")]
    pub y_hat: Option<MixedStrategy>,
    #[serde(rename = "wHat")]
    pub w_hat: Option<MixedStrategy>,
    #[serde(rename = "tR")]
    pub t_r: Option<f64>,
    #[serde(rename = "vR")]
    pub v_r: Option<f64>,
    #[serde(rename = "muHat")]
    pub mu_hat: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    /// Set when branch B's step was out of range and `(x*, y*)` was kept.
    pub fallback: bool,
    pub output: Profile,
    pub f: f64,
}

/// Which case fires for the given heights.
pub fn route(lambda: f64, mu: f64) -> u8 {
    if lambda.min(mu) <= 0.5 || lambda.max(mu) <= 2.0 / 3.0 {
        1
    } else if lambda.min(mu) >= 2.0 / 3.0 {
        2
    } else if 0.5 < lambda && lambda <= 2.0 / 3.0 && 2.0 / 3.0 < mu {
        3
    } else {
        4
    }
}

/// Minimizes `f((1−t)a + t b)` by a uniform scan refined with ternary search.
pub fn segment_min_f(g: &Game, a: &Profile, b: &Profile, samples: usize) -> (f64, Profile, f64) {
    let samples = samples.max(2);
    let eval = |t: f64| f_value(g, &a.lerp(b, t));
    let step = 1.0 / (samples - 1) as f64;
    let (mut k_best, mut f_best) = (0, f64::INFINITY);
    for k in 0..samples {
        let v = eval(k as f64 * step);
        if v < f_best {
            k_best = k;
            f_best = v;
        }
    }
    let t_scan = k_best as f64 * step;
    let (mut lo, mut hi) = ((t_scan - step).max(0.0), (t_scan + step).min(1.0));
    for _ in 0..TERNARY_ROUNDS {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if eval(m1) <= eval(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let t_ref = 0.5 * (lo + hi);
    let f_ref = eval(t_ref);
    let t = if f_ref < f_best { t_ref } else { t_scan };
    let p = a.lerp(b, t);
    let f = f_value(g, &p);
    (t, p, f)
}

/// Lowest-index pure best response.
fn pure_best(payoffs: &[f64]) -> usize {
    linalg::argmax(payoffs)
}

struct Half {
    mid: MixedStrategy,
    pick: MixedStrategy,
    t: f64,
    v: f64,
    hat: f64,
}

pub fn dfm_adjust(g: &Game, sp: &StationaryPoint) -> DfmTrace {
    let (lambda, mu) = descent::heights(g, &sp.profile, &sp.dual);
    let case = route(lambda, mu);
    let base = |case: u8, output: Profile| {
        let f = f_value(g, &output);
        DfmTrace {
            case,
            branch: Branch::None,
            y_hat: None,
            w_hat: None,
            t_r: None,
            v_r: None,
            mu_hat: None,
            alpha: None,
            beta: None,
            fallback: false,
            output,
            f,
        }
    };
    let (x, y, w, z) = (sp.x(), sp.y(), sp.w(), sp.z());
    match case {
        1 => return base(1, sp.profile.clone()),
        2 => return base(2, Profile::new(w.clone(), z.clone())),
        _ => {}
    }
    // Case 3 as written; case 4 swaps the players.
    let (hi, lo) = if case == 3 { (mu, lambda) } else { (lambda, mu) };
    let half = if case == 3 {
        let mid = y.lerp(z, 0.5);
        let pick = MixedStrategy::pure(g.m(), pure_best(&g.row_payoffs(mid.probs())));
        let (p, m, wp) = (pick.probs(), mid.probs(), w.probs());
        let t = g.row_value(p, m) - g.row_value(wp, m);
        let v = g.row_value(wp, y.probs()) - g.row_value(p, y.probs());
        let hat = g.col_value(p, z.probs()) - g.col_value(p, y.probs());
        Half { mid, pick, t, v, hat }
    } else {
        let mid = x.lerp(w, 0.5);
        let pick = MixedStrategy::pure(g.n(), pure_best(&g.col_payoffs(mid.probs())));
        let (p, m, zp) = (pick.probs(), mid.probs(), z.probs());
        let t = g.col_value(m, p) - g.col_value(m, zp);
        let v = g.col_value(x.probs(), zp) - g.col_value(x.probs(), p);
        let hat = g.row_value(w.probs(), p) - g.row_value(x.probs(), p);
        Half { mid, pick, t, v, hat }
    };
    let mut trace = base(case, sp.profile.clone());
    trace.y_hat = Some(half.mid.clone());
    trace.w_hat = Some(half.pick.clone());
    trace.t_r = Some(half.t);
    trace.v_r = Some(half.v);
    trace.mu_hat = Some(half.hat);
    let vt = half.v + half.t;
    let endpoint = if vt >= (hi - lo) / 2.0 && half.hat >= hi - vt {
        let alpha = (2.0 * vt - (hi - lo)) / (2.0 * vt);
        trace.branch = Branch::A;
        trace.alpha = Some(alpha);
        if case == 3 {
            Profile::new(half.pick.lerp(w, alpha), z.clone())
        } else {
            Profile::new(w.clone(), half.pick.lerp(z, alpha))
        }
    } else {
        trace.branch = Branch::B;
        let denom = 1.0 + hi / 2.0 - lo - half.t;
        if half.t > hi / 2.0 || denom <= 1e-12 {
            trace.fallback = true;
            return trace;
        }
        let beta = ((1.0 - hi / 2.0 - half.t) / denom).clamp(0.0, 1.0);
        trace.beta = Some(beta);
        if case == 3 {
            Profile::new(w.clone(), half.mid.lerp(z, beta))
        } else {
            Profile::new(half.mid.lerp(w, beta), z.clone())
        }
    };
    let (_, output, f) = segment_min_f(g, &sp.profile, &endpoint, SEGMENT_SAMPLES);
    trace.output = output;
    trace.f = f;
    trace
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DfmReport {
    pub stationary: StationaryPoint,
    pub trace: DfmTrace,
    pub profile: Profile,
    pub f: f64,
}

/// Applies the adjustment to a computed stationary point and keeps the better profile.
pub fn dfm_finish(g: &Game, sp: StationaryPoint) -> DfmReport {
    let trace = dfm_adjust(g, &sp);
    let (profile, f) = if trace.f < sp.f { (trace.output.clone(), trace.f) } else { (sp.profile.clone(), sp.f) };
    DfmReport { stationary: sp, trace, profile, f }
}

pub fn dfm_solve(g: &Game, p0: &Profile, delta: f64) -> Result<DfmReport, DescentError> {
    dfm_solve_with(g, p0, &DescentOptions::with_delta(delta))
}

pub fn dfm_solve_with(g: &Game, p0: &Profile, opts: &DescentOptions) -> Result<DfmReport, DescentError> {
    let sp = descent::find_stationary_with(g, p0, opts)?;
    Ok(dfm_finish(g, sp))
}

#[cfg(test)]
mod tests {
    use super::route;

    #[test]
    fn route_boundaries() {
        assert_eq!(route(0.5, 0.9), 1);
        assert_eq!(route(0.51, 0.6), 1);
        assert_eq!(route(2.0 / 3.0, 0.9), 2);
        assert_eq!(route(0.6, 0.9), 3);
        assert_eq!(route(0.9, 0.6), 4);
        assert_eq!(route(0.67, 0.67), 2);
    }
}
