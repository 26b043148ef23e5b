use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

/// `b = max_{s,t} min{st/(s+t), (1−s)/(1+t−s)}` and its maximizer
/// `(s, t) = (μ0, λ0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    pub b: f64,
    #[serde(rename = "lambda0")]
    pub lambda0: f64,
    #[serde(rename = "mu0")]
    pub mu0: f64,
}

impl Constants {
    /// `ρ* = μ0/(λ0+μ0)`
    pub fn rho_star(&self) -> f64 {
        self.mu0 / (self.lambda0 + self.mu0)
    }
}

/// The two surfaces whose pointwise minimum defines `b`.
pub fn b_objective(s: f64, t: f64) -> (f64, f64) {
    let first = if s + t > 0.0 { s * t / (s + t) } else { 0.0 };
    let second = (1.0 - s) / (1.0 + t - s);
    (first, second)
}

fn h(s: f64, t: f64) -> f64 {
    let (a, b) = b_objective(s, t);
    a.min(b)
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Maximizes a unimodal `f` on `[lo, hi]`.
fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, rounds: usize) -> f64 {
    let mut a = hi - INV_PHI * (hi - lo);
    let mut b = lo + INV_PHI * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    for _ in 0..rounds {
        if fa < fb {
            lo = a;
            a = b;
            fa = fb;
            b = lo + INV_PHI * (hi - lo);
            fb = f(b);
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - INV_PHI * (hi - lo);
            fa = f(a);
        }
    }
    0.5 * (lo + hi)
}

/// Grid search on a 1000×1000 lattice, then 40 rounds of golden-section
/// refinement in `s` with `t` re-maximized inside, shrinking the bracket
/// each round.
pub fn solve_b() -> Constants {
    const GRID: usize = 1000;
    let (mut s, mut best) = (0.0, f64::NEG_INFINITY);
    for i in 0..=GRID {
        let si = i as f64 / GRID as f64;
        for j in 0..=GRID {
            let tj = j as f64 / GRID as f64;
            let v = h(si, tj);
            if v > best {
                best = v;
                s = si;
            }
        }
    }
    let step = 1.0 / GRID as f64;
    let inner = |s: f64| golden_max(|t| h(s, t), 0.0, 1.0, 80);
    let (mut s_lo, mut s_hi) = ((s - 10.0 * step).max(0.0), (s + 10.0 * step).min(1.0));
    for _ in 0..40 {
        s = golden_max(|s| h(s, inner(s)), s_lo, s_hi, 40);
        let width = 0.5 * (s_hi - s_lo);
        s_lo = (s - 0.5 * width).max(0.0);
        s_hi = (s + 0.5 * width).min(1.0);
    }
    let t = inner(s);
    Constants { b: h(s, t), lambda0: t, mu0: s }
}

/// `solve_b`, computed once per process.
pub fn constants() -> Constants {
    static CACHE: OnceLock<Constants> = OnceLock::new();
    *CACHE.get_or_init(solve_b)
}

