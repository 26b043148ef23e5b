//! Hand-built games with a known worst-case stationary point.

use crate::descent::{DescentError, DualSolution, StationaryPoint};
use crate::game::{Game, MixedStrategy, Profile};

use super::{constants, GeneratorError, GeneratorInput};

/// A game together with its canonical stationary point and dual solution.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalInstance {
    pub game: Game,
    pub profile: Profile,
    pub dual: DualSolution,
}

impl CanonicalInstance {
    pub fn stationary_point(&self) -> Result<StationaryPoint, DescentError> {
        StationaryPoint::from_parts(&self.game, self.profile.clone(), self.dual.clone())
    }

    pub fn input(&self) -> GeneratorInput {
        GeneratorInput {
            x_star: self.profile.x.clone(),
            y_star: self.profile.y.clone(),
            w_star: self.dual.w.clone(),
            z_star: self.dual.z.clone(),
        }
    }
}

fn build(r: Vec<Vec<f64>>, c: Vec<Vec<f64>>, x: MixedStrategy, y: MixedStrategy, rho: f64, w: MixedStrategy, z: MixedStrategy) -> CanonicalInstance {
    let game = Game::new(r, c).expect("static instance lies in [0,1]");
    CanonicalInstance { game, profile: Profile::new(x, y), dual: DualSolution { rho, w, z } }
}

/// The 3×3 game attaining `b` at `x* = y* = e1` with `w* = z* = e3`.
pub fn tight_3x3() -> CanonicalInstance {
    let k = constants();
    let (b, l0, m0) = (k.b, k.lambda0, k.mu0);
    build(
        vec![vec![0.1, 0.0, 0.0], vec![0.1 + b, 1.0, 1.0], vec![0.1 + b, l0, l0]],
        vec![vec![0.1, 0.1 + b, 0.1 + b], vec![0.0, 1.0, m0], vec![0.0, 1.0, m0]],
        MixedStrategy::pure(3, 0),
        MixedStrategy::pure(3, 0),
        k.rho_star(),
        MixedStrategy::pure(3, 2),
        MixedStrategy::pure(3, 2),
    )
}

/// Tight instance of any size `m, n > 2`, with `w* = z* = e2`.
pub fn tight_m_n(m: usize, n: usize) -> Result<CanonicalInstance, GeneratorError> {
    if m <= 2 || n <= 2 {
        return Err(GeneratorError::Domain(format!("tight_m_n needs m, n > 2, got {m}x{n}")));
    }
    let k = constants();
    let (b, l0, m0) = (k.b, k.lambda0, k.mu0);
    let mut r = vec![vec![0.0; n]; m];
    r[0][0] = 0.1;
    for (i, row) in r.iter_mut().enumerate().skip(1) {
        row[0] = 0.1 + b;
        let fill = if i == 1 { l0 } else { 1.0 };
        row[1..].iter_mut().for_each(|v| *v = fill);
    }
    let mut c = vec![vec![0.0; n]; m];
    c[0][0] = 0.1;
    c[0][1..].iter_mut().for_each(|v| *v = 0.1 + b);
    for row in c.iter_mut().skip(1) {
        row[1] = m0;
        row[2..].iter_mut().for_each(|v| *v = 1.0);
    }
    Ok(build(r, c, MixedStrategy::pure(m, 0), MixedStrategy::pure(n, 0), k.rho_star(), MixedStrategy::pure(m, 1), MixedStrategy::pure(n, 1)))
}

/// 4×4 tight instance in which no strategy of either player is dominated.
pub fn tight_no_dominated() -> CanonicalInstance {
    let k = constants();
    let (b, l0, m0) = (k.b, k.lambda0, k.mu0);
    let half_lo = MixedStrategy::new(vec![0.5, 0.5, 0.0, 0.0]).unwrap();
    let half_hi = MixedStrategy::new(vec![0.0, 0.0, 0.5, 0.5]).unwrap();
    build(
        vec![
            vec![2.0 * b + 0.2, 0.0, 0.0, 0.0],
            vec![0.0, 2.0 * b + 0.2, 0.0, 0.0],
            vec![2.0 * b + 0.17, 2.0 * b + 0.03, 1.0, 1.0],
            vec![2.0 * b + 0.03, 2.0 * b + 0.17, 2.0 * l0 - 1.0, 2.0 * l0 - 1.0],
        ],
        vec![
            vec![2.0 * b + 0.2, 0.0, 2.0 * b + 0.17, 2.0 * b + 0.03],
            vec![0.0, 2.0 * b + 0.2, 2.0 * b + 0.03, 2.0 * b + 0.17],
            vec![0.0, 0.0, 1.0, 2.0 * m0 - 1.0],
            vec![0.0, 0.0, 1.0, 2.0 * m0 - 1.0],
        ],
        half_lo.clone(),
        half_lo,
        k.rho_star(),
        half_hi.clone(),
        half_hi,
    )
}

/// Game on which the 1/3-adjustment stays at `f = 1/3`.
pub fn dfm_tight() -> CanonicalInstance {
    let third = 1.0 / 3.0;
    build(
        vec![vec![0.0, 0.0, 0.0], vec![third, 1.0, 1.0], vec![third, 0.5, 0.5]],
        vec![vec![0.0, third, third], vec![0.0, 1.0, 1.0], vec![0.0, 1.0, 1.0]],
        MixedStrategy::pure(3, 0),
        MixedStrategy::pure(3, 0),
        2.0 / 3.0,
        MixedStrategy::pure(3, 2),
        MixedStrategy::pure(3, 2),
    )
}

/// Family approaching 1/3 through the third case of the 1/3-adjustment.
pub fn dfm_family(eps: f64) -> Result<CanonicalInstance, GeneratorError> {
    if !(eps > 0.0 && eps <= 1.0 / 3.0) {
        return Err(GeneratorError::Domain(format!("dfm_family needs 0 < ε <= 1/3, got {eps}")));
    }
    let third = 1.0 / 3.0;
    let a = 2.0 / 3.0 - eps / 2.0;
    let c2 = 2.0 / 3.0 + eps;
    Ok(build(
        vec![vec![0.0, 0.0, 0.0], vec![third, 1.0, 1.0], vec![third, a, a]],
        vec![vec![0.0, third - eps, third - eps], vec![0.0, 1.0, c2], vec![0.0, 1.0, c2]],
        MixedStrategy::pure(3, 0),
        MixedStrategy::pure(3, 0),
        0.5,
        MixedStrategy::pure(3, 2),
        MixedStrategy::pure(3, 2),
    ))
}

/// 2×2 game with a stationary point at `f = 1/2`.
pub fn half_sp() -> CanonicalInstance {
    build(
        vec![vec![0.5, 0.0], vec![1.0, 1.0]],
        vec![vec![0.5, 1.0], vec![0.0, 1.0]],
        MixedStrategy::pure(2, 0),
        MixedStrategy::pure(2, 0),
        0.5,
        MixedStrategy::pure(2, 1),
        MixedStrategy::pure(2, 1),
    )
}
