//! Bimatrix games, mixed strategies and regret functions.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{self, Matrix};

/// Default tolerance for best-response sets and supports.
pub const SUPPORT_TOL: f64 = 1e-9;

const RANGE_TOL: f64 = 1e-12;

#[derive(Error, Debug)]
pub enum GameError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("empty matrix")]
    Empty,
    #[error("non-finite payoff at ({0}, {1})")]
    NonFinite(usize, usize),
    #[error("payoff {value} at ({row}, {col}) outside [0,1]; normalize the game first")]
    OutOfRange { row: usize, col: usize, value: f64 },
    #[error("invalid mixed strategy: {0}")]
    InvalidStrategy(String),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

/// A two-player game with payoffs in `[0,1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Game {
    m: usize,
    n: usize,
    r: Matrix,
    c: Matrix,
}

#[derive(Serialize, Deserialize)]
struct GameFile {
    m: usize,
    n: usize,
    #[serde(rename = "R")]
    r: Matrix,
    #[serde(rename = "C")]
    c: Matrix,
}

fn check_shape(r: &Matrix, c: &Matrix) -> Result<(usize, usize), GameError> {
    let m = r.len();
    if m == 0 || r[0].is_empty() {
        return Err(GameError::Empty);
    }
    let n = r[0].len();
    if c.len() != m {
        return Err(GameError::DimensionMismatch(format!("R has {m} rows, C has {}", c.len())));
    }
    for (i, (rr, cr)) in r.iter().zip(c).enumerate() {
        if rr.len() != n || cr.len() != n {
            return Err(GameError::DimensionMismatch(format!("row {i} is not of width {n}")));
        }
        for j in 0..n {
            if !rr[j].is_finite() || !cr[j].is_finite() {
                return Err(GameError::NonFinite(i, j));
            }
        }
    }
    Ok((m, n))
}

impl Game {
    /// Builds a game from matrices already in `[0,1]`.
    pub fn new(r: Matrix, c: Matrix) -> Result<Self, GameError> {
        let (m, n) = check_shape(&r, &c)?;
        for mat in [&r, &c] {
            for (i, row) in mat.iter().enumerate() {
                for (j, &v) in row.iter().enumerate() {
                    if !(-RANGE_TOL..=1.0 + RANGE_TOL).contains(&v) {
                        return Err(GameError::OutOfRange { row: i, col: j, value: v });
                    }
                }
            }
        }
        let clamp = |mat: Matrix| -> Matrix {
            mat.into_iter()
                .map(|row| row.into_iter().map(|v| v.clamp(0.0, 1.0)).collect())
                .collect()
        };
        Ok(Game { m, n, r: clamp(r), c: clamp(c) })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> &Matrix {
        &self.r
    }

    pub fn c(&self) -> &Matrix {
        &self.c
    }

    /// `R y`
    pub fn row_payoffs(&self, y: &[f64]) -> Vec<f64> {
        linalg::mat_vec(&self.r, y)
    }

    /// `Cᵀ x`
    pub fn col_payoffs(&self, x: &[f64]) -> Vec<f64> {
        linalg::mat_t_vec(&self.c, x)
    }

    /// `xᵀ R y`
    pub fn row_value(&self, x: &[f64], y: &[f64]) -> f64 {
        linalg::bilinear(x, &self.r, y)
    }

    /// `xᵀ C y`
    pub fn col_value(&self, x: &[f64], y: &[f64]) -> f64 {
        linalg::bilinear(x, &self.c, y)
    }

    /// Parses the `{"m","n","R","C"}` format. Out-of-range payoffs are an
    /// error unless `normalize` is set.
    pub fn from_json(s: &str, normalize: bool) -> Result<Self, GameError> {
        let file: GameFile = serde_json::from_str(s)?;
        let (m, n) = check_shape(&file.r, &file.c)?;
        if m != file.m || n != file.n {
            return Err(GameError::DimensionMismatch(format!(
                "header says {}x{}, matrices are {m}x{n}",
                file.m, file.n
            )));
        }
        if normalize {
            normalize_game(&file.r, &file.c)
        } else {
            Game::new(file.r, file.c)
        }
    }

    pub fn to_json(&self) -> String {
        let file = GameFile { m: self.m, n: self.n, r: self.r.clone(), c: self.c.clone() };
        serde_json::to_string_pretty(&file).expect("game serializes")
    }
}

/// Affinely maps each matrix onto `[0,1]` (min to 0, max to 1). A constant
/// matrix becomes all zeros.
pub fn normalize_game(r_raw: &Matrix, c_raw: &Matrix) -> Result<Game, GameError> {
    check_shape(r_raw, c_raw)?;
    let scale = |mat: &Matrix| -> Matrix {
        let lo = mat.iter().flatten().copied().fold(f64::INFINITY, f64::min);
        let hi = mat.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max);
        if hi - lo == 0.0 {
            return mat.iter().map(|row| vec![0.0; row.len()]).collect();
        }
        if lo == 0.0 && hi == 1.0 {
            return mat.clone();
        }
        mat.iter().map(|row| row.iter().map(|v| (v - lo) / (hi - lo)).collect()).collect()
    };
    Game::new(scale(r_raw), scale(c_raw))
}

/// A point of the probability simplex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct MixedStrategy(Vec<f64>);

impl MixedStrategy {
    /// Clamps entries above `-1e-12` to be nonnegative and renormalizes.
    pub fn new(probs: Vec<f64>) -> Result<Self, GameError> {
        if probs.is_empty() {
            return Err(GameError::InvalidStrategy("empty vector".into()));
        }
        let mut p = probs;
        for v in p.iter_mut() {
            if !v.is_finite() {
                return Err(GameError::InvalidStrategy("non-finite entry".into()));
            }
            if *v < -RANGE_TOL {
                return Err(GameError::InvalidStrategy(format!("negative entry {v}")));
            }
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        let s: f64 = p.iter().sum();
        if s <= 0.0 {
            return Err(GameError::InvalidStrategy("zero total mass".into()));
        }
        p.iter_mut().for_each(|v| *v /= s);
        Ok(MixedStrategy(p))
    }

    /// Like `new`, but first clips every negative entry to zero.
    pub fn projected(mut probs: Vec<f64>) -> Result<Self, GameError> {
        probs.iter_mut().for_each(|v| *v = v.max(0.0));
        Self::new(probs)
    }

    pub fn pure(k: usize, i: usize) -> Self {
        let mut p = vec![0.0; k];
        p[i] = 1.0;
        MixedStrategy(p)
    }

    pub fn uniform(k: usize) -> Self {
        MixedStrategy(vec![1.0 / k as f64; k])
    }

    /// Uniform over the given indices.
    pub fn uniform_on(k: usize, idx: &[usize]) -> Self {
        let mut p = vec![0.0; k];
        for &i in idx {
            p[i] = 1.0 / idx.len() as f64;
        }
        MixedStrategy(p)
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn support(&self, tol: f64) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i] > tol).collect()
    }

    /// `(1 - t) self + t other`
    pub fn lerp(&self, other: &MixedStrategy, t: f64) -> MixedStrategy {
        MixedStrategy::projected(linalg::lerp(&self.0, &other.0, t)).expect("convex combination")
    }

    /// L∞ distance.
    pub fn dist(&self, other: &MixedStrategy) -> f64 {
        linalg::max_abs_diff(&self.0, &other.0)
    }
}

impl TryFrom<Vec<f64>> for MixedStrategy {
    type Error = GameError;
    fn try_from(v: Vec<f64>) -> Result<Self, GameError> {
        MixedStrategy::new(v)
    }
}

impl From<MixedStrategy> for Vec<f64> {
    fn from(s: MixedStrategy) -> Vec<f64> {
        s.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Profile {
    pub x: MixedStrategy,
    pub y: MixedStrategy,
}

impl Profile {
    pub fn new(x: MixedStrategy, y: MixedStrategy) -> Self {
        Profile { x, y }
    }

    pub fn uniform(g: &Game) -> Self {
        Profile::new(MixedStrategy::uniform(g.m()), MixedStrategy::uniform(g.n()))
    }

    pub fn pure(g: &Game, i: usize, j: usize) -> Self {
        Profile::new(MixedStrategy::pure(g.m(), i), MixedStrategy::pure(g.n(), j))
    }

    /// `(1 - t) self + t other`, componentwise.
    pub fn lerp(&self, other: &Profile, t: f64) -> Profile {
        Profile::new(self.x.lerp(&other.x, t), self.y.lerp(&other.y, t))
    }

    /// L∞ distance on `Δm × Δn`.
    pub fn dist(&self, other: &Profile) -> f64 {
        self.x.dist(&other.x).max(self.y.dist(&other.y))
    }

    fn check(&self, g: &Game) -> Result<(), GameError> {
        if self.x.len() != g.m() || self.y.len() != g.n() {
            return Err(GameError::DimensionMismatch(format!(
                "profile is {}x{}, game is {}x{}",
                self.x.len(),
                self.y.len(),
                g.m(),
                g.n()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegretTriple {
    #[serde(rename = "fR")]
    pub f_r: f64,
    #[serde(rename = "fC")]
    pub f_c: f64,
    pub f: f64,
}

/// Row regret `max(Ry) - xᵀRy`.
pub fn row_regret(g: &Game, x: &[f64], y: &[f64]) -> f64 {
    let ry = g.row_payoffs(y);
    (linalg::max(&ry) - linalg::dot(x, &ry)).max(0.0)
}

/// Column regret `max(Cᵀx) - xᵀCy`.
pub fn col_regret(g: &Game, x: &[f64], y: &[f64]) -> f64 {
    let cx = g.col_payoffs(x);
    (linalg::max(&cx) - linalg::dot(y, &cx)).max(0.0)
}

/// Unchecked regrets; panics on dimension mismatch.
pub fn regrets_of(g: &Game, x: &[f64], y: &[f64]) -> RegretTriple {
    let f_r = row_regret(g, x, y);
    let f_c = col_regret(g, x, y);
    RegretTriple { f_r, f_c, f: f_r.max(f_c) }
}

pub fn regrets(g: &Game, p: &Profile) -> Result<RegretTriple, GameError> {
    p.check(g)?;
    Ok(regrets_of(g, p.x.probs(), p.y.probs()))
}

/// `f(x, y)`; panics on dimension mismatch.
pub fn f_value(g: &Game, p: &Profile) -> f64 {
    regrets_of(g, p.x.probs(), p.y.probs()).f
}

#[derive(Debug, Clone, PartialEq)]
pub struct Supports {
    /// `S_R(y)`: row best responses to `y`.
    pub s_r: Vec<usize>,
    /// `S_C(x)`: column best responses to `x`.
    pub s_c: Vec<usize>,
    pub supp_x: Vec<usize>,
    pub supp_y: Vec<usize>,
}

pub fn supports(g: &Game, p: &Profile, tol: f64) -> Result<Supports, GameError> {
    p.check(g)?;
    Ok(Supports {
        s_r: linalg::suppmax(&g.row_payoffs(p.y.probs()), tol),
        s_c: linalg::suppmax(&g.col_payoffs(p.x.probs()), tol),
        supp_x: p.x.support(tol),
        supp_y: p.y.support(tol),
    })
}

pub fn is_eps_ne(g: &Game, p: &Profile, eps: f64) -> Result<bool, GameError> {
    Ok(regrets(g, p)?.f <= eps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_examples() {
        let g = normalize_game(&vec![vec![2.0, 4.0], vec![6.0, 4.0]], &vec![vec![3.0; 2]; 2]).unwrap();
        assert_eq!(g.r(), &vec![vec![0.0, 0.5], vec![1.0, 0.5]]);
        assert_eq!(g.c(), &vec![vec![0.0; 2]; 2]);
        let r = vec![vec![0.0, 0.3], vec![1.0, 0.7]];
        let g = normalize_game(&r, &r).unwrap();
        assert_eq!(g.r(), &r);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            Game::new(vec![vec![0.0, 1.5]], vec![vec![0.0, 0.0]]),
            Err(GameError::OutOfRange { .. })
        ));
        assert!(matches!(
            Game::new(vec![vec![0.0, 1.0]], vec![vec![0.0]]),
            Err(GameError::DimensionMismatch(_))
        ));
        assert!(matches!(
            normalize_game(&vec![vec![f64::NAN]], &vec![vec![0.0]]),
            Err(GameError::NonFinite(0, 0))
        ));
        assert!(MixedStrategy::new(vec![0.5, -0.1]).is_err());
    }

    #[test]
    fn strategy_cleanup() {
        let s = MixedStrategy::new(vec![0.5, -1e-15, 0.5000001]).unwrap();
        assert_eq!(s.probs()[1], 0.0);
        assert!((s.probs().iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn json_round_trip() {
        let g = Game::new(vec![vec![0.0, 1.0]], vec![vec![0.25, 0.5]]).unwrap();
        let back = Game::from_json(&g.to_json(), false).unwrap();
        assert_eq!(g, back);
        let raw = r#"{"m":1,"n":2,"R":[[0,2]],"C":[[1,3]]}"#;
        assert!(Game::from_json(raw, false).is_err());
        let g = Game::from_json(raw, true).unwrap();
        assert_eq!(g.r(), &vec![vec![0.0, 1.0]]);
    }
}
