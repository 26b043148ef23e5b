//! Dense two-phase simplex (Dantzig pricing with a Bland fallback) and a zero-sum game solver on top.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game::MixedStrategy;
use crate::linalg::{self, Matrix};

/// Feasibility and optimality tolerance.
pub const LP_TOL: f64 = 1e-9;
const DEGENERATE_SWITCH: usize = 50;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum LpError {
    #[error("malformed program: {0}")]
    Malformed(String),
    #[error("no optimal basis within {0} pivots")]
    IterationLimit(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub rel: Relation,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub sense: Sense,
    pub constraints: Vec<Constraint>,
    /// Per-variable lower bound; `f64::NEG_INFINITY` for a free variable.
    pub lower: Vec<f64>,
    pub upper: Vec<Option<f64>>,
}

impl LinearProgram {
    /// A program over nonnegative variables with no constraints yet.
    pub fn new(objective: Vec<f64>, sense: Sense) -> Self {
        let n = objective.len();
        LinearProgram { objective, sense, constraints: Vec::new(), lower: vec![0.0; n], upper: vec![None; n] }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    /// Appends a constraint and returns its index.
    pub fn add(&mut self, coeffs: Vec<f64>, rel: Relation, rhs: f64) -> usize {
        self.constraints.push(Constraint { coeffs, rel, rhs });
        self.constraints.len() - 1
    }

    pub fn set_bounds(&mut self, var: usize, lower: f64, upper: Option<f64>) {
        self.lower[var] = lower;
        self.upper[var] = upper;
    }

    fn validate(&self) -> Result<(), LpError> {
        let n = self.num_vars();
        if self.lower.len() != n || self.upper.len() != n {
            return Err(LpError::Malformed("bounds length differs from objective".into()));
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != n {
                return Err(LpError::Malformed(format!("constraint {i} has width {}", c.coeffs.len())));
            }
            if !c.rhs.is_finite() || c.coeffs.iter().any(|v| !v.is_finite()) {
                return Err(LpError::Malformed(format!("constraint {i} is not finite")));
            }
        }
        for j in 0..n {
            if self.lower[j].is_nan() || self.lower[j] == f64::INFINITY {
                return Err(LpError::Malformed(format!("bad lower bound on variable {j}")));
            }
            if let Some(u) = self.upper[j] {
                if !u.is_finite() || u < self.lower[j] {
                    return Err(LpError::Malformed(format!("bad upper bound on variable {j}")));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpSolution {
    pub status: LpStatus,
    pub primal: Vec<f64>,
    /// One multiplier per constraint, signed so that the objective equals
    /// `Σ dual_i rhs_i` plus bound terms.
    pub dual: Vec<f64>,
    pub objective: f64,
    pub dual_objective: f64,
    pub pivots: usize,
}

impl LpSolution {
    fn empty(status: LpStatus, n: usize, rows: usize, pivots: usize) -> Self {
        LpSolution {
            status,
            primal: vec![0.0; n],
            dual: vec![0.0; rows],
            objective: f64::NAN,
            dual_objective: f64::NAN,
            pivots,
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

struct Tableau {
    rows: Matrix,
    rhs: Vec<f64>,
    basis: Vec<usize>,
    cost: Vec<f64>,
    /// Reduced costs for the current cost vector.
    reduced: Vec<f64>,
    value: f64,
    blocked: Vec<bool>,
    pivots: usize,
    budget: usize,
}

enum Outcome {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn set_cost(&mut self, cost: Vec<f64>) {
        let mut reduced = cost.clone();
        let mut value = 0.0;
        for (r, &b) in self.basis.iter().enumerate() {
            let cb = cost[b];
            if cb != 0.0 {
                for (d, t) in reduced.iter_mut().zip(&self.rows[r]) {
                    *d -= cb * t;
                }
                value += cb * self.rhs[r];
            }
        }
        self.cost = cost;
        self.reduced = reduced;
        self.value = value;
    }

    fn pivot(&mut self, r: usize, col: usize) {
        let p = self.rows[r][col];
        self.rows[r].iter_mut().for_each(|v| *v /= p);
        self.rhs[r] /= p;
        self.rows[r][col] = 1.0;
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r];
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            let factor = self.rows[i][col];
            if factor == 0.0 {
                continue;
            }
            for (v, pv) in self.rows[i].iter_mut().zip(&prow) {
                *v -= factor * pv;
            }
            self.rows[i][col] = 0.0;
            self.rhs[i] -= factor * prhs;
            if self.rhs[i].abs() < 1e-14 {
                self.rhs[i] = 0.0;
            }
        }
        let factor = self.reduced[col];
        if factor != 0.0 {
            for (v, pv) in self.reduced.iter_mut().zip(&prow) {
                *v -= factor * pv;
            }
            self.reduced[col] = 0.0;
            self.value += factor * prhs;
        }
        self.basis[r] = col;
        self.pivots += 1;
    }

    /// Dantzig's rule, switching to Bland's rule (lowest-index improving
    /// column, lowest-index basic variable among tied ratios) after a run
    /// of degenerate pivots.
    fn run(&mut self) -> Result<Outcome, LpError> {
        let mut degenerate = 0usize;
        loop {
            let bland = degenerate >= DEGENERATE_SWITCH;
            let candidates = (0..self.reduced.len()).filter(|&j| !self.blocked[j] && self.reduced[j] < -LP_TOL);
            let entering = if bland {
                candidates.min()
            } else {
                candidates.min_by(|&a, &b| self.reduced[a].partial_cmp(&self.reduced[b]).unwrap().then(a.cmp(&b)))
            };
            let Some(col) = entering else {
                return Ok(Outcome::Optimal);
            };
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.rows.len() {
                let a = self.rows[r][col];
                if a <= LP_TOL {
                    continue;
                }
                let ratio = self.rhs[r].max(0.0) / a;
                leave = match leave {
                    None => Some((r, ratio)),
                    Some((lr, lratio)) => {
                        let tie = (ratio - lratio).abs() <= 1e-12 * (1.0 + lratio.abs());
                        let better = if tie {
                            if bland {
                                self.basis[r] < self.basis[lr]
                            } else {
                                a > self.rows[lr][col]
                            }
                        } else {
                            ratio < lratio
                        };
                        if better {
                            Some((r, ratio))
                        } else {
                            Some((lr, lratio))
                        }
                    }
                };
            }
            let Some((r, ratio)) = leave else {
                return Ok(Outcome::Unbounded);
            };
            if self.pivots >= self.budget {
                return Err(LpError::IterationLimit(self.pivots));
            }
            if ratio <= 1e-12 {
                degenerate += 1;
            } else {
                degenerate = 0;
            }
            self.pivot(r, col);
        }
    }
}

/// Solves `lp`; infeasible and unbounded programs are reported through the
/// status rather than as errors.
pub fn solve_lp(lp: &LinearProgram) -> Result<LpSolution, LpError> {
    lp.validate()?;
    let n = lp.num_vars();
    let sign = if lp.sense == Sense::Maximize { -1.0 } else { 1.0 };

    // Structural columns: x_j = lower_j + x'_j, or x_j = x+ - x- when free.
    let mut col_pos = Vec::with_capacity(n);
    let mut col_neg = Vec::with_capacity(n);
    let mut shift = vec![0.0; n];
    let mut ns = 0;
    for j in 0..n {
        col_pos.push(ns);
        ns += 1;
        if lp.lower[j] == f64::NEG_INFINITY {
            col_neg.push(Some(ns));
            ns += 1;
        } else {
            col_neg.push(None);
            shift[j] = lp.lower[j];
        }
    }
    let structural = |coeffs: &[f64]| -> Vec<f64> {
        let mut row = vec![0.0; ns];
        for j in 0..n {
            row[col_pos[j]] = coeffs[j];
            if let Some(k) = col_neg[j] {
                row[k] = -coeffs[j];
            }
        }
        row
    };

    let mut rows: Vec<(Vec<f64>, Relation, f64)> = Vec::new();
    for c in &lp.constraints {
        let rhs = c.rhs - linalg::dot(&c.coeffs, &shift);
        rows.push((structural(&c.coeffs), c.rel, rhs));
    }
    let user_rows = rows.len();
    for j in 0..n {
        if let Some(u) = lp.upper[j] {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            let rhs = if col_neg[j].is_some() { u } else { u - shift[j] };
            rows.push((structural(&e), Relation::Le, rhs));
        }
    }
    let nr = rows.len();

    let mut flip = vec![1.0; nr];
    for (i, (coeffs, rel, rhs)) in rows.iter_mut().enumerate() {
        if *rhs < 0.0 {
            coeffs.iter_mut().for_each(|v| *v = -*v);
            *rhs = -*rhs;
            *rel = match *rel {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
            flip[i] = -1.0;
        }
    }

    // Column layout: structural | slack/surplus | artificial. Every row owns
    // one identity column (its slack or its artificial) for reading duals.
    let n_slack = rows.iter().filter(|r| r.1 != Relation::Eq).count();
    let n_art = rows.iter().filter(|r| r.1 != Relation::Le).count();
    let total = ns + n_slack + n_art;
    let mut t_rows = vec![vec![0.0; total]; nr];
    let mut rhs = vec![0.0; nr];
    let mut basis = vec![0; nr];
    let mut identity_col = vec![0; nr];
    let mut is_art = vec![false; total];
    let (mut next_slack, mut next_art) = (ns, ns + n_slack);
    for (i, (coeffs, rel, b)) in rows.iter().enumerate() {
        t_rows[i][..ns].copy_from_slice(coeffs);
        rhs[i] = *b;
        match rel {
            Relation::Le => {
                t_rows[i][next_slack] = 1.0;
                basis[i] = next_slack;
                identity_col[i] = next_slack;
                next_slack += 1;
            }
            Relation::Ge | Relation::Eq => {
                if *rel == Relation::Ge {
                    t_rows[i][next_slack] = -1.0;
                    next_slack += 1;
                }
                t_rows[i][next_art] = 1.0;
                is_art[next_art] = true;
                basis[i] = next_art;
                identity_col[i] = next_art;
                next_art += 1;
            }
        }
    }

    let budget = 50 * (total + nr).max(1);
    let mut tab = Tableau {
        rows: t_rows,
        rhs,
        basis,
        cost: Vec::new(),
        reduced: Vec::new(),
        value: 0.0,
        blocked: vec![false; total],
        pivots: 0,
        budget,
    };

    if n_art > 0 {
        tab.set_cost(is_art.iter().map(|&a| if a { 1.0 } else { 0.0 }).collect());
        tab.run()?;
        let scale = 1.0 + tab.rhs.iter().copied().fold(0.0, f64::max);
        if tab.value > LP_TOL * scale {
            return Ok(LpSolution::empty(LpStatus::Infeasible, n, lp.constraints.len(), tab.pivots));
        }
        for r in 0..nr {
            if !is_art[tab.basis[r]] {
                continue;
            }
            let col = (0..total).filter(|&j| !is_art[j]).find(|&j| tab.rows[r][j].abs() > LP_TOL);
            if let Some(col) = col {
                tab.pivot(r, col);
            }
        }
        for j in 0..total {
            tab.blocked[j] = is_art[j];
        }
    }

    let mut cost = vec![0.0; total];
    for j in 0..n {
        cost[col_pos[j]] = sign * lp.objective[j];
        if let Some(k) = col_neg[j] {
            cost[k] = -sign * lp.objective[j];
        }
    }
    tab.set_cost(cost);
    if let Outcome::Unbounded = tab.run()? {
        return Ok(LpSolution::empty(LpStatus::Unbounded, n, lp.constraints.len(), tab.pivots));
    }

    let mut std_x = vec![0.0; total];
    for (r, &b) in tab.basis.iter().enumerate() {
        std_x[b] = tab.rhs[r].max(0.0);
    }
    let primal: Vec<f64> = (0..n)
        .map(|j| {
            let v = std_x[col_pos[j]] + shift[j];
            match col_neg[j] {
                Some(k) => v - std_x[k],
                None => v,
            }
        })
        .collect();
    // y_i = c_B B⁻¹ e_i, and the identity column of row i has zero cost.
    let y_std: Vec<f64> = (0..nr).map(|i| -tab.reduced[identity_col[i]]).collect();
    let const_term: f64 = (0..n).map(|j| sign * lp.objective[j] * shift[j]).sum();
    let dual_min: f64 = (0..nr).map(|i| y_std[i] * rows[i].2).sum::<f64>() + const_term;
    let dual: Vec<f64> = (0..user_rows).map(|i| sign * flip[i] * y_std[i]).collect();
    let objective = linalg::dot(&lp.objective, &primal);
    Ok(LpSolution {
        status: LpStatus::Optimal,
        primal,
        dual,
        objective,
        dual_objective: sign * dual_min,
        pivots: tab.pivots,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZeroSumSolution {
    /// Max-min strategy of the row player.
    pub x: MixedStrategy,
    /// Min-max strategy of the column player.
    pub y: MixedStrategy,
    pub value: f64,
}

/// Solves the zero-sum game where the row player receives `A[i][j]`.
pub fn solve_zero_sum(a: &Matrix) -> Result<ZeroSumSolution, LpError> {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    if m == 0 || n == 0 {
        return Err(LpError::Malformed("empty payoff matrix".into()));
    }
    // Variables: x (m), v (free). max v s.t. v - (Aᵀx)_j <= 0, Σx = 1.
    let mut obj = vec![0.0; m + 1];
    obj[m] = 1.0;
    let mut lp = LinearProgram::new(obj, Sense::Maximize);
    lp.set_bounds(m, f64::NEG_INFINITY, None);
    for j in 0..n {
        let mut row: Vec<f64> = (0..m).map(|i| -a[i][j]).collect();
        row.push(1.0);
        lp.add(row, Relation::Le, 0.0);
    }
    let mut sum = vec![1.0; m];
    sum.push(0.0);
    lp.add(sum, Relation::Eq, 1.0);
    let sol = solve_lp(&lp)?;
    if !sol.is_optimal() {
        return Err(LpError::Malformed(format!("zero-sum LP reported {:?}", sol.status)));
    }
    let x = MixedStrategy::projected(sol.primal[..m].to_vec())
        .map_err(|e| LpError::Malformed(e.to_string()))?;
    let y = MixedStrategy::projected(sol.dual[..n].to_vec())
        .map_err(|e| LpError::Malformed(e.to_string()))?;
    Ok(ZeroSumSolution { x, y, value: sol.primal[m] })
}
