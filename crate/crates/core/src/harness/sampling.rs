//! Initial-point samplers.

use rand::Rng;

use crate::game::{MixedStrategy, Profile};

fn normalize(v: Vec<f64>) -> MixedStrategy {
    if v.iter().sum::<f64>() > 0.0 {
        MixedStrategy::new(v).expect("nonnegative entries")
    } else {
        MixedStrategy::uniform(v.len())
    }
}

fn perturb<R: Rng + ?Sized>(s: &MixedStrategy, r: f64, rng: &mut R) -> MixedStrategy {
    let v = s.probs().iter().map(|p| (p + rng.gen_range(-r..=r)).max(0.0)).collect();
    normalize(v)
}

/// Adds independent `U[−r, r]` noise to every coordinate, clips negatives
/// and renormalizes.
pub fn perturbed<R: Rng + ?Sized>(center: &Profile, r: f64, rng: &mut R) -> Profile {
    if r <= 0.0 {
        return center.clone();
    }
    Profile::new(perturb(&center.x, r, rng), perturb(&center.y, r, rng))
}

fn cube_point<R: Rng + ?Sized>(k: usize, rng: &mut R) -> MixedStrategy {
    normalize((0..k).map(|_| rng.gen::<f64>()).collect())
}

/// Normalized uniform cube points.
pub fn cube_profile<R: Rng + ?Sized>(m: usize, n: usize, rng: &mut R) -> Profile {
    Profile::new(cube_point(m, rng), cube_point(n, rng))
}

/// Normalized uniform cube points at L∞ distance at least `r` from `center`.
pub fn outside_ball<R: Rng + ?Sized>(center: &Profile, r: f64, rng: &mut R) -> Profile {
    loop {
        let p = cube_profile(center.x.len(), center.y.len(), rng);
        if p.dist(center) >= r {
            return p;
        }
    }
}

/// Uniform point of the simplex `Δ_k`.
pub fn uniform_simplex<R: Rng + ?Sized>(k: usize, rng: &mut R) -> MixedStrategy {
    let v: Vec<f64> = (0..k).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    normalize(v)
}

/// One cell of the subdivision of `Δ_k` into `N^{k−1}` congruent simplices:
/// a non-increasing base point `c ∈ {0..N−1}^{k−1}` and an ordering of the
/// fractional coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    base: Vec<usize>,
    order: Vec<usize>,
}

fn permutations(d: usize) -> Vec<Vec<usize>> {
    if d == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(d - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, d - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

fn bases(d: usize, resolution: usize, hi: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if prefix.len() == d {
        out.push(prefix.clone());
        return;
    }
    for v in (0..=hi.min(resolution - 1)).rev() {
        prefix.push(v);
        bases(d, resolution, v, prefix, out);
        prefix.pop();
    }
}

/// All `resolution^{k−1}` cells of `Δ_k`.
pub fn lattice_cells(k: usize, resolution: usize) -> Vec<Cell> {
    assert!(k >= 1 && resolution >= 1, "lattice needs k >= 1 and resolution >= 1");
    let d = k - 1;
    let mut all = Vec::new();
    bases(d, resolution, resolution - 1, &mut Vec::new(), &mut all);
    let perms = permutations(d);
    let mut cells = Vec::new();
    for base in all {
        for order in &perms {
            let rank: Vec<usize> = {
                let mut r = vec![0; d];
                for (pos, &i) in order.iter().enumerate() {
                    r[i] = pos;
                }
                r
            };
            let ok = (0..d.saturating_sub(1)).all(|i| base[i] != base[i + 1] || rank[i] < rank[i + 1]);
            if ok {
                cells.push(Cell { base: base.clone(), order: order.clone() });
            }
        }
    }
    cells
}

/// Uniform point inside `cell`.
pub fn sample_cell<R: Rng + ?Sized>(cell: &Cell, resolution: usize, rng: &mut R) -> MixedStrategy {
    let d = cell.base.len();
    let mut s: Vec<f64> = (0..d).map(|_| rng.gen::<f64>()).collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut t = vec![0.0; d];
    for (pos, &i) in cell.order.iter().enumerate() {
        t[i] = cell.base[i] as f64 + s[pos];
    }
    let nf = resolution as f64;
    let mut p = Vec::with_capacity(d + 1);
    p.push(1.0 - t.first().copied().unwrap_or(0.0) / nf);
    for i in 0..d {
        let next = if i + 1 < d { t[i + 1] } else { 0.0 };
        p.push((t[i] - next) / nf);
    }
    normalize(p.into_iter().map(|v| v.max(0.0)).collect())
}

/// One point per cell of `Δ_m × Δ_n`, `(resolution^{m−1} · resolution^{n−1})` in all.
pub fn lattice_profiles<R: Rng + ?Sized>(m: usize, n: usize, resolution: usize, rng: &mut R) -> Vec<Profile> {
    let cx = lattice_cells(m, resolution);
    let cy = lattice_cells(n, resolution);
    let mut out = Vec::with_capacity(cx.len() * cy.len());
    for a in &cx {
        for b in &cy {
            out.push(Profile::new(sample_cell(a, resolution, rng), sample_cell(b, resolution, rng)));
        }
    }
    out
}
