//! First-order fast sweeping used to seed the high-order iteration.

use crate::error::{HjError, Result};
use crate::grid::{classify_points, sweep_orderings, Grid2D, Rect};
use crate::hamiltonian::{godunov_update, lf_bounds, Hamiltonian, NumericalHamiltonian, ViscosityPair};
use crate::problems::ProblemSpec;

use super::ghost::ghost_extrapolate;
use super::SolutionField;

/// Iteration cap of the first-order sweeps.
pub const FIRST_ORDER_MAX_ITERATIONS: usize = 5000;
/// Stop once the mean change over swept points falls below this.
pub const FIRST_ORDER_TOL: f64 = 1e-13;
/// Value that seeds the Lax-Friedrichs sweeps from above.
const LF_SEED: f64 = 1e6;

/// Converged first-order solution with upwind one-sided derivatives.
///
/// Category I/III points carry the problem's prescription throughout.
pub fn first_order_init(problem: &ProblemSpec, grid: &Grid2D) -> Result<(SolutionField, usize)> {
    let categories = classify_points(grid, &problem.gamma, &problem.preassign_boxes);
    let mut field = SolutionField::new(*grid, categories);
    for (i, j) in grid.interior() {
        let k = grid.idx(i, j);
        if field.categories.labels[k].is_prescribed() {
            let [phi, u, v] = (problem.prescribe)(grid.x(i), grid.y(j));
            field.phi[k] = phi;
            field.u[k] = u;
            field.v[k] = v;
        }
    }
    let f = sample(grid, &*problem.hamiltonian.f);
    let iterations = match problem.hamiltonian.kind {
        NumericalHamiltonian::EikonalGodunov => godunov_first_order(&mut field, &f)?,
        NumericalHamiltonian::LaxFriedrichs => {
            let Some(uv_box) = derivative_box(&field, true) else {
                return Err(HjError::Initialization("no prescribed points to seed from".into()));
            };
            let visc = lf_bounds(&*problem.hamiltonian.hamiltonian, inflate(uv_box, 1.2), 1.0)?;
            lf_first_order(&mut field, &*problem.hamiltonian.hamiltonian, &f, visc)?
        }
    };
    upwind_differences(&mut field);
    ghost_extrapolate(&mut field);
    Ok((field, iterations))
}

/// Samples a spatial function on every padded node.
pub fn sample(grid: &Grid2D, g: &(dyn Fn(f64, f64) -> f64 + Send + Sync)) -> Vec<f64> {
    let s = grid.stride();
    let mut out = vec![0.0; grid.len()];
    for j in 0..s {
        for i in 0..s {
            out[grid.idx(i, j)] = g(grid.x(i), grid.y(j));
        }
    }
    out
}

/// Bounding box of `(u, v)` over domain nodes, optionally only prescribed ones.
pub fn derivative_box(field: &SolutionField, prescribed_only: bool) -> Option<Rect> {
    let grid = &field.grid;
    let mut b: Option<Rect> = None;
    for (i, j) in grid.interior() {
        let k = grid.idx(i, j);
        if prescribed_only && !field.categories.labels[k].is_prescribed() {
            continue;
        }
        let (u, v) = (field.u[k], field.v[k]);
        b = Some(match b {
            None => Rect::new(u, u, v, v),
            Some(r) => Rect::new(r.x0.min(u), r.x1.max(u), r.y0.min(v), r.y1.max(v)),
        });
    }
    b
}

/// Scales a box about its centre.
pub fn inflate(r: Rect, factor: f64) -> Rect {
    let (cx, cy) = (0.5 * (r.x0 + r.x1), 0.5 * (r.y0 + r.y1));
    let (hx, hy) = (0.5 * factor * (r.x1 - r.x0), 0.5 * factor * (r.y1 - r.y0));
    Rect::new(cx - hx, cx + hx, cy - hy, cy + hy)
}

fn is_swept(field: &SolutionField, k: usize) -> bool {
    field.categories.labels[k].is_swept()
}

/// First-order Godunov sweeping from `+∞`, keeping the smaller value.
fn godunov_first_order(field: &mut SolutionField, f: &[f64]) -> Result<usize> {
    let grid = field.grid;
    let (h, gw, n) = (grid.h, grid.ghost_width, grid.n);
    let swept: Vec<usize> = grid.interior().map(|(i, j)| grid.idx(i, j)).filter(|&k| is_swept(field, k)).collect();
    for &k in &swept {
        field.phi[k] = f64::INFINITY;
    }
    let range = grid.interior_range();
    let value = |phi: &[f64], i: usize, j: usize| {
        if range.contains(&i) && range.contains(&j) {
            phi[grid.idx(i, j)]
        } else {
            f64::INFINITY
        }
    };
    for it in 1..=FIRST_ORDER_MAX_ITERATIONS {
        let mut change = 0.0;
        for order in sweep_orderings() {
            for (ii, jj) in order.visit(n) {
                let (i, j) = (ii + gw, jj + gw);
                let k = grid.idx(i, j);
                if !is_swept(field, k) {
                    continue;
                }
                let a = value(&field.phi, i - 1, j).min(value(&field.phi, i + 1, j));
                let b = value(&field.phi, i, j - 1).min(value(&field.phi, i, j + 1));
                let fh = f[k] * h;
                let new = match (a.is_finite(), b.is_finite()) {
                    (false, false) => continue,
                    (true, false) => a + fh,
                    (false, true) => b + fh,
                    (true, true) => godunov_update(a, b, f[k], h),
                };
                let old = field.phi[k];
                if new < old {
                    change += if old.is_finite() { old - new } else { 1.0 };
                    field.phi[k] = new;
                }
            }
        }
        if change <= FIRST_ORDER_TOL * swept.len().max(1) as f64 {
            if swept.iter().any(|&k| !field.phi[k].is_finite()) {
                return Err(HjError::Initialization("swept points unreachable from Γ".into()));
            }
            return Ok(it);
        }
    }
    Err(HjError::Initialization(format!(
        "first-order Godunov sweeps did not settle in {FIRST_ORDER_MAX_ITERATIONS} iterations"
    )))
}

/// First-order Lax-Friedrichs sweeping from a large value, keeping the
/// smaller value, with linear extrapolation capped from below at domain edges.
fn lf_first_order(
    field: &mut SolutionField,
    ham: &dyn Hamiltonian,
    f: &[f64],
    visc: ViscosityPair,
) -> Result<usize> {
    let grid = field.grid;
    let (h, gw, n) = (grid.h, grid.ghost_width, grid.n);
    let swept: Vec<usize> = grid.interior().map(|(i, j)| grid.idx(i, j)).filter(|&k| is_swept(field, k)).collect();
    for &k in &swept {
        field.phi[k] = LF_SEED;
    }
    let (lo, hi) = (gw, gw + n - 1);
    let s = grid.stride();
    let scale = h / (visc.alpha + visc.beta);
    for it in 1..=FIRST_ORDER_MAX_ITERATIONS {
        let mut change = 0.0;
        for order in sweep_orderings() {
            for (ii, jj) in order.visit(n) {
                let (i, j) = (ii + gw, jj + gw);
                if i == lo || i == hi || j == lo || j == hi {
                    continue;
                }
                let k = grid.idx(i, j);
                if !is_swept(field, k) {
                    continue;
                }
                let phi = &field.phi;
                let (w, e, so, no) = (phi[k - 1], phi[k + 1], phi[k - s], phi[k + s]);
                let p = (e - w) / (2.0 * h);
                let q = (no - so) / (2.0 * h);
                let new = scale
                    * (f[k] - ham.value(p, q) + visc.alpha * (e + w) / (2.0 * h) + visc.beta * (no + so) / (2.0 * h));
                let old = phi[k];
                if new < old {
                    change += old - new;
                    field.phi[k] = new;
                }
            }
            change += lf_edges(field, lo, hi);
        }
        if field.phi.iter().any(|v| v.is_nan()) {
            return Err(HjError::Initialization("non-finite value in first-order sweeps".into()));
        }
        if change <= FIRST_ORDER_TOL * swept.len().max(1) as f64 {
            return Ok(it);
        }
    }
    Err(HjError::Initialization(format!(
        "first-order Lax-Friedrichs sweeps did not settle in {FIRST_ORDER_MAX_ITERATIONS} iterations"
    )))
}

/// Edge rule `φ_b = min(max(2φ_1 - φ_2, φ_2), φ_b)` on swept edge nodes.
fn lf_edges(field: &mut SolutionField, lo: usize, hi: usize) -> f64 {
    let grid = field.grid;
    let mut change = 0.0;
    let mut apply = |field: &mut SolutionField, b: (usize, usize), p1: (usize, usize), p2: (usize, usize)| {
        let k = grid.idx(b.0, b.1);
        if !is_swept(field, k) {
            return;
        }
        let (v1, v2) = (field.phi[grid.idx(p1.0, p1.1)], field.phi[grid.idx(p2.0, p2.1)]);
        let cand = (2.0 * v1 - v2).max(v2);
        if cand < field.phi[k] {
            change += field.phi[k] - cand;
            field.phi[k] = cand;
        }
    };
    for t in lo..=hi {
        apply(field, (lo, t), (lo + 1, t), (lo + 2, t));
        apply(field, (hi, t), (hi - 1, t), (hi - 2, t));
        apply(field, (t, lo), (t, lo + 1), (t, lo + 2));
        apply(field, (t, hi), (t, hi - 1), (t, hi - 2));
    }
    change
}

/// One-sided differences of `φ` at swept points, chosen by sign like the
/// Approach 1 rule; the average is used when the signs disagree.
fn upwind_differences(field: &mut SolutionField) {
    let grid = field.grid;
    let h = grid.h;
    let range = grid.interior_range();
    for (i, j) in grid.interior() {
        let k = grid.idx(i, j);
        if !is_swept(field, k) {
            continue;
        }
        for axis in 0..2 {
            let (back, fwd) = if axis == 0 { ((i - 1, j), (i + 1, j)) } else { ((i, j - 1), (i, j + 1)) };
            let inside = |(a, b): (usize, usize)| range.contains(&a) && range.contains(&b);
            let minus = inside(back).then(|| (field.phi[k] - field.phi[grid.idx(back.0, back.1)]) / h);
            let plus = inside(fwd).then(|| (field.phi[grid.idx(fwd.0, fwd.1)] - field.phi[k]) / h);
            let d = match (minus, plus) {
                (Some(m), Some(p)) if m > 0.0 && p > 0.0 => m,
                (Some(m), Some(p)) if m < 0.0 && p < 0.0 => p,
                (Some(m), Some(p)) => 0.5 * (m + p),
                (Some(m), None) => m,
                (None, Some(p)) => p,
                (None, None) => 0.0,
            };
            if axis == 0 {
                field.u[k] = d;
            } else {
                field.v[k] = d;
            }
        }
    }
}
