//! Per-point update kernels of the high-order sweeps.

use crate::grid::{Grid2D, PointCategory};
use crate::hamiltonian::{
    aux_update, godunov_candidates, godunov_update, lf_update, DerivativeQuad, Hamiltonian,
    NumericalHamiltonian, ViscosityPair,
};
use crate::reconstruction::{
    candidate_derivatives, combine, hweno_derivative_weighted, hybrid_mode, linear_second_derivative,
    mixed_central, ReconstructionMode, Side, StencilData1D,
};

use super::{Approach, SolutionField, SolverConfig};

/// Nonlinear weights of the four one-sided reconstructions at a point:
/// `x-`, `x+`, `y-`, `y+`, three each.
pub type PointWeights = [f64; 12];

/// Read-only inputs shared by every point update of a solve.
pub struct UpdateContext<'a> {
    pub ham: &'a dyn Hamiltonian,
    pub kind: NumericalHamiltonian,
    /// `f`, `f_x`, `f_y` sampled on the padded grid.
    pub f: &'a [f64],
    pub fx: &'a [f64],
    pub fy: &'a [f64],
    pub cfg: &'a SolverConfig,
    /// Dissipation for the `φ` update.
    pub visc: ViscosityPair,
    /// Dissipation for the auxiliary updates.
    pub visc_aux: ViscosityPair,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointUpdate {
    pub phi: f64,
    pub u: f64,
    pub v: f64,
    pub quad: DerivativeQuad,
    pub weights: PointWeights,
}

/// Five samples of `data` centred on `(i, j)` along x (`axis = 0`) or y.
#[inline]
fn line(grid: &Grid2D, data: &[f64], i: usize, j: usize, axis: usize) -> [f64; 5] {
    let step = if axis == 0 { 1 } else { grid.stride() };
    let c = grid.idx(i, j);
    [data[c - 2 * step], data[c - step], data[c], data[c + step], data[c + 2 * step]]
}

/// One-sided derivatives of `φ` at `(i, j)` with the weights used.
///
/// `frozen` substitutes cached nonlinear weights for freshly computed ones.
pub fn reconstruct(
    field: &SolutionField,
    i: usize,
    j: usize,
    cfg: &SolverConfig,
    frozen: Option<&PointWeights>,
) -> (DerivativeQuad, PointWeights) {
    reconstruct_with_centre(field, i, j, cfg, frozen, None)
}

/// As [`reconstruct`], optionally replacing `φ` at `(i, j)` itself by `centre`.
pub fn reconstruct_with_centre(
    field: &SolutionField,
    i: usize,
    j: usize,
    cfg: &SolverConfig,
    frozen: Option<&PointWeights>,
    centre: Option<f64>,
) -> (DerivativeQuad, PointWeights) {
    let grid = &field.grid;
    let h = grid.h;
    let hybrid = cfg.hybrid && field.categories.get(grid, i, j) == PointCategory::IV2;
    let mut out = [0.0; 4];
    let mut weights = [0.0; 12];
    for axis in 0..2 {
        let mut p = line(grid, &field.phi, i, j, axis);
        if let Some(c) = centre {
            p[2] = c;
        }
        let w = line(grid, if axis == 0 { &field.u } else { &field.v }, i, j, axis);
        let du = [w[1], w[3]];
        let stencils = [
            (StencilData1D::minus([p[0], p[1], p[2], p[3]], du, h), [w[0], w[1], w[2], w[3]]),
            (StencilData1D::plus([p[1], p[2], p[3], p[4]], du, h), [w[1], w[2], w[3], w[4]]),
        ];
        for (s, (stencil, big)) in stencils.iter().enumerate() {
            let slot = 2 * axis + s;
            let ws = &mut weights[3 * slot..3 * slot + 3];
            if hybrid && hybrid_mode(big) == ReconstructionMode::Linear {
                out[slot] = candidate_derivatives(stencil)[0];
                ws.copy_from_slice(&cfg.weights.gamma);
            } else if let Some(cached) = frozen {
                let wc = [cached[3 * slot], cached[3 * slot + 1], cached[3 * slot + 2]];
                out[slot] = combine(candidate_derivatives(stencil), wc, cfg.weights.gamma);
                ws.copy_from_slice(&wc);
            } else {
                let (d, wn) = hweno_derivative_weighted(stencil, &cfg.weights);
                out[slot] = d;
                ws.copy_from_slice(&wn);
            }
        }
    }
    (DerivativeQuad::new(out[0], out[1], out[2], out[3]), weights)
}

/// Relaxation factor cap on the outermost ring of domain nodes.
///
/// Their upwind stencils reach the extrapolated ghosts, which makes the
/// linearised update depend on the old nodal value with slope `1 - 143/60·ω`;
/// `ω = 60/143` removes that dependence.
pub const EDGE_OMEGA: f64 = 60.0 / 143.0;

/// Relaxation factor at padded index `(i, j)`.
#[inline]
pub fn relaxation(grid: &Grid2D, i: usize, j: usize, cfg: &SolverConfig) -> f64 {
    let (lo, hi) = (grid.ghost_width, grid.ghost_width + grid.n - 1);
    if i == lo || i == hi || j == lo || j == hi {
        cfg.omega.min(EDGE_OMEGA)
    } else {
        cfg.omega
    }
}

/// Candidate `φ` from the numerical Hamiltonian, before relaxation.
#[inline]
pub fn phi_candidate(phi_old: f64, d: &DerivativeQuad, k: usize, h: f64, ctx: &UpdateContext) -> f64 {
    match ctx.kind {
        NumericalHamiltonian::EikonalGodunov => {
            let (xmin, ymin) = godunov_candidates(phi_old, d, h);
            godunov_update(xmin, ymin, ctx.f[k], h)
        }
        NumericalHamiltonian::LaxFriedrichs => lf_update(phi_old, d, ctx.ham, ctx.f[k], ctx.visc, h),
    }
}

/// Upwind choice between one-sided derivatives; keeps `old` when they disagree in sign.
#[inline]
pub fn upwind_select(minus: f64, plus: f64, old: f64) -> f64 {
    if minus > 0.0 && plus > 0.0 {
        minus
    } else if minus < 0.0 && plus < 0.0 {
        plus
    } else {
        old
    }
}

/// `φ` update, then upwind selection of `u`, `v` from a second reconstruction
/// that sees the new `φ` at the point and the old derivatives.
pub fn approach1_point_update(
    field: &SolutionField,
    i: usize,
    j: usize,
    ctx: &UpdateContext,
    frozen: Option<&PointWeights>,
) -> PointUpdate {
    let grid = &field.grid;
    let k = grid.idx(i, j);
    let (quad, weights) = reconstruct(field, i, j, ctx.cfg, frozen);
    let phi_old = field.phi[k];
    let cand = phi_candidate(phi_old, &quad, k, grid.h, ctx);
    let phi = super::relax(cand, phi_old, relaxation(grid, i, j, ctx.cfg));
    let (after, _) = reconstruct_with_centre(field, i, j, ctx.cfg, frozen, Some(phi));
    PointUpdate {
        phi,
        u: upwind_select(after.px_minus, after.px_plus, field.u[k]),
        v: upwind_select(after.py_minus, after.py_plus, field.v[k]),
        quad,
        weights,
    }
}

/// Derivative quads of `u` and `v` at `(i, j)`: Hermite second derivatives
/// along the own axis, fourth-order central differences across.
pub fn auxiliary_quads(field: &SolutionField, i: usize, j: usize) -> (DerivativeQuad, DerivativeQuad) {
    let grid = &field.grid;
    let h = grid.h;
    let px = line(grid, &field.phi, i, j, 0);
    let py = line(grid, &field.phi, i, j, 1);
    let ux = line(grid, &field.u, i, j, 0);
    let vy = line(grid, &field.v, i, j, 1);
    let second = |p: &[f64; 5], w: &[f64; 5], side| match side {
        Side::Minus => linear_second_derivative([p[0], p[1], p[2], p[3]], [w[1], w[2], w[3]], h, side),
        Side::Plus => linear_second_derivative([p[1], p[2], p[3], p[4]], [w[1], w[2], w[3]], h, side),
    };
    let uy = mixed_central(line(grid, &field.u, i, j, 1), h);
    let vx = mixed_central(line(grid, &field.v, i, j, 0), h);
    (
        DerivativeQuad::new(second(&px, &ux, Side::Minus), second(&px, &ux, Side::Plus), uy, uy),
        DerivativeQuad::new(vx, vx, second(&py, &vy, Side::Minus), second(&py, &vy, Side::Plus)),
    )
}

/// `φ` update as in Approach 1, `u`, `v` from their own Lax-Friedrichs type updates.
pub fn approach2_point_update(
    field: &SolutionField,
    i: usize,
    j: usize,
    ctx: &UpdateContext,
    frozen: Option<&PointWeights>,
) -> PointUpdate {
    let grid = &field.grid;
    let k = grid.idx(i, j);
    let h = grid.h;
    let (quad, weights) = reconstruct(field, i, j, ctx.cfg, frozen);
    let phi_old = field.phi[k];
    let cand = phi_candidate(phi_old, &quad, k, h, ctx);
    let (du, dv) = auxiliary_quads(field, i, j);
    PointUpdate {
        phi: super::relax(cand, phi_old, relaxation(grid, i, j, ctx.cfg)),
        u: aux_update(field.u[k], &quad, &du, ctx.ham, ctx.fx[k], ctx.visc_aux, h),
        v: aux_update(field.v[k], &quad, &dv, ctx.ham, ctx.fy[k], ctx.visc_aux, h),
        quad,
        weights,
    }
}

/// Dispatches on the configured approach.
#[inline]
pub fn point_update(
    field: &SolutionField,
    i: usize,
    j: usize,
    ctx: &UpdateContext,
    frozen: Option<&PointWeights>,
) -> PointUpdate {
    match ctx.cfg.approach {
        Approach::One => approach1_point_update(field, i, j, ctx, frozen),
        Approach::Two => approach2_point_update(field, i, j, ctx, frozen),
    }
}
