//! Gauss-Seidel fast sweeping with HWENO reconstructions.

mod ghost;
mod init;
mod update;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

pub use ghost::{
    extrapolate_array, extrapolation_weights, ghost_extrapolate, lagrange_derivative_weights, lagrange_weights,
    PHI_POINTS, TANGENT_POINTS,
};
pub use init::{derivative_box, first_order_init, inflate, sample, FIRST_ORDER_MAX_ITERATIONS};
pub use update::{
    approach1_point_update, approach2_point_update, auxiliary_quads, phi_candidate, point_update,
    reconstruct, reconstruct_with_centre, relaxation, upwind_select, PointUpdate, PointWeights, UpdateContext,
    EDGE_OMEGA,
};

use crate::error::{HjError, Result};
use crate::grid::{sweep_orderings, CategoryField, Grid2D};
use crate::hamiltonian::lf_bounds;
use crate::problems::ProblemSpec;
use crate::reconstruction::WeightConfig;

/// `φ`, `u = φ_x`, `v = φ_y` on the padded grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionField {
    pub grid: Grid2D,
    pub phi: Vec<f64>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub categories: CategoryField,
}

impl SolutionField {
    pub fn new(grid: Grid2D, categories: CategoryField) -> Self {
        let len = grid.len();
        Self { grid, phi: vec![0.0; len], u: vec![0.0; len], v: vec![0.0; len], categories }
    }

    /// `φ` at padded index `(i, j)`.
    pub fn phi_at(&self, i: usize, j: usize) -> f64 {
        self.phi[self.grid.idx(i, j)]
    }
}

/// How the derivative field `(u, v)` is advanced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Approach {
    /// Reuse the reconstructed one-sided derivatives of `φ`.
    One,
    /// Solve the auxiliary equations for `u` and `v`.
    Two,
}

impl FromStr for Approach {
    type Err = HjError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "1" | "one" | "approach1" => Ok(Approach::One),
            "2" | "two" | "approach2" => Ok(Approach::Two),
            other => Err(HjError::Config(format!("unknown approach `{other}`"))),
        }
    }
}

impl fmt::Display for Approach {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Approach::One => "1",
            Approach::Two => "2",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub approach: Approach,
    /// Linear reconstruction at Category IV.2 points with one-signed derivatives.
    pub hybrid: bool,
    /// Relaxation factor in `(0, 2)`.
    pub omega: f64,
    pub weights: WeightConfig,
    /// Stop once the mean `|Δφ|` over one iteration drops below this.
    pub delta_tol: f64,
    pub max_iterations: usize,
    /// Multiplier on the dissipation of the auxiliary updates.
    pub aux_boost: f64,
    /// Freeze the nonlinear weights once their mean change per iteration drops below this.
    pub freeze_tol: Option<f64>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            approach: Approach::One,
            hybrid: false,
            omega: 0.7,
            weights: WeightConfig::default(),
            delta_tol: 1e-14,
            max_iterations: 500,
            aux_boost: 2.0,
            freeze_tol: None,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        self.weights.validate()?;
        if !(self.omega > 0.0 && self.omega < 2.0) {
            return Err(HjError::Config(format!("omega must lie in (0, 2), got {}", self.omega)));
        }
        if !(self.delta_tol > 0.0) {
            return Err(HjError::Config(format!("delta_tol must be positive, got {}", self.delta_tol)));
        }
        if self.max_iterations == 0 {
            return Err(HjError::Config("max_iterations must be at least 1".into()));
        }
        if !(self.aux_boost >= 1.0) {
            return Err(HjError::Config(format!("aux_boost must be at least 1, got {}", self.aux_boost)));
        }
        if let Some(t) = self.freeze_tol {
            if !(t > 0.0) {
                return Err(HjError::Config(format!("freeze_tol must be positive, got {t}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepReport {
    pub iterations: usize,
    pub delta_history: Vec<f64>,
    pub converged: bool,
    pub l1_error: Option<f64>,
    pub linf_error: Option<f64>,
    pub wall_time: f64,
    pub weights_frozen_at: Option<usize>,
    pub first_order_iterations: usize,
}

#[inline]
pub fn relax(candidate: f64, old: f64, omega: f64) -> f64 {
    omega * candidate + (1.0 - omega) * old
}

#[inline]
pub fn weight_freeze_check(weight_delta_l1: f64, freeze_tol: f64) -> bool {
    weight_delta_l1 < freeze_tol
}

/// Runs the first-order initialisation and the high-order sweeps to convergence.
///
/// Errors against the exact solution are filled in when the problem has one.
pub fn solve(problem: &ProblemSpec, grid: &Grid2D, cfg: &SolverConfig) -> Result<(SolutionField, SweepReport)> {
    cfg.validate()?;
    let start = Instant::now();
    let (mut field, first_order_iterations) = first_order_init(problem, grid)?;

    let ham = &*problem.hamiltonian.hamiltonian;
    let uv_box = derivative_box(&field, false).expect("grid has domain nodes");
    let visc = lf_bounds(ham, inflate(uv_box, 1.2), 1.0)?;
    let f = sample(grid, &*problem.hamiltonian.f);
    let fx = sample(grid, &*problem.hamiltonian.fx);
    let fy = sample(grid, &*problem.hamiltonian.fy);
    let ctx = UpdateContext {
        ham,
        kind: problem.hamiltonian.kind,
        f: &f,
        fx: &fx,
        fy: &fy,
        cfg,
        visc,
        visc_aux: visc.scaled(cfg.aux_boost),
    };

    let (gw, n) = (grid.ghost_width, grid.n);
    let swept: Vec<usize> = grid
        .interior()
        .map(|(i, j)| grid.idx(i, j))
        .filter(|&k| field.categories.labels[k].is_swept())
        .collect();
    let tracking = cfg.freeze_tol.is_some();
    let mut cache: Vec<PointWeights> = if tracking { vec![[0.0; 12]; grid.len()] } else { Vec::new() };
    let mut snapshot = cache.clone();
    let mut frozen = false;

    let mut report = SweepReport { first_order_iterations, ..SweepReport::default() };
    let mut prev = field.phi.clone();
    for it in 1..=cfg.max_iterations {
        prev.copy_from_slice(&field.phi);
        if tracking && !frozen {
            snapshot.copy_from_slice(&cache);
        }
        for order in sweep_orderings() {
            for (ii, jj) in order.visit(n) {
                let (i, j) = (ii + gw, jj + gw);
                let k = grid.idx(i, j);
                if !field.categories.labels[k].is_swept() {
                    continue;
                }
                let fixed = if frozen { Some(&cache[k]) } else { None };
                let upd = point_update(&field, i, j, &ctx, fixed);
                if !(upd.phi.is_finite() && upd.u.is_finite() && upd.v.is_finite()) {
                    return Err(HjError::Divergence { iteration: it });
                }
                field.phi[k] = upd.phi;
                field.u[k] = upd.u;
                field.v[k] = upd.v;
                if tracking && !frozen {
                    cache[k] = upd.weights;
                }
            }
            ghost_extrapolate(&mut field);
        }

        let delta = if swept.is_empty() {
            0.0
        } else {
            swept.iter().map(|&k| (field.phi[k] - prev[k]).abs()).sum::<f64>() / swept.len() as f64
        };
        report.delta_history.push(delta);
        report.iterations = it;
        if delta < cfg.delta_tol {
            report.converged = true;
            break;
        }
        if let (Some(tol), false) = (cfg.freeze_tol, frozen) {
            if it >= 2 && !swept.is_empty() {
                let change: f64 = swept
                    .iter()
                    .map(|&k| cache[k].iter().zip(&snapshot[k]).map(|(a, b)| (a - b).abs()).sum::<f64>())
                    .sum::<f64>()
                    / (12 * swept.len()) as f64;
                if weight_freeze_check(change, tol) {
                    frozen = true;
                    report.weights_frozen_at = Some(it);
                }
            }
        }
    }
    report.wall_time = start.elapsed().as_secs_f64();
    if problem.exact.is_some() {
        if let Ok((l1, linf)) = crate::report::error_norms(&field, problem) {
            report.l1_error = Some(l1);
            report.linf_error = Some(linf);
        }
    }
    Ok((field, report))
}
