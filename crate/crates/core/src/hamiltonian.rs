//! Hamiltonians and the pointwise update formulas of the sweeping schemes.

use std::fmt;
use std::sync::Arc;

use crate::error::{HjError, Result};
use crate::grid::Rect;

/// A Hamiltonian `H(p, q)` of the gradient `(p, q) = (φ_x, φ_y)` with its
/// partial derivatives.
pub trait Hamiltonian: Send + Sync + fmt::Debug {
    fn value(&self, p: f64, q: f64) -> f64;
    /// `∂H/∂p`.
    fn dp(&self, p: f64, q: f64) -> f64;
    /// `∂H/∂q`.
    fn dq(&self, p: f64, q: f64) -> f64;
}

/// `H = sqrt(p² + q²)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Isotropic;

impl Hamiltonian for Isotropic {
    fn value(&self, p: f64, q: f64) -> f64 {
        p.hypot(q)
    }

    fn dp(&self, p: f64, q: f64) -> f64 {
        let r = p.hypot(q);
        if r > 0.0 {
            p / r
        } else {
            0.0
        }
    }

    fn dq(&self, p: f64, q: f64) -> f64 {
        self.dp(q, p)
    }
}

/// `H = a p + b q`.
#[derive(Debug, Clone, Copy)]
pub struct Linear {
    pub a: f64,
    pub b: f64,
}

impl Hamiltonian for Linear {
    fn value(&self, p: f64, q: f64) -> f64 {
        self.a * p + self.b * q
    }

    fn dp(&self, _: f64, _: f64) -> f64 {
        self.a
    }

    fn dq(&self, _: f64, _: f64) -> f64 {
        self.b
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WaveBranch {
    /// Quasi-P (compressional), convex.
    QuasiP,
    /// Quasi-SV (shear), nonconvex.
    QuasiSv,
}

/// Travel-time Hamiltonian of a 2D transversely isotropic elastic medium.
///
/// With `A = -(c4 p² + c5 q²)/2`, `Q = c1 p⁴ + c2 p² q² + c3 q⁴` and
/// `D = A² - Q`, the two branches are `H = sqrt(A ± sqrt(D))`.
#[derive(Debug, Clone, Copy)]
pub struct ElasticWave {
    pub c: [f64; 5],
    pub branch: WaveBranch,
}

impl ElasticWave {
    pub fn from_stiffness(a11: f64, a33: f64, a13: f64, a44: f64, branch: WaveBranch) -> Self {
        let c = [
            a11 * a44,
            a11 * a33 + a44 * a44 - (a13 + a44) * (a13 + a44),
            a33 * a44,
            -(a11 + a44),
            -(a33 + a44),
        ];
        Self { c, branch }
    }

    fn sign(&self) -> f64 {
        match self.branch {
            WaveBranch::QuasiP => 1.0,
            WaveBranch::QuasiSv => -1.0,
        }
    }

    /// `(A, Q, D)` at the gradient.
    fn parts(&self, p: f64, q: f64) -> (f64, f64, f64) {
        let [c1, c2, c3, c4, c5] = self.c;
        let (p2, q2) = (p * p, q * q);
        let a = -0.5 * (c4 * p2 + c5 * q2);
        let quart = c1 * p2 * p2 + c2 * p2 * q2 + c3 * q2 * q2;
        (a, quart, (a * a - quart).max(0.0))
    }

    /// Gradient of `H` via the chain rule through `A`, `Q`, `D`.
    fn gradient(&self, p: f64, q: f64) -> (f64, f64) {
        let [c1, c2, c3, c4, c5] = self.c;
        let (a, _, d) = self.parts(p, q);
        let s = self.sign();
        let root = d.sqrt();
        let hv = (a + s * root).max(0.0).sqrt();
        if hv == 0.0 || root == 0.0 {
            return (0.0, 0.0);
        }
        let (p2, q2) = (p * p, q * q);
        let (a_p, a_q) = (-c4 * p, -c5 * q);
        let quart_p = 4.0 * c1 * p2 * p + 2.0 * c2 * p * q2;
        let quart_q = 4.0 * c3 * q2 * q + 2.0 * c2 * p2 * q;
        let d_p = 2.0 * a * a_p - quart_p;
        let d_q = 2.0 * a * a_q - quart_q;
        let g_p = (a_p + s * d_p / (2.0 * root)) / (2.0 * hv);
        let g_q = (a_q + s * d_q / (2.0 * root)) / (2.0 * hv);
        (g_p, g_q)
    }
}

impl Hamiltonian for ElasticWave {
    fn value(&self, p: f64, q: f64) -> f64 {
        let (a, _, d) = self.parts(p, q);
        (a + self.sign() * d.sqrt()).max(0.0).sqrt()
    }

    fn dp(&self, p: f64, q: f64) -> f64 {
        self.gradient(p, q).0
    }

    fn dq(&self, p: f64, q: f64) -> f64 {
        self.gradient(p, q).1
    }
}

/// Which monotone numerical Hamiltonian drives the `φ` update.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NumericalHamiltonian {
    /// Closed-form Godunov solve; only valid for `H = |∇φ|`.
    EikonalGodunov,
    LaxFriedrichs,
}

pub type SpatialFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// `H(∇φ) = f(x, y)` together with the partials of the right-hand side.
#[derive(Clone)]
pub struct HamiltonianSpec {
    pub kind: NumericalHamiltonian,
    pub hamiltonian: Arc<dyn Hamiltonian>,
    pub f: SpatialFn,
    pub fx: SpatialFn,
    pub fy: SpatialFn,
}

impl fmt::Debug for HamiltonianSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HamiltonianSpec")
            .field("kind", &self.kind)
            .field("hamiltonian", &self.hamiltonian)
            .finish_non_exhaustive()
    }
}

/// Reconstructed one-sided derivatives at a point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DerivativeQuad {
    pub px_minus: f64,
    pub px_plus: f64,
    pub py_minus: f64,
    pub py_plus: f64,
}

impl DerivativeQuad {
    pub fn new(px_minus: f64, px_plus: f64, py_minus: f64, py_plus: f64) -> Self {
        Self { px_minus, px_plus, py_minus, py_plus }
    }

    pub fn average(&self) -> (f64, f64) {
        (0.5 * (self.px_minus + self.px_plus), 0.5 * (self.py_minus + self.py_plus))
    }

    pub fn is_finite(&self) -> bool {
        [self.px_minus, self.px_plus, self.py_minus, self.py_plus]
            .iter()
            .all(|v| v.is_finite())
    }
}

/// Lax-Friedrichs dissipation constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ViscosityPair {
    pub alpha: f64,
    pub beta: f64,
}

impl ViscosityPair {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha >= 0.0 && beta >= 0.0 && alpha + beta > 0.0) || !(alpha + beta).is_finite() {
            return Err(HjError::Config(format!(
                "invalid viscosity constants alpha={alpha}, beta={beta}"
            )));
        }
        Ok(Self { alpha, beta })
    }

    pub fn scaled(self, factor: f64) -> Self {
        Self { alpha: self.alpha * factor, beta: self.beta * factor }
    }
}

const BOUND_SAMPLES: usize = 101;

/// Maxima of `|H_p|` and `|H_q|` over `uv_box`, times `boost`.
///
/// A 101x101 lattice locates the maxima, which are then polished by a
/// shrinking compass search clamped to the box.
pub fn lf_bounds(ham: &dyn Hamiltonian, uv_box: Rect, boost: f64) -> Result<ViscosityPair> {
    if uv_box.x1 < uv_box.x0 || uv_box.y1 < uv_box.y0 || !(boost >= 1.0) {
        return Err(HjError::Config(format!(
            "invalid derivative box {uv_box:?} or boost {boost}"
        )));
    }
    let alpha = box_max(uv_box, |p, q| ham.dp(p, q).abs())?;
    let beta = box_max(uv_box, |p, q| ham.dq(p, q).abs())?;
    ViscosityPair::new(boost * alpha, boost * beta)
}

fn box_max(b: Rect, g: impl Fn(f64, f64) -> f64) -> Result<f64> {
    let m = (BOUND_SAMPLES - 1) as f64;
    let (dx, dy) = ((b.x1 - b.x0) / m, (b.y1 - b.y0) / m);
    let mut best = (f64::NEG_INFINITY, b.x0, b.y0);
    for j in 0..BOUND_SAMPLES {
        for i in 0..BOUND_SAMPLES {
            let (p, q) = (b.x0 + i as f64 * dx, b.y0 + j as f64 * dy);
            let v = g(p, q);
            if !v.is_finite() {
                return Err(HjError::Evaluation(format!(
                    "non-finite Hamiltonian derivative at ({p}, {q})"
                )));
            }
            if v > best.0 {
                best = (v, p, q);
            }
        }
    }
    let (mut sx, mut sy) = (dx, dy);
    for _ in 0..60 {
        let mut moved = false;
        for (ox, oy) in [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)] {
            let p = (best.1 + ox * sx).clamp(b.x0, b.x1);
            let q = (best.2 + oy * sy).clamp(b.y0, b.y1);
            let v = g(p, q);
            if v.is_finite() && v > best.0 {
                best = (v, p, q);
                moved = true;
            }
        }
        if !moved {
            sx *= 0.5;
            sy *= 0.5;
        }
    }
    Ok(best.0)
}

/// Lax-Friedrichs sweeping update.
#[inline]
pub fn lf_update(
    phi_old: f64,
    d: &DerivativeQuad,
    ham: &dyn Hamiltonian,
    f_val: f64,
    visc: ViscosityPair,
    h: f64,
) -> f64 {
    let (p, q) = d.average();
    let residual = f_val - ham.value(p, q)
        + 0.5 * visc.alpha * (d.px_plus - d.px_minus)
        + 0.5 * visc.beta * (d.py_plus - d.py_minus);
    h / (visc.alpha + visc.beta) * residual + phi_old
}

/// Upwind neighbour estimates `(φ^xmin, φ^ymin)` for the Godunov solve.
#[inline]
pub fn godunov_candidates(phi_old: f64, d: &DerivativeQuad, h: f64) -> (f64, f64) {
    (
        (phi_old - h * d.px_minus).min(phi_old + h * d.px_plus),
        (phi_old - h * d.py_minus).min(phi_old + h * d.py_plus),
    )
}

/// Closed-form solution of the Godunov-discretized Eikonal equation at a point.
#[inline]
pub fn godunov_update(xmin: f64, ymin: f64, f_val: f64, h: f64) -> f64 {
    let fh = f_val * h;
    let gap = xmin - ymin;
    if gap.abs() >= fh {
        xmin.min(ymin) + fh
    } else {
        let disc = 2.0 * fh * fh - gap * gap;
        // positive whenever |gap| < fh; NaN passes through to divergence detection
        debug_assert!(!(disc < 0.0));
        0.5 * (xmin + ymin + disc.sqrt())
    }
}

/// Lax-Friedrichs type update of an auxiliary variable `w ∈ {u, v}`.
///
/// `d_phi` drives the characteristic speeds, `d_w` holds the one-sided
/// derivatives of `w` and `rhs_derivative` is `f_x` (for `u`) or `f_y` (for `v`).
#[inline]
pub fn aux_update(
    w_old: f64,
    d_phi: &DerivativeQuad,
    d_w: &DerivativeQuad,
    ham: &dyn Hamiltonian,
    rhs_derivative: f64,
    visc: ViscosityPair,
    h: f64,
) -> f64 {
    let (p, q) = d_phi.average();
    let (wx, wy) = d_w.average();
    let residual = rhs_derivative - ham.dp(p, q) * wx - ham.dq(p, q) * wy
        + 0.5 * visc.alpha * (d_w.px_plus - d_w.px_minus)
        + 0.5 * visc.beta * (d_w.py_plus - d_w.py_minus);
    h / (visc.alpha + visc.beta) * residual + w_old
}
