//! Pointwise Hermite WENO kernels.
//!
//! One-sided first derivatives `(φ_x)^∓` at `x_i` are built from one big
//! Hermite stencil (four point values plus derivatives at `x_{i±1}`) and two
//! three-point stencils, blended with τ-based nonlinear weights. Second
//! derivatives of the auxiliary variables use a linear Hermite formula and
//! transverse derivatives a fourth-order central difference.

use crate::error::{HjError, Result};

/// Which one-sided value is being reconstructed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// `(·)^-`, biased to the left: points `i-2..=i+1`.
    Minus,
    /// `(·)^+`, biased to the right: points `i-1..=i+2`.
    Plus,
}

/// Samples along one axis feeding a one-sided reconstruction at `x_i`.
///
/// `phi` holds `φ_{i-2..=i+1}` for [`Side::Minus`] and `φ_{i-1..=i+2}` for
/// [`Side::Plus`]; `du` always holds the derivative at `x_{i-1}` and `x_{i+1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StencilData1D {
    pub phi: [f64; 4],
    pub du: [f64; 2],
    pub h: f64,
    pub side: Side,
}

impl StencilData1D {
    pub fn minus(phi: [f64; 4], du: [f64; 2], h: f64) -> Self {
        Self { phi, du, h, side: Side::Minus }
    }

    pub fn plus(phi: [f64; 4], du: [f64; 2], h: f64) -> Self {
        Self { phi, du, h, side: Side::Plus }
    }

    /// Mirror image about `x_i` as a minus-side stencil.
    fn reflected_minus(&self) -> Self {
        let [a, b, c, d] = self.phi;
        Self::minus([d, c, b, a], [-self.du[1], -self.du[0]], self.h)
    }
}

/// Linear weights and regularizer of the nonlinear weights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightConfig {
    pub gamma: [f64; 3],
    pub epsilon: f64,
}

impl Default for WeightConfig {
    fn default() -> Self {
        Self { gamma: [0.98, 0.01, 0.01], epsilon: 1e-6 }
    }
}

impl WeightConfig {
    pub fn validate(&self) -> Result<()> {
        let sum: f64 = self.gamma.iter().sum();
        if self.gamma.iter().any(|&g| !(g > 0.0)) || (sum - 1.0).abs() > 1e-12 {
            return Err(HjError::Config(format!(
                "linear weights {:?} must be positive and sum to 1",
                self.gamma
            )));
        }
        if !(self.epsilon > 0.0) {
            return Err(HjError::Config(format!("epsilon {} must be positive", self.epsilon)));
        }
        Ok(())
    }
}

/// Candidate derivatives and their smoothness indicators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CandidateTriple {
    pub d: [f64; 3],
    pub beta: [f64; 3],
}

impl CandidateTriple {
    pub fn from_stencil(s: &StencilData1D) -> Self {
        Self { d: candidate_derivatives(s), beta: smoothness_indicators(s) }
    }
}

/// Derivatives at `x_i` of the Hermite quintic on the big stencil and the two
/// quadratics on the small stencils.
pub fn candidate_derivatives(s: &StencilData1D) -> [f64; 3] {
    let h = s.h;
    let [ul, ur] = s.du;
    match s.side {
        Side::Minus => {
            let [pm2, pm1, p0, p1] = s.phi;
            [
                (pm2 + 18.0 * pm1 - 9.0 * p0 - 10.0 * p1 + 9.0 * h * ul + 3.0 * h * ur) / (-18.0 * h),
                (pm2 - 4.0 * pm1 + 3.0 * p0) / (2.0 * h),
                (p1 - pm1) / (2.0 * h),
            ]
        }
        Side::Plus => {
            let [pm1, p0, p1, p2] = s.phi;
            [
                (10.0 * pm1 + 9.0 * p0 - 18.0 * p1 - p2 + 3.0 * h * ul + 9.0 * h * ur) / (-18.0 * h),
                (p1 - pm1) / (2.0 * h),
                (-3.0 * p0 + 4.0 * p1 - p2) / (2.0 * h),
            ]
        }
    }
}

/// Smoothness indicator of the big-stencil Hermite quintic (minus layout).
///
/// With `ξ = (x - x_i)/h` the quintic is `Σ c_k ξ^k`; the indicator reduces to
/// `h⁻² cᵀ G c` over `c_2..c_5`, where `G` is the Gram matrix of
/// `Σ_{α=2}^{5} ∫_{-1/2}^{1/2} D^α ξ^k D^α ξ^l dξ`.
fn big_stencil_indicator(s: &StencilData1D) -> f64 {
    let [pm2, pm1, p0, p1] = s.phi;
    let gl = s.h * s.du[0];
    let gr = s.h * s.du[1];
    let c2 = pm1 - 2.0 * p0 + p1 + 0.25 * (gl - gr);
    let c3 = pm2 / 9.0 + 0.75 * pm1 - p0 + 5.0 / 36.0 * p1 + 0.75 * gl + gr / 12.0;
    let c4 = -0.5 * pm1 + p0 - 0.5 * p1 + 0.25 * (gr - gl);
    let c5 = -pm2 / 18.0 - 0.25 * pm1 + 0.5 * p0 - 7.0 / 36.0 * p1 - 0.25 * gl + gr / 12.0;
    let q = 4.0 * c2 * c2
        + 4.0 * c2 * c4
        + 39.0 * c3 * c3
        + 63.0 * c3 * c5
        + 3129.0 / 5.0 * c4 * c4
        + 438085.0 / 28.0 * c5 * c5;
    q / (s.h * s.h)
}

/// Smoothness indicators `(β₁, β₂, β₃)` over the cell `[x_{i-1/2}, x_{i+1/2}]`.
pub fn smoothness_indicators(s: &StencilData1D) -> [f64; 3] {
    let h2 = s.h * s.h;
    let sq = |a: f64, b: f64, c: f64| {
        let d = a - 2.0 * b + c;
        d * d / h2
    };
    let [a, b, c, d] = s.phi;
    match s.side {
        Side::Minus => [big_stencil_indicator(s), sq(a, b, c), sq(b, c, d)],
        Side::Plus => [big_stencil_indicator(&s.reflected_minus()), sq(a, b, c), sq(b, c, d)],
    }
}

/// Normalized nonlinear weights from the smoothness indicators.
pub fn nonlinear_weights(beta: [f64; 3], cfg: &WeightConfig) -> [f64; 3] {
    let t = 0.5 * ((beta[0] - beta[1]).abs() + (beta[0] - beta[2]).abs());
    let tau = t * t;
    let raw: [f64; 3] = std::array::from_fn(|n| cfg.gamma[n] * (1.0 + tau / (cfg.epsilon + beta[n])));
    let sum = raw[0] + raw[1] + raw[2];
    raw.map(|w| w / sum)
}

/// Convex combination of the candidates; reduces to `d[0]` when `w == gamma`.
#[inline]
pub fn combine(d: [f64; 3], w: [f64; 3], gamma: [f64; 3]) -> f64 {
    let big = (d[0] - gamma[1] * d[1] - gamma[2] * d[2]) / gamma[0];
    w[0] * big + w[1] * d[1] + w[2] * d[2]
}

/// HWENO one-sided derivative together with the weights that produced it.
pub fn hweno_derivative_weighted(s: &StencilData1D, cfg: &WeightConfig) -> (f64, [f64; 3]) {
    let CandidateTriple { d, beta } = CandidateTriple::from_stencil(s);
    let w = nonlinear_weights(beta, cfg);
    (combine(d, w, cfg.gamma), w)
}

pub fn hweno_derivative(s: &StencilData1D, cfg: &WeightConfig) -> f64 {
    hweno_derivative_weighted(s, cfg).0
}

/// Big-stencil linear derivative (the hybrid scheme's cheap path).
#[inline]
pub fn linear_derivative(s: &StencilData1D) -> f64 {
    candidate_derivatives(s)[0]
}

/// `(w_x)^∓` at `x_i` from the Hermite sextic through `φ` on four points and
/// `w = φ_x` at `x_{i-1}, x_i, x_{i+1}`.
///
/// `phi` is `φ_{i-2..=i+1}` (minus) or `φ_{i-1..=i+2}` (plus).
pub fn linear_second_derivative(phi: [f64; 4], du: [f64; 3], h: f64, side: Side) -> f64 {
    let [ul, uc, ur] = du;
    let num = match side {
        Side::Minus => {
            let [pm2, pm1, p0, p1] = phi;
            pm2 + 54.0 * pm1 - 81.0 * p0 + 26.0 * p1 + h * (18.0 * ul + 18.0 * uc - 6.0 * ur)
        }
        Side::Plus => {
            let [pm1, p0, p1, p2] = phi;
            26.0 * pm1 - 81.0 * p0 + 54.0 * p1 + p2 + h * (6.0 * ul - 18.0 * uc - 18.0 * ur)
        }
    };
    num / (18.0 * h * h)
}

/// Fourth-order central first derivative from samples at offsets `-2..=2`.
#[inline]
pub fn mixed_central(w: [f64; 5], h: f64) -> f64 {
    (-w[4] + 8.0 * w[3] - 8.0 * w[1] + w[0]) / (12.0 * h)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReconstructionMode {
    Linear,
    Hweno,
}

/// Linear reconstruction when every sample shares a strict sign, HWENO otherwise.
pub fn hybrid_mode(du: &[f64]) -> ReconstructionMode {
    if du.iter().all(|&u| u > 0.0) || du.iter().all(|&u| u < 0.0) {
        ReconstructionMode::Linear
    } else {
        ReconstructionMode::Hweno
    }
}
