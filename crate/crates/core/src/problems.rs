//! Benchmark catalogue: right-hand sides, inflow sets, exact solutions and
//! error-measurement regions.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{HjError, Result};
use crate::grid::{build_grid, GammaDescriptor, GammaPiece, Grid2D, Rect, DEFAULT_GHOST_WIDTH};
use crate::hamiltonian::{
    ElasticWave, Hamiltonian, HamiltonianSpec, Isotropic, NumericalHamiltonian, SpatialFn, WaveBranch,
};
use crate::reconstruction::WeightConfig;
use crate::sweeper::{Approach, SolverConfig};

/// Smallest mesh accepted by [`make_problem`].
pub const MIN_MESH: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProblemId {
    Ex1,
    Ex2,
    Ex3,
    Ex4,
    Ex5,
    Ex6a,
    Ex6b,
    Ex7p,
    Ex7sv,
}

impl ProblemId {
    pub const ALL: [ProblemId; 9] = [
        ProblemId::Ex1,
        ProblemId::Ex2,
        ProblemId::Ex3,
        ProblemId::Ex4,
        ProblemId::Ex5,
        ProblemId::Ex6a,
        ProblemId::Ex6b,
        ProblemId::Ex7p,
        ProblemId::Ex7sv,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ProblemId::Ex1 => "ex1",
            ProblemId::Ex2 => "ex2",
            ProblemId::Ex3 => "ex3",
            ProblemId::Ex4 => "ex4",
            ProblemId::Ex5 => "ex5",
            ProblemId::Ex6a => "ex6a",
            ProblemId::Ex6b => "ex6b",
            ProblemId::Ex7p => "ex7p",
            ProblemId::Ex7sv => "ex7sv",
        }
    }

    pub fn has_closed_form(self) -> bool {
        !matches!(self, ProblemId::Ex7p | ProblemId::Ex7sv)
    }
}

impl fmt::Display for ProblemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProblemId {
    type Err = HjError;

    fn from_str(s: &str) -> Result<Self> {
        ProblemId::ALL
            .into_iter()
            .find(|id| id.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| HjError::UnknownProblem(s.to_string()))
    }
}

/// Extra conditions layered on top of the include/exclude boxes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MaskRule {
    None,
    /// Drop the open first quadrant `x > 0, y > 0`.
    NotFirstQuadrant,
    /// Drop the bands `|x| < w` and `|y| < w`.
    AwayFromAxes(f64),
}

/// Region over which errors are measured.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorMask {
    pub include: Rect,
    pub exclude: Vec<Rect>,
    pub rule: MaskRule,
}

impl ErrorMask {
    pub fn contains(&self, x: f64, y: f64) -> bool {
        if !self.include.contains(x, y) || self.exclude.iter().any(|r| r.contains(x, y)) {
            return false;
        }
        match self.rule {
            MaskRule::None => true,
            MaskRule::NotFirstQuadrant => x <= 0.0 || y <= 0.0,
            MaskRule::AwayFromAxes(w) => x.abs() >= w && y.abs() >= w,
        }
    }
}

/// `(φ, φ_x, φ_y)` at a point.
pub type PointData = Arc<dyn Fn(f64, f64) -> [f64; 3] + Send + Sync>;

/// One benchmark instance on a fixed mesh.
#[derive(Clone)]
pub struct ProblemSpec {
    pub id: ProblemId,
    pub n: usize,
    pub bounds: [f64; 4],
    pub hamiltonian: HamiltonianSpec,
    pub gamma: GammaDescriptor,
    /// Values written at Category I and III points.
    pub prescribe: PointData,
    pub exact: Option<SpatialFn>,
    pub preassign_boxes: Vec<Rect>,
    pub mask: ErrorMask,
}

impl fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("id", &self.id)
            .field("n", &self.n)
            .field("bounds", &self.bounds)
            .field("hamiltonian", &self.hamiltonian)
            .field("gamma", &self.gamma)
            .field("preassign_boxes", &self.preassign_boxes)
            .field("mask", &self.mask)
            .finish_non_exhaustive()
    }
}

impl ProblemSpec {
    /// Catalogued solver settings for this example and mesh.
    pub fn default_config(&self, approach: Approach) -> SolverConfig {
        let omega = match (self.id, approach) {
            (ProblemId::Ex7p, _) => 1.2,
            (ProblemId::Ex7sv, _) => 0.9,
            (_, Approach::One) => 0.7,
            (_, Approach::Two) => 0.8,
        };
        let delta_tol = match (self.id, approach) {
            (ProblemId::Ex6b, _) => 1e-12,
            (ProblemId::Ex7sv, Approach::Two) if (80..=320).contains(&self.n) => 1e-9,
            _ => 1e-14,
        };
        SolverConfig {
            approach,
            omega,
            delta_tol,
            weights: WeightConfig { epsilon: default_epsilon(self.id, self.n), ..WeightConfig::default() },
            ..SolverConfig::default()
        }
    }

    pub fn in_error_mask(&self, x: f64, y: f64) -> bool {
        self.mask.contains(x, y)
    }
}

/// Weight regularizer: `1e-6`, except the mesh-dependent schedule of Example 6.
pub fn default_epsilon(id: ProblemId, n: usize) -> f64 {
    match id {
        ProblemId::Ex6a | ProblemId::Ex6b => match n {
            40 => 1e-2,
            80 => 1e-3,
            160 => 1e-4,
            320 => 1e-5,
            _ => 1e-2 * (40.0 / n as f64).powf(10f64.log2()),
        },
        _ => 1e-6,
    }
}

pub fn in_error_mask(spec: &ProblemSpec, x: f64, y: f64) -> bool {
    spec.in_error_mask(x, y)
}

fn constant(c: f64) -> SpatialFn {
    Arc::new(move |_, _| c)
}

fn eikonal(f: SpatialFn, fx: SpatialFn, fy: SpatialFn) -> HamiltonianSpec {
    HamiltonianSpec { kind: NumericalHamiltonian::EikonalGodunov, hamiltonian: Arc::new(Isotropic), f, fx, fy }
}

fn unit_eikonal() -> HamiltonianSpec {
    eikonal(constant(1.0), constant(0.0), constant(0.0))
}

/// `(φ, ∇φ)` of the distance to Γ; the gradient vanishes on Γ itself.
fn distance_data(gamma: GammaDescriptor) -> PointData {
    Arc::new(move |x, y| {
        let (cx, cy) = gamma.closest(x, y).expect("nonempty inflow set");
        let d = (x - cx).hypot(y - cy);
        if d > 0.0 {
            [d, (x - cx) / d, (y - cy) / d]
        } else {
            [0.0, 0.0, 0.0]
        }
    })
}

fn exact_of(data: &PointData) -> SpatialFn {
    let data = data.clone();
    Arc::new(move |x, y| data(x, y)[0])
}

/// `(a, b) -> a / sqrt(a² + b²)`-style ratio that is zero where both vanish.
fn safe_ratio(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else {
        0.0
    }
}

fn ex1_data(x: f64, y: f64) -> [f64; 3] {
    let (a, b) = (PI + 0.5 * PI * x, PI + 0.5 * PI * y);
    [a.cos() + b.cos(), -0.5 * PI * a.sin(), -0.5 * PI * b.sin()]
}

fn ex1_hamiltonian() -> HamiltonianSpec {
    let f = |x: f64, y: f64| {
        let (s1, s2) = ((PI + 0.5 * PI * x).sin(), (PI + 0.5 * PI * y).sin());
        0.5 * PI * s1.hypot(s2)
    };
    // ∂f/∂x = (π/2)² s1 c1 / sqrt(s1² + s2²)
    let grad = |x: f64, y: f64| {
        let (s1, c1) = (PI + 0.5 * PI * x).sin_cos();
        let (s2, c2) = (PI + 0.5 * PI * y).sin_cos();
        let r = s1.hypot(s2);
        let k = 0.25 * PI * PI;
        (k * safe_ratio(s1 * c1, r), k * safe_ratio(s2 * c2, r))
    };
    eikonal(Arc::new(f), Arc::new(move |x, y| grad(x, y).0), Arc::new(move |x, y| grad(x, y).1))
}

fn ex6_hamiltonian() -> HamiltonianSpec {
    let tw = 2.0 * PI;
    let parts = move |x: f64, y: f64| {
        let (sx, cx) = (tw * x).sin_cos();
        let (sy, cy) = (tw * y).sin_cos();
        (sx, cx, sy, cy)
    };
    let f = move |x: f64, y: f64| {
        let (sx, cx, sy, cy) = parts(x, y);
        tw * (cx * sy).hypot(sx * cy)
    };
    let grad = move |x: f64, y: f64| {
        let (sx, cx, sy, cy) = parts(x, y);
        let (a, b) = (cx * sy, sx * cy);
        let r = a.hypot(b);
        // a_x = -2π sx sy, b_x = 2π cx cy, a_y = 2π cx cy, b_y = -2π sx sy
        let fx = tw * tw * safe_ratio(-a * sx * sy + b * cx * cy, r);
        let fy = tw * tw * safe_ratio(a * cx * cy - b * sx * sy, r);
        (fx, fy)
    };
    eikonal(Arc::new(f), Arc::new(move |x, y| grad(x, y).0), Arc::new(move |x, y| grad(x, y).1))
}

fn ex6a_data(x: f64, y: f64) -> [f64; 3] {
    let tw = 2.0 * PI;
    let (sx, cx) = (tw * x).sin_cos();
    let (sy, cy) = (tw * y).sin_cos();
    [sx * sy, tw * cx * sy, tw * sx * cy]
}

fn ex6b_data(x: f64, y: f64) -> [f64; 3] {
    let tw = 2.0 * PI;
    let (sx, cx) = (tw * x).sin_cos();
    let (sy, cy) = (tw * y).sin_cos();
    let s = sx * sy;
    let sign = if s < 0.0 { -1.0 } else { 1.0 };
    let abs_branch = [s.abs(), sign * tw * cx * sy, sign * tw * sx * cy];
    let center = (x + y - 1.0).abs() < 0.5 && (x - y).abs() < 0.5;
    let cos_branch = 1.0 + cx * cy;
    if center && cos_branch > s.abs() {
        [cos_branch, -tw * sx * cy, -tw * cx * sy]
    } else {
        abs_branch
    }
}

/// Five point sources and the boundary of the unit square.
fn ex6_gamma() -> GammaDescriptor {
    let mut pieces: Vec<GammaPiece> = EX6_SOURCES.iter().map(|&(x, y)| GammaPiece::Point { x, y }).collect();
    let c = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)];
    for k in 0..4 {
        pieces.push(GammaPiece::Segment { a: c[k], b: c[(k + 1) % 4] });
    }
    GammaDescriptor::new(pieces)
}

const EX6_SOURCES: [(f64, f64); 5] = [(0.25, 0.25), (0.75, 0.75), (0.25, 0.75), (0.75, 0.25), (0.5, 0.5)];

pub const QUASI_P_STIFFNESS: [f64; 4] = [15.0638, 10.8373, 1.6381, 3.1258];
pub const QUASI_SV_STIFFNESS: [f64; 4] = [15.90, 6.21, 4.82, 4.00];

pub fn elastic_hamiltonian(branch: WaveBranch) -> ElasticWave {
    let [a11, a33, a13, a44] = match branch {
        WaveBranch::QuasiP => QUASI_P_STIFFNESS,
        WaveBranch::QuasiSv => QUASI_SV_STIFFNESS,
    };
    ElasticWave::from_stiffness(a11, a33, a13, a44, branch)
}

/// Travel time from a point source at the origin in a homogeneous medium
/// with homogeneous Hamiltonian `H`, with its gradient.
///
/// Directions `e(θ)` give slowness vectors `p(θ) = e / H(e)` whose group
/// velocity `∇H(e)` points along the ray; the time at `x` is `p·x` for the
/// ray through `x`, and the earliest such time when several rays arrive.
#[derive(Debug, Clone)]
pub struct PointSourceTravelTime<H> {
    ham: H,
    samples: Vec<(f64, (f64, f64))>,
}

const RAY_SAMPLES: usize = 2048;

impl<H: Hamiltonian> PointSourceTravelTime<H> {
    pub fn new(ham: H) -> Self {
        let samples = (0..=RAY_SAMPLES)
            .map(|k| {
                let th = 2.0 * PI * k as f64 / RAY_SAMPLES as f64;
                (th, Self::group(&ham, th))
            })
            .collect();
        Self { ham, samples }
    }

    fn group(ham: &H, th: f64) -> (f64, f64) {
        let (s, c) = th.sin_cos();
        (ham.dp(c, s), ham.dq(c, s))
    }

    fn slowness(&self, th: f64) -> (f64, f64) {
        let (s, c) = th.sin_cos();
        let hv = self.ham.value(c, s);
        (c / hv, s / hv)
    }

    pub fn eval(&self, x: f64, y: f64) -> [f64; 3] {
        let r = x.hypot(y);
        if r == 0.0 {
            return [0.0, 0.0, 0.0];
        }
        let (ex, ey) = (x / r, y / r);
        let cross = |g: (f64, f64)| g.0 * ey - g.1 * ex;
        let mut best: Option<(f64, (f64, f64))> = None;
        let mut consider = |th: f64| {
            let g = Self::group(&self.ham, th);
            if g.0 * ex + g.1 * ey <= 0.0 {
                return;
            }
            let p = self.slowness(th);
            let t = p.0 * x + p.1 * y;
            if best.map_or(true, |(bt, _)| t < bt) {
                best = Some((t, p));
            }
        };
        for w in self.samples.windows(2) {
            let ((t0, g0), (t1, g1)) = (w[0], w[1]);
            let (c0, c1) = (cross(g0), cross(g1));
            if c0 == 0.0 {
                consider(t0);
            }
            if c0 * c1 >= 0.0 {
                continue;
            }
            let (mut lo, mut hi, mut clo) = (t0, t1, c0);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                let cm = cross(Self::group(&self.ham, mid));
                if (cm < 0.0) == (clo < 0.0) {
                    lo = mid;
                    clo = cm;
                } else {
                    hi = mid;
                }
            }
            consider(0.5 * (lo + hi));
        }
        let (t, p) = best.expect("some ray reaches every direction");
        [t, p.0, p.1]
    }
}

/// Builds the catalogued problem `id` on an `n x n` mesh.
pub fn make_problem(id: ProblemId, n: usize) -> Result<(ProblemSpec, Grid2D)> {
    if n < MIN_MESH {
        return Err(HjError::Config(format!("mesh n = {n} is below the minimum of {MIN_MESH}")));
    }
    let unit = [-1.0, 1.0, -1.0, 1.0];
    let bounds = match id {
        ProblemId::Ex3 => [-3.0, 3.0, -3.0, 3.0],
        ProblemId::Ex6a | ProblemId::Ex6b => [0.0, 1.0, 0.0, 1.0],
        _ => unit,
    };
    let grid = build_grid(bounds, n, DEFAULT_GHOST_WIDTH)?;
    let whole = Rect::new(bounds[0], bounds[1], bounds[2], bounds[3]);
    let origin = GammaDescriptor::points(&[(0.0, 0.0)]);
    let source_box = Rect::centered(0.0, 0.0, 0.15);

    let spec = match id {
        ProblemId::Ex1 => {
            let prescribe: PointData = Arc::new(ex1_data);
            ProblemSpec {
                id,
                n,
                bounds,
                hamiltonian: ex1_hamiltonian(),
                gamma: origin,
                exact: Some(exact_of(&prescribe)),
                prescribe,
                preassign_boxes: Vec::new(),
                mask: ErrorMask { include: whole, exclude: Vec::new(), rule: MaskRule::None },
            }
        }
        ProblemId::Ex2 | ProblemId::Ex3 | ProblemId::Ex4 | ProblemId::Ex5 => {
            let (gamma, boxes, mask) = match id {
                ProblemId::Ex2 => (
                    GammaDescriptor::new(vec![GammaPiece::Circle { cx: 0.0, cy: 0.0, r: 0.5 }]),
                    Vec::new(),
                    ErrorMask {
                        include: Rect::centered(0.0, 0.0, 0.9),
                        exclude: vec![Rect::centered(0.0, 0.0, 0.15)],
                        rule: MaskRule::None,
                    },
                ),
                ProblemId::Ex3 => {
                    let c2 = 1.5f64.sqrt();
                    let mid = 0.375f64.sqrt();
                    (
                        GammaDescriptor::new(vec![
                            GammaPiece::Circle { cx: -1.0, cy: 0.0, r: 0.5 },
                            GammaPiece::Circle { cx: c2, cy: 0.0, r: 0.5 },
                        ]),
                        Vec::new(),
                        ErrorMask {
                            include: Rect::centered(0.0, 0.0, 2.85),
                            exclude: vec![
                                Rect::new(-1.15, -0.85, -0.15, 0.15),
                                Rect::new(c2 - 0.15, c2 + 0.15, -0.15, 0.15),
                                Rect::new(mid - 0.65, mid - 0.35, -2.85, 2.85),
                            ],
                            rule: MaskRule::None,
                        },
                    )
                }
                ProblemId::Ex4 => (
                    origin.clone(),
                    vec![source_box],
                    ErrorMask { include: whole, exclude: vec![source_box], rule: MaskRule::None },
                ),
                _ => (
                    GammaDescriptor::new(vec![
                        GammaPiece::Arc { cx: 0.0, cy: 0.0, r: 0.5, start: 0.5 * PI, sweep: 1.5 * PI },
                        GammaPiece::Segment { a: (0.0, 0.0), b: (0.5, 0.0) },
                        GammaPiece::Segment { a: (0.0, 0.0), b: (0.0, 0.5) },
                    ]),
                    Vec::new(),
                    ErrorMask {
                        include: Rect::centered(0.0, 0.0, 1.9),
                        exclude: vec![Rect::centered(0.0, 0.0, 0.5)],
                        rule: MaskRule::NotFirstQuadrant,
                    },
                ),
            };
            let prescribe = distance_data(gamma.clone());
            ProblemSpec {
                id,
                n,
                bounds,
                hamiltonian: unit_eikonal(),
                gamma,
                exact: Some(exact_of(&prescribe)),
                prescribe,
                preassign_boxes: boxes,
                mask,
            }
        }
        ProblemId::Ex6a | ProblemId::Ex6b => {
            let prescribe: PointData = if id == ProblemId::Ex6a { Arc::new(ex6a_data) } else { Arc::new(ex6b_data) };
            let boxes: Vec<Rect> = EX6_SOURCES.iter().map(|&(x, y)| Rect::centered(x, y, grid.h)).collect();
            ProblemSpec {
                id,
                n,
                bounds,
                hamiltonian: ex6_hamiltonian(),
                gamma: ex6_gamma(),
                exact: Some(exact_of(&prescribe)),
                prescribe,
                mask: ErrorMask { include: whole, exclude: boxes.clone(), rule: MaskRule::None },
                preassign_boxes: boxes,
            }
        }
        ProblemId::Ex7p | ProblemId::Ex7sv => {
            let branch = if id == ProblemId::Ex7p { WaveBranch::QuasiP } else { WaveBranch::QuasiSv };
            let ham = elastic_hamiltonian(branch);
            let travel = Arc::new(PointSourceTravelTime::new(ham));
            let rule = if id == ProblemId::Ex7p { MaskRule::None } else { MaskRule::AwayFromAxes(0.15) };
            ProblemSpec {
                id,
                n,
                bounds,
                hamiltonian: HamiltonianSpec {
                    kind: NumericalHamiltonian::LaxFriedrichs,
                    hamiltonian: Arc::new(ham),
                    f: constant(1.0),
                    fx: constant(0.0),
                    fy: constant(0.0),
                },
                gamma: origin,
                prescribe: Arc::new(move |x, y| travel.eval(x, y)),
                exact: None,
                preassign_boxes: vec![source_box],
                mask: ErrorMask { include: whole, exclude: vec![source_box], rule },
            }
        }
    };
    Ok((spec, grid))
}

/// Closed-form solution of the catalogued problem at `(x, y)`.
pub fn exact_solution(id: ProblemId, x: f64, y: f64) -> Result<f64> {
    if !id.has_closed_form() {
        return Err(HjError::NoClosedForm(id.to_string()));
    }
    let (spec, _) = make_problem(id, MIN_MESH)?;
    Ok((spec.exact.expect("closed form present"))(x, y))
}
