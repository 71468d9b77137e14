//! Uniform 2D mesh with ghost padding and point classification.
//!
//! All fields in the crate live on the padded lattice: padded index `k`
//! along an axis maps to the physical coordinate `min + (k - ghost_width) * h`,
//! so interior (domain) nodes occupy `ghost_width..ghost_width + n`.

use std::f64::consts::PI;

use crate::error::{HjError, Result};

/// Default ghost padding. The HWENO stencils reach two cells out and the
/// fifth-order extrapolation fills a third layer.
pub const DEFAULT_GHOST_WIDTH: usize = 3;

/// Nodes closer than this to Γ count as lying on it.
const ON_GAMMA_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2D {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
    /// Domain nodes per axis.
    pub n: usize,
    pub h: f64,
    pub ghost_width: usize,
}

/// Axis-aligned rectangle `[x0, x1] x [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub const fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        Self { x0, x1, y0, y1 }
    }

    /// Square of side `2 * half` centred on `(cx, cy)`.
    pub fn centered(cx: f64, cy: f64, half: f64) -> Self {
        Self::new(cx - half, cx + half, cy - half, cy + half)
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        x >= self.x0 && x <= self.x1 && y >= self.y0 && y <= self.y1
    }

    pub fn is_empty(&self) -> bool {
        !(self.x1 > self.x0 && self.y1 > self.y0)
    }
}

/// Builds a uniform grid over `[xmin, xmax] x [ymin, ymax]` with `n` nodes per axis.
pub fn build_grid(bounds: [f64; 4], n: usize, ghost_width: usize) -> Result<Grid2D> {
    let [xmin, xmax, ymin, ymax] = bounds;
    if bounds.iter().any(|b| !b.is_finite()) || xmax <= xmin || ymax <= ymin {
        return Err(HjError::Config(format!("degenerate bounds {bounds:?}")));
    }
    if n < 5 {
        return Err(HjError::Config(format!("n = {n} is below the minimum of 5")));
    }
    if ghost_width < 2 {
        return Err(HjError::Config(format!(
            "ghost width {ghost_width} is below the minimum of 2"
        )));
    }
    let hx = (xmax - xmin) / (n - 1) as f64;
    let hy = (ymax - ymin) / (n - 1) as f64;
    if ((hx - hy) / hx).abs() > 1e-12 {
        return Err(HjError::Config(format!(
            "spacing differs between axes ({hx} vs {hy})"
        )));
    }
    Ok(Grid2D {
        xmin,
        xmax,
        ymin,
        ymax,
        n,
        h: hx,
        ghost_width,
    })
}

impl Grid2D {
    /// Nodes per axis including ghosts.
    pub fn stride(&self) -> usize {
        self.n + 2 * self.ghost_width
    }

    /// Total number of padded points.
    pub fn len(&self) -> usize {
        self.stride() * self.stride()
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        j * self.stride() + i
    }

    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        self.xmin + (i as f64 - self.ghost_width as f64) * self.h
    }

    #[inline]
    pub fn y(&self, j: usize) -> f64 {
        self.ymin + (j as f64 - self.ghost_width as f64) * self.h
    }

    /// Padded index range of domain nodes along either axis.
    pub fn interior_range(&self) -> std::ops::Range<usize> {
        self.ghost_width..self.ghost_width + self.n
    }

    pub fn is_ghost(&self, i: usize, j: usize) -> bool {
        let r = self.interior_range();
        !(r.contains(&i) && r.contains(&j))
    }

    /// Domain nodes in row-major order (`j` outer, `i` inner), as padded indices.
    pub fn interior(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let r = self.interior_range();
        r.clone().flat_map(move |j| r.clone().map(move |i| (i, j)))
    }
}

/// One primitive of the inflow set Γ.
#[derive(Debug, Clone, PartialEq)]
pub enum GammaPiece {
    Point { x: f64, y: f64 },
    Circle { cx: f64, cy: f64, r: f64 },
    /// Counter-clockwise arc from angle `start` spanning `sweep` radians.
    Arc { cx: f64, cy: f64, r: f64, start: f64, sweep: f64 },
    Segment { a: (f64, f64), b: (f64, f64) },
}

impl GammaPiece {
    pub fn distance(&self, x: f64, y: f64) -> f64 {
        let (cx, cy) = self.closest(x, y);
        (x - cx).hypot(y - cy)
    }

    /// Nearest point of the piece to `(x, y)`; ties resolve arbitrarily.
    pub fn closest(&self, x: f64, y: f64) -> (f64, f64) {
        match *self {
            GammaPiece::Point { x: px, y: py } => (px, py),
            GammaPiece::Circle { cx, cy, r } => {
                let (dx, dy) = (x - cx, y - cy);
                let d = dx.hypot(dy);
                if d > 0.0 {
                    (cx + r * dx / d, cy + r * dy / d)
                } else {
                    (cx + r, cy)
                }
            }
            GammaPiece::Arc { cx, cy, r, start, sweep } => {
                let (dx, dy) = (x - cx, y - cy);
                let offset = (dy.atan2(dx) - start).rem_euclid(2.0 * PI);
                let d = dx.hypot(dy);
                if offset <= sweep && d > 0.0 {
                    (cx + r * dx / d, cy + r * dy / d)
                } else {
                    let (s0, c0) = start.sin_cos();
                    let (s1, c1) = (start + sweep).sin_cos();
                    let e0 = (cx + r * c0, cy + r * s0);
                    let e1 = (cx + r * c1, cy + r * s1);
                    if (x - e0.0).hypot(y - e0.1) <= (x - e1.0).hypot(y - e1.1) {
                        e0
                    } else {
                        e1
                    }
                }
            }
            GammaPiece::Segment { a, b } => {
                let (ex, ey) = (b.0 - a.0, b.1 - a.1);
                let len2 = ex * ex + ey * ey;
                let t = if len2 > 0.0 {
                    (((x - a.0) * ex + (y - a.1) * ey) / len2).clamp(0.0, 1.0)
                } else {
                    0.0
                };
                (a.0 + t * ex, a.1 + t * ey)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GammaKind {
    PointSet,
    CircleSet,
    CurveUnion,
}

/// The inflow set Γ as a union of geometric primitives.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GammaDescriptor {
    pub pieces: Vec<GammaPiece>,
}

impl GammaDescriptor {
    pub fn new(pieces: Vec<GammaPiece>) -> Self {
        Self { pieces }
    }

    pub fn points(points: &[(f64, f64)]) -> Self {
        Self::new(points.iter().map(|&(x, y)| GammaPiece::Point { x, y }).collect())
    }

    pub fn kind(&self) -> GammaKind {
        if self.pieces.iter().all(|p| matches!(p, GammaPiece::Point { .. })) {
            GammaKind::PointSet
        } else if self.pieces.iter().all(|p| matches!(p, GammaPiece::Circle { .. })) {
            GammaKind::CircleSet
        } else {
            GammaKind::CurveUnion
        }
    }

    /// Euclidean distance from `(x, y)` to Γ; infinite when Γ is empty.
    pub fn distance(&self, x: f64, y: f64) -> f64 {
        self.pieces
            .iter()
            .map(|p| p.distance(x, y))
            .fold(f64::INFINITY, f64::min)
    }

    /// Distance to the isolated points of Γ only.
    pub fn point_distance(&self, x: f64, y: f64) -> f64 {
        self.pieces
            .iter()
            .filter(|p| matches!(p, GammaPiece::Point { .. }))
            .map(|p| p.distance(x, y))
            .fold(f64::INFINITY, f64::min)
    }

    /// Nearest point of Γ, or `None` when Γ is empty.
    pub fn closest(&self, x: f64, y: f64) -> Option<(f64, f64)> {
        self.pieces
            .iter()
            .map(|p| p.closest(x, y))
            .min_by(|a, b| (x - a.0).hypot(y - a.1).total_cmp(&(x - b.0).hypot(y - b.1)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PointCategory {
    /// On Γ; exact value assigned.
    I,
    /// Ghost point outside the domain; filled by extrapolation.
    II,
    /// Within `2h` of Γ or inside a pre-assigned box; prescribed.
    III,
    /// Swept point within a two-cell band of Category III.
    IV1,
    /// All remaining swept points.
    IV2,
}

impl PointCategory {
    pub fn is_prescribed(self) -> bool {
        matches!(self, PointCategory::I | PointCategory::III)
    }

    pub fn is_swept(self) -> bool {
        matches!(self, PointCategory::IV1 | PointCategory::IV2)
    }

    pub fn label(self) -> &'static str {
        match self {
            PointCategory::I => "I",
            PointCategory::II => "II",
            PointCategory::III => "III",
            PointCategory::IV1 => "IV1",
            PointCategory::IV2 => "IV2",
        }
    }
}

/// Per-point labels over the padded grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CategoryField {
    pub labels: Vec<PointCategory>,
}

impl CategoryField {
    pub fn get(&self, grid: &Grid2D, i: usize, j: usize) -> PointCategory {
        self.labels[grid.idx(i, j)]
    }

    pub fn count(&self, cat: PointCategory) -> usize {
        self.labels.iter().filter(|&&c| c == cat).count()
    }
}

/// Labels every padded point.
///
/// Category I needs an exact hit on Γ, Category III is the Euclidean `2h`
/// neighbourhood of Γ plus any `prescribed_boxes`, and Category IV.1 is the
/// set of swept points within Chebyshev index distance 2 of a Category III point.
pub fn classify_points(
    grid: &Grid2D,
    gamma: &GammaDescriptor,
    prescribed_boxes: &[Rect],
) -> CategoryField {
    let s = grid.stride();
    let band = 2.0 * grid.h * (1.0 + 1e-12);
    let mut labels = vec![PointCategory::II; grid.len()];
    for (i, j) in grid.interior() {
        let (x, y) = (grid.x(i), grid.y(j));
        let d = gamma.distance(x, y);
        // nodes on curves stay III: only isolated sources are hit exactly
        labels[grid.idx(i, j)] = if gamma.point_distance(x, y) < ON_GAMMA_TOL {
            PointCategory::I
        } else if d <= band || prescribed_boxes.iter().any(|b| b.contains(x, y)) {
            PointCategory::III
        } else {
            PointCategory::IV2
        };
    }
    let near_iii = |i: usize, j: usize| {
        let (i0, i1) = (i.saturating_sub(2), (i + 2).min(s - 1));
        let (j0, j1) = (j.saturating_sub(2), (j + 2).min(s - 1));
        (j0..=j1).any(|jj| (i0..=i1).any(|ii| labels[jj * s + ii] == PointCategory::III))
    };
    let band_points: Vec<usize> = grid
        .interior()
        .filter(|&(i, j)| labels[grid.idx(i, j)] == PointCategory::IV2 && near_iii(i, j))
        .map(|(i, j)| grid.idx(i, j))
        .collect();
    for k in band_points {
        labels[k] = PointCategory::IV1;
    }
    CategoryField { labels }
}

/// One of the four alternating Gauss-Seidel traversals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepOrder {
    pub i_ascending: bool,
    pub j_ascending: bool,
}

impl SweepOrder {
    /// Domain-relative indices `(i, j)` in `0..n`, with `i` varying fastest.
    pub fn visit(self, n: usize) -> impl Iterator<Item = (usize, usize)> {
        let axis = move |k: usize, asc: bool| if asc { k } else { n - 1 - k };
        (0..n).flat_map(move |jj| {
            (0..n).map(move |ii| (axis(ii, self.i_ascending), axis(jj, self.j_ascending)))
        })
    }
}

/// The four orderings `(i↑, j↑)`, `(i↓, j↑)`, `(i↓, j↓)`, `(i↑, j↓)`.
pub fn sweep_orderings() -> [SweepOrder; 4] {
    let o = |i_ascending, j_ascending| SweepOrder { i_ascending, j_ascending };
    [o(true, true), o(false, true), o(false, false), o(true, false)]
}
