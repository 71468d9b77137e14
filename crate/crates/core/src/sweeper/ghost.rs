use crate::grid::Grid2D;

use super::SolutionField;

/// Domain nodes feeding the `φ` extrapolation (degree 5).
pub const PHI_POINTS: usize = 6;
/// Domain nodes feeding the tangential derivative extrapolation (degree 4).
pub const TANGENT_POINTS: usize = 5;

/// Lagrange basis on nodes `0, 1, .., P-1` (counted inward from the
/// boundary) evaluated at `t`.
pub fn lagrange_weights<const P: usize>(t: f64) -> [f64; P] {
    let mut w = [0.0; P];
    for (m, wm) in w.iter_mut().enumerate() {
        *wm = (0..P).filter(|&l| l != m).map(|l| (t - l as f64) / (m as f64 - l as f64)).product();
    }
    w
}

/// `d/dt` of [`lagrange_weights`].
pub fn lagrange_derivative_weights<const P: usize>(t: f64) -> [f64; P] {
    let mut w = [0.0; P];
    for (m, wm) in w.iter_mut().enumerate() {
        *wm = (0..P)
            .filter(|&q| q != m)
            .map(|q| {
                (0..P)
                    .filter(|&l| l != m)
                    .map(|l| if l == q { 1.0 } else { t - l as f64 } / (m as f64 - l as f64))
                    .product::<f64>()
            })
            .sum();
    }
    w
}

/// Weights extrapolating `φ` from the six nearest domain nodes to the ghost at `-k`.
pub fn extrapolation_weights(k: usize) -> [f64; PHI_POINTS] {
    lagrange_weights(-(k as f64))
}

/// Refreshes every ghost value.
///
/// `φ` is extrapolated with a degree-5 polynomial through the six nearest
/// nodes along the outward axis; the normal derivative (`u` across the x
/// boundaries, `v` across the y boundaries) is the derivative of that same
/// polynomial, and the tangential one is extrapolated at degree 4. Rows are
/// filled first, then full columns, so corner ghosts come from row ghosts.
pub fn ghost_extrapolate(field: &mut SolutionField) {
    let grid = field.grid;
    let SolutionField { phi, u, v, .. } = field;
    fill_axis(&grid, 0, phi, u, v);
    fill_axis(&grid, 1, phi, v, u);
}

fn fill_axis(grid: &Grid2D, axis: usize, phi: &mut [f64], normal: &mut [f64], tangent: &mut [f64]) {
    let (gw, h) = (grid.ghost_width, grid.h);
    let last = gw + grid.n - 1;
    let value: Vec<[f64; PHI_POINTS]> = (1..=gw).map(extrapolation_weights).collect();
    let slope: Vec<[f64; PHI_POINTS]> = (1..=gw).map(|k| lagrange_derivative_weights(-(k as f64))).collect();
    let tang: Vec<[f64; TANGENT_POINTS]> = (1..=gw).map(|k| lagrange_weights(-(k as f64))).collect();
    let lines: Vec<usize> = if axis == 0 { grid.interior_range().collect() } else { (0..grid.stride()).collect() };
    let at = |line: usize, pos: usize| if axis == 0 { grid.idx(pos, line) } else { grid.idx(line, pos) };

    for line in lines {
        // `sign` maps the inward coordinate onto the grid axis
        for (node, sign) in [(&(|m: usize| gw + m) as &dyn Fn(usize) -> usize, 1.0), (&|m: usize| last - m, -1.0)] {
            for k in 1..=gw {
                let (wv, ws, wt) = (&value[k - 1], &slope[k - 1], &tang[k - 1]);
                let p: f64 = (0..PHI_POINTS).map(|m| wv[m] * phi[at(line, node(m))]).sum();
                let d: f64 = (0..PHI_POINTS).map(|m| ws[m] * phi[at(line, node(m))]).sum::<f64>() * sign / h;
                let t: f64 = (0..TANGENT_POINTS).map(|m| wt[m] * tangent[at(line, node(m))]).sum();
                let g = if sign > 0.0 { at(line, gw - k) } else { at(line, last + k) };
                phi[g] = p;
                normal[g] = d;
                tangent[g] = t;
            }
        }
    }
}

/// Fills the ghost layers of one padded array by degree-4 extrapolation;
/// rows first, then full columns.
pub fn extrapolate_array(grid: &Grid2D, data: &mut [f64]) {
    let gw = grid.ghost_width;
    let last = gw + grid.n - 1;
    let weights: Vec<[f64; TANGENT_POINTS]> = (1..=gw).map(|k| lagrange_weights(-(k as f64))).collect();
    let apply = |w: &[f64; TANGENT_POINTS], pick: &dyn Fn(usize) -> f64| {
        (0..TANGENT_POINTS).map(|m| w[m] * pick(m)).sum::<f64>()
    };

    for j in grid.interior_range() {
        for (k, w) in weights.iter().enumerate() {
            let k = k + 1;
            let lo = apply(w, &|m| data[grid.idx(gw + m, j)]);
            let hi = apply(w, &|m| data[grid.idx(last - m, j)]);
            data[grid.idx(gw - k, j)] = lo;
            data[grid.idx(last + k, j)] = hi;
        }
    }
    for i in 0..grid.stride() {
        for (k, w) in weights.iter().enumerate() {
            let k = k + 1;
            let lo = apply(w, &|m| data[grid.idx(i, gw + m)]);
            let hi = apply(w, &|m| data[grid.idx(i, last - m)]);
            data[grid.idx(i, gw - k)] = lo;
            data[grid.idx(i, last + k)] = hi;
        }
    }
}
