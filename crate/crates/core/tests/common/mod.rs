//! Independent oracles shared by the integration tests and the acceptance run.
#![allow(dead_code)]

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
pub fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&p, &q| a[p][col].abs().total_cmp(&a[q][col].abs())).unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    x
}

/// Monomial coefficients (in `ξ = (x - x_i)/h`) of the polynomial matching
/// values at `nodes` and slopes (`h·φ'`) at `slope_nodes`.
pub fn hermite_coefficients(nodes: &[(f64, f64)], slope_nodes: &[(f64, f64)]) -> Vec<f64> {
    let m = nodes.len() + slope_nodes.len();
    let mut a = Vec::with_capacity(m);
    let mut b = Vec::with_capacity(m);
    for &(t, val) in nodes {
        a.push((0..m).map(|k| t.powi(k as i32)).collect());
        b.push(val);
    }
    for &(t, slope) in slope_nodes {
        a.push((0..m).map(|k| if k == 0 { 0.0 } else { k as f64 * t.powi(k as i32 - 1) }).collect());
        b.push(slope);
    }
    solve_dense(a, b)
}

/// Derivative of order `order` (in `ξ`) of `Σ c_k ξ^k` at `t`.
pub fn poly_derivative(c: &[f64], order: usize, t: f64) -> f64 {
    c.iter()
        .enumerate()
        .skip(order)
        .map(|(k, &ck)| {
            let falling: f64 = (0..order).map(|q| (k - q) as f64).product();
            ck * falling * t.powi((k - order) as i32)
        })
        .sum()
}

const GAUSS5: [(f64, f64); 5] = [
    (0.0, 0.568_888_888_888_888_9),
    (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
    (0.906_179_845_938_664, 0.236_926_885_056_189_1),
];

/// `Σ_{α=2}^{r} ∫_{x_{i-1/2}}^{x_{i+1/2}} h^{2α-3} (d^α p/dx^α)² dx` for `p`
/// given in `ξ`; five-point Gauss-Legendre is exact up to degree 9.
pub fn indicator(c: &[f64], r: usize, h: f64) -> f64 {
    (2..=r)
        .map(|alpha| {
            // d^α/dx^α = h^{-α} d^α/dξ^α and dx = h dξ
            let scale = h.powi(2 * alpha as i32 - 3) * h.powi(-2 * alpha as i32) * h;
            let integral: f64 = GAUSS5
                .iter()
                .map(|&(s, w)| {
                    let d = poly_derivative(c, alpha, 0.5 * s);
                    0.5 * w * d * d
                })
                .sum();
            scale * integral
        })
        .sum()
}

/// Oracle smoothness indicators for a minus-side stencil
/// `φ_{i-2..i+1}`, `u_{i-1}`, `u_{i+1}`.
pub fn minus_indicators(phi: [f64; 4], du: [f64; 2], h: f64) -> [f64; 3] {
    let [pm2, pm1, p0, p1] = phi;
    let big = hermite_coefficients(&[(-2.0, pm2), (-1.0, pm1), (0.0, p0), (1.0, p1)], &[(-1.0, h * du[0]), (1.0, h * du[1])]);
    let left = hermite_coefficients(&[(-2.0, pm2), (-1.0, pm1), (0.0, p0)], &[]);
    let centre = hermite_coefficients(&[(-1.0, pm1), (0.0, p0), (1.0, p1)], &[]);
    [indicator(&big, 5, h), indicator(&left, 2, h), indicator(&centre, 2, h)]
}

/// Oracle smoothness indicators for a plus-side stencil
/// `φ_{i-1..i+2}`, `u_{i-1}`, `u_{i+1}`.
pub fn plus_indicators(phi: [f64; 4], du: [f64; 2], h: f64) -> [f64; 3] {
    let [pm1, p0, p1, p2] = phi;
    let big = hermite_coefficients(&[(-1.0, pm1), (0.0, p0), (1.0, p1), (2.0, p2)], &[(-1.0, h * du[0]), (1.0, h * du[1])]);
    let centre = hermite_coefficients(&[(-1.0, pm1), (0.0, p0), (1.0, p1)], &[]);
    let right = hermite_coefficients(&[(0.0, p0), (1.0, p1), (2.0, p2)], &[]);
    [indicator(&big, 5, h), indicator(&centre, 2, h), indicator(&right, 2, h)]
}

/// Small deterministic generator (SplitMix64) so oracle sweeps are reproducible.
pub struct SplitMix(pub u64);

impl SplitMix {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
}

/// `Σ c_k x^k` and its first two derivatives at `x`.
pub fn poly_eval(c: &[f64], x: f64) -> [f64; 3] {
    [0, 1, 2].map(|order| {
        c.iter()
            .enumerate()
            .skip(order)
            .map(|(k, &ck)| {
                let falling: f64 = (0..order).map(|q| (k - q) as f64).product();
                ck * falling * x.powi((k - order) as i32)
            })
            .sum()
    })
}

/// Random polynomial of the given degree with coefficients in `[-1, 1]`.
pub fn random_poly(rng: &mut SplitMix, degree: usize) -> Vec<f64> {
    (0..=degree).map(|_| rng.uniform(-1.0, 1.0)).collect()
}

/// Minus-side (`φ_{i-2..i+1}`) or plus-side (`φ_{i-1..i+2}`) samples of a
/// polynomial around `x0`, with `φ'` at `x_{i-1}` and `x_{i+1}`.
pub fn sample_stencil(c: &[f64], x0: f64, h: f64, minus: bool) -> ([f64; 4], [f64; 2]) {
    let first = if minus { -2.0 } else { -1.0 };
    let phi = std::array::from_fn(|m| poly_eval(c, x0 + (first + m as f64) * h)[0]);
    let du = [poly_eval(c, x0 - h)[1], poly_eval(c, x0 + h)[1]];
    (phi, du)
}

/// Nonlinear weights written straight from their definition:
/// `ω̄_n = γ_n (1 + τ / (ε + β_n))`, `τ = ((|β1-β2| + |β1-β3|)/2)²`.
pub fn weights_oracle(beta: [f64; 3], gamma: [f64; 3], eps: f64) -> [f64; 3] {
    let tau = (((beta[0] - beta[1]).abs() + (beta[0] - beta[2]).abs()) / 2.0).powi(2);
    let raw: Vec<f64> = (0..3).map(|n| gamma[n] * (1.0 + tau / (eps + beta[n]))).collect();
    let s: f64 = raw.iter().sum();
    [raw[0] / s, raw[1] / s, raw[2] / s]
}

/// Value at `t` of the polynomial through `(k, values[k])`, `k = 0..len`,
/// by a Vandermonde solve.
pub fn lagrange_oracle(values: &[f64], t: f64) -> f64 {
    let m = values.len();
    let a = (0..m).map(|k| (0..m).map(|p| (k as f64).powi(p as i32)).collect()).collect();
    let c = solve_dense(a, values.to_vec());
    c.iter().enumerate().map(|(p, cp)| cp * t.powi(p as i32)).sum()
}

/// `(w_x)^∓` from the sextic through four `φ` values and `w = φ'` at
/// `x_{i-1}, x_i, x_{i+1}`.
pub fn second_derivative_oracle(phi: [f64; 4], du: [f64; 3], h: f64, minus: bool) -> f64 {
    let first = if minus { -2.0 } else { -1.0 };
    let nodes: Vec<(f64, f64)> = (0..4).map(|m| (first + m as f64, phi[m])).collect();
    let slopes = [(-1.0, h * du[0]), (0.0, h * du[1]), (1.0, h * du[2])];
    let c = hermite_coefficients(&nodes, &slopes);
    poly_derivative(&c, 2, 0.0) / (h * h)
}
