mod common;

use common::SplitMix;
use hj_sweep::grid::GammaKind;
use hj_sweep::hamiltonian::{NumericalHamiltonian, WaveBranch};
use hj_sweep::problems::{elastic_hamiltonian, exact_solution, make_problem, ProblemId, QUASI_SV_STIFFNESS};
use hj_sweep::{Approach, HjError};

/// Central-difference gradient with step `e`.
fn gradient(g: &dyn Fn(f64, f64) -> f64, x: f64, y: f64, e: f64) -> (f64, f64) {
    ((g(x + e, y) - g(x - e, y)) / (2.0 * e), (g(x, y + e) - g(x, y - e)) / (2.0 * e))
}

/// Gradient where `g` is smooth at `(x, y)`: two step sizes must agree.
fn smooth_gradient(g: &dyn Fn(f64, f64) -> f64, x: f64, y: f64) -> Option<(f64, f64)> {
    let (a, b) = (gradient(g, x, y, 1e-5), gradient(g, x, y, 5e-6));
    let scale = 1.0 + a.0.abs() + a.1.abs();
    ((a.0 - b.0).abs() + (a.1 - b.1).abs() < 1e-7 * scale).then_some(b)
}

#[test]
fn closed_forms_satisfy_their_equations() {
    let mut rng = SplitMix(31);
    for id in ProblemId::ALL.into_iter().filter(|id| id.has_closed_form()) {
        let (spec, _) = make_problem(id, 40).unwrap();
        let exact = spec.exact.clone().unwrap();
        let ham = &spec.hamiltonian;
        let [x0, x1, y0, y1] = spec.bounds;
        let (mut checked, mut worst) = (0, 0.0f64);
        for _ in 0..2000 {
            let (x, y) = (rng.uniform(x0, x1), rng.uniform(y0, y1));
            if spec.gamma.distance(x, y) < 1e-3 {
                continue;
            }
            let Some((p, q)) = smooth_gradient(&*exact, x, y) else { continue };
            let f = (ham.f)(x, y);
            worst = worst.max((ham.hamiltonian.value(p, q) - f).abs() / f.abs().max(1.0));
            checked += 1;
        }
        assert!(checked > 1000, "{id}: only {checked} smooth samples");
        assert!(worst < 1e-6, "{id}: residual {worst:e}");
    }
}

#[test]
fn rhs_derivatives_match_difference_quotients() {
    let mut rng = SplitMix(32);
    for id in ProblemId::ALL {
        let (spec, _) = make_problem(id, 40).unwrap();
        let ham = &spec.hamiltonian;
        let [x0, x1, y0, y1] = spec.bounds;
        let mut checked = 0;
        for _ in 0..500 {
            let (x, y) = (rng.uniform(x0, x1), rng.uniform(y0, y1));
            let Some((gx, gy)) = smooth_gradient(&*ham.f, x, y) else { continue };
            let tol = 1e-6 * (1.0 + gx.abs() + gy.abs());
            assert!(((ham.fx)(x, y) - gx).abs() < tol && ((ham.fy)(x, y) - gy).abs() < tol, "{id} ({x},{y})");
            checked += 1;
        }
        assert!(checked > 250, "{id}: only {checked} smooth samples");
    }
}

#[test]
fn prescriptions_agree_with_closed_forms() {
    let mut rng = SplitMix(33);
    for id in ProblemId::ALL.into_iter().filter(|id| id.has_closed_form()) {
        let (spec, _) = make_problem(id, 80).unwrap();
        let exact = spec.exact.clone().unwrap();
        let [x0, x1, y0, y1] = spec.bounds;
        for _ in 0..500 {
            let (x, y) = (rng.uniform(x0, x1), rng.uniform(y0, y1));
            let [phi, u, v] = (spec.prescribe)(x, y);
            assert!((phi - exact(x, y)).abs() < 1e-13, "{id}");
            if let Some((p, q)) = smooth_gradient(&*exact, x, y) {
                let tol = 1e-6 * (1.0 + p.abs() + q.abs());
                assert!((u - p).abs() < tol && (v - q).abs() < tol, "{id} ({x},{y}): ({u},{v}) vs ({p},{q})");
            }
        }
    }
}

#[test]
fn catalogue_entries() {
    let (spec, grid) = make_problem(ProblemId::Ex1, 40).unwrap();
    assert_eq!(spec.bounds, [-1.0, 1.0, -1.0, 1.0]);
    assert_eq!(spec.gamma.kind(), GammaKind::PointSet);
    assert_eq!(spec.gamma.distance(0.0, 0.0), 0.0);
    assert_eq!(spec.hamiltonian.kind, NumericalHamiltonian::EikonalGodunov);
    assert_eq!(grid.n, 40);

    let (spec, _) = make_problem(ProblemId::Ex6a, 160).unwrap();
    assert_eq!(spec.default_config(Approach::One).weights.epsilon, 1e-4);

    let (spec, _) = make_problem(ProblemId::Ex7sv, 80).unwrap();
    assert_eq!(spec.hamiltonian.kind, NumericalHamiltonian::LaxFriedrichs);
    assert_eq!(QUASI_SV_STIFFNESS, [15.90, 6.21, 4.82, 4.00]);
    let sv = elastic_hamiltonian(WaveBranch::QuasiSv);
    for (p, q) in [(0.3, 0.7), (-1.0, 0.4)] {
        assert_eq!(spec.hamiltonian.hamiltonian.value(p, q), hj_sweep::hamiltonian::Hamiltonian::value(&sv, p, q));
    }

    assert_eq!(spec.default_config(Approach::Two).omega, 0.9);
    let (spec, _) = make_problem(ProblemId::Ex7p, 80).unwrap();
    assert_eq!(spec.default_config(Approach::One).omega, 1.2);
    let (spec, _) = make_problem(ProblemId::Ex6b, 80).unwrap();
    assert_eq!(spec.default_config(Approach::One).delta_tol, 1e-12);

    assert!(matches!(make_problem(ProblemId::Ex1, 39), Err(HjError::Config(_))));
    assert!(matches!("ex9".parse::<ProblemId>(), Err(HjError::UnknownProblem(_))));
}

#[test]
fn exact_values() {
    assert!((exact_solution(ProblemId::Ex1, 0.0, 0.0).unwrap() + 2.0).abs() < 1e-15);
    assert!((exact_solution(ProblemId::Ex2, 1.0, 0.0).unwrap() - 0.5).abs() < 1e-15);
    assert!((exact_solution(ProblemId::Ex6b, 0.5, 0.5).unwrap() - 2.0).abs() < 1e-15);
    assert!(matches!(exact_solution(ProblemId::Ex7p, 0.1, 0.1), Err(HjError::NoClosedForm(_))));
}

#[test]
fn error_masks() {
    let (ex2, _) = make_problem(ProblemId::Ex2, 40).unwrap();
    assert!(!ex2.in_error_mask(0.0, 0.0));
    assert!(!ex2.in_error_mask(0.95, 0.0));
    assert!(ex2.in_error_mask(0.5, 0.3));
    let (ex5, _) = make_problem(ProblemId::Ex5, 40).unwrap();
    assert!(!ex5.in_error_mask(0.3, 0.3));
    assert!(ex5.in_error_mask(-1.0, 0.3));
    let (ex7sv, _) = make_problem(ProblemId::Ex7sv, 40).unwrap();
    assert!(!ex7sv.in_error_mask(0.1, 0.5));
    assert!(ex7sv.in_error_mask(0.3, 0.5));
}
