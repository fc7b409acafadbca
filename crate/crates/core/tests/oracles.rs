//! Reference values checked against independent computations: brute-force
//! index expansions, closed forms, Simpson integration and ODE solutions.

use std::f64::consts::{FRAC_1_SQRT_2, LN_2, PI};

use approx::assert_abs_diff_eq;
use revival::linalg::pauli;
use revival::measures::{bell_diagonal_concurrence, bell_weights, pure_concurrence};
use revival::noise::dephasing::ou_noise_state;
use revival::noise::random_field::{field_unitary, gaussian_averaged_map, random_field_map};
use revival::noise::stroboscopic::{stroboscopic_state, StroboscopicParams};
use revival::noise::telegraph::{rtn_coherence, rtn_concurrence, rtn_mc_coherence_series};
use revival::noise::{static_noise_state, RTNParams, RandomFieldParams, StaticNoiseParams};
use revival::tripartite::{embed_initial, evolve_abe, ube_unitary};
use revival::*;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn reference_xyz() -> DensityOperator {
    xyz_state(&XYZParams::new(1.0, 0.9, 1.0).unwrap())
}

#[test]
fn tensor_product_matches_index_expansion() {
    let y = pauli::y();
    let yy = tensor_product(&y, &y);
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    let expected = y[(i, j)] * y[(k, l)];
                    assert_eq!(yy[(2 * i + k, 2 * j + l)], expected);
                }
            }
        }
    }
    // σy⊗σy is the real anti-diagonal (-1, 1, 1, -1)
    assert_eq!(yy[(0, 3)], c(-1.0, 0.0));
    assert_eq!(yy[(1, 2)], c(1.0, 0.0));
}

#[test]
fn reference_state_spectrum_and_entropy() {
    let ev = hermitian_eigenvalues(reference_xyz().matrix()).unwrap();
    for (got, want) in ev.iter().zip([0.9, 0.1, 0.0, 0.0]) {
        assert_abs_diff_eq!(*got, want, epsilon = 1e-12);
    }
    let s = von_neumann_entropy(&reference_xyz(), LogBase::Natural);
    assert_abs_diff_eq!(s, -0.9 * 0.9f64.ln() - 0.1 * 0.1f64.ln(), epsilon = 1e-12);
    assert_abs_diff_eq!(s, 0.3251, epsilon = 1e-4);
}

#[test]
fn field_unitary_closed_forms() {
    let minus_ix = pauli::x().scale(c(0.0, -1.0));
    let plus_ix = pauli::x().scale(c(0.0, 1.0));
    assert!(field_unitary(PI / 2.0, 1.0, PI).max_abs_diff(&minus_ix) < 1e-15);
    assert!(field_unitary(-PI / 2.0, 1.0, PI).max_abs_diff(&plus_ix) < 1e-15);
    let minus_id = ComplexSquareMatrix::identity(2).scale_real(-1.0);
    assert!(field_unitary(PI / 2.0, 1.0, 2.0 * PI).max_abs_diff(&minus_id) < 1e-15);
}

#[test]
fn sharp_field_reference_concurrences() {
    let p = RandomFieldParams::new(1.0, 0.0).unwrap();
    let rho0 = reference_xyz();
    // at Ωt = π both branches are σx up to phase: a local unitary
    assert_abs_diff_eq!(
        concurrence(&random_field_map(&rho0, &p, PI).unwrap()).unwrap(),
        0.8,
        epsilon = 1e-12
    );
    assert_abs_diff_eq!(
        concurrence(&random_field_map(&rho0, &p, PI / 2.0).unwrap()).unwrap(),
        0.0,
        epsilon = 1e-12
    );
    // ρ₀(1, 0.9, 1) = 0.9|2+⟩⟨2+| + 0.1|2-⟩⟨2-|: Bell-diagonal formula gives 2·0.9 - 1
    assert_abs_diff_eq!(
        bell_diagonal_concurrence(&bell_weights(&rho0)),
        0.8,
        epsilon = 1e-12
    );
}

/// Composite Simpson rule over the normalized Rabi density.
fn simpson_average(rho0: &DensityOperator, p: &RandomFieldParams, t: f64) -> ComplexSquareMatrix {
    let s = std::f64::consts::SQRT_2 * p.width();
    let (lo, hi, n) = (p.rabi() - 12.0 * s, p.rabi() + 12.0 * s, 6000);
    let h = (hi - lo) / n as f64;
    let mut acc = ComplexSquareMatrix::zeros(4);
    for k in 0..=n {
        let w = match k {
            0 => 1.0,
            k if k == n => 1.0,
            k if k % 2 == 1 => 4.0,
            _ => 2.0,
        };
        let omega = lo + h * k as f64;
        let density = (-(omega - p.rabi()).powi(2) / (4.0 * p.width().powi(2))).exp()
            / (2.0 * p.width() * PI.sqrt());
        let sharp = RandomFieldParams::new(1.0, 0.0).unwrap();
        let m = random_field_map(rho0, &sharp, omega * t).unwrap();
        acc = &acc + &m.matrix().scale_real(w * h / 3.0 * density);
    }
    acc
}

#[test]
fn gaussian_average_matches_simpson_integration() {
    let p = RandomFieldParams::new(1.0, 0.1).unwrap();
    let rho0 = reference_xyz();
    for t in [0.0, 1.3, 4.0, 11.0, 25.0] {
        let got = gaussian_averaged_map(&rho0, &p, t, 64).unwrap();
        assert!(
            got.matrix().max_abs_diff(&simpson_average(&rho0, &p, t)) < 1e-8,
            "t = {t}"
        );
    }
}

#[test]
fn gaussian_average_matches_characteristic_function() {
    // ρ₀ = |00⟩⟨00|: the evolved |00⟩ population is (1 + cos Ω_g t)/2
    let rho0 = DensityOperator::pure(
        &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
        vec![2, 2],
    )
    .unwrap();
    let (rabi, width) = (1.0, 0.1);
    let p = RandomFieldParams::new(rabi, width).unwrap();
    for k in 0..=80 {
        let t = 8.0 * PI * k as f64 / 80.0;
        let got = gaussian_averaged_map(&rho0, &p, t, 64).unwrap().matrix()[(0, 0)];
        let want = 0.5 * (1.0 + (rabi * t).cos() * (-(width * t).powi(2)).exp());
        assert!(
            (got.re - want).abs() < 1e-8 && got.im.abs() < 1e-12,
            "t = {t}"
        );
    }
}

#[test]
fn static_noise_closed_form() {
    let p = StaticNoiseParams::static_noise(1.0, Some(4.0)).unwrap();
    for t in [0.5, 2.0, 4.0, 5.0, 7.0, 8.0] {
        let (rho, _) = static_noise_state(BellLabel::TwoPlus, &p, t, 64).unwrap();
        let want = if t <= 4.0 {
            (-t * t / 2.0f64).exp()
        } else {
            (-(t - 8.0f64).powi(2) / 2.0).exp()
        };
        assert_abs_diff_eq!(concurrence(&rho).unwrap(), want, epsilon = 1e-8);
    }
}

/// RK4 solution of `q'' + 2γq' + v²q = 0`, `q(0) = 1`, `q'(0) = 0`.
fn coherence_ode(rate: f64, coupling: f64, t: f64) -> f64 {
    let n = 20_000;
    let h = t / n as f64;
    let f = |x: f64, y: f64| (y, -2.0 * rate * y - coupling * coupling * x);
    let (mut x, mut y) = (1.0, 0.0);
    for _ in 0..n {
        let k1 = f(x, y);
        let k2 = f(x + 0.5 * h * k1.0, y + 0.5 * h * k1.1);
        let k3 = f(x + 0.5 * h * k2.0, y + 0.5 * h * k2.1);
        let k4 = f(x + h * k3.0, y + h * k3.1);
        x += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        y += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
    }
    x
}

#[test]
fn telegraph_coherence_solves_its_ode() {
    for g in [0.5, 1.0, 1.1, 2.0, 5.0] {
        let p = RTNParams::new(0.7, 0.7 * g).unwrap();
        for t in [0.5, 3.0, 9.0] {
            assert_abs_diff_eq!(
                rtn_coherence(&p, t),
                coherence_ode(0.7, 0.7 * g, t),
                epsilon = 1e-9
            );
        }
    }
}

#[test]
fn telegraph_crossover_position_from_sampling() {
    // With γ as the flip rate, g = 1 is critically damped: no zero of q.
    // Under the other convention (correlation rate γ) the same g would
    // oscillate, and sampled coherence would cross zero near γt ≈ 3.6.
    let p = RTNParams::from_ratio(1.0).unwrap();
    let grid: Vec<f64> = (0..=20).map(|k| 0.5 * k as f64).collect();
    let mc = rtn_mc_coherence_series(&p, &grid, 20_000, 77).unwrap();
    for (t, est) in grid.iter().zip(&mc) {
        assert!(
            (est.mean - rtn_coherence(&p, *t)).abs() < 4.0 * est.stderr + 1e-12,
            "t = {t}"
        );
        assert!(est.mean > -3.0 * est.stderr);
    }
}

#[test]
fn telegraph_concurrence_reference_values() {
    let ewl = EWLParams::new(0.91, c(FRAC_1_SQRT_2, 0.0), Excitation::One).unwrap();
    let p = RTNParams::from_ratio(5.0).unwrap();
    assert_abs_diff_eq!(
        rtn_concurrence(&ewl, &p, 0.0),
        2.0 * (0.455 - 0.0225),
        epsilon = 1e-12
    );
    // C = 0 exactly when |q| ≤ 0.09 / (4 · 0.455)
    let threshold = 0.09 / (4.0 * 0.455);
    assert_abs_diff_eq!(threshold, 0.04945, epsilon = 1e-5);
    for k in 0..=1000 {
        let t = 0.01 * k as f64;
        let q = rtn_coherence(&p, t).abs();
        let conc = rtn_concurrence(&ewl, &p, t);
        if q < threshold - 1e-12 {
            assert_eq!(conc, 0.0);
        } else if q > threshold + 1e-12 {
            assert!(conc > 0.0);
        }
    }
}

#[test]
fn ou_static_limit_agrees_with_quadrature() {
    let p = StaticNoiseParams::new(1.0, None, 5000.0).unwrap();
    let stat = StaticNoiseParams::static_noise(1.0, None).unwrap();
    for t in [1.0, 2.0] {
        let est = ou_noise_state(BellLabel::OneMinus, &p, t, 4000, 5).unwrap();
        let (exact, _) = static_noise_state(BellLabel::OneMinus, &stat, t, 64).unwrap();
        let got = concurrence(&est.state).unwrap();
        let se = est.stderr(concurrence).unwrap();
        assert!(
            (got - concurrence(&exact).unwrap()).abs() < 3.0 * se,
            "t = {t}: {got} ± {se}"
        );
    }
}

#[test]
fn ou_noise_free_is_exact() {
    let p = StaticNoiseParams::new(0.0, Some(2.0), 10.0).unwrap();
    let est = ou_noise_state(BellLabel::OnePlus, &p, 5.0, 1000, 1).unwrap();
    assert_abs_diff_eq!(concurrence(&est.state).unwrap(), 1.0, epsilon = 1e-12);
}

#[test]
fn stroboscopic_static_phases_follow_gaussian_decay() {
    // μ = 1: after k steps the phase is k·x with x ~ N(0, σ²), so C_k = e^{-k²σ²/2}
    let p = StroboscopicParams::new(0.4, 1.0, 10_000, None, 3).unwrap();
    for k in 1..=4 {
        let est = stroboscopic_state(BellLabel::OneMinus, &p, k).unwrap();
        let got = concurrence(&est.state).unwrap();
        let se = est.stderr(concurrence).unwrap();
        let want = (-(k as f64 * 0.4).powi(2) / 2.0).exp();
        assert!(
            (got - want).abs() < 4.0 * se,
            "step {k}: {got} vs {want} ± {se}"
        );
    }
}

#[test]
fn dilation_blocks_and_entropy_additivity() {
    let p = RandomFieldParams::new(1.0, 0.0).unwrap();
    let u = ube_unitary(&p, PI);
    for b in 0..2 {
        for b2 in 0..2 {
            assert!((u[(2 * b, 2 * b2)] - pauli::x()[(b, b2)] * c(0.0, -1.0)).norm() < 1e-15);
            assert!(
                (u[(2 * b + 1, 2 * b2 + 1)] - pauli::x()[(b, b2)] * c(0.0, 1.0)).norm() < 1e-15
            );
        }
    }
    let s0 = embed_initial(&reference_xyz()).unwrap();
    let s_ab = von_neumann_entropy(&reference_xyz(), LogBase::Natural);
    assert_abs_diff_eq!(
        von_neumann_entropy(s0.state(), LogBase::Natural),
        s_ab + LN_2,
        epsilon = 1e-12
    );
}

#[test]
fn bell_diagonal_marginals_of_the_dilation_stay_white() {
    let p = RandomFieldParams::new(1.0, 0.0).unwrap();
    let s0 = embed_initial(&reference_xyz()).unwrap();
    let white = DensityOperator::maximally_mixed(vec![2, 2]);
    for t in [0.3, 1.2, 2.9, 5.0] {
        let s = evolve_abe(&s0, &p, t, 64).unwrap();
        let be = s.state().partial_trace(&[1, 2]).unwrap();
        assert!(be.matrix().max_abs_diff(white.matrix()) < 1e-12);
        assert!(mutual_information(&be, &[0], &[1]).unwrap().abs() < 1e-12);
    }
}

#[test]
fn pure_state_concurrence_examples() {
    let bell = bell_state(BellLabel::TwoMinus);
    assert_abs_diff_eq!(pure_concurrence(&bell), 1.0, epsilon = 1e-15);
    let product = [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
    assert_eq!(pure_concurrence(&product), 0.0);
}
